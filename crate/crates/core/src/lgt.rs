//! Z2 lattice gauge theory on a mixed fermion-qubit register: matter
//! fermions on sites, gauge spins on links,
//! H = lambda_E sum sigma^x_l + lambda_B sum_plaquette prod sigma^z
//!   + lambda_J sum_links (c†_x sigma^z_l c_y + h.c.)
//!   + lambda_m sum_x (-1)^{s_x} n_x,
//! together with the Gauss-law operators
//! V_x = (-1)^{n_x} prod_{l incident to x} sigma^x_l and a
//! constant-depth Trotter step over the extended gate set.
//!
//! Register layout: matter site x is fermionic register site x; link l
//! is qubit register site matter_count + l. The spin convention
//! follows the register module: sigma^z |1> = +|1>,
//! sigma^z |1~> = -|1~>.
//!
//! The dressed hopping exp(-i a (c†_x sigma^z c_y + h.c.)) splits
//! exactly into an unconditional tunneling gate (the sigma^z = -1
//! branch) and a controlled tunneling correction on the sigma^z = +1
//! branch, because same-axis tunneling generators add. The magnetic
//! plaquette phase uses the standard parity-ladder: CNOTs built from
//! the interaction gate at pi conjugated by single-qubit rotations
//! (an exact identity, global phase one, in this convention) fold the
//! four-link parity onto one link, a Z rotation applies the phase,
//! and the ladder is undone.

use crate::circuit::Circuit;
use crate::error::CoreError;
use crate::fock::LadderTerm;
use crate::gates::GateSpec;
use crate::register::{MixedRegister, SiteKind};
use crate::C64;
use nalgebra::DMatrix;
use std::f64::consts::{FRAC_PI_2, PI};

/// Energy coefficients of the four terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct LgtCouplings {
    /// Electric field, sigma^x per link.
    pub lambda_e: f64,
    /// Magnetic plaquette, product of sigma^z around each plaquette.
    pub lambda_b: f64,
    /// Gauge-matter hopping.
    pub lambda_j: f64,
    /// Staggered mass.
    pub lambda_m: f64,
}

/// Lattice geometry plus couplings.
#[derive(Debug, Clone)]
pub struct LgtModel {
    matter_count: usize,
    links: Vec<(usize, usize)>,
    plaquettes: Vec<[usize; 4]>,
    /// Staggered sign exponent s_x per matter site.
    staggered: Vec<u8>,
    pub couplings: LgtCouplings,
}

impl LgtModel {
    pub fn new(
        matter_count: usize,
        links: Vec<(usize, usize)>,
        plaquettes: Vec<[usize; 4]>,
        staggered: Vec<u8>,
        couplings: LgtCouplings,
    ) -> Result<Self, CoreError> {
        if matter_count == 0 {
            return Err(CoreError::Invalid("lattice needs at least one site".into()));
        }
        if staggered.len() != matter_count || staggered.iter().any(|&s| s > 1) {
            return Err(CoreError::Invalid(
                "staggered signs must supply one 0/1 value per site".into(),
            ));
        }
        let mut incident = vec![0usize; matter_count];
        for &(x, y) in &links {
            if x >= matter_count || y >= matter_count {
                return Err(CoreError::ModeOutOfRange {
                    index: x.max(y),
                    mode_count: matter_count,
                });
            }
            if x == y {
                return Err(CoreError::RepeatedIndex { index: x });
            }
            incident[x] += 1;
            incident[y] += 1;
        }
        if let Some(x) = incident.iter().position(|&c| c == 0) {
            return Err(CoreError::Invalid(format!("site {x} has no incident link")));
        }
        for p in &plaquettes {
            let mut degree = vec![0usize; matter_count];
            for &l in p {
                let (x, y) = *links.get(l).ok_or(CoreError::ModeOutOfRange {
                    index: l,
                    mode_count: links.len(),
                })?;
                degree[x] += 1;
                degree[y] += 1;
            }
            if degree.iter().any(|&d| d != 0 && d != 2) {
                return Err(CoreError::Invalid(format!(
                    "plaquette {p:?} is not a closed loop"
                )));
            }
        }
        Ok(Self {
            matter_count,
            links,
            plaquettes,
            staggered,
            couplings,
        })
    }

    /// Square plaquette: 4 matter sites on the corners, 4 links on the
    /// edges, staggered signs by coordinate parity.
    pub fn single_plaquette(couplings: LgtCouplings) -> Self {
        Self::new(
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![[0, 1, 2, 3]],
            vec![0, 1, 0, 1],
            couplings,
        )
        .expect("static geometry is valid")
    }

    pub fn matter_count(&self) -> usize {
        self.matter_count
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn plaquettes(&self) -> &[[usize; 4]] {
        &self.plaquettes
    }

    /// Register site carrying link l's gauge qubit.
    pub fn link_site(&self, l: usize) -> usize {
        self.matter_count + l
    }

    pub fn site_kinds(&self) -> Vec<SiteKind> {
        let mut kinds = vec![SiteKind::FermionicMode; self.matter_count];
        kinds.extend(std::iter::repeat(SiteKind::Qubit).take(self.links.len()));
        kinds
    }

    /// Fresh register for this lattice.
    pub fn register(&self, particle_number: Option<usize>) -> Result<MixedRegister, CoreError> {
        MixedRegister::new(self.site_kinds(), particle_number)
    }

    fn check_register(&self, reg: &MixedRegister) -> Result<(), CoreError> {
        if reg.site_kinds() != self.site_kinds().as_slice() {
            return Err(CoreError::Invalid(
                "register layout does not match lattice".into(),
            ));
        }
        Ok(())
    }

    /// Dense Gauss-law operator V_x on the register.
    pub fn gauss_operator(&self, reg: &MixedRegister, x: usize) -> Result<DMatrix<C64>, CoreError> {
        self.check_register(reg)?;
        if x >= self.matter_count {
            return Err(CoreError::ModeOutOfRange {
                index: x,
                mode_count: self.matter_count,
            });
        }
        let basis = reg.basis();
        let block = 1usize << reg.qubit_count();
        let dim = reg.dim();
        let flip: usize = self
            .links
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == x || b == x)
            .map(|(l, _)| 1usize << l)
            .sum();
        let mut v = DMatrix::<C64>::zeros(dim, dim);
        for f in 0..basis.dim() {
            let sign = if basis.state(f) >> x & 1 == 1 { -1.0 } else { 1.0 };
            for q in 0..block {
                v[(f * block + (q ^ flip), f * block + q)] = C64::from(sign);
            }
        }
        Ok(v)
    }

    /// Dense Hamiltonian on the register; oracle for the Trotter step.
    pub fn dense(&self, reg: &MixedRegister) -> Result<DMatrix<C64>, CoreError> {
        self.check_register(reg)?;
        let basis = reg.basis();
        let block = 1usize << reg.qubit_count();
        let dim = reg.dim();
        if dim > crate::fock::DENSE_LIMIT {
            return Err(CoreError::DimensionLimit {
                dim,
                limit: crate::fock::DENSE_LIMIT,
            });
        }
        let zval = |q: usize, l: usize| if q >> l & 1 == 1 { 1.0 } else { -1.0 };
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        for f in 0..basis.dim() {
            let mask = basis.state(f);
            for q in 0..block {
                let row = f * block + q;
                // electric: flips one link spin
                for l in 0..self.links.len() {
                    h[(f * block + (q ^ (1 << l)), row)] += C64::from(self.couplings.lambda_e);
                }
                // magnetic and mass: diagonal
                let mut diag = 0.0;
                for p in &self.plaquettes {
                    diag += self.couplings.lambda_b * p.iter().map(|&l| zval(q, l)).product::<f64>();
                }
                for x in 0..self.matter_count {
                    if mask >> x & 1 == 1 {
                        let s = if self.staggered[x] == 1 { -1.0 } else { 1.0 };
                        diag += self.couplings.lambda_m * s;
                    }
                }
                h[(row, row)] += C64::from(diag);
                // dressed hopping
                for (l, &(x, y)) in self.links.iter().enumerate() {
                    for term in [
                        LadderTerm::one_body(x, y, C64::from(self.couplings.lambda_j)),
                        LadderTerm::one_body(y, x, C64::from(self.couplings.lambda_j)),
                    ] {
                        if let Some((img, sign)) = term.apply_to_mask(mask) {
                            let g = basis.index_of(img).expect("hopping stays in sector");
                            h[(g * block + q, row)] +=
                                C64::from(self.couplings.lambda_j * sign * zval(q, l));
                        }
                    }
                }
            }
        }
        Ok(h)
    }

    /// CNOT (flip `target` when `control` is |1>) from the interaction
    /// gate at pi conjugated by single-qubit rotations; exact with
    /// global phase one in this convention.
    fn cnot(&self, control: usize, target: usize, out: &mut Vec<GateSpec>) {
        out.push(GateSpec::QubitRz {
            site: target,
            theta: FRAC_PI_2,
        });
        out.push(GateSpec::QubitRx {
            site: target,
            theta: -FRAC_PI_2,
        });
        out.push(GateSpec::Interaction {
            i: control,
            j: target,
            theta: PI,
        });
        out.push(GateSpec::QubitRx {
            site: target,
            theta: FRAC_PI_2,
        });
        out.push(GateSpec::QubitRz {
            site: target,
            theta: -FRAC_PI_2,
        });
    }

    /// One first-order Trotter step exp(-i H dt), split per term in
    /// the order mass, electric, hopping, magnetic.
    pub fn trotter_step(&self, dt: f64) -> Result<Circuit, CoreError> {
        let mut circuit = Circuit::new();
        // mass: diagonal number phases
        if self.couplings.lambda_m != 0.0 {
            for x in 0..self.matter_count {
                let s = if self.staggered[x] == 1 { -1.0 } else { 1.0 };
                circuit.push(GateSpec::NumberPhase {
                    i: x,
                    theta: self.couplings.lambda_m * s * dt,
                })?;
            }
        }
        // electric: X rotations on the link spins
        if self.couplings.lambda_e != 0.0 {
            for l in 0..self.links.len() {
                circuit.push(GateSpec::QubitRx {
                    site: self.link_site(l),
                    theta: 2.0 * self.couplings.lambda_e * dt,
                })?;
            }
        }
        // dressed hopping: unconditional branch plus controlled
        // correction, emitted color by color of a greedy edge coloring
        // so links sharing a matter site land in different layers and
        // the depth stays constant for fixed lattice coordination
        if self.couplings.lambda_j != 0.0 {
            let a = self.couplings.lambda_j * dt;
            let mut color = vec![usize::MAX; self.links.len()];
            for l in 0..self.links.len() {
                let (x, y) = self.links[l];
                let used: Vec<usize> = (0..l)
                    .filter(|&m| {
                        let (p, q) = self.links[m];
                        p == x || p == y || q == x || q == y
                    })
                    .map(|m| color[m])
                    .collect();
                color[l] = (0..).find(|c| !used.contains(c)).unwrap();
            }
            let mut order: Vec<usize> = (0..self.links.len()).collect();
            order.sort_by_key(|&l| color[l]);
            for l in order {
                let (x, y) = self.links[l];
                circuit.push(GateSpec::Tunneling {
                    i: x,
                    j: y,
                    theta: [-2.0 * a, 0.0, 0.0],
                })?;
                circuit.push(GateSpec::ControlledTunneling {
                    control: self.link_site(l),
                    i: x,
                    j: y,
                    theta: [4.0 * a, 0.0, 0.0],
                })?;
            }
        }
        // magnetic: parity ladder onto the last link of each plaquette
        if self.couplings.lambda_b != 0.0 {
            for p in &self.plaquettes {
                let mut seq = Vec::new();
                let t = self.link_site(p[3]);
                for &l in &p[..3] {
                    self.cnot(self.link_site(l), t, &mut seq);
                }
                seq.push(GateSpec::QubitRz {
                    site: t,
                    theta: -2.0 * self.couplings.lambda_b * dt,
                });
                for &l in p[..3].iter().rev() {
                    self.cnot(self.link_site(l), t, &mut seq);
                }
                for g in seq {
                    circuit.push(g)?;
                }
            }
        }
        Ok(circuit)
    }
}
