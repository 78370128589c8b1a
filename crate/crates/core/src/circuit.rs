//! Circuit intermediate representation: ordered layers of gates with
//! pairwise disjoint supports (Jordan-Wigner strings included), greedy
//! layer packing, application to states and registers, and a line-oriented
//! text serialization.
//!
//! # Serialization format
//!
//! One gate per line: `KIND site-list params...`, with layers separated by
//! a line containing only `---`. A header line `sites N` gives the site
//! count; `#` starts a comment. Kinds and arities:
//!
//! ```text
//! TUN  i j      t1 t2 t3     tunneling
//! INT  i j      theta        interaction
//! DT   i j k    t1 t2        density-dependent tunneling
//! PT   i j k l  t1 t2        pair tunneling
//! NPH  i        theta        number phase
//! RX   q        theta        qubit x rotation
//! RZ   q        theta        qubit z rotation
//! CINT c i j    theta        qubit-controlled interaction
//! CTUN c i j    t1 t2 t3     qubit-controlled tunneling
//! ```

use crate::error::CoreError;
use crate::fock::StateVector;
use crate::gates::GateSpec;
use crate::register::MixedRegister;
use std::fmt::Write as _;

/// Sites a gate occupies for parallel-scheduling purposes. Hopping gates
/// claim the whole index interval they span, since their Jordan-Wigner
/// strings touch every mode in between; diagonal gates and qubit
/// rotations claim only their own sites.
pub fn string_support(gate: &GateSpec) -> Vec<usize> {
    match *gate {
        GateSpec::Tunneling { .. }
        | GateSpec::DensityTunneling { .. }
        | GateSpec::PairTunneling { .. } => {
            let s = gate.support();
            let lo = *s.iter().min().unwrap();
            let hi = *s.iter().max().unwrap();
            (lo..=hi).collect()
        }
        // the control qubit never enters Jordan-Wigner strings; only
        // the fermionic pair claims its index interval
        GateSpec::ControlledTunneling { control, i, j, .. } => {
            let mut s: Vec<usize> = (i.min(j)..=i.max(j)).collect();
            if !s.contains(&control) {
                s.push(control);
            }
            s
        }
        _ => gate.support(),
    }
}

/// Ordered layers of gates; gates within a layer have disjoint supports.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    layers: Vec<Vec<GateSpec>>,
}

impl Circuit {
    pub fn new() -> Self {
        Circuit { layers: Vec::new() }
    }

    pub fn layers(&self) -> &[Vec<GateSpec>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    /// Gate counts keyed by kind token.
    pub fn counts_by_kind(&self) -> Vec<(&'static str, usize)> {
        let mut counts: Vec<(&'static str, usize)> = Vec::new();
        for g in self.gates() {
            match counts.iter_mut().find(|(k, _)| *k == g.kind_name()) {
                Some((_, c)) => *c += 1,
                None => counts.push((g.kind_name(), 1)),
            }
        }
        counts
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateSpec> {
        self.layers.iter().flatten()
    }

    fn disjoint_from_layer(layer: &[GateSpec], gate: &GateSpec) -> bool {
        let s = string_support(gate);
        layer
            .iter()
            .all(|g| string_support(g).iter().all(|x| !s.contains(x)))
    }

    /// Append a gate with as-soon-as-possible packing: it lands in the
    /// first layer after the last one whose supports (with strings)
    /// conflict with it. Hopping past non-conflicting gates is sound
    /// because disjoint supports commute.
    pub fn push(&mut self, gate: GateSpec) -> Result<(), CoreError> {
        gate.validate()?;
        let mut slot = self.layers.len();
        while slot > 0 && Self::disjoint_from_layer(&self.layers[slot - 1], &gate) {
            slot -= 1;
        }
        if slot == self.layers.len() {
            self.layers.push(vec![gate]);
        } else {
            self.layers[slot].push(gate);
        }
        Ok(())
    }

    /// First-fit packing: the gate lands in the earliest layer whose
    /// supports are disjoint from it, even if later layers conflict.
    /// Only sound when the caller may reorder its gates freely (e.g.
    /// the terms of a single Trotter step, where any product ordering
    /// is an equally valid first-order approximant).
    pub fn pack_commuting(&mut self, gate: GateSpec) -> Result<(), CoreError> {
        gate.validate()?;
        for layer in &mut self.layers {
            if Self::disjoint_from_layer(layer, &gate) {
                layer.push(gate);
                return Ok(());
            }
        }
        self.layers.push(vec![gate]);
        Ok(())
    }

    /// Append a gate in a fresh layer (no packing).
    pub fn push_new_layer(&mut self, gate: GateSpec) -> Result<(), CoreError> {
        gate.validate()?;
        self.layers.push(vec![gate]);
        Ok(())
    }

    /// Append an explicit layer, rejecting overlapping supports.
    pub fn push_layer(&mut self, gates: Vec<GateSpec>) -> Result<(), CoreError> {
        let mut claimed: Vec<usize> = Vec::new();
        for g in &gates {
            g.validate()?;
            for s in string_support(g) {
                if claimed.contains(&s) {
                    return Err(CoreError::Invalid(format!(
                        "layer gates overlap at site {s}"
                    )));
                }
                claimed.push(s);
            }
        }
        if !gates.is_empty() {
            self.layers.push(gates);
        }
        Ok(())
    }

    /// Concatenate another circuit's layers after this one's.
    pub fn extend(&mut self, other: &Circuit) {
        self.layers.extend(other.layers.iter().cloned());
    }

    /// Apply to a plain fermionic state (gates must all be fermionic).
    pub fn apply(&self, state: &mut StateVector) -> Result<(), CoreError> {
        for g in self.gates() {
            g.apply(state)?;
        }
        Ok(())
    }

    /// Apply to a mixed fermion-qubit register.
    pub fn apply_mixed(&self, reg: &mut MixedRegister) -> Result<(), CoreError> {
        for g in self.gates() {
            reg.apply(g)?;
        }
        Ok(())
    }

    /// Serialize to the line format documented at module level.
    pub fn to_text(&self, site_count: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sites {site_count}");
        for (n, layer) in self.layers.iter().enumerate() {
            if n > 0 {
                out.push_str("---\n");
            }
            for g in layer {
                out.push_str(g.kind_name());
                for s in g.support() {
                    let _ = write!(out, " {s}");
                }
                for p in g.params() {
                    let _ = write!(out, " {p:.17e}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// Parse the line format. Returns the circuit and the declared site
    /// count (inferred from gate supports when no `sites` header exists).
    pub fn from_text(text: &str) -> Result<(Self, usize), CoreError> {
        let mut circuit = Circuit::new();
        let mut current: Vec<GateSpec> = Vec::new();
        let mut declared_sites: Option<usize> = None;
        let mut max_site = 0usize;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "---" {
                if !current.is_empty() {
                    circuit.layers.push(std::mem::take(&mut current));
                }
                continue;
            }
            let mut tok = line.split_whitespace();
            let head = tok.next().unwrap();
            if head == "sites" {
                let n = tok
                    .next()
                    .ok_or_else(|| CoreError::parse(ln + 1, "missing site count"))?
                    .parse::<usize>()
                    .map_err(|e| CoreError::parse(ln + 1, e))?;
                declared_sites = Some(n);
                continue;
            }
            let (n_sites, n_params) = match head {
                "TUN" => (2, 3),
                "INT" => (2, 1),
                "DT" => (3, 2),
                "PT" => (4, 2),
                "NPH" => (1, 1),
                "RX" | "RZ" => (1, 1),
                "CINT" => (3, 1),
                "CTUN" => (3, 3),
                other => {
                    return Err(CoreError::parse(ln + 1, format!("unknown gate kind {other:?}")))
                }
            };
            let rest: Vec<&str> = tok.collect();
            if rest.len() != n_sites + n_params {
                return Err(CoreError::parse(
                    ln + 1,
                    format!(
                        "{head} expects {n_sites} sites and {n_params} params, got {} fields",
                        rest.len()
                    ),
                ));
            }
            let sites: Vec<usize> = rest[..n_sites]
                .iter()
                .map(|s| s.parse::<usize>().map_err(|e| CoreError::parse(ln + 1, e)))
                .collect::<Result<_, _>>()?;
            let params: Vec<f64> = rest[n_sites..]
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| CoreError::parse(ln + 1, e)))
                .collect::<Result<_, _>>()?;
            max_site = max_site.max(*sites.iter().max().unwrap());
            let gate = match head {
                "TUN" => GateSpec::Tunneling {
                    i: sites[0],
                    j: sites[1],
                    theta: [params[0], params[1], params[2]],
                },
                "INT" => GateSpec::Interaction {
                    i: sites[0],
                    j: sites[1],
                    theta: params[0],
                },
                "DT" => GateSpec::DensityTunneling {
                    i: sites[0],
                    j: sites[1],
                    k: sites[2],
                    theta: [params[0], params[1]],
                },
                "PT" => GateSpec::PairTunneling {
                    i: sites[0],
                    j: sites[1],
                    k: sites[2],
                    l: sites[3],
                    theta: [params[0], params[1]],
                },
                "NPH" => GateSpec::NumberPhase {
                    i: sites[0],
                    theta: params[0],
                },
                "RX" => GateSpec::QubitRx {
                    site: sites[0],
                    theta: params[0],
                },
                "RZ" => GateSpec::QubitRz {
                    site: sites[0],
                    theta: params[0],
                },
                "CINT" => GateSpec::ControlledInteraction {
                    control: sites[0],
                    i: sites[1],
                    j: sites[2],
                    theta: params[0],
                },
                "CTUN" => GateSpec::ControlledTunneling {
                    control: sites[0],
                    i: sites[1],
                    j: sites[2],
                    theta: [params[0], params[1], params[2]],
                },
                _ => unreachable!(),
            };
            gate.validate().map_err(|e| CoreError::parse(ln + 1, e))?;
            current.push(gate);
        }
        if !current.is_empty() {
            circuit.layers.push(current);
        }
        let sites = declared_sites.unwrap_or(max_site + 1);
        if max_site >= sites {
            return Err(CoreError::ModeOutOfRange {
                index: max_site,
                mode_count: sites,
            });
        }
        Ok((circuit, sites))
    }

    /// Validate structural layer disjointness (used by tests and loaders).
    pub fn check_layer_disjointness(&self) -> Result<(), CoreError> {
        for layer in &self.layers {
            let mut claimed: Vec<usize> = Vec::new();
            for g in layer {
                for s in string_support(g) {
                    if claimed.contains(&s) {
                        return Err(CoreError::Invalid(format!(
                            "layer gates overlap at site {s}"
                        )));
                    }
                    claimed.push(s);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockBasis;
    use crate::linalg;
    
    use std::sync::Arc;

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new();
        c.push(GateSpec::Tunneling {
            i: 0,
            j: 1,
            theta: [0.3, -1.2, 0.456789],
        })
        .unwrap();
        c.push(GateSpec::Interaction {
            i: 2,
            j: 3,
            theta: 1.0 / 3.0,
        })
        .unwrap();
        c.push(GateSpec::PairTunneling {
            i: 0,
            j: 1,
            k: 2,
            l: 3,
            theta: [0.7, 0.1],
        })
        .unwrap();
        c.push(GateSpec::NumberPhase { i: 1, theta: -2.5 }).unwrap();
        c.push(GateSpec::DensityTunneling {
            i: 0,
            j: 2,
            k: 3,
            theta: [1.1, std::f64::consts::PI],
        })
        .unwrap();
        c
    }

    #[test]
    fn greedy_packing_uses_disjoint_layers() {
        let c = sample_circuit();
        // TUN(0,1) and INT(2,3) share a layer; the PT, NPH and DT gates
        // each conflict with the previous layer's string supports
        assert_eq!(c.layers()[0].len(), 2);
        assert_eq!(c.depth(), 4);
        c.check_layer_disjointness().unwrap();
    }

    #[test]
    fn string_support_covers_interval() {
        let g = GateSpec::Tunneling {
            i: 0,
            j: 3,
            theta: [1.0, 0.0, 0.0],
        };
        assert_eq!(string_support(&g), vec![0, 1, 2, 3]);
        let g = GateSpec::Interaction { i: 0, j: 3, theta: 1.0 };
        assert_eq!(string_support(&g), vec![0, 3]);
    }

    #[test]
    fn round_trip_serialization() {
        let c = sample_circuit();
        let text = c.to_text(4);
        let (c2, sites) = Circuit::from_text(&text).unwrap();
        assert_eq!(sites, 4);
        assert_eq!(c.depth(), c2.depth());
        let gates1: Vec<_> = c.gates().cloned().collect();
        let gates2: Vec<_> = c2.gates().cloned().collect();
        assert_eq!(gates1, gates2);
        // and the re-serialization is bit-identical
        assert_eq!(text, c2.to_text(4));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Circuit::from_text("sites 4\nBOGUS 0 1 0.5").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let err = Circuit::from_text("TUN 0 1 0.5").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        assert!(Circuit::from_text("sites 2\nTUN 0 5 1 0 0").is_err());
    }

    #[test]
    fn comments_and_mixed_gates_parse() {
        let text = "# header\nsites 5\nRX 4 1.5  # rotate ancilla\nCTUN 4 0 2 0.4 0.1 0.0\n---\nCINT 4 1 2 3.14\n";
        let (c, sites) = Circuit::from_text(text).unwrap();
        assert_eq!(sites, 5);
        assert_eq!(c.gate_count(), 3);
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn layer_gates_commute() {
        // gates packed into one layer must commute: check numerically
        let b = FockBasis::full(4).unwrap();
        let g1 = GateSpec::Tunneling {
            i: 0,
            j: 1,
            theta: [0.9, 0.2, -0.4],
        };
        let g2 = GateSpec::Interaction { i: 2, j: 3, theta: 1.3 };
        let u1 = g1.dense_unitary(&b).unwrap();
        let u2 = g2.dense_unitary(&b).unwrap();
        assert!(linalg::fro_norm(&(&u1 * &u2 - &u2 * &u1)) < 1e-12);
    }

    #[test]
    fn apply_matches_gate_sequence() {
        let b = FockBasis::build(4, Some(2)).unwrap();
        let c = sample_circuit();
        let mut s1 = StateVector::basis_state(Arc::clone(&b), 0b0011).unwrap();
        c.apply(&mut s1).unwrap();
        let mut s2 = StateVector::basis_state(Arc::clone(&b), 0b0011).unwrap();
        for g in c.gates() {
            g.apply(&mut s2).unwrap();
        }
        let d: f64 = s1
            .amplitudes()
            .iter()
            .zip(s2.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>();
        assert!(d < 1e-28);
        assert!((s1.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn push_layer_rejects_overlap() {
        let mut c = Circuit::new();
        let res = c.push_layer(vec![
            GateSpec::Tunneling {
                i: 0,
                j: 2,
                theta: [1.0, 0.0, 0.0],
            },
            GateSpec::NumberPhase { i: 1, theta: 0.5 },
        ]);
        assert!(res.is_err());
    }

    #[test]
    fn counts_by_kind_tallies() {
        let c = sample_circuit();
        let counts = c.counts_by_kind();
        let get = |k: &str| counts.iter().find(|(n, _)| *n == k).map(|(_, c)| *c);
        assert_eq!(get("TUN"), Some(1));
        assert_eq!(get("PT"), Some(1));
        assert_eq!(get("RZ"), None);
        assert_eq!(c.gate_count(), 5);
    }

    #[test]
    fn serialized_params_survive_exactly() {
        // f64 round-trip through the %.17e formatting
        let mut c = Circuit::new();
        let theta = [std::f64::consts::PI, 1.0 / 3.0, -1e-17];
        c.push(GateSpec::Tunneling { i: 0, j: 1, theta }).unwrap();
        let (c2, _) = Circuit::from_text(&c.to_text(2)).unwrap();
        let first = c2.gates().next().unwrap().clone();
        match first {
            GateSpec::Tunneling { theta: t2, .. } => assert_eq!(theta, t2),
            _ => panic!(),
        }
    }
}
