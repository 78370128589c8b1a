//! Dense complex linear algebra helpers: scaling-and-squaring matrix
//! exponential, Hermitian eigensolver wrappers, and phase-insensitive
//! unitary distances. These are the oracles the closed-form gate kernels
//! are tested against.

use crate::error::CoreError;
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// Frobenius norm of a complex matrix.
pub fn fro_norm(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// 1-norm (max column sum), used for scaling parameter selection.
fn one_norm(a: &DMatrix<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a [13/13] Pade
/// approximant. Accurate to ~1e-13 in the operator norm for the
/// well-conditioned skew-Hermitian generators used here.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    const THETA_13: f64 = 5.371920351148152;
    // Pade [13/13] coefficients.
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];

    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = a / C64::from(2f64.powi(s as i32));

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let id = DMatrix::<C64>::identity(n, n);

    let u_inner = &a6 * (&a6 * C64::from(B[13]) + &a4 * C64::from(B[11]) + &a2 * C64::from(B[9]))
        + &a6 * C64::from(B[7])
        + &a4 * C64::from(B[5])
        + &a2 * C64::from(B[3])
        + &id * C64::from(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * C64::from(B[12]) + &a4 * C64::from(B[10]) + &a2 * C64::from(B[8]))
        + &a6 * C64::from(B[6])
        + &a4 * C64::from(B[4])
        + &a2 * C64::from(B[2])
        + &id * C64::from(B[0]);

    let num = &v + &u;
    let den = &v - &u;
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Pade denominator must be invertible");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Max deviation from Hermiticity.
pub fn hermiticity_deviation(a: &DMatrix<C64>) -> f64 {
    let adj = a.adjoint();
    fro_norm(&(a - adj))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Each eigenvector's phase is fixed so its first nonzero component
/// (threshold 1e-12) is real and positive.
pub fn hermitian_eigen(a: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>), CoreError> {
    let dev = hermiticity_deviation(a);
    if dev > 1e-10 {
        return Err(CoreError::NotHermitian { deviation: dev });
    }
    // symmetrize to suppress roundoff before factorization
    let sym = (a + a.adjoint()) * C64::from(0.5);
    let eig = sym.symmetric_eigen();
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut vals = Vec::with_capacity(n);
    let mut vecs = DMatrix::<C64>::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[k]);
        let mut v: DVector<C64> = eig.eigenvectors.column(k).into_owned();
        fix_phase(&mut v);
        vecs.set_column(col, &v);
    }
    Ok((vals, vecs))
}

/// Deterministic phase convention: first component with |z| > 1e-12
/// becomes real positive.
pub fn fix_phase(v: &mut DVector<C64>) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12) {
        let phase = z / z.norm();
        let corr = phase.conj();
        for x in v.iter_mut() {
            *x *= corr;
        }
    }
}

/// Phase-insensitive distance min over global phase of ||U - e^{i phi} V||_F.
/// The optimal phase is tr(V† U)/|tr(V† U)|; subtracting first keeps full
/// precision near zero (the closed form sqrt(n2 - 2|tr|) loses half the
/// significant digits there).
pub fn phase_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
    assert_eq!(u.shape(), v.shape());
    let tr: C64 = (v.adjoint() * u).trace();
    let phase = if tr.norm() < 1e-300 {
        C64::from(1.0)
    } else {
        tr / tr.norm()
    };
    fro_norm(&(u - v * phase))
}

/// ||U U† - I||_F, a unitarity check.
pub fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    fro_norm(&(prod - DMatrix::<C64>::identity(n, n)))
}

/// Phase-insensitive distance between two state vectors: sqrt(2 - 2|<a|b>|).
pub fn state_distance(a: &[C64], b: &[C64]) -> f64 {
    let ov: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (2.0 - 2.0 * ov.norm()).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.0, 1.0),
            C64::new(0.0, -2.0),
        ]));
        let e = expm(&a);
        assert!((e[(0, 0)] - C64::new(0.0, 1.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - C64::new(0.0, -2.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn expm_pauli_x() {
        // exp(-i (pi/2) X) = -i X
        let x = DMatrix::from_row_slice(2, 2, &[C64::from(0.0), C64::from(1.0), C64::from(1.0), C64::from(0.0)]);
        let gen = x * C64::new(0.0, -std::f64::consts::FRAC_PI_2);
        let e = expm(&gen);
        assert!((e[(0, 1)] - C64::new(0.0, -1.0)).norm() < 1e-13);
        assert!(e[(0, 0)].norm() < 1e-13);
    }

    #[test]
    fn expm_matches_taylor_on_random() {
        let n = 6;
        let mut rng = 1234u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut h = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = C64::new(next(), next());
            }
        }
        let h = (&h + h.adjoint()) * C64::from(0.5);
        let a = &h * C64::new(0.0, -0.3);
        let e = expm(&a);
        // Taylor reference
        let mut term = DMatrix::<C64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = (&term * &a) / C64::from(k as f64);
            sum += &term;
        }
        assert!(fro_norm(&(e - sum)) < 1e-12);
    }

    #[test]
    fn hermitian_eigen_2x2() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[C64::from(0.0), C64::from(1.0), C64::from(1.0), C64::from(0.0)],
        );
        let (vals, vecs) = hermitian_eigen(&a).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // ground vector (1,-1)/sqrt(2) with first component positive
        assert!((vecs[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((vecs[(1, 0)].re + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let u = DMatrix::<C64>::identity(3, 3);
        let v = &u * C64::from_polar(1.0, 0.7);
        assert!(phase_distance(&u, &v) < 1e-14);
    }
}
