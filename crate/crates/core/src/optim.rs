//! Derivative-free and finite-difference optimizers: Nelder-Mead simplex
//! minimization and a Levenberg-Marquardt least-squares solver with
//! numerical Jacobians. Small and deterministic on purpose — both the
//! decomposition search and the variational solver need reproducible,
//! seed-driven multi-start behavior more than raw speed.

use crate::error::CoreError;
use nalgebra::{DMatrix, DVector};

/// Options for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Initial simplex edge length per coordinate.
    pub initial_step: f64,
    /// Stop when max |f_i - f_best| over the simplex drops below this.
    pub f_tolerance: f64,
    /// Stop when the simplex diameter drops below this.
    pub x_tolerance: f64,
    /// Hard cap on function evaluations.
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            f_tolerance: 1e-12,
            x_tolerance: 1e-10,
            max_evaluations: 20_000,
        }
    }
}

/// Result of a scalar minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// True when a tolerance triggered the stop (rather than the budget).
    pub converged: bool,
}

/// Nelder-Mead downhill simplex with the standard reflection (1),
/// expansion (2), contraction (1/2), shrink (1/2) coefficients.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    options: &NelderMeadOptions,
) -> Result<MinimizeResult, CoreError> {
    let n = x0.len();
    if n == 0 {
        return Err(CoreError::Invalid("empty parameter vector".into()));
    }
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // simplex: n+1 points
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += options.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, &mut evals)).collect();

    let mut converged = false;
    while evals < options.max_evaluations {
        // order best..worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        let pts_sorted: Vec<Vec<f64>> = order.iter().map(|&i| pts[i].clone()).collect();
        let vals_sorted: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        pts = pts_sorted;
        vals = vals_sorted;

        let spread = vals[n] - vals[0];
        let diameter = pts[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&pts[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if spread < options.f_tolerance || diameter < options.x_tolerance {
            converged = true;
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < vals[0] {
            let expanded = lerp(2.0);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                pts[n] = expanded;
                vals[n] = fe;
            } else {
                pts[n] = reflected;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = reflected;
            vals[n] = fr;
        } else {
            let contracted = if fr < vals[n] { lerp(0.5) } else { lerp(-0.5) };
            let fc = eval(&contracted, &mut evals);
            if fc < vals[n].min(fr) {
                pts[n] = contracted;
                vals[n] = fc;
            } else {
                // shrink toward best
                for i in 1..=n {
                    let p: Vec<f64> = pts[i]
                        .iter()
                        .zip(&pts[0])
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    vals[i] = eval(&p, &mut evals);
                    pts[i] = p;
                }
            }
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap())
        .unwrap();
    Ok(MinimizeResult {
        x: pts[best].clone(),
        value: vals[best],
        evaluations: evals,
        converged,
    })
}

/// Options for [`levenberg_marquardt`].
#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop when the residual 2-norm drops below this.
    pub residual_tolerance: f64,
    /// Stop when the step norm drops below this.
    pub step_tolerance: f64,
    /// Central-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            residual_tolerance: 1e-12,
            step_tolerance: 1e-14,
            fd_step: 1e-6,
        }
    }
}

/// Levenberg-Marquardt on a vector residual with central-difference
/// Jacobian. Minimizes 0.5 ||r(x)||^2; returns the best point seen.
pub fn levenberg_marquardt(
    residual: &mut dyn FnMut(&[f64]) -> Vec<f64>,
    x0: &[f64],
    options: &LmOptions,
) -> Result<MinimizeResult, CoreError> {
    let n = x0.len();
    if n == 0 {
        return Err(CoreError::Invalid("empty parameter vector".into()));
    }
    let mut x = DVector::from_column_slice(x0);
    let mut evals = 0usize;
    let mut r = DVector::from_vec(residual(x.as_slice()));
    evals += 1;
    let m = r.len();
    let mut cost = r.norm();
    let mut lambda = 1e-3;
    let mut converged = cost < options.residual_tolerance;

    for _ in 0..options.max_iterations {
        if converged {
            break;
        }
        // central-difference Jacobian
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = options.fd_step * (1.0 + x[j].abs());
            let mut xp = x.clone();
            xp[j] += h;
            let mut xm = x.clone();
            xm[j] -= h;
            let rp = DVector::from_vec(residual(xp.as_slice()));
            let rm = DVector::from_vec(residual(xm.as_slice()));
            evals += 2;
            if rp.len() != m || rm.len() != m {
                return Err(CoreError::Invalid("residual length changed".into()));
            }
            jac.set_column(j, &((rp - rm) / (2.0 * h)));
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;

        let mut stepped = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for d in 0..n {
                a[(d, d)] += lambda * (jtj[(d, d)].max(1e-12));
            }
            let Some(delta) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let x_new = &x - &delta;
            let r_new = DVector::from_vec(residual(x_new.as_slice()));
            evals += 1;
            let cost_new = r_new.norm();
            if cost_new < cost {
                let step_norm = delta.norm();
                x = x_new;
                r = r_new;
                cost = cost_new;
                lambda = (lambda * 0.3).max(1e-12);
                stepped = true;
                if cost < options.residual_tolerance || step_norm < options.step_tolerance {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !stepped {
            converged = true; // stuck in a (local) minimum
            break;
        }
    }

    Ok(MinimizeResult {
        x: x.as_slice().to_vec(),
        value: cost,
        evaluations: evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn nelder_mead_solves_rosenbrock() {
        let opts = NelderMeadOptions {
            max_evaluations: 50_000,
            ..Default::default()
        };
        let res = nelder_mead(&mut rosenbrock, &[-1.2, 1.0], &opts).unwrap();
        assert!(res.converged);
        assert!((res.x[0] - 1.0).abs() < 1e-5, "{:?}", res.x);
        assert!((res.x[1] - 1.0).abs() < 1e-5, "{:?}", res.x);
    }

    #[test]
    fn nelder_mead_quadratic_exact() {
        let res = nelder_mead(
            &mut |x| x.iter().map(|v| (v - 2.0) * (v - 2.0)).sum(),
            &[0.0, 0.0, 0.0],
            &NelderMeadOptions::default(),
        )
        .unwrap();
        assert!(res.value < 1e-10, "value {}", res.value);
    }

    #[test]
    fn nelder_mead_rejects_empty() {
        assert!(nelder_mead(&mut |_| 0.0, &[], &NelderMeadOptions::default()).is_err());
    }

    #[test]
    fn lm_solves_nonlinear_fit() {
        // fit y = exp(a t) + b at a=0.7, b=-0.3
        let ts: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let data: Vec<f64> = ts.iter().map(|t| (0.7 * t).exp() - 0.3).collect();
        let mut resid = |x: &[f64]| -> Vec<f64> {
            ts.iter()
                .zip(&data)
                .map(|(t, y)| (x[0] * t).exp() + x[1] - y)
                .collect()
        };
        let res = levenberg_marquardt(&mut resid, &[0.0, 0.0], &LmOptions::default()).unwrap();
        assert!(res.value < 1e-10, "cost {}", res.value);
        assert!((res.x[0] - 0.7).abs() < 1e-7);
        assert!((res.x[1] + 0.3).abs() < 1e-7);
    }

    #[test]
    fn lm_reports_local_minimum() {
        // residual with minimum norm 1 everywhere on a circle
        let mut resid = |x: &[f64]| vec![x[0] * x[0] + 1.0];
        let res = levenberg_marquardt(&mut resid, &[0.5], &LmOptions::default()).unwrap();
        assert!(res.converged);
        assert!((res.value - 1.0).abs() < 1e-6);
    }
}
