//! Small dense Levenberg-Marquardt (damped Gauss-Newton) used by the
//! saturation, spectral-peak and CW-g² fits.
//!
//! Deterministic by construction: fixed iteration budget, fixed damping
//! schedule, central-difference Jacobian with caller-supplied parameter
//! scales. Damping multiplies `diag(JᵀJ)` so fits are equivariant under a
//! rescaling of the data.

use crate::error::{Error, Result};

pub struct FitProblem<'a> {
    /// Fills the residual vector for the given parameters.
    pub residuals: &'a dyn Fn(&[f64], &mut Vec<f64>),
    /// Initial parameter guess.
    pub init: Vec<f64>,
    /// Characteristic magnitude of each parameter (finite-difference steps
    /// and convergence checks are relative to these).
    pub scales: Vec<f64>,
    /// Box bounds, applied by clamping after each step.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub params: Vec<f64>,
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const MAX_ITERATIONS: usize = 200;

pub fn levenberg_marquardt(problem: &FitProblem) -> Result<FitOutcome> {
    let n = problem.init.len();
    assert_eq!(problem.scales.len(), n);
    assert_eq!(problem.lower.len(), n);
    assert_eq!(problem.upper.len(), n);

    let clamp = |p: &mut [f64]| {
        for i in 0..n {
            p[i] = p[i].clamp(problem.lower[i], problem.upper[i]);
        }
    };

    let mut params = problem.init.clone();
    clamp(&mut params);

    let mut resid = Vec::new();
    (problem.residuals)(&params, &mut resid);
    let m = resid.len();
    if m < n {
        return Err(Error::parameter(format!(
            "{m} residuals cannot constrain {n} parameters"
        )));
    }
    let mut cost = 0.5 * resid.iter().map(|r| r * r).sum::<f64>();

    let mut lambda = 1e-3;
    let mut jac = vec![0.0; m * n];
    let mut scratch_hi = Vec::new();
    let mut scratch_lo = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..MAX_ITERATIONS {
        iterations = iter + 1;

        // central-difference Jacobian
        for j in 0..n {
            let h = 1e-6 * (params[j].abs() + 1e-3 * problem.scales[j].abs()).max(1e-300);
            let mut phi = params.clone();
            phi[j] += h;
            let mut plo = params.clone();
            plo[j] -= h;
            (problem.residuals)(&phi, &mut scratch_hi);
            (problem.residuals)(&plo, &mut scratch_lo);
            for i in 0..m {
                jac[i * n + j] = (scratch_hi[i] - scratch_lo[i]) / (2.0 * h);
            }
        }

        // normal equations
        let mut jtj = vec![0.0; n * n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                let ja = jac[i * n + a];
                jtr[a] += ja * resid[i];
                for b in a..n {
                    jtj[a * n + b] += ja * jac[i * n + b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                jtj[a * n + b] = jtj[b * n + a];
            }
        }

        let grad_norm = jtr.iter().map(|g| g * g).sum::<f64>().sqrt();
        if grad_norm == 0.0 {
            converged = true;
            break;
        }

        let mut accepted = false;
        for _ in 0..25 {
            // damped system: (JᵀJ + λ diag(JᵀJ)) δ = Jᵀr
            let mut a_mat = jtj.clone();
            for d in 0..n {
                let diag = jtj[d * n + d];
                a_mat[d * n + d] = diag + lambda * diag.max(1e-300);
            }
            let delta = match cholesky_solve(n, &a_mat, &jtr) {
                Some(d) => d,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let mut trial = params.clone();
            for j in 0..n {
                trial[j] -= delta[j];
            }
            clamp(&mut trial);
            let mut trial_resid = Vec::new();
            (problem.residuals)(&trial, &mut trial_resid);
            let trial_cost = 0.5 * trial_resid.iter().map(|r| r * r).sum::<f64>();
            if trial_cost.is_finite() && trial_cost <= cost {
                let step_small = (0..n).all(|j| {
                    (trial[j] - params[j]).abs()
                        <= 1e-10 * (params[j].abs() + problem.scales[j].abs())
                });
                let cost_drop = cost - trial_cost;
                params = trial;
                resid = trial_resid;
                cost = trial_cost;
                lambda = (lambda / 3.0).max(1e-14);
                accepted = true;
                if step_small || cost_drop <= 1e-14 * cost.max(1e-300) {
                    converged = true;
                }
                break;
            }
            lambda *= 5.0;
        }

        if !accepted {
            // damping saturated without an acceptable step: local minimum
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }

    Ok(FitOutcome {
        residual_rms: (2.0 * cost / m as f64).sqrt(),
        params,
        iterations,
        converged,
    })
}

/// Solves the SPD system `a x = b` (row-major, n ≤ a few dozen).
pub fn cholesky_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_exponential_decay() {
        // y = 3.2 * exp(-x / 7.5), noiseless
        let xs: Vec<f64> = (0..40).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 3.2 * (-x / 7.5).exp()).collect();
        let problem = FitProblem {
            residuals: &|p, out| {
                out.clear();
                for (x, y) in xs.iter().zip(&ys) {
                    out.push(p[0] * (-x / p[1]).exp() - y);
                }
            },
            init: vec![1.0, 3.0],
            scales: vec![1.0, 3.0],
            lower: vec![0.0, 1e-6],
            upper: vec![f64::INFINITY, f64::INFINITY],
        };
        let fit = levenberg_marquardt(&problem).unwrap();
        assert_relative_eq!(fit.params[0], 3.2, max_relative = 1e-8);
        assert_relative_eq!(fit.params[1], 7.5, max_relative = 1e-8);
        assert!(fit.residual_rms < 1e-9);
    }

    #[test]
    fn respects_bounds() {
        let problem = FitProblem {
            residuals: &|p, out| {
                out.clear();
                out.push(p[0] - 10.0);
                out.push(p[0] - 12.0);
            },
            init: vec![0.5],
            scales: vec![1.0],
            lower: vec![0.0],
            upper: vec![5.0],
        };
        let fit = levenberg_marquardt(&problem).unwrap();
        assert_relative_eq!(fit.params[0], 5.0, epsilon = 1e-12);
    }

    #[test]
    fn cholesky_matches_direct_inverse() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let b = [1.0, 2.0];
        let x = cholesky_solve(2, &a, &b).unwrap();
        // solve by hand: det = 11, x = (1/11)*(3*1-1*2, -1*1+4*2)
        assert_relative_eq!(x[0], 1.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(x[1], 7.0 / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_underdetermined() {
        let problem = FitProblem {
            residuals: &|_, out| {
                out.clear();
                out.push(0.0);
            },
            init: vec![1.0, 1.0],
            scales: vec![1.0, 1.0],
            lower: vec![-1.0, -1.0],
            upper: vec![1.0, 1.0],
        };
        assert!(levenberg_marquardt(&problem).is_err());
    }
}
