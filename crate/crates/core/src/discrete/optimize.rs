//! Derivative-free minimisation for the interval-length polish.

/// Nelder–Mead settings.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    pub initial_step: f64,
    pub f_tol: f64,
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 4000,
            initial_step: 0.25,
            f_tol: 1e-14,
            restarts: 2,
        }
    }
}

impl NelderMead {
    /// Minimises `f` from `x0`, stopping early once `f <= stop_below`.
    /// Returns the best point and value.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], stop_below: f64) -> (Vec<f64>, f64) {
        let mut best_x = x0.to_vec();
        let mut best_f = f(&best_x);
        let mut evals = 1;
        let mut step = self.initial_step;
        for _ in 0..=self.restarts {
            if best_f <= stop_below || evals >= self.max_evals {
                break;
            }
            let (x, v, used) = self.run(&mut f, &best_x, step, stop_below, self.max_evals - evals);
            evals += used;
            if v < best_f {
                best_f = v;
                best_x = x;
            }
            step *= 0.5;
        }
        (best_x, best_f)
    }

    fn run(
        &self,
        f: &mut impl FnMut(&[f64]) -> f64,
        x0: &[f64],
        step: f64,
        stop_below: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize) {
        let n = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let mut evals = 0;
        simplex.push((x0.to_vec(), f(x0)));
        evals += 1;
        for k in 0..n {
            let mut x = x0.to_vec();
            x[k] += if x[k].abs() > 1e-12 { step * x[k].abs().max(0.1) } else { step };
            let v = f(&x);
            evals += 1;
            simplex.push((x, v));
        }
        while evals < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let lo = simplex[0].1;
            let hi = simplex[n].1;
            if lo <= stop_below || (hi - lo).abs() <= self.f_tol * (1.0 + lo.abs()) {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };
            let xr = along(-1.0);
            let fr = f(&xr);
            evals += 1;
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = f(&xe);
                evals += 1;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < hi {
                    let x = along(-0.5);
                    let v = f(&x);
                    (x, v)
                } else {
                    let x = along(0.5);
                    let v = f(&x);
                    (x, v)
                };
                evals += 1;
                if fc < hi.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = best.iter().zip(&entry.0).map(|(b, y)| b + 0.5 * (y - b)).collect();
                        let v = f(&x);
                        *entry = (x, v);
                    }
                    evals += n;
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, v) = simplex.swap_remove(0);
        (x, v, evals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let nm = NelderMead::default();
        let (x, v) = nm.minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], f64::NEG_INFINITY);
        assert!(v < 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] + 2.0).abs() < 1e-4);
    }

    #[test]
    fn nonsmooth_max() {
        let nm = NelderMead::default();
        let (_, v) = nm.minimize(|x| (x[0] - 0.3).abs().max((x[1] - 0.7).abs()), &[0.5, 0.5], f64::NEG_INFINITY);
        assert!(v < 1e-6);
    }

    #[test]
    fn early_stop() {
        let nm = NelderMead::default();
        let mut calls = 0;
        let (_, v) = nm.minimize(
            |x| {
                calls += 1;
                x[0] * x[0]
            },
            &[1.0],
            0.5,
        );
        assert!(v <= 0.5);
        assert!(calls < 50);
    }
}
