//! Derivative-free local minimization (Nelder–Mead) used to refine grid and
//! multistart candidates. Angles are periodic, so no bounds are imposed.

#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            f_tol: 1e-9,
            max_iter: 200,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

impl NelderMead {
    pub fn minimize(&self, f: &mut impl FnMut(&[f64]) -> f64, start: &[f64]) -> Minimum {
        let n = start.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let v0 = eval(start, &mut evals);
        simplex.push((start.to_vec(), v0));
        for k in 0..n {
            let mut x = start.to_vec();
            x[k] += self.initial_step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (best, worst) = (simplex[0].1, simplex[n].1);
            if (worst - best).abs() <= self.f_tol {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|p| p.0[k]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let reflected = along(-1.0);
            let fr = eval(&reflected, &mut evals);
            if fr < best {
                let expanded = along(-2.0);
                let fe = eval(&expanded, &mut evals);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
                continue;
            }
            let (contracted, fc) = if fr < worst {
                let x = along(-0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = along(0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if fc < worst.min(fr) {
                simplex[n] = (contracted, fc);
                continue;
            }
            // shrink toward the best vertex
            let anchor = simplex[0].0.clone();
            for p in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor.iter().zip(&p.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                let v = eval(&x, &mut evals);
                *p = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            evaluations: evals,
        }
    }
}
