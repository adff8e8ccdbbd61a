use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// SPSA gain sequences `a_k = a / (A + k + 1)^α`, `c_k = c / (k + 1)^γ`.
///
/// With `calibration_samples > 0`, `a` is read as the target size of the
/// first update and rescaled by the mean `|f(θ+cΔ) − f(θ−cΔ)|` over that
/// many random directions before the first iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub calibration_samples: usize,
}

impl Default for SpsaGains {
    fn default() -> Self {
        SpsaGains {
            a: 0.628,
            c: 0.1,
            big_a: 0.0,
            alpha: 0.602,
            gamma: 0.101,
            calibration_samples: 25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spsa,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iterations: usize,
    pub spsa: SpsaGains,
    /// Simplex stops when the spread of function values falls below this.
    pub simplex_tol: f64,
    /// Simplex evaluation budget per restart.
    pub max_evaluations: usize,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn simplex() -> Self {
        OptimizerConfig {
            method: Method::Simplex,
            max_iterations: 200,
            spsa: SpsaGains::default(),
            simplex_tol: 1e-8,
            max_evaluations: 200_000,
            seed: 0,
        }
    }

    pub fn spsa(seed: u64) -> Self {
        OptimizerConfig {
            method: Method::Spsa,
            seed,
            ..Self::simplex()
        }
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self::simplex()
    }
}

/// Simultaneous-perturbation stochastic approximation with symmetric
/// Bernoulli ±1 perturbations. Returns the final iterate.
pub fn spsa_minimize(
    mut objective: impl FnMut(&[f64]) -> f64,
    theta0: &[f64],
    config: &OptimizerConfig,
) -> Vec<f64> {
    let mut theta = theta0.to_vec();
    let n = theta.len();
    if n == 0 {
        return theta;
    }
    let mut g = config.spsa;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    let mut delta = vec![0.0; n];
    if g.calibration_samples > 0 {
        let mut spread = 0.0;
        for _ in 0..g.calibration_samples {
            for i in 0..n {
                delta[i] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                plus[i] = theta[i] + g.c * delta[i];
                minus[i] = theta[i] - g.c * delta[i];
            }
            spread += (objective(&plus) - objective(&minus)).abs();
        }
        spread /= g.calibration_samples as f64;
        if spread > 0.0 && spread.is_finite() {
            g.a = g.a * 2.0 * g.c * (g.big_a + 1.0) / spread;
        }
    }
    for k in 0..config.max_iterations {
        let ak = g.a / (g.big_a + k as f64 + 1.0).powf(g.alpha);
        let ck = g.c / (k as f64 + 1.0).powf(g.gamma);
        for i in 0..n {
            delta[i] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            plus[i] = theta[i] + ck * delta[i];
            minus[i] = theta[i] - ck * delta[i];
        }
        let diff = objective(&plus) - objective(&minus);
        for i in 0..n {
            theta[i] -= ak * diff / (2.0 * ck * delta[i]);
        }
    }
    theta
}

/// Outcome of a deterministic minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Adaptive Nelder–Mead, restarted from the best point until a restart no
/// longer improves the value by more than `tol`. The starting point is
/// evaluated first, so the result never exceeds `f(x0)`.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_evaluations: usize,
) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut best_x = x0.to_vec();
    let mut best = eval(&best_x, &mut evals);
    if n == 0 {
        return Minimum {
            x: best_x,
            value: best,
            evaluations: evals,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut converged = false;
    for _restart in 0..20 {
        let start_value = best;
        let mut pts: Vec<Vec<f64>> = vec![best_x.clone()];
        let mut vals = vec![best];
        for i in 0..n {
            let mut p = best_x.clone();
            p[i] += step;
            vals.push(eval(&p, &mut evals));
            pts.push(p);
        }
        let mut inner_converged = false;
        while evals < max_evaluations {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            pts = order.iter().map(|&i| pts[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();
            let size = pts[1..]
                .iter()
                .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if vals[n] - vals[0] <= tol && size <= 1e-6 {
                inner_converged = true;
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|j| pts[..n].iter().map(|p| p[j]).sum::<f64>() / nf)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&pts[n])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < vals[0] {
                let xe = along(beta);
                let fe = eval(&xe, &mut evals);
                if fe < fr {
                    pts[n] = xe;
                    vals[n] = fe;
                } else {
                    pts[n] = xr;
                    vals[n] = fr;
                }
            } else if fr < vals[n - 1] {
                pts[n] = xr;
                vals[n] = fr;
            } else {
                let (xc, fc) = if fr < vals[n] {
                    let xc = along(gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < vals[n].min(fr) {
                    pts[n] = xc;
                    vals[n] = fc;
                } else {
                    for i in 1..=n {
                        let p: Vec<f64> = pts[0]
                            .iter()
                            .zip(&pts[i])
                            .map(|(b, x)| b + delta * (x - b))
                            .collect();
                        vals[i] = eval(&p, &mut evals);
                        pts[i] = p;
                    }
                }
            }
        }
        let i_best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty");
        if vals[i_best] < best {
            best = vals[i_best];
            best_x = pts[i_best].clone();
        }
        if evals >= max_evaluations {
            break;
        }
        if inner_converged && start_value - best <= tol {
            converged = true;
            break;
        }
    }
    Minimum {
        x: best_x,
        value: best,
        evaluations: evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn spsa_zero_dim() {
        let out = spsa_minimize(|_| panic!("not called"), &[], &OptimizerConfig::spsa(0));
        assert!(out.is_empty());
    }

    #[test]
    fn spsa_quadratic() {
        let out = spsa_minimize(quad, &[1.0, 1.0], &OptimizerConfig::spsa(3));
        assert!(quad(&out).sqrt() < 0.05, "{out:?}");
    }

    #[test]
    fn spsa_noisy_quadratic() {
        use rand_distr::{Distribution, Normal};
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let noise = Normal::new(0.0, 0.01).unwrap();
            let f = |x: &[f64]| quad(x) + noise.sample(&mut rng);
            let out = spsa_minimize(f, &[1.0, 1.0], &OptimizerConfig::spsa(seed));
            assert!(quad(&out).sqrt() < 0.2, "seed {seed}: {out:?}");
        }
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(rosen, &[-1.2, 1.0], 0.1, 1e-14, 100_000);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{m:?}");
    }

    #[test]
    fn nelder_mead_never_worse_than_start() {
        let m = nelder_mead(quad, &[0.0, 0.0, 0.0], 0.1, 1e-12, 1000);
        assert_eq!(m.value, 0.0);
    }
}
