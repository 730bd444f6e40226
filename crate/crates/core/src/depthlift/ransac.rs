use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::correspond::Correspondence;
use crate::{Error, Result};

pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_INLIER_TOL: f64 = 0.05;

/// Scale/shift mapping relative depth `d` to metric depth `α·d + β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineDepthParams {
    pub alpha: f64,
    pub beta: f64,
    pub inlier_count: usize,
    pub residual_rms: f64,
}

impl AffineDepthParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            inlier_count: 0,
            residual_rms: 0.0,
        }
    }

    pub fn metric(&self, d: f64) -> f64 {
        self.alpha * d + self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RansacConfig {
    pub inlier_tol: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            inlier_tol: DEFAULT_INLIER_TOL,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }
}

/// Least-squares line `z = α·d + β` through `pairs`; `None` when the `d`
/// values have no spread.
pub fn least_squares_affine(pairs: &[Correspondence]) -> Option<(f64, f64)> {
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return None;
    }
    let md = pairs.iter().map(|p| p.d).sum::<f64>() / n;
    let mz = pairs.iter().map(|p| p.z).sum::<f64>() / n;
    let (mut sdd, mut sdz) = (0.0, 0.0);
    for p in pairs {
        let (dd, dz) = (p.d - md, p.z - mz);
        sdd += dd * dd;
        sdz += dd * dz;
    }
    if !(sdd > 0.0) {
        return None;
    }
    let alpha = sdz / sdd;
    Some((alpha, mz - alpha * md))
}

/// Two distinct indices drawn from iteration-specific stream `iter`, so the
/// hypothesis sequence does not depend on evaluation order.
fn sample_pair(seed: u64, iter: usize, n: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iter as u64);
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Robust fit of `z = α·d + β`: minimal two-point hypotheses, the largest
/// consensus set wins (earliest iteration on ties), then a least-squares
/// refit on that set. Hypotheses with `α ≤ 0` are rejected.
pub fn ransac_affine_fit(
    pairs: &[Correspondence],
    cfg: &RansacConfig,
) -> Result<AffineDepthParams> {
    if pairs.len() < 2 {
        return Err(Error::TooFewCorrespondences { found: pairs.len() });
    }
    if !(cfg.inlier_tol > 0.0) {
        return Err(Error::invalid("inlier tolerance must be positive"));
    }
    if pairs.iter().all(|p| p.d == pairs[0].d) {
        return Err(Error::DegenerateFit);
    }

    let count_inliers = |alpha: f64, beta: f64| {
        pairs
            .iter()
            .filter(|p| (p.z - (alpha * p.d + beta)).abs() <= cfg.inlier_tol)
            .count()
    };

    let mut best: Option<(usize, f64, f64)> = None;
    for iter in 0..cfg.iterations {
        let (a, b) = sample_pair(cfg.seed, iter, pairs.len());
        let (p, q) = (pairs[a], pairs[b]);
        if p.d == q.d {
            continue;
        }
        let alpha = (q.z - p.z) / (q.d - p.d);
        if !(alpha > 0.0) || !alpha.is_finite() {
            continue;
        }
        let beta = p.z - alpha * p.d;
        let n = count_inliers(alpha, beta);
        if best.is_none_or(|(m, _, _)| n > m) {
            best = Some((n, alpha, beta));
        }
    }
    let Some((_, h_alpha, h_beta)) = best else {
        return Err(Error::NoPositiveScale);
    };

    let inliers: Vec<Correspondence> = pairs
        .iter()
        .copied()
        .filter(|p| (p.z - (h_alpha * p.d + h_beta)).abs() <= cfg.inlier_tol)
        .collect();
    let (alpha, beta) = match least_squares_affine(&inliers) {
        Some((a, b)) if a > 0.0 => (a, b),
        _ => (h_alpha, h_beta),
    };
    let ss: f64 = inliers
        .iter()
        .map(|p| (p.z - (alpha * p.d + beta)).powi(2))
        .sum();
    Ok(AffineDepthParams {
        alpha,
        beta,
        inlier_count: inliers.len(),
        residual_rms: (ss / inliers.len() as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn line(n: usize) -> Vec<Correspondence> {
        (0..n)
            .map(|i| {
                let d = 0.37 * i as f64 + 0.1;
                Correspondence {
                    d,
                    z: 2.0 * d + 3.0,
                }
            })
            .collect()
    }

    #[test]
    fn noiseless_exact() {
        for seed in 0..5 {
            let cfg = RansacConfig {
                seed,
                ..Default::default()
            };
            let r = ransac_affine_fit(&line(40), &cfg).unwrap();
            assert!((r.alpha - 2.0).abs() < 1e-9);
            assert!((r.beta - 3.0).abs() < 1e-9);
            assert_eq!(r.inlier_count, 40);
        }
        let r = ransac_affine_fit(&line(2), &RansacConfig::default()).unwrap();
        assert!((r.alpha - 2.0).abs() < 1e-9 && (r.beta - 3.0).abs() < 1e-9);
    }

    #[test]
    fn seventy_thirty_outliers() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut pairs: Vec<Correspondence> = (0..70)
            .map(|_| {
                let d: f64 = rng.random_range(0.0..10.0);
                Correspondence {
                    d,
                    z: 2.0 * d + 3.0,
                }
            })
            .collect();
        for _ in 0..30 {
            pairs.push(Correspondence {
                d: rng.random_range(0.0..10.0),
                z: rng.random_range(0.0..30.0),
            });
        }
        let cfg = RansacConfig {
            inlier_tol: 0.05,
            iterations: 1000,
            seed: 11,
        };
        let r = ransac_affine_fit(&pairs, &cfg).unwrap();
        assert!((r.alpha - 2.0).abs() / 2.0 < 1e-3);
        assert!(r.inlier_count >= 70);
    }

    #[test]
    fn shared_depth_is_degenerate() {
        let pairs: Vec<_> = (0..10)
            .map(|i| Correspondence {
                d: 1.5,
                z: i as f64,
            })
            .collect();
        assert!(matches!(
            ransac_affine_fit(&pairs, &RansacConfig::default()),
            Err(Error::DegenerateFit)
        ));
    }

    #[test]
    fn decreasing_data_has_no_positive_scale() {
        let pairs: Vec<_> = (0..10)
            .map(|i| Correspondence {
                d: i as f64,
                z: 20.0 - i as f64,
            })
            .collect();
        assert!(matches!(
            ransac_affine_fit(&pairs, &RansacConfig::default()),
            Err(Error::NoPositiveScale)
        ));
    }

    #[test]
    fn deterministic_per_seed() {
        let mut pairs = line(50);
        pairs[3].z += 5.0;
        pairs[9].z -= 2.0;
        let cfg = RansacConfig {
            seed: 99,
            ..Default::default()
        };
        let a = ransac_affine_fit(&pairs, &cfg).unwrap();
        let b = ransac_affine_fit(&pairs, &cfg).unwrap();
        assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
        assert_eq!(a.beta.to_bits(), b.beta.to_bits());
        assert_eq!(a.residual_rms.to_bits(), b.residual_rms.to_bits());
    }
}
