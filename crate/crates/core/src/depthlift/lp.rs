//! Two-variable linear programming by randomized incremental construction.
//!
//! Constraints are inserted in a seeded random order. The current optimum is
//! kept while it satisfies the next constraint; otherwise the new optimum lies
//! on that constraint's boundary line and is found by a 1D program over the
//! constraints inserted so far. Expected running time is linear in the number
//! of constraints.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Half-plane `a·x ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a: [f64; 2],
    pub b: f64,
}

impl HalfPlane {
    pub fn new(a0: f64, a1: f64, b: f64) -> Self {
        Self { a: [a0, a1], b }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.a[0] * x[0] + self.a[1] * x[1]
    }

    /// Signed violation `a·x − b` (positive = violated).
    pub fn violation(&self, x: [f64; 2]) -> f64 {
        self.eval(x) - self.b
    }

    fn slack_tol(&self, x: [f64; 2]) -> f64 {
        let mag = (self.a[0] * x[0]).abs() + (self.a[1] * x[1]).abs() + self.b.abs();
        1e-12 * mag.max(1.0)
    }
}

/// Axis-aligned box `lo ≤ x ≤ hi`, required to keep every subproblem bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds2 {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Bounds2 {
    fn half_planes(&self) -> [HalfPlane; 4] {
        [
            HalfPlane::new(1.0, 0.0, self.hi[0]),
            HalfPlane::new(-1.0, 0.0, -self.lo[0]),
            HalfPlane::new(0.0, 1.0, self.hi[1]),
            HalfPlane::new(0.0, -1.0, -self.lo[1]),
        ]
    }
}

/// Lexicographic comparison key: primary objective, then secondary.
#[derive(Debug, Clone, Copy)]
struct Objective {
    primary: [f64; 2],
    secondary: [f64; 2],
}

impl Objective {
    fn prefers_positive(&self, dir: [f64; 2]) -> bool {
        let dot = |c: [f64; 2]| c[0] * dir[0] + c[1] * dir[1];
        let p = dot(self.primary);
        let scale = (self.primary[0].abs() + self.primary[1].abs()) * (dir[0].abs() + dir[1].abs());
        if p.abs() > 1e-15 * scale {
            p > 0.0
        } else {
            dot(self.secondary) > 0.0
        }
    }
}

/// Maximizes `objective·x` over the constraints intersected with `bounds`.
/// Ties are broken by maximizing `secondary·x`. Returns `None` when the
/// feasible region is empty. `seed` fixes the insertion order.
pub fn maximize(
    constraints: &[HalfPlane],
    objective: [f64; 2],
    secondary: [f64; 2],
    bounds: Bounds2,
    seed: u64,
) -> Option<[f64; 2]> {
    if bounds.lo[0] > bounds.hi[0] || bounds.lo[1] > bounds.hi[1] {
        return None;
    }
    let obj = Objective {
        primary: objective,
        secondary,
    };
    let mut order: Vec<HalfPlane> = constraints.to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let pick = |k: usize| {
        let positive = if objective[k] != 0.0 {
            objective[k] > 0.0
        } else {
            secondary[k] > 0.0
        };
        if positive {
            bounds.hi[k]
        } else {
            bounds.lo[k]
        }
    };
    let mut x = [pick(0), pick(1)];
    let walls = bounds.half_planes();

    for k in 0..order.len() {
        let h = order[k];
        if h.violation(x) <= h.slack_tol(x) {
            continue;
        }
        x = optimize_on_line(&h, walls.iter().chain(&order[..k]), &obj)?;
    }
    Some(x)
}

/// 1D program on the boundary line of `h` subject to `others`.
fn optimize_on_line<'a>(
    h: &HalfPlane,
    others: impl Iterator<Item = &'a HalfPlane>,
    obj: &Objective,
) -> Option<[f64; 2]> {
    let n2 = h.a[0] * h.a[0] + h.a[1] * h.a[1];
    if n2 == 0.0 {
        // 0 ≤ b with b < 0
        return None;
    }
    let p0 = [h.a[0] * h.b / n2, h.a[1] * h.b / n2];
    let dir = [-h.a[1], h.a[0]];
    let dir_norm = n2.sqrt();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for g in others {
        let coef = g.a[0] * dir[0] + g.a[1] * dir[1];
        let rhs = g.b - g.eval(p0);
        let gnorm = g.a[0].hypot(g.a[1]);
        if coef.abs() <= 1e-14 * gnorm * dir_norm {
            if rhs < -g.slack_tol(p0) {
                return None;
            }
            continue;
        }
        let s = rhs / coef;
        if coef > 0.0 {
            hi = hi.min(s);
        } else {
            lo = lo.max(s);
        }
    }
    if lo > hi {
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if lo - hi > slack {
            return None;
        }
        let mid = 0.5 * (lo + hi);
        lo = mid;
        hi = mid;
    }
    let s = if obj.prefers_positive(dir) { hi } else { lo };
    if !s.is_finite() {
        return None;
    }
    Some([p0[0] + s * dir[0], p0[1] + s * dir[1]])
}
