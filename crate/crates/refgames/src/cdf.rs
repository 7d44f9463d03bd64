//! 1D analytic engine for zero-sum value distributions: CDF functional
//! iteration and the fixed points of the two-level maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Golden-ratio fixed point b = (sqrt(5) - 1) / 2 of the alternating
/// two-level map.
pub fn golden_b() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// Two-level map of the alternating zero-sum game: phi(x) = 2x^2 - x^4.
pub fn phi(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError { name: "x", value: x, range: "[0, 1]" });
    }
    Ok(phi_unchecked(x))
}

#[inline]
fn phi_unchecked(x: f64) -> f64 {
    2.0 * x * x - x * x * x * x
}

/// Two-level map of the hybrid zero-sum game:
/// phi_eps(x) = x + (2e)^2 [-2x^3 + 3x^2 - x] + (2e)^3 [-(x - x^2)^2].
pub fn phi_eps(x: f64, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError { name: "x", value: x, range: "[0, 1]" });
    }
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::DomainError { name: "eps", value: eps, range: "[0, 1/2]" });
    }
    Ok(phi_eps_unchecked(x, eps))
}

#[inline]
fn phi_eps_unchecked(x: f64, eps: f64) -> f64 {
    let e2 = (2.0 * eps) * (2.0 * eps);
    let e3 = e2 * 2.0 * eps;
    let q = x - x * x;
    x + e2 * (-2.0 * x * x * x + 3.0 * x * x - x) + e3 * (-(q * q))
}

/// Analytic derivative of phi_eps.
pub fn phi_eps_derivative(x: f64, eps: f64) -> f64 {
    let e2 = (2.0 * eps) * (2.0 * eps);
    let e3 = e2 * 2.0 * eps;
    1.0 + e2 * (-6.0 * x * x + 6.0 * x - 1.0) + e3 * (-2.0 * (x - x * x) * (1.0 - 2.0 * x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Attracting,
    Repelling,
    Neutral,
}

/// A fixed point of a one-dimensional map with its linear stability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub value: f64,
    pub multiplier: f64,
    pub classification: Classification,
}

/// Multiplier band inside which a fixed point is reported as neutral.
pub const NEUTRAL_BAND: f64 = 1e-9;

pub fn classify(multiplier: f64) -> Classification {
    let m = multiplier.abs();
    if (m - 1.0).abs() <= NEUTRAL_BAND {
        Classification::Neutral
    } else if m < 1.0 {
        Classification::Attracting
    } else {
        Classification::Repelling
    }
}

/// Interior fixed point b_eps = (sqrt(1 + eps^2) - 1 + eps) / (2 eps) of
/// phi_eps, in closed form, with its multiplier.
pub fn b_eps(eps: f64) -> Result<FixedPointReport> {
    if eps <= 0.0 || eps > 0.5 {
        return Err(Error::DomainError { name: "eps", value: eps, range: "(0, 1/2]" });
    }
    let value = ((1.0 + eps * eps).sqrt() - 1.0 + eps) / (2.0 * eps);
    let multiplier = phi_eps_derivative(value, eps);
    Ok(FixedPointReport { value, multiplier, classification: classify(multiplier) })
}

/// Discretized CDF on a strictly increasing grid covering [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfGrid {
    pub xs: Vec<f64>,
    pub f: Vec<f64>,
}

/// Default 1D resolution.
pub const DEFAULT_CDF_POINTS: usize = 4096;

impl CdfGrid {
    pub fn new(xs: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let grid = CdfGrid { xs, f };
        grid.validate()?;
        Ok(grid)
    }

    /// Uniform distribution on [0, 1]: F(x) = x on an equispaced grid.
    pub fn uniform(points: usize) -> Self {
        let m = points.max(2) - 1;
        let xs: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        let f = xs.clone();
        CdfGrid { xs, f }
    }

    pub fn validate(&self) -> Result<()> {
        if self.xs.len() < 2 || self.xs.len() != self.f.len() {
            return Err(Error::LengthMismatch("cdf grid arrays".into()));
        }
        if self.xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("grid must be strictly increasing".into()));
        }
        if self.f[0] != 0.0 || *self.f.last().unwrap() != 1.0 {
            return Err(Error::InvalidSpec("cdf endpoints must be exactly 0 and 1".into()));
        }
        if self.f.windows(2).any(|w| w[1] < w[0]) || self.f.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidSpec("cdf must be nondecreasing in [0, 1]".into()));
        }
        Ok(())
    }

    /// Linear interpolation of F at x (clamped to the grid range).
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.f[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.f.last().unwrap();
        }
        let i = self.xs.partition_point(|&g| g <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.f[i] + t * (self.f[i + 1] - self.f[i])
    }

    /// Smallest grid location where F reaches q, interpolated.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::QuantileOutOfRange(q));
        }
        let i = self.f.partition_point(|&v| v < q);
        if i == 0 {
            return Ok(self.xs[0]);
        }
        let (f0, f1) = (self.f[i - 1], self.f[i]);
        if f1 <= f0 {
            return Ok(self.xs[i]);
        }
        let t = (q - f0) / (f1 - f0);
        Ok(self.xs[i - 1] + t * (self.xs[i] - self.xs[i - 1]))
    }

    pub fn sup_distance(&self, other: &CdfGrid) -> f64 {
        self.f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Pointwise CDF update rules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CdfMap {
    /// Alternating two-level map phi (advances two tree levels).
    Phi,
    /// Hybrid two-level map phi_eps (advances two tree levels).
    PhiEps(f64),
    /// One tree level with max-probability `p1`:
    /// F <- p1 F^k + (1 - p1)(1 - (1 - F)^k).
    RawPair { p1: f64, branching: u32 },
}

fn raw_level(f: f64, p1: f64, k: i32) -> f64 {
    p1 * f.powi(k) + (1.0 - p1) * (1.0 - (1.0 - f).powi(k))
}

/// Applies the chosen map to the F-vector `steps` times.
pub fn iterate_cdf(grid: &CdfGrid, steps: u32, map: CdfMap) -> Result<CdfGrid> {
    grid.validate()?;
    match map {
        CdfMap::PhiEps(eps) if !(0.0..=0.5).contains(&eps) => {
            return Err(Error::DomainError { name: "eps", value: eps, range: "[0, 1/2]" })
        }
        CdfMap::RawPair { p1, .. } if !(0.0..=1.0).contains(&p1) => {
            return Err(Error::DomainError { name: "p1", value: p1, range: "[0, 1]" })
        }
        CdfMap::RawPair { branching, .. } if branching < 2 => {
            return Err(Error::InvalidSpec("branching must be >= 2".into()))
        }
        _ => {}
    }
    let mut f = grid.f.clone();
    for _ in 0..steps {
        for v in f.iter_mut() {
            *v = match map {
                CdfMap::Phi => phi_unchecked(*v),
                CdfMap::PhiEps(eps) => phi_eps_unchecked(*v, eps),
                CdfMap::RawPair { p1, branching } => raw_level(*v, p1, branching as i32),
            };
        }
    }
    Ok(CdfGrid { xs: grid.xs.clone(), f })
}

/// Bisection root of `g` on [lo, hi] (requires a sign change) to `tol`.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut glo = g(lo);
    debug_assert!(glo * g(hi) <= 0.0, "bisection bracket has no sign change");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if glo * gm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert_eq!(phi(1.0).unwrap(), 1.0);
        assert!((phi(0.5).unwrap() - 0.4375).abs() < 1e-15);
        let b = golden_b();
        assert!((phi(b).unwrap() - b).abs() < 1e-15);
        assert!(phi(1.5).is_err());
    }

    #[test]
    fn phi_trichotomy() {
        let b = golden_b();
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            let y = phi(x).unwrap();
            if x < b - 1e-12 {
                assert!(y < x, "phi({x}) = {y} not below x");
            } else if x > b + 1e-12 {
                assert!(y > x, "phi({x}) = {y} not above x");
            }
        }
    }

    #[test]
    fn phi_eps_matches_phi_at_half() {
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let d = (phi_eps(x, 0.5).unwrap() - phi(x).unwrap()).abs();
            assert!(d < 1e-12, "x = {x}, diff = {d}");
        }
    }

    #[test]
    fn phi_eps_endpoints_fixed() {
        for eps in [0.01, 0.1, 0.25, 0.5] {
            assert_eq!(phi_eps(0.0, eps).unwrap(), 0.0);
            assert_eq!(phi_eps(1.0, eps).unwrap(), 1.0);
        }
    }

    #[test]
    fn b_eps_closed_form() {
        let r = b_eps(0.5).unwrap();
        assert!((r.value - golden_b()).abs() < 1e-12);
        assert_eq!(r.classification, Classification::Repelling);
        // multiplier of phi at b is 4b - 4b^3 > 1
        let b = golden_b();
        assert!((r.multiplier - (4.0 * b - 4.0 * b * b * b)).abs() < 1e-12);

        let quarter = b_eps(0.25).unwrap();
        assert!((quarter.value - (17.0f64.sqrt() - 3.0) / 2.0).abs() < 1e-12);
        // b^{1/4} is a fixed point of phi_eps to machine precision.
        assert!((phi_eps(quarter.value, 0.25).unwrap() - quarter.value).abs() < 1e-12);

        assert!(b_eps(0.0).is_err());
        assert!(b_eps(-0.1).is_err());
    }

    #[test]
    fn b_eps_decreases_to_half() {
        let vals: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&e| b_eps(e).unwrap().value)
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2]);
        assert!(vals[2] > 0.5 && vals[2] - 0.5 < 1e-3);
    }

    #[test]
    fn phi_eps_trichotomy() {
        let eps = 0.2;
        let b = b_eps(eps).unwrap().value;
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            let y = phi_eps(x, eps).unwrap();
            if x < b - 1e-9 {
                assert!(y < x);
            } else if x > b + 1e-9 {
                assert!(y > x);
            }
        }
    }

    #[test]
    fn iterate_one_phi_step_is_pointwise() {
        let g = CdfGrid::uniform(101);
        let out = iterate_cdf(&g, 1, CdfMap::Phi).unwrap();
        for (x, f) in out.xs.iter().zip(&out.f) {
            assert!((f - phi_unchecked(*x)).abs() < 1e-15);
        }
    }

    #[test]
    fn raw_pair_half_is_identity() {
        let g = iterate_cdf(&CdfGrid::uniform(257), 3, CdfMap::Phi).unwrap();
        let out = iterate_cdf(&g, 1, CdfMap::RawPair { p1: 0.5, branching: 2 }).unwrap();
        for (a, b) in g.f.iter().zip(&out.f) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn iteration_preserves_monotone_pinned_cdf() {
        for map in [
            CdfMap::Phi,
            CdfMap::PhiEps(0.17),
            CdfMap::RawPair { p1: 0.3, branching: 3 },
        ] {
            let out = iterate_cdf(&CdfGrid::uniform(512), 25, map).unwrap();
            out.validate().unwrap();
        }
    }

    #[test]
    fn quantile_and_eval() {
        let g = CdfGrid::uniform(101);
        assert!((g.eval(0.3456) - 0.3456).abs() < 1e-12);
        assert!((g.quantile(0.25).unwrap() - 0.25).abs() < 1e-12);
        assert!(g.quantile(1.5).is_err());
    }

    #[test]
    fn bisection_recovers_golden_b() {
        let root = bisect(|x| phi_unchecked(x) - x, 0.05, 0.95, 1e-13);
        assert!((root - golden_b()).abs() < 1e-10);
    }
}
