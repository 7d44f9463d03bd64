//! Concentration points, quantile/median tracks, the REF bargaining
//! solution, the standard-axiom checks, and the ternary-tree results.

use serde::{Deserialize, Serialize};

use crate::cdf::{
    b_eps, bisect, classify, golden_b, iterate_cdf, CdfGrid, CdfMap, FixedPointReport,
    DEFAULT_CDF_POINTS,
};
use crate::error::{Error, Result};
use crate::geometry::{FeasibleSet, Point};
use crate::grid::{EvolveOp, GridMeasure};

/// Stopping rule: sup-distance between the marginal CDFs of successive
/// even steps below this threshold means "concentration detected".
pub const SUP_TOL: f64 = 1e-6;

/// Default evolution step cap.
pub const DEFAULT_STEPS: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    /// Player 1 at every odd height, Player 2 at every even height.
    Alternating,
    /// Player 1 with probability 1/2+eps at odd heights, 1/2-eps at even.
    Hybrid { eps: f64 },
    /// Fair coin at every node.
    Random,
}

impl Schedule {
    /// Probability that Player 1 controls level `step` (1-based from the
    /// leaves, odd = Player-1-favored).
    pub fn p1_at_level(&self, step: u32) -> f64 {
        let odd = step % 2 == 1;
        match self {
            Schedule::Alternating => {
                if odd {
                    1.0
                } else {
                    0.0
                }
            }
            Schedule::Hybrid { eps } => {
                if odd {
                    0.5 + eps
                } else {
                    0.5 - eps
                }
            }
            Schedule::Random => 0.5,
        }
    }

    /// Quantile level whose track converges to the concentration point:
    /// b for alternating, b_eps for hybrid, the median for random.
    pub fn quantile_level(&self) -> Result<f64> {
        match self {
            Schedule::Alternating => Ok(golden_b()),
            Schedule::Hybrid { eps } => Ok(b_eps(*eps)?.value),
            Schedule::Random => Ok(0.5),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Schedule::Hybrid { eps } = self {
            if !(0.0 < *eps && *eps <= 0.5) {
                return Err(Error::DomainError { name: "eps", value: *eps, range: "(0, 1/2]" });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub step: u32,
    pub x: f64,
    pub y: f64,
}

/// Quantile locations of both marginals along an evolution run. Under the
/// parity convention the x values at even steps and the y values at odd
/// steps are the monotone subsequences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileTrack {
    pub level: f64,
    pub points: Vec<TrackPoint>,
}

impl QuantileTrack {
    pub fn x_even(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.step % 2 == 0).map(|p| p.x).collect()
    }

    pub fn y_odd(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.step % 2 == 1).map(|p| p.y).collect()
    }

    /// True iff the sequence never decreases by more than `slack`.
    pub fn is_nondecreasing(values: &[f64], slack: f64) -> bool {
        values.windows(2).all(|w| w[1] >= w[0] - slack)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Alternating,
    Hybrid { eps: f64 },
    RefLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub point: Point,
    pub method: Method,
    /// Distance from the reported point to the Pareto boundary (0 for
    /// segment domains, whose frontier is degenerate).
    pub pareto_gap: f64,
    pub converged: bool,
    pub steps_run: u32,
    pub resolution: usize,
    /// Diagonal of one grid cell; convergence tolerances are stated in
    /// these units.
    pub cell_diagonal: f64,
    pub track: QuantileTrack,
}

/// Segment geometry reduced to its 1D parameter: the payoff pair is
/// `a + t (b - a)` and each level is a RawPair CDF update in t-space.
struct SegmentLine {
    a: Point,
    d: Point,
}

impl SegmentLine {
    fn new(set: &FeasibleSet) -> Result<Self> {
        let [mut a, mut b] = match set {
            FeasibleSet::Segment { endpoints } => *endpoints,
            FeasibleSet::Polygon { .. } => {
                return Err(Error::InvalidDomain("expected a segment".into()))
            }
        };
        // Orient so Player 1's payoff increases with t.
        if b[0] < a[0] {
            std::mem::swap(&mut a, &mut b);
        }
        let d = [b[0] - a[0], b[1] - a[1]];
        if d[0].abs() <= 1e-12 {
            return Err(Error::InvalidDomain(
                "segment is degenerate for Player 1's payoff".into(),
            ));
        }
        Ok(SegmentLine { a, d })
    }

    /// Probability that the controller of a level picks the larger t.
    fn p_max(&self, p1: f64) -> f64 {
        let p2_wants_max = if self.d[1] > 0.0 { 1.0 } else { 0.0 };
        p1 + (1.0 - p1) * p2_wants_max
    }

    fn point_at(&self, t: f64) -> Point {
        [self.a[0] + t * self.d[0], self.a[1] + t * self.d[1]]
    }

    /// t-quantile matching the coordinate-`coord` marginal at `level`.
    fn t_for_level(&self, f: &CdfGrid, coord: usize, level: f64) -> Result<f64> {
        if self.d[coord] >= 0.0 {
            f.quantile(level)
        } else {
            f.quantile(1.0 - level)
        }
    }
}

/// Runs the measure evolution and records the quantile locations of both
/// marginals at every step.
pub fn track_quantiles(
    domain: &FeasibleSet,
    schedule: Schedule,
    steps: u32,
    level: f64,
    resolution: usize,
) -> Result<QuantileTrack> {
    schedule.validate()?;
    if !(0.0 < level && level < 1.0) {
        return Err(Error::QuantileOutOfRange(level));
    }
    if domain.is_segment() {
        let line = SegmentLine::new(domain)?;
        let mut f = CdfGrid::uniform(DEFAULT_CDF_POINTS);
        let mut points = Vec::with_capacity(steps as usize);
        for s in 1..=steps {
            let p = line.p_max(schedule.p1_at_level(s));
            f = iterate_cdf(&f, 1, CdfMap::RawPair { p1: p, branching: 2 })?;
            let tx = line.t_for_level(&f, 0, level)?;
            let ty = line.t_for_level(&f, 1, level)?;
            points.push(TrackPoint { step: s, x: line.point_at(tx)[0], y: line.point_at(ty)[1] });
        }
        return Ok(QuantileTrack { level, points });
    }
    let mut m = GridMeasure::from_domain(domain, resolution, resolution)?;
    let mut points = Vec::with_capacity(steps as usize);
    for s in 1..=steps {
        m = m.evolve(EvolveOp::Mix(schedule.p1_at_level(s)), 2)?;
        points.push(TrackPoint {
            step: s,
            x: m.marginal_quantile(0, level)?,
            y: m.marginal_quantile(1, level)?,
        });
    }
    Ok(QuantileTrack { level, points })
}

fn sup_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Final state of a converged (or capped) evolution run.
pub struct EvolutionRun {
    pub measure: GridMeasure,
    pub track: QuantileTrack,
    pub converged: bool,
    pub steps_run: u32,
    pub sup_dist: f64,
}

/// Evolves a polygon measure under `schedule` until the marginal CDFs of
/// successive even steps stabilize, or the step cap is hit.
pub fn evolve_until_stable(
    domain: &FeasibleSet,
    schedule: Schedule,
    steps: u32,
    level: f64,
    resolution: usize,
    branching: u32,
) -> Result<EvolutionRun> {
    let mut m = GridMeasure::from_domain(domain, resolution, resolution)?;
    let mut points = Vec::new();
    let mut prev_even: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut converged = false;
    let mut steps_run = 0;
    let mut sup_dist = f64::INFINITY;
    for s in 1..=steps {
        m = m.evolve(EvolveOp::Mix(schedule.p1_at_level(s)), branching)?;
        steps_run = s;
        points.push(TrackPoint {
            step: s,
            x: m.marginal_quantile(0, level)?,
            y: m.marginal_quantile(1, level)?,
        });
        if s % 2 == 0 {
            let cdfs = (m.marginal_cdf(0), m.marginal_cdf(1));
            if let Some(prev) = &prev_even {
                sup_dist = sup_vec(&prev.0, &cdfs.0).max(sup_vec(&prev.1, &cdfs.1));
                if sup_dist < SUP_TOL {
                    converged = true;
                    break;
                }
            }
            prev_even = Some(cdfs);
        }
    }
    Ok(EvolutionRun {
        measure: m,
        track: QuantileTrack { level, points },
        converged,
        steps_run,
        sup_dist,
    })
}

fn segment_concentration(
    domain: &FeasibleSet,
    schedule: Schedule,
    steps: u32,
    method: Method,
) -> Result<SolutionReport> {
    let level = schedule.quantile_level()?;
    let line = SegmentLine::new(domain)?;
    let mut f = CdfGrid::uniform(DEFAULT_CDF_POINTS);
    let mut points = Vec::new();
    let mut prev_even: Option<Vec<f64>> = None;
    let mut converged = false;
    let mut steps_run = 0;
    let mut sup_dist = f64::INFINITY;
    for s in 1..=steps {
        let p = line.p_max(schedule.p1_at_level(s));
        f = iterate_cdf(&f, 1, CdfMap::RawPair { p1: p, branching: 2 })?;
        steps_run = s;
        let tx = line.t_for_level(&f, 0, level)?;
        let ty = line.t_for_level(&f, 1, level)?;
        points.push(TrackPoint { step: s, x: line.point_at(tx)[0], y: line.point_at(ty)[1] });
        if s % 2 == 0 {
            if let Some(prev) = &prev_even {
                sup_dist = sup_vec(prev, &f.f);
                if sup_dist < SUP_TOL {
                    converged = true;
                    break;
                }
            }
            prev_even = Some(f.f.clone());
        }
    }
    if !converged {
        return Err(Error::NotConverged { steps: steps_run, sup_dist });
    }
    let t = line.t_for_level(&f, 0, level)?;
    let point = line.point_at(t);
    let cell = 1.0 / (DEFAULT_CDF_POINTS - 1) as f64;
    Ok(SolutionReport {
        point,
        method,
        pareto_gap: 0.0,
        converged,
        steps_run,
        resolution: DEFAULT_CDF_POINTS,
        cell_diagonal: cell,
        track: QuantileTrack { level, points },
    })
}

/// Limit of the quantile track under the stopping rule, with its distance
/// to the Pareto boundary.
pub fn concentration_point(
    domain: &FeasibleSet,
    schedule: Schedule,
    steps: u32,
    resolution: usize,
) -> Result<SolutionReport> {
    schedule.validate()?;
    let method = match schedule {
        Schedule::Alternating => Method::Alternating,
        Schedule::Hybrid { eps } => Method::Hybrid { eps },
        Schedule::Random => {
            return Err(Error::InvalidSpec(
                "the random schedule does not concentrate; use the median track".into(),
            ))
        }
    };
    if domain.is_segment() {
        return segment_concentration(domain, schedule, steps, method);
    }
    let level = schedule.quantile_level()?;
    let run = evolve_until_stable(domain, schedule, steps, level, resolution, 2)?;
    if !run.converged {
        return Err(Error::NotConverged { steps: run.steps_run, sup_dist: run.sup_dist });
    }
    // Parity convention: x from the last even step, y from the last odd.
    let x = run
        .track
        .points
        .iter()
        .rev()
        .find(|p| p.step % 2 == 0)
        .map(|p| p.x)
        .unwrap();
    let y = run
        .track
        .points
        .iter()
        .rev()
        .find(|p| p.step % 2 == 1)
        .map(|p| p.y)
        .unwrap();
    let point = [x, y];
    let boundary = domain.extract_pareto_boundary()?;
    Ok(SolutionReport {
        point,
        method,
        pareto_gap: boundary.distance_to(point),
        converged: true,
        steps_run: run.steps_run,
        resolution,
        cell_diagonal: run.measure.cell_diagonal(),
        track: run.track,
    })
}

/// Median track of the random schedule; its limit identifies the REF
/// solution. Returns the final medians and the full track.
pub fn random_median_limit(
    domain: &FeasibleSet,
    steps: u32,
    resolution: usize,
) -> Result<(Point, QuantileTrack)> {
    let track = track_quantiles(domain, Schedule::Random, steps, 0.5, resolution)?;
    let last = *track.points.last().ok_or(Error::EmptySampleSet)?;
    Ok(([last.x, last.y], track))
}

/// The default decreasing epsilon schedule.
pub fn default_eps_schedule() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.025]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefReport {
    pub solution: SolutionReport,
    /// Concentration point per epsilon, in schedule order.
    pub per_eps: Vec<(f64, Point)>,
    /// Limit of the random-schedule median track.
    pub median_limit: Point,
    /// Sup-norm distance between the extrapolated point and the median
    /// limit (the two routes identify the same object).
    pub median_discrepancy: f64,
}

/// Estimates the eps -> 0 limit of hybrid concentration points by a finite
/// decreasing schedule plus one-step extrapolation, cross-checked against
/// the random-schedule median limit.
pub fn ref_solution(
    domain: &FeasibleSet,
    eps_schedule: &[f64],
    steps: u32,
    resolution: usize,
) -> Result<RefReport> {
    if eps_schedule.len() < 2
        || eps_schedule.windows(2).any(|w| w[1] >= w[0])
        || eps_schedule.iter().any(|&e| !(0.0 < e && e <= 0.5))
    {
        return Err(Error::ScheduleTooShort);
    }
    let mut per_eps = Vec::with_capacity(eps_schedule.len());
    let mut last_report = None;
    for &eps in eps_schedule {
        let r = concentration_point(domain, Schedule::Hybrid { eps }, steps, resolution)?;
        per_eps.push((eps, r.point));
        last_report = Some(r);
    }
    let last_report = last_report.unwrap();
    let n = per_eps.len();
    let (p_prev, p_last) = (per_eps[n - 2].1, per_eps[n - 1].1);
    // Cauchy-like check: successive distances must not grow beyond grid
    // noise.
    let dist = |a: Point, b: Point| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let slack = 2.0 * last_report.cell_diagonal;
    for w in per_eps.windows(3) {
        let d0 = dist(w[0].1, w[1].1);
        let d1 = dist(w[1].1, w[2].1);
        if d1 > d0 + slack {
            return Err(Error::NotConverged { steps, sup_dist: d1 - d0 });
        }
    }
    // One-step extrapolation of the eps -> 0 limit.
    let point = [
        p_last[0] + (p_last[0] - p_prev[0]),
        p_last[1] + (p_last[1] - p_prev[1]),
    ];
    let pareto_gap = match domain {
        FeasibleSet::Segment { .. } => 0.0,
        FeasibleSet::Polygon { .. } => domain.extract_pareto_boundary()?.distance_to(point),
    };
    let (median_limit, _) = random_median_limit(domain, steps.min(400), resolution)?;
    let median_discrepancy = (point[0] - median_limit[0])
        .abs()
        .max((point[1] - median_limit[1]).abs());
    let solution = SolutionReport {
        point,
        method: Method::RefLimit,
        pareto_gap,
        converged: true,
        steps_run: last_report.steps_run,
        resolution,
        cell_diagonal: last_report.cell_diagonal,
        track: last_report.track,
    };
    Ok(RefReport { solution, per_eps, median_limit, median_discrepancy })
}

/// Probe affine map used by the scale-invariance axiom check.
pub const PROBE_SCALE: [f64; 2] = [2.0, 3.0];
pub const PROBE_SHIFT: [f64; 2] = [0.0, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub ref_point: Point,
    pub efficiency_gap: f64,
    /// `|x - y|` for symmetric domains, absent otherwise.
    pub symmetry_gap: Option<f64>,
    /// Distance between REF of the probe-transformed domain and the
    /// transformed REF point.
    pub scale_invariance_gap: f64,
}

/// Checks the three standard-solution axioms numerically.
pub fn axiom_report(
    domain: &FeasibleSet,
    eps_schedule: &[f64],
    steps: u32,
    resolution: usize,
) -> Result<AxiomReport> {
    let base = ref_solution(domain, eps_schedule, steps, resolution)?;
    let p = base.solution.point;
    let symmetry_gap = if domain.is_symmetric(1e-9) {
        Some((p[0] - p[1]).abs())
    } else {
        None
    };
    let transformed = domain.affine_transform(PROBE_SCALE, PROBE_SHIFT)?;
    let tref = ref_solution(&transformed, eps_schedule, steps, resolution)?;
    let mapped = [
        PROBE_SCALE[0] * p[0] + PROBE_SHIFT[0],
        PROBE_SCALE[1] * p[1] + PROBE_SHIFT[1],
    ];
    let gap = ((tref.solution.point[0] - mapped[0]).powi(2)
        + (tref.solution.point[1] - mapped[1]).powi(2))
    .sqrt();
    Ok(AxiomReport {
        ref_point: p,
        efficiency_gap: base.solution.pareto_gap,
        symmetry_gap,
        scale_invariance_gap: gap,
    })
}

/// Interior fixed point of the ternary alternating two-level map
/// 1 - (1 - x^3)^3, by bisection on (0, 1).
pub fn ternary_alternating_fixed_point() -> FixedPointReport {
    let psi = |x: f64| 1.0 - (1.0 - x * x * x).powi(3);
    let root = bisect(|x| psi(x) - x, 0.05, 0.95, 1e-13);
    // d/dx [1 - (1 - x^3)^3] = 9 x^2 (1 - x^3)^2
    let multiplier = 9.0 * root * root * (1.0 - root.powi(3)).powi(2);
    FixedPointReport { value: root, multiplier, classification: classify(multiplier) }
}

/// Ternary alternating CDF iteration: Player-1 then Player-2 level over
/// triples, `steps` two-level applications starting from F(x) = x.
pub fn ternary_alternating_cdf(steps: u32, points: usize) -> Result<CdfGrid> {
    let mut f = CdfGrid::uniform(points);
    for _ in 0..steps {
        f = iterate_cdf(&f, 1, CdfMap::RawPair { p1: 1.0, branching: 3 })?;
        f = iterate_cdf(&f, 1, CdfMap::RawPair { p1: 0.0, branching: 3 })?;
    }
    Ok(f)
}

/// Ternary random-controller grid evolution: the limit splits its mass
/// between each player's best point. Returns the two highest-mass cells.
pub fn ternary_random_limit(
    domain: &FeasibleSet,
    steps: u32,
    resolution: usize,
) -> Result<[(Point, f64); 2]> {
    if domain.is_segment() {
        return Err(Error::SegmentDomain);
    }
    let mut m = GridMeasure::from_domain(domain, resolution, resolution)?;
    for _ in 0..steps {
        m = m.evolve(EvolveOp::Mix(0.5), 3)?;
    }
    let top = m.top_cells(2);
    Ok([top[0], top[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::builtin;

    #[test]
    fn ternary_fixed_point() {
        let r = ternary_alternating_fixed_point();
        assert!((r.value - 0.68).abs() < 0.01, "root {}", r.value);
        let residual = (1.0 - (1.0 - r.value.powi(3)).powi(3) - r.value).abs();
        assert!(residual <= 1e-12, "residual {residual}");
        assert!(r.value > 0.05 && r.value < 0.95);
        assert_eq!(r.classification, crate::cdf::Classification::Repelling);
    }

    #[test]
    fn random_schedule_symmetric_tracks_coincide() {
        let track =
            track_quantiles(&builtin::triangle(), Schedule::Random, 30, 0.5, 128).unwrap();
        for p in &track.points {
            assert!((p.x - p.y).abs() < 1e-9, "step {}: {} vs {}", p.step, p.x, p.y);
        }
    }

    #[test]
    fn alternating_b_track_monotone_short() {
        let b = golden_b();
        let track =
            track_quantiles(&builtin::triangle(), Schedule::Alternating, 40, b, 128).unwrap();
        let xe = track.x_even();
        let slack = 1.0 / 128.0;
        assert!(QuantileTrack::is_nondecreasing(&xe, slack), "{xe:?}");
    }

    #[test]
    fn segment_alternating_concentrates_at_b() {
        let seg = FeasibleSet::zero_sum_segment();
        let r = concentration_point(&seg, Schedule::Alternating, 200, 0).unwrap();
        let cell = 1.0 / (DEFAULT_CDF_POINTS - 1) as f64;
        assert!((r.point[0] - golden_b()).abs() <= cell, "{:?}", r.point);
        assert_eq!(r.point[1], -r.point[0]);
        assert_eq!(r.pareto_gap, 0.0);
    }

    #[test]
    fn segment_hybrid_quarter() {
        let seg = FeasibleSet::zero_sum_segment();
        let r =
            concentration_point(&seg, Schedule::Hybrid { eps: 0.25 }, 2000, 0).unwrap();
        let expected = (17.0f64.sqrt() - 3.0) / 2.0;
        let cell = 1.0 / (DEFAULT_CDF_POINTS - 1) as f64;
        assert!((r.point[0] - expected).abs() <= cell, "{:?}", r.point);
    }

    #[test]
    fn random_schedule_rejected_for_concentration() {
        let err = concentration_point(&builtin::triangle(), Schedule::Random, 10, 32);
        assert!(err.is_err());
    }

    #[test]
    fn bad_eps_schedules_rejected() {
        let tri = builtin::triangle();
        assert!(matches!(
            ref_solution(&tri, &[0.2], 10, 32),
            Err(Error::ScheduleTooShort)
        ));
        assert!(matches!(
            ref_solution(&tri, &[0.1, 0.2], 10, 32),
            Err(Error::ScheduleTooShort)
        ));
    }
}
