//! 2D analytic engine: cell-mass discretization of the value measures and
//! the pick-best pushforward operators.
//!
//! The discrete MAX rule is exact for cell-center representatives with a
//! uniform within-column tie pick: for branching k, a cell c in column j
//! with column mass s and mass F strictly left receives
//! `mass(c) * ((F + s)^k - F^k) / s`, which telescopes to total mass 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    clip_rect, polygon_area, quadrant_membership, FeasibleSet, ParetoBoundary, Point, QuadrantSpec,
};

/// Default 2D resolution per axis.
pub const DEFAULT_RESOLUTION: usize = 512;

/// Tolerance on total mass of an evolution input.
pub const MASS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EvolveOp {
    /// Distribution of the coordinate-1-larger of k independent draws.
    Max1,
    /// Distribution of the coordinate-2-larger of k independent draws.
    Max2,
    /// p1 * Max1 + (1 - p1) * Max2 applied to the same input measure.
    Mix(f64),
}

/// Cell-mass discretization of a probability measure over a rectangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeasure {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: `mass[iy * nx + ix]`.
    pub mass: Vec<f64>,
}

impl GridMeasure {
    /// Uniform measure on a polygon: exact cell-intersection area ratios
    /// via polygon clipping, so the analytic engine starts noise-free.
    pub fn from_polygon(set: &FeasibleSet, nx: usize, ny: usize) -> Result<Self> {
        let vertices = match set {
            FeasibleSet::Polygon { vertices } => vertices,
            FeasibleSet::Segment { .. } => return Err(Error::SegmentDomain),
        };
        set.validate()?;
        let (lo, hi) = set.bounding_box();
        let dx = (hi[0] - lo[0]) / nx as f64;
        let dy = (hi[1] - lo[1]) / ny as f64;
        let total = polygon_area(vertices);
        let mut mass = vec![0.0; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                let cell_lo = [lo[0] + ix as f64 * dx, lo[1] + iy as f64 * dy];
                let cell_hi = [cell_lo[0] + dx, cell_lo[1] + dy];
                let clipped = clip_rect(vertices, cell_lo, cell_hi);
                if clipped.len() >= 3 {
                    mass[iy * nx + ix] = polygon_area(&clipped).abs() / total;
                }
            }
        }
        let mut g = GridMeasure { x0: lo[0], y0: lo[1], dx, dy, nx, ny, mass };
        g.renormalize();
        Ok(g)
    }

    /// Uniform measure on a segment, length-weighted per cell. Used to
    /// embed the zero-sum line into the 2D engine.
    pub fn from_segment(set: &FeasibleSet, nx: usize, ny: usize) -> Result<Self> {
        let [a, b] = match set {
            FeasibleSet::Segment { endpoints } => *endpoints,
            FeasibleSet::Polygon { .. } => {
                return Err(Error::InvalidDomain("expected a segment".into()))
            }
        };
        set.validate()?;
        let (lo, hi) = set.bounding_box();
        let dx = (hi[0] - lo[0]).max(f64::MIN_POSITIVE) / nx as f64;
        let dy = (hi[1] - lo[1]).max(f64::MIN_POSITIVE) / ny as f64;
        let mut mass = vec![0.0; nx * ny];
        // Parameter-space overlap of the segment with each cell's slab
        // intersection.
        for iy in 0..ny {
            for ix in 0..nx {
                let cell_lo = [lo[0] + ix as f64 * dx, lo[1] + iy as f64 * dy];
                let cell_hi = [cell_lo[0] + dx, cell_lo[1] + dy];
                let mut t0 = 0.0f64;
                let mut t1 = 1.0f64;
                for k in 0..2 {
                    let d = b[k] - a[k];
                    if d.abs() < 1e-300 {
                        continue;
                    }
                    let (mut u0, mut u1) = ((cell_lo[k] - a[k]) / d, (cell_hi[k] - a[k]) / d);
                    if u0 > u1 {
                        std::mem::swap(&mut u0, &mut u1);
                    }
                    t0 = t0.max(u0);
                    t1 = t1.min(u1);
                }
                if t1 > t0 {
                    mass[iy * nx + ix] = t1 - t0;
                }
            }
        }
        let mut g = GridMeasure { x0: lo[0], y0: lo[1], dx, dy, nx, ny, mass };
        g.renormalize();
        Ok(g)
    }

    pub fn from_domain(set: &FeasibleSet, nx: usize, ny: usize) -> Result<Self> {
        match set {
            FeasibleSet::Polygon { .. } => Self::from_polygon(set, nx, ny),
            FeasibleSet::Segment { .. } => Self::from_segment(set, nx, ny),
        }
    }

    fn renormalize(&mut self) {
        let t = self.total_mass();
        if t > 0.0 {
            for m in &mut self.mass {
                *m /= t;
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        [
            self.x0 + (ix as f64 + 0.5) * self.dx,
            self.y0 + (iy as f64 + 0.5) * self.dy,
        ]
    }

    pub fn cell_diagonal(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy).sqrt()
    }

    fn check_normalized(&self) -> Result<()> {
        let t = self.total_mass();
        if (t - 1.0).abs() > MASS_TOL {
            return Err(Error::UnnormalizedInput(t));
        }
        Ok(())
    }

    /// One pick-best level among `branching` i.i.d. draws.
    pub fn evolve(&self, op: EvolveOp, branching: u32) -> Result<GridMeasure> {
        self.check_normalized()?;
        if branching < 2 {
            return Err(Error::InvalidSpec("branching must be >= 2".into()));
        }
        // Renormalize each step: a total-mass rounding error of delta
        // would otherwise grow like k^steps under the power-law weights.
        let mut out = match op {
            EvolveOp::Max1 => self.max_along(0, branching),
            EvolveOp::Max2 => self.max_along(1, branching),
            EvolveOp::Mix(p1) => {
                if !(0.0..=1.0).contains(&p1) {
                    return Err(Error::DomainError { name: "p1", value: p1, range: "[0, 1]" });
                }
                let m1 = self.max_along(0, branching);
                let m2 = self.max_along(1, branching);
                let mut out = self.clone();
                for i in 0..out.mass.len() {
                    out.mass[i] = p1 * m1.mass[i] + (1.0 - p1) * m2.mass[i];
                }
                out
            }
        };
        out.renormalize();
        Ok(out)
    }

    /// Pick-best over coordinate `axis` (0 = columns, 1 = rows).
    fn max_along(&self, axis: usize, branching: u32) -> GridMeasure {
        let k = branching as i32;
        let lanes = if axis == 0 { self.nx } else { self.ny };
        // Lane masses and strictly-left prefix.
        let mut lane_mass = vec![0.0f64; lanes];
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let lane = if axis == 0 { ix } else { iy };
                lane_mass[lane] += self.mass[iy * self.nx + ix];
            }
        }
        let mut weight = vec![0.0f64; lanes];
        let mut left = 0.0f64;
        for j in 0..lanes {
            let s = lane_mass[j];
            if s > 0.0 {
                weight[j] = ((left + s).powi(k) - left.powi(k)) / s;
            }
            left += s;
        }
        let mut out = self.clone();
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let lane = if axis == 0 { ix } else { iy };
                out.mass[iy * self.nx + ix] = self.mass[iy * self.nx + ix] * weight[lane];
            }
        }
        out
    }

    /// Alternating hybrid levels starting from odd height: Mix(1/2 + eps),
    /// then Mix(1/2 - eps), and so on.
    pub fn hybrid_schedule(&self, eps: f64, levels: u32, branching: u32) -> Result<GridMeasure> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::DomainError { name: "eps", value: eps, range: "[0, 1/2]" });
        }
        let mut m = self.clone();
        for level in 1..=levels {
            let p1 = if level % 2 == 1 { 0.5 + eps } else { 0.5 - eps };
            m = m.evolve(EvolveOp::Mix(p1), branching)?;
        }
        Ok(m)
    }

    /// Total mass of cells whose centers satisfy the quadrant spec.
    pub fn quadrant_mass(&self, origin: Point, spec: QuadrantSpec) -> f64 {
        let mut total = 0.0;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if quadrant_membership(self.cell_center(ix, iy), origin, spec) {
                    total += self.mass[iy * self.nx + ix];
                }
            }
        }
        total
    }

    /// Total mass of cells whose centers fall in the L-infinity box.
    pub fn box_mass(&self, center: Point, half_width: f64) -> f64 {
        let mut total = 0.0;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let c = self.cell_center(ix, iy);
                if (c[0] - center[0]).abs() <= half_width && (c[1] - center[1]).abs() <= half_width
                {
                    total += self.mass[iy * self.nx + ix];
                }
            }
        }
        total
    }

    /// Marginal CDF over lanes of the given coordinate, evaluated at the
    /// right edge of each lane.
    pub fn marginal_cdf(&self, coordinate: usize) -> Vec<f64> {
        let lanes = if coordinate == 0 { self.nx } else { self.ny };
        let mut lane_mass = vec![0.0f64; lanes];
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let lane = if coordinate == 0 { ix } else { iy };
                lane_mass[lane] += self.mass[iy * self.nx + ix];
            }
        }
        let mut cum = 0.0;
        lane_mass
            .iter()
            .map(|&s| {
                cum += s;
                cum
            })
            .collect()
    }

    /// Smallest lane where the marginal CDF reaches `q`, linearly
    /// interpolated inside the crossing cell (mass treated as uniform
    /// within the cell).
    pub fn marginal_quantile(&self, coordinate: usize, q: f64) -> Result<f64> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::QuantileOutOfRange(q));
        }
        let cdf = self.marginal_cdf(coordinate);
        let (origin, step) = if coordinate == 0 {
            (self.x0, self.dx)
        } else {
            (self.y0, self.dy)
        };
        let j = cdf.partition_point(|&v| v < q);
        let j = j.min(cdf.len() - 1);
        let prev = if j == 0 { 0.0 } else { cdf[j - 1] };
        let lane = cdf[j] - prev;
        let frac = if lane > 0.0 { ((q - prev) / lane).clamp(0.0, 1.0) } else { 1.0 };
        Ok(origin + (j as f64 + frac) * step)
    }

    /// Total mass of cells whose centers lie within `eps_band` of the
    /// Pareto boundary chain.
    pub fn pareto_band_mass(&self, boundary: &ParetoBoundary, eps_band: f64) -> f64 {
        let mut total = 0.0;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let m = self.mass[iy * self.nx + ix];
                if m > 0.0 && boundary.distance_to(self.cell_center(ix, iy)) <= eps_band {
                    total += m;
                }
            }
        }
        total
    }

    /// Cells sorted by descending mass; used for the ternary limit report.
    pub fn top_cells(&self, count: usize) -> Vec<(Point, f64)> {
        let mut cells: Vec<(Point, f64)> = (0..self.ny)
            .flat_map(|iy| (0..self.nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| (self.cell_center(ix, iy), self.mass[iy * self.nx + ix]))
            .collect();
        cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        cells.truncate(count);
        cells
    }
}
