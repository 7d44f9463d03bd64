//! Feasible sets: convex polygon (or 1D segment) payoff domains, their
//! Pareto-efficient boundary, quadrant predicates, uniform sampling and
//! affine maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub type Point = [f64; 2];

/// Tolerance for collinearity / convexity predicates at unit scale.
pub const GEOM_TOL: f64 = 1e-9;

/// The bargaining/payoff domain `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeasibleSet {
    /// Convex polygon with counter-clockwise vertices and non-empty interior.
    Polygon { vertices: Vec<Point> },
    /// 1D segment, e.g. the zero-sum domain conv{(0,0),(1,-1)}.
    Segment { endpoints: [Point; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Rel {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Lt => lhs < rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

/// Pair of coordinate relations defining a quadrant set around an origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantSpec(pub Rel, pub Rel);

/// True iff both coordinate relations hold.
pub fn quadrant_membership(point: Point, origin: Point, spec: QuadrantSpec) -> bool {
    spec.0.holds(point[0], origin[0]) && spec.1.holds(point[1], origin[1])
}

#[inline]
pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl FeasibleSet {
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        let set = FeasibleSet::Polygon { vertices };
        set.validate()?;
        Ok(set)
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        let set = FeasibleSet::Segment { endpoints: [a, b] };
        set.validate()?;
        Ok(set)
    }

    /// Zero-sum benchmark domain conv{(0,0),(1,-1)}.
    pub fn zero_sum_segment() -> Self {
        FeasibleSet::Segment { endpoints: [[0.0, 0.0], [1.0, -1.0]] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FeasibleSet::Segment { endpoints: [a, b] } => {
                let d = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                if d <= GEOM_TOL {
                    return Err(Error::InvalidDomain(
                        "segment endpoints must be distinct".into(),
                    ));
                }
                Ok(())
            }
            FeasibleSet::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidDomain(
                        "polygon needs at least 3 vertices".into(),
                    ));
                }
                let n = vertices.len();
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a[0] - b[0]).abs() <= GEOM_TOL && (a[1] - b[1]).abs() <= GEOM_TOL {
                        return Err(Error::InvalidDomain(
                            "duplicated consecutive vertices".into(),
                        ));
                    }
                }
                let mut strict = 0usize;
                for i in 0..n {
                    let c = cross(
                        vertices[i],
                        vertices[(i + 1) % n],
                        vertices[(i + 2) % n],
                    );
                    if c < -GEOM_TOL {
                        return Err(Error::InvalidDomain(
                            "vertices are not in counter-clockwise convex position".into(),
                        ));
                    }
                    if c > GEOM_TOL {
                        strict += 1;
                    }
                }
                if strict < 3 {
                    return Err(Error::InvalidDomain(
                        "polygon has an empty interior".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let set: FeasibleSet = serde_json::from_str(s)?;
        set.validate()?;
        Ok(set)
    }

    pub fn is_segment(&self) -> bool {
        matches!(self, FeasibleSet::Segment { .. })
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let pts: &[Point] = match self {
            FeasibleSet::Polygon { vertices } => vertices,
            FeasibleSet::Segment { endpoints } => endpoints,
        };
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Polygon area (0 for segments).
    pub fn area(&self) -> f64 {
        match self {
            FeasibleSet::Segment { .. } => 0.0,
            FeasibleSet::Polygon { vertices } => polygon_area(vertices),
        }
    }

    /// Membership test with `GEOM_TOL` slack at the boundary.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            FeasibleSet::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], p) >= -GEOM_TOL)
            }
            FeasibleSet::Segment { endpoints: [a, b] } => {
                point_segment_distance(p, *a, *b) <= GEOM_TOL
            }
        }
    }

    /// Maximal chain of non-strictly-dominated boundary points, from the
    /// coordinate-1 maximizer to the coordinate-2 maximizer. Axis-parallel
    /// (weakly efficient) edges are trimmed to their dominating endpoint.
    pub fn extract_pareto_boundary(&self) -> Result<ParetoBoundary> {
        let vertices = match self {
            FeasibleSet::Segment { .. } => return Err(Error::SegmentDomain),
            FeasibleSet::Polygon { vertices } => vertices,
        };
        self.validate()?;
        let n = vertices.len();
        // Lexicographic argmaxes pick the dominating endpoint of any
        // axis-parallel boundary edge.
        let start = (0..n)
            .max_by(|&i, &j| {
                let (a, b) = (vertices[i], vertices[j]);
                a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap())
            })
            .unwrap();
        let end = (0..n)
            .max_by(|&i, &j| {
                let (a, b) = (vertices[i], vertices[j]);
                a[1].partial_cmp(&b[1]).unwrap().then(a[0].partial_cmp(&b[0]).unwrap())
            })
            .unwrap();
        let mut chain = vec![vertices[start]];
        let mut i = start;
        while i != end {
            i = (i + 1) % n;
            chain.push(vertices[i]);
        }
        // λ over strictly-sloped edges; diagnostic only.
        let mut lambda = 1.0f64;
        for w in chain.windows(2) {
            let dx = (w[1][0] - w[0][0]).abs();
            let dy = (w[1][1] - w[0][1]).abs();
            if dx > GEOM_TOL && dy > GEOM_TOL {
                let slope = dy / dx;
                lambda = lambda.max(slope.max(1.0 / slope));
            }
        }
        let boundary = ParetoBoundary { chain, lipschitz_lambda: lambda };
        boundary.validate(vertices)?;
        Ok(boundary)
    }

    /// Exact uniform draw: fan triangulation with area-weighted triangle
    /// selection for polygons, linear interpolation for segments.
    pub fn sample_uniform<R: RngStream>(&self, rng: &mut R) -> Point {
        match self {
            FeasibleSet::Segment { endpoints: [a, b] } => {
                let t = rng.next_f64();
                lerp(*a, *b, t)
            }
            FeasibleSet::Polygon { vertices } => {
                let n = vertices.len();
                // Cumulative fan-triangle areas from vertex 0.
                let mut cum = Vec::with_capacity(n - 2);
                let mut total = 0.0;
                for i in 1..n - 1 {
                    total += triangle_area(vertices[0], vertices[i], vertices[i + 1]);
                    cum.push(total);
                }
                let u = rng.next_f64() * total;
                let k = cum.partition_point(|&c| c < u).min(n - 3);
                let (a, b, c) = (vertices[0], vertices[k + 1], vertices[k + 2]);
                let mut r1 = rng.next_f64();
                let mut r2 = rng.next_f64();
                if r1 + r2 > 1.0 {
                    r1 = 1.0 - r1;
                    r2 = 1.0 - r2;
                }
                [
                    a[0] + r1 * (b[0] - a[0]) + r2 * (c[0] - a[0]),
                    a[1] + r1 * (b[1] - a[1]) + r2 * (c[1] - a[1]),
                ]
            }
        }
    }

    /// Per-vertex map `v -> scale * v + shift` with positive scale.
    pub fn affine_transform(&self, scale: [f64; 2], shift: [f64; 2]) -> Result<FeasibleSet> {
        if scale[0] <= 0.0 || scale[1] <= 0.0 {
            return Err(Error::NonPositiveScale(scale[0], scale[1]));
        }
        let map = |p: &Point| [scale[0] * p[0] + shift[0], scale[1] * p[1] + shift[1]];
        Ok(match self {
            FeasibleSet::Polygon { vertices } => FeasibleSet::Polygon {
                vertices: vertices.iter().map(map).collect(),
            },
            FeasibleSet::Segment { endpoints } => FeasibleSet::Segment {
                endpoints: [map(&endpoints[0]), map(&endpoints[1])],
            },
        })
    }

    /// True iff the vertex set is invariant (as a set) under swapping the
    /// two coordinates, within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let pts: Vec<Point> = match self {
            FeasibleSet::Polygon { vertices } => vertices.clone(),
            FeasibleSet::Segment { endpoints } => endpoints.to_vec(),
        };
        pts.iter().all(|p| {
            let swapped = [p[1], p[0]];
            pts.iter()
                .any(|q| (q[0] - swapped[0]).abs() <= tol && (q[1] - swapped[1]).abs() <= tol)
        })
    }
}

/// Strict Pareto frontier of a polygon domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoBoundary {
    /// Boundary vertices from the coordinate-1 maximizer to the
    /// coordinate-2 maximizer.
    pub chain: Vec<Point>,
    /// Slope bound of the frontier; diagnostic only.
    pub lipschitz_lambda: f64,
}

impl ParetoBoundary {
    fn validate(&self, all_vertices: &[Point]) -> Result<()> {
        for w in self.chain.windows(2) {
            if w[1][0] > w[0][0] + GEOM_TOL || w[1][1] < w[0][1] - GEOM_TOL {
                return Err(Error::InvalidDomain(
                    "pareto chain is not monotone".into(),
                ));
            }
        }
        for p in &self.chain {
            if all_vertices
                .iter()
                .any(|q| q[0] > p[0] + GEOM_TOL && q[1] > p[1] + GEOM_TOL)
            {
                return Err(Error::InvalidDomain(
                    "pareto chain point is strictly dominated".into(),
                ));
            }
        }
        Ok(())
    }

    /// Euclidean distance to the nearest point of the chain (segments
    /// included).
    pub fn distance_to(&self, p: Point) -> f64 {
        if self.chain.len() == 1 {
            let c = self.chain[0];
            return ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt();
        }
        self.chain
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

#[inline]
pub fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

pub fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * cross(a, b, c).abs()
}

/// Shoelace area of a simple polygon (positive for CCW vertex order).
pub fn polygon_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

/// Sutherland-Hodgman clip of a convex polygon against the half-plane
/// `n . p <= c`.
pub fn clip_halfplane(vertices: &[Point], normal: [f64; 2], offset: f64) -> Vec<Point> {
    let inside = |p: &Point| normal[0] * p[0] + normal[1] * p[1] <= offset;
    let mut out = Vec::with_capacity(vertices.len() + 1);
    let n = vertices.len();
    for i in 0..n {
        let cur = vertices[i];
        let next = vertices[(i + 1) % n];
        let cur_in = inside(&cur);
        let next_in = inside(&next);
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in {
            let fc = normal[0] * cur[0] + normal[1] * cur[1] - offset;
            let fn_ = normal[0] * next[0] + normal[1] * next[1] - offset;
            let t = fc / (fc - fn_);
            out.push(lerp(cur, next, t));
        }
    }
    out
}

/// Clip a convex polygon to an axis-aligned rectangle.
pub fn clip_rect(vertices: &[Point], lo: Point, hi: Point) -> Vec<Point> {
    let mut poly = vertices.to_vec();
    for (normal, offset) in [
        ([1.0, 0.0], hi[0]),
        ([-1.0, 0.0], -lo[0]),
        ([0.0, 1.0], hi[1]),
        ([0.0, -1.0], -lo[1]),
    ] {
        if poly.is_empty() {
            break;
        }
        poly = clip_halfplane(&poly, normal, offset);
    }
    poly
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = lerp(a, b, t);
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Standard small domains used throughout the tests and the CLI.
pub mod builtin {
    use super::FeasibleSet;

    pub fn triangle() -> FeasibleSet {
        FeasibleSet::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] }
    }

    pub fn unit_square() -> FeasibleSet {
        FeasibleSet::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        }
    }

    pub fn pentagon() -> FeasibleSet {
        FeasibleSet::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [0.5, 1.0], [0.0, 1.0]],
        }
    }
}
