//! Monte Carlo engine: subgame-perfect-equilibrium values of random games
//! by streaming backward induction over complete k-ary trees.
//!
//! No tree is materialized; a replicate is a depth-first walk whose draws
//! are keyed by node id, so memory is O(depth) and replicates are
//! embarrassingly parallel. For segment domains where the players' payoffs
//! move in opposite directions the walk is a scalar minimax and uses
//! alpha-beta pruning, which returns the identical root value while
//! skipping most of the tree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FeasibleSet, Point};
use crate::rng::{CounterRng, RngStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    /// Coordinate this player maximizes.
    pub fn coord(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }
}

/// Per-height-parity probabilities that Player 1 controls a node.
/// Height is distance to the leaves; Player 1 favored at odd heights means
/// Player 1 acts last.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssignmentModel {
    pub p1_odd_height: f64,
    pub p1_even_height: f64,
}

impl AssignmentModel {
    /// Alternating game: Player 1 at every odd height.
    pub fn alternating() -> Self {
        AssignmentModel { p1_odd_height: 1.0, p1_even_height: 0.0 }
    }

    /// Random controlling player: a fair coin at every node.
    pub fn random() -> Self {
        AssignmentModel { p1_odd_height: 0.5, p1_even_height: 0.5 }
    }

    /// Hybrid game: Player 1 with probability 1/2+eps at odd heights and
    /// 1/2-eps at even heights.
    pub fn hybrid(eps: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::DomainError { name: "eps", value: eps, range: "[0, 1/2]" });
        }
        Ok(AssignmentModel { p1_odd_height: 0.5 + eps, p1_even_height: 0.5 - eps })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p1_odd_height", self.p1_odd_height),
            ("p1_even_height", self.p1_even_height),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::DomainError { name, value: v, range: "[0, 1]" });
            }
        }
        Ok(())
    }

    pub fn p1_at_height(&self, height: u32) -> f64 {
        if height % 2 == 1 {
            self.p1_odd_height
        } else {
            self.p1_even_height
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub domain: FeasibleSet,
    pub assignment: AssignmentModel,
    pub depth: u32,
    pub branching: u32,
}

impl GameSpec {
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.assignment.validate()?;
        if self.depth < 1 {
            return Err(Error::InvalidSpec("depth must be >= 1".into()));
        }
        if self.branching < 2 {
            return Err(Error::InvalidSpec("branching must be >= 2".into()));
        }
        // Node ids must fit in u64.
        if (self.depth as f64 + 1.0) * (self.branching as f64).log2() > 62.0 {
            return Err(Error::InvalidSpec("tree too deep for node addressing".into()));
        }
        Ok(())
    }
}

/// Empirical collection of SPE payoff profiles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueSampleSet {
    pub samples: Vec<Point>,
    pub spec: GameSpec,
    pub seed: u64,
}

impl ValueSampleSet {
    pub fn payoffs(&self, coord: usize) -> Vec<f64> {
        self.samples.iter().map(|p| p[coord]).collect()
    }

    /// Fraction of samples inside the L-infinity box around `center`.
    pub fn empirical_box_mass(&self, center: Point, half_width: f64) -> Result<f64> {
        if self.samples.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        let hits = self
            .samples
            .iter()
            .filter(|p| {
                (p[0] - center[0]).abs() <= half_width && (p[1] - center[1]).abs() <= half_width
            })
            .count();
        Ok(hits as f64 / self.samples.len() as f64)
    }

    /// Checks every sample lies in the domain (within geometric tolerance).
    pub fn validate(&self) -> Result<()> {
        for p in &self.samples {
            if !self.spec.domain.contains(*p) {
                return Err(Error::SampleOutsideDomain(*p));
            }
        }
        Ok(())
    }
}

/// Source of leaf payoffs and controller draws, addressed by node id.
/// Node ids use heap numbering: root is 0, child `j` of node `i` is
/// `i * k + j + 1`, so ids coincide with breadth-first indices.
pub trait GameSource {
    fn controller(&mut self, node: u64, height: u32) -> Player;
    fn leaf_point(&mut self, node: u64) -> Point;
}

/// Counter-based random source keyed by (seed, replicate, node id).
pub struct RandomSource<'a> {
    pub seed: u64,
    pub replicate: u64,
    pub domain: &'a FeasibleSet,
    pub assignment: AssignmentModel,
}

impl GameSource for RandomSource<'_> {
    fn controller(&mut self, node: u64, height: u32) -> Player {
        let mut rng = CounterRng::for_node(self.seed, self.replicate, node);
        if rng.next_f64() < self.assignment.p1_at_height(height) {
            Player::One
        } else {
            Player::Two
        }
    }

    fn leaf_point(&mut self, node: u64) -> Point {
        let mut rng = CounterRng::for_node(self.seed, self.replicate, node);
        self.domain.sample_uniform(&mut rng)
    }
}

/// Replays explicit breadth-first leaf and controller lists.
pub struct ExplicitSource<'a> {
    pub leaves: &'a [Point],
    pub controllers: &'a [Player],
}

impl GameSource for ExplicitSource<'_> {
    fn controller(&mut self, node: u64, _height: u32) -> Player {
        self.controllers[node as usize]
    }

    fn leaf_point(&mut self, node: u64) -> Point {
        self.leaves[node as usize - self.controllers.len()]
    }
}

#[inline]
fn child(node: u64, k: u32, j: u32) -> u64 {
    node * k as u64 + j as u64 + 1
}

fn eval_general<S: GameSource>(src: &mut S, node: u64, height: u32, k: u32) -> Point {
    if height == 0 {
        return src.leaf_point(node);
    }
    let ci = src.controller(node, height).coord();
    let mut best = eval_general(src, child(node, k, 0), height - 1, k);
    for j in 1..k {
        let c = eval_general(src, child(node, k, j), height - 1, k);
        // Ties break toward the first child (probability-zero event).
        if c[ci] > best[ci] {
            best = c;
        }
    }
    best
}

/// Alpha-beta walk for segment domains whose payoff coordinates are
/// strictly opposed. Bounds are on coordinate 1; Player 2 maximizing its
/// own coordinate is then exactly coordinate-1 minimization. Cutoffs are
/// strict, so the returned root value is bit-identical to full backward
/// induction.
fn eval_pruned<S: GameSource>(
    src: &mut S,
    node: u64,
    height: u32,
    k: u32,
    mut alpha: f64,
    mut beta: f64,
) -> Point {
    if height == 0 {
        return src.leaf_point(node);
    }
    let ctrl = src.controller(node, height);
    let mut best = eval_pruned(src, child(node, k, 0), height - 1, k, alpha, beta);
    for j in 1..k {
        match ctrl {
            Player::One => {
                if best[0] > beta {
                    break;
                }
                alpha = alpha.max(best[0]);
                let c = eval_pruned(src, child(node, k, j), height - 1, k, alpha, beta);
                if c[0] > best[0] {
                    best = c;
                }
            }
            Player::Two => {
                if best[0] < alpha {
                    break;
                }
                beta = beta.min(best[0]);
                let c = eval_pruned(src, child(node, k, j), height - 1, k, alpha, beta);
                if c[1] > best[1] {
                    best = c;
                }
            }
        }
    }
    best
}

fn segment_is_opposed(set: &FeasibleSet) -> bool {
    match set {
        FeasibleSet::Segment { endpoints: [a, b] } => (b[0] - a[0]) * (b[1] - a[1]) < 0.0,
        _ => false,
    }
}

/// Root SPE value for an arbitrary source (streaming backward induction).
pub fn spe_value<S: GameSource>(src: &mut S, spec: &GameSpec) -> Point {
    if segment_is_opposed(&spec.domain) {
        eval_pruned(src, 0, spec.depth, spec.branching, f64::NEG_INFINITY, f64::INFINITY)
    } else {
        eval_general(src, 0, spec.depth, spec.branching)
    }
}

/// Scalar alpha-beta specialization of the sampler for opposed segments:
/// leaves are compared through their single parameter t instead of
/// materialized payoff pairs, and deterministic controllers skip the
/// per-node draw (a draw `< 1.0` always passes and `< 0.0` never does,
/// so the skip is exact). `sign` orients t so Player 1 maximizes
/// `sign * t`; negation is exact, so the root t is recovered bit-for-bit.
struct OpposedWalk {
    replicate_key: u64,
    k: u32,
    assignment: AssignmentModel,
    sign: f64,
}

impl OpposedWalk {
    fn eval(&self, node: u64, height: u32, mut alpha: f64, mut beta: f64) -> f64 {
        if height == 0 {
            let t = CounterRng::for_node_keyed(self.replicate_key, node).next_f64();
            return self.sign * t;
        }
        let p = self.assignment.p1_at_height(height);
        let p1 = if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            CounterRng::for_node_keyed(self.replicate_key, node).next_f64() < p
        };
        let k = self.k;
        let mut best = self.eval(child(node, k, 0), height - 1, alpha, beta);
        for j in 1..k {
            if p1 {
                if best > beta {
                    break;
                }
                if best > alpha {
                    alpha = best;
                }
                let c = self.eval(child(node, k, j), height - 1, alpha, beta);
                if c > best {
                    best = c;
                }
            } else {
                if best < alpha {
                    break;
                }
                if best < beta {
                    beta = best;
                }
                let c = self.eval(child(node, k, j), height - 1, alpha, beta);
                if c < best {
                    best = c;
                }
            }
        }
        best
    }
}

fn sample_opposed_segment(spec: &GameSpec, seed: u64, replicate: u64) -> Point {
    let [a, b] = match &spec.domain {
        FeasibleSet::Segment { endpoints } => *endpoints,
        FeasibleSet::Polygon { .. } => unreachable!("caller checked segment_is_opposed"),
    };
    let sign = if b[0] > a[0] { 1.0 } else { -1.0 };
    let walk = OpposedWalk {
        replicate_key: CounterRng::replicate_key(seed, replicate),
        k: spec.branching,
        assignment: spec.assignment,
        sign,
    };
    let v = walk.eval(0, spec.depth, f64::NEG_INFINITY, f64::INFINITY);
    crate::geometry::lerp(a, b, sign * v)
}

/// One Monte Carlo replicate.
pub fn sample_spe_value(spec: &GameSpec, seed: u64, replicate: u64) -> Point {
    if segment_is_opposed(&spec.domain) {
        return sample_opposed_segment(spec, seed, replicate);
    }
    let mut src = RandomSource {
        seed,
        replicate,
        domain: &spec.domain,
        assignment: spec.assignment,
    };
    spe_value(&mut src, spec)
}

/// Parallel Monte Carlo driver; output order is by replicate index
/// regardless of scheduling.
pub fn sample_many(spec: &GameSpec, seed: u64, replicates: u64) -> Result<ValueSampleSet> {
    spec.validate()?;
    let samples: Vec<Point> = (0..replicates)
        .into_par_iter()
        .map(|r| sample_spe_value(spec, seed, r))
        .collect();
    let set = ValueSampleSet { samples, spec: spec.clone(), seed };
    set.validate()?;
    Ok(set)
}

/// Single-threaded variant of [`sample_many`] (identical output).
pub fn sample_many_sequential(spec: &GameSpec, seed: u64, replicates: u64) -> Result<ValueSampleSet> {
    spec.validate()?;
    let samples: Vec<Point> = (0..replicates).map(|r| sample_spe_value(spec, seed, r)).collect();
    let set = ValueSampleSet { samples, spec: spec.clone(), seed };
    set.validate()?;
    Ok(set)
}

fn internal_count(branching: u32, depth: u32) -> usize {
    let k = branching as usize;
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..depth {
        total += level;
        level *= k;
    }
    total
}

/// Textbook backward induction on an explicitly materialized tree.
/// `leaves` has length `branching^depth`; `controllers` one entry per
/// internal node in breadth-first order.
pub fn exact_spe_value(
    leaves: &[Point],
    controllers: &[Player],
    branching: u32,
) -> Result<Point> {
    let k = branching as usize;
    if k < 2 {
        return Err(Error::InvalidSpec("branching must be >= 2".into()));
    }
    let mut depth = 0u32;
    let mut width = 1usize;
    while width < leaves.len() {
        width *= k;
        depth += 1;
    }
    if width != leaves.len() || depth == 0 {
        return Err(Error::LengthMismatch(format!(
            "leaf count {} is not a positive power of {k}",
            leaves.len()
        )));
    }
    if controllers.len() != internal_count(branching, depth) {
        return Err(Error::LengthMismatch(format!(
            "expected {} controllers for depth {depth}, got {}",
            internal_count(branching, depth),
            controllers.len()
        )));
    }
    let mut values = leaves.to_vec();
    // first_id(level) = (k^level - 1) / (k - 1)
    for level in (0..depth).rev() {
        let count = k.pow(level);
        let first_id = (k.pow(level) - 1) / (k - 1);
        let mut next = Vec::with_capacity(count);
        for m in 0..count {
            let ci = controllers[first_id + m].coord();
            let mut best = values[m * k];
            for j in 1..k {
                let c = values[m * k + j];
                if c[ci] > best[ci] {
                    best = c;
                }
            }
            next.push(best);
        }
        values = next;
    }
    Ok(values[0])
}

/// Materializes the breadth-first leaf and controller lists that
/// [`RandomSource`] would produce for a given replicate. Used by the
/// oracle-equivalence harness.
pub fn materialize_streams(
    spec: &GameSpec,
    seed: u64,
    replicate: u64,
) -> (Vec<Point>, Vec<Player>) {
    let k = spec.branching;
    let n_internal = internal_count(k, spec.depth) as u64;
    let n_leaves = (k as u64).pow(spec.depth);
    let mut src = RandomSource {
        seed,
        replicate,
        domain: &spec.domain,
        assignment: spec.assignment,
    };
    let mut controllers = Vec::with_capacity(n_internal as usize);
    // Height of a breadth-first id: root has height `depth`.
    let mut level_first = 0u64;
    let mut level_count = 1u64;
    for level in 0..spec.depth {
        let height = spec.depth - level;
        for id in level_first..level_first + level_count {
            controllers.push(src.controller(id, height));
        }
        // Child 0 of the first node of this level.
        level_first = level_first * k as u64 + 1;
        level_count *= k as u64;
    }
    let leaves: Vec<Point> = (n_internal..n_internal + n_leaves)
        .map(|id| src.leaf_point(id))
        .collect();
    (leaves, controllers)
}
