//! Streaming sampler vs explicit backward induction on materialized
//! streams: the same (seed, replicate) must give bit-identical values.

use refgames::geometry::{builtin, FeasibleSet};
use refgames::tree::{
    exact_spe_value, materialize_streams, sample_spe_value, AssignmentModel, GameSpec,
};

fn run_equivalence(domain: FeasibleSet, assignment: AssignmentModel, trials: u64) {
    for depth in 1..=10u32 {
        let spec = GameSpec { domain: domain.clone(), assignment, depth, branching: 2 };
        for rep in 0..trials {
            let streamed = sample_spe_value(&spec, 1234, rep);
            let (leaves, controllers) = materialize_streams(&spec, 1234, rep);
            let exact = exact_spe_value(&leaves, &controllers, 2).unwrap();
            assert_eq!(
                streamed, exact,
                "mismatch: depth {depth}, replicate {rep}, assignment {assignment:?}"
            );
        }
    }
}

#[test]
fn segment_pruned_path_matches_oracle() {
    // Opposed segment exercises the alpha-beta specialization.
    run_equivalence(FeasibleSet::zero_sum_segment(), AssignmentModel::random(), 1000);
}

#[test]
fn segment_alternating_matches_oracle() {
    run_equivalence(FeasibleSet::zero_sum_segment(), AssignmentModel::alternating(), 1000);
}

#[test]
fn polygon_general_path_matches_oracle() {
    run_equivalence(builtin::triangle(), AssignmentModel::random(), 1000);
}

#[test]
fn polygon_hybrid_matches_oracle() {
    run_equivalence(builtin::pentagon(), AssignmentModel::hybrid(0.2).unwrap(), 250);
}

#[test]
fn ternary_branching_matches_oracle() {
    for depth in 1..=6u32 {
        let spec = GameSpec {
            domain: builtin::triangle(),
            assignment: AssignmentModel::random(),
            depth,
            branching: 3,
        };
        for rep in 0..250 {
            let streamed = sample_spe_value(&spec, 9, rep);
            let (leaves, controllers) = materialize_streams(&spec, 9, rep);
            let exact = exact_spe_value(&leaves, &controllers, 3).unwrap();
            assert_eq!(streamed, exact, "depth {depth}, replicate {rep}");
        }
    }
}
