// Decide exactly whether `Q_{m,1} = .. = Q_{m,m} = 0` has a nontrivial projective
// zero at rational λ, and compare that with the closed-form eliminant.
//
// Run with `cargo run --example solver_zero_set`.

use std::collections::BTreeMap;

use polycycle::elimination::{compare_predicates, has_nontrivial_zero, HomSystem};
use polycycle::poly::{rat, Var};
use polycycle::recurrence::r_small;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sys = HomSystem::q_system(3)?;
    for lambda in [
        [rat(2, 1), rat(3, 1), rat(5, 1)],
        [rat(2, 1), rat(3, 1), rat(1, 6)],
        [rat(2, 1), rat(3, 1), rat(1, 11)],
    ] {
        let at: BTreeMap<Var, _> = lambda.iter().enumerate().map(|(i, v)| (Var::Lambda(i + 1), v.clone())).collect();
        let solvable = has_nontrivial_zero(&sys.clone().with_lambda(at))?;
        println!("lambda = ({}, {}, {}): common zero {solvable}", lambda[0], lambda[1], lambda[2]);
    }

    let closed = r_small(3)?;
    let report = compare_predicates(
        closed.space(),
        &closed.distinct_factors(),
        &[],
        200,
        7,
        |p| has_nontrivial_zero(&sys.clone().with_lambda(p.clone())),
        |p| Ok(closed.vanishes_at(p)?),
    )?;
    println!(
        "solver vs eliminant: {}/{} agree, {} points on factors",
        report.agree_count, report.sample_count, report.on_factor_count
    );
    assert!(report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
