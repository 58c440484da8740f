//! End-to-end acceptance suite: nine criteria, each timed against its budget.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use polycycle::cli::{run, Command, Flags, RunConfig};
use polycycle::elimination::{compare_predicates, eliminant_n2, eliminant_n3, eliminant_n4, has_nontrivial_zero, newton_no_common_zero, HomSystem};
use polycycle::poly::{rat, BlockKind};
use polycycle::recurrence::{link_property, mu_specialize, p_family, power_sum_limit, power_sum_target, q_family, r_small};
use polycycle::saddle::{
    divergence_probe_n1, double_cycle_family_probe, geometric_grid, identity_check, mu_limit_probe, random_model, PolycycleModel, SaddleModel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn gen_q_checks(n: usize, l: usize) -> Result<serde_json::Value, String> {
    let flags = Flags {
        n: Some(n),
        l: Some(l),
        ..Flags::default()
    };
    let outcome = run(&RunConfig::new(&Command::GenQ(flags), None).map_err(err)?).map_err(err)?;
    ensure(outcome.passed, format!("gen-q n = {n} reported a failed check"))?;
    Ok(outcome.result["checks"].clone())
}

fn exact_regeneration() -> Check {
    let q2 = q_family(2, 2).map_err(err)?;
    ensure(q2.get(1).unwrap().to_string() == "l1*z1 + l2*z2 - z1 - z2", "Q_{2,1} differs")?;
    ensure(
        q2.get(2).unwrap().to_string() == "l1*l2*z1*z2 - l1*z1^2 - l1*z1*z2 - l2*z1*z2 - l2*z2^2 + z1^2 + z1*z2 + z2^2",
        "Q_{2,2} differs",
    )?;
    let c2 = gen_q_checks(2, 2)?;
    ensure(c2["q22_combination_identity"] == true, "Q_{2,2} + (z1 + z2) Q_{2,1} is not (l1 l2 - 1) z1 z2")?;
    let c3 = gen_q_checks(3, 2)?;
    ensure(c3["q32_combination_matches_closed_form"] == true, "combined Q_{3,2} differs")?;
    Ok("Q_{2,1}, Q_{2,2}, combined Q_{3,2} and the combination identity match term for term".into())
}

fn structure_suite() -> Check {
    let mut families = Vec::new();
    for n in 1..=6 {
        families.push(q_family(n, 5).map_err(err)?);
    }
    let mut count = 0;
    for fam in &families {
        for (k, q) in fam.polys.iter().enumerate() {
            let l = k + 1;
            ensure(
                q.is_homogeneous_in(BlockKind::Z, l as u32),
                format!("Q_{{{},{l}}} is not homogeneous of degree {l}", fam.n),
            )?;
            ensure(q.is_integral(), format!("Q_{{{},{l}}} has a non-integer coefficient", fam.n))?;
            count += 1;
        }
    }
    let mut links = 0;
    for pair in families.windows(2) {
        for c in link_property(&pair[1], &pair[0]).map_err(err)? {
            ensure(c.holds, format!("link fails for n = {}, l = {}, j = {}, {:?}", pair[1].n, c.l, c.j, c.branch))?;
            links += 1;
        }
    }
    Ok(format!("{count} polynomials homogeneous and integral, {links} link specializations hold"))
}

fn route_equivalence() -> Check {
    for n in 1..=4 {
        let p = p_family(n, 4).map_err(err)?;
        let q = q_family(n, 4).map_err(err)?;
        for l in 1..=4 {
            ensure(
                mu_specialize(p.get(l).unwrap()).map_err(err)? == *q.get(l).unwrap(),
                format!("n = {n}, l = {l}"),
            )?;
        }
    }
    Ok("mu-specialized P_{n,l} equals Q_{n,l} for n, l <= 4".into())
}

fn small_eliminants() -> Check {
    let e2 = eliminant_n2().map_err(err)?;
    ensure(
        e2.poly == e2.closed_form.expand() && e2.poly.to_string() == "l1 - 1",
        "one-variable eliminant is not l1 - 1",
    )?;
    let e3 = eliminant_n3().map_err(err)?;
    ensure(e3.matches_closed_form(), "two-variable eliminant factors differ")?;
    let e4 = eliminant_n4().map_err(err)?;
    ensure(
        e4.combined_matches && e4.same_ideal && e4.linear_factor_matches && e4.determinant_matches,
        "three-variable pipeline step differs",
    )?;
    ensure(e4.r_star.same_factors(&e4.closed_form), "three-variable eliminant factors differ")?;

    let closed = r_small(3).map_err(err)?;
    let sys = HomSystem::q_system(3).map_err(err)?;
    let report = compare_predicates(
        closed.space(),
        &closed.distinct_factors(),
        &[],
        1000,
        2024,
        |p| has_nontrivial_zero(&sys.clone().with_lambda(p.clone())),
        |p| Ok(closed.vanishes_at(p)?),
    )
    .map_err(err)?;
    ensure(
        report.sample_count >= 1000 && report.disagreements.is_empty() && report.passed(),
        format!("{} disagreements", report.disagreements.len()),
    )?;
    Ok(format!(
        "exact eliminants for 1 and 2 variables; 3 variables: {}/{} samples agree ({} on factors, {} random)",
        report.agree_count, report.sample_count, report.on_factor_count, report.random_count
    ))
}

fn power_sums_and_newton() -> Check {
    let mut limits = 0;
    for n in 2..=8 {
        for l in 1..n {
            ensure(
                power_sum_limit(n, l).map_err(err)? == power_sum_target(n, l).map_err(err)?,
                format!("power sum limit n = {n}, l = {l}"),
            )?;
            limits += 1;
        }
    }
    for m in 1..=8 {
        let d = newton_no_common_zero(m).map_err(err)?;
        ensure(
            d.steps.len() == m && d.vieta_holds && d.collapses_to_power && d.only_zero_root,
            format!("derivation incomplete for m = {m}"),
        )?;
        ensure(d.no_common_zero, format!("m = {m}"))?;
    }
    Ok(format!("{limits} power-sum limits exact; Newton derivation complete for m <= 8"))
}

fn saddle_limits() -> Check {
    let grid = geometric_grid(&rat(1, 10), &rat(1, 10), 6);
    let bound = 2f64.powi(-200);
    let pure = PolycycleModel::new(
        [rat(3, 2), rat(1, 3), rat(7, 2)]
            .into_iter()
            .map(SaddleModel::pure_power)
            .collect::<Result<_, _>>()
            .map_err(err)?,
        256,
        5,
    )
    .map_err(err)?;
    let mut worst: f64 = 0.0;
    for i in 1..=3 {
        for q in 1..=4 {
            let rep = mu_limit_probe(&pure, i, q, &grid).map_err(err)?;
            let max = rep.estimate_errors.iter().copied().fold(rep.error, f64::max);
            ensure(max <= bound, format!("pure saddle {i}, q = {q}: error {max:e}"))?;
            worst = worst.max(max);
        }
    }
    let corrected = PolycycleModel::from_json_str(
        r#"{"saddles": [{"lambda": "3/2", "c": "2", "corrections": ["1/2", "-1/3"]}, {"lambda": "1/4", "corrections": ["1/10"]}], "jet_order": 5}"#,
    )
    .map_err(err)?;
    let mut worst_corrected: f64 = 0.0;
    for i in 1..=2 {
        for q in 1..=4 {
            let rep = mu_limit_probe(&corrected, i, q, &grid).map_err(err)?;
            ensure(rep.within(1e-8), format!("corrected saddle {i}, q = {q}: extrapolated error {:e}", rep.error))?;
            worst_corrected = worst_corrected.max(rep.error);
        }
    }
    Ok(format!(
        "pure-power error <= {worst:.1e} (bound 2^-200), corrected extrapolation error <= {worst_corrected:.1e}"
    ))
}

fn identity_at_points() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = k % 4 + 1;
        let rm = random_model(n, 5, 256, &mut rng).map_err(err)?;
        let rep = identity_check(&rm.model, &rm.x0, 4).map_err(err)?;
        ensure(
            rep.passed && rep.rows.len() == 4,
            format!("model {k} (n = {n}): max relative error {}", rep.max_rel_error),
        )?;
        worst = worst.max(rep.max_rel_error.parse::<f64>().map_err(err)?);
    }
    ensure(worst <= 2f64.powi(-128), format!("worst relative error {worst:e}"))?;
    Ok(format!("50 random models, l <= 4: worst relative error {worst:.2e} (bound 2^-128)"))
}

fn divergence() -> Check {
    let mut parts = Vec::new();
    for (lambda, direction) in [("2", -1), ("5/2", -1), ("1/2", 1), ("1/7", 1), ("1", 0)] {
        let m = PolycycleModel::from_json_str(&format!(r#"{{"saddles": [{{"lambda": "{lambda}"}}], "jet_order": 2}}"#)).map_err(err)?;
        let d = divergence_probe_n1(&m, 30).map_err(err)?;
        ensure(
            d.expected_direction == direction && d.passed,
            format!("lambda = {lambda}: direction {}, slope {}", d.expected_direction, d.tail_slope),
        )?;
        let label = match direction {
            0 => "bounded".to_string(),
            d => format!("{d:+}"),
        };
        parts.push(format!("{lambda}: {label}"));
    }
    let control = PolycycleModel::from_json_str(r#"{"saddles": [{"lambda": "1", "corrections": ["1/3", "-1/5"]}], "jet_order": 2}"#).map_err(err)?;
    let d = divergence_probe_n1(&control, 30).map_err(err)?;
    ensure(d.expected_direction == 0 && d.passed, "corrected unit exponent does not stay bounded")?;
    Ok(format!("divergence directions {}; unit exponent stays bounded", parts.join(", ")))
}

fn double_cycle() -> Check {
    let model = PolycycleModel::from_json_str(r#"{"saddles": [{"lambda": "2"}, {"lambda": "3"}], "jet_order": 3}"#).map_err(err)?;
    let rep = double_cycle_family_probe(&model, &geometric_grid(&rat(1, 10), &rat(1, 10), 6)).map_err(err)?;
    ensure(rep.points.len() == 6 && rep.monotone_decreasing, "min |z_i| is not monotone")?;
    ensure(rep.final_min_ratio < 1e-2, format!("final ratio {}", rep.final_min_ratio))?;
    Ok(format!("min |z_i| / |z| decreases monotonically to {:.2e}", rep.final_min_ratio))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("exact regeneration", Duration::from_secs(1), exact_regeneration),
        ("structure suite", Duration::from_secs(30), structure_suite),
        ("route equivalence", Duration::from_secs(30), route_equivalence),
        ("small eliminants", Duration::from_secs(300), small_eliminants),
        ("power sums and Newton identities", Duration::from_secs(60), power_sums_and_newton),
        ("saddle log-derivative limits", Duration::from_secs(60), saddle_limits),
        ("identity at points", Duration::from_secs(120), identity_at_points),
        ("single-saddle divergence", Duration::from_secs(10), divergence),
        ("double-cycle family probe", Duration::from_secs(120), double_cycle),
    ];
    let mut failures = Vec::new();
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match (&result, elapsed <= *budget) {
            (Ok(_), true) => "PASS",
            _ => "FAIL",
        };
        let detail = match &result {
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        // Written past the test harness's capture so the verdicts show in every run.
        let line = format!(
            "criterion {} {name}: {verdict} ({:.2} s, budget {} s) {detail}\n",
            k + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        std::io::stdout().lock().write_all(line.as_bytes()).expect("stdout is writable");
        if verdict == "FAIL" {
            failures.push(k + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
