use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::*;
use crate::poly::rat;

fn f(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

fn saddle(lambda: BigRational, c: BigRational, corrections: Vec<BigRational>) -> SaddleModel {
    SaddleModel::new(lambda, c, rat(0, 1), 1, corrections).unwrap()
}

fn tenths(count: usize) -> Vec<BigRational> {
    geometric_grid(&rat(1, 10), &rat(1, 10), count)
}

#[test]
fn jet_of_square_at_three() {
    let m = SaddleModel::pure_power(rat(2, 1)).unwrap();
    let j = jet_of_map(&m, &Jet::variable(&f(128, 3.0), 4)).unwrap();
    let d: Vec<f64> = j.derivatives().iter().map(Float::to_f64).collect();
    assert_eq!(d, [9.0, 6.0, 2.0, 0.0, 0.0]);
}

#[test]
fn jet_of_square_root_map() {
    let m = saddle(rat(1, 2), rat(2, 1), vec![]);
    let j = jet_of_map(&m, &Jet::variable(&f(128, 4.0), 2)).unwrap();
    assert_eq!(j.value().to_f64(), 4.0);
    assert_eq!(j.derivative(1).to_f64(), 0.5);
}

#[test]
fn identity_jet() {
    let j = Jet::variable(&f(64, 0.25), 3);
    let d: Vec<f64> = j.derivatives().iter().map(Float::to_f64).collect();
    assert_eq!(d, [0.25, 1.0, 0.0, 0.0]);
}

#[test]
fn nonpositive_base_is_a_domain_error() {
    let m = SaddleModel::pure_power(rat(3, 2)).unwrap();
    assert!(matches!(jet_of_map(&m, &Jet::variable(&f(64, -1.0), 2)), Err(SaddleError::Domain(_))));
}

#[test]
fn unit_exponent_has_zero_mu() {
    let m = saddle(rat(1, 1), rat(1, 1), vec![]);
    let mu = m.log_derivative_scaled(&f(128, 0.3), 4).unwrap();
    assert!(mu.iter().all(Float::is_zero));
}

#[test]
fn single_pure_power_chain() {
    let model = PolycycleModel::new(vec![SaddleModel::pure_power(rat(5, 2)).unwrap()], 256, 5).unwrap();
    let ch = chain(&model, &f(256, 0.125)).unwrap();
    assert_eq!(ch.z[0].to_f64(), 8.0);
    for q in 1..=4 {
        let target = to_float(&mu_target(&rat(5, 2), q), 256);
        let err = Float::with_val(256, ch.mu(1, q) - &target).abs();
        assert!(err < Float::with_val(64, Float::i_exp(1, -200)), "q = {q}");
    }
}

#[test]
fn stage_is_named_on_domain_failure() {
    let s1 = SaddleModel::new(rat(2, 1), rat(1, 1), rat(-1, 1), 1, vec![]).unwrap();
    let model = PolycycleModel::new(vec![s1, SaddleModel::pure_power(rat(3, 2)).unwrap()], 128, 3).unwrap();
    match chain(&model, &f(128, 0.5)) {
        Err(SaddleError::Stage { stage, .. }) => assert_eq!(stage, 2),
        other => panic!("expected a stage error, got {other:?}"),
    }
}

#[test]
fn two_saddle_first_derivative() {
    let model = PolycycleModel::new(
        vec![SaddleModel::pure_power(rat(2, 1)).unwrap(), SaddleModel::pure_power(rat(3, 1)).unwrap()],
        256,
        3,
    )
    .unwrap();
    let rep = identity_check(&model, &rat(1, 10), 2).unwrap();
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn identity_on_mixed_three_saddle_model() {
    let s = vec![
        saddle(rat(3, 2), rat(1, 2), vec![rat(1, 8)]),
        SaddleModel::new(rat(2, 3), rat(2, 1), rat(1, 1), -1, vec![rat(-1, 16), rat(1, 32)]).unwrap(),
        saddle(rat(5, 4), rat(1, 1), vec![]),
    ];
    let model = PolycycleModel::new(s, 256, 4).unwrap();
    let rep = identity_check(&model, &rat(1, 4), 3).unwrap();
    let tight = Float::with_val(64, Float::i_exp(1, 20 - 256));
    for row in &rep.rows {
        let err = Float::with_val(64, Float::parse(&row.rel_error).unwrap());
        assert!(err <= tight, "l = {}: {}", row.l, row.rel_error);
    }
}

#[test]
fn affine_chain_has_vanishing_identity() {
    let s: Vec<SaddleModel> = (0..3).map(|_| saddle(rat(1, 1), rat(1, 1), vec![])).collect();
    let model = PolycycleModel::new(s, 128, 4).unwrap();
    let ch = chain(&model, &f(128, 0.5)).unwrap();
    assert!(ch.d[1..].iter().all(Float::is_zero));
    let rep = identity_check(&model, &rat(1, 2), 3).unwrap();
    assert!(rep.rows.iter().all(|r| r.poly_value.parse::<f64>().unwrap() == 0.0));
}

#[test]
fn random_models_satisfy_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for _ in 0..3 {
            let rm = random_model(n, 5, 192, &mut rng).unwrap();
            let rep = identity_check(&rm.model, &rm.x0, 4).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }
}

#[test]
fn pure_power_mu_estimates_are_exact() {
    let model = PolycycleModel::new(vec![SaddleModel::pure_power(rat(7, 3)).unwrap()], 256, 6).unwrap();
    for q in 1..=4 {
        let rep = mu_limit_probe(&model, 1, q, &tenths(6)).unwrap();
        assert!(rep.estimate_errors.iter().all(|e| *e < 1e-60), "{rep:?}");
        assert!(rep.within(1e-60));
    }
}

#[test]
fn corrected_mu_estimates_converge() {
    let model = PolycycleModel::new(vec![saddle(rat(3, 2), rat(1, 1), vec![rat(1, 2)])], 256, 6).unwrap();
    let rep = mu_limit_probe(&model, 1, 2, &tenths(6)).unwrap();
    assert_eq!(rep.target, "-1/2");
    assert!(rep.estimate_errors.windows(2).all(|w| w[1] < w[0]));
    assert!(rep.within(1e-8), "{rep:?}");
}

#[test]
fn unit_exponent_limits_vanish() {
    let model = PolycycleModel::new(vec![saddle(rat(1, 1), rat(1, 1), vec![rat(1, 3), rat(-1, 5)])], 256, 6).unwrap();
    for q in 1..=4 {
        let rep = mu_limit_probe(&model, 1, q, &tenths(6)).unwrap();
        assert_eq!(rep.target, "0");
        assert!(rep.within(1e-8), "{rep:?}");
    }
}

#[test]
fn divergence_directions() {
    let run = |lambda: BigRational| {
        let model = PolycycleModel::new(vec![saddle(lambda, rat(1, 1), vec![])], 256, 2).unwrap();
        divergence_probe_n1(&model, 30).unwrap()
    };
    let up = run(rat(2, 1));
    assert!(up.passed && up.expected_direction == -1, "{up:?}");
    let down = run(rat(1, 2));
    assert!(down.passed && down.expected_direction == 1, "{down:?}");
    let flat = run(rat(1, 1));
    assert!(flat.passed && flat.expected_direction == 0 && flat.spread == 0.0, "{flat:?}");
}

#[test]
fn double_cycle_family_approaches_an_axis() {
    let model = PolycycleModel::new(
        vec![SaddleModel::pure_power(rat(2, 1)).unwrap(), SaddleModel::pure_power(rat(3, 1)).unwrap()],
        256,
        3,
    )
    .unwrap();
    let rep = double_cycle_family_probe(&model, &tenths(6)).unwrap();
    assert!(rep.monotone_decreasing, "{rep:?}");
    assert!(rep.final_min_ratio < 1e-2);
    for p in &rep.points {
        assert!(p.residuals.iter().all(|r| r.abs() <= NEWTON_TOLERANCE));
    }
}

#[test]
fn reciprocal_exponents_are_rejected() {
    let model = PolycycleModel::new(
        vec![SaddleModel::pure_power(rat(2, 1)).unwrap(), SaddleModel::pure_power(rat(1, 2)).unwrap()],
        128,
        3,
    )
    .unwrap();
    assert!(matches!(double_cycle_family_probe(&model, &tenths(3)), Err(SaddleError::Precondition(_))));
}

#[test]
fn model_file_round_trip_and_errors() {
    let text = r#"{"saddles": [{"lambda": "3/2", "c": "1", "tau": "0", "sign": 1, "corrections": ["1/2"]}], "precision_bits": 256, "jet_order": 6}"#;
    let m = PolycycleModel::from_json_str(text).unwrap();
    assert_eq!(m.saddles[0].corrections, vec![rat(1, 2)]);
    assert_eq!(PolycycleModel::from_json_str(&m.to_json_string()).unwrap(), m);

    let field = |s: &str| PolycycleModel::from_json_str(s).unwrap_err().field;
    assert_eq!(field(r#"{"saddles": [{"c": "1"}]}"#), "saddles[0].lambda");
    assert_eq!(field(r#"{"saddles": [{"lambda": "-1"}]}"#), "saddles[0].lambda");
    assert_eq!(field(r#"{"saddles": [{"lambda": "1", "sign": 2}]}"#), "saddles[0].sign");
    assert_eq!(field(r#"{"saddles": [{"lambda": "1", "corrections": ["x"]}]}"#), "saddles[0].corrections[0]");
    assert_eq!(field(r#"{"saddles": [{"lambda": 2}]}"#), "saddles[0].lambda");
    assert_eq!(field(r#"{"saddles": [], "jet_order": 3}"#), "saddles");
    assert_eq!(field(r#"{"saddles": [{"lambda": "2"}], "jet_order": 1}"#), "jet_order");
    assert_eq!(field(r#"{"saddles": [{"lambda": "2"}], "colour": 1}"#), "colour");
}

#[test]
fn richardson_removes_integer_powers() {
    let prec = 128;
    let ratio = f(prec, 0.5);
    let values: Vec<Float> = (0..5)
        .map(|k| {
            let x = Float::with_val(prec, Float::i_exp(1, -k));
            Float::with_val(prec, 3 + Float::with_val(prec, &x * 2u32) - Float::with_val(prec, x.clone() * &x))
        })
        .collect();
    let lim = richardson(&values, &ratio);
    assert!(Float::with_val(prec, lim - 3u32).abs() < 1e-30);
    let _ = BigInt::from(0);
}
