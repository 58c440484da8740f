use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use polycycle::poly::{rat, MPoly, Monomial, Var, VariableSpace};
use polycycle::recurrence::{mu_specialize, p_family, q_family, q_step};
use polycycle::saddle::{chain, to_float, Jet, PolycycleModel, SaddleModel};
use proptest::prelude::*;
use rug::Float;

fn space() -> Arc<VariableSpace> {
    VariableSpace::lz(2).unwrap()
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Polynomials in `l1, l2, z1, z2` with at most five terms of degree at most 3 per variable.
fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::array::uniform4(0u32..=3), small_rational()), 0..=5).prop_map(|terms| {
        let s = space();
        let terms = terms.into_iter().map(|(e, c)| {
            let pairs = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect();
            (Monomial::from_pairs(pairs), c)
        });
        MPoly::from_terms(&s, terms)
    })
}

fn point() -> impl Strategy<Value = BTreeMap<Var, BigRational>> {
    prop::array::uniform4(small_rational()).prop_map(|v| space().vars().iter().cloned().zip(v).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitute_then_eval_matches_composed_eval(p in poly(), images in prop::array::uniform4(poly()), at in point()) {
        let s = space();
        let assignments: BTreeMap<Var, MPoly> = s.vars().iter().cloned().zip(images.iter().cloned()).collect();
        let composed: BTreeMap<Var, BigRational> = assignments.iter().map(|(v, q)| (v.clone(), q.eval(&at).unwrap())).collect();
        prop_assert_eq!(p.substitute(&assignments, &s).unwrap().eval(&at).unwrap(), p.eval(&composed).unwrap());
    }

    #[test]
    fn json_round_trip_is_identity(p in poly()) {
        let text = p.to_json_string();
        let back = MPoly::from_json_str(&text).unwrap();
        prop_assert_eq!(back.to_json_string(), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn partial_derivative_is_leibniz(a in poly(), b in poly(), k in 0usize..4) {
        let v = space().var(k).clone();
        let lhs = (&a * &b).partial_derivative(&v).unwrap();
        let rhs = &(&a.partial_derivative(&v).unwrap() * &b) + &(&a * &b.partial_derivative(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_step_is_a_linear_derivation(a in poly(), b in poly(), alpha in small_rational()) {
        let combined = &a.scale(&alpha) + &b;
        prop_assert_eq!(q_step(2, &combined).unwrap(), &q_step(2, &a).unwrap().scale(&alpha) + &q_step(2, &b).unwrap());
        let product = q_step(2, &(&a * &b)).unwrap();
        prop_assert_eq!(product, &(&q_step(2, &a).unwrap() * &b) + &(&a * &q_step(2, &b).unwrap()));
    }

    #[test]
    fn two_saddle_family_vanishes_on_the_first_axis_at_unit_lambda(l in 1usize..=4, lam in small_rational()) {
        // With z2 = 0 the family reduces to the one-variable one, a multiple of λ1 − 1.
        let q = q_family(2, l).unwrap().polys.pop().unwrap();
        let at = BTreeMap::from([(Var::Lambda(1), BigRational::from_integer(BigInt::from(1))), (Var::Lambda(2), lam), (Var::Z(1), rat(3, 2)), (Var::Z(2), rat(0, 1))]);
        prop_assert_eq!(q.eval(&at).unwrap(), rat(0, 1));
    }

    #[test]
    fn jet_composition_is_associative(x0 in 1u32..=40, a in 1u32..=8) {
        let prec = 192;
        let x0 = Float::with_val(prec, x0) / 16u32;
        let order = 5;
        let h = Jet::variable(&x0, order).powf(&(Float::with_val(prec, a) / 4u32)).unwrap();
        let g = Jet::variable(h.value(), order).add_scalar(&Float::with_val(prec, 1)).ln().unwrap();
        let gh = Jet::compose(&g, &h);
        let f = Jet::variable(gh.value(), order).exp();
        let left = Jet::compose(&f, &gh);
        let right = Jet::compose(&Jet::compose(&f, &g), &h);
        for (l, r) in left.coeffs().iter().zip(right.coeffs()) {
            let scale = Float::with_val(prec, l.abs_ref()).max(&Float::with_val(prec, 1));
            prop_assert!(Float::with_val(prec, l - r).abs() / scale < 1e-50);
        }
    }
}

fn lambda_strategy() -> impl Strategy<Value = BigRational> {
    (1i64..=30, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn pure_model(lams: &[BigRational], cs: &[BigRational], jet_order: usize) -> PolycycleModel {
    let saddles = lams
        .iter()
        .zip(cs)
        .map(|(l, c)| SaddleModel::new(l.clone(), c.clone(), rat(0, 1), 1, Vec::new()).unwrap())
        .collect();
    PolycycleModel::new(saddles, 256, jet_order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_log_derivative_matches_central_difference(
        lams in prop::collection::vec(lambda_strategy(), 1..=3),
        cs in prop::collection::vec(lambda_strategy(), 3),
        x in 2i64..=9,
    ) {
        let model = pure_model(&lams, &cs, lams.len() + 1);
        let prec = model.precision_bits;
        let x0 = to_float(&rat(x, 10), prec);
        let h = Float::with_val(prec, Float::i_exp(1, -70));
        let d = chain(&model, &x0).unwrap().d;
        let up = chain(&model, &Float::with_val(prec, &x0 + &h)).unwrap().d[0].clone();
        let down = chain(&model, &Float::with_val(prec, &x0 - &h)).unwrap().d[0].clone();
        let fd = Float::with_val(prec, up - down) / Float::with_val(prec, &h * 2u32);
        let rel = Float::with_val(prec, &fd - &d[1]).abs() / Float::with_val(prec, d[1].abs_ref()).max(&Float::with_val(prec, 1));
        prop_assert!(rel < 1e-35, "relative difference {}", rel.to_f64());
    }

    #[test]
    fn pure_power_chain_matches_closed_form(
        lams in prop::collection::vec(lambda_strategy(), 1..=4),
        cs in prop::collection::vec(lambda_strategy(), 4),
        x in 1i64..=9,
    ) {
        let order = 3;
        let model = pure_model(&lams, &cs, order.max(lams.len() + 1));
        let prec = model.precision_bits;
        let x0 = to_float(&rat(x, 10), prec);
        let ch = chain(&model, &x0).unwrap();
        // Δ(x) = C x^Λ with Λ = Π λ_i and C = c_n (c_{n−1} (..)^{λ_{n−1}})^{λ_n}.
        let mut big_c = Float::with_val(prec, 1);
        let mut big_l = Float::with_val(prec, 1);
        let mut prefix = Float::with_val(prec, 1);
        for (i, (l, c)) in lams.iter().zip(&cs).enumerate() {
            let z_expected = Float::with_val(prec, &prefix / &x0);
            prop_assert!(Float::with_val(prec, &ch.z[i] - &z_expected).abs() / &z_expected < 1e-60);
            let lf = to_float(l, prec);
            big_c = to_float(c, prec) * Float::with_val(prec, rug::ops::Pow::pow(&big_c, &lf));
            big_l *= &lf;
            prefix *= &lf;
        }
        let delta = ch.delta();
        for k in 0..=delta.order() {
            // k-th derivative: C Λ(Λ−1)..(Λ−k+1) x^{Λ−k}.
            let mut falling = Float::with_val(prec, 1);
            for j in 0..k {
                falling *= Float::with_val(prec, &big_l - j as u32);
            }
            let exponent = Float::with_val(prec, &big_l - k as u32);
            let expected = Float::with_val(prec, &big_c * &falling) * Float::with_val(prec, rug::ops::Pow::pow(&x0, &exponent));
            let got = delta.derivative(k);
            let natural = Float::with_val(prec, delta.value() / Float::with_val(prec, rug::ops::Pow::pow(&x0, k as u32)));
            let scale = Float::with_val(prec, expected.abs_ref()).max(&natural);
            prop_assert!(Float::with_val(prec, &got - &expected).abs() / scale < 1e-60, "k = {k}");
        }
    }
}

#[test]
fn mu_specialization_commutes_with_generation_for_three_saddles() {
    let p = p_family(3, 3).unwrap();
    let q = q_family(3, 3).unwrap();
    for l in 1..=3 {
        assert_eq!(&mu_specialize(p.get(l).unwrap()).unwrap(), q.get(l).unwrap());
    }
}
