use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use qrees::field::binomial;
use qrees::geometry::ell_value;
use qrees::parse::parse_polynomial;
use qrees::saturation::diff_saturate;
use qrees::{Extended, FieldSpec, Ideal, Polynomial, QReesAlgebra, Ring, Scalar, Weight};

fn q2() -> Arc<Ring> {
    Ring::new(FieldSpec::Rationals, ["x", "y"])
}

fn poly_in(r: Arc<Ring>, terms: Vec<((u32, u32), i64)>) -> Polynomial {
    Polynomial::from_terms(
        &r,
        terms
            .into_iter()
            .map(|((a, b), c)| (vec![a, b], Scalar::from_integer(BigInt::from(c)))),
    )
}

fn arb_poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -3i64..=3), 1..5).prop_map(|t| poly_in(q2(), t))
}

fn arb_nonzero_poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    arb_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_weight() -> impl Strategy<Value = Weight> {
    (1i64..=6, 1i64..=2).prop_map(|(n, d)| Weight::new(n, d))
}

fn arb_algebra() -> impl Strategy<Value = QReesAlgebra> {
    prop::collection::vec((arb_nonzero_poly(3), arb_weight()), 1..3)
        .prop_map(|gens| QReesAlgebra::from_pairs(&q2(), gens).unwrap())
}

fn arb_point() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(-2i64..=2, 2).prop_map(|v| v.into_iter().map(|c| Scalar::from_integer(c.into())).collect())
}

fn alpha_pairs() -> impl Strategy<Value = ([u32; 2], [u32; 2])> {
    ([0u32..=2, 0u32..=2], [0u32..=2, 0u32..=2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn print_parse_round_trip(f in arb_poly(4)) {
        let r = q2();
        prop_assert_eq!(parse_polynomial(&r, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn hasse_composition(f in arb_poly(4), (a, b) in alpha_pairs()) {
        // D^a D^b = prod_i C(a_i + b_i, a_i) D^(a+b)
        let lhs = f.hasse_derivative(&b).unwrap().hasse_derivative(&a).unwrap();
        let sum = [a[0] + b[0], a[1] + b[1]];
        let c = binomial(sum[0], a[0]) * binomial(sum[1], a[1]);
        let rhs = f.hasse_derivative(&sum).unwrap().scale(&Scalar::from_integer(c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_is_additive(f in arb_nonzero_poly(3), g in arb_nonzero_poly(3), p in arb_point()) {
        let of = f.order_at_point(&p).unwrap().unwrap();
        let og = g.order_at_point(&p).unwrap().unwrap();
        prop_assert_eq!((&f * &g).order_at_point(&p).unwrap().unwrap(), of + og);
    }

    #[test]
    fn hasse_order_criterion(f in arb_nonzero_poly(3), p in arb_point()) {
        // ord_p(f) is the least |a| with D^a f(p) != 0.
        let ord = f.order_at_point(&p).unwrap().unwrap();
        let mut least = None;
        for total in 0..=6u32 {
            for i in 0..=total {
                let d = f.hasse_derivative(&[i, total - i]).unwrap();
                if !num_traits::Zero::is_zero(&d.evaluate(&p).unwrap()) {
                    least = Some(total);
                }
            }
            if least.is_some() {
                break;
            }
        }
        prop_assert_eq!(least, Some(ord));
    }

    #[test]
    fn divisor_valuation_is_additive(f in arb_nonzero_poly(3), g in arb_nonzero_poly(3), v in 0usize..2) {
        let vf = f.divisor_valuation(v).unwrap();
        let vg = g.divisor_valuation(v).unwrap();
        prop_assert_eq!((&f * &g).divisor_valuation(v).unwrap(), vf + vg);
    }

    #[test]
    fn level_ideals_decrease(j in arb_algebra(), a in arb_weight(), b in arb_weight()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(j.level_ideal(lo).contains_ideal(&j.level_ideal(hi)));
    }

    #[test]
    fn scaling_multiplies_order(j in arb_algebra(), b in arb_weight(), p in arb_point()) {
        let o = j.ord_at_point(&p).unwrap();
        let scaled = j.scale(b).unwrap().ord_at_point(&p).unwrap();
        let want = match o {
            Extended::Finite(v) => Extended::Finite(v * b),
            Extended::Infinity => Extended::Infinity,
        };
        prop_assert_eq!(scaled, want);
    }

    #[test]
    fn diff_keeps_order_on_sing(j in arb_algebra(), p in arb_point()) {
        let o = j.ord_at_point(&p).unwrap();
        let od = diff_saturate(&j).ord_at_point(&p).unwrap();
        if o >= Extended::Finite(Weight::ONE) {
            prop_assert_eq!(od, o);
        } else {
            prop_assert_eq!(od, Extended::Finite(Weight::ZERO));
        }
    }

    #[test]
    fn ell_matches_valuation_minimum(j in arb_algebra(), v in 0usize..2) {
        let want = j
            .generators()
            .iter()
            .map(|g| Extended::Finite(Weight::int(g.poly.divisor_valuation(v).unwrap() as i64) / g.weight))
            .min()
            .unwrap();
        prop_assert_eq!(ell_value(&j, v), want);
    }

    #[test]
    fn products_are_members(f in arb_nonzero_poly(2), g in arb_nonzero_poly(2), h in arb_poly(2)) {
        let r = q2();
        let i = Ideal::new(&r, vec![f.clone(), g.clone()]);
        let combo = &(&f * &h) + &(&g * &g);
        prop_assert!(i.contains(&combo));
    }

    #[test]
    fn weight_round_trip(n in 0i64..50, d in 1i64..12) {
        let w = Weight::new(n, d);
        prop_assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
    }
}
