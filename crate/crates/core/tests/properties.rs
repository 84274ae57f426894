//! Randomized algebraic laws: field axioms for the scalars, the bar and
//! reversal symmetries, the skew-derivation product rules, ideal
//! stability, and the parameter-family transform.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use quasik_core::root::RootDatum;
use quasik_core::satake::{ParameterFamily, SatakeDiagram};
use quasik_core::scalar::{q_binomial, RatFuncQ};
use quasik_core::uplus::{enumerate_words, serre_element, ComplementOrder, UPlusElt, WeightBases};
use quasik_core::Weight;

/// Small Laurent polynomials in `q`.
fn laurent() -> impl Strategy<Value = RatFuncQ> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..3).prop_map(|terms| {
        let mut acc = RatFuncQ::zero();
        for (a, e) in terms {
            acc = &acc + &(&RatFuncQ::from_int(a) * &RatFuncQ::q_pow(e));
        }
        acc
    })
}

/// Arbitrary field elements: ratios of small Laurent polynomials.
fn scalar() -> impl Strategy<Value = RatFuncQ> {
    (
        laurent(),
        laurent().prop_filter("nonzero denominator", |v| !v.is_zero()),
    )
        .prop_map(|(a, b)| a.checked_div(&b).expect("denominator is nonzero"))
}

/// A random homogeneous element of `U^+` for the given rank-2 datum,
/// together with its weight.
fn homogeneous(rank: usize) -> impl Strategy<Value = (Weight, UPlusElt)> {
    let coords = prop::collection::vec(0i64..=2, rank);
    (
        coords,
        prop::collection::vec((any::<prop::sample::Index>(), laurent()), 1..3),
    )
        .prop_map(move |(coords, picks)| {
            let mut mu = Weight(coords);
            if mu.height() == 0 {
                mu.0[0] = 1;
            }
            let words = enumerate_words(&mu);
            let mut elt = UPlusElt::zero();
            for (index, coeff) in picks {
                elt = elt.add(&UPlusElt::from_terms([(
                    words[index.index(words.len())].clone(),
                    coeff,
                )]));
            }
            (mu, elt)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_hold(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, RatFuncQ::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), RatFuncQ::one());
        }
    }

    #[test]
    fn bar_is_a_field_involution(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn canonical_strings_round_trip(a in scalar()) {
        let reparsed: RatFuncQ = a.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn balanced_binomials_are_bar_invariant(m in 0i64..=8, s in 0i64..=8, d in 1i64..=3) {
        prop_assume!(s <= m);
        let value = q_binomial(m, s, d).unwrap();
        prop_assert_eq!(value.bar(), value);
    }

    #[test]
    fn reversal_and_bar_are_involutive_antihomomorphisms(
        (_, x) in homogeneous(2),
        (_, y) in homogeneous(2),
    ) {
        prop_assert_eq!(x.sigma().sigma(), x.clone());
        prop_assert_eq!(x.bar().bar(), x.clone());
        prop_assert_eq!(x.mul(&y).sigma(), y.sigma().mul(&x.sigma()));
        prop_assert_eq!(x.mul(&y).bar(), x.bar().mul(&y.bar()));
    }

    #[test]
    fn skew_derivations_satisfy_the_product_rules(
        (mu_x, x) in homogeneous(2),
        (mu_y, y) in homogeneous(2),
        i in 0usize..2,
    ) {
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let alpha_i = Weight::simple(2, i);
        let product = x.mul(&y);
        let right = x
            .skew_r(&datum, i)
            .mul(&y)
            .scale(&RatFuncQ::q_pow(datum.bilinear(&alpha_i, &mu_y)))
            .add(&x.mul(&y.skew_r(&datum, i)));
        prop_assert_eq!(product.skew_r(&datum, i), right);
        let left = x
            .skew_ir(&datum, i)
            .mul(&y)
            .add(&x.mul(&y.skew_ir(&datum, i))
                .scale(&RatFuncQ::q_pow(datum.bilinear(&alpha_i, &mu_x))));
        prop_assert_eq!(product.skew_ir(&datum, i), left);
    }

    #[test]
    fn bar_exchanges_the_two_derivations((mu, x) in homogeneous(2), i in 0usize..2) {
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let alpha_i = Weight::simple(2, i);
        let twist = RatFuncQ::q_pow(datum.bilinear(&alpha_i, &mu.sub(&alpha_i)));
        prop_assert_eq!(
            x.bar().skew_ir(&datum, i),
            x.skew_r(&datum, i).bar().scale(&twist)
        );
    }

    #[test]
    fn the_relation_ideal_absorbs_products((_, x) in homogeneous(2), (_, y) in homogeneous(2)) {
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let bases = WeightBases::new(datum.clone(), ComplementOrder::Lex);
        let serre = serre_element(&datum, 0, 1);
        prop_assert!(bases.is_zero_mod(&x.mul(&serre).mul(&y)));
    }

    #[test]
    fn derived_families_are_admissible_fixed_points(free in laurent()) {
        prop_assume!(!free.is_zero());
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let diagram = Arc::new(SatakeDiagram::new(datum, &[], &[1, 0]).unwrap());
        let family = ParameterFamily::make_bar_admissible(
            &diagram,
            &BTreeMap::from([(1, free)]),
        )
        .unwrap();
        prop_assert!(family.is_bar_admissible(&diagram));
        prop_assert_eq!(family.companion(&diagram), family.clone());
        // Rescaling leaves the admissible set but breaks the fixed point;
        // the transform stays involutive.
        let scaled = ParameterFamily::new(
            &diagram,
            family.entries().map(|(i, c)| (i, c * &RatFuncQ::q())).collect(),
        )
        .unwrap();
        prop_assert!(!scaled.is_bar_admissible(&diagram));
        prop_assert_eq!(scaled.companion(&diagram).companion(&diagram), scaled);
    }
}
