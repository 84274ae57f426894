//! Shared fixtures for the benchmark suite: ready-made diagrams and
//! parameter families covering the split, quasi-split, and general cases.

use std::collections::BTreeMap;
use std::sync::Arc;

use quasik_core::{ParameterFamily, RatFuncQ, RootDatum, SatakeDiagram};

/// The split rank-one pair with `c = q^-1`.
pub fn split_rank_one() -> (Arc<SatakeDiagram>, ParameterFamily) {
    let datum = Arc::new(RootDatum::from_name("A1").expect("named Cartan matrix"));
    let diagram = Arc::new(SatakeDiagram::new(datum, &[], &[0]).expect("valid diagram"));
    let params = ParameterFamily::new(&diagram, BTreeMap::from([(0, RatFuncQ::q_pow(-1))]))
        .expect("valid parameters");
    (diagram, params)
}

/// The quasi-split rank-two pair with the node swap, carrying the
/// derived family with free choice `c_2 = 1`.
pub fn quasi_split_rank_two() -> (Arc<SatakeDiagram>, ParameterFamily) {
    let datum = Arc::new(RootDatum::from_name("A2").expect("named Cartan matrix"));
    let diagram = Arc::new(SatakeDiagram::new(datum, &[], &[1, 0]).expect("valid diagram"));
    let params =
        ParameterFamily::make_bar_admissible(&diagram, &BTreeMap::from([(1, RatFuncQ::one())]))
            .expect("valid free choice");
    (diagram, params)
}

/// The rank-three pair with one interior fixed node, carrying the
/// derived family with free choice `c_3 = 1`.
pub fn interior_fixed_rank_three() -> (Arc<SatakeDiagram>, ParameterFamily) {
    let datum = Arc::new(RootDatum::from_name("A3").expect("named Cartan matrix"));
    let diagram = Arc::new(SatakeDiagram::new(datum, &[1], &[2, 1, 0]).expect("valid diagram"));
    let params =
        ParameterFamily::make_bar_admissible(&diagram, &BTreeMap::from([(2, RatFuncQ::one())]))
            .expect("valid free choice");
    (diagram, params)
}
