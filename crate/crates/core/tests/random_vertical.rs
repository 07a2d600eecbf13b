mod common;

use gmdet::fixtures;
use gmdet::oracle::suites::vertical_suite;
use gmdet::oracle::{companion_point_trace, higgs_point_trace};

#[test]
fn higgs_and_de_rham_traces_agree_up_to_torsion() {
    let (a4, a5) = vertical_suite(1000, 30);
    assert!(a4.passed(), "{a4}");
    assert!(a5.passed(), "{a5}");
    assert_eq!(a4.cases, 30);
}

#[test]
fn exact_decomposition_on_random_connections() {
    let conns = common::random_population(2000, 12).unwrap();
    assert_eq!(common::decomposition(&conns), Ok(12));
    assert_eq!(common::higgs_vs_de_rham(&conns), Ok(12));
}

#[test]
fn dimension_law() {
    assert_eq!(common::dimension_law(50), Ok(50));
}

#[test]
fn local_trace_bridge() {
    for c in [fixtures::single_point(), fixtures::two_point(), fixtures::rank_two()] {
        for i in 0..c.npoints() {
            assert_eq!(higgs_point_trace(&c, i).unwrap(), companion_point_trace(&c, i).unwrap());
        }
    }
    for (name, c) in common::random_population(4000, 8).unwrap() {
        for i in 0..c.npoints() {
            assert_eq!(higgs_point_trace(&c, i).unwrap(), companion_point_trace(&c, i).unwrap(), "{name}");
        }
    }
}
