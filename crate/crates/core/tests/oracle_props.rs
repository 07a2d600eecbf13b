use num_traits::Zero;
use proptest::prelude::*;

use gmdet::cli::expr::parse_expr;
use gmdet::funcfield::FieldElem;
use gmdet::linalg::Matrix;
use gmdet::oracle::{
    commutator_identity_check, companion_power_trace, companion_trace, euler_residue_trace, lemma62_sum, MatPolyU,
    Sampler,
};

fn names() -> Vec<String> {
    vec!["x".into(), "alpha".into(), "y1".into()]
}

fn poly_strategy() -> impl Strategy<Value = FieldElem> {
    prop::collection::vec((-9i64..=9, 1i64..=4, 0i32..3, 0i32..3, 0i32..2), 1..4).prop_map(|terms| {
        terms.into_iter().fold(FieldElem::from_int(0), |acc, (n, d, e0, e1, e2)| {
            let c = &FieldElem::from_int(n) / &FieldElem::from_int(d);
            let m = &(&FieldElem::var(0).pow(e0) * &FieldElem::var(1).pow(e1)) * &FieldElem::var(2).pow(e2);
            &acc + &(&c * &m)
        })
    })
}

fn field_strategy() -> impl Strategy<Value = FieldElem> {
    (poly_strategy(), poly_strategy()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_then_parse_is_identity(v in field_strategy()) {
        let text = v.render(&names());
        prop_assert_eq!(parse_expr(&text, &names()).unwrap(), v.clone());
        prop_assert_eq!(v.render(&names()), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn companion_trace_is_the_residue_at_infinity(seed in any::<u64>(), r in 1usize..=3, m in 1usize..=4, dh in 0usize..=5) {
        let mut smp = Sampler::new(seed, 1);
        let g = smp.poly_with_invertible_leading(r, m);
        let h = smp.poly(r, dh);
        prop_assert_eq!(companion_trace(&g, &h).unwrap().trace(), euler_residue_trace(&g, &h).unwrap());
    }

    #[test]
    fn composition_sum_matches_companion_powers(seed in any::<u64>(), r in 1usize..=2, m in 1usize..=4, p in 1u32..=6) {
        let mut smp = Sampler::new(seed, 1);
        let a: Vec<_> = (0..m).map(|_| smp.matrix(r)).collect();
        prop_assert_eq!(lemma62_sum(&a, p), companion_power_trace(&a, p));
    }

    #[test]
    fn commutator_top_term_is_traceless(seed in any::<u64>(), r in 1usize..=2, m in 1usize..=3) {
        let mut smp = Sampler::new(seed, 1);
        let full = smp.poly_with_invertible_leading(r, m);
        let mut cs = full.coeffs().to_vec();
        cs[0] = Matrix::zeros(r, r);
        let a = MatPolyU::new(r, cs);
        let b = smp.commutator_partner(&a).unwrap();
        prop_assert!(commutator_identity_check(&a, &b).unwrap().is_zero());
    }
}

#[test]
fn trace_of_companion_is_minus_first_coefficient() {
    let mut smp = Sampler::new(5, 1);
    for r in 1..=2 {
        for m in 1..=4 {
            let a: Vec<_> = (0..m).map(|_| smp.matrix(r)).collect();
            assert_eq!(companion_power_trace(&a, 1), a[0].neg());
            assert_eq!(lemma62_sum(&a, 1), a[0].neg());
        }
    }
}
