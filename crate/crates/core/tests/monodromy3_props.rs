mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use tormono::exactmat::{IVec, Unimodular};
use tormono::monodromy3::{
    ao_congruence, ao_conjugator, ao_similar, ext_split_test, newman_reduce, shape, split_congruence,
};
use tormono::polyint::{cubic_case, Trichotomy};

use common::{root_one, sl2};

fn row(x: i64, y: i64) -> IVec {
    IVec::from_i64(&[x, y])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stated_congruence_formula(b in -40i64..=40, a2 in sl2(12)) {
        let m = a2.m();
        let r = ao_congruence(&IVec(vec![BigInt::zero(), BigInt::from(b)]), &a2);
        let bb = BigInt::from(b);
        prop_assert_eq!(r.values, IVec(vec![&bb * &m.c, &bb * (&m.d + 1)]));
        prop_assert_eq!(r.modulus, &m.a + &m.d + 2);
    }

    #[test]
    fn newman_form_recovers_the_input(a in root_one(10)) {
        let rf = newman_reduce(&a, 1).unwrap();
        prop_assert_eq!(&rf.original(), a.as_mat());
        let f = rf.matrix();
        prop_assert!(f.get(1, 0).is_zero() && f.get(2, 0).is_zero());
    }

    #[test]
    fn split_criterion_is_the_ext_test(x in -8i64..=8, y in -8i64..=8, a2 in sl2(10)) {
        prop_assume!(a2.trace() != BigInt::from(2));
        let a = row(x, y);
        prop_assert_eq!(split_congruence(&a, &a2).holds, ext_split_test(&a, &a2).unwrap().integral);
    }

    #[test]
    fn conjugators_verify_and_similarity_is_symmetric(
        x in -6i64..=6, y in -6i64..=6, u in -6i64..=6, v in -6i64..=6, a2 in sl2(8),
    ) {
        prop_assume!(a2.trace() != BigInt::from(2));
        let (a, b) = (row(x, y), row(u, v));
        if let Some(p) = ao_conjugator(&a, &b, &a2).unwrap() {
            prop_assert_eq!(p.conjugate(&shape(1, &a, a2.m())), shape(1, &b, a2.m()));
        }
        prop_assert_eq!(ao_similar(&a, &b, &a2).unwrap(), ao_similar(&b, &a, &a2).unwrap());
    }

    #[test]
    fn similarity_sees_through_translations(x in -6i64..=6, y in -6i64..=6, s in -4i64..=4, t in -4i64..=4, a2 in sl2(8)) {
        prop_assume!(a2.trace() != BigInt::from(2));
        // [[1, a], [0, A₂]] conjugated by [[1, w], [0, I]] moves a to a + w(A₂ − I)
        let shift = a2.m().sub(&tormono::sl2z::M2::identity());
        let w = shift.row_mul(&(BigInt::from(s), BigInt::from(t)));
        let a = row(x, y);
        let b = IVec(vec![&a.0[0] + w.0, &a.0[1] + w.1]);
        prop_assert!(ao_similar(&a, &b, &a2).unwrap());
    }
}

#[test]
fn root_one_strategy_has_root_one() {
    use proptest::strategy::ValueTree;
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..20 {
        let a: Unimodular = root_one(6).new_tree(&mut runner).unwrap().current();
        let f = tormono::exactmat::charpoly(a.as_mat()).unwrap();
        assert_eq!(cubic_case(&f).unwrap(), Trichotomy::RootOne);
    }
}
