mod common;

use num_traits::One;
use proptest::prelude::*;
use tormono::classify::classify_decomposable;
use tormono::exactmat::{det, IMat, Unimodular};
use tormono::oracle::{brute_block_split, brute_similarity, random_slnz};

use common::{root_one, slnz};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_slnz_is_special_and_growth_is_bounded(n in 1usize..=4, steps in 0usize..30, seed in any::<u64>()) {
        let u = random_slnz(n, steps, seed);
        prop_assert!(det(u.as_mat()).unwrap().is_one());
        // each transvection at most doubles the largest entry
        prop_assert!(u.as_mat().max_abs() <= num_bigint::BigInt::from(1u64 << steps.min(62)));
        prop_assert_eq!(u, random_slnz(n, steps, seed));
    }

    #[test]
    fn similarity_witnesses_verify(a in slnz(3, 8), q in slnz(3, 4)) {
        let b = q.conjugate(a.as_mat());
        let r = brute_similarity(a.as_mat(), &b, 3).unwrap();
        if let Some(p) = r.found() {
            prop_assert_eq!(&(a.as_mat() * p.as_mat()), &(p.as_mat() * &b));
        }
    }

    #[test]
    fn block_split_agrees_with_classifier(a in root_one(4)) {
        let v = classify_decomposable(&a, 16).unwrap();
        let r = brute_block_split(a.as_mat(), 6).unwrap();
        if let Some(p) = r.found() {
            prop_assert!(v.is_decomposable(), "oracle split {} but classifier says {}", p.as_mat(), v.label());
            prop_assert!(p.conjugate(a.as_mat()).is_block_diagonal(&[1, 2]));
        }
    }

    #[test]
    fn direct_sums_split_in_dimension_four(a in slnz(3, 8)) {
        let v = IMat::identity(1).direct_sum(a.as_mat());
        let r = brute_block_split(&v, 4).unwrap();
        let p: &Unimodular = r.found().expect("(1) always splits off");
        prop_assert!(p.conjugate(&v).is_block_diagonal(&[1, 3]));
    }
}
