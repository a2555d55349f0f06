mod common;

use proptest::prelude::*;
use tormono::bundles::{fiber_product, isomorphic, IsoResult, TorusBundle};
use tormono::exactmat::Unimodular;

use common::{root_one, slnz};

fn bundle(u: Unimodular) -> TorusBundle {
    TorusBundle::new(u)
}

fn conj(u: &Unimodular, q: &Unimodular) -> TorusBundle {
    TorusBundle::new(Unimodular::new(q.conjugate(u.as_mat())).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fiber_product_is_associative(a in slnz(1, 0), b in slnz(2, 8), c in slnz(2, 8)) {
        let (a, b, c) = (bundle(a), bundle(b), bundle(c));
        prop_assert_eq!(
            fiber_product(&fiber_product(&a, &b), &c),
            fiber_product(&a, &fiber_product(&b, &c))
        );
    }

    #[test]
    fn conjugate_monodromies_are_isomorphic_n2(a in slnz(2, 14), q in slnz(2, 10)) {
        let r = isomorphic(&bundle(a.clone()), &conj(&a, &q), 16).unwrap();
        match r {
            IsoResult::Iso(p) => prop_assert_eq!(p.conjugate(a.as_mat()), q.conjugate(a.as_mat())),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn conjugate_monodromies_are_isomorphic_root_one(a in root_one(6), q in slnz(3, 8)) {
        let b = conj(&a, &q);
        match isomorphic(&bundle(a.clone()), &b, 16).unwrap() {
            IsoResult::Iso(p) => prop_assert_eq!(&p.conjugate(a.as_mat()), b.monodromy().as_mat()),
            IsoResult::Unknown { .. } => {
                // only a single Jordan block of size 3 reaches the bounded search
                let n = a.as_mat() - &tormono::exactmat::IMat::identity(3);
                prop_assert!(!(&n * &n).is_zero());
            }
            IsoResult::NotIso(inv) => prop_assert!(false, "conjugates declared distinct: {}", inv),
        }
    }

    #[test]
    fn isomorphism_is_symmetric(a in slnz(3, 6), b in slnz(3, 6)) {
        let (x, y) = (bundle(a), bundle(b));
        let l = isomorphic(&x, &y, 4).unwrap();
        let r = isomorphic(&y, &x, 4).unwrap();
        // a bounded search may succeed one way only
        if matches!(l, IsoResult::NotIso(_)) || matches!(r, IsoResult::NotIso(_)) {
            prop_assert!(matches!(l, IsoResult::NotIso(_)) && matches!(r, IsoResult::NotIso(_)));
        }
        if let IsoResult::Iso(p) = &l {
            prop_assert_eq!(&p.conjugate(x.monodromy().as_mat()), y.monodromy().as_mat());
        }
        prop_assert_eq!(isomorphic(&x, &x, 4).unwrap(), IsoResult::Iso(Unimodular::identity(3)));
    }
}
