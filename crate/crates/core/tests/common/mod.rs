#![allow(dead_code)]

use proptest::prelude::*;
use tormono::exactmat::{IMat, IVec, Unimodular};
use tormono::monodromy3::shape;
use tormono::oracle::random_slnz;
use tormono::sl2z::{M2, SL2};

pub fn lit(s: &str) -> IMat {
    s.parse().unwrap()
}

pub fn slnz(n: usize, max_steps: usize) -> impl Strategy<Value = Unimodular> {
    (0..=max_steps, any::<u64>()).prop_map(move |(k, s)| random_slnz(n, k, s))
}

pub fn sl2(max_steps: usize) -> impl Strategy<Value = SL2> {
    slnz(2, max_steps).prop_map(|u| SL2::from_imat(u.as_mat()).unwrap())
}

/// `[[1, a], [0, A₂]]` conjugated by a random `Q`: hits the eigenvalue-1 case
/// far more often than a plain random walk.
pub fn root_one(max_steps: usize) -> impl Strategy<Value = Unimodular> {
    (-6i64..=6, -6i64..=6, sl2(8), slnz(3, max_steps)).prop_map(|(x, y, a2, q)| {
        let f = shape(1, &IVec::from_i64(&[x, y]), a2.m());
        Unimodular::new(q.conjugate(&f)).unwrap()
    })
}

/// A mix of random walks and eigenvalue-1 shapes in `SL(3, Z)`.
pub fn sl3_mixed() -> impl Strategy<Value = Unimodular> {
    prop_oneof![slnz(3, 14), root_one(6)]
}

pub fn m2(a: i64, b: i64, c: i64, d: i64) -> M2 {
    M2::from_i64(a, b, c, d)
}
