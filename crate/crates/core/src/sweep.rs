//! Ordered data-parallel maps over independent inputs. Without the
//! `parallel` feature both modes run sequentially.

use crate::classify::{classify_decomposable, Verdict};
use crate::error::Result;
use crate::exactmat::Unimodular;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

impl Execution {
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `items.map(f)` in input order, whatever the execution mode.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => parallel_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

pub fn classify_all(ms: &[Unimodular], bound: u32, exec: Execution) -> Vec<Result<Verdict>> {
    map_ordered(ms, exec, |m| classify_decomposable(m, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random_slnz;

    #[test]
    fn modes_agree() {
        let ms: Vec<Unimodular> = (0..40).map(|s| random_slnz(3, 12, s)).collect();
        let a = classify_all(&ms, 16, Execution::Sequential);
        let b = classify_all(&ms, 16, Execution::Parallel);
        assert_eq!(a, b);
        assert_eq!(map_ordered(&[3, 1, 2], Execution::Parallel, |x| x * 10), vec![30, 10, 20]);
    }
}
