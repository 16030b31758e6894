//! Serial or data-parallel execution of independent work items.
//!
//! With the `parallel` feature (default) [`Schedule::Parallel`] runs on the
//! rayon pool; without it every schedule runs serially. Callers merge with an
//! associative, commutative reduction so both schedules give identical results.

use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    Serial,
    #[default]
    Parallel,
}

impl Schedule {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Schedule::Parallel
    }
}

impl FromStr for Schedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "serial" => Ok(Schedule::Serial),
            "parallel" => Ok(Schedule::Parallel),
            _ => Err(format!("unknown schedule `{s}` (serial or parallel)")),
        }
    }
}

/// Split `0..count` into chunks of `chunk` items, run `job` on each and fold
/// the results with `reduce`.
pub fn fold_chunks<A, J, R, I>(schedule: Schedule, count: u64, chunk: u64, identity: I, job: J, reduce: R) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    J: Fn(Range<u64>) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = count.div_ceil(chunk);
    let range = move |c: u64| c * chunk..((c + 1) * chunk).min(count);
    #[cfg(feature = "parallel")]
    if schedule.is_parallel() {
        use rayon::prelude::*;
        return (0..chunks)
            .into_par_iter()
            .map(|c| job(range(c)))
            .reduce(&identity, &reduce);
    }
    let _ = schedule;
    (0..chunks).map(|c| job(range(c))).fold(identity(), reduce)
}

/// Map over owned items, then reduce.
pub fn map_reduce<T, A, M, R, I>(schedule: Schedule, items: Vec<T>, identity: I, map: M, reduce: R) -> A
where
    T: Send,
    A: Send,
    I: Fn() -> A + Sync + Send,
    M: Fn(T) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if schedule.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(map).reduce(&identity, &reduce);
    }
    let _ = schedule;
    items.into_iter().map(map).fold(identity(), reduce)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_agree() {
        let job = |r: Range<u64>| r.map(|x| x * x).sum::<u64>();
        let serial = fold_chunks(Schedule::Serial, 1001, 37, || 0, job, |a, b| a + b);
        let parallel = fold_chunks(Schedule::Parallel, 1001, 37, || 0, job, |a, b| a + b);
        assert_eq!(serial, (0..1001u64).map(|x| x * x).sum::<u64>());
        assert_eq!(serial, parallel);
        let m = map_reduce(Schedule::Parallel, (1..=10u64).collect(), || 1, |x| x, |a, b| a * b);
        assert_eq!(m, 3628800);
    }
}
