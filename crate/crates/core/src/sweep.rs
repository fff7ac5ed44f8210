//! Index-space sweeps that may run on the rayon pool.
//!
//! Results never depend on the number of workers: `first_hit` returns the
//! hit with the smallest index and `map_all` keeps index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Smallest-index `Some` produced by `probe` over `0..count`.
pub fn first_hit<T, F>(count: usize, probe: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().find_map_first(probe)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).find_map(probe)
    }
}

/// Runs `probe` on every index and collects the results in index order.
pub fn map_all<T, F>(count: usize, probe: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(probe).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(probe).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_smallest_index() {
        let hit = first_hit(10_000, |i| (i % 997 == 996).then_some(i));
        assert_eq!(hit, Some(996));
        assert_eq!(first_hit(10, |_| None::<()>), None);
    }

    #[test]
    fn map_all_keeps_order() {
        assert_eq!(map_all(5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
