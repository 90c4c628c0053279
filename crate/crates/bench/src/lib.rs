//! Inputs shared by the benchmarks.

use paley_core::numtheory::{is_prime, PrimeContext};

/// First `count` primes `p ≥ from` with `p ≡ class (mod 8)`.
pub fn primes_in_class(from: u64, class: u64, count: usize) -> Vec<PrimeContext> {
    (from..)
        .filter(|p| p % 8 == class && is_prime(*p))
        .take(count)
        .map(|p| PrimeContext::new(p).expect("prime"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_right_class() {
        let ps: Vec<u64> = primes_in_class(10, 5, 3)
            .iter()
            .map(PrimeContext::p)
            .collect();
        assert_eq!(ps, vec![13, 29, 37]);
    }
}
