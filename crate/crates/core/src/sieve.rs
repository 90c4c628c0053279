//! Sieve of Eratosthenes, plain and segmented.

/// All primes `≤ limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Sieves arbitrary windows `[lo, hi]` below `hi_max` using one shared table
/// of base primes up to `√hi_max`.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    base: Vec<u64>,
    hi_max: u64,
}

impl SegmentedSieve {
    pub fn new(hi_max: u64) -> Self {
        let root = (hi_max as f64).sqrt() as u64 + 1;
        Self {
            base: primes_up_to(root),
            hi_max,
        }
    }

    /// Primes in `[lo, hi]`, ascending. Panics if `hi` exceeds the bound the
    /// sieve was built for.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        assert!(
            hi <= self.hi_max,
            "window end {hi} above sieve bound {}",
            self.hi_max
        );
        let lo = lo.max(2);
        if lo > hi {
            return Vec::new();
        }
        let len = (hi - lo + 1) as usize;
        let mut composite = vec![false; len];
        for &q in &self.base {
            if q * q > hi {
                break;
            }
            let start = (q * q).max(lo.div_ceil(q) * q);
            let mut m = start;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += q;
            }
        }
        composite
            .iter()
            .enumerate()
            .filter(|&(_, &c)| !c)
            .map(|(i, _)| lo + i as u64)
            .collect()
    }
}
