//! Parallel search for qualifying primitive roots over a range of primes.
//!
//! The range is cut into fixed-width chunks. Workers claim chunks from a
//! shared counter, sieve them, and run [`quartic_root_search`] on every prime
//! `p ≡ 1 (mod 8)`. The calling thread reassembles finished chunks and hands
//! records to the sink in ascending order of `p`, whatever order the chunks
//! complete in.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use crate::error::Error;
use crate::numtheory::{quartic_root_search, PrimeContext};
use crate::sieve::SegmentedSieve;

pub const DEFAULT_CHUNK_SPAN: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub min: u64,
    pub max: u64,
    pub jobs: usize,
    pub chunk_span: u64,
}

impl ScanConfig {
    pub fn new(min: u64, max: u64, jobs: usize) -> Self {
        Self {
            min,
            max,
            jobs: jobs.max(1),
            chunk_span: DEFAULT_CHUNK_SPAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanRecord {
    pub p: u64,
    /// Smallest qualifying root, `None` if the search came up empty.
    pub a: Option<u64>,
    /// Wall time for this prime (factoring `p-1` plus the search).
    pub micros: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub scanned: u64,
    /// Largest root found and the first prime that needed it.
    pub max_a: Option<(u64, u64)>,
    pub not_found: Vec<u64>,
}

impl ScanSummary {
    fn absorb(&mut self, r: &ScanRecord) {
        self.scanned += 1;
        match r.a {
            Some(a) if self.max_a.is_none_or(|(best, _)| a > best) => self.max_a = Some((a, r.p)),
            Some(_) => {}
            None => self.not_found.push(r.p),
        }
    }
}

fn scan_prime(p: u64) -> ScanRecord {
    let start = Instant::now();
    let a = PrimeContext::new(p)
        .and_then(|ctx| quartic_root_search(&ctx))
        .ok();
    ScanRecord {
        p,
        a,
        micros: start.elapsed().as_micros() as u64,
    }
}

/// Scan `[min, max]`, feeding records to `sink` in ascending order.
///
/// A sink error stops the workers and is returned once they have exited;
/// records already delivered stay delivered.
pub fn scan<E, F>(cfg: &ScanConfig, mut sink: F) -> Result<ScanSummary, E>
where
    F: FnMut(&ScanRecord) -> Result<(), E>,
{
    let mut summary = ScanSummary::default();
    if cfg.min > cfg.max {
        return Ok(summary);
    }
    let span = cfg.chunk_span.max(1);
    let chunks = (cfg.max - cfg.min) / span + 1;
    let sieve = SegmentedSieve::new(cfg.max);
    let next_chunk = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::sync_channel::<(u64, Vec<ScanRecord>)>(cfg.jobs * 4);

    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.min(chunks as usize) {
            let tx = tx.clone();
            let (sieve, next_chunk, stop) = (&sieve, &next_chunk, &stop);
            scope.spawn(move || {
                while !stop.load(Ordering::Relaxed) {
                    let idx = next_chunk.fetch_add(1, Ordering::Relaxed);
                    if idx >= chunks {
                        break;
                    }
                    let lo = cfg.min + idx * span;
                    let hi = lo.saturating_add(span - 1).min(cfg.max);
                    let records = sieve
                        .primes_in(lo, hi)
                        .into_iter()
                        .filter(|p| p % 8 == 1)
                        .map(scan_prime)
                        .collect();
                    if tx.send((idx, records)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut expected = 0u64;
        for (idx, records) in rx {
            pending.insert(idx, records);
            while let Some(records) = pending.remove(&expected) {
                for r in &records {
                    summary.absorb(r);
                    if let Err(e) = sink(r) {
                        stop.store(true, Ordering::Relaxed);
                        return Err(e);
                    }
                }
                expected += 1;
            }
        }
        Ok(())
    })?;
    Ok(summary)
}

/// Upper end accepted by [`scan`] through the command line by default.
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000_000;

pub fn check_range(min: u64, max: u64, cap: u64) -> Result<(), Error> {
    if min > max {
        return Err(Error::OutOfRange(min));
    }
    if max > cap {
        return Err(Error::CapExceeded { p: max, cap });
    }
    Ok(())
}
