//! Exact modular arithmetic and multiplicative functions for moduli below 2^62.
//!
//! Everything here is a pure function of its arguments. Products are formed in
//! `u128`, so no intermediate ever overflows.

use crate::error::{Error, Result};

/// Largest prime accepted by [`PrimeContext`] (exclusive).
pub const PRIME_LIMIT: u64 = 1 << 62;

/// Trial division bound used before switching to Pollard rho.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Miller-Rabin bases; deterministic for every `n < 3.3 * 10^24`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    if a < 1 << 32 && b < 1 << 32 {
        // fits in u64; avoids the much slower 128-bit remainder
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// `base^exp mod m` by binary exponentiation.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, b, m);
        }
        b = mod_mul(b, b, m);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic primality test for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, trying the increments `c = 1, 2, 3, ...` in turn.
fn pollard_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1.. {
        let step = |x: u64| (mod_mul(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y);
                    q = mod_mul(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("Pollard rho exhausted all increments")
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The empty factorization of 1.
    pub fn one() -> Self {
        Self {
            n: 1,
            factors: Vec::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(q, e)| (q - 1) * q.pow(e - 1))
            .product()
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The `2^omega` square-free divisors, each paired with its Möbius value,
    /// in ascending order.
    pub fn square_free_divisors(&self) -> Vec<(u64, i8)> {
        let mut divs = vec![(1u64, 1i8)];
        for &(q, _) in &self.factors {
            let extra: Vec<_> = divs.iter().map(|&(d, mu)| (d * q, -mu)).collect();
            divs.extend(extra);
        }
        divs.sort_unstable();
        divs
    }
}

/// Complete factorization of `n ≥ 1`: trial division up to 10^6, then Pollard
/// rho on whatever cofactor remains.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let original = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let push = |q: u64, e: u32, factors: &mut Vec<(u64, u32)>| {
        if e > 0 {
            factors.push((q, e));
        }
    };

    let mut e = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        e += 1;
    }
    push(2, e, &mut factors);

    let mut q = 3u64;
    while q <= TRIAL_DIVISION_LIMIT && q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        push(q, e, &mut factors);
        q += 2;
    }

    if n > 1 {
        if q * q > n {
            factors.push((n, 1));
        } else {
            let mut large = Vec::new();
            split_into(n, &mut large);
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some((last, e)) if *last == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }

    Factorization {
        n: original,
        factors,
    }
}

/// A validated odd prime together with the data every construction needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    half: u64,
    p_minus_1: Factorization,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..PRIME_LIMIT).contains(&p) {
            return Err(if p == 2 {
                Error::EvenPrime(2)
            } else {
                Error::OutOfRange(p)
            });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self {
            p,
            half: (p - 1) / 2,
            p_minus_1: factorize(p - 1),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `M = (p - 1) / 2`, also the largest canonical edge length.
    pub fn half(&self) -> u64 {
        self.half
    }

    pub fn residue_class(&self) -> u64 {
        self.p % 8
    }

    pub fn p_minus_1(&self) -> &Factorization {
        &self.p_minus_1
    }

    pub(crate) fn require_class(&self, modulus: u64, expected: u64) -> Result<()> {
        let actual = self.p % modulus;
        if actual == expected {
            Ok(())
        } else {
            Err(Error::WrongResidueClass {
                p: self.p,
                modulus,
                expected,
                actual,
            })
        }
    }
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: u64, ctx: &PrimeContext) -> i8 {
    let p = ctx.p();
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, ctx.half(), p) == 1 {
        1
    } else {
        -1
    }
}

/// Whether `a` lies in the subgroup of fourth powers of `F_p^*`.
pub fn is_fourth_power(a: u64, ctx: &PrimeContext) -> Result<bool> {
    ctx.require_class(4, 1)?;
    let a = a % ctx.p();
    if a == 0 {
        return Err(Error::ZeroResidue);
    }
    Ok(mod_pow(a, (ctx.p() - 1) / 4, ctx.p()) == 1)
}

pub fn is_primitive_root(a: u64, ctx: &PrimeContext) -> bool {
    let p = ctx.p();
    let a = a % p;
    if a == 0 || (a == 1 && p > 2) {
        return false;
    }
    ctx.p_minus_1()
        .primes()
        .all(|r| mod_pow(a, (p - 1) / r, p) != 1)
}

/// `f(a) = a(a^2 - a + 1) mod p`.
pub fn quartic_polynomial(a: u64, p: u64) -> u64 {
    let a = a % p;
    let inner = (mod_mul(a, a, p) + p - a + 1) % p;
    mod_mul(a, inner, p)
}

/// Whether `a` is a primitive root with `a(a^2-a+1)` a nonzero fourth power.
/// Requires `p ≡ 1 (mod 8)`.
pub fn is_qualifying_root(a: u64, ctx: &PrimeContext) -> bool {
    if !is_primitive_root(a, ctx) {
        return false;
    }
    let f = quartic_polynomial(a, ctx.p());
    f != 0 && mod_pow(f, (ctx.p() - 1) / 4, ctx.p()) == 1
}

/// Smallest `a ≥ 2` that is a primitive root with `a(a^2-a+1)` a nonzero
/// fourth power. Primitivity is tested first.
pub fn quartic_root_search(ctx: &PrimeContext) -> Result<u64> {
    ctx.require_class(8, 1)?;
    (2..ctx.p())
        .find(|&a| is_qualifying_root(a, ctx))
        .ok_or(Error::NotFound(ctx.p()))
}

/// Smallest primitive root of `p`.
pub fn smallest_primitive_root(ctx: &PrimeContext) -> u64 {
    if ctx.p() == 3 {
        return 2;
    }
    (2..ctx.p())
        .find(|&a| is_primitive_root(a, ctx))
        .expect("every prime has a primitive root")
}
