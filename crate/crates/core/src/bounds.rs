//! Explicit bounds guaranteeing a primitive root `g` with `g(g^2-g+1)` a
//! nonzero fourth power, and exact order-4 character sums that check them.
//!
//! Comparisons that decide a boolean (`φ(p-1) > 2^ω(6√p+3)`, the Weil-type
//! bounds) are made on integers by squaring; the divisor and totient lower
//! bounds are only reported and use `f64`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numtheory::{
    gcd, mod_mul, mod_pow, quartic_polynomial, smallest_primitive_root, PrimeContext,
};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Default largest prime for which character sums are enumerated.
pub const DEFAULT_CHARSUM_CAP: u64 = 1_000_000;

/// Lower end of the range handled by the divisor-bound argument.
pub const CASE1_FROM: u64 = 700_000_000;
/// Lower end of the range handled by `ω(p-1) ≤ 8`.
pub const CASE2_FROM: u64 = 92_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: Self = Self { re: 0, im: 0 };
    pub const ONE: Self = Self { re: 1, im: 0 };
    pub const I: Self = Self { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    /// `i^k`.
    pub fn unit(k: u64) -> Self {
        match k % 4 {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    pub fn norm_sq(&self) -> i128 {
        let (re, im) = (self.re as i128, self.im as i128);
        re * re + im * im
    }

    pub fn abs(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    /// `self / d` when `d` divides both parts.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        (self.re % d == 0 && self.im % d == 0).then(|| Self::new(self.re / d, self.im / d))
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl std::iter::Sum for GaussianInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// The order-4 character `ψ(g0^k) = i^k`, `ψ(0) = 0`, for `p ≡ 1 (mod 8)`
/// with `g0` the smallest primitive root.
#[derive(Debug, Clone)]
pub struct CharSpec {
    ctx: PrimeContext,
    g0: u64,
    /// `g0^{k(p-1)/4}` for `k = 0..4`.
    fourth_roots: [u64; 4],
}

impl CharSpec {
    pub fn new(ctx: &PrimeContext) -> Result<Self> {
        ctx.require_class(8, 1)?;
        let p = ctx.p();
        let g0 = smallest_primitive_root(ctx);
        let zeta = mod_pow(g0, (p - 1) / 4, p);
        let mut fourth_roots = [1u64; 4];
        for k in 1..4 {
            fourth_roots[k] = mod_mul(fourth_roots[k - 1], zeta, p);
        }
        Ok(Self {
            ctx: ctx.clone(),
            g0,
            fourth_roots,
        })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn g0(&self) -> u64 {
        self.g0
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    /// Discrete log of `y` mod 4, read off from `y^{(p-1)/4}`.
    pub fn log_mod4(&self, y: u64) -> Option<u64> {
        let y = y % self.p();
        if y == 0 {
            return None;
        }
        let t = mod_pow(y, (self.p() - 1) / 4, self.p());
        self.fourth_roots
            .iter()
            .position(|&r| r == t)
            .map(|k| k as u64)
    }

    /// `ψ^j(y)`. For `j = 0` this is the principal character (0 at 0).
    pub fn chi(&self, j: u32, y: u64) -> GaussianInt {
        match self.log_mod4(y) {
            None => GaussianInt::ZERO,
            Some(k) => GaussianInt::unit(k * j as u64),
        }
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        if self.p() > cap {
            Err(Error::CapExceeded { p: self.p(), cap })
        } else {
            Ok(())
        }
    }
}

fn check_power(j: u32) -> Result<()> {
    if j > 3 {
        Err(Error::BadCharacterPower(j))
    } else {
        Ok(())
    }
}

/// `Σ_{g primitive} ψ^j(g(g^2-g+1))`, enumerating `g = g0^k` with
/// `gcd(k, p-1) = 1`. `j = 0` counts primitive roots with `f(g) ≠ 0`.
pub fn char_sum_primroots(spec: &CharSpec, j: u32, cap: u64) -> Result<GaussianInt> {
    check_power(j)?;
    spec.check_cap(cap)?;
    let p = spec.p();
    let mut g = 1u64;
    let mut total = GaussianInt::ZERO;
    for k in 1..p {
        g = mod_mul(g, spec.g0, p);
        if gcd(k, p - 1) == 1 {
            total += spec.chi(j, quartic_polynomial(g, p));
        }
    }
    Ok(total)
}

/// `Σ_{x ∈ F_p^*} ψ^j(f(x^d))`.
pub fn inner_sum(spec: &CharSpec, d: u64, j: u32) -> GaussianInt {
    let p = spec.p();
    (1..p)
        .map(|x| spec.chi(j, quartic_polynomial(mod_pow(x, d, p), p)))
        .sum()
}

/// The same sum as [`char_sum_primroots`], computed as
/// `Σ_{d | p-1} μ(d)/d · Σ_{x ∈ F_p^*} ψ^j(f(x^d))`.
pub fn char_sum_mobius(spec: &CharSpec, j: u32, cap: u64) -> Result<GaussianInt> {
    check_power(j)?;
    spec.check_cap(cap)?;
    let mut total = GaussianInt::ZERO;
    for (d, mu) in spec.ctx.p_minus_1().square_free_divisors() {
        let inner = inner_sum(spec, d, j);
        let reduced = inner.div_exact(d as i64).ok_or_else(|| {
            Error::Internal(format!(
                "inner sum {inner} for d = {d} is not divisible by d (p = {})",
                spec.p()
            ))
        })?;
        total += reduced.scale(mu as i64);
    }
    Ok(total)
}

/// Whether `sqrt(n_sq) ≤ a√p + b` for non-negative integers `a`, `b`.
pub fn norm_within(n_sq: i128, a: i128, b: i128, p: u64) -> bool {
    let p = p as i128;
    let slack = n_sq - a * a * p - b * b;
    slack <= 0 || slack * slack <= 4 * a * a * b * b * p
}

/// One Möbius term against its Weil-type bound.
#[derive(Debug, Clone, PartialEq)]
pub struct WeilTerm {
    pub d: u64,
    pub j: u32,
    pub sum: GaussianInt,
    pub magnitude: f64,
    /// `2d√p + 1`.
    pub bound: f64,
    pub ok: bool,
    /// `2d√p`, the bound from root counting alone.
    pub tight_bound: f64,
    pub tight_ok: bool,
}

pub fn weil_term_check(spec: &CharSpec, d: u64, j: u32, cap: u64) -> Result<WeilTerm> {
    if !(1..=3).contains(&j) {
        return Err(Error::BadCharacterPower(j));
    }
    spec.check_cap(cap)?;
    let n = spec.p() - 1;
    if d == 0 || !n.is_multiple_of(d) || crate::numtheory::factorize(d).mobius() == 0 {
        return Err(Error::NotSquareFreeDivisor { d, n });
    }
    let sum = inner_sum(spec, d, j);
    let root_p = (spec.p() as f64).sqrt();
    let n_sq = sum.norm_sq();
    let two_d = 2 * d as i128;
    Ok(WeilTerm {
        d,
        j,
        sum,
        magnitude: sum.abs(),
        bound: 2.0 * d as f64 * root_p + 1.0,
        ok: norm_within(n_sq, two_d, 1, spec.p()),
        tight_bound: 2.0 * d as f64 * root_p,
        tight_ok: norm_within(n_sq, two_d, 0, spec.p()),
    })
}

/// Whether `|S| ≤ 2^ω(p-1) (2√p + 1)`.
pub fn within_sum_bound(sum: GaussianInt, ctx: &PrimeContext) -> bool {
    let scale = 1i128 << ctx.p_minus_1().omega();
    norm_within(sum.norm_sq(), 2 * scale, scale, ctx.p())
}

/// Number of primitive roots `g` with `g(g^2-g+1)` a nonzero fourth power,
/// by direct enumeration.
pub fn count_qualifying_roots(ctx: &PrimeContext) -> u64 {
    (1..ctx.p())
        .filter(|&a| crate::numtheory::is_qualifying_root(a, ctx))
        .count() as u64
}

/// Which explicit argument covers a given prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsCase {
    /// `p ≥ 7·10^8`: divisor-function bound.
    Case1,
    /// `9.2·10^7 ≤ p < 7·10^8`: `ω(p-1) ≤ 8`.
    Case2,
    /// `p < 9.2·10^7`: direct computation.
    Case3,
}

impl BoundsCase {
    pub fn of(p: u64) -> Self {
        if p >= CASE1_FROM {
            BoundsCase::Case1
        } else if p >= CASE2_FROM {
            BoundsCase::Case2
        } else {
            BoundsCase::Case3
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundsCase::Case1 => "Case1",
            BoundsCase::Case2 => "Case2",
            BoundsCase::Case3 => "Case3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub p: u64,
    pub phi_p_minus_1: u64,
    pub omega_p_minus_1: u32,
    /// `2^ω(p-1) (6√p + 3)`.
    pub rhs: f64,
    pub eq_omega_holds: bool,
    pub case: BoundsCase,
}

/// Evaluate `φ(p-1) > 2^ω(p-1) (6√p + 3)`; the verdict is exact.
pub fn eq_omega_check(ctx: &PrimeContext) -> Result<BoundsReport> {
    ctx.require_class(8, 1)?;
    let f = ctx.p_minus_1();
    let phi = f.euler_phi();
    let omega = f.omega();
    let scale = 1i128 << omega;
    let slack = phi as i128 - 3 * scale;
    let holds = slack > 0 && slack * slack > 36 * scale * scale * ctx.p() as i128;
    Ok(BoundsReport {
        p: ctx.p(),
        phi_p_minus_1: phi,
        omega_p_minus_1: omega,
        rhs: scale as f64 * (6.0 * (ctx.p() as f64).sqrt() + 3.0),
        eq_omega_holds: holds,
        case: BoundsCase::of(ctx.p()),
    })
}

fn log_log(n: f64) -> f64 {
    n.ln().ln()
}

/// `n^{1.5379 log 2 / log log n}`, an upper bound for the divisor count.
pub fn tau_bound(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::OutOfRange(n));
    }
    let n = n as f64;
    Ok(n.powf(1.5379 * std::f64::consts::LN_2 / log_log(n)))
}

/// `n / (e^γ log log n + 3 / log log n)`, a lower bound for the totient.
pub fn phi_bound(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::OutOfRange(n));
    }
    let ll = log_log(n as f64);
    Ok(n as f64 / (EULER_GAMMA.exp() * ll + 3.0 / ll))
}

/// The large-prime inequality `(p-1)/(e^γ L + 3/L) > (3√p + 2)(p-1)^{1.5379 log 2 / log log p}`
/// with `L = log log (p-1)`. Reported in floating point.
pub fn case1_sufficient(p: u64) -> bool {
    let p = p as f64;
    let lhs = (p - 1.0) / (EULER_GAMMA.exp() * log_log(p - 1.0) + 3.0 / log_log(p - 1.0));
    let rhs = (3.0 * p.sqrt() + 2.0) * (p - 1.0).powf(1.5379 * std::f64::consts::LN_2 / log_log(p));
    lhs > rhs
}

/// The mid-range inequality `(p-1)/(e^γ L + 3/L) > 256 (6√p + 3)`.
pub fn case2_sufficient(p: u64) -> bool {
    let p = p as f64;
    let ll = log_log(p - 1.0);
    (p - 1.0) / (EULER_GAMMA.exp() * ll + 3.0 / ll) > 256.0 * (6.0 * p.sqrt() + 3.0)
}

/// Everything known about `S_1, S_2, S_3` for one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct CharSumReport {
    pub p: u64,
    pub g0: u64,
    /// `(j, direct sum, Möbius sum, within the sum bound)` for `j = 1..=3`.
    pub sums: Vec<(u32, GaussianInt, GaussianInt, bool)>,
    /// Every square-free `d` for every `j`.
    pub weil_terms: Vec<WeilTerm>,
    /// `S_0 + S_1 + S_2 + S_3`.
    pub orthogonality_total: GaussianInt,
    pub qualifying_roots: u64,
}

impl CharSumReport {
    pub fn identity_ok(&self) -> bool {
        self.sums.iter().all(|(_, a, b, _)| a == b)
    }

    pub fn bound_ok(&self) -> bool {
        self.sums.iter().all(|s| s.3)
    }

    pub fn weil_ok(&self) -> bool {
        self.weil_terms.iter().all(|t| t.ok)
    }

    pub fn count_ok(&self) -> bool {
        let t = self.orthogonality_total;
        t.im == 0 && t.re >= 0 && t.re % 4 == 0 && (t.re / 4) as u64 == self.qualifying_roots
    }

    pub fn all_ok(&self) -> bool {
        self.identity_ok() && self.bound_ok() && self.weil_ok() && self.count_ok()
    }
}

pub fn char_sum_report(ctx: &PrimeContext, cap: u64) -> Result<CharSumReport> {
    let spec = CharSpec::new(ctx)?;
    spec.check_cap(cap)?;
    let mut sums = Vec::with_capacity(3);
    let mut total = char_sum_primroots(&spec, 0, cap)?;
    for j in 1..=3 {
        let direct = char_sum_primroots(&spec, j, cap)?;
        let mobius = char_sum_mobius(&spec, j, cap)?;
        total += direct;
        sums.push((j, direct, mobius, within_sum_bound(direct, ctx)));
    }
    let mut weil_terms = Vec::new();
    for j in 1..=3 {
        for (d, _) in ctx.p_minus_1().square_free_divisors() {
            weil_terms.push(weil_term_check(&spec, d, j, cap)?);
        }
    }
    Ok(CharSumReport {
        p: ctx.p(),
        g0: spec.g0(),
        sums,
        weil_terms,
        orthogonality_total: total,
        qualifying_roots: count_qualifying_roots(ctx),
    })
}
