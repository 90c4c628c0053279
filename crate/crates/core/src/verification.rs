//! Checks for the two factor conditions and for the matching property.
//!
//! Every check walks edges in canonical order, so the first violation it names
//! is deterministic.

use std::collections::HashSet;
use std::fmt;

use crate::construction::{Edge, Length, OneFactor, Vertex};
use crate::numtheory::{legendre, PrimeContext};

pub fn edge_length(e: &Edge, ctx: &PrimeContext) -> Length {
    match e.endpoints() {
        (Vertex::Field(x), Vertex::Field(y)) => {
            let p = ctx.p();
            let d = (x + p - y) % p;
            Length::Finite(d.min(p - d))
        }
        _ => Length::Infinity,
    }
}

/// Residue class under the factor convention: 0 is a residue, the centre is not.
pub fn is_residue_vertex(v: Vertex, ctx: &PrimeContext) -> bool {
    match v {
        Vertex::Field(x) => legendre(x, ctx) >= 0,
        Vertex::Centre => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingDefect {
    /// A vertex appears in more than one edge.
    Repeated(Vertex),
    /// A vertex of `F_p ∪ {c}` is not covered.
    Uncovered(Vertex),
    /// An endpoint lies outside `F_p`.
    OutOfField(Vertex),
}

impl fmt::Display for MatchingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingDefect::Repeated(v) => write!(f, "vertex {v} is used more than once"),
            MatchingDefect::Uncovered(v) => write!(f, "vertex {v} is not covered"),
            MatchingDefect::OutOfField(v) => write!(f, "vertex {v} is outside the field"),
        }
    }
}

/// `Ok(())` for a perfect matching of `F_p ∪ {c}`, otherwise the first defect.
pub fn matching_defect(f: &OneFactor) -> Result<(), MatchingDefect> {
    let p = f.p();
    let mut seen = vec![false; p as usize + 1];
    for e in f.edges() {
        let (x, y) = e.endpoints();
        for v in [x, y] {
            let idx = match v {
                Vertex::Field(x) if x < p => x as usize,
                Vertex::Field(_) => return Err(MatchingDefect::OutOfField(v)),
                Vertex::Centre => p as usize,
            };
            if std::mem::replace(&mut seen[idx], true) {
                return Err(MatchingDefect::Repeated(v));
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(i) if i == p as usize => Err(MatchingDefect::Uncovered(Vertex::Centre)),
        Some(i) => Err(MatchingDefect::Uncovered(Vertex::Field(i as u64))),
        None => Ok(()),
    }
}

pub fn is_perfect_matching(f: &OneFactor) -> bool {
    matching_defect(f).is_ok()
}

/// `table[x]` is whether `x` is a square mod `p` (0 included).
fn square_table(p: u64) -> Vec<bool> {
    let mut table = vec![false; p as usize];
    let mut sq = 0u64;
    // (k+1)^2 = k^2 + 2k + 1
    for k in 0..=p / 2 {
        table[sq as usize] = true;
        sq = (sq + 2 * k + 1) % p;
    }
    table
}

/// Every edge whose endpoints fall in the same residue class.
pub fn residue_violations(f: &OneFactor, ctx: &PrimeContext) -> Vec<Edge> {
    // a table beats one Euler-criterion power per endpoint once there are
    // more than a handful of edges
    let table = (f.len() as u64 * 8 > ctx.p()).then(|| square_table(ctx.p()));
    let class = |v: Vertex| match (&table, v) {
        (Some(t), Vertex::Field(x)) if x < ctx.p() => t[x as usize],
        _ => is_residue_vertex(v, ctx),
    };
    f.edges()
        .iter()
        .filter(|e| {
            let (x, y) = e.endpoints();
            class(x) == class(y)
        })
        .copied()
        .collect()
}

pub fn check_residue_condition(f: &OneFactor, ctx: &PrimeContext) -> (bool, Vec<Edge>) {
    let bad = residue_violations(f, ctx);
    (bad.is_empty(), bad)
}

/// The first length (in canonical edge order) that repeats an earlier one.
pub fn first_duplicate_length(f: &OneFactor, ctx: &PrimeContext) -> Option<Length> {
    let mut seen = HashSet::with_capacity(f.len());
    f.edges()
        .iter()
        .map(|e| edge_length(e, ctx))
        .find(|&len| !seen.insert(len))
}

pub fn check_distinct_lengths(f: &OneFactor, ctx: &PrimeContext) -> (bool, Option<Length>) {
    let dup = first_duplicate_length(f, ctx);
    (dup.is_none(), dup)
}

/// Outcome of all three checks on one candidate factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub p: u64,
    pub matching: Result<(), MatchingDefect>,
    pub residue_violations: Vec<Edge>,
    pub duplicate_length: Option<Length>,
}

impl VerificationReport {
    pub fn matching_ok(&self) -> bool {
        self.matching.is_ok()
    }

    pub fn residue_ok(&self) -> bool {
        self.residue_violations.is_empty()
    }

    pub fn lengths_ok(&self) -> bool {
        self.duplicate_length.is_none()
    }

    pub fn passed(&self) -> bool {
        self.matching_ok() && self.residue_ok() && self.lengths_ok()
    }

    /// One-line description of the first failing check, if any.
    pub fn first_violation(&self) -> Option<String> {
        if let Err(d) = &self.matching {
            return Some(format!("matching: {d}"));
        }
        if let Some(e) = self.residue_violations.first() {
            return Some(format!(
                "residue: edge {e} joins two vertices of the same class"
            ));
        }
        self.duplicate_length
            .map(|l| format!("lengths: length {l} is repeated"))
    }
}

pub fn verify_factor(f: &OneFactor, ctx: &PrimeContext) -> VerificationReport {
    VerificationReport {
        p: ctx.p(),
        matching: if f.p() == ctx.p() {
            matching_defect(f)
        } else {
            // a factor on another field cannot cover this one
            Err(MatchingDefect::Uncovered(Vertex::Field(0)))
        },
        residue_violations: residue_violations(f, ctx),
        duplicate_length: first_duplicate_length(f, ctx),
    }
}
