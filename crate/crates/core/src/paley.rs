//! The sign matrix `H_p` and the 1-factorization obtained by translating a
//! qualifying factor through `F_p`.
//!
//! Rows are labelled `0..=p`; columns are labelled `c, 0, 1, ..., p-1` in that
//! order. Row `k ≥ 1` is row `k - 1` of the Legendre circulant with `+1` on its
//! diagonal and `-1` in the centre column. Row 0 is all ones.

use std::collections::HashMap;

use crate::construction::{Edge, OneFactor, Vertex};
use crate::error::{Error, Result};
use crate::numtheory::{legendre, PrimeContext};
use crate::verification::verify_factor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    p: u64,
    /// Row-major, `(p + 1)^2` entries of `±1`.
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.p as usize + 1
    }

    /// Column index of a vertex: the centre is column 0, field element `j`
    /// is column `j + 1`.
    pub fn column(&self, v: Vertex) -> usize {
        match v {
            Vertex::Centre => 0,
            Vertex::Field(j) => j as usize + 1,
        }
    }

    pub fn row(&self, k: usize) -> &[i8] {
        let n = self.order();
        &self.entries[k * n..(k + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.order())
    }

    pub fn entry(&self, k: usize, v: Vertex) -> i8 {
        self.row(k)[self.column(v)]
    }
}

pub fn build_h(ctx: &PrimeContext) -> SignMatrix {
    let p = ctx.p();
    let n = p as usize + 1;
    let symbols: Vec<i8> = (0..p).map(|x| legendre(x, ctx)).collect();
    let mut entries = vec![1i8; n * n];
    for k in 1..n {
        let row = &mut entries[k * n..(k + 1) * n];
        row[0] = -1;
        let shift = k as u64 - 1;
        for j in 0..p {
            let s = symbols[((j + p - shift) % p) as usize];
            row[j as usize + 1] = if s == 0 { 1 } else { s };
        }
    }
    SignMatrix { p, entries }
}

/// Whether `H H^T = (p + 1) I`, in exact integer arithmetic.
pub fn hadamard_check(h: &SignMatrix) -> bool {
    let n = h.order() as i64;
    let rows: Vec<&[i8]> = h.rows().collect();
    rows.iter().enumerate().all(|(i, a)| {
        rows[i..].iter().enumerate().all(|(off, b)| {
            let dot: i64 = a.iter().zip(*b).map(|(&x, &y)| (x * y) as i64).sum();
            dot == if off == 0 { n } else { 0 }
        })
    })
}

/// Shift every field vertex by `t`, fixing the centre.
pub fn translate_factor(f: &OneFactor, t: u64) -> OneFactor {
    let p = f.p();
    let shift = |v: Vertex| match v {
        Vertex::Field(x) => Vertex::Field((x + t) % p),
        Vertex::Centre => Vertex::Centre,
    };
    let edges = f
        .edges()
        .iter()
        .map(|e| {
            let (x, y) = e.endpoints();
            Edge::new(shift(x), shift(y)).expect("translation is a bijection")
        })
        .collect();
    OneFactor::new(p, edges).expect("translation stays inside F_p")
}

/// An ordered list of `p` factors, `F_k` at index `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub p: u64,
    pub factors: Vec<OneFactor>,
}

impl Factorization {
    /// Factor paired with the row of `H_p` it must agree with.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &OneFactor)> {
        self.factors.iter().enumerate().map(|(i, f)| (i + 1, f))
    }

    pub fn edge_count(&self) -> usize {
        self.factors.iter().map(OneFactor::len).sum()
    }
}

/// All `p` translates of `f` with no validity check on `f`.
pub fn translate_all(f: &OneFactor) -> Factorization {
    Factorization {
        p: f.p(),
        factors: (0..f.p()).map(|t| translate_factor(f, t)).collect(),
    }
}

/// Translate a verified factor into a 1-factorization of `K_{p+1}`.
pub fn build_factorization(f: &OneFactor, ctx: &PrimeContext) -> Result<Factorization> {
    let report = verify_factor(f, ctx);
    match report.first_violation() {
        Some(why) => Err(Error::FailedVerification(why)),
        None => Ok(translate_all(f)),
    }
}

/// How far a set of factors is from partitioning the edges of `K_{p+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub expected_edges: usize,
    pub distinct_edges: usize,
    /// First edge (in factor order) seen a second time, with the two factor
    /// indices (1-based) containing it.
    pub first_repeat: Option<(Edge, usize, usize)>,
}

impl PartitionReport {
    pub fn is_partition(&self) -> bool {
        self.first_repeat.is_none() && self.distinct_edges == self.expected_edges
    }
}

pub fn partition_check(fz: &Factorization) -> PartitionReport {
    let p = fz.p as usize;
    let mut first_seen: HashMap<Edge, usize> = HashMap::with_capacity(p * (p + 1) / 2);
    let mut first_repeat = None;
    for (k, f) in fz.rows() {
        for e in f.edges() {
            if let Some(&earlier) = first_seen.get(e) {
                first_repeat.get_or_insert((*e, earlier, k));
            } else {
                first_seen.insert(*e, k);
            }
        }
    }
    PartitionReport {
        expected_edges: p * (p + 1) / 2,
        distinct_edges: first_seen.len(),
        first_repeat,
    }
}

/// Edges of factor `F_k` whose endpoints carry equal signs in row `k` of `H`.
pub fn compatibility_violations(fz: &Factorization, h: &SignMatrix) -> Vec<(usize, Edge)> {
    fz.rows()
        .flat_map(|(k, f)| f.edges().iter().map(move |e| (k, *e)))
        .filter(|&(k, e)| {
            let (x, y) = e.endpoints();
            k >= h.order() || h.entry(k, x) * h.entry(k, y) > 0
        })
        .collect()
}

pub fn verify_compatibility(fz: &Factorization, h: &SignMatrix) -> (bool, Vec<(usize, Edge)>) {
    if fz.p != h.p() {
        return (false, Vec::new());
    }
    let bad = compatibility_violations(fz, h);
    (bad.is_empty(), bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{construct, construct_3mod4};
    use crate::verification::is_perfect_matching;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn matrix_examples() {
        let h = build_h(&ctx(5));
        assert_eq!(h.row(1), &[-1, 1, 1, -1, -1, 1]);
        assert!(h.row(0).iter().all(|&x| x == 1));
        assert_eq!(h.entry(1, Vertex::Centre), -1);
        assert_eq!(h.entry(1, Vertex::Field(0)), 1);
        // diagonal of the circulant block is +1
        for k in 1..=5 {
            assert_eq!(h.entry(k, Vertex::Field(k as u64 - 1)), 1);
        }
    }

    #[test]
    fn hadamard_examples() {
        assert!(hadamard_check(&build_h(&ctx(3))));
        assert!(hadamard_check(&build_h(&ctx(7))));
        assert!(!hadamard_check(&build_h(&ctx(5))));
        // p = 3 gram matrix is 4I
        let h = build_h(&ctx(3));
        for a in h.rows() {
            for b in h.rows() {
                let dot: i32 = a.iter().zip(b).map(|(&x, &y)| (x * y) as i32).sum();
                assert!(dot == 0 || (dot == 4 && a == b));
            }
        }
    }

    #[test]
    fn translation_examples() {
        let f = construct_3mod4(&ctx(7)).unwrap();
        assert_eq!(translate_factor(&f, 0), f);
        let shifted = translate_factor(&f, 1);
        let expected = OneFactor::new(
            7,
            vec![
                Edge::new(Vertex::Field(1), Vertex::Centre).unwrap(),
                Edge::new(Vertex::Field(2), Vertex::Field(0)).unwrap(),
                Edge::new(Vertex::Field(3), Vertex::Field(6)).unwrap(),
                Edge::new(Vertex::Field(4), Vertex::Field(5)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(shifted, expected);
    }

    #[test]
    fn factorization_p7_and_p17() {
        for (p, edges) in [(7u64, 28usize), (17, 153)] {
            let c = ctx(p);
            let fz = build_factorization(&construct(&c).unwrap(), &c).unwrap();
            assert_eq!(fz.factors.len(), p as usize);
            assert_eq!(fz.edge_count(), edges);
            assert!(partition_check(&fz).is_partition());
            assert_eq!(verify_compatibility(&fz, &build_h(&c)), (true, vec![]));
        }
    }

    #[test]
    fn unverified_factor_is_rejected() {
        let c = ctx(5);
        let dup = OneFactor::new(
            5,
            vec![
                Edge::new(Vertex::Centre, Vertex::Field(1)).unwrap(),
                Edge::new(Vertex::Field(0), Vertex::Field(3)).unwrap(),
                Edge::new(Vertex::Field(2), Vertex::Field(4)).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            build_factorization(&dup, &c),
            Err(Error::FailedVerification(_))
        ));
        let report = partition_check(&translate_all(&dup));
        assert!(!report.is_partition());
        assert!(report.first_repeat.is_some());
    }

    #[test]
    fn moved_edge_breaks_compatibility() {
        let c = ctx(7);
        let h = build_h(&c);
        let mut fz = build_factorization(&construct(&c).unwrap(), &c).unwrap();
        // first edge of F_1 whose endpoints agree in sign on some later row
        let (moved, target) = fz.factors[0]
            .edges()
            .iter()
            .find_map(|&e| {
                let (x, y) = e.endpoints();
                (2..=7)
                    .find(|&k| h.entry(k, x) == h.entry(k, y))
                    .map(|k| (e, k))
            })
            .unwrap();
        let keep: Vec<Edge> = fz.factors[0]
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != moved)
            .collect();
        fz.factors[0] = OneFactor::new(7, keep).unwrap();
        let mut extra = fz.factors[target - 1].edges().to_vec();
        extra.push(moved);
        fz.factors[target - 1] = OneFactor::new(7, extra).unwrap();
        let (ok, bad) = verify_compatibility(&fz, &h);
        assert!(!ok);
        assert_eq!(bad, vec![(target, moved)]);
        // every edge still appears once, but neither factor is a matching now
        assert!(partition_check(&fz).is_partition());
        assert!(!is_perfect_matching(&fz.factors[0]));
        assert!(!is_perfect_matching(&fz.factors[target - 1]));
    }
}
