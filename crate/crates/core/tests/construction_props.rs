//! Constructions and the verifier, checked against an independent checker
//! that works from raw vertex pairs.

use std::collections::HashSet;

use paley_core::construction::{
    construct, construct_1mod8, construct_3mod4, exact_search, index_sets, oracle_search, Edge,
    Length, OneFactor, Vertex,
};
use paley_core::numtheory::{quartic_root_search, PrimeContext};
use paley_core::sieve::primes_up_to;
use paley_core::verification::{edge_length, verify_factor};
use paley_core::Error;
use proptest::prelude::*;

/// `None` stands for the centre.
type RawEdge = (Option<u64>, Option<u64>);

fn raw(f: &OneFactor) -> Vec<RawEdge> {
    f.edges()
        .iter()
        .map(|e| {
            let (x, y) = e.endpoints();
            (x.field(), y.field())
        })
        .collect()
}

/// Checks the three conditions from scratch: squares by enumeration,
/// lengths by direct subtraction.
fn independent_check(p: u64, edges: &[RawEdge]) -> bool {
    let mut squares = HashSet::new();
    for x in 0..p {
        squares.insert(x * x % p);
    }
    let in_residue_class = |v: Option<u64>| v.is_some_and(|x| squares.contains(&x));
    let mut seen = HashSet::new();
    let mut lengths = HashSet::new();
    for &(x, y) in edges {
        if x == y || !seen.insert(x) || !seen.insert(y) {
            return false;
        }
        if in_residue_class(x) == in_residue_class(y) {
            return false;
        }
        let len = match (x, y) {
            (Some(a), Some(b)) => Some(((a + p - b) % p).min((b + p - a) % p)),
            _ => None,
        };
        if !lengths.insert(len) {
            return false;
        }
    }
    seen.len() as u64 == p + 1 && (0..p).all(|x| seen.contains(&Some(x)))
}

fn odd_primes(upto: u64) -> impl Iterator<Item = u64> {
    primes_up_to(upto).into_iter().filter(|&p| p > 2)
}

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

#[test]
fn index_set_shifts() {
    for m in (4..=10_000u64).step_by(4) {
        let sets = index_sets(m).unwrap();
        let by_congruence =
            |lo: u64, hi: u64, r: u64| -> Vec<u64> { (lo..=hi).filter(|i| i % 4 == r).collect() };
        assert_eq!(sets.i1, by_congruence(1, m - 1, 1), "I1, M = {m}");
        assert_eq!(sets.i2, by_congruence(3, m - 1, 3), "I2, M = {m}");
        assert_eq!(sets.i3, by_congruence(m + 1, 2 * m - 1, 1), "I3, M = {m}");
        assert_eq!(sets.i4, by_congruence(m + 3, 2 * m - 1, 3), "I4, M = {m}");

        for &i in &sets.i1 {
            let j = i + m + 1;
            assert!((m..2 * m).contains(&j) && j % 4 == 2, "I1 {i}, M = {m}");
        }
        for &i in &sets.i2 {
            let j = i + m - 3;
            assert!((m..2 * m).contains(&j) && j % 4 == 0, "I2 {i}, M = {m}");
        }
        for (set, residue) in [(&sets.i3, 0), (&sets.i4, 2)] {
            for &i in set {
                let j = (i + m - 1) % (2 * m);
                assert_eq!(j, i - m - 1);
                assert!(j < m && j % 4 == residue, "{i}, M = {m}");
            }
        }

        let pairs = sets.exponent_pairs(m);
        assert_eq!(pairs.len() as u64, m);
        let mut hit = vec![0u8; 2 * m as usize];
        for (i, j) in pairs {
            hit[i as usize] += 1;
            hit[j as usize] += 1;
        }
        assert!(
            hit.iter().all(|&h| h == 1),
            "exponents not covered once, M = {m}"
        );
    }
}

#[test]
fn index_set_examples() {
    let s = index_sets(8).unwrap();
    assert_eq!(
        (s.i1, s.i2, s.i3, s.i4),
        (vec![1, 5], vec![3, 7], vec![9, 13], vec![11, 15])
    );
    let s = index_sets(4).unwrap();
    assert_eq!(
        (s.i1, s.i2, s.i3, s.i4),
        (vec![1], vec![3], vec![5], vec![7])
    );
    let s = index_sets(12).unwrap();
    assert!([&s.i1, &s.i2, &s.i3, &s.i4].iter().all(|v| v.len() == 3));
    for bad in [0, 2, 6, 10] {
        assert_eq!(index_sets(bad).unwrap_err(), Error::BadHalfOrder(bad));
    }
}

#[test]
fn quartic_construction_up_to_1e5() {
    for p in odd_primes(100_000).filter(|p| p % 8 == 1) {
        let c = ctx(p);
        let a = quartic_root_search(&c).unwrap();
        let f = construct_1mod8(&c, a).unwrap();
        assert!(verify_factor(&f, &c).passed(), "p = {p}");
        if p < 20_000 {
            assert!(independent_check(p, &raw(&f)), "p = {p}");
        }
    }
}

#[test]
fn quartic_construction_rejects_bad_roots() {
    let c = ctx(17);
    assert_eq!(
        construct_1mod8(&c, 2).unwrap_err(),
        Error::NotPrimitiveRoot { a: 2, p: 17 }
    );
    // 5 is a primitive root mod 17 but 5·21 = 105 ≡ 3 is not a fourth power
    assert_eq!(
        construct_1mod8(&c, 5).unwrap_err(),
        Error::QuarticConditionFails { a: 5, p: 17 }
    );
    assert!(matches!(
        construct_1mod8(&ctx(13), 2),
        Err(Error::WrongResidueClass { .. })
    ));
}

#[test]
fn negation_construction() {
    for p in odd_primes(10_000).filter(|p| p % 4 == 3) {
        let f = construct_3mod4(&ctx(p)).unwrap();
        assert!(independent_check(p, &raw(&f)), "p = {p}");
        for e in f.edges() {
            match e.endpoints() {
                (Vertex::Field(0), Vertex::Centre) => {}
                (Vertex::Field(x), Vertex::Field(y)) => assert_eq!(x + y, p),
                other => panic!("unexpected edge {other:?}"),
            }
        }
    }
}

#[test]
fn oracle_and_dispatcher_agree() {
    for p in odd_primes(1_000) {
        let c = ctx(p);
        let dispatched = construct(&c).unwrap();
        let searched = oracle_search(&c, 1_000).unwrap();
        assert!(independent_check(p, &raw(&dispatched)), "construct p = {p}");
        assert!(independent_check(p, &raw(&searched)), "oracle p = {p}");
        assert!(verify_factor(&searched, &c).passed());
    }
}

#[test]
fn exact_search_is_complete_on_small_primes() {
    for p in odd_primes(200) {
        let f = exact_search(&ctx(p), 200).unwrap();
        assert!(independent_check(p, &raw(&f)), "p = {p}");
    }
    assert_eq!(
        exact_search(&ctx(211), 200).unwrap_err(),
        Error::CapExceeded { p: 211, cap: 200 }
    );
}

#[test]
fn oracle_is_deterministic() {
    for p in [13, 101, 1_013] {
        let c = ctx(p);
        assert_eq!(oracle_search(&c, 10_000), oracle_search(&c, 10_000));
    }
}

#[test]
fn finite_lengths_fill_one_to_m() {
    for p in odd_primes(3_000) {
        let c = ctx(p);
        let f = construct(&c).unwrap();
        let mut finite: Vec<u64> = Vec::new();
        let mut infinite = 0;
        for e in f.edges() {
            match edge_length(e, &c) {
                Length::Finite(d) => finite.push(d),
                Length::Infinity => infinite += 1,
            }
        }
        finite.sort_unstable();
        assert_eq!(infinite, 1);
        assert_eq!(finite, (1..=c.half()).collect::<Vec<_>>(), "p = {p}");
    }
}

fn prime_strategy() -> impl Strategy<Value = u64> {
    let primes: Vec<u64> = odd_primes(2_000).collect();
    proptest::sample::select(primes)
}

proptest! {
    #[test]
    fn edge_length_is_canonical(p in prime_strategy(), x in 0u64..2_000, y in 0u64..2_000) {
        let (x, y) = (x % p, y % p);
        prop_assume!(x != y);
        let c = ctx(p);
        let e = Edge::new(Vertex::Field(x), Vertex::Field(y)).unwrap();
        let r = Edge::new(Vertex::Field(y), Vertex::Field(x)).unwrap();
        prop_assert_eq!(e, r);
        match edge_length(&e, &c) {
            Length::Finite(d) => {
                prop_assert!((1..=c.half()).contains(&d));
                prop_assert!((x + d) % p == y || (y + d) % p == x);
            }
            Length::Infinity => prop_assert!(false, "finite edge got infinite length"),
        }
        let to_centre = Edge::new(Vertex::Field(x), Vertex::Centre).unwrap();
        prop_assert_eq!(edge_length(&to_centre, &c), Length::Infinity);
    }

    /// Exchanging endpoints between two edges keeps a perfect matching; the
    /// verifier and the independent checker must agree on the result.
    #[test]
    fn verifier_agrees_on_swapped_endpoints(
        p in prime_strategy(),
        i in 0usize..1_000,
        j in 0usize..1_000,
        cross in any::<bool>(),
    ) {
        let c = ctx(p);
        let f = construct(&c).unwrap();
        let mut edges = raw(&f);
        let n = edges.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let (a, b) = edges[i];
        let (x, y) = edges[j];
        if cross {
            edges[i] = (a, x);
            edges[j] = (b, y);
        } else {
            edges[i] = (a, y);
            edges[j] = (x, b);
        }
        let rebuilt: Vec<Edge> = edges
            .iter()
            .map(|&(x, y)| {
                let v = |o: Option<u64>| o.map_or(Vertex::Centre, Vertex::Field);
                Edge::new(v(x), v(y)).unwrap()
            })
            .collect();
        let g = OneFactor::new(p, rebuilt).unwrap();
        prop_assert_eq!(verify_factor(&g, &c).passed(), independent_check(p, &edges));
    }
}
