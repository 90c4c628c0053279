//! Residue-compatible 1-factors of `K_{p+1}` on the vertex set `F_p ∪ {c}`.
//!
//! A factor qualifies when every edge joins a quadratic residue to a
//! non-residue (0 counts as a residue, the centre as a non-residue) and no two
//! edges share a length. Three routes produce one:
//!
//! * `p ≡ 3 (mod 4)`: pair `d` with `-d` and `0` with the centre.
//! * `p ≡ 1 (mod 8)`: the primitive-root construction driven by a root `a`
//!   with `a(a^2-a+1)` a fourth power.
//! * anything else small enough: depth-first backtracking.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numtheory::{
    is_primitive_root, legendre, mod_mul, mod_pow, quartic_polynomial, quartic_root_search,
    PrimeContext,
};

/// Default largest prime the backtracking search will accept.
pub const DEFAULT_ORACLE_CAP: u64 = 10_000;

/// A vertex of `K_{p+1}`. Field vertices sort before the centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Field(u64),
    Centre,
}

impl Vertex {
    pub fn field(&self) -> Option<u64> {
        match *self {
            Vertex::Field(v) => Some(v),
            Vertex::Centre => None,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Field(v) => write!(f, "{v}"),
            Vertex::Centre => f.write_str("c"),
        }
    }
}

/// An unordered pair of distinct vertices, stored smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn new(x: Vertex, y: Vertex) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Self { lo: x, hi: y }),
            std::cmp::Ordering::Greater => Ok(Self { lo: y, hi: x }),
            std::cmp::Ordering::Equal => Err(Error::DegenerateEdge(x)),
        }
    }

    pub(crate) fn field(x: u64, y: u64) -> Self {
        Self::new(Vertex::Field(x), Vertex::Field(y)).expect("distinct endpoints")
    }

    pub(crate) fn to_centre(x: u64) -> Self {
        Self {
            lo: Vertex::Field(x),
            hi: Vertex::Centre,
        }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.lo, self.hi)
    }

    pub fn touches_centre(&self) -> bool {
        self.hi == Vertex::Centre
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Canonical edge length: `min(x-y, y-x) mod p` for field edges, infinite for
/// edges through the centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(d) => write!(f, "{d}"),
            Length::Infinity => f.write_str("inf"),
        }
    }
}

/// A set of edges on `F_p ∪ {c}` kept in canonical (sorted) order.
///
/// The type does not enforce the matching property, so that malformed
/// candidates can be represented and rejected by the verification checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneFactor {
    p: u64,
    edges: Vec<Edge>,
}

impl OneFactor {
    pub fn new(p: u64, mut edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            let (x, y) = e.endpoints();
            for v in [x, y].into_iter().filter_map(|v| v.field()) {
                if v >= p {
                    return Err(Error::VertexOutOfField { vertex: v, p });
                }
            }
        }
        edges.sort_unstable();
        Ok(Self { p, edges })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Which construction produced a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `{d, -d}` pairs, `p ≡ 3 (mod 4)`.
    Negation,
    /// Primitive-root construction with the given root, `p ≡ 1 (mod 8)`.
    Quartic { root: u64 },
    /// Backtracking search.
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Negation => "neg3mod4",
            Method::Quartic { .. } => "quartic1mod8",
            Method::Oracle => "oracle",
        }
    }

    pub fn root(&self) -> Option<u64> {
        match *self {
            Method::Quartic { root } => Some(root),
            _ => None,
        }
    }
}

pub fn construct_3mod4(ctx: &PrimeContext) -> Result<OneFactor> {
    ctx.require_class(4, 3)?;
    let p = ctx.p();
    let mut edges = vec![Edge::to_centre(0)];
    edges.extend((1..=ctx.half()).map(|d| Edge::field(d, p - d)));
    OneFactor::new(p, edges)
}

/// The four exponent index sets of the primitive-root construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSets {
    pub i1: Vec<u64>,
    pub i2: Vec<u64>,
    pub i3: Vec<u64>,
    pub i4: Vec<u64>,
}

impl IndexSets {
    /// Each index paired with its partner exponent, reduced mod `2M`. The
    /// partner of `i` is `i + M + 1`, `i + M - 3`, `i + M - 1`, `i + M - 1`
    /// for the four sets respectively.
    pub fn exponent_pairs(&self, half: u64) -> Vec<(u64, u64)> {
        let order = 2 * half;
        let shifts = [half + 1, half - 3, half - 1, half - 1];
        [&self.i1, &self.i2, &self.i3, &self.i4]
            .into_iter()
            .zip(shifts)
            .flat_map(|(set, shift)| set.iter().map(move |&i| (i, (i + shift) % order)))
            .collect()
    }
}

pub fn index_sets(half: u64) -> Result<IndexSets> {
    if half < 4 || !half.is_multiple_of(4) {
        return Err(Error::BadHalfOrder(half));
    }
    let m = half;
    let step = |start: u64, end: u64| (start..=end).step_by(4).collect::<Vec<_>>();
    Ok(IndexSets {
        i1: step(1, m - 3),
        i2: step(3, m - 1),
        i3: step(m + 1, 2 * m - 3),
        i4: step(m + 3, 2 * m - 1),
    })
}

/// Primitive-root construction for `p ≡ 1 (mod 8)`.
pub fn construct_1mod8(ctx: &PrimeContext, a: u64) -> Result<OneFactor> {
    ctx.require_class(8, 1)?;
    let p = ctx.p();
    let a = a % p;
    if !is_primitive_root(a, ctx) {
        return Err(Error::NotPrimitiveRoot { a, p });
    }
    let f = quartic_polynomial(a, p);
    if f == 0 || mod_pow(f, (p - 1) / 4, p) != 1 {
        return Err(Error::QuarticConditionFails { a, p });
    }

    let half = ctx.half();
    let mut powers = Vec::with_capacity(2 * half as usize);
    let mut x = 1u64;
    for _ in 0..2 * half {
        powers.push(x);
        x = mod_mul(x, a, p);
    }

    let sets = index_sets(half)?;
    let mut edges = vec![Edge::to_centre(0)];
    edges.extend(
        sets.exponent_pairs(half)
            .into_iter()
            .map(|(i, j)| Edge::field(powers[i as usize], powers[j as usize])),
    );
    OneFactor::new(p, edges)
}

/// Search for a qualifying factor without any algebraic construction, for
/// primes up to `cap`.
///
/// A seeded hill climb runs first: it repeatedly joins an uncovered vertex to
/// a partner at an unused length, evicting whatever edge that partner was in.
/// If the climb stalls, the complete exact-cover search of [`exact_search`]
/// decides. `NotFound` therefore means no qualifying factor exists. The result
/// depends only on `p`.
pub fn oracle_search(ctx: &PrimeContext, cap: u64) -> Result<OneFactor> {
    let p = ctx.p();
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    for attempt in 0..HILL_CLIMB_ATTEMPTS {
        if let Some(f) = HillClimb::new(ctx, attempt).run() {
            return Ok(f);
        }
    }
    ExactCover::new(ctx).solve()
}

/// Complete depth-first search for a qualifying factor, for primes up to `cap`.
///
/// The search is an exact cover: every vertex and every length (the centre
/// edge carrying length infinity) must be used exactly once, by edges that
/// join a residue to a non-residue. Each step branches on the uncovered item
/// with the fewest remaining edges (lengths before vertices on ties, smaller
/// index first). An item with no remaining edge forces a backtrack. Returns
/// `NotFound` only after the whole space has been exhausted.
pub fn exact_search(ctx: &PrimeContext, cap: u64) -> Result<OneFactor> {
    let p = ctx.p();
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    ExactCover::new(ctx).solve()
}

const HILL_CLIMB_ATTEMPTS: u64 = 4;

/// Consecutive failed proposals before the climb borrows a used length.
const STALL_LIMIT: u32 = 8;

const UNSET: usize = usize::MAX;

/// A set of small integers with O(1) insert, remove and uniform sampling.
struct IndexedSet {
    items: Vec<usize>,
    position: Vec<usize>,
}

impl IndexedSet {
    fn full(n: usize) -> Self {
        Self {
            items: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    fn insert(&mut self, x: usize) {
        if self.position[x] == UNSET {
            self.position[x] = self.items.len();
            self.items.push(x);
        }
    }

    fn remove(&mut self, x: usize) {
        let at = std::mem::replace(&mut self.position[x], UNSET);
        if at != UNSET {
            let last = self.items.pop().expect("nonempty");
            if last != x {
                self.items[at] = last;
                self.position[last] = at;
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        self.items[rng.gen_range(0..self.items.len())]
    }

    fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

struct HillClimb {
    p: usize,
    /// Residue class per vertex; index `p` is the centre.
    residue: Vec<bool>,
    residues: Vec<usize>,
    partner: Vec<usize>,
    /// For each length (0 = infinity), one endpoint of the edge using it.
    owner: Vec<usize>,
    uncovered: IndexedSet,
    free_lengths: IndexedSet,
    rng: ChaCha8Rng,
}

impl HillClimb {
    fn new(ctx: &PrimeContext, attempt: u64) -> Self {
        let p = ctx.p() as usize;
        let half = ctx.half() as usize;
        let mut residue: Vec<bool> = (0..p as u64).map(|v| legendre(v, ctx) >= 0).collect();
        residue.push(false);
        let residues = (0..p).filter(|&v| residue[v]).collect();
        Self {
            p,
            residue,
            residues,
            partner: vec![UNSET; p + 1],
            owner: vec![UNSET; half + 1],
            uncovered: IndexedSet::full(p + 1),
            free_lengths: IndexedSet::full(half + 1),
            rng: ChaCha8Rng::seed_from_u64((p as u64) << 8 | attempt),
        }
    }

    fn length(&self, v: usize, w: usize) -> usize {
        if v == self.p || w == self.p {
            0
        } else {
            let d = (v + self.p - w) % self.p;
            d.min(self.p - d)
        }
    }

    fn unlink(&mut self, v: usize) {
        let w = std::mem::replace(&mut self.partner[v], UNSET);
        self.partner[w] = UNSET;
        let len = self.length(v, w);
        self.owner[len] = UNSET;
        self.free_lengths.insert(len);
        self.uncovered.insert(v);
        self.uncovered.insert(w);
    }

    fn link(&mut self, v: usize, w: usize) {
        let len = self.length(v, w);
        self.partner[v] = w;
        self.partner[w] = v;
        self.owner[len] = v;
        self.free_lengths.remove(len);
        self.uncovered.remove(v);
        self.uncovered.remove(w);
    }

    /// Proposed partner for `v` at length `len`, if one has the other class.
    fn propose(&mut self, v: usize, len: usize) -> Option<usize> {
        let p = self.p;
        if v == p {
            return Some(self.residues[self.rng.gen_range(0..self.residues.len())]);
        }
        if len == 0 {
            return self.residue[v].then_some(p);
        }
        let up = (v + len) % p;
        let down = (v + p - len) % p;
        let ok = |w: usize| self.residue[w] != self.residue[v];
        match (ok(up), ok(down)) {
            (true, true) => Some(if self.rng.gen() { up } else { down }),
            (true, false) => Some(up),
            (false, true) => Some(down),
            (false, false) => None,
        }
    }

    fn run(mut self) -> Option<OneFactor> {
        let p = self.p;
        let step_limit = 64 * (p as u64 + 1) * (64 - (p as u64).leading_zeros() as u64);
        let mut stalled = 0;
        for _ in 0..step_limit {
            if self.uncovered.is_empty() {
                let edges = (0..p)
                    .filter(|&v| self.partner[v] > v)
                    .map(|v| {
                        if self.partner[v] == p {
                            Edge::to_centre(v as u64)
                        } else {
                            Edge::field(v as u64, self.partner[v] as u64)
                        }
                    })
                    .collect();
                return OneFactor::new(p as u64, edges).ok();
            }
            let v = self.uncovered.sample(&mut self.rng);
            let len = if v == p {
                0
            } else {
                self.free_lengths.sample(&mut self.rng)
            };
            // A free length that fits neither neighbour of any uncovered
            // vertex is a dead end; after a run of failed proposals, borrow
            // a length that is already in use.
            let mut proposal = self.propose(v, len);
            if proposal.is_none() && stalled >= STALL_LIMIT {
                let any = self.rng.gen_range(0..self.owner.len());
                proposal = self.propose(v, any);
            }
            let Some(w) = proposal else {
                stalled += 1;
                continue;
            };
            stalled = 0;
            let len = self.length(v, w);
            if self.owner[len] != UNSET {
                let holder = self.owner[len];
                self.unlink(holder);
            }
            if self.partner[w] != UNSET {
                self.unlink(w);
            }
            self.link(v, w);
        }
        None
    }
}

/// An edge in search coordinates: start vertex `x` and length `len`, joining
/// `x` to `x + len` for `len ≥ 1` and `x` to the centre for `len == 0`.
type Slot = (usize, usize);

enum Pass {
    Found(Vec<Slot>),
    Exhausted,
    OutOfBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Length(usize),
    Vertex(usize),
}

struct ExactCover {
    p: usize,
    half: usize,
    /// Residue class per vertex; index `p` is the centre.
    residue: Vec<bool>,
    vertex_used: Vec<bool>,
    /// Index 0 is the infinite length.
    length_used: Vec<bool>,
    vertex_count: Vec<u32>,
    length_count: Vec<u32>,
}

impl ExactCover {
    fn new(ctx: &PrimeContext) -> Self {
        let p = ctx.p() as usize;
        let half = ctx.half() as usize;
        let mut residue: Vec<bool> = (0..p as u64).map(|v| legendre(v, ctx) >= 0).collect();
        residue.push(false);
        let mut this = Self {
            p,
            half,
            residue,
            vertex_used: vec![false; p + 1],
            length_used: vec![false; half + 1],
            vertex_count: vec![0; p + 1],
            length_count: vec![0; half + 1],
        };
        for len in 0..=half {
            for x in 0..p {
                if this.live((x, len)) {
                    this.adjust((x, len), 1);
                }
            }
        }
        this
    }

    #[inline]
    fn partner(&self, (x, len): Slot) -> usize {
        if len == 0 {
            self.p
        } else {
            (x + len) % self.p
        }
    }

    /// Whether the edge is admissible and all its items are still free.
    #[inline]
    fn live(&self, slot: Slot) -> bool {
        let (x, len) = slot;
        let y = self.partner(slot);
        !self.length_used[len]
            && !self.vertex_used[x]
            && !self.vertex_used[y]
            && self.residue[x] != self.residue[y]
    }

    #[inline]
    fn adjust(&mut self, slot: Slot, delta: i32) {
        let y = self.partner(slot);
        let bump = |c: &mut u32| *c = c.wrapping_add_signed(delta);
        bump(&mut self.length_count[slot.1]);
        bump(&mut self.vertex_count[slot.0]);
        bump(&mut self.vertex_count[y]);
    }

    /// Edges of a length, as slots.
    fn length_slots(&self, len: usize) -> impl Iterator<Item = Slot> {
        (0..self.p).map(move |x| (x, len))
    }

    /// Edges at a vertex, as slots, by ascending length.
    fn vertex_slots(&self, v: usize) -> Vec<Slot> {
        let p = self.p;
        if v == p {
            return (0..p).map(|x| (x, 0)).collect();
        }
        let mut out = Vec::with_capacity(2 * self.half + 1);
        for len in 1..=self.half {
            let down = (v + p - len) % p;
            if down < v {
                out.extend([(down, len), (v, len)]);
            } else {
                out.extend([(v, len), (down, len)]);
            }
        }
        out.push((v, 0));
        out
    }

    /// Retract every live edge sharing an item with `slot`, then mark its
    /// items used. Returns nothing; `release` is the exact inverse.
    fn claim(&mut self, slot: Slot) {
        let (x, len) = slot;
        let y = self.partner(slot);
        for s in self.length_slots(len).collect::<Vec<_>>() {
            if self.live(s) {
                self.adjust(s, -1);
            }
        }
        self.length_used[len] = true;
        for v in [x, y] {
            for s in self.vertex_slots(v) {
                if self.live(s) {
                    self.adjust(s, -1);
                }
            }
            self.vertex_used[v] = true;
        }
    }

    fn release(&mut self, slot: Slot) {
        let (x, len) = slot;
        let y = self.partner(slot);
        for v in [y, x] {
            self.vertex_used[v] = false;
            for s in self.vertex_slots(v) {
                if self.live(s) {
                    self.adjust(s, 1);
                }
            }
        }
        self.length_used[len] = false;
        for s in self.length_slots(len).collect::<Vec<_>>() {
            if self.live(s) {
                self.adjust(s, 1);
            }
        }
    }

    /// The free item with the fewest live edges, or `None` once all are used.
    fn most_constrained(&self) -> Option<(Item, u32)> {
        let lengths = (0..=self.half)
            .filter(|&l| !self.length_used[l])
            .map(|l| (Item::Length(l), self.length_count[l]));
        let vertices = (0..=self.p)
            .filter(|&v| !self.vertex_used[v])
            .map(|v| (Item::Vertex(v), self.vertex_count[v]));
        lengths
            .chain(vertices)
            .fold(None, |best: Option<(Item, u32)>, cand| match best {
                Some(b) if b.1 <= cand.1 => Some(b),
                _ => Some(cand),
            })
    }

    fn options(&self, item: Item) -> Vec<Slot> {
        let mut slots: Vec<Slot> = match item {
            Item::Length(l) => self.length_slots(l).filter(|&s| self.live(s)).collect(),
            Item::Vertex(v) => self
                .vertex_slots(v)
                .into_iter()
                .filter(|&s| self.live(s))
                .collect(),
        };
        // infinite length last
        slots.sort_by_key(|&(x, l)| (l == 0, l, x));
        slots
    }

    /// Restarted search: the first pass keeps the canonical option order,
    /// later passes shuffle each frame's options with a generator seeded by
    /// `p` and the pass number. Every pass but the last to run is cut off
    /// after a node budget that doubles per pass, so the search still ends
    /// once a pass exhausts the space.
    fn solve(mut self) -> Result<OneFactor> {
        let mut budget = 8 * (self.half as u64 + 1);
        for pass in 0u64.. {
            let mut rng =
                (pass > 0).then(|| ChaCha8Rng::seed_from_u64((self.p as u64) << 16 | pass));
            match self.search(rng.as_mut(), budget) {
                Pass::Found(slots) => {
                    let edges = slots.into_iter().map(|s| self.edge(s)).collect();
                    return OneFactor::new(self.p as u64, edges);
                }
                Pass::Exhausted => break,
                Pass::OutOfBudget => budget = budget.saturating_mul(2),
            }
        }
        Err(Error::NotFound(self.p as u64))
    }

    fn search(&mut self, mut rng: Option<&mut ChaCha8Rng>, budget: u64) -> Pass {
        struct Frame {
            options: Vec<Slot>,
            next: usize,
            current: Option<Slot>,
        }
        let mut stack: Vec<Frame> = Vec::with_capacity(self.half + 1);
        let mut descend = |this: &Self, stack: &mut Vec<Frame>| -> bool {
            match this.most_constrained() {
                None => true,
                Some((item, _)) => {
                    let mut options = this.options(item);
                    if let Some(rng) = rng.as_deref_mut() {
                        options.shuffle(rng);
                    }
                    stack.push(Frame {
                        options,
                        next: 0,
                        current: None,
                    });
                    false
                }
            }
        };
        if descend(self, &mut stack) {
            return Pass::Found(Vec::new());
        }

        let mut nodes = 0u64;
        while let Some(frame) = stack.last_mut() {
            if let Some(slot) = frame.current.take() {
                self.release(slot);
            }
            let Some(&slot) = frame.options.get(frame.next) else {
                stack.pop();
                continue;
            };
            nodes += 1;
            if nodes > budget {
                for slot in stack.iter().rev().filter_map(|f| f.current) {
                    self.release(slot);
                }
                return Pass::OutOfBudget;
            }
            frame.next += 1;
            frame.current = Some(slot);
            self.claim(slot);
            if descend(self, &mut stack) {
                return Pass::Found(stack.iter().filter_map(|f| f.current).collect());
            }
        }
        Pass::Exhausted
    }

    fn edge(&self, slot: Slot) -> Edge {
        let y = self.partner(slot);
        if y == self.p {
            Edge::to_centre(slot.0 as u64)
        } else {
            Edge::field(slot.0 as u64, y as u64)
        }
    }
}

/// Build a qualifying factor for any odd prime, reporting the route taken.
pub fn construct_with_cap(ctx: &PrimeContext, oracle_cap: u64) -> Result<(OneFactor, Method)> {
    match ctx.residue_class() {
        3 | 7 => Ok((construct_3mod4(ctx)?, Method::Negation)),
        1 => {
            let root = quartic_root_search(ctx)?;
            Ok((construct_1mod8(ctx, root)?, Method::Quartic { root }))
        }
        _ => Ok((oracle_search(ctx, oracle_cap)?, Method::Oracle)),
    }
}

pub fn construct(ctx: &PrimeContext) -> Result<OneFactor> {
    construct_with_cap(ctx, DEFAULT_ORACLE_CAP).map(|(f, _)| f)
}
