//! Curve classes on the once-punctured torus and the four-punctured sphere,
//! named by reduced slopes, and the Farey graph they span.
//!
//! A slope `p/q` stands for the primitive homology class `p·[a] + q·[b]` of
//! the torus, so `1/0` is the `a`-curve and `0/1` is the `b`-curve. Both
//! curve graphs of the low-complexity surfaces are the Farey graph on these
//! slopes; only the edge rule in terms of intersection number differs.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub mod oracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("0/0 is not a slope")]
    ZeroZero,
    #[error("slope {0}/{1} is not reduced")]
    NotReduced(BigInt, BigInt),
    #[error("cannot parse slope {0:?}")]
    Parse(String),
    #[error("Fibonacci index must be at least 2, got {0}")]
    LameIndex(u32),
    #[error("intersection number must be positive")]
    ZeroIntersection,
}

/// Reduced slope `p/q` with `q >= 0`; `1/0` is the unique infinite slope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Builds the canonical representative of `p/q`. The pair must already be
    /// coprime; only the sign is normalized.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, SlopeError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(SlopeError::ZeroZero);
        }
        if !p.gcd(&q).is_one() {
            return Err(SlopeError::NotReduced(p, q));
        }
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    /// Reduces an arbitrary nonzero pair first.
    pub fn reduced(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, SlopeError> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(SlopeError::ZeroZero);
        }
        let g = p.gcd(&q);
        Slope::new(p / &g, q / &g)
    }

    pub fn infinity() -> Self {
        Slope { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Slope { p: BigInt::zero(), q: BigInt::one() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    /// `max(|p|, q)`.
    pub fn height(&self) -> BigInt {
        self.p.abs().max(self.q.clone())
    }

    /// `p q' - p' q`.
    pub fn det(&self, other: &Slope) -> BigInt {
        &self.p * &other.q - &other.p * &self.q
    }

    pub fn is_farey_adjacent(&self, other: &Slope) -> bool {
        self.det(other).abs().is_one()
    }

    /// Total order by value with `1/0` as the maximum.
    pub fn cmp_value(&self, other: &Slope) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.p * &other.q).cmp(&(&other.p * &self.q)),
        }
    }

    /// Lexicographic `(p, q)` order, used for tie-breaking.
    fn cmp_lex(&self, other: &Slope) -> Ordering {
        (&self.p, &self.q).cmp(&(&other.p, &other.q))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SlopeError::Parse(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.strip_prefix('+').unwrap_or(p).parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// Once-punctured torus: adjacent curves meet once.
    T11,
    /// Four-punctured sphere: adjacent curves meet twice.
    S04,
}

/// Geometric intersection number of the two curve classes.
pub fn intersection_number(s1: &Slope, s2: &Slope, surface: SurfaceKind) -> BigInt {
    let d = s1.det(s2).abs();
    match surface {
        SurfaceKind::T11 => d,
        SurfaceKind::S04 => d * 2,
    }
}

/// Element `[[a, b], [c, d]]` of SL(2, Z) acting on slopes by
/// `p/q -> (a p + b q)/(c p + d q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Sl2z {
    /// Returns `None` unless the determinant is 1.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Option<Self> {
        let m = Sl2z { a: a.into(), b: b.into(), c: c.into(), d: d.into() };
        (&m.a * &m.d - &m.b * &m.c).is_one().then_some(m)
    }

    pub fn apply(&self, s: &Slope) -> Slope {
        let p = &self.a * &s.p + &self.b * &s.q;
        let q = &self.c * &s.p + &self.d * &s.q;
        Slope::new(p, q).expect("SL(2,Z) preserves primitivity")
    }

    pub fn inverse(&self) -> Sl2z {
        Sl2z { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn compose(&self, rhs: &Sl2z) -> Sl2z {
        Sl2z {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// A matrix sending `s` to `1/0`.
    pub fn to_infinity(s: &Slope) -> Sl2z {
        // p x + q y = 1, so [[p, -y], [q, x]] sends 1/0 to p/q.
        let e = s.p.extended_gcd(&s.q);
        let (x, y) = if e.gcd.is_one() { (e.x, e.y) } else { (-e.x, -e.y) };
        Sl2z { a: s.p.clone(), b: -y, c: s.q.clone(), d: x }.inverse()
    }
}

/// Path in the Farey graph; consecutive vertices are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyPath {
    pub vertices: Vec<Slope>,
}

impl FareyPath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_valid(&self) -> bool {
        !self.vertices.is_empty() && self.vertices.windows(2).all(|w| w[0].is_farey_adjacent(&w[1]))
    }
}

/// The strip of Farey triangles crossed by the hyperbolic geodesic from `1/0`
/// to the normalized target, as a small graph. Every Farey geodesic between
/// the endpoints lies in it: an excursion across a boundary edge `uv` costs at
/// least two steps where the edge costs one. Fan vertices private to a fan with
/// partial quotient `>= 3` are never on a geodesic and are dropped.
struct Ladder {
    /// Normalized coordinates; index 0 is `1/0`.
    vertices: Vec<(BigInt, BigInt)>,
    target: usize,
    adjacency: Vec<Vec<usize>>,
    /// Sends normalized coordinates back to the caller's slopes.
    back: Sl2z,
}

impl Ladder {
    fn build(s1: &Slope, s2: &Slope) -> Ladder {
        let to_inf = Sl2z::to_infinity(s1);
        let x = to_inf.apply(s2);
        let mut ladder = Ladder { vertices: Vec::new(), adjacency: Vec::new(), target: 0, back: to_inf.inverse() };
        let inf = ladder.vertex((BigInt::one(), BigInt::zero()));
        if x.is_infinite() {
            return ladder;
        }
        // Translate by -floor(x); keeps 1/0 fixed.
        let a0 = x.p.div_floor(&x.q);
        let shift = Sl2z { a: BigInt::one(), b: -&a0, c: BigInt::zero(), d: BigInt::one() };
        ladder.back = ladder.back.compose(&shift.inverse());
        let (mut num, mut den) = (&x.p - &a0 * &x.q, x.q.clone());
        let zero = ladder.vertex((BigInt::zero(), BigInt::one()));
        ladder.edge(inf, zero);
        ladder.target = zero;
        if num.is_zero() {
            return ladder;
        }
        // Partial quotients of num/den in (0, 1), skipping the zero integer part.
        let mut quotients = Vec::new();
        std::mem::swap(&mut num, &mut den);
        while !den.is_zero() {
            let (q, r) = num.div_rem(&den);
            quotients.push(q);
            num = den;
            den = r;
        }
        let (mut prev2, mut prev1) = (inf, zero);
        for a in quotients {
            let (p2, q2) = ladder.vertices[prev2].clone();
            let (p1, q1) = ladder.vertices[prev1].clone();
            let next = ladder.vertex((&p2 + &a * &p1, &q2 + &a * &q1));
            ladder.edge(prev1, next);
            if a.is_one() {
                ladder.edge(prev2, next);
            } else if a == BigInt::from(2) {
                let mid = ladder.vertex((&p2 + &p1, &q2 + &q1));
                ladder.edge(prev2, mid);
                ladder.edge(mid, next);
                ladder.edge(prev1, mid);
            }
            prev2 = prev1;
            prev1 = next;
        }
        ladder.target = prev1;
        ladder
    }

    fn vertex(&mut self, v: (BigInt, BigInt)) -> usize {
        self.vertices.push(v);
        self.adjacency.push(Vec::new());
        self.vertices.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    fn bfs(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn original(&self, idx: usize) -> Slope {
        let (p, q) = &self.vertices[idx];
        self.back.apply(&Slope::new(p.clone(), q.clone()).expect("ladder vertices are primitive"))
    }
}

pub fn farey_distance(s1: &Slope, s2: &Slope) -> usize {
    let ladder = Ladder::build(s1, s2);
    ladder.bfs(0)[ladder.target]
}

/// A shortest Farey path from `s1` to `s2`. Among all geodesics, each step
/// takes the lexicographically smallest `(p, q)` that still lies on one.
pub fn farey_geodesic(s1: &Slope, s2: &Slope) -> FareyPath {
    let ladder = Ladder::build(s1, s2);
    let to_target = ladder.bfs(ladder.target);
    let mut current = 0;
    let mut vertices = vec![s1.clone()];
    while current != ladder.target {
        let want = to_target[current] - 1;
        current = ladder.adjacency[current]
            .iter()
            .copied()
            .filter(|&v| to_target[v] == want)
            .min_by(|&u, &v| ladder.original(u).cmp_lex(&ladder.original(v)))
            .expect("a neighbor one step closer exists");
        vertices.push(ladder.original(current));
    }
    FareyPath { vertices }
}

/// Fibonacci numbers with `u_1 = u_2 = 1`.
pub fn fibonacci(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `(0/1, u_n/u_{n+1})`, the Fibonacci pair of index `n`.
pub fn lame_pair(n: u32) -> Result<(Slope, Slope), SlopeError> {
    if n < 2 {
        return Err(SlopeError::LameIndex(n));
    }
    let beta = Slope::new(fibonacci(n), fibonacci(n + 1)).expect("consecutive Fibonacci numbers are coprime");
    Ok((Slope::zero(), beta))
}

/// `log2` of a positive big integer, accurate for values beyond `f64` range.
pub fn log2_big(i: &BigInt) -> f64 {
    let bits = i.bits();
    if bits <= 1000 {
        return i.to_f64().expect("finite below 2^1000").log2();
    }
    let shift = bits - 64;
    let top: BigInt = i >> shift;
    top.to_f64().expect("64-bit head").log2() + shift as f64
}

/// Distance bound `2 log2(i) + 2` for curves meeting `i >= 1` times.
pub fn hempel_upper_bound(i: &BigInt) -> Result<f64, SlopeError> {
    if !i.is_positive() {
        return Err(SlopeError::ZeroIntersection);
    }
    Ok(2.0 * log2_big(i) + 2.0)
}
