//! Lengths of curves on the once-punctured square torus and on the flat
//! square torus.
//!
//! The hyperbolic structure is given by `A = diag(e^{ℓ/2}, e^{-ℓ/2})` and a
//! conjugate `B` whose axis crosses `A`'s orthogonally, with `ℓ` solved so the
//! commutator is parabolic. Long words are multiplied with a running log
//! scale so traces far beyond `f64` range still give finite lengths.

use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::slopes::{fibonacci, Slope};

pub const PRECISION_ENV: &str = "CURVEFILL_HIGH_PRECISION";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("word is not hyperbolic: |trace| = {0}")]
    NotHyperbolic(f64),
    #[error("invalid letter {0:?}; expected a, b, A or B")]
    BadLetter(char),
    #[error("Fibonacci index must be at least 2, got {0}")]
    IndexTooSmall(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Log-scaled `f64` products.
    Double,
    /// Exact traces in `Z[√2]`, rounded once at the end.
    High,
}

impl Precision {
    /// `High` when the environment variable is set to anything but `0`.
    pub fn from_env() -> Self {
        match std::env::var(PRECISION_ENV) {
            Ok(v) if !v.is_empty() && v != "0" => Precision::High,
            _ => Precision::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        Matrix2::new(self.d, -self.b, -self.c, self.a)
    }

    fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    fn scale(&self, s: f64) -> Self {
        Matrix2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Fixed points on the boundary as projective vectors `(z, w)`.
    pub fn fixed_points(&self) -> Option<[(f64, f64); 2]> {
        let t = self.trace();
        let disc = t * t - 4.0 * self.det();
        if disc <= 0.0 {
            return None;
        }
        let r = disc.sqrt();
        let eig = |lambda: f64| {
            let u = (self.b, lambda - self.a);
            let v = (lambda - self.d, self.c);
            if u.0.hypot(u.1) >= v.0.hypot(v.1) {
                u
            } else {
                v
            }
        };
        Some([eig((t + r) / 2.0), eig((t - r) / 2.0)])
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

/// Freely reduced word in `a, b`; capitals denote inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    /// Exponent sums of `a` and `b`.
    pub fn abelianization(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(p, q), l| match l {
            Letter::A => (p + 1, q),
            Letter::AInv => (p - 1, q),
            Letter::B => (p, q + 1),
            Letter::BInv => (p, q - 1),
        })
    }

    pub fn commutator() -> Word {
        "abAB".parse().expect("valid word")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                'a' => Ok(Letter::A),
                'A' => Ok(Letter::AInv),
                'b' => Ok(Letter::B),
                'B' => Ok(Letter::BInv),
                other => Err(GeomError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Christoffel word of `p/q`: `|p|` copies of `a^{sign p}` and `q` copies of
/// `b`, the `i`-th letter being `b` when `⌊(i+1)q/n⌋ > ⌊iq/n⌋`.
pub fn word_for_slope(s: &Slope) -> Word {
    let p = s.p().to_i64().expect("slope fits in i64");
    let q = s.q().to_i64().expect("slope fits in i64");
    let a = if p < 0 { Letter::AInv } else { Letter::A };
    let n = p.abs() + q.abs();
    let (q, n) = (q as i128, n as i128);
    let b = if q < 0 { Letter::BInv } else { Letter::B };
    Word::new((0..n).map(|i| if ((i + 1) * q.abs()).div_euclid(n) > (i * q.abs()).div_euclid(n) { b } else { a }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupRepresentation {
    pub a: Matrix2,
    pub b: Matrix2,
}

impl GroupRepresentation {
    pub fn image(&self, l: Letter) -> Matrix2 {
        match l {
            Letter::A => self.a,
            Letter::AInv => self.a.inverse(),
            Letter::B => self.b,
            Letter::BInv => self.b.inverse(),
        }
    }

    /// Plain product; only for short words.
    pub fn word_matrix(&self, w: &Word) -> Matrix2 {
        w.letters().iter().fold(Matrix2::IDENTITY, |m, &l| m * self.image(l))
    }

    /// `ρ` conjugated by `g`.
    pub fn conjugate(&self, g: &Matrix2) -> Self {
        let gi = g.inverse();
        GroupRepresentation { a: *g * self.a * gi, b: *g * self.b * gi }
    }

    pub fn commutator_trace(&self) -> f64 {
        self.word_matrix(&Word::commutator()).trace()
    }

    /// Cross ratio of the four axis endpoints; `-1` exactly when the axes
    /// meet orthogonally.
    pub fn axis_cross_ratio(&self) -> Option<f64> {
        let [u1, u2] = self.a.fixed_points()?;
        let [v1, v2] = self.b.fixed_points()?;
        let det = |x: (f64, f64), y: (f64, f64)| x.0 * y.1 - x.1 * y.0;
        Some(det(u1, v1) * det(u2, v2) / (det(u1, v2) * det(u2, v1)))
    }
}

fn rep_for(l: f64) -> GroupRepresentation {
    let (e, c, s) = ((l / 2.0).exp(), (l / 2.0).cosh(), (l / 2.0).sinh());
    GroupRepresentation { a: Matrix2::new(e, 0.0, 0.0, 1.0 / e), b: Matrix2::new(c, s, s, c) }
}

/// The once-punctured square torus. `A` and `B` have equal translation length
/// and orthogonal axes through `i`; the length is found by bisection on the
/// cusp condition `tr[A, B] = -2`.
pub fn square_torus_representation() -> GroupRepresentation {
    let f = |l: f64| rep_for(l).commutator_trace() + 2.0;
    // tr[A,B] + 2 decreases from 4 through 0 on this bracket
    let (mut lo, mut hi) = (0.5_f64, 3.0_f64);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    rep_for(0.5 * (lo + hi))
}

/// The closed form the literature gives for the systole.
pub fn published_systole() -> f64 {
    ((3.0 + 2f64.sqrt()) / 2.0).acosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystoleComparison {
    pub derived: f64,
    pub published: f64,
    pub difference: f64,
    pub agree: bool,
}

pub fn compare_systole() -> SystoleComparison {
    let rho = square_torus_representation();
    let derived = translation_length(&Word::new([Letter::A]), &rho).expect("a is hyperbolic");
    let published = published_systole();
    SystoleComparison { derived, published, difference: derived - published, agree: (derived - published).abs() < 1e-9 }
}

/// Matrix times `e^{log_scale}`, kept with entries of magnitude at most one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    pub m: Matrix2,
    pub log_scale: f64,
}

impl ScaledMatrix {
    pub fn identity() -> Self {
        ScaledMatrix { m: Matrix2::IDENTITY, log_scale: 0.0 }
    }

    pub fn mul(&self, o: &Matrix2) -> Self {
        let m = self.m * *o;
        let s = m.max_abs();
        ScaledMatrix { m: m.scale(1.0 / s), log_scale: self.log_scale + s.ln() }
    }

    /// `det` of the represented matrix.
    pub fn det(&self) -> f64 {
        self.m.det() * (2.0 * self.log_scale).exp()
    }

    /// `ln |trace|`.
    pub fn ln_abs_trace(&self) -> f64 {
        self.m.trace().abs().ln() + self.log_scale
    }
}

pub fn scaled_word_matrix(w: &Word, rho: &GroupRepresentation) -> ScaledMatrix {
    w.letters().iter().fold(ScaledMatrix::identity(), |m, &l| m.mul(&rho.image(l)))
}

/// `2·arccosh(t/2)` from `ln t`, stable for huge `t`.
fn length_from_ln_trace(ln_t: f64) -> Result<f64, GeomError> {
    if ln_t < 30.0 {
        let t = ln_t.exp();
        if t <= 2.0 + 1e-9 {
            return Err(GeomError::NotHyperbolic(t));
        }
        return Ok(2.0 * (t / 2.0).acosh());
    }
    // arccosh(t/2) = ln t + ln((1 + sqrt(1 - 4/t^2))/2)
    let inv = (-2.0 * ln_t).exp();
    Ok(2.0 * (ln_t + ((1.0 + (1.0 - 4.0 * inv).sqrt()) / 2.0).ln()))
}

/// Hyperbolic translation length `2·arccosh(|tr ρ(W)|/2)`.
pub fn translation_length(w: &Word, rho: &GroupRepresentation) -> Result<f64, GeomError> {
    length_from_ln_trace(scaled_word_matrix(w, rho).ln_abs_trace())
}

/// `x + y√2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSqrt2 {
    pub x: BigInt,
    pub y: BigInt,
}

impl ZSqrt2 {
    pub fn new(x: i64, y: i64) -> Self {
        ZSqrt2 { x: x.into(), y: y.into() }
    }

    /// `x² − 2y²`.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - BigInt::from(2) * &self.y * &self.y
    }

    fn conjugate(&self) -> Self {
        ZSqrt2 { x: self.x.clone(), y: -self.y.clone() }
    }

    /// `ln |x + y√2|`, without cancellation.
    pub fn ln_abs(&self) -> f64 {
        if self.x.is_zero() && self.y.is_zero() {
            return f64::NEG_INFINITY;
        }
        // when x and y√2 have opposite signs, divide the norm by the conjugate
        if self.x.is_positive() != self.y.is_positive() && !self.x.is_zero() && !self.y.is_zero() {
            return ln_big(&self.norm().abs()) - self.conjugate().ln_abs();
        }
        let bits = self.x.bits().max(self.y.bits());
        let shift = bits.saturating_sub(60);
        let xf = (&self.x >> shift).to_f64().unwrap_or(0.0);
        let yf = (&self.y >> shift).to_f64().unwrap_or(0.0);
        (xf + yf * 2f64.sqrt()).abs().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_big(n: &BigInt) -> f64 {
    let shift = n.bits().saturating_sub(60);
    (n >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

impl Add for &ZSqrt2 {
    type Output = ZSqrt2;
    fn add(self, o: &ZSqrt2) -> ZSqrt2 {
        ZSqrt2 { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Mul for &ZSqrt2 {
    type Output = ZSqrt2;
    fn mul(self, o: &ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            x: &self.x * &o.x + BigInt::from(2) * &self.y * &o.y,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }
}

impl Neg for ZSqrt2 {
    type Output = ZSqrt2;
    fn neg(self) -> ZSqrt2 {
        ZSqrt2 { x: -self.x, y: -self.y }
    }
}

type ExactMatrix = [ZSqrt2; 4];

fn exact_mul(m: &ExactMatrix, o: &ExactMatrix) -> ExactMatrix {
    [
        &(&m[0] * &o[0]) + &(&m[1] * &o[2]),
        &(&m[0] * &o[1]) + &(&m[1] * &o[3]),
        &(&m[2] * &o[0]) + &(&m[3] * &o[2]),
        &(&m[2] * &o[1]) + &(&m[3] * &o[3]),
    ]
}

/// At the cusp solution `cosh(ℓ/2) = √2`, `sinh(ℓ/2) = 1` and
/// `e^{±ℓ/2} = √2 ± 1`, so the generators have entries in `Z[√2]`.
fn exact_image(l: Letter) -> ExactMatrix {
    let z = |x, y| ZSqrt2::new(x, y);
    match l {
        Letter::A => [z(1, 1), z(0, 0), z(0, 0), z(-1, 1)],
        Letter::AInv => [z(-1, 1), z(0, 0), z(0, 0), z(1, 1)],
        Letter::B => [z(0, 1), z(1, 0), z(1, 0), z(0, 1)],
        Letter::BInv => [z(0, 1), z(-1, 0), z(-1, 0), z(0, 1)],
    }
}

/// Exact `ρ(W)` for the square torus, row major.
pub fn exact_word_matrix(w: &Word) -> [ZSqrt2; 4] {
    let one = [ZSqrt2::new(1, 0), ZSqrt2::new(0, 0), ZSqrt2::new(0, 0), ZSqrt2::new(1, 0)];
    w.letters().iter().fold(one, |m, &l| exact_mul(&m, &exact_image(l)))
}

pub fn exact_det(m: &[ZSqrt2; 4]) -> ZSqrt2 {
    &(&m[0] * &m[3]) + &-(&m[1] * &m[2])
}

/// Exact trace of `ρ(W)` for the square torus.
pub fn exact_trace(w: &Word) -> ZSqrt2 {
    let m = exact_word_matrix(w);
    &m[0] + &m[3]
}

/// Length on the square torus in the requested precision.
pub fn square_torus_length(w: &Word, precision: Precision) -> Result<f64, GeomError> {
    match precision {
        Precision::Double => translation_length(w, &square_torus_representation()),
        Precision::High => {
            let t = exact_trace(w);
            let ln_t = t.ln_abs();
            if ln_t <= (2.0 + 1e-9f64).ln() {
                return Err(GeomError::NotHyperbolic(ln_t.exp()));
            }
            length_from_ln_trace(ln_t)
        }
    }
}

/// Geodesic length on the unit square torus.
pub fn flat_length(s: &Slope) -> f64 {
    let p = s.p().to_f64().expect("finite");
    let q = s.q().to_f64().expect("finite");
    p.hypot(q)
}

/// `α = a`, `β_n = u_n a + u_{n+1} b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LamePairLengths {
    pub n: u32,
    pub systole: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sandwich_lower: f64,
    pub sandwich_upper: f64,
    pub sandwich_holds: bool,
}

pub fn lame_lengths(n: u32, precision: Precision) -> Result<LamePairLengths, GeomError> {
    if n < 2 {
        return Err(GeomError::IndexTooSmall(n));
    }
    let s = square_torus_length(&Word::new([Letter::A]), precision)?;
    let beta_slope = Slope::new(fibonacci(n), fibonacci(n + 1)).expect("consecutive Fibonacci numbers are coprime");
    let beta = square_torus_length(&word_for_slope(&beta_slope), precision)?;
    let un = fibonacci(n).to_f64().expect("finite");
    let un1 = fibonacci(n + 1).to_f64().expect("finite");
    let (lower, upper) = (s * un1, s * (un + un1));
    let tol = 1e-6 * upper;
    Ok(LamePairLengths {
        n,
        systole: s,
        alpha: s,
        beta,
        sandwich_lower: lower,
        sandwich_upper: upper,
        sandwich_holds: lower - tol <= beta && beta <= upper + tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogLengthCheck {
    pub n: u32,
    /// The index shift `n − 1` used in the bracket.
    pub d: u32,
    /// Actual Farey distance of the pair.
    pub farey_distance: usize,
    pub log_length: f64,
    pub lower: f64,
    pub upper: f64,
    pub contains: bool,
    /// The same bracket with the actual distance in place of `n − 1`.
    pub contains_with_farey_distance: bool,
}

/// `log φ·d − log 4s ≤ log(ℓ(α) + ℓ(β_n)) ≤ log φ·d + log 4s` with `d = n − 1`.
pub fn log_length_vs_distance(n: u32, precision: Precision) -> Result<LogLengthCheck, GeomError> {
    let lengths = lame_lengths(n, precision)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let log_length = (lengths.alpha + lengths.beta).ln();
    let slack = (4.0 * lengths.systole).ln();
    let bracket = |d: f64| (phi.ln() * d - slack, phi.ln() * d + slack);
    let inside = |(lo, hi): (f64, f64)| {
        let tol = 1e-6 * log_length.abs().max(1.0);
        lo - tol <= log_length && log_length <= hi + tol
    };
    let (a, b) = crate::slopes::lame_pair(n).expect("n >= 2");
    let farey = crate::slopes::farey_distance(&a, &b);
    let (lower, upper) = bracket((n - 1) as f64);
    Ok(LogLengthCheck {
        n,
        d: n - 1,
        farey_distance: farey,
        log_length,
        lower,
        upper,
        contains: inside((lower, upper)),
        contains_with_farey_distance: inside(bracket(farey as f64)),
    })
}
