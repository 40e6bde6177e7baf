//! Volume-bound intervals for complements of canonical lifts.
//!
//! The multiplicative and additive constants `K1 ≥ 1`, `K0 ≥ 0` are never
//! known numerically, so every bound takes them as parameters. With the
//! defaults `K1 = 1`, `K0 = 0` the intervals show the shape of each formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::flat::{offset, torus_pair, FlatArrangement, FlatDiagram, FlatLine, Point, Q, OFFSETS};
use crate::diagram::{generate_pillowcase_pair, cyclic_cover_lift, CoverCut, CrossingDiagram, DiagramError, Family, SurfaceSignature};
use crate::geom::{lame_lengths, GeomError, Precision};
use crate::slopes::{farey_distance, fibonacci, hempel_upper_bound, Slope};
use crate::strat::{is_stratifiable, StratError, StratReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("constants must satisfy K1 >= 1 and K0 >= 0, got K1 = {k1}, K0 = {k0}")]
    InvalidParams { k1: f64, k0: f64 },
    #[error("need at least {needed} entries, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("n_max must be at least 3, got {0}")]
    RangeTooSmall(u32),
    #[error("index n must be at least 2, got {0}")]
    IndexTooSmall(u32),
    #[error("no cover family for signature {0}")]
    InadmissibleSignature(SurfaceSignature),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub k1: f64,
    pub k0: f64,
}

impl BoundParams {
    pub fn new(k1: f64, k0: f64) -> Result<Self, BoundsError> {
        if !(k1 >= 1.0 && k0 >= 0.0 && k1.is_finite() && k0.is_finite()) {
            return Err(BoundsError::InvalidParams { k1, k0 });
        }
        Ok(BoundParams { k1, k0 })
    }
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { k1: 1.0, k0: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFormula {
    Pair,
    Collection,
    StratifiedE,
    StratifiedF,
    PairwiseFilling,
    CoverFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub formula: BoundFormula,
}

impl BoundInterval {
    pub fn scaled(&self, factor: f64, formula: BoundFormula) -> Self {
        BoundInterval { lower: self.lower * factor, upper: self.upper * factor, formula }
    }
}

/// `[max(0, d/K1 − K0), K1·d + K0]`.
pub fn pair_bound(d: u64, params: BoundParams) -> BoundInterval {
    let d = d as f64;
    BoundInterval { lower: (d / params.k1 - params.k0).max(0.0), upper: params.k1 * d + params.k0, formula: BoundFormula::Pair }
}

/// Cyclic sum over consecutive curves: `[Σd/(2K1), K1·Σd + n·K0]`.
pub fn collection_bound(distances: &[u64], params: BoundParams) -> Result<BoundInterval, BoundsError> {
    if distances.len() < 2 {
        return Err(BoundsError::TooFew { needed: 2, got: distances.len() });
    }
    let sum: f64 = distances.iter().map(|&d| d as f64).sum();
    let n = distances.len() as f64;
    Ok(BoundInterval {
        lower: (sum / (2.0 * params.k1)).max(0.0),
        upper: params.k1 * sum + n * params.k0,
        formula: BoundFormula::Collection,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StratifiedTheorem {
    #[default]
    E,
    F,
}

/// Sum over strata: `[Σd/(n·K1), K1·Σd + n·K0]`, or with lower `Σd/(2K1)`
/// when consecutive pairs are known to fill.
pub fn stratified_bound(
    distances: &[u64],
    params: BoundParams,
    theorem: StratifiedTheorem,
    pairwise_filling: bool,
) -> Result<BoundInterval, BoundsError> {
    if distances.is_empty() {
        return Err(BoundsError::TooFew { needed: 1, got: 0 });
    }
    let sum: f64 = distances.iter().map(|&d| d as f64).sum();
    let n = distances.len() as f64;
    let (divisor, formula) = match (pairwise_filling, theorem) {
        (true, _) => (2.0, BoundFormula::PairwiseFilling),
        (false, StratifiedTheorem::E) => (n, BoundFormula::StratifiedE),
        (false, StratifiedTheorem::F) => (n, BoundFormula::StratifiedF),
    };
    Ok(BoundInterval { lower: (sum / (divisor * params.k1)).max(0.0), upper: params.k1 * sum + n * params.k0, formula })
}

/// Increasing slope order with `1/0` last; duplicates removed.
pub fn order_by_slope(slopes: &[Slope]) -> Result<Vec<Slope>, BoundsError> {
    let mut v = slopes.to_vec();
    v.sort_by(|a, b| a.cmp_value(b));
    v.dedup();
    if v.len() < 2 {
        return Err(BoundsError::TooFew { needed: 2, got: v.len() });
    }
    Ok(v)
}

/// Farey distances between cyclically consecutive slopes.
pub fn cyclic_distances(ordered: &[Slope]) -> Vec<u64> {
    (0..ordered.len()).map(|i| farey_distance(&ordered[i], &ordered[(i + 1) % ordered.len()]) as u64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremDRow {
    pub n: u32,
    pub distance: u64,
    pub intersection: String,
    pub length_sum: f64,
    pub upper: f64,
    pub ratio_log_intersection: f64,
    pub ratio_log_length: f64,
    /// Upper bound through `d ≤ 2 log₂ ι + 2`, divided by `log ι`.
    pub hempel_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremDTable {
    pub params: BoundParams,
    pub rows: Vec<TheoremDRow>,
    /// Every row's ratio is at most its Hempel ratio.
    pub bounded: bool,
    /// Largest `|r(n) − r(n−1)|` over both ratio columns in the last row.
    pub last_difference: f64,
    /// Same with `r(n−2)`: the distance alternates with the parity of `n`.
    pub last_same_parity_difference: f64,
    pub stabilized: bool,
}

pub const STABILIZATION_THRESHOLD: f64 = 0.05;

/// Ratios of the upper volume bound to `log ι` and `log ℓ` along the pairs
/// `(1/0, u_n/u_{n+1})`, for `3 ≤ n ≤ n_max`.
pub fn theorem_d_ratios(n_max: u32, params: BoundParams, precision: Precision) -> Result<TheoremDTable, BoundsError> {
    if n_max < 3 {
        return Err(BoundsError::RangeTooSmall(n_max));
    }
    let mut rows = Vec::new();
    for n in 3..=n_max {
        let beta = lame_beta(n);
        let d = farey_distance(&Slope::infinity(), &beta) as u64;
        let iota: BigInt = fibonacci(n + 1);
        let ln_iota = iota.to_f64().expect("finite").ln();
        let lengths = lame_lengths(n, precision)?;
        let length_sum = lengths.alpha + lengths.beta;
        let upper = pair_bound(d, params).upper;
        let hempel = hempel_upper_bound(&iota).expect("positive intersection");
        rows.push(TheoremDRow {
            n,
            distance: d,
            intersection: iota.to_string(),
            length_sum,
            upper,
            ratio_log_intersection: upper / ln_iota,
            ratio_log_length: upper / length_sum.ln(),
            hempel_ratio: (params.k1 * hempel + params.k0) / ln_iota,
        });
    }
    let bounded = rows.iter().all(|r| r.ratio_log_intersection <= r.hempel_ratio);
    let diff = |lag: usize| {
        let m = rows.len();
        if m <= lag {
            return f64::NAN;
        }
        let (a, b) = (&rows[m - 1], &rows[m - 1 - lag]);
        (a.ratio_log_intersection - b.ratio_log_intersection).abs().max((a.ratio_log_length - b.ratio_log_length).abs())
    };
    let (last_difference, last_same_parity_difference) = (diff(1), diff(2));
    Ok(TheoremDTable {
        params,
        bounded,
        last_difference,
        last_same_parity_difference,
        stabilized: last_same_parity_difference <= STABILIZATION_THRESHOLD,
        rows,
    })
}

fn lame_beta(n: u32) -> Slope {
    Slope::new(fibonacci(n), fibonacci(n + 1)).expect("consecutive Fibonacci numbers are coprime")
}

/// The three surface families carrying lifted pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CoverFamily {
    /// Degree-`k` cyclic cover of the punctured torus, cut along `b`.
    Torus { k: u32 },
    /// Pillowcase image of a torus family with `k − 4` extra punctures.
    Sphere { k: u32 },
    /// Degree-`g` slit cover of the `Σ_{1, 2+m}` family.
    Slit { g: u32, m: u32 },
}

impl CoverFamily {
    pub fn for_signature(sig: SurfaceSignature) -> Result<Self, BoundsError> {
        match (sig.g, sig.k) {
            (1, k) if k >= 1 => Ok(CoverFamily::Torus { k }),
            (0, k) if k >= 4 => Ok(CoverFamily::Sphere { k }),
            (g, k) if g >= 2 && k >= 2 && (k - 2) % g == 0 => Ok(CoverFamily::Slit { g, m: (k - 2) / g }),
            _ => Err(BoundsError::InadmissibleSignature(sig)),
        }
    }

    /// Volume factor relative to the once-punctured torus pair.
    pub fn degree(&self) -> u64 {
        match *self {
            CoverFamily::Torus { k } => k as u64,
            CoverFamily::Sphere { k } => k as u64 - 2,
            CoverFamily::Slit { g, m } => (2 + m as u64) * g as u64,
        }
    }

    /// Each `(modulus, shift)` asks for `gcd(u_{n+shift}, modulus) = 1`.
    pub fn gcd_conditions(&self) -> Vec<(u64, u32)> {
        match *self {
            CoverFamily::Torus { k } => vec![(k as u64, 0)],
            CoverFamily::Sphere { k } => vec![(2 * (k as u64 - 2), 0)],
            CoverFamily::Slit { g, m } => vec![(2 + m as u64, 0), (g as u64, 2)],
        }
    }

    pub fn admits_index(&self, n: u32) -> bool {
        self.gcd_conditions()
            .iter()
            .all(|&(modulus, shift)| fibonacci(n + shift).gcd(&BigInt::from(modulus)) == BigInt::from(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCReport {
    pub signature: SurfaceSignature,
    pub family: CoverFamily,
    pub n: u32,
    pub base_alpha: Slope,
    pub base_beta: Slope,
    pub base_distance: u64,
    pub admissible_indices: Vec<u32>,
    pub index_admissible: bool,
    pub degree: u64,
    /// Whether the carrier is an honest cover of the base with the
    /// full preimage of its puncture.
    pub exact_cover: bool,
    pub crossings: usize,
    pub alpha_components: usize,
    pub beta_components: usize,
    pub connected: bool,
    pub derived_signature: SurfaceSignature,
    pub strat: StratReport,
    pub base_interval: BoundInterval,
    pub interval: BoundInterval,
    #[serde(skip)]
    pub diagram: CrossingDiagram,
}

/// Generic point for the puncture of the base torus.
fn base_puncture(i: usize) -> Point {
    let (a, b) = OFFSETS[(i + 4) % OFFSETS.len()];
    let (c, d) = OFFSETS[(i + 5) % OFFSETS.len()];
    Point::new(Q::new(a, b), Q::new(c, d) + Q::new(1, 2))
}

fn with_retries<T>(mut f: impl FnMut(usize) -> Result<T, DiagramError>) -> Result<T, DiagramError> {
    let mut last = None;
    for i in 0..OFFSETS.len() {
        match f(i) {
            Ok(v) => return Ok(v),
            Err(e @ DiagramError::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `Σ_{1,k}`: the base pair with one puncture, lifted along the `b` loop.
pub fn torus_family(n: u32, k: u32) -> Result<CrossingDiagram, DiagramError> {
    let beta = lame_beta(n);
    with_retries(|i| {
        let p = base_puncture(i);
        let flat = torus_pair(&Slope::infinity(), &beta, &[p])?;
        let b_loop = flat.segment_cochain(Point::new(p.x + Q::new(1, 3), p.y), Point::from_ints(0, 1))?;
        cyclic_cover_lift(flat.diagram(), &CoverCut::Cochain(b_loop), k)
    })
}

/// The same family drawn directly on `R² / (kZ × Z)`.
pub fn torus_family_unrolled(n: u32, k: u32) -> Result<CrossingDiagram, DiagramError> {
    let beta = lame_beta(n);
    let dir = (beta.p().to_i128().expect("fits"), beta.q().to_i128().expect("fits"));
    with_retries(|i| {
        let p = base_puncture(i);
        let arr = FlatArrangement {
            lattice: [(k as i128, 0), (0, 1)],
            alpha: vec![FlatLine::new((1, 0), Point::new(offset(i), offset(i + 1)))],
            // the preimage of β has gcd(u_n, k) components
            beta: (0..dir.0.gcd(&(k as i128)))
                .map(|j| {
                    let through = Point::new(offset(i + 2) + Q::from_integer(j), offset(i + 3));
                    FlatLine::new(dir, through)
                })
                .collect(),
            punctures: (0..k as i128).map(|j| Point::new(p.x + Q::from_integer(j), p.y)).collect(),
        };
        let flat = FlatDiagram::build(&arr)?;
        Ok(flat.into_diagram())
    })
}

fn sphere_family(n: u32, k: u32) -> Result<CrossingDiagram, BoundsError> {
    let d = generate_pillowcase_pair(&Slope::infinity(), &lame_beta(n))?;
    let squares: Vec<usize> = d.faces().iter().filter(|f| f.m == 2 && f.punctures == 0).map(|f| f.id).collect();
    let extra = (k - 4) as usize;
    if squares.len() < extra {
        return Err(BoundsError::InadmissibleSignature(SurfaceSignature::new(0, k)));
    }
    Ok(d.add_punctures(&squares[..extra])?)
}

/// `Σ_{g, 2+gm}`: the `Σ_{1,2+m}` family on `R² / ((2+m)Z × Z)`, then the
/// degree-`g` cover branched at the two ends of a slit from a puncture to
/// its neighbour along `(1, −1)`.
pub fn slit_family(n: u32, g: u32, m: u32) -> Result<CrossingDiagram, DiagramError> {
    let beta = lame_beta(n);
    let dir = (beta.p().to_i128().expect("fits"), beta.q().to_i128().expect("fits"));
    let width = 2 + m as i128;
    with_retries(|i| {
        let p = base_puncture(i);
        let arr = FlatArrangement {
            lattice: [(width, 0), (0, 1)],
            alpha: vec![FlatLine::new((1, 0), Point::new(offset(i), offset(i + 1)))],
            beta: (0..dir.0.gcd(&width))
                .map(|j| FlatLine::new(dir, Point::new(offset(i + 2) + Q::from_integer(j), offset(i + 3))))
                .collect(),
            punctures: (0..width).map(|j| Point::new(p.x + Q::from_integer(j), p.y)).collect(),
        };
        let flat = FlatDiagram::build(&arr)?;
        let slit = flat.segment_cochain(p, Point::from_ints(1, -1))?;
        cyclic_cover_lift(flat.diagram(), &CoverCut::Cochain(slit), g)
    })
}

/// Builds the lifted pair for index `n` on the given surface, checks it and
/// scales the base interval by the covering degree.
pub fn theorem_c_family(sig: SurfaceSignature, n: u32, params: BoundParams) -> Result<TheoremCReport, BoundsError> {
    if n < 2 {
        return Err(BoundsError::IndexTooSmall(n));
    }
    let family = CoverFamily::for_signature(sig)?;
    let diagram = match family {
        CoverFamily::Torus { k } => torus_family(n, k)?,
        CoverFamily::Sphere { k } => sphere_family(n, k)?,
        CoverFamily::Slit { g, m } => slit_family(n, g, m)?,
    };
    let (base_alpha, base_beta) = (Slope::infinity(), lame_beta(n));
    let base_distance = farey_distance(&base_alpha, &base_beta) as u64;
    let base_interval = pair_bound(base_distance, params);
    let degree = family.degree();
    let alpha_components = diagram.components(Family::Alpha).len();
    let beta_components = diagram.components(Family::Beta).len();
    Ok(TheoremCReport {
        signature: sig,
        family,
        n,
        base_alpha,
        base_beta,
        base_distance,
        admissible_indices: (2..=n).filter(|&i| family.admits_index(i)).collect(),
        index_admissible: family.admits_index(n),
        degree,
        exact_cover: !matches!(family, CoverFamily::Sphere { k } if k > 4),
        crossings: diagram.crossing_count(),
        alpha_components,
        beta_components,
        connected: alpha_components == 1 && beta_components == 1,
        derived_signature: diagram.signature(),
        strat: is_stratifiable(&diagram)?,
        base_interval,
        interval: base_interval.scaled(degree as f64, BoundFormula::CoverFamily),
        diagram,
    })
}

/// Hempel–Lickorish check for one pair.
pub fn hempel_holds(s1: &Slope, s2: &Slope) -> Option<bool> {
    let iota = crate::slopes::intersection_number(s1, s2, crate::slopes::SurfaceKind::T11);
    let bound = hempel_upper_bound(&iota).ok()?;
    Some(farey_distance(s1, s2) as f64 <= bound)
}
