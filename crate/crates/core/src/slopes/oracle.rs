//! Breadth-first search over the Farey graph restricted to slopes of bounded
//! height. Slow and independent of the continued-fraction ladder; used to
//! cross-check it.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use super::{farey_distance, hempel_upper_bound, Slope};

/// Largest height bound the dense search accepts (about 67M cells).
pub const MAX_ORACLE_HEIGHT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("height bound {0} exceeds the oracle limit {MAX_ORACLE_HEIGHT}")]
    TooLarge(BigInt),
    #[error("slope {0} is above the height bound {1}")]
    OutOfBounds(Slope, i64),
    #[error("{0} and {1} are not connected below height {2}")]
    Disconnected(Slope, Slope, i64),
}

/// Farey graph on all slopes of height at most `bound`.
#[derive(Debug, Clone, Copy)]
pub struct BoundedFarey {
    bound: i64,
}

impl BoundedFarey {
    pub fn new(bound: i64) -> Result<Self, OracleError> {
        if bound > MAX_ORACLE_HEIGHT {
            return Err(OracleError::TooLarge(bound.into()));
        }
        Ok(BoundedFarey { bound: bound.max(1) })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    fn width(&self) -> i64 {
        2 * self.bound + 1
    }

    fn index(&self, p: i64, q: i64) -> usize {
        (q * self.width() + p + self.bound) as usize
    }

    fn coords(&self, s: &Slope) -> Result<(i64, i64), OracleError> {
        let out = || OracleError::OutOfBounds(s.clone(), self.bound);
        let p = s.p().to_i64().ok_or_else(out)?;
        let q = s.q().to_i64().ok_or_else(out)?;
        if p.abs() > self.bound || q > self.bound {
            return Err(out());
        }
        Ok((p, q))
    }

    /// All reduced slopes in the graph, `1/0` first, then by `q` and `p`.
    pub fn slopes(&self) -> Vec<Slope> {
        let mut out = vec![Slope::infinity()];
        for q in 1..=self.bound {
            for p in -self.bound..=self.bound {
                if p.gcd(&q) == 1 {
                    out.push(Slope::new(p, q).expect("coprime"));
                }
            }
        }
        out
    }

    fn for_each_neighbor(&self, p: i64, q: i64, mut f: impl FnMut(i64, i64)) {
        // Every neighbor is (r0 + t p, s0 + t q) up to sign, where p s0 - q r0 = 1.
        let e = p.extended_gcd(&q);
        let (x, y) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
        let (r0, s0) = (-y, x);
        let h = self.bound;
        let (mut lo, mut hi) = (i64::MIN, i64::MAX);
        for (base, step) in [(r0, p), (s0, q)] {
            if step == 0 {
                if base.abs() > h {
                    return;
                }
                continue;
            }
            let (a, b) = ((-h - base), (h - base));
            let (a, b) = if step > 0 { (a, b) } else { (-b, -a) };
            let step = step.abs();
            lo = lo.max(Integer::div_ceil(&a, &step));
            hi = hi.min(Integer::div_floor(&b, &step));
        }
        for t in lo..=hi {
            let (mut r, mut s) = (r0 + t * p, s0 + t * q);
            if s < 0 || (s == 0 && r < 0) {
                r = -r;
                s = -s;
            }
            f(r, s);
        }
    }

    /// Distances from `source` to every slope in the graph, indexed like
    /// [`Self::distance_to`]. Unreached cells hold `u32::MAX`.
    pub fn distances_from(&self, source: &Slope) -> Result<BoundedDistances, OracleError> {
        let (p0, q0) = self.coords(source)?;
        let cells = (self.width() * (self.bound + 1)) as usize;
        let mut dist = vec![u32::MAX; cells];
        dist[self.index(p0, q0)] = 0;
        let mut queue = VecDeque::from([(p0, q0)]);
        while let Some((p, q)) = queue.pop_front() {
            let next = dist[self.index(p, q)] + 1;
            self.for_each_neighbor(p, q, |r, s| {
                let i = self.index(r, s);
                if dist[i] == u32::MAX {
                    dist[i] = next;
                    queue.push_back((r, s));
                }
            });
        }
        Ok(BoundedDistances { graph: *self, source: source.clone(), dist })
    }

    pub fn distance(&self, s1: &Slope, s2: &Slope) -> Result<usize, OracleError> {
        self.distances_from(s1)?.distance_to(s2)
    }
}

pub struct BoundedDistances {
    graph: BoundedFarey,
    source: Slope,
    dist: Vec<u32>,
}

impl BoundedDistances {
    pub fn distance_to(&self, target: &Slope) -> Result<usize, OracleError> {
        let (p, q) = self.graph.coords(target)?;
        match self.dist[self.graph.index(p, q)] {
            u32::MAX => Err(OracleError::Disconnected(self.source.clone(), target.clone(), self.graph.bound)),
            d => Ok(d as usize),
        }
    }
}

/// Outcome of replaying one distance query against the BFS oracle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub s1: Slope,
    pub s2: Slope,
    pub distance: usize,
    pub oracle_distance: usize,
    pub height_bound: i64,
    pub agree: bool,
}

/// Recomputes `farey_distance(s1, s2)` by BFS over slopes of height at most
/// twice the larger input height.
pub fn check(s1: &Slope, s2: &Slope) -> Result<OracleCheck, OracleError> {
    let h: BigInt = s1.height().max(s2.height()) * 2;
    let bound = h.to_i64().filter(|&b| b <= MAX_ORACLE_HEIGHT).ok_or(OracleError::TooLarge(h))?;
    let oracle_distance = BoundedFarey::new(bound)?.distance(s1, s2)?;
    let distance = farey_distance(s1, s2);
    Ok(OracleCheck {
        s1: s1.clone(),
        s2: s2.clone(),
        distance,
        oracle_distance,
        height_bound: bound,
        agree: distance == oracle_distance,
    })
}

/// Every unordered pair of slopes with `|p|, |q| <= height`, replayed
/// against BFS with a doubled bound and checked against `d <= 2 log2 i + 2`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub height: i64,
    pub oracle_bound: i64,
    pub slopes: usize,
    pub pairs: usize,
    pub agree: bool,
    pub max_distance: usize,
    pub hempel_holds: bool,
    /// First few disagreements, if any.
    pub mismatches: Vec<OracleCheck>,
    pub hempel_violations: Vec<(Slope, Slope)>,
}

const REPORTED: usize = 20;

pub fn sweep(height: i64) -> Result<SweepReport, OracleError> {
    let oracle = BoundedFarey::new(2 * height)?;
    let slopes = BoundedFarey::new(height)?.slopes();
    let mut report = SweepReport {
        height,
        oracle_bound: oracle.bound(),
        slopes: slopes.len(),
        pairs: 0,
        agree: true,
        max_distance: 0,
        hempel_holds: true,
        mismatches: Vec::new(),
        hempel_violations: Vec::new(),
    };
    for (i, s1) in slopes.iter().enumerate() {
        let bfs = oracle.distances_from(s1)?;
        for s2 in &slopes[i + 1..] {
            report.pairs += 1;
            let d = farey_distance(s1, s2);
            let o = bfs.distance_to(s2)?;
            report.max_distance = report.max_distance.max(d);
            if d != o {
                report.agree = false;
                if report.mismatches.len() < REPORTED {
                    report.mismatches.push(OracleCheck {
                        s1: s1.clone(),
                        s2: s2.clone(),
                        distance: d,
                        oracle_distance: o,
                        height_bound: oracle.bound(),
                        agree: false,
                    });
                }
            }
            let iota = s1.det(s2).abs();
            let ok = hempel_upper_bound(&iota).map_or(true, |b| d as f64 <= b);
            if !ok {
                report.hempel_holds = false;
                if report.hempel_violations.len() < REPORTED {
                    report.hempel_violations.push((s1.clone(), s2.clone()));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_of_infinity_are_integers() {
        let g = BoundedFarey::new(3).unwrap();
        let mut seen = Vec::new();
        g.for_each_neighbor(1, 0, |r, s| seen.push((r, s)));
        seen.sort();
        assert_eq!(seen, vec![(-3, 1), (-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn neighbors_are_adjacent_and_bounded() {
        let g = BoundedFarey::new(9).unwrap();
        for s in g.slopes() {
            let (p, q) = g.coords(&s).unwrap();
            let mut count = 0;
            g.for_each_neighbor(p, q, |r, t| {
                assert_eq!((p * t - q * r).abs(), 1);
                assert!(r.abs() <= 9 && (0..=9).contains(&t));
                count += 1;
            });
            assert!(count >= 2);
        }
    }

    #[test]
    fn small_distances() {
        let g = BoundedFarey::new(20).unwrap();
        let s = |x: &str| x.parse::<Slope>().unwrap();
        assert_eq!(g.distance(&s("0/1"), &s("8/13")).unwrap(), 3);
        assert_eq!(g.distance(&s("1/0"), &s("1/0")).unwrap(), 0);
        assert!(matches!(g.distance(&s("0/1"), &s("1/21")), Err(OracleError::OutOfBounds(..))));
        assert!(BoundedFarey::new(MAX_ORACLE_HEIGHT + 1).is_err());
    }

    #[test]
    fn small_sweep() {
        let r = sweep(8).unwrap();
        assert!(r.agree && r.hempel_holds);
        assert_eq!(r.pairs, r.slopes * (r.slopes - 1) / 2);
    }

    #[test]
    fn check_agrees_on_355_113() {
        let c = check(&Slope::infinity(), &"355/113".parse().unwrap()).unwrap();
        assert!(c.agree);
        assert_eq!(c.height_bound, 710);
        assert!(check(&Slope::zero(), &"5000/1".parse().unwrap()).is_err());
    }
}
