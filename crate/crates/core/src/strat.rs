//! Stratifiability of canonical lifts of filling pairs.
//!
//! A pair in minimal position is stratifiable exactly when every unpunctured
//! complementary face is a square. Face `i` carries the half-integer index
//! `(2 − m_i)/2`; these sum to `2 − 2g`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::flat::{torus_pair, FlatDiagram, Point, Q};
use crate::diagram::{
    cyclic_cover_lift, finger_move, generate_pillowcase_pair, CoverCut, CrossingDiagram, Dart, DiagramError, Face, Port,
    SurfaceSignature,
};
use crate::slopes::Slope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratError {
    #[error("diagram is not in minimal position: face {0} is an unpunctured bigon")]
    NotMinimalPosition(usize),
    #[error("diagram has {0} punctures; a closed carrier is required")]
    HasPunctures(u32),
    #[error("no unstratifiable pair exists on signature {0}")]
    UnsupportedSignature(SurfaceSignature),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// An exact multiple of one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_halves(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn from_integer(v: i64) -> Self {
        HalfInteger { twice: 2 * v }
    }

    pub fn halves(self) -> i64 {
        self.twice
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.twice, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, o: HalfInteger) -> HalfInteger {
        HalfInteger { twice: self.twice + o.twice }
    }
}

impl std::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = HalfInteger>>(iter: I) -> Self {
        iter.fold(HalfInteger::default(), |a, b| a + b)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_even() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.twice.is_even() {
            s.serialize_i64(self.twice / 2)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaceIndex {
    pub face: usize,
    pub index: HalfInteger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratReport {
    pub stratifiable: bool,
    pub offending_faces: Vec<usize>,
    pub index_sum: HalfInteger,
    pub genus_check: bool,
    pub signature: SurfaceSignature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratified {
    pub diagram: CrossingDiagram,
    pub k: u32,
}

fn index_of(face: &Face) -> HalfInteger {
    HalfInteger::from_halves(2 - face.m as i64)
}

pub fn face_indices(d: &CrossingDiagram) -> Vec<FaceIndex> {
    d.faces().iter().map(|f| FaceIndex { face: f.id, index: index_of(f) }).collect()
}

fn euler_target(d: &CrossingDiagram) -> HalfInteger {
    HalfInteger::from_integer(2 - 2 * d.genus() as i64)
}

/// Face indices sum to `2 − 2g`.
pub fn poincare_hopf_check(d: &CrossingDiagram) -> bool {
    face_indices(d).into_iter().map(|f| f.index).sum::<HalfInteger>() == euler_target(d)
}

/// On a closed carrier, `Σ (m − 2)/2 = 2g − 2`; compared in halves.
pub fn euler_identity_check(d: &CrossingDiagram) -> Result<bool, StratError> {
    if !d.is_closed() {
        return Err(StratError::HasPunctures(d.puncture_count()));
    }
    let excess: i64 = d.faces().iter().map(|f| f.m as i64 - 2).sum();
    Ok(excess == 2 * (2 * d.genus() as i64 - 2))
}

fn require_minimal(d: &CrossingDiagram) -> Result<(), StratError> {
    match d.faces().iter().find(|f| f.m == 1 && f.punctures == 0) {
        Some(f) => Err(StratError::NotMinimalPosition(f.id)),
        None => Ok(()),
    }
}

/// The rectangle criterion.
pub fn is_stratifiable(d: &CrossingDiagram) -> Result<StratReport, StratError> {
    require_minimal(d)?;
    let offending: Vec<usize> = d.faces().iter().filter(|f| f.punctures == 0 && f.m != 2).map(|f| f.id).collect();
    let index_sum = face_indices(d).into_iter().map(|f| f.index).sum::<HalfInteger>();
    Ok(StratReport {
        stratifiable: offending.is_empty(),
        offending_faces: offending,
        index_sum,
        genus_check: index_sum == euler_target(d),
        signature: d.signature(),
    })
}

/// Punctures every unpunctured non-square face once.
pub fn stratify_by_puncturing(d: &CrossingDiagram) -> Result<Stratified, StratError> {
    let report = is_stratifiable(d)?;
    let diagram = d.add_punctures(&report.offending_faces)?;
    Ok(Stratified { diagram, k: report.offending_faces.len() as u32 })
}

/// Whether the surface has a filling pair with an unstratifiable lift.
pub fn admits_witness(sig: SurfaceSignature) -> bool {
    match sig.g {
        0 => sig.k >= 5,
        1 => sig.k >= 2,
        _ => true,
    }
}

/// A minimal-position filling pair on the given surface whose lift is not
/// stratifiable.
pub fn unstratifiable_witness(sig: SurfaceSignature) -> Result<CrossingDiagram, StratError> {
    if !admits_witness(sig) {
        return Err(StratError::UnsupportedSignature(sig));
    }
    let d = match sig.g {
        0 => sphere_witness(sig.k)?,
        1 => torus_witness(sig.k)?,
        g => higher_genus_witness(g, sig.k)?,
    };
    debug_assert_eq!(d.signature(), sig);
    debug_assert!(is_stratifiable(&d).is_ok_and(|r| !r.stratifiable));
    Ok(d)
}

fn slope(p: i64, q: i64) -> Slope {
    Slope::new(num_bigint::BigInt::from(p), num_bigint::BigInt::from(q)).expect("coprime")
}

/// Unpunctured squares, least id first, excluding `skip`.
fn spare_squares(d: &CrossingDiagram, skip: &[usize]) -> Vec<usize> {
    d.faces().iter().filter(|f| f.m == 2 && f.punctures == 0 && !skip.contains(&f.id)).map(|f| f.id).collect()
}

fn puncture_squares(d: &CrossingDiagram, count: usize, skip: &[usize]) -> Result<Option<CrossingDiagram>, StratError> {
    let squares = spare_squares(d, skip);
    if squares.len() < count {
        return Ok(None);
    }
    Ok(Some(d.add_punctures(&squares[..count])?))
}

/// Finger move on a torus grid: two bigons, punctured, and two hexagons.
fn torus_witness(k: u32) -> Result<CrossingDiagram, StratError> {
    let mut q = k.max(3) as i64 + 1;
    loop {
        let base = torus_pair(&slope(1, 0), &slope(1, q), &[])?.into_diagram();
        let mv = finger_move(&base, 0)?;
        let d = mv.diagram.add_punctures(&[mv.corner_bigon, mv.tip_bigon])?;
        if let Some(d) = puncture_squares(&d, k as usize - 2, &[])? {
            return Ok(d);
        }
        q += 1;
    }
}

/// Finger move on the pillowcase that trades a punctured bigon for a
/// hexagon: the finger's two bigons carry punctures, the old bigon loses its
/// puncture and becomes a square.
fn sphere_witness(k: u32) -> Result<CrossingDiagram, StratError> {
    let mut q = k as i64;
    loop {
        let base = generate_pillowcase_pair(&slope(1, 0), &slope(1, q))?;
        for c in 0..base.crossing_count() {
            let faces = base.faces();
            let x = &faces[base.face_of(Dart::new(c, Port::AlphaIn))];
            let y = &faces[base.face_of(base.rotate(Dart::new(c, Port::AlphaIn)))];
            let z = &faces[base.face_of(base.rotate(Dart::new(c, Port::AlphaOut)))];
            let ok = z.m == 1 && z.punctures == 1 && x.m == 2 && y.m == 2 && x.punctures == 0 && y.punctures == 0 && x.id != y.id;
            if !ok {
                continue;
            }
            let mv = finger_move(&base, c)?;
            let mut punctures: BTreeMap<usize, u32> =
                mv.diagram.faces().iter().filter(|f| f.punctures > 0).map(|f| (f.id, f.punctures)).collect();
            punctures.remove(&mv.far_face);
            punctures.insert(mv.tip_bigon, 1);
            punctures.insert(mv.corner_bigon, 1);
            let d = mv.diagram.with_punctures(&punctures)?;
            if let Some(d) = puncture_squares(&d, k as usize - 5, &[])? {
                return Ok(d);
            }
        }
        q += 1;
    }
}

/// Degree-`g` cyclic cover of a torus grid branched over two points on either
/// side of one crossing. The two branch faces lift to `4g`-gons; `k` squares
/// are then punctured.
fn higher_genus_witness(g: u32, k: u32) -> Result<CrossingDiagram, StratError> {
    let mut q = 3.max(2 + k.div_ceil(g)) as i64;
    loop {
        if let Some(d) = branched_grid(g, q)? {
            if let Some(d) = puncture_squares(&d, k as usize, &[])? {
                return Ok(d);
            }
        }
        q += 1;
    }
}

fn branched_grid(g: u32, q: i64) -> Result<Option<CrossingDiagram>, StratError> {
    let eps = Q::new(1, 1000);
    let (beta, alpha) = (slope(1, q), slope(1, 0));
    let probe = torus_pair(&alpha, &beta, &[])?;
    let x = probe.point(0);
    let p1 = Point::new(x.x - eps, x.y - eps / 2);
    let p2 = Point::new(x.x + eps, x.y + eps / 3);
    let flat: FlatDiagram = torus_pair(&alpha, &beta, &[p1, p2])?;
    let w = Point::new(p2.x - p1.x, p2.y - p1.y);
    let z = flat.segment_cochain(p1, w)?;
    let base = flat.diagram();
    let branch: Vec<usize> = base.faces().iter().filter(|f| f.punctures > 0).map(|f| f.id).collect();
    if branch.len() != 2 || branch.iter().any(|&f| base.face_monodromy(f, &z).abs() != 1) {
        return Ok(None);
    }
    let up = cyclic_cover_lift(base, &CoverCut::Cochain(z), g)?;
    Ok(Some(up.with_punctures(&BTreeMap::new())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::generate_torus_pair;

    #[test]
    fn indices_of_small_faces() {
        let d = generate_torus_pair(&slope(0, 1), &slope(1, 0)).unwrap();
        assert_eq!(face_indices(&d), vec![FaceIndex { face: 0, index: HalfInteger::from_integer(0) }]);
        assert!(poincare_hopf_check(&d));
        assert_eq!(euler_identity_check(&d), Ok(true));
        let p = d.add_punctures(&[0]).unwrap();
        assert_eq!(euler_identity_check(&p), Err(StratError::HasPunctures(1)));
        assert!(is_stratifiable(&p).unwrap().stratifiable);
    }

    #[test]
    fn half_integer_display() {
        assert_eq!(HalfInteger::from_halves(-1).to_string(), "-1/2");
        assert_eq!(HalfInteger::from_halves(4).to_string(), "2");
        assert_eq!(serde_json::to_string(&HalfInteger::from_halves(-1)).unwrap(), "-0.5");
    }

    #[test]
    fn unpunctured_bigon_is_rejected() {
        let d = CrossingDiagram::new(
            vec![crate::diagram::Sign::Positive, crate::diagram::Sign::Negative],
            vec![vec![0, 1]],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert!(matches!(is_stratifiable(&d), Err(StratError::NotMinimalPosition(_))));
    }

    #[test]
    fn witnesses() {
        for (g, k) in [(0, 5), (0, 6), (0, 8), (1, 2), (1, 3), (1, 5), (2, 0), (2, 2), (3, 1)] {
            let sig = SurfaceSignature::new(g, k);
            let d = unstratifiable_witness(sig).unwrap();
            assert_eq!(d.signature(), sig, "{sig}");
            assert!(d.is_minimal_position());
            let report = is_stratifiable(&d).unwrap();
            assert!(!report.stratifiable, "{sig}");
            assert!(report.genus_check);
            let fixed = stratify_by_puncturing(&d).unwrap();
            assert!(fixed.k >= 1);
            assert!(is_stratifiable(&fixed.diagram).unwrap().stratifiable);
            assert_eq!(d.components(crate::diagram::Family::Alpha).len(), 1);
            assert_eq!(d.components(crate::diagram::Family::Beta).len(), 1);
        }
        for (g, k) in [(0, 4), (1, 1), (0, 3), (1, 0)] {
            let sig = SurfaceSignature::new(g, k);
            assert_eq!(unstratifiable_witness(sig), Err(StratError::UnsupportedSignature(sig)));
        }
    }

    #[test]
    fn genus_two_closed_witness_has_two_octagons() {
        let d = unstratifiable_witness(SurfaceSignature::new(2, 0)).unwrap();
        let big: Vec<_> = d.faces().iter().filter(|f| f.m != 2).map(|f| f.m).collect();
        assert_eq!(big, vec![4, 4]);
        assert_eq!(euler_identity_check(&d), Ok(true));
        let fixed = stratify_by_puncturing(&d).unwrap();
        assert_eq!(fixed.k, 2);
        assert!(fixed.k <= 4 * 2 - 4);
    }

    #[test]
    fn sphere_witness_has_one_hexagon() {
        let d = unstratifiable_witness(SurfaceSignature::new(0, 5)).unwrap();
        let report = is_stratifiable(&d).unwrap();
        assert_eq!(report.offending_faces.len(), 1);
        assert_eq!(d.faces()[report.offending_faces[0]].m, 3);
    }
}
