//! Cyclic covers of a diagram's surface, cut along a 1-cocycle.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{CrossingDiagram, Dart, DiagramError, Family, Port};

/// What the deck transformation counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverCut {
    /// Signed intersection with a component of the diagram.
    Component(Family, usize),
    /// An explicit integer on each edge.
    Cochain(Vec<i64>),
}

/// Intersection cochain of a component: edges leaving it to the left get
/// `+1`, edges arriving from its left get `-1`.
pub fn component_cochain(d: &CrossingDiagram, family: Family, index: usize) -> Result<Vec<i64>, DiagramError> {
    let mut z = vec![0; d.edge_count()];
    for &c in d.component(family, index)? {
        let left = d.rotate(Dart::new(c, Port::out_of(family)));
        let (e, s) = d.edge_of(left);
        z[e] += s;
    }
    Ok(z)
}

/// Lifts the diagram to the `degree`-fold cyclic cover defined by the cut.
///
/// Crossing `c` on sheet `i` becomes `c·degree + i`. A punctured face with
/// `p` punctures and monodromy `m` lifts to faces with
/// `1 + (p − 1)·degree/gcd(m, degree)` punctures each.
pub fn cyclic_cover_lift(d: &CrossingDiagram, cut: &CoverCut, degree: u32) -> Result<CrossingDiagram, DiagramError> {
    if degree == 0 {
        return Err(DiagramError::InvalidDegree(0));
    }
    let z = match cut {
        CoverCut::Component(f, i) => component_cochain(d, *f, *i)?,
        CoverCut::Cochain(z) => {
            if z.len() != d.edge_count() {
                return Err(DiagramError::CochainLength { expected: d.edge_count(), got: z.len() });
            }
            z.clone()
        }
    };
    if degree == 1 {
        return Ok(d.clone());
    }
    let k = degree as i64;
    let n = d.crossing_count();
    let kk = degree as usize;
    for f in d.faces() {
        if f.punctures == 0 && d.face_monodromy(f.id, &z).rem_euclid(k) != 0 {
            return Err(DiagramError::BranchedFace(f.id));
        }
    }
    let lift_family = |family: Family| {
        let mut out = Vec::new();
        for comp in d.components(family) {
            let mut seen = vec![false; kk];
            for start in 0..kk {
                if seen[start] {
                    continue;
                }
                let mut lifted = Vec::new();
                let mut sheet = start;
                loop {
                    seen[sheet] = true;
                    for &c in comp {
                        lifted.push(c * kk + sheet);
                        let e = d.edge_of(Dart::new(c, Port::out_of(family))).0;
                        sheet = (sheet as i64 + z[e]).rem_euclid(k) as usize;
                    }
                    if sheet == start {
                        break;
                    }
                }
                out.push(lifted);
            }
        }
        out
    };
    let signs = (0..n * kk).map(|c| d.sign(c / kk)).collect();
    let lifted = CrossingDiagram::new(signs, lift_family(Family::Alpha), lift_family(Family::Beta))?;
    let mut punctures = BTreeMap::new();
    for f in lifted.faces() {
        let dart = f.boundary[0];
        let base = d.face_of(Dart::new(dart.crossing / kk, dart.port));
        let p = d.faces()[base].punctures as i64;
        if p > 0 {
            let m = d.face_monodromy(base, &z).rem_euclid(k);
            let wrap = k / m.gcd(&k);
            punctures.insert(f.id, (1 + (p - 1) * wrap) as u32);
        }
    }
    lifted.with_punctures(&punctures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{generate_torus_pair, Sign, SurfaceSignature};
    use crate::slopes::Slope;

    fn s(t: &str) -> Slope {
        t.parse().unwrap()
    }

    #[test]
    fn degree_one_and_zero() {
        let d = generate_torus_pair(&s("1/0"), &s("1/3")).unwrap();
        assert_eq!(cyclic_cover_lift(&d, &CoverCut::Component(Family::Beta, 0), 1).unwrap(), d);
        assert_eq!(cyclic_cover_lift(&d, &CoverCut::Component(Family::Beta, 0), 0), Err(DiagramError::InvalidDegree(0)));
        assert!(matches!(
            cyclic_cover_lift(&d, &CoverCut::Cochain(vec![0; 3]), 2),
            Err(DiagramError::CochainLength { .. })
        ));
    }

    #[test]
    fn cutting_along_beta_splits_beta() {
        // α = a meets β = a + 2b twice, which is prime to the degree
        let d = generate_torus_pair(&s("1/0"), &s("1/2")).unwrap();
        let up = cyclic_cover_lift(&d, &CoverCut::Component(Family::Beta, 0), 3).unwrap();
        assert_eq!(up.crossing_count(), 6);
        assert_eq!(up.signature(), SurfaceSignature::new(1, 0));
        assert_eq!(up.components(Family::Alpha).len(), 1);
        assert_eq!(up.components(Family::Beta).len(), 3);
    }

    #[test]
    fn punctured_cover() {
        let d = generate_torus_pair(&s("1/0"), &s("0/1")).unwrap().add_punctures(&[0]).unwrap();
        let up = cyclic_cover_lift(&d, &CoverCut::Component(Family::Beta, 0), 4).unwrap();
        assert_eq!(up.signature(), SurfaceSignature::new(1, 4));
    }

    #[test]
    fn branched_cover_is_rejected() {
        let d = CrossingDiagram::new(vec![Sign::Positive, Sign::Negative], vec![vec![0, 1]], vec![vec![0, 1]]).unwrap();
        let mut z = vec![0; d.edge_count()];
        z[0] = 1;
        assert!(matches!(cyclic_cover_lift(&d, &CoverCut::Cochain(z), 2), Err(DiagramError::BranchedFace(_))));
    }
}
