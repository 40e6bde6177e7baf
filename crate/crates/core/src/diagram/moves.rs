//! Finger moves: push a short arc of α across β next to a crossing,
//! creating two new crossings and a pair of bigons.

use std::collections::BTreeMap;

use super::{CrossingDiagram, Dart, DiagramError, Family, Port, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerMove {
    pub diagram: CrossingDiagram,
    /// Bigon cut off the corner at the original crossing.
    pub corner_bigon: usize,
    /// Bigon at the tip of the finger.
    pub tip_bigon: usize,
    /// The rest of the face the finger entered.
    pub split_face: usize,
    /// Neighbour across β from the entered face, grown by two sides.
    pub near_face: usize,
    /// Neighbour across α from the entered face, grown by two sides.
    pub far_face: usize,
}

/// Finger move of α along β at `crossing`, entering the face on the α-in
/// corner. Punctures follow their faces; those of the entered face go to
/// `split_face`.
pub fn finger_move(d: &CrossingDiagram, crossing: usize) -> Result<FingerMove, DiagramError> {
    let n = d.crossing_count();
    if crossing >= n {
        return Err(DiagramError::UnknownCrossing(crossing));
    }
    let c = crossing;
    let s = d.sign(c);
    let x = d.face_of(Dart::new(c, Port::AlphaIn));
    let y = d.face_of(d.rotate(Dart::new(c, Port::AlphaIn)));
    let z = d.face_of(d.rotate(Dart::new(c, Port::AlphaOut)));
    let (x1, x2) = (n, n + 1);
    let insert = |comp: &[usize], before: bool, new: [usize; 2]| -> Vec<usize> {
        let mut out = Vec::with_capacity(comp.len() + 2);
        for &v in comp {
            if v == c && before {
                out.extend(new);
            }
            out.push(v);
            if v == c && !before {
                out.extend(new);
            }
        }
        out
    };
    let alpha = d
        .components(Family::Alpha)
        .iter()
        .map(|comp| insert(comp, true, [x1, x2]))
        .collect();
    let beta = d
        .components(Family::Beta)
        .iter()
        .map(|comp| match s {
            Sign::Positive => insert(comp, false, [x2, x1]),
            Sign::Negative => insert(comp, true, [x1, x2]),
        })
        .collect();
    let mut signs = d.signs().to_vec();
    signs.extend([s, s.flip()]);
    let moved = CrossingDiagram::new(signs, alpha, beta)?;
    let corner_bigon = moved.face_of(Dart::new(c, Port::AlphaIn));
    let tip_bigon = moved.face_of(Dart::new(x1, Port::AlphaOut));
    let split_face = moved.face_of(Dart::new(x1, Port::AlphaIn));
    let far_face = moved.face_of(moved.rotate(Dart::new(x1, Port::AlphaOut)));
    let near_face = moved.face_of(moved.rotate(Dart::new(x1, Port::AlphaIn)));
    let mut punctures = BTreeMap::new();
    for f in d.faces().iter().filter(|f| f.punctures > 0) {
        let target = if f.id == x {
            split_face
        } else if f.id == y {
            near_face
        } else if f.id == z {
            far_face
        } else {
            moved.face_of(f.boundary[0])
        };
        *punctures.entry(target).or_insert(0) += f.punctures;
    }
    Ok(FingerMove {
        diagram: moved.with_punctures(&punctures)?,
        corner_bigon,
        tip_bigon,
        split_face,
        near_face,
        far_face,
    })
}
