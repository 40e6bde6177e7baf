//! Crossing diagrams: two transverse multicurve families on a surface,
//! recorded as a 4-valent map with a rotation system.
//!
//! Every crossing is met once by an α strand and once by a β strand. Its four
//! ports sit in counterclockwise order `(α-in, β-in, α-out, β-out)` for a
//! positive crossing and `(α-in, β-out, α-out, β-in)` for a negative one. The
//! carrier surface is not declared; it is recovered by tracing faces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod cover;
pub mod flat;
pub mod homology;
pub mod moves;

pub use cover::{cyclic_cover_lift, CoverCut};
pub use flat::{generate_pillowcase_pair, generate_torus_pair};
pub use homology::HomologyGroup;
pub use moves::{finger_move, FingerMove};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("diagram has no crossings")]
    Empty,
    #[error("crossing {0} does not exist")]
    UnknownCrossing(usize),
    #[error("{family} port of crossing {crossing} is used more than once")]
    PortReuse { crossing: usize, family: Family },
    #[error("{family} port of crossing {crossing} is never visited")]
    UnvisitedPort { crossing: usize, family: Family },
    #[error("{family} component {index} visits no crossing")]
    EmptyComponent { family: Family, index: usize },
    #[error("passage direction must be 1 or -1, got {0}")]
    BadPassage(i64),
    #[error("crossing sign must be 1 or -1, got {0}")]
    BadSign(i64),
    #[error("Euler characteristic {0} gives no integer genus")]
    NonIntegerGenus(i64),
    #[error("underlying graph has {0} connected components")]
    Disconnected(usize),
    #[error("face {0} does not exist")]
    UnknownFace(usize),
    #[error("{family} component {index} does not exist")]
    UnknownComponent { family: Family, index: usize },
    #[error("declared signature {declared} differs from derived {derived}")]
    SignatureMismatch { declared: SurfaceSignature, derived: SurfaceSignature },
    #[error("slopes are equal")]
    EqualSlopes,
    #[error("cover degree must be positive, got {0}")]
    InvalidDegree(u32),
    #[error("cochain has {got} entries, diagram has {expected} edges")]
    CochainLength { expected: usize, got: usize },
    #[error("unpunctured face {0} has nontrivial monodromy; the cover would branch")]
    BranchedFace(usize),
    #[error("degenerate flat configuration: {0}")]
    Degenerate(String),
    #[error("invalid diagram JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Alpha,
    Beta,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::Alpha => Family::Beta,
            Family::Beta => Family::Alpha,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Port {
    AlphaIn = 0,
    AlphaOut = 1,
    BetaIn = 2,
    BetaOut = 3,
}

impl Port {
    const ALL: [Port; 4] = [Port::AlphaIn, Port::AlphaOut, Port::BetaIn, Port::BetaOut];

    pub fn family(self) -> Family {
        match self {
            Port::AlphaIn | Port::AlphaOut => Family::Alpha,
            Port::BetaIn | Port::BetaOut => Family::Beta,
        }
    }

    pub fn is_out(self) -> bool {
        matches!(self, Port::AlphaOut | Port::BetaOut)
    }

    pub fn out_of(family: Family) -> Port {
        match family {
            Family::Alpha => Port::AlphaOut,
            Family::Beta => Port::BetaOut,
        }
    }

    pub fn in_of(family: Family) -> Port {
        match family {
            Family::Alpha => Port::AlphaIn,
            Family::Beta => Port::BetaIn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Sign, DiagramError> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(DiagramError::BadSign(v)),
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// Counterclockwise port order starting at α-in.
    pub fn rotation(self) -> [Port; 4] {
        match self {
            Sign::Positive => [Port::AlphaIn, Port::BetaIn, Port::AlphaOut, Port::BetaOut],
            Sign::Negative => [Port::AlphaIn, Port::BetaOut, Port::AlphaOut, Port::BetaIn],
        }
    }
}

/// A port of a crossing; also a corner of the face that leaves along it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub crossing: usize,
    pub port: Port,
}

impl Dart {
    pub fn new(crossing: usize, port: Port) -> Self {
        Dart { crossing, port }
    }

    fn id(self) -> usize {
        4 * self.crossing + self.port as usize
    }

    fn from_id(id: usize) -> Self {
        Dart { crossing: id / 4, port: Port::ALL[id % 4] }
    }
}

/// Closed surface genus and number of punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub g: u32,
    pub k: u32,
}

impl SurfaceSignature {
    pub fn new(g: u32, k: u32) -> Self {
        SurfaceSignature { g, k }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.g as i64 - self.k as i64
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.k)
    }
}

/// Complementary region. Its boundary alternates α- and β-arcs, so it has
/// `2m` sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    /// Darts in traversal order, starting from the least one.
    pub boundary: Vec<Dart>,
    pub m: usize,
    pub punctures: u32,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_square(&self) -> bool {
        self.m == 2
    }
}

/// One passage of a component through a crossing: `[crossing, direction]`,
/// direction `-1` meaning the strand enters at its out-port.
pub type RawPassage = (usize, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCrossing {
    pub sign: i64,
}

/// The on-disk JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawDiagram {
    pub crossings: Vec<RawCrossing>,
    pub alpha: Vec<Vec<RawPassage>>,
    pub beta: Vec<Vec<RawPassage>>,
    #[serde(default)]
    pub punctures: BTreeMap<usize, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SurfaceSignature>,
}

/// A validated diagram. Immutable; faces and genus are derived on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingDiagram {
    signs: Vec<Sign>,
    components: [Vec<Vec<usize>>; 2],
    /// `next[f][c]`: crossing after `c` along its family-`f` component.
    next: [Vec<usize>; 2],
    prev: [Vec<usize>; 2],
    /// `(component, position)` of each crossing in each family.
    place: [Vec<(usize, usize)>; 2],
    faces: Vec<Face>,
    face_of_dart: Vec<usize>,
    genus: u32,
}

impl CrossingDiagram {
    /// Builds a diagram whose passages are all traversed forward.
    pub fn new(signs: Vec<Sign>, alpha: Vec<Vec<usize>>, beta: Vec<Vec<usize>>) -> Result<Self, DiagramError> {
        let n = signs.len();
        let mut components = [alpha, beta];
        for (fam, comps) in components.iter().enumerate() {
            let family = if fam == 0 { Family::Alpha } else { Family::Beta };
            for (index, comp) in comps.iter().enumerate() {
                if comp.is_empty() {
                    return Err(DiagramError::EmptyComponent { family, index });
                }
            }
        }
        if n == 0 {
            return Err(DiagramError::Empty);
        }
        let mut next = [vec![usize::MAX; n], vec![usize::MAX; n]];
        let mut prev = [vec![usize::MAX; n], vec![usize::MAX; n]];
        let mut place = [vec![(usize::MAX, 0); n], vec![(usize::MAX, 0); n]];
        for fam in [Family::Alpha, Family::Beta] {
            let f = fam.index();
            for (ci, comp) in components[f].iter().enumerate() {
                for (pos, &c) in comp.iter().enumerate() {
                    if c >= n {
                        return Err(DiagramError::UnknownCrossing(c));
                    }
                    if place[f][c].0 != usize::MAX {
                        return Err(DiagramError::PortReuse { crossing: c, family: fam });
                    }
                    place[f][c] = (ci, pos);
                    let succ = comp[(pos + 1) % comp.len()];
                    next[f][c] = succ;
                    if succ < n {
                        prev[f][succ] = c;
                    }
                }
            }
            if let Some(c) = (0..n).find(|&c| place[f][c].0 == usize::MAX) {
                return Err(DiagramError::UnvisitedPort { crossing: c, family: fam });
            }
        }
        // keep the component lists owned by the struct
        let components = std::mem::take(&mut components);
        let mut d = CrossingDiagram {
            signs,
            components,
            next,
            prev,
            place,
            faces: Vec::new(),
            face_of_dart: Vec::new(),
            genus: 0,
        };
        d.check_connected()?;
        d.trace_faces()?;
        Ok(d)
    }

    /// Parses the raw form, normalizing reversed passages into forward ones
    /// by flipping the crossing sign.
    pub fn from_raw(raw: &RawDiagram) -> Result<Self, DiagramError> {
        let n = raw.crossings.len();
        let mut signs = raw.crossings.iter().map(|c| Sign::from_i64(c.sign)).collect::<Result<Vec<_>, _>>()?;
        let mut flips = vec![false; n];
        let mut lists = [Vec::new(), Vec::new()];
        for (f, comps) in [&raw.alpha, &raw.beta].into_iter().enumerate() {
            for comp in comps {
                let mut list = Vec::with_capacity(comp.len());
                for &(c, dir) in comp {
                    if c >= n {
                        return Err(DiagramError::UnknownCrossing(c));
                    }
                    match dir {
                        1 => {}
                        -1 => flips[c] = !flips[c],
                        other => return Err(DiagramError::BadPassage(other)),
                    }
                    list.push(c);
                }
                lists[f].push(list);
            }
        }
        for (s, flip) in signs.iter_mut().zip(flips) {
            if flip {
                *s = s.flip();
            }
        }
        let [alpha, beta] = lists;
        let d = CrossingDiagram::new(signs, alpha, beta)?;
        let d = d.with_punctures(&raw.punctures)?;
        if let Some(declared) = raw.signature {
            let derived = d.signature();
            if declared != derived {
                return Err(DiagramError::SignatureMismatch { declared, derived });
            }
        }
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let raw: RawDiagram = serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
        CrossingDiagram::from_raw(&raw)
    }

    /// Normalized raw form: all passages forward, punctures by face id.
    pub fn to_raw(&self) -> RawDiagram {
        let forward = |comps: &Vec<Vec<usize>>| comps.iter().map(|c| c.iter().map(|&x| (x, 1)).collect()).collect();
        RawDiagram {
            crossings: self.signs.iter().map(|s| RawCrossing { sign: s.to_i64() }).collect(),
            alpha: forward(&self.components[0]),
            beta: forward(&self.components[1]),
            punctures: self.faces.iter().filter(|f| f.punctures > 0).map(|f| (f.id, f.punctures)).collect(),
            signature: Some(self.signature()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("diagram serializes")
    }

    fn check_connected(&self) -> Result<(), DiagramError> {
        let n = self.signs.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in 0..2 {
            for c in 0..n {
                let (a, b) = (find(&mut parent, c), find(&mut parent, self.next[f][c]));
                parent[a] = b;
            }
        }
        let roots = (0..n).filter(|&c| find(&mut parent, c) == c).count();
        if roots != 1 {
            return Err(DiagramError::Disconnected(roots));
        }
        Ok(())
    }

    /// Counterclockwise successor of a dart around its crossing.
    pub fn rotate(&self, d: Dart) -> Dart {
        let order = self.signs[d.crossing].rotation();
        let i = order.iter().position(|&p| p == d.port).expect("port in rotation");
        Dart::new(d.crossing, order[(i + 1) % 4])
    }

    /// The dart at the other end of the edge through `d`.
    pub fn opposite(&self, d: Dart) -> Dart {
        let f = d.port.family();
        if d.port.is_out() {
            Dart::new(self.next[f.index()][d.crossing], Port::in_of(f))
        } else {
            Dart::new(self.prev[f.index()][d.crossing], Port::out_of(f))
        }
    }

    /// Faces are orbits of `rotate ∘ opposite`; each keeps itself on the right
    /// of the edges it runs along.
    fn trace_faces(&mut self) -> Result<(), DiagramError> {
        let darts = 4 * self.signs.len();
        let mut seen = vec![false; darts];
        let mut orbits = Vec::new();
        for start in 0..darts {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = Dart::from_id(start);
            while !seen[d.id()] {
                seen[d.id()] = true;
                orbit.push(d);
                d = self.rotate(self.opposite(d));
            }
            // the orbit starts at its least dart because `start` is scanned upward
            orbits.push(orbit);
        }
        let mut face_of_dart = vec![0; darts];
        let mut faces = Vec::with_capacity(orbits.len());
        for (id, boundary) in orbits.into_iter().enumerate() {
            for d in &boundary {
                face_of_dart[d.id()] = id;
            }
            debug_assert!(boundary.windows(2).all(|w| w[0].port.family() != w[1].port.family()));
            faces.push(Face { id, m: boundary.len() / 2, boundary, punctures: 0 });
        }
        let v = self.signs.len() as i64;
        let chi = v - 2 * v + faces.len() as i64;
        if chi % 2 != 0 || chi > 2 {
            return Err(DiagramError::NonIntegerGenus(chi));
        }
        self.genus = ((2 - chi) / 2) as u32;
        self.faces = faces;
        self.face_of_dart = face_of_dart;
        Ok(())
    }

    /// Replaces every face's puncture count; faces not listed get zero.
    pub fn with_punctures(&self, punctures: &BTreeMap<usize, u32>) -> Result<Self, DiagramError> {
        let mut d = self.clone();
        for f in &mut d.faces {
            f.punctures = 0;
        }
        for (&face, &count) in punctures {
            d.faces.get_mut(face).ok_or(DiagramError::UnknownFace(face))?.punctures = count;
        }
        Ok(d)
    }

    /// Adds one puncture per listed face id; repeated ids add repeatedly.
    pub fn add_punctures(&self, faces: &[usize]) -> Result<Self, DiagramError> {
        let mut d = self.clone();
        for &face in faces {
            d.faces.get_mut(face).ok_or(DiagramError::UnknownFace(face))?.punctures += 1;
        }
        Ok(d)
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.signs.len()
    }

    pub fn sign(&self, crossing: usize) -> Sign {
        self.signs[crossing]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn components(&self, family: Family) -> &[Vec<usize>] {
        &self.components[family.index()]
    }

    pub fn component(&self, family: Family, index: usize) -> Result<&[usize], DiagramError> {
        self.components[family.index()]
            .get(index)
            .map(Vec::as_slice)
            .ok_or(DiagramError::UnknownComponent { family, index })
    }

    /// Which component of `family` passes through `crossing`, and where.
    pub fn place(&self, family: Family, crossing: usize) -> (usize, usize) {
        self.place[family.index()][crossing]
    }

    pub fn next(&self, family: Family, crossing: usize) -> usize {
        self.next[family.index()][crossing]
    }

    pub fn prev(&self, family: Family, crossing: usize) -> usize {
        self.prev[family.index()][crossing]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of_dart[d.id()]
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn puncture_count(&self) -> u32 {
        self.faces.iter().map(|f| f.punctures).sum()
    }

    pub fn signature(&self) -> SurfaceSignature {
        SurfaceSignature::new(self.genus, self.puncture_count())
    }

    pub fn is_closed(&self) -> bool {
        self.puncture_count() == 0
    }

    /// No unpunctured bigon.
    pub fn is_minimal_position(&self) -> bool {
        self.faces.iter().all(|f| f.m != 1 || f.punctures > 0)
    }

    /// Edges are numbered by the crossing they leave: `2c` for α, `2c + 1`
    /// for β. Returns the edge through `d` and `+1` when `d` is its tail.
    pub fn edge_of(&self, d: Dart) -> (usize, i64) {
        let f = d.port.family().index();
        if d.port.is_out() {
            (2 * d.crossing + f, 1)
        } else {
            (2 * self.prev[f][d.crossing] + f, -1)
        }
    }

    /// Tail dart of an edge.
    pub fn edge_tail(&self, edge: usize) -> Dart {
        let family = if edge % 2 == 0 { Family::Alpha } else { Family::Beta };
        Dart::new(edge / 2, Port::out_of(family))
    }

    /// Sum of the cochain over the face boundary, with orientation.
    pub fn face_monodromy(&self, face: usize, cochain: &[i64]) -> i64 {
        self.faces[face]
            .boundary
            .iter()
            .map(|&d| {
                let (e, s) = self.edge_of(d);
                s * cochain[e]
            })
            .sum()
    }

    /// Number of crossings the component shares with the other family.
    pub fn component_crossings(&self, family: Family, index: usize) -> Result<usize, DiagramError> {
        Ok(self.component(family, index)?.len())
    }

    /// Algebraic intersection of two components of opposite families: the sum
    /// of signs where the α component crosses the β component.
    pub fn algebraic_intersection(&self, alpha: usize, beta: usize) -> Result<i64, DiagramError> {
        self.component(Family::Beta, beta)?;
        Ok(self
            .component(Family::Alpha, alpha)?
            .iter()
            .filter(|&&c| self.place(Family::Beta, c).0 == beta)
            .map(|&c| self.signs[c].to_i64())
            .sum())
    }

    /// Renumbers crossings: crossing `c` becomes `perm[c]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, DiagramError> {
        let n = self.signs.len();
        let mut signs = vec![Sign::Positive; n];
        for c in 0..n {
            signs[perm[c]] = self.signs[c];
        }
        let map = |comps: &Vec<Vec<usize>>| comps.iter().map(|comp| comp.iter().map(|&c| perm[c]).collect()).collect();
        let d = CrossingDiagram::new(signs, map(&self.components[0]), map(&self.components[1]))?;
        let mut punctures = BTreeMap::new();
        for f in self.faces.iter().filter(|f| f.punctures > 0) {
            let dart = f.boundary[0];
            punctures.insert(d.face_of(Dart::new(perm[dart.crossing], dart.port)), f.punctures);
        }
        d.with_punctures(&punctures)
    }
}

/// Validates a raw diagram and returns the derived signature.
pub fn validate(raw: &RawDiagram) -> Result<SurfaceSignature, DiagramError> {
    CrossingDiagram::from_raw(raw).map(|d| d.signature())
}

pub fn face_census(d: &CrossingDiagram) -> &[Face] {
    d.faces()
}

pub fn is_minimal_position(d: &CrossingDiagram) -> bool {
    d.is_minimal_position()
}

pub fn add_punctures(d: &CrossingDiagram, faces: &[usize]) -> Result<CrossingDiagram, DiagramError> {
    d.add_punctures(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> CrossingDiagram {
        CrossingDiagram::new(vec![Sign::Positive], vec![vec![0]], vec![vec![0]]).unwrap()
    }

    /// Two crossings where α and β run parallel: an unpunctured bigon.
    pub(crate) fn bigon_pair() -> CrossingDiagram {
        CrossingDiagram::new(vec![Sign::Positive, Sign::Negative], vec![vec![0, 1]], vec![vec![0, 1]]).unwrap()
    }

    #[test]
    fn single_crossing_is_a_square_torus() {
        let d = single();
        assert_eq!(d.faces().len(), 1);
        assert_eq!(d.faces()[0].m, 2);
        assert_eq!(d.signature(), SurfaceSignature::new(1, 0));
        let p = d.add_punctures(&[0]).unwrap();
        assert_eq!(p.signature(), SurfaceSignature::new(1, 1));
        let pp = p.add_punctures(&[0]).unwrap();
        assert_eq!(pp.faces()[0].punctures, 2);
    }

    #[test]
    fn port_reuse_and_unvisited() {
        let raw = RawDiagram {
            crossings: vec![RawCrossing { sign: 1 }, RawCrossing { sign: 1 }],
            alpha: vec![vec![(0, 1), (0, 1)]],
            beta: vec![vec![(0, 1), (1, 1)]],
            ..Default::default()
        };
        assert_eq!(validate(&raw), Err(DiagramError::PortReuse { crossing: 0, family: Family::Alpha }));
        let raw = RawDiagram { alpha: vec![vec![(0, 1)]], ..raw };
        assert_eq!(validate(&raw), Err(DiagramError::UnvisitedPort { crossing: 1, family: Family::Alpha }));
        let raw = RawDiagram { alpha: vec![vec![(0, 1), (1, 1)], vec![]], ..raw };
        assert_eq!(validate(&raw), Err(DiagramError::EmptyComponent { family: Family::Alpha, index: 1 }));
    }

    #[test]
    fn bad_fields() {
        let raw = RawDiagram {
            crossings: vec![RawCrossing { sign: 2 }],
            alpha: vec![vec![(0, 1)]],
            beta: vec![vec![(0, 1)]],
            ..Default::default()
        };
        assert_eq!(validate(&raw), Err(DiagramError::BadSign(2)));
        let raw = RawDiagram { crossings: vec![RawCrossing { sign: 1 }], alpha: vec![vec![(0, 0)]], ..raw };
        assert_eq!(validate(&raw), Err(DiagramError::BadPassage(0)));
        let raw = RawDiagram { alpha: vec![vec![(3, 1)]], ..raw };
        assert_eq!(validate(&raw), Err(DiagramError::UnknownCrossing(3)));
        assert_eq!(validate(&RawDiagram::default()), Err(DiagramError::Empty));
    }

    #[test]
    fn disconnected_is_rejected() {
        let d = CrossingDiagram::new(vec![Sign::Positive; 2], vec![vec![0], vec![1]], vec![vec![0], vec![1]]);
        assert_eq!(d, Err(DiagramError::Disconnected(2)));
    }

    #[test]
    fn bigon_detection() {
        let d = bigon_pair();
        assert_eq!(d.genus(), 0);
        let bigons: Vec<_> = d.faces().iter().filter(|f| f.m == 1).map(|f| f.id).collect();
        assert_eq!(bigons.len(), 4);
        assert!(!d.is_minimal_position());
        assert!(!d.add_punctures(&bigons[..3]).unwrap().is_minimal_position());
        let d = d.add_punctures(&bigons).unwrap();
        assert!(d.is_minimal_position());
    }

    #[test]
    fn reversed_passage_flips_sign() {
        let raw = RawDiagram {
            crossings: vec![RawCrossing { sign: 1 }],
            alpha: vec![vec![(0, -1)]],
            beta: vec![vec![(0, 1)]],
            ..Default::default()
        };
        let d = CrossingDiagram::from_raw(&raw).unwrap();
        assert_eq!(d.sign(0), Sign::Negative);
    }

    #[test]
    fn json_round_trip_and_declared_signature() {
        let d = single().add_punctures(&[0]).unwrap();
        let text = d.to_json();
        assert_eq!(CrossingDiagram::from_json(&text).unwrap(), d);
        let bad = text.replace("\"g\":1", "\"g\":2");
        assert!(matches!(CrossingDiagram::from_json(&bad), Err(DiagramError::SignatureMismatch { .. })));
        assert!(matches!(CrossingDiagram::from_json("{"), Err(DiagramError::Json(_))));
        let unknown = r#"{"crossings":[{"sign":1}],"alpha":[[[0,1]]],"beta":[[[0,1]]],"punctures":{"4":1}}"#;
        assert_eq!(CrossingDiagram::from_json(unknown), Err(DiagramError::UnknownFace(4)));
    }

    #[test]
    fn face_ids_follow_least_dart() {
        let d = bigon_pair();
        let firsts: Vec<_> = d.faces().iter().map(|f| f.boundary[0]).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        assert_eq!(firsts, sorted);
        for f in d.faces() {
            assert_eq!(Some(&f.boundary[0]), f.boundary.iter().min());
        }
    }
}
