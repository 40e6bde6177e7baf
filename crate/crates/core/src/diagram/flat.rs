//! Exact straight-line diagrams on flat tori `R^2 / Λ`.
//!
//! Lines have primitive integer directions and rational base points, so every
//! crossing, edge hit and puncture location is computed in `Ratio<i128>`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{CrossingDiagram, Dart, DiagramError, Port, RawCrossing, RawDiagram, Sign};
use crate::slopes::Slope;

pub type Q = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i128, y: i128) -> Self {
        Point::new(Q::from_integer(x), Q::from_integer(y))
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    fn scale(self, s: Q) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

fn det(a: Point, b: Point) -> Q {
    a.x * b.y - a.y * b.x
}

fn idet(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn ipoint(v: (i128, i128)) -> Point {
    Point::from_ints(v.0, v.1)
}

fn degenerate(msg: impl Into<String>) -> DiagramError {
    DiagramError::Degenerate(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlatLine {
    pub direction: (i128, i128),
    pub through: Point,
}

impl FlatLine {
    pub fn new(direction: (i128, i128), through: Point) -> Self {
        FlatLine { direction, through }
    }
}

/// Lines and punctures on a flat torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatArrangement {
    pub lattice: [(i128, i128); 2],
    pub alpha: Vec<FlatLine>,
    pub beta: Vec<FlatLine>,
    pub punctures: Vec<Point>,
}

/// Per-line data in the quotient.
#[derive(Debug, Clone)]
struct LineData {
    line: FlatLine,
    /// Smallest `T > 0` with `T·d ∈ Λ`.
    period: i128,
    /// `det(d, Λ) = gap·Z`.
    gap: i128,
    /// Lattice vector with `det(d, λ) = gap`.
    step: (i128, i128),
    /// Integer vector with `det(d, w) = 1`.
    transverse: (i128, i128),
    /// Crossings sorted by parameter.
    crossings: Vec<(Q, usize)>,
}

impl LineData {
    fn new(line: FlatLine, lattice: [(i128, i128); 2]) -> Result<Self, DiagramError> {
        let d = line.direction;
        if d.0.gcd(&d.1) != 1 {
            return Err(degenerate(format!("direction {:?} is not primitive", d)));
        }
        let [l1, l2] = lattice;
        let vol = idet(l1, l2).abs();
        // T·d ∈ Λ iff T·det(d, l_i)/vol ∈ Z for both basis duals
        let (a, b) = (idet(d, l2), idet(l1, d));
        let period = vol / vol.gcd(&a).gcd(&b);
        let (p, q) = (idet(d, l1), idet(d, l2));
        let eg = p.extended_gcd(&q);
        let gap = eg.gcd;
        let step = (eg.x * l1.0 + eg.y * l2.0, eg.x * l1.1 + eg.y * l2.1);
        let eg = d.0.extended_gcd(&d.1);
        // d.0·x + d.1·y = 1, so w = (-y, x) has det(d, w) = 1
        let transverse = (-eg.y * eg.gcd, eg.x * eg.gcd);
        Ok(LineData { line, period, gap, step, transverse, crossings: Vec::new() })
    }

    fn dir(&self) -> Point {
        ipoint(self.line.direction)
    }

    /// Parameter in `[0, T)` of a point lying on the line, if it does.
    fn param(&self, x: Point) -> Option<Q> {
        let rel = x.sub(self.line.through);
        let k = det(self.dir(), rel);
        if !k.is_integer() || k.to_integer() % self.gap != 0 {
            return None;
        }
        let j = k.to_integer() / self.gap;
        let lam = ipoint(self.step).scale(Q::from_integer(j));
        let t = det(rel.sub(lam), ipoint(self.transverse));
        Some(modulo(t, self.period))
    }

    fn point(&self, t: Q) -> Point {
        self.line.through.add(self.dir().scale(t))
    }

    /// Index `i` such that parameter `t` lies on the edge from crossing `i`
    /// to crossing `i + 1` (cyclically).
    fn edge_at(&self, t: Q) -> Result<usize, DiagramError> {
        if self.crossings.iter().any(|(s, _)| *s == t) {
            return Err(degenerate("segment passes through a crossing"));
        }
        let after = self.crossings.partition_point(|(s, _)| *s < t);
        Ok((after + self.crossings.len() - 1) % self.crossings.len())
    }

    /// Parameters `σ ∈ (lo, hi)` where `from + σ·w` meets the line, ascending.
    fn hits(&self, from: Point, w: Point, lo: Q, hi: Q) -> Result<Vec<Q>, DiagramError> {
        let den = det(self.dir(), w);
        if den.is_zero() {
            return Ok(Vec::new());
        }
        let k = det(self.dir(), from.sub(self.line.through));
        let g = Q::from_integer(self.gap);
        // σ = (g·j − k)/den
        let (a, b) = ((lo * den + k) / g, (hi * den + k) / g);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let mut out = Vec::new();
        let mut j = a.floor().to_integer();
        while Q::from_integer(j) <= b {
            let s = (g * Q::from_integer(j) - k) / den;
            if s == lo || s == hi {
                return Err(degenerate("segment endpoint lies on a line"));
            }
            if s > lo && s < hi {
                out.push(s);
            }
            j += 1;
        }
        out.sort();
        Ok(out)
    }
}

fn modulo(t: Q, period: i128) -> Q {
    let p = Q::from_integer(period);
    let r = t - (t / p).floor() * p;
    debug_assert!(r >= Q::zero() && r < p);
    r
}

/// A diagram realized by straight lines, keeping the geometry for cochains.
#[derive(Debug, Clone)]
pub struct FlatDiagram {
    lattice: [(i128, i128); 2],
    lines: [Vec<LineData>; 2],
    points: Vec<Point>,
    diagram: CrossingDiagram,
}

impl FlatDiagram {
    pub fn build(arr: &FlatArrangement) -> Result<Self, DiagramError> {
        let lattice = arr.lattice;
        if idet(lattice[0], lattice[1]) == 0 {
            return Err(degenerate("lattice is singular"));
        }
        let mut alpha = arr.alpha.iter().map(|&l| LineData::new(l, lattice)).collect::<Result<Vec<_>, _>>()?;
        let mut beta = arr.beta.iter().map(|&l| LineData::new(l, lattice)).collect::<Result<Vec<_>, _>>()?;
        if alpha.is_empty() || beta.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut signs = Vec::new();
        let mut points = Vec::new();
        let mut on_beta: Vec<Vec<(Q, usize)>> = vec![Vec::new(); beta.len()];
        for a in alpha.iter_mut() {
            let mut found = Vec::new();
            for (bi, b) in beta.iter().enumerate() {
                let dd = idet(a.line.direction, b.line.direction);
                if dd == 0 {
                    if a.param(b.line.through).is_some() {
                        return Err(degenerate("an α line coincides with a β line"));
                    }
                    continue;
                }
                let r0 = b.line.through.sub(a.line.through);
                let c0 = det(r0, b.dir());
                let g = Q::from_integer(b.gap);
                // t·D = c0 + g·k, t ∈ [0, T)
                let lim = Q::from_integer(a.period * dd);
                let (lo, hi) = if dd > 0 { (-c0, lim - c0) } else { (lim - c0, -c0) };
                let mut k = (lo / g).floor().to_integer();
                while g * Q::from_integer(k) <= hi {
                    let t = (c0 + g * Q::from_integer(k)) / Q::from_integer(dd);
                    if t >= Q::zero() && t < Q::from_integer(a.period) {
                        found.push((t, bi, dd));
                    }
                    k += 1;
                }
            }
            found.sort_by(|x, y| x.0.cmp(&y.0));
            if found.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(degenerate("three lines meet at a point"));
            }
            for (t, bi, dd) in found {
                let id = signs.len();
                let x = a.point(t);
                let s = beta[bi].param(x).ok_or_else(|| degenerate("crossing not on its β line"))?;
                signs.push(if dd > 0 { Sign::Positive } else { Sign::Negative });
                points.push(x);
                a.crossings.push((t, id));
                on_beta[bi].push((s, id));
            }
        }
        for (b, mut list) in beta.iter_mut().zip(on_beta) {
            list.sort();
            if list.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(degenerate("three lines meet at a point"));
            }
            b.crossings = list;
        }
        let comps = |ls: &Vec<LineData>| ls.iter().map(|l| l.crossings.iter().map(|&(_, c)| c).collect()).collect();
        let diagram = CrossingDiagram::new(signs, comps(&alpha), comps(&beta))?;
        let mut flat = FlatDiagram { lattice, lines: [alpha, beta], points, diagram };
        let mut punctures = BTreeMap::new();
        for &p in &arr.punctures {
            *punctures.entry(flat.locate(p)?).or_insert(0) += 1;
        }
        flat.diagram = flat.diagram.with_punctures(&punctures)?;
        Ok(flat)
    }

    pub fn diagram(&self) -> &CrossingDiagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> CrossingDiagram {
        self.diagram
    }

    pub fn lattice(&self) -> [(i128, i128); 2] {
        self.lattice
    }

    /// Position of a crossing in the plane (one lift).
    pub fn point(&self, crossing: usize) -> Point {
        self.points[crossing]
    }

    /// Face containing a point off the lines.
    pub fn locate(&self, p: Point) -> Result<usize, DiagramError> {
        let e = self.lines[1][0].dir();
        let mut best: Option<(Q, usize)> = None;
        for (ai, a) in self.lines[0].iter().enumerate() {
            if a.param(p).is_some() {
                return Err(degenerate("puncture lies on an α line"));
            }
            let den = det(a.dir(), e);
            if den.is_zero() {
                continue;
            }
            let k = det(a.dir(), p.sub(a.line.through));
            let g = a.gap;
            let j = if den.is_positive() { (k / Q::from_integer(g)).floor().to_integer() + 1 } else { (k / Q::from_integer(g)).ceil().to_integer() - 1 };
            let s = (Q::from_integer(g * j) - k) / den;
            if best.map_or(true, |b| s < b.0) {
                best = Some((s, ai));
            }
        }
        let (s, ai) = best.ok_or_else(|| degenerate("no α line crosses the β direction"))?;
        for b in &self.lines[1] {
            if b.param(p).is_some() {
                return Err(degenerate("puncture lies on a β line"));
            }
        }
        let a = &self.lines[0][ai];
        let t = a.param(p.add(e.scale(s))).expect("ray hits the line");
        let i = a.edge_at(t)?;
        let n = a.crossings.len();
        let dart = if det(a.dir(), e).is_positive() {
            Dart::new(a.crossings[i].1, Port::AlphaOut)
        } else {
            Dart::new(a.crossings[(i + 1) % n].1, Port::AlphaIn)
        };
        let face = self.diagram.face_of(dart);
        // the β-ray may cross a β line first only if β lines are not parallel
        if self.lines[1].iter().any(|b| !det(b.dir(), e).is_zero()) {
            return Err(degenerate("β lines are not parallel"));
        }
        Ok(face)
    }

    /// Cochain of the straight segment `from → from + w`: each edge crossed
    /// from the right of the segment to its left gets `+1`, the other way `-1`.
    pub fn segment_cochain(&self, from: Point, w: Point) -> Result<Vec<i64>, DiagramError> {
        let mut z = vec![0i64; self.diagram.edge_count()];
        for (f, lines) in self.lines.iter().enumerate() {
            for l in lines {
                let orient = det(w, l.dir());
                if orient.is_zero() {
                    if l.param(from).is_some() {
                        return Err(degenerate("segment runs along a line"));
                    }
                    continue;
                }
                for s in l.hits(from, w, Q::zero(), Q::from_integer(1))? {
                    let t = l.param(from.add(w.scale(s))).expect("hit lies on line");
                    let i = l.edge_at(t)?;
                    let c = l.crossings[i].1;
                    z[2 * c + f] += if orient.is_positive() { 1 } else { -1 };
                }
            }
        }
        Ok(z)
    }

    /// The crossing at a point, if any.
    fn crossing_at(&self, x: Point) -> Option<usize> {
        let a = self.lines[0].iter().find(|a| a.param(x).is_some())?;
        let t = a.param(x)?;
        a.crossings.iter().find(|(s, _)| *s == t).map(|&(_, c)| c)
    }
}

fn slope_direction(s: &Slope) -> Result<(i128, i128), DiagramError> {
    let p = s.p().to_i128().ok_or_else(|| degenerate("slope too large"))?;
    let q = s.q().to_i128().ok_or_else(|| degenerate("slope too large"))?;
    Ok((p, q))
}

/// Base points tried in turn until the arrangement is generic.
pub(crate) const OFFSETS: [(i128, i128); 6] = [(17, 101), (29, 211), (7, 53), (41, 317), (3, 37), (59, 419)];

pub(crate) fn offset(i: usize) -> Q {
    let (a, b) = OFFSETS[i % OFFSETS.len()];
    Q::new(a, b)
}

/// One-line α and β of the given slopes on the square torus, flat and in
/// minimal position. With `punctures`, the listed points are removed.
pub fn torus_pair(s1: &Slope, s2: &Slope, punctures: &[Point]) -> Result<FlatDiagram, DiagramError> {
    if s1 == s2 {
        return Err(DiagramError::EqualSlopes);
    }
    let (d1, d2) = (slope_direction(s1)?, slope_direction(s2)?);
    let mut last = None;
    for i in 0..OFFSETS.len() {
        let arr = FlatArrangement {
            lattice: [(1, 0), (0, 1)],
            alpha: vec![FlatLine::new(d1, Point::new(offset(i), offset(i + 1)))],
            beta: vec![FlatLine::new(d2, Point::new(offset(i + 2), offset(i + 3)))],
            punctures: punctures.to_vec(),
        };
        match FlatDiagram::build(&arr) {
            Ok(f) => return Ok(f),
            Err(e @ DiagramError::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Closed torus diagram of two distinct slopes with `ι(s1, s2)` crossings.
pub fn generate_torus_pair(s1: &Slope, s2: &Slope) -> Result<CrossingDiagram, DiagramError> {
    torus_pair(s1, s2, &[]).map(FlatDiagram::into_diagram)
}

/// Image of a pair of slopes on the four-punctured sphere, the quotient of
/// the torus by `x ↦ -x`. Has `2ι` crossings and four punctured bigons.
pub fn generate_pillowcase_pair(s1: &Slope, s2: &Slope) -> Result<CrossingDiagram, DiagramError> {
    if s1 == s2 {
        return Err(DiagramError::EqualSlopes);
    }
    let (d1, d2) = (slope_direction(s1)?, slope_direction(s2)?);
    let mut last = None;
    for i in 0..OFFSETS.len() {
        let x0 = Point::new(offset(i), offset(i + 1));
        let y0 = Point::new(offset(i + 2), offset(i + 3));
        let arr = FlatArrangement {
            lattice: [(1, 0), (0, 1)],
            alpha: vec![FlatLine::new(d1, x0), FlatLine::new(d1, x0.neg())],
            beta: vec![FlatLine::new(d2, y0), FlatLine::new(d2, y0.neg())],
            punctures: Vec::new(),
        };
        match FlatDiagram::build(&arr).and_then(|f| quotient(&f)) {
            Ok(d) => return Ok(d),
            Err(e @ DiagramError::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn quotient(flat: &FlatDiagram) -> Result<CrossingDiagram, DiagramError> {
    let plus = &flat.lines[0][0];
    let rep: HashMap<usize, usize> = plus.crossings.iter().enumerate().map(|(i, &(_, c))| (c, i)).collect();
    let mut beta = Vec::new();
    for &(_, c) in &flat.lines[1][0].crossings {
        let passage = match rep.get(&c) {
            Some(&i) => (i, 1),
            None => {
                let partner = flat.crossing_at(flat.point(c).neg()).ok_or_else(|| degenerate("no partner crossing"))?;
                let &i = rep.get(&partner).ok_or_else(|| degenerate("partner is not on the base α line"))?;
                (i, -1)
            }
        };
        beta.push(passage);
    }
    let raw = RawDiagram {
        crossings: plus.crossings.iter().map(|&(_, c)| RawCrossing { sign: flat.diagram.sign(c).to_i64() }).collect(),
        alpha: vec![(0..plus.crossings.len()).map(|i| (i, 1)).collect()],
        beta: vec![beta],
        ..Default::default()
    };
    let d = CrossingDiagram::from_raw(&raw)?;
    let bigons: Vec<usize> = d.faces().iter().filter(|f| f.m == 1).map(|f| f.id).collect();
    if bigons.len() != 4 {
        return Err(degenerate(format!("quotient has {} bigons", bigons.len())));
    }
    d.add_punctures(&bigons)
}
