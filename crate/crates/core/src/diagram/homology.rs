//! Integer homology of the punctured surface carried by a diagram.
//!
//! Cellular chains: crossings are 0-cells, edges 1-cells, unpunctured faces
//! 2-cells. A face with `p` punctures contributes `p - 1` free 1-cycles and no
//! 2-cell.

use serde::Serialize;

use super::{CrossingDiagram, DiagramError, Family, Port};

/// `Z^rank ⊕ Z/t1 ⊕ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    fn add(&mut self, r: usize, c: usize, v: i128) {
        let x = &mut self.data[r * self.cols + c];
        *x = x.checked_add(v).expect("homology coefficient overflow");
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: i128) {
        for c in 0..self.cols {
            let v = self.get(src, c);
            if v != 0 {
                self.add(dst, c, -q.checked_mul(v).expect("homology coefficient overflow"));
            }
        }
    }

    fn col_sub(&mut self, dst: usize, src: usize, q: i128) {
        for r in 0..self.rows {
            let v = self.get(r, src);
            if v != 0 {
                self.add(r, dst, -q.checked_mul(v).expect("homology coefficient overflow"));
            }
        }
    }
}

/// Result of diagonalizing `U M V = D` with `U` applied to extra vectors too.
struct Diagonal {
    /// Nonzero diagonal entries, positive, in pivot order.
    pivots: Vec<i128>,
    /// `U z` for each tracked vector.
    tracked: Vec<Vec<i128>>,
}

fn diagonalize(mut m: IntMatrix, mut tracked: Vec<Vec<i128>>) -> Diagonal {
    let mut pivots = Vec::new();
    let limit = m.rows.min(m.cols);
    for t in 0..limit {
        loop {
            // least nonzero entry of the trailing block
            let mut best: Option<(usize, usize, i128)> = None;
            for r in t..m.rows {
                for c in t..m.cols {
                    let v = m.get(r, c).abs();
                    if v != 0 && best.map_or(true, |b| v < b.2) {
                        best = Some((r, c, v));
                        if v == 1 {
                            break;
                        }
                    }
                }
                if best.is_some_and(|b| b.2 == 1) {
                    break;
                }
            }
            let Some((r, c, _)) = best else {
                return Diagonal { pivots, tracked };
            };
            m.swap_rows(t, r);
            for z in &mut tracked {
                z.swap(t, r);
            }
            m.swap_cols(t, c);
            let p = m.get(t, t);
            let mut clean = true;
            for r in t + 1..m.rows {
                let v = m.get(r, t);
                if v != 0 {
                    let q = v.div_euclid(p);
                    m.row_sub(r, t, q);
                    for z in &mut tracked {
                        z[r] -= q * z[t];
                    }
                    clean &= m.get(r, t) == 0;
                }
            }
            for c in t + 1..m.cols {
                let v = m.get(t, c);
                if v != 0 {
                    m.col_sub(c, t, v.div_euclid(p));
                    clean &= m.get(t, c) == 0;
                }
            }
            if clean {
                if p < 0 {
                    for c in t..m.cols {
                        let v = m.get(t, c);
                        m.set(t, c, -v);
                    }
                    for z in &mut tracked {
                        z[t] = -z[t];
                    }
                }
                pivots.push(p.abs());
                break;
            }
        }
    }
    Diagonal { pivots, tracked }
}

/// Nonzero invariant factors `d1 | d2 | ...` of `m`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<u64> {
    let mut d = diagonalize(m.clone(), Vec::new()).pivots;
    // push to a divisibility chain
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = num_integer::gcd(d[i], d[j]);
            let l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.into_iter().map(|x| x as u64).collect()
}

/// Whether `z` lies in the integer column span of `m`.
pub fn in_column_span(m: &IntMatrix, z: &[i64]) -> bool {
    assert_eq!(m.rows, z.len());
    let diag = diagonalize(m.clone(), vec![z.iter().map(|&x| x as i128).collect()]);
    let uz = &diag.tracked[0];
    let r = diag.pivots.len();
    diag.pivots.iter().zip(uz).all(|(&p, &v)| v % p == 0) && uz[r..].iter().all(|&v| v == 0)
}

/// Edge-by-face boundary matrix over unpunctured faces.
pub fn face_boundary(d: &CrossingDiagram) -> IntMatrix {
    let closed: Vec<_> = d.faces().iter().filter(|f| f.punctures == 0).collect();
    let mut m = IntMatrix::zeros(d.edge_count(), closed.len());
    for (col, face) in closed.iter().enumerate() {
        for &dart in &face.boundary {
            let (e, s) = d.edge_of(dart);
            m.add(e, col, s as i128);
        }
    }
    m
}

/// The 1-chain of a component: `+1` on each of its edges.
pub fn component_chain(d: &CrossingDiagram, family: Family, index: usize) -> Result<Vec<i64>, DiagramError> {
    let mut z = vec![0; d.edge_count()];
    for &c in d.component(family, index)? {
        z[d.edge_of(super::Dart::new(c, Port::out_of(family))).0] += 1;
    }
    Ok(z)
}

impl CrossingDiagram {
    /// Whether the component bounds in the punctured surface.
    pub fn is_null_homologous(&self, family: Family, index: usize) -> Result<bool, DiagramError> {
        let z = component_chain(self, family, index)?;
        Ok(in_column_span(&face_boundary(self), &z))
    }

    pub fn homology(&self) -> HomologyGroup {
        let factors = invariant_factors(&face_boundary(self));
        // the 1-skeleton is connected, so the vertex map has rank V - 1
        let cycles = self.edge_count() - (self.crossing_count() - 1);
        let extra: usize = self.faces().iter().map(|f| (f.punctures as usize).saturating_sub(1)).sum();
        HomologyGroup {
            rank: cycles - factors.len() + extra,
            torsion: factors.into_iter().filter(|&t| t > 1).collect(),
        }
    }
}
