//! Integer chain complex of a spine and first homology.
//!
//! The CW structure (vertices, edges, regions) gives boundary matrices
//! `d2: regions -> edges` (signed passage counts) and `d1: edges ->
//! vertices` (graph incidence). The manifold collapses onto the spine, so
//! the invariant factors of H1 are a move-invariance witness.

use crate::region::{trace_regions, Region};
use crate::spine::{Spine, SpineError};

/// Dense integer matrix, row-major. `rows x cols`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

/// Boundary matrices `(d2, d1)` of the spine's CW structure.
///
/// `d2` has one column per region and one row per edge; the entry is the
/// signed count of passages of that region along that edge. `d1` has one
/// column per edge and one row per vertex (head minus tail).
pub fn chain_complex(spine: &Spine) -> Result<(IntMat, IntMat), SpineError> {
    let regions = trace_regions(spine)?;
    Ok(chain_complex_with_regions(spine, &regions))
}

pub fn chain_complex_with_regions(spine: &Spine, regions: &[Region]) -> (IntMat, IntMat) {
    let ne = spine.edges.len();
    let nv = spine.vertex_count;
    let nr = regions.len();
    let mut d2 = IntMat::zeros(ne, nr);
    for r in regions {
        for p in &r.boundary_word {
            let v = d2.get(p.edge, r.id) + p.dir as i64;
            d2.set(p.edge, r.id, v);
        }
    }
    let mut d1 = IntMat::zeros(nv, ne);
    for (ei, e) in spine.edges.iter().enumerate() {
        // head (second germ) minus tail (first germ)
        let v = d1.get(e.b.vertex, ei) + 1;
        d1.set(e.b.vertex, ei, v);
        let v = d1.get(e.a.vertex, ei) - 1;
        d1.set(e.a.vertex, ei, v);
    }
    (d2, d1)
}

/// Canonical representative of `z` modulo the lattice spanned by the columns
/// of `m`: reduce `z` against the column Hermite form so that two vectors
/// get equal representatives iff they differ by a column combination.
pub fn reduce_mod_column_lattice(m: &IntMat, z: &[i64]) -> Vec<i64> {
    assert_eq!(m.rows, z.len());
    // column-style Hermite elimination: echelon basis with positive pivots
    let mut cols: Vec<Vec<i64>> = (0..m.cols)
        .map(|j| (0..m.rows).map(|i| m.get(i, j)).collect())
        .collect();
    let mut pivots: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut next = 0usize;
    for row in 0..m.rows {
        loop {
            let mut best: Option<usize> = None;
            for j in next..cols.len() {
                let v = cols[j][row].abs();
                if v != 0 && best.map_or(true, |b| v < cols[b][row].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else {
                break;
            };
            cols.swap(next, b);
            let mut lone = true;
            for j in (next + 1)..cols.len() {
                let q = cols[j][row].div_euclid(cols[next][row]);
                if q != 0 {
                    for i in 0..m.rows {
                        cols[j][i] -= q * cols[next][i];
                    }
                }
                if cols[j][row] != 0 {
                    lone = false;
                }
            }
            if lone {
                if cols[next][row] < 0 {
                    for v in cols[next].iter_mut() {
                        *v = -*v;
                    }
                }
                pivots.push((row, cols[next].clone()));
                next += 1;
                break;
            }
        }
    }
    let mut out = z.to_vec();
    for (row, col) in &pivots {
        let q = out[*row].div_euclid(col[*row]);
        if q != 0 {
            for i in 0..out.len() {
                out[i] -= q * col[i];
            }
        }
    }
    out
}

/// Diagonal of the Smith normal form of `m`, as non-negative integers with
/// the divisibility chain `d1 | d2 | ...`, zeros trailing.
pub fn smith_diagonal(m: &IntMat) -> Vec<i64> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    let mut top = 0usize;
    while top < n {
        // find a pivot: smallest nonzero absolute value in the working block
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..a.rows {
            for j in top..a.cols {
                let v = a.get(i, j).abs();
                if v != 0 && pivot.map_or(true, |(pi, pj)| v < a.get(pi, pj).abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        swap_rows(&mut a, top, pi);
        swap_cols(&mut a, top, pj);
        // reduce row and column until clean
        loop {
            let p = a.get(top, top);
            let mut dirty = false;
            for i in (top + 1)..a.rows {
                let q = div_round(a.get(i, top), p);
                if q != 0 {
                    row_axpy(&mut a, i, top, -q);
                }
                if a.get(i, top) != 0 {
                    dirty = true;
                    swap_rows(&mut a, top, i);
                }
            }
            for j in (top + 1)..a.cols {
                let q = div_round(a.get(top, j), a.get(top, top));
                if q != 0 {
                    col_axpy(&mut a, j, top, -q);
                }
                if a.get(top, j) != 0 {
                    dirty = true;
                    swap_cols(&mut a, top, j);
                }
            }
            if !dirty {
                break;
            }
        }
        // enforce divisibility: pivot must divide every remaining entry
        let p = a.get(top, top);
        let mut offender = None;
        'scan: for i in (top + 1)..a.rows {
            for j in (top + 1)..a.cols {
                if a.get(i, j) % p != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            // add the offending row to the pivot row and restart this pivot
            row_axpy(&mut a, top, i, 1);
            continue;
        }
        diag.push(a.get(top, top).abs());
        top += 1;
    }
    while diag.len() < n {
        diag.push(0);
    }
    diag
}

fn div_round(a: i64, b: i64) -> i64 {
    // round-toward-zero division is enough for the reduction loop
    a / b
}

fn swap_rows(a: &mut IntMat, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..a.cols {
        let (x, y) = (a.get(r1, j), a.get(r2, j));
        a.set(r1, j, y);
        a.set(r2, j, x);
    }
}

fn swap_cols(a: &mut IntMat, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..a.rows {
        let (x, y) = (a.get(i, c1), a.get(i, c2));
        a.set(i, c1, y);
        a.set(i, c2, x);
    }
}

/// row[dst] += k * row[src]
fn row_axpy(a: &mut IntMat, dst: usize, src: usize, k: i64) {
    for j in 0..a.cols {
        let v = a.get(dst, j) + k * a.get(src, j);
        a.set(dst, j, v);
    }
}

/// col[dst] += k * col[src]
fn col_axpy(a: &mut IntMat, dst: usize, src: usize, k: i64) {
    for i in 0..a.rows {
        let v = a.get(i, dst) + k * a.get(i, src);
        a.set(i, dst, v);
    }
}

fn rank_of(diag: &[i64]) -> usize {
    diag.iter().filter(|&&d| d != 0).count()
}

/// Invariant factors of H1 of the spine: the nontrivial torsion factors
/// (each > 1, divisibility chain) followed by one `0` per free rank.
///
/// H1 = ker d1 / im d2 sits inside coker d2 with free quotient, so its
/// torsion equals the torsion of coker d2, and its rank is
/// `#edges - rank d1 - rank d2`.
pub fn homology_h1(spine: &Spine) -> Result<Vec<i64>, SpineError> {
    let (d2, d1) = chain_complex(spine)?;
    debug_assert!(d1.mul(&d2).is_zero());
    let s2 = smith_diagonal(&d2);
    let s1 = smith_diagonal(&d1);
    let rank = spine.edges.len() - rank_of(&s1) - rank_of(&s2);
    let mut out: Vec<i64> = s2.into_iter().filter(|&d| d > 1).collect();
    out.extend(std::iter::repeat(0).take(rank));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_spines;

    #[test]
    fn boundary_of_boundary_is_zero() {
        for spine in enumerate_spines(1) {
            let (d2, d1) = chain_complex(&spine).unwrap();
            assert!(d1.mul(&d2).is_zero());
        }
    }

    #[test]
    fn smith_small_example() {
        // diag(2,6) has factors 2, 6 already in chain form
        let mut m = IntMat::zeros(2, 2);
        m.set(0, 0, 2);
        m.set(1, 1, 6);
        assert_eq!(smith_diagonal(&m), vec![2, 6]);
        // [[2,0],[0,3]] must normalize to 1, 6
        let mut m = IntMat::zeros(2, 2);
        m.set(0, 0, 2);
        m.set(1, 1, 3);
        assert_eq!(smith_diagonal(&m), vec![1, 6]);
    }

    #[test]
    fn euler_characteristic_matches_rank_bookkeeping() {
        for spine in enumerate_spines(1) {
            let regions = crate::region::trace_regions(&spine).unwrap();
            let chi = spine.vertex_count as i64 - spine.edges.len() as i64
                + regions.len() as i64;
            let (d2, d1) = chain_complex(&spine).unwrap();
            let alt = d1.rows as i64 - d1.cols as i64 + d2.cols as i64;
            assert_eq!(chi, alt);
        }
    }
}
