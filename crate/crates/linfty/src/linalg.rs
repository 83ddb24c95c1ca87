//! Exact linear algebra over the rationals: dense inversion for small
//! matrices and a sparse row-echelon solver used by the cohomology routines.
//! Pivoting is deterministic (first usable column, first usable row), so all
//! reported solutions and kernel bases are reproducible.

use crate::scalar::{self, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Dense inverse; `None` when singular.
pub fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    if n == 0 {
        return Some(vec![]);
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { scalar::one() } else { scalar::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                    let t = &inv[col][j] * &f;
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Row echelon form of a sparse system.  Returned data describes the reduced
/// rows together with their pivot columns and the transformed right-hand
/// sides (when provided alongside).
struct Echelon {
    /// Reduced rows, each with pivot normalized to 1.
    rows: Vec<SparseRow>,
    /// rhs entries transformed in lockstep with `rows`.
    rhs: Vec<Scalar>,
    /// Pivot column of each reduced row.
    pivots: Vec<usize>,
    /// Rows that reduced to zero on the left but not on the right (certificate
    /// of unsolvability), stored as the leftover rhs value.
    inconsistent: bool,
}

fn eliminate(mut rows: Vec<SparseRow>, mut rhs: Vec<Scalar>, ncols: usize) -> Echelon {
    let mut out_rows: Vec<SparseRow> = Vec::new();
    let mut out_rhs: Vec<Scalar> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut pivot_of_col: BTreeMap<usize, usize> = BTreeMap::new();
    let mut inconsistent = false;

    for idx in 0..rows.len() {
        let mut row = std::mem::take(&mut rows[idx]);
        let mut b = std::mem::replace(&mut rhs[idx], scalar::zero());
        // reduce against existing pivots
        loop {
            let Some((&col, _)) = row.iter().next() else { break };
            debug_assert!(col < ncols);
            match pivot_of_col.get(&col) {
                Some(&r) => {
                    let f = row.get(&col).cloned().unwrap();
                    let (prow, pb) = (out_rows[r].clone(), out_rhs[r].clone());
                    for (c, v) in prow {
                        let delta = &v * &f;
                        let e = row.entry(c).or_insert_with(scalar::zero);
                        *e -= delta;
                        if e.is_zero() {
                            row.remove(&c);
                        }
                    }
                    b -= pb * &f;
                }
                None => break,
            }
        }
        if row.is_empty() {
            if !b.is_zero() {
                inconsistent = true;
            }
            continue;
        }
        // normalize pivot to 1
        let (&col, _) = row.iter().next().unwrap();
        let p = row.get(&col).cloned().unwrap();
        for v in row.values_mut() {
            *v /= &p;
        }
        b /= &p;
        pivot_of_col.insert(col, out_rows.len());
        pivots.push(col);
        out_rows.push(row);
        out_rhs.push(b);
    }

    // back substitution: make it fully reduced
    for i in (0..out_rows.len()).rev() {
        let row = out_rows[i].clone();
        let b = out_rhs[i].clone();
        let pc = pivots[i];
        for j in 0..i {
            if let Some(f) = out_rows[j].get(&pc).cloned() {
                for (c, v) in &row {
                    let delta = v * &f;
                    let e = out_rows[j].entry(*c).or_insert_with(scalar::zero);
                    *e -= delta;
                    if e.is_zero() {
                        out_rows[j].remove(c);
                    }
                }
                let delta = &b * &f;
                out_rhs[j] -= delta;
            }
        }
    }

    Echelon {
        rows: out_rows,
        rhs: out_rhs,
        pivots,
        inconsistent,
    }
}

/// Solves `A x = b` exactly.  Free variables are set to zero, so the answer
/// is deterministic.  Returns `None` when the system is inconsistent.
pub fn solve(rows: &[SparseRow], rhs: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), rhs.len());
    let ech = eliminate(rows.to_vec(), rhs.to_vec(), ncols);
    if ech.inconsistent {
        return None;
    }
    let mut x = vec![scalar::zero(); ncols];
    for (i, &pc) in ech.pivots.iter().enumerate() {
        // fully reduced: row i is e_{pc} + (free columns), free vars = 0
        x[pc] = ech.rhs[i].clone();
    }
    Some(x)
}

/// Basis of the kernel of `A`, deterministic ordering (one vector per free
/// column, ascending).
pub fn kernel(rows: &[SparseRow], ncols: usize) -> Vec<Vec<Scalar>> {
    let ech = eliminate(rows.to_vec(), vec![scalar::zero(); rows.len()], ncols);
    let pivot_cols: std::collections::BTreeSet<usize> = ech.pivots.iter().cloned().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![scalar::zero(); ncols];
        v[free] = scalar::one();
        for (i, &pc) in ech.pivots.iter().enumerate() {
            if let Some(c) = ech.rows[i].get(&free) {
                v[pc] = -c.clone();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn rank(rows: &[SparseRow], ncols: usize) -> usize {
    eliminate(rows.to_vec(), vec![scalar::zero(); rows.len()], ncols).pivots.len()
}
