//! Dense exact linear algebra over Q, sized for the small systems that the
//! derivation computations produce.

use num_traits::{One, Zero};

use crate::Rat;

/// Reduced row echelon form in place; returns pivot column indices.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let pivot_row = (r..nrows).find(|&i| !rows[i][c].is_zero());
        let Some(p) = pivot_row else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = f.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the solution space of the homogeneous system `rows * x = 0`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Is `v` in the row span of `basis`?
pub fn in_span(basis: &[Vec<Rat>], v: &[Rat]) -> bool {
    let mut m = basis.to_vec();
    let r0 = rref(&mut m).len();
    let mut m2 = basis.to_vec();
    m2.push(v.to_vec());
    rank(&m2) == r0
}

/// Reduce `vectors` to a basis of their span.
pub fn span_basis(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m = vectors.to_vec();
    let pivots = rref(&mut m);
    m.truncate(pivots.len());
    m
}

/// Solve `x * basis_matrix = v` for a square invertible basis matrix given by
/// rows; returns None when inconsistent.
pub fn solve_in_basis(basis_rows: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis_rows.len();
    if k == 0 {
        return if v.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    let n = basis_rows[0].len();
    // Transpose: solve basis^T * x^T = v^T by augmented elimination.
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = basis_rows.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent if a pivot lands in the augmented column.
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][k].clone();
    }
    // Verify (fast, sizes are tiny).
    for j in 0..n {
        let mut acc = Rat::zero();
        for (i, b) in basis_rows.iter().enumerate() {
            acc += x[i].clone() * b[j].clone();
        }
        if acc != v[j] {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;

    #[test]
    fn nullspace_of_simple_system() {
        // x + y + z = 0 has a 2-dimensional solution space.
        let rows = vec![vec![rat_int(1), rat_int(1), rat_int(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: Rat = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]];
        assert!(in_span(&basis, &[rat_int(3), rat_int(4)]));
        let partial = vec![vec![rat_int(1), rat_int(1)]];
        assert!(!in_span(&partial, &[rat_int(1), rat_int(0)]));
    }
}
