//! Exact integer-matrix algebra: Smith normal form, integer kernels, and
//! finite abelian invariants of lattice quotients.
//!
//! Matrices in scope are tiny (at most ~20x20), so the implementation is a
//! dense arbitrary-precision reduction with a deterministic pivot rule:
//! smallest nonzero absolute value, ties broken by lowest row then column.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Int;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let entries = rows.into_iter().flatten().map(Int::from).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_big_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += add;
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match swap {
                    None => return Int::zero(),
                    Some(i) => {
                        for j in 0..n {
                            let tmp = a[(k, j)].clone();
                            a[(k, j)] = a[(i, j)].clone();
                            a[(i, j)] = tmp;
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of a Smith normal form computation: `U * M * V = D`.
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form with unimodular transforms. The identity `U*M*V = D` and
/// `|det U| = |det V| = 1` are re-verified before returning.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        loop {
            // Deterministic pivot: smallest |entry| != 0 in the trailing block,
            // ties by lowest row then column.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match &pivot {
                        None => pivot = Some((i, j)),
                        Some(&(pi, pj)) => {
                            if d[(i, j)].abs() < d[(pi, pj)].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => return finish(u, d, v, m),
                Some(p) => p,
            };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m.rows {
                if !d[(i, t)].is_zero() {
                    let q = div_round(&d[(i, t)], &d[(t, t)]);
                    row_op(&mut d, &mut u, i, t, &q);
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..m.cols {
                if !d[(t, j)].is_zero() {
                    let q = div_round(&d[(t, j)], &d[(t, t)]);
                    col_op(&mut d, &mut v, j, t, &q);
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide every entry of the trailing block before moving on.
            let mut bad: Option<(usize, usize)> = None;
            'outer: for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        bad = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match bad {
                None => break,
                Some((i, _)) => {
                    // Fold the offending row into row t and repeat.
                    add_row(&mut d, &mut u, t, i);
                }
            }
        }
    }
    finish(u, d, v, m)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, mut v: IntMatrix, m: &IntMatrix) -> Snf {
    // Normalize diagonal signs.
    let n = d.rows.min(d.cols);
    for i in 0..n {
        if d[(i, i)].is_negative() {
            for j in 0..d.cols {
                let x = -d[(i, j)].clone();
                d[(i, j)] = x;
            }
            for j in 0..u.cols {
                let x = -u[(i, j)].clone();
                u[(i, j)] = x;
            }
        }
    }
    let _ = &mut v;
    debug_assert!(d.is_diagonal());
    // Verification identity, always on.
    let umv = u.mul(m).mul(&v);
    assert_eq!(umv, d, "SNF verification failed: U*M*V != D");
    assert!(u.det().abs().is_one(), "U not unimodular");
    assert!(v.det().abs().is_one(), "V not unimodular");
    for i in 1..n {
        if !d[(i, i)].is_zero() {
            assert!(
                !d[(i - 1, i - 1)].is_zero() && (&d[(i, i)] % &d[(i - 1, i - 1)]).is_zero(),
                "SNF divisibility chain violated"
            );
        }
    }
    Snf { u, d, v }
}

fn div_round(a: &Int, b: &Int) -> Int {
    // Quotient minimizing |a - q b|.
    let (q, r) = a.div_rem(b);
    if (&r * 2i32).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let tmp = d[(a, j)].clone();
        d[(a, j)] = d[(b, j)].clone();
        d[(b, j)] = tmp;
    }
    for j in 0..u.cols {
        let tmp = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = tmp;
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let tmp = d[(i, a)].clone();
        d[(i, a)] = d[(i, b)].clone();
        d[(i, b)] = tmp;
    }
    for i in 0..v.rows {
        let tmp = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = tmp;
    }
}

/// row[i] -= q * row[t]
fn row_op(d: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &Int) {
    for j in 0..d.cols {
        let delta = q * &d[(t, j)];
        d[(i, j)] -= delta;
    }
    for j in 0..u.cols {
        let delta = q * &u[(t, j)];
        u[(i, j)] -= delta;
    }
}

/// col[j] -= q * col[t]
fn col_op(d: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &Int) {
    for i in 0..d.rows {
        let delta = q * &d[(i, t)];
        d[(i, j)] -= delta;
    }
    for i in 0..v.rows {
        let delta = q * &v[(i, t)];
        v[(i, j)] -= delta;
    }
}

/// row[t] += row[i]
fn add_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    for j in 0..d.cols {
        let delta = d[(i, j)].clone();
        d[(t, j)] += delta;
    }
    for j in 0..u.cols {
        let delta = u[(i, j)].clone();
        u[(t, j)] += delta;
    }
}

/// Finitely generated abelian group in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    /// d_1 | d_2 | ... | d_k, all >= 2.
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { invariant_factors: Vec::new(), free_rank: 0 }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroup { invariant_factors: vec![n], free_rank: 0 }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.invariant_factors.iter().product())
        }
    }

    /// Direct sum, renormalized to invariant factors.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut primary: Vec<(u64, u32)> = Vec::new();
        for &d in self.invariant_factors.iter().chain(&other.invariant_factors) {
            primary.extend(factorize(d));
        }
        from_primary(primary, self.free_rank + other.free_rank)
    }

    /// Primary decomposition `Z_{p^e}` factors, sorted ascending, used to match
    /// the notation of classification tables.
    pub fn primary_decomposition(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .invariant_factors
            .iter()
            .flat_map(|&d| factorize(d).into_iter().map(|(p, e)| p.pow(e)))
            .collect();
        ps.sort_unstable();
        ps
    }

    /// Render like `Z2^2 x Z3` (primary decomposition with collected powers).
    pub fn display_primary(&self) -> String {
        if self.is_trivial() {
            return "1".to_string();
        }
        let ps = self.primary_decomposition();
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < ps.len() {
            let mut j = i;
            while j < ps.len() && ps[j] == ps[i] {
                j += 1;
            }
            let mult = j - i;
            if mult == 1 {
                parts.push(format!("Z{}", ps[i]));
            } else {
                parts.push(format!("Z{}^{}", ps[i], mult));
            }
            i = j;
        }
        for _ in 0..self.free_rank {
            parts.push("Z".to_string());
        }
        parts.join(" x ")
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn from_primary(primary: Vec<(u64, u32)>, free_rank: usize) -> AbelianGroup {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, e) in primary {
        by_prime.entry(p).or_default().push(e);
    }
    for v in by_prime.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let k = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; k];
    for (p, es) in by_prime {
        for (slot, e) in es.into_iter().enumerate() {
            factors[slot] *= p.pow(e);
        }
    }
    factors.reverse(); // ascending, d_i | d_{i+1}
    AbelianGroup { invariant_factors: factors.into_iter().filter(|&d| d > 1).collect(), free_rank }
}

/// The quotient `Z^n / <generators>` as an abelian group.
pub fn quotient_group(generators: &[Vec<i64>], ambient_rank: usize) -> AbelianGroup {
    let gens: Vec<Vec<Int>> = generators
        .iter()
        .map(|g| {
            assert_eq!(g.len(), ambient_rank, "generator length mismatch");
            g.iter().map(|&x| Int::from(x)).collect()
        })
        .collect();
    quotient_group_big(&gens, ambient_rank)
}

pub fn quotient_group_big(generators: &[Vec<Int>], ambient_rank: usize) -> AbelianGroup {
    if generators.is_empty() {
        return AbelianGroup { invariant_factors: Vec::new(), free_rank: ambient_rank };
    }
    let m = IntMatrix::from_big_rows(generators.to_vec());
    let snf = smith_normal_form(&m);
    let n = m.rows.min(m.cols);
    let mut factors = Vec::new();
    let mut rank = 0usize;
    for i in 0..n {
        let d = &snf.d[(i, i)];
        if d.is_zero() {
            continue;
        }
        rank += 1;
        if !d.is_one() {
            let v: u64 = d.to_string().parse().expect("invariant factor fits u64");
            factors.push(v);
        }
    }
    AbelianGroup { invariant_factors: factors, free_rank: ambient_rank - rank }
}

/// Basis of the integer kernel `{v : Mv = 0}`, saturated (primitive vectors).
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<Int>> {
    let snf = smith_normal_form(m);
    let n = m.rows.min(m.cols);
    let mut out = Vec::new();
    for j in 0..m.cols {
        let dj = if j < n { snf.d[(j, j)].clone() } else { Int::zero() };
        if dj.is_zero() {
            let col: Vec<Int> = (0..m.cols).map(|i| snf.v[(i, j)].clone()).collect();
            out.push(col);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(d: &IntMatrix) -> Vec<i64> {
        let n = d.rows.min(d.cols);
        (0..n)
            .map(|i| d[(i, i)].to_string().parse().unwrap())
            .collect()
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(diag_of(&snf.d), vec![1, 6]);
    }

    #[test]
    fn snf_identity_and_already_snf() {
        let m = IntMatrix::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(diag_of(&snf.d), vec![1, 1, 1]);
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(diag_of(&snf.d), vec![2, 2]);
    }

    #[test]
    fn quotient_examples() {
        let g = quotient_group(&[vec![2, 0], vec![0, 2]], 2);
        assert_eq!(g.invariant_factors, vec![2, 2]);
        assert_eq!(g.free_rank, 0);

        let g = quotient_group(&[vec![1, 0]], 2);
        assert!(g.invariant_factors.is_empty());
        assert_eq!(g.free_rank, 1);
    }

    #[test]
    fn row130_monomial_lattice() {
        // Monomial exponent lattice of t^2 + y^3 + x^4 on P(3,4,5,6):
        // torsion Z4 x Z3 x Z2 with one free coordinate (z).
        let g = quotient_group(&[vec![0, 0, 0, 2], vec![0, 3, 0, 0], vec![4, 0, 0, 0]], 4);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.primary_decomposition(), vec![2, 3, 4]);

        // The difference-plus-weight lattice is a different group; the SNF
        // oracle pins it down as Z (+) Z2.
        let g2 = quotient_group(&[vec![4, -3, 0, 0], vec![0, 3, 0, -2], vec![3, 4, 5, 6]], 4);
        assert_eq!(g2.free_rank, 1);
        assert_eq!(g2.invariant_factors, vec![2]);
    }

    #[test]
    fn kernel_examples() {
        let m = IntMatrix::from_rows(vec![vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_string().parse().unwrap()).collect();
        assert!(v == vec![1, -1] || v == vec![-1, 1]);

        assert!(kernel_basis(&IntMatrix::identity(2)).is_empty());

        let m = IntMatrix::from_rows(vec![vec![2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_string().parse().unwrap()).collect();
        // primitive: gcd of coordinates 1
        assert!(v == vec![2, -1] || v == vec![-2, 1]);
    }

    #[test]
    fn direct_sum_and_display() {
        let a = AbelianGroup::cyclic(2).direct_sum(&AbelianGroup::cyclic(12));
        assert_eq!(a.invariant_factors, vec![2, 12]);
        assert_eq!(a.primary_decomposition(), vec![2, 3, 4]);
        assert_eq!(a.display_primary(), "Z2 x Z3 x Z4");
        let b = AbelianGroup::cyclic(6).direct_sum(&AbelianGroup::cyclic(2));
        assert_eq!(b.invariant_factors, vec![2, 6]);
    }
}
