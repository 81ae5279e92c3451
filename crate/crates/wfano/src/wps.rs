//! Weighted projective space geometry: well-formedness, Fano index, coordinate
//! strata of a hypersurface, cyclic quotient singularities, and the Reid–Tai
//! terminality criterion.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactalg::{QPoly, VarTable};

/// The quintuple `(a_0 <= a_1 <= a_2 <= a_3 <= a_4; d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightSystem {
    pub weights: [u32; 5],
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WpsError {
    #[error("weight system is not Fano: sum of weights {sum} <= degree {degree}")]
    NotFano { sum: u32, degree: u32 },
    #[error("no eliminating monomial at coordinate point {point}: member not quasi-smooth there")]
    NoEliminator { point: usize },
    #[error("positive-dimensional singular stratum at coordinates {i},{j}: unsupported")]
    Unsupported { i: usize, j: usize },
    #[error("cyclic quotient 1/{r}({w0},{w1},{w2}) is not isolated")]
    NonIsolated { r: u32, w0: u32, w1: u32, w2: u32 },
}

impl WeightSystem {
    /// Sorts the weights ascending.
    pub fn new(mut weights: [u32; 5], degree: u32) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        assert!(degree > 0, "degree must be positive");
        weights.sort_unstable();
        WeightSystem { weights, degree }
    }

    pub fn weight_sum(&self) -> u32 {
        self.weights.iter().sum()
    }

    /// Fano index `sum(a_j) - d`; errors when the difference is not positive.
    pub fn fano_index(&self) -> Result<u32, WpsError> {
        let sum = self.weight_sum();
        if sum > self.degree {
            Ok(sum - self.degree)
        } else {
            Err(WpsError::NotFano { sum, degree: self.degree })
        }
    }

    /// Ambient well-formedness: every 4 of the 5 weights are coprime.
    pub fn is_well_formed(&self) -> bool {
        (0..5).all(|skip| {
            let mut g = 0u32;
            for (i, &w) in self.weights.iter().enumerate() {
                if i != skip {
                    g = g.gcd(&w);
                }
            }
            g == 1
        })
    }

    /// Hypersurface well-formedness on top of ambient well-formedness: every
    /// coordinate 3-stratum fixed by a nontrivial quotient group must be cut
    /// properly, i.e. `gcd(a_i,a_j,a_k) | d` for all triples.
    pub fn is_well_formed_hypersurface(&self) -> bool {
        if !self.is_well_formed() {
            return false;
        }
        for i in 0..5 {
            for j in i + 1..5 {
                for k in j + 1..5 {
                    let g = self.weights[i].gcd(&self.weights[j]).gcd(&self.weights[k]);
                    if g > 1 && self.degree % g != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `d = a_i` for some `i` (degenerate re-embedding of a lower space).
    pub fn is_linear_cone(&self) -> bool {
        self.weights.contains(&self.degree)
    }

    /// Ambient variable table `x, y, z, t, w` with these weights.
    pub fn var_table(&self) -> Arc<VarTable> {
        VarTable::ambient(self.weights)
    }
}

/// Cyclic quotient singularity `1/r (w_1, w_2, w_3)`, weights reduced mod `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuotient {
    pub r: u32,
    pub weights: [u32; 3],
}

impl CyclicQuotient {
    pub fn new(r: u32, raw: [u32; 3]) -> Self {
        assert!(r >= 1);
        CyclicQuotient { r, weights: raw.map(|w| w % r) }
    }

    /// Isolated at the fixed point: all local weights coprime to `r`.
    pub fn is_isolated(&self) -> bool {
        self.r == 1 || self.weights.iter().all(|w| w.gcd(&self.r) == 1)
    }

    /// Reid–Tai: terminal iff all age sums exceed 1, i.e. for every
    /// `k = 1..r-1`: `sum_i ((k*w_i) mod r) > r`.
    pub fn is_terminal(&self) -> Result<bool, WpsError> {
        if self.r == 1 {
            return Ok(true);
        }
        if !self.is_isolated() {
            return Err(WpsError::NonIsolated {
                r: self.r,
                w0: self.weights[0],
                w1: self.weights[1],
                w2: self.weights[2],
            });
        }
        for k in 1..self.r {
            let age: u64 = self.weights.iter().map(|&w| ((k as u64) * (w as u64)) % self.r as u64).sum();
            if age <= self.r as u64 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the triple is, up to permutation and simultaneous unit
    /// rescaling mod r, of the form `(1, a, r-a)` with `gcd(a, r) = 1`.
    /// This is the classification of isolated terminal 3-fold cyclic quotients
    /// and serves as an independent oracle for `is_terminal`.
    pub fn is_classified_terminal_form(&self) -> bool {
        if self.r == 1 {
            return true;
        }
        if !self.is_isolated() {
            return false;
        }
        for k in 1..self.r {
            if k.gcd(&self.r) != 1 {
                continue;
            }
            let mut ws = self.weights.map(|w| (w as u64 * k as u64 % self.r as u64) as u32);
            ws.sort_unstable();
            // Look for a permutation (1, a, r - a).
            for p in 0..3 {
                if ws[p] != 1 {
                    continue;
                }
                let rest: Vec<u32> = (0..3).filter(|&i| i != p).map(|i| ws[i]).collect();
                if (rest[0] + rest[1]) % self.r == 0 {
                    return true;
                }
            }
        }
        false
    }

    /// All unit rescalings `(k*w_i mod r)` of the quotient, used for
    /// equivalence checks.
    pub fn unit_orbit(&self) -> Vec<CyclicQuotient> {
        let mut out = Vec::new();
        for k in 1..self.r.max(2) {
            if k.gcd(&self.r) != 1 {
                continue;
            }
            out.push(CyclicQuotient::new(
                self.r,
                self.weights.map(|w| (w as u64 * k as u64 % self.r.max(1) as u64) as u32),
            ));
        }
        if out.is_empty() {
            out.push(*self);
        }
        out
    }

    /// Equivalence up to permutation and simultaneous unit rescaling.
    pub fn unit_equivalent(&self, other: &CyclicQuotient) -> bool {
        if self.r != other.r {
            return false;
        }
        let mut target = other.weights;
        target.sort_unstable();
        self.unit_orbit().iter().any(|q| {
            let mut w = q.weights;
            w.sort_unstable();
            w == target
        })
    }

    /// Rescale so that some coordinate has weight 1 and list it first, the
    /// quotient shape used by the cylinder construction. `None` when no local
    /// weight is a unit mod `r`.
    pub fn unit_first_form(&self) -> Option<(usize, [u32; 3])> {
        if self.r == 1 {
            return Some((0, [0, 0, 0]));
        }
        for (idx, &w) in self.weights.iter().enumerate() {
            if w.gcd(&self.r) == 1 {
                // k = w^{-1} mod r
                let k = mod_inverse(w, self.r)?;
                let scaled = self.weights.map(|x| (x as u64 * k as u64 % self.r as u64) as u32);
                let mut arranged = [scaled[idx], 0, 0];
                let mut slot = 1;
                for (j, &s) in scaled.iter().enumerate() {
                    if j != idx {
                        arranged[slot] = s;
                        slot += 1;
                    }
                }
                debug_assert_eq!(arranged[0], 1);
                return Some((idx, arranged));
            }
        }
        None
    }
}

fn mod_inverse(a: u32, m: u32) -> Option<u32> {
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i64) as u32)
}

/// A coordinate point of the ambient space, with its relation to `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumPoint {
    pub index: usize,
    pub lies_on_x: bool,
    pub quotient: Option<CyclicQuotient>,
}

/// Singularity analysis of a specific member at the coordinate points. For
/// each point `P_i` with `a_i > 1`: decides membership in `X` and, when on
/// `X`, computes the local cyclic quotient of order `a_i` by eliminating one
/// transversal variable via a monomial `x_i^k * x_m` of `F` (lowest `m`).
pub fn singular_points(ws: &WeightSystem, f: &QPoly) -> Result<Vec<StratumPoint>, WpsError> {
    let mut out = Vec::new();
    for i in 0..5 {
        let ai = ws.weights[i];
        if ai <= 1 {
            continue;
        }
        // F(P_i) != 0 iff F contains a pure power x_i^k.
        let pure = f.terms().any(|(m, _)| m.support() == vec![i]);
        if pure {
            out.push(StratumPoint { index: i, lies_on_x: false, quotient: None });
            continue;
        }
        // Eliminating variable: lowest m != i with a monomial x_i^k * x_m in F.
        let mut elim: Option<usize> = None;
        for m_idx in 0..5 {
            if m_idx == i {
                continue;
            }
            let found = f.terms().any(|(m, _)| {
                m.exponent(m_idx) == 1 && {
                    let sup = m.support();
                    sup.iter().all(|&s| s == i || s == m_idx)
                }
            });
            if found {
                elim = Some(m_idx);
                break;
            }
        }
        let m_idx = elim.ok_or(WpsError::NoEliminator { point: i })?;
        let mut local: Vec<u32> = Vec::with_capacity(3);
        for j in 0..5 {
            if j != i && j != m_idx {
                local.push(ws.weights[j] % ai);
            }
        }
        let q = CyclicQuotient::new(ai, [local[0], local[1], local[2]]);
        if !q.is_isolated() {
            return Err(WpsError::Unsupported { i, j: m_idx });
        }
        out.push(StratumPoint { index: i, lies_on_x: true, quotient: Some(q) });
    }
    Ok(out)
}

/// All admissible eliminating-variable choices at a coordinate point, for the
/// invariance test that the quotient type does not depend on the choice.
pub fn eliminator_choices(ws: &WeightSystem, f: &QPoly, i: usize) -> Vec<(usize, CyclicQuotient)> {
    let ai = ws.weights[i];
    let mut out = Vec::new();
    for m_idx in 0..5 {
        if m_idx == i {
            continue;
        }
        let found = f.terms().any(|(m, _)| {
            m.exponent(m_idx) == 1 && {
                let sup = m.support();
                sup.iter().all(|&s| s == i || s == m_idx)
            }
        });
        if found {
            let mut local: Vec<u32> = Vec::with_capacity(3);
            for j in 0..5 {
                if j != i && j != m_idx {
                    local.push(ws.weights[j] % ai);
                }
            }
            out.push((m_idx, CyclicQuotient::new(ai, [local[0], local[1], local[2]])));
        }
    }
    out
}

/// Combinatorial singularity analysis for the **general** member of a family,
/// used by the enumerator. Covers coordinate points and interior points of
/// coordinate-line strata; higher-dimensional singular strata are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralSingularities {
    /// All singular points isolated terminal cyclic quotients.
    TerminalIsolated(Vec<CyclicQuotient>),
    /// Some singular locus is positive-dimensional (or not analyzable).
    Unsupported,
    /// Some isolated quotient singularity fails Reid-Tai.
    NotTerminal,
    /// A coordinate point admits no eliminating monomial for the general
    /// member (the general member is not quasi-smooth there).
    NoEliminator,
}

pub fn general_singularities(ws: &WeightSystem) -> GeneralSingularities {
    let a = ws.weights;
    let d = ws.degree;
    let mut quotients = Vec::new();

    // Any coordinate 3-stratum with a nontrivial common factor forces a curve
    // of quotient singularities on X: never terminal.
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                if a[i].gcd(&a[j]).gcd(&a[k]) > 1 {
                    return GeneralSingularities::Unsupported;
                }
            }
        }
    }

    // Coordinate points.
    for i in 0..5 {
        let ai = a[i];
        if ai <= 1 || d % ai == 0 {
            continue; // smooth ambient point or point off X
        }
        let elim = (0..5).find(|&j| j != i && (d - a[j]) % ai == 0 && d > a[j]);
        let j = match elim {
            None => return GeneralSingularities::NoEliminator,
            Some(j) => j,
        };
        let mut local = Vec::with_capacity(3);
        for k in 0..5 {
            if k != i && k != j {
                local.push(a[k] % ai);
            }
        }
        let q = CyclicQuotient::new(ai, [local[0], local[1], local[2]]);
        if !q.is_isolated() {
            return GeneralSingularities::Unsupported;
        }
        match q.is_terminal() {
            Ok(true) => quotients.push(q),
            Ok(false) => return GeneralSingularities::NotTerminal,
            Err(_) => return GeneralSingularities::Unsupported,
        }
    }

    // Interior points of coordinate-line strata with stabilizer mu_h.
    for i in 0..5 {
        for j in i + 1..5 {
            let h = a[i].gcd(&a[j]);
            if h <= 1 {
                continue;
            }
            // Monomials of degree d supported on {i, j}.
            let mut pairs = Vec::new();
            for alpha in 0..=(d / a[i]) {
                let rem = d - alpha * a[i];
                if rem % a[j] == 0 {
                    pairs.push((alpha, rem / a[j]));
                }
            }
            if pairs.is_empty() {
                // The line lies inside X: a curve of mu_h-quotient singularities.
                return GeneralSingularities::Unsupported;
            }
            if pairs.len() < 2 {
                continue; // roots only at coordinate points, handled above
            }
            let mut local = Vec::with_capacity(3);
            for k in 0..5 {
                if k != i && k != j {
                    local.push(a[k] % h);
                }
            }
            let q = CyclicQuotient::new(h, [local[0], local[1], local[2]]);
            if !q.is_isolated() {
                return GeneralSingularities::Unsupported;
            }
            match q.is_terminal() {
                Ok(true) => quotients.push(q),
                Ok(false) => return GeneralSingularities::NotTerminal,
                Err(_) => return GeneralSingularities::Unsupported,
            }
        }
    }

    GeneralSingularities::TerminalIsolated(quotients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;

    #[test]
    fn well_formedness_examples() {
        assert!(WeightSystem::new([1, 1, 2, 3, 5], 6).is_well_formed());
        assert!(!WeightSystem::new([2, 2, 2, 2, 3], 6).is_well_formed());
        assert!(!WeightSystem::new([1, 2, 2, 2, 2], 6).is_well_formed());
    }

    #[test]
    fn fano_index_examples() {
        assert_eq!(WeightSystem::new([1, 1, 2, 3, 5], 6).fano_index().unwrap(), 6);
        assert_eq!(WeightSystem::new([1, 1, 1, 1, 1], 2).fano_index().unwrap(), 3);
        assert_eq!(WeightSystem::new([3, 4, 5, 6, 7], 12).fano_index().unwrap(), 13);
        assert!(WeightSystem::new([1, 1, 1, 1, 1], 5).fano_index().is_err());
    }

    #[test]
    fn fano_index_permutation_invariant() {
        let a = WeightSystem::new([5, 1, 3, 2, 1], 6);
        let b = WeightSystem::new([1, 1, 2, 3, 5], 6);
        assert_eq!(a, b);
    }

    #[test]
    fn reid_tai_examples() {
        assert!(CyclicQuotient::new(1, [0, 0, 0]).is_terminal().unwrap());
        assert!(CyclicQuotient::new(2, [1, 1, 1]).is_terminal().unwrap());
        assert!(!CyclicQuotient::new(3, [1, 1, 1]).is_terminal().unwrap());
        assert!(CyclicQuotient::new(5, [1, 2, 3]).is_terminal().unwrap());
        assert!(CyclicQuotient::new(7, [1, 5, 2]).is_terminal().unwrap());
    }

    #[test]
    fn reid_tai_matches_classification_up_to_30() {
        for r in 1..=30u32 {
            for w0 in 0..r.max(1) {
                for w1 in 0..r.max(1) {
                    for w2 in 0..r.max(1) {
                        let q = CyclicQuotient::new(r, [w0, w1, w2]);
                        if !q.is_isolated() {
                            continue;
                        }
                        assert_eq!(
                            q.is_terminal().unwrap(),
                            q.is_classified_terminal_form(),
                            "mismatch at 1/{r}({w0},{w1},{w2})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singular_points_of_118() {
        let ws = WeightSystem::new([1, 1, 2, 3, 5], 6);
        let t = ws.var_table();
        let f = parse_poly("y*w + t^2 + z^3 + x^4*z + x^6", &t).unwrap();
        let pts = singular_points(&ws, &f).unwrap();
        // z-point: off X (z^3 present); t-point: off X (t^2); w-point on X.
        let w_pt = pts.iter().find(|p| p.index == 4).unwrap();
        assert!(w_pt.lies_on_x);
        let q = w_pt.quotient.unwrap();
        assert_eq!(q.r, 5);
        assert!(q.unit_equivalent(&CyclicQuotient::new(5, [1, 2, 3])));
        assert!(q.is_terminal().unwrap());
    }

    #[test]
    fn singular_points_of_112_and_104() {
        let ws = WeightSystem::new([1, 1, 2, 3, 3], 6);
        let t = ws.var_table();
        let f = parse_poly("t*w + z^3 + x^6 + y^6", &t).unwrap();
        let pts = singular_points(&ws, &f).unwrap();
        let w_pt = pts.iter().find(|p| p.index == 4).unwrap();
        assert!(w_pt.lies_on_x);
        assert!(w_pt.quotient.unwrap().unit_equivalent(&CyclicQuotient::new(3, [1, 1, 2])));

        let ws = WeightSystem::new([1, 1, 1, 1, 1], 2);
        let t = ws.var_table();
        let f = parse_poly("x*y + z^2 + t^2 + w^2", &t).unwrap();
        assert!(singular_points(&ws, &f).unwrap().is_empty());
    }

    #[test]
    fn eliminator_choice_is_unit_equivalent() {
        // F with two admissible eliminators at the w-point.
        let ws = WeightSystem::new([1, 1, 2, 3, 3], 6);
        let t = ws.var_table();
        let f = parse_poly("t*w + x^3*w + z^3 + x^6 + y^6", &t).unwrap();
        let choices = eliminator_choices(&ws, &f, 4);
        assert!(choices.len() >= 2);
        for w in &choices[1..] {
            assert!(choices[0].1.unit_equivalent(&w.1));
        }
    }

    #[test]
    fn unit_first_form_examples() {
        let q = CyclicQuotient::new(7, [2, 3, 4]);
        let (_, f) = q.unit_first_form().unwrap();
        assert_eq!(f[0], 1);
        assert!(CyclicQuotient::new(7, [f[0], f[1], f[2]]).unit_equivalent(&q));
        assert!(q.unit_equivalent(&CyclicQuotient::new(7, [1, 5, 2])));
    }

    #[test]
    fn general_singularities_of_spades() {
        // 118: one 1/5(1,2,3)-type point.
        let g = general_singularities(&WeightSystem::new([1, 1, 2, 3, 5], 6));
        match g {
            GeneralSingularities::TerminalIsolated(qs) => {
                assert!(qs.iter().any(|q| q.r == 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        // Non-terminal: 1/3(1,1,1)-type from P(1,1,1,1,3), d = 4.
        let g = general_singularities(&WeightSystem::new([1, 1, 1, 1, 3], 4));
        assert_eq!(g, GeneralSingularities::NotTerminal);
    }
}
