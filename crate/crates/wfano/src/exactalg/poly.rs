use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Ordered table of variables with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    vars: Vec<(String, u32)>,
}

impl VarTable {
    pub fn new(vars: Vec<(String, u32)>) -> Arc<Self> {
        assert!(!vars.is_empty(), "variable table must be nonempty");
        assert!(vars.iter().all(|(_, w)| *w > 0), "weights must be positive");
        Arc::new(VarTable { vars })
    }

    /// The default ambient table `x, y, z, t, w` with the given weights.
    pub fn ambient(weights: [u32; 5]) -> Arc<Self> {
        let names = ["x", "y", "z", "t", "w"];
        Self::new(names.iter().zip(weights).map(|(n, w)| (n.to_string(), w)).collect())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].0
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.vars[i].1
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.1).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }
}

/// Exponent vector aligned with a [`VarTable`]. Zero exponents are represented
/// implicitly by zeros in the dense vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

/// Weighted degree of a polynomial: a single common degree or a marker that the
/// terms disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u64),
    Mixed,
}

/// Sparse multivariate polynomial with exact rational coefficients over a
/// weighted variable table.
#[derive(Debug, Clone)]
pub struct QPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for QPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.table == *other.table && self.terms == other.terms
    }
}

impl Eq for QPoly {}

impl QPoly {
    pub fn zero(table: Arc<VarTable>) -> Self {
        QPoly { table, terms: BTreeMap::new() }
    }

    pub fn constant(table: Arc<VarTable>, c: Rat) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            let n = p.table.len();
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn var(table: Arc<VarTable>, i: usize) -> Self {
        let n = table.len();
        let mut p = Self::zero(table);
        p.terms.insert(Monomial::var(n, i), Rat::one());
        p
    }

    pub fn from_terms(table: Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn nvars(&self) -> usize {
        self.table.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.0.len(), self.table.len(), "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_table(&self, other: &QPoly) {
        assert!(
            *self.table == *other.table,
            "polynomials over different variable tables"
        );
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        self.assert_same_table(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> QPoly {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        self.assert_same_table(other);
        let mut r = QPoly::zero(self.table.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero(self.table.clone());
        }
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        r
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut r = QPoly::constant(self.table.clone(), Rat::one());
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Common weighted degree of all terms, or `Mixed`. Errors on zero.
    pub fn weighted_degree(&self) -> Result<WeightedDegree, ZeroPolynomial> {
        let weights = self.table.weights();
        let mut it = self.terms.keys();
        let first = it.next().ok_or(ZeroPolynomial)?.weighted_degree(&weights);
        for m in it {
            if m.weighted_degree(&weights) != first {
                return Ok(WeightedDegree::Mixed);
            }
        }
        Ok(WeightedDegree::Homogeneous(first))
    }

    pub fn is_quasi_homogeneous(&self, d: u64) -> bool {
        self.is_zero() || self.weighted_degree() == Ok(WeightedDegree::Homogeneous(d))
    }

    pub fn max_weighted_degree(&self) -> u64 {
        let weights = self.table.weights();
        self.terms.keys().map(|m| m.weighted_degree(&weights)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Variables appearing with nonzero exponent somewhere.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.table.len()];
        for m in self.terms.keys() {
            for i in m.support() {
                seen[i] = true;
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn partial_derivative(&self, var: usize) -> QPoly {
        let mut r = QPoly::zero(self.table.clone());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut e2 = m.0.clone();
            e2[var] -= 1;
            r.add_term(Monomial(e2), c.clone() * Rat::from(crate::Int::from(e)));
        }
        r
    }

    /// Exact substitution `x_i <- assignments[i]` with full expansion.
    /// Variables without an entry are left untouched.
    pub fn substitute(&self, assignments: &BTreeMap<usize, QPoly>) -> QPoly {
        let mut r = QPoly::zero(self.table.clone());
        for (m, c) in &self.terms {
            let mut term = QPoly::constant(self.table.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match assignments.get(&i) {
                    Some(p) => term = term.mul(&p.pow(e)),
                    None => {
                        let v = QPoly::var(self.table.clone(), i);
                        term = term.mul(&v.pow(e));
                    }
                }
            }
            r = r.add(&term);
        }
        r
    }

    /// Set `x_i = value` (a rational constant), keeping the variable table.
    pub fn eval_var(&self, var: usize, value: &Rat) -> QPoly {
        let mut r = QPoly::zero(self.table.clone());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let mut e2 = m.0.clone();
            e2[var] = 0;
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value.clone();
            }
            r.add_term(Monomial(e2), coeff);
        }
        r
    }

    /// Evaluate at a full rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.table.len());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= point[i].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficient of `x_var^k` as a polynomial in the remaining variables.
    pub fn coefficient_of_power(&self, var: usize, k: u32) -> QPoly {
        let mut r = QPoly::zero(self.table.clone());
        for (m, c) in &self.terms {
            if m.exponent(var) == k {
                let mut e2 = m.0.clone();
                e2[var] = 0;
                r.add_term(Monomial(e2), c.clone());
            }
        }
        r
    }

    /// Restrict to the monomials supported in `vars` (others' terms dropped).
    pub fn restrict_to_vars(&self, vars: &[usize]) -> QPoly {
        let keep: Vec<bool> = (0..self.table.len()).map(|i| vars.contains(&i)).collect();
        let mut r = QPoly::zero(self.table.clone());
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().all(|(i, &e)| e == 0 || keep[i]) {
                r.add_term(m.clone(), c.clone());
            }
        }
        r
    }

    /// Terms sorted for display: weighted degree descending, then exponent
    /// vector lexicographically descending.
    fn sorted_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let weights = self.table.weights();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(m1, _), (m2, _)| {
            let d1 = m1.weighted_degree(&weights);
            let d2 = m2.weighted_degree(&weights);
            match d2.cmp(&d1) {
                Ordering::Equal => m2.0.cmp(&m1.0),
                o => o,
            }
        });
        v
    }

    /// Map this polynomial onto another table by variable name.
    pub fn retable(&self, table: Arc<VarTable>) -> QPoly {
        let map: Vec<usize> = (0..self.table.len())
            .map(|i| {
                table
                    .index_of(self.table.name(i))
                    .unwrap_or_else(|| panic!("variable {} missing in target table", self.table.name(i)))
            })
            .collect();
        let mut r = QPoly::zero(table.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; table.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            r.add_term(Monomial(e), c.clone());
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("zero polynomial has no weighted degree")]
pub struct ZeroPolynomial;

fn fmt_coeff(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    // Leading negative coefficients keep the explicit sign so the
                    // output re-parses under the grammar (no unary minus).
                    write!(f, "{}", fmt_coeff(c))?;
                    if !m.is_one() {
                        write!(f, "*")?;
                    }
                } else if m.is_one() || !abs.is_one() {
                    write!(f, "{}", fmt_coeff(&abs))?;
                    if !m.is_one() {
                        write!(f, "*")?;
                    }
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
                if m.is_one() || !abs.is_one() {
                    write!(f, "{}", fmt_coeff(&abs))?;
                    if !m.is_one() {
                        write!(f, "*")?;
                    }
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{}", self.table.name(i))?;
                } else {
                    write!(f, "{}^{}", self.table.name(i), e)?;
                }
            }
            let _ = k;
        }
        Ok(())
    }
}

/// All exponent vectors of the given weighted degree, complete, duplicate-free
/// and in canonical (lexicographic) order.
pub fn monomials_of_degree(weights: &[u32], d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; weights.len()];
    fn rec(weights: &[u32], idx: usize, rem: u64, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == weights.len() {
            if rem == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let w = weights[idx] as u64;
        let max = rem / w;
        for e in 0..=max {
            current[idx] = e as u32;
            rec(weights, idx + 1, rem - e * w, current, out);
        }
        current[idx] = 0;
    }
    rec(weights, 0, d, &mut current, &mut out);
    out.sort();
    out
}

/// Greatest common divisor of two polynomials in (at most) two variables,
/// normalized to have a monic leading term in the canonical leading variable.
/// Errors on zero input.
pub fn binary_gcd(p: &QPoly, q: &QPoly) -> Result<QPoly, ZeroPolynomial> {
    if p.is_zero() || q.is_zero() {
        return Err(ZeroPolynomial);
    }
    Ok(super::elim::bi_gcd(p, q))
}

/// Squarefreeness of a polynomial in two variables, decided exactly: the gcd
/// with the derivative must be constant in the dehomogenized variable, checked
/// in both charts (equivalently, gcd(p, p_u, p_v) is constant).
pub fn is_squarefree_binary(p: &QPoly) -> Result<bool, ZeroPolynomial> {
    if p.is_zero() {
        return Err(ZeroPolynomial);
    }
    Ok(super::elim::is_squarefree_bi(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    fn table12233() -> Arc<VarTable> {
        VarTable::ambient([1, 1, 2, 3, 3])
    }

    #[test]
    fn weighted_degree_cases() {
        let t = table12233();
        let p = super::super::parse_poly("t*w + z^3", &t).unwrap();
        assert_eq!(p.weighted_degree().unwrap(), WeightedDegree::Homogeneous(6));
        let x = QPoly::var(t.clone(), 0);
        assert_eq!(x.weighted_degree().unwrap(), WeightedDegree::Homogeneous(1));
        let mixed = super::super::parse_poly("x + z", &t).unwrap();
        assert_eq!(mixed.weighted_degree().unwrap(), WeightedDegree::Mixed);
        assert!(QPoly::zero(t).weighted_degree().is_err());
    }

    #[test]
    fn monomials_of_degree_examples() {
        // weights (1,1,2), d = 2 -> x^2, xy, y^2, z
        let ms = monomials_of_degree(&[1, 1, 2], 2);
        assert_eq!(ms.len(), 4);
        let got: Vec<Vec<u32>> = ms.iter().map(|m| m.0.clone()).collect();
        assert!(got.contains(&vec![2, 0, 0]));
        assert!(got.contains(&vec![1, 1, 0]));
        assert!(got.contains(&vec![0, 2, 0]));
        assert!(got.contains(&vec![0, 0, 1]));
        assert_eq!(monomials_of_degree(&[1], 3), vec![Monomial(vec![3])]);
        assert!(monomials_of_degree(&[2, 3], 1).is_empty());
    }

    #[test]
    fn derivative_and_substitute() {
        let t = table12233();
        let p = super::super::parse_poly("t*w + z^3", &t).unwrap();
        let dt = p.partial_derivative(3);
        assert_eq!(dt, QPoly::var(t.clone(), 4));

        // substitute z <- z + x^2 into z^3
        let z3 = super::super::parse_poly("z^3", &t).unwrap();
        let mut assign = BTreeMap::new();
        assign.insert(2usize, super::super::parse_poly("z + x^2", &t).unwrap());
        let expanded = z3.substitute(&assign);
        let expect = super::super::parse_poly("z^3 + 3*x^2*z^2 + 3*x^4*z + x^6", &t).unwrap();
        assert_eq!(expanded, expect);

        // identity substitution
        let id = BTreeMap::new();
        assert_eq!(p.substitute(&id), p);
    }

    #[test]
    fn euler_identity_on_quasi_homogeneous() {
        let t = table12233();
        let p = super::super::parse_poly("t*w + z^3 + x^4*z + x^6", &t).unwrap();
        let mut acc = QPoly::zero(t.clone());
        for i in 0..5 {
            let xi = QPoly::var(t.clone(), i);
            let term = xi.mul(&p.partial_derivative(i)).scale(&rat_int(t.weight(i) as i64));
            acc = acc.add(&term);
        }
        assert_eq!(acc, p.scale(&rat_int(6)));
    }

    #[test]
    fn squarefree_binary_examples() {
        let t = table12233();
        let p = super::super::parse_poly("x^6 + y^6", &t).unwrap();
        assert!(is_squarefree_binary(&p).unwrap());
        let q = super::super::parse_poly("x^2*y^2", &t).unwrap();
        assert!(!is_squarefree_binary(&q).unwrap());
        let a = super::super::parse_poly("x^2 - y^2", &t).unwrap();
        let b = super::super::parse_poly("x - y", &t).unwrap();
        let g = binary_gcd(&a, &b).unwrap();
        assert_eq!(g, super::super::parse_poly("x - y", &t).unwrap());
    }

    #[test]
    fn display_roundtrip_simple() {
        let t = table12233();
        let p = super::super::parse_poly("-2*x^2 + 1/3*z - 1", &t).unwrap();
        let s = p.to_string();
        let q = super::super::parse_poly(&s, &t).unwrap();
        assert_eq!(p, q);
        assert_eq!(rat(1, 3), p.coefficient(&Monomial(vec![0, 0, 1, 0, 0])));
    }
}
