//! Small exact elimination toolkit: univariate polynomials over `Q` with gcd
//! and resultants, and gcds/resultants of polynomials in two variables. Sizes
//! in scope are tiny (degrees at most ~30), so the algorithms favour clarity.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, QPoly};
use crate::Rat;

/// Dense univariate polynomial over `Q`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            UPoly(vec![c])
        }
    }

    pub fn from_coeffs(mut v: Vec<Rat>) -> Self {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lc(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::from_coeffs(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * Rat::from(crate::Int::from(i as u64 + 1)))
                .collect(),
        )
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c.clone();
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c.clone();
        }
        UPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a.clone() * b.clone();
            }
        }
        UPoly::from_coeffs(v)
    }

    /// Euclidean remainder over the field `Q`.
    pub fn rem(&self, div: &UPoly) -> UPoly {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let dd = div.degree().unwrap();
        let dl = div.lc();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let factor = r.lc() / dl.clone();
            let shift = rd - dd;
            let mut v = r.0.clone();
            for (i, c) in div.0.iter().enumerate() {
                v[i + shift] = v[i + shift].clone() - factor.clone() * c.clone();
            }
            r = UPoly::from_coeffs(v);
        }
        r
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let lc = self.lc();
        self.scale(&(Rat::one() / lc))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Resultant of two univariate polynomials over `Q`, via the Euclidean
    /// multiplicativity relation.
    pub fn resultant(&self, other: &UPoly) -> Rat {
        fn res(f: &UPoly, g: &UPoly) -> Rat {
            let (df, dg) = (f.degree(), g.degree());
            match (df, dg) {
                (None, _) | (_, None) => Rat::zero(),
                (Some(0), Some(dg)) => pow_rat(&f.lc(), dg as u32),
                (Some(df), Some(0)) => pow_rat(&g.lc(), df as u32),
                (Some(df), Some(dg)) => {
                    if df < dg {
                        let sign = if (df * dg) % 2 == 1 { -Rat::one() } else { Rat::one() };
                        return sign * res(g, f);
                    }
                    let r = f.rem(g);
                    match r.degree() {
                        None => Rat::zero(),
                        Some(dr) => {
                            let sign = if (df * dg) % 2 == 1 { -Rat::one() } else { Rat::one() };
                            sign * pow_rat(&g.lc(), (df - dr) as u32) * res(g, &r)
                        }
                    }
                }
            }
        }
        res(self, other)
    }
}

fn pow_rat(c: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= c.clone();
    }
    acc
}

/// View a QPoly supported on at most two variables as a coefficient grid.
/// Returns the pair of active variable indices `(u, v)` and the grid
/// `g[i][j]` = coefficient of `u^i v^j`.
fn as_grid(p: &QPoly) -> ((usize, usize), Vec<Vec<Rat>>) {
    let sup = p.support_vars();
    assert!(sup.len() <= 2, "polynomial must involve at most two variables");
    let u = sup.first().copied().unwrap_or(0);
    let v = sup.get(1).copied().unwrap_or_else(|| if u == 0 { 1.min(p.nvars() - 1) } else { 0 });
    let du = p.degree_in(u) as usize;
    let dv = p.degree_in(v) as usize;
    let mut g = vec![vec![Rat::zero(); dv + 1]; du + 1];
    for (m, c) in p.terms() {
        g[m.exponent(u) as usize][m.exponent(v) as usize] = c.clone();
    }
    ((u, v), g)
}

fn grid_to_qpoly(p: &QPoly, uv: (usize, usize), g: &[Vec<UPolyCell>]) -> QPoly {
    let mut out = QPoly::zero(p.table().clone());
    for (i, row) in g.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; p.nvars()];
                e[uv.0] = i as u32;
                e[uv.1] = j as u32;
                out.add_term(Monomial(e), c.clone());
            }
        }
    }
    out
}

type UPolyCell = Rat;

/// Polynomial in `v` with UPoly-in-`u` coefficients: `coeffs[j]` multiplies `v^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BiPoly {
    coeffs: Vec<UPoly>,
}

impl BiPoly {
    fn from_grid(g: &[Vec<Rat>]) -> Self {
        let dv = g.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut coeffs = vec![Vec::new(); dv];
        for row in g {
            for (j, c) in row.iter().enumerate() {
                coeffs[j].push(c.clone());
            }
            for item in coeffs.iter_mut().skip(row.len()) {
                item.push(Rat::zero());
            }
        }
        let mut b = BiPoly { coeffs: coeffs.into_iter().map(UPoly::from_coeffs).collect() };
        b.normalize();
        b
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_v(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn lc(&self) -> &UPoly {
        self.coeffs.last().expect("nonzero")
    }

    fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = if g.is_zero() { c.monic() } else { g.gcd(c) };
            }
        }
        g
    }

    fn divide_upoly_exact(&self, d: &UPoly) -> BiPoly {
        // Exact division of every coefficient by d (univariate long division,
        // remainder must vanish).
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_zero() {
                    UPoly::zero()
                } else {
                    upoly_div_exact(c, d)
                }
            })
            .collect();
        let mut b = BiPoly { coeffs };
        b.normalize();
        b
    }

    fn mul_upoly(&self, f: &UPoly) -> BiPoly {
        let mut b = BiPoly { coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect() };
        b.normalize();
        b
    }

    fn scale(&self, c: &Rat) -> BiPoly {
        let mut b = BiPoly { coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() };
        b.normalize();
        b
    }

    fn sub(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![UPoly::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] = coeffs[i].add(&c.scale(&-Rat::one()));
        }
        let mut b = BiPoly { coeffs };
        b.normalize();
        b
    }

    fn shift_v(&self, k: usize) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![UPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BiPoly { coeffs }
    }

    /// Pseudo-remainder with respect to v.
    fn prem(&self, div: &BiPoly) -> BiPoly {
        let dd = div.deg_v().expect("nonzero divisor");
        let mut r = self.clone();
        let dl = div.lc().clone();
        loop {
            let rd = match r.deg_v() {
                None => break,
                Some(d) => d,
            };
            if rd < dd {
                break;
            }
            let rl = r.lc().clone();
            r = r.mul_upoly(&dl).sub(&div.mul_upoly(&rl).shift_v(rd - dd));
            // Degree strictly decreased in v.
            debug_assert!(r.deg_v().map_or(true, |d| d < rd));
        }
        r
    }

    fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.divide_upoly_exact(&c)
    }
}

fn upoly_div_exact(n: &UPoly, d: &UPoly) -> UPoly {
    assert!(!d.is_zero());
    let mut r = n.clone();
    let dd = d.degree().unwrap();
    let dl = d.lc();
    let mut q = vec![Rat::zero(); n.0.len().saturating_sub(d.0.len()) + 1];
    while let Some(rd) = r.degree() {
        if rd < dd {
            break;
        }
        let factor = r.lc() / dl.clone();
        let shift = rd - dd;
        q[shift] = factor.clone();
        let mut v = r.0.clone();
        for (i, c) in d.0.iter().enumerate() {
            v[i + shift] = v[i + shift].clone() - factor.clone() * c.clone();
        }
        r = UPoly::from_coeffs(v);
    }
    assert!(r.is_zero(), "inexact univariate division");
    UPoly::from_coeffs(q)
}

/// Gcd of two polynomials in at most two variables, via the primitive PRS.
/// The result is primitive and normalized monic in the leading variable.
pub fn bi_gcd(p: &QPoly, q: &QPoly) -> QPoly {
    if p.is_zero() {
        return normalize_leading(q);
    }
    if q.is_zero() {
        return normalize_leading(p);
    }
    let mut sup: Vec<usize> = p.support_vars();
    for v in q.support_vars() {
        if !sup.contains(&v) {
            sup.push(v);
        }
    }
    sup.sort_unstable();
    assert!(sup.len() <= 2, "bi_gcd expects polynomials in at most two variables");
    if sup.len() <= 1 {
        // Univariate (or constant) case.
        let u = sup.first().copied().unwrap_or(0);
        let (pu, qu) = (univariate_in(p, u), univariate_in(q, u));
        let g = pu.gcd(&qu);
        return upoly_to_qpoly(p, u, &g);
    }
    let (u, v) = (sup[0], sup[1]);
    let pg = to_bipoly(p, u, v);
    let qg = to_bipoly(q, u, v);
    let content_gcd = pg.content().gcd(&qg.content());
    let mut a = pg.primitive_part();
    let mut b = qg.primitive_part();
    if a.deg_v() < b.deg_v() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.prem(&b).primitive_part();
        a = b;
        b = r;
    }
    let g = a.primitive_part().mul_upoly(&content_gcd);
    let out = bipoly_to_qpoly(p, u, v, &g);
    normalize_leading(&out)
}

fn normalize_leading(p: &QPoly) -> QPoly {
    if p.is_zero() {
        return p.clone();
    }
    // Monic in the canonical leading term (largest monomial lexicographically).
    let lead = p.terms().map(|(m, _)| m.clone()).max().expect("nonzero");
    let c = p.coefficient(&lead);
    p.scale(&(Rat::one() / c))
}

fn univariate_in(p: &QPoly, u: usize) -> UPoly {
    let d = p.degree_in(u) as usize;
    let mut v = vec![Rat::zero(); d + 1];
    for (m, c) in p.terms() {
        v[m.exponent(u) as usize] += c.clone();
    }
    UPoly::from_coeffs(v)
}

fn upoly_to_qpoly(model: &QPoly, u: usize, f: &UPoly) -> QPoly {
    let mut out = QPoly::zero(model.table().clone());
    for (i, c) in f.0.iter().enumerate() {
        if !c.is_zero() {
            let mut e = vec![0u32; model.nvars()];
            e[u] = i as u32;
            out.add_term(Monomial(e), c.clone());
        }
    }
    normalize_leading(&out)
}

fn to_bipoly(p: &QPoly, u: usize, v: usize) -> BiPoly {
    let du = p.degree_in(u) as usize;
    let dv = p.degree_in(v) as usize;
    let mut g = vec![vec![Rat::zero(); dv + 1]; du + 1];
    for (m, c) in p.terms() {
        g[m.exponent(u) as usize][m.exponent(v) as usize] = c.clone();
    }
    BiPoly::from_grid(&g)
}

fn bipoly_to_qpoly(model: &QPoly, u: usize, v: usize, b: &BiPoly) -> QPoly {
    let mut out = QPoly::zero(model.table().clone());
    for (j, c) in b.coeffs.iter().enumerate() {
        for (i, x) in c.0.iter().enumerate() {
            if !x.is_zero() {
                let mut e = vec![0u32; model.nvars()];
                e[u] = i as u32;
                e[v] = j as u32;
                out.add_term(Monomial(e), x.clone());
            }
        }
    }
    out
}

/// Squarefreeness of a (≤ 2)-variable polynomial, via gcd with both partials.
pub fn is_squarefree_bi(p: &QPoly) -> bool {
    let sup = p.support_vars();
    if sup.is_empty() {
        return true;
    }
    let mut g = p.clone();
    for &v in &sup {
        let d = p.partial_derivative(v);
        if !d.is_zero() {
            g = bi_gcd(&g, &d);
        }
    }
    g.max_weighted_degree() == 0
}

/// Resultant of `p` and `q` with respect to variable `v`, as a univariate
/// polynomial in the other active variable `u`. Computed by evaluation at
/// integer points and Lagrange interpolation; evaluation points where either
/// leading coefficient (in `v`) vanishes are skipped.
pub fn bi_resultant(p: &QPoly, q: &QPoly, u: usize, v: usize) -> UPoly {
    let dpv = p.degree_in(v) as usize;
    let dqv = q.degree_in(v) as usize;
    if dpv == 0 || dqv == 0 {
        // Degenerate orientation; resultant via the constant-degree formula.
        let pu = univariate_in(p, v);
        let qu = univariate_in(q, v);
        return UPoly::constant(pu.resultant(&qu));
    }
    let dpu = p.degree_in(u) as usize;
    let dqu = q.degree_in(u) as usize;
    let bound = dpu * dqv + dqu * dpv + 1;
    let lcp = leading_coeff_in(p, u, v);
    let lcq = leading_coeff_in(q, u, v);
    let mut xs: Vec<Rat> = Vec::with_capacity(bound);
    let mut ys: Vec<Rat> = Vec::with_capacity(bound);
    let mut k: i64 = 0;
    while xs.len() < bound {
        let x = Rat::from(crate::Int::from(k));
        k += 1;
        if lcp.eval(&x).is_zero() || lcq.eval(&x).is_zero() {
            continue;
        }
        let pv = eval_u(p, u, v, &x);
        let qv = eval_u(q, u, v, &x);
        ys.push(pv.resultant(&qv));
        xs.push(x);
        if k > 10_000 {
            panic!("resultant interpolation failed to find evaluation points");
        }
    }
    lagrange(&xs, &ys)
}

fn leading_coeff_in(p: &QPoly, u: usize, v: usize) -> UPoly {
    let dv = p.degree_in(v);
    let lead = p.coefficient_of_power(v, dv);
    univariate_in(&lead, u)
}

fn eval_u(p: &QPoly, u: usize, v: usize, x: &Rat) -> UPoly {
    let dv = p.degree_in(v) as usize;
    let mut coeffs = vec![Rat::zero(); dv + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for _ in 0..m.exponent(u) {
            t *= x.clone();
        }
        coeffs[m.exponent(v) as usize] += t;
    }
    UPoly::from_coeffs(coeffs)
}

fn lagrange(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let n = xs.len();
    let mut acc = UPoly::zero();
    for i in 0..n {
        if ys[i].is_zero() {
            continue;
        }
        let mut basis = UPoly::constant(Rat::one());
        let mut denom = Rat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            basis = basis.mul(&UPoly::from_coeffs(vec![-xs[j].clone(), Rat::one()]));
            denom *= xs[i].clone() - xs[j].clone();
        }
        acc = acc.add(&basis.scale(&(ys[i].clone() / denom)));
    }
    acc
}

/// Convenience: convert a two-variable QPoly into its grid for inspection.
pub(crate) fn support_grid(p: &QPoly) -> ((usize, usize), Vec<Vec<Rat>>) {
    as_grid(p)
}

#[allow(unused)]
pub(crate) fn upoly_in(p: &QPoly, u: usize) -> UPoly {
    univariate_in(p, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, VarTable};

    #[test]
    fn univariate_resultant_matches_known() {
        // res(x^2 - 1, x - 2) = (2^2 - 1) = 3
        let f = UPoly::from_coeffs(vec![crate::rat_int(-1), crate::rat_int(0), crate::rat_int(1)]);
        let g = UPoly::from_coeffs(vec![crate::rat_int(-2), crate::rat_int(1)]);
        assert_eq!(f.resultant(&g), crate::rat_int(3));
    }

    #[test]
    fn bivariate_gcd_common_factor() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        let p = parse_poly("(x + y)*(x^2 + y^2)", &t).unwrap();
        let q = parse_poly("(x + y)*(x - y)", &t).unwrap();
        let g = bi_gcd(&p, &q);
        assert_eq!(g, parse_poly("x + y", &t).unwrap());
    }

    #[test]
    fn bivariate_resultant_detects_common_root() {
        let t = VarTable::ambient([1, 1, 2, 3, 3]);
        // f = y - x^2, g = y - 2x: resultant in y = 2x - x^2, roots x = 0, 2.
        let f = parse_poly("y - x^2", &t).unwrap();
        let g = parse_poly("y - 2*x", &t).unwrap();
        let r = bi_resultant(&f, &g, 0, 1);
        assert_eq!(r.eval(&crate::rat_int(0)), crate::rat_int(0));
        assert_eq!(r.eval(&crate::rat_int(2)), crate::rat_int(0));
        assert!(!r.eval(&crate::rat_int(1)).is_zero());
    }
}
