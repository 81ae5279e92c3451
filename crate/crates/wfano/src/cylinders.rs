//! Cylindricity: construction of A^2-cylinder charts and the decision
//! procedure for containment of the affine 3-space.
//!
//! Charts are analysed by dehomogenization and elimination of a variable that
//! occurs linearly with constant coefficient. The A^3 decision follows the
//! boundary-reduction chain: weight obstruction, graph charts, and the
//! affine-line test on the residual plane curve (genus via Newton polygon
//! interior points, places at infinity via the top form).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{bi_gcd, bi_resultant, is_squarefree_bi, QPoly, UPoly};
use crate::wps::{CyclicQuotient, WeightSystem};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartKind {
    /// The chart is a coordinate graph: isomorphic to affine 3-space.
    GraphA3,
    /// The chart is a cyclic quotient of affine 3-space.
    Quotient(CyclicQuotient),
    /// No variable could be eliminated; the residual affine hypersurface.
    Hypersurface(QPoly),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartAnalysis {
    pub chart: usize,
    pub kind: ChartKind,
    pub eliminated: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CylError {
    #[error("chart D_+(x_{0}) does not meet X")]
    ChartDisjoint(usize),
    #[error("weight system is not in the supported classification range")]
    Unsupported,
}

/// Dehomogenize at `x_j = 1` and, when possible, eliminate a variable that
/// occurs linearly with nonzero constant coefficient.
pub fn analyze_chart(ws: &WeightSystem, f: &QPoly, j: usize) -> Result<ChartAnalysis, CylError> {
    let affine = f.eval_var(j, &Rat::one());
    if affine.is_zero() || affine.support_vars().is_empty() {
        return Err(CylError::ChartDisjoint(j));
    }
    // Eliminable variable: lowest index m with F| = c*x_m + (terms without x_m).
    let mut elim: Option<usize> = None;
    for m in 0..5 {
        if m == j {
            continue;
        }
        if affine.degree_in(m) != 1 {
            continue;
        }
        let coeff = affine.coefficient_of_power(m, 1);
        if coeff.support_vars().is_empty() && !coeff.is_zero() {
            elim = Some(m);
            break;
        }
    }
    match elim {
        Some(m) => {
            let residual: Vec<usize> = (0..5).filter(|&i| i != j && i != m).collect();
            let aj = ws.weights[j];
            if aj == 1 {
                Ok(ChartAnalysis { chart: j, kind: ChartKind::GraphA3, eliminated: Some(m) })
            } else {
                let locals = [
                    ws.weights[residual[0]] % aj,
                    ws.weights[residual[1]] % aj,
                    ws.weights[residual[2]] % aj,
                ];
                Ok(ChartAnalysis {
                    chart: j,
                    kind: ChartKind::Quotient(CyclicQuotient::new(aj, locals)),
                    eliminated: Some(m),
                })
            }
        }
        None => Ok(ChartAnalysis { chart: j, kind: ChartKind::Hypersurface(affine), eliminated: None }),
    }
}

/// Witness data for the A^2-cylinder construction on a quotient chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderWitness {
    pub chart: usize,
    /// Quotient of the chart; `None` for a graph chart (already A^3).
    pub quotient: Option<CyclicQuotient>,
    /// Quotient weights rescaled so a unit weight leads, the shape used by
    /// the blow-up construction, together with the index of the unit
    /// coordinate among the three residual chart coordinates.
    pub unit_form: Option<(usize, [u32; 3])>,
    pub statement: String,
}

/// Find a chart witnessing an open subset isomorphic to `A^2 x (A^1 \ {o})`.
pub fn a2_cylinder(ws: &WeightSystem, f: &QPoly) -> Option<CylinderWitness> {
    for j in 0..5 {
        let Ok(analysis) = analyze_chart(ws, f, j) else { continue };
        match analysis.kind {
            ChartKind::GraphA3 => {
                return Some(CylinderWitness {
                    chart: j,
                    quotient: None,
                    unit_form: None,
                    statement: "chart is A^3; open subset isomorphic to A^2 x (A^1 \\ {o})".into(),
                });
            }
            ChartKind::Quotient(q) => {
                if let Some(unit) = q.unit_first_form() {
                    return Some(CylinderWitness {
                        chart: j,
                        quotient: Some(q),
                        unit_form: Some(unit),
                        statement: format!(
                            "chart is A^3 // mu_{}({},{},{}); blow-up along the unit coordinate and remove the hyperplane H to get A^2 x (A^1 \\ {{o}})",
                            q.r, q.weights[0], q.weights[1], q.weights[2]
                        ),
                    });
                }
            }
            ChartKind::Hypersurface(_) => {}
        }
    }
    None
}

/// Report on a residual affine plane curve used as an A^3 obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub poly: String,
    pub newton_interior_points: Option<u32>,
    pub places_at_infinity: Option<u32>,
    pub smooth: Option<bool>,
    pub squarefree: bool,
    pub absolutely_irreducible: Option<bool>,
}

/// Number of lattice points strictly inside the Newton polygon of `f`
/// (the geometric genus under edge nondegeneracy). Returns `None` when some
/// edge form is not squarefree.
pub fn newton_genus(f: &QPoly) -> Option<u32> {
    let pts = support_points(f);
    if pts.is_empty() {
        return None;
    }
    let hull = convex_hull(&pts);
    // Nondegeneracy: every edge form squarefree.
    for e in hull_edges(&hull) {
        if !edge_form_squarefree(f, &e) {
            return None;
        }
    }
    Some(interior_points(&hull).len() as u32)
}

/// Brute-force interior lattice point count (test oracle).
pub fn interior_lattice_points_bruteforce(pts: &[(i64, i64)]) -> u32 {
    let hull = convex_hull(pts);
    interior_points(&hull).len() as u32
}

fn support_points(f: &QPoly) -> Vec<(i64, i64)> {
    let sup = f.support_vars();
    let (u, v) = match sup.len() {
        0 => return vec![],
        1 => (sup[0], if sup[0] == 0 { 1 } else { 0 }),
        2 => (sup[0], sup[1]),
        _ => panic!("newton polygon expects a polynomial in at most two variables"),
    };
    f.terms().map(|(m, _)| (m.exponent(u) as i64, m.exponent(v) as i64)).collect()
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone-chain convex hull; collinear boundary points dropped.
fn convex_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p: Vec<(i64, i64)> = pts.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_edges(hull: &[(i64, i64)]) -> Vec<((i64, i64), (i64, i64))> {
    match hull.len() {
        0 | 1 => vec![],
        2 => vec![(hull[0], hull[1])],
        n => (0..n).map(|i| (hull[i], hull[(i + 1) % n])).collect(),
    }
}

fn interior_points(hull: &[(i64, i64)]) -> Vec<(i64, i64)> {
    if hull.len() < 3 {
        return vec![];
    }
    let min_x = hull.iter().map(|p| p.0).min().unwrap();
    let max_x = hull.iter().map(|p| p.0).max().unwrap();
    let min_y = hull.iter().map(|p| p.1).min().unwrap();
    let max_y = hull.iter().map(|p| p.1).max().unwrap();
    let mut out = Vec::new();
    for x in min_x..=max_x {
        for y in min_y..=max_y {
            if strictly_inside(hull, (x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

fn strictly_inside(hull: &[(i64, i64)], q: (i64, i64)) -> bool {
    let n = hull.len();
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        if cross(a, b, q) <= 0 {
            return false; // hull is counter-clockwise
        }
    }
    true
}

fn edge_form_squarefree(f: &QPoly, edge: &((i64, i64), (i64, i64))) -> bool {
    let (a, b) = *edge;
    let dir = (b.0 - a.0, b.1 - a.1);
    let g = gcd64(dir.0.unsigned_abs(), dir.1.unsigned_abs()).max(1) as i64;
    let step = (dir.0 / g, dir.1 / g);
    // Collect coefficients at lattice points along the edge as a univariate
    // polynomial in the edge parameter.
    let mut coeffs = vec![Rat::zero(); g as usize + 1];
    let sup_pts = support_points_with_coeffs(f);
    for k in 0..=g {
        let pt = (a.0 + step.0 * k, a.1 + step.1 * k);
        if let Some(c) = sup_pts.get(&pt) {
            coeffs[k as usize] = c.clone();
        }
    }
    let p = UPoly::from_coeffs(coeffs);
    p.is_squarefree()
}

fn support_points_with_coeffs(f: &QPoly) -> BTreeMap<(i64, i64), Rat> {
    let sup = f.support_vars();
    let (u, v) = match sup.len() {
        0 => return BTreeMap::new(),
        1 => (sup[0], if sup[0] == 0 { 1 } else { 0 }),
        _ => (sup[0], sup[1]),
    };
    f.terms().map(|(m, c)| ((m.exponent(u) as i64, m.exponent(v) as i64), c.clone())).collect()
}

fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

/// Number of branches of the projective closure of `{f = 0}` along the line
/// at infinity. Exact when the top-degree form is squarefree; repeated linear
/// factors with rational direction are refined one step through the closure
/// chart; otherwise `None` (unknown).
pub fn places_at_infinity(f: &QPoly) -> Option<u32> {
    let sup = f.support_vars();
    if f.is_zero() || sup.is_empty() {
        return None;
    }
    let (u, v) = match sup.len() {
        1 => (sup[0], if sup[0] == 0 { 1 } else { 0 }),
        2 => (sup[0], sup[1]),
        _ => panic!("places_at_infinity expects at most two variables"),
    };
    let n: u32 = f
        .terms()
        .map(|(m, _)| m.exponent(u) + m.exponent(v))
        .max()
        .unwrap();
    if n == 0 {
        return None;
    }
    // Top form as a binary form in (u, v).
    let mut top = QPoly::zero(f.table().clone());
    for (m, c) in f.terms() {
        if m.exponent(u) + m.exponent(v) == n {
            top.add_term(m.clone(), c.clone());
        }
    }
    // Multiplicity structure of the top form.
    let mut count = 0u32;
    let mut rest = top.clone();
    // Strip powers of the coordinate factors first (roots at (1:0), (0:1)).
    for &var in &[u, v] {
        let mut mult = u32::MAX;
        for (m, _) in rest.terms() {
            mult = mult.min(m.exponent(var));
        }
        if mult > 0 {
            let mut divided = QPoly::zero(f.table().clone());
            for (m, c) in rest.terms() {
                let mut e = m.0.clone();
                e[var] -= mult;
                divided.add_term(crate::exactalg::Monomial(e), c.clone());
            }
            rest = divided;
            if mult == 1 {
                count += 1;
            } else {
                // Repeated coordinate direction: refine through the chart.
                match branches_at_direction(f, u, v, n, var) {
                    Some(b) => count += b,
                    None => return None,
                }
            }
        }
    }
    // Remaining form has nonzero constant and leading coefficients in z = u/v.
    let uni = dehomogenize(&rest, u, v);
    match uni.degree() {
        None | Some(0) => Some(count),
        Some(d) => {
            if uni.is_squarefree() {
                Some(count + d as u32)
            } else {
                None // repeated non-coordinate direction: not refined
            }
        }
    }
}

/// Branch count of the closure at the infinite point in a repeated coordinate
/// direction: 1 when the closure is smooth there, unknown otherwise.
fn branches_at_direction(f: &QPoly, u: usize, v: usize, n: u32, var: usize) -> Option<u32> {
    // Homogenize with a fresh slot (reuse an unused variable index as h).
    let h = (0..f.nvars()).find(|&i| i != u && i != v && f.degree_in(i) == 0)?;
    let mut hom = QPoly::zero(f.table().clone());
    for (m, c) in f.terms() {
        let deg = m.exponent(u) + m.exponent(v);
        let mut e = m.0.clone();
        e[h] = n - deg;
        hom.add_term(crate::exactalg::Monomial(e), c.clone());
    }
    // The direction with repeated factor `var`: the point at infinity is the
    // one where the *other* coordinate is 1, h = 0, var = 0.
    let other = if var == u { v } else { u };
    let chart = hom.eval_var(other, &Rat::one());
    // Point = (var = 0, h = 0). Smooth iff some partial is nonzero there.
    let at_origin = |p: &QPoly| -> Rat {
        let q = p.eval_var(var, &Rat::zero());
        let q = q.eval_var(h, &Rat::zero());
        q.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    };
    let dv = chart.partial_derivative(var);
    let dh = chart.partial_derivative(h);
    if !at_origin(&dv).is_zero() || !at_origin(&dh).is_zero() {
        Some(1)
    } else {
        None
    }
}

fn dehomogenize(form: &QPoly, u: usize, v: usize) -> UPoly {
    let d = form.degree_in(u) as usize;
    let mut coeffs = vec![Rat::zero(); d + 1];
    for (m, c) in form.terms() {
        coeffs[m.exponent(u) as usize] += c.clone();
    }
    let _ = v;
    UPoly::from_coeffs(coeffs)
}

/// Decide whether `{f = 0}` is scheme-theoretically the affine line: reduced,
/// absolutely irreducible, smooth, rational (genus 0) and with one place at
/// infinity. `None` = undecided.
pub fn is_affine_line(f: &QPoly) -> Option<bool> {
    if f.is_zero() {
        return None;
    }
    let sup = f.support_vars();
    if sup.is_empty() {
        return Some(false); // nonzero constant: empty scheme
    }
    if !is_squarefree_bi(f) {
        return Some(false);
    }
    // Cheap decisive negatives first.
    match newton_genus(f) {
        Some(g) if g > 0 => return Some(false),
        _ => {}
    }
    match places_at_infinity(f) {
        Some(p) if p != 1 => return Some(false),
        _ => {}
    }
    let smooth = curve_is_smooth(f);
    if smooth == Some(false) {
        return Some(false);
    }
    let irred = absolutely_irreducible(f);
    if irred == Some(false) {
        return Some(false);
    }
    match (newton_genus(f), places_at_infinity(f), smooth, irred) {
        (Some(0), Some(1), Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// Smoothness of the affine curve `{f = 0}`: no common zero of
/// `(f, f_u, f_v)`. Exact and complete for degree <= 1 and for polynomials
/// linear in one variable; otherwise decided by the pair of resultants, which
/// is sound for "smooth" and inconclusive (None) when they share a root.
pub fn curve_is_smooth(f: &QPoly) -> Option<bool> {
    let sup = f.support_vars();
    match sup.len() {
        0 => return Some(true),
        1 => {
            // Union of parallel lines: smooth iff squarefree as univariate.
            let u = sup[0];
            let uni = univariate(f, u);
            return Some(uni.is_squarefree());
        }
        _ => {}
    }
    let (u, v) = (sup[0], sup[1]);
    if f.degree_in(v) == 1 {
        return Some(linear_in_var_smooth(f, u, v));
    }
    if f.degree_in(u) == 1 {
        return Some(linear_in_var_smooth(f, v, u));
    }
    // Shear u <- u + c v so the leading coefficient in v is a nonzero
    // constant; then the v-resultants capture every singular u-coordinate.
    let n = f
        .terms()
        .map(|(m, _)| m.exponent(u) + m.exponent(v))
        .max()
        .unwrap();
    let mut sheared = f.clone();
    for c in 0..=(n as i64 + 1) {
        let top_val: Rat = f
            .terms()
            .filter(|(m, _)| m.exponent(u) + m.exponent(v) == n)
            .map(|(m, coeff)| {
                let mut t = coeff.clone();
                for _ in 0..m.exponent(u) {
                    t *= crate::rat_int(c);
                }
                t
            })
            .sum();
        if !top_val.is_zero() {
            if c != 0 {
                let table = f.table().clone();
                let mut assign = BTreeMap::new();
                let u_poly = QPoly::var(table.clone(), u)
                    .add(&QPoly::var(table.clone(), v).scale(&crate::rat_int(c)));
                assign.insert(u, u_poly);
                sheared = f.substitute(&assign);
            }
            break;
        }
    }
    let fu = sheared.partial_derivative(u);
    let fv = sheared.partial_derivative(v);
    let r1 = bi_resultant(&sheared, &fv, u, v);
    let r2 = bi_resultant(&sheared, &fu, u, v);
    if r1.is_zero() || r2.is_zero() {
        return None;
    }
    let g = r1.gcd(&r2);
    if g.degree() == Some(0) {
        Some(true)
    } else {
        None
    }
}

/// Smoothness for f = A(u) v + B(u): singular points need A = B = 0 and a
/// solvable tangency condition; decided exactly with univariate gcds.
fn linear_in_var_smooth(f: &QPoly, u: usize, v: usize) -> bool {
    let a = univariate(&f.coefficient_of_power(v, 1), u);
    let b = univariate(&f.coefficient_of_power(v, 0), u);
    if a.is_zero() {
        return b.is_squarefree();
    }
    let g = a.gcd(&b);
    if g.degree().map_or(true, |d| d == 0) {
        return true;
    }
    // At a common root u0 of (A, B): f_v = A(u0) = 0 and f = 0 along the whole
    // v-line; f_u = A'(u0) v + B'(u0) has a zero in v unless A'(u0) = 0 and
    // B'(u0) != 0.
    let da = a.derivative();
    let db = b.derivative();
    // Roots of g where A' != 0: singular.
    let g1 = g.gcd(&da);
    if g1.degree() < g.degree() {
        return false;
    }
    // All roots of g have A' = 0; singular iff B' also vanishes at one.
    let g2 = g1.gcd(&db);
    g2.degree().map_or(true, |d| d == 0)
}

fn univariate(f: &QPoly, u: usize) -> UPoly {
    let d = f.degree_in(u) as usize;
    let mut coeffs = vec![Rat::zero(); d + 1];
    for (m, c) in f.terms() {
        coeffs[m.exponent(u) as usize] += c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

/// Absolute irreducibility over the algebraic closure. Decided by degree-1,
/// linear-in-a-variable with coprime coefficients, or integral
/// indecomposability of the Newton polytope; otherwise `None`.
pub fn absolutely_irreducible(f: &QPoly) -> Option<bool> {
    let sup = f.support_vars();
    if sup.is_empty() {
        return Some(false);
    }
    let total_deg: u32 = f
        .terms()
        .map(|(m, _)| sup.iter().map(|&i| m.exponent(i)).sum())
        .max()
        .unwrap();
    if total_deg == 1 {
        return Some(true);
    }
    if sup.len() == 2 {
        let (u, v) = (sup[0], sup[1]);
        for (a, b) in [(u, v), (v, u)] {
            if f.degree_in(b) == 1 {
                let ca = univariate(&f.coefficient_of_power(b, 1), a);
                let cb = univariate(&f.coefficient_of_power(b, 0), a);
                if !ca.is_zero() && ca.gcd(&cb).degree() == Some(0) {
                    return Some(true);
                }
            }
        }
    }
    // Gao's criterion: a polynomial not divisible by any variable whose
    // Newton polytope is integrally indecomposable is absolutely irreducible.
    let divisible_by_var = sup.iter().any(|&i| f.terms().all(|(m, _)| m.exponent(i) > 0));
    if !divisible_by_var {
        let pts = support_points(f);
        let hull = convex_hull(&pts);
        if polygon_indecomposable(&hull) {
            return Some(true);
        }
    }
    None
}

/// Integral indecomposability of a lattice polygon (or segment): no proper
/// nonempty sub-multiset of its primitive edge vectors sums to zero, checked
/// by exhausting subset sums of the (tiny) primitive edge multiset.
fn polygon_indecomposable(hull: &[(i64, i64)]) -> bool {
    match hull.len() {
        0 | 1 => false,
        2 => {
            let d = (hull[1].0 - hull[0].0, hull[1].1 - hull[0].1);
            gcd64(d.0.unsigned_abs(), d.1.unsigned_abs()) == 1
        }
        _ => {
            let mut prim: Vec<(i64, i64)> = Vec::new();
            for (a, b) in hull_edges(hull) {
                let d = (b.0 - a.0, b.1 - a.1);
                let g = gcd64(d.0.unsigned_abs(), d.1.unsigned_abs()) as i64;
                for _ in 0..g {
                    prim.push((d.0 / g, d.1 / g));
                }
            }
            if prim.len() > 16 {
                return false; // don't exhaust large edge sets
            }
            // A decomposition exists iff some proper nonempty subset sums to 0.
            let n = prim.len();
            for mask in 1u32..(1 << n) - 1 {
                let mut s = (0i64, 0i64);
                for (i, p) in prim.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        s.0 += p.0;
                        s.1 += p.1;
                    }
                }
                if s == (0, 0) {
                    return false;
                }
            }
            true
        }
    }
}

/// Verdict on containment of the affine 3-space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum A3Verdict {
    Yes { chart: usize },
    No { reason: String },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderReport {
    pub a2_cylinder: Option<CylinderWitness>,
    pub a3: A3Verdict,
    pub curve: Option<CurveReport>,
    /// Corollary flag: a G_a^3-structure exists iff A^3 is contained.
    pub ga3_structure: bool,
    /// Heisenberg-structure flag: true only for the smooth quadric family.
    pub heisenberg: bool,
}

/// Decision procedure for A^3 containment of a classified member.
pub fn contains_a3(ws: &WeightSystem, f: &QPoly) -> Result<CylinderReport, CylError> {
    let a2 = a2_cylinder(ws, f);
    let is_quadric = ws.weights == [1, 1, 1, 1, 1] && ws.degree == 2;

    // (1) Weight obstruction: no degree-one coordinate.
    if ws.weights[0] > 1 {
        let verdict = A3Verdict::No { reason: "a_0 > 1: boundary of an A^3 would need a degree-1 section".into() };
        return Ok(report(a2, verdict, None, is_quadric));
    }

    // (2) Graph chart.
    for j in 0..5 {
        if let Ok(a) = analyze_chart(ws, f, j) {
            if a.kind == ChartKind::GraphA3 {
                return Ok(report(a2, A3Verdict::Yes { chart: j }, None, is_quadric));
            }
        }
    }

    // (3) Boundary reduction: remove a degree-1 hyperplane section; the
    // residual must be st + f(u,v), and A^3 requires the curve {f = 0} to be
    // the affine line.
    let mut best_curve: Option<(QPoly, CurveReport)> = None;
    let mut all_false = true;
    let mut any_shape = false;
    for x in 0..5 {
        if ws.weights[x] != 1 {
            continue;
        }
        let affine = f.eval_var(x, &Rat::one());
        let Some((_, _, residual)) = split_st_shape(&affine, x) else { continue };
        any_shape = true;
        let verdict = is_affine_line(&residual);
        let rep = curve_report(&residual);
        match verdict {
            Some(true) => {
                // A line: the open subset is A^3 after all.
                return Ok(report(a2, A3Verdict::Yes { chart: x }, Some(rep), is_quadric));
            }
            Some(false) => {
                if best_curve.is_none() {
                    best_curve = Some((residual, rep));
                }
            }
            None => {
                all_false = false;
            }
        }
    }
    if any_shape && all_false {
        let (_, rep) = best_curve.expect("some curve analysed");
        let reason = match (rep.newton_interior_points, rep.places_at_infinity) {
            (Some(g), _) if g > 0 => format!("residual curve has genus {g}"),
            (_, Some(p)) if p != 1 => format!("residual curve has {p} places at infinity"),
            _ => "residual curve is not the affine line".to_string(),
        };
        return Ok(report(a2, A3Verdict::No { reason }, Some(rep), is_quadric));
    }
    Ok(report(a2, A3Verdict::Unknown, best_curve.map(|c| c.1), is_quadric))
}

fn report(
    a2: Option<CylinderWitness>,
    a3: A3Verdict,
    curve: Option<CurveReport>,
    is_quadric: bool,
) -> CylinderReport {
    let yes = matches!(a3, A3Verdict::Yes { .. });
    CylinderReport { a2_cylinder: a2, a3, curve, ga3_structure: yes, heisenberg: is_quadric }
}

/// Detect the shape `c*s*t + f(u, v)` in the affine polynomial: a mixed
/// monomial `s*t` with constant coefficient whose variables appear nowhere
/// else. Returns the pair and the residual polynomial.
fn split_st_shape(affine: &QPoly, dehomogenized: usize) -> Option<(usize, usize, QPoly)> {
    let vars: Vec<usize> = (0..5).filter(|&i| i != dehomogenized).collect();
    for si in 0..vars.len() {
        for ti in si + 1..vars.len() {
            let (s, t) = (vars[si], vars[ti]);
            // Coefficient of s*t must be a nonzero constant...
            let mut st_coeff = Rat::zero();
            let mut ok = true;
            let mut residual = QPoly::zero(affine.table().clone());
            for (m, c) in affine.terms() {
                let es = m.exponent(s);
                let et = m.exponent(t);
                if es == 1 && et == 1 && m.support().len() == 2 {
                    st_coeff = c.clone();
                } else if es == 0 && et == 0 {
                    residual.add_term(m.clone(), c.clone());
                } else {
                    ok = false;
                    break;
                }
            }
            if ok && !st_coeff.is_zero() && !residual.is_zero() {
                return Some((s, t, residual));
            }
        }
    }
    None
}

fn curve_report(f: &QPoly) -> CurveReport {
    CurveReport {
        poly: f.to_string(),
        newton_interior_points: newton_genus(f),
        places_at_infinity: places_at_infinity(f),
        smooth: curve_is_smooth(f),
        squarefree: is_squarefree_bi(f),
        absolutely_irreducible: absolutely_irreducible(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, VarTable};

    #[test]
    fn chart_analysis_examples() {
        // No.105: chart t is a graph.
        let ws = WeightSystem::new([1, 1, 1, 1, 2], 3);
        let t = ws.var_table();
        let f = parse_poly("t*w + x^3 + y^3 + z^3", &t).unwrap();
        let a = analyze_chart(&ws, &f, 3).unwrap();
        assert_eq!(a.kind, ChartKind::GraphA3);

        // No.127: chart w is the quotient 1/7(2,3,4).
        let ws = WeightSystem::new([2, 3, 4, 5, 7], 12);
        let t = ws.var_table();
        let f = parse_poly("t*w + y^4 + z^3 + x^4*z + x^6", &t).unwrap();
        let a = analyze_chart(&ws, &f, 4).unwrap();
        match a.kind {
            ChartKind::Quotient(q) => {
                assert_eq!(q, CyclicQuotient::new(7, [2, 3, 4]));
                assert!(q.unit_equivalent(&CyclicQuotient::new(7, [1, 5, 2])));
            }
            other => panic!("unexpected {other:?}"),
        }

        // No.114: chart w is 1/4(1,1,3).
        let ws = WeightSystem::new([1, 1, 2, 3, 4], 6);
        let t = ws.var_table();
        let f = parse_poly("z*w + t^2 + x^6 + y^6", &t).unwrap();
        let a = analyze_chart(&ws, &f, 4).unwrap();
        match a.kind {
            ChartKind::Quotient(q) => assert_eq!(q, CyclicQuotient::new(4, [1, 1, 3])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn a2_cylinder_witnesses() {
        // No.130: witness chart D_+(z), quotient 1/5(3,4,1).
        let ws = WeightSystem::new([3, 4, 5, 6, 7], 12);
        let t = ws.var_table();
        let f = parse_poly("z*w + t^2 + y^3 + x^4", &t).unwrap();
        let w = a2_cylinder(&ws, &f).unwrap();
        assert_eq!(w.chart, 2);
        assert_eq!(w.quotient.unwrap(), CyclicQuotient::new(5, [3, 4, 1]));

        // No.120: witness chart D_+(y), quotient 1/2(1,1,1).
        let ws = WeightSystem::new([1, 2, 3, 3, 4], 6);
        let t = ws.var_table();
        let f = parse_poly("y*w + z*t + x^6", &t).unwrap();
        let w = a2_cylinder(&ws, &f).unwrap();
        assert_eq!(w.chart, 1);
        assert_eq!(w.quotient.unwrap(), CyclicQuotient::new(2, [1, 1, 1]));
    }

    #[test]
    fn newton_genus_examples() {
        let t = VarTable::ambient([1, 1, 1, 1, 1]);
        // t^2 + squarefree sextic in y -> genus 2
        let f = parse_poly("t^2 + y^6 + 1", &t).unwrap();
        assert_eq!(newton_genus(&f), Some(2));
        // smooth plane quartic dehomogenized -> genus 3
        let f = parse_poly("y^4 + z^4 + 1", &t).unwrap();
        assert_eq!(newton_genus(&f), Some(3));
        // z^3 + f4(1,y) z + f6(1,y) generic -> genus 4
        let f = parse_poly("z^3 + (y^4 + y + 1)*z + y^6 + y^2 + 2", &t).unwrap();
        assert_eq!(newton_genus(&f), Some(4));
        // a linear polynomial -> 0
        let f = parse_poly("y + 1", &t).unwrap();
        assert_eq!(newton_genus(&f), Some(0));
    }

    #[test]
    fn places_examples() {
        let t = VarTable::ambient([1, 1, 1, 1, 1]);
        let f = parse_poly("z*t + 1", &t).unwrap();
        assert_eq!(places_at_infinity(&f), Some(2));
        let f = parse_poly("y", &t).unwrap();
        assert_eq!(places_at_infinity(&f), Some(1));
        // u + v^2: repeated direction refined through the closure chart.
        let f = parse_poly("y + z^2", &t).unwrap();
        assert_eq!(places_at_infinity(&f), Some(1));
    }

    #[test]
    fn affine_line_examples() {
        let t = VarTable::ambient([1, 1, 1, 1, 1]);
        assert_eq!(is_affine_line(&parse_poly("y", &t).unwrap()), Some(true));
        assert_eq!(is_affine_line(&parse_poly("z*t + 1", &t).unwrap()), Some(false));
        assert_eq!(is_affine_line(&parse_poly("t^2 + y^6 + 1", &t).unwrap()), Some(false));
        // internal consistency: a line has genus 0 and one place
        let f = parse_poly("y + z^2", &t).unwrap();
        if is_affine_line(&f) == Some(true) {
            assert_eq!(newton_genus(&f), Some(0));
            assert_eq!(places_at_infinity(&f), Some(1));
        }
    }

    #[test]
    fn contains_a3_examples() {
        // No.104 -> YES
        let ws = WeightSystem::new([1, 1, 1, 1, 1], 2);
        let t = ws.var_table();
        let f = parse_poly("x*y + z^2 + t^2 + w^2", &t).unwrap();
        let r = contains_a3(&ws, &f).unwrap();
        assert!(matches!(r.a3, A3Verdict::Yes { .. }));
        assert!(r.heisenberg);

        // No.123 -> YES with witness D_+(x)
        let ws = WeightSystem::new([1, 2, 3, 3, 5], 6);
        let t = ws.var_table();
        let f = parse_poly("x*w + z*t + y^3", &t).unwrap();
        let r = contains_a3(&ws, &f).unwrap();
        assert_eq!(r.a3, A3Verdict::Yes { chart: 0 });

        // No.112 -> NO with genus-4 obstruction
        let ws = WeightSystem::new([1, 1, 2, 3, 3], 6);
        let t = ws.var_table();
        let f = parse_poly("t*w + z^3 + x^6 + y^6", &t).unwrap();
        let r = contains_a3(&ws, &f).unwrap();
        match &r.a3 {
            A3Verdict::No { reason } => assert!(reason.contains("genus 4"), "{reason}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(!r.ga3_structure);

        // No.127 -> NO by a_0 = 2
        let ws = WeightSystem::new([2, 3, 4, 5, 7], 12);
        let t = ws.var_table();
        let f = parse_poly("t*w + y^4 + z^3 + x^4*z + x^6", &t).unwrap();
        let r = contains_a3(&ws, &f).unwrap();
        match &r.a3 {
            A3Verdict::No { reason } => assert!(reason.contains("a_0 > 1")),
            other => panic!("unexpected {other:?}"),
        }

        // No.120 -> NO with two places at infinity
        let ws = WeightSystem::new([1, 2, 3, 3, 4], 6);
        let t = ws.var_table();
        let f = parse_poly("y*w + z*t + x^6", &t).unwrap();
        let r = contains_a3(&ws, &f).unwrap();
        match &r.a3 {
            A3Verdict::No { reason } => assert!(reason.contains("places"), "{reason}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
