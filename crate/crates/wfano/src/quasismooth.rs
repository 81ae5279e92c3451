//! Quasi-smoothness: combinatorial conditions for the general member of a
//! family, and checks for a specific polynomial.
//!
//! The member check is exact on every coordinate point and coordinate line
//! (where the interesting failures live) and probabilistic on the higher
//! strata: random points of `X` inside each stratum are produced over a large
//! prime field and the Jacobian is required not to vanish there. A passing
//! probabilistic run is reported with the trial count.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{binary_gcd, monomials_of_degree, QPoly};
use crate::wps::WeightSystem;

/// Verdict for (quasi-)smoothness queries.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum QsStatus {
    QuasiSmooth,
    NotQuasiSmooth,
    LinearCone,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QsVerdict {
    pub status: QsStatus,
    /// Stratum or point on which all partials vanish, for negative verdicts.
    pub witness: Option<String>,
    /// Number of probabilistic trials backing a positive verdict (0 = fully exact).
    pub probabilistic_trials: u32,
}

impl QsVerdict {
    fn pass(trials: u32) -> Self {
        QsVerdict { status: QsStatus::QuasiSmooth, witness: None, probabilistic_trials: trials }
    }

    fn fail(witness: String) -> Self {
        QsVerdict { status: QsStatus::NotQuasiSmooth, witness: Some(witness), probabilistic_trials: 0 }
    }

    pub fn is_quasi_smooth(&self) -> bool {
        self.status == QsStatus::QuasiSmooth
    }
}

/// Monomial-existence test: is `d` a nonnegative integer combination of `ws`?
fn representable(ws: &[u32], d: u64) -> bool {
    if d == 0 {
        return true;
    }
    match ws.split_first() {
        None => false,
        Some((&a, rest)) => {
            let mut k = 0u64;
            while k * a as u64 <= d {
                if representable(rest, d - k * a as u64) {
                    return true;
                }
                k += 1;
            }
            false
        }
    }
}

/// Quasi-smoothness of the general member, by the standard monomial-existence
/// criteria: for every nonempty coordinate subset `I`, either some monomial of
/// degree `d` is supported in `I`, or there are `|I|` monomials
/// `(I-monomial) * x_e` with distinct `e` outside `I`.
pub fn general_member_quasismooth(ws: &WeightSystem) -> QsVerdict {
    if ws.is_linear_cone() {
        return QsVerdict { status: QsStatus::LinearCone, witness: None, probabilistic_trials: 0 };
    }
    let a = ws.weights;
    let d = ws.degree as u64;
    for mask in 1u32..32 {
        let subset: Vec<usize> = (0..5).filter(|&i| mask & (1 << i) != 0).collect();
        let ws_i: Vec<u32> = subset.iter().map(|&i| a[i]).collect();
        if representable(&ws_i, d) {
            continue;
        }
        let outside: Vec<usize> = (0..5).filter(|&i| !subset.contains(&i)).collect();
        let good: Vec<usize> = outside
            .iter()
            .copied()
            .filter(|&e| d > a[e] as u64 && representable(&ws_i, d - a[e] as u64))
            .collect();
        if good.len() < subset.len() {
            let names = ["x", "y", "z", "t", "w"];
            let desc: Vec<&str> = subset.iter().map(|&i| names[i]).collect();
            return QsVerdict::fail(format!("stratum {{{}}}", desc.join(",")));
        }
    }
    QsVerdict::pass(0)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QsError {
    #[error("polynomial is not quasi-homogeneous of degree {expected}")]
    WrongDegree { expected: u32 },
    #[error("no usable prime: coefficient denominators collide with every candidate")]
    PrimeExhausted,
}

/// Exact + probabilistic quasi-smoothness of a specific member.
pub fn member_quasismooth(ws: &WeightSystem, f: &QPoly, seed: u64) -> Result<QsVerdict, QsError> {
    if !f.is_quasi_homogeneous(ws.degree as u64) || f.is_zero() {
        return Err(QsError::WrongDegree { expected: ws.degree });
    }
    if ws.is_linear_cone() {
        return Ok(QsVerdict { status: QsStatus::LinearCone, witness: None, probabilistic_trials: 0 });
    }
    let names = ["x", "y", "z", "t", "w"];

    // Coordinate points, exact: P_i is a smooth point of the cone iff F has a
    // pure power x_i^k (point off X) or a monomial x_i^k x_j (some partial
    // nonzero at P_i).
    for i in 0..5 {
        let has_pure = f.terms().any(|(m, _)| m.support() == vec![i]);
        if has_pure {
            continue;
        }
        // Some partial is nonzero at P_i iff F has a monomial x_i^k * x_j.
        let has_elim = f.terms().any(|(m, _)| {
            let sup = m.support();
            match sup.len() {
                1 => sup[0] != i && m.exponent(sup[0]) == 1,
                2 => sup.contains(&i) && sup.iter().any(|&s| s != i && m.exponent(s) == 1),
                _ => false,
            }
        });
        if !has_elim {
            return Ok(QsVerdict::fail(format!("point p_{}", names[i])));
        }
    }

    // Coordinate lines, exact: on the open stratum {x_i x_j != 0} the cone is
    // singular iff the restriction g and all restricted partials share a
    // non-coordinate zero; binary gcd decides this.
    for i in 0..5 {
        for j in i + 1..5 {
            let line = [i, j];
            let g = f.restrict_to_vars(&line);
            let mut common = if g.is_zero() { None } else { Some(g.clone()) };
            let mut shrink = |p: QPoly| {
                if p.is_zero() {
                    return;
                }
                common = match common.take() {
                    None => Some(p),
                    Some(c) => Some(binary_gcd(&c, &p).expect("nonzero inputs")),
                };
            };
            for v in 0..5 {
                shrink(f.partial_derivative(v).restrict_to_vars(&line));
            }
            match common {
                None => {
                    // F and all partials vanish identically on the line.
                    return Ok(QsVerdict::fail(format!("line {{{},{}}}", names[i], names[j])));
                }
                Some(c) => {
                    // Roots of the gcd away from the coordinate points witness
                    // singular points of the cone.
                    let interior = c.terms().count() > 1;
                    if interior {
                        return Ok(QsVerdict::fail(format!(
                            "line {{{},{}}} (common factor {})",
                            names[i], names[j], c
                        )));
                    }
                }
            }
        }
    }

    // Higher strata: probabilistic Jacobian sampling over large prime fields.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials_total = 0u32;
    const PRIMES: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_579];
    for mask in 1u32..32 {
        let subset: Vec<usize> = (0..5).filter(|&i| mask & (1 << i) != 0).collect();
        if subset.len() < 3 {
            continue;
        }
        // A singular sample must reproduce over a second, independent prime
        // before counting as a failure; a lone find is treated as a
        // characteristic artifact.
        let mut passes = 0u32;
        let mut failures = 0u32;
        for &p in &PRIMES {
            match sample_stratum(f, &subset, p, &mut rng, 64) {
                Ok(Some(_)) => {
                    failures += 1;
                    if failures >= 2 {
                        let desc: Vec<&str> = subset.iter().map(|&i| names[i]).collect();
                        return Ok(QsVerdict::fail(format!("stratum {{{}}}", desc.join(","))));
                    }
                }
                Ok(None) => {
                    passes += 1;
                    trials_total += 64;
                    break;
                }
                Err(_) => continue, // characteristic collision: next prime
            }
        }
        if passes == 0 && failures == 0 {
            return Err(QsError::PrimeExhausted);
        }
    }
    Ok(QsVerdict::pass(trials_total))
}

/// Search for a singular point of the cone on the open stratum over F_p.
/// Returns Ok(Some(point)) if found, Ok(None) if all trials pass.
fn sample_stratum(
    f: &QPoly,
    subset: &[usize],
    p: u64,
    rng: &mut ChaCha8Rng,
    trials: u32,
) -> Result<Option<Vec<u64>>, ()> {
    let fp = FpPoly::reduce(f, p)?;
    let partials: Vec<FpPoly> = (0..5).map(|v| FpPoly::reduce(&f.partial_derivative(v), p)).collect::<Result<_, _>>()?;
    // Solve along a random coordinate of the stratum.
    for _ in 0..trials {
        let solve_var = subset[rng.gen_range(0..subset.len())];
        let mut point = vec![0u64; 5];
        for &i in subset {
            if i != solve_var {
                point[i] = rng.gen_range(1..p);
            }
        }
        // Univariate restriction in solve_var.
        let uni = trim(fp.restrict_univariate(&point, solve_var));
        if uni.is_empty() {
            // The whole sampled line lies in X; test the Jacobian at a random
            // interior point of it.
            let mut q = point.clone();
            q[solve_var] = rng.gen_range(1..p);
            if partials.iter().all(|d| d.eval(&q) == 0) {
                return Ok(Some(q));
            }
            continue;
        }
        for root in fp_roots(&uni, p) {
            if root == 0 {
                continue; // off the open stratum
            }
            let mut q = point.clone();
            q[solve_var] = root;
            let all_zero = partials.iter().all(|d| d.eval(&q) == 0);
            if all_zero {
                return Ok(Some(q));
            }
        }
    }
    Ok(None)
}

/// Sparse polynomial over F_p.
struct FpPoly {
    p: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl FpPoly {
    fn reduce(f: &QPoly, p: u64) -> Result<Self, ()> {
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            let num = bigint_mod(c.numer(), p);
            let den = bigint_mod(c.denom(), p);
            if den == 0 {
                return Err(());
            }
            let coeff = mulmod(num, inv_mod(den, p), p);
            if coeff != 0 {
                terms.push((m.0.clone(), coeff));
            }
        }
        Ok(FpPoly { p, terms })
    }

    fn eval(&self, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = mulmod(t, powmod(point[i] % self.p, exp as u64, self.p), self.p);
                }
            }
            acc = (acc + t) % self.p;
        }
        acc
    }

    /// Fix all variables except `var` to the point's values; return dense
    /// univariate coefficients (ascending).
    fn restrict_univariate(&self, point: &[u64], var: usize) -> Vec<u64> {
        let deg = self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0) as usize;
        let mut out = vec![0u64; deg + 1];
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &exp) in e.iter().enumerate() {
                if i != var && exp > 0 {
                    t = mulmod(t, powmod(point[i] % self.p, exp as u64, self.p), self.p);
                }
            }
            let k = e[var] as usize;
            out[k] = (out[k] + t) % self.p;
        }
        out
    }
}

fn bigint_mod(x: &crate::Int, p: u64) -> u64 {
    use num_traits::Signed;
    let m = crate::Int::from(p);
    let r = x % &m;
    let r = if r.is_negative() { r + &m } else { r };
    r.to_string().parse().unwrap()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Roots in F_p of a dense univariate polynomial (ascending coefficients),
/// via gcd with x^p - x and equal-degree splitting down to linear factors.
fn fp_roots(coeffs: &[u64], p: u64) -> Vec<u64> {
    let f = trim(coeffs.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    // g = gcd(f, x^p - x) isolates the distinct roots in F_p.
    let xp = poly_powmod_x(p, &f, p);
    let mut xp_minus_x = xp;
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = (xp_minus_x[1] + p - 1) % p;
    let g = poly_gcd(&f, &trim(xp_minus_x), p);
    let mut roots = Vec::new();
    split_roots(&g, p, 1, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb_inv = inv_mod(b[db], p);
    while r.len() > db {
        let lr = *r.last().unwrap();
        if lr != 0 {
            let shift = r.len() - 1 - db;
            let q = mulmod(lr, lb_inv, p);
            for i in 0..=db {
                let sub = mulmod(q, b[i], p);
                r[i + shift] = (r[i + shift] + p - sub) % p;
            }
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lc) = x.last() {
        let inv = inv_mod(lc, p);
        for c in &mut x {
            *c = mulmod(*c, inv, p);
        }
    }
    x
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&trim(prod), m, p)
}

/// x^e mod (m, p)
fn poly_powmod_x(e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(&[0, 1], m, p);
    let mut acc = poly_rem(&[1], m, p);
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

/// Equal-degree splitting for a product of distinct linear factors.
fn split_roots(g: &[u64], p: u64, salt: u64, roots: &mut Vec<u64>) {
    let g = trim(g.to_vec());
    match g.len() {
        0 | 1 => {}
        2 => {
            // c0 + c1 x = 0
            let root = mulmod(p - g[0] % p, inv_mod(g[1], p), p);
            roots.push(root % p);
        }
        _ => {
            // (x + s)^((p-1)/2) - 1 splits the roots randomly.
            let mut s = salt;
            loop {
                let shifted = [s % p, 1];
                let mut h = poly_powmod_vec(&shifted, (p - 1) / 2, &g, p);
                if h.is_empty() {
                    h = vec![0];
                }
                if h.is_empty() {
                    h.push(0);
                }
                h[0] = (h[0] + p - 1) % p;
                let d = poly_gcd(&g, &trim(h.clone()), p);
                if d.len() > 1 && d.len() < g.len() {
                    split_roots(&d, p, s + 1, roots);
                    let q = poly_div_exact(&g, &d, p);
                    split_roots(&q, p, s + 1, roots);
                    return;
                }
                s += 1;
                if s > salt + 64 {
                    return; // give up quietly; missing roots only weakens sampling
                }
            }
        }
    }
}

fn poly_powmod_vec(b: &[u64], e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(b, m, p);
    let mut acc = poly_rem(&[1], m, p);
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let lr = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lr != 0 {
            let f = mulmod(lr, lb_inv, p);
            q[shift] = f;
            for i in 0..=db {
                let sub = mulmod(f, b[i], p);
                r[i + shift] = (r[i + shift] + p - sub) % p;
            }
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    trim(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;

    #[test]
    fn general_member_examples() {
        assert!(general_member_quasismooth(&WeightSystem::new([1, 1, 2, 3, 3], 6)).is_quasi_smooth());
        assert_eq!(
            general_member_quasismooth(&WeightSystem::new([1, 1, 1, 1, 4], 4)).status,
            QsStatus::LinearCone
        );
        assert!(general_member_quasismooth(&WeightSystem::new([1, 1, 2, 3, 5], 6)).is_quasi_smooth());
    }

    #[test]
    fn member_112_missing_z3_fails_at_pz() {
        let ws = WeightSystem::new([1, 1, 2, 3, 3], 6);
        let t = ws.var_table();
        let f = parse_poly("t*w + x^6 + y^6", &t).unwrap();
        let v = member_quasismooth(&ws, &f, 0).unwrap();
        assert_eq!(v.status, QsStatus::NotQuasiSmooth);
        assert_eq!(v.witness.as_deref(), Some("point p_z"));
    }

    #[test]
    fn member_113_passes() {
        let ws = WeightSystem::new([1, 1, 2, 2, 3], 4);
        let t = ws.var_table();
        let f = parse_poly("y*w + t^2 + z^2 + x^4", &t).unwrap();
        assert!(member_quasismooth(&ws, &f, 0).unwrap().is_quasi_smooth());
    }

    #[test]
    fn non_reduced_member_fails() {
        let ws = WeightSystem::new([1, 1, 1, 1, 1], 2);
        let t = ws.var_table();
        let f = parse_poly("x^2", &t).unwrap();
        let v = member_quasismooth(&ws, &f, 0).unwrap();
        assert_eq!(v.status, QsStatus::NotQuasiSmooth);
    }

    #[test]
    fn member_121_collision_fails() {
        // y(y + x^2)^2 (y + 3x^2)-type degeneration: a_1 = a_2 collision.
        let ws = WeightSystem::new([1, 2, 3, 4, 5], 8);
        let t = ws.var_table();
        // z w + t^2 + y (y + x^2)^2 (y + 3 x^2)
        let f = parse_poly(
            "z*w + t^2 + y*(y + x^2)*(y + x^2)*(y + 3*x^2)",
            &t,
        )
        .unwrap();
        let v = member_quasismooth(&ws, &f, 0).unwrap();
        assert_eq!(v.status, QsStatus::NotQuasiSmooth);
        assert!(v.witness.unwrap().contains("line {x,y}"));
    }

    #[test]
    fn fp_roots_finds_small_roots() {
        let p = 2_147_483_647u64;
        // (x - 2)(x - 5)(x - 7) = x^3 - 14x^2 + 59x - 70
        let coeffs = vec![p - 70, 59, p - 14, 1];
        let mut r = fp_roots(&coeffs, p);
        r.sort_unstable();
        assert_eq!(r, vec![2, 5, 7]);
    }
}
