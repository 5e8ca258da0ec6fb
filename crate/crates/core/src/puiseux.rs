//! Rational Newton–Puiseux expansion of plane curve germs.
//!
//! Branches are produced as power series `(x(t), y(t))` modulo `t^N`. Only
//! germs whose Newton polygon roots stay rational at every step are handled;
//! anything else is reported as unsupported.

use logres_engine::{Monomial, Poly, Q};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::branch::compose_truncated;
use crate::error::{CoreError, Result};

const MAX_DEPTH: usize = 16;

/// A branch `(x(t), y(t))`; `truncation == None` means the series are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneBranch {
    pub x: Poly,
    pub y: Poly,
    pub truncation: Option<u32>,
}

/// All branches of the reduced plane curve germ `f(x, y) = 0`, each known
/// at least modulo `t^n`.
pub fn plane_branches(f: &Poly, n: u32) -> Result<Vec<PlaneBranch>> {
    assert_eq!(f.nvars(), 2);
    if f.is_zero() || !f.constant_term().is_zero() {
        return Err(CoreError::InvalidGerm("curve must pass through the origin".into()));
    }
    let mut g = f.clone();
    let mut out = Vec::new();
    let x = Poly::var(2, 0);
    if let Some(q) = g.exact_div(&x) {
        if q.exact_div(&x).is_some() {
            return Err(CoreError::InvalidGerm("not squarefree".into()));
        }
        out.push(PlaneBranch { x: Poly::zero(1), y: Poly::var(1, 0), truncation: None });
        g = q;
    }
    let mut raw = Vec::new();
    solve(&g, &Poly::var(2, 0), &Poly::var(2, 1), n, 0, &mut raw)?;
    out.extend(raw.into_iter().map(|b| primitive(b, n)));
    Ok(out)
}

/// Branches of `g(r, w) = 0` with `r, w → 0`, where the ambient coordinates
/// are `P(r, w)` and `Q(r, w)`. Assumes `r` does not divide `g`.
fn solve(g: &Poly, p: &Poly, q: &Poly, n: u32, depth: usize, out: &mut Vec<PlaneBranch>) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(CoreError::Unsupported("Newton–Puiseux recursion too deep".into()));
    }
    let mut g = g.clone();
    let w = Poly::var(2, 1);
    let at_w0 = |s: &Poly| s.compose(&[Poly::var(1, 0), Poly::zero(1)]);
    if let Some(quo) = g.exact_div(&w) {
        if quo.exact_div(&w).is_some() {
            return Err(CoreError::InvalidGerm("not squarefree".into()));
        }
        out.push(PlaneBranch { x: at_w0(p), y: at_w0(q), truncation: None });
        g = quo;
    }
    if !g.constant_term().is_zero() {
        return Ok(());
    }
    let j0 = g.terms().filter(|(m, _)| m.exp(0) == 0).map(|(m, _)| m.exp(1)).min().expect("r divides g");
    if j0 == 1 {
        // Smooth in w: solve w = φ(r) by Newton iteration on series.
        let r = Poly::var(1, 0);
        let gw = g.derivative(1);
        let mut phi = Poly::zero(1);
        for _ in 0..=n.ilog2() + 2 {
            let vals = [r.clone(), phi.clone()];
            let val = compose_truncated(&g, &vals, 1, n);
            if val.is_zero() {
                break;
            }
            let inv = series_inverse(&compose_truncated(&gw, &vals, 1, n), n);
            phi = &phi - &compose_truncated(&(&val * &inv), std::slice::from_ref(&r), 1, n);
        }
        let vals = [r, phi];
        out.push(PlaneBranch {
            x: compose_truncated(p, &vals, 1, n),
            y: compose_truncated(q, &vals, 1, n),
            truncation: Some(n),
        });
        return Ok(());
    }
    for edge in newton_edges(&g) {
        let psi = edge.polynomial(&g);
        let roots = rational_roots(&psi)?;
        let found: usize = roots.iter().map(|(_, m)| m).sum();
        if found + 1 < psi.len() {
            return Err(CoreError::Unsupported("Newton polygon has irrational roots".into()));
        }
        let (p1, p2) = bezout(edge.ww, edge.ws);
        for (u, _) in roots {
            let alpha = qpow(&u, p1);
            let beta = qpow(&u, p2);
            let r = Poly::var(2, 0);
            let s_val = r.pow(edge.ws as u32).scale(&alpha);
            let w_val = &r.pow(edge.ww as u32) * &(&Poly::var(2, 1) + &Poly::constant(2, beta));
            let vals = [s_val, w_val];
            let shift = Poly::term(Q::one(), Monomial(vec![edge.height as u32, 0]));
            let g1 = g.compose(&vals).exact_div(&shift).expect("edge height divides the substitution");
            solve(&g1, &p.compose(&vals), &q.compose(&vals), n, depth + 1, out)?;
        }
    }
    Ok(())
}

/// Inverse of a unit power series modulo `t^n`.
fn series_inverse(a: &Poly, n: u32) -> Poly {
    let a0 = a.constant_term();
    assert!(!a0.is_zero(), "series is not a unit");
    let coeff = |p: &Poly, k: u32| p.coeff(&Monomial(vec![k]));
    let mut b: Vec<Q> = vec![Q::one() / &a0];
    for k in 1..n {
        let mut acc = Q::zero();
        for j in 1..=k {
            let aj = coeff(a, j);
            if !aj.is_zero() {
                acc += aj * &b[(k - j) as usize];
            }
        }
        b.push(-acc / &a0);
    }
    Poly::from_terms(1, b.into_iter().enumerate().map(|(k, c)| (Monomial(vec![k as u32]), c)))
}

/// An edge of the Newton polygon with primitive normal `(ws, ww)`, running
/// from `(i, j)` downwards in steps of `(ww, -ws)`.
struct Edge {
    start: (i64, i64),
    steps: i64,
    ws: i64,
    ww: i64,
    height: i64,
}

impl Edge {
    /// Edge polynomial `ψ(u) = Σ a_k u^k`, lowest coefficient first.
    fn polynomial(&self, g: &Poly) -> Vec<Q> {
        (0..=self.steps)
            .map(|k| {
                let i = self.start.0 + k * self.ww;
                let j = self.start.1 - k * self.ws;
                g.coeff(&Monomial(vec![i as u32, j as u32]))
            })
            .collect()
    }
}

fn newton_edges(g: &Poly) -> Vec<Edge> {
    let pts: Vec<(i64, i64)> = g.terms().map(|(m, _)| (m.exp(0) as i64, m.exp(1) as i64)).collect();
    let j0 = pts.iter().filter(|p| p.0 == 0).map(|p| p.1).min().expect("r divides g");
    let mut cur = (0, j0);
    let mut edges = Vec::new();
    while cur.1 > 0 {
        // Next vertex: smallest run per drop, farthest on ties.
        let mut best: Option<(i64, i64)> = None;
        for &pt in pts.iter().filter(|pt| pt.1 < cur.1) {
            best = match best {
                None => Some(pt),
                Some(b) => {
                    let lhs = (pt.0 - cur.0) * (cur.1 - b.1);
                    let rhs = (b.0 - cur.0) * (cur.1 - pt.1);
                    if lhs < rhs || (lhs == rhs && pt.1 < b.1) {
                        Some(pt)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let next = best.expect("w does not divide g");
        let (di, dj) = (next.0 - cur.0, cur.1 - next.1);
        let d = num_integer::gcd(di, dj);
        let (ws, ww) = (dj / d, di / d);
        edges.push(Edge { start: cur, steps: d, ws, ww, height: ws * cur.0 + ww * cur.1 });
        cur = next;
    }
    edges
}

/// `(a, b)` with `a·x − b·y = 1` for coprime positive `x, y`.
fn bezout(x: i64, y: i64) -> (i64, i64) {
    let e = num_integer::Integer::extended_gcd(&x, &y);
    debug_assert_eq!(e.gcd, 1);
    (e.x, -e.y)
}

fn qpow(u: &Q, e: i64) -> Q {
    let base = if e < 0 { Q::one() / u } else { u.clone() };
    (0..e.unsigned_abs()).fold(Q::one(), |acc, _| acc * &base)
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out
}

fn eval(c: &[Q], u: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, a| acc * u + a)
}

/// Divide by `(u − root)`, assuming it is a root.
fn deflate(c: &[Q], root: &Q) -> Vec<Q> {
    let mut out = vec![Q::zero(); c.len() - 1];
    let mut carry = Q::zero();
    for k in (1..c.len()).rev() {
        carry = &carry * root + &c[k];
        out[k - 1] = carry.clone();
    }
    out
}

/// Nonzero rational roots with multiplicities.
pub fn rational_roots(coeffs: &[Q]) -> Result<Vec<(Q, usize)>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    let lcm = c.iter().fold(num_bigint::BigInt::one(), |acc, a| num_integer::lcm(acc, a.denom().clone()));
    let ints: Vec<num_bigint::BigInt> = c.iter().map(|a| (a * Q::from_integer(lcm.clone())).to_integer()).collect();
    let (lo, hi) = match (ints.iter().find(|a| !a.is_zero()), ints.last()) {
        (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
        _ => return Ok(Vec::new()),
    };
    let too_big = || CoreError::Unsupported("edge coefficients too large for rational root search".into());
    let lo = lo.abs().to_i64().filter(|v| *v < 1 << 40).ok_or_else(too_big)?;
    let hi = hi.abs().to_i64().filter(|v| *v < 1 << 40).ok_or_else(too_big)?;
    let mut roots = Vec::new();
    for p in divisors(lo) {
        for q in divisors(hi) {
            for sign in [1, -1] {
                let u = Q::new((sign * p).into(), q.into());
                if roots.iter().any(|(r, _)| *r == u) {
                    continue;
                }
                let mut mult = 0;
                while c.len() > 1 && eval(&c, &u).is_zero() {
                    c = deflate(&c, &u);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((u, mult));
                }
            }
        }
    }
    Ok(roots)
}

/// Remove a common exponent factor from a branch parametrization.
fn primitive(b: PlaneBranch, n: u32) -> PlaneBranch {
    let mut d = 0;
    for s in [&b.x, &b.y] {
        for (m, _) in s.terms() {
            d = num_integer::gcd(d, m.exp(0));
        }
    }
    if d <= 1 {
        return b;
    }
    let shrink = |s: &Poly| Poly::from_terms(1, s.terms().map(|(m, c)| (Monomial(vec![m.exp(0) / d]), c.clone())));
    PlaneBranch {
        x: shrink(&b.x),
        y: shrink(&b.y),
        truncation: b.truncation.map(|_| n.div_ceil(d)),
    }
}

/// Whether `f(x(t), y(t))` vanishes to the known precision.
pub fn is_on_curve(f: &Poly, b: &PlaneBranch) -> bool {
    let vals = [b.x.clone(), b.y.clone()];
    match b.truncation {
        Some(n) => compose_truncated(f, &vals, 1, n).is_zero(),
        None => f.compose(&vals).is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use logres_engine::parse;

    fn curve(s: &str) -> Poly {
        parse(s, &["x", "y"]).unwrap()
    }

    fn t(s: &str) -> Poly {
        parse(s, &["t"]).unwrap()
    }

    #[test]
    fn cusp_has_one_branch() {
        let f = curve("x^2 - y^3");
        let b = plane_branches(&f, 20).unwrap();
        assert_eq!(b.len(), 1);
        assert!(is_on_curve(&f, &b[0]));
        assert_eq!(b[0].x.ord(), Some(3));
        assert_eq!(b[0].y.ord(), Some(2));
    }

    #[test]
    fn node_gives_the_axes() {
        let f = curve("x*y");
        let b = plane_branches(&f, 10).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().any(|b| b.x.is_zero() && b.y == t("t")));
        assert!(b.iter().any(|b| b.y.is_zero() && b.x == t("t")));
    }

    #[test]
    fn lines_and_tangencies() {
        for (f, count) in [("x*y*(x - y)", 3), ("x*(x + y^2)", 2), ("x*(x + y^3)", 2), ("x^2 - y^2", 2), ("y - x^2", 1)] {
            let f = curve(f);
            let b = plane_branches(&f, 16).unwrap();
            assert_eq!(b.len(), count, "{f:?}");
            assert!(b.iter().all(|b| is_on_curve(&f, b)));
        }
    }

    #[test]
    fn non_quasihomogeneous_branch() {
        let f = curve("x^4 + y^5 + x*y^4");
        let b = plane_branches(&f, 30).unwrap();
        assert_eq!(b.len(), 1);
        assert!(is_on_curve(&f, &b[0]));
        assert_eq!(b[0].x.ord(), Some(5));
        assert_eq!(b[0].y.ord(), Some(4));
    }

    #[test]
    fn irrational_roots_are_unsupported() {
        assert!(matches!(plane_branches(&curve("x^2 - 2*y^2"), 10), Err(CoreError::Unsupported(_))));
        assert!(matches!(plane_branches(&curve("x^2 + y^2"), 10), Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn rational_root_search() {
        let r = rational_roots(&[Q::from_integer((-2).into()), Q::from_integer(3.into()), Q::from_integer((-1).into())])
            .unwrap();
        assert_eq!(r.len(), 2);
        let r = rational_roots(&[Q::one(), Q::from_integer(2.into()), Q::one()]).unwrap();
        assert_eq!(r, vec![(-Q::one(), 2)]);
    }
}
