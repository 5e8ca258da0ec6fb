//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences, and the squarefree test built on it.

use num_traits::One;

use crate::order::MonomialOrder;
use crate::poly::{Monomial, Poly, Q};

/// Coefficients of `p` viewed as a polynomial in variable `v`, indexed by the
/// power of `v`.
fn coefficients_in(p: &Poly, v: usize) -> Vec<Poly> {
    let n = p.nvars();
    let mut out = vec![Poly::zero(n); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let k = m.exp(v) as usize;
        let mut e = m.clone();
        e.0[v] = 0;
        out[k].add_term(e, c.clone());
    }
    out
}

fn main_variable(f: &Poly, g: &Poly) -> Option<usize> {
    (0..f.nvars()).find(|&i| f.involves(i) || g.involves(i))
}

fn normalize(p: Poly) -> Poly {
    if p.is_zero() {
        return p;
    }
    p.monic(&MonomialOrder::Lex)
}

/// Gcd of the coefficients of `p` with respect to `v`.
fn content(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in coefficients_in(p, v) {
        if !c.is_zero() {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one(p.nvars());
            }
        }
    }
    g
}

/// Pseudo-remainder of `f` by `g` with respect to variable `v`.
fn prem(f: &Poly, g: &Poly, v: usize) -> Poly {
    let n = f.nvars();
    let dg = g.degree_in(v);
    let gc = coefficients_in(g, v);
    let lg = gc[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = coefficients_in(&r, v)[dr as usize].clone();
        let mut shift = Monomial::one(n);
        shift.0[v] = dr - dg;
        let sub = &(&lr * g) * &Poly::term(Q::one(), shift);
        r = &(&lg * &r) - &sub;
    }
    r
}

/// Greatest common divisor, normalized to leading coefficient one under lex.
/// `gcd(0, 0) = 0`.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return normalize(g.clone());
    }
    if g.is_zero() {
        return normalize(f.clone());
    }
    if f.is_constant() || g.is_constant() {
        return Poly::one(f.nvars());
    }
    let v = main_variable(f, g).expect("non-constant");
    if !f.involves(v) {
        return gcd(f, &content(g, v));
    }
    if !g.involves(v) {
        return gcd(&content(f, v), g);
    }
    let cf = content(f, v);
    let cg = content(g, v);
    let c = gcd(&cf, &cg);
    let mut a = f.exact_div(&cf).expect("content divides");
    let mut b = g.exact_div(&cg).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return normalize(&c * &b);
        }
        if r.degree_in(v) == 0 {
            return normalize(c);
        }
        let rc = content(&r, v);
        a = b;
        b = r.exact_div(&rc).expect("content divides").primitive_integer();
    }
}

/// True iff `h` has no repeated irreducible factor over the rationals.
/// In characteristic zero this is `gcd(h, dh/dx_1, ..., dh/dx_n) = 1`.
pub fn is_squarefree(h: &Poly) -> bool {
    assert!(!h.is_zero(), "squarefree test of the zero polynomial");
    let mut g = h.clone();
    for d in h.gradient() {
        g = gcd(&g, &d);
        if g.is_constant() {
            return true;
        }
    }
    g.is_constant()
}

/// Squarefree part of `h`: `h / gcd(h, grad h)`.
pub fn squarefree_part(h: &Poly) -> Poly {
    if h.is_zero() || h.is_constant() {
        return h.clone();
    }
    let mut g = h.clone();
    for d in h.gradient() {
        g = gcd(&g, &d);
    }
    normalize(h.exact_div(&g).expect("gcd divides"))
}

/// Constant-free check that `d` divides `f` (used by tests and callers that
/// only need a yes/no answer).
pub fn divides(d: &Poly, f: &Poly) -> bool {
    f.is_zero() || (!d.is_zero() && f.exact_div(d).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Poly {
        parse(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")), p("x + y"));
        assert_eq!(gcd(&p("x*y*z"), &p("x*z^2 + x^2*z")), p("x*z"));
        assert!(gcd(&p("x^2 - y^3"), &p("2*x")).is_constant());
    }

    #[test]
    fn squarefree_examples() {
        assert!(!is_squarefree(&p("x^2*y")));
        assert!(is_squarefree(&p("x*y*(x+y)*(x+y*z)")));
        assert!(is_squarefree(&p("x^2 - y^3")));
        assert!(!is_squarefree(&p("(x+y)^2*(x-z)")));
        assert_eq!(squarefree_part(&p("x^3*(y+1)^2")), p("x*(y+1)"));
    }
}
