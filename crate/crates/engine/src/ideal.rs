use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use num_traits::Zero;

use crate::module::Module;
use crate::order::{ModuleOrder, MonomialOrder};
use crate::poly::{Monomial, Poly};
use crate::stdbasis::StdBasis;
use crate::vector::Vector;

/// Outcome of a membership question, with evidence either way.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// `unit * f = sum_k coeffs[k] * gens[k]`, `unit(0) != 0`.
    Member { unit: Poly, coeffs: Vec<Poly> },
    /// Nonzero normal form of `f`.
    NotMember { remainder: Poly },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Ideal of the polynomial ring, or of its localization at the origin.
#[derive(Clone, Debug)]
pub struct Ideal {
    gens: Vec<Poly>,
    module: Module,
    global: OnceLock<Box<Ideal>>,
}

impl Ideal {
    pub fn new(nvars: usize, gens: Vec<Poly>, local: bool) -> Self {
        let vecs = gens.iter().cloned().map(Vector::from_poly).collect();
        Ideal { module: Module::new(1, nvars, vecs, local), gens, global: OnceLock::new() }
    }

    pub fn local(nvars: usize, gens: Vec<Poly>) -> Self {
        Self::new(nvars, gens, true)
    }

    pub fn global(nvars: usize, gens: Vec<Poly>) -> Self {
        Self::new(nvars, gens, false)
    }

    pub fn nvars(&self) -> usize {
        self.module.nvars()
    }

    pub fn is_local(&self) -> bool {
        self.module.is_local()
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn as_module(&self) -> &Module {
        &self.module
    }

    fn like(&self, gens: Vec<Poly>) -> Ideal {
        Ideal::new(self.nvars(), gens, self.is_local())
    }

    pub fn std_basis(&self) -> &StdBasis {
        self.module.std_basis()
    }

    /// Elements of the (inter-reduced) standard basis.
    pub fn basis(&self) -> Vec<Poly> {
        self.std_basis().elems.iter().map(|v| v.comps[0].clone()).collect()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        self.std_basis().normal_form(&Vector::from_poly(f.clone())).comps.swap_remove(0)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        if !self.is_local() || self.module.has_std_basis() {
            return self.normal_form(f).is_zero();
        }
        // Avoid Mora: f lies in the localization iff the global quotient
        // I : f has an element that is a unit at the origin.
        let global = self.global.get_or_init(|| Box::new(Ideal::global(self.nvars(), self.gens.clone())));
        global.normal_form(f).is_zero() || global.quotient_poly(f).gens.iter().any(|g| !g.constant_term().is_zero())
    }

    pub fn membership(&self, f: &Poly) -> Membership {
        if f.is_zero() {
            return Membership::Member {
                unit: Poly::one(self.nvars()),
                coeffs: vec![Poly::zero(self.nvars()); self.gens.len()],
            };
        }
        if self.is_zero() {
            return Membership::NotMember { remainder: f.clone() };
        }
        match self.module.certificate(&Vector::from_poly(f.clone())) {
            Some((unit, coeffs)) => Membership::Member { unit, coeffs },
            None => Membership::NotMember { remainder: self.normal_form(f) },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(Poly::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        if self.is_local() {
            return self.gens.iter().any(|g| !g.constant_term().is_zero());
        }
        !self.is_zero() && self.std_basis().is_unit()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        self.like(self.gens.iter().chain(&other.gens).cloned().collect())
    }

    pub fn with(&self, extra: &[Poly]) -> Ideal {
        self.like(self.gens.iter().chain(extra).cloned().collect())
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        self.like(gens)
    }

    pub fn scaled(&self, f: &Poly) -> Ideal {
        self.like(self.gens.iter().map(|g| g * f).collect())
    }

    /// `I : f`, read off the first coordinates of the syzygies of `(f, g_1, ..)`.
    pub fn quotient_poly(&self, f: &Poly) -> Ideal {
        if f.is_zero() || self.is_unit() {
            return self.like(vec![Poly::one(self.nvars())]);
        }
        if self.is_zero() {
            return self.like(Vec::new());
        }
        let mut row = vec![Vector::from_poly(f.clone())];
        row.extend(self.gens.iter().cloned().map(Vector::from_poly));
        let syz = Module::new(1, self.nvars(), row, self.is_local()).syzygies();
        self.globally_reduced(syz.gens().iter().map(|s| s.comps[0].clone()).collect())
    }

    /// Reduced global Gröbner basis of `gens`, as an ideal of the same kind.
    /// Quotients and intersections commute with localization, so this is a
    /// valid generating set in the local ring as well.
    fn globally_reduced(&self, gens: Vec<Poly>) -> Ideal {
        let g = Ideal::global(self.nvars(), gens);
        self.like(g.basis())
    }

    /// `I : J = {g | g J ⊆ I}`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        let mut acc: Option<Ideal> = None;
        for j in &other.gens {
            let q = self.quotient_poly(j);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        acc.unwrap_or_else(|| self.like(vec![Poly::one(self.nvars())]))
    }

    /// `I : J^∞`, iterating quotients until they stabilize.
    pub fn saturation(&self, other: &Ideal) -> Ideal {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(other);
            if cur.contains_ideal(&next) {
                return cur;
            }
            cur = next;
        }
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let n = self.nvars();
        if self.is_zero() || other.is_zero() {
            return self.like(Vec::new());
        }
        let zero = Poly::zero(n);
        let mut cols = vec![Vector::new(vec![Poly::one(n), Poly::one(n)])];
        cols.extend(self.gens.iter().map(|a| Vector::new(vec![a.clone(), zero.clone()])));
        cols.extend(other.gens.iter().map(|b| Vector::new(vec![zero.clone(), b.clone()])));
        let syz = Module::new(2, n, cols, self.is_local()).syzygies();
        self.globally_reduced(syz.gens().iter().map(|s| s.comps[0].clone()).collect())
    }

    /// `I ∩ Q[x_i : i not in drop]`, via a global elimination order. The result
    /// is computed from the polynomial generators, also for local ideals.
    pub fn eliminate(&self, drop: &[usize]) -> Ideal {
        let n = self.nvars();
        let mut flags = vec![false; n];
        for &d in drop {
            flags[d] = true;
        }
        let order = ModuleOrder::new(MonomialOrder::Block(flags));
        let gens: Vec<Vector> = self.gens.iter().cloned().map(Vector::from_poly).collect();
        if self.is_zero() {
            return self.like(Vec::new());
        }
        let sb = StdBasis::compute(&gens, order, false);
        let kept = sb
            .elems
            .iter()
            .map(|v| v.comps[0].clone())
            .filter(|p| drop.iter().all(|&d| !p.involves(d)))
            .collect();
        self.like(kept)
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        if self.is_zero() {
            return Vec::new();
        }
        self.std_basis().lead_monomials().into_iter().map(|(_, m)| m).collect()
    }

    /// Krull dimension of `R/I` (local or global according to the context);
    /// `None` for the unit ideal.
    pub fn dim(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let n = self.nvars();
        let leads = self.lead_monomials();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads.iter().all(|m| (0..n).any(|i| m.exp(i) > 0 && mask & (1 << i) == 0));
            if independent {
                best = size;
            }
        }
        Some(best)
    }

    /// `dim_Q R/I` when finite.
    pub fn colength(&self) -> Option<usize> {
        if self.is_unit() {
            return Some(0);
        }
        if self.dim() != Some(0) {
            return None;
        }
        Some(standard_monomials(self.nvars(), &self.lead_monomials()).len())
    }

    pub fn min_generators(&self) -> (usize, Vec<usize>) {
        self.module.min_generators()
    }

    /// Is `f` a zero divisor-free element modulo `I`, i.e. `I : f = I`?
    pub fn is_nonzerodivisor(&self, f: &Poly) -> bool {
        self.contains_ideal(&self.quotient_poly(f))
    }
}

/// Monomials outside the monomial ideal generated by `leads`; must be finite.
pub fn standard_monomials(nvars: usize, leads: &[Monomial]) -> Vec<Monomial> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([Monomial::one(nvars)]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        if !seen.insert(m.clone()) || leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..nvars {
            queue.push_back(m.mul(&Monomial::var(nvars, i)));
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn ps(v: &[&str], vars: &[&str]) -> Vec<Poly> {
        v.iter().map(|s| parse(s, vars).unwrap()).collect()
    }

    fn local(v: &[&str]) -> Ideal {
        Ideal::local(2, ps(v, &["x", "y"]))
    }

    fn p(s: &str) -> Poly {
        parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn cusp_jacobian_basis() {
        let i = local(&["x^2 - y^3", "2*x", "-3*y^2"]);
        assert!(i.equals(&local(&["x", "y^2"])));
        assert!(i.std_basis().is_standard_basis());
        assert_eq!(i.colength(), Some(2));
    }

    #[test]
    fn normal_forms() {
        let i = local(&["x", "y^2"]);
        assert!(i.normal_form(&p("x^2 - y^3")).is_zero());
        assert_eq!(i.normal_form(&p("y")), p("y"));
        assert!(i.normal_form(&p("0")).is_zero());
        match i.membership(&p("x^2 - y^3")) {
            Membership::Member { unit, coeffs } => {
                let rhs = &(&coeffs[0] * &p("x")) + &(&coeffs[1] * &p("y^2"));
                assert_eq!(&unit * &p("x^2 - y^3"), rhs);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn local_units() {
        assert!(local(&["1 + x", "y"]).is_unit());
        assert!(!Ideal::global(2, ps(&["1 + x", "y"], &["x", "y"])).is_unit());
        let i = local(&["x - x^2"]);
        assert!(i.contains(&p("x")));
    }

    #[test]
    fn quotients() {
        assert!(local(&["x*y"]).quotient(&local(&["x"])).equals(&local(&["y"])));
        let q = local(&["x", "x^2 - y^3"]).quotient(&local(&["x", "y^2"]));
        assert!(q.equals(&local(&["x", "y"])));
        let i = local(&["x^2", "y^3"]);
        assert!(i.quotient(&local(&["1"])).equals(&i));
    }

    #[test]
    fn saturation_and_intersection() {
        let i = local(&["x^2*y", "x*y^2"]);
        let s = i.saturation(&local(&["x", "y"]));
        assert!(s.equals(&local(&["x*y"])));
        let a = local(&["x"]);
        let b = local(&["y"]);
        assert!(a.intersect(&b).equals(&local(&["x*y"])));
    }

    #[test]
    fn elimination() {
        let vars = ["x", "y", "t"];
        let i = Ideal::global(3, ps(&["x - t^2", "y - t^3"], &vars));
        let e = i.eliminate(&[2]);
        assert!(e.equals(&Ideal::global(3, ps(&["x^3 - y^2"], &vars))));
        let e = Ideal::global(2, ps(&["x"], &["x", "y"])).eliminate(&[1]);
        assert!(e.equals(&Ideal::global(2, ps(&["x"], &["x", "y"]))));
        assert!(Ideal::global(2, ps(&["x - y"], &["x", "y"])).eliminate(&[1]).is_zero());
    }

    #[test]
    fn dimensions() {
        assert_eq!(local(&["x", "y"]).dim(), Some(0));
        assert_eq!(local(&["x*y"]).dim(), Some(1));
        assert_eq!(local(&["1"]).dim(), None);
        assert_eq!(Ideal::local(3, ps(&["x*y", "z"], &["x", "y", "z"])).dim(), Some(1));
        assert_eq!(local(&["x", "y^3"]).colength(), Some(3));
    }
}
