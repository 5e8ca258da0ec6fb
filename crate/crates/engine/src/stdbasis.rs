//! Buchberger's algorithm for global orders and Mora's tangent cone
//! algorithm for the local degree order, on submodules of free modules.
//!
//! A [`StdBasis`] optionally remembers how each of its elements is written in
//! terms of the input generators, so membership answers can be turned into
//! explicit certificates `a * f = sum c_k * g_k` with `a(0) != 0`.

use std::cmp::Ordering;

use num_traits::One;

use crate::order::ModuleOrder;
use crate::poly::{Monomial, Poly};
use crate::vector::Vector;

#[derive(Clone, Debug)]
pub struct StdBasis {
    pub order: ModuleOrder,
    pub rank: usize,
    pub nvars: usize,
    pub elems: Vec<Vector>,
    /// `elems[i] = sum_k lifts[i][k] * gens[k]` when tracked.
    pub lifts: Option<Vec<Vec<Poly>>>,
    pub gens: Vec<Vector>,
}

/// Result of dividing `f` by a standard basis:
/// `unit * f = sum_j quotients[j] * elems[j] + remainder`, with `unit(0) != 0`
/// (and `unit = 1` for global orders).
#[derive(Clone, Debug)]
pub struct Reduction {
    pub remainder: Vector,
    pub unit: Poly,
    pub quotients: Vec<Poly>,
}

enum Reducer<'a> {
    Elem(usize, &'a Vector),
    Snapshot { v: Vector, unit: Poly, quotients: Vec<Poly> },
}

impl Reducer<'_> {
    fn vector(&self) -> &Vector {
        match self {
            Reducer::Elem(_, v) => v,
            Reducer::Snapshot { v, .. } => v,
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

impl StdBasis {
    /// Standard basis of the module generated by `gens`.
    pub fn compute(gens: &[Vector], order: ModuleOrder, track_lift: bool) -> StdBasis {
        assert!(!gens.is_empty(), "at least one generator (possibly zero) is required");
        let rank = gens[0].rank();
        let nvars = gens[0].nvars();
        let k = gens.len();
        let mut sb = StdBasis {
            order,
            rank,
            nvars,
            elems: Vec::new(),
            lifts: if track_lift { Some(Vec::new()) } else { None },
            gens: gens.to_vec(),
        };
        let mut sugar: Vec<u32> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        for (idx, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let lift = track_lift.then(|| {
                let mut l = vec![Poly::zero(nvars); k];
                l[idx] = Poly::one(nvars);
                l
            });
            sb.insert(g.clone(), lift, g.max_degree(), &mut sugar, &mut pairs);
        }
        while let Some(pos) = select_pair(&pairs) {
            let pair = pairs.swap_remove(pos);
            let (s, slift) = sb.spoly(pair.i, pair.j);
            if s.is_zero() {
                continue;
            }
            let red = sb.reduce_inner(&s, track_lift, false);
            if red.remainder.is_zero() {
                continue;
            }
            let lift = slift.map(|sl| {
                let mut l: Vec<Poly> = sl.iter().map(|p| p * &red.unit).collect();
                let lifts = sb.lifts.as_ref().expect("tracked");
                for (j, q) in red.quotients.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    for (a, b) in l.iter_mut().zip(&lifts[j]) {
                        *a = &*a - &(q * b);
                    }
                }
                l
            });
            sb.insert(red.remainder, lift, pair.sugar, &mut sugar, &mut pairs);
        }
        sb.minimalize();
        sb
    }

    fn insert(
        &mut self,
        v: Vector,
        lift: Option<Vec<Poly>>,
        sug: u32,
        sugar: &mut Vec<u32>,
        pairs: &mut Vec<Pair>,
    ) {
        let new = self.elems.len();
        let (nc, nm) = {
            let (c, m, _) = v.lead(&self.order).expect("nonzero");
            (c, m.clone())
        };
        let global = self.order.is_global();
        if global {
            // Gebauer-Moeller style chain criterion on existing pairs.
            pairs.retain(|p| {
                let (ci, mi) = self.lead_of(p.i);
                if ci != nc || !nm.divides(&p.lcm) {
                    return true;
                }
                let (_, mj) = self.lead_of(p.j);
                let li = mi.lcm(&nm);
                let lj = mj.lcm(&nm);
                li == p.lcm || lj == p.lcm
            });
        }
        for i in 0..new {
            let (ci, mi) = self.lead_of(i);
            if ci != nc {
                continue;
            }
            // Buchberger's product criterion holds for ideals only.
            if global && self.rank == 1 && mi.is_coprime(&nm) {
                continue;
            }
            let lcm = mi.lcm(&nm);
            let s = (sugar[i] + lcm.degree() - mi.degree()).max(sug + lcm.degree() - nm.degree());
            pairs.push(Pair { i, j: new, lcm, sugar: s });
        }
        self.elems.push(v);
        sugar.push(sug);
        if let Some(l) = self.lifts.as_mut() {
            l.push(lift.expect("lift tracked"));
        }
    }

    fn lead_of(&self, i: usize) -> (usize, Monomial) {
        let (c, m, _) = self.elems[i].lead(&self.order).expect("nonzero element");
        (c, m.clone())
    }

    fn spoly(&self, i: usize, j: usize) -> (Vector, Option<Vec<Poly>>) {
        let (_, mi, ci) = self.elems[i].lead(&self.order).expect("nonzero");
        let (_, mj, cj) = self.elems[j].lead(&self.order).expect("nonzero");
        let l = mi.lcm(mj);
        let ui = mi.quotient_of(&l);
        let uj = mj.quotient_of(&l);
        let fi = ci.recip();
        let fj = -cj.recip();
        let mut s = self.elems[i].mul_term(&fi, &ui);
        s.add_scaled(&fj, &uj, &self.elems[j]);
        let lift = self.lifts.as_ref().map(|lifts| {
            lifts[i]
                .iter()
                .zip(&lifts[j])
                .map(|(a, b)| {
                    let mut p = a.mul_term(&fi, &ui);
                    p.add_scaled(&fj, &uj, b);
                    p
                })
                .collect()
        });
        (s, lift)
    }

    /// Divide `f` by the basis. For global orders the remainder is fully
    /// reduced; for the local order only the leading term is (Mora).
    pub fn reduce(&self, f: &Vector) -> Reduction {
        self.reduce_inner(f, true, true)
    }

    /// Remainder only.
    pub fn normal_form(&self, f: &Vector) -> Vector {
        self.reduce_inner(f, false, true).remainder
    }

    fn reduce_inner(&self, f: &Vector, track: bool, full: bool) -> Reduction {
        if self.order.is_global() {
            self.reduce_global(f, track, full)
        } else {
            self.reduce_mora(f, track)
        }
    }

    fn zero_quotients(&self) -> Vec<Poly> {
        vec![Poly::zero(self.nvars); self.elems.len()]
    }

    fn find_divisor(&self, c: usize, m: &Monomial) -> Option<usize> {
        self.elems.iter().position(|e| {
            let (ec, em, _) = e.lead(&self.order).expect("nonzero");
            ec == c && em.divides(m)
        })
    }

    fn reduce_global(&self, f: &Vector, track: bool, full: bool) -> Reduction {
        let mut h = f.clone();
        let mut rem = Vector::zero(self.rank, self.nvars);
        let mut quotients = if track { self.zero_quotients() } else { Vec::new() };
        while let Some((c, m, coef)) = h.lead(&self.order).map(|(c, m, v)| (c, m.clone(), v.clone())) {
            match self.find_divisor(c, &m) {
                Some(j) => {
                    let (_, gm, gc) = self.elems[j].lead(&self.order).expect("nonzero");
                    let factor = &coef / gc;
                    let shift = gm.quotient_of(&m);
                    h.add_scaled(&-factor.clone(), &shift, &self.elems[j]);
                    if track {
                        quotients[j].add_term(shift, factor);
                    }
                }
                None => {
                    if !full {
                        rem = rem.add(&h);
                        break;
                    }
                    rem.comps[c].add_term(m.clone(), coef.clone());
                    h.comps[c].add_term(m, -coef);
                }
            }
        }
        Reduction { remainder: rem, unit: Poly::one(self.nvars), quotients }
    }

    fn reduce_mora(&self, f: &Vector, track: bool) -> Reduction {
        let mut t: Vec<(Reducer, u32)> =
            self.elems.iter().enumerate().map(|(j, e)| (Reducer::Elem(j, e), e.ecart(&self.order))).collect();
        let mut h = f.clone();
        let mut unit = Poly::one(self.nvars);
        let mut quotients = if track { self.zero_quotients() } else { Vec::new() };
        while let Some((c, m, coef)) = h.lead(&self.order).map(|(c, m, v)| (c, m.clone(), v.clone())) {
            let mut best: Option<usize> = None;
            for (idx, (r, e)) in t.iter().enumerate() {
                let (rc, rm, _) = r.vector().lead(&self.order).expect("nonzero");
                if rc == c && rm.divides(&m) && best.is_none_or(|b| *e < t[b].1) {
                    best = Some(idx);
                }
            }
            let Some(b) = best else { break };
            let eh = h.ecart(&self.order);
            if t[b].1 > eh {
                let snap = Reducer::Snapshot { v: h.clone(), unit: unit.clone(), quotients: quotients.clone() };
                t.push((snap, eh));
            }
            let (r, _) = &t[b];
            let (_, gm, gc) = r.vector().lead(&self.order).expect("nonzero");
            let factor = &coef / gc;
            let shift = gm.quotient_of(&m);
            let neg = -factor.clone();
            let rv = r.vector().clone();
            if track {
                match r {
                    Reducer::Elem(j, _) => quotients[*j].add_term(shift.clone(), factor),
                    Reducer::Snapshot { unit: su, quotients: sq, .. } => {
                        unit.add_scaled(&neg, &shift, su);
                        for (a, b) in quotients.iter_mut().zip(sq) {
                            a.add_scaled(&neg, &shift, b);
                        }
                    }
                }
            }
            h.add_scaled(&neg, &shift, &rv);
        }
        Reduction { remainder: h, unit, quotients }
    }

    fn minimalize(&mut self) {
        let order = self.order.clone();
        let n = self.elems.len();
        let leads: Vec<(usize, Monomial)> = (0..n).map(|i| self.lead_of(i)).collect();
        let mut keep = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let (ci, mi) = &leads[i];
                let (cj, mj) = &leads[j];
                if ci == cj && mj.divides(mi) && (mi != mj || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut elems = Vec::new();
        let mut lifts = self.lifts.as_ref().map(|_| Vec::new());
        for i in 0..n {
            if keep[i] {
                elems.push(self.elems[i].clone());
                if let (Some(out), Some(src)) = (lifts.as_mut(), self.lifts.as_ref()) {
                    out.push(src[i].clone());
                }
            }
        }
        self.elems = elems;
        self.lifts = lifts;
        if order.is_global() {
            // Tail reduction towards the reduced basis.
            for i in 0..self.elems.len() {
                let v = self.elems[i].clone();
                let (c, m, coef) = {
                    let (c, m, v) = v.lead(&order).expect("nonzero");
                    (c, m.clone(), v.clone())
                };
                let mut head = Vector::zero(self.rank, self.nvars);
                head.comps[c].add_term(m.clone(), coef.clone());
                let mut tail = v.clone();
                tail.comps[c].add_term(m, -coef);
                let others = StdBasis {
                    order: order.clone(),
                    rank: self.rank,
                    nvars: self.nvars,
                    elems: self.elems.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone()).collect(),
                    lifts: None,
                    gens: Vec::new(),
                };
                let red = others.reduce_global(&tail, self.lifts.is_some(), true);
                let new = head.add(&red.remainder);
                if let Some(lifts) = self.lifts.as_mut() {
                    let mut l = lifts[i].clone();
                    let idx: Vec<usize> = (0..lifts.len()).filter(|j| *j != i).collect();
                    for (q, &j) in red.quotients.iter().zip(&idx) {
                        if q.is_zero() {
                            continue;
                        }
                        for (a, b) in l.iter_mut().zip(&lifts[j]) {
                            *a = &*a - &(q * b);
                        }
                    }
                    lifts[i] = l;
                }
                self.elems[i] = new;
            }
        }
        // Normalize leading coefficients to one.
        for i in 0..self.elems.len() {
            let c = self.elems[i].lead(&order).expect("nonzero").2.clone();
            if !c.is_one() {
                let inv = c.recip();
                self.elems[i] = self.elems[i].scale(&inv);
                if let Some(lifts) = self.lifts.as_mut() {
                    lifts[i] = lifts[i].iter().map(|p| p.scale(&inv)).collect();
                }
            }
        }
        let order2 = order.clone();
        let mut idx: Vec<usize> = (0..self.elems.len()).collect();
        idx.sort_by(|&a, &b| {
            let (ca, ma, _) = self.elems[a].lead(&order2).expect("nonzero");
            let (cb, mb, _) = self.elems[b].lead(&order2).expect("nonzero");
            order2.cmp((cb, mb), (ca, ma))
        });
        self.elems = idx.iter().map(|&i| self.elems[i].clone()).collect();
        if let Some(l) = self.lifts.as_ref() {
            self.lifts = Some(idx.iter().map(|&i| l[i].clone()).collect());
        }
    }

    /// The basis generates the whole module component-wise (for ideals: the
    /// unit ideal).
    pub fn is_unit(&self) -> bool {
        let leads = self.lead_monomials();
        (0..self.rank).all(|c| leads.iter().any(|(lc, m)| *lc == c && m.is_one()))
    }

    pub fn lead_monomials(&self) -> Vec<(usize, Monomial)> {
        (0..self.elems.len()).map(|i| self.lead_of(i)).collect()
    }

    /// Every S-vector of the basis reduces to zero.
    pub fn is_standard_basis(&self) -> bool {
        for i in 0..self.elems.len() {
            for j in (i + 1)..self.elems.len() {
                let (ci, _) = self.lead_of(i);
                let (cj, _) = self.lead_of(j);
                if ci != cj {
                    continue;
                }
                let (s, _) = self.spoly_untracked(i, j);
                if !self.reduce_inner(&s, false, false).remainder.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn spoly_untracked(&self, i: usize, j: usize) -> (Vector, ()) {
        let (_, mi, ci) = self.elems[i].lead(&self.order).expect("nonzero");
        let (_, mj, cj) = self.elems[j].lead(&self.order).expect("nonzero");
        let l = mi.lcm(mj);
        let mut s = self.elems[i].mul_term(&ci.recip(), &mi.quotient_of(&l));
        s.add_scaled(&-cj.recip(), &mj.quotient_of(&l), &self.elems[j]);
        (s, ())
    }

    /// Express `f` through the original generators if it lies in the module:
    /// returns `(a, c)` with `a * f = sum_k c_k * gens_k` and `a(0) != 0`.
    pub fn certificate(&self, f: &Vector) -> Option<(Poly, Vec<Poly>)> {
        let lifts = self.lifts.as_ref().expect("certificates need a lifted basis");
        let red = self.reduce_inner(f, true, false);
        if !red.remainder.is_zero() {
            return None;
        }
        let mut coeffs = vec![Poly::zero(self.nvars); self.gens.len()];
        for (q, l) in red.quotients.iter().zip(lifts) {
            if q.is_zero() {
                continue;
            }
            for (a, b) in coeffs.iter_mut().zip(l) {
                *a = &*a + &(q * b);
            }
        }
        Some((red.unit, coeffs))
    }
}

fn select_pair(pairs: &[Pair]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (idx, p) in pairs.iter().enumerate() {
        let better = match best {
            None => true,
            Some(b) => {
                let q = &pairs[b];
                match p.lcm.degree().cmp(&q.lcm.degree()) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => (p.sugar, p.j, p.i) < (q.sugar, q.j, q.i),
                }
            }
        };
        if better {
            best = Some(idx);
        }
    }
    best
}
