use std::cmp::Ordering;

use crate::order::ModuleOrder;
use crate::poly::{Monomial, Poly, Q};

/// Element of a free module `R^r`. Ideals are handled as rank-one modules.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector {
    pub comps: Vec<Poly>,
}

impl Vector {
    pub fn new(comps: Vec<Poly>) -> Self {
        assert!(!comps.is_empty(), "vectors have positive rank");
        Vector { comps }
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        Vector { comps: vec![Poly::zero(nvars); rank] }
    }

    pub fn unit(rank: usize, nvars: usize, i: usize) -> Self {
        let mut v = Self::zero(rank, nvars);
        v.comps[i] = Poly::one(nvars);
        v
    }

    pub fn from_poly(p: Poly) -> Self {
        Vector { comps: vec![p] }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn nvars(&self) -> usize {
        self.comps[0].nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn lead(&self, order: &ModuleOrder) -> Option<(usize, &Monomial, &Q)> {
        let mut best: Option<(usize, &Monomial, &Q)> = None;
        for (c, p) in self.comps.iter().enumerate() {
            for (m, v) in p.terms() {
                let better = match best {
                    None => true,
                    Some((bc, bm, _)) => order.cmp((c, m), (bc, bm)) == Ordering::Greater,
                };
                if better {
                    best = Some((c, m, v));
                }
            }
        }
        best
    }

    pub fn max_degree(&self) -> u32 {
        self.comps.iter().filter_map(Poly::total_degree).max().unwrap_or(0)
    }

    /// `deg(v) - deg(LM(v))`, the quantity Mora's normal form minimizes.
    pub fn ecart(&self, order: &ModuleOrder) -> u32 {
        match self.lead(order) {
            None => 0,
            Some((_, m, _)) => self.max_degree() - m.degree(),
        }
    }

    /// `self += c * m * other`
    pub fn add_scaled(&mut self, c: &Q, m: &Monomial, other: &Vector) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled(c, m, b);
        }
    }

    pub fn mul_term(&self, c: &Q, m: &Monomial) -> Vector {
        Vector { comps: self.comps.iter().map(|p| p.mul_term(c, m)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Vector {
        Vector { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &Poly) -> Vector {
        Vector { comps: self.comps.iter().map(|p| p * f).collect() }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    /// `sum_i self_i * row_i`
    pub fn dot(&self, row: &[Poly]) -> Poly {
        assert_eq!(self.rank(), row.len());
        let mut acc = Poly::zero(self.nvars());
        for (a, b) in self.comps.iter().zip(row) {
            acc = &acc + &(a * b);
        }
        acc
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = None;
        for p in &self.comps {
            if !p.is_homogeneous() {
                return false;
            }
            if let Some(e) = p.total_degree() {
                if *d.get_or_insert(e) != e {
                    return false;
                }
            }
        }
        true
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        if self.rank() == 1 {
            return self.comps[0].fmt_with(vars);
        }
        let parts: Vec<String> = self.comps.iter().map(|p| p.fmt_with(vars)).collect();
        format!("({})", parts.join(", "))
    }
}
