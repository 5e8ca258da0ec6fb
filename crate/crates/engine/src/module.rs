use std::sync::OnceLock;

use crate::order::{ModuleOrder, MonomialOrder};
use crate::poly::Poly;
use crate::stdbasis::StdBasis;
use crate::vector::Vector;

/// Finitely generated submodule of `R^rank`, where `R` is either the
/// polynomial ring (global) or its localization at the origin (local).
#[derive(Debug)]
pub struct Module {
    nvars: usize,
    rank: usize,
    gens: Vec<Vector>,
    local: bool,
    sb: OnceLock<StdBasis>,
    lifted: OnceLock<StdBasis>,
}

impl Clone for Module {
    fn clone(&self) -> Self {
        Module::new(self.rank, self.nvars, self.gens.clone(), self.local)
    }
}

impl Module {
    pub fn new(rank: usize, nvars: usize, gens: Vec<Vector>, local: bool) -> Self {
        for g in &gens {
            assert_eq!(g.rank(), rank, "generator rank mismatch");
            assert_eq!(g.nvars(), nvars, "generator ring mismatch");
        }
        Module { nvars, rank, gens, local, sb: OnceLock::new(), lifted: OnceLock::new() }
    }

    pub fn local(rank: usize, nvars: usize, gens: Vec<Vector>) -> Self {
        Self::new(rank, nvars, gens, true)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_local(&self) -> bool {
        self.local
    }

    pub fn gens(&self) -> &[Vector] {
        &self.gens
    }

    /// The ordering standard bases are computed with. Homogeneous rank-one
    /// input in the local ring uses the global degrevlex order: for
    /// homogeneous ideals membership in the localization at the origin and
    /// in the polynomial ring agree.
    pub fn order(&self) -> ModuleOrder {
        let mono = if !self.local || (self.rank == 1 && self.gens.iter().all(Vector::is_homogeneous)) {
            MonomialOrder::DegRevLex
        } else {
            MonomialOrder::LocalDegRevLex
        };
        ModuleOrder::new(mono)
    }

    fn padded_gens(&self) -> Vec<Vector> {
        if self.gens.is_empty() {
            vec![Vector::zero(self.rank, self.nvars)]
        } else {
            self.gens.clone()
        }
    }

    pub fn std_basis(&self) -> &StdBasis {
        if let Some(l) = self.lifted.get() {
            return l;
        }
        self.sb.get_or_init(|| StdBasis::compute(&self.padded_gens(), self.order(), false))
    }

    /// Whether a standard basis has already been computed.
    pub fn has_std_basis(&self) -> bool {
        self.sb.get().is_some() || self.lifted.get().is_some()
    }

    pub fn lifted_basis(&self) -> &StdBasis {
        self.lifted.get_or_init(|| StdBasis::compute(&self.padded_gens(), self.order(), true))
    }

    pub fn is_zero(&self) -> bool {
        self.std_basis().elems.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        v.is_zero() || self.std_basis().normal_form(v).is_zero()
    }

    /// `(a, c)` with `a * v = sum_k c_k * gens_k` and `a(0) != 0`, checked by
    /// re-multiplication before it is returned.
    pub fn certificate(&self, v: &Vector) -> Option<(Poly, Vec<Poly>)> {
        let sb = self.lifted_basis();
        let (a, coeffs) = sb.certificate(v)?;
        let gens = self.padded_gens();
        let mut rhs = Vector::zero(self.rank, self.nvars);
        for (c, g) in coeffs.iter().zip(&gens) {
            rhs = rhs.add(&g.mul_poly(c));
        }
        assert_eq!(v.mul_poly(&a), rhs, "membership certificate failed to re-multiply");
        assert!(a.is_unit_local(), "certificate multiplier is not a unit");
        Some((a, coeffs))
    }

    pub fn contains_module(&self, other: &Module) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Module) -> bool {
        self.contains_module(other) && other.contains_module(self)
    }

    /// Relations `c` with `sum_i c_i * gens_i = 0`, as a submodule of `R^k`.
    pub fn syzygies(&self) -> Module {
        let k = self.gens.len();
        let r = self.rank;
        let n = self.nvars;
        if k == 0 {
            return Module::new(1, n, Vec::new(), self.local);
        }
        // Syzygies commute with localization, and the global computation
        // avoids Mora's ecart bookkeeping.
        let order = ModuleOrder::with_split(MonomialOrder::DegRevLex, r);
        let ext: Vec<Vector> = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut comps = g.comps.clone();
                comps.extend(Vector::unit(k, n, i).comps);
                Vector::new(comps)
            })
            .collect();
        let sb = StdBasis::compute(&ext, order, false);
        let syz: Vec<Vector> = sb
            .elems
            .iter()
            .filter(|e| e.comps[..r].iter().all(Poly::is_zero))
            .map(|e| Vector::new(e.comps[r..].to_vec()))
            .collect();
        Module::new(k, n, syz, self.local)
    }

    /// Minimal generators at the origin (local modules): the number of
    /// generators is `dim M / m M`, and the kept generators are drawn from the
    /// input list. A generator is dropped when it lies in the module spanned by
    /// the ones still kept; by Nakayama the survivors are minimal.
    pub fn min_generators(&self) -> (usize, Vec<usize>) {
        let mut keep: Vec<usize> = (0..self.gens.len()).filter(|&i| !self.gens[i].is_zero()).collect();
        let mut i = 0;
        while i < keep.len() {
            let others: Vec<Vector> =
                keep.iter().filter(|&&j| j != keep[i]).map(|&j| self.gens[j].clone()).collect();
            let sub = Module::new(self.rank, self.nvars, others, self.local);
            if sub.contains(&self.gens[keep[i]]) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        (keep.len(), keep)
    }

    pub fn minimized(&self) -> Module {
        let (_, idx) = self.min_generators();
        Module::new(self.rank, self.nvars, idx.iter().map(|&i| self.gens[i].clone()).collect(), self.local)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Poly {
        parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn syzygies_of_node_row() {
        // (h_x, h_y, h) for h = xy
        let row = [p("y"), p("x"), p("x*y")];
        let m = Module::local(1, 2, row.iter().map(|q| Vector::from_poly(q.clone())).collect());
        let syz = m.syzygies();
        for g in syz.gens() {
            assert!(g.dot(&row).is_zero());
        }
        let expected = Module::local(
            3,
            2,
            vec![Vector::new(vec![p("x"), p("0"), p("-1")]), Vector::new(vec![p("0"), p("y"), p("-1")])],
        );
        assert!(syz.equals(&expected));
        assert_eq!(syz.min_generators().0, 2);
    }

    #[test]
    fn min_generators_counts() {
        let ideal = |v: &[&str]| Module::local(1, 2, v.iter().map(|s| Vector::from_poly(p(s))).collect());
        assert_eq!(ideal(&["x", "y", "x+y"]).min_generators().0, 2);
        let (count, idx) = ideal(&["1", "x"]).min_generators();
        assert_eq!(count, 1);
        assert_eq!(idx, vec![0]);
    }
}
