//! Deciding whether an ideal is radical, with evidence for every verdict.
//!
//! Cheap certificates first (unit ideal, squarefree lead ideal). In dimension
//! zero the question is exact: locally the only prime is the maximal ideal,
//! globally Seidenberg's lemma with squarefree univariate eliminants. In
//! positive dimension we search for nilpotents among small candidates and fall
//! back on the Jacobian criterion; anything else is left undecided.

use crate::gcd::squarefree_part;
use crate::ideal::Ideal;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalVerdict {
    Radical(RadicalEvidence),
    NotRadical(NilEvidence),
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalEvidence {
    UnitIdeal,
    /// The lead ideal of a standard basis is squarefree.
    SquarefreeLeads,
    /// Zero-dimensional local ideal equal to the maximal ideal.
    MaximalIdeal,
    /// The ideal contains these squarefree univariate polynomials, one per
    /// variable.
    SquarefreeEliminants(Vec<Poly>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum NilEvidence {
    /// `witness` is not in the ideal but `witness^power` is.
    Nilpotent { witness: Poly, power: u32 },
    /// The `c x c` Jacobian minors (c = height) vanish along a component of
    /// top dimension `dim`: a reduced ideal is generically smooth there.
    SingularComponent { dim: usize },
}

impl RadicalVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            RadicalVerdict::Radical(_) => "radical",
            RadicalVerdict::NotRadical(_) => "not_radical",
            RadicalVerdict::Undecided(_) => "undecided",
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            RadicalVerdict::Radical(_) => Some(true),
            RadicalVerdict::NotRadical(_) => Some(false),
            RadicalVerdict::Undecided(_) => None,
        }
    }
}

const MAX_POWER: u32 = 8;

/// Smallest `k` in `2..=max` with `r^k in I`.
fn nil_power(ideal: &Ideal, r: &Poly, max: u32) -> Option<u32> {
    let mut pow = r.clone();
    for k in 2..=max {
        pow = &pow * r;
        if ideal.contains(&pow) {
            return Some(k);
        }
    }
    None
}

fn find_nilpotent(ideal: &Ideal, candidates: &[Poly], max: u32) -> Option<RadicalVerdict> {
    for r in candidates {
        if r.is_zero() || ideal.contains(r) {
            continue;
        }
        if let Some(power) = nil_power(ideal, r, max) {
            return Some(RadicalVerdict::NotRadical(NilEvidence::Nilpotent { witness: r.clone(), power }));
        }
    }
    None
}

impl Ideal {
    pub fn radical_test(&self) -> RadicalVerdict {
        let n = self.nvars();
        if self.is_unit() {
            return RadicalVerdict::Radical(RadicalEvidence::UnitIdeal);
        }
        if self.is_zero() {
            return RadicalVerdict::Radical(RadicalEvidence::SquarefreeLeads);
        }
        if self.lead_monomials().iter().all(|m| m.is_squarefree()) {
            return RadicalVerdict::Radical(RadicalEvidence::SquarefreeLeads);
        }
        let dim = self.dim().expect("proper ideal");
        if dim == 0 {
            return if self.is_local() { self.local_zero_dim() } else { self.seidenberg() };
        }

        let mut candidates: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                candidates.push(&Poly::var(n, i) * &Poly::var(n, j));
                candidates.push(&Poly::var(n, i) + &Poly::var(n, j));
                candidates.push(&Poly::var(n, i) - &Poly::var(n, j));
            }
        }
        candidates.extend(self.gens().iter().map(squarefree_part));
        if let Some(v) = find_nilpotent(self, &candidates, MAX_POWER) {
            return v;
        }

        let height = n - dim;
        let minors = jacobian_minors(self.gens(), height);
        let sing = self.with(&minors);
        if sing.dim() == Some(dim) {
            return RadicalVerdict::NotRadical(NilEvidence::SingularComponent { dim });
        }
        RadicalVerdict::Undecided(format!(
            "no nilpotent among {} candidates and the Jacobian criterion is inconclusive",
            candidates.len()
        ))
    }

    fn local_zero_dim(&self) -> RadicalVerdict {
        let n = self.nvars();
        let bound = self.colength().unwrap_or(1).max(1) as u32 + 1;
        for i in 0..n {
            let x = Poly::var(n, i);
            if !self.contains(&x) {
                let power = nil_power(self, &x, bound).expect("a zero-dimensional local ideal contains a power of m");
                return RadicalVerdict::NotRadical(NilEvidence::Nilpotent { witness: x, power });
            }
        }
        RadicalVerdict::Radical(RadicalEvidence::MaximalIdeal)
    }

    fn seidenberg(&self) -> RadicalVerdict {
        let n = self.nvars();
        let mut eliminants = Vec::new();
        for i in 0..n {
            let drop: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let elim = self.eliminate(&drop);
            let f = elim
                .basis()
                .into_iter()
                .min_by_key(Poly::total_degree)
                .expect("zero-dimensional ideals have univariate eliminants");
            let s = squarefree_part(&f);
            if !self.contains(&s) {
                let power = nil_power(self, &s, f.total_degree().unwrap_or(2).max(2)).expect("f divides a power of its squarefree part");
                return RadicalVerdict::NotRadical(NilEvidence::Nilpotent { witness: s, power });
            }
            eliminants.push(s);
        }
        RadicalVerdict::Radical(RadicalEvidence::SquarefreeEliminants(eliminants))
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        k => {
            let mut acc = Poly::zero(nvars);
            for col in 0..k {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &det(&minor, nvars);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All nonzero `c x c` minors of the Jacobian matrix of `gens`.
pub fn jacobian_minors(gens: &[Poly], c: usize) -> Vec<Poly> {
    let Some(first) = gens.first() else { return Vec::new() };
    let n = first.nvars();
    let jac: Vec<Vec<Poly>> = gens.iter().map(Poly::gradient).collect();
    let mut out = Vec::new();
    for rows in subsets(gens.len(), c) {
        for cols in subsets(n, c) {
            let m: Vec<Vec<Poly>> = rows.iter().map(|&r| cols.iter().map(|&k| jac[r][k].clone()).collect()).collect();
            let d = det(&m, n);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn ideal(v: &[&str], vars: &[&str], local: bool) -> Ideal {
        Ideal::new(vars.len(), v.iter().map(|s| parse(s, vars).unwrap()).collect(), local)
    }

    #[test]
    fn cusp_jacobian_is_not_radical() {
        let i = ideal(&["x", "y^2"], &["x", "y"], true);
        match i.radical_test() {
            RadicalVerdict::NotRadical(NilEvidence::Nilpotent { witness, power }) => {
                assert_eq!(witness, parse("y", &["x", "y"]).unwrap());
                assert_eq!(power, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn maximal_ideal_is_radical() {
        assert_eq!(ideal(&["x", "y"], &["x", "y"], true).radical_test().as_bool(), Some(true));
        assert_eq!(ideal(&["x + y^2", "y - x^3"], &["x", "y"], true).radical_test().as_bool(), Some(true));
    }

    #[test]
    fn univariate_over_q() {
        assert_eq!(ideal(&["x^2 + 1"], &["x"], false).radical_test().as_bool(), Some(true));
        assert_eq!(ideal(&["(x^2 + 1)^2"], &["x"], false).radical_test().as_bool(), Some(false));
        let i = ideal(&["x^2 - 1", "y^2 - 2"], &["x", "y"], false);
        assert_eq!(i.radical_test().as_bool(), Some(true));
        let i = ideal(&["x^2", "y - 1"], &["x", "y"], false);
        assert_eq!(i.radical_test().as_bool(), Some(false));
    }

    #[test]
    fn positive_dimensional() {
        let vars = ["x", "y", "z"];
        assert_eq!(ideal(&["y*z", "x*z", "x*y"], &vars, true).radical_test().as_bool(), Some(true));
        // umbrella Jacobian: y is nilpotent
        let i = ideal(&["x^2 - y^2*z", "2*x", "-2*y*z", "-y^2"], &vars, true);
        assert_eq!(i.radical_test().as_bool(), Some(false));
    }

    #[test]
    fn determinants() {
        let vars = ["x", "y"];
        let m = |s: &str| parse(s, &vars).unwrap();
        let mat = vec![vec![m("x"), m("y")], vec![m("y"), m("x")]];
        assert_eq!(det(&mat, 2), m("x^2 - y^2"));
    }
}
