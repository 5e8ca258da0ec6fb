use logres_engine::gcd::gcd;
use logres_engine::{Ideal, MonomialOrder, Poly, Q};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::germ::DivisorGerm;

/// Candidates tried when searching for a nonzerodivisor.
pub const NZD_BUDGET: usize = 32;

/// `ξ / g` in the total quotient ring of `O_D`; `g` is a nonzerodivisor.
#[derive(Clone, Debug, PartialEq)]
pub struct MeroFraction {
    pub xi: Poly,
    pub g: Poly,
}

impl MeroFraction {
    pub fn new(germ: &DivisorGerm, xi: Poly, g: Poly) -> Result<Self> {
        germ.nonzerodivisor(&g)
            .map_err(|w| CoreError::ZeroDivisor { den: germ.fmt_poly(&g), witness: germ.fmt_poly(&w) })?;
        Ok(MeroFraction { xi, g })
    }

    pub fn poly(p: Poly) -> Self {
        let n = p.nvars();
        MeroFraction { xi: p, g: Poly::one(n) }
    }

    pub fn equals(&self, germ: &DivisorGerm, other: &MeroFraction) -> bool {
        germ.congruent(&(&self.xi * &other.g), &(&other.xi * &self.g))
    }

    pub fn is_zero(&self, germ: &DivisorGerm) -> bool {
        germ.vanishes(&self.xi)
    }

    /// Lowest terms, with a denominator of positive leading coefficient.
    pub fn reduced(&self) -> MeroFraction {
        if self.xi.is_zero() {
            return MeroFraction::poly(Poly::zero(self.g.nvars()));
        }
        let d = gcd(&self.xi, &self.g);
        let mut xi = self.xi.exact_div(&d).expect("gcd divides");
        let mut g = self.g.exact_div(&d).expect("gcd divides");
        let lead = g.terms().last().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let scale = if lead.is_negative() { -lead.recip() } else { lead.recip() };
        if g.is_constant() {
            xi = xi.scale(&g.constant_term().recip());
            g = Poly::one(g.nvars());
        } else {
            xi = xi.scale(&scale);
            g = g.scale(&scale);
        }
        MeroFraction { xi, g }
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        let r = self.reduced();
        if r.g.is_one() {
            r.xi.fmt_with(vars)
        } else {
            format!("({})/({})", r.xi.fmt_with(vars), r.g.fmt_with(vars))
        }
    }
}

/// First nonzerodivisor among `gens`, then their sum, then small random
/// combinations of them (seeded by the germ).
pub fn find_nonzerodivisor(germ: &DivisorGerm, gens: &[Poly]) -> Option<Poly> {
    find_nonzerodivisor_combination(germ, gens).map(|(g, _)| g)
}

/// As [`find_nonzerodivisor`], also returning the coefficients `c` with
/// `g = Σ c_i gens_i`.
pub fn find_nonzerodivisor_combination(germ: &DivisorGerm, gens: &[Poly]) -> Option<(Poly, Vec<Q>)> {
    let nonzero: Vec<usize> = (0..gens.len()).filter(|&i| !germ.vanishes(&gens[i])).collect();
    let unit = |i: usize| (0..gens.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect();
    if let Some(&i) = nonzero.iter().find(|&&i| germ.is_nonzerodivisor(&gens[i])) {
        return Some((gens[i].clone(), unit(i)));
    }
    if nonzero.len() < 2 {
        return None;
    }
    let sum = nonzero.iter().fold(Poly::zero(germ.n()), |acc, &i| &acc + &gens[i]);
    if !sum.is_zero() && germ.is_nonzerodivisor(&sum) {
        let coeffs = (0..gens.len()).map(|i| if nonzero.contains(&i) { Q::one() } else { Q::zero() }).collect();
        return Some((sum, coeffs));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(germ.seed());
    for _ in 0..NZD_BUDGET {
        let mut cand = Poly::zero(germ.n());
        let mut coeffs = vec![Q::zero(); gens.len()];
        for &i in &nonzero {
            let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
            cand = &cand + &gens[i].scale(&c);
            coeffs[i] = c;
        }
        if !cand.is_zero() && germ.is_nonzerodivisor(&cand) {
            return Some((cand, coeffs));
        }
    }
    None
}

/// Finitely generated `O_D`-submodule `num / den` of the total quotient ring,
/// containing a nonzerodivisor.
#[derive(Clone, Debug)]
pub struct FractionalIdeal {
    germ: DivisorGerm,
    num: Vec<Poly>,
    den: Poly,
}

impl FractionalIdeal {
    /// From fractions `p / q`; every `q` must be a nonzerodivisor.
    pub fn make(germ: &DivisorGerm, gens: &[(Poly, Poly)]) -> Result<Self> {
        let mut den = Poly::one(germ.n());
        for (_, q) in gens {
            germ.nonzerodivisor(q)
                .map_err(|w| CoreError::ZeroDivisor { den: germ.fmt_poly(q), witness: germ.fmt_poly(&w) })?;
            let d = gcd(&den, q);
            den = &den * &q.exact_div(&d).expect("gcd divides");
        }
        let num = gens.iter().map(|(p, q)| p * &den.exact_div(q).expect("common multiple")).collect();
        let frac = FractionalIdeal { germ: germ.clone(), num, den };
        frac.nonzerodivisor()?;
        Ok(frac)
    }

    pub fn from_ideal(germ: &DivisorGerm, gens: Vec<Poly>) -> Result<Self> {
        let frac = FractionalIdeal { germ: germ.clone(), num: gens, den: Poly::one(germ.n()) };
        frac.nonzerodivisor()?;
        Ok(frac)
    }

    pub fn unit(germ: &DivisorGerm) -> Self {
        FractionalIdeal { germ: germ.clone(), num: vec![Poly::one(germ.n())], den: Poly::one(germ.n()) }
    }

    /// `J_D`, generated by the partial derivatives of `h`.
    pub fn jacobian(germ: &DivisorGerm) -> Result<Self> {
        Self::from_ideal(germ, germ.partials().to_vec())
    }

    pub fn germ(&self) -> &DivisorGerm {
        &self.germ
    }

    pub fn num(&self) -> &[Poly] {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn generators(&self) -> Vec<MeroFraction> {
        self.num.iter().map(|p| MeroFraction { xi: p.clone(), g: self.den.clone() }).collect()
    }

    pub fn fmt_generators(&self) -> Vec<String> {
        self.generators()
            .iter()
            .filter(|f| !f.is_zero(&self.germ))
            .map(|f| f.fmt_with(self.germ.vars()))
            .collect()
    }

    /// Generators of [`Self::tidy`], each in lowest terms and rescaled to a
    /// monic numerator.
    pub fn fmt_tidy(&self) -> Vec<String> {
        let t = self.tidy();
        t.generators()
            .iter()
            .filter(|f| !f.is_zero(&t.germ))
            .map(|f| {
                let r = f.reduced();
                MeroFraction { xi: r.xi.monic(&MonomialOrder::Lex), g: r.g }.fmt_with(t.germ.vars())
            })
            .collect()
    }

    /// The same module with a simpler presentation: integral ideals over the
    /// denominator one, and a minimal set of generators.
    pub fn tidy(&self) -> FractionalIdeal {
        let germ = &self.germ;
        let mut out = self.clone();
        let den_ideal = germ.local(vec![self.den.clone(), germ.h().clone()]);
        if !self.den.is_unit_local() && self.num.iter().all(|p| den_ideal.contains(p)) {
            let integral = self.num_ideal().quotient_poly(&self.den);
            let num: Vec<Poly> = integral.gens().iter().filter(|p| !germ.vanishes(p)).cloned().collect();
            if !num.is_empty() {
                out = FractionalIdeal { germ: germ.clone(), num, den: Poly::one(germ.n()) };
            }
        }
        let (_, keep) = out.min_generators();
        out.num = keep.iter().map(|&i| out.num[i].clone()).collect();
        out
    }

    fn num_ideal_scaled(&self, by: &Poly) -> Ideal {
        let mut gens: Vec<Poly> = self.num.iter().map(|p| p * by).collect();
        gens.push(self.germ.h().clone());
        self.germ.local(gens)
    }

    /// The numerator as an ideal of `O_S` containing `h`.
    pub fn num_ideal(&self) -> Ideal {
        self.num_ideal_scaled(&Poly::one(self.germ.n()))
    }

    /// If the denominator is a unit at the origin, the preimage in `O_S` of
    /// this (then integral) ideal.
    pub fn as_ideal(&self) -> Option<Ideal> {
        self.den.is_unit_local().then(|| self.num_ideal())
    }

    pub fn nonzerodivisor(&self) -> Result<Poly> {
        find_nonzerodivisor(&self.germ, &self.num).ok_or_else(|| {
            CoreError::NoNonzerodivisor(format!("numerator <{}>", self.fmt_generators().join(", ")))
        })
    }

    fn same_germ(&self, other: &FractionalIdeal) -> Result<()> {
        if self.germ == other.germ {
            Ok(())
        } else {
            Err(CoreError::GermMismatch)
        }
    }

    /// `ξ/g ∈ num/den  ⟺  ξ·den ∈ g·num + <h>`.
    pub fn contains(&self, f: &MeroFraction) -> bool {
        self.num_ideal_scaled(&f.g).contains(&(&f.xi * &self.den))
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &FractionalIdeal) -> Result<bool> {
        self.same_germ(other)?;
        let d = gcd(&self.den, &other.den);
        let (mine, theirs) = (self.den.exact_div(&d).expect("gcd divides"), other.den.exact_div(&d).expect("gcd divides"));
        let scaled = self.num_ideal_scaled(&theirs);
        Ok(other.num.iter().all(|b| scaled.contains(&(b * &mine))))
    }

    pub fn equals(&self, other: &FractionalIdeal) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    pub fn product(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        self.same_germ(other)?;
        let mut num = Vec::with_capacity(self.num.len() * other.num.len());
        for a in &self.num {
            for b in &other.num {
                num.push(a * b);
            }
        }
        Ok(FractionalIdeal { germ: self.germ.clone(), num, den: &self.den * &other.den })
    }

    /// `I^∨ = {f | f·I ⊆ O_D}`. With a nonzerodivisor `g` in the numerator,
    /// `(num/den)^∨ = den·(<g, h> : num) / g`.
    pub fn dual(&self) -> Result<FractionalIdeal> {
        let germ = &self.germ;
        let g = self.nonzerodivisor()?;
        let quot = germ.local(vec![g.clone(), germ.h().clone()]).quotient(&self.num_ideal());
        let mut num: Vec<Poly> =
            quot.gens().iter().filter(|p| !germ.vanishes(p)).map(|p| p * &self.den).collect();
        if num.is_empty() {
            num.push(Poly::zero(germ.n()));
        }
        let dual = FractionalIdeal { germ: germ.clone(), num, den: g };
        dual.nonzerodivisor()?;
        Ok(dual)
    }

    pub fn is_reflexive(&self) -> Result<bool> {
        self.dual()?.dual()?.equals(self)
    }

    /// Minimal number of `O_D`-generators at the origin, and which numerators
    /// form a minimal generating set.
    pub fn min_generators(&self) -> (usize, Vec<usize>) {
        let germ = &self.germ;
        let mut keep: Vec<usize> = (0..self.num.len()).filter(|&i| !germ.vanishes(&self.num[i])).collect();
        let mut i = 0;
        while i < keep.len() {
            let mut others: Vec<Poly> =
                keep.iter().filter(|&&j| j != keep[i]).map(|&j| self.num[j].clone()).collect();
            others.push(germ.h().clone());
            if germ.local(others).contains(&self.num[keep[i]]) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        (keep.len(), keep)
    }

    /// `1 ∈ I` but `1 ∉ m·I`: the constant function is part of a minimal
    /// generating set.
    pub fn one_is_minimal_generator(&self) -> bool {
        let n = self.germ.n();
        if !self.contains(&MeroFraction::poly(Poly::one(n))) {
            return false;
        }
        let mut gens: Vec<Poly> =
            (0..n).flat_map(|i| self.num.iter().map(move |p| p * &Poly::var(n, i))).collect();
        gens.push(self.germ.h().clone());
        !self.germ.local(gens).contains(&self.den)
    }
}
