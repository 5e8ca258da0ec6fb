use logres_engine::gcd::{gcd, is_squarefree};
use logres_engine::{Module, Poly, Vector, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::fractional::{find_nonzerodivisor_combination, FractionalIdeal, MeroFraction, NZD_BUDGET};
use crate::germ::{DivisorGerm, VectorField};

/// `ω = (Σ a_i dx_i) / (unit · h)` with `unit(0) != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogOneForm {
    pub a: Vec<Poly>,
    pub unit: Poly,
}

/// `∂_i h · a_j ≡ ∂_j h · a_i mod h` for all `i < j`, i.e. `dh ∧ ω` is
/// holomorphic.
pub fn is_logarithmic(germ: &DivisorGerm, a: &[Poly]) -> bool {
    let dh = germ.partials();
    (0..a.len()).all(|i| ((i + 1)..a.len()).all(|j| germ.congruent(&(&dh[i] * &a[j]), &(&dh[j] * &a[i]))))
}

impl LogOneForm {
    pub fn new(germ: &DivisorGerm, a: Vec<Poly>) -> Result<Self> {
        Self::with_unit(germ, a, Poly::one(germ.n()))
    }

    pub fn with_unit(germ: &DivisorGerm, a: Vec<Poly>, unit: Poly) -> Result<Self> {
        if a.len() != germ.n() || !unit.is_unit_local() || !is_logarithmic(germ, &a) {
            return Err(CoreError::NotLogarithmic);
        }
        Ok(LogOneForm { a, unit })
    }

    /// `dh / h`.
    pub fn dlog(germ: &DivisorGerm) -> Self {
        LogOneForm { a: germ.partials().to_vec(), unit: Poly::one(germ.n()) }
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        let body: Vec<String> = self
            .a
            .iter()
            .zip(vars)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({})*d{v}", c.fmt_with(vars)))
            .collect();
        let body = if body.is_empty() { "0".to_string() } else { body.join(" + ") };
        if self.unit.is_one() {
            format!("({body}) / h")
        } else {
            format!("({body}) / (({}) * h)", self.unit.fmt_with(vars))
        }
    }
}

/// `g · a = ξ · ∇h + h · b` exactly, with `g` a nonzerodivisor mod `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueCertificate {
    pub g: Poly,
    pub xi: Poly,
    pub b: Vec<Poly>,
}

impl ResidueCertificate {
    fn check(&self, germ: &DivisorGerm, form: &LogOneForm) -> bool {
        let h = germ.h();
        form.a
            .iter()
            .zip(germ.partials())
            .zip(&self.b)
            .all(|((a, dh), b)| &self.g * a == &(&self.xi * dh) + &(h * b))
    }

    pub fn residue(&self, form: &LogOneForm) -> MeroFraction {
        MeroFraction { xi: self.xi.clone(), g: &self.g * &form.unit }
    }
}

fn certificate_from(s: &Vector, n: usize) -> ResidueCertificate {
    ResidueCertificate {
        g: s.comps[0].clone(),
        xi: -&s.comps[1],
        b: s.comps[2..2 + n].iter().map(|p| -p).collect(),
    }
}

/// Certificate with denominator `g = Σ c_i ∂_i h`: contracting
/// `dh ∧ a ∈ h·Ω²` with `Σ c_i ∂_i` gives `g·a − (Σ c_i a_i)·dh ∈ h·Ω¹`.
pub fn certificate_for_combination(germ: &DivisorGerm, form: &LogOneForm, c: &[Q]) -> Option<ResidueCertificate> {
    let dh = germ.partials();
    let g = dh.iter().zip(c).fold(Poly::zero(germ.n()), |acc, (p, ci)| &acc + &p.scale(ci));
    if g.is_zero() || !germ.is_nonzerodivisor(&g) {
        return None;
    }
    let xi = form.a.iter().zip(c).fold(Poly::zero(germ.n()), |acc, (p, ci)| &acc + &p.scale(ci));
    let b = form
        .a
        .iter()
        .zip(dh)
        .map(|(a, d)| (&(&g * a) - &(&xi * d)).exact_div(germ.h()))
        .collect::<Option<Vec<Poly>>>()?;
    let cert = ResidueCertificate { g, xi, b };
    cert.check(germ, form).then_some(cert)
}

/// Up to `count` residue certificates with pairwise distinct denominators.
/// Candidates come from the syzygies of `(a, ∇h, h e_1, ..., h e_n)`.
pub fn residue_certificates(germ: &DivisorGerm, form: &LogOneForm, count: usize) -> Result<Vec<ResidueCertificate>> {
    let n = germ.n();
    let h = germ.h();
    let mut cols = vec![Vector::new(form.a.clone()), Vector::new(germ.partials().to_vec())];
    cols.extend((0..n).map(|i| Vector::unit(n, n, i).mul_poly(h)));
    let syz = Module::local(n, n, cols).syzygies();

    let mut found: Vec<ResidueCertificate> = Vec::new();
    let push = |c: ResidueCertificate, found: &mut Vec<ResidueCertificate>| {
        let fresh = found.iter().all(|f| !proportional(&f.g, &c.g));
        if fresh && !c.g.is_zero() && germ.is_nonzerodivisor(&c.g) {
            assert!(c.check(germ, form), "residue certificate failed to re-multiply");
            found.push(c);
        }
    };
    for s in syz.gens() {
        if found.len() >= count {
            break;
        }
        push(certificate_from(s, n), &mut found);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(germ.seed());
    let mut trials = 0;
    while found.len() < count && trials < NZD_BUDGET && !syz.gens().is_empty() {
        trials += 1;
        let mut v = Vector::zero(n + 2, n);
        for s in syz.gens() {
            let c: i64 = rng.gen_range(-3..=3);
            v = v.add(&s.scale(&Q::from_integer(c.into())));
        }
        push(certificate_from(&v, n), &mut found);
    }
    if found.is_empty() {
        return Err(CoreError::NoNonzerodivisor("no residue denominator within the trial budget".into()));
    }
    // A unit multiple of a certificate is again one.
    while found.len() < count {
        let u = &Poly::one(n) + &Poly::var(n, found.len() % n);
        let c = &found[0];
        found.push(ResidueCertificate { g: &c.g * &u, xi: &c.xi * &u, b: c.b.iter().map(|p| p * &u).collect() });
    }
    Ok(found)
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    let d = gcd(a, b);
    a.exact_div(&d).is_some_and(|p| p.is_constant()) && b.exact_div(&d).is_some_and(|p| p.is_constant())
}

/// Residue `ρ_D(ω) = ξ/g` restricted to `D`.
pub fn residue(germ: &DivisorGerm, form: &LogOneForm) -> Result<MeroFraction> {
    let cert = residue_certificates(germ, form, 1)?.swap_remove(0);
    Ok(cert.residue(form))
}

/// `R_D = J_D^∨`. For free germs the residues of the dual basis of the
/// Saito matrix must generate the same fractional ideal.
pub fn residue_module(germ: &DivisorGerm) -> Result<FractionalIdeal> {
    let r = FractionalIdeal::jacobian(germ)?.dual()?;
    if let Some(saito) = &germ.freeness().saito {
        let forms = germ.log_forms_basis(saito)?;
        // The denominator J_D^∨ was built with, so both sides share it.
        let (_, c) = find_nonzerodivisor_combination(germ, germ.partials())
            .ok_or_else(|| CoreError::NoNonzerodivisor("Jacobian ideal".into()))?;
        let pairs: Vec<(Poly, Poly)> = forms
            .iter()
            .map(|w| {
                let cert = certificate_for_combination(germ, w, &c)
                    .ok_or_else(|| CoreError::Consistency("contraction certificate failed".into()))?;
                let f = cert.residue(w);
                Ok((f.xi, f.g))
            })
            .collect::<Result<_>>()?;
        let from_forms = FractionalIdeal::make(germ, &pairs)?;
        if !from_forms.equals(&r)? {
            return Err(CoreError::Consistency("residues of a log basis do not generate J_D^∨".into()));
        }
    }
    Ok(r)
}

/// `g · ⟨δ, a⟩ ≡ δ(h) · ξ mod h` for a residue certificate of `ω`.
pub fn sigma_check(germ: &DivisorGerm, field: &VectorField, form: &LogOneForm) -> Result<bool> {
    let cert = residue_certificates(germ, form, 1)?.swap_remove(0);
    let lhs = &cert.g * &field.dot(&form.a);
    let rhs = &field.apply(germ.h()) * &cert.xi;
    Ok(germ.congruent(&lhs, &rhs))
}

/// Minimal number of generators of `R_D` at the origin, and whether `1` is
/// part of a minimal generating set.
pub fn mu_residues(germ: &DivisorGerm) -> Result<(usize, bool)> {
    let r = residue_module(germ)?;
    Ok((r.min_generators().0, r.one_is_minimal_generator()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GorensteinVerdict {
    Empty,
    Gorenstein,
    NotGorenstein,
    Undecided,
}

/// Whether the singular locus `Z` is Gorenstein: for free germs exactly when
/// `R_D` is minimally generated by `1` and one more element.
pub fn gorenstein_singular_locus(germ: &DivisorGerm) -> Result<GorensteinVerdict> {
    if germ.is_smooth() {
        return Ok(GorensteinVerdict::Empty);
    }
    if !germ.is_free() {
        return Ok(GorensteinVerdict::Undecided);
    }
    Ok(match mu_residues(germ)? {
        (2, true) => GorensteinVerdict::Gorenstein,
        _ => GorensteinVerdict::NotGorenstein,
    })
}

/// Checks that `factors` are nonconstant, squarefree, pairwise coprime and
/// multiply to `h` up to a unit at the origin.
pub fn validate_factors(germ: &DivisorGerm, factors: &[Poly]) -> Result<()> {
    let bad = |m: String| Err(CoreError::InvalidFactors(m));
    if factors.is_empty() {
        return bad("no factors".into());
    }
    for f in factors {
        if f.nvars() != germ.n() || f.is_constant() {
            return bad(format!("factor {} is constant", germ.fmt_poly(f)));
        }
        if !is_squarefree(f) {
            return bad(format!("factor {} is not squarefree", germ.fmt_poly(f)));
        }
    }
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            if !gcd(&factors[i], &factors[j]).is_constant() {
                return bad(format!(
                    "factors {} and {} share a component",
                    germ.fmt_poly(&factors[i]),
                    germ.fmt_poly(&factors[j])
                ));
            }
        }
    }
    let prod = factors.iter().fold(Poly::one(germ.n()), |acc, f| &acc * f);
    let unit = prod.exact_div(germ.h()).or_else(|| germ.h().exact_div(&prod));
    if !unit.is_some_and(|u| u.is_unit_local()) {
        return bad("product of the factors is not h up to a unit".into());
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub holds: bool,
    /// `e_i ≡ 1` on the i-th component and `≡ 0` on the others.
    pub idempotents: Vec<MeroFraction>,
    pub normalization: FractionalIdeal,
}

/// The fractional ideal `⊕ O_{D_i}` spanned by the idempotents of a
/// factorization, with `e_i² ≡ e_i` and `Σ e_i = 1` certified.
pub fn component_idempotents(germ: &DivisorGerm, factors: &[Poly]) -> Result<(Vec<MeroFraction>, FractionalIdeal)> {
    validate_factors(germ, factors)?;
    let n = germ.n();
    let cofactors: Vec<Poly> = (0..factors.len())
        .map(|i| {
            factors.iter().enumerate().filter(|&(j, _)| j != i).fold(Poly::one(n), |acc, (_, f)| &acc * f)
        })
        .collect();
    let s = cofactors.iter().fold(Poly::zero(n), |acc, f| &acc + f);
    let idempotents: Vec<MeroFraction> =
        cofactors.iter().map(|f| MeroFraction::new(germ, f.clone(), s.clone())).collect::<Result<_>>()?;
    for e in &idempotents {
        if !germ.congruent(&(&e.xi * &e.xi), &(&e.xi * &s)) {
            return Err(CoreError::Consistency("idempotent does not square to itself".into()));
        }
    }
    let total = idempotents.iter().fold(Poly::zero(n), |acc, e| &acc + &e.xi);
    if !germ.congruent(&total, &s) {
        return Err(CoreError::Consistency("idempotents do not sum to 1".into()));
    }
    let pairs: Vec<(Poly, Poly)> = idempotents.iter().map(|e| (e.xi.clone(), e.g.clone())).collect();
    let sum = FractionalIdeal::make(germ, &pairs)?;
    Ok((idempotents, sum))
}

/// `R_D = ⊕ O_{D_i}` for the given components.
pub fn direct_sum_check(germ: &DivisorGerm, factors: &[Poly]) -> Result<DirectSum> {
    let (idempotents, sum) = component_idempotents(germ, factors)?;
    let holds = residue_module(germ)?.equals(&sum)?;
    Ok(DirectSum { holds, idempotents, normalization: sum })
}
