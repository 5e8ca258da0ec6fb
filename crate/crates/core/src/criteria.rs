//! Decision procedures for the conditions relating `J_D`, `R_D`, `Õ_D` and
//! `C_D`, and the assembly of a [`DivisorReport`].

use std::collections::BTreeMap;
use std::time::Instant;

use logres_engine::{MonomialOrder, Poly, Q, RadicalVerdict};
use logres_engine::radical::{jacobian_minors, NilEvidence, RadicalEvidence};
use num_traits::Zero;

use crate::branch::{BranchJson, BranchParam};
use crate::error::{CoreError, Result};
use crate::fractional::{FractionalIdeal, MeroFraction, NZD_BUDGET};
use crate::germ::DivisorGerm;
use crate::normalization::{left_kernel_rank, milnor, NormalizationData, NormalizationKind};
use crate::report::*;
use crate::residues::{component_idempotents, residue_module, validate_factors, GorensteinVerdict};

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub factors: Option<Vec<Poly>>,
    pub branches: Option<Vec<BranchParam>>,
    /// Minimum series precision for automatically expanded branches.
    pub precision: u32,
    pub timings: bool,
}

fn fmt_list(germ: &DivisorGerm, ps: &[Poly]) -> String {
    ps.iter().map(|p| germ.fmt_poly(p)).collect::<Vec<_>>().join(", ")
}

/// Residues are weakly holomorphic: every generator of `R_D` lies in `Õ_D`.
pub fn check_condition_c(r: &FractionalIdeal, norm: Option<&NormalizationData>) -> Result<Verdict> {
    let Some(norm) = norm else {
        return Ok(Verdict::undecided("no normalization data"));
    };
    let germ = r.germ();
    let gens: Vec<MeroFraction> = r.generators().into_iter().filter(|f| !f.is_zero(germ)).collect();
    for f in &gens {
        match norm.is_weakly_holomorphic(f) {
            Ok(true) => {}
            Ok(false) => {
                let r = f.reduced();
                let monic = MeroFraction { xi: r.xi.monic(&MonomialOrder::Lex), g: r.g };
                return Ok(Verdict::fails(monic.fmt_with(germ.vars())));
            }
            Err(CoreError::Unsupported(why)) => return Ok(Verdict::undecided(why)),
            Err(e) => return Err(e),
        }
    }
    Ok(Verdict::holds(format!("all {} generators of R_D are weakly holomorphic", gens.len())))
}

/// `J_D = C_D`.
pub fn check_condition_g(germ: &DivisorGerm, norm: Option<&NormalizationData>) -> Result<Verdict> {
    let Some(c) = norm.and_then(|n| n.conductor.as_ref()) else {
        return Ok(Verdict::undecided("conductor not available"));
    };
    let jf = FractionalIdeal::jacobian(germ)?;
    if let Some(x) = c.generators().iter().find(|x| !jf.contains(x)) {
        return Ok(Verdict::fails(format!("{} ∈ C_D \\ J_D", x.fmt_with(germ.vars()))));
    }
    if let Some(p) = germ.partials().iter().find(|p| !c.contains(&MeroFraction::poly((*p).clone()))) {
        return Ok(Verdict::fails(format!("{} ∈ J_D \\ C_D", germ.fmt_poly(p))));
    }
    Ok(Verdict::holds(format!("J_D = C_D = <{}>", fmt_list(germ, germ.partials()))))
}

/// `J_D` radical, tested on `<h, ∂h>` in `O_S`.
pub fn check_condition_d(germ: &DivisorGerm) -> Verdict {
    match germ.jacobian_pullback().radical_test() {
        RadicalVerdict::Radical(ev) => Verdict::holds(match ev {
            RadicalEvidence::UnitIdeal => "unit ideal".to_string(),
            RadicalEvidence::SquarefreeLeads => "squarefree leading ideal".to_string(),
            RadicalEvidence::MaximalIdeal => "equals the maximal ideal".to_string(),
            RadicalEvidence::SquarefreeEliminants(ps) => format!("squarefree eliminants {}", fmt_list(germ, &ps)),
        }),
        RadicalVerdict::NotRadical(ev) => Verdict::fails(match ev {
            NilEvidence::Nilpotent { witness, power } => {
                format!("{} ∉ J but its power {power} is", germ.fmt_poly(&witness))
            }
            NilEvidence::SingularComponent { dim } => {
                format!("Jacobian criterion fails along a component of dimension {dim}")
            }
        }),
        RadicalVerdict::Undecided(why) => Verdict::undecided(why),
    }
}

fn checked_factors(germ: &DivisorGerm, factors: &[Poly]) -> Result<()> {
    validate_factors(germ, factors)?;
    if let Some(f) = factors.iter().find(|f| !f.constant_term().is_zero()) {
        return Err(CoreError::InvalidFactors(format!("factor {} does not vanish at the origin", germ.fmt_poly(f))));
    }
    Ok(())
}

fn linear_part(f: &Poly) -> Vec<Q> {
    let n = f.nvars();
    (0..n).map(|i| f.derivative(i).constant_term()).collect()
}

/// The factors form part of a coordinate system at the origin.
pub fn check_normal_crossing_at_origin(germ: &DivisorGerm, factors: &[Poly]) -> Result<bool> {
    checked_factors(germ, factors)?;
    if factors.len() > germ.n() {
        return Ok(false);
    }
    let rows: Vec<Vec<Q>> = factors.iter().map(linear_part).collect();
    Ok(left_kernel_rank(&rows) == factors.len())
}

/// Normal crossing at the origin, with or without a factorization.
pub fn normal_crossing_verdict(germ: &DivisorGerm, factors: Option<&[Poly]>, d: &Verdict) -> Result<Verdict> {
    if let Some(f) = factors {
        return Ok(if check_normal_crossing_at_origin(germ, f)? {
            Verdict::holds(format!("factors {} have independent linear parts", fmt_list(germ, f)))
        } else {
            Verdict::fails(format!("factors {} are not part of a coordinate system", fmt_list(germ, f)))
        });
    }
    if germ.is_smooth() {
        return Ok(Verdict::holds("smooth germ"));
    }
    if !germ.is_free() {
        return Ok(Verdict::fails("not free, while normal crossing divisors are"));
    }
    if d.value == Decision::False {
        return Ok(Verdict::fails("Jacobian ideal not radical, while it is for normal crossings"));
    }
    if germ.active_vars().len() == 2 {
        let plane = plane_of(germ);
        return Ok(if milnor(&plane)? == 1 {
            Verdict::holds("plane curve with Milnor number 1 (a node)")
        } else {
            Verdict::fails("plane curve with Milnor number above 1")
        });
    }
    Ok(Verdict::undecided("no factorization given"))
}

fn plane_of(germ: &DivisorGerm) -> Poly {
    let a = germ.active_vars();
    let mut map = vec![0; germ.n()];
    for (k, &v) in a.iter().enumerate() {
        map[v] = k;
    }
    germ.h().rename(a.len(), &map)
}

fn local_dim(germ: &DivisorGerm, gens: Vec<Poly>) -> i64 {
    germ.local(gens).dim().map_or(-1, |d| d as i64)
}

/// Components meet transversally off a set of codimension two in `D`.
pub fn pairwise_transversal(germ: &DivisorGerm, factors: &[Poly]) -> bool {
    let n = germ.n() as i64;
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            let pair = [factors[i].clone(), factors[j].clone()];
            let mut gens = pair.to_vec();
            gens.extend(jacobian_minors(&pair, 2));
            if local_dim(germ, gens) >= n - 2 {
                return false;
            }
        }
    }
    true
}

/// Normal crossing in codimension one, decided for plane curves and their
/// suspensions and for factored arrangements of smooth hypersurfaces.
pub fn normal_crossing_codim1(germ: &DivisorGerm, factors: Option<&[Poly]>) -> Result<Verdict> {
    if germ.is_smooth() {
        return Ok(Verdict::holds("smooth germ"));
    }
    if germ.active_vars().len() == 2 {
        let mu = milnor(&plane_of(germ))?;
        return Ok(if mu <= 1 {
            Verdict::holds(format!("curve factor has Milnor number {mu}"))
        } else {
            Verdict::fails(format!("curve factor has Milnor number {mu}, singular along a codimension-1 set"))
        });
    }
    let Some(factors) = factors else {
        return Ok(Verdict::undecided("needs a plane curve or a factorization into smooth components"));
    };
    checked_factors(germ, factors)?;
    if factors.iter().any(|f| linear_part(f).iter().all(Zero::is_zero)) {
        return Ok(Verdict::undecided("a component is singular at the origin"));
    }
    let n = germ.n() as i64;
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            let pair = [factors[i].clone(), factors[j].clone()];
            let mut gens = pair.to_vec();
            gens.extend(jacobian_minors(&pair, 2));
            if local_dim(germ, gens) >= n - 2 {
                return Ok(Verdict::fails(format!(
                    "{} and {} are tangent along a codimension-1 set",
                    germ.fmt_poly(&pair[0]),
                    germ.fmt_poly(&pair[1])
                )));
            }
            for k in (j + 1)..factors.len() {
                let triple = vec![factors[i].clone(), factors[j].clone(), factors[k].clone()];
                if local_dim(germ, triple.clone()) >= n - 2 {
                    return Ok(Verdict::fails(format!(
                        "{} meet along a codimension-1 set",
                        fmt_list(germ, &triple)
                    )));
                }
            }
        }
    }
    Ok(Verdict::holds("components pairwise transversal, no triple intersections in codimension 1"))
}

/// For free germs, the decided verdicts among (B), (D) and (G) must agree.
pub fn crosscheck_free_equivalences(
    germ: &DivisorGerm,
    b: &Verdict,
    d: &Verdict,
    g: &Verdict,
) -> Result<Option<EquivalenceTriple>> {
    if !germ.is_free() {
        return Ok(None);
    }
    let decided: Vec<bool> = [b, d, g].iter().filter_map(|v| v.as_bool()).collect();
    if decided.windows(2).any(|w| w[0] != w[1]) {
        return Err(CoreError::Consistency(format!(
            "free germ {} has (B, D, G) = ({:?}, {:?}, {:?})",
            germ.fmt_poly(germ.h()),
            b.value,
            d.value,
            g.value
        )));
    }
    Ok(Some(EquivalenceTriple {
        normal_crossing_codim1: b.value,
        jacobian_radical: d.value,
        jacobian_eq_conductor: g.value,
    }))
}

/// Linear coordinate changes tried when splitting off passive variables:
/// the identity and the shears `x_i -> x_i + c x_j`.
fn coordinate_schedule(n: usize) -> Vec<Option<(usize, usize, i64)>> {
    let mut out = vec![None];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Some((i, j, 1)));
                out.push(Some((i, j, -1)));
            }
        }
    }
    out
}

/// A Gorenstein singular locus of codimension one forces a suspension of a
/// quasihomogeneous plane curve; verify this on the germ.
pub fn classify_singular_locus(germ: &DivisorGerm, gorenstein: GorensteinVerdict) -> Result<Classification> {
    let not = |why: &str| Classification {
        verdict: ClassVerdict::NotApplicable,
        coordinate_change: None,
        passive_vars: Vec::new(),
        euler_field: None,
        diagnostic: Some(why.to_string()),
    };
    match gorenstein {
        GorensteinVerdict::Gorenstein => {}
        GorensteinVerdict::Empty => return Ok(not("singular locus is empty")),
        GorensteinVerdict::NotGorenstein => return Ok(not("singular locus is not Gorenstein")),
        GorensteinVerdict::Undecided => return Ok(not("Gorenstein property undecided")),
    }
    let n = germ.n();
    if germ.jacobian_pullback().dim() != Some(n.saturating_sub(2)) {
        return Ok(not("singular locus is not of codimension 1 in D"));
    }
    for step in coordinate_schedule(n) {
        let mut values: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let mut change = None;
        if let Some((i, j, c)) = step {
            values[i] = &values[i] + &Poly::var(n, j).scale(&Q::from_integer(c.into()));
            let v = germ.vars();
            change = Some(format!("{} -> {} {} {}", v[i], v[i], if c > 0 { "+" } else { "-" }, v[j]));
        }
        let h = germ.h().compose(&values);
        let active: Vec<usize> = (0..n).filter(|&i| h.involves(i)).collect();
        if active.len() != 2 {
            continue;
        }
        let mut map = vec![0; n];
        for (k, &v) in active.iter().enumerate() {
            map[v] = k;
        }
        let names: Vec<String> = active.iter().map(|&i| germ.vars()[i].clone()).collect();
        let curve = DivisorGerm::with_seed(names.clone(), h.rename(2, &map), germ.seed())?;
        let Some(euler) = curve.euler_field() else {
            return Err(CoreError::Consistency(format!(
                "curve factor {} of a germ with Gorenstein codimension-1 singular locus is not quasihomogeneous",
                curve.fmt_poly(curve.h())
            )));
        };
        return Ok(Classification {
            verdict: ClassVerdict::SuspensionOfQuasihomogeneousPlaneCurve,
            coordinate_change: change,
            passive_vars: (0..n).filter(|i| !active.contains(i)).map(|i| germ.vars()[i].clone()).collect(),
            euler_field: Some(euler.fmt_with(&names)),
            diagnostic: None,
        });
    }
    Ok(not("no plane curve factor found within the coordinate schedule"))
}

struct Timer {
    on: bool,
    last: Instant,
    log: BTreeMap<String, u64>,
}

impl Timer {
    fn lap(&mut self, name: &str) {
        if self.on {
            let now = Instant::now();
            self.log.insert(name.to_string(), (now - self.last).as_micros() as u64);
            self.last = now;
        }
    }
}

struct Ledger(Vec<ConsistencyEntry>);

impl Ledger {
    fn check(&mut self, name: &str, holds: bool, detail: impl Into<String>) -> Result<()> {
        let detail = detail.into();
        if !holds {
            return Err(CoreError::Consistency(format!("{name}: {detail}")));
        }
        self.0.push(ConsistencyEntry { name: name.to_string(), detail });
        Ok(())
    }
}

/// Run every check on `germ` and cross-validate the results.
pub fn analyze(germ: &DivisorGerm, opts: &AnalyzeOptions) -> Result<DivisorReport> {
    let mut timer = Timer { on: opts.timings, last: Instant::now(), log: BTreeMap::new() };
    let n = germ.n();
    let vars = germ.vars();
    let factors = opts.factors.as_deref();
    if let Some(f) = factors {
        checked_factors(germ, f)?;
    }

    let freeness = germ.freeness();
    let free = match &freeness.saito {
        Some(s) => {
            let unit = MeroFraction { xi: s.unit_num.clone(), g: s.unit_den.clone() };
            Verdict::holds(format!("Saito determinant = ({}) · h", unit.fmt_with(vars)))
        }
        None => Verdict::fails(format!("Der(-log D) needs {} > {n} generators", freeness.generators)),
    };
    let euler = germ.euler_field();
    let euler_homogeneous = match &euler {
        Some(e) => Verdict::holds(format!("χ = {}", e.fmt_with(vars))),
        None => Verdict::fails("h ∉ <∂h> in the local ring"),
    };
    timer.lap("derivations");

    let d = check_condition_d(germ);
    timer.lap("radical");

    let (norm, norm_reason) = match &opts.branches {
        Some(b) => (Some(NormalizationData::from_branches(germ, b.clone())?), None),
        None => match NormalizationData::compute(germ, factors, opts.precision) {
            Ok(data) => (Some(data), None),
            Err(CoreError::Unsupported(why)) => (None, Some(why)),
            Err(e) => return Err(e),
        },
    };
    timer.lap("normalization");

    let j = FractionalIdeal::jacobian(germ)?;
    let r = residue_module(germ)?;
    let r_dual = r.dual()?;
    let (mu, _) = r.min_generators();
    let contains_unit = r.one_is_minimal_generator();
    timer.lap("residues");

    let mut c = check_condition_c(&r, norm.as_ref())?;
    let mut g = check_condition_g(germ, norm.as_ref())?;
    if let Some(why) = &norm_reason {
        for v in [&mut c, &mut g] {
            if v.value == Decision::Undecided {
                v.reason = Some(why.clone());
            }
        }
    }
    let f = normal_crossing_verdict(germ, factors, &d)?;
    let b = normal_crossing_codim1(germ, factors)?;
    timer.lap("conditions");

    let gorenstein = if germ.is_smooth() {
        GorensteinVerdict::Empty
    } else if !germ.is_free() {
        GorensteinVerdict::Undecided
    } else if mu == 2 && contains_unit {
        GorensteinVerdict::Gorenstein
    } else {
        GorensteinVerdict::NotGorenstein
    };
    let triple = crosscheck_free_equivalences(germ, &b, &d, &g)?;
    let classification = classify_singular_locus(germ, gorenstein)?;
    timer.lap("classification");

    let mut ledger = Ledger(Vec::new());
    let one = FractionalIdeal::unit(germ);
    let o_tilde = norm.as_ref().and_then(|x| x.normalization.as_ref());
    let cond = norm.as_ref().and_then(|x| x.conductor.as_ref());

    let mut chain = vec![("J_D", &j), ("R_D^∨", &r_dual)];
    if let Some(cd) = cond {
        chain.push(("C_D", cd));
    }
    chain.push(("O_D", &one));
    if let Some(o) = o_tilde {
        chain.push(("Õ_D", o));
    }
    chain.push(("R_D", &r));
    for w in chain.windows(2) {
        let holds = w[1].1.includes(w[0].1)?;
        ledger.check("inclusion_chain", holds, format!("{} ⊆ {}", w[0].0, w[1].0))?;
    }
    if let Some(o) = o_tilde {
        let gens = o.generators();
        let closed = gens.iter().all(|a| {
            gens.iter().all(|b| o.contains(&MeroFraction { xi: &a.xi * &b.xi, g: &a.g * &b.g }))
        });
        ledger.check("normalization_is_ring", closed, "products of generators of Õ_D lie in Õ_D")?;
        if let Some(cd) = cond {
            ledger.check("conductor_dual_is_normalization", cd.dual()?.equals(o)?, "C_D^∨ = Õ_D")?;
        }
    }
    ledger.check(
        "residues_cyclic_iff_smooth",
        (mu == 1) == germ.is_smooth(),
        format!("R_D has {mu} generator(s), germ {}smooth", if germ.is_smooth() { "" } else { "not " }),
    )?;
    if germ.is_free() {
        ledger.check("free_implies_jacobian_is_residue_dual", r_dual.equals(&j)?, "R_D^∨ = J_D")?;
        ledger.check("free_implies_jacobian_reflexive", j.dual()?.dual()?.equals(&j)?, "J_D^∨∨ = J_D")?;
        if let (Some(cv), Some(gv)) = (c.as_bool(), g.as_bool()) {
            ledger.check("free_implies_C_iff_G", cv == gv, format!("(C) = (G) = {cv}"))?;
        }
        if let Some(t) = &triple {
            ledger.check("B_D_G_agree", true, format!("{:?}", [t.normal_crossing_codim1, t.jacobian_radical, t.jacobian_eq_conductor]))?;
        }
        ledger.check(
            "euler_iff_unit_generator",
            euler.is_some() == contains_unit,
            format!("euler homogeneous = 1 is a minimal generator of R_D = {contains_unit}"),
        )?;
    }
    if b.value == Decision::True {
        ledger.check("B_implies_C", c.value != Decision::False, "normal crossing in codimension 1 gives (C)")?;
    }
    if f.value == Decision::True {
        ledger.check("F_implies_B", b.value != Decision::False, "normal crossing at the origin gives (B)")?;
    }
    if classification.verdict == ClassVerdict::SuspensionOfQuasihomogeneousPlaneCurve {
        ledger.check(
            "gorenstein_codim1_is_quasihomogeneous_suspension",
            true,
            format!("curve factor with Euler field {}", classification.euler_field.as_deref().unwrap_or("")),
        )?;
    }

    let mut direct_sum = None;
    if let Some(fs) = factors {
        let (idem, sum) = component_idempotents(germ, fs)?;
        let holds = r.equals(&sum)?;
        let idem_text = idem.iter().map(|e| e.fmt_with(vars)).collect::<Vec<_>>().join(", ");
        direct_sum = Some(if holds {
            Verdict::holds(format!("R_D = ⊕ O_(D_i), idempotents {idem_text}"))
        } else {
            Verdict::fails(format!("R_D ≠ ⊕ O_(D_i) spanned by idempotents {idem_text}"))
        });
        if let Some(cv) = c.as_bool() {
            let transversal = pairwise_transversal(germ, fs);
            ledger.check(
                "direct_sum_iff_C_and_transversal",
                holds == (cv && transversal),
                format!("direct sum {holds}, (C) {cv}, transversal {transversal}"),
            )?;
        }
        if g.value == Decision::True {
            let smooth = fs.iter().all(|p| germ.local(vec![p.clone()]).with(&p.gradient()).is_unit());
            ledger.check("conductor_equality_implies_smooth_components", smooth, "J_D = C_D and all components smooth")?;
        }
    }
    timer.lap("consistency");

    let certification_bound = match norm.as_ref().map(|x| &x.kind) {
        Some(NormalizationKind::Curve { bound, .. }) => Some(*bound),
        _ => None,
    };
    let modules = Modules {
        jacobian: germ.partials().iter().map(|p| germ.fmt_poly(p)).collect(),
        log_derivations: germ.log_derivations().iter().map(|v| v.fmt_with(vars)).collect(),
        residue_module: r.fmt_tidy(),
        normalization: o_tilde.map(FractionalIdeal::fmt_tidy),
        conductor: cond.map(FractionalIdeal::fmt_tidy),
    };
    let normalization = norm.as_ref().map(|x| NormalizationSummary {
        kind: x.kind.clone(),
        branches: x.branches.iter().map(|b| BranchJson::from_param(b, vars)).collect(),
    });
    Ok(DivisorReport {
        schema: SCHEMA,
        germ: GermSummary { vars: vars.to_vec(), h: germ.fmt_poly(germ.h()) },
        free,
        euler_homogeneous,
        jacobian_radical: d,
        jacobian_eq_conductor: g,
        residues_weakly_holomorphic: c,
        normal_crossing_at_origin: f,
        normal_crossing_codim1: b,
        gorenstein_singular_locus: gorenstein,
        mu_residues: MuResidues { generators: mu, contains_unit },
        equivalence_triple: triple,
        classification,
        direct_sum,
        modules,
        normalization,
        consistency: ledger.0,
        provenance: Provenance {
            seed: germ.seed(),
            precision: opts.precision,
            nzd_budget: NZD_BUDGET,
            certification_bound,
            timings: opts.timings.then_some(timer.log),
        },
    })
}
