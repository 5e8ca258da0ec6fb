//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::fmt::Display;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use logres_core::branch::BranchParam;
use logres_core::corpus::corpus;
use logres_core::criteria::{analyze, check_condition_c, AnalyzeOptions};
use logres_core::fractional::FractionalIdeal;
use logres_core::normalization::NormalizationData;
use logres_core::report::Decision;
use logres_core::residues::{
    direct_sum_check, residue, residue_certificates, residue_module, sigma_check, GorensteinVerdict, LogOneForm,
};
use logres_core::{DivisorGerm, MeroFraction};
use logres_engine::{q, Ideal, Module, Monomial, Poly, Vector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Display) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn ok<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn germ(vars: &[&str], h: &str) -> Result<DivisorGerm, String> {
    ok(DivisorGerm::parse(vars, h))
}

fn polys(g: &DivisorGerm, ps: &[&str]) -> Result<Vec<Poly>, String> {
    ps.iter().map(|p| ok(g.poly(p))).collect()
}

fn frac(g: &DivisorGerm, xi: &str, den: &str) -> Result<MeroFraction, String> {
    ok(MeroFraction::new(g, ok(g.poly(xi))?, ok(g.poly(den))?))
}

fn ideal(g: &DivisorGerm, gens: &[&str]) -> Result<FractionalIdeal, String> {
    ok(FractionalIdeal::from_ideal(g, polys(g, gens)?))
}

/// The exact plane branch `t ↦ (x(t), y(t))`.
fn plane_branch(x: Poly, y: Poly) -> BranchParam {
    BranchParam::curve(2, &[(0, x), (1, y)], None)
}

fn t() -> Poly {
    Poly::var(1, 0)
}

/// `ord_t f(γ(t))` for a fraction `f`; `None` if `f` vanishes on the branch.
fn valuation(b: &BranchParam, f: &MeroFraction) -> Option<i64> {
    Some(b.order(&f.xi)? as i64 - b.order(&f.g)? as i64)
}

/// Residues of the log basis `(y dx − m x dy)/h` on `h = x(x + y^m)` have
/// valuation `1 − m` along `{x = 0}`; weakly holomorphic exactly for `m = 1`.
fn tangency_residues() -> Check {
    for m in 1..=3u32 {
        let g = germ(&["x", "y"], &format!("x*(x + y^{m})"))?;
        let form = ok(LogOneForm::new(&g, polys(&g, &["y", &format!("-{m}*x")])?))?;
        let rho = ok(residue(&g, &form))?;
        let axis = plane_branch(Poly::zero(1), t());
        let v = valuation(&axis, &rho).ok_or("residue vanishes on {x = 0}")?;
        ensure(v == 1 - m as i64, format!("m = {m}: valuation {v}, expected {}", 1 - m as i64))?;
        let norm = ok(NormalizationData::from_factors(&g, &polys(&g, &["x", &format!("x + y^{m}")])?))?;
        let holo = ok(norm.is_weakly_holomorphic(&rho))?;
        ensure(holo == (m == 1), format!("m = {m}: weakly holomorphic = {holo}"))?;
    }
    Ok(())
}

fn node_residue() -> Check {
    let start = Instant::now();
    let g = germ(&["x", "y"], "x*y")?;
    let dx_over_x = ok(LogOneForm::new(&g, polys(&g, &["y", "0"])?))?;
    let rho = ok(residue(&g, &dx_over_x))?;
    ensure(rho.equals(&g, &frac(&g, "y", "x + y")?), "res(dx/x) ≠ y/(x+y)")?;
    let j = ok(FractionalIdeal::jacobian(&g))?;
    ensure(ok(j.equals(&ideal(&g, &["x", "y"])?))?, "J_D ≠ <x, y>")?;
    let expected = ok(FractionalIdeal::make(&g, &[(g.poly("1").unwrap(), g.poly("1").unwrap()), (g.poly("y").unwrap(), g.poly("x + y").unwrap())]))?;
    let r = ok(residue_module(&g))?;
    ensure(ok(r.equals(&expected))?, "R_D ≠ <1, y/(x+y)>")?;
    ensure(ok(ok(j.dual())?.equals(&expected))?, "J_D^∨ ≠ <1, y/(x+y)>")?;
    ensure(start.elapsed() < Duration::from_secs(1), format!("took {:?}", start.elapsed()))
}

fn three_lines_witness() -> Check {
    let g = germ(&["x", "y"], "x*y*(x - y)")?;
    // (1/(x − y)) (dx/x − dy/y)
    let form = ok(LogOneForm::new(&g, polys(&g, &["y", "-x"])?))?;
    let rho = ok(residue(&g, &form))?;
    let axis = plane_branch(Poly::zero(1), t());
    let (num, den) = (axis.pullback(&rho.xi), axis.pullback(&rho.g));
    ensure((&num * &t() + den).is_zero(), "residue does not restrict to −1/y on {x = 0}")?;
    let norm = ok(NormalizationData::compute(&g, None, 0))?;
    ensure(!ok(norm.is_weakly_holomorphic(&rho))?, "−1/y accepted as weakly holomorphic")?;
    let r = ok(residue_module(&g))?;
    ensure(r.contains(&rho), "residue not in R_D")?;
    let verdict = ok(check_condition_c(&r, Some(&norm)))?;
    ensure(verdict.value == Decision::False, format!("(C) = {:?}", verdict.value))?;
    ensure(verdict.witness.is_some(), "no witness")
}

fn direct_sums() -> Check {
    for (vars, h, fs) in [(&["x", "y"][..], "x*y", &["x", "y"][..]), (&["x", "y", "z"][..], "x*y*z", &["x", "y", "z"][..])] {
        let g = germ(vars, h)?;
        let d = ok(direct_sum_check(&g, &polys(&g, fs)?))?;
        ensure(d.holds, format!("{h}: R_D is not the direct sum"))?;
        for e in &d.idempotents {
            let square = MeroFraction { xi: &e.xi * &e.xi, g: &e.g * &e.g };
            ensure(square.equals(&g, e), format!("{h}: e² ≢ e"))?;
        }
        let den = d.idempotents.iter().fold(Poly::one(g.n()), |acc, e| &acc * &e.g);
        let num = d.idempotents.iter().fold(Poly::zero(g.n()), |acc, e| {
            &acc + &(&e.xi * &den.exact_div(&e.g).expect("factor of the product"))
        });
        ensure(g.congruent(&num, &den), format!("{h}: Σ e_i ≢ 1"))?;
    }
    Ok(())
}

/// Leibniz expansion, independent of the engine's determinant.
fn leibniz_det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for i in 0..k {
                let mut p = p.clone();
                p.insert(i, k - 1);
                out.push(p);
            }
        }
        out
    }
    let n = m.len();
    let mut det = Poly::zero(nvars);
    for p in perms(n) {
        let inversions = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term = (0..n).fold(Poly::one(nvars), |acc, i| &acc * &m[i][p[i]]);
        det = if inversions % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

fn freeness() -> Check {
    let g = germ(&["x", "y", "z"], "x*y*(x + y)*(x + y*z)")?;
    let saito = g.freeness().saito.clone().ok_or("arrangement not certified free")?;
    let rows: Vec<Vec<Poly>> = saito.rows.iter().map(|r| r.coeffs.clone()).collect();
    let det = leibniz_det(&rows, g.n());
    ensure(&det * &saito.unit_den == &saito.unit_num * g.h(), "det · den ≠ unit · h")?;
    ensure(saito.unit_num.is_unit_local() && saito.unit_den.is_unit_local(), "Saito factor is not a unit")?;

    let umbrella = germ(&["x", "y", "z"], "x^2 - y^2*z")?;
    ensure(!umbrella.is_free(), "Whitney umbrella reported free")?;

    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let mut tested = 0;
    while tested < 24 {
        let h = random_poly(&mut rng, 2, 3, 4);
        if h.is_zero() || !h.constant_term().is_zero() || !logres_engine::gcd::is_squarefree(&h) {
            continue;
        }
        let g = ok(DivisorGerm::new(vec!["x".into(), "y".into()], h))?;
        if g.is_smooth() {
            continue;
        }
        ensure(g.is_free(), format!("plane curve {} not free", g.fmt_poly(g.h())))?;
        tested += 1;
    }
    Ok(())
}

fn cusp_pipeline() -> Check {
    let g = germ(&["x", "y"], "x^2 - y^3")?;
    let branch = plane_branch(&t() * &(&t() * &t()), &t() * &t());
    ensure(branch.pullback(g.h()).is_zero(), "t ↦ (t³, t²) is not on the cusp")?;

    ensure(ok(ok(FractionalIdeal::jacobian(&g))?.equals(&ideal(&g, &["x", "y^2"])?))?, "J_D ≠ <x, y²>")?;

    // Value semigroup generated by ord x = 3 and ord y = 2; its conductor is
    // the first value after the last gap.
    let ords = [branch.order(&g.poly("x").unwrap()).unwrap(), branch.order(&g.poly("y").unwrap()).unwrap()];
    let in_semigroup = |v: u32| (0..=v / ords[0]).any(|a| (v - a * ords[0]).is_multiple_of(ords[1]));
    let c = (1..=ords[0] * ords[1]).rev().find(|&v| !in_semigroup(v - 1)).unwrap_or(0);
    ensure(c == 2, format!("semigroup conductor {c}"))?;
    let norm = ok(NormalizationData::compute(&g, None, 0))?;
    let cond = norm.conductor.clone().ok_or("no conductor")?;
    for f in cond.generators().iter().filter(|f| !g.vanishes(&f.xi)) {
        let v = valuation(&branch, f).ok_or("nonzero conductor generator vanishes on the branch")?;
        ensure(v >= c as i64, format!("conductor generator of valuation {v}"))?;
    }
    ensure(ok(cond.equals(&ideal(&g, &["x", "y"])?))?, "C_D ≠ <x, y>")?;

    let r = ok(residue_module(&g))?;
    let y_over_x = frac(&g, "y", "x")?;
    ensure(valuation(&branch, &y_over_x) == Some(-1), "y/x is not t⁻¹")?;
    let expected = ok(FractionalIdeal::make(&g, &[(g.poly("1").unwrap(), g.poly("1").unwrap()), (y_over_x.xi, y_over_x.g)]))?;
    ensure(ok(r.equals(&expected))?, "R_D ≠ <1, y/x>")?;

    let rep = ok(analyze(&g, &AnalyzeOptions::default()))?;
    ensure(rep.mu_residues.generators == 2 && rep.mu_residues.contains_unit, "mu_residues ≠ (2, true)")?;
    ensure(rep.gorenstein_singular_locus == GorensteinVerdict::Gorenstein, "not Gorenstein")?;
    let triple = rep.equivalence_triple.ok_or("no equivalence triple")?;
    ensure(
        [triple.normal_crossing_codim1, triple.jacobian_radical, triple.jacobian_eq_conductor] == [Decision::False; 3],
        format!("triple {triple:?}"),
    )?;
    let chi = g.euler_field().ok_or("no Euler field")?;
    let want = polys(&g, &["1/2*x", "1/3*y"])?;
    for (c, w) in chi.coeffs.iter().zip(&want) {
        ensure(c == &(w * &chi.denom), "Euler field is not (1/6)(3x∂x + 2y∂y)")?;
    }
    Ok(())
}

fn equivalence_suites() -> Check {
    for entry in corpus() {
        let name = entry.name;
        let rep = entry.analyze().map_err(|e| format!("{name}: {e}"))?;
        let has = |c: &str| rep.consistency.iter().any(|e| e.name == c);
        ensure(rep.consistency.iter().filter(|e| e.name == "inclusion_chain").count() >= 3, format!("{name}: chain"))?;
        ensure(has("residues_cyclic_iff_smooth"), format!("{name}: cyclic ⟺ smooth"))?;
        let g = ok(entry.germ())?;
        let Some(saito) = g.freeness().saito.clone() else { continue };
        ensure(has("free_implies_jacobian_is_residue_dual"), format!("{name}: J = R^∨"))?;
        ensure(has("free_implies_jacobian_reflexive"), format!("{name}: J^∨∨ = J"))?;
        let (c, gv) = (rep.residues_weakly_holomorphic.value, rep.jacobian_eq_conductor.value);
        ensure(c == Decision::Undecided || gv == Decision::Undecided || c == gv, format!("{name}: (C) ≠ (G)"))?;

        let forms = ok(g.log_forms_basis(&saito))?;
        for form in &forms {
            let certs = ok(residue_certificates(&g, form, 2))?;
            ensure(certs.len() == 2 && certs[0] != certs[1], format!("{name}: fewer than two certificates"))?;
            ensure(certs[0].residue(form).equals(&g, &certs[1].residue(form)), format!("{name}: residue depends on certificate"))?;
            for field in &saito.rows {
                ensure(ok(sigma_check(&g, field, form))?, format!("{name}: sigma check failed"))?;
            }
        }
    }
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, terms: usize, max_deg: u32) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut exps = vec![0u32; nvars];
        let deg = rng.gen_range(1..=max_deg);
        for _ in 0..deg {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let c = rng.gen_range(-5i64..=5);
        if c != 0 {
            p = &p + &Poly::term(q(c, 1), Monomial(exps));
        }
    }
    p
}

fn engine_oracles() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for instance in 0..200 {
        let n = rng.gen_range(1..=4);
        let local = rng.gen_bool(0.5);
        let gens: Vec<Poly> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, n, 3, 4)).collect();
        let module = Module::new(1, n, gens.iter().cloned().map(Vector::from_poly).collect(), local);
        let tag = format!("instance {instance} (n = {n}, local = {local})");
        ensure(module.std_basis().is_standard_basis(), format!("{tag}: S-vector with nonzero remainder"))?;

        let mult: Vec<Poly> = gens.iter().map(|_| random_poly(&mut rng, n, 2, 2)).collect();
        let f = gens.iter().zip(&mult).fold(Poly::zero(n), |acc, (g, m)| &acc + &(g * m));
        if !f.is_zero() {
            let (unit, coeffs) = module.certificate(&Vector::from_poly(f.clone())).ok_or(format!("{tag}: member rejected"))?;
            let lhs = &unit * &f;
            let rhs = gens.iter().zip(&coeffs).fold(Poly::zero(n), |acc, (g, c)| &acc + &(g * c));
            ensure(lhs == rhs && !unit.constant_term().is_zero(), format!("{tag}: certificate does not remultiply"))?;
        }
        let ideal = Ideal::new(n, gens.clone(), local);
        ensure(gens.iter().all(|g| ideal.contains(g)), format!("{tag}: generator not a member"))?;

        for s in module.syzygies().gens() {
            ensure(s.dot(&gens).is_zero(), format!("{tag}: syzygy does not annihilate"))?;
        }
    }
    ensure(start.elapsed() < Duration::from_secs(30), format!("200 instances took {:?}", start.elapsed()))
}

fn non_euler_control() -> Check {
    let g = germ(&["x", "y"], "x^4 + y^5 + x*y^4")?;
    let jac = Module::local(1, 2, g.partials().iter().cloned().map(Vector::from_poly).collect());
    let nf = jac.std_basis().normal_form(&Vector::from_poly(g.h().clone()));
    ensure(!nf.is_zero(), "oracle: h ∈ <∂h> locally")?;
    let rep = ok(analyze(&g, &AnalyzeOptions::default()))?;
    ensure(rep.euler_homogeneous.value == Decision::False, "reported Euler homogeneous")?;
    ensure(!rep.mu_residues.contains_unit, "dh/h reported extendable to a basis")
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("node: residue of dx/x and R_D = J_D^∨", node_residue),
        ("x(x + y^m): residue valuations along {x = 0}", tangency_residues),
        ("three lines: (C) fails with residue −1/y", three_lines_witness),
        ("direct sums for xy and xyz with idempotents", direct_sums),
        ("freeness verdicts with Saito determinants", freeness),
        ("cusp pipeline against its parametrization", cusp_pipeline),
        ("equivalence suites on the corpus", equivalence_suites),
        ("engine oracles on 200 random instances", engine_oracles),
        ("non-Euler-homogeneous control", non_euler_control),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
