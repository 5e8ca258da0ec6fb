use std::fmt;
use std::sync::{Arc, OnceLock};

use logres_engine::gcd::{gcd, is_squarefree};
use logres_engine::radical::det;
use logres_engine::{parse, Ideal, Membership, Module, Poly, Vector, Q};
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::residues::LogOneForm;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Reduced hypersurface germ `D = {h = 0}` at the origin of `(C^n, 0)`.
/// Cheap to clone; derived data is computed once and shared.
#[derive(Clone)]
pub struct DivisorGerm(Arc<GermData>);

struct GermData {
    vars: Vec<String>,
    h: Poly,
    partials: Vec<Poly>,
    seed: u64,
    h_ideal: OnceLock<Ideal>,
    jacobian: OnceLock<Ideal>,
    derivations: OnceLock<Vec<VectorField>>,
    freeness: OnceLock<Freeness>,
}

impl fmt::Debug for DivisorGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorGerm({} in {})", self.fmt_poly(self.h()), self.vars().join(","))
    }
}

impl PartialEq for DivisorGerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.vars == other.0.vars && self.0.h == other.0.h)
    }
}

impl DivisorGerm {
    pub fn new(vars: Vec<String>, h: Poly) -> Result<Self> {
        Self::with_seed(vars, h, DEFAULT_SEED)
    }

    pub fn with_seed(vars: Vec<String>, h: Poly, seed: u64) -> Result<Self> {
        if vars.len() != h.nvars() {
            return Err(CoreError::InvalidGerm("variable count does not match the polynomial ring".into()));
        }
        if h.is_zero() {
            return Err(CoreError::InvalidGerm("h = 0".into()));
        }
        if !h.constant_term().is_zero() {
            return Err(CoreError::InvalidGerm("h does not vanish at the origin".into()));
        }
        if !is_squarefree(&h) {
            return Err(CoreError::InvalidGerm("not squarefree".into()));
        }
        let partials = h.gradient();
        Ok(DivisorGerm(Arc::new(GermData {
            vars,
            h,
            partials,
            seed,
            h_ideal: OnceLock::new(),
            jacobian: OnceLock::new(),
            derivations: OnceLock::new(),
            freeness: OnceLock::new(),
        })))
    }

    pub fn parse(vars: &[&str], text: &str) -> Result<Self> {
        let h = parse(text, vars)?;
        Self::new(vars.iter().map(|s| s.to_string()).collect(), h)
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn n(&self) -> usize {
        self.0.vars.len()
    }

    pub fn h(&self) -> &Poly {
        &self.0.h
    }

    pub fn partials(&self) -> &[Poly] {
        &self.0.partials
    }

    pub fn seed(&self) -> u64 {
        self.0.seed
    }

    pub fn poly(&self, text: &str) -> Result<Poly> {
        Ok(parse(text, self.vars())?)
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        p.fmt_with(self.vars())
    }

    /// Local ideal at the origin in the ambient ring.
    pub fn local(&self, gens: Vec<Poly>) -> Ideal {
        Ideal::local(self.n(), gens)
    }

    pub fn h_ideal(&self) -> &Ideal {
        self.0.h_ideal.get_or_init(|| self.local(vec![self.h().clone()]))
    }

    /// `f ≡ 0` in `O_D`. Locally `<h> : f = <h / gcd(h, f)>`, so `f` vanishes
    /// iff that cofactor is a unit at the origin.
    pub fn vanishes(&self, f: &Poly) -> bool {
        f.is_zero() || !self.cofactor(f).constant_term().is_zero()
    }

    /// `h / gcd(h, f)`.
    fn cofactor(&self, f: &Poly) -> Poly {
        self.h().exact_div(&gcd(self.h(), f)).expect("gcd divides h")
    }

    pub fn congruent(&self, a: &Poly, b: &Poly) -> bool {
        self.vanishes(&(a - b))
    }

    /// Preimage `<h, ∂_1 h, ..., ∂_n h>` of the Jacobian ideal in the ambient ring.
    pub fn jacobian_pullback(&self) -> &Ideal {
        self.0.jacobian.get_or_init(|| {
            let mut gens = vec![self.h().clone()];
            gens.extend(self.partials().iter().cloned());
            self.local(gens)
        })
    }

    pub fn is_smooth(&self) -> bool {
        self.jacobian_pullback().is_unit()
    }

    /// Variables that occur in `h`.
    pub fn active_vars(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.h().involves(i)).collect()
    }

    /// `Ok(())` if `q` is a nonzerodivisor on `O_D`, otherwise a witness `w`
    /// with `w ∉ <h>` and `q w ∈ <h>`.
    pub fn nonzerodivisor(&self, q: &Poly) -> std::result::Result<(), Poly> {
        if q.is_zero() {
            return Err(Poly::one(self.n()));
        }
        let w = self.cofactor(q);
        if self.vanishes(&w) {
            Ok(())
        } else {
            Err(w)
        }
    }

    pub fn is_nonzerodivisor(&self, q: &Poly) -> bool {
        self.nonzerodivisor(q).is_ok()
    }

    /// Minimal generators of `Der(-log D)`: the syzygies of `(∂_1 h, ..., ∂_n h, h)`
    /// projected to the first `n` slots.
    pub fn log_derivations(&self) -> &[VectorField] {
        self.0.derivations.get_or_init(|| {
            let n = self.n();
            let mut row: Vec<Vector> = self.partials().iter().cloned().map(Vector::from_poly).collect();
            row.push(Vector::from_poly(self.h().clone()));
            let syz = Module::local(1, n, row).syzygies();
            let projected: Vec<Vector> =
                syz.gens().iter().map(|s| Vector::new(s.comps[..n].to_vec())).filter(|v| !v.is_zero()).collect();
            let der = Module::local(n, n, projected).minimized();
            let fields: Vec<VectorField> = der.gens().iter().map(|v| VectorField::new(v.comps.clone())).collect();
            for f in &fields {
                assert!(self.vanishes(&f.apply(self.h())), "syzygy produced a non-logarithmic field");
            }
            fields
        })
    }

    pub fn is_logarithmic_field(&self, field: &VectorField) -> bool {
        self.vanishes(&field.apply(self.h()))
    }

    pub fn freeness(&self) -> &Freeness {
        self.0.freeness.get_or_init(|| {
            let fields = self.log_derivations();
            let n = self.n();
            if fields.len() != n {
                return Freeness { free: false, generators: fields.len(), saito: None };
            }
            let saito = SaitoMatrix::certify(self, fields.to_vec())
                .expect("n generators of Der(-log D) always satisfy Saito's criterion");
            Freeness { free: true, generators: n, saito: Some(saito) }
        })
    }

    pub fn is_free(&self) -> bool {
        self.freeness().free
    }

    /// A field `χ` with `χ(h) = h` if `h` lies locally in the ideal of its
    /// partial derivatives.
    pub fn euler_field(&self) -> Option<EulerField> {
        let n = self.n();
        let ideal = self.local(self.partials().to_vec());
        match ideal.membership(self.h()) {
            Membership::NotMember { .. } => None,
            Membership::Member { unit, coeffs } => {
                let field = if unit.is_constant() {
                    let inv = unit.constant_term().recip();
                    EulerField { coeffs: coeffs.iter().map(|c| c.scale(&inv)).collect(), denom: Poly::one(n) }
                } else {
                    EulerField { coeffs, denom: unit }
                };
                assert_eq!(
                    VectorField::new(field.coeffs.clone()).apply(self.h()),
                    &field.denom * self.h(),
                    "Euler certificate failed"
                );
                Some(field)
            }
        }
    }

    /// Dual basis of `Ω¹(log D)` for a certified Saito matrix, from the
    /// cofactors: row `k` pairs with field `i` to `δ_ik`.
    pub fn log_forms_basis(&self, m: &SaitoMatrix) -> Result<Vec<LogOneForm>> {
        let n = self.n();
        m.verify(self)?;
        let rows: Vec<Vec<Poly>> = m.rows.iter().map(|r| r.coeffs.clone()).collect();
        let mut forms = Vec::with_capacity(n);
        for k in 0..n {
            let a: Vec<Poly> = (0..n).map(|j| &cofactor(&rows, k, j, n) * &m.unit_den).collect();
            forms.push(LogOneForm::with_unit(self, a, m.unit_num.clone())?);
        }
        for (i, field) in m.rows.iter().enumerate() {
            for (k, form) in forms.iter().enumerate() {
                let pairing = field.dot(&form.a);
                let expected = if i == k { &form.unit * self.h() } else { Poly::zero(n) };
                if pairing != expected {
                    return Err(CoreError::Consistency("dual basis pairing is not the identity".into()));
                }
            }
        }
        Ok(forms)
    }
}

fn cofactor(m: &[Vec<Poly>], r: usize, c: usize, nvars: usize) -> Poly {
    let minor: Vec<Vec<Poly>> = m
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, p)| p.clone()).collect())
        .collect();
    let d = det(&minor, nvars);
    if (r + c).is_multiple_of(2) {
        d
    } else {
        -d
    }
}

/// `δ = Σ coeffs_i ∂_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        VectorField { coeffs }
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.dot(&f.gradient())
    }

    pub fn dot(&self, a: &[Poly]) -> Poly {
        let n = a.first().map_or(0, Poly::nvars);
        self.coeffs.iter().zip(a).fold(Poly::zero(n), |acc, (c, x)| &acc + &(c * x))
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(vars)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({})*d_{v}", c.fmt_with(vars)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `χ = (1/denom) Σ coeffs_i ∂_i` with `χ(h) = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerField {
    pub coeffs: Vec<Poly>,
    pub denom: Poly,
}

impl EulerField {
    pub fn fmt_with(&self, vars: &[String]) -> String {
        let body = VectorField::new(self.coeffs.clone()).fmt_with(vars);
        if self.denom.is_one() {
            body
        } else {
            format!("({body}) / ({})", self.denom.fmt_with(vars))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Freeness {
    pub free: bool,
    /// Minimal number of generators of `Der(-log D)` at the origin.
    pub generators: usize,
    pub saito: Option<SaitoMatrix>,
}

/// Rows are `n` logarithmic fields with `det · unit_den = unit_num · h`,
/// both units at the origin.
#[derive(Clone, Debug)]
pub struct SaitoMatrix {
    pub rows: Vec<VectorField>,
    pub det: Poly,
    pub unit_num: Poly,
    pub unit_den: Poly,
}

impl SaitoMatrix {
    pub fn certify(germ: &DivisorGerm, rows: Vec<VectorField>) -> Result<SaitoMatrix> {
        let n = germ.n();
        if rows.len() != n || rows.iter().any(|r| r.coeffs.len() != n) {
            return Err(CoreError::Consistency("Saito matrix must be square of size n".into()));
        }
        let mat: Vec<Vec<Poly>> = rows.iter().map(|r| r.coeffs.clone()).collect();
        let d = det(&mat, n);
        let (unit_num, unit_den) = match d.exact_div(germ.h()) {
            Some(u) => (u, Poly::one(n)),
            None => match germ.h_ideal().membership(&d) {
                Membership::Member { unit, coeffs } => (coeffs[0].clone(), unit),
                Membership::NotMember { .. } => {
                    return Err(CoreError::Consistency("determinant is not divisible by h".into()))
                }
            },
        };
        let m = SaitoMatrix { rows, det: d, unit_num, unit_den };
        m.verify(germ)?;
        Ok(m)
    }

    pub fn verify(&self, germ: &DivisorGerm) -> Result<()> {
        for r in &self.rows {
            if !germ.is_logarithmic_field(r) {
                return Err(CoreError::Consistency("Saito matrix row is not logarithmic".into()));
            }
        }
        if &self.det * &self.unit_den != &self.unit_num * germ.h() {
            return Err(CoreError::Consistency("det · unit_den != unit_num · h".into()));
        }
        if !self.unit_num.is_unit_local() || !self.unit_den.is_unit_local() {
            return Err(CoreError::Consistency("det / h is not a unit".into()));
        }
        Ok(())
    }

    /// `det / h` evaluated at the origin.
    pub fn unit_at_origin(&self) -> Q {
        self.unit_num.constant_term() / self.unit_den.constant_term()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use logres_engine::q;

    fn germ(vars: &[&str], h: &str) -> DivisorGerm {
        DivisorGerm::parse(vars, h).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(DivisorGerm::parse(&["x"], "x^2"), Err(CoreError::InvalidGerm(m)) if m == "not squarefree"));
        assert!(DivisorGerm::parse(&["x"], "x + 1").is_err());
        assert!(DivisorGerm::parse(&["x"], "0").is_err());
    }

    #[test]
    fn jacobian_ideals() {
        let node = germ(&["x", "y"], "x*y");
        assert!(node.jacobian_pullback().equals(&node.local(vec![node.poly("x").unwrap(), node.poly("y").unwrap()])));
        let cusp = germ(&["x", "y"], "x^2 - y^3");
        let expected = cusp.local(vec![cusp.poly("x").unwrap(), cusp.poly("y^2").unwrap()]);
        assert!(cusp.jacobian_pullback().equals(&expected));
        assert!(germ(&["x"], "x").is_smooth());
    }

    fn same_module(g: &DivisorGerm, fields: &[&[&str]]) -> bool {
        let n = g.n();
        let vecs = |fs: Vec<Vec<Poly>>| Module::local(n, n, fs.into_iter().map(Vector::new).collect());
        let expected = vecs(fields.iter().map(|f| f.iter().map(|s| g.poly(s).unwrap()).collect()).collect());
        let got = vecs(g.log_derivations().iter().map(|f| f.coeffs.clone()).collect());
        expected.equals(&got)
    }

    #[test]
    fn log_derivation_examples() {
        let node = germ(&["x", "y"], "x*y");
        assert!(same_module(&node, &[&["x", "0"], &["0", "y"]]));
        let cusp = germ(&["x", "y"], "x^2 - y^3");
        assert!(same_module(&cusp, &[&["3*x", "2*y"], &["-3*y^2", "-2*x"]]));
        let line = germ(&["x", "y"], "x");
        assert!(same_module(&line, &[&["x", "0"], &["0", "1"]]));
    }

    #[test]
    fn freeness_examples() {
        let xyz = germ(&["x", "y", "z"], "x*y*z");
        let f = xyz.freeness();
        assert!(f.free);
        let s = f.saito.as_ref().unwrap();
        assert_eq!(&s.det * &s.unit_den, &s.unit_num * xyz.h());
        assert!(!germ(&["x", "y", "z"], "x^2 - y^2*z").is_free());
        assert!(germ(&["x", "y", "z"], "x*y*(x+y)*(x+y*z)").is_free());
        assert!(germ(&["x", "y"], "x^4 + y^5 + x*y^4").is_free());
    }

    #[test]
    fn euler_fields() {
        let cusp = germ(&["x", "y"], "x^2 - y^3");
        let chi = cusp.euler_field().unwrap();
        assert!(chi.denom.is_one());
        assert_eq!(chi.coeffs, vec![cusp.poly("x").unwrap().scale(&q(1, 2)), cusp.poly("y").unwrap().scale(&q(1, 3))]);
        assert!(germ(&["x"], "x").euler_field().is_some());
        assert!(germ(&["x", "y"], "x^4 + y^5 + x*y^4").euler_field().is_none());
    }

    #[test]
    fn dual_forms_of_normal_crossings() {
        let xy = germ(&["x", "y"], "x*y");
        let rows = vec![
            VectorField::new(vec![xy.poly("x").unwrap(), xy.poly("0").unwrap()]),
            VectorField::new(vec![xy.poly("0").unwrap(), xy.poly("y").unwrap()]),
        ];
        let m = SaitoMatrix::certify(&xy, rows).unwrap();
        let forms = xy.log_forms_basis(&m).unwrap();
        // dx/x = y dx / (xy)
        assert_eq!(forms[0].a, vec![xy.poly("y").unwrap(), xy.poly("0").unwrap()]);
        assert_eq!(forms[1].a, vec![xy.poly("0").unwrap(), xy.poly("x").unwrap()]);
    }
}
