//! Weak normalization data: the normalization `Õ_D`, the conductor `C_D` and
//! the test for weak holomorphy.
//!
//! Three kinds of input are understood:
//! * plane curve germs (possibly suspended by passive variables), given by
//!   branch parametrizations or expanded automatically by Newton–Puiseux;
//! * germs factored into smooth components, whose normalization is the
//!   direct sum of the components;
//! * exact polynomial charts of the normalization (e.g. the umbrella), for
//!   which only the weak holomorphy test is available.

use logres_engine::{Ideal, Monomial, Poly, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::branch::BranchParam;
use crate::error::{CoreError, Result};
use crate::fractional::{FractionalIdeal, MeroFraction};
use crate::germ::DivisorGerm;
use crate::puiseux::plane_branches;
use crate::residues::{component_idempotents, validate_factors};

/// Extra terms kept beyond twice the Milnor number when expanding branches.
pub const PRECISION_MARGIN: u32 = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizationKind {
    Smooth,
    Curve {
        /// The two ambient coordinates the branches live in.
        plane: [usize; 2],
        milnor: usize,
        delta: usize,
        /// Conductor exponents, one per branch.
        conductor: Vec<u32>,
        /// Series precision needed to certify the conductor.
        bound: u32,
    },
    Components,
    Charts,
}

#[derive(Clone, Debug)]
pub struct NormalizationData {
    pub germ: DivisorGerm,
    pub branches: Vec<BranchParam>,
    pub kind: NormalizationKind,
    /// `Õ_D` as a fractional ideal, when computable.
    pub normalization: Option<FractionalIdeal>,
    /// `C_D = Õ_D^∨`, when computable.
    pub conductor: Option<FractionalIdeal>,
}

impl NormalizationData {
    /// Normalization of a germ without user-supplied data: smooth germs,
    /// smooth factorizations, and plane curves via Newton–Puiseux.
    pub fn compute(germ: &DivisorGerm, factors: Option<&[Poly]>, precision: u32) -> Result<Self> {
        if germ.is_smooth() {
            return Ok(Self::smooth(germ));
        }
        if let Some(f) = factors {
            if let Ok(data) = Self::from_factors(germ, f) {
                return Ok(data);
            }
        }
        let active = germ.active_vars();
        if active.len() != 2 {
            return Err(CoreError::Unsupported(
                "normalization needs a plane curve, smooth components or explicit charts".into(),
            ));
        }
        let plane = [active[0], active[1]];
        let h2 = restrict(germ.h(), plane);
        let mu = milnor(&h2)?;
        let n = precision.max(2 * mu as u32 + PRECISION_MARGIN);
        let branches = plane_branches(&h2, n)?
            .into_iter()
            .map(|b| BranchParam::curve(germ.n(), &[(plane[0], b.x), (plane[1], b.y)], b.truncation))
            .collect();
        Self::from_branches(germ, branches)
    }

    pub fn smooth(germ: &DivisorGerm) -> Self {
        NormalizationData {
            germ: germ.clone(),
            branches: Vec::new(),
            kind: NormalizationKind::Smooth,
            normalization: Some(FractionalIdeal::unit(germ)),
            conductor: Some(FractionalIdeal::unit(germ)),
        }
    }

    /// `Õ_D = ⊕ O_{D_i}` for a factorization into smooth components.
    pub fn from_factors(germ: &DivisorGerm, factors: &[Poly]) -> Result<Self> {
        validate_factors(germ, factors)?;
        for f in factors {
            let d = germ.local(vec![f.clone()]).with(&f.gradient());
            if !d.is_unit() {
                return Err(CoreError::InvalidFactors(format!("component {} is singular", germ.fmt_poly(f))));
            }
        }
        let (_, sum) = component_idempotents(germ, factors)?;
        let conductor = sum.dual()?;
        Ok(NormalizationData {
            germ: germ.clone(),
            branches: Vec::new(),
            kind: NormalizationKind::Components,
            normalization: Some(sum),
            conductor: Some(conductor),
        })
    }

    /// Validate user-supplied parametrizations and derive what they determine.
    pub fn from_branches(germ: &DivisorGerm, branches: Vec<BranchParam>) -> Result<Self> {
        if branches.is_empty() {
            return if germ.is_smooth() {
                Ok(Self::smooth(germ))
            } else {
                Err(CoreError::InvalidBranch("no branches given".into()))
            };
        }
        for b in &branches {
            if b.series.len() != germ.n() {
                return Err(CoreError::InvalidBranch("branch variable count does not match the germ".into()));
            }
            for s in b.series.iter().flatten() {
                if s.nvars() != b.params || !s.constant_term().is_zero() {
                    return Err(CoreError::InvalidBranch("branch must pass through the origin".into()));
                }
            }
            if !b.pullback(germ.h()).is_zero() {
                return Err(CoreError::InvalidBranch("parametrization does not lie on h = 0".into()));
            }
        }
        if branches.iter().all(|b| b.params == 1) {
            Self::curve(germ, branches)
        } else if branches.iter().all(|b| b.params >= 2 && b.truncation.is_none()) {
            if !branches.iter().all(|b| b.params == germ.n() - 1) {
                return Err(CoreError::InvalidBranch("charts must have n - 1 parameters".into()));
            }
            Ok(NormalizationData {
                germ: germ.clone(),
                branches,
                kind: NormalizationKind::Charts,
                normalization: None,
                conductor: None,
            })
        } else {
            Err(CoreError::InvalidBranch("mixed or truncated charts are not supported".into()))
        }
    }

    fn curve(germ: &DivisorGerm, branches: Vec<BranchParam>) -> Result<Self> {
        let listed = branches[0].listed();
        if listed.len() != 2 || branches.iter().any(|b| b.listed() != listed) {
            return Err(CoreError::InvalidBranch("curve branches must all list the same two variables".into()));
        }
        let plane = [listed[0], listed[1]];
        if germ.active_vars().iter().any(|v| !listed.contains(v)) {
            return Err(CoreError::InvalidBranch("h involves a variable the branches do not list".into()));
        }
        for b in &branches {
            if b.exponent_gcd() != 1 {
                return Err(CoreError::InvalidBranch("parametrization is not primitive".into()));
            }
        }
        for i in 0..branches.len() {
            for j in (i + 1)..branches.len() {
                if branches[i].series == branches[j].series {
                    return Err(CoreError::InvalidBranch("duplicate branch".into()));
                }
            }
        }
        let h2 = restrict(germ.h(), plane);
        let mu = milnor(&h2)?;
        let r = branches.len();
        if !(mu + r - 1).is_multiple_of(2) {
            return Err(CoreError::InvalidBranch(format!(
                "{r} branch(es) cannot match Milnor number {mu}: branches are missing or repeated"
            )));
        }
        let delta = (mu + r - 1) / 2;
        let bound = 2 * delta as u32;
        if let Some(n) = branches.iter().filter_map(|b| b.truncation).min() {
            if n < bound {
                return Err(CoreError::InvalidBranch(format!("truncation {n} is below the certification bound {bound}")));
            }
        }
        let val = Valuations::new(&branches, plane);
        let mut v = vec![bound; r];
        let conforms = |v: &[u32]| val.colength(v) + delta == v.iter().sum::<u32>() as usize;
        if !conforms(&v) {
            return Err(CoreError::InvalidBranch(
                "branches do not account for the delta invariant: some are missing or wrong".into(),
            ));
        }
        loop {
            let mut changed = false;
            for i in 0..r {
                while v[i] > 0 {
                    v[i] -= 1;
                    if conforms(&v) {
                        changed = true;
                    } else {
                        v[i] += 1;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut gens: Vec<Poly> = val.ideal(&v).iter().map(|p| lift(p, plane, germ.n())).collect();
        gens.push(germ.h().clone());
        let conductor = FractionalIdeal::from_ideal(germ, gens)?;
        // Plane curves are Gorenstein, so Õ = C^∨.
        let normalization = conductor.dual()?;
        if !normalization.contains(&MeroFraction::poly(Poly::one(germ.n()))) {
            return Err(CoreError::Consistency("normalization does not contain 1".into()));
        }
        if !conductor.includes(&conductor.product(&normalization)?)? {
            return Err(CoreError::Consistency("conductor is not an ideal of the normalization".into()));
        }
        Ok(NormalizationData {
            germ: germ.clone(),
            branches,
            kind: NormalizationKind::Curve { plane, milnor: mu, delta, conductor: v, bound },
            normalization: Some(normalization),
            conductor: Some(conductor),
        })
    }

    /// Whether `f` is integral over `O_D`, i.e. holomorphic on the normalization.
    pub fn is_weakly_holomorphic(&self, f: &MeroFraction) -> Result<bool> {
        match &self.kind {
            NormalizationKind::Curve { plane, .. } => {
                let outside = |p: &Poly| (0..self.germ.n()).any(|i| !plane.contains(&i) && p.involves(i));
                if outside(&f.xi) || outside(&f.g) {
                    return Ok(self.normalization.as_ref().expect("curve normalization").contains(f));
                }
                for b in &self.branches {
                    let known = b.truncation.unwrap_or(u32::MAX);
                    let og = b
                        .order(&f.g)
                        .filter(|&o| o < known)
                        .ok_or_else(|| CoreError::Unsupported("denominator vanishes to the series precision".into()))?;
                    if b.order(&f.xi).is_some_and(|o| o < og) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            NormalizationKind::Charts => {
                for b in &self.branches {
                    let g = b.pullback(&f.g);
                    if g.is_zero() {
                        return Err(CoreError::Unsupported("denominator vanishes on a chart".into()));
                    }
                    if !Ideal::local(b.source_dim(), vec![g]).contains(&b.pullback(&f.xi)) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(self.normalization.as_ref().expect("normalization").contains(f)),
        }
    }
}

/// `h` as a polynomial in the two plane coordinates.
fn restrict(h: &Poly, plane: [usize; 2]) -> Poly {
    Poly::from_terms(2, h.terms().map(|(m, c)| (Monomial(vec![m.exp(plane[0]), m.exp(plane[1])]), c.clone())))
}

fn lift(p: &Poly, plane: [usize; 2], n: usize) -> Poly {
    p.rename(n, &plane)
}

/// Milnor number of a plane curve germ.
pub fn milnor(h2: &Poly) -> Result<usize> {
    Ideal::local(2, h2.gradient())
        .colength()
        .ok_or_else(|| CoreError::InvalidGerm("curve singularity is not isolated".into()))
}

/// Pullbacks of plane monomials along the branches.
struct Valuations {
    series: Vec<(Poly, Poly)>,
    mult: Vec<u32>,
}

impl Valuations {
    fn new(branches: &[BranchParam], plane: [usize; 2]) -> Self {
        let series: Vec<(Poly, Poly)> = branches
            .iter()
            .map(|b| (b.series[plane[0]].clone().unwrap(), b.series[plane[1]].clone().unwrap()))
            .collect();
        let mult = branches.iter().map(|b| b.multiplicity().unwrap_or(u32::MAX)).collect();
        Valuations { series, mult }
    }

    /// Degree bound `K` with `m^K ⊆ I_v`.
    fn degree(&self, v: &[u32]) -> u32 {
        v.iter().zip(&self.mult).map(|(&vi, &e)| vi.div_ceil(e)).max().unwrap_or(0)
    }

    fn monomials(k: u32) -> Vec<Monomial> {
        (0..k).flat_map(|d| (0..=d).map(move |a| Monomial(vec![a, d - a]))).collect()
    }

    /// Rows: monomials of degree < K; columns: coefficients of `t^j`, `j < v_i`.
    fn matrix(&self, v: &[u32]) -> (Vec<Monomial>, Vec<Vec<Q>>) {
        let mons = Self::monomials(self.degree(v));
        let rows = mons
            .iter()
            .map(|m| {
                let mut row = Vec::new();
                for (i, (x, y)) in self.series.iter().enumerate() {
                    let n = v[i];
                    let p = crate::branch::compose_truncated(
                        &Poly::term(Q::one(), m.clone()),
                        &[x.clone(), y.clone()],
                        1,
                        n,
                    );
                    row.extend((0..n).map(|j| p.coeff(&Monomial(vec![j]))));
                }
                row
            })
            .collect();
        (mons, rows)
    }

    /// `dim O / I_v`.
    fn colength(&self, v: &[u32]) -> usize {
        let (_, rows) = self.matrix(v);
        left_kernel(&rows).0
    }

    /// Generators of `I_v`: the kernel combinations plus `m^K`.
    fn ideal(&self, v: &[u32]) -> Vec<Poly> {
        let k = self.degree(v);
        let (mons, rows) = self.matrix(v);
        let mut gens: Vec<Poly> = left_kernel(&rows)
            .1
            .into_iter()
            .map(|c| Poly::from_terms(2, mons.iter().cloned().zip(c).filter(|(_, c)| !c.is_zero())))
            .collect();
        gens.extend((0..=k).map(|a| Poly::term(Q::one(), Monomial(vec![a, k - a]))));
        gens
    }
}

pub(crate) fn left_kernel_rank(rows: &[Vec<Q>]) -> usize {
    left_kernel(rows).0
}

/// Rank of the row set and a basis of `{λ | Σ λ_i row_i = 0}`.
fn left_kernel(rows: &[Vec<Q>]) -> (usize, Vec<Vec<Q>>) {
    let m = rows.len();
    let mut aug: Vec<(Vec<Q>, Vec<Q>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut id = vec![Q::zero(); m];
            id[i] = Q::one();
            (r.clone(), id)
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m).find(|&i| !aug[i].0[c].is_zero()) else { continue };
        aug.swap(rank, p);
        let pivot = aug[rank].0[c].clone();
        let (head, tail) = aug.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row.0[c].is_zero() {
                continue;
            }
            let f = &row.0[c] / &pivot;
            for (a, b) in row.0.iter_mut().zip(&prow.0) {
                *a -= &f * b;
            }
            for (a, b) in row.1.iter_mut().zip(&prow.1) {
                *a -= &f * b;
            }
        }
        rank += 1;
    }
    (rank, aug.into_iter().skip(rank).map(|(_, k)| k).collect())
}
