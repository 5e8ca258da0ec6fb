use std::collections::BTreeMap;

use logres_engine::{parse, Monomial, Poly, Q};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Parametrization of one branch (or chart) of the normalization:
/// `x_i = series[i](t_1, ..., t_k)` for listed variables, while unlisted
/// (passive) variables are carried along as extra coordinates.
/// `truncation = Some(N)` means the series are known modulo `t^N` (total
/// degree in the parameters); `None` means they are exact polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchParam {
    pub params: usize,
    pub series: Vec<Option<Poly>>,
    pub truncation: Option<u32>,
}

impl BranchParam {
    pub fn new(params: usize, series: Vec<Option<Poly>>, truncation: Option<u32>) -> Self {
        BranchParam { params, series, truncation }
    }

    /// Curve branch from polynomials in `t` over the listed variables.
    pub fn curve(n: usize, listed: &[(usize, Poly)], truncation: Option<u32>) -> Self {
        let mut series = vec![None; n];
        for (i, p) in listed {
            series[*i] = Some(p.clone());
        }
        BranchParam { params: 1, series, truncation }
    }

    pub fn listed(&self) -> Vec<usize> {
        (0..self.series.len()).filter(|&i| self.series[i].is_some()).collect()
    }

    pub fn passive(&self) -> Vec<usize> {
        (0..self.series.len()).filter(|&i| self.series[i].is_none()).collect()
    }

    /// Number of coordinates of the source: parameters plus passive variables.
    pub fn source_dim(&self) -> usize {
        self.params + self.passive().len()
    }

    /// Substitution values for composing ambient polynomials.
    fn values(&self) -> Vec<Poly> {
        let m = self.source_dim();
        let map: Vec<usize> = (0..self.params).collect();
        let mut next = self.params;
        self.series
            .iter()
            .map(|s| match s {
                Some(p) => p.rename(m, &map),
                None => {
                    next += 1;
                    Poly::var(m, next - 1)
                }
            })
            .collect()
    }

    /// `f ∘ φ`, truncated in the parameters when the series are.
    pub fn pullback(&self, f: &Poly) -> Poly {
        match self.truncation {
            Some(n) => compose_truncated(f, &self.values(), self.params, n),
            None => f.compose(&self.values()),
        }
    }

    /// Lowest total degree in the parameters of `f ∘ φ`; `None` when it
    /// vanishes to the known precision.
    pub fn order(&self, f: &Poly) -> Option<u32> {
        let p = self.pullback(f);
        p.terms().map(|(m, _)| (0..self.params).map(|i| m.exp(i)).sum()).min()
    }

    /// Multiplicity of a curve branch: the smallest order of the coordinates.
    pub fn multiplicity(&self) -> Option<u32> {
        self.series.iter().flatten().filter_map(|s| s.ord()).min()
    }

    /// Greatest common divisor of the exponents of all series terms.
    pub fn exponent_gcd(&self) -> u32 {
        let mut g = 0;
        for s in self.series.iter().flatten() {
            for (m, _) in s.terms() {
                g = num_integer::gcd(g, m.exp(0));
            }
        }
        g
    }
}

/// Drop terms of degree at least `n` in the first `params` variables.
pub fn truncate(p: &Poly, params: usize, n: u32) -> Poly {
    Poly::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(m, _)| (0..params).map(|i| m.exp(i)).sum::<u32>() < n)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// `f(values)` modulo degree `n` in the first `params` target variables.
pub fn compose_truncated(f: &Poly, values: &[Poly], params: usize, n: u32) -> Poly {
    let target = values.first().map(Poly::nvars).unwrap_or(0);
    let mut cache: Vec<Vec<Poly>> = vec![Vec::new(); values.len()];
    let mut out = Poly::zero(target);
    for (m, c) in f.terms() {
        let mut t = Poly::constant(target, c.clone());
        for (i, powers) in cache.iter_mut().enumerate() {
            let e = m.exp(i) as usize;
            if e == 0 {
                continue;
            }
            if powers.is_empty() {
                powers.push(Poly::one(target));
            }
            while powers.len() <= e {
                let next = truncate(&(&powers[powers.len() - 1] * &values[i]), params, n);
                powers.push(next);
            }
            t = truncate(&(&t * &powers[e]), params, n);
        }
        out = &out + &t;
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Exponent {
    Single(u32),
    Multi(Vec<u32>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BranchJson {
    pub param: BTreeMap<String, Vec<(Exponent, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<usize>,
}

fn parse_coeff(s: &str) -> Result<Q> {
    let p = parse(s, &[] as &[&str]).map_err(|e| CoreError::InvalidBranch(format!("coefficient {s:?}: {e}")))?;
    if !p.is_constant() {
        return Err(CoreError::InvalidBranch(format!("coefficient {s:?} is not a number")));
    }
    Ok(p.constant_term())
}

impl BranchJson {
    pub fn to_param(&self, vars: &[String]) -> Result<BranchParam> {
        let k = self.params.unwrap_or(1);
        if k == 0 {
            return Err(CoreError::InvalidBranch("a branch needs at least one parameter".into()));
        }
        let mut series = vec![None; vars.len()];
        for (name, terms) in &self.param {
            let i = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| CoreError::InvalidBranch(format!("unknown variable {name}")))?;
            let mut p = Poly::zero(k);
            for (e, c) in terms {
                let exps = match e {
                    Exponent::Single(a) => vec![*a],
                    Exponent::Multi(v) => v.clone(),
                };
                if exps.len() != k {
                    return Err(CoreError::InvalidBranch(format!(
                        "exponent {exps:?} for {name} does not match {k} parameter(s)"
                    )));
                }
                p = &p + &Poly::term(parse_coeff(c)?, Monomial(exps));
            }
            series[i] = Some(p);
        }
        Ok(BranchParam { params: k, series, truncation: self.truncation })
    }

    pub fn from_param(b: &BranchParam, vars: &[String]) -> Self {
        let mut param = BTreeMap::new();
        for (i, s) in b.series.iter().enumerate() {
            if let Some(p) = s {
                let terms = p
                    .terms()
                    .map(|(m, c)| {
                        let e = if b.params == 1 { Exponent::Single(m.exp(0)) } else { Exponent::Multi(m.0.clone()) };
                        (e, c.to_string())
                    })
                    .collect();
                param.insert(vars[i].clone(), terms);
            }
        }
        BranchJson { param, truncation: b.truncation, params: (b.params != 1).then_some(b.params) }
    }
}

pub fn parse_branches(text: &str, vars: &[String]) -> Result<Vec<BranchParam>> {
    let raw: Vec<BranchJson> =
        serde_json::from_str(text).map_err(|e| CoreError::InvalidBranch(format!("branch JSON: {e}")))?;
    raw.iter().map(|b| b.to_param(vars)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn parses_curve_branch() {
        let b = parse_branches(r#"[{"param": {"x": [[3, "1"]], "y": [[2, "1"]]}, "truncation": 16}]"#, &vars()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].listed(), vec![0, 1]);
        assert_eq!(b[0].passive(), vec![2]);
        let h = parse("x^2 - y^3", &["x", "y", "z"]).unwrap();
        assert!(b[0].pullback(&h).is_zero());
        assert_eq!(b[0].order(&parse("y", &["x", "y", "z"]).unwrap()), Some(2));
        assert_eq!(b[0].multiplicity(), Some(2));
        assert_eq!(b[0].exponent_gcd(), 1);
    }

    #[test]
    fn parses_chart_and_round_trips() {
        let text = r#"[{"param": {"x": [[[1, 1], "1"]], "y": [[[0, 1], "1"]], "z": [[[2, 0], "1"]]}, "params": 2}]"#;
        let b = parse_branches(text, &vars()).unwrap();
        let h = parse("x^2 - y^2*z", &["x", "y", "z"]).unwrap();
        assert!(b[0].pullback(&h).is_zero());
        let back = BranchJson::from_param(&b[0], &vars());
        assert_eq!(back.to_param(&vars()).unwrap(), b[0]);
    }

    #[test]
    fn rejects_bad_branches() {
        assert!(parse_branches(r#"[{"param": {"w": [[1, "1"]]}}]"#, &vars()).is_err());
        assert!(parse_branches(r#"[{"param": {"x": [[1, "a"]]}}]"#, &vars()).is_err());
        assert!(parse_branches(r#"[{"param": {"x": [[[1, 1], "1"]]}}]"#, &vars()).is_err());
    }
}
