use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::branch::BranchJson;
use crate::normalization::NormalizationKind;
use crate::residues::GorensteinVerdict;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl Decision {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Decision::True => Some(true),
            Decision::False => Some(false),
            Decision::Undecided => None,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    fn label(self) -> &'static str {
        match self {
            Decision::True => "true",
            Decision::False => "false",
            Decision::Undecided => "undecided",
        }
    }
}

/// A decision with its evidence: a certificate for `true`, a witness for
/// `false`, a reason for `undecided`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: Decision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn holds(certificate: impl Into<String>) -> Self {
        Verdict { value: Decision::True, certificate: Some(certificate.into()), witness: None, reason: None }
    }

    pub fn fails(witness: impl Into<String>) -> Self {
        Verdict { value: Decision::False, certificate: None, witness: Some(witness.into()), reason: None }
    }

    pub fn undecided(reason: impl Into<String>) -> Self {
        Verdict { value: Decision::Undecided, certificate: None, witness: None, reason: Some(reason.into()) }
    }

    pub fn as_bool(&self) -> Option<bool> {
        self.value.as_bool()
    }

    fn evidence(&self) -> Option<&str> {
        self.certificate.as_deref().or(self.witness.as_deref()).or(self.reason.as_deref())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermSummary {
    pub vars: Vec<String>,
    pub h: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuResidues {
    pub generators: usize,
    pub contains_unit: bool,
}

/// Normal crossing in codimension one, radical Jacobian ideal and Jacobian
/// ideal equal to the conductor: equivalent for free divisors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceTriple {
    pub normal_crossing_codim1: Decision,
    pub jacobian_radical: Decision,
    pub jacobian_eq_conductor: Decision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassVerdict {
    NotApplicable,
    SuspensionOfQuasihomogeneousPlaneCurve,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: ClassVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate_change: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub passive_vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modules {
    pub jacobian: Vec<String>,
    pub log_derivations: Vec<String>,
    pub residue_module: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSummary {
    #[serde(flatten)]
    pub kind: NormalizationKind,
    pub branches: Vec<BranchJson>,
}

/// An equivalence or inclusion that was checked and holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyEntry {
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub precision: u32,
    pub nzd_budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification_bound: Option<u32>,
    /// Stage timings in microseconds, only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub schema: u32,
    pub germ: GermSummary,
    pub free: Verdict,
    pub euler_homogeneous: Verdict,
    pub jacobian_radical: Verdict,
    pub jacobian_eq_conductor: Verdict,
    pub residues_weakly_holomorphic: Verdict,
    pub normal_crossing_at_origin: Verdict,
    pub normal_crossing_codim1: Verdict,
    pub gorenstein_singular_locus: GorensteinVerdict,
    pub mu_residues: MuResidues,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalence_triple: Option<EquivalenceTriple>,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_sum: Option<Verdict>,
    pub modules: Modules,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<NormalizationSummary>,
    pub consistency: Vec<ConsistencyEntry>,
    pub provenance: Provenance,
}

impl DivisorReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "germ h = {} in ({})", self.germ.h, self.germ.vars.join(", "));
        let rows = [
            ("free", &self.free),
            ("euler homogeneous", &self.euler_homogeneous),
            ("(D) jacobian radical", &self.jacobian_radical),
            ("(G) jacobian = conductor", &self.jacobian_eq_conductor),
            ("(C) residues weakly holomorphic", &self.residues_weakly_holomorphic),
            ("(F) normal crossing at origin", &self.normal_crossing_at_origin),
            ("(B) normal crossing in codim 1", &self.normal_crossing_codim1),
        ];
        for (name, v) in rows {
            let _ = write!(s, "{name:<34} {}", v.value.label());
            if let Some(e) = v.evidence() {
                let _ = write!(s, "  [{e}]");
            }
            s.push('\n');
        }
        if let Some(d) = &self.direct_sum {
            let _ = writeln!(s, "{:<34} {}", "R_D = direct sum of components", d.value.label());
        }
        let _ = writeln!(s, "{:<34} {:?}", "gorenstein singular locus", self.gorenstein_singular_locus);
        let _ = writeln!(
            s,
            "{:<34} {} (contains 1: {})",
            "generators of R_D", self.mu_residues.generators, self.mu_residues.contains_unit
        );
        let c = &self.classification;
        let _ = write!(s, "{:<34} {:?}", "classification", c.verdict);
        if let Some(e) = &c.euler_field {
            let _ = write!(s, "  [euler field {e}]");
        }
        if let Some(d) = &c.diagnostic {
            let _ = write!(s, "  [{d}]");
        }
        s.push('\n');
        let m = &self.modules;
        let _ = writeln!(s, "J_D  = <{}>", m.jacobian.join(", "));
        let _ = writeln!(s, "R_D  = <{}>", m.residue_module.join(", "));
        if let Some(o) = &m.normalization {
            let _ = writeln!(s, "Õ_D  = <{}>", o.join(", "));
        }
        if let Some(c) = &m.conductor {
            let _ = writeln!(s, "C_D  = <{}>", c.join(", "));
        }
        let _ = writeln!(s, "Der(-log D) = <{}>", m.log_derivations.join(", "));
        let _ = writeln!(s, "consistency:");
        for e in &self.consistency {
            let _ = writeln!(s, "  ok  {}: {}", e.name, e.detail);
        }
        let p = &self.provenance;
        let _ = writeln!(s, "seed {:#x}, precision {}, nonzerodivisor budget {}", p.seed, p.precision, p.nzd_budget);
        if let Some(b) = p.certification_bound {
            let _ = writeln!(s, "certification bound {b}");
        }
        if let Some(t) = &p.timings {
            for (k, v) in t {
                let _ = writeln!(s, "  {k}: {v} µs");
            }
        }
        s
    }
}
