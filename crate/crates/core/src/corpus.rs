//! Bundled worked examples and the verdicts they must produce.

use crate::branch::parse_branches;
use crate::criteria::{analyze, AnalyzeOptions};
use crate::error::Result;
use crate::germ::DivisorGerm;
use crate::report::{Decision, DivisorReport};
use crate::residues::GorensteinVerdict;

use Decision::{False as F, True as T, Undecided as U};

#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub free: Decision,
    pub euler_homogeneous: Decision,
    pub jacobian_radical: Decision,
    pub jacobian_eq_conductor: Decision,
    pub residues_weakly_holomorphic: Decision,
    pub normal_crossing_at_origin: Decision,
    pub normal_crossing_codim1: Decision,
    pub gorenstein: GorensteinVerdict,
    /// Minimal number of generators of `R_D`, and whether `1` is one of them.
    pub mu_residues: (usize, bool),
    pub direct_sum: Option<Decision>,
}

#[derive(Clone, Debug)]
pub struct CorpusGerm {
    pub name: &'static str,
    pub vars: &'static [&'static str],
    pub h: &'static str,
    pub factors: Option<&'static [&'static str]>,
    pub branches: Option<&'static str>,
    pub expected: Expected,
}

impl CorpusGerm {
    pub fn germ(&self) -> Result<DivisorGerm> {
        DivisorGerm::parse(self.vars, self.h)
    }

    pub fn options(&self, germ: &DivisorGerm) -> Result<AnalyzeOptions> {
        let factors = self.factors.map(|fs| fs.iter().map(|f| germ.poly(f)).collect::<Result<Vec<_>>>()).transpose()?;
        let branches = self.branches.map(|b| parse_branches(b, germ.vars())).transpose()?;
        Ok(AnalyzeOptions { factors, branches, ..Default::default() })
    }

    pub fn analyze(&self) -> Result<DivisorReport> {
        let germ = self.germ()?;
        analyze(&germ, &self.options(&germ)?)
    }
}

/// Disagreements between a report and the expected verdicts.
pub fn mismatches(expected: &Expected, report: &DivisorReport) -> Vec<String> {
    let mut out = Vec::new();
    let mut cmp = |field: &str, want: String, got: String| {
        if want != got {
            out.push(format!("{field}: expected {want}, got {got}"));
        }
    };
    let rows = [
        ("free", expected.free, report.free.value),
        ("euler_homogeneous", expected.euler_homogeneous, report.euler_homogeneous.value),
        ("jacobian_radical", expected.jacobian_radical, report.jacobian_radical.value),
        ("jacobian_eq_conductor", expected.jacobian_eq_conductor, report.jacobian_eq_conductor.value),
        ("residues_weakly_holomorphic", expected.residues_weakly_holomorphic, report.residues_weakly_holomorphic.value),
        ("normal_crossing_at_origin", expected.normal_crossing_at_origin, report.normal_crossing_at_origin.value),
        ("normal_crossing_codim1", expected.normal_crossing_codim1, report.normal_crossing_codim1.value),
    ];
    for (field, want, got) in rows {
        cmp(field, format!("{want:?}"), format!("{got:?}"));
    }
    cmp("gorenstein_singular_locus", format!("{:?}", expected.gorenstein), format!("{:?}", report.gorenstein_singular_locus));
    let mu = (report.mu_residues.generators, report.mu_residues.contains_unit);
    cmp("mu_residues", format!("{:?}", expected.mu_residues), format!("{mu:?}"));
    cmp("direct_sum", format!("{:?}", expected.direct_sum), format!("{:?}", report.direct_sum.as_ref().map(|v| v.value)));
    out
}

pub struct Outcome {
    pub name: &'static str,
    pub report: Option<DivisorReport>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(entry: &CorpusGerm) -> Outcome {
    match entry.analyze() {
        Ok(report) => Outcome { name: entry.name, failures: mismatches(&entry.expected, &report), report: Some(report) },
        Err(e) => Outcome { name: entry.name, report: None, failures: vec![format!("analysis failed: {e}")] },
    }
}

/// Entries whose name contains `filter` (all of them for `None`).
pub fn select(filter: Option<&str>) -> Vec<CorpusGerm> {
    corpus().into_iter().filter(|e| filter.is_none_or(|f| e.name.contains(f))).collect()
}

const fn plane_curve(
    euler: Decision,
    nc: Decision,
    gorenstein: GorensteinVerdict,
    unit: bool,
    direct_sum: Option<Decision>,
) -> Expected {
    Expected {
        free: T,
        euler_homogeneous: euler,
        jacobian_radical: nc,
        jacobian_eq_conductor: nc,
        residues_weakly_holomorphic: nc,
        normal_crossing_at_origin: nc,
        normal_crossing_codim1: nc,
        gorenstein,
        mu_residues: (2, unit),
        direct_sum,
    }
}

pub fn corpus() -> Vec<CorpusGerm> {
    use GorensteinVerdict::*;
    const XY: &[&str] = &["x", "y"];
    const XYZ: &[&str] = &["x", "y", "z"];
    vec![
        CorpusGerm {
            name: "node",
            vars: XY,
            h: "x*y",
            factors: Some(&["x", "y"]),
            branches: None,
            expected: plane_curve(T, T, Gorenstein, true, Some(T)),
        },
        CorpusGerm {
            name: "cusp",
            vars: XY,
            h: "x^2 - y^3",
            factors: None,
            branches: None,
            expected: plane_curve(T, F, Gorenstein, true, None),
        },
        CorpusGerm {
            name: "triple_point",
            vars: XY,
            h: "x*y*(x + y)",
            factors: None,
            branches: Some(
                r#"[{"param": {"x": [[1, "1"]], "y": []}},
                    {"param": {"x": [], "y": [[1, "1"]]}},
                    {"param": {"x": [[1, "1"]], "y": [[1, "-1"]]}}]"#,
            ),
            expected: plane_curve(T, F, Gorenstein, true, None),
        },
        CorpusGerm {
            name: "tangency_m1",
            vars: XY,
            h: "x*(x + y)",
            factors: Some(&["x", "x + y"]),
            branches: None,
            expected: plane_curve(T, T, Gorenstein, true, Some(T)),
        },
        CorpusGerm {
            name: "tangency_m2",
            vars: XY,
            h: "x*(x + y^2)",
            factors: Some(&["x", "x + y^2"]),
            branches: None,
            expected: plane_curve(T, F, Gorenstein, true, Some(F)),
        },
        CorpusGerm {
            name: "tangency_m3",
            vars: XY,
            h: "x*(x + y^3)",
            factors: Some(&["x", "x + y^3"]),
            branches: None,
            expected: plane_curve(T, F, Gorenstein, true, Some(F)),
        },
        CorpusGerm {
            name: "three_lines",
            vars: XY,
            h: "x*y*(x - y)",
            factors: None,
            branches: None,
            expected: plane_curve(T, F, Gorenstein, true, None),
        },
        CorpusGerm {
            name: "non_quasihomogeneous",
            vars: XY,
            h: "x^4 + y^5 + x*y^4",
            factors: None,
            branches: None,
            expected: plane_curve(F, F, NotGorenstein, false, None),
        },
        CorpusGerm {
            name: "coordinate_planes",
            vars: XYZ,
            h: "x*y*z",
            factors: Some(&["x", "y", "z"]),
            branches: None,
            expected: Expected {
                gorenstein: NotGorenstein,
                mu_residues: (3, true),
                ..plane_curve(T, T, Empty, true, Some(T))
            },
        },
        CorpusGerm {
            name: "whitney_umbrella",
            vars: XYZ,
            h: "x^2 - y^2*z",
            factors: None,
            branches: Some(r#"[{"param": {"x": [[[1, 1], "1"]], "y": [[[0, 1], "1"]], "z": [[[2, 0], "1"]]}, "params": 2}]"#),
            expected: Expected {
                free: F,
                euler_homogeneous: T,
                jacobian_radical: F,
                jacobian_eq_conductor: U,
                residues_weakly_holomorphic: T,
                normal_crossing_at_origin: F,
                normal_crossing_codim1: U,
                gorenstein: Undecided,
                mu_residues: (2, true),
                direct_sum: None,
            },
        },
        CorpusGerm {
            name: "free_arrangement",
            vars: XYZ,
            h: "x*y*(x + y)*(x + y*z)",
            factors: Some(&["x", "y", "x + y", "x + y*z"]),
            branches: None,
            expected: Expected {
                gorenstein: NotGorenstein,
                mu_residues: (3, true),
                ..plane_curve(T, F, Empty, true, Some(F))
            },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_filter_works() {
        let all = corpus();
        let mut names: Vec<_> = all.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        assert_eq!(select(Some("tangency")).len(), 3);
        assert!(select(Some("nonexistent")).is_empty());
        assert_eq!(select(None).len(), all.len());
    }

    #[test]
    fn corrupted_expectation_is_reported() {
        let mut entry = select(Some("node")).remove(0);
        assert!(run(&entry).passed());
        entry.expected.jacobian_radical = F;
        let outcome = run(&entry);
        assert_eq!(outcome.failures, vec!["jacobian_radical: expected False, got True".to_string()]);
    }
}
