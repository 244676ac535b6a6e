//! A registry of named finite structures with checks that re-verify the
//! claims made about them.

mod builders;
mod cases;
mod trials;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::guard::Guards;

pub use builders::{cluster, cluster_models, dframe, f0, lin_models, param_vars, phi_cluster, phi_lin, sign_pattern};
pub use trials::{
    cluster_restriction_sweep, monotone_positivity_sweep, product_trials, random_bisim_pair, top_collapse_morphisms,
    zigzag_preservation_trials, zigzag_split_trials, ClusterRestrictionSweep, MonotoneSweep, TrialSummary,
    PRESERVED_AXIOMS,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CaseInfo {
    pub id: &'static str,
    pub claim: &'static str,
}

pub const CASES: [CaseInfo; 8] = [
    CaseInfo {
        id: "f0-lin",
        claim: "on the five-world frame F0 the formula phi_lin is monotone in p but not preserved under a p-directed bisimulation, so it has no p-positive equivalent",
    },
    CaseInfo {
        id: "cluster-2-0",
        claim: "on the 2-cluster []p | (~p & <>p) is monotone in p and refuted as positive by a p-directed bisimulation",
    },
    CaseInfo {
        id: "cluster-3-1",
        claim: "on the 3-cluster with one parameter the cluster formula is monotone in p and refuted as p-positive",
    },
    CaseInfo {
        id: "dk-qqq-2",
        claim: "a nonempty relation on D2 is a bisimulation iff its restriction to the cluster is full",
    },
    CaseInfo {
        id: "dk-qqq-3",
        claim: "a nonempty relation on D3 is a bisimulation iff its restriction to the cluster is full",
    },
    CaseInfo {
        id: "ppqq-prop",
        claim: "every full relation contains a zigzag-free full relation",
    },
    CaseInfo {
        id: "dk-lpp-sample",
        claim: "on D2 no formula over p up to size 6 that is monotone in p has a positivity witness",
    },
    CaseInfo {
        id: "product-preserv",
        claim: "maximal bisimulation products satisfy the projection equations and preserve AT, A4, AP and alpha(p) -> <>p",
    },
];

pub fn list_cases() -> &'static [CaseInfo] {
    &CASES
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Result of running one case. `inputs` embeds every structure the checks
/// used; `certificate` holds the witnesses and sweep summaries.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub inputs: Value,
    pub certificate: Value,
}

impl CaseReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn lookup(id: &str) -> Result<&'static CaseInfo> {
    CASES
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(format!("{id} (known: {})", CASES.map(|c| c.id).join(", "))))
}

/// The structures and parameters of a case, as shipped in `repro/<id>.json`.
pub fn case_inputs(id: &str) -> Result<Value> {
    let info = lookup(id)?;
    cases::inputs(info.id)
}

pub fn run_case(id: &str, guards: &Guards) -> Result<CaseReport> {
    let info = lookup(id)?;
    let (checks, certificate) = cases::run(info.id, guards)?;
    Ok(CaseReport {
        id: info.id.to_string(),
        claim: info.claim.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        inputs: cases::inputs(info.id)?,
        certificate,
    })
}
