use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::correlations::DEFAULT_DISCORD_TOL;
use crate::error::{Error, Result};
use crate::qdp::DEFAULT_CP_TOL;
use crate::states::DEFAULT_GAP_TOL;

/// Largest joint dimension `dim_s * dim_b` an experiment will accept.
pub const MAX_JOINT_DIM: usize = 64;

/// Resolved experiment configuration; embedded verbatim in every report.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub dim_s: usize,
    pub dim_b: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub budget: usize,
    pub cp_tol: f64,
    pub discord_tol: f64,
    pub gap_tol: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            dim_s: 2,
            dim_b: 2,
            trials: 100,
            seed: 0,
            eps: 0.1,
            budget: 500,
            cp_tol: DEFAULT_CP_TOL,
            discord_tol: DEFAULT_DISCORD_TOL,
            gap_tol: DEFAULT_GAP_TOL,
        }
    }
}

impl Params {
    pub fn with_dims(dim_s: usize, dim_b: usize) -> Self {
        Self { dim_s, dim_b, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::PreconditionViolated(msg));
        if self.dim_s < 2 || self.dim_b < 2 {
            return bad(format!("dimensions must be at least 2, got {}x{}", self.dim_s, self.dim_b));
        }
        if self.dim_s.saturating_mul(self.dim_b) > MAX_JOINT_DIM {
            return bad(format!("joint dimension above {MAX_JOINT_DIM}"));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.budget == 0 {
            return bad("budget must be at least 1".into());
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return bad(format!("eps must be finite and non-negative, got {}", self.eps));
        }
        for (name, t) in [("cp-tol", self.cp_tol), ("discord-tol", self.discord_tol), ("gap-tol", self.gap_tol)] {
            if !(t.is_finite() && t >= 0.0) {
                return bad(format!("{name} must be finite and non-negative, got {t}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimS": self.dim_s,
            "dimB": self.dim_b,
            "trials": self.trials,
            "seed": self.seed,
            "eps": self.eps,
            "budget": self.budget,
            "cpTol": self.cp_tol,
            "discordTol": self.discord_tol,
            "gapTol": self.gap_tol,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Stage {
    pub fn new(name: &str, pass: bool, residual: f64) -> Self {
        Self { name: name.to_string(), pass, residual }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub pass: bool,
    pub values: BTreeMap<String, f64>,
}

impl TrialRecord {
    pub fn new(index: usize, pass: bool, values: &[(&str, f64)]) -> Self {
        Self { index, pass, values: values.iter().map(|&(k, v)| (k.to_string(), v)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Params,
    pub metrics: BTreeMap<String, f64>,
    pub stages: Vec<Stage>,
    pub trials: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: &Params) -> Self {
        Self {
            experiment: experiment.to_string(),
            params: params.clone(),
            metrics: BTreeMap::new(),
            stages: Vec::new(),
            trials: Vec::new(),
        }
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn stage(&mut self, name: &str, pass: bool, residual: f64) {
        self.stages.push(Stage::new(name, pass, residual));
    }

    pub fn get_metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub fn get_stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// True iff every stage and every trial passed.
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.pass) && self.trials.iter().all(|t| t.pass)
    }

    pub fn to_json(&self) -> Value {
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| json!({"name": s.name, "pass": s.pass, "residual": s.residual}))
            .collect();
        let mut trials = self.trials.clone();
        trials.sort_by_key(|t| t.index);
        let trials: Vec<Value> = trials
            .iter()
            .map(|t| {
                let mut m = Map::new();
                for (k, v) in &t.values {
                    m.insert(k.clone(), json!(v));
                }
                m.insert("trial".into(), json!(t.index));
                m.insert("pass".into(), json!(t.pass));
                Value::Object(m)
            })
            .collect();
        json!({
            "experiment": self.experiment,
            "params": self.params.to_json(),
            "verdict": if self.passed() { "pass" } else { "fail" },
            "metrics": self.metrics,
            "stages": stages,
            "trials": trials,
        })
    }
}
