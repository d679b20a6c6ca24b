//! Seeded, self-verdicting pipelines. Trial `i` of a run with master seed `s`
//! draws from its own generator seeded with `derive_seed(s, i)`, so reports
//! do not depend on thread scheduling.

mod commuting;
mod folklore;
mod hadamard;
mod property1;
pub mod report;
mod sl_necessity;
mod theorem2;

use std::fmt;
use std::str::FromStr;

pub use commuting::{exp_commuting_gap, exp_commuting_gap_with};
pub use folklore::{exp_folklore_cp, exp_folklore_cp_with};
pub use hadamard::{
    constraint_spread, exp_hadamard_constraint, exp_hadamard_constraint_with, hadamard_system, nullity,
};
pub use property1::{exp_property1, exp_property1_with, random_bath_invisible};
pub use report::{ExperimentReport, Params, Stage, TrialRecord};
pub use sl_necessity::{correlated_assignment, exp_sl_necessity, NecessitySearch};
pub use theorem2::exp_theorem2_pipeline;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    FolkloreCp,
    Property1Witness,
    HadamardConstraint,
    Theorem2Pipeline,
    CommutingGap,
    SlNecessity,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::FolkloreCp,
        Experiment::Property1Witness,
        Experiment::HadamardConstraint,
        Experiment::Theorem2Pipeline,
        Experiment::CommutingGap,
        Experiment::SlNecessity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::FolkloreCp => "folklore-cp",
            Experiment::Property1Witness => "property1-witness",
            Experiment::HadamardConstraint => "hadamard-constraint",
            Experiment::Theorem2Pipeline => "theorem2-pipeline",
            Experiment::CommutingGap => "commuting-gap",
            Experiment::SlNecessity => "sl-necessity",
        }
    }

    pub fn run(self, params: &Params) -> Result<ExperimentReport> {
        params.validate()?;
        match self {
            Experiment::FolkloreCp => Ok(exp_folklore_cp(params)),
            Experiment::Property1Witness => Ok(exp_property1(params)),
            Experiment::HadamardConstraint => Ok(exp_hadamard_constraint(params)),
            Experiment::Theorem2Pipeline => Ok(exp_theorem2_pipeline(params)),
            Experiment::CommutingGap => Ok(exp_commuting_gap(params)),
            Experiment::SlNecessity => exp_sl_necessity(params),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown experiment \"{s}\"")))
    }
}
