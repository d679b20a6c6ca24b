//! Assignment families, their audits, induced system maps, Choi matrices and
//! complete-positivity certification.

pub mod family;
pub mod induced;
pub mod superop;
pub mod witness;

pub use family::{audit_family, AssignmentFamily, AuditReport};
pub use induced::{induced_map, InducedMapSolver};
pub use superop::{
    choi_of, cp_verdict, folklore_map, kraus_from_choi, superop_from_kraus, CPVerdict, ChoiMatrix, Superoperator,
    DEFAULT_CP_TOL,
};
pub use witness::{illdefinedness_witness, witness_gain, Witness};
