//! Filtrations, strata, the relative train track checker and algorithm.

mod algorithm;
mod check;
mod filtration;

pub use algorithm::{relative_train_track_algorithm, RttOutcome};
pub use check::{bounded_check, check_rtt, is_periodic, BoundedReport, Clause, RttReport, StratumVerdict, Witness};
pub use filtration::{
    filtration_of_matrix, maximal_filtration, pf_compare, pf_sequence, Filtration, PfSequence, Stratum, StratumKind,
};
