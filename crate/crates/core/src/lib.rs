//! Train track and relative train track maps for free products of finite groups,
//! realized as graphs of groups with trivial edge groups and finite vertex groups.
//!
//! [`traintrack::rep_from_automorphism`] builds a representative on a thistle,
//! [`traintrack::train_track_algorithm`] improves an irreducible one to a train
//! track map, and [`rtt::relative_train_track_algorithm`] handles the general
//! case. [`rtt::check_rtt`] verifies the result independently.

pub mod dot;
pub mod format;
pub mod gog;
pub mod groups;
pub mod moves;
pub mod rep;
pub mod rtt;
pub mod spectral;
pub mod trace;
pub mod traintrack;
