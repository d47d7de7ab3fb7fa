//! Structural logic locking for gate-level netlists: partition-driven
//! transforms, security metrics, overhead estimation and attack baselines.

pub mod netlist;
pub mod sim;
pub mod partition;
pub mod aig;
pub mod key;
pub mod lock;
pub mod metrics;
pub mod opt;
pub mod attack;

/// Version stamped into every JSON document this crate produces.
pub const SCHEMA_VERSION: u32 = 1;
