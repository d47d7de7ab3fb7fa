//! Failure classes and their process exit codes.

use std::fmt;
use std::path::Path;

use netlock::attack::AttackError;
use netlock::key::KeyError;
use netlock::lock::LockError;
use netlock::metrics::MetricsError;
use netlock::netlist::NetlistError;
use netlock::opt::OptError;
use netlock::partition::PartitionError;
use netlock::sim::SimError;

#[derive(Debug)]
pub enum CliError {
    /// Exit 1: unparsable input or bad flag combination.
    Usage(String),
    /// Exit 2: the circuit offers nowhere to put the key.
    NothingLockable(String),
    /// Exit 3.
    Io(String),
    /// Exit 4.
    PortMismatch(String),
    /// Exit 5: attack or simulation size limits.
    Limits(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NothingLockable(_) => 2,
            CliError::Io(_) => 3,
            CliError::PortMismatch(_) => 4,
            CliError::Limits(_) => 5,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, msg) = match self {
            CliError::Usage(m) => ("error", m),
            CliError::NothingLockable(m) => ("nothing lockable", m),
            CliError::Io(m) => ("i/o error", m),
            CliError::PortMismatch(m) => ("port mismatch", m),
            CliError::Limits(m) => ("limit exceeded", m),
        };
        write!(f, "{tag}: {msg}")
    }
}

impl From<NetlistError> for CliError {
    fn from(e: NetlistError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<KeyError> for CliError {
    fn from(e: KeyError) -> Self {
        CliError::Usage(format!("key: {e}"))
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::PortMismatch(_) | SimError::LengthMismatch { .. } => CliError::PortMismatch(e.to_string()),
            SimError::ExhaustiveTooLarge(_) => CliError::Limits(e.to_string()),
        }
    }
}

impl From<LockError> for CliError {
    fn from(e: LockError) -> Self {
        match e {
            LockError::NothingLockable { .. } | LockError::KeyCapacity { .. } | LockError::Unplaced(_) => {
                CliError::NothingLockable(e.to_string())
            }
            LockError::Netlist(n) => n.into(),
            LockError::Partition(p) => p.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Sim(s) => s.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OptError> for CliError {
    fn from(e: OptError) -> Self {
        match e {
            OptError::Netlist(n) => n.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AttackError> for CliError {
    fn from(e: AttackError) -> Self {
        match e {
            AttackError::TooManyKeyBits { .. } | AttackError::TooManyInputs { .. } => CliError::Limits(e.to_string()),
            AttackError::Sim(s) => s.into(),
            AttackError::Opt(o) => o.into(),
            AttackError::NoKeys => CliError::Usage(e.to_string()),
        }
    }
}
