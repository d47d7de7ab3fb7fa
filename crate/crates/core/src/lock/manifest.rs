//! Serializable record of one locking run.

use serde::Serialize;

use super::complexity::ComplexityStats;
use super::transform::TransformKind;

/// How the arithmetic transform reads its bus, recorded in every manifest.
pub const ARITHMETIC_CONVENTION: &str =
    "little-endian output word minus (key xor correct key), mod 2^m, key zero-extended";

#[derive(Clone, Debug, Serialize)]
pub struct LockManifest {
    pub schema_version: u32,
    pub seed: u64,
    pub key_size: usize,
    pub correct_key: String,
    pub aig: bool,
    pub partition_size: usize,
    pub partition_count: usize,
    pub balance_tol: f64,
    pub cut_size: u64,
    pub min_depth: u32,
    /// `min_depth` clamped to the circuit depth.
    pub min_depth_effective: u32,
    pub min_coverage: f64,
    pub dummy_max: usize,
    pub arithmetic_convention: &'static str,
    pub gates_before: usize,
    pub gates_after: usize,
    pub locked_partitions: usize,
    pub skipped_partitions: usize,
    /// Partition indices in the order they were visited.
    pub processing_order: Vec<usize>,
    pub partitions: Vec<PartitionRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rejection {
    pub kind: TransformKind,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionRecord {
    pub index: usize,
    /// Gate ids in the netlist that was partitioned (the AIG when enabled).
    pub gates: Vec<u32>,
    pub n: usize,
    pub m: usize,
    pub depth: u32,
    pub coverage: f64,
    pub max_cone_inputs: usize,
    pub eligible: bool,
    pub locked: bool,
    pub skip_reason: Option<String>,
    pub kind: Option<TransformKind>,
    pub key_offset: Option<usize>,
    pub key_width: usize,
    /// Correct slice bits, lowest key index first.
    pub correct_bits: String,
    pub dummies: Vec<String>,
    pub dummy_levels: Vec<u32>,
    pub min_input_level: u32,
    pub dummies_requested: usize,
    pub dummies_reduced: bool,
    pub dummies_fallback: bool,
    pub rejected: Vec<Rejection>,
    pub wrong_key_check: bool,
    pub verified: bool,
    /// Output net names of the gates fed by this slice's key inputs.
    pub key_entry_gates: Vec<String>,
    pub complexity: Option<ComplexityStats>,
    pub gates_removed: usize,
    pub gates_added: usize,
}

impl PartitionRecord {
    pub(crate) fn skeleton(index: usize) -> Self {
        PartitionRecord {
            index,
            gates: Vec::new(),
            n: 0,
            m: 0,
            depth: 0,
            coverage: 0.0,
            max_cone_inputs: 0,
            eligible: false,
            locked: false,
            skip_reason: None,
            kind: None,
            key_offset: None,
            key_width: 0,
            correct_bits: String::new(),
            dummies: Vec::new(),
            dummy_levels: Vec::new(),
            min_input_level: 0,
            dummies_requested: 0,
            dummies_reduced: false,
            dummies_fallback: false,
            rejected: Vec::new(),
            wrong_key_check: false,
            verified: false,
            key_entry_gates: Vec::new(),
            complexity: None,
            gates_removed: 0,
            gates_added: 0,
        }
    }
}
