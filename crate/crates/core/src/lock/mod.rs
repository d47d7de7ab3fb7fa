//! Partition-driven truth-table locking.
//!
//! The circuit is cut into small partitions. Each eligible partition has its
//! output functions replaced by keyed families that agree with the original
//! only under the correct key, and the families are resynthesized in place.

pub mod complexity;
pub mod dummy;
pub mod manifest;
pub(crate) mod synth;
pub mod transform;
pub mod truth;
pub mod view;
pub(crate) mod work;
pub mod xor;

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use complexity::{complexity_stats, ComplexityStats};
pub use dummy::{assign_dummy_inputs, DummyChoice, DummyPool};
pub use manifest::{LockManifest, PartitionRecord, Rejection, ARITHMETIC_CONVENTION};
pub use transform::{
    correct_key_transparent, transform, wrong_key_effective, KeyedFunction, LocalFunction, TransformError,
    TransformKind, Var, MAX_KEYED_INPUTS, MAX_RANDOM_INPUTS,
};
pub use truth::BooleanFunction;
pub use view::{build_views, evaluate_partition, extract_function, ExtractedFunction, PartitionView, MAX_TT_INPUTS};
pub use xor::{xor_lock, XorLocked};

use crate::aig::to_aig;
use crate::key::KeyBits;
use crate::netlist::{topo_order, GateKind, NetId, Netlist, NetlistError, TopoOrder};
use crate::partition::{build_hypergraph, compute_partition_size, cut_size, partition, PartitionError};
use synth::{Source, Stage, SynthError};
use work::Work;

pub const DEFAULT_MIN_DEPTH: u32 = 2;
pub const DEFAULT_MIN_COVERAGE: f64 = 0.5;
pub const DEFAULT_DUMMY_MAX: usize = 2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a run seed and a salt.
pub(crate) fn mix(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(salt))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LockOptions {
    pub key_size: usize,
    /// Gates per partition; derived from the key size when `None`.
    pub partition_size: Option<usize>,
    pub seed: u64,
    pub aig: bool,
    pub min_depth: u32,
    pub min_coverage: f64,
    pub dummy_max: usize,
    pub balance_tol: f64,
    /// Allowed transforms; all five when `None`.
    pub kinds: Option<Vec<TransformKind>>,
}

impl LockOptions {
    pub fn new(key_size: usize) -> Self {
        LockOptions {
            key_size,
            partition_size: None,
            seed: 0,
            aig: false,
            min_depth: DEFAULT_MIN_DEPTH,
            min_coverage: DEFAULT_MIN_COVERAGE,
            dummy_max: DEFAULT_DUMMY_MAX,
            balance_tol: crate::partition::DEFAULT_BALANCE_TOL,
            kinds: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Error)]
pub enum LockError {
    #[error("key size must be at least 1")]
    ZeroKey,
    #[error("input netlist already has key inputs")]
    AlreadyKeyed,
    #[error("circuit has no gates")]
    Empty,
    #[error("no partition is eligible for locking ({partitions} examined)")]
    NothingLockable { partitions: usize },
    #[error("{requested} key bits requested, eligible partitions can hold {capacity}")]
    KeyCapacity { requested: usize, capacity: usize },
    #[error("{0} key bits could not be placed: remaining partitions rejected every transform")]
    Unplaced(usize),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Clone, Debug)]
pub struct LockResult {
    pub netlist: Netlist,
    pub key: KeyBits,
    pub manifest: LockManifest,
}

/// Key bits per candidate partition. The first `min(len, k)` candidates
/// share the key evenly, remainder to the front; any bits above a
/// partition's capacity are handed round-robin to partitions with room,
/// trying the first group before later candidates.
pub fn distribute_keys(k: usize, capacities: &[usize]) -> Result<Vec<usize>, LockError> {
    let capacity: usize = capacities.iter().sum();
    if capacity < k || capacities.is_empty() {
        return Err(LockError::KeyCapacity { requested: k, capacity });
    }
    let l = capacities.len().min(k);
    let mut bits = vec![0usize; capacities.len()];
    for i in 0..l {
        bits[i] = (k / l + usize::from(i < k % l)).min(capacities[i]);
    }
    let mut left = k - bits.iter().sum::<usize>();
    for scope in [l, capacities.len()] {
        while left > 0 && (0..scope).any(|i| bits[i] < capacities[i]) {
            for i in 0..scope {
                if left > 0 && bits[i] < capacities[i] {
                    bits[i] += 1;
                    left -= 1;
                }
            }
        }
    }
    debug_assert_eq!(left, 0);
    Ok(bits)
}

struct Ctx<'a> {
    base: &'a Netlist,
    assignment: &'a [u32],
    pool: &'a DummyPool,
    kinds: &'a [TransformKind],
    dummy_max: usize,
}

/// Synthesized replacement for one partition, not yet committed.
struct Staged {
    base: u32,
    /// `(staged offset, kind, inputs, label)` in creation order.
    gates: Vec<(usize, GateKind, Vec<u32>, u32)>,
    roots: Vec<u32>,
}

pub fn lock_netlist(netlist: &Netlist, opts: &LockOptions) -> Result<LockResult, LockError> {
    let k = opts.key_size;
    if k == 0 {
        return Err(LockError::ZeroKey);
    }
    if !netlist.key_inputs().is_empty() {
        return Err(LockError::AlreadyKeyed);
    }
    let base = if opts.aig { to_aig(netlist) } else { netlist.clone() };
    if base.gate_count() == 0 {
        return Err(LockError::Empty);
    }
    let topo = topo_order(&base)?;
    let target = match opts.partition_size {
        Some(s) => s,
        None => compute_partition_size(base.gate_count(), k)?,
    };
    let h = build_hypergraph(&base);
    let ps = partition(&h, target, opts.balance_tol, mix(opts.seed, 1))?;
    let cut = cut_size(&h, &ps)?;
    let views = build_views(&base, &topo, &ps.assignment, ps.p);
    let min_depth = opts.min_depth.min(topo.depth());
    let kinds: Vec<TransformKind> = opts.kinds.clone().unwrap_or_else(|| TransformKind::ALL.to_vec());

    let mut records: Vec<PartitionRecord> = views.iter().map(|v| describe(v, min_depth, opts.min_coverage)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(opts.seed, 2));
    let mut order: Vec<usize> = (0..views.len()).collect();
    order.shuffle(&mut rng);
    let eligible: Vec<usize> = order.iter().copied().filter(|&i| records[i].eligible).collect();
    if eligible.is_empty() {
        return Err(LockError::NothingLockable { partitions: views.len() });
    }
    let capacity = |i: usize| MAX_KEYED_INPUTS - views[i].max_cone_arity();
    let caps: Vec<usize> = eligible.iter().map(|&i| capacity(i)).collect();
    let plan = distribute_keys(k, &caps)?;
    let key = KeyBits::random(k, &mut rng);

    let mut queue: VecDeque<(usize, usize)> =
        eligible.iter().zip(&plan).filter(|(_, &b)| b > 0).map(|(&i, &b)| (i, b)).collect();
    let mut spare: VecDeque<usize> =
        eligible.iter().zip(&plan).filter(|(_, &b)| b == 0).map(|(&i, _)| i).collect();
    let pool = DummyPool::new(&base, &topo, &views);
    let ctx = Ctx { base: &base, assignment: &ps.assignment, pool: &pool, kinds: &kinds, dummy_max: opts.dummy_max };
    let mut work = Work::new(&base, &topo);
    let mut key_nets: Vec<u32> = Vec::new();
    let mut offset = 0usize;
    let mut processing = Vec::new();
    while let Some((pi, bits)) = queue.pop_front() {
        processing.push(pi);
        while key_nets.len() < offset + bits {
            let name = format!("{}{}", crate::netlist::KEY_INPUT_PREFIX, key_nets.len());
            key_nets.push(work.add_key_input(name));
        }
        let slice = offset..offset + bits;
        let mut prng = ChaCha8Rng::seed_from_u64(mix(opts.seed, 1000 + pi as u64));
        let ok = lock_partition(
            &ctx,
            &mut work,
            &views[pi],
            &key_nets[slice.clone()],
            &key.bits()[slice.clone()],
            &mut prng,
            &mut records[pi],
        );
        if ok {
            records[pi].key_offset = Some(offset);
            records[pi].key_width = bits;
            records[pi].correct_bits = key.bits()[slice].iter().map(|&b| if b { '1' } else { '0' }).collect();
            offset += bits;
            continue;
        }
        records[pi].skip_reason = Some("every transform was rejected".into());
        // Hand the bits to partitions still waiting, then to spares.
        let mut left = bits;
        for entry in queue.iter_mut() {
            let room = capacity(entry.0) - entry.1;
            let add = room.min(left);
            entry.1 += add;
            left -= add;
        }
        while left > 0 {
            let Some(s) = spare.pop_front() else { return Err(LockError::Unplaced(left)) };
            let add = capacity(s).min(left);
            queue.push_back((s, add));
            left -= add;
        }
    }
    for &i in &spare {
        records[i].skip_reason = Some("no key bits left".into());
    }
    debug_assert_eq!(offset, k);

    let locked = work.compact()?;
    for r in records.iter_mut().filter(|r| r.locked) {
        let mut entries = HashSet::new();
        for j in r.key_offset.unwrap_or(0)..r.key_offset.unwrap_or(0) + r.key_width {
            let net = locked.key_inputs()[j];
            for &g in &locked.net(net).sinks {
                entries.insert(locked.net_name(locked.gate(g).output).to_string());
            }
        }
        let mut entries: Vec<String> = entries.into_iter().collect();
        entries.sort();
        r.key_entry_gates = entries;
    }
    let locked_count = records.iter().filter(|r| r.locked).count();
    let manifest = LockManifest {
        schema_version: crate::SCHEMA_VERSION,
        seed: opts.seed,
        key_size: k,
        correct_key: key.to_hex(),
        aig: opts.aig,
        partition_size: target,
        partition_count: ps.p,
        balance_tol: opts.balance_tol,
        cut_size: cut,
        min_depth: opts.min_depth,
        min_depth_effective: min_depth,
        min_coverage: opts.min_coverage,
        dummy_max: opts.dummy_max,
        arithmetic_convention: ARITHMETIC_CONVENTION,
        gates_before: base.gate_count(),
        gates_after: locked.gate_count(),
        locked_partitions: locked_count,
        skipped_partitions: records.len() - locked_count,
        processing_order: processing,
        partitions: records,
    };
    Ok(LockResult { netlist: locked, key, manifest })
}

fn describe(v: &PartitionView, min_depth: u32, min_coverage: f64) -> PartitionRecord {
    let mut r = PartitionRecord::skeleton(v.index);
    r.gates = v.gates.iter().map(|g| g.0).collect();
    r.n = v.n();
    r.m = v.m();
    r.depth = v.max_logic_depth;
    r.coverage = v.mean_coverage();
    r.max_cone_inputs = v.max_cone_arity();
    r.skip_reason = if v.outputs.is_empty() {
        Some("partition has no outputs".into())
    } else if !evaluate_partition(v, min_depth, min_coverage) {
        Some(format!(
            "depth {} or mean coverage {:.3} below thresholds ({min_depth}, {min_coverage})",
            v.max_logic_depth,
            v.mean_coverage()
        ))
    } else if v.max_cone_arity() > MAX_TT_INPUTS {
        Some(view::ArityOverflow { arity: v.max_cone_arity() }.to_string())
    } else {
        None
    };
    r.eligible = r.skip_reason.is_none();
    r
}

fn lock_partition(
    ctx: &Ctx<'_>,
    work: &mut Work,
    view: &PartitionView,
    key_nets: &[u32],
    correct: &[bool],
    rng: &mut ChaCha8Rng,
    rec: &mut PartitionRecord,
) -> bool {
    let fs: Vec<ExtractedFunction> = (0..view.m())
        .map(|t| extract_function(ctx.base, ctx.assignment, view, t).expect("arity checked for eligibility"))
        .collect();
    let lfs: Vec<LocalFunction> = fs
        .iter()
        .zip(&view.cone_inputs)
        .map(|(f, c)| LocalFunction { inputs: c.clone(), table: f.table.clone() })
        .collect();
    let room = MAX_KEYED_INPUTS.saturating_sub(key_nets.len() + view.max_cone_arity());
    let d = rng.gen_range(0..=ctx.dummy_max.min(view.n())).min(room);
    let outputs: Vec<u32> = view.outputs.iter().map(|o| o.0).collect();
    let choice = ctx.pool.choose(
        view,
        |x| work.label[x.index()],
        d,
        |x| work.reaches(&outputs, x.0),
        rng,
    );
    rec.min_input_level = choice.min_input_level;
    rec.dummies_requested = choice.requested;
    rec.dummies_reduced = choice.reduced;
    rec.dummies_fallback = choice.fallback;

    let mut remaining: Vec<TransformKind> = ctx.kinds.to_vec();
    while !remaining.is_empty() {
        let kind = remaining.remove(rng.gen_range(0..remaining.len()));
        let tseed: u64 = rng.gen();
        let dummies: &[NetId] = if kind.uses_dummies() { &choice.nets } else { &[] };
        match stage_kind(ctx, work, view, &fs, &lfs, kind, correct, key_nets, dummies, tseed) {
            Ok(staged) => {
                rec.gates_removed = view.gates.len();
                rec.gates_added = commit(work, view, staged);
                rec.kind = Some(kind);
                rec.locked = true;
                rec.wrong_key_check = true;
                rec.verified = true;
                rec.dummies = dummies.iter().map(|&n| ctx.base.net_name(n).to_string()).collect();
                rec.dummy_levels = dummies.iter().map(|&n| work.label[n.index()]).collect();
                rec.complexity =
                    Some(complexity_stats(view.n() as u32, key_nets.len() as u32, dummies.len() as u32));
                return true;
            }
            Err(reason) => rec.rejected.push(Rejection { kind, reason }),
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn stage_kind(
    ctx: &Ctx<'_>,
    work: &Work,
    view: &PartitionView,
    fs: &[ExtractedFunction],
    lfs: &[LocalFunction],
    kind: TransformKind,
    correct: &[bool],
    key_nets: &[u32],
    dummies: &[NetId],
    seed: u64,
) -> Result<Staged, String> {
    let m = view.m();
    let family = transform(lfs, kind, correct, dummies.len(), seed).map_err(|e| e.to_string())?;
    if !correct_key_transparent(lfs, &family, correct) {
        return Err("correct key does not reproduce the original outputs".into());
    }
    if !wrong_key_effective(&family, correct) {
        return Err("some wrong key leaves every output unchanged".into());
    }
    let real_vars = |kf: &KeyedFunction| -> Vec<u32> {
        kf.vars
            .iter()
            .map(|v| match *v {
                Var::Input(i) => view.inputs[i].0,
                Var::Dummy(j) => dummies[j].0,
                Var::Key(j) => key_nets[j],
            })
            .collect()
    };
    let tie = work.primary_inputs.first().copied().unwrap_or(key_nets[0]);
    let src = Source { netlist: ctx.base, assignment: ctx.assignment, part: view.index as u32 };
    let mut stage = Stage::new(work, src, tie);
    let bound = |t: usize| work.label[view.outputs[t].index()];
    let mut roots = Vec::with_capacity(m);
    let mask = mask_key(correct, seed);

    if kind.output_level() {
        for t in 0..m {
            let involved: Vec<usize> = match kind {
                TransformKind::ShuffledOutputs => vec![t, (t + m - 1) % m],
                TransformKind::Arithmetic => (0..=t).collect(),
                _ => vec![t],
            };
            for s in involved {
                if stage.copy_label(view.outputs[s], None) >= bound(t) {
                    return Err(format!("output {s} is too deep to feed output {t}"));
                }
            }
        }
        let ys: Vec<u32> = view.outputs.iter().map(|&o| stage.copy(o, None)).collect();
        let proj: Vec<LocalFunction> =
            (0..m).map(|s| LocalFunction { inputs: vec![s], table: BooleanFunction::var(1, 0) }).collect();
        let pfam = transform(&proj, kind, correct, 0, seed).map_err(|e| e.to_string())?;
        for (t, kf) in pfam.iter().enumerate() {
            let vars: Vec<u32> = kf
                .vars
                .iter()
                .map(|v| match *v {
                    Var::Input(s) => ys[s],
                    Var::Key(j) => key_nets[j],
                    Var::Dummy(_) => unreachable!("output-level kinds take no dummies"),
                })
                .collect();
            roots.push(realize_keyed(&mut stage, &vars, &kf.table, kf.key_bits, mask, bound(t))?);
        }
    } else {
        for (t, f) in fs.iter().enumerate() {
            let ins: Vec<u32> = f.inputs.iter().map(|n| n.0).collect();
            for (net, table) in &f.internal {
                stage.seed_copy(&ins, table, *net, None);
            }
            stage.seed_copy(&ins, &f.table, view.outputs[t], None);
            if kind == TransformKind::DummySubstitution {
                let du = dummies.len().min(ins.len());
                let map: HashMap<u32, u32> = (0..du).map(|j| (ins[j], dummies[j].0)).collect();
                let sub: Vec<u32> = (0..ins.len()).map(|j| if j < du { dummies[j].0 } else { ins[j] }).collect();
                let v = stage.add_substitution(map);
                for (net, table) in &f.internal {
                    stage.seed_copy(&sub, table, *net, Some(v));
                }
                stage.seed_copy(&sub, &f.table, view.outputs[t], Some(v));
            }
        }
        for (t, kf) in family.iter().enumerate() {
            roots.push(realize_keyed(&mut stage, &real_vars(kf), &kf.table, kf.key_bits, mask, bound(t))?);
        }
    }
    for (t, kf) in family.iter().enumerate() {
        if !stage.verify(roots[t], &real_vars(kf), &kf.table) {
            return Err(format!("resynthesized output {t} failed exhaustive verification"));
        }
    }
    let base = stage.base();
    let gates = stage
        .cone(&roots)
        .into_iter()
        .map(|i| {
            let g = &stage.gates[i];
            (i, g.kind, g.inputs.clone(), stage.label(base + i as u32))
        })
        .collect();
    Ok(Staged { base, gates, roots })
}

/// Half of the partitions (by seed) get a wrong key `w` whose cofactor is
/// realized on its own and corrected by XOR, so fixing key bits to their
/// correct values does not systematically produce the smaller circuit.
fn mask_key(correct: &[bool], seed: u64) -> Option<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 3));
    if !rng.gen_bool(0.5) {
        return None;
    }
    let k = correct.len();
    let c = KeyBits(correct.to_vec()).to_u64();
    let span = (1u64 << k) - 1;
    let w = (c + 1 + rng.gen_range(0..span)) & span;
    Some(w)
}

/// `table` has its `key_bits` key variables last. With a mask key `w`,
/// realizes `F(.., w) ^ (F ^ F(.., w))` instead of `F` directly.
fn realize_keyed(
    stage: &mut Stage<'_>,
    vars: &[u32],
    table: &BooleanFunction,
    key_bits: usize,
    mask: Option<u64>,
    bound: u32,
) -> Result<u32, String> {
    let err = |e: SynthError| e.to_string();
    let Some(w) = mask else {
        return stage.realize(vars, table, bound).map_err(err);
    };
    let a = vars.len() - key_bits;
    let g = table.slice(a, (w as usize) << a);
    let positions: Vec<usize> = (0..a).collect();
    let ge = g.expand(vars.len(), &positions);
    let e = BooleanFunction::from_words(
        vars.len(),
        table.words().iter().zip(ge.words()).map(|(x, y)| x ^ y).collect(),
    );
    let rg = stage.realize(&vars[..a], &g, bound).map_err(err)?;
    if e.is_zero() {
        return Ok(rg);
    }
    let re = stage.realize(vars, &e, bound).map_err(err)?;
    Ok(stage.xor(rg, re))
}

/// Replaces the partition's gates with the staged network; returns the
/// number of gates added.
fn commit(work: &mut Work, view: &PartitionView, staged: Staged) -> usize {
    for &g in &view.gates {
        work.kill(g.0);
    }
    let base = staged.base;
    let mut root_uses: HashMap<u32, usize> = HashMap::new();
    for &r in &staged.roots {
        *root_uses.entry(r).or_default() += 1;
    }
    let read: HashSet<u32> = staged.gates.iter().flat_map(|g| g.2.iter().copied()).collect();
    let mut rename: HashMap<u32, u32> = HashMap::new();
    for (t, &r) in staged.roots.iter().enumerate() {
        if r >= base && root_uses[&r] == 1 && !read.contains(&r) {
            rename.insert(r, view.outputs[t].0);
        }
    }
    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut added = 0;
    for (i, kind, inputs, label) in staged.gates {
        let id = base + i as u32;
        let ins: Vec<u32> = inputs.iter().map(|&x| if x >= base { map[&x] } else { x }).collect();
        let net = match rename.get(&id) {
            Some(&o) => {
                work.redrive(kind, ins, o);
                o
            }
            None => {
                let name = work.fresh_name("lk");
                work.add_gate(kind, ins, name, label)
            }
        };
        map.insert(id, net);
        added += 1;
    }
    for (t, &r) in staged.roots.iter().enumerate() {
        if !rename.contains_key(&r) {
            let src = if r >= base { map[&r] } else { r };
            work.redrive(GateKind::Buf, vec![src], view.outputs[t].0);
            added += 1;
        }
    }
    added
}

/// Levels of `netlist` after locking, for checks that need them.
pub fn locked_topo(result: &LockResult) -> Result<TopoOrder, NetlistError> {
    topo_order(&result.netlist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{emit_bench, parse_bench};
    use crate::sim::{equivalence_check, PatternMode};

    #[test]
    fn distribution_even_then_remainder() {
        assert_eq!(distribute_keys(7, &[16, 16, 16]).unwrap(), vec![3, 2, 2]);
        assert_eq!(distribute_keys(2, &[16, 16, 16]).unwrap(), vec![1, 1, 0]);
        assert_eq!(distribute_keys(10, &[2, 16]).unwrap(), vec![2, 8]);
        assert_eq!(distribute_keys(5, &[1, 1, 4]).unwrap(), vec![1, 1, 3]);
        assert!(matches!(distribute_keys(9, &[4, 4]), Err(LockError::KeyCapacity { .. })));
    }

    #[test]
    fn one_gate_one_bit() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        let r = lock_netlist(&n, &LockOptions::new(1)).unwrap();
        assert_eq!(r.netlist.key_inputs().len(), 1);
        assert_eq!(r.netlist.net_name(r.netlist.key_inputs()[0]), "keyinput0");
        assert!(equivalence_check(&n, &r.netlist, r.key.bits(), PatternMode::Exhaustive).unwrap().equivalent());
        let wrong: Vec<bool> = r.key.bits().iter().map(|b| !b).collect();
        assert!(!equivalence_check(&n, &r.netlist, &wrong, PatternMode::Exhaustive).unwrap().equivalent());
    }

    #[test]
    fn deterministic_under_seed() {
        let n = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(o)\nOUTPUT(p)\n\
             x = AND(a, b)\ny = OR(c, d)\nz = XOR(x, y)\no = NAND(z, a)\np = NOR(z, d)\n",
        )
        .unwrap();
        let mut opts = LockOptions::new(3).seed(11);
        opts.partition_size = Some(3);
        let a = lock_netlist(&n, &opts).unwrap();
        let b = lock_netlist(&n, &opts).unwrap();
        assert_eq!(emit_bench(&a.netlist), emit_bench(&b.netlist));
        assert_eq!(a.key, b.key);
    }

    #[test]
    fn each_kind_locks_a_small_circuit() {
        let n = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nINPUT(e)\nINPUT(f)\nOUTPUT(o)\nOUTPUT(p)\n\
             x = AND(a, b)\ny = OR(c, x)\nz = XOR(y, d)\no = NAND(z, e)\np = NOR(y, a)\n",
        )
        .unwrap();
        for kind in TransformKind::ALL {
            let mut locked_any = false;
            for seed in 0..20 {
                let mut opts = LockOptions::new(2).seed(seed);
                opts.kinds = Some(vec![kind]);
                opts.partition_size = Some(n.gate_count());
                let Ok(r) = lock_netlist(&n, &opts) else { continue };
                locked_any = true;
                assert_eq!(r.manifest.partitions[0].kind, Some(kind));
                topo_order(&r.netlist).unwrap();
                let eq = equivalence_check(&n, &r.netlist, r.key.bits(), PatternMode::Exhaustive).unwrap();
                assert!(eq.equivalent(), "{kind:?} seed {seed}");
            }
            assert!(locked_any, "{kind:?} never applied");
        }
    }

    #[test]
    fn rejects_keyed_input() {
        let n = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(o)\no = AND(a, keyinput0)\n").unwrap();
        assert!(matches!(lock_netlist(&n, &LockOptions::new(1)), Err(LockError::AlreadyKeyed)));
    }
}
