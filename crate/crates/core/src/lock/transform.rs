//! Keyed function families for the five partition transforms.
//!
//! Every family equals the original functions under the correct key. Under a
//! wrong key `K'` the outputs follow the chosen kind.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::truth::BooleanFunction;

/// Budget for `n + d + k` of one keyed output.
pub const MAX_KEYED_INPUTS: usize = 16;
/// Random tables are only drawn over this many variables.
pub const MAX_RANDOM_INPUTS: usize = 8;
const RANDOM_REDRAWS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    ShuffledOutputs,
    Arithmetic,
    InvertedOutputs,
    DummySubstitution,
    RandomFunction,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] = [
        TransformKind::ShuffledOutputs,
        TransformKind::Arithmetic,
        TransformKind::InvertedOutputs,
        TransformKind::DummySubstitution,
        TransformKind::RandomFunction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::ShuffledOutputs => "shuffled_outputs",
            TransformKind::Arithmetic => "arithmetic",
            TransformKind::InvertedOutputs => "inverted_outputs",
            TransformKind::DummySubstitution => "dummy_substitution",
            TransformKind::RandomFunction => "random_function",
        }
    }

    pub fn uses_dummies(self) -> bool {
        matches!(self, TransformKind::DummySubstitution | TransformKind::RandomFunction)
    }

    /// Kinds whose wrong-key behaviour only mixes whole outputs, so they can
    /// be synthesized over output signals instead of partition inputs.
    pub fn output_level(self) -> bool {
        matches!(
            self,
            TransformKind::ShuffledOutputs | TransformKind::Arithmetic | TransformKind::InvertedOutputs
        )
    }
}

/// One output's function over partition inputs; `inputs` are ascending
/// positions in the partition's input list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFunction {
    pub inputs: Vec<usize>,
    pub table: BooleanFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Input(usize),
    Dummy(usize),
    Key(usize),
}

/// `table` is over `vars`; key variables come last, key bit 0 lowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyedFunction {
    pub vars: Vec<Var>,
    pub table: BooleanFunction,
    pub key_bits: usize,
}

impl KeyedFunction {
    /// Table over the non-key variables with the key fixed to `key`.
    pub fn under_key(&self, key: u64) -> BooleanFunction {
        let a = self.vars.len() - self.key_bits;
        self.table.slice(a, (key as usize) << a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("{0:?} needs at least two outputs")]
    TooFewOutputs(TransformKind),
    #[error("{0:?} needs at least one dummy input")]
    NoDummies(TransformKind),
    #[error("arithmetic key of {k} bits is wider than the {m}-bit output bus")]
    KeyWiderThanBus { k: usize, m: usize },
    #[error("keyed output needs {need} inputs, limit is {max}")]
    Arity { need: usize, max: usize },
    #[error("key slice is empty")]
    EmptyKey,
    #[error("no outputs to transform")]
    NoOutputs,
}

fn bits_to_u64(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |a, (i, &b)| a | (u64::from(b) << i))
}

fn union_inputs<'a>(fs: impl Iterator<Item = &'a LocalFunction>) -> Vec<usize> {
    let mut u: Vec<usize> = fs.flat_map(|f| f.inputs.iter().copied()).collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Builds the keyed family for `fs` (ordered as the partition outputs).
pub fn transform(
    fs: &[LocalFunction],
    kind: TransformKind,
    correct_key: &[bool],
    dummies: usize,
    seed: u64,
) -> Result<Vec<KeyedFunction>, TransformError> {
    let m = fs.len();
    let k = correct_key.len();
    if m == 0 {
        return Err(TransformError::NoOutputs);
    }
    if k == 0 {
        return Err(TransformError::EmptyKey);
    }
    match kind {
        TransformKind::ShuffledOutputs if m < 2 => return Err(TransformError::TooFewOutputs(kind)),
        TransformKind::Arithmetic if m < 2 => return Err(TransformError::TooFewOutputs(kind)),
        TransformKind::Arithmetic if k > m => return Err(TransformError::KeyWiderThanBus { k, m }),
        TransformKind::DummySubstitution | TransformKind::RandomFunction if dummies == 0 => {
            return Err(TransformError::NoDummies(kind))
        }
        _ => {}
    }
    let correct = bits_to_u64(correct_key);
    (0..m).map(|t| keyed_output(fs, t, kind, k, correct, dummies, seed)).collect()
}

fn keyed_output(
    fs: &[LocalFunction],
    t: usize,
    kind: TransformKind,
    k: usize,
    correct: u64,
    dummies: usize,
    seed: u64,
) -> Result<KeyedFunction, TransformError> {
    let m = fs.len();
    let prev = (t + m - 1) % m;
    let inputs = match kind {
        TransformKind::ShuffledOutputs => union_inputs([&fs[t], &fs[prev]].into_iter()),
        TransformKind::Arithmetic => union_inputs(fs[..=t].iter()),
        _ => fs[t].inputs.clone(),
    };
    let d_used = match kind {
        TransformKind::DummySubstitution => dummies.min(fs[t].inputs.len()),
        TransformKind::RandomFunction => dummies,
        _ => 0,
    };
    let ni = inputs.len();
    let arity = ni + d_used + k;
    let max = if kind == TransformKind::RandomFunction { MAX_RANDOM_INPUTS } else { MAX_KEYED_INPUTS };
    if arity > max {
        return Err(TransformError::Arity { need: arity, max });
    }
    let mut vars: Vec<Var> = inputs.iter().map(|&i| Var::Input(i)).collect();
    vars.extend((0..d_used).map(Var::Dummy));
    vars.extend((0..k).map(Var::Key));

    // Positions of each output's cone inputs inside `inputs`.
    let locate = |f: &LocalFunction| -> Vec<usize> {
        f.inputs.iter().map(|i| inputs.binary_search(i).unwrap_or(usize::MAX)).collect()
    };
    let pos: Vec<Vec<usize>> = fs.iter().map(locate).collect();
    let eval = |s: usize, x: usize| -> bool {
        let mut idx = 0usize;
        for (b, &p) in pos[s].iter().enumerate() {
            debug_assert!(p != usize::MAX);
            idx |= ((x >> p) & 1) << b;
        }
        fs[s].table.get(idx)
    };

    let random_tables = if kind == TransformKind::RandomFunction {
        draw_random(&fs[t], d_used, k, correct, seed, t)
    } else {
        Vec::new()
    };

    let xmask = (1usize << ni) - 1;
    let dmask = (1usize << d_used) - 1;
    let table = BooleanFunction::from_fn(arity, |j| {
        let x = j & xmask;
        let dv = (j >> ni) & dmask;
        let key = (j >> (ni + d_used)) as u64;
        if key == correct {
            return eval(t, x);
        }
        match kind {
            TransformKind::InvertedOutputs => !eval(t, x),
            TransformKind::ShuffledOutputs => eval(prev, x),
            TransformKind::Arithmetic => {
                let word: u64 = (0..=t).map(|s| u64::from(eval(s, x)) << s).sum();
                let delta = (key ^ correct) & ((1u64 << (t + 1)) - 1);
                (word.wrapping_sub(delta) >> t) & 1 == 1
            }
            TransformKind::DummySubstitution => {
                let mut idx = 0usize;
                for (b, &p) in pos[t].iter().enumerate() {
                    let bit = if b < d_used { (dv >> b) & 1 } else { (x >> p) & 1 };
                    idx |= bit << b;
                }
                fs[t].table.get(idx)
            }
            TransformKind::RandomFunction => {
                let mut idx = 0usize;
                for (b, &p) in pos[t].iter().enumerate() {
                    idx |= ((x >> p) & 1) << b;
                }
                idx |= dv << pos[t].len();
                let slot = if key < correct { key } else { key - 1 } as usize;
                random_tables[slot].get(idx)
            }
        }
    });
    Ok(KeyedFunction { vars, table, key_bits: k })
}

/// One table per wrong key value (ascending, correct value skipped), each
/// different from the original output.
fn draw_random(
    f: &LocalFunction,
    d: usize,
    k: usize,
    correct: u64,
    seed: u64,
    t: usize,
) -> Vec<BooleanFunction> {
    let n = f.inputs.len();
    let arity = n + d;
    let positions: Vec<usize> = (0..n).collect();
    let original = f.table.expand(arity, &positions);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut tables = Vec::with_capacity((1usize << k) - 1);
    for key in 0..(1u64 << k) {
        if key == correct {
            continue;
        }
        let mut table = None;
        for _ in 0..RANDOM_REDRAWS {
            let r = BooleanFunction::from_fn(arity, |_| rng.gen());
            if r != original {
                table = Some(r);
                break;
            }
        }
        let table = table.unwrap_or_else(|| {
            let mut r = original.clone();
            let j = rng.gen_range(0..r.len());
            r.set(j, !r.get(j));
            r
        });
        tables.push(table);
    }
    tables
}

/// Under the correct key every keyed output reproduces its original.
pub fn correct_key_transparent(fs: &[LocalFunction], family: &[KeyedFunction], correct_key: &[bool]) -> bool {
    let correct = bits_to_u64(correct_key);
    fs.iter().zip(family).all(|(f, kf)| {
        let under = kf.under_key(correct);
        let ni = kf.vars.iter().filter(|v| matches!(v, Var::Input(_))).count();
        let positions: Vec<usize> = f
            .inputs
            .iter()
            .map(|i| kf.vars.iter().position(|v| *v == Var::Input(*i)).expect("cone input kept"))
            .collect();
        debug_assert!(positions.iter().all(|&p| p < ni));
        under == f.table.expand(under.arity(), &positions)
    })
}

/// Every wrong key value changes at least one output on at least one
/// pattern.
pub fn wrong_key_effective(family: &[KeyedFunction], correct_key: &[bool]) -> bool {
    let correct = bits_to_u64(correct_key);
    let k = correct_key.len();
    let reference: Vec<BooleanFunction> = family.iter().map(|kf| kf.under_key(correct)).collect();
    (0..(1u64 << k))
        .filter(|&key| key != correct)
        .all(|key| family.iter().zip(&reference).any(|(kf, r)| kf.under_key(key) != *r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(inputs: Vec<usize>, bits: &str) -> LocalFunction {
        LocalFunction { inputs, table: BooleanFunction::from_bits_str(bits).unwrap() }
    }

    #[test]
    fn inverted_and() {
        let fs = [lf(vec![0, 1], "0001")];
        let fam = transform(&fs, TransformKind::InvertedOutputs, &[false], 0, 0).unwrap();
        assert_eq!(fam[0].under_key(0), BooleanFunction::from_bits_str("0001").unwrap());
        assert_eq!(fam[0].under_key(1), BooleanFunction::from_bits_str("1110").unwrap());
        assert!(wrong_key_effective(&fam, &[false]));
    }

    #[test]
    fn arithmetic_two_bit_example() {
        // Outputs (o0, o1) = (x0, x1): word 10b under pattern x = 2.
        let fs = [lf(vec![0], "01"), lf(vec![1], "01")];
        let fam = transform(&fs, TransformKind::Arithmetic, &[false, false], 0, 0).unwrap();
        // Key word 01 with correct key 00 subtracts 1: 10 - 01 = 01.
        let pattern = 0b10usize;
        let o0 = fam[0].under_key(0b01);
        let o1 = fam[1].under_key(0b01);
        assert!(o0.get(pattern & 1));
        assert!(!o1.get(pattern));
        assert!(wrong_key_effective(&fam, &[false, false]));
    }

    #[test]
    fn arithmetic_rejects_wide_key() {
        let fs = [lf(vec![0], "01"), lf(vec![1], "01")];
        assert_eq!(
            transform(&fs, TransformKind::Arithmetic, &[false; 3], 0, 0),
            Err(TransformError::KeyWiderThanBus { k: 3, m: 2 })
        );
    }

    #[test]
    fn dummy_substitution_on_xor() {
        // f = a ^ b over inputs (a, b); dummies (c, d) replace both.
        let fs = [lf(vec![0, 1], "0110")];
        let fam = transform(&fs, TransformKind::DummySubstitution, &[true], 2, 0).unwrap();
        let wrong = fam[0].under_key(0);
        assert_eq!(wrong.arity(), 4);
        for j in 0..16 {
            let c = (j >> 2) & 1 == 1;
            let d = (j >> 3) & 1 == 1;
            assert_eq!(wrong.get(j), c ^ d, "pattern {j}");
        }
        let right = fam[0].under_key(1);
        for j in 0..16 {
            assert_eq!(right.get(j), (j & 1 == 1) ^ ((j >> 1) & 1 == 1));
        }
    }

    #[test]
    fn shuffled_rotates() {
        let fs = [lf(vec![0], "01"), lf(vec![0], "10"), lf(vec![0], "11")];
        let fam = transform(&fs, TransformKind::ShuffledOutputs, &[true, false], 0, 0).unwrap();
        for (t, prev) in [(0usize, 2usize), (1, 0), (2, 1)] {
            let w = fam[t].under_key(0);
            let v = fs[prev].table.get(0);
            assert_eq!(w.get(0), v);
        }
        assert!(correct_key_transparent(&fs, &fam, &[true, false]));
    }

    #[test]
    fn shuffled_identical_outputs_are_ineffective() {
        let fs = [lf(vec![0], "01"), lf(vec![0], "01")];
        let fam = transform(&fs, TransformKind::ShuffledOutputs, &[true], 0, 0).unwrap();
        assert!(!wrong_key_effective(&fam, &[true]));
    }

    #[test]
    fn random_tables_differ_for_every_wrong_key() {
        let fs = [lf(vec![0, 1], "0111")];
        for seed in 0..20 {
            let key = [seed % 2 == 0, seed % 3 == 0];
            let fam = transform(&fs, TransformKind::RandomFunction, &key, 1, seed).unwrap();
            assert!(correct_key_transparent(&fs, &fam, &key));
            let right = fam[0].under_key(bits_to_u64(&key));
            for kv in 0..4 {
                if kv != bits_to_u64(&key) {
                    assert_ne!(fam[0].under_key(kv), right);
                }
            }
        }
    }

    #[test]
    fn arity_budget() {
        let wide = LocalFunction { inputs: (0..7).collect(), table: BooleanFunction::zero(7) };
        assert!(matches!(
            transform(&[wide], TransformKind::RandomFunction, &[true, true], 0, 0),
            Err(TransformError::NoDummies(_))
        ));
        let wide = LocalFunction { inputs: (0..7).collect(), table: BooleanFunction::zero(7) };
        assert_eq!(
            transform(&[wide], TransformKind::RandomFunction, &[true], 1, 0),
            Err(TransformError::Arity { need: 9, max: MAX_RANDOM_INPUTS })
        );
    }
}
