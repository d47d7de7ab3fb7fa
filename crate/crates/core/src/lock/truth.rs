//! Explicit truth tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::sim::exhaustive_word;

/// Largest arity a table may have.
pub const MAX_TABLE_INPUTS: usize = 20;

/// Truth table over `arity` variables. Entry `j` is the value under the
/// pattern whose bit `i` drives variable `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

fn valid_mask(arity: usize) -> u64 {
    if arity >= 6 {
        !0
    } else {
        (1u64 << (1 << arity)) - 1
    }
}

/// Bits of a word where variable `i < 6` is 0.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl BooleanFunction {
    pub fn zero(arity: usize) -> Self {
        assert!(arity <= MAX_TABLE_INPUTS, "arity {arity} too large");
        BooleanFunction { arity, words: vec![0; word_count(arity)] }
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        let f = Self::zero(arity);
        if value {
            f.not()
        } else {
            f
        }
    }

    /// Identity on variable `var`.
    pub fn var(arity: usize, var: usize) -> Self {
        assert!(var < arity);
        let mut f = Self::zero(arity);
        let m = valid_mask(arity);
        for (b, w) in f.words.iter_mut().enumerate() {
            *w = exhaustive_word(var, b as u64) & m;
        }
        f
    }

    pub fn from_fn(arity: usize, mut eval: impl FnMut(usize) -> bool) -> Self {
        let mut f = Self::zero(arity);
        for j in 0..f.len() {
            if eval(j) {
                f.set(j, true);
            }
        }
        f
    }

    /// Builds from `0`/`1` characters, entry 0 first.
    pub fn from_bits_str(bits: &str) -> Option<Self> {
        let n = bits.len();
        if !n.is_power_of_two() {
            return None;
        }
        let arity = n.trailing_zeros() as usize;
        let mut f = Self::zero(arity);
        for (j, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => f.set(j, true),
                _ => return None,
            }
        }
        Some(f)
    }

    /// Table from words in pattern order; extra bits are cleared.
    pub fn from_words(arity: usize, mut words: Vec<u64>) -> Self {
        assert_eq!(words.len(), word_count(arity));
        words[0] &= valid_mask(arity);
        BooleanFunction { arity, words }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of entries, `2^arity`.
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, j: usize) -> bool {
        (self.words[j >> 6] >> (j & 63)) & 1 == 1
    }

    pub fn set(&mut self, j: usize, v: bool) {
        let bit = 1u64 << (j & 63);
        if v {
            self.words[j >> 6] |= bit;
        } else {
            self.words[j >> 6] &= !bit;
        }
    }

    pub fn not(&self) -> Self {
        let m = valid_mask(self.arity);
        BooleanFunction { arity: self.arity, words: self.words.iter().map(|w| !w & m).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        let m = valid_mask(self.arity);
        self.words.iter().all(|&w| w == m)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        assert!(var < self.arity);
        if var < 6 {
            let s = 1u32 << var;
            self.words.iter().any(|&w| ((w >> s) ^ w) & LOW_HALF[var] != 0)
        } else {
            let stride = 1usize << (var - 6);
            self.words
                .chunks(2 * stride)
                .any(|c| c[..stride] != c[stride..])
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.arity).filter(|&v| self.depends_on(v)).collect()
    }

    /// Cofactor on the highest variable.
    pub fn cofactor_top(&self, value: bool) -> Self {
        assert!(self.arity >= 1);
        let a = self.arity - 1;
        if a >= 6 {
            let half = self.words.len() / 2;
            let words = if value { self.words[half..].to_vec() } else { self.words[..half].to_vec() };
            BooleanFunction { arity: a, words }
        } else {
            let half = 1u32 << a;
            let w = if value { self.words[0] >> half } else { self.words[0] };
            BooleanFunction { arity: a, words: vec![w & valid_mask(a)] }
        }
    }

    /// Cofactor on any variable; the result drops that variable.
    pub fn cofactor(&self, var: usize, value: bool) -> Self {
        assert!(var < self.arity);
        if var + 1 == self.arity {
            return self.cofactor_top(value);
        }
        let low = (1usize << var) - 1;
        BooleanFunction::from_fn(self.arity - 1, |j| {
            let src = (j & low) | ((j & !low) << 1) | ((value as usize) << var);
            self.get(src)
        })
    }

    /// Drops variables outside the support; returns the kept positions.
    pub fn reduce(&self) -> (Vec<usize>, BooleanFunction) {
        let keep = self.support();
        if keep.len() == self.arity {
            return (keep, self.clone());
        }
        (keep.clone(), self.project(&keep))
    }

    /// Table over `vars` (positions of this table), assuming the function does
    /// not depend on the omitted variables.
    fn project(&self, vars: &[usize]) -> BooleanFunction {
        BooleanFunction::from_fn(vars.len(), |j| {
            let mut src = 0usize;
            for (i, &v) in vars.iter().enumerate() {
                src |= ((j >> i) & 1) << v;
            }
            self.get(src)
        })
    }

    /// Re-expresses the table over a wider variable list: variable `i` of
    /// `self` becomes variable `positions[i]` of the result.
    pub fn expand(&self, arity: usize, positions: &[usize]) -> BooleanFunction {
        assert_eq!(positions.len(), self.arity);
        BooleanFunction::from_fn(arity, |j| {
            let mut src = 0usize;
            for (i, &p) in positions.iter().enumerate() {
                src |= ((j >> p) & 1) << i;
            }
            self.get(src)
        })
    }

    /// Entries `[offset, offset + 2^arity)` as a new table.
    pub fn slice(&self, arity: usize, offset: usize) -> BooleanFunction {
        assert!(offset + (1 << arity) <= self.len());
        if arity >= 6 {
            let start = offset >> 6;
            BooleanFunction { arity, words: self.words[start..start + word_count(arity)].to_vec() }
        } else {
            BooleanFunction::from_fn(arity, |j| self.get(offset + j))
        }
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({}; ", self.arity)?;
        if self.arity <= 6 {
            for j in 0..self.len() {
                f.write_str(if self.get(j) { "1" } else { "0" })?;
            }
        } else {
            write!(f, "{} ones", self.count_ones())?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> BooleanFunction {
        BooleanFunction::from_bits_str("0001").unwrap()
    }

    #[test]
    fn vars_and_bits() {
        let a = BooleanFunction::var(2, 0);
        assert_eq!(a, BooleanFunction::from_bits_str("0101").unwrap());
        assert_eq!(and2().not(), BooleanFunction::from_bits_str("1110").unwrap());
        let big = BooleanFunction::var(8, 7);
        assert!(!big.get(127) && big.get(128));
    }

    #[test]
    fn support_and_reduce() {
        // f(a, b, c) = b
        let f = BooleanFunction::var(3, 1);
        assert_eq!(f.support(), vec![1]);
        let (keep, r) = f.reduce();
        assert_eq!(keep, vec![1]);
        assert_eq!(r, BooleanFunction::var(1, 0));
        let wide = BooleanFunction::var(9, 7);
        assert_eq!(wide.support(), vec![7]);
        assert_eq!(wide.reduce().1, BooleanFunction::var(1, 0));
    }

    #[test]
    fn cofactors_match_pointwise() {
        for arity in 1..9 {
            let f = BooleanFunction::from_fn(arity, |j| ((j * 2654435761usize) >> 7) & 1 == 1);
            for var in 0..arity {
                for value in [false, true] {
                    let c = f.cofactor(var, value);
                    for j in 0..c.len() {
                        let low = j & ((1 << var) - 1);
                        let high = (j >> var) << (var + 1);
                        let src = low | high | ((value as usize) << var);
                        assert_eq!(c.get(j), f.get(src));
                    }
                }
            }
        }
    }

    #[test]
    fn expand_and_slice() {
        let f = and2();
        // f over (x0, x1) placed on variables 2 and 0 of a 3-variable table.
        let g = f.expand(3, &[2, 0]);
        for j in 0..8 {
            assert_eq!(g.get(j), (j >> 2) & 1 == 1 && j & 1 == 1);
        }
        assert_eq!(g.slice(2, 4), BooleanFunction::var(2, 0));
        let w = BooleanFunction::var(8, 7);
        assert!(w.slice(7, 128).is_one());
    }
}
