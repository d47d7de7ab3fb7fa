//! Size of the corrupted-function space for one partition.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

/// `E = 2^(n+k+d) - 2^(n+d)` entry locations and `F = 2^E` functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityStats {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub e: BigUint,
    /// Exact count when `E <= 64`.
    pub f_count: Option<BigUint>,
}

pub const EXACT_F_LIMIT: u32 = 64;

pub fn complexity_stats(n: u32, k: u32, d: u32) -> ComplexityStats {
    let one = BigUint::from(1u8);
    let low = &one << (n + d) as usize;
    let e = (&one << (n + k + d) as usize) - &low;
    let f_count = if e <= BigUint::from(EXACT_F_LIMIT) {
        let bits: u32 = e.to_u32_digits().first().copied().unwrap_or(0);
        Some(&one << bits as usize)
    } else {
        None
    };
    ComplexityStats { n, k, d, e, f_count }
}

impl ComplexityStats {
    /// `log2 F`, which is `E` itself.
    pub fn f_log2(&self) -> &BigUint {
        &self.e
    }

    /// `F` in `1.23e+45` form (mantissa truncated), or `2^E` when it is too
    /// large for a float.
    pub fn f_display(&self) -> String {
        match &self.f_count {
            Some(f) => sci(f),
            None => {
                let log10 = match u64::try_from(&self.e) {
                    Ok(e) if e < 1 << 50 => Some(e as f64 * std::f64::consts::LOG10_2),
                    _ => None,
                };
                match log10 {
                    Some(l) => {
                        let exp = l.floor();
                        let m = (10f64.powf(l - exp) * 100.0 + 1e-9).floor() / 100.0;
                        format!("{m:.2}e+{}", exp as u64)
                    }
                    None => format!("2^{}", self.e),
                }
            }
        }
    }
}

fn sci(v: &BigUint) -> String {
    let s = v.to_string();
    if s.len() <= 6 {
        return s;
    }
    format!("{}.{}e+{}", &s[..1], &s[1..3], s.len() - 1)
}

impl Serialize for ComplexityStats {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ComplexityStats", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("e", &self.e.to_string())?;
        st.serialize_field("f_count", &self.f_count.as_ref().map(|f| f.to_string()))?;
        st.serialize_field("f_log2", &self.e.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let s = complexity_stats(3, 1, 0);
        assert_eq!(s.e, BigUint::from(8u8));
        assert_eq!(s.f_count, Some(BigUint::from(256u32)));
        let s = complexity_stats(1, 1, 0);
        assert_eq!(s.e, BigUint::from(2u8));
        assert_eq!(s.f_count, Some(BigUint::from(4u8)));
        let s = complexity_stats(3, 2, 1);
        assert_eq!(s.e, BigUint::from(48u8));
        assert_eq!(s.f_display(), "2.81e+14");
        let s = complexity_stats(3, 3, 2);
        assert_eq!(s.e, BigUint::from(224u8));
        assert!(s.f_count.is_none());
        assert_eq!(s.f_display(), "2.69e+67");
    }

    #[test]
    fn huge_exponents_do_not_overflow() {
        let s = complexity_stats(40, 30, 10);
        assert!(s.f_count.is_none());
        assert!(s.f_display().starts_with("2^"));
    }
}
