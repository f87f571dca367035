use std::fmt;
use std::str::FromStr;

use super::BitVector;
use crate::error::{invalid, Error, Result};

/// Polynomial over F2 packed in a `u64`; bit `l` is the coefficient of `x^l`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly(u64);

impl Gf2Poly {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);
    pub const X: Self = Self(0b10);

    pub const fn from_word(word: u64) -> Self {
        Self(word)
    }

    pub const fn word(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Degree, or `None` for the zero polynomial.
    pub const fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros())
        }
    }

    /// Remainder of `self` divided by `divisor`.
    ///
    /// # Panics
    /// Panics if `divisor` is zero.
    pub fn rem(self, divisor: Self) -> Self {
        let d = divisor.degree().expect("division by the zero polynomial");
        let mut r = self.0;
        while r != 0 {
            let dr = 63 - r.leading_zeros();
            if dr < d {
                break;
            }
            r ^= divisor.0 << (dr - d);
        }
        Self(r)
    }

    /// Irreducibility by trial division against every polynomial of degree
    /// `1..=deg/2`.
    pub fn is_irreducible(self) -> Result<bool> {
        let Some(deg) = self.degree() else {
            return invalid("irreducibility of the zero polynomial is undefined");
        };
        if deg == 0 {
            // the unit 1 is not irreducible
            return Ok(false);
        }
        let limit = 1u64 << (deg / 2 + 1);
        Ok((2..limit).all(|d| !self.rem(Self(d)).is_zero()))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({:#x})", self.0)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix("0x")
            .ok_or_else(|| Error::InvalidInput(format!("polynomial {s:?} lacks 0x prefix")))?;
        u64::from_str_radix(digits, 16)
            .map(Self)
            .map_err(|e| Error::InvalidInput(format!("polynomial {s:?}: {e}")))
    }
}

/// The polynomials `p_1 = x, p_2, p_3, ...`: after `x`, every irreducible
/// other than `x` in ascending order of (degree, coefficient word).
///
/// Ordering by integer encoding already sorts by degree, so the iterator just
/// walks the words upward.
#[derive(Debug, Clone)]
pub struct Irreducibles {
    next_word: u64,
    emitted_x: bool,
}

impl Irreducibles {
    pub fn new() -> Self {
        Self {
            next_word: 3,
            emitted_x: false,
        }
    }
}

impl Default for Irreducibles {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Irreducibles {
    type Item = Gf2Poly;

    fn next(&mut self) -> Option<Gf2Poly> {
        if !self.emitted_x {
            self.emitted_x = true;
            return Some(Gf2Poly::X);
        }
        loop {
            let p = Gf2Poly(self.next_word);
            self.next_word = self.next_word.checked_add(1)?;
            if p.is_irreducible().unwrap_or(false) {
                return Some(p);
            }
        }
    }
}

/// The `j`-th polynomial (1-based) of [`Irreducibles`].
///
/// # Panics
/// Panics if `j == 0`.
pub fn irreducible_sequence(j: usize) -> Gf2Poly {
    assert!(j >= 1, "irreducible_sequence is 1-based");
    Irreducibles::new()
        .nth(j - 1)
        .expect("irreducible enumeration exhausted the word")
}

/// Wide polynomial buffer, little-endian limbs.
fn wide_pow(p: Gf2Poly, exp: u32) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..exp {
        let mut out = vec![0u64; acc.len() + 1];
        let mut bits = p.0;
        while bits != 0 {
            let shift = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            xor_shifted(&mut out, &acc, shift);
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        acc = out;
    }
    acc
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (limb, bit) = (shift / 64, shift % 64);
    for (i, &w) in src.iter().enumerate() {
        dst[i + limb] ^= w << bit;
        if bit != 0 && w >> (64 - bit) != 0 {
            dst[i + limb + 1] ^= w >> (64 - bit);
        }
    }
}

fn bit(words: &[u64], i: usize) -> bool {
    words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

/// First `count` coefficients `a_1, ..., a_count` of the expansion
/// `x^(e-z-1) / p(x)^i = sum_l a_l x^(-l)` in `F2((x^-1))`, where `e = deg p`.
///
/// Computed by formal long division: the remainder is multiplied by `x`, and
/// whenever it reaches the degree of `p^i` the quotient digit is 1 and `p^i`
/// is subtracted.
pub fn laurent_coefficients(p: Gf2Poly, i: u32, z: u32, count: usize) -> Result<BitVector> {
    let Some(e) = p.degree().filter(|&e| e >= 1) else {
        return invalid(format!("Laurent expansion needs deg p >= 1, got {p}"));
    };
    if i == 0 {
        return invalid("Laurent expansion needs power i >= 1");
    }
    if z >= e {
        return invalid(format!("shift z = {z} must be below deg p = {e}"));
    }
    let denom = wide_pow(p, i);
    let d = (i * e) as usize;
    let mut rem = vec![0u64; d / 64 + 1];
    let start = (e - z - 1) as usize;
    rem[start / 64] |= 1 << (start % 64);

    let mut out = BitVector::zeros(count);
    for l in 0..count {
        // rem <- rem * x
        let mut carry = 0;
        for w in rem.iter_mut() {
            let next = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next;
        }
        if bit(&rem, d) {
            out.set(l, true);
            for (r, q) in rem.iter_mut().zip(&denom) {
                *r ^= q;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(v: &BitVector) -> Vec<u8> {
        (0..v.len()).map(|i| v.get(i) as u8).collect()
    }

    #[test]
    fn irreducibility_small_cases() {
        assert!(Gf2Poly::X.is_irreducible().unwrap());
        assert!(Gf2Poly::from_word(0b111).is_irreducible().unwrap());
        assert!(!Gf2Poly::from_word(0b101).is_irreducible().unwrap());
        assert!(!Gf2Poly::ONE.is_irreducible().unwrap());
        assert!(Gf2Poly::ZERO.is_irreducible().is_err());
    }

    #[test]
    fn sequence_head() {
        let head: Vec<u64> = Irreducibles::new().take(8).map(Gf2Poly::word).collect();
        // x, x+1, x^2+x+1, x^3+x+1, x^3+x^2+1, then the three quartics
        assert_eq!(head, vec![0b10, 0b11, 0b111, 0b1011, 0b1101, 0b10011, 0b11001, 0b11111]);
        assert_eq!(irreducible_sequence(1), Gf2Poly::X);
        assert_eq!(irreducible_sequence(2), Gf2Poly::from_word(3));
        assert_eq!(irreducible_sequence(4), Gf2Poly::from_word(11));
    }

    #[test]
    fn degree_counts_match_necklace_formula() {
        // number of irreducibles of degree d over F2: 2,1,2,3,6,9,18,30
        let expected = [2usize, 1, 2, 3, 6, 9, 18, 30];
        let polys: Vec<Gf2Poly> = Irreducibles::new().take(71).collect();
        for (d, &n) in expected.iter().enumerate() {
            let got = polys.iter().filter(|p| p.degree() == Some(d as u32 + 1)).count();
            assert_eq!(got, n, "degree {}", d + 1);
        }
    }

    #[test]
    fn laurent_examples() {
        let c = laurent_coefficients(Gf2Poly::X, 1, 0, 4).unwrap();
        assert_eq!(bits(&c), [1, 0, 0, 0]);
        let c = laurent_coefficients(Gf2Poly::from_word(3), 1, 0, 4).unwrap();
        assert_eq!(bits(&c), [1, 1, 1, 1]);
        let c = laurent_coefficients(Gf2Poly::from_word(7), 1, 1, 5).unwrap();
        assert_eq!(bits(&c), [0, 1, 1, 0, 1]);
        assert!(laurent_coefficients(Gf2Poly::from_word(7), 1, 2, 5).is_err());
    }

    #[test]
    fn poly_text_round_trip() {
        let p: Gf2Poly = "0xb".parse().unwrap();
        assert_eq!(p, Gf2Poly::from_word(11));
        assert_eq!(p.to_string(), "0xb");
        assert!("b".parse::<Gf2Poly>().is_err());
    }

    /// Multiply `p^i` by the truncated series and add `x^(e-z-1)`. The
    /// residual is `p^i` times the dropped tail, so after scaling by
    /// `x^count` it must have degree below `deg(p^i)`.
    fn residual_is_tail(p: Gf2Poly, i: u32, z: u32, count: usize) -> bool {
        let e = p.degree().unwrap();
        let denom = wide_pow(p, i);
        let coeffs = laurent_coefficients(p, i, z, count).unwrap();
        // shift everything by x^count so exponents are nonnegative
        let width = (i * e) as usize + count + 2;
        let mut acc = vec![0u64; width / 64 + 2];
        for l in 0..count {
            if coeffs.get(l) {
                xor_shifted(&mut acc, &denom, count - (l + 1));
            }
        }
        let top = (e - z - 1) as usize + count;
        acc[top / 64] ^= 1 << (top % 64);
        ((i * e) as usize..acc.len() * 64).all(|b| !bit(&acc, b))
    }

    proptest! {
        #[test]
        fn laurent_satisfies_defining_recurrence(j in 1usize..12, i in 1u32..5, count in 1usize..90, zs in 0u32..8) {
            let p = irreducible_sequence(j);
            let z = zs % p.degree().unwrap();
            prop_assert!(residual_is_tail(p, i, z, count));
        }

        #[test]
        fn sequence_is_degree_monotone(j in 2usize..60) {
            let a = irreducible_sequence(j);
            let b = irreducible_sequence(j + 1);
            prop_assert!(a != b);
            prop_assert!(a.degree() <= b.degree());
        }
    }
}
