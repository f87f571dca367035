//! Point generation: digital nets and sequences from generating matrices,
//! digital shifts, digit interlacing and the propagation rule that cuts an
//! order-2 net down to an arbitrary number of points.
//!
//! Coordinates are stored as numerators at a shared precision `W`; the value
//! of a coordinate is `numerator / 2^W`. Digit `k` (1-based, weight `2^-k`)
//! sits at bit `W - k` of the numerator.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, over_budget, Result};
use crate::genmat::GeneratingMatrixSet;

pub const MAX_PRECISION: u32 = 64;
/// Largest `m` for which `net_points` will enumerate `2^m` points.
pub const MAX_NET_LOG2: usize = 32;

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn bit_length(n: u64) -> usize {
    (64 - n.leading_zeros()) as usize
}

/// Dyadic rational `numerator / 2^precision` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DyadicValue {
    numerator: u64,
    precision: u32,
}

impl DyadicValue {
    pub const ZERO: Self = Self {
        numerator: 0,
        precision: 0,
    };

    pub fn new(numerator: u64, precision: u32) -> Result<Self> {
        if precision > MAX_PRECISION {
            return invalid(format!("precision {precision} exceeds {MAX_PRECISION} bits"));
        }
        if numerator & !low_mask(precision) != 0 {
            return invalid(format!("numerator {numerator:#x} does not fit in {precision} bits"));
        }
        Ok(Self {
            numerator,
            precision,
        })
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn precision(self) -> u32 {
        self.precision
    }

    /// Digit `k >= 1` of the binary expansion (zero beyond the precision).
    pub fn digit(self, k: u32) -> bool {
        k >= 1 && k <= self.precision && (self.numerator >> (self.precision - k)) & 1 == 1
    }

    /// Same value padded with zero digits, or truncated (rounded down) when
    /// `precision` is smaller.
    pub fn with_precision(self, precision: u32) -> Self {
        assert!(precision <= MAX_PRECISION);
        Self {
            numerator: rescale(self.numerator, self.precision, precision),
            precision,
        }
    }

    /// Digit-wise addition modulo 2, at the larger of the two precisions.
    pub fn xor(self, other: Self) -> Self {
        let w = self.precision.max(other.precision);
        Self {
            numerator: self.with_precision(w).numerator ^ other.with_precision(w).numerator,
            precision: w,
        }
    }

    pub fn to_f64(self) -> f64 {
        dyadic_to_f64(self.numerator, self.precision)
    }
}

impl fmt::Display for DyadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.precision)
    }
}

fn rescale(numerator: u64, from: u32, to: u32) -> u64 {
    if to >= from {
        if numerator == 0 {
            0
        } else {
            numerator << (to - from)
        }
    } else {
        numerator >> (from - to)
    }
}

/// Exact for `W <= 52`; beyond that the numerator is truncated to its 52
/// leading digits first, so the conversion never rounds.
pub(crate) fn dyadic_to_f64(numerator: u64, precision: u32) -> f64 {
    let (num, w) = if precision > 52 {
        (numerator >> (precision - 52), 52)
    } else {
        (numerator, precision)
    };
    num as f64 / (1u64 << w) as f64
}

/// How a point set was produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Net,
    Sequence,
    ShiftedNet,
    Interlaced,
    /// Cut from an interlaced `2^m`-point net and rescaled.
    Propagated { m: u32 },
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Net => f.write_str("net"),
            Provenance::Sequence => f.write_str("sequence"),
            Provenance::ShiftedNet => f.write_str("shifted-net"),
            Provenance::Interlaced => f.write_str("interlaced"),
            Provenance::Propagated { m } => write!(f, "propagated(m={m})"),
            Provenance::Custom => f.write_str("custom"),
        }
    }
}

/// Exact rational factor `numer / denom` applied to the first coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AxisScale {
    pub numer: u64,
    pub denom: u64,
}

/// `N` points in `[0,1)^s`, coordinates as numerators at one precision.
///
/// Propagated sets additionally carry an [`AxisScale`] on the first axis;
/// their first coordinate is `numerator / 2^W * numer / denom`, which is no
/// longer dyadic. Operations that need dyadic coordinates reject them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    dim: usize,
    precision: u32,
    coords: Vec<u64>,
    provenance: Provenance,
    first_axis_scale: Option<AxisScale>,
}

impl PointSet {
    /// Builds a point set from row-major numerators.
    pub fn from_numerators(
        dim: usize,
        precision: u32,
        coords: Vec<u64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if dim == 0 {
            return invalid("point dimension must be positive");
        }
        if precision > MAX_PRECISION {
            return invalid(format!("precision {precision} exceeds {MAX_PRECISION} bits"));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return invalid(format!(
                "{} numerators do not form a nonempty set of {dim}-dimensional points",
                coords.len()
            ));
        }
        let mask = low_mask(precision);
        if coords.iter().any(|&c| c & !mask != 0) {
            return invalid(format!("a numerator does not fit in {precision} bits"));
        }
        Ok(Self {
            dim,
            precision,
            coords,
            provenance,
            first_axis_scale: None,
        })
    }

    pub fn from_points(points: &[Vec<DyadicValue>], provenance: Provenance) -> Result<Self> {
        let Some(first) = points.first() else {
            return invalid("point set must be nonempty");
        };
        let dim = first.len();
        let precision = points
            .iter()
            .flatten()
            .map(|v| v.precision())
            .max()
            .unwrap_or(0);
        if points.iter().any(|p| p.len() != dim) {
            return invalid("points have differing dimensions");
        }
        let coords = points
            .iter()
            .flatten()
            .map(|v| v.with_precision(precision).numerator())
            .collect();
        Self::from_numerators(dim, precision, coords, provenance)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn first_axis_scale(&self) -> Option<AxisScale> {
        self.first_axis_scale
    }

    pub fn is_dyadic(&self) -> bool {
        self.first_axis_scale.is_none()
    }

    /// Numerators of point `n`.
    pub fn point(&self, n: usize) -> &[u64] {
        &self.coords[n * self.dim..(n + 1) * self.dim]
    }

    pub fn numerators(&self) -> &[u64] {
        &self.coords
    }

    /// Unscaled dyadic coordinate `j` of point `n`.
    pub fn value(&self, n: usize, j: usize) -> DyadicValue {
        DyadicValue {
            numerator: self.coords[n * self.dim + j],
            precision: self.precision,
        }
    }

    /// Coordinate as `f64`, including the first-axis scale when present.
    pub fn value_f64(&self, n: usize, j: usize) -> f64 {
        let x = dyadic_to_f64(self.coords[n * self.dim + j], self.precision);
        match (j, self.first_axis_scale) {
            (0, Some(sc)) => {
                // numerator * numer fits in u128; one rounding in the division
                let num = self.coords[n * self.dim] as u128 * sc.numer as u128;
                let den = sc.denom as f64 * 2f64.powi(self.precision as i32);
                let v = num as f64 / den;
                if v.is_finite() {
                    v
                } else {
                    x * sc.numer as f64 / sc.denom as f64
                }
            }
            _ => x,
        }
    }

    /// All coordinates as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len())
            .flat_map(|n| (0..self.dim).map(move |j| (n, j)))
            .map(|(n, j)| self.value_f64(n, j))
            .collect()
    }

    /// Pads or truncates every coordinate to `precision` digits.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        if precision > MAX_PRECISION {
            return invalid(format!("precision {precision} exceeds {MAX_PRECISION} bits"));
        }
        let mut out = self.clone();
        for c in out.coords.iter_mut() {
            *c = rescale(*c, self.precision, precision);
        }
        out.precision = precision;
        Ok(out)
    }

    /// The first `s` coordinates of every point.
    pub fn project(&self, s: usize) -> Result<Self> {
        if s == 0 || s > self.dim {
            return invalid(format!("cannot project {} coordinates onto {s}", self.dim));
        }
        let coords = (0..self.len())
            .flat_map(|n| self.point(n)[..s].to_vec())
            .collect();
        Ok(Self {
            dim: s,
            coords,
            ..self.clone()
        })
    }

    fn require_dyadic(&self, op: &str) -> Result<()> {
        if self.first_axis_scale.is_some() {
            return invalid(format!("{op} needs dyadic coordinates; this set has a rescaled first axis"));
        }
        Ok(())
    }
}

/// Digital shift vector `sigma`, one dyadic value per coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftVector {
    precision: u32,
    numerators: Vec<u64>,
}

impl ShiftVector {
    pub fn new(values: &[DyadicValue]) -> Result<Self> {
        let precision = values.iter().map(|v| v.precision()).max().unwrap_or(0);
        Ok(Self {
            precision,
            numerators: values
                .iter()
                .map(|v| v.with_precision(precision).numerator())
                .collect(),
        })
    }

    pub fn zero(dim: usize, precision: u32) -> Self {
        Self {
            precision,
            numerators: vec![0; dim],
        }
    }

    /// Uniformly random digits from a seeded ChaCha stream.
    pub fn random(dim: usize, precision: u32, seed: u64) -> Result<Self> {
        if precision > MAX_PRECISION {
            return invalid(format!("precision {precision} exceeds {MAX_PRECISION} bits"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let numerators = (0..dim)
            .map(|_| rng.random::<u64>() & low_mask(precision))
            .collect();
        Ok(Self {
            precision,
            numerators,
        })
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self, j: usize) -> DyadicValue {
        DyadicValue {
            numerator: self.numerators[j],
            precision: self.precision,
        }
    }
}

/// Columns of every generating matrix as numerators at precision `w`:
/// `table[j][l] = sum_k c_{j,k,l} 2^(w-k)` over the first `min(rows, w)` rows.
fn column_table(g: &GeneratingMatrixSet, w: u32, cols: usize) -> Vec<Vec<u64>> {
    let rows = g.rows().min(w as usize);
    g.matrices()
        .iter()
        .map(|m| {
            (0..cols)
                .map(|l| {
                    (0..rows)
                        .filter(|&k| m.get(k, l))
                        .fold(0u64, |acc, k| acc | 1 << (w as usize - 1 - k))
                })
                .collect()
        })
        .collect()
}

/// The `2^m` points of the digital net with the given `W x m` matrices,
/// `W = g.rows()`, in index order.
pub fn net_points(g: &GeneratingMatrixSet) -> Result<PointSet> {
    let m = g.cols();
    if m > MAX_NET_LOG2 {
        return over_budget(format!("a net with 2^{m} points is too large to enumerate"));
    }
    let w = g.rows() as u32;
    if w > MAX_PRECISION {
        return invalid(format!("{w} digit rows exceed the {MAX_PRECISION}-bit precision cap"));
    }
    let s = g.s();
    let table = column_table(g, w, m);
    let count = 1usize << m;
    let mut coords = vec![0u64; count * s];
    // x_n = x_{n with lowest bit cleared} xor column(lowest bit)
    for n in 1..count {
        let low = n.trailing_zeros() as usize;
        let prev = n & (n - 1);
        for j in 0..s {
            coords[n * s + j] = coords[prev * s + j] ^ table[j][low];
        }
    }
    PointSet::from_numerators(s, w, coords, Provenance::Net)
}

fn check_sequence_matrices(g: &GeneratingMatrixSet, last_index: u64, w: u32) -> Result<()> {
    if w > MAX_PRECISION {
        return invalid(format!("precision {w} exceeds {MAX_PRECISION} bits"));
    }
    let needed = bit_length(last_index);
    if g.cols() < needed {
        return invalid(format!(
            "index {last_index} needs {needed} matrix columns, only {} available",
            g.cols()
        ));
    }
    if g.rows() < w as usize {
        return invalid(format!(
            "precision {w} needs {w} matrix rows, only {} available",
            g.rows()
        ));
    }
    if !g.is_column_finite(2) {
        return invalid("sequence matrices must vanish below k = 2l");
    }
    Ok(())
}

/// Point `n` of the digital sequence, truncated to `w` digits.
pub fn sequence_point(g: &GeneratingMatrixSet, n: u64, w: u32) -> Result<Vec<DyadicValue>> {
    check_sequence_matrices(g, n, w)?;
    let table = column_table(g, w, bit_length(n));
    Ok(table
        .iter()
        .map(|cols| {
            let mut bits = n;
            let mut x = 0u64;
            while bits != 0 {
                x ^= cols[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            DyadicValue {
                numerator: x,
                precision: w,
            }
        })
        .collect())
}

/// Sequence points `start..start + count` at precision `w`.
pub fn sequence_points(g: &GeneratingMatrixSet, start: u64, count: usize, w: u32) -> Result<PointSet> {
    if count == 0 {
        return invalid("requested zero sequence points");
    }
    let last = start
        .checked_add(count as u64 - 1)
        .ok_or_else(|| crate::Error::InvalidInput("sequence index overflows u64".into()))?;
    check_sequence_matrices(g, last, w)?;
    let cols = bit_length(last);
    let table = column_table(g, w, cols);
    let s = g.s();
    let mut coords = Vec::with_capacity(count * s);
    for n in start..=last {
        for col in &table {
            let mut bits = n;
            let mut x = 0u64;
            while bits != 0 {
                x ^= col[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            coords.push(x);
        }
    }
    PointSet::from_numerators(s, w, coords, Provenance::Sequence)
}

/// `x xor sigma` for every point.
pub fn digital_shift(p: &PointSet, sigma: &ShiftVector) -> Result<PointSet> {
    p.require_dyadic("a digital shift")?;
    if sigma.dim() != p.dim() {
        return invalid(format!(
            "shift has {} coordinates, point set has {}",
            sigma.dim(),
            p.dim()
        ));
    }
    if sigma.precision() != p.precision() {
        return invalid(format!(
            "shift precision {} differs from point precision {}",
            sigma.precision(),
            p.precision()
        ));
    }
    let mut out = p.clone();
    for (i, c) in out.coords.iter_mut().enumerate() {
        *c ^= sigma.numerators[i % p.dim()];
    }
    out.provenance = Provenance::ShiftedNet;
    Ok(out)
}

/// Shift `sigma_beta` turning the net of the `2m x m` submatrices into the
/// sequence block `beta 2^m, ..., (beta + 1) 2^m - 1` (at precision `2m`):
/// coordinate `j` has digits `C_j[rows 1..2m, cols m+1..] * beta`.
pub fn block_shift_vector(g: &GeneratingMatrixSet, m: usize, beta: u64) -> Result<ShiftVector> {
    let w = 2 * m;
    if w as u32 > MAX_PRECISION {
        return invalid(format!("precision 2m = {w} exceeds {MAX_PRECISION} bits"));
    }
    if g.rows() < w {
        return invalid(format!("block shift needs {w} rows, only {} available", g.rows()));
    }
    let needed = m + bit_length(beta);
    if g.cols() < needed {
        return invalid(format!(
            "block {beta} needs {needed} matrix columns, only {} available",
            g.cols()
        ));
    }
    let table = column_table(g, w as u32, needed);
    let numerators = table
        .iter()
        .map(|cols| {
            let mut bits = beta;
            let mut x = 0u64;
            while bits != 0 {
                x ^= cols[m + bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            x
        })
        .collect();
    Ok(ShiftVector {
        precision: w as u32,
        numerators,
    })
}

/// Spreads the low 32 bits of `x` to the even bit positions.
fn spread(x: u64) -> u64 {
    let mut x = x & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Digit interlacing of a pair: digit `2d - 1` of the result is digit `d` of
/// `a`, digit `2d` is digit `d` of `b`. Inputs must have precision `<= 32`.
fn interlace_pair(a: u64, b: u64) -> u64 {
    (spread(a) << 1) | spread(b)
}

/// Merges coordinates `(2j-1, 2j)` into coordinate `j` by alternating their
/// digits. The output precision is `min(2W, 64)`; for `W > 32` the inputs are
/// first truncated to 32 digits.
pub fn interlace_points(p: &PointSet) -> Result<PointSet> {
    p.require_dyadic("digit interlacing")?;
    if p.dim() % 2 != 0 {
        return invalid(format!(
            "interlacing needs an even coordinate count, got {}",
            p.dim()
        ));
    }
    let w_in = p.precision().min(32);
    let src = p.with_precision(w_in)?;
    let coords = src
        .coords
        .chunks(2)
        .map(|pair| interlace_pair(pair[0], pair[1]))
        .collect();
    PointSet::from_numerators(p.dim() / 2, 2 * w_in, coords, Provenance::Interlaced)
}

/// Number `m` with `2^(m-1) < n <= 2^m`.
pub fn propagation_level(n: u64) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Propagation rule. From the `2^m`-point net of the order-2 matrices `g`
/// (`2^(m-1) < n <= 2^m`) keep the points with first coordinate below
/// `n / 2^m`, then stretch that coordinate by `2^m / n`.
///
/// Exactly `n` points survive when the first coordinate is stratified, i.e.
/// each interval `[a 2^-m, (a+1) 2^-m)` holds one point; anything else is
/// reported as an error.
pub fn propagation_point_set(g: &GeneratingMatrixSet, n: u64) -> Result<PointSet> {
    if n < 2 {
        return invalid(format!("propagation rule needs N >= 2, got {n}"));
    }
    let m = propagation_level(n) as usize;
    if 2 * m > MAX_PRECISION as usize || m > MAX_NET_LOG2 {
        return over_budget(format!("N = {n} needs a net with 2^{m} points"));
    }
    if g.rows() < 2 * m || g.cols() < m {
        return invalid(format!(
            "N = {n} needs {}x{m} matrices, have {}x{}",
            2 * m,
            g.rows(),
            g.cols()
        ));
    }
    let net = net_points(&g.upper_left(2 * m, m)?)?;
    if !first_axis_stratified(&net, m as u32) {
        return invalid("first coordinate of the net is not stratified at level m");
    }
    let s = net.dim();
    // x_1 < n / 2^m  <=>  numerator < n * 2^(2m - m)
    let cut = (n as u128) << m;
    let coords: Vec<u64> = (0..net.len())
        .filter(|&i| (net.point(i)[0] as u128) < cut)
        .flat_map(|i| net.point(i).to_vec())
        .collect();
    if coords.len() != n as usize * s {
        return invalid(format!(
            "propagation kept {} points instead of {n}",
            coords.len() / s
        ));
    }
    let mut out = PointSet::from_numerators(s, 2 * m as u32, coords, Provenance::Propagated { m: m as u32 })?;
    if n != 1 << m {
        out.first_axis_scale = Some(AxisScale {
            numer: 1 << m,
            denom: n,
        });
    }
    Ok(out)
}

/// Whether each interval `[a 2^-m, (a+1) 2^-m)` holds exactly one first
/// coordinate of `p` (which must have `2^m` points).
pub fn first_axis_stratified(p: &PointSet, m: u32) -> bool {
    if p.len() != 1usize << m || p.precision() < m {
        return false;
    }
    let mut seen = vec![false; p.len()];
    for i in 0..p.len() {
        let bucket = (p.point(i)[0] >> (p.precision() - m)) as usize;
        if std::mem::replace(&mut seen[bucket], true) {
            return false;
        }
    }
    true
}

/// The propagated point set of the order-2 construction in dimension `s`.
pub fn propagated_construction(s: usize, n: u64) -> Result<PointSet> {
    let m = propagation_level(n.max(2)) as usize;
    let g = GeneratingMatrixSet::order2(s, 2 * m, m)?;
    propagation_point_set(&g, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmat::MatrixKind;
    use crate::BitMatrix;
    use proptest::prelude::*;

    fn dv(n: u64, w: u32) -> DyadicValue {
        DyadicValue::new(n, w).unwrap()
    }

    fn vdc(m: usize) -> GeneratingMatrixSet {
        GeneratingMatrixSet::niederreiter(1, 2 * m, m).unwrap()
    }

    #[test]
    fn dyadic_value_checks() {
        assert!(DyadicValue::new(4, 2).is_err());
        assert!(DyadicValue::new(1, 65).is_err());
        assert_eq!(dv(0b10, 2).to_f64(), 0.5);
        assert!(dv(0b10, 2).digit(1));
        assert!(!dv(0b10, 2).digit(2));
        assert_eq!(dv(1, 1).with_precision(3), dv(4, 3));
        assert_eq!(dv(7, 3).with_precision(1), dv(1, 1));
        assert_eq!(dv(u64::MAX, 64).to_f64(), 1.0 - 2f64.powi(-52));
    }

    #[test]
    fn van_der_corput_net() {
        let p = net_points(&vdc(2)).unwrap();
        let xs: Vec<f64> = (0..4).map(|n| p.value_f64(n, 0)).collect();
        assert_eq!(xs, [0.0, 0.5, 0.25, 0.75]);
        assert_eq!(p.precision(), 4);
    }

    #[test]
    fn two_dimensional_niederreiter_m1() {
        let p = net_points(&GeneratingMatrixSet::niederreiter(2, 2, 1).unwrap()).unwrap();
        assert_eq!(p.to_f64(), [0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn origin_is_first_point() {
        let g = GeneratingMatrixSet::order2(3, 12, 6).unwrap();
        let p = net_points(&g).unwrap();
        assert!(p.point(0).iter().all(|&c| c == 0));
        let x0 = sequence_point(&g, 0, 12).unwrap();
        assert!(x0.iter().all(|v| v.numerator() == 0));
    }

    #[test]
    fn sequence_coordinate_one_is_radical_inverse() {
        let g = GeneratingMatrixSet::niederreiter(1, 16, 16).unwrap();
        for n in 0u64..1000 {
            let x = sequence_point(&g, n, 16).unwrap()[0];
            let expect = (n as u16).reverse_bits() as u64;
            assert_eq!(x.numerator(), expect, "n = {n}");
        }
    }

    #[test]
    fn sequence_point_rejects_short_truncations() {
        let g = GeneratingMatrixSet::order2(1, 8, 4).unwrap();
        assert!(sequence_point(&g, 16, 8).is_err());
        assert!(sequence_point(&g, 15, 9).is_err());
        assert!(sequence_point(&g, 15, 8).is_ok());
        let mut bad = BitMatrix::zeros(4, 4);
        bad.set(3, 0, true);
        let g = GeneratingMatrixSet::new(MatrixKind::Custom, vec![bad]).unwrap();
        assert!(sequence_point(&g, 1, 4).is_err());
    }

    #[test]
    fn shift_examples() {
        let p = PointSet::from_points(&[vec![dv(0b10, 2)]], Provenance::Custom).unwrap();
        let sigma = ShiftVector::new(&[dv(0b11, 2)]).unwrap();
        let q = digital_shift(&p, &sigma).unwrap();
        assert_eq!(q.value(0, 0), dv(0b01, 2));
        assert_eq!(digital_shift(&q, &sigma).unwrap().numerators(), p.numerators());
        let zero = ShiftVector::zero(1, 2);
        assert_eq!(digital_shift(&p, &zero).unwrap().numerators(), p.numerators());
        let wrong = ShiftVector::zero(1, 3);
        assert!(digital_shift(&p, &wrong).is_err());
    }

    #[test]
    fn block_shift_examples() {
        let g = vdc(4);
        let zero = block_shift_vector(&g, 1, 0).unwrap();
        assert_eq!(zero.value(0).numerator(), 0);
        // column 2 of the identity, first two rows: digits (0, 1)
        let s1 = block_shift_vector(&g, 1, 1).unwrap();
        assert_eq!(s1.value(0), dv(0b01, 2));
        assert!(block_shift_vector(&g, 2, 4).is_err());
    }

    #[test]
    fn interlace_examples() {
        let p = PointSet::from_points(&[vec![dv(0, 2), dv(0, 2)], vec![dv(0b10, 2), dv(0b01, 2)]], Provenance::Custom)
            .unwrap();
        let q = interlace_points(&p).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.value(0, 0).numerator(), 0);
        assert_eq!(q.value(1, 0), dv(0b1001, 4));
        let odd = PointSet::from_points(&[vec![dv(0, 2)]], Provenance::Custom).unwrap();
        assert!(interlace_points(&odd).is_err());
    }

    #[test]
    fn interlace_caps_precision() {
        let p = PointSet::from_points(&[vec![dv(u64::MAX, 64), dv(0, 64)]], Provenance::Custom).unwrap();
        let q = interlace_points(&p).unwrap();
        assert_eq!(q.precision(), 64);
        assert_eq!(q.value(0, 0).numerator(), 0xaaaa_aaaa_aaaa_aaaa);
    }

    #[test]
    fn propagation_small_cases() {
        let full = propagated_construction(2, 8).unwrap();
        assert_eq!(full.len(), 8);
        assert!(full.first_axis_scale().is_none());
        let three = propagated_construction(2, 3).unwrap();
        assert_eq!(three.len(), 3);
        assert_eq!(three.first_axis_scale(), Some(AxisScale { numer: 4, denom: 3 }));
        assert!(propagated_construction(1, 1).is_err());
        for n in 0..3 {
            assert!(three.value_f64(n, 0) < 1.0);
        }
    }

    #[test]
    fn propagation_rejects_unstratified_matrices() {
        let g = GeneratingMatrixSet::zeros(1, 4, 2).unwrap();
        assert!(propagation_point_set(&g, 3).is_err());
    }

    #[test]
    fn propagation_level_brackets() {
        assert_eq!(propagation_level(2), 1);
        assert_eq!(propagation_level(3), 2);
        assert_eq!(propagation_level(4), 2);
        assert_eq!(propagation_level(5), 3);
        assert_eq!(propagation_level(1024), 10);
    }

    proptest! {
        #[test]
        fn interlacing_commutes_with_matrices(s in 1usize..4, m in 1usize..9) {
            let c = GeneratingMatrixSet::niederreiter(2 * s, m, m).unwrap();
            let lhs = interlace_points(&net_points(&c).unwrap()).unwrap();
            let d = crate::genmat::interlace_matrix_set(&c, 2 * m).unwrap();
            let rhs = net_points(&d).unwrap();
            prop_assert_eq!(lhs.numerators(), rhs.numerators());
        }

        #[test]
        fn shift_is_an_involution(seed in any::<u64>(), m in 1usize..7) {
            let p = net_points(&GeneratingMatrixSet::order2(2, 2 * m, m).unwrap()).unwrap();
            let sigma = ShiftVector::random(2, 2 * m as u32, seed).unwrap();
            let twice = digital_shift(&digital_shift(&p, &sigma).unwrap(), &sigma).unwrap();
            prop_assert_eq!(twice.numerators(), p.numerators());
        }

        #[test]
        fn sequence_blocks_are_shifted_nets(m in 0usize..7, beta in 0u64..20, s in 1usize..4) {
            let cols = m + 5;
            let g = GeneratingMatrixSet::order2(s, 2 * cols, cols).unwrap();
            let w = 2 * m as u32;
            let block = sequence_points(&g, beta << m, 1 << m, w).unwrap();
            let net = net_points(&g.upper_left(2 * m, m).unwrap()).unwrap();
            let sigma = block_shift_vector(&g, m, beta).unwrap();
            let shifted = digital_shift(&net, &sigma).unwrap();
            prop_assert_eq!(block.numerators(), shifted.numerators());
        }
    }
}
