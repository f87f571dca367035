//! Dyadic Walsh functions and exact Walsh-side identities.
//!
//! Everything here is exact: Walsh functions are piecewise constant on dyadic
//! cells, so integrals reduce to integer cell sums and are returned as
//! rationals.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::duality::mu1;
use crate::error::{invalid, over_budget, Result};
use crate::genmat::GeneratingMatrixSet;
use crate::points::{net_points, DyadicValue, PointSet};

/// Largest per-axis cell resolution `R` used by exact cell sums.
pub const MAX_RESOLUTION: u32 = 20;
/// Largest `m` for which [`character_sum`] enumerates the net.
pub const MAX_CHARACTER_LOG2: usize = 20;

/// Digits `x_1..x_W` of a numerator, reversed so that `x_{i+1}` sits at bit `i`.
fn reversed_digits(numerator: u64, precision: u32) -> u64 {
    if precision == 0 {
        0
    } else {
        numerator.reverse_bits() >> (64 - precision)
    }
}

fn wal_raw(k: u64, numerator: u64, precision: u32) -> i64 {
    if (k & reversed_digits(numerator, precision)).count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `wal_k(x) = (-1)^(x_1 kappa_0 + x_2 kappa_1 + ...)`. Digits of `x` beyond
/// its precision are zero.
pub fn wal(k: u64, x: DyadicValue) -> i8 {
    wal_raw(k, x.numerator(), x.precision()) as i8
}

/// Product of the coordinate Walsh functions.
pub fn wal_vec(k: &[u64], x: &[DyadicValue]) -> i8 {
    assert_eq!(k.len(), x.len());
    k.iter().zip(x).map(|(&kj, &xj)| wal(kj, xj)).product()
}

/// `int_0^1 wal_k wal_l`, summed over the `2^max(mu1(k), mu1(l))` cells on
/// which both functions are constant.
pub fn walsh_inner_product(k: u64, l: u64) -> Result<Ratio<i64>> {
    let r = mu1(k).max(mu1(l));
    if r > MAX_RESOLUTION {
        return over_budget(format!("inner product needs 2^{r} cells"));
    }
    let sum: i64 = (0..1u64 << r)
        .map(|c| wal_raw(k, c, r) * wal_raw(l, c, r))
        .sum();
    Ok(Ratio::new(sum, 1 << r))
}

/// `2^-m sum_n wal_k(x_n)` over the net of the `W x m` matrices `g`,
/// accumulated in integers. Equals 1 on the dual set and 0 elsewhere.
pub fn character_sum(g: &GeneratingMatrixSet, k: &[u64]) -> Result<Ratio<i64>> {
    if k.len() != g.s() {
        return invalid(format!(
            "Walsh index has {} coordinates, matrices have {}",
            k.len(),
            g.s()
        ));
    }
    if g.cols() > MAX_CHARACTER_LOG2 {
        return over_budget(format!("character sum over 2^{} points", g.cols()));
    }
    let net = net_points(g)?;
    let w = net.precision();
    let sum: i64 = (0..net.len())
        .map(|n| {
            net.point(n)
                .iter()
                .zip(k)
                .map(|(&x, &kj)| wal_raw(kj, x, w))
                .product::<i64>()
        })
        .sum();
    Ok(Ratio::new(sum, net.len() as i64))
}

/// `int_0^1 theta wal_l(theta) d theta`: `1/2` for `l = 0`,
/// `-2^(-a-1)` for `l = 2^(a-1)`, and 0 otherwise.
pub fn theta_coefficient(l: u64) -> BigRational {
    if l == 0 {
        return BigRational::new(1.into(), 2.into());
    }
    if l.is_power_of_two() {
        let a = mu1(l);
        return -BigRational::new(1.into(), BigInt::one() << (a + 1));
    }
    BigRational::zero()
}

/// Suffix sums `S[a] = sum_{c >= a} wal_l(c 2^-R)`, so that
/// `int 1_{x < theta} wal_l(theta) d theta = S[x 2^R] 2^-R` for `x` on the grid.
fn indicator_table(l: u64, resolution: u32) -> Vec<i64> {
    let cells = 1usize << resolution;
    let mut table = vec![0i64; cells + 1];
    for c in (0..cells).rev() {
        table[c] = table[c + 1] + wal_raw(l, c as u64, resolution);
    }
    table
}

/// Exact Walsh coefficient of the local discrepancy function,
/// `(1/N) sum_n prod_j I(x_nj, l_j) - prod_j T(l_j)`, where
/// `I(x, l) = int 1_{[0,theta)}(x) wal_l(theta) d theta` comes from a cell
/// sum at resolution `R_j = max(W, mu1(l_j))` and `T` is
/// [`theta_coefficient`].
pub fn delta_walsh_coefficient(p: &PointSet, l: &[u64]) -> Result<BigRational> {
    if !p.is_dyadic() {
        return invalid("Walsh coefficients need dyadic coordinates");
    }
    if l.len() != p.dim() {
        return invalid(format!(
            "Walsh index has {} coordinates, points have {}",
            l.len(),
            p.dim()
        ));
    }
    let w = p.precision();
    let resolutions: Vec<u32> = l.iter().map(|&lj| w.max(mu1(lj))).collect();
    if let Some(&r) = resolutions.iter().find(|&&r| r > MAX_RESOLUTION) {
        return over_budget(format!(
            "Walsh coefficient needs 2^{r} cells per axis (limit 2^{MAX_RESOLUTION})"
        ));
    }
    let tables: Vec<Vec<i64>> = l
        .iter()
        .zip(&resolutions)
        .map(|(&lj, &r)| indicator_table(lj, r))
        .collect();

    let mut total = BigInt::zero();
    for n in 0..p.len() {
        let mut prod = BigInt::one();
        for (j, &x) in p.point(n).iter().enumerate() {
            let idx = (x << (resolutions[j] - w)) as usize;
            let v = tables[j][idx];
            if v == 0 {
                prod = BigInt::zero();
                break;
            }
            prod *= v;
        }
        total += prod;
    }
    let shift: u32 = resolutions.iter().sum();
    let empirical = BigRational::new(total, BigInt::from(p.len()) << shift);
    let volume: BigRational = l.iter().map(|&lj| theta_coefficient(lj)).product();
    Ok(empirical - volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::dual_set_basis;
    use crate::Budget;
    use crate::points::Provenance;

    fn dv(n: u64, w: u32) -> DyadicValue {
        DyadicValue::new(n, w).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn wal_examples() {
        for x in 0..16 {
            assert_eq!(wal(0, dv(x, 4)), 1);
        }
        assert_eq!(wal(1, dv(1, 1)), -1);
        assert_eq!(wal(3, dv(1, 2)), -1);
        assert_eq!(wal(2, dv(1, 1)), 1);
        assert_eq!(wal_vec(&[1, 1], &[dv(1, 1), dv(1, 1)]), 1);
    }

    #[test]
    fn wal_is_constant_on_cells() {
        for k in 0..64u64 {
            let r = mu1(k);
            for x in 0..256u64 {
                let cell = x >> (8 - r.min(8));
                assert_eq!(wal(k, dv(x, 8)), wal(k, dv(cell, r.min(8))), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn orthogonality_small_indices() {
        for k in 0..64 {
            for l in 0..64 {
                let ip = walsh_inner_product(k, l).unwrap();
                let expect = if k == l { 1 } else { 0 };
                assert_eq!(ip, Ratio::from_integer(expect), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn character_examples() {
        let g = GeneratingMatrixSet::niederreiter(1, 2, 1).unwrap();
        assert_eq!(character_sum(&g, &[0]).unwrap(), Ratio::from_integer(1));
        assert_eq!(character_sum(&g, &[1]).unwrap(), Ratio::from_integer(0));
        assert_eq!(character_sum(&g, &[2]).unwrap(), Ratio::from_integer(1));
        assert!(character_sum(&g, &[1, 2]).is_err());
    }

    #[test]
    fn character_sum_is_dual_indicator() {
        let g = GeneratingMatrixSet::order2(2, 6, 3).unwrap();
        let d = dual_set_basis(&g, Budget::default()).unwrap();
        for k0 in 0..64 {
            for k1 in 0..64 {
                let c = character_sum(&g, &[k0, k1]).unwrap();
                let expect = if d.contains(&[k0, k1]) { 1 } else { 0 };
                assert_eq!(c, Ratio::from_integer(expect));
            }
        }
    }

    #[test]
    fn theta_coefficients() {
        assert_eq!(theta_coefficient(0), q(1, 2));
        assert_eq!(theta_coefficient(1), q(-1, 4));
        assert_eq!(theta_coefficient(4), q(-1, 16));
        assert_eq!(theta_coefficient(3), q(0, 1));
    }

    #[test]
    fn singleton_coefficients() {
        let p = PointSet::from_points(&[vec![dv(0, 3)]], Provenance::Custom).unwrap();
        assert_eq!(delta_walsh_coefficient(&p, &[0]).unwrap(), q(1, 2));
        assert_eq!(delta_walsh_coefficient(&p, &[1]).unwrap(), q(1, 4));
        // l = 3: no volume term, and I(0, 3) = int wal_3 = 0
        assert_eq!(delta_walsh_coefficient(&p, &[3]).unwrap(), q(0, 1));
    }

    #[test]
    fn parseval_bounded_by_l2() {
        use crate::discrepancy::l2_exact;
        use num_traits::ToPrimitive;
        let p = crate::points::net_points(&GeneratingMatrixSet::order2(1, 4, 2).unwrap()).unwrap();
        let l2sq = l2_exact(&p).unwrap().powi(2);
        let mut partial = Vec::new();
        for r in 0..7u32 {
            let sum: BigRational = (0..1u64 << r)
                .map(|l| {
                    let c = delta_walsh_coefficient(&p, &[l]).unwrap();
                    &c * &c
                })
                .fold(BigRational::zero(), |a, b| a + b);
            partial.push(sum.to_f64().unwrap());
        }
        assert!(partial.windows(2).all(|w| w[0] <= w[1]));
        assert!(*partial.last().unwrap() <= l2sq + 1e-15);
        assert!(*partial.last().unwrap() > 0.9 * l2sq);
    }

    #[test]
    fn coefficient_budget() {
        let p = PointSet::from_points(&[vec![dv(0, 24)]], Provenance::Custom).unwrap();
        assert!(matches!(
            delta_walsh_coefficient(&p, &[1]),
            Err(crate::Error::ResourceLimit(_))
        ));
        let p = PointSet::from_points(&[vec![dv(0, 2)]], Provenance::Custom).unwrap();
        assert!(delta_walsh_coefficient(&p, &[1 << 22]).is_err());
    }
}
