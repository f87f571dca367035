//! Local discrepancy, exact L2 discrepancy (Warnock's formula), Monte-Carlo
//! Lq estimates, the error-bound envelopes and convergence studies.
//!
//! Points are converted to `f64` here and nowhere else. Reductions use a
//! fixed pairwise tree over per-point partial sums, so results do not depend
//! on the number of threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, over_budget, Error, Result};
use crate::genmat::GeneratingMatrixSet;
use crate::points::{net_points, propagated_construction, propagation_level, PointSet};

/// Largest point count accepted by the `O(N^2 s)` Warnock sum.
pub const MAX_WARNOCK_POINTS: usize = 1 << 15;
pub const MIN_MC_SAMPLES: usize = 1000;

/// Sum in a fixed binary tree, independent of how the terms were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Exact coordinate `j` of point `n`, including the first-axis scale.
pub fn coordinate_ratio(p: &PointSet, n: usize, j: usize) -> BigRational {
    let x = BigRational::new(
        BigInt::from(p.point(n)[j]),
        BigInt::one() << p.precision(),
    );
    match (j, p.first_axis_scale()) {
        (0, Some(sc)) => x * BigRational::new(sc.numer.into(), sc.denom.into()),
        _ => x,
    }
}

fn check_theta_len(p: &PointSet, len: usize) -> Result<()> {
    if len != p.dim() {
        return invalid(format!(
            "box corner has {len} coordinates, points have {}",
            p.dim()
        ));
    }
    Ok(())
}

/// `delta(P; theta) = #{n : x_n in [0, theta)} / N - prod theta_j`.
pub fn local_discrepancy(p: &PointSet, theta: &[f64]) -> Result<f64> {
    check_theta_len(p, theta.len())?;
    if theta.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return invalid("box corner must lie in [0,1]^s");
    }
    let coords = p.to_f64();
    Ok(local_discrepancy_f64(&coords, p.dim(), theta))
}

fn local_discrepancy_f64(coords: &[f64], dim: usize, theta: &[f64]) -> f64 {
    let n = coords.len() / dim;
    let inside = coords
        .chunks_exact(dim)
        .filter(|x| x.iter().zip(theta).all(|(a, t)| a < t))
        .count();
    inside as f64 / n as f64 - theta.iter().product::<f64>()
}

/// [`local_discrepancy`] in exact rational arithmetic.
pub fn local_discrepancy_exact(p: &PointSet, theta: &[BigRational]) -> Result<BigRational> {
    check_theta_len(p, theta.len())?;
    let (zero, one) = (BigRational::zero(), BigRational::one());
    if theta.iter().any(|t| *t < zero || *t > one) {
        return invalid("box corner must lie in [0,1]^s");
    }
    let inside = (0..p.len())
        .filter(|&n| (0..p.dim()).all(|j| coordinate_ratio(p, n, j) < theta[j]))
        .count();
    let volume: BigRational = theta.iter().cloned().product();
    Ok(BigRational::new(inside.into(), p.len().into()) - volume)
}

/// Warnock's closed form for the squared L2 discrepancy of `f64` points.
fn l2_squared(coords: &[f64], dim: usize) -> f64 {
    let n = coords.len() / dim;
    let pts: Vec<&[f64]> = coords.chunks_exact(dim).collect();
    let single: Vec<f64> = pts
        .iter()
        .map(|x| x.iter().map(|v| 1.0 - v * v).product())
        .collect();
    // row i: diagonal term plus twice the pairs (i, i') with i' > i
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = pts[i];
            let diag: f64 = xi.iter().map(|v| 1.0 - v).product();
            let mut acc = 0.0;
            for xk in &pts[i + 1..] {
                let mut prod = 1.0;
                for (a, b) in xi.iter().zip(xk.iter()) {
                    prod *= 1.0 - a.max(*b);
                }
                acc += prod;
            }
            diag + 2.0 * acc
        })
        .collect();
    let nf = n as f64;
    3f64.powi(-(dim as i32)) - 2f64.powi(1 - dim as i32) / nf * pairwise_sum(&single)
        + pairwise_sum(&rows) / (nf * nf)
}

/// Exact L2 discrepancy via Warnock's formula, `O(N^2 s)`.
pub fn l2_exact(p: &PointSet) -> Result<f64> {
    if p.len() > MAX_WARNOCK_POINTS {
        return over_budget(format!(
            "Warnock sum over {} points exceeds the {MAX_WARNOCK_POINTS}-point limit",
            p.len()
        ));
    }
    Ok(l2_squared(&p.to_f64(), p.dim()).max(0.0).sqrt())
}

/// Monte-Carlo estimate of an Lq discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqEstimate {
    pub q: f64,
    pub estimate: f64,
    /// Delta-method standard error of `estimate`.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    /// `false` unless `q` is an even integer, the case the error bounds cover.
    pub within_bounds_scope: bool,
}

/// Uniform box corner number `index` of stream `seed`.
fn mc_corner(seed: u64, index: u64, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..dim).map(|_| rng.random::<f64>()).collect()
}

/// Lq discrepancy for even `q >= 2` by averaging `|delta|^q` over uniform
/// corners. Corner `i` is drawn from ChaCha stream `i` of `seed`, so the
/// estimate is reproducible regardless of parallelism.
pub fn lq_estimate(p: &PointSet, q: u32, samples: usize, seed: u64) -> Result<LqEstimate> {
    if q < 2 || q % 2 != 0 {
        return invalid(format!("q must be an even integer >= 2, got {q}"));
    }
    lq_estimate_general(p, q as f64, samples, seed)
}

/// [`lq_estimate`] for any finite `q >= 1`; results outside even integers
/// are flagged with `within_bounds_scope = false`.
pub fn lq_estimate_general(p: &PointSet, q: f64, samples: usize, seed: u64) -> Result<LqEstimate> {
    if !(q.is_finite() && q >= 1.0) {
        return invalid(format!("q must be a finite number >= 1, got {q}"));
    }
    if samples < MIN_MC_SAMPLES {
        return invalid(format!(
            "Monte-Carlo Lq needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        ));
    }
    let coords = p.to_f64();
    let dim = p.dim();
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let theta = mc_corner(seed, i, dim);
            local_discrepancy_f64(&coords, dim, &theta).abs().powf(q)
        })
        .collect();
    let m = samples as f64;
    let mean = pairwise_sum(&values) / m;
    let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&squares) / (m - 1.0);
    let se_mean = (var / m).sqrt();
    let estimate = mean.powf(1.0 / q);
    let std_error = if mean > 0.0 {
        se_mean * mean.powf(1.0 / q - 1.0) / q
    } else {
        0.0
    };
    Ok(LqEstimate {
        q,
        estimate,
        std_error,
        samples,
        seed,
        within_bounds_scope: q.fract() == 0.0 && (q as u64) % 2 == 0,
    })
}

/// Exponents `m_1 > ... > m_r` of the binary expansion of `n`.
pub fn dyadic_exponents(n: u64) -> Vec<u32> {
    (0..64).rev().filter(|&b| n >> b & 1 == 1).collect()
}

/// `r^(3/2 - 1/q) / N * sqrt(sum_v m_v^(s-1))` with `N = sum_v 2^m_v`; the
/// hidden constant is omitted and `0^0 = 1`.
pub fn thm2_bound(n: u64, s: usize, q: f64) -> Result<f64> {
    if n < 2 {
        return invalid(format!("bound needs N >= 2, got {n}"));
    }
    if s == 0 {
        return invalid("dimension s must be positive");
    }
    let exps = dyadic_exponents(n);
    let r = exps.len() as f64;
    let sum: f64 = exps.iter().map(|&m| (m as f64).powi(s as i32 - 1)).sum();
    Ok(r.powf(1.5 - 1.0 / q) / n as f64 * sum.sqrt())
}

/// `(log2 N)^((s-1)/2) / N`, the optimal order for `N`-point sets.
pub fn propagated_bound(n: u64, s: usize) -> Result<f64> {
    if n < 2 {
        return invalid(format!("bound needs N >= 2, got {n}"));
    }
    Ok((n as f64).log2().powf((s as f64 - 1.0) / 2.0) / n as f64)
}

/// Point family measured by [`convergence_study`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudySource {
    /// Nets of the plain generalized Niederreiter matrices.
    Order1,
    /// Nets of the interlaced order-2 matrices.
    Order2,
    /// Propagation-rule sets for arbitrary `N`.
    Propagated,
}

impl fmt::Display for StudySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StudySource::Order1 => "order1",
            StudySource::Order2 => "order2",
            StudySource::Propagated => "propagated",
        })
    }
}

impl FromStr for StudySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order1" => Ok(StudySource::Order1),
            "order2" => Ok(StudySource::Order2),
            "propagated" => Ok(StudySource::Propagated),
            other => invalid(format!("unknown study source {other:?}")),
        }
    }
}

/// One measurement of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub kind: String,
    pub s: usize,
    pub m: u32,
    pub n: u64,
    pub q: f64,
    pub value: f64,
    pub bound: f64,
    /// `value * N / m^((s-1)/2)`.
    pub normalized: f64,
    pub seed: Option<u64>,
}

/// Fixed float formatting: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl StudyRow {
    pub const CSV_HEADER: &'static str = "kind,s,m,N,q,value,bound,normalized,seed";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.s,
            self.m,
            self.n,
            self.q,
            format_float(self.value),
            format_float(self.bound),
            format_float(self.normalized),
            self.seed.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

/// Monte-Carlo settings for the optional Lq rows of a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub q: u32,
    pub samples: usize,
    pub seed: u64,
}

/// The point set a study row measures, with its level `m`.
pub fn study_point_set(source: StudySource, s: usize, size: u64) -> Result<(u32, PointSet)> {
    match source {
        StudySource::Order1 => {
            let m = size as usize;
            let g = GeneratingMatrixSet::niederreiter(s, m.max(1), m.max(1))?;
            Ok((size as u32, net_points(&g.upper_left(m, m)?)?))
        }
        StudySource::Order2 => {
            let m = size as usize;
            let g = GeneratingMatrixSet::order2(s, (2 * m).max(1), m.max(1))?;
            Ok((size as u32, net_points(&g.upper_left(2 * m, m)?)?))
        }
        StudySource::Propagated => Ok((propagation_level(size), propagated_construction(s, size)?)),
    }
}

/// Measures L2 (and optionally a Monte-Carlo Lq) for each size. For nets the
/// sizes are levels `m` (`N = 2^m`); for propagated sets they are point
/// counts `N`.
pub fn convergence_study(
    source: StudySource,
    s: usize,
    sizes: &[u64],
    mc: Option<McSettings>,
) -> Result<Vec<StudyRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let (m, points) = study_point_set(source, s, size)?;
        let n = points.len() as u64;
        if n < 2 {
            return invalid(format!("study sizes must give N >= 2, got N = {n}"));
        }
        let bound_for = |q: f64| match source {
            StudySource::Propagated => propagated_bound(n, s),
            _ => thm2_bound(n, s, q),
        };
        let normalize = |v: f64| v * n as f64 / (m as f64).powf((s as f64 - 1.0) / 2.0);
        let value = l2_exact(&points)?;
        let bound = bound_for(2.0)?;
        rows.push(StudyRow {
            kind: source.to_string(),
            s,
            m,
            n,
            q: 2.0,
            value,
            bound,
            normalized: normalize(value),
            seed: None,
        });
        if let Some(mc) = mc {
            let est = lq_estimate(&points, mc.q, mc.samples, mc.seed)?;
            let bound = bound_for(mc.q as f64)?;
            rows.push(StudyRow {
                kind: format!("{source}-mc"),
                s,
                m,
                n,
                q: mc.q as f64,
                value: est.estimate,
                bound,
                normalized: normalize(est.estimate),
                seed: Some(mc.seed),
            });
        }
    }
    Ok(rows)
}

/// Test integrands with known integrals over `[0,1]^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `f = 1`.
    Constant,
    /// `prod_j x_j`, integral `2^-s`.
    ProductLinear,
    /// `prod_j (x_j^2 - 1/3 + 1)`, integral 1.
    ProductQuadratic,
}

impl TestFunction {
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Constant => 1.0,
            TestFunction::ProductLinear => x.iter().product(),
            TestFunction::ProductQuadratic => x.iter().map(|v| v * v + 2.0 / 3.0).product(),
        }
    }

    pub fn exact_integral(self, s: usize) -> f64 {
        match self {
            TestFunction::Constant | TestFunction::ProductQuadratic => 1.0,
            TestFunction::ProductLinear => 0.5f64.powi(s as i32),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(TestFunction::Constant),
            "product-linear" => Ok(TestFunction::ProductLinear),
            "product-quadratic" => Ok(TestFunction::ProductQuadratic),
            other => invalid(format!("unknown test function {other:?}")),
        }
    }
}

/// Equal-weight rule over `p`: returns `(estimate, |estimate - exact|)`.
pub fn qmc_integrate(p: &PointSet, f: TestFunction) -> (f64, f64) {
    let coords = p.to_f64();
    let values: Vec<f64> = coords.chunks_exact(p.dim()).map(|x| f.eval(x)).collect();
    let estimate = pairwise_sum(&values) / p.len() as f64;
    (estimate, (estimate - f.exact_integral(p.dim())).abs())
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{DyadicValue, Provenance};
    use proptest::prelude::*;

    fn singleton(num: u64, w: u32) -> PointSet {
        PointSet::from_points(&[vec![DyadicValue::new(num, w).unwrap()]], Provenance::Custom).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Exact `int delta^2` in one dimension: on each gap between sorted
    /// points the count is constant and `delta` is linear.
    fn l2_squared_1d_oracle(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mut pts = xs.to_vec();
        pts.sort_by(f64::total_cmp);
        let mut edges = vec![0.0];
        edges.extend(&pts);
        edges.push(1.0);
        let mut total = 0.0;
        for (i, w) in edges.windows(2).enumerate() {
            let c = i as f64 / n;
            // int_a^b (c - t)^2 dt
            let f = |t: f64| -(c - t).powi(3) / 3.0;
            total += f(w[1]) - f(w[0]);
        }
        total
    }

    /// Exact `int delta^2` in two dimensions for points on the `2^-w` grid:
    /// inside each grid cell the count is constant.
    fn l2_squared_2d_oracle(nums: &[u64], w: u32) -> f64 {
        let g = 1usize << w;
        let mut grid = vec![0u32; g * g];
        for xy in nums.chunks_exact(2) {
            grid[xy[0] as usize * g + xy[1] as usize] += 1;
        }
        // prefix[a][b] = #{x <= a, y <= b}
        for a in 0..g {
            for b in 0..g {
                let mut v = grid[a * g + b];
                if a > 0 {
                    v += grid[(a - 1) * g + b];
                }
                if b > 0 {
                    v += grid[a * g + b - 1];
                }
                if a > 0 && b > 0 {
                    v -= grid[(a - 1) * g + b - 1];
                }
                grid[a * g + b] = v;
            }
        }
        let n = (nums.len() / 2) as f64;
        let gf = g as f64;
        let i1 = |a: f64| ((a + 1.0).powi(2) - a * a) / (2.0 * gf * gf);
        let i2 = |a: f64| ((a + 1.0).powi(3) - a.powi(3)) / (3.0 * gf.powi(3));
        let mut total = 0.0;
        for a in 0..g {
            for b in 0..g {
                let c = grid[a * g + b] as f64 / n;
                let (af, bf) = (a as f64, b as f64);
                total += c * c / (gf * gf) - 2.0 * c * i1(af) * i1(bf) + i2(af) * i2(bf);
            }
        }
        total
    }

    #[test]
    fn l2_matches_2d_cell_oracle() {
        let p = study_point_set(StudySource::Order2, 2, 4).unwrap().1;
        let w = p.precision();
        let oracle = l2_squared_2d_oracle(p.numerators(), w).sqrt();
        assert!((l2_exact(&p).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn mc_l2_agrees_with_warnock() {
        let p = study_point_set(StudySource::Order1, 2, 5).unwrap().1;
        let est = lq_estimate(&p, 2, 20_000, 11).unwrap();
        let exact = l2_exact(&p).unwrap();
        assert!((est.estimate - exact).abs() < 3.0 * est.std_error, "{est:?} vs {exact}");
    }

    #[test]
    fn quadratic_integration_error_slope() {
        let (mut xs, mut ys) = (vec![], vec![]);
        for m in 4..=12u64 {
            let p = study_point_set(StudySource::Order2, 1, m).unwrap().1;
            xs.push(m as f64);
            ys.push(qmc_integrate(&p, TestFunction::ProductQuadratic).1.log2());
        }
        assert!(least_squares_slope(&xs, &ys) <= -1.7);
    }

    #[test]
    fn local_discrepancy_examples() {
        let p = singleton(1, 1);
        assert_eq!(local_discrepancy(&p, &[0.0]).unwrap(), 0.0);
        assert_eq!(local_discrepancy(&p, &[1.0]).unwrap(), 0.0);
        assert_eq!(local_discrepancy(&p, &[0.75]).unwrap(), 0.25);
        assert_eq!(local_discrepancy_exact(&p, &[q(3, 4)]).unwrap(), q(1, 4));
        assert_eq!(local_discrepancy_exact(&p, &[q(1, 1)]).unwrap(), q(0, 1));
        assert!(local_discrepancy(&p, &[1.5]).is_err());
        assert!(local_discrepancy(&p, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn l2_closed_forms() {
        assert!((l2_exact(&singleton(1, 1)).unwrap() - (1.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert!((l2_exact(&singleton(0, 1)).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let p = PointSet::from_numerators(1, 1, vec![0, 1], Provenance::Custom).unwrap();
        let oracle = l2_squared_1d_oracle(&[0.0, 0.5]).sqrt();
        assert!((l2_exact(&p).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn lq_rejects_odd_q_and_few_samples() {
        let p = singleton(1, 1);
        assert!(lq_estimate(&p, 3, 1000, 0).is_err());
        assert!(lq_estimate(&p, 2, 999, 0).is_err());
        let e = lq_estimate_general(&p, 3.0, 1000, 0).unwrap();
        assert!(!e.within_bounds_scope);
        assert!(lq_estimate(&p, 4, 1000, 0).unwrap().within_bounds_scope);
    }

    #[test]
    fn lq_is_deterministic() {
        let p = study_point_set(StudySource::Order2, 2, 5).unwrap().1;
        let a = lq_estimate(&p, 4, 2000, 7).unwrap();
        let b = lq_estimate(&p, 4, 2000, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn l4_of_half_point() {
        let est = lq_estimate(&singleton(1, 1), 4, 200_000, 3).unwrap();
        let exact = (1.0f64 / 80.0).powf(0.25);
        assert!((est.estimate - exact).abs() < 3.0 * est.std_error.max(1e-4));
    }

    #[test]
    fn bound_examples() {
        for m in 1..10u32 {
            for s in 1..4 {
                let b = thm2_bound(1 << m, s, 2.0).unwrap();
                let expect = (m as f64).powf((s as f64 - 1.0) / 2.0) / (1u64 << m) as f64;
                assert!((b - expect).abs() < 1e-15);
            }
        }
        assert!((thm2_bound(3, 1, 2.0).unwrap() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(thm2_bound(2, 2, 2.0).unwrap(), 0.5);
        assert!(thm2_bound(1, 2, 2.0).is_err());
        assert_eq!(dyadic_exponents(11), vec![3, 1, 0]);
    }

    #[test]
    fn bound_decreases_along_powers_of_two() {
        // m^((s-1)/2) / 2^m falls from m to m+1 iff (1 + 1/m)^((s-1)/2) < 2
        for s in 1..8usize {
            for m in 1..20u32 {
                let (a, b) = (thm2_bound(1 << m, s, 2.0).unwrap(), thm2_bound(1 << (m + 1), s, 2.0).unwrap());
                let falls = (1.0 + 1.0 / m as f64).powf((s as f64 - 1.0) / 2.0) < 2.0;
                assert_eq!(b < a, falls, "s = {s}, m = {m}");
                if s <= 2 {
                    assert!(b < a);
                }
            }
        }
    }

    #[test]
    fn integration_smoke() {
        let p = study_point_set(StudySource::Order2, 2, 4).unwrap().1;
        assert_eq!(qmc_integrate(&p, TestFunction::Constant).1, 0.0);
        let (_, err) = qmc_integrate(&p, TestFunction::ProductLinear);
        assert!(err > 0.0 && err.is_finite());
        assert!("product-cubic".parse::<TestFunction>().is_err());
    }

    #[test]
    fn study_rows_and_csv() {
        let rows = convergence_study(StudySource::Order2, 2, &[3, 4], Some(McSettings { q: 4, samples: 1000, seed: 1 }))
            .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[1].kind, "order2-mc");
        let line = rows[0].to_csv();
        assert_eq!(line.split(',').count(), StudyRow::CSV_HEADER.split(',').count());
        assert!(line.ends_with(','));
        let prop = convergence_study(StudySource::Propagated, 2, &[5], None).unwrap();
        assert_eq!((prop[0].n, prop[0].m), (5, 3));
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 5.0).collect();
        assert!((least_squares_slope(&xs, &ys) + 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn l2_matches_1d_oracle(nums in proptest::collection::vec(0u64..1024, 1..40)) {
            let p = PointSet::from_numerators(1, 10, nums.clone(), Provenance::Custom).unwrap();
            let xs: Vec<f64> = nums.iter().map(|&v| v as f64 / 1024.0).collect();
            let oracle = l2_squared_1d_oracle(&xs).sqrt();
            prop_assert!((l2_exact(&p).unwrap() - oracle).abs() < 1e-10);
        }

        #[test]
        fn l2_matches_2d_oracle(nums in proptest::collection::vec(0u64..64, 2..40)) {
            let k = nums.len() / 2 * 2;
            let p = PointSet::from_numerators(2, 6, nums[..k].to_vec(), Provenance::Custom).unwrap();
            let oracle = l2_squared_2d_oracle(&nums[..k], 6).sqrt();
            prop_assert!((l2_exact(&p).unwrap() - oracle).abs() < 1e-10);
        }

        #[test]
        fn l2_ignores_point_order(nums in proptest::collection::vec(0u64..4096, 4..60), seed in any::<u64>()) {
            let k = nums.len() / 2 * 2;
            let p = PointSet::from_numerators(2, 12, nums[..k].to_vec(), Provenance::Custom).unwrap();
            let mut idx: Vec<usize> = (0..p.len()).collect();
            let shift = (seed as usize) % idx.len();
            idx.rotate_left(shift);
            idx.reverse();
            let shuffled: Vec<u64> = idx.iter().flat_map(|&i| p.point(i).to_vec()).collect();
            let p2 = PointSet::from_numerators(2, 12, shuffled, Provenance::Custom).unwrap();
            prop_assert!((l2_exact(&p).unwrap() - l2_exact(&p2).unwrap()).abs() < 1e-14);
        }

        #[test]
        fn dyadic_corner_perturbation_moves_only_boundary_points(
            nums in proptest::collection::vec(0u64..256, 2..30),
            corner in 1u64..256,
        ) {
            // theta on the point grid versus theta nudged by 2^-(W+1)
            let p = PointSet::from_numerators(1, 8, nums.clone(), Provenance::Custom).unwrap();
            let a = local_discrepancy_exact(&p, &[q(corner as i64, 256)]).unwrap();
            let b = local_discrepancy_exact(&p, &[q(2 * corner as i64 + 1, 512)]).unwrap();
            let on_boundary = nums.iter().filter(|&&x| x == corner).count();
            let count_change = (b - a + q(1, 512)) * BigRational::from_integer(nums.len().into());
            prop_assert_eq!(count_change, BigRational::from_integer(on_boundary.into()));
        }
    }
}
