//! Weights, dual sets and t-values.
//!
//! The dual set of `2m x m` matrices `C_1..C_s` is
//! `{k : C_1^T k_1 + ... + C_s^T k_s = 0}`, where the digit vector of `k_j`
//! puts its least significant digit into row 1. It is a linear space; we
//! compute a kernel basis and walk all of its elements in Gray-code order.

use rayon::prelude::*;

use crate::error::{invalid, over_budget, Budget, Result};
use crate::genmat::GeneratingMatrixSet;
use crate::gf2::BitMatrix;

/// NRT weight: bit length of `k` (0 for `k = 0`).
pub fn mu1(k: u64) -> u32 {
    64 - k.leading_zeros()
}

/// Order-2 weight: sum of the positions (1-based) of the two most significant
/// one-bits of `k`; a single bit contributes its position alone.
pub fn mu2(k: u64) -> u32 {
    if k == 0 {
        return 0;
    }
    let a1 = mu1(k);
    a1 + mu1(k ^ (1 << (a1 - 1)))
}

pub fn mu1_vec(k: &[u64]) -> u32 {
    k.iter().map(|&x| mu1(x)).sum()
}

pub fn mu2_vec(k: &[u64]) -> u32 {
    k.iter().map(|&x| mu2(x)).sum()
}

/// A dual vector with its two weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualElement {
    pub k: Vec<u64>,
    pub mu1: u32,
    pub mu2: u32,
}

impl DualElement {
    pub fn new(k: Vec<u64>) -> Self {
        let (mu1, mu2) = (mu1_vec(&k), mu2_vec(&k));
        Self { k, mu1, mu2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    One,
    Two,
}

impl Order {
    pub fn from_number(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Order::One),
            2 => Ok(Order::Two),
            other => invalid(format!("order must be 1 or 2, got {other}")),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Order::One => 1,
            Order::Two => 2,
        }
    }
}

/// Minimal weights over the nonzero dual elements; `None` when the dual set
/// is `{0}` (infinite minimal weight).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalWeights {
    pub rho1: Option<u32>,
    pub rho2: Option<u32>,
}

impl MinimalWeights {
    const EMPTY: Self = Self {
        rho1: None,
        rho2: None,
    };

    fn merge(self, other: Self) -> Self {
        fn min(a: Option<u32>, b: Option<u32>) -> Option<u32> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            }
        }
        Self {
            rho1: min(self.rho1, other.rho1),
            rho2: min(self.rho2, other.rho2),
        }
    }

    fn observe(&mut self, k: &[u64]) {
        *self = self.merge(Self {
            rho1: Some(mu1_vec(k)),
            rho2: Some(mu2_vec(k)),
        });
    }
}

/// Basis of the dual set of a `digits x m` matrix family.
#[derive(Debug, Clone)]
pub struct DualSpace {
    s: usize,
    digits: usize,
    /// `rows[j][i]` is row `i` of `C_j` packed into `m` bits.
    rows: Vec<Vec<u64>>,
    basis: Vec<Vec<u64>>,
}

/// Kernel of the stacked map `(C_1^T | ... | C_s^T)`, as integer vectors.
///
/// Fails with a resource-limit error when the kernel has more than
/// `2^budget.bits` elements, or when the matrices are too wide for one word.
pub fn dual_set_basis(g: &GeneratingMatrixSet, budget: Budget) -> Result<DualSpace> {
    let (s, digits, m) = (g.s(), g.rows(), g.cols());
    if digits > 64 || m > 64 {
        return over_budget(format!(
            "dual set of {digits}x{m} matrices exceeds the one-word limit"
        ));
    }
    let mut stacked = BitMatrix::zeros(m, digits * s);
    for (j, c) in g.matrices().iter().enumerate() {
        for i in 0..digits {
            for l in 0..m {
                if c.get(i, l) {
                    stacked.set(l, j * digits + i, true);
                }
            }
        }
    }
    let kernel = stacked.kernel_basis();
    budget.check("dual set enumeration", kernel.len() as u32)?;
    let basis = kernel
        .iter()
        .map(|v| (0..s).map(|j| v.extract_word(j * digits, digits)).collect())
        .collect();
    let rows = g
        .matrices()
        .iter()
        .map(|c| (0..digits).map(|i| c.row_word(i)).collect())
        .collect();
    Ok(DualSpace {
        s,
        digits,
        rows,
        basis,
    })
}

impl DualSpace {
    pub fn s(&self) -> usize {
        self.s
    }

    /// Kernel dimension; the dual set has `2^dim` elements.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Membership test. Only the low `2m` digits of each `k_j` enter the
    /// defining equation.
    pub fn contains(&self, k: &[u64]) -> bool {
        assert_eq!(k.len(), self.s);
        let mut acc = 0u64;
        for (rows, &kj) in self.rows.iter().zip(k) {
            let mut bits = if self.digits >= 64 { kj } else { kj & ((1 << self.digits) - 1) };
            while bits != 0 {
                acc ^= rows[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
        }
        acc == 0
    }

    /// All dual elements, starting with `0`, in Gray-code order of the basis
    /// combinations.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = 1u64 << self.basis.len();
        let mut state = vec![0u64; self.s];
        (0..total).map(move |i| {
            if i > 0 {
                for (x, b) in state.iter_mut().zip(&self.basis[i.trailing_zeros() as usize]) {
                    *x ^= b;
                }
            }
            state.clone()
        })
    }

    /// Minimal `mu1` and `mu2` over the nonzero elements.
    ///
    /// The top basis vectors pick a chunk, each chunk is scanned with Gray
    /// code on the remaining ones; chunks run in parallel and the
    /// min-reduction makes the result independent of scheduling.
    pub fn minimal_weights(&self) -> MinimalWeights {
        let d = self.basis.len();
        let high = d.min(8);
        let low = d - high;
        (0..1u64 << high)
            .into_par_iter()
            .map(|chunk| {
                let mut state = vec![0u64; self.s];
                for h in 0..high {
                    if chunk >> h & 1 == 1 {
                        for (x, b) in state.iter_mut().zip(&self.basis[low + h]) {
                            *x ^= b;
                        }
                    }
                }
                let mut best = MinimalWeights::EMPTY;
                if chunk != 0 {
                    best.observe(&state);
                }
                for i in 1..1u64 << low {
                    for (x, b) in state.iter_mut().zip(&self.basis[i.trailing_zeros() as usize]) {
                        *x ^= b;
                    }
                    best.observe(&state);
                }
                best
            })
            .reduce(|| MinimalWeights::EMPTY, MinimalWeights::merge)
    }
}

/// `(rho1, rho2)` of the dual set of `g`.
pub fn minimal_weights(g: &GeneratingMatrixSet, budget: Budget) -> Result<MinimalWeights> {
    Ok(dual_set_basis(g, budget)?.minimal_weights())
}

/// Smallest `t` allowed by the dual criterion: `m - rho1 + 1` in `[0, m]`
/// for order 1, `2m - rho2 + 1` in `[0, 2m]` for order 2.
pub fn t_from_weights(weights: MinimalWeights, m: usize, order: Order) -> u32 {
    let m = m as i64;
    let (rho, top) = match order {
        Order::One => (weights.rho1, m),
        Order::Two => (weights.rho2, 2 * m),
    };
    match rho {
        None => 0,
        Some(r) => (top - r as i64 + 1).clamp(0, top) as u32,
    }
}

/// Exact t-value of the net generated by the `2m x m` matrices `g`.
pub fn exact_t_value(g: &GeneratingMatrixSet, order: Order, budget: Budget) -> Result<u32> {
    let w = minimal_weights(g, budget)?;
    Ok(t_from_weights(w, g.cols(), order))
}

/// Greedy F2 basis keyed by pivot bit.
#[derive(Clone)]
struct XorBasis {
    by_pivot: [u64; 64],
}

impl XorBasis {
    fn new() -> Self {
        Self { by_pivot: [0; 64] }
    }

    /// Adds `v`; returns `false` if it was dependent on the basis.
    fn insert(&mut self, mut v: u64) -> bool {
        while v != 0 {
            let p = 63 - v.leading_zeros() as usize;
            if self.by_pivot[p] == 0 {
                self.by_pivot[p] = v;
                return true;
            }
            v ^= self.by_pivot[p];
        }
        false
    }
}

/// Row selections of one coordinate that are maximal for their cost: a
/// single row `i1`, or rows `1..=i2` together with `i1 > i2`. Every
/// admissible selection is a subset of one of these with the same top-two
/// cost. Entries are `(cost, row indices 0-based)`.
fn maximal_selections(digits: usize, budget: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for i1 in 1..=digits.min(budget) {
        out.push((i1, vec![i1 - 1]));
        for i2 in 1..i1 {
            if i1 + i2 <= budget {
                let mut rows: Vec<usize> = (0..i2).collect();
                rows.push(i1 - 1);
                out.push((i1 + i2, rows));
            }
        }
    }
    out
}

/// Row-independence test for an order-2 digital `(t, m, s)`-net: every
/// selection of rows whose summed top-two indices per coordinate is at most
/// `2m - t` must be linearly independent.
pub fn verify_order2_net(g: &GeneratingMatrixSet, t: u32, budget: Budget) -> Result<bool> {
    let (digits, m) = (g.rows(), g.cols());
    if m > 64 {
        return over_budget("row-independence search limited to 64 columns");
    }
    let limit = 2 * m as i64 - t as i64;
    if limit <= 0 {
        return Ok(true);
    }
    let limit = limit as usize;
    let options = maximal_selections(digits, limit);

    // number of admissible combinations, to enforce the budget up front
    let mut ways = vec![0f64; limit + 1];
    ways[0] = 1.0;
    for _ in 0..g.s() {
        let mut next = ways.clone();
        for (c, &w) in ways.iter().enumerate() {
            for (cost, _) in &options {
                if c + cost <= limit {
                    next[c + cost] += w;
                }
            }
        }
        ways = next;
    }
    let total: f64 = ways.iter().sum();
    budget.check("row-independence search", total.log2().ceil() as u32)?;

    let rows: Vec<Vec<u64>> = g
        .matrices()
        .iter()
        .map(|c| (0..digits).map(|i| c.row_word(i)).collect())
        .collect();
    Ok(search(&rows, &options, 0, limit, &XorBasis::new()))
}

fn search(
    rows: &[Vec<u64>],
    options: &[(usize, Vec<usize>)],
    j: usize,
    remaining: usize,
    basis: &XorBasis,
) -> bool {
    if j == rows.len() {
        return true;
    }
    // coordinate j contributes nothing
    if !search(rows, options, j + 1, remaining, basis) {
        return false;
    }
    for (cost, sel) in options {
        if *cost > remaining {
            continue;
        }
        let mut b = basis.clone();
        if !sel.iter().all(|&i| b.insert(rows[j][i])) {
            return false;
        }
        if !search(rows, options, j + 1, remaining - cost, &b) {
            return false;
        }
    }
    true
}
