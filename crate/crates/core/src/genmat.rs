//! Generating matrices: generalized Niederreiter (Tezuka) matrices, their
//! row interlacing into order-2 matrices, and truncation.
//!
//! The matrices are conceptually infinite. Here every matrix is materialized at
//! a caller-chosen `rows x cols` truncation; entries never depend on the
//! truncation size, so a larger view is obtained by regenerating.

use std::fmt;

use crate::error::{invalid, Result};
use crate::gf2::{irreducible_sequence, laurent_coefficients, BitMatrix, Gf2Poly, Irreducibles};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// Generalized Niederreiter matrices; entry `(k, l)` vanishes for `k > l`.
    Niederreiter,
    /// Row-interlaced pairs of Niederreiter-type matrices; entry `(k, l)`
    /// vanishes for `k > 2l`.
    Interlaced,
    Custom,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Niederreiter => "niederreiter",
            MatrixKind::Interlaced => "interlaced",
            MatrixKind::Custom => "custom",
        })
    }
}

/// Generalized Niederreiter matrix `C_j` (1-based `j`) truncated to
/// `rows x cols`.
///
/// Row `k` (1-based) writes `k - 1 = (i - 1) e_j + z` with `0 <= z < e_j`
/// and holds the Laurent coefficients of `x^(e_j - z - 1) / p_j(x)^i`.
pub fn niederreiter_matrix(j: usize, rows: usize, cols: usize) -> Result<BitMatrix> {
    if j == 0 {
        return invalid("coordinate index j is 1-based");
    }
    if rows == 0 || cols == 0 {
        return invalid(format!("matrix size {rows}x{cols} must be positive"));
    }
    niederreiter_for_poly(irreducible_sequence(j), rows, cols)
}

fn niederreiter_for_poly(p: Gf2Poly, rows: usize, cols: usize) -> Result<BitMatrix> {
    let e = p.degree().expect("irreducibles are nonzero") as usize;
    let mut m = BitMatrix::zeros(rows, cols);
    for k in 0..rows {
        let (i, z) = (k / e + 1, k % e);
        let row = laurent_coefficients(p, i as u32, z as u32, cols)?;
        m.set_row(k, &row);
    }
    Ok(m)
}

/// `t' = sum_{j <= coords} (e_j - 1)`, the classical quality parameter of the
/// first `coords` generalized Niederreiter coordinates.
pub fn niederreiter_t_prime(coords: usize) -> u32 {
    Irreducibles::new()
        .take(coords)
        .map(|p| p.degree().unwrap() - 1)
        .sum()
}

/// Order-2 quality bound `t = s + 2 t'` for the interlaced construction in
/// dimension `s`, where `t'` is taken over the `2s` underlying coordinates.
pub fn order2_t_bound(s: usize) -> u32 {
    s as u32 + 2 * niederreiter_t_prime(2 * s)
}

/// `true` when entry `(k, l)` vanishes whenever `k > factor * l` (1-based).
pub fn is_column_finite(m: &BitMatrix, factor: usize) -> bool {
    (0..m.rows()).all(|r| {
        // columns l with factor * l < k = r + 1 must be zero
        let limit = r / factor; // number of 1-based l with factor*l <= r, i.e. < r+1
        (0..limit.min(m.cols())).all(|c| !m.get(r, c))
    })
}

/// A family of `s` generating matrices sharing one truncation size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingMatrixSet {
    rows: usize,
    cols: usize,
    kind: MatrixKind,
    matrices: Vec<BitMatrix>,
    underlying: Vec<Gf2Poly>,
}

impl GeneratingMatrixSet {
    /// Wraps explicit matrices. Checks the shape and the vanishing pattern
    /// implied by `kind`.
    pub fn new(kind: MatrixKind, matrices: Vec<BitMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return invalid("a generating matrix set needs at least one matrix");
        };
        let (rows, cols) = (first.rows(), first.cols());
        if matrices.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return invalid("all generating matrices must share one size");
        }
        let factor = match kind {
            MatrixKind::Niederreiter => Some(1),
            MatrixKind::Interlaced => Some(2),
            MatrixKind::Custom => None,
        };
        if let Some(factor) = factor {
            if let Some(j) = matrices.iter().position(|m| !is_column_finite(m, factor)) {
                return invalid(format!(
                    "matrix {} has a nonzero entry with k > {factor}l, not a valid {kind} matrix",
                    j + 1
                ));
            }
        }
        Ok(Self {
            rows,
            cols,
            kind,
            matrices,
            underlying: Vec::new(),
        })
    }

    /// `C_1, ..., C_s` truncated to `rows x cols`.
    pub fn niederreiter(s: usize, rows: usize, cols: usize) -> Result<Self> {
        if s == 0 {
            return invalid("dimension s must be positive");
        }
        if rows == 0 || cols == 0 {
            return invalid(format!("matrix size {rows}x{cols} must be positive"));
        }
        let polys: Vec<Gf2Poly> = Irreducibles::new().take(s).collect();
        let matrices = polys
            .iter()
            .map(|&p| niederreiter_for_poly(p, rows, cols))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows,
            cols,
            kind: MatrixKind::Niederreiter,
            matrices,
            underlying: polys,
        })
    }

    /// The order-2 construction: `D_1, ..., D_s` interlaced from
    /// `C_1, ..., C_2s`, truncated to `rows x cols`.
    pub fn order2(s: usize, rows: usize, cols: usize) -> Result<Self> {
        let src = Self::niederreiter(2 * s, rows.div_ceil(2).max(1), cols)?;
        interlace_matrix_set(&src, rows)
    }

    /// `s` all-zero matrices.
    pub fn zeros(s: usize, rows: usize, cols: usize) -> Result<Self> {
        Self::new(
            MatrixKind::Custom,
            (0..s).map(|_| BitMatrix::zeros(rows, cols)).collect(),
        )
    }

    pub fn s(&self) -> usize {
        self.matrices.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Matrix of coordinate `j`, 0-based.
    pub fn matrix(&self, j: usize) -> &BitMatrix {
        &self.matrices[j]
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    /// The irreducibles behind the matrices (`s` of them for Niederreiter
    /// sets, `2s` for interlaced ones, none for custom sets).
    pub fn underlying_polys(&self) -> &[Gf2Poly] {
        &self.underlying
    }

    /// Every matrix replaced by its left-upper `u x v` submatrix.
    pub fn upper_left(&self, u: usize, v: usize) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.upper_left(u, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: u,
            cols: v,
            kind: self.kind,
            matrices,
            underlying: self.underlying.clone(),
        })
    }

    /// The first `s` matrices only.
    pub fn project(&self, s: usize) -> Result<Self> {
        if s == 0 || s > self.s() {
            return invalid(format!("cannot project {} coordinates onto {s}", self.s()));
        }
        let keep = match self.kind {
            MatrixKind::Niederreiter => s,
            MatrixKind::Interlaced => 2 * s,
            MatrixKind::Custom => 0,
        };
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            kind: self.kind,
            matrices: self.matrices[..s].to_vec(),
            underlying: self.underlying[..keep.min(self.underlying.len())].to_vec(),
        })
    }

    /// Whether every matrix vanishes below `k = factor * l`.
    pub fn is_column_finite(&self, factor: usize) -> bool {
        self.matrices.iter().all(|m| is_column_finite(m, factor))
    }
}

/// Row interlacing: row `2u + v` of `D_j` is row `u + 1` of `C_{2(j-1)+v}`
/// (1-based, `v in {1, 2}`). Produces `src.s() / 2` matrices with `rows` rows.
pub fn interlace_matrix_set(src: &GeneratingMatrixSet, rows: usize) -> Result<GeneratingMatrixSet> {
    if src.s() % 2 != 0 {
        return invalid(format!(
            "interlacing needs an even number of matrices, got {}",
            src.s()
        ));
    }
    if src.rows() < rows.div_ceil(2) {
        return invalid(format!(
            "interlacing to {rows} rows needs {} source rows, have {}",
            rows.div_ceil(2),
            src.rows()
        ));
    }
    if rows == 0 {
        return invalid("interlaced matrices need at least one row");
    }
    let matrices: Vec<BitMatrix> = src
        .matrices
        .chunks(2)
        .map(|pair| {
            let mut d = BitMatrix::zeros(rows, src.cols());
            for r in 0..rows {
                let (u, v) = (r / 2, r % 2);
                d.set_row(r, &pair[v].row(u));
            }
            d
        })
        .collect();
    let kind = if src.is_column_finite(1) {
        MatrixKind::Interlaced
    } else {
        MatrixKind::Custom
    };
    Ok(GeneratingMatrixSet {
        rows,
        cols: src.cols(),
        kind,
        matrices,
        underlying: src.underlying.clone(),
    })
}
