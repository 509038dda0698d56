use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Default numeric tolerance for Hermiticity, trace, and PSD checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Dense complex matrix, row-major storage.
///
/// Equality is always tolerance-based; see [`ComplexMatrix::approx_eq`] and
/// [`ComplexMatrix::max_abs_diff`]. There is deliberately no `PartialEq` impl.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, C64::new(*d, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// A B A†, the usual conjugation pattern.
    pub fn conjugate_with(&self, b: &Self) -> Self {
        self.matmul(b).matmul(&self.dagger())
    }

    /// Kronecker product, `self` as the left (first) factor.
    ///
    /// The artifact-wide convention puts CR factors before CTC factors, so a
    /// joint operator is always `cr.tensor(&ctc)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    /// Reduces a square matrix over `dims` subsystems to the ones in `keep`,
    /// tracing out the rest. Kept subsystems stay in their original order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !self.is_square() || self.rows != total {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but subsystem dims multiply to {}",
                self.rows, self.cols, total
            )));
        }
        if keep.is_empty() {
            return Err(Error::Precondition("keep set must be nonempty".into()));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.iter().any(|&k| k >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "keep index out of range for {} subsystems",
                dims.len()
            )));
        }

        let kept_dim: usize = kept.iter().map(|&k| dims[k]).product();
        let mut out = Self::zeros(kept_dim, kept_dim);
        let n = dims.len();
        let mut ridx = vec![0usize; n];
        let mut cidx = vec![0usize; n];
        for r in 0..total {
            decompose(r, dims, &mut ridx);
            for c in 0..total {
                decompose(c, dims, &mut cidx);
                // only diagonal traced indices contribute
                if (0..n)
                    .filter(|s| !kept.contains(s))
                    .any(|s| ridx[s] != cidx[s])
                {
                    continue;
                }
                let mut ro = 0usize;
                let mut co = 0usize;
                for &k in &kept {
                    ro = ro * dims[k] + ridx[k];
                    co = co * dims[k] + cidx[k];
                }
                let v = out.get(ro, co) + self.get(r, c);
                out.set(ro, co, v);
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hilbert-Schmidt inner product tr(self† other).
    pub fn hilbert_schmidt(&self, other: &Self) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Eigendecomposition of a Hermitian matrix: eigenvalues in ascending
    /// order with matching eigenvector columns. This is the single spectral
    /// primitive; entropies, PSD tests, and trace distances all route through
    /// it.
    pub fn hermitian_eigen(&self, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_hermitian(tol) {
            return Err(Error::Precondition(format!(
                "hermitian_eigen on a non-Hermitian matrix (asymmetry {:.3e})",
                self.max_abs_diff(&self.dagger())
            )));
        }
        let n = self.rows;
        let m = DMatrix::from_fn(n, n, |i, j| self.get(i, j));
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    /// Eigenvalues only, ascending.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        self.hermitian_eigen(tol).map(|(v, _)| v)
    }
}

#[inline]
fn decompose(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    // big-endian: first subsystem is the most significant factor,
    // matching the Kronecker ordering of `tensor`
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
}

/// Rebuilds a Hermitian matrix from a spectrum and eigenvector columns.
pub(crate) fn from_spectrum(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let n = values.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        if values[k] == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = vectors.get(i, k);
            if vik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = out.get(i, j) + vik * vectors.get(j, k).conj() * values[k];
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Embeds a unitary acting on the `targets` subsystems (in the given order)
/// into the full register described by `dims`, identity elsewhere.
pub fn embed_unitary(u: &ComplexMatrix, dims: &[usize], targets: &[usize]) -> Result<ComplexMatrix> {
    let n = dims.len();
    {
        let mut seen = vec![false; n];
        for &t in targets {
            if t >= n {
                return Err(Error::Config(format!(
                    "target subsystem {t} out of range for {n} subsystems"
                )));
            }
            if seen[t] {
                return Err(Error::Config(format!("duplicate target subsystem {t}")));
            }
            seen[t] = true;
        }
    }
    let target_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if !u.is_square() || u.rows() != target_dim {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but targets multiply to {}",
            u.rows(),
            u.cols(),
            target_dim
        )));
    }

    let total: usize = dims.iter().product();
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut cidx = vec![0usize; n];
    let mut tidx = vec![0usize; targets.len()];
    for c in 0..total {
        decompose(c, dims, &mut cidx);
        let mut tcol = 0usize;
        for &t in targets {
            tcol = tcol * dims[t] + cidx[t];
        }
        for trow in 0..target_dim {
            let a = u.get(trow, tcol);
            if a.norm_sqr() == 0.0 {
                continue;
            }
            decompose(trow, &tdims, &mut tidx);
            let mut ridx = cidx.clone();
            for (pos, &t) in targets.iter().enumerate() {
                ridx[t] = tidx[pos];
            }
            let mut r = 0usize;
            for k in 0..n {
                r = r * dims[k] + ridx[k];
            }
            out.set(r, c, a);
        }
    }
    Ok(out)
}

/// Unitary interaction between CR and CTC factors, or any validated unitary.
#[derive(Clone, Debug)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    /// Validates U U† = I within `tol`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let id = ComplexMatrix::identity(matrix.rows());
        let dev = matrix.matmul(&matrix.dagger()).max_abs_diff(&id);
        if dev > tol {
            return Err(Error::InvalidState(format!(
                "matrix is not unitary: |UU† - I| = {dev:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// Swap of two `dim`-level systems: |i⟩|j⟩ → |j⟩|i⟩.
    pub fn swap(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(j * dim + i, i * dim + j, C64::new(1.0, 0.0));
            }
        }
        Self { matrix: m }
    }

    /// CNOT on two qubits, first factor (CR) as control.
    pub fn cnot() -> Self {
        let mut m = ComplexMatrix::zeros(4, 4);
        let one = C64::new(1.0, 0.0);
        m.set(0, 0, one);
        m.set(1, 1, one);
        m.set(2, 3, one);
        m.set(3, 2, one);
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, C64::new(1.0, 0.0));
    m.set(1, 0, C64::new(1.0, 0.0));
    m
}

pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, C64::new(0.0, -1.0));
    m.set(1, 0, C64::new(0.0, 1.0));
    m
}

pub fn pauli_z() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, C64::new(1.0, 0.0));
    m.set(1, 1, C64::new(-1.0, 0.0));
    m
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, C64::new(h, 0.0));
    m.set(0, 1, C64::new(h, 0.0));
    m.set(1, 0, C64::new(h, 0.0));
    m.set(1, 1, C64::new(-h, 0.0));
    m
}
