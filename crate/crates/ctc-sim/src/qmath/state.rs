use num_complex::Complex;

use crate::error::{Error, Result};

use super::matrix::{from_spectrum, pauli_x, pauli_y, pauli_z, C64, ComplexMatrix};

/// Trace-one positive-semidefinite Hermitian matrix: the state of any CR or
/// CTC subsystem.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// within `tol`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState(format!(
                "not Hermitian: asymmetry {:.3e}",
                matrix.max_abs_diff(&matrix.dagger())
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace is {tr} instead of 1"
            )));
        }
        let min_eig = matrix
            .hermitian_eigenvalues(tol)?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// Like [`DensityOperator::new`] but clamps eigenvalues in `(-tol, 0)` to
    /// zero and renormalizes the trace, keeping downstream entropies
    /// well-defined for states that sit numerically on the PSD boundary.
    pub fn clamped(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState(format!(
                "not Hermitian: asymmetry {:.3e}",
                matrix.max_abs_diff(&matrix.dagger())
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace is {tr} instead of 1"
            )));
        }
        let (mut vals, vecs) = matrix.hermitian_eigen(tol)?;
        if let Some(&min) = vals.first() {
            if min < -tol {
                return Err(Error::InvalidState(format!(
                    "not positive semidefinite: min eigenvalue {min:.3e}"
                )));
            }
        }
        for v in &mut vals {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = vals.iter().sum();
        for v in &mut vals {
            *v /= total;
        }
        let matrix = from_spectrum(&vals, &vecs);
        Ok(Self {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    /// Reduced state over the kept subsystems.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let reduced = self.matrix.partial_trace(dims, keep)?;
        Self::clamped(reduced, super::matrix::DEFAULT_TOL)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            dim: self.dim * other.dim,
            matrix: self.matrix.tensor(&other.matrix),
        }
    }
}

/// Normalized state vector over a finite Hilbert space.
#[derive(Clone, Debug)]
pub struct PureState {
    dim: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Requires Σ|amplitude|² within `tol` of 1.
    pub fn new(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "state vector norm² is {norm_sq}, expected 1"
            )));
        }
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes,
        })
    }

    /// Computational basis state |index⟩ of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { dim, amplitudes }
    }

    /// Qubit cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let half = theta / 2.0;
        Self {
            dim: 2,
            amplitudes: vec![
                C64::new(half.cos(), 0.0),
                Complex::from_polar(half.sin(), phi),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim * other.dim);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self {
            dim: self.dim * other.dim,
            amplitudes,
        }
    }

    /// |ψ⟩⟨ψ| as a density operator.
    pub fn projector(&self) -> DensityOperator {
        let m = ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityOperator {
            dim: self.dim,
            matrix: m,
        }
    }
}

/// The four two-qubit Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub fn state(self) -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, sign) = match self {
            BellState::PhiPlus => (0, 3, 1.0),
            BellState::PhiMinus => (0, 3, -1.0),
            BellState::PsiPlus => (1, 2, 1.0),
            BellState::PsiMinus => (1, 2, -1.0),
        };
        let mut amplitudes = vec![C64::new(0.0, 0.0); 4];
        amplitudes[a] = C64::new(h, 0.0);
        amplitudes[b] = C64::new(sign * h, 0.0);
        PureState { dim: 4, amplitudes }
    }

    pub fn all() -> [BellState; 4] {
        [
            BellState::PhiPlus,
            BellState::PhiMinus,
            BellState::PsiPlus,
            BellState::PsiMinus,
        ]
    }
}

/// Real 3-vector (x, y, z) parametrizing a qubit state ½(I + xX + yY + zZ).
#[derive(Clone, Copy, Debug)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// ½(I + xX + yY + zZ); requires |v| ≤ 1 + tol.
    pub fn to_density(&self, tol: f64) -> Result<DensityOperator> {
        if self.norm() > 1.0 + tol {
            return Err(Error::InvalidState(format!(
                "Bloch vector has norm {} > 1",
                self.norm()
            )));
        }
        let m = ComplexMatrix::identity(2)
            .add(&pauli_x().scale_re(self.x))
            .add(&pauli_y().scale_re(self.y))
            .add(&pauli_z().scale_re(self.z))
            .scale_re(0.5);
        DensityOperator::clamped(m, tol.max(super::matrix::DEFAULT_TOL))
    }

    /// Inverse of [`BlochVector::to_density`] for qubit states.
    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch vector requires a qubit state, got dim {}",
                rho.dim()
            )));
        }
        let m = rho.matrix();
        Ok(Self {
            x: m.hilbert_schmidt(&pauli_x()).re,
            y: m.hilbert_schmidt(&pauli_y()).re,
            z: m.hilbert_schmidt(&pauli_z()).re,
        })
    }
}

/// True iff the minimum eigenvalue of a Hermitian matrix is ≥ −tol.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !m.is_hermitian(tol) {
        return Err(Error::Precondition(format!(
            "is_psd requires a Hermitian matrix (asymmetry {:.3e})",
            m.max_abs_diff(&m.dagger())
        )));
    }
    let vals = m.hermitian_eigenvalues(tol)?;
    Ok(vals.first().map_or(true, |&v| v >= -tol))
}

/// Von Neumann entropy in bits: −Σ λ log₂ λ with 0·log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let vals = rho
        .matrix()
        .hermitian_eigenvalues(super::matrix::DEFAULT_TOL)
        .expect("density operator is Hermitian by construction");
    vals.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

/// ⟨ψ|ρ|ψ⟩, the fidelity of ρ to the pure target |ψ⟩.
pub fn fidelity_to_pure(psi: &PureState, rho: &DensityOperator) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs operator dim {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..psi.dim() {
        for j in 0..psi.dim() {
            acc += psi.amplitudes()[i].conj() * rho.matrix().get(i, j) * psi.amplitudes()[j];
        }
    }
    Ok(acc.re)
}

/// ½ Σ |eigenvalues of (a − b)|.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between dim {} and dim {}",
            a.dim(),
            b.dim()
        )));
    }
    trace_distance_matrices(a.matrix(), b.matrix())
}

pub(crate) fn trace_distance_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.sub(b);
    let vals = diff.hermitian_eigenvalues(1e-7)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_pure_state_is_zero() {
        let psi = PureState::from_bloch_angles(1.1, 0.3);
        assert!(von_neumann_entropy(&psi.projector()).abs() < 1e-12);
    }

    #[test]
    fn entropy_maximally_mixed_qubit_is_one_bit() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_three_quarters() {
        let m = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let rho = DensityOperator::new(m, 1e-9).unwrap();
        // -(3/4 log2 3/4 + 1/4 log2 1/4)
        let expected = 0.811_278_124_459_132_8;
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let psi = PureState::from_bloch_angles(0.7, 1.9);
        assert!((fidelity_to_pure(&psi, &psi.projector()).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((fidelity_to_pure(&psi, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_epsilon_final_example() {
        // rho_f = (1-ε) I/2 + ε |0><0| at ε = 0.5 gives <0|rho_f|0> = 0.75
        let m = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let rho_f = DensityOperator::new(m, 1e-9).unwrap();
        let zero = PureState::basis(2, 0);
        assert!((fidelity_to_pure(&zero, &rho_f).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let psi = PureState::basis(2, 0);
        let rho = DensityOperator::maximally_mixed(3);
        assert!(fidelity_to_pure(&psi, &rho).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let zero = PureState::basis(2, 0).projector();
        let one = PureState::basis(2, 1).projector();
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-12);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn is_psd_examples() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(is_psd(mixed.matrix(), 1e-9).unwrap());
        let neg = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
        assert!(!is_psd(&neg, 1e-9).unwrap());
        // 2(I/2) - |ψ><ψ| = I - |ψ><ψ| is a projector, eigenvalues {0, 1}
        let psi = PureState::from_bloch_angles(2.1, 0.4);
        let m = ComplexMatrix::identity(2).sub(psi.projector().matrix());
        assert!(is_psd(&m, 1e-9).unwrap());
    }

    #[test]
    fn is_psd_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 1, C64::new(1.0, 0.0));
        assert!(matches!(is_psd(&m, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn bloch_roundtrip_examples() {
        let center = BlochVector::new(0.0, 0.0, 0.0).to_density(1e-9).unwrap();
        assert!(center.approx_eq(&DensityOperator::maximally_mixed(2), 1e-12));

        let north = BlochVector::new(0.0, 0.0, 1.0).to_density(1e-9).unwrap();
        assert!(north.approx_eq(&PureState::basis(2, 0).projector(), 1e-12));

        let plus = BlochVector::new(1.0, 0.0, 0.0).to_density(1e-9).unwrap();
        let expected = PureState::from_bloch_angles(std::f64::consts::FRAC_PI_2, 0.0).projector();
        assert!(plus.approx_eq(&expected, 1e-12));

        let v = BlochVector::new(0.3, -0.5, 0.2);
        let back = BlochVector::from_density(&v.to_density(1e-9).unwrap()).unwrap();
        assert!((back.x - v.x).abs() < 1e-12);
        assert!((back.y - v.y).abs() < 1e-12);
        assert!((back.z - v.z).abs() < 1e-12);
    }

    #[test]
    fn bloch_rejects_outside_ball() {
        assert!(BlochVector::new(1.2, 0.0, 0.0).to_density(1e-9).is_err());
    }

    #[test]
    fn unnormalized_pure_state_rejected() {
        let amps = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        assert!(PureState::new(amps, 1e-9).is_err());
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        // trace != 1
        let m = ComplexMatrix::identity(2);
        assert!(DensityOperator::new(m, 1e-9).is_err());
        // negative eigenvalue
        let m = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(DensityOperator::new(m, 1e-9).is_err());
    }

    #[test]
    fn clamped_fixes_boundary_noise() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0 + 3e-10, -3e-10]);
        let rho = DensityOperator::clamped(m, 1e-9).unwrap();
        let vals = rho.matrix().hermitian_eigenvalues(1e-9).unwrap();
        assert!(vals[0] >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_states_are_orthonormal() {
        let all = BellState::all().map(|b| b.state());
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let ip = a.inner(b).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-12);
            }
        }
    }
}
