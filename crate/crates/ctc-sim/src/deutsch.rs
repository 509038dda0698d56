//! The Deutsch-model core: the consistency map σ ↦ Tr_CR(U (ρ_CR⊗σ) U†),
//! enumeration of its fixed-point set, maximum-entropy selection, the CR
//! output map, and the ε-close relaxation.
//!
//! The fixed-point solver works on the real vector space of Hermitian
//! matrices. The map is Hermiticity-preserving, so its transfer matrix in an
//! orthonormal Hermitian operator basis is real; kernel directions of
//! (transfer − I) are found by SVD and a positive-semidefinite unit-trace
//! particular point is located by Cesàro averaging followed by alternating
//! projections onto the fixed affine set and the PSD cone.

use crate::error::{Error, Result};
use crate::qmath::{
    from_spectrum, is_psd, trace_distance, trace_distance_matrices, C64, ComplexMatrix,
    DensityOperator, PureState, UnitaryOperator, DEFAULT_TOL,
};

/// Singular values of (transfer − I) below this count as kernel directions.
pub const KERNEL_SINGULAR_THRESHOLD: f64 = 1e-8;

/// Cap on the number of map applications in the Cesàro average.
const CESARO_CAP: usize = 10_000;

/// One CR-CTC interaction: a unitary on d_CR·d_CTC together with the CR
/// input state it acts on.
#[derive(Clone, Debug)]
pub struct DeutschMap {
    unitary: UnitaryOperator,
    cr_input: DensityOperator,
    d_cr: usize,
    d_ctc: usize,
}

impl DeutschMap {
    /// Builds the map, inferring d_CTC from the unitary and CR dimensions.
    /// Trace preservation of the induced CTC map is checked numerically on a
    /// full operator basis.
    pub fn new(unitary: UnitaryOperator, cr_input: DensityOperator, tol: f64) -> Result<Self> {
        let d_cr = cr_input.dim();
        if unitary.dim() % d_cr != 0 {
            return Err(Error::DimensionMismatch(format!(
                "unitary dim {} is not a multiple of CR dim {}",
                unitary.dim(),
                d_cr
            )));
        }
        let d_ctc = unitary.dim() / d_cr;
        if d_ctc < 1 {
            return Err(Error::DimensionMismatch("empty CTC factor".into()));
        }
        let map = Self {
            unitary,
            cr_input,
            d_cr,
            d_ctc,
        };
        let guard = tol.max(DEFAULT_TOL) * 100.0;
        for b in hermitian_basis(d_ctc) {
            let dev = (map.apply_raw(&b).trace() - b.trace()).norm();
            if dev > guard {
                return Err(Error::InvalidState(format!(
                    "induced CTC map is not trace preserving (deviation {dev:.3e})"
                )));
            }
        }
        Ok(map)
    }

    /// Stinespring construction: a map Σ Kᵢ σ Kᵢ† realized as a Deutsch
    /// interaction with the CR register as the environment, prepared in |0⟩.
    pub fn from_kraus(kraus: &[ComplexMatrix], tol: f64) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Config("at least one Kraus operator required".into()));
        }
        let d = kraus[0].rows();
        if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch(
                "all Kraus operators must be square with equal dimension".into(),
            ));
        }
        let m = kraus.len();
        let mut completeness = ComplexMatrix::zeros(d, d);
        for k in kraus {
            completeness = completeness.add(&k.dagger().matmul(k));
        }
        if !completeness.approx_eq(&ComplexMatrix::identity(d), tol.max(DEFAULT_TOL)) {
            return Err(Error::InvalidState(
                "Kraus operators do not satisfy Σ K†K = I".into(),
            ));
        }

        // isometry columns |e_0⟩|j⟩ ↦ Σ_i |e_i⟩ K_i|j⟩, Gram-Schmidt completion
        let total = m * d;
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(total);
        for j in 0..d {
            let mut col = vec![C64::new(0.0, 0.0); total];
            for (i, k) in kraus.iter().enumerate() {
                for r in 0..d {
                    col[i * d + r] = k.get(r, j);
                }
            }
            cols.push(col);
        }
        let mut e = 0usize;
        while cols.len() < total {
            if e >= total {
                return Err(Error::Solver(
                    "failed to complete Stinespring isometry to a unitary".into(),
                ));
            }
            let mut cand = vec![C64::new(0.0, 0.0); total];
            cand[e] = C64::new(1.0, 0.0);
            e += 1;
            for existing in &cols {
                let proj: C64 = existing
                    .iter()
                    .zip(&cand)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (c, x) in cand.iter_mut().zip(existing) {
                    *c -= proj * x;
                }
            }
            let norm: f64 = cand.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue; // linearly dependent candidate, try the next axis
            }
            for c in &mut cand {
                *c /= norm;
            }
            cols.push(cand);
        }
        // columns were produced in the order |e_0⟩|0⟩ .. |e_0⟩|d-1⟩ then fill;
        // place the isometry columns at indices 0..d (CR factor first means
        // |e_0⟩|j⟩ has flat index j), completions at the rest
        let u = ComplexMatrix::from_fn(total, total, |i, j| cols[j][i]);
        let unitary = UnitaryOperator::new(u, tol.max(DEFAULT_TOL) * 10.0)?;
        let cr_input = PureState::basis(m, 0).projector();
        Self::new(unitary, cr_input, tol)
    }

    pub fn d_cr(&self) -> usize {
        self.d_cr
    }

    pub fn d_ctc(&self) -> usize {
        self.d_ctc
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    pub fn cr_input(&self) -> &DensityOperator {
        &self.cr_input
    }

    /// Linear extension of the consistency map to arbitrary CTC-sized
    /// matrices: Tr_CR(U (ρ_CR ⊗ m) U†).
    pub fn apply_raw(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let joint = self.cr_input.matrix().tensor(m);
        let evolved = self.unitary.matrix().conjugate_with(&joint);
        evolved
            .partial_trace(&[self.d_cr, self.d_ctc], &[1])
            .expect("dimensions validated at construction")
    }

    /// Tr_CR(U (ρ_CR ⊗ σ) U†) as a density operator.
    pub fn apply(&self, sigma: &DensityOperator) -> Result<DensityOperator> {
        if sigma.dim() != self.d_ctc {
            return Err(Error::DimensionMismatch(format!(
                "CTC state dim {} but map expects {}",
                sigma.dim(),
                self.d_ctc
            )));
        }
        DensityOperator::clamped(self.apply_raw(sigma.matrix()), DEFAULT_TOL)
    }

    /// Trace distance between σ and its image under the map.
    pub fn residual(&self, sigma: &DensityOperator) -> Result<f64> {
        if sigma.dim() != self.d_ctc {
            return Err(Error::DimensionMismatch(format!(
                "CTC state dim {} but map expects {}",
                sigma.dim(),
                self.d_ctc
            )));
        }
        trace_distance_matrices(&self.apply_raw(sigma.matrix()), sigma.matrix())
    }

    /// Column-stacking superoperator matrix: vec(apply(σ)) = L·vec(σ).
    pub fn liouville_matrix(&self) -> ComplexMatrix {
        let d = self.d_ctc;
        let mut l = ComplexMatrix::zeros(d * d, d * d);
        for k in 0..d * d {
            // vec index k = j*d + i addresses the matrix unit |i⟩⟨j|
            let (i, j) = (k % d, k / d);
            let mut unit = ComplexMatrix::zeros(d, d);
            unit.set(i, j, C64::new(1.0, 0.0));
            let image = self.apply_raw(&unit);
            for col in 0..d {
                for row in 0..d {
                    l.set(col * d + row, k, image.get(row, col));
                }
            }
        }
        l
    }

    /// All density-operator solutions of the Deutsch condition, as a PSD
    /// particular point plus traceless Hermitian kernel directions.
    pub fn fixed_point_set(&self, tol: f64) -> Result<FixedPointSet> {
        let d = self.d_ctc;
        let basis = hermitian_basis(d);
        let n = d * d;

        // real transfer matrix in the Hermitian operator basis
        let mut transfer = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (b, bm) in basis.iter().enumerate() {
            let image = self.apply_raw(bm);
            for (a, am) in basis.iter().enumerate() {
                transfer[(a, b)] = am.hilbert_schmidt(&image).re;
            }
        }
        let shifted = &transfer - nalgebra::DMatrix::<f64>::identity(n, n);
        let svd = shifted.svd(true, true);
        let v_t = svd.v_t.as_ref().expect("full SVD requested");
        let mut kernel: Vec<Vec<f64>> = Vec::new();
        for (idx, s) in svd.singular_values.iter().enumerate() {
            if *s < KERNEL_SINGULAR_THRESHOLD {
                kernel.push(v_t.row(idx).iter().copied().collect());
            }
        }
        if kernel.is_empty() {
            // CPTP maps always have a fixed point; an empty kernel means the
            // numerics broke down
            return Err(Error::Solver(
                "no kernel direction found for the Deutsch condition".into(),
            ));
        }

        // minimum-norm unit-trace element of the kernel; tr(Σ c_a B_a) = √d c_0
        let sqrt_d = (d as f64).sqrt();
        let traces: Vec<f64> = kernel.iter().map(|v| sqrt_d * v[0]).collect();
        let tnorm2: f64 = traces.iter().map(|t| t * t).sum();
        if tnorm2 < 1e-20 {
            return Err(Error::Solver(
                "kernel contains no unit-trace element".into(),
            ));
        }
        let mut anchor = vec![0.0; n];
        for (v, t) in kernel.iter().zip(&traces) {
            axpy(&mut anchor, t / tnorm2, v);
        }

        // traceless part of the kernel: eliminate the trace component against
        // a pivot, then Gram-Schmidt
        let mut traceless: Vec<Vec<f64>> = Vec::new();
        let pivot = traces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        for (i, v) in kernel.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let mut w = v.clone();
            axpy(&mut w, -traces[i] / traces[pivot], &kernel[pivot]);
            for u in &traceless {
                let p = dot(u, &w);
                axpy(&mut w, -p, u);
            }
            let norm = dot(&w, &w).sqrt();
            if norm > 1e-10 {
                for x in &mut w {
                    *x /= norm;
                }
                traceless.push(w);
            }
        }

        let particular =
            self.particular_point(&basis, &anchor, &traceless, tol.max(DEFAULT_TOL))?;
        let residual = self.residual(&particular)?;
        if residual > tol.max(KERNEL_SINGULAR_THRESHOLD) {
            return Err(Error::Solver(format!(
                "particular fixed point has residual {residual:.3e}"
            )));
        }

        let dim_kernel = traceless.len();
        let basis_mats = traceless
            .iter()
            .map(|v| from_coords(&basis, v))
            .collect();
        Ok(FixedPointSet {
            particular,
            basis: basis_mats,
            dim_kernel,
        })
    }

    /// Cesàro-average I/d through the map, then alternate projections between
    /// the fixed affine set and the PSD cone until both hold.
    fn particular_point(
        &self,
        basis: &[ComplexMatrix],
        anchor: &[f64],
        traceless: &[Vec<f64>],
        tol: f64,
    ) -> Result<DensityOperator> {
        let d = self.d_ctc;
        let project = |x: &[f64]| -> Vec<f64> {
            let mut out = anchor.to_vec();
            let mut delta = x.to_vec();
            axpy(&mut delta, -1.0, anchor);
            for u in traceless {
                let p = dot(u, &delta);
                axpy(&mut out, p, u);
            }
            out
        };

        let mut sigma = ComplexMatrix::identity(d).scale_re(1.0 / d as f64);
        let mut acc = ComplexMatrix::zeros(d, d);
        let mut count = 0usize;
        let mut candidate = project(&coords(basis, &sigma));
        let block = 250usize;
        while count < CESARO_CAP {
            for _ in 0..block {
                acc = acc.add(&sigma);
                sigma = self.apply_raw(&sigma);
                count += 1;
            }
            let mean = acc.scale_re(1.0 / count as f64);
            candidate = project(&coords(basis, &mean));
            if min_eigenvalue(&from_coords(basis, &candidate))? > -1e-10 {
                break;
            }
        }

        // alternating projections, PSD cone <-> fixed affine set
        for _ in 0..500 {
            let m = from_coords(basis, &candidate);
            let (vals, vecs) = m.hermitian_eigen(1e-6)?;
            if vals[0] >= -1e-11 {
                break;
            }
            let clamped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
            let psd = from_spectrum(&clamped, &vecs);
            candidate = project(&coords(basis, &psd));
        }

        let m = from_coords(basis, &candidate);
        DensityOperator::clamped(m, tol.max(1e-7))
    }

    /// The entropy maximizer over the convex set of PSD fixed points. Qubit
    /// CTCs use the least-norm Bloch closed form; larger CTCs use projected
    /// gradient ascent.
    pub fn max_entropy_fixed_point(&self, tol: f64) -> Result<DensityOperator> {
        let set = self.fixed_point_set(tol)?;
        if set.dim_kernel() == 0 {
            return Ok(set.particular().clone());
        }
        if self.d_ctc == 2 {
            return bloch_least_norm(&set);
        }
        ascend_entropy(&set)
    }

    /// Projected gradient ascent of the entropy over the fixed affine set,
    /// regardless of dimension. For qubits this cross-checks the closed form.
    pub fn max_entropy_by_ascent(&self, tol: f64) -> Result<DensityOperator> {
        let set = self.fixed_point_set(tol)?;
        if set.dim_kernel() == 0 {
            return Ok(set.particular().clone());
        }
        ascend_entropy(&set)
    }

    /// ρ′_CR = Tr_CTC(U (ρ_CR ⊗ σ*) U†). Requires σ* to satisfy the Deutsch
    /// condition within `tol`.
    pub fn cr_output(&self, sigma_star: &DensityOperator, tol: f64) -> Result<DensityOperator> {
        let residual = self.residual(sigma_star)?;
        if residual > tol {
            return Err(Error::Precondition(format!(
                "CTC state violates the Deutsch condition: residual {residual:.3e} > {tol:.3e}"
            )));
        }
        self.cr_output_unchecked(sigma_star)
    }

    pub(crate) fn cr_output_unchecked(
        &self,
        sigma: &DensityOperator,
    ) -> Result<DensityOperator> {
        let joint = self.cr_input.matrix().tensor(sigma.matrix());
        let evolved = self.unitary.matrix().conjugate_with(&joint);
        let reduced = evolved.partial_trace(&[self.d_cr, self.d_ctc], &[0])?;
        DensityOperator::clamped(reduced, DEFAULT_TOL)
    }

    /// One-shot evolution: the maximum-entropy fixed point and the resulting
    /// CR output.
    pub fn evolve(&self, tol: f64) -> Result<(DensityOperator, DensityOperator)> {
        let sigma = self.max_entropy_fixed_point(tol)?;
        let out = self.cr_output(&sigma, tol.max(KERNEL_SINGULAR_THRESHOLD))?;
        Ok((sigma, out))
    }
}

/// Affine parametrization of all density-operator solutions of the Deutsch
/// condition for a given (U, ρ_CR).
#[derive(Clone, Debug)]
pub struct FixedPointSet {
    particular: DensityOperator,
    basis: Vec<ComplexMatrix>,
    dim_kernel: usize,
}

impl FixedPointSet {
    pub fn particular(&self) -> &DensityOperator {
        &self.particular
    }

    /// Pairwise HS-orthonormal traceless Hermitian kernel directions.
    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn dim_kernel(&self) -> usize {
        self.dim_kernel
    }

    /// particular + Σ tᵢ·basisᵢ. The result is Hermitian and unit trace but
    /// only a valid state when it stays inside the PSD cone.
    pub fn member(&self, coeffs: &[f64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.dim_kernel {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.dim_kernel,
                coeffs.len()
            )));
        }
        let mut m = self.particular.matrix().clone();
        for (t, b) in coeffs.iter().zip(&self.basis) {
            m = m.add(&b.scale_re(*t));
        }
        Ok(m)
    }

    /// Largest PSD member in the direction of `coeffs`, found by bisection;
    /// handy for sampling the set.
    pub fn member_state(&self, coeffs: &[f64], tol: f64) -> Result<DensityOperator> {
        let m = self.member(coeffs)?;
        if min_eigenvalue(&m)? >= -tol {
            return DensityOperator::clamped(m, tol.max(DEFAULT_TOL));
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let scaled: Vec<f64> = coeffs.iter().map(|c| c * mid).collect();
            if min_eigenvalue(&self.member(&scaled)?)? >= -tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let scaled: Vec<f64> = coeffs.iter().map(|c| c * lo).collect();
        DensityOperator::clamped(self.member(&scaled)?, tol.max(DEFAULT_TOL))
    }
}

/// ε-close Deutsch model: the CTC final state may deviate from the initial
/// one by at most ε in the PSD-pair sense.
#[derive(Clone, Debug)]
pub struct EpsilonModel {
    epsilon: f64,
    rho_i: DensityOperator,
}

impl EpsilonModel {
    pub fn new(epsilon: f64, rho_i: DensityOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Precondition(format!(
                "epsilon must lie in [0,1], got {epsilon}"
            )));
        }
        Ok(Self { epsilon, rho_i })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho_i(&self) -> &DensityOperator {
        &self.rho_i
    }

    /// ρ_CTC^f = (1−ε) ρ_CTC^i + ε ρ.
    pub fn final_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.rho_i.dim() {
            return Err(Error::DimensionMismatch(format!(
                "teleported state dim {} but CTC dim {}",
                rho.dim(),
                self.rho_i.dim()
            )));
        }
        let m = self
            .rho_i
            .matrix()
            .scale_re(1.0 - self.epsilon)
            .add(&rho.matrix().scale_re(self.epsilon));
        DensityOperator::clamped(m, DEFAULT_TOL)
    }
}

/// True iff both ρ_f − (1−ε)ρ_i and (1+ε)ρ_i − ρ_f are positive
/// semidefinite at `tol`.
pub fn epsilon_close(
    rho_i: &DensityOperator,
    rho_f: &DensityOperator,
    epsilon: f64,
    tol: f64,
) -> Result<bool> {
    if rho_i.dim() != rho_f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "epsilon_close between dim {} and dim {}",
            rho_i.dim(),
            rho_f.dim()
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in [0,1], got {epsilon}"
        )));
    }
    let lower = rho_f
        .matrix()
        .sub(&rho_i.matrix().scale_re(1.0 - epsilon));
    let upper = rho_i
        .matrix()
        .scale_re(1.0 + epsilon)
        .sub(rho_f.matrix());
    Ok(is_psd(&lower, tol)? && is_psd(&upper, tol)?)
}

/// The approximate teleportation condition 2ρ_i ≥ ρ.
pub fn approx_teleport_condition(
    rho_i: &DensityOperator,
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    if rho_i.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "approx_teleport_condition between dim {} and dim {}",
            rho_i.dim(),
            rho.dim()
        )));
    }
    is_psd(&rho_i.matrix().scale_re(2.0).sub(rho.matrix()), tol)
}

/// Trace distance between the evolution of a mixture and the mixture of
/// evolutions. A strictly positive value certifies that the CR output is a
/// nonlinear function of the CR input.
pub fn nonlinearity_witness(
    u: &UnitaryOperator,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    p: f64,
    tol: f64,
) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::Precondition(format!(
            "mixing weight must lie strictly inside (0,1), got {p}"
        )));
    }
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "mixture of dim {} and dim {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let mixed = DensityOperator::clamped(
        rho1.matrix()
            .scale_re(p)
            .add(&rho2.matrix().scale_re(1.0 - p)),
        DEFAULT_TOL,
    )?;
    let (_, out_mixed) = DeutschMap::new(u.clone(), mixed, tol)?.evolve(tol)?;
    let (_, out1) = DeutschMap::new(u.clone(), rho1.clone(), tol)?.evolve(tol)?;
    let (_, out2) = DeutschMap::new(u.clone(), rho2.clone(), tol)?.evolve(tol)?;
    let blended = DensityOperator::clamped(
        out1.matrix()
            .scale_re(p)
            .add(&out2.matrix().scale_re(1.0 - p)),
        DEFAULT_TOL,
    )?;
    trace_distance(&out_mixed, &blended)
}

// ---------------------------------------------------------------------------
// Hermitian operator basis and real-coordinate helpers

/// Orthonormal Hermitian basis of d×d matrices under the Hilbert-Schmidt
/// inner product: I/√d first, then the generalized Gell-Mann matrices.
pub(crate) fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    basis.push(ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt()));
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym.set(i, j, C64::new(inv_sqrt2, 0.0));
            sym.set(j, i, C64::new(inv_sqrt2, 0.0));
            basis.push(sym);
            let mut asym = ComplexMatrix::zeros(d, d);
            asym.set(i, j, C64::new(0.0, -inv_sqrt2));
            asym.set(j, i, C64::new(0.0, inv_sqrt2));
            basis.push(asym);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for k in 0..l {
            diag.set(k, k, C64::new(norm, 0.0));
        }
        diag.set(l, l, C64::new(-(l as f64) * norm, 0.0));
        basis.push(diag);
    }
    basis
}

fn coords(basis: &[ComplexMatrix], m: &ComplexMatrix) -> Vec<f64> {
    basis.iter().map(|b| b.hilbert_schmidt(m).re).collect()
}

fn from_coords(basis: &[ComplexMatrix], c: &[f64]) -> ComplexMatrix {
    let d = basis[0].rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for (x, b) in c.iter().zip(basis) {
        if *x != 0.0 {
            out = out.add(&b.scale_re(*x));
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(m.hermitian_eigenvalues(1e-6)?[0])
}

/// Entropy maximum for a qubit fixed set: entropy strictly decreases in the
/// Bloch radius, so the maximizer is the minimum-norm point of the fixed
/// affine set, which always lies inside the ball.
fn bloch_least_norm(set: &FixedPointSet) -> Result<DensityOperator> {
    use crate::qmath::{pauli_x, pauli_y, pauli_z};
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let b0: Vec<f64> = paulis
        .iter()
        .map(|p| set.particular().matrix().hilbert_schmidt(p).re)
        .collect();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for b in set.basis() {
        let mut v: Vec<f64> = paulis.iter().map(|p| b.hilbert_schmidt(p).re).collect();
        for u in &dirs {
            let p = dot(u, &v);
            axpy(&mut v, -p, u);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-10 {
            for x in &mut v {
                *x /= norm;
            }
            dirs.push(v);
        }
    }
    let mut least = b0.clone();
    for u in &dirs {
        let p = dot(u, &b0);
        axpy(&mut least, -p, u);
    }
    crate::qmath::BlochVector::new(least[0], least[1], least[2]).to_density(DEFAULT_TOL)
}

/// Projected gradient ascent of S(σ) over the fixed affine set. The entropy
/// gradient is −(log₂σ + I/ln2); steps are halved on PSD violation and the
/// run stops when the projected gradient norm falls below 1e−9 or progress
/// stagnates at a boundary maximizer.
fn ascend_entropy(set: &FixedPointSet) -> Result<DensityOperator> {
    const GRAD_TOL: f64 = 1e-9;
    const EIG_FLOOR: f64 = 1e-18;
    let d = set.particular().dim();
    let basis = hermitian_basis(d);
    let dirs: Vec<Vec<f64>> = set.basis().iter().map(|b| coords(&basis, b)).collect();

    let entropy_of = |m: &ComplexMatrix| -> Result<f64> {
        let vals = m.hermitian_eigenvalues(1e-7)?;
        Ok(vals
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| -v * v.log2())
            .sum())
    };

    let mut sigma = set.particular().matrix().clone();
    let mut entropy = entropy_of(&sigma)?;
    let mut step = 0.25;
    let mut stagnant = 0usize;
    for _ in 0..20_000 {
        let (vals, vecs) = sigma.hermitian_eigen(1e-7)?;
        let grad_vals: Vec<f64> = vals
            .iter()
            .map(|&v| -(v.max(EIG_FLOOR).log2() + std::f64::consts::LOG2_E))
            .collect();
        let grad = from_spectrum(&grad_vals, &vecs);
        let gc = coords(&basis, &grad);
        let mut projected = vec![0.0; basis.len()];
        for u in &dirs {
            let p = dot(u, &gc);
            axpy(&mut projected, p, u);
        }
        let gnorm = dot(&projected, &projected).sqrt();
        if gnorm <= GRAD_TOL {
            break;
        }
        let direction = from_coords(&basis, &projected);

        let mut advanced = false;
        while step > 1e-14 {
            let trial = sigma.add(&direction.scale_re(step / gnorm.max(1.0)));
            if min_eigenvalue(&trial)? < -1e-12 {
                step *= 0.5;
                continue;
            }
            let trial_entropy = entropy_of(&trial)?;
            if trial_entropy + 1e-15 < entropy {
                step *= 0.5;
                continue;
            }
            if (trial_entropy - entropy).abs() < 1e-15 {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
            sigma = trial;
            entropy = trial_entropy;
            step = (step * 1.5).min(0.5);
            advanced = true;
            break;
        }
        if !advanced || stagnant > 50 {
            break;
        }
    }
    DensityOperator::clamped(sigma, 1e-7)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{
        fidelity_to_pure, haar_pure_state, haar_unitary, random_density, seeded_rng,
        von_neumann_entropy, BellState, BlochVector,
    };
    use rand::Rng;

    fn swap_map(cr: DensityOperator) -> DeutschMap {
        let dim = cr.dim();
        DeutschMap::new(UnitaryOperator::swap(dim), cr, 1e-9).unwrap()
    }

    fn cnot_plus_map() -> DeutschMap {
        let plus = PureState::from_bloch_angles(std::f64::consts::FRAC_PI_2, 0.0).projector();
        DeutschMap::new(UnitaryOperator::cnot(), plus, 1e-9).unwrap()
    }

    #[test]
    fn apply_swap_is_constant_on_cr_input() {
        let plus = PureState::from_bloch_angles(std::f64::consts::FRAC_PI_2, 0.0);
        let map = swap_map(plus.projector());
        let out = map.apply(&PureState::basis(2, 0).projector()).unwrap();
        assert!(out.approx_eq(&plus.projector(), 1e-12));
    }

    #[test]
    fn apply_identity_is_identity() {
        let mut rng = seeded_rng(1);
        let cr = random_density(2, &mut rng);
        let sigma = random_density(2, &mut rng);
        let map = DeutschMap::new(UnitaryOperator::identity(4), cr, 1e-9).unwrap();
        assert!(map.apply(&sigma).unwrap().approx_eq(&sigma, 1e-12));
    }

    #[test]
    fn apply_cnot_dephases_target() {
        let map = cnot_plus_map();
        let out = map.apply(&PureState::basis(2, 0).projector()).unwrap();
        // ½σ + ½XσX on |0><0| is I/2
        assert!(out.approx_eq(&DensityOperator::maximally_mixed(2), 1e-12));
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let map = cnot_plus_map();
        assert!(map.apply(&DensityOperator::maximally_mixed(3)).is_err());
    }

    #[test]
    fn apply_preserves_trace_and_positivity() {
        let mut rng = seeded_rng(42);
        for d_ctc in [2usize, 3, 4] {
            for _ in 0..34 {
                let cr = random_density(2, &mut rng);
                let u = haar_unitary(2 * d_ctc, &mut rng);
                let sigma = random_density(d_ctc, &mut rng);
                let map = DeutschMap::new(u, cr, 1e-9).unwrap();
                let out = map.apply(&sigma).unwrap();
                assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
                assert!(is_psd(out.matrix(), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn liouville_identity_map() {
        let map = DeutschMap::new(
            UnitaryOperator::identity(4),
            DensityOperator::maximally_mixed(2),
            1e-9,
        )
        .unwrap();
        let l = map.liouville_matrix();
        assert!(l.approx_eq(&ComplexMatrix::identity(4), 1e-12));
    }

    #[test]
    fn liouville_swap_is_constant_map() {
        // L vec(σ) = tr(σ) vec(ρ)
        let mut rng = seeded_rng(7);
        let rho = random_density(2, &mut rng);
        let map = swap_map(rho.clone());
        let l = map.liouville_matrix();
        let sigma = random_density(2, &mut rng);
        let mut vec_sigma = vec![C64::new(0.0, 0.0); 4];
        for j in 0..2 {
            for i in 0..2 {
                vec_sigma[j * 2 + i] = sigma.matrix().get(i, j);
            }
        }
        for r in 0..4 {
            let lhs: C64 = (0..4).map(|c| l.get(r, c) * vec_sigma[c]).sum();
            let (i, j) = (r % 2, r / 2);
            let rhs = rho.matrix().get(i, j); // tr(σ) = 1
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn liouville_matches_apply_on_random_states() {
        let mut rng = seeded_rng(13);
        let cr = random_density(2, &mut rng);
        let u = haar_unitary(4, &mut rng);
        let map = DeutschMap::new(u, cr, 1e-9).unwrap();
        let l = map.liouville_matrix();
        for _ in 0..20 {
            let sigma = random_density(2, &mut rng);
            let image = map.apply_raw(sigma.matrix());
            let mut vec_sigma = vec![C64::new(0.0, 0.0); 4];
            for j in 0..2 {
                for i in 0..2 {
                    vec_sigma[j * 2 + i] = sigma.matrix().get(i, j);
                }
            }
            for r in 0..4 {
                let lhs: C64 = (0..4).map(|c| l.get(r, c) * vec_sigma[c]).sum();
                let (i, j) = (r % 2, r / 2);
                assert!((lhs - image.get(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fixed_point_swap_is_cr_input() {
        let mut rng = seeded_rng(3);
        let psi = haar_pure_state(2, &mut rng);
        let map = swap_map(psi.projector());
        let set = map.fixed_point_set(1e-9).unwrap();
        assert_eq!(set.dim_kernel(), 0);
        assert!(set.particular().approx_eq(&psi.projector(), 1e-9));
    }

    #[test]
    fn fixed_point_identity_map_is_everything() {
        let map = DeutschMap::new(
            UnitaryOperator::identity(4),
            DensityOperator::maximally_mixed(2),
            1e-9,
        )
        .unwrap();
        let set = map.fixed_point_set(1e-9).unwrap();
        assert_eq!(set.dim_kernel(), 3);
        assert!(set
            .particular()
            .approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
    }

    #[test]
    fn fixed_point_cnot_is_x_diagonal_family() {
        let map = cnot_plus_map();
        let set = map.fixed_point_set(1e-9).unwrap();
        assert_eq!(set.dim_kernel(), 1);
        // the family a|+><+| + (1-a)|-><-| corresponds to Bloch (x, 0, 0)
        let b = BlochVector::from_density(set.particular()).unwrap();
        assert!(b.y.abs() < 1e-9 && b.z.abs() < 1e-9);
        // the kernel direction is X/√2 up to sign
        let x_dir = crate::qmath::pauli_x().scale_re(std::f64::consts::FRAC_1_SQRT_2);
        let d = set.basis()[0].max_abs_diff(&x_dir).min(
            set.basis()[0].scale_re(-1.0).max_abs_diff(&x_dir),
        );
        assert!(d < 1e-9, "kernel direction deviates by {d}");
    }

    #[test]
    fn fixed_point_family_members_are_fixed() {
        let mut rng = seeded_rng(17);
        let map = cnot_plus_map();
        let set = map.fixed_point_set(1e-9).unwrap();
        for _ in 0..10 {
            let coeffs: Vec<f64> = (0..set.dim_kernel())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let member = set.member_state(&coeffs, 1e-9).unwrap();
            assert!(map.residual(&member).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn max_entropy_identity_qubit() {
        let map = DeutschMap::new(
            UnitaryOperator::identity(4),
            DensityOperator::maximally_mixed(2),
            1e-9,
        )
        .unwrap();
        let sigma = map.max_entropy_fixed_point(1e-9).unwrap();
        assert!(sigma.approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
        assert!((von_neumann_entropy(&sigma) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn max_entropy_swap_returns_unique_point() {
        let mut rng = seeded_rng(23);
        let psi = haar_pure_state(2, &mut rng);
        let map = swap_map(psi.projector());
        let sigma = map.max_entropy_fixed_point(1e-9).unwrap();
        assert!(sigma.approx_eq(&psi.projector(), 1e-9));
        assert!(von_neumann_entropy(&sigma) < 1e-7);
    }

    #[test]
    fn max_entropy_cnot_is_maximally_mixed() {
        let sigma = cnot_plus_map().max_entropy_fixed_point(1e-9).unwrap();
        assert!(sigma.approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
    }

    #[test]
    fn ascent_matches_bloch_oracle_on_degenerate_sets() {
        let mut rng = seeded_rng(31);
        for _ in 0..20 {
            let map = controlled_phase_map(&mut rng);
            let closed = map.max_entropy_fixed_point(1e-9).unwrap();
            let ascent = map.max_entropy_by_ascent(1e-9).unwrap();
            let d = trace_distance(&closed, &ascent).unwrap();
            assert!(d <= 1e-6, "oracle disagreement {d}");
        }
    }

    #[test]
    fn max_entropy_beats_random_members() {
        let mut rng = seeded_rng(37);
        let map = controlled_phase_map(&mut rng);
        let set = map.fixed_point_set(1e-9).unwrap();
        let best = map.max_entropy_fixed_point(1e-9).unwrap();
        let s_best = von_neumann_entropy(&best);
        for _ in 0..50 {
            let coeffs: Vec<f64> = (0..set.dim_kernel())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let member = set.member_state(&coeffs, 1e-9).unwrap();
            assert!(s_best >= von_neumann_entropy(&member) - 1e-7);
        }
    }

    #[test]
    fn qutrit_boundary_supported_maximizer() {
        // dephase {0,1}, dump level 2 into 0: fixed states are diag(a, 1-a, 0),
        // entropy peaks at diag(1/2, 1/2, 0)
        let mut k0 = ComplexMatrix::zeros(3, 3);
        k0.set(0, 0, C64::new(1.0, 0.0));
        let mut k1 = ComplexMatrix::zeros(3, 3);
        k1.set(1, 1, C64::new(1.0, 0.0));
        let mut k2 = ComplexMatrix::zeros(3, 3);
        k2.set(0, 2, C64::new(1.0, 0.0));
        let map = DeutschMap::from_kraus(&[k0, k1, k2], 1e-9).unwrap();
        let set = map.fixed_point_set(1e-9).unwrap();
        assert_eq!(set.dim_kernel(), 1);
        let sigma = map.max_entropy_fixed_point(1e-9).unwrap();
        let expected = DensityOperator::new(
            ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.0]),
            1e-9,
        )
        .unwrap();
        assert!(
            trace_distance(&sigma, &expected).unwrap() < 1e-6,
            "got {:?}",
            sigma.matrix()
        );
        assert!((von_neumann_entropy(&sigma) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cesaro_iteration_cross_checks_solver() {
        // plain Cesàro averaging must converge to a fixed point of the same set
        let mut rng = seeded_rng(41);
        let map = controlled_phase_map(&mut rng);
        let mut sigma = ComplexMatrix::identity(2).scale_re(0.5);
        let mut acc = ComplexMatrix::zeros(2, 2);
        let n = 4000;
        for _ in 0..n {
            acc = acc.add(&sigma);
            sigma = map.apply_raw(&sigma);
        }
        let mean = DensityOperator::clamped(acc.scale_re(1.0 / n as f64), 1e-3).unwrap();
        assert!(map.residual(&mean).unwrap() < 1e-3);
        let set = map.fixed_point_set(1e-9).unwrap();
        // the Cesàro limit lies in the affine family of the solver
        let diff = mean.matrix().sub(set.particular().matrix());
        let mut residual = diff.clone();
        for b in set.basis() {
            let overlap = b.hilbert_schmidt(&diff).re;
            residual = residual.sub(&b.scale_re(overlap));
        }
        assert!(residual.frobenius_norm() < 1e-3);
    }

    #[test]
    fn cr_output_swap_reproduces_popping_up() {
        let mut rng = seeded_rng(43);
        let psi = haar_pure_state(2, &mut rng);
        let map = swap_map(psi.projector());
        let out = map.cr_output(&psi.projector(), 1e-9).unwrap();
        assert!(out.approx_eq(&psi.projector(), 1e-10));
    }

    #[test]
    fn cr_output_identity_keeps_input() {
        let mut rng = seeded_rng(47);
        let cr = random_density(2, &mut rng);
        let map = DeutschMap::new(UnitaryOperator::identity(4), cr.clone(), 1e-9).unwrap();
        let out = map
            .cr_output(&DensityOperator::maximally_mixed(2), 1e-9)
            .unwrap();
        assert!(out.approx_eq(&cr, 1e-10));
    }

    #[test]
    fn cr_output_cnot_dephases_control() {
        // phase kickback: CNOT with the CTC in I/2 fully dephases a |+> control
        let map = cnot_plus_map();
        let out = map
            .cr_output(&DensityOperator::maximally_mixed(2), 1e-9)
            .unwrap();
        assert!(out.approx_eq(&DensityOperator::maximally_mixed(2), 1e-10));
    }

    #[test]
    fn cr_output_rejects_inconsistent_state() {
        let map = swap_map(PureState::basis(2, 0).projector());
        let err = map.cr_output(&PureState::basis(2, 1).projector(), 1e-9);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn evolve_swap_and_identity() {
        let zero = PureState::basis(2, 0).projector();
        let (sigma, out) = swap_map(zero.clone()).evolve(1e-9).unwrap();
        assert!(sigma.approx_eq(&zero, 1e-9));
        assert!(out.approx_eq(&zero, 1e-9));

        let mut rng = seeded_rng(53);
        let cr = random_density(2, &mut rng);
        let map = DeutschMap::new(UnitaryOperator::identity(4), cr.clone(), 1e-9).unwrap();
        let (sigma, out) = map.evolve(1e-9).unwrap();
        assert!(sigma.approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
        assert!(out.approx_eq(&cr, 1e-9));
    }

    #[test]
    fn evolve_cnot_outputs_maximally_mixed_pair() {
        let (sigma, out) = cnot_plus_map().evolve(1e-9).unwrap();
        assert!(sigma.approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
        assert!(out.approx_eq(&DensityOperator::maximally_mixed(2), 1e-9));
    }

    #[test]
    fn epsilon_close_examples() {
        let mut rng = seeded_rng(59);
        let rho = random_density(2, &mut rng);
        assert!(epsilon_close(&rho, &rho, 0.0, 1e-9).unwrap());

        for _ in 0..10 {
            let psi = haar_pure_state(2, &mut rng);
            let eps = rng.gen_range(0.0..=1.0);
            let model = EpsilonModel::new(eps, DensityOperator::maximally_mixed(2)).unwrap();
            let rho_f = model.final_state(&psi.projector()).unwrap();
            assert!(epsilon_close(model.rho_i(), &rho_f, eps, 1e-9).unwrap());
        }

        let zero = PureState::basis(2, 0).projector();
        let one = PureState::basis(2, 1).projector();
        assert!(!epsilon_close(&zero, &one, 0.5, 1e-9).unwrap());
    }

    #[test]
    fn epsilon_close_zero_recovers_exact_condition() {
        let mut rng = seeded_rng(61);
        let rho_i = random_density(2, &mut rng);
        let rho_f = random_density(2, &mut rng);
        let close = epsilon_close(&rho_i, &rho_f, 0.0, 1e-9).unwrap();
        let equal = trace_distance(&rho_i, &rho_f).unwrap() <= 1e-9;
        assert_eq!(close, equal);
        assert!(epsilon_close(&rho_i, &rho_i, 0.0, 1e-9).unwrap());
    }

    #[test]
    fn approx_teleport_condition_examples() {
        let mut rng = seeded_rng(67);
        let mixed = DensityOperator::maximally_mixed(2);
        for _ in 0..5 {
            let psi = haar_pure_state(2, &mut rng);
            assert!(approx_teleport_condition(&mixed, &psi.projector(), 1e-9).unwrap());
        }
        let zero = PureState::basis(2, 0).projector();
        let one = PureState::basis(2, 1).projector();
        assert!(!approx_teleport_condition(&zero, &one, 1e-9).unwrap());
        let rho = random_density(2, &mut rng);
        assert!(approx_teleport_condition(&rho, &rho, 1e-9).unwrap());
    }

    #[test]
    fn epsilon_final_state_endpoints() {
        let mut rng = seeded_rng(71);
        let rho_i = random_density(2, &mut rng);
        let rho = random_density(2, &mut rng);
        let at0 = EpsilonModel::new(0.0, rho_i.clone())
            .unwrap()
            .final_state(&rho)
            .unwrap();
        assert!(at0.approx_eq(&rho_i, 1e-12));
        let at1 = EpsilonModel::new(1.0, rho_i.clone())
            .unwrap()
            .final_state(&rho)
            .unwrap();
        assert!(at1.approx_eq(&rho, 1e-12));

        let model = EpsilonModel::new(0.5, DensityOperator::maximally_mixed(2)).unwrap();
        let out = model
            .final_state(&PureState::basis(2, 0).projector())
            .unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        assert!(out.matrix().approx_eq(&expected, 1e-12));
    }

    #[test]
    fn epsilon_fidelity_monotone_in_epsilon() {
        let mut rng = seeded_rng(73);
        let psi = haar_pure_state(2, &mut rng);
        let rho_i = random_density(2, &mut rng);
        let mut last = -1.0;
        for k in 0..=10 {
            let eps = k as f64 / 10.0;
            let model = EpsilonModel::new(eps, rho_i.clone()).unwrap();
            let f = fidelity_to_pure(&psi, &model.final_state(&psi.projector()).unwrap()).unwrap();
            assert!(f >= last - 1e-12);
            last = f;
        }
    }

    #[test]
    fn nonlinearity_witness_vanishes_for_identity_and_swap() {
        let zero = PureState::basis(2, 0).projector();
        let one = PureState::basis(2, 1).projector();
        let w_id =
            nonlinearity_witness(&UnitaryOperator::identity(4), &zero, &one, 0.5, 1e-9).unwrap();
        assert!(w_id <= 1e-10, "identity witness {w_id}");
        let w_swap =
            nonlinearity_witness(&UnitaryOperator::swap(2), &zero, &one, 0.5, 1e-9).unwrap();
        assert!(w_swap <= 1e-10, "swap witness {w_swap}");
    }

    #[test]
    fn nonlinear_unitaries_exist() {
        // random interactions generically make the CR output nonlinear
        let mut rng = seeded_rng(79);
        let zero = PureState::basis(2, 0).projector();
        let one = PureState::basis(2, 1).projector();
        let mut best = 0.0f64;
        for _ in 0..40 {
            let u = haar_unitary(4, &mut rng);
            let w = nonlinearity_witness(&u, &zero, &one, 0.5, 1e-9).unwrap();
            best = best.max(w);
        }
        assert!(best > 0.01, "best witness over 40 draws: {best}");
    }

    #[test]
    fn from_kraus_reproduces_channel() {
        // dephasing channel via projectors
        let mut p0 = ComplexMatrix::zeros(2, 2);
        p0.set(0, 0, C64::new(1.0, 0.0));
        let mut p1 = ComplexMatrix::zeros(2, 2);
        p1.set(1, 1, C64::new(1.0, 0.0));
        let map = DeutschMap::from_kraus(&[p0.clone(), p1.clone()], 1e-9).unwrap();
        let mut rng = seeded_rng(83);
        let sigma = random_density(2, &mut rng);
        let expected = DensityOperator::clamped(
            p0.conjugate_with(sigma.matrix())
                .add(&p1.conjugate_with(sigma.matrix())),
            1e-9,
        )
        .unwrap();
        assert!(map.apply(&sigma).unwrap().approx_eq(&expected, 1e-10));
    }

    #[test]
    fn bell_shared_state_has_mixed_marginal() {
        let bell = BellState::PhiPlus.state().projector();
        let marginal = bell.partial_trace(&[2, 2], &[1]).unwrap();
        assert!(marginal.approx_eq(&DensityOperator::maximally_mixed(2), 1e-12));
    }

    /// Random qubit Deutsch map with a guaranteed degenerate fixed set:
    /// a CR-controlled pair of commuting unitaries, diagonal in a common
    /// random basis, with the off-diagonal contraction bounded away from 1.
    pub(crate) fn controlled_phase_map(rng: &mut impl Rng) -> DeutschMap {
        loop {
            let w = haar_unitary(2, rng);
            let phases: Vec<f64> = (0..4)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            let p = rng.gen_range(0.2..0.8);
            let delta0 = phases[0] - phases[1];
            let delta1 = phases[2] - phases[3];
            let c = C64::from_polar(p, delta0) + C64::from_polar(1.0 - p, delta1);
            if c.norm() > 0.95 {
                continue;
            }
            let diag = |a: f64, b: f64| {
                let mut m = ComplexMatrix::zeros(2, 2);
                m.set(0, 0, C64::from_polar(1.0, a));
                m.set(1, 1, C64::from_polar(1.0, b));
                m
            };
            let v0 = w
                .matrix()
                .matmul(&diag(phases[0], phases[1]))
                .matmul(&w.matrix().dagger());
            let v1 = w
                .matrix()
                .matmul(&diag(phases[2], phases[3]))
                .matmul(&w.matrix().dagger());
            let mut u = ComplexMatrix::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    u.set(i, j, v0.get(i, j));
                    u.set(2 + i, 2 + j, v1.get(i, j));
                }
            }
            let cr = DensityOperator::clamped(
                ComplexMatrix::from_real_diagonal(&[p, 1.0 - p]),
                1e-9,
            )
            .unwrap();
            let map =
                DeutschMap::new(UnitaryOperator::new(u, 1e-9).unwrap(), cr, 1e-9).unwrap();
            if map.fixed_point_set(1e-9).unwrap().dim_kernel() == 1 {
                return map;
            }
        }
    }
}
