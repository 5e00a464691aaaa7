//! Self-contained complex dense linear algebra for 2x2 and 4x4 Hermitian
//! problems: eigendecomposition, partial trace, Schmidt decomposition and
//! gauge alignment.
//!
//! Everything here is sized for the two-spin problem. The eigensolver is a
//! cyclic Jacobi iteration with complex (phase + rotation) plane updates;
//! at dimension <= 4 robustness matters far more than speed, and Jacobi
//! converges to machine precision without ever forming a characteristic
//! polynomial.
//!
//! Composite basis order is frozen as `{|eg>, |ee>, |gg>, |ge>}` with the
//! first letter naming subsystem 1 and `e` the upper level. Single-spin
//! bases are `{|e>, |g>}`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[cfg_attr(test, allow(unused_imports))] // test builds see std f64 inherents
use num_traits::Float;

use crate::error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// Sweep cap for the Jacobi iteration.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal convergence threshold, relative to the Frobenius norm.
const JACOBI_REL_TOL: f64 = 1e-14;
/// Residual / orthonormality gate on every returned eigensystem.
const EIGEN_GATE: f64 = 1e-10;
/// Default overlap-magnitude threshold below which gauge alignment fails.
pub const DEFAULT_ALIGN_THRESHOLD: f64 = 1e-6;

/// Composite index for (subsystem-1 level, subsystem-2 level), 0 = e, 1 = g,
/// in the frozen basis order `{|eg>, |ee>, |gg>, |ge>}`.
const BASIS_IDX: [[usize; 2]; 2] = [[1, 0], [3, 2]];

/// Which subsystem survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    One,
    Two,
}

fn check_finite(z: C64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite entry {z}")))
    }
}

/// A normalized ket of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Normalizes `amps` to unit norm. Errors on dimensions other than
    /// 2 or 4, non-finite entries, or an (effectively) zero vector.
    pub fn normalize(amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 2 && amps.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: amps.len() });
        }
        for &z in &amps {
            check_finite(z)?;
        }
        let norm = vec_norm(&amps);
        if norm < 1e-300 {
            return Err(Error::InvalidInput(String::from("cannot normalize zero vector")));
        }
        let inv = 1.0 / norm;
        Ok(Self { amps: amps.into_iter().map(|z| z * inv).collect() })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    /// The state multiplied by a unit phase factor.
    pub fn with_phase(&self, phase: C64) -> Self {
        Self { amps: self.amps.iter().map(|z| z * phase).collect() }
    }
}

pub(crate) fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A Hermitian matrix of dimension 2 or 4, stored row-major.
///
/// Hermiticity is enforced at construction by symmetrization, so
/// `entry(i, j) == entry(j, i).conj()` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl HermitianMatrix {
    /// Builds from row-major entries, symmetrizing `(m + m^dagger)/2`.
    pub fn from_entries(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: dim });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        for &z in entries {
            check_finite(z)?;
        }
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(entries[i * dim + i].re, 0.0);
            for j in (i + 1)..dim {
                let h = 0.5 * (entries[i * dim + j] + entries[j * dim + i].conj());
                data[i * dim + j] = h;
                data[j * dim + i] = h.conj();
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// Raw amplitudes of `M |psi>` (generally not normalized).
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<C64>> {
        self.apply_raw(psi.amplitudes())
    }

    pub(crate) fn apply_raw(&self, amps: &[C64]) -> Result<Vec<C64>> {
        if amps.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: amps.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += self.data[i * self.dim + j] * amps[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Expectation value `<psi|M|psi>` (real by Hermiticity).
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let m_psi = self.apply(psi)?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(m_psi.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim {
            s.push('[');
            for j in 0..self.dim {
                let z = self.entry(i, j);
                s.push_str(&format!("{:+.6e}{:+.6e}i ", z.re, z.im));
            }
            s.push(']');
        }
        s
    }
}

/// A 2x2 reduced density matrix: Hermitian, unit trace, positive
/// semidefinite (eigenvalues >= -1e-12 tolerated as rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: HermitianMatrix,
}

impl DensityMatrix {
    pub fn from_matrix(m: HermitianMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: m.dim() });
        }
        let tr = m.trace();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("density matrix trace {tr} != 1")));
        }
        // closed-form 2x2 eigenvalues for the PSD check
        let (lo, _) = eig2_values(&m);
        if lo < -1e-12 {
            return Err(Error::InvalidInput(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(Self { m })
    }

    /// `|psi><psi|` for a 2-dimensional state.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        if psi.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: psi.dim() });
        }
        let a = psi.amplitudes();
        let entries = [
            a[0] * a[0].conj(),
            a[0] * a[1].conj(),
            a[1] * a[0].conj(),
            a[1] * a[1].conj(),
        ];
        Self::from_matrix(HermitianMatrix::from_entries(2, &entries)?)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m.entry(i, j)
    }

    /// Purity `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.m.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues as `(smaller, larger)`, closed form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        eig2_values(&self.m)
    }
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
fn eig2_values(m: &HermitianMatrix) -> (f64, f64) {
    let a = m.entry(0, 0).re;
    let d = m.entry(1, 1).re;
    let b = m.entry(0, 1).norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mid - rad, mid + rad)
}

/// Energies (ascending) with orthonormal eigenvectors in matching order.
///
/// Every constructed eigensystem already passed the residual and
/// orthonormality gates (1e-10).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    energies: Vec<f64>,
    vectors: Vec<StateVector>,
}

impl EigenSystem {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Index of the eigenpair whose energy is closest to `target`.
    pub fn closest_to(&self, target: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &e) in self.energies.iter().enumerate() {
            let d = (e - target).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Deterministic for identical input: fixed sweep order, and each
/// eigenvector is gauged so its largest-magnitude component is real
/// positive. Errors if the off-diagonal norm has not dropped below
/// `1e-14 * ||M||_F` after 100 sweeps.
pub fn hermitian_eig(m: &HermitianMatrix) -> Result<EigenSystem> {
    let n = m.dim();
    let mut a = m.data.clone();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let fro = m.frobenius_norm();
    let tol = JACOBI_REL_TOL * fro;

    let mut converged = fro == 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a, n) > tol {
        return Err(Error::EigenNonConvergence {
            dim: n,
            off_diagonal: off_diagonal_norm(&a, n),
            matrix: m.render(),
        });
    }

    // sort ascending, carrying columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap_or(core::cmp::Ordering::Equal)
    });

    let mut energies = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        energies.push(a[k * n + k].re);
        let mut col: Vec<C64> = (0..n).map(|r| v[r * n + k]).collect();
        fix_gauge(&mut col);
        vectors.push(StateVector::normalize(col)?);
    }

    let sys = EigenSystem { energies, vectors };
    validate_eigensystem(m, &sys)?;
    Ok(sys)
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
fn jacobi_rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    // phase factor makes the pivot real; then a real rotation kills it
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J[p][p] = c, J[p][q] = s, J[q][p] = -s e^{-i alpha}, J[q][q] = c e^{-i alpha}
    let sp = s * phase; // s e^{+i alpha}
    let spc = sp.conj();

    // columns: A <- A J
    for r in 0..n {
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = c * arp - spc * arq;
        a[r * n + q] = s * arp + (c * phase.conj()) * arq;
    }
    // rows: A <- J^dagger A
    for col in 0..n {
        let apc = a[p * n + col];
        let aqc = a[q * n + col];
        a[p * n + col] = c * apc - sp * aqc;
        a[q * n + col] = s * apc + (c * phase) * aqc;
    }
    // pin the rotated pair to exact Hermitian form
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);

    // eigenvector accumulation: V <- V J
    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = c * vrp - spc * vrq;
        v[r * n + q] = s * vrp + (c * phase.conj()) * vrq;
    }
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Multiplies by the unit phase making the largest-magnitude component real
/// positive (first index wins ties), for reproducible output.
fn fix_gauge(col: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in col.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let phase = col[best].conj() / best_mag;
    for z in col.iter_mut() {
        *z *= phase;
    }
}

fn validate_eigensystem(m: &HermitianMatrix, sys: &EigenSystem) -> Result<()> {
    let n = sys.dim();
    for k in 0..n {
        let psi = &sys.vectors[k];
        let m_psi = m.apply(psi)?;
        let mut res = 0.0;
        for (i, z) in m_psi.iter().enumerate() {
            res += (z - sys.energies[k] * psi.amplitudes()[i]).norm_sqr();
        }
        let res = res.sqrt();
        if res > EIGEN_GATE {
            return Err(Error::ResidualCheck { residual: res, tolerance: EIGEN_GATE });
        }
        for l in 0..n {
            let o = sys.vectors[k].inner(&sys.vectors[l]).norm();
            let target = if k == l { 1.0 } else { 0.0 };
            if (o - target).abs() > EIGEN_GATE {
                return Err(Error::ResidualCheck { residual: (o - target).abs(), tolerance: EIGEN_GATE });
            }
        }
    }
    Ok(())
}

/// Traces out one subsystem of a normalized 4-dimensional pure state.
pub fn partial_trace(psi: &StateVector, keep: Subsystem) -> Result<DensityMatrix> {
    if psi.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: psi.dim() });
    }
    let a = psi.amplitudes();
    let mut entries = [C64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for o in 0..2 {
                let (ki, kj) = match keep {
                    Subsystem::One => (BASIS_IDX[i][o], BASIS_IDX[j][o]),
                    Subsystem::Two => (BASIS_IDX[o][i], BASIS_IDX[o][j]),
                };
                acc += a[ki] * a[kj].conj();
            }
            entries[i * 2 + j] = acc;
        }
    }
    DensityMatrix::from_matrix(HermitianMatrix::from_entries(2, &entries)?)
}

/// Partial trace of a 4x4 unit-trace Hermitian operator (index
/// contraction over the discarded subsystem).
pub fn partial_trace_operator(rho: &HermitianMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let mut entries = [C64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for o in 0..2 {
                let (ki, kj) = match keep {
                    Subsystem::One => (BASIS_IDX[i][o], BASIS_IDX[j][o]),
                    Subsystem::Two => (BASIS_IDX[o][i], BASIS_IDX[o][j]),
                };
                acc += rho.entry(ki, kj);
            }
            entries[i * 2 + j] = acc;
        }
    }
    DensityMatrix::from_matrix(HermitianMatrix::from_entries(2, &entries)?)
}

/// Schmidt decomposition of a normalized 4-dimensional pure state:
/// `|psi> = sum_i sqrt(p_i) |e_i>_1 (x) |E_i>_2` with `p_1 >= p_2`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: [f64; 2],
    pub basis1: [StateVector; 2],
    pub basis2: [StateVector; 2],
}

pub fn schmidt_decompose(psi: &StateVector) -> Result<SchmidtDecomposition> {
    let rho1 = partial_trace(psi, Subsystem::One)?;
    let sys = hermitian_eig(rho1.matrix())?;
    // descending: p1 >= p2
    let p = [sys.energies()[1].max(0.0), sys.energies()[0].max(0.0)];
    let e = [sys.vectors()[1].clone(), sys.vectors()[0].clone()];

    let amps = psi.amplitudes();
    let mut basis2 = Vec::with_capacity(2);
    for ek in e.iter() {
        // contraction <e_k|psi> over subsystem 1 leaves the partner state;
        // the first weight is >= 1/2, so only the second can vanish
        let mut partner = [C64::new(0.0, 0.0); 2];
        for s2 in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for s1 in 0..2 {
                acc += ek.amplitudes()[s1].conj() * amps[BASIS_IDX[s1][s2]];
            }
            partner[s2] = acc;
        }
        let nrm = vec_norm(&partner);
        if nrm > 1e-15 {
            basis2.push(StateVector::normalize(partner.to_vec())?);
        } else {
            // zero Schmidt weight: any unit vector orthogonal to the first
            let first = &basis2[0];
            let orth = vec![first.amplitudes()[1].conj(), -first.amplitudes()[0].conj()];
            basis2.push(StateVector::normalize(orth)?);
        }
    }

    Ok(SchmidtDecomposition {
        coefficients: p,
        basis1: [e[0].clone(), e[1].clone()],
        basis2: [basis2[0].clone(), basis2[1].clone()],
    })
}

impl SchmidtDecomposition {
    /// Rebuilds the composite state `sum_i sqrt(p_i) |e_i>|E_i>`.
    pub fn reconstruct(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); 4];
        for k in 0..2 {
            let w = self.coefficients[k].max(0.0).sqrt();
            for s1 in 0..2 {
                for s2 in 0..2 {
                    out[BASIS_IDX[s1][s2]] +=
                        w * self.basis1[k].amplitudes()[s1] * self.basis2[k].amplitudes()[s2];
                }
            }
        }
        out
    }
}

/// Rephases `candidate` so `<reference|result>` is real and positive.
pub fn phase_align(reference: &StateVector, candidate: &StateVector) -> Result<StateVector> {
    phase_align_with_threshold(reference, candidate, DEFAULT_ALIGN_THRESHOLD)
}

/// As [`phase_align`] with an explicit overlap-magnitude threshold.
pub fn phase_align_with_threshold(
    reference: &StateVector,
    candidate: &StateVector,
    threshold: f64,
) -> Result<StateVector> {
    if reference.dim() != candidate.dim() {
        return Err(Error::DimensionMismatch { expected: reference.dim(), got: candidate.dim() });
    }
    let o = reference.inner(candidate);
    let mag = o.norm();
    if mag <= threshold {
        return Err(Error::GaugeTracking { overlap: mag, threshold });
    }
    Ok(candidate.with_phase(o.conj() / mag))
}
