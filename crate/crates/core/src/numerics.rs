//! Dense complex linear algebra for 2×2 and 4×4 Hermitian matrices.
//!
//! Two-qubit states use the basis order |00⟩, |01⟩, |10⟩, |11⟩ with the
//! first (Alice, `A`) qubit as the slow index and the accelerated detector
//! (`R`) as the fast index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum `|M_ij - conj(M_ji)|` accepted as Hermitian.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Maximum `|tr(rho) - 1|` accepted for a density matrix.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues down to `-PSD_TOLERANCE` are treated as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Jacobi iteration stops once the off-diagonal Frobenius mass drops below this.
pub const JACOBI_OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;

const JACOBI_MAX_SWEEPS: usize = 64;
const MAX_DIM: usize = 4;

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; MAX_DIM * MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self {
            dim,
            data: [C64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from a list of rows; the row count fixes the dimension.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let mut m = Self::zeros(rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m.dim {
                return Err(Error::DimensionMismatch {
                    expected: m.dim,
                    found: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for z in m.data.iter_mut() {
            *z = z.conj();
        }
        m
    }

    /// Keeps the diagonal and zeroes everything else.
    pub fn diagonal_part(&self) -> Self {
        let mut m = Self::zeros(self.dim).expect("dimension already validated");
        for i in 0..self.dim {
            m[(i, i)] = self[(i, i)];
        }
        m
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for z in m.data.iter_mut() {
            *z *= s;
        }
        m
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim * other.dim));
        }
        let mut m = Self::zeros(4)?;
        for (i, j, k, l) in kron_indices() {
            m[(2 * i + k, 2 * j + l)] = self[(i, j)] * other[(k, l)];
        }
        Ok(m)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-major iterator over the `dim × dim` entries.
    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        self.data[..self.dim * self.dim].iter().copied()
    }

    /// Worst Hermiticity violation as `(row, col, deviation)` with `row <= col`.
    pub fn hermiticity_defect(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let (row, col, deviation) = self.hermiticity_defect();
        // `!(x <= tol)` also rejects NaN.
        if !(deviation <= HERMITICITY_TOLERANCE) {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
            });
        }
        Ok(())
    }

    /// Checks Hermiticity, unit trace and positivity; returns the spectrum.
    pub fn validate_density(&self) -> Result<HermitianSpectrum> {
        self.ensure_hermitian()?;
        let tr = self.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOLERANCE && tr.im.abs() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} differs from 1 by more than {TRACE_TOLERANCE:e}"
            )));
        }
        let spectrum = hermitian_eigenvalues(self)?;
        let min = spectrum.min();
        if min < -PSD_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "eigenvalue {min:e} below -{PSD_TOLERANCE:e}"
            )));
        }
        Ok(spectrum)
    }
}

fn kron_indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| (n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        assert!(row < self.dim && col < self.dim, "index out of range");
        &self.data[row * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut C64 {
        assert!(row < self.dim && col < self.dim, "index out of range");
        &mut self.data[row * self.dim + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n).expect("valid dimension");
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Real spectrum of a Hermitian matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl HermitianSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Eigenvalues together with the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub spectrum: HermitianSpectrum,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    hermitian_eigen(m).map(|e| e.spectrum)
}

/// Cyclic complex Jacobi diagonalisation.
///
/// Each rotation first rephases the pivot entry `a_pq = r e^{iφ}` to the real
/// number `r`, then applies the classical real Jacobi rotation that zeroes it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.ensure_hermitian()?;
    let n = m.dim();
    let mut a = *m;
    // Symmetrise so that round-off in the input does not drift the iteration.
    for i in 0..n {
        a[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n)?;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&a) < JACOBI_OFF_DIAGONAL_TOLERANCE {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        // Large-norm inputs bottom out at round-off relative to their scale.
        let residual = off_diagonal_mass(&a);
        if !(residual < JACOBI_OFF_DIAGONAL_TOLERANCE * a.frobenius_norm().max(1.0)) {
            return Err(Error::NoConvergence {
                iterations: JACOBI_MAX_SWEEPS,
                best: residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen {
        spectrum: HermitianSpectrum { eigenvalues },
        vectors,
    })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Entries `[u_pp, u_pq, u_qp, u_qq]` of the unitary that diagonalises the
/// Hermitian block `[[app, apq], [conj(apq), aqq]]` as `U† A U`.
fn jacobi_unitary(app: f64, aqq: f64, apq: C64) -> [C64; 4] {
    let r = apq.norm();
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // Rephase the pivot to the real number r, then apply the real rotation.
    [phase * c, phase * s, C64::new(-s, 0.0), C64::new(c, 0.0)]
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq.norm() == 0.0 {
        return;
    }
    let [u_pp, u_pq, u_qp, u_qq] = jacobi_unitary(a[(p, p)].re, a[(q, q)].re, apq);
    let n = a.dim();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Singular values of a square matrix, descending, by one-sided Jacobi.
///
/// Columns are orthogonalised pairwise, so small singular values keep an
/// absolute accuracy near `ε‖M‖` instead of the `√ε‖M‖` obtained by taking
/// square roots of the eigenvalues of `M†M`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut x = *m;
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    // Columns below the rounding level of the whole matrix are noise;
    // rotating them against each other cannot make progress.
    let negligible = (f64::EPSILON * scale).powi(2);
    let mut worst = f64::INFINITY;
    for _ in 0..JACOBI_MAX_SWEEPS {
        worst = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut a, mut b, mut c) = (0.0, 0.0, C64::new(0.0, 0.0));
                for k in 0..n {
                    a += x[(k, p)].norm_sqr();
                    b += x[(k, q)].norm_sqr();
                    c += x[(k, p)].conj() * x[(k, q)];
                }
                if a.min(b) <= negligible {
                    continue;
                }
                let ratio = c.norm() / (a * b).sqrt();
                if ratio <= f64::EPSILON {
                    continue;
                }
                worst = worst.max(ratio);
                let [u_pp, u_pq, u_qp, u_qq] = jacobi_unitary(a, b, c);
                for k in 0..n {
                    let xp = x[(k, p)];
                    let xq = x[(k, q)];
                    x[(k, p)] = xp * u_pp + xq * u_qp;
                    x[(k, q)] = xp * u_pq + xq * u_qq;
                }
            }
        }
        if worst == 0.0 {
            break;
        }
    }
    if worst > 0.0 {
        return Err(Error::NoConvergence {
            iterations: JACOBI_MAX_SWEEPS,
            best: worst,
        });
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| x[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Schatten 1-norm `Σ|λ_i|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum())
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
/// Entries in `[-PSD_TOLERANCE, 0)` are clamped to zero.
pub fn shannon_entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .map(|&x| if x > 0.0 { -x * x.log2() } else { 0.0 })
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spectrum = rho.validate_density()?;
    let s = shannon_entropy_bits(&spectrum.eigenvalues);
    Ok(s.clamp(0.0, (rho.dim() as f64).log2()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    /// Alice's inertial detector; the slow index.
    A,
    /// Rob's accelerated detector; the fast index.
    R,
}

/// Reduced state of one detector from a two-detector density matrix.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    rho.validate_density()?;
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match keep {
                    Subsystem::A => rho[(2 * i + k, 2 * j + k)],
                    Subsystem::R => rho[(2 * k + i, 2 * k + j)],
                })
                .sum();
        }
    }
    Ok(out)
}
