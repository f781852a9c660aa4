//! Dense complex matrices, Hermitian eigendecompositions, spectral projections
//! and the Cartesian decomposition `A = A1 + i·A2`.

pub(crate) mod schur;

pub use schur::eigenvalues as general_eigenvalues;

use std::ops::Range;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMIT_TOL: f64 = 1e-12;
/// Default relative threshold below which an eigenvalue counts as zero.
pub const DEFAULT_SPLIT_TOL: f64 = 1e-10;
/// Tolerance on `|t|² - 1` and `|u|² - 1` for direction vectors.
pub const UNIT_TOL: f64 = 1e-12;

/// A square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(CMatrix);

impl ComplexMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::Dimension("matrix must have n >= 1".into()));
        }
        if let Some((idx, _)) = m
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            // column-major storage
            let (i, j) = (idx % m.nrows(), idx / m.nrows());
            return Err(Error::Validation(format!("entry ({i},{j}) is not finite")));
        }
        Ok(Self(m))
    }

    /// Builds an `n×n` matrix from row-major real and imaginary parts.
    pub fn from_row_major(n: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != n * n || im.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for n={n}, got re={} im={}",
                n * n,
                re.len(),
                im.len()
            )));
        }
        let data: Vec<Complex64> = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        Self::new(CMatrix::from_row_slice(n, n, &data))
    }

    /// Real matrix from row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(n, entries, &vec![0.0; entries.len()])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Frobenius norm of `M - M*`.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm()
    }

    /// `‖M − M*‖_F ≤ tol·(1 + ‖M‖_F)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * (1.0 + self.0.norm())
    }

    /// Operator (spectral) norm.
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// Row-major real parts.
    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)].re).collect())
            .collect()
    }

    /// Row-major imaginary parts.
    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)].im).collect())
            .collect()
    }
}

impl AsRef<CMatrix> for ComplexMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

/// The Hermitian pair `(A1, A2)` with `A = A1 + i·A2`.
///
/// `A2 = 0` is allowed: every spectral-scale operation works for self-adjoint
/// `A`, while pencil and face operations reject it through
/// [`CartesianPair::require_nonzero_a2`].
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianPair {
    a1: ComplexMatrix,
    a2: ComplexMatrix,
    a2_is_zero: bool,
}

impl CartesianPair {
    /// Validates both parts as Hermitian within [`HERMIT_TOL`] and stores their
    /// exactly Hermitian parts.
    pub fn new(a1: ComplexMatrix, a2: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(a1, a2, HERMIT_TOL)
    }

    pub fn with_tolerance(a1: ComplexMatrix, a2: ComplexMatrix, hermit_tol: f64) -> Result<Self> {
        if a1.dim() != a2.dim() {
            return Err(Error::Dimension(format!(
                "A1 is {n1}x{n1} but A2 is {n2}x{n2}",
                n1 = a1.dim(),
                n2 = a2.dim()
            )));
        }
        for (name, m) in [("A1", &a1), ("A2", &a2)] {
            if !m.is_hermitian(hermit_tol) {
                return Err(Error::Validation(format!(
                    "{name} is not Hermitian: ‖{name} − {name}*‖ = {:.3e} exceeds {:.1e}·(1 + ‖{name}‖)",
                    m.hermitian_defect(),
                    hermit_tol
                )));
            }
        }
        let a1 = ComplexMatrix(hermitian_part(a1.matrix()));
        let a2 = ComplexMatrix(hermitian_part(a2.matrix()));
        let a2_is_zero = a2.matrix().iter().all(|z| *z == Complex64::new(0.0, 0.0));
        Ok(Self { a1, a2, a2_is_zero })
    }

    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        cartesian_decompose(a)
    }

    pub fn dim(&self) -> usize {
        self.a1.dim()
    }

    pub fn a1(&self) -> &ComplexMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &ComplexMatrix {
        &self.a2
    }

    pub fn a2_is_zero(&self) -> bool {
        self.a2_is_zero
    }

    pub fn require_nonzero_a2(&self) -> Result<()> {
        if self.a2_is_zero {
            Err(Error::ZeroA2)
        } else {
            Ok(())
        }
    }

    /// `A1 + i·A2`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let i = Complex64::new(0.0, 1.0);
        ComplexMatrix(self.a1.matrix() + self.a2.matrix() * i)
    }

    /// `u0·I + u1·A1 + u2·A2`.
    pub fn combination(&self, u: [f64; 3]) -> CMatrix {
        let n = self.dim();
        let mut m = self.a1.matrix() * Complex64::from(u[1]) + self.a2.matrix() * Complex64::from(u[2]);
        for i in 0..n {
            m[(i, i)] += u[0];
        }
        m
    }

    /// `(τ(A1), τ(A2))`, the image of `C = I` in the last two coordinates.
    pub fn traces(&self) -> (f64, f64) {
        (
            normalized_trace(self.a1.matrix()).re,
            normalized_trace(self.a2.matrix()).re,
        )
    }
}

/// A unit vector `t = (t1, t2)` in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction2 {
    t1: f64,
    t2: f64,
}

impl Direction2 {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        let r = t1 * t1 + t2 * t2;
        if !(r.is_finite() && (r - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::Validation(format!(
                "t = ({t1}, {t2}) is not a unit vector (|t|² = {r})"
            )));
        }
        Ok(Self { t1, t2 })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(t1: f64, t2: f64) -> Result<Self> {
        let r = t1.hypot(t2);
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Validation(format!("cannot normalize t = ({t1}, {t2})")));
        }
        Ok(Self { t1: t1 / r, t2: t2 / r })
    }

    pub fn from_angle(theta: f64) -> Self {
        Self { t1: theta.cos(), t2: theta.sin() }
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Representative with `t1 > 0`, or `(0, 1)` when `t1 = 0`.
    /// `A_t` and `A_{−t}` share their kernel.
    pub fn canonical(&self) -> Self {
        if self.t1 < 0.0 || (self.t1 == 0.0 && self.t2 < 0.0) {
            Self { t1: -self.t1, t2: -self.t2 }
        } else {
            *self
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.t1 == 0.0
    }

    /// `θ_t = atan(t2/t1)` in `(−π/2, π/2]` of the canonical representative.
    pub fn theta(&self) -> f64 {
        let c = self.canonical();
        if c.is_vertical() {
            std::f64::consts::FRAC_PI_2
        } else {
            (c.t2 / c.t1).atan()
        }
    }

    /// `tan θ_t`, or `∞` for `t = (0, ±1)`.
    pub fn tan_theta(&self) -> ExtendedReal {
        let c = self.canonical();
        if c.is_vertical() {
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(c.t2 / c.t1)
        }
    }

    /// The direction with `θ_t = atan(r)`, or `(0, 1)` for `r = ∞`.
    pub fn from_tan(r: ExtendedReal) -> Self {
        match r {
            ExtendedReal::Finite(r) => Self::from_angle(r.atan()),
            ExtendedReal::Infinity => Self { t1: 0.0, t2: 1.0 },
        }
    }
}

/// A real number or the point at infinity of the extended line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// `‖M·V − V·diag(values)‖_F`.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let mut vl = self.vectors.clone();
        for (j, &l) in self.values.iter().enumerate() {
            vl.column_mut(j).scale_mut(l);
        }
        (m * &self.vectors - vl).norm()
    }

    /// `‖V*V − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.values.len();
        (self.vectors.adjoint() * &self.vectors - CMatrix::identity(n, n)).norm()
    }
}

/// `(A + A*)/2` and `(A − A*)/(2i)`.
pub fn cartesian_decompose(a: &ComplexMatrix) -> CartesianPair {
    let m = a.matrix();
    let adj = m.adjoint();
    let a1 = (m + &adj) * Complex64::new(0.5, 0.0);
    let a2 = (m - &adj) * Complex64::new(0.0, -0.5);
    let a2_is_zero = a2.iter().all(|z| *z == Complex64::new(0.0, 0.0));
    CartesianPair {
        a1: ComplexMatrix(a1),
        a2: ComplexMatrix(a2),
        a2_is_zero,
    }
}

/// `τ(M) = tr(M)/n`.
pub fn normalized_trace(m: &CMatrix) -> Complex64 {
    m.trace() / m.nrows() as f64
}

/// `t1·A1 + t2·A2`.
pub fn a_t(pair: &CartesianPair, t: Direction2) -> ComplexMatrix {
    ComplexMatrix(pair.combination([0.0, t.t1(), t.t2()]))
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = (m - m.adjoint()).norm();
    if defect > HERMIT_TOL * (1.0 + m.norm()) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: ‖M − M*‖ = {defect:.3e}"
        )));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Equal eigenvalues keep the solver's column order, which is deterministic.
pub fn hermitian_eigs(m: &CMatrix) -> Result<EigenDecomposition> {
    check_hermitian(m)?;
    Ok(hermitian_eigs_unchecked(m))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(hermitian_eigenvalues_unchecked(m))
}

pub(crate) fn hermitian_eigs_unchecked(m: &CMatrix) -> EigenDecomposition {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    EigenDecomposition { values, vectors }
}

pub(crate) fn hermitian_eigenvalues_unchecked(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn sigma_min(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Eigenvalue index ranges of a Hermitian matrix split at `±tol·max(1, ‖M‖)`.
#[derive(Clone, Debug)]
pub struct SpectralPartition {
    pub eig: EigenDecomposition,
    pub scale: f64,
    pub minus: Range<usize>,
    pub zero: Range<usize>,
    pub plus: Range<usize>,
}

impl SpectralPartition {
    pub fn new(m: &CMatrix, tol: f64) -> Result<Self> {
        check_hermitian(m)?;
        if !(tol > 0.0) {
            return Err(Error::Validation(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self::from_eigs(hermitian_eigs_unchecked(m), tol))
    }

    pub(crate) fn from_eigs(eig: EigenDecomposition, tol: f64) -> Self {
        let norm = eig.values.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
        let scale = norm.max(1.0);
        let cut = tol * scale;
        let n = eig.values.len();
        let lo = eig.values.iter().take_while(|&&l| l < -cut).count();
        let hi = n - eig.values.iter().rev().take_while(|&&l| l > cut).count();
        Self {
            eig,
            scale,
            minus: 0..lo,
            zero: lo..hi.max(lo),
            plus: hi.max(lo)..n,
        }
    }

    /// Orthonormal basis of the eigenvectors in `range`.
    pub fn basis(&self, range: Range<usize>) -> CMatrix {
        self.eig.vectors.columns(range.start, range.len()).into_owned()
    }

    pub fn projector(&self, range: Range<usize>) -> CMatrix {
        let v = self.basis(range);
        &v * v.adjoint()
    }
}

/// Orthogonal spectral projections `(P+, P0, P−)`.
#[derive(Clone, Debug)]
pub struct SpectralProjections {
    pub plus: CMatrix,
    pub zero: CMatrix,
    pub minus: CMatrix,
}

/// Projections onto the eigenspaces with `λ > tol·s`, `|λ| ≤ tol·s` and
/// `λ < −tol·s`, where `s = max(1, ‖M‖)`.
pub fn spectral_split(m: &CMatrix, tol: f64) -> Result<SpectralProjections> {
    let part = SpectralPartition::new(m, tol)?;
    Ok(SpectralProjections {
        plus: part.projector(part.plus.clone()),
        zero: part.projector(part.zero.clone()),
        minus: part.projector(part.minus.clone()),
    })
}
