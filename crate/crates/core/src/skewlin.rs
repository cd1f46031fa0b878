//! Orthogonal and skew-symmetric matrices, the canonical block form of a skew
//! matrix, and the exponential/logarithm pair between 𝔰𝔬(n) and SO(n).
//!
//! Conventions used throughout:
//!
//! * A canonical skew form stores a rotor basis `R = [u₁ w₁ u₂ w₂ … (z)]` and
//!   angles `αᵢ` with `A = R·D(α)·Rᵀ`, where each 2×2 block of `D` is
//!   `[[0, αᵢ], [−αᵢ, 0]]` on the pair `(uᵢ, wᵢ)`. For odd `n` the last column
//!   `z` spans the 1×1 zero block.
//! * Rotation planes of an orthogonal matrix are stored as `(u, v, θ)` with
//!   `R u = cos θ·u + sin θ·v`, i.e. generator `J = v uᵀ − u vᵀ`.

use std::f64::consts::{PI, SQRT_2, TAU};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::Config;
use crate::error::{Error, Result};

/// Entries below this are treated as exact zeros when deflating tiny angles.
const ZERO_ABS: f64 = 1e-13;

/// Max-norm of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// A validated element of SO(n).
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialOrthogonalMatrix {
    m: DMatrix<f64>,
}

impl SpecialOrthogonalMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn new(m: DMatrix<f64>, cfg: &Config) -> Result<Self> {
        validate_so(m, cfg)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: &self.m * &other.m,
        }
    }

    /// Max-norm distance between two rotations.
    pub fn distance(&self, other: &Self) -> f64 {
        max_abs(&(&self.m - &other.m))
    }

    /// Block-diagonal embedding `self ⊕ I` into SO(n).
    pub fn embed(&self, n: usize) -> Self {
        let k = self.dim();
        assert!(n >= k);
        let mut m = DMatrix::identity(n, n);
        m.view_mut((0, 0), (k, k)).copy_from(&self.m);
        Self { m }
    }
}

/// Validates a square real matrix as an element of SO(n).
pub fn validate_so(m: DMatrix<f64>, cfg: &Config) -> Result<SpecialOrthogonalMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidInput(format!(
            "matrix is {}×{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() < 2 {
        return Err(Error::InvalidInput("SO(n) requires n ≥ 2".into()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.nrows();
    let residual = max_abs(&(m.transpose() * &m - DMatrix::<f64>::identity(n, n)));
    if residual > cfg.tol_orth {
        return Err(Error::NotOrthogonal { residual });
    }
    let det = m.determinant();
    if (det - 1.0).abs() > cfg.tol_det {
        if det < 0.0 {
            return Err(Error::NegativeDeterminant { det });
        }
        return Err(Error::NotOrthogonal {
            residual: (det - 1.0).abs(),
        });
    }
    Ok(SpecialOrthogonalMatrix { m })
}

/// An element of 𝔰𝔬(n), stored as its strict upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSymmetricMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl SkewSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    /// Takes the skew part `(M − Mᵀ)/2` of a square matrix.
    pub fn from_skew_part(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "skew part of a non-square matrix");
        let n = m.nrows();
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                s.upper[Self::index(n, i, j)] = 0.5 * (m[(i, j)] - m[(j, i)]);
            }
        }
        s
    }

    /// Accepts `m` only if `‖m + mᵀ‖_max ≤ tol`.
    pub fn try_from_matrix(m: &DMatrix<f64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidInput("skew matrix must be square".into()));
        }
        let asym = max_abs(&(m + m.transpose()));
        if asym > tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not skew-symmetric (|A + Aᵀ| = {asym:.3e})"
            )));
        }
        Ok(Self::from_skew_part(m))
    }

    /// Generator of the rotation carrying `e_i` toward `e_j`.
    pub fn generator(n: usize, i: usize, j: usize) -> Self {
        assert!(i != j && i < n && j < n);
        let mut s = Self::zeros(n);
        s.set(j, i, 1.0);
        s
    }

    fn index(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[Self::index(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.upper[Self::index(self.n, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Sets `A[i][j] = x` and `A[j][i] = −x`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[Self::index(self.n, i, j)] = x,
            std::cmp::Ordering::Greater => self.upper[Self::index(self.n, j, i)] = -x,
            std::cmp::Ordering::Equal => assert!(x == 0.0, "diagonal of a skew matrix is zero"),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            upper: self.upper.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.upper
            .iter()
            .zip(&other.upper)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// `Q A Qᵀ`.
    pub fn conjugate(&self, q: &DMatrix<f64>) -> Self {
        Self::from_skew_part(&(q * self.to_matrix() * q.transpose()))
    }

    /// Block-diagonal embedding `A ⊕ 0` into 𝔰𝔬(n).
    pub fn embed(&self, n: usize) -> Self {
        assert!(n >= self.n);
        let mut s = Self::zeros(n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                s.set(i, j, self.get(i, j));
            }
        }
        s
    }
}

/// Plane/angle decomposition `A = R·D(α)·Rᵀ` of a skew matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalSkewForm {
    pub rotor_basis: SpecialOrthogonalMatrix,
    /// ⌊n/2⌋ angles in descending order. All are nonnegative except that, for
    /// even `n` with no zero angle and negative Pfaffian, the smallest one is
    /// negated so the basis keeps determinant +1.
    pub angles: Vec<f64>,
    pub has_zero_block: bool,
}

impl CanonicalSkewForm {
    pub fn dim(&self) -> usize {
        self.rotor_basis.dim()
    }

    /// The block matrix `D(α)`.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut d = DMatrix::zeros(n, n);
        for (i, &a) in self.angles.iter().enumerate() {
            d[(2 * i, 2 * i + 1)] = a;
            d[(2 * i + 1, 2 * i)] = -a;
        }
        d
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let r = self.rotor_basis.as_matrix();
        r * self.block_matrix() * r.transpose()
    }

    /// Max-norm reconstruction residual against `a`.
    pub fn residual(&self, a: &SkewSymmetricMatrix) -> f64 {
        max_abs(&(self.reconstruct() - a.to_matrix()))
    }
}

#[derive(Clone, Debug)]
struct SkewPlane {
    u: DVector<f64>,
    w: DVector<f64>,
    alpha: f64,
}

fn orient_first_positive(v: &mut DVector<f64>) {
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-8) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
}

/// Removes components along `basis` (twice, for stability).
fn orthogonalize(x: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(x);
            x.axpy(-c, b, 1.0);
        }
    }
}

/// Orthonormal vectors completing `used` within the column span of `span`
/// (or the whole space when `span` is `None`), picked from projected
/// standard basis vectors in index order.
fn complete_basis(
    n: usize,
    span: Option<&DMatrix<f64>>,
    used: &[DVector<f64>],
    count: usize,
) -> Vec<DVector<f64>> {
    let mut all: Vec<DVector<f64>> = used.to_vec();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let remaining = (count - out.len()) as f64;
        let threshold = 0.5 * remaining / n as f64;
        let mut picked = None;
        for i in 0..n {
            let mut x = match span {
                Some(u) => u * u.row(i).transpose(),
                None => {
                    let mut e = DVector::zeros(n);
                    e[i] = 1.0;
                    e
                }
            };
            orthogonalize(&mut x, &all);
            if x.norm_squared() >= threshold {
                picked = Some(x);
                break;
            }
        }
        let Some(mut x) = picked else { break };
        x.normalize_mut();
        orient_first_positive(&mut x);
        all.push(x.clone());
        out.push(x);
    }
    out
}

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix.
///
/// nalgebra's symmetric QR is fast on small matrices but can leave residuals
/// near 1e-8 on tight eigenvalue clusters, which the canonical form cannot
/// absorb; such results are recomputed with faer.
fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    if let Some(eig) = nalgebra::SymmetricEigen::try_new(m.clone(), 1e-15, 10_000) {
        let residual = max_abs(
            &(m * &eig.eigenvectors - &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues)),
        );
        if residual <= 1e-13 * scale {
            return Ok((eig.eigenvalues, eig.eigenvectors));
        }
    }
    let f = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = f.selfadjoint_eigendecomposition(faer::Side::Lower);
    let (s, u) = (eig.s().column_vector(), eig.u());
    let values = DVector::from_fn(n, |i, _| s.read(i));
    let vectors = DMatrix::from_fn(n, n, |i, j| u.read(i, j));
    if !values.iter().chain(vectors.iter()).all(|x| x.is_finite()) {
        return Err(Error::NumericalFailure(
            "symmetric eigensolve produced non-finite values".into(),
        ));
    }
    Ok((values, vectors))
}

/// Planes and kernel of a skew matrix, in the matrix's own coordinates.
fn canonical_planes(a: &DMatrix<f64>) -> Result<(Vec<SkewPlane>, Vec<DVector<f64>>)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if n < 2 || max_abs(a) <= ZERO_ABS {
        return Ok((Vec::new(), complete_basis(n, None, &[], n)));
    }
    // iA is Hermitian with eigenpairs ±α, (u ∓ i w)/√2; working with it
    // avoids squaring the conditioning as −A² would. Its real form
    // [[0, −A], [A, 0]] holds each eigenpair twice, as x + iy ↦ [x; y].
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, n), (n, n)).copy_from(&(-a));
    m.view_mut((n, 0), (n, n)).copy_from(a);
    let (values, vectors) = symmetric_eigen(&m)?;
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let alpha_max = values[order[0]].max(0.0);
    let small = 1e-2 * alpha_max;

    let mut used: Vec<DVector<f64>> = Vec::new();
    let mut planes = Vec::new();
    for &i in &order {
        if values[i] <= small {
            break;
        }
        if used.len() + 2 > n {
            break;
        }
        let mut u: DVector<f64> = vectors.column(i).rows(0, n) * SQRT_2;
        orthogonalize(&mut u, &used);
        let un = u.norm();
        if un < 0.5 {
            continue;
        }
        u /= un;
        let au = a * &u;
        let alpha = au.norm();
        if alpha <= ZERO_ABS {
            continue;
        }
        let mut w = -au / alpha;
        let mut against = used.clone();
        against.push(u.clone());
        orthogonalize(&mut w, &against);
        w.normalize_mut();
        // The solver's phase is arbitrary; fix u inside the plane by index order.
        let plane = DMatrix::from_columns(&[u.clone(), w.clone()]);
        if let Some(v) = complete_basis(n, Some(&plane), &[], 1).pop() {
            u = v;
            w = -(a * &u) / alpha;
            orthogonalize(&mut w, &used);
            orthogonalize(&mut w, std::slice::from_ref(&u));
            w.normalize_mut();
        }
        used.push(u.clone());
        used.push(w.clone());
        planes.push(SkewPlane { u, w, alpha });
    }

    let rest = complete_basis(n, None, &used, n - used.len());
    let mut kernel = Vec::new();
    if rest.len() >= 2 {
        let v = DMatrix::from_columns(&rest);
        let sub = v.transpose() * a * &v;
        let sub = (&sub - sub.transpose()) * 0.5;
        let (sub_planes, sub_kernel) = canonical_planes(&sub)?;
        for p in sub_planes {
            let mut u = &v * p.u;
            let mut w = &v * p.w;
            u.normalize_mut();
            w.normalize_mut();
            planes.push(SkewPlane {
                u,
                w,
                alpha: p.alpha,
            });
        }
        kernel.extend(sub_kernel.into_iter().map(|k| (&v * k).normalize()));
    } else {
        kernel = rest;
    }
    Ok((planes, kernel))
}

/// Canonical block form of a skew matrix.
///
/// Eigendecomposes the Hermitian `iA` (through its real symmetric form); each
/// plane is `(u, −Au/α)` with `u` read off an eigenvector for `α > 0`. Inside a repeated eigenvalue the planes are
/// chosen by Gram-Schmidt on projected standard basis vectors in index order,
/// with `u` oriented so its first nonzero entry is positive. Angles too small
/// to resolve against the largest one are refined by deflating onto their
/// subspace and repeating.
pub fn skew_canonical_form(a: &SkewSymmetricMatrix) -> Result<CanonicalSkewForm> {
    let n = a.dim();
    let (mut planes, kernel) = canonical_planes(&a.to_matrix())?;
    planes.sort_by(|p, q| q.alpha.total_cmp(&p.alpha));

    let mut zero_vectors = kernel.into_iter();
    let half = n / 2;
    while planes.len() < half {
        let (Some(u), Some(w)) = (zero_vectors.next(), zero_vectors.next()) else {
            return Err(Error::NumericalFailure(
                "canonical form lost track of the kernel".into(),
            ));
        };
        planes.push(SkewPlane { u, w, alpha: 0.0 });
    }
    let z = if n % 2 == 1 {
        zero_vectors.next()
    } else {
        None
    };
    if planes.len() != half || (n % 2 == 1 && z.is_none()) {
        return Err(Error::NumericalFailure(
            "canonical form produced the wrong number of planes".into(),
        ));
    }

    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    for p in &planes {
        cols.push(p.u.clone());
        cols.push(p.w.clone());
    }
    if let Some(z) = z {
        cols.push(z);
    }
    let mut basis = DMatrix::from_columns(&cols);
    let mut angles: Vec<f64> = planes.iter().map(|p| p.alpha).collect();
    if basis.determinant() < 0.0 {
        if n % 2 == 1 {
            basis.column_mut(n - 1).neg_mut();
        } else if let Some(i) = angles.iter().rposition(|&a| a == 0.0) {
            basis.column_mut(2 * i + 1).neg_mut();
        } else {
            let i = half - 1;
            basis.column_mut(2 * i + 1).neg_mut();
            angles[i] = -angles[i];
        }
    }
    Ok(CanonicalSkewForm {
        rotor_basis: SpecialOrthogonalMatrix::from_matrix_unchecked(basis),
        angles,
        has_zero_block: n % 2 == 1,
    })
}

/// Exponential of a skew matrix through its canonical form.
pub fn skew_exp(a: &SkewSymmetricMatrix) -> Result<SpecialOrthogonalMatrix> {
    let form = skew_canonical_form(a)?;
    let r = form.rotor_basis.as_matrix();
    let n = a.dim();
    let mut e = DMatrix::zeros(n, n);
    for (i, &alpha) in form.angles.iter().enumerate() {
        let (s, c) = alpha.sin_cos();
        e[(2 * i, 2 * i)] = c;
        e[(2 * i + 1, 2 * i + 1)] = c;
        e[(2 * i, 2 * i + 1)] = s;
        e[(2 * i + 1, 2 * i)] = -s;
    }
    if form.has_zero_block {
        e[(n - 1, n - 1)] = 1.0;
    }
    Ok(SpecialOrthogonalMatrix::from_matrix_unchecked(
        r * e * r.transpose(),
    ))
}

/// An invariant plane of a rotation: `R u = cos θ·u + sin θ·v`, `θ ∈ [0, π]`.
#[derive(Clone, Debug)]
pub struct RotationPlane {
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub theta: f64,
}

impl RotationPlane {
    /// `v uᵀ − u vᵀ`, the unit generator of this plane.
    pub fn generator(&self) -> DMatrix<f64> {
        &self.v * self.u.transpose() - &self.u * self.v.transpose()
    }
}

/// Real Schur decomposition of an orthogonal matrix into rotation planes and
/// fixed directions.
#[derive(Clone, Debug)]
pub struct RotationDecomposition {
    pub planes: Vec<RotationPlane>,
    pub fixed: Vec<DVector<f64>>,
}

impl RotationDecomposition {
    pub fn reconstruct(&self, n: usize) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(n, n);
        for p in &self.planes {
            let (s, c) = p.theta.sin_cos();
            r += (&p.u * p.u.transpose() + &p.v * p.v.transpose()) * c + p.generator() * s;
        }
        for f in &self.fixed {
            r += f * f.transpose();
        }
        r
    }

    /// Rotation angles in descending order, padded with zeros to ⌊n/2⌋.
    pub fn angles(&self, n: usize) -> Vec<f64> {
        let mut a: Vec<f64> = self.planes.iter().map(|p| p.theta).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        a.resize(n / 2, 0.0);
        a
    }
}

fn random_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    g.qr().q()
}

fn schur_planes(basis: &DMatrix<f64>, t: &DMatrix<f64>) -> Result<RotationDecomposition> {
    let n = t.nrows();
    let mut planes = Vec::new();
    let mut fixed = Vec::new();
    let mut flipped = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (b00, b01, b10, b11) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let q0 = basis.column(i).into_owned();
            let q1 = basis.column(i + 1).into_owned();
            if b00 * b11 - b01 * b10 > 0.0 {
                let theta = (b10 - b01).atan2(b00 + b11);
                if theta >= 0.0 {
                    planes.push(RotationPlane {
                        u: q0,
                        v: q1,
                        theta,
                    });
                } else {
                    planes.push(RotationPlane {
                        u: q0,
                        v: -q1,
                        theta: -theta,
                    });
                }
            } else {
                // reflection block: split into its +1 and −1 directions
                let sym = nalgebra::Matrix2::new(b00, 0.5 * (b01 + b10), 0.5 * (b01 + b10), b11);
                let e = sym.symmetric_eigen();
                for k in 0..2 {
                    let x = &q0 * e.eigenvectors[(0, k)] + &q1 * e.eigenvectors[(1, k)];
                    if e.eigenvalues[k] > 0.0 {
                        fixed.push(x);
                    } else {
                        flipped.push(x);
                    }
                }
            }
            i += 2;
        } else {
            let q = basis.column(i).into_owned();
            if t[(i, i)] > 0.0 {
                fixed.push(q);
            } else {
                flipped.push(q);
            }
            i += 1;
        }
    }
    if flipped.len() % 2 == 1 {
        return Err(Error::NumericalFailure(
            "rotation has an odd number of −1 eigenvalues".into(),
        ));
    }
    for pair in flipped.chunks(2) {
        planes.push(RotationPlane {
            u: pair[0].clone(),
            v: pair[1].clone(),
            theta: PI,
        });
    }
    Ok(RotationDecomposition { planes, fixed })
}

/// Invariant planes and rotation angles of `R ∈ SO(n)` via the real Schur form.
///
/// Francis iterations can stall on highly symmetric orthogonal matrices
/// (cyclic permutations); those retry on a fixed pseudo-random similarity.
pub fn rotation_decomposition(r: &SpecialOrthogonalMatrix) -> Result<RotationDecomposition> {
    let n = r.dim();
    let m = r.as_matrix();
    let bound = 1e-11 * n as f64;
    let mut best: Option<(f64, RotationDecomposition)> = None;
    for attempt in 0..4u64 {
        let (q0, target) = if attempt == 0 {
            (DMatrix::identity(n, n), m.clone())
        } else {
            let q = random_orthogonal(n, 0x5eed_0000 + attempt);
            let t = q.transpose() * m * &q;
            (q, t)
        };
        let Some(schur) = nalgebra::linalg::Schur::try_new(target, 1e-15, 100_000) else {
            continue;
        };
        let (z, t) = schur.unpack();
        let basis = q0 * z;
        let Ok(dec) = schur_planes(&basis, &t) else {
            continue;
        };
        let residual = max_abs(&(dec.reconstruct(n) - m));
        if residual <= bound {
            return Ok(dec);
        }
        if best.as_ref().is_none_or(|(b, _)| residual < *b) {
            best = Some((residual, dec));
        }
    }
    match best {
        Some((residual, dec)) if residual <= 1e-9 => Ok(dec),
        Some((residual, _)) => Err(Error::NumericalFailure(format!(
            "rotation decomposition residual {residual:.3e}"
        ))),
        None => Err(Error::NumericalFailure(
            "real Schur decomposition did not converge".into(),
        )),
    }
}

/// The logarithm with all rotation angles in `[0, π)`.
pub fn principal_log(r: &SpecialOrthogonalMatrix, cfg: &Config) -> Result<SkewSymmetricMatrix> {
    let dec = rotation_decomposition(r)?;
    let n = r.dim();
    let mut x = DMatrix::zeros(n, n);
    for p in &dec.planes {
        if p.theta > PI - cfg.tol_pi {
            return Err(Error::AngleNearPi { angle: p.theta });
        }
        x += p.generator() * p.theta;
    }
    Ok(SkewSymmetricMatrix::from_skew_part(&x))
}

/// Integer nearest to `x`, or an ambiguity error when the runner-up branch is
/// within `tie_tol` radians (`x` measured in turns).
fn round_branch(x: f64, tie_tol: f64, what: &str) -> Result<f64> {
    let m = x.round();
    let d = (x - m).abs();
    if TAU * (1.0 - 2.0 * d) < tie_tol {
        return Err(Error::BranchAmbiguous(format!(
            "{what}: {x:.6} turns is halfway between branches"
        )));
    }
    Ok(m)
}

enum ClassKind {
    Zero,
    Pi,
    Generic(f64),
}

/// The logarithm of `r` closest to `guide` among all branches.
///
/// Rotation planes of `r` are grouped into classes of equal angle. Within a
/// class the guide is projected onto the class subspace; the projected guide
/// fixes the plane split (for degenerate classes) and the integer branch
/// `θ + 2πm` of every plane.
pub fn nearest_log(
    r: &SpecialOrthogonalMatrix,
    guide: &SkewSymmetricMatrix,
    cfg: &Config,
) -> Result<SkewSymmetricMatrix> {
    let n = r.dim();
    if guide.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "guide is {}×{}, rotation is {n}×{n}",
            guide.dim(),
            guide.dim()
        )));
    }
    let dec = rotation_decomposition(r)?;
    let g = guide.to_matrix();

    let mut zero: Vec<&RotationPlane> = Vec::new();
    let mut pi: Vec<&RotationPlane> = Vec::new();
    let mut generic: Vec<&RotationPlane> = Vec::new();
    for p in &dec.planes {
        if p.theta <= cfg.tol_cluster {
            zero.push(p);
        } else if p.theta >= PI - cfg.tol_cluster {
            pi.push(p);
        } else {
            generic.push(p);
        }
    }
    generic.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut classes: Vec<(ClassKind, Vec<&RotationPlane>, Vec<&DVector<f64>>)> = Vec::new();
    if !zero.is_empty() || !dec.fixed.is_empty() {
        classes.push((ClassKind::Zero, zero, dec.fixed.iter().collect()));
    }
    if !pi.is_empty() {
        classes.push((ClassKind::Pi, pi, Vec::new()));
    }
    let mut i = 0;
    while i < generic.len() {
        let mut j = i + 1;
        while j < generic.len() && generic[j].theta - generic[j - 1].theta <= cfg.tol_cluster {
            j += 1;
        }
        let members = generic[i..j].to_vec();
        let theta_c = members.iter().map(|p| p.theta).sum::<f64>() / members.len() as f64;
        classes.push((ClassKind::Generic(theta_c), members, Vec::new()));
        i = j;
    }

    let mut x = DMatrix::zeros(n, n);
    for (kind, planes, fixed) in classes {
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for p in &planes {
            cols.push(p.u.clone());
            cols.push(p.v.clone());
        }
        cols.extend(fixed.into_iter().cloned());
        let d = cols.len();
        let u = DMatrix::from_columns(&cols);
        let ge = u.transpose() * &g * &u;
        let ge = (&ge - ge.transpose()) * 0.5;
        let mut own = DMatrix::zeros(d, d);
        for (k, p) in planes.iter().enumerate() {
            own[(2 * k + 1, 2 * k)] = p.theta;
            own[(2 * k, 2 * k + 1)] = -p.theta;
        }
        let xe = match kind {
            ClassKind::Zero | ClassKind::Pi => {
                let is_pi = matches!(kind, ClassKind::Pi);
                let (gplanes, _) = canonical_planes(&ge)?;
                let mut gplanes = gplanes;
                if is_pi {
                    // −I on the class: every plane, including ones the guide
                    // leaves flat, carries an odd multiple of π
                    let covered: Vec<DVector<f64>> = gplanes
                        .iter()
                        .flat_map(|p| [p.u.clone(), p.w.clone()])
                        .collect();
                    let rest = complete_basis(d, None, &covered, d - covered.len());
                    for pair in rest.chunks(2) {
                        if pair.len() == 2 {
                            gplanes.push(SkewPlane {
                                u: pair[0].clone(),
                                w: pair[1].clone(),
                                alpha: 0.0,
                            });
                        }
                    }
                }
                let mut xe = if is_pi { DMatrix::zeros(d, d) } else { own };
                for p in gplanes {
                    // guide ≈ β (u wᵀ − w uᵀ) = β·J(w→u)
                    let jgen = &p.u * p.w.transpose() - &p.w * p.u.transpose();
                    let phi = if is_pi {
                        PI + TAU
                            * round_branch((p.alpha - PI) / TAU, cfg.tie_tol, "half-turn plane")?
                    } else {
                        TAU * round_branch(p.alpha / TAU, cfg.tie_tol, "identity plane")?
                    };
                    xe += jgen * phi;
                }
                xe
            }
            ClassKind::Generic(theta_c) => {
                let mut j = DMatrix::zeros(d, d);
                for k in 0..d / 2 {
                    j[(2 * k + 1, 2 * k)] = 1.0;
                    j[(2 * k, 2 * k + 1)] = -1.0;
                }
                let gc = (&ge - &j * &ge * &j) * 0.5;
                let h = -(&j * gc);
                let h = (&h + h.transpose()) * 0.5;
                let (values, vectors) = symmetric_eigen(&h)?;
                let mut ms = Vec::with_capacity(d);
                for &hk in values.iter() {
                    ms.push(round_branch(
                        (hk - theta_c) / TAU,
                        cfg.tie_tol,
                        "rotation plane",
                    )?);
                }
                let first = ms[0];
                if ms.iter().all(|&m| m == first) {
                    own + j * (TAU * first)
                } else {
                    let mdiag = DMatrix::from_diagonal(&DVector::from_vec(ms));
                    let shift = &vectors * mdiag * vectors.transpose();
                    own + j * shift * TAU
                }
            }
        };
        x += &u * xe * u.transpose();
    }
    let out = SkewSymmetricMatrix::from_skew_part(&x);
    let residual = skew_exp(&out)?.distance(r);
    if residual > cfg.tol_recon {
        return Err(Error::BranchAmbiguous(format!(
            "plane alignment residual {residual:.3e}"
        )));
    }
    Ok(out)
}
