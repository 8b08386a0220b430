//! Dense linear-algebra substrate.
//!
//! Everything in the crate reduces to a handful of rank-revealing
//! computations on small dense matrices: kernels, ranges, projectors,
//! the Moore–Penrose inverse and spectral norms. All of them go through a
//! single SVD entry point so that rank decisions are made consistently.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Thresholds used for rank decisions and identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative threshold: a singular value counts iff `σ > rank_tol · σ_max`.
    pub rank_tol: f64,
    /// Absolute bound on residuals of operator identities.
    pub identity_tol: f64,
    /// Slack allowed below zero for eigenvalue nonnegativity tests.
    pub psd_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            identity_tol: 1e-9,
            psd_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(rank_tol: f64, identity_tol: f64, psd_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_tol,
            identity_tol,
            psd_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Overrides the identity and PSD tolerances with `tol`, keeping the rank
    /// threshold at least an order of magnitude below it.
    pub fn with_identity(tol: f64) -> Result<Self> {
        let base = Self::default();
        Self::new(base.rank_tol.min(tol * 0.1), tol, tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.rank_tol, self.identity_tol, self.psd_tol];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::Tolerance(format!(
                "all tolerances must be finite and strictly positive, got {self:?}"
            )));
        }
        if self.rank_tol >= 1.0 {
            return Err(Error::Tolerance(format!(
                "rank_tol must be < 1, got {}",
                self.rank_tol
            )));
        }
        Ok(())
    }
}

/// Rejects matrices with NaN or infinite entries, or an empty shape.
pub fn check_finite(m: &Matrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Dimension(format!(
            "matrix must have at least one row and column, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            if !m[(row, col)].is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_square(m: &Matrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Singular values in descending order with the matching singular vectors.
///
/// `right` always holds a complete orthonormal basis of R^cols, so `sigma`
/// has one entry per column; wide inputs get trailing zeros.
pub(crate) struct Svd {
    pub sigma: Vec<f64>,
    pub left: Matrix,
    pub right: Matrix,
    rows: usize,
}

impl Svd {
    pub fn new(m: &Matrix) -> Self {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Self {
                sigma: Vec::new(),
                left: Matrix::zeros(rows, 0),
                right: Matrix::identity(cols, cols),
                rows,
            };
        }
        let work = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)]);
        // nalgebra's bidiagonal SVD loses accuracy on exactly rank-deficient
        // input, so the factorization goes through faer instead.
        let svd = work.svd().expect("SVD of a finite matrix converges");
        let (u, s, v) = (svd.U(), svd.S(), svd.V());
        let k = rows.min(cols);

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

        // Padding: cols − k zero singular values whose right vectors complete
        // the basis of R^cols.
        let mut sigma: Vec<f64> = order.iter().map(|&i| s[i]).collect();
        sigma.resize(cols, 0.0);
        let mut left = Matrix::zeros(rows, sigma.len());
        let mut right = Matrix::zeros(cols, cols);
        for (dst, &src) in order.iter().enumerate() {
            for i in 0..rows {
                left[(i, dst)] = u[(i, src)];
            }
            for i in 0..cols {
                right[(i, dst)] = v[(i, src)];
            }
        }
        for dst in k..cols {
            for i in 0..cols {
                right[(i, dst)] = v[(i, dst)];
            }
        }
        Self {
            sigma,
            left,
            right,
            rows,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `rank_tol · max(σ_max, floor)`.
    pub fn rank(&self, rank_tol: f64, floor: f64) -> usize {
        let threshold = rank_tol * self.sigma_max().max(floor);
        self.sigma.iter().take_while(|&&s| s > threshold).count()
    }

    pub fn range(&self, rank: usize) -> Subspace {
        Subspace {
            basis: self.left.columns(0, rank).into_owned(),
        }
    }

    pub fn kernel(&self, rank: usize) -> Subspace {
        let cols = self.right.nrows();
        Subspace {
            basis: self.right.columns(rank, cols - rank).into_owned(),
        }
    }

    pub fn coimage(&self, rank: usize) -> Subspace {
        Subspace {
            basis: self.right.columns(0, rank).into_owned(),
        }
    }

    /// The genuine singular values, without the zeros introduced by padding.
    pub fn reported(&self) -> Vec<f64> {
        let count = self.rows.min(self.right.nrows());
        self.sigma.iter().copied().take(count).collect()
    }
}

/// A linear subspace of R^n given by an orthonormal basis (n×k, k may be 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Wraps a basis after checking `BᵀB = I` within `identity_tol`.
    pub fn from_orthonormal(basis: Matrix, tol: &Tolerances) -> Result<Self> {
        if basis.nrows() == 0 {
            return Err(Error::Dimension(
                "ambient dimension must be positive".into(),
            ));
        }
        if basis.ncols() > basis.nrows() {
            return Err(Error::Dimension(format!(
                "{} basis vectors cannot be orthonormal in R^{}",
                basis.ncols(),
                basis.nrows()
            )));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("basis contains non-finite entries".into()));
        }
        let gram = basis.transpose() * &basis;
        let residual = operator_norm(&(gram - Matrix::identity(basis.ncols(), basis.ncols())));
        if residual > tol.identity_tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { basis })
    }

    /// Orthonormal basis of the column span of `vectors`, with the rank
    /// decided relative to the largest singular value.
    pub fn span(vectors: &Matrix, tol: &Tolerances) -> Self {
        Self::span_with_floor(vectors, tol.rank_tol, 0.0)
    }

    /// Like [`Subspace::span`] but the rank threshold never drops below
    /// `rank_tol · floor`; used when the columns are known to be O(1) so that
    /// round-off in an all-zero input is not mistaken for rank.
    pub(crate) fn span_with_floor(vectors: &Matrix, rank_tol: f64, floor: f64) -> Self {
        let svd = Svd::new(vectors);
        let rank = svd.rank(rank_tol, floor);
        svd.range(rank)
    }

    /// Caller guarantees orthonormal columns.
    pub(crate) fn from_basis_unchecked(basis: Matrix) -> Self {
        Self { basis }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: Matrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: Matrix::identity(n, n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn into_basis(self) -> Matrix {
        self.basis
    }

    pub fn projector(&self) -> Matrix {
        projector(self)
    }

    pub fn complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Self::full(n);
        }
        let svd = Svd::new(&self.basis.transpose());
        let rank = svd.rank(1e-10, 1.0);
        svd.kernel(rank)
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: &Vector) -> f64 {
        (v - self.projector() * v).norm()
    }

    pub fn contains(&self, v: &Vector, tol: &Tolerances) -> bool {
        self.distance(v) <= tol.identity_tol * v.norm().max(1.0)
    }
}

/// Kernel, range, rank and singular values of a matrix.
#[derive(Debug, Clone)]
pub struct Fundamental {
    pub kernel: Subspace,
    pub range: Subspace,
    /// Orthogonal complement of the kernel (the row space).
    pub coimage: Subspace,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

pub fn factor_fundamental(m: &Matrix, tol: &Tolerances) -> Result<Fundamental> {
    check_finite(m)?;
    tol.validate()?;
    Ok(fundamental_with_floor(m, tol.rank_tol, 0.0))
}

pub(crate) fn fundamental_with_floor(m: &Matrix, rank_tol: f64, floor: f64) -> Fundamental {
    let svd = Svd::new(m);
    let rank = svd.rank(rank_tol, floor);
    Fundamental {
        kernel: svd.kernel(rank),
        range: svd.range(rank),
        coimage: svd.coimage(rank),
        rank,
        singular_values: svd.reported(),
    }
}

/// Orthogonal projector `B·Bᵀ` onto a subspace.
pub fn projector(s: &Subspace) -> Matrix {
    let n = s.ambient_dim();
    if s.dim() == 0 {
        return Matrix::zeros(n, n);
    }
    &s.basis * s.basis.transpose()
}

/// Moore–Penrose inverse via the SVD, validated against the four Penrose
/// equations before it is returned.
pub fn pseudoinverse(m: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    check_finite(m)?;
    tol.validate()?;
    let (rows, cols) = m.shape();
    let svd = Svd::new(m);
    let rank = svd.rank(tol.rank_tol, 0.0);
    let mut pinv = Matrix::zeros(cols, rows);
    for i in 0..rank {
        let v = svd.right.column(i);
        let u = svd.left.column(i);
        pinv += (v * u.transpose()) / svd.sigma[i];
    }

    let bound = tol.identity_tol * svd.sigma_max().max(1.0);
    let r = crate::properties::penrose_residuals(m, &pinv)?;
    let residuals = [r.r1, r.r2, r.r3, r.r4];
    if residuals.iter().any(|&x| x > bound) {
        return Err(Error::Penrose { residuals, bound });
    }
    Ok(pinv)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    Svd::new(m).sigma_max()
}

/// `‖P₁ − P₂‖ ≤ identity_tol`.
pub fn subspace_equal(a: &Subspace, b: &Subspace, tol: &Tolerances) -> Result<bool> {
    Ok(subspace_distance(a, b)? <= tol.identity_tol)
}

/// Spectral norm of the projector difference, i.e. the sine of the largest
/// principal angle (1 when the dimensions differ).
pub fn subspace_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Dimension(format!(
            "subspaces live in R^{} and R^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Ok(operator_norm(&(projector(a) - projector(b))))
}

/// Smallest singular value above the rank threshold.
pub fn smallest_positive_singular(m: &Matrix, tol: &Tolerances) -> Result<f64> {
    let f = factor_fundamental(m, tol)?;
    if f.rank == 0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(f.singular_values[f.rank - 1])
}

pub fn sym_part(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of a symmetric matrix; 0 for the empty matrix.
pub fn min_eigenvalue(sym: &Matrix) -> f64 {
    if sym.nrows() == 0 {
        return 0.0;
    }
    let n = sym.nrows();
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| sym[(i, j)]);
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("symmetric eigensolver converges")
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Dimension("rows have unequal lengths".into()));
    }
    let m = Matrix::from_fn(r, c, |i, j| rows[i][j]);
    check_finite(&m)?;
    Ok(m)
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn close(a: &Matrix, b: &Matrix, eps: f64) -> bool {
        a.shape() == b.shape() && (a - b).abs().max() <= eps
    }

    fn gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::new(1.0, 1e-9, 1e-9).is_err());
        assert!(Tolerances::new(1e-10, 0.0, 1e-9).is_err());
        assert!(Tolerances::new(1e-10, 1e-9, f64::NAN).is_err());
        let t = Tolerances::with_identity(1e-6).unwrap();
        assert_eq!(t.identity_tol, 1e-6);
        assert!(t.rank_tol < t.identity_tol);
    }

    #[test]
    fn non_finite_rejected() {
        let m = dmatrix![1.0, f64::NAN; 0.0, 1.0];
        assert_eq!(
            factor_fundamental(&m, &tol()).unwrap_err(),
            Error::NonFinite { row: 0, col: 1 }
        );
    }

    #[test]
    fn fundamental_of_diag() {
        let f = factor_fundamental(&dmatrix![1.0, 0.0; 0.0, 0.0], &tol()).unwrap();
        assert_eq!(f.rank, 1);
        let t = tol();
        assert!(subspace_equal(
            &f.kernel,
            &Subspace::from_orthonormal(dmatrix![0.0; 1.0], &t).unwrap(),
            &t
        )
        .unwrap());
        assert!(subspace_equal(
            &f.range,
            &Subspace::from_orthonormal(dmatrix![1.0; 0.0], &t).unwrap(),
            &t
        )
        .unwrap());
    }

    #[test]
    fn fundamental_of_id_minus_swap() {
        let m = dmatrix![1.0, -1.0; -1.0, 1.0];
        let f = factor_fundamental(&m, &tol()).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.kernel.dim(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = Subspace::from_orthonormal(dmatrix![s; s], &tol()).unwrap();
        assert!(subspace_equal(&f.kernel, &expected, &tol()).unwrap());
    }

    #[test]
    fn fundamental_rank_by_construction() {
        let m = gaussian(8, 5, 11) * gaussian(5, 8, 12);
        let f = factor_fundamental(&m, &tol()).unwrap();
        assert_eq!(f.rank, 5);
        assert_eq!(f.kernel.dim() + f.rank, 8);
        let sigma_max = f.singular_values[0];
        let k = f.kernel.basis();
        assert!(operator_norm(&(&m * k)) <= 1e-10 * sigma_max * operator_norm(k));
        assert!(close(&(projector(&f.range) * &m), &m, 1e-9));
    }

    #[test]
    fn fundamental_wide_matrix_kernel() {
        let m = gaussian(3, 7, 5);
        let f = factor_fundamental(&m, &tol()).unwrap();
        assert_eq!(f.rank, 3);
        assert_eq!(f.kernel.dim(), 4);
        assert_eq!(f.singular_values.len(), 3);
        assert!(operator_norm(&(&m * f.kernel.basis())) < 1e-12);
    }

    #[test]
    fn projector_examples() {
        assert_eq!(projector(&Subspace::full(2)), identity(2));
        assert_eq!(projector(&Subspace::zero(3)), Matrix::zeros(3, 3));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let line = Subspace::from_orthonormal(dmatrix![s; s], &tol()).unwrap();
        assert!(close(
            &projector(&line),
            &dmatrix![0.5, 0.5; 0.5, 0.5],
            1e-15
        ));
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let err = Subspace::from_orthonormal(dmatrix![1.0; 1.0], &tol()).unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal { .. }));
        assert!(Subspace::from_orthonormal(Matrix::identity(2, 3), &tol()).is_err());
    }

    #[test]
    fn pseudoinverse_examples() {
        let p = pseudoinverse(&dmatrix![2.0, 0.0; 0.0, 0.0], &tol()).unwrap();
        assert!(close(&p, &dmatrix![0.5, 0.0; 0.0, 0.0], 1e-15));

        let m = dmatrix![1.0, -1.0; -1.0, 1.0];
        let p = pseudoinverse(&m, &tol()).unwrap();
        assert!(close(&p, &(dmatrix![1.0, -1.0; -1.0, 1.0] * 0.25), 1e-15));

        let z = Matrix::zeros(3, 3);
        assert_eq!(pseudoinverse(&z, &tol()).unwrap(), z);
    }

    #[test]
    fn pseudoinverse_rectangular() {
        let m = gaussian(4, 6, 3);
        let p = pseudoinverse(&m, &tol()).unwrap();
        assert_eq!(p.shape(), (6, 4));
        assert!(close(&(&m * &p), &identity(4), 1e-12));
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&identity(3)) - 1.0).abs() < 1e-15);
        assert!((operator_norm(&dmatrix![0.3, 0.0; 0.0, -0.9]) - 0.9).abs() < 1e-15);
        // MᵀM = diag(0, 1)
        assert!((operator_norm(&dmatrix![0.0, 1.0; 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subspace_equality_examples() {
        let t = tol();
        let e1 = Subspace::from_orthonormal(dmatrix![1.0; 0.0], &t).unwrap();
        let neg = Subspace::from_orthonormal(dmatrix![-1.0; 0.0], &t).unwrap();
        let e2 = Subspace::from_orthonormal(dmatrix![0.0; 1.0], &t).unwrap();
        assert!(subspace_equal(&e1, &neg, &t).unwrap());
        assert!(!subspace_equal(&e1, &e2, &t).unwrap());
        let both = Subspace::span(&dmatrix![1.0, 1.0; 1.0, -1.0], &t);
        assert!(subspace_equal(&both, &Subspace::full(2), &t).unwrap());
        assert!(subspace_equal(&e1, &Subspace::zero(3), &t).is_err());
    }

    #[test]
    fn smallest_positive_singular_examples() {
        let t = tol();
        let m = dmatrix![1.0, -1.0; -1.0, 1.0];
        assert!((smallest_positive_singular(&m, &t).unwrap() - 2.0).abs() < 1e-14);
        assert!((smallest_positive_singular(&identity(4), &t).unwrap() - 1.0).abs() < 1e-15);
        let d = Matrix::from_diagonal(&dvector![3.0, 0.5, 0.0]);
        assert!((smallest_positive_singular(&d, &t).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            smallest_positive_singular(&Matrix::zeros(2, 2), &t).unwrap_err(),
            Error::ZeroMatrix
        );
    }

    #[test]
    fn complement_and_distance() {
        let t = tol();
        let e1 = Subspace::from_orthonormal(dmatrix![1.0; 0.0; 0.0], &t).unwrap();
        let c = e1.complement();
        assert_eq!(c.dim(), 2);
        assert!(close(
            &(projector(&e1) + projector(&c)),
            &identity(3),
            1e-14
        ));
        assert_eq!(Subspace::zero(2).complement().dim(), 2);
        assert_eq!(Subspace::full(2).complement().dim(), 0);
        assert!((e1.distance(&dvector![3.0, 4.0, 0.0]) - 4.0).abs() < 1e-14);
        assert!(e1.contains(&dvector![-2.0, 0.0, 0.0], &t));
    }

    #[test]
    fn min_eigenvalue_of_symmetric() {
        assert!((min_eigenvalue(&dmatrix![2.0, 1.0; 1.0, 2.0]) - 1.0).abs() < 1e-14);
        assert_eq!(min_eigenvalue(&Matrix::zeros(0, 0)), 0.0);
    }

    #[test]
    fn svd_reconstructs_rank_deficient_input() {
        // exact zero column plus a rank-one remainder
        let m = dmatrix![
            -0.008568, 0.0, -0.028727;
            0.138864, 0.0, 0.465554;
            0.249675, 0.0, 0.837056
        ];
        let svd = Svd::new(&m);
        let sigma = Matrix::from_diagonal(&DVector::from_vec(svd.sigma.clone()));
        let rec = &svd.left * sigma * svd.right.transpose();
        assert!((rec - &m).abs().max() < 1e-14);
        let wide = dmatrix![1.0, 2.0, 3.0; 2.0, 4.0, 6.0];
        let svd = Svd::new(&wide);
        assert_eq!(svd.sigma.len(), 3);
        assert_eq!(svd.rank(1e-10, 0.0), 1);
        assert!((&wide * svd.kernel(1).basis()).abs().max() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn penrose_holds_for_random_low_rank(seed in 0u64..10_000, n in 2usize..9, r in 0usize..9) {
                let r = r.min(n);
                let m = gaussian(n, r, seed) * gaussian(r, n, seed ^ 0xA5A5);
                let m = if r == 0 { Matrix::zeros(n, n) } else { m };
                let p = pseudoinverse(&m, &tol()).unwrap();
                let res = crate::properties::penrose_residuals(&m, &p).unwrap();
                let bound = 1e-9 * operator_norm(&m).max(1.0);
                prop_assert!(res.max() <= bound);
            }

            #[test]
            fn range_projector_fixes_matrix(seed in 0u64..10_000, rows in 1usize..7, cols in 1usize..7) {
                let m = gaussian(rows, cols, seed);
                let f = factor_fundamental(&m, &tol()).unwrap();
                prop_assert!(close(&(projector(&f.range) * &m), &m, 1e-9));
                prop_assert_eq!(f.kernel.dim() + f.rank, cols);
            }

            #[test]
            fn subspace_equal_reflexive_symmetric(seed in 0u64..10_000, n in 1usize..7, k in 0usize..7) {
                let k = k.min(n);
                let t = tol();
                let a = Subspace::span(&gaussian(n, k, seed), &t);
                let b = Subspace::span(&gaussian(n, k, seed + 1), &t);
                prop_assert!(subspace_equal(&a, &a, &t).unwrap());
                prop_assert_eq!(subspace_equal(&a, &b, &t).unwrap(), subspace_equal(&b, &a, &t).unwrap());
            }
        }
    }
}
