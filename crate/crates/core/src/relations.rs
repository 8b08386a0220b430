//! Linear relations on R^n stored as graph subspaces of R^{2n}.
//!
//! A graph vector is laid out as `(x, u)` with the input block first. The
//! inverse is a block swap, equality is projector comparison and sums are
//! one kernel computation, so every identity between relations can be
//! checked exactly up to round-off.

use crate::error::{Error, Result};
use crate::numlin::{projector, subspace_distance, Matrix, Subspace, Svd, Tolerances, Vector};

/// Graph bases are orthonormal, so their blocks have O(1) entries; rank
/// decisions on them use an absolute floor of this size.
const UNIT_SCALE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRelation {
    n: usize,
    graph: Subspace,
}

/// Value set `Ax` of a relation: empty, or `point + direction` with the
/// point of minimal norm.
#[derive(Debug, Clone, PartialEq)]
pub enum AffineSet {
    Empty,
    Affine { point: Vector, direction: Subspace },
}

impl AffineSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, AffineSet::Empty)
    }

    pub fn point(&self) -> Option<&Vector> {
        match self {
            AffineSet::Empty => None,
            AffineSet::Affine { point, .. } => Some(point),
        }
    }

    pub fn direction(&self) -> Option<&Subspace> {
        match self {
            AffineSet::Empty => None,
            AffineSet::Affine { direction, .. } => Some(direction),
        }
    }

    /// Euclidean distance from `v` to the set; infinite for the empty set.
    pub fn distance(&self, v: &Vector) -> f64 {
        match self {
            AffineSet::Empty => f64::INFINITY,
            AffineSet::Affine { point, direction } => direction.distance(&(v - point)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelationParts {
    pub domain: Subspace,
    pub range: Subspace,
    /// `A0 = {u : (0, u) ∈ gra A}`.
    pub zero_image: Subspace,
}

/// Least-squares machinery for the input block of a graph basis.
struct InputSolve {
    svd: Svd,
    rank: usize,
}

impl InputSolve {
    fn new(x_block: &Matrix, rank_tol: f64) -> Self {
        let svd = Svd::new(x_block);
        let rank = svd.rank(rank_tol, UNIT_SCALE);
        Self { svd, rank }
    }

    /// Minimal-norm coefficients `c` minimizing `‖X c − x‖`.
    fn coefficients(&self, x: &Vector) -> Vector {
        let k = self.svd.right.nrows();
        let mut c = Vector::zeros(k);
        for i in 0..self.rank {
            let coef = self.svd.left.column(i).dot(x) / self.svd.sigma[i];
            c += self.svd.right.column(i) * coef;
        }
        c
    }
}

impl LinearRelation {
    /// Wraps a graph subspace of R^{2n}.
    pub fn from_graph(n: usize, graph: Subspace) -> Result<Self> {
        if n == 0 || graph.ambient_dim() != 2 * n {
            return Err(Error::Dimension(format!(
                "graph must live in R^{} for a relation on R^{n}, got R^{}",
                2 * n,
                graph.ambient_dim()
            )));
        }
        Ok(Self { n, graph })
    }

    /// Relation whose graph is the span of the given `(x, u)` columns.
    pub fn from_graph_vectors(n: usize, vectors: &Matrix, tol: &Tolerances) -> Result<Self> {
        if vectors.nrows() != 2 * n {
            return Err(Error::Dimension(format!(
                "graph vectors must have {} rows, got {}",
                2 * n,
                vectors.nrows()
            )));
        }
        let graph = Subspace::span_with_floor(vectors, tol.rank_tol, UNIT_SCALE);
        Self::from_graph(n, graph)
    }

    /// Graph of a single-valued operator: `{(x, Mx)}`.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let n = crate::numlin::check_square(m, "operator")?;
        crate::numlin::check_finite(m)?;
        let mut stacked = Matrix::zeros(2 * n, n);
        stacked.view_mut((0, 0), (n, n)).fill_with_identity();
        stacked.view_mut((n, 0), (n, n)).copy_from(m);
        // [I; M] has every singular value >= 1, so its rank is exactly n.
        let svd = Svd::new(&stacked);
        Self::from_graph(n, svd.range(n))
    }

    /// Normal cone of a linear subspace S: domain S, constant value S^⊥.
    pub fn normal_cone_of(s: &Subspace) -> Self {
        let n = s.ambient_dim();
        let complement = s.complement();
        let mut basis = Matrix::zeros(2 * n, n);
        basis.view_mut((0, 0), (n, s.dim())).copy_from(s.basis());
        basis
            .view_mut((n, s.dim()), (n, complement.dim()))
            .copy_from(complement.basis());
        Self {
            n,
            graph: Subspace::from_basis_unchecked(basis),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn graph_dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn input_block(&self) -> Matrix {
        self.graph.basis().rows(0, self.n).into_owned()
    }

    pub fn output_block(&self) -> Matrix {
        self.graph.basis().rows(self.n, self.n).into_owned()
    }

    /// `{(u, x) : (x, u) ∈ gra A}`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let basis = self.graph.basis();
        let mut swapped = Matrix::zeros(2 * n, basis.ncols());
        swapped.rows_mut(0, n).copy_from(&basis.rows(n, n));
        swapped.rows_mut(n, n).copy_from(&basis.rows(0, n));
        Self {
            n,
            graph: Subspace::from_basis_unchecked(swapped),
        }
    }

    /// `{(x, u + v) : (x, u) ∈ gra A, (x, v) ∈ gra B}`.
    ///
    /// Pairs of graph coefficients `(a, b)` with matching input blocks form
    /// the kernel of `[X_A, −X_B]`; their images `(X_A a, U_A a + U_B b)`
    /// span the graph of the sum.
    pub fn sum(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        self.same_ambient(other)?;
        let n = self.n;
        let (ka, kb) = (self.graph_dim(), other.graph_dim());
        if ka == 0 || kb == 0 {
            return Ok(Self {
                n,
                graph: Subspace::zero(2 * n),
            });
        }
        let (xa, ua) = (self.input_block(), self.output_block());
        let (xb, ub) = (other.input_block(), other.output_block());

        let mut constraint = Matrix::zeros(n, ka + kb);
        constraint.columns_mut(0, ka).copy_from(&xa);
        constraint.columns_mut(ka, kb).copy_from(&(-&xb));
        let svd = Svd::new(&constraint);
        let rank = svd.rank(tol.rank_tol, UNIT_SCALE);
        let pairs = svd.kernel(rank).into_basis();
        if pairs.ncols() == 0 {
            return Ok(Self {
                n,
                graph: Subspace::zero(2 * n),
            });
        }
        let a = pairs.rows(0, ka);
        let b = pairs.rows(ka, kb);
        let mut images = Matrix::zeros(2 * n, pairs.ncols());
        images.rows_mut(0, n).copy_from(&(&xa * a));
        images.rows_mut(n, n).copy_from(&(&ua * a + &ub * b));
        Self::from_graph_vectors(n, &images, tol)
    }

    /// Domain, range and `A0` of the relation.
    pub fn parts(&self, tol: &Tolerances) -> RelationParts {
        let x = self.input_block();
        let u = self.output_block();
        let solve = InputSolve::new(&x, tol.rank_tol);
        RelationParts {
            domain: solve.svd.range(solve.rank),
            range: Subspace::span_with_floor(&u, tol.rank_tol, UNIT_SCALE),
            zero_image: self.zero_image_from(&solve, &u, tol),
        }
    }

    fn zero_image_from(&self, solve: &InputSolve, u: &Matrix, tol: &Tolerances) -> Subspace {
        if self.graph_dim() == 0 {
            return Subspace::zero(self.n);
        }
        let kernel = solve.svd.kernel(solve.rank);
        Subspace::span_with_floor(&(u * kernel.basis()), tol.rank_tol, UNIT_SCALE)
    }

    /// The value set `Ax`; empty when `x` is outside the domain.
    pub fn apply(&self, x: &Vector, tol: &Tolerances) -> Result<AffineSet> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector of length {} for a relation on R^{}",
                x.len(),
                self.n
            )));
        }
        let scale = x.norm().max(1.0);
        if self.graph_dim() == 0 {
            return Ok(if x.norm() <= tol.identity_tol * scale {
                AffineSet::Affine {
                    point: Vector::zeros(self.n),
                    direction: Subspace::zero(self.n),
                }
            } else {
                AffineSet::Empty
            });
        }
        let xb = self.input_block();
        let ub = self.output_block();
        let solve = InputSolve::new(&xb, tol.rank_tol);
        let c = solve.coefficients(x);
        if (&xb * &c - x).norm() > tol.identity_tol * scale {
            return Ok(AffineSet::Empty);
        }
        let direction = self.zero_image_from(&solve, &ub, tol);
        let u = &ub * c;
        let point = &u - projector(&direction) * &u;
        Ok(AffineSet::Affine { point, direction })
    }

    /// Minimal selection `Q_A y`: the projection of `Ay` onto `(A0)^⊥`.
    pub fn selection(&self, y: &Vector, tol: &Tolerances) -> Result<Vector> {
        match self.apply(y, tol)? {
            AffineSet::Affine { point, .. } => Ok(point),
            AffineSet::Empty => {
                let domain = self.parts(tol).domain;
                Err(Error::OutsideDomain {
                    distance: domain.distance(y),
                })
            }
        }
    }

    /// Projector distance between the two graphs.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_ambient(other)?;
        subspace_distance(&self.graph, &other.graph)
    }

    pub fn equals(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        Ok(self.distance(other)? <= tol.identity_tol)
    }

    /// Symmetric form `Q_ij = ½(⟨x_i, u_j − βx_j⟩ + ⟨x_j, u_i − βx_i⟩)` on the
    /// graph basis; PSD iff `A − β·Id` is monotone.
    pub fn monotonicity_form(&self, beta: f64) -> Matrix {
        let x = self.input_block();
        let u = self.output_block() - &x * beta;
        let cross = x.transpose() * u;
        (&cross + cross.transpose()) * 0.5
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "relations on R^{} and R^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}
