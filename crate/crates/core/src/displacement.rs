//! Displacement mapping `Id − R` of a linear nonexpansive `R`.
//!
//! [`analyze`] computes the fixed-point subspace `D`, the operator
//! `T = P_{D⊥}(Id − R)^{-1}P_{D⊥} − ½P_{D⊥}`, the closed-range constant and
//! the resolvent of `2T`. The remaining functions evaluate each identity
//! relating these objects and report its residual.
//!
//! `(Id − R)^{-1}` is set-valued; sandwiched between projectors onto
//! `D⊥ = ran(Id − R)` it is single-valued and coincides with the oracle
//! pseudoinverse, which is how `T` is materialized. The Moore–Penrose
//! identity is then checked against the Penrose equations rather than
//! against the oracle alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numlin::{
    check_finite, check_square, factor_fundamental, identity, min_eigenvalue, operator_norm,
    projector, pseudoinverse, subspace_distance, sym_part, Matrix, Subspace, Tolerances,
};
use crate::properties::{penrose_residuals, PenroseResiduals};
use crate::relations::LinearRelation;

#[derive(Debug, Clone)]
pub struct DisplacementAnalysis {
    r: Matrix,
    d: Subspace,
    d_perp: Subspace,
    p_d: Matrix,
    p_dperp: Matrix,
    delta: Matrix,
    pinv_delta: Matrix,
    t: Matrix,
    alpha: Option<f64>,
    j2t: Matrix,
    inv_half: Matrix,
    rank: usize,
    tol: Tolerances,
}

impl DisplacementAnalysis {
    pub fn n(&self) -> usize {
        self.r.nrows()
    }
    pub fn r(&self) -> &Matrix {
        &self.r
    }
    /// `D = Fix R`.
    pub fn d(&self) -> &Subspace {
        &self.d
    }
    pub fn d_perp(&self) -> &Subspace {
        &self.d_perp
    }
    pub fn p_d(&self) -> &Matrix {
        &self.p_d
    }
    pub fn p_dperp(&self) -> &Matrix {
        &self.p_dperp
    }
    /// `Id − R`.
    pub fn delta(&self) -> &Matrix {
        &self.delta
    }
    pub fn pinv_delta(&self) -> &Matrix {
        &self.pinv_delta
    }
    pub fn t(&self) -> &Matrix {
        &self.t
    }
    /// Closed-range constant; `None` when `R = Id`.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }
    pub fn j2t(&self) -> &Matrix {
        &self.j2t
    }
    /// `(½Id + T)^{-1}` in closed form.
    pub fn inv_half(&self) -> &Matrix {
        &self.inv_half
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }
}

pub fn analyze(r: &Matrix, tol: &Tolerances) -> Result<DisplacementAnalysis> {
    let n = check_square(r, "R")?;
    check_finite(r)?;
    tol.validate()?;
    let norm = operator_norm(r);
    if norm > 1.0 + tol.identity_tol {
        return Err(Error::NotNonexpansive {
            norm,
            tol: tol.identity_tol,
        });
    }

    let id = identity(n);
    let delta = &id - r;
    let f = factor_fundamental(&delta, tol)?;
    let d = f.kernel;
    let d_perp = f.coimage;
    let p_d = projector(&d);
    let p_dperp = projector(&d_perp);
    let pinv_delta = pseudoinverse(&delta, tol)?;

    let t = &p_dperp * &pinv_delta * &p_dperp - &p_dperp * 0.5;
    let alpha = (f.rank > 0).then(|| f.singular_values[f.rank - 1]);
    let j2t = &p_d + &delta * &p_dperp * 0.5;
    let inv_half = &delta + &p_d * 2.0;

    Ok(DisplacementAnalysis {
        r: r.clone(),
        d,
        d_perp,
        p_d,
        p_dperp,
        delta,
        pinv_delta,
        t,
        alpha,
        j2t,
        inv_half,
        rank: f.rank,
        tol: *tol,
    })
}

/// Residuals of the structural invariants every analysis must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantResiduals {
    /// `max(0, ‖R‖ − 1)`.
    pub nonexpansive: f64,
    /// `‖P_D + P_{D⊥} − Id‖`.
    pub projector_sum: f64,
    /// `‖(Id − R)·basis(D)‖`.
    pub kernel: f64,
    /// `max(‖P_{D⊥}T − T‖, ‖TP_{D⊥} − T‖)`.
    pub t_range: f64,
    /// `max(0, −λ_min(sym T))`.
    pub t_monotone: f64,
}

pub fn invariant_residuals(a: &DisplacementAnalysis) -> InvariantResiduals {
    let n = a.n();
    let t = &a.t;
    InvariantResiduals {
        nonexpansive: (operator_norm(&a.r) - 1.0).max(0.0),
        projector_sum: operator_norm(&(&a.p_d + &a.p_dperp - identity(n))),
        kernel: operator_norm(&(&a.delta * a.d.basis())),
        t_range: operator_norm(&(&a.p_dperp * t - t)).max(operator_norm(&(t * &a.p_dperp - t))),
        t_monotone: (-min_eigenvalue(&sym_part(t))).max(0.0),
    }
}

#[derive(Debug, Clone)]
pub struct InverseIdentity {
    /// `(Id − R)^{-1}` as a relation.
    pub lhs: LinearRelation,
    /// `½Id + T + N_{D⊥}`.
    pub rhs: LinearRelation,
    pub residual: f64,
}

impl InverseIdentity {
    pub fn holds(&self, tol: &Tolerances) -> bool {
        self.residual <= tol.identity_tol
    }
}

pub fn set_valued_inverse(a: &DisplacementAnalysis) -> Result<InverseIdentity> {
    let lhs = inverse_relation(a)?;
    let rhs = shifted_plus_normal_cone(a, &a.t)?;
    let residual = lhs.distance(&rhs)?;
    Ok(InverseIdentity { lhs, rhs, residual })
}

fn inverse_relation(a: &DisplacementAnalysis) -> Result<LinearRelation> {
    Ok(LinearRelation::from_matrix(&a.delta)?.inverse())
}

/// `½Id + S + N_{D⊥}` for a candidate `S`.
fn shifted_plus_normal_cone(a: &DisplacementAnalysis, s: &Matrix) -> Result<LinearRelation> {
    let half = identity(a.n()) * 0.5 + s;
    LinearRelation::from_matrix(&half)?.sum(&LinearRelation::normal_cone_of(&a.d_perp), &a.tol)
}

#[derive(Debug, Clone)]
pub struct MoorePenroseIdentity {
    /// `T + ½P_{D⊥}`.
    pub formula: Matrix,
    pub oracle: Matrix,
    /// `‖formula − oracle‖`.
    pub residual: f64,
    /// Bound the residual is held to: `identity_tol · max(1, ‖oracle‖)`.
    pub bound: f64,
    /// Penrose equations of `formula` against `Id − R`.
    pub penrose: PenroseResiduals,
}

pub fn moore_penrose_from_t(a: &DisplacementAnalysis) -> Result<MoorePenroseIdentity> {
    let formula = &a.t + &a.p_dperp * 0.5;
    let oracle = a.pinv_delta.clone();
    let residual = operator_norm(&(&formula - &oracle));
    let bound = a.tol.identity_tol * operator_norm(&oracle).max(1.0);
    let penrose = penrose_residuals(&a.delta, &formula)?;
    Ok(MoorePenroseIdentity {
        formula,
        oracle,
        residual,
        bound,
        penrose,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventResiduals {
    /// `‖(Id + 2T)·J_{2T} − Id‖`.
    pub resolvent: f64,
    /// `‖(½Id + T)·(Id − R + 2P_D) − Id‖`.
    pub half_shift_inverse: f64,
    /// `‖(Id − R + 2P_D) − 2J_{2T}‖`.
    pub twice_resolvent: f64,
    /// `‖((Id − R + 2P_D) − (Id − R))·P_{D⊥}‖`.
    pub restriction: f64,
}

impl ResolventResiduals {
    pub fn max(&self) -> f64 {
        self.resolvent
            .max(self.half_shift_inverse)
            .max(self.twice_resolvent)
            .max(self.restriction)
    }
}

#[derive(Debug, Clone)]
pub struct ResolventIdentities {
    pub j2t: Matrix,
    pub inv_half: Matrix,
    pub residuals: ResolventResiduals,
}

pub fn resolvent_calculus(a: &DisplacementAnalysis) -> ResolventIdentities {
    let n = a.n();
    let id = identity(n);
    let j2t = a.j2t.clone();
    let inv_half = a.inv_half.clone();
    let residuals = ResolventResiduals {
        resolvent: operator_norm(&((&id + &a.t * 2.0) * &j2t - &id)),
        half_shift_inverse: operator_norm(&((&id * 0.5 + &a.t) * &inv_half - &id)),
        twice_resolvent: operator_norm(&(&inv_half - &j2t * 2.0)),
        restriction: operator_norm(&((&inv_half - &a.delta) * &a.p_dperp)),
    };
    ResolventIdentities {
        j2t,
        inv_half,
        residuals,
    }
}

#[derive(Debug, Clone)]
pub struct OperatorDecomposition {
    /// `A = (Id − R)^{-1} − ½Id`.
    pub a: LinearRelation,
    /// `B = P_{dom A} Q_A P_{dom A}`.
    pub b: Matrix,
    /// Distance between `dom A` and `D⊥`.
    pub domain: f64,
    /// Distance between `A0` and `D`.
    pub zero_image: f64,
    /// Graph distance between `A` and `N_{D⊥} + B`.
    pub decomposition: f64,
    /// `‖B − T‖`.
    pub b_minus_t: f64,
    /// Largest distance from `Bd` to `Ad` over a basis of `D⊥`.
    pub selection: f64,
}

pub fn operator_a_b(a: &DisplacementAnalysis) -> Result<OperatorDecomposition> {
    let n = a.n();
    let tol = &a.tol;
    let shift = LinearRelation::from_matrix(&(identity(n) * -0.5))?;
    let rel_a = inverse_relation(a)?.sum(&shift, tol)?;
    let parts = rel_a.parts(tol);

    // Column i of B is P_{D⊥} Q_A(P_{D⊥} e_i); B vanishes on D.
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        let y = a.p_dperp.column(i).into_owned();
        let q = rel_a.selection(&y, tol)?;
        b.set_column(i, &(&a.p_dperp * q));
    }

    let decomposed =
        LinearRelation::normal_cone_of(&a.d_perp).sum(&LinearRelation::from_matrix(&b)?, tol)?;
    let mut selection: f64 = 0.0;
    for i in 0..a.d_perp.dim() {
        let d = a.d_perp.basis().column(i).into_owned();
        let value = rel_a.apply(&d, tol)?;
        selection = selection.max(value.distance(&(&b * d)));
    }

    Ok(OperatorDecomposition {
        domain: subspace_distance(&parts.domain, &a.d_perp)?,
        zero_image: subspace_distance(&parts.zero_image, &a.d)?,
        decomposition: rel_a.distance(&decomposed)?,
        b_minus_t: operator_norm(&(&b - &a.t)),
        selection,
        a: rel_a,
        b,
    })
}

/// Which defining condition of `T` a candidate violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessCondition {
    /// `(Id − R)^{-1} = ½Id + S + N_{D⊥}`.
    InverseRelation,
    /// `P_{D⊥} S P_{D⊥} = S`.
    Sandwich,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessVerdict {
    pub relation_residual: f64,
    pub sandwich_residual: f64,
    /// `‖S − T‖`.
    pub distance_to_t: f64,
    pub violated: Vec<UniquenessCondition>,
}

impl UniquenessVerdict {
    pub fn accepted(&self) -> bool {
        self.violated.is_empty()
    }
}

/// Tests whether `S` satisfies both defining conditions of `T`.
pub fn uniqueness_check(
    a: &DisplacementAnalysis,
    s: &Matrix,
    tol: &Tolerances,
) -> Result<UniquenessVerdict> {
    if s.shape() != (a.n(), a.n()) {
        return Err(Error::Dimension(format!(
            "candidate must be {0}x{0}, got {1}x{2}",
            a.n(),
            s.nrows(),
            s.ncols()
        )));
    }
    check_finite(s)?;
    let relation_residual = inverse_relation(a)?.distance(&shifted_plus_normal_cone(a, s)?)?;
    let sandwich_residual = operator_norm(&(&a.p_dperp * s * &a.p_dperp - s));
    let mut violated = Vec::new();
    if relation_residual > tol.identity_tol {
        violated.push(UniquenessCondition::InverseRelation);
    }
    if sandwich_residual > tol.identity_tol {
        violated.push(UniquenessCondition::Sandwich);
    }
    Ok(UniquenessVerdict {
        relation_residual,
        sandwich_residual,
        distance_to_t: operator_norm(&(s - &a.t)),
        violated,
    })
}

/// Kind of perturbation applied to `T` when probing uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// `P_{D⊥} G P_{D⊥}`: keeps the sandwich identity, breaks the relation.
    Sandwiched,
    /// Unrestricted `G`: breaks the sandwich identity.
    Full,
}

/// `count` seeded perturbations `T + scale·E`, `E` built from a symmetric
/// Gaussian `G` normalized to unit norm. Sandwiched and full kinds
/// alternate; only full ones are used when `D⊥ = {0}` because a sandwiched
/// perturbation would vanish there.
pub fn uniqueness_perturbations(
    a: &DisplacementAnalysis,
    count: usize,
    scale: f64,
    seed: u64,
) -> Vec<(PerturbationKind, Matrix)> {
    let n = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let g = Matrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
            let g = sym_part(&g);
            let sandwiched = &a.p_dperp * &g * &a.p_dperp;
            let (kind, e) = if k % 2 == 0 && operator_norm(&sandwiched) > 1e-6 {
                (PerturbationKind::Sandwiched, sandwiched)
            } else {
                (PerturbationKind::Full, g)
            };
            let e = &e / operator_norm(&e);
            (kind, &a.t + e * scale)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedRangeBound {
    pub alpha: f64,
    /// `‖P_{D⊥}(Id − R)^{-1}P_{D⊥}‖` with the selection realized by the
    /// pseudoinverse.
    pub selection_norm: f64,
    pub ok: bool,
    /// `max(0, (α − tol) − ‖(Id − R)y‖)` over a unit basis `y` of `D⊥`.
    pub lower_bound_violation: f64,
}

pub fn closed_range_bound(a: &DisplacementAnalysis) -> Result<ClosedRangeBound> {
    let alpha = a.alpha.ok_or(Error::UndefinedAlpha)?;
    let tol = a.tol.identity_tol;
    let selection_norm = operator_norm(&(&a.p_dperp * &a.pinv_delta * &a.p_dperp));
    let mut violation: f64 = 0.0;
    for i in 0..a.d_perp.dim() {
        let y = a.d_perp.basis().column(i);
        let image = (&a.delta * y).norm();
        violation = violation.max((alpha - tol) * y.norm() - image);
    }
    Ok(ClosedRangeBound {
        alpha,
        selection_norm,
        ok: selection_norm <= 1.0 / alpha + tol && violation <= 0.0,
        lower_bound_violation: violation.max(0.0),
    })
}
