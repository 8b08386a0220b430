//! Monotone-operator classifiers for matrices and linear relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::displacement::DisplacementAnalysis;
use crate::error::{Error, Result};
use crate::numlin::{
    self, check_square, factor_fundamental, fundamental_with_floor, identity, min_eigenvalue,
    operator_norm, subspace_distance, sym_part, Matrix, Tolerances,
};
use crate::relations::LinearRelation;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub nonexpansive: bool,
    pub firmly_nonexpansive: bool,
    pub monotone: bool,
    pub cocoercive_half: bool,
    pub strongly_monotone_modulus: Option<f64>,
    pub paramonotone: bool,
    /// Residual behind each flag, keyed by flag name. A flag holds iff its
    /// residual is within the matching tolerance.
    pub residual_details: BTreeMap<String, f64>,
}

/// Excess of `‖M‖` over 1 (0 when nonexpansive).
fn nonexpansive_excess(m: &Matrix) -> f64 {
    (operator_norm(m) - 1.0).max(0.0)
}

fn firm_excess(m: &Matrix) -> f64 {
    let n = m.nrows();
    nonexpansive_excess(&(m * 2.0 - identity(n)))
}

/// `‖M · basis(ker sym M)‖`, zero when sym M is nonsingular.
fn paramonotone_residual(m: &Matrix, tol: &Tolerances) -> f64 {
    let sym = sym_part(m);
    let f = fundamental_with_floor(&sym, tol.rank_tol, 1.0);
    if f.kernel.dim() == 0 {
        return 0.0;
    }
    operator_norm(&(m * f.kernel.basis()))
}

pub fn classify(m: &Matrix, tol: &Tolerances) -> Result<MonotonicityReport> {
    check_square(m, "classified operator")?;
    numlin::check_finite(m)?;
    let min_eig = min_eigenvalue(&sym_part(m));
    let nonexp = nonexpansive_excess(m);
    let firm = firm_excess(m);
    let cocoercive = firm_excess(&(m * 0.5));
    let para = paramonotone_residual(m, tol);

    let mut details = BTreeMap::new();
    details.insert("nonexpansive".to_string(), nonexp);
    details.insert("firmly_nonexpansive".to_string(), firm);
    details.insert("monotone".to_string(), (-min_eig).max(0.0));
    details.insert("cocoercive_half".to_string(), cocoercive);
    details.insert("strongly_monotone_modulus".to_string(), min_eig);
    details.insert("paramonotone".to_string(), para);

    Ok(MonotonicityReport {
        nonexpansive: nonexp <= tol.identity_tol,
        firmly_nonexpansive: firm <= tol.identity_tol,
        monotone: min_eig >= -tol.psd_tol,
        cocoercive_half: cocoercive <= tol.identity_tol,
        strongly_monotone_modulus: (min_eig > tol.psd_tol).then_some(min_eig),
        paramonotone: para <= tol.identity_tol,
        residual_details: details,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationMonotonicity {
    pub monotone: bool,
    pub maximal: bool,
    pub strongly_monotone: bool,
    /// Smallest eigenvalue of the monotonicity form on the graph basis.
    pub form_min: f64,
    /// Smallest eigenvalue of the form of `A − β·Id`.
    pub strong_form_min: f64,
}

/// Monotonicity, maximality (monotone with graph dimension n) and
/// β-strong monotonicity of a linear relation.
pub fn classify_relation(
    a: &LinearRelation,
    beta: f64,
    tol: &Tolerances,
) -> Result<RelationMonotonicity> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Invalid(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    let form_min = min_eigenvalue(&a.monotonicity_form(0.0));
    let strong_form_min = min_eigenvalue(&a.monotonicity_form(beta));
    let monotone = form_min >= -tol.psd_tol;
    Ok(RelationMonotonicity {
        monotone,
        maximal: monotone && a.graph_dim() == a.ambient_dim(),
        strongly_monotone: strong_form_min >= -tol.psd_tol,
        form_min,
        strong_form_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenroseResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }
}

/// Residuals of `MPM = M`, `PMP = P`, `(MP)ᵀ = MP`, `(PM)ᵀ = PM`.
pub fn penrose_residuals(m: &Matrix, p: &Matrix) -> Result<PenroseResiduals> {
    if p.nrows() != m.ncols() || p.ncols() != m.nrows() {
        return Err(Error::Dimension(format!(
            "candidate inverse of a {}x{} matrix must be {}x{}, got {}x{}",
            m.nrows(),
            m.ncols(),
            m.ncols(),
            m.nrows(),
            p.nrows(),
            p.ncols()
        )));
    }
    let mp = m * p;
    let pm = p * m;
    Ok(PenroseResiduals {
        r1: operator_norm(&(&mp * m - m)),
        r2: operator_norm(&(&pm * p - p)),
        r3: operator_norm(&(mp.transpose() - &mp)),
        r4: operator_norm(&(pm.transpose() - &pm)),
    })
}

/// One report per classifier claim about `Id − R`, its inverse and the shift
/// `(Id − R)^{-1} − ½Id`.
pub fn property_suite(a: &DisplacementAnalysis, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let n = a.n();
    let delta = a.delta();
    let cls = classify(delta, tol)?;
    let half = classify(&(delta * 0.5), tol)?;
    let d = &cls.residual_details;

    let delta_rel = LinearRelation::from_matrix(delta)?;
    let delta_mono = classify_relation(&delta_rel, 0.0, tol)?;
    let inverse = delta_rel.inverse();
    let inv_mono = classify_relation(&inverse, 0.5, tol)?;
    let shifted = inverse.sum(&LinearRelation::from_matrix(&(identity(n) * -0.5))?, tol)?;
    let shifted_mono = classify_relation(&shifted, 0.0, tol)?;

    let dim_gap = |r: &LinearRelation| (r.graph_dim() as f64 - n as f64).abs();
    let neg = |x: f64| (-x).max(0.0);

    let adjoint = factor_fundamental(&(identity(n) - a.r().transpose()), tol)?;
    let range = factor_fundamental(delta, tol)?;
    let range_adj = factor_fundamental(&delta.transpose(), tol)?;
    let dperp = a.d_perp();

    let it = tol.identity_tol;
    let pt = tol.psd_tol;
    let lipschitz_two = (operator_norm(delta) - 2.0).max(0.0);
    let mut out = vec![
        CheckReport::new(
            "properties.firm_half_displacement",
            "firm-half",
            half.residual_details["firmly_nonexpansive"],
            it,
        ),
        // Only the 2-Lipschitz bound holds in general: R = -Id gives ‖Id - R‖ = 2.
        CheckReport::new(
            "properties.displacement_lipschitz_two",
            "displacement-lipschitz",
            lipschitz_two,
            it,
        ),
        CheckReport::new(
            "properties.displacement_monotone",
            "displacement-maximal",
            d["monotone"],
            pt,
        ),
        CheckReport::new(
            "properties.displacement_maximal",
            "displacement-maximal",
            neg(delta_mono.form_min).max(dim_gap(&delta_rel)),
            pt,
        ),
        CheckReport::new(
            "properties.displacement_cocoercive_half",
            "cocoercive-half",
            d["cocoercive_half"],
            it,
        ),
        CheckReport::new(
            "properties.inverse_monotone",
            "inverse-maximal",
            neg(inv_mono.form_min),
            pt,
        ),
        CheckReport::new(
            "properties.inverse_maximal",
            "inverse-maximal",
            neg(inv_mono.form_min).max(dim_gap(&inverse)),
            pt,
        ),
        CheckReport::new(
            "properties.inverse_strongly_monotone_half",
            "inverse-strong",
            neg(inv_mono.strong_form_min),
            pt,
        ),
        CheckReport::new(
            "properties.three_star_hypotheses",
            "three-star-hypotheses",
            lipschitz_two.max(neg(inv_mono.form_min)).max(d["monotone"]),
            pt.max(it),
        ),
        CheckReport::new(
            "properties.displacement_paramonotone",
            "paramonotone",
            d["paramonotone"],
            it,
        ),
        CheckReport::new(
            "properties.shifted_inverse_monotone",
            "shifted-inverse-maximal",
            neg(shifted_mono.form_min),
            pt,
        ),
        CheckReport::new(
            "properties.shifted_inverse_maximal",
            "shifted-inverse-maximal",
            neg(shifted_mono.form_min).max(dim_gap(&shifted)),
            pt,
        ),
        CheckReport::new(
            "properties.fix_adjoint",
            "fix-adjoint",
            subspace_distance(&adjoint.kernel, a.d())?,
            it,
        ),
        CheckReport::new(
            "properties.range_displacement",
            "range-perp",
            subspace_distance(&range.range, dperp)?,
            it,
        ),
        CheckReport::new(
            "properties.range_displacement_adjoint",
            "range-perp",
            subspace_distance(&range_adj.range, dperp)?,
            it,
        ),
    ];
    crate::report::sort_checks(&mut out);
    Ok(out)
}
