//! Verification suites: every identity check rolled into [`CheckReport`]s.

use serde::{Deserialize, Serialize};

use crate::displacement::{
    closed_range_bound, invariant_residuals, moore_penrose_from_t, operator_a_b,
    resolvent_calculus, set_valued_inverse, uniqueness_check, uniqueness_perturbations,
    DisplacementAnalysis,
};
use crate::error::Result;
use crate::isometry::{
    order_of, power_sum_identities, projector_series, symmetric_sandwich, t_series,
    FiniteOrderIsometry,
};
use crate::numlin::{min_eigenvalue, operator_norm, sym_part};
use crate::report::{sort_checks, CheckReport, SkippedCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Inverse,
    Resolvent,
    Isometry,
    Properties,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Seed for the uniqueness perturbations.
    pub seed: u64,
    /// Largest order searched before the isometry suite is skipped.
    pub m_max: u64,
    pub perturbations: usize,
    pub perturbation_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            seed: 0,
            m_max: 24,
            perturbations: 20,
            perturbation_scale: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub checks: Vec<CheckReport>,
    pub skipped: Vec<SkippedCheck>,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn skip(id: &str, claim: &str, reason: &str) -> SkippedCheck {
    SkippedCheck {
        check_id: id.to_string(),
        claim: claim.to_string(),
        reason: reason.to_string(),
    }
}

pub fn verify(a: &DisplacementAnalysis, opts: &VerifyOptions) -> Result<Verification> {
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let tol = *a.tolerances();
    let it = tol.identity_tol;

    if opts.suite == Suite::All {
        let inv = invariant_residuals(a);
        checks.extend([
            CheckReport::new(
                "analysis.nonexpansive",
                "nonexpansive",
                inv.nonexpansive,
                it,
            ),
            CheckReport::new("analysis.fixed_space_kernel", "fix-kernel", inv.kernel, it),
            CheckReport::new(
                "analysis.projector_sum",
                "fix-kernel",
                inv.projector_sum,
                it,
            ),
            CheckReport::new("analysis.t_range", "T-range", inv.t_range, it),
            CheckReport::new(
                "analysis.t_monotone",
                "T-monotone",
                inv.t_monotone,
                tol.psd_tol,
            ),
        ]);
    }

    if opts.suite.includes(Suite::Inverse) {
        let inv = set_valued_inverse(a)?;
        checks.push(CheckReport::new(
            "inverse.set_valued",
            "set-valued-inverse",
            inv.residual,
            it,
        ));

        let mp = moore_penrose_from_t(a)?;
        checks.push(CheckReport::new(
            "inverse.moore_penrose",
            "moore-penrose",
            mp.residual,
            mp.bound,
        ));
        let pbound = it * operator_norm(a.delta()).max(1.0);
        for (i, r) in [mp.penrose.r1, mp.penrose.r2, mp.penrose.r3, mp.penrose.r4]
            .into_iter()
            .enumerate()
        {
            checks.push(CheckReport::new(
                format!("inverse.penrose_r{}", i + 1),
                "penrose-equations",
                r,
                pbound,
            ));
        }

        let canonical = uniqueness_check(a, a.t(), &tol)?;
        checks.push(CheckReport::new(
            "inverse.uniqueness_canonical",
            "uniqueness",
            canonical.relation_residual.max(canonical.sandwich_residual),
            it,
        ));
        let perturbed =
            uniqueness_perturbations(a, opts.perturbations, opts.perturbation_scale, opts.seed);
        let mut accepted = 0usize;
        for (_, s) in &perturbed {
            if uniqueness_check(a, s, &tol)?.accepted() {
                accepted += 1;
            }
        }
        checks.push(CheckReport::new(
            "inverse.uniqueness_perturbations_rejected",
            "uniqueness",
            accepted as f64,
            0.0,
        ));

        let dec = operator_a_b(a)?;
        checks.extend([
            CheckReport::new("inverse.a_domain", "A-domain", dec.domain, it),
            CheckReport::new("inverse.a_zero_image", "A-zero-image", dec.zero_image, it),
            CheckReport::new(
                "inverse.a_decomposition",
                "A-decomposition",
                dec.decomposition,
                it,
            ),
            CheckReport::new("inverse.b_equals_t", "B-equals-T", dec.b_minus_t, it),
            CheckReport::new("inverse.b_selection", "B-selection", dec.selection, it),
        ]);

        match a.alpha() {
            Some(_) => {
                let b = closed_range_bound(a)?;
                checks.push(CheckReport::new(
                    "inverse.closed_range_selection_bound",
                    "selection-bound",
                    (b.selection_norm - 1.0 / b.alpha).max(0.0),
                    it,
                ));
                checks.push(CheckReport::new(
                    "inverse.closed_range_lower_bound",
                    "closed-range",
                    b.lower_bound_violation,
                    0.0,
                ));
            }
            None => {
                let reason = "R = Id: D^perp = {0}, alpha undefined";
                skipped.push(skip(
                    "inverse.closed_range_selection_bound",
                    "selection-bound",
                    reason,
                ));
                skipped.push(skip(
                    "inverse.closed_range_lower_bound",
                    "closed-range",
                    reason,
                ));
            }
        }
    }

    if opts.suite.includes(Suite::Resolvent) {
        let r = resolvent_calculus(a).residuals;
        checks.extend([
            CheckReport::new("resolvent.j2t", "resolvent-2T", r.resolvent, it),
            CheckReport::new(
                "resolvent.half_shift_inverse",
                "half-shift-inverse",
                r.half_shift_inverse,
                it,
            ),
            CheckReport::new(
                "resolvent.twice_resolvent",
                "half-shift-inverse",
                r.twice_resolvent,
                it,
            ),
            CheckReport::new(
                "resolvent.restriction",
                "half-shift-restriction",
                r.restriction,
                it,
            ),
            CheckReport::new(
                "resolvent.half_shift_strongly_monotone",
                "half-shift-strong",
                (-min_eigenvalue(&sym_part(a.t()))).max(0.0),
                tol.psd_tol,
            ),
        ]);
    }

    if opts.suite.includes(Suite::Isometry) {
        let iso = order_of(a.r(), opts.m_max, &tol)?
            .filter(|&m| m >= 2)
            .and_then(|m| FiniteOrderIsometry::new(a.r().clone(), m, &tol).ok());
        match iso {
            Some(iso) => {
                let ps = projector_series(&iso, &tol)?;
                let sums = power_sum_identities(&iso);
                let ts = t_series(&iso, a)?;
                let sw = symmetric_sandwich(&iso, a)?;
                checks.extend([
                    CheckReport::new(
                        "isometry.projector_series",
                        "isometry-projector",
                        ps.residual,
                        it,
                    ),
                    CheckReport::new(
                        "isometry.power_sum_shift_up",
                        "isometry-power-sums",
                        sums.shifted_up,
                        it,
                    ),
                    CheckReport::new(
                        "isometry.power_sum_shift_down",
                        "isometry-power-sums",
                        sums.shifted_down,
                        it,
                    ),
                    CheckReport::new(
                        "isometry.power_sum_absorption",
                        "isometry-power-sums",
                        sums.absorption.max(ps.absorption),
                        it,
                    ),
                    CheckReport::new(
                        "isometry.symmetrized_sum",
                        "isometry-symmetrized-sum",
                        sums.symmetrized,
                        it,
                    ),
                    CheckReport::new("isometry.t_series", "isometry-T-series", ts.residual, it),
                    CheckReport::new("isometry.t_skew", "isometry-T-series", ts.skewness, it),
                    CheckReport::new(
                        "isometry.symmetric_sandwich",
                        "isometry-sandwich",
                        sw.residual,
                        it,
                    ),
                ]);
            }
            None => {
                let reason = format!("R is the identity or has no finite order <= {}", opts.m_max);
                for (id, claim) in [
                    ("isometry.projector_series", "isometry-projector"),
                    ("isometry.power_sums", "isometry-power-sums"),
                    ("isometry.symmetrized_sum", "isometry-symmetrized-sum"),
                    ("isometry.t_series", "isometry-T-series"),
                    ("isometry.symmetric_sandwich", "isometry-sandwich"),
                ] {
                    skipped.push(skip(id, claim, &reason));
                }
            }
        }
    }

    if opts.suite.includes(Suite::Properties) {
        checks.extend(crate::properties::property_suite(a, &tol)?);
    }

    sort_checks(&mut checks);
    skipped.sort_by(|x, y| x.check_id.cmp(&y.check_id));
    Ok(Verification { checks, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displacement::analyze;
    use crate::isometry::{build, IsometryKind};
    use crate::numlin::{identity, Tolerances};
    use crate::report::claim_statement;

    #[test]
    fn cyclic_shift_full_suite() {
        let t = Tolerances::default();
        let iso = build(&IsometryKind::CyclicShift(3), &t).unwrap();
        let a = analyze(iso.r(), &t).unwrap();
        let v = verify(&a, &VerifyOptions::default()).unwrap();
        assert!(v.checks.len() >= 14);
        assert!(
            v.pass(),
            "{:#?}",
            v.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
        assert!(v.checks.iter().any(|c| c.check_id == "isometry.t_skew"));
        assert!(v.skipped.is_empty());
        for c in &v.checks {
            assert!(claim_statement(&c.claim).is_some());
        }
        let ids: Vec<_> = v.checks.iter().map(|c| c.check_id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn identity_skips_alpha() {
        let t = Tolerances::default();
        let a = analyze(&identity(3), &t).unwrap();
        let v = verify(&a, &VerifyOptions::default()).unwrap();
        assert!(v.pass());
        assert!(v
            .skipped
            .iter()
            .any(|s| s.check_id == "inverse.closed_range_selection_bound"));
        assert!(v
            .skipped
            .iter()
            .any(|s| s.check_id.starts_with("isometry.")));
    }

    #[test]
    fn suite_filter() {
        let t = Tolerances::default();
        let a = analyze(
            &crate::operators::random_nonexpansive(5, 1, 0.95).unwrap(),
            &t,
        )
        .unwrap();
        let opts = VerifyOptions {
            suite: Suite::Resolvent,
            ..VerifyOptions::default()
        };
        let v = verify(&a, &opts).unwrap();
        assert!(v
            .checks
            .iter()
            .all(|c| c.check_id.starts_with("resolvent.")));
        assert!(v.pass());
    }
}
