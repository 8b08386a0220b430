//! Verification outcomes and the claim traceability table.

use serde::{Deserialize, Serialize};

/// One verification outcome. `pass` is always `residual <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Key into [`CLAIMS`] naming the identity this check exercises.
    pub claim: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, claim: &str, residual: f64, tol: f64) -> Self {
        debug_assert!(claim_statement(claim).is_some(), "unknown claim {claim}");
        Self {
            check_id: check_id.into(),
            claim: claim.to_string(),
            residual,
            tol,
            // NaN residuals never pass
            pass: residual <= tol,
        }
    }

    /// A yes/no outcome expressed as residual 0 (holds) or 1 (fails) with tol 0.
    pub fn flag(check_id: impl Into<String>, claim: &str, holds: bool) -> Self {
        Self::new(check_id, claim, if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

/// A check that was not run, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCheck {
    pub check_id: String,
    pub claim: String,
    pub reason: String,
}

/// Claim key and the statement it stands for. Every `CheckReport::claim`
/// must be one of these keys.
pub const CLAIMS: &[(&str, &str)] = &[
    ("fix-kernel", "D = Fix R = ker(Id - R)"),
    ("fix-adjoint", "Fix R* = D"),
    ("range-perp", "ran(Id - R) = ran(Id - R*) = D^perp"),
    ("T-definition", "T = P_{D^perp} (Id - R)^{-1} P_{D^perp} - 1/2 P_{D^perp}"),
    ("T-range", "P_{D^perp} T = T P_{D^perp} = T"),
    ("T-monotone", "T is monotone (sym T is positive semidefinite)"),
    ("set-valued-inverse", "(Id - R)^{-1} = 1/2 Id + T + N_{D^perp}"),
    ("moore-penrose", "(Id - R)^dagger = T + 1/2 P_{D^perp}"),
    ("penrose-equations", "M P M = M, P M P = P, (M P)^T = M P, (P M)^T = P M"),
    ("uniqueness", "(Id - R)^{-1} = 1/2 Id + S + N_{D^perp} and P_{D^perp} S P_{D^perp} = S imply S = T"),
    ("resolvent-2T", "J_{2T} = P_D + 1/2 (Id - R) P_{D^perp}"),
    ("half-shift-inverse", "(1/2 Id + T)^{-1} = 2 J_{2T} = Id - R + 2 P_D"),
    ("half-shift-restriction", "(1/2 Id + T)^{-1} restricted to D^perp equals Id - R"),
    ("half-shift-strong", "1/2 Id + T is 1/2-strongly monotone"),
    ("A-domain", "dom A = D^perp for A = (Id - R)^{-1} - 1/2 Id"),
    ("A-zero-image", "A0 = D"),
    ("A-decomposition", "A = N_{D^perp} + B"),
    ("B-equals-T", "B = P_{dom A} Q_A P_{dom A} = T"),
    ("B-selection", "B restricted to dom A is a selection of A"),
    ("closed-range", "||y - Ry|| >= alpha ||y|| on D^perp"),
    ("selection-bound", "||P_{D^perp} (Id - R)^{-1} P_{D^perp}|| <= 1/alpha"),
    ("firm-half", "1/2 (Id - R) is firmly nonexpansive"),
    ("displacement-lipschitz", "||Id - R|| <= 2, i.e. 1/2 (Id - R) is nonexpansive"),
    ("displacement-maximal", "Id - R is maximally monotone"),
    ("inverse-maximal", "(Id - R)^{-1} is maximally monotone"),
    ("cocoercive-half", "Id - R is 1/2-cocoercive"),
    ("inverse-strong", "(Id - R)^{-1} is 1/2-strongly monotone"),
    ("three-star-hypotheses", "Id - R and (Id - R)^{-1} are bounded-monotone; 3* conclusion not directly tested"),
    ("paramonotone", "Id - R is paramonotone"),
    ("shifted-inverse-maximal", "(Id - R)^{-1} - 1/2 Id is maximally monotone"),
    ("isometry-projector", "P_D = (1/m) sum_{k=0}^{m-1} R^k"),
    ("isometry-power-sums", "sum R^{k+1} = sum R^{k-1} = sum R^k and R^l sum R^k = sum R^k"),
    ("isometry-symmetrized-sum", "(R + R^{-1}) (1/m) sum R^k = (2/m) sum R^k"),
    ("isometry-T-series", "T = (1/2m) sum_{k=1}^{m-1} (m - 2k) R^k = -T*"),
    ("isometry-sandwich", "1/2 P_{D^perp}(R + R*)P_{D^perp} = (1/m)(-Id - sum_{k=2}^{m-2} R^k + max{1, m-2}/2 (R + R^{m-1}))"),
    ("nonexpansive", "||R|| <= 1"),
];

pub fn claim_statement(key: &str) -> Option<&'static str> {
    CLAIMS.iter().find(|(k, _)| *k == key).map(|(_, s)| *s)
}

/// Sorts checks by id so that report output is order-stable.
pub fn sort_checks(checks: &mut [CheckReport]) {
    checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
}

pub fn all_pass(checks: &[CheckReport]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tol() {
        assert!(CheckReport::new("a", "moore-penrose", 1e-10, 1e-9).pass);
        assert!(!CheckReport::new("a", "moore-penrose", 1e-8, 1e-9).pass);
        assert!(!CheckReport::new("a", "moore-penrose", f64::NAN, 1e-9).pass);
        assert!(CheckReport::flag("b", "paramonotone", true).pass);
        assert!(!CheckReport::flag("b", "paramonotone", false).pass);
    }

    #[test]
    fn claim_keys_unique() {
        let mut keys: Vec<_> = CLAIMS.iter().map(|(k, _)| *k).collect();
        keys.sort_unstable();
        let before = keys.len();
        keys.dedup();
        assert_eq!(before, keys.len());
    }
}
