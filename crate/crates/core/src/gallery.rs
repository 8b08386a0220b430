//! Worked examples: the four subspace-built operators `±P_U`, `±R_U` and
//! cyclic shifts, each compared against its closed form.

use serde::{Deserialize, Serialize};

use crate::displacement::{
    analyze, moore_penrose_from_t, resolvent_calculus, set_valued_inverse, DisplacementAnalysis,
};
use crate::error::{Error, Result};
use crate::isometry::{
    build, power_sum_identities, projector_series, symmetric_sandwich, t_series, IsometryKind,
};
use crate::numlin::{identity, operator_norm, Matrix, Subspace, Tolerances};
use crate::operators::{neg_projection, neg_reflection, projection, random_subspace, reflection};
use crate::relations::LinearRelation;
use crate::report::CheckReport;

/// Closed forms are exact up to round-off, so they are held to this bound.
pub const GALLERY_TOL: f64 = 1e-12;

/// Cyclic shift orders covered by the gallery.
pub const SHIFT_ORDERS: std::ops::RangeInclusive<usize> = 2..=8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalleryOptions {
    pub n: usize,
    pub dim_u: usize,
    pub seed: u64,
}

/// A statement of `(Id − R)^{-1}` tried against the computed relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationNote {
    pub stated: String,
    /// Graph distance between the stated form and `(Id − R)^{-1}`.
    pub stated_distance: f64,
    pub corrected: String,
    pub corrected_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleBlock {
    pub name: String,
    pub operator: String,
    pub closed_form_t: String,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<RelationNote>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryBlock {
    pub m: usize,
    pub checks: Vec<CheckReport>,
    /// `‖T − Tᵀ‖`; zero exactly when `m = 2`.
    pub asymmetry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub example: String,
    pub stated: String,
    pub computed: String,
    /// `‖T − stated‖`.
    pub distance_to_stated: f64,
    /// `‖T − computed closed form‖`.
    pub distance_to_computed: f64,
    pub resolution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryReport {
    pub n: usize,
    pub dim_u: usize,
    pub seed: u64,
    pub examples: Vec<ExampleBlock>,
    pub isometries: Vec<IsometryBlock>,
    pub discrepancies: Vec<Discrepancy>,
}

impl GalleryReport {
    pub fn pass(&self) -> bool {
        self.examples.iter().flat_map(|e| &e.checks).all(|c| c.pass)
            && self
                .isometries
                .iter()
                .flat_map(|b| &b.checks)
                .all(|c| c.pass)
    }
}

pub fn run(opts: &GalleryOptions, tol: &Tolerances) -> Result<GalleryReport> {
    let GalleryOptions { n, dim_u, seed } = *opts;
    if dim_u == 0 || dim_u >= n {
        return Err(Error::Invalid(format!(
            "dimU must satisfy 1 <= dimU < n, got dimU = {dim_u}, n = {n}"
        )));
    }
    let u = random_subspace(n, dim_u, seed)?;
    let pu = u.projector();
    let pu_perp = identity(n) - &pu;
    let zero = Matrix::zeros(n, n);

    let mut examples = Vec::new();
    let mut discrepancies = Vec::new();

    let a = analyze(&projection(&u), tol)?;
    let mut block = example_block(
        "projection",
        "R = P_U",
        "T = 1/2 P_{U^perp}",
        &a,
        &(&pu_perp * 0.5),
    )?;
    block.notes.push(relation_note(
        &a,
        ("(Id - R)^{-1} = Id + N_U", &u, 1.0),
        ("(Id - R)^{-1} = Id + N_{U^perp}", &u.complement(), 1.0),
    )?);
    examples.push(block);

    let a = analyze(&neg_projection(&u), tol)?;
    let computed = &pu_perp * 0.5;
    examples.push(example_block(
        "neg_projection",
        "R = -P_U",
        "T = 1/2 P_{U^perp}",
        &a,
        &computed,
    )?);
    discrepancies.push(Discrepancy {
        example: "neg_projection".into(),
        stated: "T = 1/2 P_U".into(),
        computed: "T = 1/2 P_{U^perp}".into(),
        distance_to_stated: operator_norm(&(a.t() - &pu * 0.5)),
        distance_to_computed: operator_norm(&(a.t() - &computed)),
        resolution: "Fix(-P_U) = {0}, so T = (Id + P_U)^{-1} - 1/2 Id = 1/2 P_U + P_{U^perp} - 1/2 Id \
                     = 1/2 P_{U^perp}. The stated value swaps U and U^perp; the computed value is reported."
            .into(),
    });

    let a = analyze(&reflection(&u), tol)?;
    let mut block = example_block("reflection", "R = R_U = 2 P_U - Id", "T = 0", &a, &zero)?;
    block.notes.push(relation_note(
        &a,
        ("(Id - R)^{-1} = 1/2 Id + N_U", &u, 0.5),
        ("(Id - R)^{-1} = 1/2 Id + N_{U^perp}", &u.complement(), 0.5),
    )?);
    examples.push(block);

    let a = analyze(&neg_reflection(&u), tol)?;
    examples.push(example_block(
        "neg_reflection",
        "R = -R_U = Id - 2 P_U",
        "T = 0",
        &a,
        &zero,
    )?);

    let mut isometries = Vec::new();
    for m in SHIFT_ORDERS {
        isometries.push(isometry_block(m, tol)?);
    }

    Ok(GalleryReport {
        n,
        dim_u,
        seed,
        examples,
        isometries,
        discrepancies,
    })
}

fn example_block(
    name: &str,
    operator: &str,
    closed_form_t: &str,
    a: &DisplacementAnalysis,
    expected_t: &Matrix,
) -> Result<ExampleBlock> {
    let id = |s: &str| format!("gallery.{name}.{s}");
    let mp = moore_penrose_from_t(a)?;
    let r = resolvent_calculus(a).residuals;
    let checks = vec![
        CheckReport::new(
            id("closed_form_t"),
            "T-definition",
            operator_norm(&(a.t() - expected_t)),
            GALLERY_TOL,
        ),
        CheckReport::new(
            id("moore_penrose"),
            "moore-penrose",
            mp.residual,
            GALLERY_TOL,
        ),
        CheckReport::new(id("resolvent"), "resolvent-2T", r.max(), GALLERY_TOL),
        CheckReport::new(
            id("set_valued_inverse"),
            "set-valued-inverse",
            set_valued_inverse(a)?.residual,
            GALLERY_TOL,
        ),
    ];
    Ok(ExampleBlock {
        name: name.into(),
        operator: operator.into(),
        closed_form_t: closed_form_t.into(),
        checks,
        notes: Vec::new(),
    })
}

/// Compares the computed inverse with `c·Id + N_S` for a stated and a
/// corrected choice of `S`.
fn relation_note(
    a: &DisplacementAnalysis,
    stated: (&str, &Subspace, f64),
    corrected: (&str, &Subspace, f64),
) -> Result<RelationNote> {
    let inverse = LinearRelation::from_matrix(a.delta())?.inverse();
    let dist = |s: &Subspace, c: f64| -> Result<f64> {
        let form = LinearRelation::from_matrix(&(identity(a.n()) * c))?
            .sum(&LinearRelation::normal_cone_of(s), a.tolerances())?;
        inverse.distance(&form)
    };
    Ok(RelationNote {
        stated: stated.0.into(),
        stated_distance: dist(stated.1, stated.2)?,
        corrected: corrected.0.into(),
        corrected_distance: dist(corrected.1, corrected.2)?,
    })
}

fn isometry_block(m: usize, tol: &Tolerances) -> Result<IsometryBlock> {
    let iso = build(&IsometryKind::CyclicShift(m), tol)?;
    let a = analyze(iso.r(), tol)?;
    let id = |s: &str| format!("gallery.shift_{m}.{s}");
    let ps = projector_series(&iso, tol)?;
    let sums = power_sum_identities(&iso);
    let ts = t_series(&iso, &a)?;
    let sw = symmetric_sandwich(&iso, &a)?;
    let asymmetry = operator_norm(&(a.t() - a.t().transpose()));
    let checks = vec![
        CheckReport::new(
            id("projector_series"),
            "isometry-projector",
            ps.residual,
            GALLERY_TOL,
        ),
        CheckReport::new(
            id("power_sums"),
            "isometry-power-sums",
            sums.max(),
            GALLERY_TOL,
        ),
        CheckReport::new(
            id("t_series"),
            "isometry-T-series",
            ts.residual,
            GALLERY_TOL,
        ),
        CheckReport::new(id("t_skew"), "isometry-T-series", ts.skewness, GALLERY_TOL),
        CheckReport::new(
            id("symmetric_sandwich"),
            "isometry-sandwich",
            sw.residual,
            GALLERY_TOL,
        ),
        CheckReport::flag(
            id("symmetric_iff_order_2"),
            "isometry-T-series",
            (asymmetry <= GALLERY_TOL) == (m == 2),
        ),
    ];
    Ok(IsometryBlock {
        m,
        checks,
        asymmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize, dim_u: usize, seed: u64) -> GalleryOptions {
        GalleryOptions { n, dim_u, seed }
    }

    #[test]
    fn six_three_seed_one() {
        let g = run(&opts(6, 3, 1), &Tolerances::default()).unwrap();
        assert_eq!(g.examples.len(), 4);
        assert_eq!(g.isometries.len(), 7);
        assert_eq!(g.discrepancies.len(), 1);
        assert!(g.pass(), "{g:#?}");
        let d = &g.discrepancies[0];
        assert!(d.distance_to_computed <= GALLERY_TOL);
        assert!(d.distance_to_stated > 0.1);
    }

    #[test]
    fn relation_notes_separate_stated_and_corrected() {
        let g = run(&opts(4, 2, 3), &Tolerances::default()).unwrap();
        let notes: Vec<_> = g.examples.iter().flat_map(|e| &e.notes).collect();
        assert_eq!(notes.len(), 2);
        for note in notes {
            assert!(note.corrected_distance <= 1e-10, "{note:?}");
            assert!(note.stated_distance > 0.1, "{note:?}");
        }
    }

    #[test]
    fn minimal_instance() {
        let g = run(&opts(2, 1, 0), &Tolerances::default()).unwrap();
        assert!(g.pass());
    }

    #[test]
    fn dim_u_validated() {
        assert!(matches!(
            run(&opts(3, 3, 0), &Tolerances::default()),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            run(&opts(3, 0, 0), &Tolerances::default()),
            Err(Error::Invalid(_))
        ));
    }
}
