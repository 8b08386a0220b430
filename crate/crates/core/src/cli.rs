//! `dispmap make|analyze|verify|gallery`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::displacement::{analyze, DisplacementAnalysis};
use crate::error::Error;
use crate::gallery::{self, GalleryOptions, GalleryReport};
use crate::isometry::{build, IsometryKind, TurnFraction};
use crate::numlin::{check_finite, matrix_from_rows, matrix_to_rows, Matrix, Subspace, Tolerances};
use crate::operators::{
    neg_projection, neg_reflection, projection, random_nonexpansive, random_subspace, reflection,
};
use crate::report::{CheckReport, SkippedCheck};
use crate::verify::{verify, Suite, VerifyOptions};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_NONEXPANSIVE: u8 = 3;

/// Serialized operator description, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Matrix {
        n: usize,
        rows: Vec<Vec<f64>>,
    },
    /// `basis` lists the orthonormal spanning vectors of `U`.
    Projection {
        n: usize,
        basis: Vec<Vec<f64>>,
    },
    NegProjection {
        n: usize,
        basis: Vec<Vec<f64>>,
    },
    Reflection {
        n: usize,
        basis: Vec<Vec<f64>>,
    },
    NegReflection {
        n: usize,
        basis: Vec<Vec<f64>>,
    },
    CyclicShift {
        n: usize,
    },
    /// One turn fraction `p/q` per 2×2 block.
    BlockRotation {
        n: usize,
        angles: Vec<String>,
    },
    SignedPermutation {
        n: usize,
        perm: Vec<usize>,
        signs: Vec<i8>,
    },
    RandomNonexpansive {
        n: usize,
        seed: u64,
        norm_cap: f64,
    },
}

impl OperatorSpec {
    pub fn n(&self) -> usize {
        match self {
            Self::Matrix { n, .. }
            | Self::Projection { n, .. }
            | Self::NegProjection { n, .. }
            | Self::Reflection { n, .. }
            | Self::NegReflection { n, .. }
            | Self::CyclicShift { n }
            | Self::BlockRotation { n, .. }
            | Self::SignedPermutation { n, .. }
            | Self::RandomNonexpansive { n, .. } => *n,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Matrix { .. } => "matrix",
            Self::Projection { .. } => "projection",
            Self::NegProjection { .. } => "neg_projection",
            Self::Reflection { .. } => "reflection",
            Self::NegReflection { .. } => "neg_reflection",
            Self::CyclicShift { .. } => "cyclic_shift",
            Self::BlockRotation { .. } => "block_rotation",
            Self::SignedPermutation { .. } => "signed_permutation",
            Self::RandomNonexpansive { .. } => "random_nonexpansive",
        }
    }

    /// Materializes `R`, validating the payload against `n`.
    pub fn build(&self, tol: &Tolerances) -> crate::Result<Matrix> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        let r = match self {
            Self::Matrix { rows, .. } => matrix_from_rows(rows)?,
            Self::Projection { basis, .. } => projection(&subspace_from_list(n, basis, tol)?),
            Self::NegProjection { basis, .. } => {
                neg_projection(&subspace_from_list(n, basis, tol)?)
            }
            Self::Reflection { basis, .. } => reflection(&subspace_from_list(n, basis, tol)?),
            Self::NegReflection { basis, .. } => {
                neg_reflection(&subspace_from_list(n, basis, tol)?)
            }
            Self::CyclicShift { n } => build(&IsometryKind::CyclicShift(*n), tol)?.r().clone(),
            Self::BlockRotation { angles, .. } => {
                let angles = angles
                    .iter()
                    .map(|a| a.parse::<TurnFraction>())
                    .collect::<crate::Result<Vec<_>>>()?;
                build(&IsometryKind::BlockRotation(angles), tol)?
                    .r()
                    .clone()
            }
            Self::SignedPermutation { perm, signs, .. } => build(
                &IsometryKind::SignedPermutation {
                    perm: perm.clone(),
                    signs: signs.clone(),
                },
                tol,
            )?
            .r()
            .clone(),
            Self::RandomNonexpansive { seed, norm_cap, .. } => {
                random_nonexpansive(n, *seed, *norm_cap)?
            }
        };
        if r.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "{} spec declares n = {n} but yields a {}x{} matrix",
                self.kind(),
                r.nrows(),
                r.ncols()
            )));
        }
        check_finite(&r)?;
        Ok(r)
    }
}

fn subspace_from_list(n: usize, basis: &[Vec<f64>], tol: &Tolerances) -> crate::Result<Subspace> {
    if basis.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "basis vectors must have length {n}"
        )));
    }
    let m = Matrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
    Subspace::from_orthonormal(m, tol)
}

fn subspace_to_list(u: &Subspace) -> Vec<Vec<f64>> {
    u.basis()
        .column_iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}

#[derive(Debug, Parser)]
#[command(
    name = "dispmap",
    version,
    about = "Displacement mappings of linear nonexpansive operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an operator spec file.
    Make(MakeArgs),
    /// Compute D, P_D, T, the pseudoinverse, alpha and the resolvents.
    Analyze(AnalyzeArgs),
    /// Run verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Reproduce the worked examples for +-P_U, +-R_U and cyclic shifts.
    Gallery(GalleryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MakeKind {
    Matrix,
    Projection,
    NegProjection,
    Reflection,
    NegReflection,
    #[value(alias = "cyclic_shift")]
    Cyclic,
    #[value(alias = "block_rotation")]
    Rotation,
    #[value(alias = "signed_permutation")]
    SignedPerm,
    #[value(alias = "random_nonexpansive")]
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TolArg {
    /// Overrides identity_tol and psd_tol; rank_tol becomes min(1e-10, tol/10).
    #[arg(long)]
    pub tol: Option<f64>,
}

impl TolArg {
    fn tolerances(&self) -> crate::Result<Tolerances> {
        match self.tol {
            Some(t) => Tolerances::with_identity(t),
            None => Ok(Tolerances::default()),
        }
    }
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(value_enum)]
    pub kind: MakeKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "dimU", alias = "dim-u")]
    pub dim_u: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "norm-cap", default_value_t = 0.95)]
    pub norm_cap: f64,
    /// Turn fractions, e.g. `1/4,1/3`.
    #[arg(long, value_delimiter = ',')]
    pub angles: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub perm: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub signs: Vec<i8>,
    /// Row-major entries separated by `,` within a row and `;` between rows.
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub spec: PathBuf,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "m-max", default_value_t = 24)]
    pub m_max: u64,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GalleryArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long = "dimU", alias = "dim-u", default_value_t = 3)]
    pub dim_u: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: Output,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotNonexpansive { .. } => EXIT_NOT_NONEXPANSIVE,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("dispmap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Executes a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Make(args) => cmd_make(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gallery(args) => cmd_gallery(args),
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| input_error(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn load_spec(path: &Path) -> Result<OperatorSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input_error(format!("malformed spec {}: {e}", path.display())))
}

pub fn make_spec(args: &MakeArgs) -> Result<OperatorSpec, Failure> {
    let n = args.n;
    let basis = || -> Result<Vec<Vec<f64>>, Failure> {
        let k = args
            .dim_u
            .ok_or_else(|| input_error("--dimU is required for subspace-based kinds"))?;
        Ok(subspace_to_list(&random_subspace(n, k, args.seed)?))
    };
    let spec = match args.kind {
        MakeKind::Matrix => {
            let text = args
                .rows
                .as_deref()
                .ok_or_else(|| input_error("--rows is required for kind matrix"))?;
            OperatorSpec::Matrix {
                n,
                rows: parse_rows(text)?,
            }
        }
        MakeKind::Projection => OperatorSpec::Projection { n, basis: basis()? },
        MakeKind::NegProjection => OperatorSpec::NegProjection { n, basis: basis()? },
        MakeKind::Reflection => OperatorSpec::Reflection { n, basis: basis()? },
        MakeKind::NegReflection => OperatorSpec::NegReflection { n, basis: basis()? },
        MakeKind::Cyclic => OperatorSpec::CyclicShift { n },
        MakeKind::Rotation => OperatorSpec::BlockRotation {
            n,
            angles: args.angles.clone(),
        },
        MakeKind::SignedPerm => OperatorSpec::SignedPermutation {
            n,
            perm: args.perm.clone(),
            signs: if args.signs.is_empty() {
                vec![1; args.perm.len()]
            } else {
                args.signs.clone()
            },
        },
        // Written out as an explicit matrix so the file stands alone.
        MakeKind::Random => OperatorSpec::Matrix {
            n,
            rows: matrix_to_rows(&random_nonexpansive(n, args.seed, args.norm_cap)?),
        },
    };
    spec.build(&Tolerances::default())?;
    Ok(spec)
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>, Failure> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| input_error(format!("bad matrix entry {x:?}")))
                })
                .collect()
        })
        .collect()
}

fn cmd_make(args: &MakeArgs) -> Result<u8, Failure> {
    let spec = make_spec(args)?;
    write_output(args.out.as_deref(), &to_json(&spec))?;
    Ok(EXIT_PASS)
}

fn load_analysis(
    path: &Path,
    tol: &Tolerances,
) -> Result<(OperatorSpec, DisplacementAnalysis), Failure> {
    let spec = load_spec(path)?;
    let r = spec.build(tol)?;
    let a = analyze(&r, tol)?;
    Ok((spec, a))
}

/// Every analysis field in serializable form; matrices as row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub kind: String,
    pub n: usize,
    pub rank: usize,
    pub dim_d: usize,
    pub r: Vec<Vec<f64>>,
    /// Orthonormal basis vectors of `D = Fix R`.
    pub d_basis: Vec<Vec<f64>>,
    pub p_d: Vec<Vec<f64>>,
    pub p_dperp: Vec<Vec<f64>>,
    pub t: Vec<Vec<f64>>,
    pub pinv_displacement: Vec<Vec<f64>>,
    /// `None` when `R = Id`.
    pub alpha: Option<f64>,
    pub j2t: Vec<Vec<f64>>,
    pub inv_half_shift: Vec<Vec<f64>>,
}

impl AnalysisReport {
    pub fn new(kind: &str, a: &DisplacementAnalysis) -> Self {
        Self {
            kind: kind.into(),
            n: a.n(),
            rank: a.rank(),
            dim_d: a.d().dim(),
            r: matrix_to_rows(a.r()),
            d_basis: subspace_to_list(a.d()),
            p_d: matrix_to_rows(a.p_d()),
            p_dperp: matrix_to_rows(a.p_dperp()),
            t: matrix_to_rows(a.t()),
            pinv_displacement: matrix_to_rows(a.pinv_delta()),
            alpha: a.alpha(),
            j2t: matrix_to_rows(a.j2t()),
            inv_half_shift: matrix_to_rows(a.inv_half()),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind: {}", self.kind);
        let _ = writeln!(
            s,
            "n: {}  rank(Id - R): {}  dim D: {}",
            self.n, self.rank, self.dim_d
        );
        match self.alpha {
            Some(a) => {
                let _ = writeln!(s, "alpha: {a:.16e}");
            }
            None => s.push_str("alpha: undefined (R = Id)\n"),
        }
        for (name, rows) in [
            ("R", &self.r),
            ("basis(D) (one vector per row)", &self.d_basis),
            ("P_D", &self.p_d),
            ("P_D^perp", &self.p_dperp),
            ("T", &self.t),
            ("pinv(Id - R)", &self.pinv_displacement),
            ("J_2T", &self.j2t),
            ("(1/2 Id + T)^-1", &self.inv_half_shift),
        ] {
            let _ = writeln!(s, "\n{name}:");
            if rows.is_empty() {
                s.push_str("  (empty)\n");
            }
            for row in rows {
                let line: Vec<String> = row.iter().map(|x| format!("{x:>24.16e}")).collect();
                let _ = writeln!(s, "  {}", line.join(" "));
            }
        }
        s
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let tol = args.tol.tolerances()?;
    let (spec, a) = load_analysis(&args.spec, &tol)?;
    let report = AnalysisReport::new(spec.kind(), &a);
    let content = match args.output.format {
        Format::Json => to_json(&report),
        Format::Text => report.text(),
    };
    write_output(args.output.out.as_deref(), &content)?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub n: usize,
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    pub skipped: Vec<SkippedCheck>,
}

fn checks_text(out: &mut String, checks: &[CheckReport]) {
    for c in checks {
        let _ = writeln!(
            out,
            "{} {:<52} residual {:.3e} <= {:.1e}  [{}]",
            if c.pass { "PASS" } else { "FAIL" },
            c.check_id,
            c.residual,
            c.tol,
            c.claim
        );
    }
}

impl VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "kind: {}  n: {}  suite: {:?}",
            self.kind, self.n, self.suite
        );
        checks_text(&mut s, &self.checks);
        for k in &self.skipped {
            let _ = writeln!(s, "SKIP {:<52} {}  [{}]", k.check_id, k.reason, k.claim);
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(
            s,
            "{} checks, {} failed, {} skipped",
            self.checks.len(),
            failed,
            self.skipped.len()
        );
        s
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let tol = args.tol.tolerances()?;
    let (spec, a) = load_analysis(&args.spec, &tol)?;
    let opts = VerifyOptions {
        suite: args.suite,
        seed: args.seed,
        m_max: args.m_max,
        ..VerifyOptions::default()
    };
    let v = verify(&a, &opts)?;
    let report = VerifyReport {
        kind: spec.kind().into(),
        n: a.n(),
        suite: args.suite,
        pass: v.pass(),
        checks: v.checks,
        skipped: v.skipped,
    };
    let content = match args.output.format {
        Format::Json => to_json(&report),
        Format::Text => report.text(),
    };
    write_output(args.output.out.as_deref(), &content)?;
    Ok(if report.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

fn gallery_text(g: &GalleryReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "gallery n = {}, dimU = {}, seed = {}",
        g.n, g.dim_u, g.seed
    );
    for e in &g.examples {
        let _ = writeln!(s, "\n[{}] {}: {}", e.name, e.operator, e.closed_form_t);
        checks_text(&mut s, &e.checks);
        for note in &e.notes {
            let _ = writeln!(
                s,
                "NOTE stated {} (graph distance {:.3e}); holds as {} (graph distance {:.3e})",
                note.stated, note.stated_distance, note.corrected, note.corrected_distance
            );
        }
    }
    for b in &g.isometries {
        let _ = writeln!(s, "\n[shift m = {}] ||T - T^T|| = {:.6}", b.m, b.asymmetry);
        checks_text(&mut s, &b.checks);
    }
    for d in &g.discrepancies {
        let _ = writeln!(
            s,
            "\nDISCREPANCY [{}] stated {} (distance {:.3e}), computed {} (distance {:.3e})\n  {}",
            d.example,
            d.stated,
            d.distance_to_stated,
            d.computed,
            d.distance_to_computed,
            d.resolution
        );
    }
    s
}

fn cmd_gallery(args: &GalleryArgs) -> Result<u8, Failure> {
    let tol = args.tol.tolerances()?;
    let g = gallery::run(
        &GalleryOptions {
            n: args.n,
            dim_u: args.dim_u,
            seed: args.seed,
        },
        &tol,
    )?;
    let content = match args.output.format {
        Format::Json => to_json(&g),
        Format::Text => gallery_text(&g),
    };
    write_output(args.output.out.as_deref(), &content)?;
    Ok(if g.pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let spec = OperatorSpec::SignedPermutation {
            n: 3,
            perm: vec![1, 2, 0],
            signs: vec![1, -1, 1],
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"signed_permutation\""));
        assert_eq!(serde_json::from_str::<OperatorSpec>(&json).unwrap(), spec);
    }

    #[test]
    fn basis_must_be_orthonormal() {
        let spec = OperatorSpec::Projection {
            n: 2,
            basis: vec![vec![1.0, 1.0]],
        };
        assert!(matches!(
            spec.build(&Tolerances::default()),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn n_must_match_payload() {
        let spec = OperatorSpec::Matrix {
            n: 3,
            rows: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        assert!(matches!(
            spec.build(&Tolerances::default()),
            Err(Error::Dimension(_))
        ));
        let spec = OperatorSpec::BlockRotation {
            n: 3,
            angles: vec!["1/4".into()],
        };
        assert!(spec.build(&Tolerances::default()).is_err());
    }

    #[test]
    fn rows_parse() {
        assert_eq!(
            parse_rows("1, 0; -0.5,2").unwrap(),
            vec![vec![1.0, 0.0], vec![-0.5, 2.0]]
        );
        assert!(parse_rows("1,x").is_err());
    }

    #[test]
    fn not_nonexpansive_maps_to_exit_3() {
        let f: Failure = Error::NotNonexpansive {
            norm: 2.0,
            tol: 1e-9,
        }
        .into();
        assert_eq!(f.code, EXIT_NOT_NONEXPANSIVE);
    }
}
