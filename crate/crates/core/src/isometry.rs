//! Isometries of finite order `m` (`RᵀR = Id`, `R^m = Id`) and the
//! closed-form power series for `P_D`, `T` and the symmetrized sandwich.

use serde::{Deserialize, Serialize};

use crate::displacement::DisplacementAnalysis;
use crate::error::{Error, Result};
use crate::numlin::{
    check_square, factor_fundamental, identity, operator_norm, projector, Matrix, Tolerances,
};

/// Rotation angle as the fraction `numerator / denominator` of a full turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnFraction {
    pub numerator: i64,
    pub denominator: u64,
}

impl TurnFraction {
    pub fn new(numerator: i64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Invalid("turn fraction with zero denominator".into()));
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    /// Recovers `p/q` with `q ≤ max_denominator` from an angle in radians.
    pub fn from_radians(angle: f64, max_denominator: u64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::NoFiniteOrder(format!("angle {angle} is not finite")));
        }
        let turns = angle / std::f64::consts::TAU;
        for q in 1..=max_denominator {
            let p = (turns * q as f64).round();
            if (turns * q as f64 - p).abs() <= 1e-12 * q as f64 {
                return Self::new(p as i64, q);
            }
        }
        Err(Error::NoFiniteOrder(format!(
            "angle {angle} is not a rational multiple of 2π with denominator <= {max_denominator}"
        )))
    }

    /// Order of the rotation: the reduced denominator.
    pub fn order(&self) -> u64 {
        let p = self.numerator.rem_euclid(self.denominator as i64) as u64;
        self.denominator / gcd(p, self.denominator)
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::TAU * self.numerator as f64 / self.denominator as f64
    }
}

impl std::str::FromStr for TurnFraction {
    type Err = Error;

    /// Parses `p/q` (or a bare integer `p`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot parse turn fraction {s:?}, expected p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

impl std::fmt::Display for TurnFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsometryKind {
    /// `e_i ↦ e_{i+1 mod n}`.
    CyclicShift(usize),
    /// Block-diagonal 2×2 rotations.
    BlockRotation(Vec<TurnFraction>),
    /// `e_i ↦ signs[i] · e_{perm[i]}`.
    SignedPermutation { perm: Vec<usize>, signs: Vec<i8> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOrderIsometry {
    r: Matrix,
    order: u64,
}

impl FiniteOrderIsometry {
    /// Validates a matrix against a claimed exact order.
    pub fn new(r: Matrix, order: u64, tol: &Tolerances) -> Result<Self> {
        let n = check_square(&r, "isometry")?;
        if order < 2 {
            return Err(Error::Invalid(format!("order must be >= 2, got {order}")));
        }
        let id = identity(n);
        let iso = operator_norm(&(r.transpose() * &r - &id));
        if iso > tol.identity_tol {
            return Err(Error::Invalid(format!("RᵀR deviates from Id by {iso:e}")));
        }
        let mut power = id.clone();
        for k in 1..=order {
            power = &r * power;
            let gap = operator_norm(&(&power - &id));
            if k < order && gap <= tol.identity_tol {
                return Err(Error::Invalid(format!(
                    "R^{k} = Id before the claimed order {order}"
                )));
            }
            if k == order && gap > tol.identity_tol {
                return Err(Error::NoFiniteOrder(format!("‖R^{order} − Id‖ = {gap:e}")));
            }
        }
        Ok(Self { r, order })
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.r.nrows()
    }

    /// `[R^0, R^1, …, R^m]`.
    fn powers(&self) -> Vec<Matrix> {
        let m = self.order as usize;
        let mut out = Vec::with_capacity(m + 1);
        out.push(identity(self.n()));
        for k in 1..=m {
            out.push(&self.r * &out[k - 1]);
        }
        out
    }
}

pub fn build(kind: &IsometryKind, tol: &Tolerances) -> Result<FiniteOrderIsometry> {
    let (r, order) = match kind {
        IsometryKind::CyclicShift(n) => {
            let n = *n;
            if n < 2 {
                return Err(Error::Invalid(format!(
                    "cyclic shift needs n >= 2, got {n}"
                )));
            }
            let r = Matrix::from_fn(n, n, |i, j| if i == (j + 1) % n { 1.0 } else { 0.0 });
            (r, n as u64)
        }
        IsometryKind::BlockRotation(angles) => {
            if angles.is_empty() {
                return Err(Error::Invalid(
                    "block rotation needs at least one angle".into(),
                ));
            }
            let n = 2 * angles.len();
            let mut r = Matrix::zeros(n, n);
            let mut order = 1;
            for (b, angle) in angles.iter().enumerate() {
                let (s, c) = exact_sin_cos(angle);
                let i = 2 * b;
                r[(i, i)] = c;
                r[(i, i + 1)] = -s;
                r[(i + 1, i)] = s;
                r[(i + 1, i + 1)] = c;
                order = lcm(order, angle.order());
            }
            (r, order)
        }
        IsometryKind::SignedPermutation { perm, signs } => {
            let n = perm.len();
            if signs.len() != n {
                return Err(Error::Dimension(format!(
                    "{} signs for a permutation of {n} elements",
                    signs.len()
                )));
            }
            if signs.iter().any(|s| *s != 1 && *s != -1) {
                return Err(Error::Invalid("signs must be +1 or -1".into()));
            }
            let mut seen = vec![false; n];
            for &p in perm {
                if p >= n || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
                }
            }
            let mut r = Matrix::zeros(n, n);
            for (j, &p) in perm.iter().enumerate() {
                r[(p, j)] = f64::from(signs[j]);
            }
            (r, signed_permutation_order(perm, signs))
        }
    };
    FiniteOrderIsometry::new(r, order, tol)
}

/// Each cycle of length L contributes L, or 2L if the product of its signs
/// is −1.
fn signed_permutation_order(perm: &[usize], signs: &[i8]) -> u64 {
    let mut visited = vec![false; perm.len()];
    let mut order = 1;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let (mut len, mut sign, mut i) = (0u64, 1i8, start);
        while !visited[i] {
            visited[i] = true;
            sign *= signs[i];
            len += 1;
            i = perm[i];
        }
        order = lcm(order, if sign < 0 { 2 * len } else { len });
    }
    order
}

/// sin and cos with quarter turns snapped to exact values.
fn exact_sin_cos(angle: &TurnFraction) -> (f64, f64) {
    let q = angle.denominator as i64;
    let p = angle.numerator.rem_euclid(q);
    if (4 * p) % q == 0 {
        match 4 * p / q {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        angle.radians().sin_cos()
    }
}

/// `Σ_{k=0}^{m−1} R^k`.
fn power_sum(powers: &[Matrix], m: usize) -> Matrix {
    powers[..m].iter().fold(
        Matrix::zeros(powers[0].nrows(), powers[0].ncols()),
        |acc, p| acc + p,
    )
}

#[derive(Debug, Clone)]
pub struct ProjectorSeries {
    /// `(1/m) Σ_{k=0}^{m−1} R^k`.
    pub series: Matrix,
    /// `‖series − P_{ker(Id − R)}‖`.
    pub residual: f64,
    /// `‖R·ΣR^k − ΣR^k‖`.
    pub absorption: f64,
}

pub fn projector_series(iso: &FiniteOrderIsometry, tol: &Tolerances) -> Result<ProjectorSeries> {
    let m = iso.order as usize;
    let powers = iso.powers();
    let sum = power_sum(&powers, m);
    let series = &sum / m as f64;
    let kernel = factor_fundamental(&(identity(iso.n()) - &iso.r), tol)?.kernel;
    Ok(ProjectorSeries {
        residual: operator_norm(&(&series - projector(&kernel))),
        absorption: operator_norm(&(&iso.r * &sum - &sum)),
        series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSumResiduals {
    /// `‖ΣR^{k+1} − ΣR^k‖`.
    pub shifted_up: f64,
    /// `‖ΣR^{k−1} − ΣR^k‖`.
    pub shifted_down: f64,
    /// `max_l ‖R^l ΣR^k − ΣR^k‖` over `l = 0..m`.
    pub absorption: f64,
    /// `‖(R + R^{-1})(1/m)ΣR^k − (2/m)ΣR^k‖`.
    pub symmetrized: f64,
}

impl PowerSumResiduals {
    pub fn max(&self) -> f64 {
        self.shifted_up
            .max(self.shifted_down)
            .max(self.absorption)
            .max(self.symmetrized)
    }
}

pub fn power_sum_identities(iso: &FiniteOrderIsometry) -> PowerSumResiduals {
    let m = iso.order as usize;
    let powers = iso.powers();
    let sum = power_sum(&powers, m);
    // R^{-1} = R^{m-1}; the k−1 sum runs over R^{-1}, R^0, …, R^{m−2}.
    let inv = &powers[m - 1];
    let up = powers[1..=m]
        .iter()
        .fold(Matrix::zeros(iso.n(), iso.n()), |acc, p| acc + p);
    let down = inv + power_sum(&powers, m - 1);
    let absorption = (0..m)
        .map(|l| operator_norm(&(&powers[l] * &sum - &sum)))
        .fold(0.0, f64::max);
    let mf = m as f64;
    let symmetrized = operator_norm(&((&iso.r + inv) * (&sum / mf) - &sum * (2.0 / mf)));
    PowerSumResiduals {
        shifted_up: operator_norm(&(up - &sum)),
        shifted_down: operator_norm(&(down - &sum)),
        absorption,
        symmetrized,
    }
}

#[derive(Debug, Clone)]
pub struct TSeries {
    /// `(1/2m) Σ_{k=1}^{m−1} (m − 2k) R^k`.
    pub series: Matrix,
    /// `‖series − T‖` against the analysis.
    pub residual: f64,
    /// `‖series + seriesᵀ‖`.
    pub skewness: f64,
}

pub fn t_series(iso: &FiniteOrderIsometry, a: &DisplacementAnalysis) -> Result<TSeries> {
    same_operator(iso, a)?;
    let m = iso.order as usize;
    let powers = iso.powers();
    let mut series = Matrix::zeros(iso.n(), iso.n());
    for (k, p) in powers.iter().enumerate().take(m).skip(1) {
        series += p * ((m as f64 - 2.0 * k as f64) / (2.0 * m as f64));
    }
    Ok(TSeries {
        residual: operator_norm(&(&series - a.t())),
        skewness: operator_norm(&(&series + series.transpose())),
        series,
    })
}

#[derive(Debug, Clone)]
pub struct SymmetricSandwich {
    /// `½P_{D⊥}(R + Rᵀ)P_{D⊥}`.
    pub lhs: Matrix,
    /// `(1/m)(−Id − Σ_{k=2}^{m−2} R^k + (max{1, m−2}/2)(R + R^{m−1}))`.
    pub rhs: Matrix,
    pub residual: f64,
}

pub fn symmetric_sandwich(
    iso: &FiniteOrderIsometry,
    a: &DisplacementAnalysis,
) -> Result<SymmetricSandwich> {
    same_operator(iso, a)?;
    let m = iso.order as usize;
    let n = iso.n();
    let powers = iso.powers();
    let p = a.p_dperp();
    let lhs = p * (&iso.r + iso.r.transpose()) * p * 0.5;

    let mut inner = -identity(n);
    // empty for m < 4
    for power in powers.iter().take(m.saturating_sub(1)).skip(2) {
        inner -= power;
    }
    let weight = (m.saturating_sub(2)).max(1) as f64 / 2.0;
    inner += (&iso.r + &powers[m - 1]) * weight;
    let rhs = inner / m as f64;
    Ok(SymmetricSandwich {
        residual: operator_norm(&(&lhs - &rhs)),
        lhs,
        rhs,
    })
}

fn same_operator(iso: &FiniteOrderIsometry, a: &DisplacementAnalysis) -> Result<()> {
    if iso.r.shape() != a.r().shape() || (&iso.r - a.r()).abs().max() > 0.0 {
        return Err(Error::Invalid(
            "analysis was computed for a different operator".into(),
        ));
    }
    Ok(())
}

/// Smallest `m ≤ m_max` with `‖R^m − Id‖ ≤ identity_tol`.
pub fn order_of(r: &Matrix, m_max: u64, tol: &Tolerances) -> Result<Option<u64>> {
    let n = check_square(r, "R")?;
    if m_max < 2 {
        return Err(Error::Invalid(format!("m_max must be >= 2, got {m_max}")));
    }
    let id = identity(n);
    let mut power = id.clone();
    for m in 1..=m_max {
        power = r * power;
        if operator_norm(&(&power - &id)) <= tol.identity_tol {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
