//! Builders for the structured and random nonexpansive operators.
//!
//! Random draws use `ChaCha8Rng::seed_from_u64(seed)` with i.i.d. standard
//! normal entries (`rand_distr::StandardNormal`), in column-major order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numlin::{identity, operator_norm, projector, Matrix, Subspace, Tolerances};

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

/// `P_U`.
pub fn projection(u: &Subspace) -> Matrix {
    projector(u)
}

/// `−P_U`.
pub fn neg_projection(u: &Subspace) -> Matrix {
    -projector(u)
}

/// `R_U = 2P_U − Id`.
pub fn reflection(u: &Subspace) -> Matrix {
    projector(u) * 2.0 - identity(u.ambient_dim())
}

/// `−R_U = Id − 2P_U`.
pub fn neg_reflection(u: &Subspace) -> Matrix {
    -reflection(u)
}

/// Gaussian matrix rescaled so that its spectral norm equals `norm_cap`.
pub fn random_nonexpansive(n: usize, seed: u64, norm_cap: f64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    if !(norm_cap > 0.0 && norm_cap <= 1.0) {
        return Err(Error::Invalid(format!(
            "norm_cap must lie in (0, 1], got {norm_cap}"
        )));
    }
    let g = gaussian(n, n, seed);
    let norm = operator_norm(&g);
    Ok(g * (norm_cap / norm))
}

/// Uniformly oriented `k`-dimensional subspace of R^n.
pub fn random_subspace(n: usize, k: usize, seed: u64) -> Result<Subspace> {
    if n == 0 || k > n {
        return Err(Error::Invalid(format!(
            "cannot draw a {k}-dimensional subspace of R^{n}"
        )));
    }
    if k == 0 {
        return Ok(Subspace::zero(n));
    }
    let q = gaussian(n, k, seed).qr().q();
    Subspace::from_orthonormal(q, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_norm_is_pinned() {
        let r = random_nonexpansive(8, 42, 0.95).unwrap();
        assert!((operator_norm(&r) - 0.95).abs() <= 1e-12);
        assert_eq!(r, random_nonexpansive(8, 42, 0.95).unwrap());
        assert!(random_nonexpansive(3, 0, 1.5).is_err());
        assert!(random_nonexpansive(3, 0, 0.0).is_err());
    }

    #[test]
    fn structured_builders() {
        let u = random_subspace(5, 2, 7).unwrap();
        assert_eq!(u.dim(), 2);
        let p = projection(&u);
        assert!((&p * &p - &p).abs().max() < 1e-14);
        let r = reflection(&u);
        assert!((&r * &r - identity(5)).abs().max() < 1e-14);
        assert!((neg_reflection(&u) + &r).abs().max() == 0.0);
        assert!((neg_projection(&u) + p).abs().max() == 0.0);
        assert!(random_subspace(3, 4, 0).is_err());
        assert_eq!(random_subspace(3, 0, 0).unwrap().dim(), 0);
    }
}
