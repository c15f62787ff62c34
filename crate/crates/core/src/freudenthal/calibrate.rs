//! Calibration of the invariant quartic inside the six-monomial family.

use serde::{Deserialize, Serialize};

use super::quartic::monomial_values;
use super::symmetry::{LinOp, ParamDeriver, Parameterization};
use super::{phi_hat_unchecked, FtsVector, Quartic, QuarticCoeffs};
use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::jet::gradient;
use crate::jordan::JordanElement;
use crate::linalg::Matrix;

/// Outcome of a calibration run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub coeffs: QuarticCoeffs,
    /// Dimension of the invariance nullspace before normalization.
    pub nullspace_dim: usize,
    /// `ε` with `Q ∘ σ = ε Q`.
    pub flip_sign: i8,
}

/// The value the β² Hessian entry at `x₀` is scaled to.
pub const BETA_HESSIAN_AT_X0: i64 = 18;

/// Rows `m_i(Lx) − m_i(x)` for `points` random `x`.
fn invariance_rows(op: &LinOp, points: usize, rng: &mut ScalarSampler, rows: &mut Vec<Vec<GaussRat>>) {
    for _ in 0..points {
        let x = FtsVector::random_int(op.tag(), rng);
        let before = monomial_values(&x, [true; 6]);
        let after = monomial_values(&op.apply(&x), [true; 6]);
        rows.push(after.iter().zip(&before).map(|(a, b)| a - b).collect());
    }
}

fn to_coeffs(v: &[GaussRat]) -> QuarticCoeffs {
    QuarticCoeffs(std::array::from_fn(|i| v[i].clone()))
}

/// Empirical `ε` with `Q ∘ σ = ε Q`, checked on `points` random points.
pub fn flip_sign(tag: AlgebraTag, c: &QuarticCoeffs, points: usize, rng: &mut ScalarSampler) -> Result<i8> {
    let mut sign: Option<i8> = None;
    for _ in 0..points.max(1) {
        let x = FtsVector::random_int(tag, rng);
        let q = super::eval_quartic(c, &x);
        let qf = super::eval_quartic(c, &x.flip());
        let s = if q.is_zero() {
            if !qf.is_zero() {
                return Err(Error::VerificationFailed);
            }
            continue;
        } else if qf == q {
            1
        } else if qf == -q {
            -1
        } else {
            return Err(Error::VerificationFailed);
        };
        match sign {
            Some(prev) if prev != s => return Err(Error::VerificationFailed),
            _ => sign = Some(s),
        }
    }
    sign.ok_or(Error::VerificationFailed)
}

/// Calibrate with precomputed derivers for φ̂ and ψ̂. `trials` random
/// transvections and as many dual transvections impose the constraints.
pub fn calibrate_with(phi: &ParamDeriver, psi: &ParamDeriver, trials: usize, seed: u64) -> Result<Calibration> {
    if phi.kind() != Parameterization::Phi || psi.kind() != Parameterization::Psi {
        return Err(Error::DegenerateInput("calibration needs a φ̂- and a ψ̂-deriver"));
    }
    let tag = phi.tag();
    phi.tag().check(psi.tag())?;
    let n = FtsVector::coord_dim(tag);
    let mut rng = ScalarSampler::new(seed, 3);
    let mut rows = Vec::new();
    for _ in 0..trials.max(2) {
        let c = JordanElement::random_int(tag, &mut rng);
        invariance_rows(&phi.derive(&c)?, 3 * n, &mut rng, &mut rows);
        let d = JordanElement::random_int(tag, &mut rng);
        invariance_rows(&psi.derive(&d)?, 3 * n, &mut rng, &mut rows);
    }
    let null = Matrix::from_rows(&rows).nullspace();
    match null.len() {
        0 => return Err(Error::CalibrationEmpty),
        1 => {}
        k => return Err(Error::CalibrationAmbiguous(k)),
    }
    let raw = to_coeffs(&null[0]);
    // Q(x₀ + t e_β) = c₁ t², so the β² Hessian entry is 2c₁.
    let h = &raw.0[0] + &raw.0[0];
    let s = GaussRat::from_int(BETA_HESSIAN_AT_X0)
        .checked_div(&h)
        .map_err(|_| Error::DegenerateInput("invariant quartic has no β² term at x₀"))?;
    let coeffs = raw.scale(&s);
    let flip_sign = flip_sign(tag, &coeffs, 8, &mut rng)?;
    Ok(Calibration { coeffs, nullspace_dim: 1, flip_sign })
}

/// Calibrate the quartic for `tag`, deriving fresh symmetries from `seed`.
pub fn calibrate_quartic(tag: AlgebraTag, trials: usize, seed: u64) -> Result<Calibration> {
    let phi = ParamDeriver::new(tag, Parameterization::Phi, seed)?;
    let psi = ParamDeriver::new(tag, Parameterization::Psi, seed ^ 0x5bd1_e995)?;
    calibrate_with(&phi, &psi, trials, seed.wrapping_add(1))
}

/// Coefficient vectors whose quartic has vanishing gradient on `samples`
/// random points of the φ̂-cone.
pub fn gradient_relation_nullspace(tag: AlgebraTag, samples: usize, seed: u64) -> Vec<QuarticCoeffs> {
    let mut rng = ScalarSampler::new(seed, 3);
    let mut rows: Vec<Vec<GaussRat>> = Vec::new();
    for _ in 0..samples.max(1) {
        let alpha = rng.nonzero_gauss_int();
        let a = JordanElement::random_int(tag, &mut rng);
        let x = phi_hat_unchecked(&alpha, &a).to_flat();
        let grads: Vec<Vec<GaussRat>> = super::Monomial::ALL
            .iter()
            .map(|m| gradient(&Quartic::new(tag, QuarticCoeffs::unit(*m)), &x))
            .collect();
        for k in 0..x.len() {
            rows.push(grads.iter().map(|g| g[k].clone()).collect());
        }
    }
    Matrix::from_rows(&rows).nullspace().iter().map(|v| to_coeffs(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: [i64; 6]) -> QuarticCoeffs {
        QuarticCoeffs(v.map(GaussRat::from_int))
    }

    #[test]
    fn calibrated_vector_small_algebras() {
        for tag in [AlgebraTag::REAL, AlgebraTag::COMPLEX, AlgebraTag::QUATERNION] {
            let cal = calibrate_quartic(tag, 2, 7).unwrap();
            assert_eq!(cal.coeffs, ints([9, -18, 9, 36, 36, -36]), "{}", tag.name());
            assert_eq!(cal.flip_sign, 1);
        }
    }

    #[test]
    fn gradient_relations_contain_calibrated_vector() {
        let null = gradient_relation_nullspace(AlgebraTag::COMPLEX, 3, 11);
        // The cone also lies on 3αβ = ⟨A,B⟩, whose square is singular there.
        assert_eq!(null.len(), 3);
        let mut rows: Vec<Vec<GaussRat>> = null.iter().map(|c| c.0.to_vec()).collect();
        let before = Matrix::from_rows(&rows).rank();
        rows.push(ints([9, -18, 9, 36, 36, -36]).0.to_vec());
        assert_eq!(Matrix::from_rows(&rows).rank(), before);
    }
}
