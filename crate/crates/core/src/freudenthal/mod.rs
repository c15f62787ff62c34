//! The Freudenthal space `V = ℂ ⊕ W ⊕ W* ⊕ ℂ` with coordinates `(α, A, B, β)`.
//!
//! Flat coordinates are ordered `(α, A-coords, B-coords, β)`, `6𝔞 + 8` in all.

mod calibrate;
mod polar;
mod quartic;
mod symmetry;

pub use calibrate::{calibrate_quartic, calibrate_with, flip_sign, gradient_relation_nullspace, Calibration};
pub use polar::{f_combination, polar_cubic, FCombination, PolarCubic};
pub use quartic::{eval_quartic, gradient_hessian, Monomial, Quartic, QuarticCoeffs, MONOMIAL_NAMES};
pub use symmetry::{
    derive_transvection, symmetry_ops, LinOp, ParamDeriver, Parameterization, SymmetryKind,
};

use serde::{Deserialize, Serialize};

use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::jordan::JordanElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FtsWire", into = "FtsWire")]
pub struct FtsVector {
    pub alpha: GaussRat,
    pub a: JordanElement,
    pub b: JordanElement,
    pub beta: GaussRat,
}

#[derive(Clone, Serialize, Deserialize)]
struct FtsWire {
    alpha: GaussRat,
    #[serde(rename = "A")]
    a: JordanElement,
    #[serde(rename = "B")]
    b: JordanElement,
    beta: GaussRat,
}

impl TryFrom<FtsWire> for FtsVector {
    type Error = Error;
    fn try_from(w: FtsWire) -> Result<Self> {
        FtsVector::new(w.alpha, w.a, w.b, w.beta)
    }
}

impl From<FtsVector> for FtsWire {
    fn from(x: FtsVector) -> Self {
        FtsWire { alpha: x.alpha, a: x.a, b: x.b, beta: x.beta }
    }
}

impl FtsVector {
    pub fn new(alpha: GaussRat, a: JordanElement, b: JordanElement, beta: GaussRat) -> Result<Self> {
        a.tag().check(b.tag())?;
        Ok(FtsVector { alpha, a, b, beta })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        FtsVector {
            alpha: GaussRat::zero(),
            a: JordanElement::zero(tag),
            b: JordanElement::zero(tag),
            beta: GaussRat::zero(),
        }
    }

    /// The highest-weight point `x₀ = (1, 0, 0, 0)`.
    pub fn x0(tag: AlgebraTag) -> Self {
        FtsVector { alpha: GaussRat::one(), ..FtsVector::zero(tag) }
    }

    pub fn random(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        FtsVector {
            alpha: rng.scalar(),
            a: JordanElement::random(tag, rng),
            b: JordanElement::random(tag, rng),
            beta: rng.scalar(),
        }
    }

    pub fn random_int(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        FtsVector {
            alpha: rng.gauss_int(),
            a: JordanElement::random_int(tag, rng),
            b: JordanElement::random_int(tag, rng),
            beta: rng.gauss_int(),
        }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.a.tag()
    }

    /// `6𝔞 + 8`.
    pub fn coord_dim(tag: AlgebraTag) -> usize {
        2 * JordanElement::coord_dim(tag) + 2
    }

    pub fn to_flat(&self) -> Vec<GaussRat> {
        let mut v = Vec::with_capacity(FtsVector::coord_dim(self.tag()));
        v.push(self.alpha.clone());
        v.extend(self.a.to_flat());
        v.extend(self.b.to_flat());
        v.push(self.beta.clone());
        v
    }

    pub fn from_flat(tag: AlgebraTag, v: &[GaussRat]) -> Result<Self> {
        let n = FtsVector::coord_dim(tag);
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let w = JordanElement::coord_dim(tag);
        Ok(FtsVector {
            alpha: v[0].clone(),
            a: JordanElement::from_flat(tag, &v[1..1 + w])?,
            b: JordanElement::from_flat(tag, &v[1 + w..1 + 2 * w])?,
            beta: v[n - 1].clone(),
        })
    }

    /// Flat index of the β coordinate.
    pub fn beta_index(tag: AlgebraTag) -> usize {
        FtsVector::coord_dim(tag) - 1
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.a.is_zero() && self.b.is_zero() && self.beta.is_zero()
    }

    pub fn add(&self, o: &FtsVector) -> FtsVector {
        FtsVector {
            alpha: &self.alpha + &o.alpha,
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            beta: &self.beta + &o.beta,
        }
    }

    pub fn sub(&self, o: &FtsVector) -> FtsVector {
        FtsVector {
            alpha: &self.alpha - &o.alpha,
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            beta: &self.beta - &o.beta,
        }
    }

    pub fn scale(&self, s: &GaussRat) -> FtsVector {
        FtsVector { alpha: &self.alpha * s, a: self.a.scale(s), b: self.b.scale(s), beta: &self.beta * s }
    }

    /// The flip `(α, A, B, β) ↦ (β, B, A, α)`.
    pub fn flip(&self) -> FtsVector {
        FtsVector { alpha: self.beta.clone(), a: self.b.clone(), b: self.a.clone(), beta: self.alpha.clone() }
    }

    /// Grading scaling `(α, λA, λ²B, λ³β)`.
    pub fn graded(&self, lambda: &GaussRat) -> FtsVector {
        let l2 = lambda * lambda;
        FtsVector {
            alpha: self.alpha.clone(),
            a: self.a.scale(lambda),
            b: self.b.scale(&l2),
            beta: &self.beta * &(&l2 * lambda),
        }
    }
}

/// Affine-cone parameterization `φ̂(α, A) = (α³, α²A, α A#, N(A))` of the
/// closed orbit.
pub fn phi_hat(alpha: &GaussRat, a: &JordanElement) -> Result<FtsVector> {
    if alpha.is_zero() && a.is_zero() {
        return Err(Error::DegenerateInput("φ̂ at the origin"));
    }
    Ok(phi_hat_unchecked(alpha, a))
}

pub(crate) fn phi_hat_unchecked(alpha: &GaussRat, a: &JordanElement) -> FtsVector {
    let a2 = alpha * alpha;
    FtsVector { alpha: &a2 * alpha, a: a.scale(&a2), b: a.sharp().scale(alpha), beta: a.det() }
}

/// The flipped parameterization `ψ̂ = σ ∘ φ̂`.
pub fn psi_hat(beta: &GaussRat, b: &JordanElement) -> Result<FtsVector> {
    Ok(phi_hat(beta, b)?.flip())
}

/// `φ̂` on flat source coordinates `(α, A-coords)`, for Jacobians.
pub fn phi_hat_flat(tag: AlgebraTag, src: &[GaussRat]) -> Vec<GaussRat> {
    let a = JordanElement::from_flat(tag, &src[1..]).expect("source coordinates");
    phi_hat_unchecked(&src[0], &a).to_flat()
}

/// A random point of the embedded tangent space to the cone over the closed
/// orbit at `φ̂(1, A)`: `c₀ φ̂(1,A) + c_α ∂_α φ̂ + Σ cᵢ ∂_{Eᵢ} φ̂`.
pub fn tangent_space_point(a: &JordanElement, rng: &mut ScalarSampler) -> FtsVector {
    let tag = a.tag();
    let one = GaussRat::one();
    let base = phi_hat_unchecked(&one, a);
    let sharp = a.sharp();
    // ∂_α φ̂ at α = 1 is (3, 2A, A#, 0).
    let d_alpha = FtsVector {
        alpha: GaussRat::from_int(3),
        a: a.scale(&GaussRat::from_int(2)),
        b: sharp.clone(),
        beta: GaussRat::zero(),
    };
    let mut p = base.scale(&rng.gauss_int()).add(&d_alpha.scale(&rng.gauss_int()));
    // ∂_A φ̂ [E] at α = 1 is (0, E, A × E, ⟨A#, E⟩); summing over a random E.
    let e = JordanElement::random_int(tag, rng);
    let d_a = FtsVector { alpha: GaussRat::zero(), a: e.clone(), b: a.cross(&e), beta: sharp.pair(&e) };
    p = p.add(&d_a);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_hat_at_simple_points() {
        for tag in AlgebraTag::ALL {
            let one = GaussRat::one();
            assert_eq!(phi_hat(&one, &JordanElement::zero(tag)).unwrap(), FtsVector::x0(tag));
            let i = JordanElement::identity(tag);
            assert_eq!(
                phi_hat(&one, &i).unwrap(),
                FtsVector { alpha: one.clone(), a: i.clone(), b: i.clone(), beta: one.clone() }
            );
            assert!(phi_hat(&GaussRat::zero(), &JordanElement::zero(tag)).is_err());
        }
    }

    #[test]
    fn flat_layout() {
        let tag = AlgebraTag::COMPLEX;
        assert_eq!(FtsVector::coord_dim(tag), 20);
        let mut rng = ScalarSampler::new(1, 5);
        let x = FtsVector::random(tag, &mut rng);
        let f = x.to_flat();
        assert_eq!(f[0], x.alpha);
        assert_eq!(f[FtsVector::beta_index(tag)], x.beta);
        assert_eq!(FtsVector::from_flat(tag, &f).unwrap(), x);
        assert_eq!(x.flip().flip(), x);
    }

    #[test]
    fn json_keys() {
        let x = FtsVector::x0(AlgebraTag::REAL);
        let v: serde_json::Value = serde_json::to_value(&x).unwrap();
        for k in ["alpha", "A", "B", "beta"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
        let back: FtsVector = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
    }
}
