//! Orbit strata of `P(V)`: classification by the local shape of the
//! quartic, samplers for each stratum, and dimension counts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compalg::{AlgebraTag, CdElement};
use crate::context::AlgebraContext;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::freudenthal::{
    eval_quartic, gradient_hessian, phi_hat_flat, phi_hat_unchecked, tangent_space_point, FtsVector, ParamDeriver,
    Quartic, QuarticCoeffs,
};
use crate::jet::{gradient, unit, vector_line_jet};
use crate::jordan::JordanElement;
use crate::linalg::{Matrix, SpanBuilder};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumLabel {
    Zero,
    ClosedOrbitG,
    SigmaPlus,
    TauSmooth,
    Ambient,
}

impl StratumLabel {
    pub const ALL: [StratumLabel; 5] = [
        StratumLabel::Zero,
        StratumLabel::ClosedOrbitG,
        StratumLabel::SigmaPlus,
        StratumLabel::TauSmooth,
        StratumLabel::Ambient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StratumLabel::Zero => "Zero",
            StratumLabel::ClosedOrbitG => "ClosedOrbitG",
            StratumLabel::SigmaPlus => "SigmaPlus",
            StratumLabel::TauSmooth => "TauSmooth",
            StratumLabel::Ambient => "Ambient",
        }
    }
}

impl std::str::FromStr for StratumLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StratumLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown stratum {s:?}")))
    }
}

/// Everything `classify` looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: StratumLabel,
    pub q_value: GaussRat,
    pub gradient_zero: bool,
    /// Only computed at singular points.
    pub hessian_rank: Option<usize>,
}

fn gradient_vec(c: &QuarticCoeffs, x: &FtsVector) -> Vec<GaussRat> {
    gradient(&Quartic::new(x.tag(), c.clone()), &x.to_flat())
}

pub fn classify_detailed(c: &QuarticCoeffs, x: &FtsVector) -> Result<Classification> {
    let q_value = eval_quartic(c, x);
    let mut out = Classification { label: StratumLabel::Zero, q_value, gradient_zero: true, hessian_rank: None };
    if x.is_zero() {
        return Ok(out);
    }
    if !out.q_value.is_zero() {
        out.label = StratumLabel::Ambient;
        out.gradient_zero = gradient_vec(c, x).iter().all(GaussRat::is_zero);
        return Ok(out);
    }
    let (g, h) = gradient_hessian(c, x);
    out.gradient_zero = g.is_zero();
    if !out.gradient_zero {
        out.label = StratumLabel::TauSmooth;
        return Ok(out);
    }
    let r = h.rank();
    out.hessian_rank = Some(r);
    out.label = singular_label(x.tag(), r)?;
    Ok(out)
}

/// Label of a nonzero singular point of `{Q = 0}` from its Hessian rank.
pub fn singular_label(tag: AlgebraTag, hessian_rank: usize) -> Result<StratumLabel> {
    match hessian_rank {
        1 => Ok(StratumLabel::ClosedOrbitG),
        r if r == tag.dim() + 3 => Ok(StratumLabel::SigmaPlus),
        r => Err(Error::UnexpectedSignature { rank: r }),
    }
}

/// Stratum of `x` from the value, gradient and Hessian rank of `Q` there.
pub fn classify(c: &QuarticCoeffs, x: &FtsVector) -> Result<StratumLabel> {
    classify_detailed(c, x).map(|d| d.label)
}

const RESAMPLE_LIMIT: usize = 64;
const WORD_LENGTH: usize = 3;

/// A rank-2 element as the sum of two random rank-1 Gram elements.
pub fn random_rank2(tag: AlgebraTag, rng: &mut ScalarSampler) -> Result<JordanElement> {
    for _ in 0..RESAMPLE_LIMIT {
        let mut gram = || {
            JordanElement::gram_rank1(
                &CdElement::random_int(tag, rng),
                &CdElement::random_int(tag, rng),
                &rng.gauss_int(),
            )
        };
        let (Ok(x1), Ok(x2)) = (gram(), gram()) else {
            continue;
        };
        let s = x1.add(&x2);
        if s.rank() == 2 {
            return Ok(s);
        }
    }
    Err(Error::ResampleLimit(RESAMPLE_LIMIT))
}

/// A rank-1 element `Gram(u₁, u₂, t)` with random integer data.
pub fn random_rank1(tag: AlgebraTag, rng: &mut ScalarSampler) -> Result<JordanElement> {
    for _ in 0..RESAMPLE_LIMIT {
        let g = JordanElement::gram_rank1(
            &CdElement::random_int(tag, rng),
            &CdElement::random_int(tag, rng),
            &rng.gauss_int(),
        );
        if let Ok(g) = g {
            return Ok(g);
        }
    }
    Err(Error::ResampleLimit(RESAMPLE_LIMIT))
}

/// A random point of the given stratum, reproducible from `seed`.
///
/// Closed-orbit and σ₊ points are moved by a random symmetry word; their
/// singularity is checked exactly, while the Hessian signature is left to
/// `classify`.
pub fn sample_stratum(ctx: &AlgebraContext, label: StratumLabel, seed: u64) -> Result<FtsVector> {
    let tag = ctx.tag();
    let c = ctx.coeffs();
    let mut rng = ScalarSampler::new(seed, 3);
    for _ in 0..RESAMPLE_LIMIT {
        let x = match label {
            StratumLabel::Zero => return Err(Error::DegenerateInput("the zero stratum has no samples")),
            StratumLabel::ClosedOrbitG => {
                let p = phi_hat_unchecked(&rng.nonzero_gauss_int(), &JordanElement::random_int(tag, &mut rng));
                ctx.random_word(WORD_LENGTH, &mut rng)?.apply(&p)
            }
            StratumLabel::SigmaPlus => {
                let a = random_rank2(tag, &mut rng)?;
                let p = FtsVector { alpha: GaussRat::zero(), a, b: JordanElement::zero(tag), beta: GaussRat::zero() };
                ctx.random_word(WORD_LENGTH, &mut rng)?.apply(&p)
            }
            StratumLabel::TauSmooth => tangent_space_point(&JordanElement::random_int(tag, &mut rng), &mut rng),
            StratumLabel::Ambient => FtsVector::random_int(tag, &mut rng),
        };
        if x.is_zero() {
            continue;
        }
        let q_zero = eval_quartic(c, &x).is_zero();
        let accept = match label {
            StratumLabel::Ambient => !q_zero,
            StratumLabel::TauSmooth => q_zero && !gradient_vec(c, &x).iter().all(GaussRat::is_zero),
            _ => q_zero && gradient_vec(c, &x).iter().all(GaussRat::is_zero),
        };
        if accept {
            return Ok(x);
        }
    }
    Err(Error::ResampleLimit(RESAMPLE_LIMIT))
}

/// Rank of the Jacobian of `φ̂` at `(α, A)`, from degree-1 jet coefficients.
pub fn jacobian_rank_phi(alpha: &GaussRat, a: &JordanElement) -> usize {
    let tag = a.tag();
    let mut src = vec![alpha.clone()];
    src.extend(a.to_flat());
    let m = src.len();
    let cols: Vec<Vec<GaussRat>> = (0..m)
        .into_par_iter()
        .map(|i| {
            vector_line_jet(|s| phi_hat_flat(tag, s), &src, &unit(m, i), 3).iter().map(|j| j.coeff(1)).collect()
        })
        .collect();
    Matrix::from_cols(&cols).rank()
}

/// A basis of the Lie algebra generated by the infinitesimal transvections.
#[derive(Clone, Debug)]
pub struct LieClosure {
    pub tag: AlgebraTag,
    pub basis: Vec<Matrix>,
}

impl LieClosure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Close `{ℓ_C, ℓ′_D}` over basis `C, D` of `W` under commutators.
pub fn lie_closure(phi: &ParamDeriver, psi: &ParamDeriver) -> Result<LieClosure> {
    let tag = phi.tag();
    let n = FtsVector::coord_dim(tag);
    let w = JordanElement::coord_dim(tag);
    let bound = n * n;
    let gens: Vec<Matrix> = (0..2 * w)
        .into_par_iter()
        .map(|k| {
            if k < w {
                phi.infinitesimal(&JordanElement::basis(tag, k))
            } else {
                psi.infinitesimal(&JordanElement::basis(tag, k - w))
            }
        })
        .collect::<Result<_>>()?;
    let mut span = SpanBuilder::new(bound);
    let mut basis = Vec::new();
    for g in &gens {
        if span.insert(&g.flatten()) {
            basis.push(g.clone());
        }
    }
    let mut i = 0;
    while i < basis.len() {
        let brackets: Vec<Matrix> = gens.par_iter().map(|g| basis[i].commutator(g)).collect();
        for b in brackets {
            if !b.is_zero() && span.insert(&b.flatten()) {
                basis.push(b);
                if basis.len() > bound {
                    return Err(Error::ClosureDivergence(basis.len()));
                }
            }
        }
        i += 1;
    }
    Ok(LieClosure { tag, basis })
}

/// Dimension of the Lie closure for `tag`, with derivers seeded by `seed`.
pub fn lie_closure_dim(tag: AlgebraTag, seed: u64) -> Result<usize> {
    Ok(AlgebraContext::new(tag, seed)?.closure()?.dim())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDim {
    pub dim: usize,
    /// Whether `x` itself already lies in `{M x}`.
    pub euler_in_span: bool,
}

/// Dimension of the tangent space `{M x} + ℂ x` to the affine orbit.
pub fn orbit_dim(closure: &LieClosure, x: &FtsVector) -> Result<OrbitDim> {
    if x.is_zero() {
        return Err(Error::DegenerateInput("orbit of zero"));
    }
    let flat = x.to_flat();
    let images = orbit_tangent(closure, x);
    let mut span = SpanBuilder::new(flat.len());
    for v in &images {
        span.insert(v);
    }
    let euler_in_span = span.contains(&flat);
    Ok(OrbitDim { dim: span.dim() + usize::from(!euler_in_span), euler_in_span })
}

/// The vectors `M x` for `M` in the closure basis.
pub fn orbit_tangent(closure: &LieClosure, x: &FtsVector) -> Vec<Vec<GaussRat>> {
    let flat = x.to_flat();
    closure.basis.par_iter().map(|m| m.mul_vec(&flat)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(tag: AlgebraTag) -> AlgebraContext {
        AlgebraContext::new(tag, 3).unwrap()
    }

    #[test]
    fn basic_classification() {
        for tag in [AlgebraTag::REAL, AlgebraTag::COMPLEX] {
            let cx = ctx(tag);
            let c = cx.coeffs();
            assert_eq!(classify(c, &FtsVector::zero(tag)).unwrap(), StratumLabel::Zero);
            assert_eq!(classify(c, &FtsVector::x0(tag)).unwrap(), StratumLabel::ClosedOrbitG);
            let e = JordanElement::e(tag, 0).add(&JordanElement::e(tag, 1));
            let s = FtsVector { alpha: GaussRat::zero(), a: e, b: JordanElement::zero(tag), beta: GaussRat::zero() };
            let d = classify_detailed(c, &s).unwrap();
            assert_eq!(d.label, StratumLabel::SigmaPlus);
            assert_eq!(d.hessian_rank, Some(tag.dim() + 3));
        }
    }

    #[test]
    fn samplers_round_trip() {
        let cx = ctx(AlgebraTag::COMPLEX);
        for label in [StratumLabel::ClosedOrbitG, StratumLabel::SigmaPlus, StratumLabel::TauSmooth, StratumLabel::Ambient]
        {
            for seed in 0..3 {
                let x = sample_stratum(&cx, label, seed).unwrap();
                assert_eq!(classify(cx.coeffs(), &x).unwrap(), label);
                assert_eq!(sample_stratum(&cx, label, seed).unwrap(), x);
            }
        }
        assert!(sample_stratum(&cx, StratumLabel::Zero, 0).is_err());
    }

    #[test]
    fn jacobian_rank_at_identity() {
        for tag in [AlgebraTag::REAL, AlgebraTag::COMPLEX, AlgebraTag::QUATERNION] {
            let r = jacobian_rank_phi(&GaussRat::one(), &JordanElement::identity(tag));
            assert_eq!(r, 3 * tag.dim() + 4);
            assert_eq!(jacobian_rank_phi(&GaussRat::one(), &JordanElement::zero(tag)), 3 * tag.dim() + 4);
        }
    }

    #[test]
    fn closure_and_orbits_for_reals() {
        let cx = ctx(AlgebraTag::REAL);
        let cl = cx.closure().unwrap();
        assert_eq!(cl.dim(), 21);
        assert_eq!(orbit_dim(cl, &FtsVector::x0(AlgebraTag::REAL)).unwrap().dim, 7);
    }
}
