//! Multiplicities and leading forms of hypersurfaces at points.

use serde::{Deserialize, Serialize};

use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::freudenthal::{f_combination, polar_cubic, FtsVector, Quartic, QuarticCoeffs};
use crate::jet::{certify_zero_form, gradient, hessian, line_jet_unchecked, CertMode, PolyMap};
use crate::jordan::JordanElement;
use crate::linalg::Matrix;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeProfile {
    pub multiplicity: usize,
    pub hessian_rank: usize,
    pub kernel_dim: usize,
}

/// Smallest `k` with `Φ_k` not identically zero at `x`; 0 when `P(x) ≠ 0`.
pub fn multiplicity<P: PolyMap + ?Sized>(
    p: &P,
    x: &[GaussRat],
    mode: CertMode,
    rng: &mut ScalarSampler,
) -> Result<usize> {
    if !p.eval(x).is_zero() {
        return Ok(0);
    }
    let d = p.degree();
    for k in 1..=d {
        let w = certify_zero_form(p.dim(), k, mode, rng, |v| line_jet_unchecked(p, x, v, d).coeff(k))?;
        if w.is_some() {
            return Ok(k);
        }
    }
    Err(Error::DegenerateInput("form vanishes identically along every sampled line"))
}

/// Profile of `P` at a point of `{P = 0}`. Gradient and Hessian are exact;
/// higher multiplicities (zero Hessian) are certified with `mode`.
pub fn cone_profile<P: PolyMap + ?Sized>(
    p: &P,
    x: &[GaussRat],
    mode: CertMode,
    rng: &mut ScalarSampler,
) -> Result<ConeProfile> {
    if !p.eval(x).is_zero() {
        return Err(Error::DegenerateInput("point is not on the hypersurface"));
    }
    let h = hessian(p, x);
    let hessian_rank = h.rank();
    let kernel_dim = p.dim() - hessian_rank;
    let multiplicity = if !gradient(p, x).iter().all(GaussRat::is_zero) {
        1
    } else if hessian_rank > 0 {
        2
    } else {
        multiplicity(p, x, mode, rng)?
    };
    Ok(ConeProfile { multiplicity, hessian_rank, kernel_dim })
}

/// Profile of the quartic at `x`.
pub fn hessian_profile(c: &QuarticCoeffs, x: &FtsVector, mode: CertMode, rng: &mut ScalarSampler) -> Result<ConeProfile> {
    cone_profile(&Quartic::new(x.tag(), c.clone()), &x.to_flat(), mode, rng)
}

/// The cubic norm `N` on flat coordinates of `W`.
#[derive(Copy, Clone, Debug)]
pub struct CubicNorm(pub AlgebraTag);

impl PolyMap for CubicNorm {
    fn dim(&self) -> usize {
        JordanElement::coord_dim(self.0)
    }

    fn degree(&self) -> usize {
        3
    }

    fn eval(&self, x: &[GaussRat]) -> GaussRat {
        JordanElement::from_flat(self.0, x).expect("flat element of the right length").det()
    }
}

/// Profile of `N` at a rank-1 element of `W`.
pub fn secant_cone_rank(x: &JordanElement) -> Result<ConeProfile> {
    let r = x.rank();
    if r != 1 {
        return Err(Error::RankPreconditionViolated(r));
    }
    // N has a nonzero Hessian at rank-1 points, so no certification is needed.
    let mut rng = ScalarSampler::new(0, 2);
    cone_profile(&CubicNorm(x.tag()), &x.to_flat(), CertMode::Randomized { trials: 1 }, &mut rng)
}

/// Counterexamples from the polar checks at `x₀`; `None` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarConeReport {
    /// `Φ₁` of `H_p` at `x₀` along `v` equals `18 p₃ β_v`.
    pub polar_linear_term: Option<Vec<GaussRat>>,
    /// `Φ₂` of `f` at `x₀` vanishes.
    pub f_quadratic_term: Option<Vec<GaussRat>>,
    /// `Φ₃` of `f` on `β_v = 0` equals `2 p₃ c₅ N(B_v)`.
    pub f_cubic_term: Option<Vec<GaussRat>>,
    /// `Φ₃` of `f` on `β_v = 0` does not depend on `A_v`.
    pub f_cubic_a_free: Option<Vec<GaussRat>>,
    /// `∇H_p(x) = Hess Q(x) · p` at a random `x`.
    pub gradient_pairing: Option<Vec<GaussRat>>,
}

impl PolarConeReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names and counterexamples of the failed checks.
    pub fn failures(&self) -> Vec<(&'static str, &Vec<GaussRat>)> {
        [
            ("polar_linear_term", &self.polar_linear_term),
            ("f_quadratic_term", &self.f_quadratic_term),
            ("f_cubic_term", &self.f_cubic_term),
            ("f_cubic_a_free", &self.f_cubic_a_free),
            ("gradient_pairing", &self.gradient_pairing),
        ]
        .into_iter()
        .filter_map(|(n, w)| w.as_ref().map(|w| (n, w)))
        .collect()
    }
}

/// Leading forms of `H_p` and of `f = 2p₃Q − (β + ⟨A,B⟩/(3p₃))H_p` at `x₀`.
pub fn polar_cone_at_x0(
    c: &QuarticCoeffs,
    p: &FtsVector,
    mode: CertMode,
    rng: &mut ScalarSampler,
) -> Result<PolarConeReport> {
    let tag = p.tag();
    let n = FtsVector::coord_dim(tag);
    let bi = FtsVector::beta_index(tag);
    let w = JordanElement::coord_dim(tag);
    let x0 = FtsVector::x0(tag).to_flat();
    let h = polar_cubic(c, p)?;
    let f = f_combination(c, p)?;
    let p3 = &p.beta;
    let mut report = PolarConeReport::default();

    // Φ₁ is linear in v, so the basis directions decide it.
    let eighteen_p3 = &GaussRat::from_int(18) * p3;
    for i in 0..n {
        let v = crate::jet::unit(n, i);
        let expect = if i == bi { eighteen_p3.clone() } else { GaussRat::zero() };
        if line_jet_unchecked(&h, &x0, &v, 3).coeff(1) != expect {
            report.polar_linear_term = Some(v);
            break;
        }
    }

    report.f_quadratic_term = certify_zero_form(n, 2, mode, rng, |v| line_jet_unchecked(&f, &x0, v, 5).coeff(2))?;

    // Directions with β_v = 0, written on the remaining n − 1 coordinates.
    let lift = |u: &[GaussRat]| {
        let mut v = u.to_vec();
        v.insert(bi, GaussRat::zero());
        v
    };
    let phi3 = |v: &[GaussRat]| line_jet_unchecked(&f, &x0, v, 5).coeff(3);
    let scale = &(&(p3 + p3) * &c.0[4]);
    report.f_cubic_term = certify_zero_form(n - 1, 3, mode, rng, |u| {
        let v = lift(u);
        let b = JordanElement::from_flat(tag, &v[1 + w..1 + 2 * w]).expect("B block");
        &phi3(&v) - &(scale * &b.det())
    })?
    .map(|u| lift(&u));
    report.f_cubic_a_free = certify_zero_form(n - 1, 3, mode, rng, |u| {
        let v = lift(u);
        let mut v_no_a = v.clone();
        for x in &mut v_no_a[1..1 + w] {
            *x = GaussRat::zero();
        }
        &phi3(&v) - &phi3(&v_no_a)
    })?
    .map(|u| lift(&u));

    let x = FtsVector::random_int(tag, rng).to_flat();
    let grad_h = gradient(&h, &x);
    let hess_p = hessian(&Quartic::new(tag, c.clone()), &x).mul_vec(&p.to_flat());
    if grad_h != hess_p {
        report.gradient_pairing = Some(x);
    }
    Ok(report)
}

/// Whether `h v = 0` for every `v`.
pub fn kernel_contains(h: &Matrix, vs: &[Vec<GaussRat>]) -> bool {
    vs.iter().all(|v| h.mul_vec(v).iter().all(GaussRat::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freudenthal::calibrate_quartic;

    #[test]
    fn profile_at_x0_and_secant() {
        for tag in [AlgebraTag::REAL, AlgebraTag::COMPLEX] {
            let c = calibrate_quartic(tag, 2, 1).unwrap().coeffs;
            let mut rng = ScalarSampler::new(4, 3);
            let a = tag.dim();
            let prof = hessian_profile(&c, &FtsVector::x0(tag), CertMode::Randomized { trials: 4 }, &mut rng).unwrap();
            assert_eq!(prof, ConeProfile { multiplicity: 2, hessian_rank: 1, kernel_dim: 6 * a + 7 });
            let e11 = JordanElement::e(tag, 0);
            assert_eq!(
                secant_cone_rank(&e11).unwrap(),
                ConeProfile { multiplicity: 2, hessian_rank: a + 2, kernel_dim: 2 * a + 1 }
            );
            let two = e11.add(&JordanElement::e(tag, 1));
            assert_eq!(secant_cone_rank(&two), Err(Error::RankPreconditionViolated(2)));
        }
    }

    #[test]
    fn multiplicity_of_cubic_norm() {
        let tag = AlgebraTag::COMPLEX;
        let mut rng = ScalarSampler::new(0, 3);
        let two = JordanElement::e(tag, 0).add(&JordanElement::e(tag, 1)).to_flat();
        let mode = CertMode::Randomized { trials: 5 };
        assert_eq!(multiplicity(&CubicNorm(tag), &two, mode, &mut rng).unwrap(), 1);
        let zero = JordanElement::zero(tag).to_flat();
        assert_eq!(multiplicity(&CubicNorm(tag), &zero, mode, &mut rng).unwrap(), 3);
        let one = JordanElement::identity(tag).to_flat();
        assert_eq!(multiplicity(&CubicNorm(tag), &one, mode, &mut rng).unwrap(), 0);
    }

    #[test]
    fn polar_checks_pass() {
        let tag = AlgebraTag::REAL;
        let c = calibrate_quartic(tag, 2, 1).unwrap().coeffs;
        let mut rng = ScalarSampler::new(9, 3);
        let mut p = FtsVector::random_int(tag, &mut rng);
        p.beta = GaussRat::from_int(2);
        let r = polar_cone_at_x0(&c, &p, CertMode::Randomized { trials: 5 }, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
    }
}
