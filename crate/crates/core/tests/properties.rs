//! Property tests for the algebraic identities and the stated invariants.

use std::sync::OnceLock;

use proptest::prelude::*;

use magica_core::compalg::{AlgebraTag, CdElement};
use magica_core::context::AlgebraContext;
use magica_core::exactnum::{GaussRat, Rat, ScalarSampler};
use magica_core::freudenthal::{eval_quartic, phi_hat, tangent_space_point, FtsVector, LinOp, Quartic, QuarticCoeffs};
use magica_core::jet::{line_jet, PolyMap};
use magica_core::jordan::JordanElement;
use magica_core::strata::{classify, sample_stratum, StratumLabel};
use magica_core::tancone::{multiplicity, CubicNorm};

fn tags() -> impl Strategy<Value = AlgebraTag> {
    prop::sample::select(AlgebraTag::ALL.to_vec())
}

fn small_tags() -> impl Strategy<Value = AlgebraTag> {
    prop::sample::select(vec![AlgebraTag::REAL, AlgebraTag::COMPLEX, AlgebraTag::QUATERNION])
}

fn q_cal() -> QuarticCoeffs {
    QuarticCoeffs([9, -18, 9, 36, 36, -36].map(GaussRat::from_int))
}

fn contexts() -> &'static [AlgebraContext] {
    static CTX: OnceLock<Vec<AlgebraContext>> = OnceLock::new();
    CTX.get_or_init(|| {
        [AlgebraTag::REAL, AlgebraTag::COMPLEX, AlgebraTag::QUATERNION]
            .into_iter()
            .map(|t| AlgebraContext::new(t, 0).unwrap())
            .collect()
    })
}

fn ctx(tag: AlgebraTag) -> &'static AlgebraContext {
    contexts().iter().find(|c| c.tag() == tag).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rat::new(a, b);
        let y = Rat::new(c, d);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Rat>().unwrap(), x);
    }

    #[test]
    fn gauss_text_round_trip(seed in any::<u64>()) {
        let z = ScalarSampler::new(seed, 40).scalar();
        prop_assert_eq!(z.to_string().parse::<GaussRat>().unwrap(), z);
    }

    #[test]
    fn composition_and_alternativity(tag in tags(), seed in any::<u64>()) {
        let mut rng = ScalarSampler::new(seed, 5);
        let x = CdElement::random(tag, &mut rng);
        let y = CdElement::random(tag, &mut rng);
        let z = CdElement::random(tag, &mut rng);
        prop_assert_eq!(x.mul(&y).norm(), &x.norm() * &y.norm());
        prop_assert_eq!(x.mul(&x).mul(&y), x.mul(&x.mul(&y)));
        prop_assert_eq!(y.mul(&x).mul(&x), y.mul(&x.mul(&x)));
        prop_assert_eq!(x.mul(&y).mul(&z).trace(), x.mul(&y.mul(&z)).trace());
        prop_assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
    }

    #[test]
    fn cubic_norm_identities(tag in tags(), seed in any::<u64>()) {
        let mut rng = ScalarSampler::new(seed, 5);
        let a = JordanElement::random(tag, &mut rng);
        let n = a.det();
        let s = a.sharp();
        prop_assert_eq!(s.pair(&a), &GaussRat::from_int(3) * &n);
        prop_assert_eq!(s.sharp(), a.scale(&n));
        prop_assert_eq!(s.det(), &n * &n);
        prop_assert_eq!(a.cross(&a), s.scale(&GaussRat::from_int(2)));
    }

    #[test]
    fn quartic_homogeneity(tag in tags(), seed in any::<u64>()) {
        let mut rng = ScalarSampler::new(seed, 4);
        let x = FtsVector::random(tag, &mut rng);
        let c = rng.scalar();
        let q = eval_quartic(&q_cal(), &x);
        prop_assert_eq!(eval_quartic(&q_cal(), &x.scale(&c)), &c.pow(4) * &q);
        prop_assert_eq!(eval_quartic(&q_cal(), &x.graded(&c)), &c.pow(6) * &q);
        prop_assert_eq!(eval_quartic(&q_cal(), &x.flip()), q);
    }

    #[test]
    fn jets_are_complete(tag in small_tags(), seed in any::<u64>()) {
        let mut rng = ScalarSampler::new(seed, 3);
        let q = Quartic::new(tag, q_cal());
        let x = FtsVector::random_int(tag, &mut rng).to_flat();
        let v = FtsVector::random_int(tag, &mut rng).to_flat();
        let jet = line_jet(&q, &x, &v, 4).unwrap();
        let sum: GaussRat = jet.coeffs().iter().cloned().sum();
        let xv: Vec<GaussRat> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert_eq!(sum, q.eval(&xv));
        prop_assert_eq!(jet.coeff(0), q.eval(&x));
    }

    #[test]
    fn phi_and_tangent_points_are_on_the_quartic(tag in tags(), seed in any::<u64>()) {
        let mut rng = ScalarSampler::new(seed, 4);
        let a = JordanElement::random(tag, &mut rng);
        let alpha = rng.nonzero_gauss_int();
        prop_assert!(eval_quartic(&q_cal(), &phi_hat(&alpha, &a).unwrap()).is_zero());
        prop_assert!(eval_quartic(&q_cal(), &tangent_space_point(&a, &mut rng)).is_zero());
    }

    #[test]
    fn multiplicity_is_scale_invariant(seed in any::<u64>()) {
        let tag = AlgebraTag::COMPLEX;
        let mut rng = ScalarSampler::new(seed, 3);
        let x = JordanElement::e(tag, 0).add(&JordanElement::e(tag, 1));
        let c = rng.nonzero_gauss_int();
        let mode = magica_core::jet::CertMode::Randomized { trials: 3 };
        let m1 = multiplicity(&CubicNorm(tag), &x.to_flat(), mode, &mut rng).unwrap();
        let m2 = multiplicity(&CubicNorm(tag), &x.scale(&c).to_flat(), mode, &mut rng).unwrap();
        prop_assert_eq!(m1, m2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transvections_form_a_group(tag in small_tags(), seed in any::<u64>()) {
        let cx = ctx(tag);
        let mut rng = ScalarSampler::new(seed, 2);
        let c = JordanElement::random_int(tag, &mut rng);
        let d = JordanElement::random_int(tag, &mut rng);
        let lc = cx.transvection(&c).unwrap();
        prop_assert_eq!(lc.compose(&cx.transvection(&d).unwrap()), cx.transvection(&c.add(&d)).unwrap());
        prop_assert!(lc.compose(&cx.transvection(&c.scale(&GaussRat::from_int(-1))).unwrap()).is_identity());
        let x = FtsVector::random_int(tag, &mut rng);
        prop_assert_eq!(eval_quartic(cx.coeffs(), &lc.apply(&x)), eval_quartic(cx.coeffs(), &x));
        let ld = cx.dual_transvection(&d).unwrap();
        prop_assert_eq!(eval_quartic(cx.coeffs(), &ld.apply(&x)), eval_quartic(cx.coeffs(), &x));
    }

    #[test]
    fn classifier_is_equivariant(tag in small_tags(), seed in any::<u64>(), which in 0usize..4) {
        let cx = ctx(tag);
        let label = [StratumLabel::ClosedOrbitG, StratumLabel::SigmaPlus, StratumLabel::TauSmooth, StratumLabel::Ambient][which];
        let mut rng = ScalarSampler::new(seed, 2);
        let x = sample_stratum(cx, label, seed).unwrap();
        let g = LinOp::grading(tag, &rng.nonzero_gauss_int()).compose(&cx.random_word(2, &mut rng).unwrap());
        let y = g.apply(&x).scale(&rng.nonzero_gauss_int());
        prop_assert_eq!(classify(cx.coeffs(), &x).unwrap(), label);
        prop_assert_eq!(classify(cx.coeffs(), &y).unwrap(), label);
    }

    #[test]
    fn samplers_are_reproducible(tag in small_tags(), seed in any::<u64>()) {
        let cx = ctx(tag);
        for label in [StratumLabel::ClosedOrbitG, StratumLabel::SigmaPlus, StratumLabel::TauSmooth, StratumLabel::Ambient] {
            prop_assert_eq!(sample_stratum(cx, label, seed).unwrap(), sample_stratum(cx, label, seed).unwrap());
        }
    }
}
