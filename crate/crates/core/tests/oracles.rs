//! Derived values checked against independent closed forms.

use magica_core::compalg::{AlgebraTag, CdElement};
use magica_core::context::AlgebraContext;
use magica_core::exactnum::{GaussRat, ScalarSampler};
use magica_core::freudenthal::{
    calibrate_quartic, eval_quartic, f_combination, gradient_hessian, gradient_relation_nullspace, phi_hat,
    polar_cubic, FtsVector, QuarticCoeffs,
};
use magica_core::jet::{hessian, line_jet};
use magica_core::jordan::JordanElement;
use magica_core::linalg::Matrix;
use magica_core::strata::{jacobian_rank_phi, orbit_dim, sample_stratum, StratumLabel};
use magica_core::tancone::{secant_cone_rank, CubicNorm};

const SMALL: [AlgebraTag; 3] = [AlgebraTag::REAL, AlgebraTag::COMPLEX, AlgebraTag::QUATERNION];

fn int(n: i64) -> GaussRat {
    GaussRat::from_int(n)
}

fn ints(v: [i64; 6]) -> QuarticCoeffs {
    QuarticCoeffs(v.map(GaussRat::from_int))
}

/// The quartic written out by hand: 9(αβ − ⟨A,B⟩)² + 36(βN(A) + αN(B) − ⟨A#,B#⟩).
fn closed_form_q(x: &FtsVector) -> GaussRat {
    let s = &(&x.alpha * &x.beta) - &x.a.pair(&x.b);
    let t = &(&(&x.beta * &x.a.det()) + &(&x.alpha * &x.b.det())) - &x.a.sharp().pair(&x.b.sharp());
    &(&int(9) * &(&s * &s)) + &(&int(36) * &t)
}

/// The transvection written out by hand.
fn closed_form_transvection(c: &JordanElement, x: &FtsVector) -> FtsVector {
    let cs = c.sharp();
    FtsVector {
        alpha: x.alpha.clone(),
        a: x.a.add(&c.scale(&x.alpha)),
        b: x.b.add(&x.a.cross(c)).add(&cs.scale(&x.alpha)),
        beta: &(&(&x.beta + &x.b.pair(c)) + &x.a.pair(&cs)) + &(&x.alpha * &c.det()),
    }
}

#[test]
fn calibrated_quartic_matches_closed_form() {
    let mut rng = ScalarSampler::new(21, 4);
    for tag in SMALL {
        let cal = calibrate_quartic(tag, 2, 5).unwrap();
        assert_eq!(cal.nullspace_dim, 1);
        assert_eq!(cal.flip_sign, 1);
        for _ in 0..20 {
            let x = FtsVector::random(tag, &mut rng);
            assert_eq!(eval_quartic(&cal.coeffs, &x), closed_form_q(&x));
        }
    }
}

#[test]
fn derived_transvections_match_closed_form() {
    let mut rng = ScalarSampler::new(8, 3);
    for tag in AlgebraTag::ALL {
        let ctx = AlgebraContext::new(tag, 2).unwrap();
        for _ in 0..3 {
            let c = JordanElement::random_int(tag, &mut rng);
            let l = ctx.transvection(&c).unwrap();
            let x = FtsVector::random_int(tag, &mut rng);
            assert_eq!(l.apply(&x), closed_form_transvection(&c, &x));
            // L′_D = σ L_D σ.
            let dual = ctx.dual_transvection(&c).unwrap();
            assert_eq!(dual.apply(&x), closed_form_transvection(&c, &x.flip()).flip());
        }
    }
}

#[test]
fn printed_gradient_relations_hold_with_k1_k2_equal_3() {
    // c1 = k1², c2 = −2k1k2, c3 = k2² with k1 = k2 = 3.
    let (k1, k2) = (3i64, 3i64);
    let c = ints([9, -18, 9, 36, 36, -36]);
    assert_eq!(c.0[0], int(k1 * k1));
    assert_eq!(c.0[1], int(-2 * k1 * k2));
    assert_eq!(c.0[2], int(k2 * k2));
    assert_eq!(c.0[3], int(6 * k1 * k2 - 2 * k1 * k1));
    assert_eq!(c.0[5], int(k1 * k1 - 2 * k1 * k2 - 3 * k2 * k2));
    // The relation space contains the hand-derived basis.
    for tag in SMALL {
        let null = gradient_relation_nullspace(tag, 3, 4);
        assert_eq!(null.len(), 3);
        let mut rows: Vec<Vec<GaussRat>> = null.iter().map(|v| v.0.to_vec()).collect();
        for b in [[9, -6, 1, 0, 0, 0], [1, -1, 0, 1, 1, 0], [3, -2, 0, 0, 0, 1]] {
            rows.push(ints(b).0.to_vec());
        }
        assert_eq!(Matrix::from_rows(&rows).rank(), 3);
    }
}

#[test]
fn sigma_plus_hessian_matches_hand_expansion() {
    // At x = (0, E11 + E22, 0, 0) the quadratic part of Q in v = (a, A′, B′, b)
    // is 9(s1 + s2)² + 36 b r3′ − 36(s1 s2 − n(y3)), with s, y from B′ and r′ from A′.
    for tag in SMALL {
        let a = tag.dim();
        let w = JordanElement::coord_dim(tag);
        let n = FtsVector::coord_dim(tag);
        let c = ints([9, -18, 9, 36, 36, -36]);
        let e = JordanElement::e(tag, 0).add(&JordanElement::e(tag, 1));
        let x = FtsVector { alpha: int(0), a: e, b: JordanElement::zero(tag), beta: int(0) };
        let (g, h) = gradient_hessian(&c, &x);
        assert!(g.is_zero());
        let mut want = Matrix::zeros(n, n);
        let (s1, s2) = (1 + w, 2 + w);
        let r3 = 3;
        let beta = n - 1;
        // Hessian = 2 × the quadratic form's matrix.
        want.set(s1, s1, int(18));
        want.set(s2, s2, int(18));
        want.set(s1, s2, int(18 - 36));
        want.set(s2, s1, int(18 - 36));
        want.set(beta, r3, int(36));
        want.set(r3, beta, int(36));
        let y3 = 1 + w + 3 + 2 * a;
        for k in 0..a {
            want.set(y3 + k, y3 + k, int(72));
        }
        assert_eq!(h, want, "algebra {a}");
        assert_eq!(h.rank(), a + 3);
    }
}

#[test]
fn jacobian_rank_matches_analytic_jacobian() {
    let mut rng = ScalarSampler::new(3, 3);
    for tag in AlgebraTag::ALL {
        let alpha = rng.nonzero_gauss_int();
        let a = JordanElement::random_int(tag, &mut rng);
        let w = JordanElement::coord_dim(tag);
        // ∂_α φ̂ = (3α², 2αA, A#, 0), ∂_E φ̂ = (0, α²E, α A×E, ⟨A#,E⟩).
        let mut cols = vec![FtsVector {
            alpha: &int(3) * &(&alpha * &alpha),
            a: a.scale(&(&int(2) * &alpha)),
            b: a.sharp(),
            beta: int(0),
        }
        .to_flat()];
        for k in 0..w {
            let e = JordanElement::basis(tag, k);
            cols.push(
                FtsVector {
                    alpha: int(0),
                    a: e.scale(&(&alpha * &alpha)),
                    b: a.cross(&e).scale(&alpha),
                    beta: a.sharp().pair(&e),
                }
                .to_flat(),
            );
        }
        let r = Matrix::from_cols(&cols).rank();
        assert_eq!(r, 3 * tag.dim() + 4);
        assert_eq!(jacobian_rank_phi(&alpha, &a), r);
    }
}

#[test]
fn lie_closure_matches_classical_dimensions() {
    // dim sp6 = 3·7, dim sl6 = 36 − 1, dim so12 = 12·11/2, dim e7 = 133.
    let classical = [(AlgebraTag::REAL, 3 * 7), (AlgebraTag::COMPLEX, 36 - 1), (AlgebraTag::QUATERNION, 12 * 11 / 2)];
    for (tag, d) in classical {
        let ctx = AlgebraContext::new(tag, 0).unwrap();
        let cl = ctx.closure().unwrap();
        assert_eq!(cl.dim(), d);
        let a = tag.dim();
        for (label, want) in
            [(StratumLabel::ClosedOrbitG, 3 * a + 4), (StratumLabel::SigmaPlus, 5 * a + 5), (StratumLabel::TauSmooth, 6 * a + 7)]
        {
            let x = sample_stratum(&ctx, label, 11).unwrap();
            assert_eq!(orbit_dim(cl, &x).unwrap().dim, want);
        }
    }
}

#[test]
fn secant_cone_at_e11_matches_leading_form() {
    // N(E11 + v) = r2 r3 − n(x1) + (cubic), so the Hessian is 2× that form.
    for tag in SMALL {
        let a = tag.dim();
        let w = JordanElement::coord_dim(tag);
        let e11 = JordanElement::e(tag, 0);
        let h = hessian(&CubicNorm(tag), &e11.to_flat());
        let mut want = Matrix::zeros(w, w);
        want.set(1, 2, int(1));
        want.set(2, 1, int(1));
        for k in 0..a {
            want.set(3 + k, 3 + k, int(-2));
        }
        assert_eq!(h, want);
        let p = secant_cone_rank(&e11).unwrap();
        assert_eq!((p.multiplicity, p.hessian_rank, p.kernel_dim), (2, a + 2, 2 * a + 1));
    }
}

#[test]
fn polar_leading_forms_match_hand_expansion() {
    // Along v at x₀: H_p = 18 p3 β_v t + …, and on β_v = 0 the cubic term of f is 72 p3 N(B_v).
    let mut rng = ScalarSampler::new(17, 3);
    for tag in SMALL {
        let c = ints([9, -18, 9, 36, 36, -36]);
        let x0 = FtsVector::x0(tag).to_flat();
        for _ in 0..3 {
            let mut p = FtsVector::random_int(tag, &mut rng);
            p.beta = rng.nonzero_gauss_int();
            let mut v = FtsVector::random_int(tag, &mut rng);
            let h = polar_cubic(&c, &p).unwrap();
            let jh = line_jet(&h, &x0, &v.to_flat(), 3).unwrap();
            assert_eq!(jh.coeff(1), &(&int(18) * &p.beta) * &v.beta);
            v.beta = int(0);
            let f = f_combination(&c, &p).unwrap();
            let jf = line_jet(&f, &x0, &v.to_flat(), 5).unwrap();
            assert!(jf.coeff(2).is_zero());
            assert_eq!(jf.coeff(3), &(&int(72) * &p.beta) * &v.b.det());
        }
    }
}

#[test]
fn gram_elements_have_rank_one() {
    let mut rng = ScalarSampler::new(5, 3);
    for tag in AlgebraTag::ALL {
        for _ in 0..5 {
            let u1 = CdElement::random_int(tag, &mut rng);
            let u2 = CdElement::random_int(tag, &mut rng);
            let t = rng.nonzero_gauss_int();
            let g = JordanElement::gram_rank1(&u1, &u2, &t).unwrap();
            assert!(g.sharp().is_zero());
            assert_eq!(g.rank(), 1);
        }
    }
}

#[test]
fn phi_hat_is_on_the_quartic_for_octonions() {
    let mut rng = ScalarSampler::new(1, 3);
    let c = ints([9, -18, 9, 36, 36, -36]);
    for _ in 0..20 {
        let x = phi_hat(&rng.scalar(), &JordanElement::random(AlgebraTag::OCTONION, &mut rng)).unwrap();
        assert!(eval_quartic(&c, &x).is_zero());
        assert_eq!(closed_form_q(&x), eval_quartic(&c, &x));
    }
}
