//! Linear symmetries of `V` derived from the parameterizations.
//!
//! A transvection `L_C` is the unique linear map with
//! `L_C φ̂(α, A) = φ̂(α, A + αC)`. It is found by solving the linear system
//! on random φ̂-samples and then checked on the unused and fresh samples.

use super::{phi_hat_unchecked, FtsVector};
use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::jet::vandermonde_inverse;
use crate::jordan::JordanElement;
use crate::linalg::{ColumnSolver, Matrix};

/// Dense linear operator on the flat coordinates of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinOp {
    tag: AlgebraTag,
    m: Matrix,
}

impl LinOp {
    pub fn from_matrix(tag: AlgebraTag, m: Matrix) -> Result<Self> {
        let n = FtsVector::coord_dim(tag);
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
        }
        Ok(LinOp { tag, m })
    }

    pub fn identity(tag: AlgebraTag) -> Self {
        LinOp { tag, m: Matrix::identity(FtsVector::coord_dim(tag)) }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn apply(&self, x: &FtsVector) -> FtsVector {
        FtsVector::from_flat(self.tag, &self.m.mul_vec(&x.to_flat())).expect("operator shape")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> LinOp {
        LinOp { tag: self.tag, m: self.m.mul(&other.m) }
    }

    pub fn is_identity(&self) -> bool {
        self.m == Matrix::identity(self.m.rows())
    }

    pub fn flip(tag: AlgebraTag) -> Self {
        let n = FtsVector::coord_dim(tag);
        let cols: Vec<Vec<GaussRat>> =
            (0..n).map(|i| FtsVector::from_flat(tag, &crate::jet::unit(n, i)).unwrap().flip().to_flat()).collect();
        LinOp { tag, m: Matrix::from_cols(&cols) }
    }

    pub fn grading(tag: AlgebraTag, lambda: &GaussRat) -> Self {
        let w = JordanElement::coord_dim(tag);
        let l2 = lambda * lambda;
        let mut d = vec![GaussRat::one()];
        d.extend(std::iter::repeat_n(lambda.clone(), w));
        d.extend(std::iter::repeat_n(l2.clone(), w));
        d.push(&l2 * lambda);
        LinOp { tag, m: Matrix::diagonal(&d) }
    }
}

/// Which parameterization a deriver inverts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Parameterization {
    /// `φ̂(α, A) = (α³, α²A, αA#, N(A))`, shifted by `A ↦ A + αC`.
    Phi,
    /// `ψ̂(β, B) = σ φ̂(β, B)`, shifted by `B ↦ B + βD`.
    Psi,
}

impl Parameterization {
    fn point(self, s: &GaussRat, j: &JordanElement) -> FtsVector {
        match self {
            Parameterization::Phi => phi_hat_unchecked(s, j),
            Parameterization::Psi => phi_hat_unchecked(s, j).flip(),
        }
    }
}

/// Solves for the unique linear maps realizing shifts of a parameterization.
///
/// The sample matrix is factored once; every shift `C` then costs one
/// matrix product plus the verification on the remaining samples.
#[derive(Clone, Debug)]
pub struct ParamDeriver {
    tag: AlgebraTag,
    kind: Parameterization,
    samples: Vec<(GaussRat, JordanElement)>,
    fresh: Vec<(GaussRat, JordanElement)>,
    solver: ColumnSolver,
}

const FRESH_SAMPLES: usize = 4;
const SPAN_RETRIES: u64 = 4;

impl ParamDeriver {
    /// Draws `2(6𝔞+8)` samples and factors their matrix.
    pub fn new(tag: AlgebraTag, kind: Parameterization, seed: u64) -> Result<Self> {
        let n = FtsVector::coord_dim(tag);
        let mut last = Error::SpanDeficiency { rank: 0, dim: n };
        for attempt in 0..SPAN_RETRIES {
            let mut rng = ScalarSampler::new(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)), 2);
            let draw = |rng: &mut ScalarSampler| (rng.nonzero_gauss_int(), sparse_sample(tag, rng));
            let samples: Vec<_> = (0..2 * n).map(|_| draw(&mut rng)).collect();
            let fresh: Vec<_> = (0..FRESH_SAMPLES).map(|_| draw(&mut rng)).collect();
            let cols: Vec<Vec<GaussRat>> = samples.iter().map(|(s, j)| kind.point(s, j).to_flat()).collect();
            match ColumnSolver::new(&Matrix::from_cols(&cols)) {
                Ok(solver) => return Ok(ParamDeriver { tag, kind, samples, fresh, solver }),
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn kind(&self) -> Parameterization {
        self.kind
    }

    fn shifted(&self, s: &GaussRat, j: &JordanElement, c: &JordanElement) -> FtsVector {
        self.kind.point(s, &j.add(&c.scale(s)))
    }

    fn verify<F>(&self, m: &Matrix, expected: F) -> Result<()>
    where
        F: Fn(&GaussRat, &JordanElement) -> Vec<GaussRat>,
    {
        let used = self.solver.columns();
        let unused = self.samples.iter().enumerate().filter(|(k, _)| !used.contains(k)).map(|(_, s)| s);
        for (s, j) in unused.chain(self.fresh.iter()) {
            if m.mul_vec(&self.kind.point(s, j).to_flat()) != expected(s, j) {
                return Err(Error::VerificationFailed);
            }
        }
        Ok(())
    }

    /// The map realizing the shift by `c`.
    pub fn derive(&self, c: &JordanElement) -> Result<LinOp> {
        self.tag.check(c.tag())?;
        let ys: Vec<Vec<GaussRat>> = self.samples.iter().map(|(s, j)| self.shifted(s, j, c).to_flat()).collect();
        let m = self.solver.solve(&ys);
        self.verify(&m, |s, j| self.shifted(s, j, c).to_flat())?;
        Ok(LinOp { tag: self.tag, m })
    }

    /// Degree-1 coefficient of `t ↦ L_{tC}`, from the interpolation nodes
    /// `t = 0..3` (the entries of `L_{tC}` are cubic in `t`).
    pub fn infinitesimal(&self, c: &JordanElement) -> Result<Matrix> {
        self.tag.check(c.tag())?;
        let w = vandermonde_inverse(3);
        let weights: Vec<GaussRat> = (0..4).map(|t| w.get(1, t).clone()).collect();
        let combo = |s: &GaussRat, j: &JordanElement| -> Vec<GaussRat> {
            let n = FtsVector::coord_dim(self.tag);
            let mut acc = vec![GaussRat::zero(); n];
            for (t, wt) in weights.iter().enumerate() {
                if wt.is_zero() {
                    continue;
                }
                let y = self.shifted(s, j, &c.scale(&GaussRat::from_int(t as i64))).to_flat();
                for (a, b) in acc.iter_mut().zip(&y) {
                    *a += &(wt * b);
                }
            }
            acc
        };
        let ys: Vec<Vec<GaussRat>> = self.samples.iter().map(|(s, j)| combo(s, j)).collect();
        let m = self.solver.solve(&ys);
        self.verify(&m, combo)?;
        Ok(m)
    }
}

/// A Jordan element with one to three nonzero small coordinates. Sparse
/// samples keep the inverted sample matrix small.
fn sparse_sample(tag: AlgebraTag, rng: &mut ScalarSampler) -> JordanElement {
    let w = JordanElement::coord_dim(tag);
    let mut v = vec![GaussRat::zero(); w];
    for _ in 0..=rng.index(3) {
        v[rng.index(w)] = rng.nonzero_gauss_int();
    }
    JordanElement::from_flat(tag, &v).expect("coordinate count")
}

/// `L_C` from a φ̂-deriver.
pub fn derive_transvection(deriver: &ParamDeriver, c: &JordanElement) -> Result<LinOp> {
    deriver.derive(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    Flip,
    DualTransvection(JordanElement),
    GradingScaling(GaussRat),
}

/// Flip, grading scaling, or a dual transvection `L′_D` (derived from ψ̂).
pub fn symmetry_ops(kind: &SymmetryKind, psi: &ParamDeriver) -> Result<LinOp> {
    let tag = psi.tag();
    match kind {
        SymmetryKind::Flip => Ok(LinOp::flip(tag)),
        SymmetryKind::GradingScaling(l) => {
            if l.is_zero() {
                return Err(Error::DegenerateInput("grading scaling by zero"));
            }
            Ok(LinOp::grading(tag, l))
        }
        SymmetryKind::DualTransvection(d) => {
            if psi.kind() != Parameterization::Psi {
                return Err(Error::DegenerateInput("dual transvections need a ψ̂-deriver"));
            }
            psi.derive(d)
        }
    }
}
