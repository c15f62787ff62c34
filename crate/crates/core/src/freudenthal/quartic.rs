use serde::{Deserialize, Serialize};

use super::FtsVector;
use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::GaussRat;
use crate::jet::{gradient, hessian, PolyMap};
use crate::linalg::Matrix;

/// Names of the invariant monomial basis, in coefficient order.
pub const MONOMIAL_NAMES: [&str; 6] =
    ["alpha^2 beta^2", "alpha beta <A,B>", "<A,B>^2", "beta N(A)", "alpha N(B)", "<A#,B#>"];

/// One of the six grading-weight-6 monomials spanning the candidate quartics.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Monomial {
    AlphaSqBetaSq,
    AlphaBetaPair,
    PairSq,
    BetaNormA,
    AlphaNormB,
    SharpPair,
}

impl Monomial {
    pub const ALL: [Monomial; 6] = [
        Monomial::AlphaSqBetaSq,
        Monomial::AlphaBetaPair,
        Monomial::PairSq,
        Monomial::BetaNormA,
        Monomial::AlphaNormB,
        Monomial::SharpPair,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Coefficients `c₁ … c₆` over the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CoeffWire", into = "CoeffWire")]
pub struct QuarticCoeffs(pub [GaussRat; 6]);

#[derive(Clone, Serialize, Deserialize)]
struct CoeffWire {
    basis: Vec<String>,
    coeffs: Vec<GaussRat>,
}

impl From<QuarticCoeffs> for CoeffWire {
    fn from(c: QuarticCoeffs) -> Self {
        CoeffWire { basis: MONOMIAL_NAMES.iter().map(|s| s.to_string()).collect(), coeffs: c.0.to_vec() }
    }
}

impl TryFrom<CoeffWire> for QuarticCoeffs {
    type Error = Error;
    fn try_from(w: CoeffWire) -> Result<Self> {
        if w.basis.iter().map(String::as_str).ne(MONOMIAL_NAMES.iter().copied()) {
            return Err(Error::Parse("unexpected monomial basis".into()));
        }
        let got = w.coeffs.len();
        let arr: [GaussRat; 6] =
            w.coeffs.try_into().map_err(|_| Error::DimensionMismatch { expected: 6, got })?;
        Ok(QuarticCoeffs(arr))
    }
}

impl QuarticCoeffs {
    pub fn unit(m: Monomial) -> Self {
        let mut c: [GaussRat; 6] = std::array::from_fn(|_| GaussRat::zero());
        c[m.index()] = GaussRat::one();
        QuarticCoeffs(c)
    }

    pub fn get(&self, m: Monomial) -> &GaussRat {
        &self.0[m.index()]
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        QuarticCoeffs(std::array::from_fn(|i| &self.0[i] * s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussRat::is_zero)
    }
}

/// Values of the monomials at `x`; skips the ones flagged off in `needed`.
pub(crate) fn monomial_values(x: &FtsVector, needed: [bool; 6]) -> [GaussRat; 6] {
    let mut out: [GaussRat; 6] = std::array::from_fn(|_| GaussRat::zero());
    let ab = if needed[1] || needed[2] { x.a.pair(&x.b) } else { GaussRat::zero() };
    if needed[0] {
        let ab_s = &x.alpha * &x.beta;
        out[0] = &ab_s * &ab_s;
    }
    if needed[1] {
        out[1] = &(&x.alpha * &x.beta) * &ab;
    }
    if needed[2] {
        out[2] = &ab * &ab;
    }
    if needed[3] && !x.beta.is_zero() {
        out[3] = &x.beta * &x.a.det();
    }
    if needed[4] && !x.alpha.is_zero() {
        out[4] = &x.alpha * &x.b.det();
    }
    if needed[5] && !x.a.is_zero() && !x.b.is_zero() {
        out[5] = x.a.sharp().pair(&x.b.sharp());
    }
    out
}

/// `Σ cᵢ mᵢ(x)`.
pub fn eval_quartic(c: &QuarticCoeffs, x: &FtsVector) -> GaussRat {
    let needed = std::array::from_fn(|i| !c.0[i].is_zero());
    let m = monomial_values(x, needed);
    let mut s = GaussRat::zero();
    for (ci, mi) in c.0.iter().zip(&m) {
        if !ci.is_zero() && !mi.is_zero() {
            s += &(ci * mi);
        }
    }
    s
}

/// A quartic of the invariant family as a polynomial map on flat coordinates.
#[derive(Clone, Debug)]
pub struct Quartic {
    pub tag: AlgebraTag,
    pub coeffs: QuarticCoeffs,
}

impl Quartic {
    pub fn new(tag: AlgebraTag, coeffs: QuarticCoeffs) -> Self {
        Quartic { tag, coeffs }
    }

    pub fn at(&self, x: &FtsVector) -> GaussRat {
        eval_quartic(&self.coeffs, x)
    }
}

impl PolyMap for Quartic {
    fn dim(&self) -> usize {
        FtsVector::coord_dim(self.tag)
    }

    fn degree(&self) -> usize {
        4
    }

    fn eval(&self, x: &[GaussRat]) -> GaussRat {
        let v = FtsVector::from_flat(self.tag, x).expect("flat point of the right length");
        eval_quartic(&self.coeffs, &v)
    }
}

/// Gradient (as a vector of `V`) and symmetric Hessian of the quartic at `x`.
pub fn gradient_hessian(c: &QuarticCoeffs, x: &FtsVector) -> (FtsVector, Matrix) {
    let q = Quartic::new(x.tag(), c.clone());
    let flat = x.to_flat();
    let g = gradient(&q, &flat);
    let h = hessian(&q, &flat);
    (FtsVector::from_flat(x.tag(), &g).expect("gradient length"), h)
}
