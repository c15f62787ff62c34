//! The polar cubic `H_p = D_p Q` and the quartic
//! `f = 2p₃Q − (β + ⟨A,B⟩/(3p₃)) H_p`.

use super::{FtsVector, Quartic, QuarticCoeffs};
use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::GaussRat;
use crate::jet::{line_jet_unchecked, PolyMap};

/// `H_p(x)`: the directional derivative of `Q` along `p`.
#[derive(Clone, Debug)]
pub struct PolarCubic {
    quartic: Quartic,
    p: Vec<GaussRat>,
}

impl PolarCubic {
    pub fn direction(&self) -> FtsVector {
        FtsVector::from_flat(self.quartic.tag, &self.p).expect("direction length")
    }

    pub fn at(&self, x: &FtsVector) -> GaussRat {
        self.eval(&x.to_flat())
    }
}

impl PolyMap for PolarCubic {
    fn dim(&self) -> usize {
        self.p.len()
    }

    fn degree(&self) -> usize {
        3
    }

    fn eval(&self, x: &[GaussRat]) -> GaussRat {
        line_jet_unchecked(&self.quartic, x, &self.p, 4).coeff(1)
    }
}

pub fn polar_cubic(c: &QuarticCoeffs, p: &FtsVector) -> Result<PolarCubic> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("polar direction is zero"));
    }
    Ok(PolarCubic { quartic: Quartic::new(p.tag(), c.clone()), p: p.to_flat() })
}

/// `f(x) = 2p₃Q(x) − (β + ⟨A,B⟩/(3p₃)) H_p(x)`. Not homogeneous: the
/// `⟨A,B⟩ H_p` part has degree 5.
#[derive(Clone, Debug)]
pub struct FCombination {
    polar: PolarCubic,
    two_p3: GaussRat,
    inv_three_p3: GaussRat,
}

impl FCombination {
    pub fn tag(&self) -> AlgebraTag {
        self.polar.quartic.tag
    }

    pub fn polar(&self) -> &PolarCubic {
        &self.polar
    }

    pub fn at(&self, x: &FtsVector) -> GaussRat {
        let q = self.polar.quartic.at(x);
        let h = self.polar.at(x);
        let lin = &x.beta + &(&x.a.pair(&x.b) * &self.inv_three_p3);
        &(&self.two_p3 * &q) - &(&lin * &h)
    }
}

impl PolyMap for FCombination {
    fn dim(&self) -> usize {
        self.polar.dim()
    }

    fn degree(&self) -> usize {
        5
    }

    fn eval(&self, x: &[GaussRat]) -> GaussRat {
        self.at(&FtsVector::from_flat(self.tag(), x).expect("flat point of the right length"))
    }
}

pub fn f_combination(c: &QuarticCoeffs, p: &FtsVector) -> Result<FCombination> {
    if p.beta.is_zero() {
        return Err(Error::RequiresNonzeroP3);
    }
    let polar = polar_cubic(c, p)?;
    let two_p3 = &p.beta + &p.beta;
    let inv_three_p3 = (&p.beta * &GaussRat::from_int(3)).inv()?;
    Ok(FCombination { polar, two_p3, inv_three_p3 })
}
