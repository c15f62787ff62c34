//! Per-algebra state shared by the checks: symmetry derivers, the
//! calibrated quartic, and the Lie closure (computed on first use).

use std::sync::OnceLock;

use crate::compalg::AlgebraTag;
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::freudenthal::{calibrate_with, Calibration, LinOp, ParamDeriver, Parameterization, QuarticCoeffs};
use crate::jordan::JordanElement;
use crate::strata::{lie_closure, LieClosure};

#[derive(Debug)]
pub struct AlgebraContext {
    tag: AlgebraTag,
    seed: u64,
    phi: ParamDeriver,
    psi: ParamDeriver,
    calibration: Calibration,
    closure: OnceLock<Result<LieClosure>>,
}

/// Number of random transvections (and as many dual ones) used to calibrate.
pub const CALIBRATION_TRIALS: usize = 2;

impl AlgebraContext {
    pub fn new(tag: AlgebraTag, seed: u64) -> Result<Self> {
        let phi = ParamDeriver::new(tag, Parameterization::Phi, seed)?;
        let psi = ParamDeriver::new(tag, Parameterization::Psi, seed ^ 0x5bd1_e995)?;
        let calibration = calibrate_with(&phi, &psi, CALIBRATION_TRIALS, seed.wrapping_add(1))?;
        Ok(AlgebraContext { tag, seed, phi, psi, calibration, closure: OnceLock::new() })
    }

    /// Replace the calibrated coefficients, e.g. to inject a fault.
    pub fn with_coeffs(mut self, coeffs: QuarticCoeffs) -> Self {
        self.calibration.coeffs = coeffs;
        self
    }

    /// Add one to coefficient `i`.
    pub fn perturbed(self, i: usize) -> Result<Self> {
        if i >= 6 {
            return Err(Error::InvalidDimension(i));
        }
        let mut c = self.calibration.coeffs.clone();
        c.0[i] += &GaussRat::one();
        Ok(self.with_coeffs(c))
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn phi(&self) -> &ParamDeriver {
        &self.phi
    }

    pub fn psi(&self) -> &ParamDeriver {
        &self.psi
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    pub fn coeffs(&self) -> &QuarticCoeffs {
        &self.calibration.coeffs
    }

    pub fn transvection(&self, c: &JordanElement) -> Result<LinOp> {
        self.phi.derive(c)
    }

    pub fn dual_transvection(&self, d: &JordanElement) -> Result<LinOp> {
        self.psi.derive(d)
    }

    /// A product of `len` alternating random transvections and dual
    /// transvections with small integer parameters.
    pub fn random_word(&self, len: usize, rng: &mut ScalarSampler) -> Result<LinOp> {
        let mut w = LinOp::identity(self.tag);
        for k in 0..len {
            let c = sparse_jordan(self.tag, rng);
            let g = if k % 2 == 0 { self.transvection(&c)? } else { self.dual_transvection(&c)? };
            w = g.compose(&w);
        }
        Ok(w)
    }

    pub fn closure(&self) -> Result<&LieClosure> {
        self.closure.get_or_init(|| lie_closure(&self.phi, &self.psi)).as_ref().map_err(Clone::clone)
    }
}

/// A Jordan element with a few small integer coordinates, which keeps the
/// entries of transformed points small.
pub fn sparse_jordan(tag: AlgebraTag, rng: &mut ScalarSampler) -> JordanElement {
    let n = JordanElement::coord_dim(tag);
    let mut v = vec![GaussRat::zero(); n];
    for _ in 0..3 {
        v[rng.index(n)] = rng.nonzero_gauss_int();
    }
    JordanElement::from_flat(tag, &v).expect("coordinate count")
}
