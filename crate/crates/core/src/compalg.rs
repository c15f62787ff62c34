//! Complexified composition algebras of dimension 1, 2, 4 and 8, built by
//! Cayley–Dickson doubling with the rule `(a,b)(c,d) = (ac − d̄b, da + bc̄)`.
//!
//! Coefficients are Gaussian rationals; the algebra conjugation is ℂ-linear
//! (it negates the imaginary units, not the scalar coefficients), so the norm
//! `n(x) = Σ xᵢ²` is the complexified quadratic form.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};

/// Dimension 𝔞 ∈ {1, 2, 4, 8} of the composition algebra.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct AlgebraTag(u8);

impl AlgebraTag {
    pub const REAL: AlgebraTag = AlgebraTag(1);
    pub const COMPLEX: AlgebraTag = AlgebraTag(2);
    pub const QUATERNION: AlgebraTag = AlgebraTag(4);
    pub const OCTONION: AlgebraTag = AlgebraTag(8);
    pub const ALL: [AlgebraTag; 4] = [Self::REAL, Self::COMPLEX, Self::QUATERNION, Self::OCTONION];

    pub fn new(dim: usize) -> Result<Self> {
        match dim {
            1 | 2 | 4 | 8 => Ok(AlgebraTag(dim as u8)),
            _ => Err(Error::InvalidDimension(dim)),
        }
    }

    pub fn dim(self) -> usize {
        self.0 as usize
    }

    /// Name of the real form being complexified.
    pub fn name(self) -> &'static str {
        match self.0 {
            1 => "R",
            2 => "C",
            4 => "H",
            _ => "O",
        }
    }

    pub(crate) fn check(self, other: AlgebraTag) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::TagMismatch { left: self.dim(), right: other.dim() })
        }
    }
}

impl TryFrom<usize> for AlgebraTag {
    type Error = Error;
    fn try_from(d: usize) -> Result<Self> {
        AlgebraTag::new(d)
    }
}

impl From<AlgebraTag> for usize {
    fn from(t: AlgebraTag) -> usize {
        t.dim()
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `e_i e_j = sign · e_index`, for the octonion basis. Lower algebras are the
/// leading subalgebras, so the same table serves every tag.
#[derive(Copy, Clone, Debug)]
struct BasisProduct {
    index: usize,
    sign: i8,
}

fn basis_table() -> &'static [[BasisProduct; 8]; 8] {
    static TABLE: OnceLock<[[BasisProduct; 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[BasisProduct { index: 0, sign: 1 }; 8]; 8];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut x = [0i64; 8];
                let mut y = [0i64; 8];
                x[i] = 1;
                y[j] = 1;
                let p = doubling_mul(&x, &y);
                let (index, v) = p
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0)
                    .map(|(k, v)| (k, *v))
                    .expect("basis product is a signed basis element");
                *cell = BasisProduct { index, sign: v as i8 };
            }
        }
        t
    })
}

fn int_conj(x: &[i64]) -> Vec<i64> {
    x.iter().enumerate().map(|(k, v)| if k == 0 { *v } else { -v }).collect()
}

/// Recursive Cayley–Dickson product on integer coordinate vectors.
fn doubling_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = doubling_mul(a, c);
    let dbar_b = doubling_mul(&int_conj(d), b);
    let da = doubling_mul(d, a);
    let b_cbar = doubling_mul(b, &int_conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&dbar_b).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

/// Element of a composition algebra over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CdElement {
    tag: AlgebraTag,
    coeffs: Vec<GaussRat>,
}

impl CdElement {
    pub fn new(tag: AlgebraTag, coeffs: Vec<GaussRat>) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(Error::DimensionMismatch { expected: tag.dim(), got: coeffs.len() });
        }
        Ok(CdElement { tag, coeffs })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        CdElement { tag, coeffs: vec![GaussRat::zero(); tag.dim()] }
    }

    pub fn scalar(tag: AlgebraTag, s: GaussRat) -> Self {
        let mut x = CdElement::zero(tag);
        x.coeffs[0] = s;
        x
    }

    pub fn one(tag: AlgebraTag) -> Self {
        CdElement::scalar(tag, GaussRat::one())
    }

    /// The basis unit `e_k`.
    pub fn unit(tag: AlgebraTag, k: usize) -> Self {
        let mut x = CdElement::zero(tag);
        x.coeffs[k] = GaussRat::one();
        x
    }

    pub fn random(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        CdElement { tag, coeffs: (0..tag.dim()).map(|_| rng.scalar()).collect() }
    }

    pub fn random_int(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        CdElement { tag, coeffs: (0..tag.dim()).map(|_| rng.gauss_int()).collect() }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussRat::is_zero)
    }

    /// Checked product.
    pub fn try_mul(&self, other: &CdElement) -> Result<CdElement> {
        self.tag.check(other.tag)?;
        Ok(self.mul(other))
    }

    /// Cayley–Dickson product. Both operands must share a tag.
    pub fn mul(&self, other: &CdElement) -> CdElement {
        debug_assert_eq!(self.tag, other.tag);
        let n = self.tag.dim();
        let table = basis_table();
        let mut out = vec![GaussRat::zero(); n];
        for (i, xi) in self.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in other.coeffs.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let BasisProduct { index, sign } = table[i][j];
                let p = xi * yj;
                if sign > 0 {
                    out[index] += &p;
                } else {
                    out[index] -= &p;
                }
            }
        }
        CdElement { tag: self.tag, coeffs: out }
    }

    pub fn add(&self, other: &CdElement) -> CdElement {
        debug_assert_eq!(self.tag, other.tag);
        CdElement {
            tag: self.tag,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CdElement) -> CdElement {
        debug_assert_eq!(self.tag, other.tag);
        CdElement {
            tag: self.tag,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> CdElement {
        CdElement { tag: self.tag, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &GaussRat) -> CdElement {
        CdElement { tag: self.tag, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn conj(&self) -> CdElement {
        CdElement {
            tag: self.tag,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| if k == 0 { a.clone() } else { -a })
                .collect(),
        }
    }

    /// `n(x)`, the scalar part of `x·x̄`.
    pub fn norm(&self) -> GaussRat {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    /// `t(x) = x + x̄` as a scalar.
    pub fn trace(&self) -> GaussRat {
        &self.coeffs[0] + &self.coeffs[0]
    }

    /// Polarized norm `t(x ȳ) = 2 Σ xᵢ yᵢ`.
    pub fn trace_pair(&self, other: &CdElement) -> GaussRat {
        let s: GaussRat = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum();
        &s + &s
    }

    /// Conjugate, norm and trace in one call.
    pub fn conj_norm_trace(&self) -> (CdElement, GaussRat, GaussRat) {
        (self.conj(), self.norm(), self.trace())
    }

    /// `(xy)z − x(yz)`.
    pub fn associator(x: &CdElement, y: &CdElement, z: &CdElement) -> CdElement {
        x.mul(y).mul(z).sub(&x.mul(&y.mul(z)))
    }

    /// `xy − yx`.
    pub fn commutator(x: &CdElement, y: &CdElement) -> CdElement {
        x.mul(y).sub(&y.mul(x))
    }
}

/// Wire format `{"dim": 𝔞, "coeffs": [scalar-text, …]}`.
#[derive(Serialize, Deserialize)]
struct CdWire {
    dim: usize,
    coeffs: Vec<GaussRat>,
}

impl Serialize for CdElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CdWire { dim: self.tag.dim(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CdElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CdWire::deserialize(d)?;
        let tag = AlgebraTag::new(w.dim).map_err(serde::de::Error::custom)?;
        CdElement::new(tag, w.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags() -> [AlgebraTag; 4] {
        AlgebraTag::ALL
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        for tag in tags().into_iter().filter(|t| t.dim() >= 2) {
            for k in 1..tag.dim() {
                let e = CdElement::unit(tag, k);
                assert_eq!(e.mul(&e), CdElement::scalar(tag, GaussRat::from_int(-1)));
            }
        }
    }

    #[test]
    fn unit_conj_norm_trace() {
        for tag in tags() {
            let (c, n, t) = CdElement::one(tag).conj_norm_trace();
            assert_eq!(c, CdElement::one(tag));
            assert!(n.is_one());
            assert_eq!(t, GaussRat::from_int(2));
        }
    }

    #[test]
    fn octonions_are_not_associative() {
        let tag = AlgebraTag::OCTONION;
        let (e1, e2, e4) = (CdElement::unit(tag, 1), CdElement::unit(tag, 2), CdElement::unit(tag, 4));
        assert!(!CdElement::associator(&e1, &e2, &e4).is_zero());
    }

    #[test]
    fn quaternions_are_not_commutative() {
        let tag = AlgebraTag::QUATERNION;
        let (e1, e2) = (CdElement::unit(tag, 1), CdElement::unit(tag, 2));
        assert!(!CdElement::commutator(&e1, &e2).is_zero());
    }

    #[test]
    fn tag_mismatch_is_reported() {
        let a = CdElement::one(AlgebraTag::REAL);
        let b = CdElement::one(AlgebraTag::COMPLEX);
        assert_eq!(a.try_mul(&b), Err(Error::TagMismatch { left: 1, right: 2 }));
        assert!(AlgebraTag::new(3).is_err());
    }

    #[test]
    fn json_shape() {
        let x = CdElement::unit(AlgebraTag::COMPLEX, 1);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"dim":2,"coeffs":["0/1","1/1"]}"#);
        let back: CdElement = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CdElement>(r#"{"dim":2,"coeffs":["1/1"]}"#).is_err());
    }
}
