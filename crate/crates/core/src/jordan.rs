//! The cubic Jordan algebra H₃(𝔸) of Hermitian 3×3 matrices.
//!
//! An element is stored as three diagonal scalars and three off-diagonal
//! algebra elements in the layout
//!
//! ```text
//!     [ r1   x3   x̄2 ]
//!     [ x̄3   r2   x1 ]
//!     [ x2   x̄1   r3 ]
//! ```
//!
//! Only the cubic-norm package is provided: the norm `N`, the sharp map
//! `A ↦ A#`, its polarization (the cross product) and the trace pairing.
//! The dual space is identified with the algebra itself through the pairing.

use serde::{Deserialize, Serialize};

use crate::compalg::{AlgebraTag, CdElement};
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanElement {
    diag: [GaussRat; 3],
    off: [CdElement; 3],
}

impl JordanElement {
    pub fn new(diag: [GaussRat; 3], off: [CdElement; 3]) -> Result<Self> {
        let tag = off[0].tag();
        tag.check(off[1].tag())?;
        tag.check(off[2].tag())?;
        Ok(JordanElement { diag, off })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        JordanElement {
            diag: [GaussRat::zero(), GaussRat::zero(), GaussRat::zero()],
            off: [CdElement::zero(tag), CdElement::zero(tag), CdElement::zero(tag)],
        }
    }

    pub fn identity(tag: AlgebraTag) -> Self {
        JordanElement::diagonal(tag, [GaussRat::one(), GaussRat::one(), GaussRat::one()])
    }

    pub fn diagonal(tag: AlgebraTag, diag: [GaussRat; 3]) -> Self {
        JordanElement { diag, ..JordanElement::zero(tag) }
    }

    /// The diagonal idempotent `E_ii` (0-based `i`).
    pub fn e(tag: AlgebraTag, i: usize) -> Self {
        let mut a = JordanElement::zero(tag);
        a.diag[i] = GaussRat::one();
        a
    }

    pub fn random(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        JordanElement {
            diag: [rng.scalar(), rng.scalar(), rng.scalar()],
            off: [
                CdElement::random(tag, rng),
                CdElement::random(tag, rng),
                CdElement::random(tag, rng),
            ],
        }
    }

    pub fn random_int(tag: AlgebraTag, rng: &mut ScalarSampler) -> Self {
        JordanElement {
            diag: [rng.gauss_int(), rng.gauss_int(), rng.gauss_int()],
            off: [
                CdElement::random_int(tag, rng),
                CdElement::random_int(tag, rng),
                CdElement::random_int(tag, rng),
            ],
        }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.off[0].tag()
    }

    pub fn diag(&self) -> &[GaussRat; 3] {
        &self.diag
    }

    pub fn off(&self) -> &[CdElement; 3] {
        &self.off
    }

    /// Number of coordinates, `3𝔞 + 3`.
    pub fn coord_dim(tag: AlgebraTag) -> usize {
        3 * tag.dim() + 3
    }

    /// Flat coordinates `(r1, r2, r3, x1, x2, x3)`.
    pub fn to_flat(&self) -> Vec<GaussRat> {
        let mut v = Vec::with_capacity(JordanElement::coord_dim(self.tag()));
        v.extend(self.diag.iter().cloned());
        for x in &self.off {
            v.extend(x.coeffs().iter().cloned());
        }
        v
    }

    pub fn from_flat(tag: AlgebraTag, v: &[GaussRat]) -> Result<Self> {
        let n = JordanElement::coord_dim(tag);
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let a = tag.dim();
        let slot = |k: usize| CdElement::new(tag, v[3 + k * a..3 + (k + 1) * a].to_vec());
        Ok(JordanElement {
            diag: [v[0].clone(), v[1].clone(), v[2].clone()],
            off: [slot(0)?, slot(1)?, slot(2)?],
        })
    }

    /// The basis element with flat coordinate `k` equal to one.
    pub fn basis(tag: AlgebraTag, k: usize) -> Self {
        let mut v = vec![GaussRat::zero(); JordanElement::coord_dim(tag)];
        v[k] = GaussRat::one();
        JordanElement::from_flat(tag, &v).expect("basis index in range")
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(GaussRat::is_zero) && self.off.iter().all(CdElement::is_zero)
    }

    pub fn add(&self, other: &JordanElement) -> JordanElement {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] + &other.diag[i]),
            off: std::array::from_fn(|i| self.off[i].add(&other.off[i])),
        }
    }

    pub fn sub(&self, other: &JordanElement) -> JordanElement {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] - &other.diag[i]),
            off: std::array::from_fn(|i| self.off[i].sub(&other.off[i])),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> JordanElement {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] * s),
            off: std::array::from_fn(|i| self.off[i].scale(s)),
        }
    }

    /// Cubic norm `N(A) = r1r2r3 − Σ rᵢ n(xᵢ) + t((x1x2)x3)`.
    pub fn det(&self) -> GaussRat {
        let [r1, r2, r3] = &self.diag;
        let [x1, x2, x3] = &self.off;
        let mut n = &(r1 * r2) * r3;
        n -= &(r1 * &x1.norm());
        n -= &(r2 * &x2.norm());
        n -= &(r3 * &x3.norm());
        n += &x1.mul(x2).mul(x3).trace();
        n
    }

    /// The adjugate `A#`: diagonal `r_j r_k − n(x_i)`, off-diagonal
    /// `x̄_k x̄_j − r_i x_i` for `(i, j, k)` cyclic.
    pub fn sharp(&self) -> JordanElement {
        let [r1, r2, r3] = &self.diag;
        let [x1, x2, x3] = &self.off;
        let c = [x1.conj(), x2.conj(), x3.conj()];
        JordanElement {
            diag: [
                &(r2 * r3) - &x1.norm(),
                &(r3 * r1) - &x2.norm(),
                &(r1 * r2) - &x3.norm(),
            ],
            off: [
                c[2].mul(&c[1]).sub(&x1.scale(r1)),
                c[0].mul(&c[2]).sub(&x2.scale(r2)),
                c[1].mul(&c[0]).sub(&x3.scale(r3)),
            ],
        }
    }

    /// `A × B = (A+B)# − A# − B#`.
    pub fn cross(&self, other: &JordanElement) -> JordanElement {
        self.add(other).sharp().sub(&self.sharp()).sub(&other.sharp())
    }

    pub fn try_cross(&self, other: &JordanElement) -> Result<JordanElement> {
        self.tag().check(other.tag())?;
        Ok(self.cross(other))
    }

    /// Sharp of `A` alone, or the cross product when `B` is given.
    pub fn sharp_cross(&self, other: Option<&JordanElement>) -> Result<JordanElement> {
        match other {
            None => Ok(self.sharp()),
            Some(b) => self.try_cross(b),
        }
    }

    /// Trace pairing `⟨A, B⟩ = Σ rᵢsᵢ + Σ t(xᵢ ȳᵢ)`.
    pub fn pair(&self, other: &JordanElement) -> GaussRat {
        let mut s = GaussRat::zero();
        for i in 0..3 {
            s += &(&self.diag[i] * &other.diag[i]);
            s += &self.off[i].trace_pair(&other.off[i]);
        }
        s
    }

    pub fn try_pair(&self, other: &JordanElement) -> Result<GaussRat> {
        self.tag().check(other.tag())?;
        Ok(self.pair(other))
    }

    /// Rank 0–3 by vanishing of `A`, `A#` and `N(A)`.
    pub fn rank(&self) -> usize {
        if self.is_zero() {
            0
        } else if self.sharp().is_zero() {
            1
        } else if self.det().is_zero() {
            2
        } else {
            3
        }
    }

    /// Hermitian Gram element `u u*` of the column `(u1, u2, t)` with a
    /// scalar last entry. It is nonzero and has vanishing sharp.
    pub fn gram_rank1(u1: &CdElement, u2: &CdElement, t: &GaussRat) -> Result<JordanElement> {
        let tag = u1.tag();
        tag.check(u2.tag())?;
        if u1.is_zero() && u2.is_zero() && t.is_zero() {
            return Err(Error::DegenerateInput("Gram element of the zero triple"));
        }
        let g = JordanElement {
            diag: [u1.norm(), u2.norm(), t * t],
            off: [u2.scale(t), u1.conj().scale(t), u1.mul(&u2.conj())],
        };
        // Over ℂ a nonzero triple can still give zero: isotropic u1, u2 = t = 0.
        if g.is_zero() {
            return Err(Error::DegenerateInput("Gram element vanishes"));
        }
        Ok(g)
    }

    /// Re-slot under the permutation `perm` of matrix rows and columns,
    /// i.e. the element `P A Pᵀ` with `(P A Pᵀ)_{ij} = A_{perm(i) perm(j)}`.
    pub fn permuted(&self, perm: [usize; 3]) -> JordanElement {
        let entry = |i: usize, j: usize| -> CdElement { self.entry(perm[i], perm[j]) };
        JordanElement {
            diag: std::array::from_fn(|i| self.diag[perm[i]].clone()),
            off: [entry(1, 2), entry(2, 0), entry(0, 1)],
        }
    }

    /// Matrix entry `(i, j)` as an algebra element.
    pub fn entry(&self, i: usize, j: usize) -> CdElement {
        let tag = self.tag();
        match (i, j) {
            _ if i == j => CdElement::scalar(tag, self.diag[i].clone()),
            (1, 2) => self.off[0].clone(),
            (2, 1) => self.off[0].conj(),
            (2, 0) => self.off[1].clone(),
            (0, 2) => self.off[1].conj(),
            (0, 1) => self.off[2].clone(),
            (1, 0) => self.off[2].conj(),
            _ => unreachable!("3x3 index"),
        }
    }
}

/// Wire format `{"diag": [s, s, s], "off": [cd, cd, cd]}`.
#[derive(Serialize, Deserialize)]
struct JordanWire {
    diag: [GaussRat; 3],
    off: [CdElement; 3],
}

impl Serialize for JordanElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JordanWire { diag: self.diag.clone(), off: self.off.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = JordanWire::deserialize(d)?;
        JordanElement::new(w.diag, w.off).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn identity_values() {
        for tag in AlgebraTag::ALL {
            let i = JordanElement::identity(tag);
            assert!(i.det().is_one());
            assert_eq!(i.sharp(), i);
            assert_eq!(i.pair(&i), int(3));
            assert_eq!(i.rank(), 3);
        }
    }

    #[test]
    fn diagonal_norm() {
        let a = JordanElement::diagonal(AlgebraTag::OCTONION, [int(2), int(3), int(5)]);
        assert_eq!(a.det(), int(30));
    }

    #[test]
    fn ranks_of_idempotent_sums() {
        for tag in AlgebraTag::ALL {
            let e1 = JordanElement::e(tag, 0);
            let e2 = JordanElement::e(tag, 1);
            assert_eq!(JordanElement::zero(tag).rank(), 0);
            assert_eq!(e1.rank(), 1);
            assert_eq!(e1.add(&e2).rank(), 2);
        }
    }

    #[test]
    fn gram_of_unit_is_e11() {
        for tag in AlgebraTag::ALL {
            let g = JordanElement::gram_rank1(&CdElement::one(tag), &CdElement::zero(tag), &GaussRat::zero())
                .unwrap();
            assert_eq!(g, JordanElement::e(tag, 0));
        }
        let z = CdElement::zero(AlgebraTag::REAL);
        assert!(JordanElement::gram_rank1(&z, &z, &GaussRat::zero()).is_err());
    }

    #[test]
    fn cross_with_self_is_twice_sharp() {
        let mut rng = ScalarSampler::new(11, 10);
        for tag in AlgebraTag::ALL {
            let a = JordanElement::random(tag, &mut rng);
            assert_eq!(a.cross(&a), a.sharp().scale(&int(2)));
        }
    }

    #[test]
    fn tag_mismatch() {
        let a = JordanElement::identity(AlgebraTag::REAL);
        let b = JordanElement::identity(AlgebraTag::COMPLEX);
        assert!(a.try_pair(&b).is_err());
        assert!(a.sharp_cross(Some(&b)).is_err());
    }

    #[test]
    fn flat_round_trip_and_json() {
        let mut rng = ScalarSampler::new(3, 10);
        let a = JordanElement::random(AlgebraTag::QUATERNION, &mut rng);
        assert_eq!(JordanElement::from_flat(a.tag(), &a.to_flat()).unwrap(), a);
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<JordanElement>(&j).unwrap(), a);
        let bad = r#"{"diag":["1","1","1"],"off":[{"dim":1,"coeffs":["0"]},{"dim":2,"coeffs":["0","0"]},{"dim":1,"coeffs":["0"]}]}"#;
        assert!(serde_json::from_str::<JordanElement>(bad).is_err());
    }
}
