//! Exact Taylor jets of polynomial maps along lines, and the derived
//! gradients, Hessians and zero certificates.
//!
//! A jet `P(x + t v) = Σ_k t^k Φ_k` is recovered by evaluating `P` at
//! `t = 0, 1, …, d` and solving the Vandermonde system over ℚ(i).

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::linalg::Matrix;

/// A polynomial function on flat coordinates.
pub trait PolyMap: Send + Sync {
    /// Number of input coordinates.
    fn dim(&self) -> usize;
    /// Upper bound on the total degree.
    fn degree(&self) -> usize;
    fn eval(&self, x: &[GaussRat]) -> GaussRat;
}

impl<P: PolyMap + ?Sized> PolyMap for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn eval(&self, x: &[GaussRat]) -> GaussRat {
        (**self).eval(x)
    }
}

/// Coefficients `Φ_0 … Φ_d` of `t ↦ P(x + t v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineJet {
    coeffs: Vec<GaussRat>,
}

impl LineJet {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Φ_k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn eval_at(&self, t: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Lowest `k` with `Φ_k ≠ 0`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

const MAX_JET_DEGREE: usize = 12;

/// Inverse Vandermonde matrix for the nodes `0..=d`.
pub(crate) fn vandermonde_inverse(d: usize) -> &'static Matrix {
    static CACHE: [OnceLock<Matrix>; MAX_JET_DEGREE + 1] = [const { OnceLock::new() }; MAX_JET_DEGREE + 1];
    assert!(d <= MAX_JET_DEGREE, "jet degree {d} exceeds {MAX_JET_DEGREE}");
    CACHE[d].get_or_init(|| {
        let rows: Vec<Vec<GaussRat>> = (0..=d)
            .map(|t| (0..=d).map(|k| GaussRat::from_int(t as i64).pow(k as u32)).collect())
            .collect();
        Matrix::from_rows(&rows).inverse().expect("Vandermonde nodes are distinct")
    })
}

pub(crate) fn axpy(x: &[GaussRat], t: &GaussRat, v: &[GaussRat]) -> Vec<GaussRat> {
    x.iter()
        .zip(v)
        .map(|(a, b)| if b.is_zero() || t.is_zero() { a.clone() } else { a + &(t * b) })
        .collect()
}

fn interpolate(values: &[GaussRat]) -> Vec<GaussRat> {
    vandermonde_inverse(values.len() - 1).mul_vec(values)
}

/// Jet of degree `d` without the overflow probe; `P` must have degree ≤ `d`.
pub fn line_jet_unchecked<P: PolyMap + ?Sized>(p: &P, x: &[GaussRat], v: &[GaussRat], d: usize) -> LineJet {
    let values: Vec<GaussRat> =
        (0..=d).map(|t| p.eval(&axpy(x, &GaussRat::from_int(t as i64), v))).collect();
    LineJet { coeffs: interpolate(&values) }
}

/// Jet of degree `d`, confirmed by one extra evaluation at `t = d + 1`.
pub fn line_jet<P: PolyMap + ?Sized>(p: &P, x: &[GaussRat], v: &[GaussRat], d: usize) -> Result<LineJet> {
    if x.len() != p.dim() || v.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: x.len().min(v.len()) });
    }
    let jet = line_jet_unchecked(p, x, v, d);
    let t = GaussRat::from_int(d as i64 + 1);
    if jet.eval_at(&t) != p.eval(&axpy(x, &t, v)) {
        return Err(Error::DegreeOverflow(d));
    }
    Ok(jet)
}

/// Jets of a vector-valued polynomial map, one per output coordinate.
pub fn vector_line_jet<F>(f: F, x: &[GaussRat], v: &[GaussRat], d: usize) -> Vec<LineJet>
where
    F: Fn(&[GaussRat]) -> Vec<GaussRat>,
{
    let samples: Vec<Vec<GaussRat>> = (0..=d).map(|t| f(&axpy(x, &GaussRat::from_int(t as i64), v))).collect();
    let outputs = samples[0].len();
    (0..outputs)
        .map(|o| {
            let values: Vec<GaussRat> = samples.iter().map(|s| s[o].clone()).collect();
            LineJet { coeffs: interpolate(&values) }
        })
        .collect()
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<GaussRat> {
    let mut e = vec![GaussRat::zero(); n];
    e[i] = GaussRat::one();
    e
}

/// Gradient from degree-1 jet coefficients along the coordinate directions.
pub fn gradient<P: PolyMap + ?Sized>(p: &P, x: &[GaussRat]) -> Vec<GaussRat> {
    let n = p.dim();
    let d = p.degree();
    (0..n).into_par_iter().map(|i| line_jet_unchecked(p, x, &unit(n, i), d).coeff(1)).collect()
}

/// Symmetric Hessian by polarization of the degree-2 jet coefficients:
/// `h_ii = 2Φ₂(e_i)`, `h_ij = Φ₂(e_i + e_j) − Φ₂(e_i) − Φ₂(e_j)`.
pub fn hessian<P: PolyMap + ?Sized>(p: &P, x: &[GaussRat]) -> Matrix {
    let n = p.dim();
    let d = p.degree();
    let diag: Vec<GaussRat> =
        (0..n).into_par_iter().map(|i| line_jet_unchecked(p, x, &unit(n, i), d).coeff(2)).collect();
    let rows: Vec<Vec<GaussRat>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < i {
                        return GaussRat::zero();
                    }
                    if i == j {
                        return &diag[i] + &diag[i];
                    }
                    let mut v = unit(n, i);
                    v[j] = GaussRat::one();
                    let phi2 = line_jet_unchecked(p, x, &v, d).coeff(2);
                    &(&phi2 - &diag[i]) - &diag[j]
                })
                .collect()
        })
        .collect();
    let mut h = Matrix::from_rows(&rows);
    for i in 0..n {
        for j in 0..i {
            let v = h.get(j, i).clone();
            h.set(i, j, v);
        }
    }
    h
}

/// How an identity `F ≡ 0` for a homogeneous form `F` is certified.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CertMode {
    /// Evaluate at `trials` random Gaussian-integer points. A nonzero value
    /// is conclusive; all zeros fail with probability ≤ deg / |sample set|.
    Randomized { trials: usize },
    /// Evaluate on the lattice `{v ∈ ℕⁿ : Σ v_i = k}`, which determines a
    /// degree-k form; gives up when more than `budget` points are needed.
    Grid { budget: u128 },
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Visit every `v ∈ ℕⁿ` with `Σ v_i = k`; stops early when `f` returns false.
fn for_each_composition(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = cur.len();
        if pos == n - 1 {
            cur[pos] = left;
            let go = f(cur);
            cur[pos] = 0;
            return go;
        }
        for take in 0..=left {
            cur[pos] = take;
            if !rec(pos + 1, left - take, cur, f) {
                cur[pos] = 0;
                return false;
            }
        }
        cur[pos] = 0;
        true
    }
    if n == 0 {
        return;
    }
    let mut cur = vec![0; n];
    rec(0, k, &mut cur, f);
}

/// Certify that the degree-`k` form `f` on `n` variables vanishes.
/// Returns a witness point when it does not.
pub fn certify_zero_form<F>(
    n: usize,
    k: usize,
    mode: CertMode,
    rng: &mut ScalarSampler,
    f: F,
) -> Result<Option<Vec<GaussRat>>>
where
    F: Fn(&[GaussRat]) -> GaussRat,
{
    match mode {
        CertMode::Randomized { trials } => {
            for _ in 0..trials {
                let v: Vec<GaussRat> = (0..n).map(|_| rng.gauss_int()).collect();
                if !f(&v).is_zero() {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
        CertMode::Grid { budget } => {
            let needed = binomial((n + k - 1) as u128, k as u128);
            if needed > budget {
                return Err(Error::InconclusiveZero { needed, budget });
            }
            let mut witness = None;
            for_each_composition(n, k, &mut |c| {
                let v: Vec<GaussRat> = c.iter().map(|&x| GaussRat::from_int(x as i64)).collect();
                if f(&v).is_zero() {
                    true
                } else {
                    witness = Some(v);
                    false
                }
            });
            Ok(witness)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x0² x1 + 3 x1³ on two variables.
    struct Cubic;
    impl PolyMap for Cubic {
        fn dim(&self) -> usize {
            2
        }
        fn degree(&self) -> usize {
            3
        }
        fn eval(&self, x: &[GaussRat]) -> GaussRat {
            &(&(&x[0] * &x[0]) * &x[1]) + &(&GaussRat::from_int(3) * &x[1].pow(3))
        }
    }

    fn ints(v: &[i64]) -> Vec<GaussRat> {
        v.iter().map(|&x| GaussRat::from_int(x)).collect()
    }

    #[test]
    fn jet_along_self_is_binomial() {
        let x = ints(&[2, 1]);
        let jet = line_jet(&Cubic, &x, &x, 3).unwrap();
        let q = Cubic.eval(&x);
        for (k, b) in [1, 3, 3, 1].iter().enumerate() {
            assert_eq!(jet.coeff(k), &q * &GaussRat::from_int(*b));
        }
    }

    #[test]
    fn overflow_is_detected() {
        let x = ints(&[1, 1]);
        let v = ints(&[1, 2]);
        assert_eq!(line_jet(&Cubic, &x, &v, 2), Err(Error::DegreeOverflow(2)));
    }

    #[test]
    fn gradient_and_hessian_match_calculus() {
        let x = ints(&[2, 1]);
        // ∇ = (2 x0 x1, x0² + 9 x1²), H = [[2x1, 2x0], [2x0, 18 x1]].
        assert_eq!(gradient(&Cubic, &x), ints(&[4, 13]));
        assert_eq!(hessian(&Cubic, &x), Matrix::from_rows(&[ints(&[2, 4]), ints(&[4, 18])]));
    }

    #[test]
    fn grid_certificate() {
        let mut rng = ScalarSampler::new(0, 5);
        // (x0 + x1)² − x0² − 2x0x1 − x1² ≡ 0; x0 x1 is not.
        let zero = |v: &[GaussRat]| {
            let s = &v[0] + &v[1];
            &(&(&s * &s) - &(&v[0] * &v[0])) - &(&(&GaussRat::from_int(2) * &(&v[0] * &v[1])) + &(&v[1] * &v[1]))
        };
        assert_eq!(certify_zero_form(2, 2, CertMode::Grid { budget: 10 }, &mut rng, zero).unwrap(), None);
        let w = certify_zero_form(2, 2, CertMode::Grid { budget: 10 }, &mut rng, |v| &v[0] * &v[1]).unwrap();
        assert_eq!(w, Some(ints(&[1, 1])));
        assert!(matches!(
            certify_zero_form(40, 4, CertMode::Grid { budget: 100 }, &mut rng, |_| GaussRat::zero()),
            Err(Error::InconclusiveZero { .. })
        ));
    }
}
