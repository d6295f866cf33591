//! Complexified Clifford algebra `C ⊗ Cl(r,s)` in the canonical blade basis.
//!
//! Blades are bitmasks: bit `a` set means generator `e^{a+1}` is present, and
//! the canonical order of a blade's generators is ascending index. A
//! [`Multivector`] stores one complex coefficient per blade (dense, `2^n`).

mod text;

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Metric signature: `r` generators square to `+e`, then `s` square to `-e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    r: usize,
    s: usize,
}

impl Signature {
    pub const MAX_DIM: usize = 12;

    pub fn new(r: usize, s: usize) -> Result<Self> {
        let n = r + s;
        if n == 0 {
            return Err(Error::InvalidSignature {
                r,
                s,
                reason: "dimension must be at least 1".into(),
            });
        }
        if n > Self::MAX_DIM {
            return Err(Error::InvalidSignature {
                r,
                s,
                reason: format!("dimension {n} exceeds {}", Self::MAX_DIM),
            });
        }
        Ok(Self { r, s })
    }

    /// Signature `(1, n-1)`.
    pub fn lorentzian(n: usize) -> Result<Self> {
        if n == 0 {
            return Self::new(0, 0);
        }
        Self::new(1, n - 1)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.r + self.s
    }

    /// Number of blades, `2^n`.
    pub fn size(&self) -> usize {
        1 << self.dim()
    }

    pub fn is_lorentzian(&self) -> bool {
        self.r == 1
    }

    /// Diagonal metric entry for the zero-based generator index `a`.
    pub fn metric(&self, a: usize) -> f64 {
        if a < self.r {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign picked up when the generators of `mask` are contracted pairwise.
    fn contraction_sign(&self, mask: usize) -> bool {
        // negative generators occupy bits r..n
        let neg = (mask >> self.r).count_ones();
        neg % 2 == 1
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// A basis blade `e^{a1 a2 ... ak}` with `a1 < a2 < ... < ak`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(usize);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub const fn from_mask(mask: usize) -> Self {
        Blade(mask)
    }

    /// The generator `e^a`, one-based.
    pub fn generator(a: usize) -> Self {
        debug_assert!(a >= 1);
        Blade(1 << (a - 1))
    }

    /// Blade from strictly ascending one-based indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0usize;
        let mut prev = 0usize;
        for &a in indices {
            if a == 0 || a <= prev || a > Signature::MAX_DIM {
                return Err(Error::Parse(format!(
                    "blade indices must be strictly ascending in 1..={}: {indices:?}",
                    Signature::MAX_DIM
                )));
            }
            mask |= 1 << (a - 1);
            prev = a;
        }
        Ok(Blade(mask))
    }

    pub fn mask(&self) -> usize {
        self.0
    }

    pub fn grade(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_even(&self) -> bool {
        self.grade().is_multiple_of(2)
    }

    /// One-based generator indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (0..usize::BITS as usize)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }
}

/// True when bringing `a b` (each in canonical order) into canonical order
/// needs an odd number of transpositions.
fn reorder_is_odd(a: usize, b: usize) -> bool {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps % 2 == 1
}

/// `e^A e^B = coef · e^{A xor B}`.
pub fn blade_product(a: Blade, b: Blade, sig: Signature) -> (i8, Blade) {
    let negative = reorder_is_odd(a.0, b.0) ^ sig.contraction_sign(a.0 & b.0);
    (if negative { -1 } else { 1 }, Blade(a.0 ^ b.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(blade: Blade) -> Self {
        if blade.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    Reverse,
    ComplexConjugate,
}

/// Sign `(-1)^{k(k-1)/2}` of reversion on grade `k`.
fn reverse_is_negative(grade: usize) -> bool {
    grade % 4 == 2 || grade % 4 == 3
}

#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeffs: Vec<C64>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            coeffs: vec![ZERO; sig.size()],
        }
    }

    /// The identity element `e`.
    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, ONE)
    }

    pub fn scalar(sig: Signature, value: C64) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[0] = value;
        mv
    }

    pub fn blade(sig: Signature, blade: Blade, value: C64) -> Self {
        assert!(blade.mask() < sig.size(), "blade {blade:?} outside {sig}");
        let mut mv = Self::zero(sig);
        mv.coeffs[blade.mask()] = value;
        mv
    }

    /// Generator `e^a` (one-based index) with unit coefficient.
    pub fn generator(sig: Signature, a: usize) -> Result<Self> {
        if a == 0 || a > sig.dim() {
            return Err(Error::OutOfRange {
                what: "generator index",
                value: a,
                min: 1,
                max: sig.dim(),
            });
        }
        Ok(Self::blade(sig, Blade::generator(a), ONE))
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != sig.size() {
            return Err(Error::Dimension(format!(
                "{} coefficients for signature {sig} (need {})",
                coeffs.len(),
                sig.size()
            )));
        }
        Ok(Self { sig, coeffs })
    }

    /// Sparse constructor; repeated blades accumulate.
    pub fn from_terms(sig: Signature, terms: &[(Blade, C64)]) -> Result<Self> {
        let mut mv = Self::zero(sig);
        for &(blade, c) in terms {
            if blade.mask() >= sig.size() {
                return Err(Error::OutOfRange {
                    what: "blade mask",
                    value: blade.mask(),
                    min: 0,
                    max: sig.size() - 1,
                });
            }
            mv.coeffs[blade.mask()] += c;
        }
        Ok(mv)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> C64 {
        self.coeffs[blade.mask()]
    }

    pub fn set_coeff(&mut self, blade: Blade, value: C64) {
        self.coeffs[blade.mask()] = value;
    }

    pub fn scalar_part(&self) -> C64 {
        self.coeffs[0]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig,
                right: other.sig,
            });
        }
        Ok(())
    }

    fn bilinear(&self, other: &Self, keep: impl Fn(usize, usize) -> bool) -> Result<Self> {
        self.check_same(other)?;
        let mut out = vec![ZERO; self.sig.size()];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == ZERO {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == ZERO || !keep(a, b) {
                    continue;
                }
                let (sign, blade) = blade_product(Blade(a), Blade(b), self.sig);
                let term = ca * cb;
                if sign > 0 {
                    out[blade.0] += term;
                } else {
                    out[blade.0] -= term;
                }
            }
        }
        Ok(Self {
            sig: self.sig,
            coeffs: out,
        })
    }

    /// Geometric (Clifford) product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |_, _| true)
    }

    /// Exterior product: blade pairs sharing a generator vanish.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |a, b| a & b == 0)
    }

    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.sig.dim() {
            return Err(Error::OutOfRange {
                what: "grade",
                value: k,
                min: 0,
                max: self.sig.dim(),
            });
        }
        Ok(self.filter(|b| b.grade() == k))
    }

    pub fn parity_part(&self, parity: Parity) -> Self {
        self.filter(|b| Parity::of(b) == parity)
    }

    fn filter(&self, keep: impl Fn(Blade) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if keep(Blade(m)) { c } else { ZERO })
            .collect();
        Self {
            sig: self.sig,
            coeffs,
        }
    }

    /// True when every nonzero coefficient sits on a blade of `parity`.
    pub fn has_parity(&self, parity: Parity) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| *c == ZERO || Parity::of(Blade(m)) == parity)
    }

    /// Nonzero grades present.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(m, _)| Blade(m).grade())
            .collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn involution(&self, kind: Involution) -> Self {
        match kind {
            Involution::Reverse => self.reverse(),
            Involution::ComplexConjugate => self.conj(),
        }
    }

    pub fn reverse(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                if reverse_is_negative(Blade(m).grade()) {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Self {
            sig: self.sig,
            coeffs,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// `U† = β Ũ̄ β` with `β = e^1`, defined for signature `(1, n-1)` only.
    pub fn hermitian_conjugate(&self) -> Result<Self> {
        if !self.sig.is_lorentzian() {
            return Err(Error::NotLorentzian(self.sig));
        }
        let beta = Self::generator(self.sig, 1)?;
        beta.product(&self.conj().reverse())?.product(&beta)
    }

    /// Hermitian conjugate computed blade by blade: `(e^A)† = ±e^A`.
    ///
    /// Agrees with [`Multivector::hermitian_conjugate`]; used on hot paths.
    pub fn dagger(&self) -> Result<Self> {
        if !self.sig.is_lorentzian() {
            return Err(Error::NotLorentzian(self.sig));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                if dagger_is_negative(Blade(m)) {
                    -c.conj()
                } else {
                    c.conj()
                }
            })
            .collect();
        Ok(Self {
            sig: self.sig,
            coeffs,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `[U, V] = UV - VU`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.product(other)? - &other.product(self)?)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance; panics on signature mismatch.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Blade inner product `Σ conj(u_A) v_A`, the scalar part of `U†V` in
    /// signature `(1, n-1)`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Nonzero terms in ascending blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(m, &c)| (Blade(m), c))
    }
}

/// `(e^A)† = -e^A` exactly when reversion and the β-sandwich disagree in sign.
fn dagger_is_negative(blade: Blade) -> bool {
    // β e^A β: moving e^1 through the blade gives (-1)^{k} if e^1 ∉ A, and
    // (-1)^{k-1} if e^1 ∈ A; (e^1)² = e either way.
    let k = blade.grade();
    let has_beta = blade.mask() & 1 == 1;
    let sandwich_negative = if has_beta { (k - 1) % 2 == 1 } else { k % 2 == 1 };
    sandwich_negative ^ reverse_is_negative(k)
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-ONE)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

/// Geometric product; panics on signature mismatch (use [`Multivector::product`]
/// for a fallible version).
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.product(rhs).expect("signature mismatch in geometric product")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<C64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: C64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: C64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(C64::new(rhs, 0.0))
    }
}
