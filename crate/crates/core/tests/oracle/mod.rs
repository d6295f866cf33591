//! Reference implementations used only by the integration tests. None of
//! them call into the library's algebra or representation code.
#![allow(dead_code)]

use cliffsolve::{Multivector, Signature, C64};
use nalgebra::{DMatrix, Schur};
use rand::Rng;

pub type CMat = DMatrix<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn metric(sig: Signature, a: usize) -> f64 {
    if a <= sig.r() {
        1.0
    } else {
        -1.0
    }
}

/// Product of two generator strings by adjacent swaps and contraction.
pub fn word_product(sig: Signature, a: &[usize], b: &[usize]) -> (f64, Vec<usize>) {
    let mut w: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
                changed = true;
            } else if w[i] == w[i + 1] {
                sign *= metric(sig, w[i]);
                w.drain(i..i + 2);
                changed = true;
                continue;
            }
            i += 1;
        }
        if !changed {
            return (sign, w);
        }
    }
}

fn mask_indices(m: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect()
}

fn indices_mask(ix: &[usize]) -> usize {
    ix.iter().map(|a| 1usize << (a - 1)).sum()
}

pub fn naive_product(u: &Multivector, v: &Multivector) -> Vec<C64> {
    let sig = u.signature();
    let mut out = vec![C64::new(0.0, 0.0); sig.size()];
    for (i, a) in u.coeffs().iter().enumerate() {
        if *a == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, b) in v.coeffs().iter().enumerate() {
            if *b == C64::new(0.0, 0.0) {
                continue;
            }
            let (s, w) = word_product(sig, &mask_indices(i), &mask_indices(j));
            out[indices_mask(&w)] += a * b * s;
        }
    }
    out
}

fn pauli() -> [CMat; 4] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMat::identity(2, 2),
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Jordan-Wigner gamma matrices for signature (1, n−1): `e¹ ↦ Γ₀`,
/// `e^a ↦ iΓ_{a−1}` with Hermitian, pairwise anticommuting, involutive `Γ`.
pub struct Gammas {
    pub sig: Signature,
    pub mats: Vec<CMat>,
}

impl Gammas {
    pub fn new(n: usize) -> Self {
        assert!(n.is_multiple_of(2) && n >= 2);
        let m = n / 2;
        let p = pauli();
        let mut hermitian = Vec::with_capacity(n);
        for k in 0..m {
            for s in [1, 2] {
                let mut g = CMat::identity(1, 1);
                for slot in 0..m {
                    let f = match slot.cmp(&k) {
                        std::cmp::Ordering::Less => &p[3],
                        std::cmp::Ordering::Equal => &p[s],
                        std::cmp::Ordering::Greater => &p[0],
                    };
                    g = g.kronecker(f);
                }
                hermitian.push(g);
            }
        }
        let mats = hermitian
            .into_iter()
            .enumerate()
            .map(|(a, g)| if a == 0 { g } else { g * c(0.0, 1.0) })
            .collect();
        Self {
            sig: Signature::new(1, n - 1).unwrap(),
            mats,
        }
    }

    pub fn size(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn rep(&self, u: &Multivector) -> CMat {
        let n = self.size();
        let mut out = CMat::zeros(n, n);
        for (m, coeff) in u.coeffs().iter().enumerate() {
            if *coeff == c(0.0, 0.0) {
                continue;
            }
            let mut g = CMat::identity(n, n);
            for a in mask_indices(m) {
                g *= &self.mats[a - 1];
            }
            out += g * *coeff;
        }
        out
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a general complex matrix via Schur decomposition.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000).expect("Schur converges");
    schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = eigenvalues(m).iter().map(|z| z.re).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn boost(n: usize, axis: usize, chi: f64) -> DMatrix<f64> {
    let mut l = DMatrix::identity(n, n);
    l[(0, 0)] = chi.cosh();
    l[(axis, axis)] = chi.cosh();
    l[(0, axis)] = chi.sinh();
    l[(axis, 0)] = chi.sinh();
    l
}

fn rotation(n: usize, i: usize, j: usize, th: f64) -> DMatrix<f64> {
    let mut l = DMatrix::identity(n, n);
    l[(i, i)] = th.cos();
    l[(j, j)] = th.cos();
    l[(i, j)] = -th.sin();
    l[(j, i)] = th.sin();
    l
}

/// Proper orthochronous Lorentz matrix as a product of boosts and spatial
/// rotations with random parameters (zero-based axes, axis 0 timelike).
pub fn random_lorentz<R: Rng>(n: usize, rng: &mut R, scale: f64) -> DMatrix<f64> {
    let mut l = DMatrix::identity(n, n);
    for _ in 0..2 {
        for axis in 1..n {
            l = boost(n, axis, rng.random_range(-scale..scale)) * l;
        }
        for i in 1..n {
            for j in i + 1..n {
                l = rotation(n, i, j, rng.random_range(-3.0..3.0)) * l;
            }
        }
    }
    l
}

pub fn eta(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i != j { 0.0 } else if i == 0 { 1.0 } else { -1.0 })
}

pub fn random_multivector<R: Rng>(sig: Signature, rng: &mut R) -> Multivector {
    let coeffs = (0..sig.size())
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(sig, coeffs).unwrap()
}
