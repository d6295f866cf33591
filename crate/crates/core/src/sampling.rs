//! Seeded random samplers for property checks: multivectors, proper
//! orthochronous tetrads, and elements of `L(t)` / `G(t)`.

use crate::clifford::{Multivector, Signature, C64};
use crate::error::Result;
use crate::genform::Tetrad;
use crate::spinor_ideals::{exp, HermitianIdempotent};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients with real and imaginary parts uniform in `[-scale, scale]`.
pub fn multivector<R: Rng>(sig: Signature, rng: &mut R, scale: f64) -> Multivector {
    let coeffs = (0..sig.size())
        .map(|_| C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale)))
        .collect();
    Multivector::from_coeffs(sig, coeffs).expect("length matches")
}

/// `Λ = exp(Aη)` with `A` antisymmetric, entries uniform in
/// `[-scale, scale]`; always in the proper orthochronous component.
pub fn proper_lorentz<R: Rng>(sig: Signature, rng: &mut R, scale: f64) -> DMatrix<f64> {
    let n = sig.dim();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-scale..=scale);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    let eta = DMatrix::from_fn(n, n, |i, j| if i == j { sig.metric(i) } else { 0.0 });
    (a * eta).exp()
}

pub fn proper_tetrad<R: Rng>(sig: Signature, rng: &mut R, scale: f64) -> Result<Tetrad> {
    Tetrad::new(sig, proper_lorentz(sig, rng, scale))
}

/// Random anti-Hermitian `X − X†` sandwiched as `t X t`, which lies in
/// `L(t)`.
pub fn lie_element<R: Rng>(t: &HermitianIdempotent, rng: &mut R, scale: f64) -> Result<Multivector> {
    let x = multivector(t.signature(), rng, scale);
    let anti = &x - &x.hermitian_conjugate()?;
    Ok(&(t.element() * &anti) * t.element())
}

/// `exp(ℓ)` for a random `ℓ ∈ L(t)`.
pub fn group_element<R: Rng>(t: &HermitianIdempotent, rng: &mut R, scale: f64) -> Result<Multivector> {
    Ok(exp(&lie_element(t, rng, scale)?))
}

/// Random element of the left ideal `I(t)`.
pub fn ideal_element<R: Rng>(t: &HermitianIdempotent, rng: &mut R, scale: f64) -> Multivector {
    &multivector(t.signature(), rng, scale) * t.element()
}
