//! A matrix representation of `C ⊗ Cl(1,n-1)` consistent with Hermitian
//! conjugation, and left/right multiplication operators on the
//! blade-coefficient space.
//!
//! The solver works on blade coefficients directly: blades are orthonormal
//! under `(1/N) Tr(rep(A)† rep(B))`, so the plain Hermitian product of
//! coefficient vectors is the trace product and `L_A† = L_{A†}`,
//! `R_B† = R_{B†}`. The spinor representation here is only used to verify
//! that.

use crate::clifford::{blade_product, Blade, Multivector, Parity, Signature, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;
use serde::Serialize;
use std::ops::{Deref, Mul};

/// Gamma matrices `γ^1 … γ^n` of size `N = 2^{n/2}` for signature `(1,n-1)`.
#[derive(Clone, Debug)]
pub struct GammaSet {
    sig: Signature,
    gammas: Vec<CMatrix>,
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Recursive doubling from the `n = 2` pair `γ^1 = σ_x`, `γ^2 = iσ_y`:
/// `Γ^a = γ^a ⊗ σ_z`, `Γ^{n+1} = I ⊗ iσ_x`, `Γ^{n+2} = I ⊗ iσ_y`.
pub fn build_gamma(n: usize) -> Result<GammaSet> {
    if !n.is_multiple_of(2) || !(2..=Signature::MAX_DIM).contains(&n) {
        return Err(Error::OutOfRange {
            what: "even dimension for gamma matrices",
            value: n,
            min: 2,
            max: Signature::MAX_DIM,
        });
    }
    let c = |re: f64, im: f64| C64::new(re, im);
    let sx = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let isy = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
    let sz = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    let isx = CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, 1.0), c(0.0, 1.0), ZERO]);
    let mut gammas = vec![sx, isy.clone()];
    let mut size = 2;
    while gammas.len() < n {
        let id = CMatrix::identity(size, size);
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| kron(g, &sz)).collect();
        next.push(kron(&id, &isx));
        next.push(kron(&id, &isy));
        gammas = next;
        size *= 2;
    }
    let set = GammaSet {
        sig: Signature::lorentzian(n)?,
        gammas,
    };
    let residual = set.relation_residual();
    if residual > 1e-14 {
        return Err(Error::Eigen(format!("gamma construction residual {residual:e}")));
    }
    Ok(set)
}

impl GammaSet {
    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// Matrix size `N = 2^{n/2}`.
    pub fn size(&self) -> usize {
        self.gammas[0].nrows()
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// Worst violation of the anticommutation relations and of the
    /// Hermiticity pattern (γ¹ Hermitian, γ^{a≥2} anti-Hermitian).
    pub fn relation_residual(&self) -> f64 {
        let n = self.gammas.len();
        let id = CMatrix::identity(self.size(), self.size());
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let anti = &self.gammas[a] * &self.gammas[b] + &self.gammas[b] * &self.gammas[a];
                let target = if a == b { id.scale(2.0 * self.sig.metric(a)) } else { id.scale(0.0) };
                worst = worst.max(linalg::max_abs(&(anti - target)));
            }
            let g = &self.gammas[a];
            let pattern = if a == 0 {
                linalg::hermiticity_residual(g)
            } else {
                linalg::antihermiticity_residual(g)
            };
            worst = worst.max(pattern);
        }
        worst
    }

    /// `rep(e^A) = γ^{a1} γ^{a2} ⋯` in ascending order.
    pub fn blade_matrix(&self, blade: Blade) -> CMatrix {
        let mut m = CMatrix::identity(self.size(), self.size());
        for a in blade.indices() {
            m *= &self.gammas[a - 1];
        }
        m
    }

    pub fn rep(&self, u: &Multivector) -> Result<CMatrix> {
        if u.signature() != self.sig {
            return Err(Error::SignatureMismatch {
                left: u.signature(),
                right: self.sig,
            });
        }
        let mut m = CMatrix::zeros(self.size(), self.size());
        for (blade, c) in u.terms() {
            m += self.blade_matrix(blade) * c;
        }
        Ok(m)
    }
}

/// Which side a multivector multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ordered list of blade masks spanning a state space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLayout {
    sig: Signature,
    masks: Vec<usize>,
}

impl StateLayout {
    pub fn full(sig: Signature) -> Self {
        Self {
            sig,
            masks: (0..sig.size()).collect(),
        }
    }

    pub fn parity(sig: Signature, parity: Parity) -> Self {
        Self {
            sig,
            masks: (0..sig.size())
                .filter(|&m| Parity::of(Blade::from_mask(m)) == parity)
                .collect(),
        }
    }

    pub fn for_restriction(sig: Signature, parity: Option<Parity>) -> Self {
        match parity {
            None => Self::full(sig),
            Some(p) => Self::parity(sig, p),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[usize] {
        &self.masks
    }

    /// Coefficients of `u` on this layout; components outside it are dropped.
    pub fn pack(&self, u: &Multivector) -> Vec<C64> {
        self.masks.iter().map(|&m| u.coeffs()[m]).collect()
    }

    pub fn pack_into(&self, u: &Multivector, out: &mut [C64]) {
        for (o, &m) in out.iter_mut().zip(&self.masks) {
            *o = u.coeffs()[m];
        }
    }

    pub fn unpack(&self, values: &[C64]) -> Multivector {
        let mut u = Multivector::zero(self.sig);
        for (&m, &v) in self.masks.iter().zip(values) {
            u.coeffs_mut()[m] = v;
        }
        u
    }
}

/// How a multiplication operator is restricted to parity subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    Full,
    /// Square block on one parity subspace; the operator must preserve it.
    Within(Parity),
    /// Block from one parity subspace into another.
    Between { from: Parity, to: Parity },
}

/// A dense complex matrix acting on blade-coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator(CMatrix);

impl LinearOperator {
    pub fn new(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    /// Rows and columns picked by the given layouts (principal block when
    /// both are the same).
    pub fn block(&self, rows: &StateLayout, cols: &StateLayout) -> Self {
        Self(CMatrix::from_fn(rows.dim(), cols.dim(), |i, j| {
            self.0[(rows.masks()[i], cols.masks()[j])]
        }))
    }

    pub fn apply(&self, u: &Multivector) -> Result<Multivector> {
        let sig = u.signature();
        if self.0.nrows() != sig.size() || self.0.ncols() != sig.size() {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, state has {} coefficients",
                self.0.nrows(),
                self.0.ncols(),
                sig.size()
            )));
        }
        let v = &self.0 * nalgebra::DVector::from_column_slice(u.coeffs());
        Multivector::from_coeffs(sig, v.as_slice().to_vec())
    }
}

impl Deref for LinearOperator {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 * &rhs.0)
    }
}

impl std::ops::Add for &LinearOperator {
    type Output = LinearOperator;
    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &LinearOperator {
    type Output = LinearOperator;
    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator(&self.0 - &rhs.0)
    }
}

fn full_mul_operator(a: &Multivector, side: Side) -> CMatrix {
    let sig = a.signature();
    let size = sig.size();
    let mut m = CMatrix::zeros(size, size);
    for (blade_a, c) in a.terms() {
        for col in 0..size {
            let b = Blade::from_mask(col);
            let (sign, out) = match side {
                Side::Left => blade_product(blade_a, b, sig),
                Side::Right => blade_product(b, blade_a, sig),
            };
            if sign > 0 {
                m[(out.mask(), col)] += c;
            } else {
                m[(out.mask(), col)] -= c;
            }
        }
    }
    m
}

/// Matrix of `U ↦ AU` (left) or `U ↦ UA` (right) on blade coefficients.
pub fn mul_operator(a: &Multivector, side: Side, restriction: Restriction) -> Result<LinearOperator> {
    let full = LinearOperator(full_mul_operator(a, side));
    let sig = a.signature();
    let (from, to) = match restriction {
        Restriction::Full => return Ok(full),
        Restriction::Within(p) => (p, p),
        Restriction::Between { from, to } => (from, to),
    };
    let cols = StateLayout::parity(sig, from);
    let outside = StateLayout::parity(sig, to.flip());
    let leak = full.block(&outside, &cols);
    if leak.iter().any(|c| *c != ZERO) {
        return Err(Error::Parity(format!(
            "multiplication by {a} does not map {from:?} elements into {to:?} elements"
        )));
    }
    Ok(full.block(&StateLayout::parity(sig, to), &cols))
}

/// Whether a Hermitian matrix is definite within [`tol::POSITIVE`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    SemidefiniteWithinTolerance,
    Indefinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub is_hermitian: bool,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Largest `γ` with `(Mξ,ξ) ≥ γ(ξ,ξ)`, i.e. the minimum eigenvalue.
    pub gamma: f64,
    pub definiteness: Definiteness,
}

/// Hermiticity and extreme eigenvalues of the Hermitian part of `m`.
pub fn spectral_check(m: &CMatrix) -> Result<SpectralReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    let residual = linalg::hermiticity_residual(m);
    let values = linalg::hermitian_eigenvalues(&linalg::hermitian_part(m))?;
    let min = values.first().copied().unwrap_or(0.0);
    let max = values.last().copied().unwrap_or(0.0);
    let definiteness = if min > tol::POSITIVE {
        Definiteness::PositiveDefinite
    } else if min >= -tol::POSITIVE {
        Definiteness::SemidefiniteWithinTolerance
    } else {
        Definiteness::Indefinite
    };
    Ok(SpectralReport {
        is_hermitian: residual <= tol::HERMITIAN,
        hermiticity_residual: residual,
        min_eigenvalue: min,
        max_eigenvalue: max,
        gamma: min,
        definiteness,
    })
}
