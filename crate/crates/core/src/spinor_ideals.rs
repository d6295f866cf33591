//! Hermitian idempotents `t² = t = t†` and the derived sets
//! `I(t) ⊃ K(t) ⊃ L(t)` and `G(t)`.

use crate::clifford::{Blade, Multivector, Signature, C64, ONE};
use crate::error::{Error, Result};
use crate::matrix_rep::{mul_operator, LinearOperator, Restriction, Side};
use crate::tol;
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdempotentCheck {
    pub is_hermitian_idempotent: bool,
    /// `‖t² − t‖∞` over blade coefficients.
    pub square_residual: f64,
    /// `‖t† − t‖∞`.
    pub hermitian_residual: f64,
}

pub fn is_hermitian_idempotent(t: &Multivector) -> Result<IdempotentCheck> {
    let square_residual = (t * t).dist(t);
    let hermitian_residual = t.hermitian_conjugate()?.dist(t);
    Ok(IdempotentCheck {
        is_hermitian_idempotent: square_residual <= tol::IDEMPOTENT
            && hermitian_residual <= tol::IDEMPOTENT,
        square_residual,
        hermitian_residual,
    })
}

/// A validated Hermitian idempotent with its dual `t′ = e − t`.
#[derive(Debug)]
pub struct HermitianIdempotent {
    t: Multivector,
    dual: Multivector,
    right_t: OnceLock<LinearOperator>,
    right_dual: OnceLock<LinearOperator>,
}

impl Clone for HermitianIdempotent {
    fn clone(&self) -> Self {
        Self {
            t: self.t.clone(),
            dual: self.dual.clone(),
            right_t: OnceLock::new(),
            right_dual: OnceLock::new(),
        }
    }
}

impl PartialEq for HermitianIdempotent {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t
    }
}

impl HermitianIdempotent {
    pub fn new(t: Multivector) -> Result<Self> {
        let check = is_hermitian_idempotent(&t)?;
        if !check.is_hermitian_idempotent {
            return Err(Error::NotIdempotent(format!(
                "{t}: ‖t²−t‖ = {:e}, ‖t†−t‖ = {:e}",
                check.square_residual, check.hermitian_residual
            )));
        }
        let dual = &Multivector::one(t.signature()) - &t;
        Ok(Self {
            t,
            dual,
            right_t: OnceLock::new(),
            right_dual: OnceLock::new(),
        })
    }

    pub fn element(&self) -> &Multivector {
        &self.t
    }

    pub fn dual_element(&self) -> &Multivector {
        &self.dual
    }

    pub fn signature(&self) -> Signature {
        self.t.signature()
    }

    /// `t′ = e − t`.
    pub fn dual(&self) -> HermitianIdempotent {
        Self {
            t: self.dual.clone(),
            dual: self.t.clone(),
            right_t: OnceLock::new(),
            right_dual: OnceLock::new(),
        }
    }

    /// `U ↦ U t` on blade coefficients.
    pub fn right_operator(&self) -> &LinearOperator {
        self.right_t.get_or_init(|| {
            mul_operator(&self.t, Side::Right, Restriction::Full).expect("full operator")
        })
    }

    /// `U ↦ U t′`.
    pub fn dual_right_operator(&self) -> &LinearOperator {
        self.right_dual.get_or_init(|| {
            mul_operator(&self.dual, Side::Right, Restriction::Full).expect("full operator")
        })
    }

    /// Rank of the projector `rep(t)`, i.e. `N·⟨t⟩₀` with `N = 2^{n/2}`;
    /// idempotents of equal rank are unitarily equivalent.
    pub fn rank(&self) -> usize {
        let n = self.signature().dim();
        let size = (1usize << n.div_ceil(2)) as f64;
        (self.t.scalar_part().re * size).round() as usize
    }
}

/// Names accepted for the canonical idempotents of `C ⊗ Cl(1,3)`.
pub const CANONICAL_NAMES: [&str; 5] = ["t0", "t1", "t2", "t3", "t4"];

/// The five Hermitian idempotent types of `C ⊗ Cl(1,3)`:
/// `0`, `¼(e+e¹+ie²³+ie¹²³)`, `½(e+e¹)`, `¼(3e+e¹+ie²³−ie¹²³)`, `e`.
pub fn canonical_idempotents(sig: Signature) -> Result<Vec<HermitianIdempotent>> {
    if sig != Signature::new(1, 3)? {
        return Err(Error::InvalidSignature {
            r: sig.r(),
            s: sig.s(),
            reason: "canonical idempotents are defined for (1,3) only".into(),
        });
    }
    let b = |ix: &[usize]| Blade::from_indices(ix).expect("valid blade");
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    let forms: [Vec<(Blade, C64)>; 5] = [
        vec![],
        vec![
            (Blade::SCALAR, re(0.25)),
            (b(&[1]), re(0.25)),
            (b(&[2, 3]), im(0.25)),
            (b(&[1, 2, 3]), im(0.25)),
        ],
        vec![(Blade::SCALAR, re(0.5)), (b(&[1]), re(0.5))],
        vec![
            (Blade::SCALAR, re(0.75)),
            (b(&[1]), re(0.25)),
            (b(&[2, 3]), im(0.25)),
            (b(&[1, 2, 3]), im(-0.25)),
        ],
        vec![(Blade::SCALAR, ONE)],
    ];
    forms
        .iter()
        .map(|terms| HermitianIdempotent::new(Multivector::from_terms(sig, terms)?))
        .collect()
}

/// Canonical idempotent by name (`"t0"` … `"t4"`).
pub fn canonical(sig: Signature, name: &str) -> Result<HermitianIdempotent> {
    let idx = CANONICAL_NAMES
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown idempotent {name:?}")))?;
    Ok(canonical_idempotents(sig)?.swap_remove(idx))
}

/// A blade `X` with `X†X = e` and `X† a X = b`, if one exists.
pub fn conjugating_blade(a: &Multivector, b: &Multivector) -> Result<Option<Blade>> {
    let sig = a.signature();
    for m in 0..sig.size() {
        let x = Multivector::blade(sig, Blade::from_mask(m), ONE);
        let xd = x.hermitian_conjugate()?;
        if (&xd * &x).dist(&Multivector::one(sig)) == 0.0 && (&(&xd * a) * &x).dist(b) <= tol::IDEMPOTENT {
            return Ok(Some(Blade::from_mask(m)));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealSet {
    /// Left ideal `{U : U = Ut}`.
    I,
    /// Two-sided `{U ∈ I(t) : U = tU}`.
    K,
    /// Anti-Hermitian part of `K(t)`.
    L,
    /// Unitary group `{U : U†U = e, U − e ∈ K(t)}`.
    G,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Worst defining residual, unscaled.
    pub residual: f64,
}

fn scaled_tol(u: &Multivector) -> f64 {
    tol::MEMBERSHIP * u.max_abs().max(1.0)
}

pub fn membership(u: &Multivector, t: &HermitianIdempotent, which: IdealSet) -> Result<Membership> {
    if u.signature() != t.signature() {
        return Err(Error::SignatureMismatch {
            left: u.signature(),
            right: t.signature(),
        });
    }
    let tel = t.element();
    let right = (u * tel).dist(u);
    let out = match which {
        IdealSet::I => Membership {
            member: right <= scaled_tol(u),
            residual: right,
        },
        IdealSet::K => {
            let r = right.max((tel * u).dist(u));
            Membership {
                member: r <= scaled_tol(u),
                residual: r,
            }
        }
        IdealSet::L => {
            let r = right
                .max((tel * u).dist(u))
                .max((&u.hermitian_conjugate()? + u).max_abs());
            Membership {
                member: r <= scaled_tol(u),
                residual: r,
            }
        }
        IdealSet::G => {
            let one = Multivector::one(u.signature());
            let unitary = (&u.hermitian_conjugate()? * u).dist(&one);
            let shifted = u - &one;
            let k = membership(&shifted, t, IdealSet::K)?;
            let r = unitary.max(k.residual);
            Membership {
                member: unitary <= scaled_tol(u) && k.member,
                residual: r,
            }
        }
    };
    Ok(out)
}

/// `Ψ = Ψt + Ψt′`.
pub fn decompose(psi: &Multivector, t: &HermitianIdempotent) -> (Multivector, Multivector) {
    let phi = psi * t.element();
    let phi_dual = psi * t.dual_element();
    (phi, phi_dual)
}

/// Sum of coefficient moduli; submultiplicative for the geometric product.
fn l1_norm(u: &Multivector) -> f64 {
    u.coeffs().iter().map(|c| c.norm()).sum()
}

/// `exp(u)` by scaling and squaring a truncated power series.
pub fn exp(u: &Multivector) -> Multivector {
    let sig = u.signature();
    let norm = l1_norm(u);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let x = u.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut sum = Multivector::one(sig);
    let mut term = Multivector::one(sig);
    for k in 1..60 {
        term = (&term * &x).scale(C64::new(1.0 / k as f64, 0.0));
        sum += &term;
        if l1_norm(&term) < 1e-18 * l1_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Exponential map `L(t) → G(t)`.
pub fn exp_to_g(l: &Multivector, t: &HermitianIdempotent) -> Result<Multivector> {
    let m = membership(l, t, IdealSet::L)?;
    if !m.member {
        return Err(Error::Membership(format!(
            "element is not in L(t) (residual {:e})",
            m.residual
        )));
    }
    Ok(exp(l))
}
