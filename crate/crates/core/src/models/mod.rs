//! Covariantly equipped systems `∂φ + Σ A_j φ B_j = f` with `∂ = h^μ ∂_μ`,
//! assembled into Friedrichs form by multiplying from the left with
//! `β = e¹`: `H_μ = L_{βh^μ}`, `M = Σ L_{βA_j} R_{B_j}`, `j = c(βf)`.

mod dispersion;
mod theorem;

pub use dispersion::{
    dispersion_check, dispersion_residual, phase_study, plane_wave_modes, DispersionReport, PhaseStudy,
};
pub use theorem::{
    gauge_covariance_residual, ideal_invariance_residual, verify_theorem, TheoremOptions,
    TheoremReport, TheoremTolerances,
};

use crate::clifford::{Multivector, Parity, Signature, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::genform::Tetrad;
use crate::linalg::CMatrix;
use crate::matrix_rep::{mul_operator, LinearOperator, Restriction, Side, StateLayout};
use crate::solver::{validate_friedrichs, FieldGrid, FirstOrderSystem, Grid, LowerOrder, Source};
use crate::spinor_ideals::{membership, HermitianIdempotent, IdealSet};
use crate::tol;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Scalar envelope over the active spatial axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant,
    /// `exp(−|x − c|² / (2w²))` with minimum-image distances; `center`
    /// defaults to the box midpoint.
    Gaussian {
        width: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// `cos(Σ 2π q_i x_i / L_i + phase)`.
    Cosine {
        mode: Vec<i64>,
        #[serde(default)]
        phase: f64,
    },
    /// `exp(i(Σ 2π q_i x_i / L_i + phase))`; complex, so not usable for
    /// gauge potentials.
    Wave {
        mode: Vec<i64>,
        #[serde(default)]
        phase: f64,
    },
}

impl Profile {
    pub fn is_constant(&self) -> bool {
        matches!(self, Profile::Constant)
    }

    fn phase_at(grid: &Grid, coords: &[f64], mode: &[i64], phase: f64) -> f64 {
        grid.axes
            .iter()
            .zip(coords)
            .enumerate()
            .map(|(k, (ax, x))| 2.0 * PI * mode.get(k).copied().unwrap_or(0) as f64 * x / ax.length)
            .sum::<f64>()
            + phase
    }

    pub fn eval(&self, grid: &Grid, point: usize) -> C64 {
        let coords = grid.coordinates(point);
        match self {
            Profile::Constant => ONE,
            Profile::Gaussian { width, center } => {
                let r2: f64 = grid
                    .axes
                    .iter()
                    .enumerate()
                    .map(|(k, ax)| {
                        let c = center
                            .as_ref()
                            .and_then(|c| c.get(k).copied())
                            .unwrap_or(0.5 * ax.length);
                        let mut d = (coords[k] - c).rem_euclid(ax.length);
                        if d > 0.5 * ax.length {
                            d -= ax.length;
                        }
                        d * d
                    })
                    .sum();
                C64::new((-r2 / (2.0 * width * width)).exp(), 0.0)
            }
            Profile::Cosine { mode, phase } => C64::new(Self::phase_at(grid, &coords, mode, *phase).cos(), 0.0),
            Profile::Wave { mode, phase } => C64::from_polar(1.0, Self::phase_at(grid, &coords, mode, *phase)),
        }
    }
}

/// A genform field `profile(x) · value`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenformField {
    pub profile: Profile,
    pub value: Multivector,
}

impl GenformField {
    pub fn constant(value: Multivector) -> Self {
        Self {
            profile: Profile::Constant,
            value,
        }
    }

    pub fn zero(sig: Signature) -> Self {
        Self::constant(Multivector::zero(sig))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn at(&self, grid: &Grid, point: usize) -> Multivector {
        self.value.scale(self.profile.eval(grid, point))
    }
}

/// A real covector field `profile(x) · a_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovectorField {
    pub profile: Profile,
    pub components: Vec<f64>,
}

impl CovectorField {
    pub fn zero(n: usize) -> Self {
        Self {
            profile: Profile::Constant,
            components: vec![0.0; n],
        }
    }
}

/// An assembled system with the blade layout of its state vector.
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub system: FirstOrderSystem,
    pub layout: StateLayout,
}

impl AssembledSystem {
    /// Samples a genform field onto the state layout.
    pub fn sample(&self, field: &GenformField, grid: &Grid) -> Result<FieldGrid> {
        if field.value.signature() != self.layout.signature() {
            return Err(Error::SignatureMismatch {
                left: field.value.signature(),
                right: self.layout.signature(),
            });
        }
        let packed = self.layout.pack(&field.value);
        FieldGrid::from_fn(grid, self.layout.dim(), |p, _| {
            let c = field.profile.eval(grid, p);
            packed.iter().map(|v| v * c).collect()
        })
    }

    pub fn point_genform(&self, field: &FieldGrid, point: usize) -> Multivector {
        self.layout.unpack(field.point(point))
    }
}

fn beta(sig: Signature) -> Result<Multivector> {
    if !sig.is_lorentzian() {
        return Err(Error::NotLorentzian(sig));
    }
    if !sig.dim().is_multiple_of(2) || sig.dim() < 2 {
        return Err(Error::Model(format!(
            "space-time dimension must be even and at least 2, got {}",
            sig.dim()
        )));
    }
    Multivector::generator(sig, 1)
}

/// Restricts a full operator to a parity block, refusing if it leaks.
fn restrict(op: LinearOperator, layout: &StateLayout, parity: Option<Parity>) -> Result<CMatrix> {
    let Some(p) = parity else {
        return Ok(op.into_matrix());
    };
    let sig = layout.signature();
    let outside = StateLayout::parity(sig, p.flip());
    if op.block(&outside, layout).iter().any(|c| *c != ZERO) {
        return Err(Error::Parity(format!("operator does not preserve the {p:?} subspace")));
    }
    Ok(op.block(layout, layout).into_matrix())
}

/// `H_μ = L_{βh^μ}` restricted to the layout.
fn principal_matrices(tetrad: &Tetrad, layout: &StateLayout, parity: Option<Parity>) -> Result<Vec<CMatrix>> {
    let b = beta(tetrad.signature())?;
    tetrad
        .genvectors()
        .iter()
        .map(|h| restrict(mul_operator(&(&b * h), Side::Left, Restriction::Full)?, layout, parity))
        .collect()
}

fn checked(assembled: AssembledSystem) -> Result<AssembledSystem> {
    let report = validate_friedrichs(&assembled.system);
    if !report.pass {
        return Err(Error::NotHyperbolic(format!(
            "assembled system fails Friedrichs conditions: hermiticity {:?}, γ = {:e}",
            report.hermiticity_residuals, report.gamma
        )));
    }
    Ok(assembled)
}

fn need_grid<'a>(grid: Option<&'a Grid>, what: &str) -> Result<&'a Grid> {
    grid.ok_or_else(|| Error::Model(format!("{what} varies in x; a grid is required to sample it")))
}

fn homogeneous_parity(u: &Multivector) -> Option<Parity> {
    if u.has_parity(Parity::Even) {
        Some(Parity::Even)
    } else if u.has_parity(Parity::Odd) {
        Some(Parity::Odd)
    } else {
        None
    }
}

/// Generic equipped system `∂φ + Σ A_j φ B_j = f`.
#[derive(Clone, Debug)]
pub struct EquippedSystemSpec {
    pub tetrad: Tetrad,
    pub terms: Vec<(Multivector, Multivector)>,
    pub source: GenformField,
    /// Parity of the unknown `φ`; `None` for the full algebra.
    pub parity: Option<Parity>,
}

impl EquippedSystemSpec {
    fn check_grading(&self) -> Result<()> {
        let Some(p) = self.parity else {
            return Ok(());
        };
        for (j, (a, b)) in self.terms.iter().enumerate() {
            let pa = homogeneous_parity(a);
            let pb = homogeneous_parity(b);
            let ok = matches!(
                (pa, pb),
                (Some(Parity::Even), Some(Parity::Odd)) | (Some(Parity::Odd), Some(Parity::Even))
            ) || a.is_zero()
                || b.is_zero();
            if !ok {
                return Err(Error::Parity(format!(
                    "term {j}: A_j and B_j must be (even, odd) or (odd, even), got {a} and {b}"
                )));
            }
        }
        if !self.source.value.is_zero() && !self.source.value.has_parity(p.flip()) {
            return Err(Error::Parity(format!(
                "source must have parity {:?} for a {p:?} unknown",
                p.flip()
            )));
        }
        Ok(())
    }
}

/// Refuses systems that fail the Friedrichs conditions.
pub fn assemble_equipped(spec: &EquippedSystemSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    checked(build_equipped(spec, grid)?)
}

/// Assembly without the Friedrichs check, for reporting.
pub fn build_equipped(spec: &EquippedSystemSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    let sig = spec.tetrad.signature();
    let b = beta(sig)?;
    spec.check_grading()?;
    let layout = StateLayout::for_restriction(sig, spec.parity);
    let h = principal_matrices(&spec.tetrad, &layout, spec.parity)?;
    let dim = layout.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for (a, bj) in &spec.terms {
        if a.signature() != sig || bj.signature() != sig {
            return Err(Error::SignatureMismatch {
                left: a.signature(),
                right: sig,
            });
        }
        let left = mul_operator(&(&b * a), Side::Left, Restriction::Full)?;
        let right = mul_operator(bj, Side::Right, Restriction::Full)?;
        m += restrict(&left * &right, &layout, spec.parity)?;
    }
    let lower = if spec.terms.is_empty() {
        LowerOrder::Zero
    } else {
        LowerOrder::Constant(m)
    };
    let source = if spec.source.is_zero() {
        Source::Zero
    } else {
        let bf = layout.pack(&(&b * &spec.source.value));
        if spec.source.profile.is_constant() {
            Source::Constant(DVector::from_vec(bf))
        } else {
            let grid = need_grid(grid, "the source")?;
            Source::Field(
                (0..grid.num_points())
                    .map(|p| {
                        let c = spec.source.profile.eval(grid, p);
                        DVector::from_iterator(dim, bf.iter().map(|v| v * c))
                    })
                    .collect(),
            )
        }
    };
    Ok(AssembledSystem {
        system: FirstOrderSystem::new(h, lower, source)?,
        layout,
    })
}

/// Model Dirac equation `h^μ(∂_μψ + ψA_μ) + imψ = 0` with `ψ ∈ I(t)` and
/// `A_μ ∈ L(t)`.
#[derive(Clone, Debug)]
pub struct DiracModelSpec {
    pub tetrad: Tetrad,
    pub idempotent: HermitianIdempotent,
    /// `A_1 … A_n`; empty means `A = 0`.
    pub gauge: Vec<GenformField>,
    pub mass: f64,
}

impl DiracModelSpec {
    pub fn free(tetrad: Tetrad, idempotent: HermitianIdempotent, mass: f64) -> Self {
        Self {
            tetrad,
            idempotent,
            gauge: Vec::new(),
            mass,
        }
    }

    pub fn signature(&self) -> Signature {
        self.tetrad.signature()
    }

    pub fn gauge_is_zero(&self) -> bool {
        self.gauge.iter().all(GenformField::is_zero)
    }

    /// Same model with `A = 0`.
    pub fn without_gauge(&self) -> Self {
        Self {
            gauge: Vec::new(),
            ..self.clone()
        }
    }

    fn check(&self, grid: Option<&Grid>) -> Result<()> {
        let sig = self.signature();
        if self.idempotent.signature() != sig {
            return Err(Error::SignatureMismatch {
                left: self.idempotent.signature(),
                right: sig,
            });
        }
        if !self.mass.is_finite() {
            return Err(Error::Model("mass must be finite".into()));
        }
        if !self.gauge.is_empty() && self.gauge.len() != sig.dim() {
            return Err(Error::Model(format!(
                "gauge potential needs {} components, got {}",
                sig.dim(),
                self.gauge.len()
            )));
        }
        for (mu, a) in self.gauge.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let samples: Vec<Multivector> = if a.profile.is_constant() {
                vec![a.value.clone()]
            } else {
                let grid = need_grid(grid, "the gauge potential")?;
                (0..grid.num_points()).map(|p| a.at(grid, p)).collect()
            };
            for s in samples {
                let m = membership(&s, &self.idempotent, IdealSet::L)?;
                if m.residual > tol::GAUGE * s.max_abs().max(1.0) {
                    return Err(Error::Membership(format!(
                        "A_{} = {} is not in L(t) (residual {:e})",
                        mu + 1,
                        s,
                        m.residual
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same equation as a generic equipped spec (constant gauge only):
    /// terms `(h^μ, A_μ)` and `(i m e, e)`.
    pub fn to_equipped(&self) -> Result<EquippedSystemSpec> {
        let sig = self.signature();
        let mut terms = Vec::new();
        for (h, a) in self.tetrad.genvectors().into_iter().zip(&self.gauge) {
            if !a.profile.is_constant() {
                return Err(Error::Model("only constant gauge potentials map to constant terms".into()));
            }
            terms.push((h, a.value.clone()));
        }
        terms.push((Multivector::scalar(sig, C64::new(0.0, self.mass)), Multivector::one(sig)));
        Ok(EquippedSystemSpec {
            tetrad: self.tetrad.clone(),
            terms,
            source: GenformField::zero(sig),
            parity: None,
        })
    }
}

/// `M(x) = Σ_μ L_{βh^μ} R_{A_μ(x)} + i m L_β` on the full algebra.
/// Refuses systems that fail the Friedrichs conditions.
pub fn assemble_model_dirac(spec: &DiracModelSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    checked(build_model_dirac(spec, grid)?)
}

/// Assembly without the Friedrichs check, for reporting.
pub fn build_model_dirac(spec: &DiracModelSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    spec.check(grid)?;
    let sig = spec.signature();
    let b = beta(sig)?;
    let layout = StateLayout::full(sig);
    let h = principal_matrices(&spec.tetrad, &layout, None)?;
    let mass_term = mul_operator(&b, Side::Left, Restriction::Full)?
        .into_matrix()
        * C64::new(0.0, spec.mass);
    let mut constant = mass_term;
    let mut varying: Vec<(Profile, CMatrix)> = Vec::new();
    for (h_mu, a) in spec.tetrad.genvectors().iter().zip(&spec.gauge) {
        if a.is_zero() {
            continue;
        }
        let op = (&mul_operator(&(&b * h_mu), Side::Left, Restriction::Full)?
            * &mul_operator(&a.value, Side::Right, Restriction::Full)?)
            .into_matrix();
        if a.profile.is_constant() {
            constant += op;
        } else {
            varying.push((a.profile.clone(), op));
        }
    }
    let lower = if varying.is_empty() {
        if spec.mass == 0.0 && spec.gauge_is_zero() {
            LowerOrder::Zero
        } else {
            LowerOrder::Constant(constant)
        }
    } else {
        let grid = need_grid(grid, "the gauge potential")?;
        LowerOrder::Field(
            (0..grid.num_points())
                .map(|p| {
                    let mut m = constant.clone();
                    for (profile, op) in &varying {
                        m += op * profile.eval(grid, p);
                    }
                    m
                })
                .collect(),
        )
    };
    Ok(AssembledSystem {
        system: FirstOrderSystem::new(h, lower, Source::Zero)?,
        layout,
    })
}

/// Dirac-Hestenes equation `∂Ψ + AΨK + mΨKβ = 0` with `A = a_μ h^μ` on even
/// or odd `Ψ` in signature `(1,3)`.
#[derive(Clone, Debug)]
pub struct HestenesModelSpec {
    pub tetrad: Tetrad,
    pub covector: CovectorField,
    pub k: Multivector,
    pub mass: f64,
    pub parity: Parity,
}

/// Residuals of the conditions on `K`: grade 2, `K² = −e`, `βK = Kβ`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BivectorCheck {
    pub grade_two: bool,
    pub square_residual: f64,
    pub commutator_residual: f64,
    pub pass: bool,
}

pub fn check_hestenes_k(k: &Multivector) -> Result<BivectorCheck> {
    let sig = k.signature();
    let b = beta(sig)?;
    let grade_two = !k.is_zero() && k.grades() == vec![2];
    let square_residual = (k * k).dist(&-Multivector::one(sig));
    let commutator_residual = b.commutator(k)?.max_abs();
    Ok(BivectorCheck {
        grade_two,
        square_residual,
        commutator_residual,
        pass: grade_two && square_residual <= 1e-13 && commutator_residual <= 1e-13,
    })
}

impl HestenesModelSpec {
    /// `K = −e²³`, `a = 0`, even `Ψ`, identity tetrad.
    pub fn standard(mass: f64) -> Result<Self> {
        let sig = Signature::new(1, 3)?;
        Ok(Self {
            tetrad: Tetrad::identity(sig),
            covector: CovectorField::zero(4),
            k: Multivector::parse(sig, "-e^23")?,
            mass,
            parity: Parity::Even,
        })
    }
}

/// `M = Σ_μ a_μ(x) L_{βh^μ} R_K + m L_β R_{Kβ}`, restricted to the parity
/// of `Ψ`.
/// Refuses systems that fail the Friedrichs conditions.
pub fn assemble_dirac_hestenes(spec: &HestenesModelSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    checked(build_dirac_hestenes(spec, grid)?)
}

/// Assembly without the Friedrichs check, for reporting.
pub fn build_dirac_hestenes(spec: &HestenesModelSpec, grid: Option<&Grid>) -> Result<AssembledSystem> {
    let sig = spec.tetrad.signature();
    if sig != Signature::new(1, 3)? {
        return Err(Error::Model(format!("Dirac-Hestenes requires signature (1,3), got {sig}")));
    }
    let check = check_hestenes_k(&spec.k)?;
    if !check.pass {
        return Err(Error::Model(format!(
            "K = {} fails its conditions: grade-2 {}, ‖K²+e‖ = {:e}, ‖[β,K]‖ = {:e}",
            spec.k, check.grade_two, check.square_residual, check.commutator_residual
        )));
    }
    if spec.covector.components.len() != 4 {
        return Err(Error::Model("covector a_μ needs 4 components".into()));
    }
    if matches!(spec.covector.profile, Profile::Wave { .. }) {
        return Err(Error::Model("covector a_μ must be real; wave profiles are complex".into()));
    }
    let b = beta(sig)?;
    let parity = Some(spec.parity);
    let layout = StateLayout::parity(sig, spec.parity);
    let h = principal_matrices(&spec.tetrad, &layout, parity)?;
    let r_k = mul_operator(&spec.k, Side::Right, Restriction::Full)?;
    let mut gauge = CMatrix::zeros(layout.dim(), layout.dim());
    for (h_mu, &a) in spec.tetrad.genvectors().iter().zip(&spec.covector.components) {
        if a != 0.0 {
            let op = &mul_operator(&(&b * h_mu), Side::Left, Restriction::Full)? * &r_k;
            gauge += restrict(op, &layout, parity)? * C64::new(a, 0.0);
        }
    }
    let mass = restrict(
        &mul_operator(&b, Side::Left, Restriction::Full)?
            * &mul_operator(&(&spec.k * &b), Side::Right, Restriction::Full)?,
        &layout,
        parity,
    )? * C64::new(spec.mass, 0.0);
    let has_gauge = spec.covector.components.iter().any(|a| *a != 0.0);
    let lower = if !has_gauge && spec.mass == 0.0 {
        LowerOrder::Zero
    } else if !has_gauge || spec.covector.profile.is_constant() {
        LowerOrder::Constant(mass + gauge)
    } else {
        let grid = need_grid(grid, "the covector a_μ")?;
        LowerOrder::Field(
            (0..grid.num_points())
                .map(|p| &mass + &gauge * spec.covector.profile.eval(grid, p))
                .collect(),
        )
    };
    Ok(AssembledSystem {
        system: FirstOrderSystem::new(h, lower, Source::Zero)?,
        layout,
    })
}
