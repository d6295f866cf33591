use super::{assemble_model_dirac, AssembledSystem, DiracModelSpec, GenformField};
use crate::clifford::{Multivector, C64, ZERO};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Csr};
use crate::matrix_rep::{mul_operator, Restriction, Side};
use crate::sampling;
use crate::solver::{energy, validate_friedrichs, CauchySolver, FieldGrid, FirstOrderSystem, Grid, LowerOrder, Source};
use crate::spinor_ideals::{membership, HermitianIdempotent, IdealSet};
use crate::tol;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoremTolerances {
    pub leakage: f64,
    pub equation: f64,
    pub restricted: f64,
    pub control: f64,
    pub zero_dual: f64,
}

impl Default for TheoremTolerances {
    fn default() -> Self {
        Self {
            leakage: 1e-12,
            equation: 1e-11,
            restricted: 1e-11,
            control: 1e-11,
            zero_dual: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct TheoremOptions {
    /// Seeds the random `t′`-component of the control data.
    pub seed: u64,
    pub tolerances: TheoremTolerances,
}


#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    /// `max_n ‖Ψ_n t′‖∞ / ‖Ψ_n‖∞` over the equipped run.
    pub leakage_max: f64,
    /// `max_n ‖Ψ_n t′‖∞` over the equipped run, whose `φ′`-data is zero.
    pub zero_dual_max: f64,
    /// Largest one-step residual of the restricted scheme applied to
    /// `φ_n = Ψ_n t`, relative to `‖Ψ_0‖∞`.
    pub equation_residual: f64,
    /// `max_n ‖Ψ_n − φ_n‖∞ / ‖Ψ_0‖∞` against the problem posed on `I(t)`.
    pub restricted_agreement: f64,
    /// `max_n ‖Ψ_n t′ − φ′_n‖∞ / ‖φ′_0‖∞` against the free equation.
    pub control_residual: f64,
    pub energy_drift: f64,
    pub gamma: f64,
    pub hermiticity_residuals: Vec<f64>,
    pub lower_antihermiticity: f64,
    pub ideal_invariance: f64,
    pub steps: usize,
    pub points: usize,
    pub dt: f64,
    pub pass: bool,
}

fn apply_pointwise(op: &Csr, field: &FieldGrid) -> FieldGrid {
    let dim = op.nrows();
    let mut out = vec![ZERO; field.num_points() * dim];
    for (src, dst) in field.data().chunks(field.dim()).zip(out.chunks_mut(dim)) {
        op.mul_into(src, dst);
    }
    let mut f = FieldGrid::from_data(dim, out).expect("operator rows fix the dimension");
    f.step = field.step;
    f.time = field.time;
    f
}

fn rel(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x / scale
    } else {
        x
    }
}

/// Orthonormal basis (columns) of the range of the Hermitian projector `p`.
fn range_basis(p: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = linalg::hermitian_eigen(p)?;
    let cols: Vec<_> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.5)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return Err(Error::Model("projector has empty range".into()));
    }
    Ok(CMatrix::from_columns(&cols))
}

/// `Q† S Q` for an invariant subspace spanned by the columns of `q`.
fn reduce(sys: &FirstOrderSystem, q: &CMatrix) -> Result<FirstOrderSystem> {
    let qa = q.adjoint();
    let r = |m: &CMatrix| &qa * m * q;
    let h = sys.h().iter().map(r).collect();
    let lower = match sys.lower() {
        LowerOrder::Zero => LowerOrder::Zero,
        LowerOrder::Constant(m) => LowerOrder::Constant(r(m)),
        LowerOrder::Field(ms) => LowerOrder::Field(ms.iter().map(r).collect()),
    };
    let source = match sys.source() {
        Source::Zero => Source::Zero,
        Source::Constant(v) => Source::Constant(&qa * v),
        Source::Field(vs) => Source::Field(vs.iter().map(|v| &qa * v).collect::<Vec<DVector<C64>>>()),
    };
    FirstOrderSystem::new(h, lower, source)
}

/// `max ‖(I − P) X P‖` over `X ∈ {H₁⁻¹H_i, H₁⁻¹M(x)}` with `P = R_t`.
pub fn ideal_invariance_residual(assembled: &AssembledSystem, t: &HermitianIdempotent) -> Result<f64> {
    if assembled.layout.dim() != t.right_operator().nrows() {
        return Err(Error::Dimension("ideal invariance needs the full-algebra layout".into()));
    }
    let p = t.right_operator().matrix().clone();
    let sys = &assembled.system;
    let h1_inv = sys
        .h_at(1)
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotHyperbolic("H₁ is singular".into()))?;
    let id = CMatrix::identity(p.nrows(), p.ncols());
    let leak = |x: &CMatrix| linalg::max_abs(&((&id - &p) * &h1_inv * x * &p));
    let mut worst = sys.h().iter().skip(1).map(leak).fold(0.0, f64::max);
    match sys.lower() {
        LowerOrder::Zero => {}
        LowerOrder::Constant(m) => worst = worst.max(leak(m)),
        LowerOrder::Field(ms) => worst = ms.iter().map(leak).fold(worst, f64::max),
    }
    Ok(worst)
}

/// Runs the equipped model Dirac system from `ψ0 ∈ I(t)` alongside the
/// problem posed on `I(t)` and a control run with a random `t′` component.
/// `grid` must carry a time step.
pub fn verify_theorem(
    spec: &DiracModelSpec,
    psi0: &GenformField,
    grid: &Grid,
    opts: &TheoremOptions,
) -> Result<TheoremReport> {
    let t = &spec.idempotent;
    let m0 = membership(&psi0.value, t, IdealSet::I)?;
    if m0.residual > tol::MEMBERSHIP * psi0.value.max_abs().max(1.0) {
        return Err(Error::Membership(format!(
            "initial value {} is not in I(t) (residual {:e})",
            psi0.value, m0.residual
        )));
    }
    let equipped = assemble_model_dirac(spec, Some(grid))?;
    let free = assemble_model_dirac(&spec.without_gauge(), Some(grid))?;
    let friedrichs = validate_friedrichs(&equipped.system);
    let right_t = Csr::from_dense(t.right_operator());
    let right_dual = Csr::from_dense(t.dual_right_operator());

    let q = range_basis(t.right_operator())?;
    let qa = q.adjoint();
    let (to_ideal, from_ideal) = (Csr::from_dense(&qa), Csr::from_dense(&q));
    let restricted = reduce(&equipped.system, &q)?;

    let mut main = CauchySolver::new(&equipped.system, grid)?;
    let mut original = CauchySolver::new(&restricted, grid)?;
    let mut probe = CauchySolver::new(&restricted, grid)?;

    let mut psi = equipped.sample(psi0, grid)?;
    let mut phi = apply_pointwise(&to_ideal, &psi);
    let scale = psi.max_abs();
    let e0 = energy(&equipped.system, &psi, grid);

    let mut leakage_max = 0.0f64;
    let mut zero_dual_max = 0.0f64;
    let mut equation_residual = 0.0f64;
    let mut restricted_agreement = 0.0f64;
    let mut energy_drift = 0.0f64;
    for n in 0..=grid.steps {
        let dual = apply_pointwise(&right_dual, &psi).max_abs();
        zero_dual_max = zero_dual_max.max(dual);
        let norm = psi.max_abs();
        if norm > 0.0 {
            leakage_max = leakage_max.max(dual / norm);
        }
        restricted_agreement =
            restricted_agreement.max(rel(apply_pointwise(&from_ideal, &phi).max_diff(&psi), scale));
        if e0 > 0.0 {
            energy_drift = energy_drift.max((energy(&equipped.system, &psi, grid) - e0).abs() / e0);
        }
        if n == grid.steps {
            break;
        }
        let mut stepped = apply_pointwise(&to_ideal, &apply_pointwise(&right_t, &psi));
        probe.step(&mut stepped)?;
        main.step(&mut psi)?;
        original.step(&mut phi)?;
        let next = apply_pointwise(&to_ideal, &apply_pointwise(&right_t, &psi));
        equation_residual = equation_residual.max(rel(stepped.max_diff(&next), scale));
    }

    let mut rng = sampling::rng(opts.seed);
    let w = sampling::multivector(spec.signature(), &mut rng, 1.0);
    let extra = &w * t.dual_element();
    let control_data = GenformField {
        profile: psi0.profile.clone(),
        value: &psi0.value + &extra,
    };
    let free_data = GenformField {
        profile: psi0.profile.clone(),
        value: extra,
    };
    let mut control = CauchySolver::new(&equipped.system, grid)?;
    let mut free_solver = CauchySolver::new(&free.system, grid)?;
    let mut big = equipped.sample(&control_data, grid)?;
    let mut small = free.sample(&free_data, grid)?;
    let control_scale = small.max_abs();
    let mut control_residual = 0.0f64;
    for n in 0..=grid.steps {
        let dual = apply_pointwise(&right_dual, &big);
        control_residual = control_residual.max(rel(dual.max_diff(&small), control_scale));
        if n == grid.steps {
            break;
        }
        control.step(&mut big)?;
        free_solver.step(&mut small)?;
    }

    let ideal_invariance = ideal_invariance_residual(&equipped, t)?;
    let tl = &opts.tolerances;
    let pass = friedrichs.pass
        && leakage_max <= tl.leakage
        && zero_dual_max <= tl.zero_dual
        && equation_residual <= tl.equation
        && restricted_agreement <= tl.restricted
        && control_residual <= tl.control;
    Ok(TheoremReport {
        leakage_max,
        zero_dual_max,
        equation_residual,
        restricted_agreement,
        control_residual,
        energy_drift,
        gamma: friedrichs.gamma,
        hermiticity_residuals: friedrichs.hermiticity_residuals,
        lower_antihermiticity: equipped.system.lower_antihermiticity(),
        ideal_invariance,
        steps: grid.steps,
        points: grid.num_points(),
        dt: grid.dt,
        pass,
    })
}

/// Solves with `(A, ψ0)` and with `(U†AU, ψ0U)` for constant `U ∈ G(t)`
/// and returns `max_n ‖ψ_n U − ψ′_n‖∞ / ‖ψ0‖∞`.
pub fn gauge_covariance_residual(
    spec: &DiracModelSpec,
    psi0: &GenformField,
    grid: &Grid,
    u: &Multivector,
) -> Result<f64> {
    let g = membership(u, &spec.idempotent, IdealSet::G)?;
    if g.residual > tol::MEMBERSHIP * u.max_abs().max(1.0) {
        return Err(Error::Membership(format!("{u} is not in G(t) (residual {:e})", g.residual)));
    }
    let ud = u.hermitian_conjugate()?;
    let transformed = DiracModelSpec {
        gauge: spec
            .gauge
            .iter()
            .map(|a| GenformField {
                profile: a.profile.clone(),
                value: &(&ud * &a.value) * u,
            })
            .collect(),
        ..spec.clone()
    };
    let original = assemble_model_dirac(spec, Some(grid))?;
    let moved = assemble_model_dirac(&transformed, Some(grid))?;
    let right_u = Csr::from_dense(&mul_operator(u, Side::Right, Restriction::Full)?.into_matrix());
    let mut a = CauchySolver::new(&original.system, grid)?;
    let mut b = CauchySolver::new(&moved.system, grid)?;
    let mut psi = original.sample(psi0, grid)?;
    let mut psi_u = moved.sample(
        &GenformField {
            profile: psi0.profile.clone(),
            value: &psi0.value * u,
        },
        grid,
    )?;
    let scale = psi.max_abs();
    let mut worst = 0.0f64;
    for n in 0..=grid.steps {
        worst = worst.max(rel(apply_pointwise(&right_u, &psi).max_diff(&psi_u), scale));
        if n == grid.steps {
            break;
        }
        a.step(&mut psi)?;
        b.step(&mut psi_u)?;
    }
    Ok(worst)
}
