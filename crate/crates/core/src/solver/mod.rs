//! Complex Friedrichs symmetric hyperbolic systems
//! `Σ H_i ∂_i u + M u = j` with `x¹` as time.
//!
//! The Cauchy problem is solved by the method of lines: central differences
//! (second or fourth order) on periodic active axes and classical RK4 in
//! `x¹`, on `∂₁u = −H₁⁻¹(Σ_{i≥2} H_i ∂_i u + M u − j)`.

mod grid;
pub mod io;

pub use grid::{Axis, FieldGrid, Grid, StencilOrder};

use crate::clifford::{C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Csr};
use crate::tol;
use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

/// Lower-order operator `M` (the `Q` of the Friedrichs form).
#[derive(Clone, Debug)]
pub enum LowerOrder {
    Zero,
    Constant(CMatrix),
    /// One matrix per grid point.
    Field(Vec<CMatrix>),
}

/// Right-hand side `j`.
#[derive(Clone, Debug)]
pub enum Source {
    Zero,
    Constant(DVector<C64>),
    Field(Vec<DVector<C64>>),
}

#[derive(Clone, Debug)]
pub struct FirstOrderSystem {
    n: usize,
    dim: usize,
    h: Vec<CMatrix>,
    lower: LowerOrder,
    source: Source,
}

impl FirstOrderSystem {
    /// `h[0]` is the time-direction matrix `H₁`; `h.len()` is the space-time
    /// dimension.
    pub fn new(h: Vec<CMatrix>, lower: LowerOrder, source: Source) -> Result<Self> {
        let n = h.len();
        if n < 1 {
            return Err(Error::Dimension("need at least H₁".into()));
        }
        let dim = h[0].nrows();
        let square = |m: &CMatrix| m.nrows() == dim && m.ncols() == dim;
        if !h.iter().all(square) {
            return Err(Error::Dimension(format!("all H_i must be {dim}x{dim}")));
        }
        match &lower {
            LowerOrder::Constant(m) if !square(m) => {
                return Err(Error::Dimension(format!("M must be {dim}x{dim}")))
            }
            LowerOrder::Field(ms) if !ms.iter().all(square) => {
                return Err(Error::Dimension(format!("every M(x) must be {dim}x{dim}")))
            }
            _ => {}
        }
        match &source {
            Source::Constant(v) if v.len() != dim => {
                return Err(Error::Dimension(format!("j must have {dim} components")))
            }
            Source::Field(vs) if vs.iter().any(|v| v.len() != dim) => {
                return Err(Error::Dimension(format!("every j(x) must have {dim} components")))
            }
            _ => {}
        }
        Ok(Self {
            n,
            dim,
            h,
            lower,
            source,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> &[CMatrix] {
        &self.h
    }

    /// `H_mu`, one-based.
    pub fn h_at(&self, mu: usize) -> &CMatrix {
        &self.h[mu - 1]
    }

    pub fn lower(&self) -> &LowerOrder {
        &self.lower
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    /// `M` at a grid point.
    pub fn lower_at(&self, point: usize) -> Option<&CMatrix> {
        match &self.lower {
            LowerOrder::Zero => None,
            LowerOrder::Constant(m) => Some(m),
            LowerOrder::Field(ms) => Some(&ms[point]),
        }
    }

    /// Worst `‖M + M†‖` over all points (0 when `M = 0`).
    pub fn lower_antihermiticity(&self) -> f64 {
        match &self.lower {
            LowerOrder::Zero => 0.0,
            LowerOrder::Constant(m) => linalg::antihermiticity_residual(m),
            LowerOrder::Field(ms) => ms
                .iter()
                .map(linalg::antihermiticity_residual)
                .fold(0.0, f64::max),
        }
    }

    /// Copy with `M` and `j` replaced by zero.
    pub fn principal_part(&self) -> Self {
        Self {
            lower: LowerOrder::Zero,
            source: Source::Zero,
            ..self.clone()
        }
    }

    /// Copy with `j = 0`.
    pub fn homogeneous(&self) -> Self {
        Self {
            source: Source::Zero,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FriedrichsReport {
    /// `‖H_i − H_i†‖∞` for `i = 1..n`.
    pub hermiticity_residuals: Vec<f64>,
    /// Minimum eigenvalue of `H₁`.
    pub gamma: f64,
    pub max_eigenvalue_h1: f64,
    pub hermitian: bool,
    pub positive_definite: bool,
    pub pass: bool,
}

/// Checks that every `H_i` is Hermitian and `H₁` is positive definite.
pub fn validate_friedrichs(sys: &FirstOrderSystem) -> FriedrichsReport {
    let residuals: Vec<f64> = sys.h.iter().map(linalg::hermiticity_residual).collect();
    let hermitian = residuals.iter().all(|r| *r <= tol::HERMITIAN);
    let (gamma, max_eig) = match linalg::hermitian_eigenvalues(&linalg::hermitian_part(&sys.h[0])) {
        Ok(v) => (v[0], v[v.len() - 1]),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let positive = gamma > tol::POSITIVE;
    FriedrichsReport {
        hermiticity_residuals: residuals,
        gamma,
        max_eigenvalue_h1: max_eig,
        hermitian,
        positive_definite: positive,
        pass: hermitian && positive,
    }
}

/// `Σ H_i τ_i` and its minimum eigenvalue.
pub fn boundary_flux_matrix(sys: &FirstOrderSystem, tau: &[f64]) -> Result<(CMatrix, f64)> {
    if tau.len() != sys.n {
        return Err(Error::Dimension(format!("normal has {} components, need {}", tau.len(), sys.n)));
    }
    if tau.iter().all(|t| *t == 0.0) {
        return Err(Error::Config("normal vector must be nonzero".into()));
    }
    let mut m = CMatrix::zeros(sys.dim, sys.dim);
    for (h, &t) in sys.h.iter().zip(tau) {
        m += h * C64::new(t, 0.0);
    }
    let vals = linalg::hermitian_eigenvalues(&linalg::hermitian_part(&m))?;
    Ok((m, vals[0]))
}

/// Spectral radius of `H₁⁻¹ H_mu` for each one-based `mu` in `axes`.
pub fn characteristic_speeds(sys: &FirstOrderSystem, axes: &[usize]) -> Result<Vec<f64>> {
    axes.iter()
        .map(|&mu| linalg::spectral_radius_generalized(&linalg::hermitian_part(&sys.h[mu - 1]), &sys.h[0]))
        .collect()
}

/// Largest stable step `cfl · min_i Δx_i / λ_i` (infinite with no transport).
pub fn cfl_limit(sys: &FirstOrderSystem, grid: &Grid) -> Result<f64> {
    let axes: Vec<usize> = grid.axes.iter().map(|a| a.index).collect();
    let speeds = characteristic_speeds(sys, &axes)?;
    Ok(grid
        .axes
        .iter()
        .zip(speeds)
        .filter(|(_, s)| *s > 0.0)
        .map(|(ax, s)| grid.cfl * ax.spacing() / s)
        .fold(f64::INFINITY, f64::min))
}

/// Sets `steps` and `dt ≤ cfl limit` so that `steps · dt = final_time`.
pub fn fit_time(sys: &FirstOrderSystem, grid: Grid, final_time: f64) -> Result<Grid> {
    let limit = cfl_limit(sys, &grid)?;
    let steps = if limit.is_finite() {
        (final_time / limit).ceil().max(1.0) as usize
    } else {
        1
    };
    let dt = final_time / steps as f64;
    Ok(grid.with_time(dt, steps))
}

/// Sets `dt` to the CFL limit and runs `steps` steps.
pub fn cfl_time(sys: &FirstOrderSystem, grid: Grid, steps: usize) -> Result<Grid> {
    let limit = cfl_limit(sys, &grid)?;
    if !limit.is_finite() {
        return Err(Error::Config("no transport on active axes; give dt explicitly".into()));
    }
    Ok(grid.with_time(limit, steps))
}

/// `E = Σ_points (H₁u, u) · ΠΔx`.
pub fn energy(sys: &FirstOrderSystem, slice: &FieldGrid, grid: &Grid) -> f64 {
    let h1 = &sys.h[0];
    let d = sys.dim;
    let mut total = 0.0;
    for p in 0..slice.num_points() {
        let u = slice.point(p);
        let mut acc = ZERO;
        for i in 0..d {
            let mut hu = ZERO;
            for j in 0..d {
                hu += h1[(i, j)] * u[j];
            }
            acc += hu * u[i].conj();
        }
        total += acc.re;
    }
    total * grid.cell_volume()
}

enum PreparedLower {
    Zero,
    Constant(Csr),
    Field(Vec<Csr>),
}

/// Semi-discrete right-hand side `−H₁⁻¹(Σ H_i D_i u + M u − j)`.
struct SpatialOperator {
    dim: usize,
    /// `(H₁⁻¹ H_i, 1/Δx_i)` per active axis.
    transport: Vec<(Csr, f64)>,
    /// Neighbour tables per active axis: `[-2, -1, +1, +2]`.
    neighbours: Vec<Vec<[usize; 4]>>,
    order: StencilOrder,
    lower: PreparedLower,
    source: Option<Vec<C64>>,
}

impl SpatialOperator {
    fn apply(&self, u: &[C64], out: &mut [C64]) {
        let dim = self.dim;
        const CHUNK: usize = 64;
        out.par_chunks_mut(dim * CHUNK)
            .enumerate()
            .for_each(|(chunk, block)| {
                let mut deriv = vec![ZERO; dim];
                for (k, o) in block.chunks_mut(dim).enumerate() {
                    self.apply_point(chunk * CHUNK + k, u, &mut deriv, o);
                }
            });
    }

    fn apply_point(&self, p: usize, u: &[C64], deriv: &mut [C64], out: &mut [C64]) {
        let dim = self.dim;
        match &self.source {
            Some(s) => out.copy_from_slice(&s[p * dim..(p + 1) * dim]),
            None => out.fill(ZERO),
        }
        let up = &u[p * dim..(p + 1) * dim];
        match &self.lower {
            PreparedLower::Zero => {}
            PreparedLower::Constant(b) => b.mul_add(-ONE, up, out),
            PreparedLower::Field(bs) => bs[p].mul_add(-ONE, up, out),
        }
        for ((a, inv_dx), nb) in self.transport.iter().zip(&self.neighbours) {
            let [m2, m1, p1, p2] = nb[p];
            let at = |q: usize, c: usize| u[q * dim + c];
            match self.order {
                StencilOrder::Second => {
                    let w = 0.5 * inv_dx;
                    for (c, d) in deriv.iter_mut().enumerate() {
                        *d = (at(p1, c) - at(m1, c)) * w;
                    }
                }
                StencilOrder::Fourth => {
                    let w = inv_dx / 12.0;
                    for (c, d) in deriv.iter_mut().enumerate() {
                        *d = (at(m2, c) - at(p2, c) + (at(p1, c) - at(m1, c)) * 8.0) * w;
                    }
                }
            }
            a.mul_add(-ONE, deriv, out);
        }
    }
}

/// Explicit RK4 stepper for one system on one grid.
pub struct CauchySolver {
    npoints: usize,
    dt: f64,
    steps: usize,
    op: SpatialOperator,
    projector: Option<Csr>,
    stages: [Vec<C64>; 5],
}

impl CauchySolver {
    /// Validates the Friedrichs conditions and the CFL bound.
    pub fn new(sys: &FirstOrderSystem, grid: &Grid) -> Result<Self> {
        if grid.n != sys.n {
            return Err(Error::Dimension(format!(
                "grid is for n = {}, system has n = {}",
                grid.n, sys.n
            )));
        }
        let report = validate_friedrichs(sys);
        if !report.pass {
            return Err(Error::NotHyperbolic(format!(
                "hermiticity residuals {:?}, γ = {:e}",
                report.hermiticity_residuals, report.gamma
            )));
        }
        if !(grid.dt > 0.0 && grid.dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {}", grid.dt)));
        }
        let limit = cfl_limit(sys, grid)?;
        if grid.dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt: grid.dt, limit });
        }
        let npoints = grid.num_points();
        let h1_inv = linalg::cholesky_lower(&sys.h[0])?
            .try_inverse()
            .map(|li| li.adjoint() * li)
            .ok_or_else(|| Error::NotHyperbolic("H₁ is singular".into()))?;
        let transport = grid
            .axes
            .iter()
            .map(|ax| (Csr::from_dense(&(&h1_inv * &sys.h[ax.index - 1])), 1.0 / ax.spacing()))
            .collect();
        let neighbours = (0..grid.axes.len())
            .map(|k| {
                (0..npoints)
                    .map(|p| {
                        [
                            grid.neighbour(p, k, -2),
                            grid.neighbour(p, k, -1),
                            grid.neighbour(p, k, 1),
                            grid.neighbour(p, k, 2),
                        ]
                    })
                    .collect()
            })
            .collect();
        let lower = match &sys.lower {
            LowerOrder::Zero => PreparedLower::Zero,
            LowerOrder::Constant(m) => PreparedLower::Constant(Csr::from_dense(&(&h1_inv * m))),
            LowerOrder::Field(ms) => {
                if ms.len() != npoints {
                    return Err(Error::Dimension(format!(
                        "M(x) sampled on {} points, grid has {npoints}",
                        ms.len()
                    )));
                }
                PreparedLower::Field(ms.iter().map(|m| Csr::from_dense(&(&h1_inv * m))).collect())
            }
        };
        let source = match &sys.source {
            Source::Zero => None,
            Source::Constant(v) => {
                let s = &h1_inv * v;
                Some((0..npoints).flat_map(|_| s.iter().copied()).collect())
            }
            Source::Field(vs) => {
                if vs.len() != npoints {
                    return Err(Error::Dimension(format!(
                        "j(x) sampled on {} points, grid has {npoints}",
                        vs.len()
                    )));
                }
                Some(vs.iter().flat_map(|v| (&h1_inv * v).iter().copied().collect::<Vec<_>>()).collect())
            }
        };
        let len = npoints * sys.dim;
        Ok(Self {
            npoints,
            dt: grid.dt,
            steps: grid.steps,
            op: SpatialOperator {
                dim: sys.dim,
                transport,
                neighbours,
                order: grid.order,
                lower,
                source,
            },
            projector: None,
            stages: std::array::from_fn(|_| vec![ZERO; len]),
        })
    }

    /// Pointwise projector applied after every step (used to solve a problem
    /// restricted to an invariant subspace).
    pub fn with_projector(mut self, p: &CMatrix) -> Result<Self> {
        let dim = self.op.dim;
        if p.nrows() != dim || p.ncols() != dim {
            return Err(Error::Dimension(format!("projector must be {dim}x{dim}")));
        }
        self.projector = Some(Csr::from_dense(p));
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `du/dx¹` for the whole field.
    pub fn rhs(&self, field: &FieldGrid) -> FieldGrid {
        let mut out = field.clone();
        self.op.apply(field.data(), out.data_mut());
        out
    }

    /// One RK4 step in place; fails on non-finite values.
    pub fn step(&mut self, field: &mut FieldGrid) -> Result<()> {
        let dim = self.op.dim;
        if field.dim() != dim || field.num_points() != self.npoints {
            return Err(Error::Dimension(format!(
                "field is {}x{}, solver expects {}x{dim}",
                field.num_points(),
                field.dim(),
                self.npoints
            )));
        }
        let dt = self.dt;
        let [k1, k2, k3, k4, tmp] = &mut self.stages;
        let u = field.data();
        self.op.apply(u, k1);
        axpy_into(u, 0.5 * dt, k1, tmp);
        self.op.apply(tmp, k2);
        axpy_into(u, 0.5 * dt, k2, tmp);
        self.op.apply(tmp, k3);
        axpy_into(u, dt, k3, tmp);
        self.op.apply(tmp, k4);
        let w = dt / 6.0;
        field
            .data_mut()
            .par_iter_mut()
            .zip(k1.par_iter().zip(k2.par_iter()))
            .zip(k3.par_iter().zip(k4.par_iter()))
            .for_each(|((x, (a, b)), (c, d))| {
                *x += (a + (b + c) * 2.0 + d) * w;
            });
        if let Some(proj) = &self.projector {
            let mut buf = vec![ZERO; dim];
            for slot in field.data_mut().chunks_mut(dim) {
                proj.mul_into(slot, &mut buf);
                slot.copy_from_slice(&buf);
            }
        }
        field.step += 1;
        field.time += dt;
        if let Some(pos) = field
            .data()
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite {
                step: field.step,
                point: pos / dim,
                component: pos % dim,
            });
        }
        Ok(())
    }

    /// Runs all configured steps, calling `observe` on the initial field and
    /// after every step.
    pub fn run(
        &mut self,
        field: &mut FieldGrid,
        mut observe: impl FnMut(&FieldGrid) -> Result<()>,
    ) -> Result<()> {
        observe(field)?;
        for _ in 0..self.steps {
            self.step(field)?;
            observe(field)?;
        }
        Ok(())
    }
}

fn axpy_into(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    out.par_iter_mut()
        .zip(x.par_iter().zip(y.par_iter()))
        .for_each(|(o, (xi, yi))| *o = xi + yi * a);
}

/// Time slices of a Cauchy run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub slices: Vec<FieldGrid>,
}

impl Trajectory {
    pub fn last(&self) -> &FieldGrid {
        self.slices.last().expect("trajectory holds the initial slice")
    }
}

/// Solves the Cauchy problem from `u0`, keeping every `sample_every`-th
/// slice plus the final one.
pub fn solve_cauchy(
    sys: &FirstOrderSystem,
    u0: &FieldGrid,
    grid: &Grid,
    sample_every: usize,
) -> Result<Trajectory> {
    let mut solver = CauchySolver::new(sys, grid)?;
    let mut field = u0.clone();
    field.step = 0;
    field.time = 0.0;
    let every = sample_every.max(1);
    let steps = grid.steps;
    let mut slices = Vec::new();
    solver.run(&mut field, |f| {
        if f.step % every == 0 || f.step == steps {
            slices.push(f.clone());
        }
        Ok(())
    })?;
    Ok(Trajectory { slices })
}
