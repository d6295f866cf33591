use crate::clifford::C64;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::solver::{fit_time, solve_cauchy, FieldGrid, FirstOrderSystem, Grid, LowerOrder, StencilOrder};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug, Serialize)]
pub struct DispersionReport {
    pub mass: f64,
    pub k: Vec<f64>,
    pub omegas: Vec<f64>,
    pub expected: f64,
    pub max_deviation: f64,
    pub positive: usize,
    pub negative: usize,
    pub pass: bool,
}

/// `ω H₁ û = (Σ k_i H_i − iM) û` for plane waves `û e^{i(k·x − ωx¹)}`.
fn symbol(sys: &FirstOrderSystem, k: &[f64]) -> Result<CMatrix> {
    if k.len() + 1 != sys.n() {
        return Err(Error::Dimension(format!(
            "wave vector needs {} spatial components, got {}",
            sys.n() - 1,
            k.len()
        )));
    }
    let mut b = match sys.lower() {
        LowerOrder::Zero => CMatrix::zeros(sys.dim(), sys.dim()),
        LowerOrder::Constant(m) => m * C64::new(0.0, -1.0),
        LowerOrder::Field(_) => {
            return Err(Error::Model("plane waves need x-independent lower-order terms".into()))
        }
    };
    for (h, &ki) in sys.h().iter().skip(1).zip(k) {
        b += h * C64::new(ki, 0.0);
    }
    Ok(b)
}

/// Frequencies `ω(k)` (ascending) and the matching amplitudes as columns.
pub fn plane_wave_modes(sys: &FirstOrderSystem, k: &[f64]) -> Result<(Vec<f64>, CMatrix)> {
    linalg::generalized_hermitian_eigen(&symbol(sys, k)?, sys.h_at(1))
}

/// Compares the plane-wave spectrum with `±√(m² + |k|²)`.
pub fn dispersion_check(sys: &FirstOrderSystem, mass: f64, k: &[f64], tol: f64) -> Result<DispersionReport> {
    let (omegas, _) = plane_wave_modes(sys, k)?;
    let expected = (mass * mass + k.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let max_deviation = omegas
        .iter()
        .map(|w| (w.abs() - expected).abs())
        .fold(0.0, f64::max);
    let positive = omegas.iter().filter(|w| **w > tol).count();
    let negative = omegas.iter().filter(|w| **w < -tol).count();
    let balanced = if expected > tol {
        positive == negative && positive + negative == omegas.len()
    } else {
        positive == 0 && negative == 0
    };
    Ok(DispersionReport {
        mass,
        k: k.to_vec(),
        omegas,
        expected,
        max_deviation,
        positive,
        negative,
        pass: balanced && max_deviation <= tol,
    })
}

/// Distance from `ω` to the nearest plane-wave frequency at `k`.
pub fn dispersion_residual(sys: &FirstOrderSystem, k: &[f64], omega: f64) -> Result<f64> {
    let (omegas, _) = plane_wave_modes(sys, k)?;
    Ok(omegas.iter().map(|w| (w - omega).abs()).fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseStudy {
    pub omega: f64,
    pub final_time: f64,
    pub levels: Vec<usize>,
    /// Relative L² error against the exact plane wave at the final time.
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Evolves the highest-frequency plane wave with wave number `2πq/L` along
/// one axis on successively refined grids.
#[allow(clippy::too_many_arguments)]
pub fn phase_study(
    sys: &FirstOrderSystem,
    axis: usize,
    q: i64,
    length: f64,
    final_time: f64,
    levels: &[usize],
    cfl: f64,
    order: StencilOrder,
) -> Result<PhaseStudy> {
    if levels.len() < 2 {
        return Err(Error::Config("phase study needs at least two grid levels".into()));
    }
    if !(2..=sys.n()).contains(&axis) {
        return Err(Error::OutOfRange {
            what: "axis",
            value: axis,
            min: 2,
            max: sys.n(),
        });
    }
    let kx = 2.0 * PI * q as f64 / length;
    let mut k = vec![0.0; sys.n() - 1];
    k[axis - 2] = kx;
    let (omegas, modes) = plane_wave_modes(sys, &k)?;
    let top = omegas.len() - 1;
    let omega = omegas[top];
    let amp = modes.column(top).into_owned();
    let peak = amp.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let amp: Vec<C64> = amp.iter().map(|c| c / peak).collect();
    let wave = |grid: &Grid, t: f64| {
        FieldGrid::from_fn(grid, amp.len(), |_, x| {
            let ph = C64::from_polar(1.0, kx * x[0] - omega * t);
            amp.iter().map(|a| a * ph).collect()
        })
    };
    let mut errors = Vec::with_capacity(levels.len());
    for &points in levels {
        let grid = Grid::line(sys.n(), axis, points, length)?
            .with_cfl(cfl)
            .with_order(order);
        let grid = fit_time(sys, grid, final_time)?;
        let u0 = wave(&grid, 0.0)?;
        let run = solve_cauchy(sys, &u0, &grid, grid.steps.max(1))?;
        let exact = wave(&grid, grid.final_time())?;
        errors.push(run.last().l2_diff(&exact, &grid) / exact.l2_norm(&grid));
    }
    let orders = errors
        .windows(2)
        .zip(levels.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect();
    Ok(PhaseStudy {
        omega,
        final_time,
        levels: levels.to_vec(),
        errors,
        orders,
    })
}
