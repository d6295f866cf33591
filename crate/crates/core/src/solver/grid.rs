use crate::clifford::{C64, ZERO};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One periodic spatial axis, identified by its coordinate index `2..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub index: usize,
    pub points: usize,
    pub length: f64,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }
}

/// Central-difference order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilOrder {
    #[serde(rename = "2")]
    Second,
    #[serde(rename = "4")]
    Fourth,
}

impl StencilOrder {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            2 => Ok(Self::Second),
            4 => Ok(Self::Fourth),
            o => Err(Error::Config(format!("stencil order must be 2 or 4, got {o}"))),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Self::Second => 2,
            Self::Fourth => 4,
        }
    }
}

/// Space-time slab: `x¹` is time, active spatial axes are periodic boxes and
/// fields are constant along every inactive axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub axes: Vec<Axis>,
    pub dt: f64,
    pub steps: usize,
    pub cfl: f64,
    pub order: StencilOrder,
}

impl Grid {
    /// Grid with no time stepping configured yet (`dt = 0`, `steps = 0`).
    pub fn new(n: usize, axes: Vec<Axis>) -> Result<Self> {
        let mut seen = Vec::new();
        for ax in &axes {
            if ax.index < 2 || ax.index > n {
                return Err(Error::OutOfRange {
                    what: "active axis",
                    value: ax.index,
                    min: 2,
                    max: n,
                });
            }
            if seen.contains(&ax.index) {
                return Err(Error::Config(format!("axis {} listed twice", ax.index)));
            }
            if ax.points < 5 {
                return Err(Error::Config(format!("axis {} needs at least 5 points", ax.index)));
            }
            if !(ax.length > 0.0 && ax.length.is_finite()) {
                return Err(Error::Config(format!("axis {} length must be positive", ax.index)));
            }
            seen.push(ax.index);
        }
        Ok(Self {
            n,
            axes,
            dt: 0.0,
            steps: 0,
            cfl: crate::tol::CFL,
            order: StencilOrder::Second,
        })
    }

    /// One active axis of `points` points on `[0, length)`.
    pub fn line(n: usize, axis: usize, points: usize, length: f64) -> Result<Self> {
        Self::new(
            n,
            vec![Axis {
                index: axis,
                points,
                length,
            }],
        )
    }

    pub fn with_time(mut self, dt: f64, steps: usize) -> Self {
        self.dt = dt;
        self.steps = steps;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_order(mut self, order: StencilOrder) -> Self {
        self.order = order;
        self
    }

    pub fn num_points(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    /// `Π Δx_i` over active axes.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    pub fn min_spacing(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).fold(f64::INFINITY, f64::min)
    }

    /// Row-major multi-index of a flat point index (last axis fastest).
    pub fn multi_index(&self, mut point: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (k, ax) in self.axes.iter().enumerate().rev() {
            idx[k] = point % ax.points;
            point /= ax.points;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        self.axes
            .iter()
            .zip(idx)
            .fold(0, |acc, (ax, &i)| acc * ax.points + i)
    }

    /// Coordinates of a point on the active axes.
    pub fn coordinates(&self, point: usize) -> Vec<f64> {
        self.multi_index(point)
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| i as f64 * ax.spacing())
            .collect()
    }

    /// Coordinate of a point along full coordinate index `mu` (inactive axes
    /// read as 0).
    pub fn coordinate(&self, point: usize, mu: usize) -> f64 {
        let coords = self.coordinates(point);
        self.axes
            .iter()
            .position(|a| a.index == mu)
            .map(|k| coords[k])
            .unwrap_or(0.0)
    }

    /// Periodic neighbour `offset` points away along active axis `k`.
    pub fn neighbour(&self, point: usize, k: usize, offset: isize) -> usize {
        let mut idx = self.multi_index(point);
        let p = self.axes[k].points as isize;
        idx[k] = ((idx[k] as isize + offset).rem_euclid(p)) as usize;
        self.flat_index(&idx)
    }

    pub fn final_time(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

/// State `u(x)` at one time: `dim` complex components per grid point,
/// point-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub step: usize,
    pub time: f64,
    dim: usize,
    data: Vec<C64>,
}

impl FieldGrid {
    pub fn zeros(grid: &Grid, dim: usize) -> Self {
        Self {
            step: 0,
            time: 0.0,
            dim,
            data: vec![ZERO; grid.num_points() * dim],
        }
    }

    /// Field from a function of the point's active-axis coordinates.
    pub fn from_fn(grid: &Grid, dim: usize, mut f: impl FnMut(usize, &[f64]) -> Vec<C64>) -> Result<Self> {
        let mut field = Self::zeros(grid, dim);
        for p in 0..grid.num_points() {
            let v = f(p, &grid.coordinates(p));
            if v.len() != dim {
                return Err(Error::Dimension(format!("point value has {} components, need {dim}", v.len())));
            }
            field.point_mut(p).copy_from_slice(&v);
        }
        Ok(field)
    }

    pub fn from_data(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::Dimension(format!("{} values do not split into {dim}-vectors", data.len())));
        }
        Ok(Self {
            step: 0,
            time: 0.0,
            dim,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn point(&self, p: usize) -> &[C64] {
        &self.data[p * self.dim..(p + 1) * self.dim]
    }

    pub fn point_mut(&mut self, p: usize) -> &mut [C64] {
        &mut self.data[p * self.dim..(p + 1) * self.dim]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max |u − v|` over all points and components.
    pub fn max_diff(&self, other: &FieldGrid) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "field shapes differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Discrete `L²` norm `sqrt(Σ |u|² ΠΔx)`.
    pub fn l2_norm(&self, grid: &Grid) -> f64 {
        (self.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.cell_volume()).sqrt()
    }

    pub fn l2_diff(&self, other: &FieldGrid, grid: &Grid) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "field shapes differ");
        let s: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * grid.cell_volume()).sqrt()
    }

    /// `αu + βv`.
    pub fn combine(&self, alpha: C64, other: &FieldGrid, beta: C64) -> FieldGrid {
        assert_eq!(self.data.len(), other.data.len(), "field shapes differ");
        FieldGrid {
            step: self.step,
            time: self.time,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }
}
