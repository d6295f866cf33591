//! Tetrads, genvectors `h^μ = y^μ_a e^a`, and the map between antisymmetric
//! tensor component sets and genforms.

use crate::clifford::{Multivector, Signature, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tol;
use nalgebra::DMatrix;
use serde::Serialize;
use std::sync::OnceLock;

/// Outcome of the orthonormality check `y η yᵀ = η`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TetradReport {
    pub valid: bool,
    pub max_deviation: f64,
}

fn eta(sig: Signature) -> DMatrix<f64> {
    DMatrix::from_fn(sig.dim(), sig.dim(), |i, j| if i == j { sig.metric(i) } else { 0.0 })
}

/// Checks `y^μ_a y^ν_b η^{ab} = η^{μν}` entrywise.
pub fn validate_tetrad(y: &DMatrix<f64>, sig: Signature) -> Result<TetradReport> {
    let n = sig.dim();
    if y.nrows() != y.ncols() {
        return Err(Error::InvalidTetrad(format!(
            "tetrad must be square, got {}x{}",
            y.nrows(),
            y.ncols()
        )));
    }
    if y.nrows() != n {
        return Err(Error::InvalidTetrad(format!(
            "tetrad is {}x{} but signature {sig} has n = {n}",
            y.nrows(),
            y.ncols()
        )));
    }
    let eta = eta(sig);
    let dev = (y * &eta * y.transpose() - &eta).amax();
    Ok(TetradReport {
        valid: dev.is_finite() && dev <= tol::TETRAD,
        max_deviation: dev,
    })
}

/// A validated tetrad `y^μ_a` (row μ = coordinate index, column a = frame
/// index).
#[derive(Debug)]
pub struct Tetrad {
    sig: Signature,
    y: DMatrix<f64>,
    max_deviation: f64,
    wedge_inverse: OnceLock<DMatrix<C64>>,
}

impl Clone for Tetrad {
    fn clone(&self) -> Self {
        Self {
            sig: self.sig,
            y: self.y.clone(),
            max_deviation: self.max_deviation,
            wedge_inverse: OnceLock::new(),
        }
    }
}

impl PartialEq for Tetrad {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.y == other.y
    }
}

impl Tetrad {
    pub fn new(sig: Signature, y: DMatrix<f64>) -> Result<Self> {
        let report = validate_tetrad(&y, sig)?;
        if !report.valid {
            return Err(Error::InvalidTetrad(format!(
                "y η yᵀ deviates from η by {:e}",
                report.max_deviation
            )));
        }
        Ok(Self {
            sig,
            y,
            max_deviation: report.max_deviation,
            wedge_inverse: OnceLock::new(),
        })
    }

    pub fn from_rows(sig: Signature, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTetrad("tetrad rows must form a square matrix".into()));
        }
        let y = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(sig, y)
    }

    pub fn identity(sig: Signature) -> Self {
        Self::new(sig, DMatrix::identity(sig.dim(), sig.dim())).expect("identity is a tetrad")
    }

    /// Boost with rapidity `chi` mixing coordinate 1 with coordinate `axis`
    /// (one-based), signature `(1, n-1)`.
    pub fn boost(sig: Signature, axis: usize, chi: f64) -> Result<Self> {
        Self::new(sig, boost_matrix(sig, axis, chi)?)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }

    /// `y′ = Λ y` for `Λ ∈ O(r,s)`.
    pub fn transformed(&self, lambda: &DMatrix<f64>) -> Result<Self> {
        let report = validate_tetrad(lambda, self.sig)?;
        if !report.valid {
            return Err(Error::InvalidTetrad("transformation is not in O(r,s)".into()));
        }
        Self::new(self.sig, lambda * &self.y)
    }

    /// `h^μ = y^μ_a e^a`, one-based `mu`.
    pub fn genvector(&self, mu: usize) -> Result<Multivector> {
        let n = self.sig.dim();
        if mu == 0 || mu > n {
            return Err(Error::OutOfRange {
                what: "genvector index",
                value: mu,
                min: 1,
                max: n,
            });
        }
        let mut h = Multivector::zero(self.sig);
        for a in 0..n {
            h.coeffs_mut()[1 << a] = C64::new(self.y[(mu - 1, a)], 0.0);
        }
        Ok(h)
    }

    pub fn genvectors(&self) -> Vec<Multivector> {
        (1..=self.sig.dim())
            .map(|mu| self.genvector(mu).expect("index in range"))
            .collect()
    }

    /// Columns are the wedge basis `h^{μ1}∧…∧h^{μk}` in blade coordinates,
    /// ordered as in [`TensorComponents::flat`].
    pub fn wedge_basis(&self) -> DMatrix<C64> {
        let size = self.sig.size();
        let hs = self.genvectors();
        let mut w = DMatrix::from_element(size, size, ZERO);
        for (col, set) in index_sets(self.sig.dim()).iter().enumerate() {
            let mut acc = Multivector::one(self.sig);
            for &mu in set {
                acc = acc.wedge(&hs[mu - 1]).expect("same signature");
            }
            for (row, &c) in acc.coeffs().iter().enumerate() {
                w[(row, col)] = c;
            }
        }
        w
    }

    fn wedge_inverse(&self) -> Result<&DMatrix<C64>> {
        if let Some(inv) = self.wedge_inverse.get() {
            return Ok(inv);
        }
        let inv = self
            .wedge_basis()
            .try_inverse()
            .ok_or_else(|| Error::InvalidTetrad("wedge basis is singular".into()))?;
        Ok(self.wedge_inverse.get_or_init(|| inv))
    }
}

/// Boost matrix in the `(1, axis)` plane.
pub fn boost_matrix(sig: Signature, axis: usize, chi: f64) -> Result<DMatrix<f64>> {
    let n = sig.dim();
    if !sig.is_lorentzian() {
        return Err(Error::NotLorentzian(sig));
    }
    if axis < 2 || axis > n {
        return Err(Error::OutOfRange {
            what: "boost axis",
            value: axis,
            min: 2,
            max: n,
        });
    }
    let mut m = DMatrix::identity(n, n);
    let (c, s) = (chi.cosh(), chi.sinh());
    m[(0, 0)] = c;
    m[(0, axis - 1)] = s;
    m[(axis - 1, 0)] = s;
    m[(axis - 1, axis - 1)] = c;
    Ok(m)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing one-based index sets, grouped by rank and in
/// lexicographic order within a rank.
pub fn index_sets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << n);
    for k in 0..=n {
        combinations(n, k, &mut Vec::new(), 1, &mut out);
    }
    out
}

fn combinations(n: usize, k: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for a in start..=n {
        cur.push(a);
        combinations(n, k, cur, a + 1, out);
        cur.pop();
    }
}

/// Antisymmetric covariant tensor components `u, u_μ, u_{μ1μ2}, …` stored
/// for strictly increasing index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorComponents {
    n: usize,
    ranks: Vec<Vec<C64>>,
}

impl TensorComponents {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            ranks: (0..=n).map(|k| vec![ZERO; binomial(n, k)]).collect(),
        }
    }

    /// From per-rank lists; rank `k` must have `C(n,k)` entries.
    pub fn from_ranks(n: usize, ranks: Vec<Vec<C64>>) -> Result<Self> {
        if ranks.len() != n + 1 {
            return Err(Error::Dimension(format!("expected {} ranks, got {}", n + 1, ranks.len())));
        }
        for (k, r) in ranks.iter().enumerate() {
            if r.len() != binomial(n, k) {
                return Err(Error::Dimension(format!(
                    "rank {k} needs {} components, got {}",
                    binomial(n, k),
                    r.len()
                )));
            }
        }
        Ok(Self { n, ranks })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self, k: usize) -> &[C64] {
        &self.ranks[k]
    }

    fn position(&self, indices: &[usize]) -> Result<(usize, usize)> {
        let k = indices.len();
        if k > self.n || indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&a| a == 0 || a > self.n) {
            return Err(Error::Dimension(format!(
                "indices {indices:?} must be strictly increasing in 1..={}",
                self.n
            )));
        }
        let mut sets = Vec::new();
        combinations(self.n, k, &mut Vec::new(), 1, &mut sets);
        let pos = sets.iter().position(|s| s == indices).expect("valid index set");
        Ok((k, pos))
    }

    pub fn get(&self, indices: &[usize]) -> Result<C64> {
        let (k, p) = self.position(indices)?;
        Ok(self.ranks[k][p])
    }

    pub fn set(&mut self, indices: &[usize], value: C64) -> Result<()> {
        let (k, p) = self.position(indices)?;
        self.ranks[k][p] = value;
        Ok(())
    }

    /// All components concatenated rank by rank.
    pub fn flat(&self) -> Vec<C64> {
        self.ranks.iter().flatten().copied().collect()
    }

    fn from_flat(n: usize, flat: &[C64]) -> Self {
        let mut it = flat.iter().copied();
        let ranks = (0..=n)
            .map(|k| it.by_ref().take(binomial(n, k)).collect())
            .collect();
        Self { n, ranks }
    }
}

/// `U = u e + Σ_k Σ_{μ1<…<μk} u_{μ1…μk} h^{μ1}∧…∧h^{μk}`.
pub fn from_tensors(c: &TensorComponents, y: &Tetrad) -> Result<Multivector> {
    let sig = y.signature();
    if c.dim() != sig.dim() {
        return Err(Error::Dimension(format!(
            "components for n = {} but tetrad has n = {}",
            c.dim(),
            sig.dim()
        )));
    }
    let hs = y.genvectors();
    let mut u = Multivector::zero(sig);
    for (set, &coef) in index_sets(sig.dim()).iter().zip(c.flat().iter()) {
        if coef == ZERO {
            continue;
        }
        let mut acc = Multivector::one(sig);
        for &mu in set {
            acc = acc.wedge(&hs[mu - 1])?;
        }
        u += &acc.scale(coef);
    }
    Ok(u)
}

/// Inverse of [`from_tensors`]: solves the blade ↔ wedge change of basis.
pub fn to_tensors(u: &Multivector, y: &Tetrad) -> Result<TensorComponents> {
    let sig = y.signature();
    if u.signature() != sig {
        return Err(Error::SignatureMismatch {
            left: u.signature(),
            right: sig,
        });
    }
    let inv = y.wedge_inverse()?;
    let v = nalgebra::DVector::from_column_slice(u.coeffs());
    let c = inv * v;
    Ok(TensorComponents::from_flat(sig.dim(), c.as_slice()))
}

/// `h^μ h^ν + h^ν h^μ - 2η^{μν} e`, max over all pairs.
pub fn anticommutator_residual(y: &Tetrad) -> f64 {
    let sig = y.signature();
    let hs = y.genvectors();
    let mut worst = 0.0f64;
    for (mu, hm) in hs.iter().enumerate() {
        for (nu, hn) in hs.iter().enumerate() {
            let anti = hm * hn + hn * hm;
            let target = if mu == nu {
                Multivector::scalar(sig, ONE * (2.0 * sig.metric(mu)))
            } else {
                Multivector::zero(sig)
            };
            worst = worst.max(anti.dist(&target));
        }
    }
    worst
}
