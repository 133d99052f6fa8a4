//! Time grids and piecewise-linear sampled functions.

use std::sync::Arc;

use crate::error::{Error, Result};

/// How the nodes were generated. The convolution engine exploits a uniform
/// tail (Toeplitz weights) and treats everything before it as a block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Layout {
    General,
    /// Nodes `start..` satisfy t_j = t_start + (j − start)·h.
    UniformTail { start: usize, h: f64 },
}

/// Strictly increasing time nodes starting at 0.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    nodes: Arc<[f64]>,
    layout: Layout,
}

impl PartialEq for TimeGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes[..] == other.nodes[..]
    }
}

/// Ratio between consecutive cells of the geometric refinement in [`TimeGrid::graded`].
pub const GRADED_RATIO: f64 = 0.9;
/// Smallest positive node of [`TimeGrid::graded`], relative to the step h.
pub const GRADED_DEPTH: f64 = 1e-9;

fn check_span(t_max: f64, n: usize) -> Result<f64> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!("t_max must be finite and > 0, got {t_max}")));
    }
    if n == 0 {
        return Err(Error::InvalidGrid("at least one step is required".into()));
    }
    Ok(t_max / n as f64)
}

impl TimeGrid {
    /// n equal steps on [0, t_max].
    pub fn uniform(t_max: f64, n: usize) -> Result<Self> {
        let h = check_span(t_max, n)?;
        let nodes: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
        Ok(Self {
            nodes: nodes.into(),
            layout: Layout::UniformTail { start: 0, h },
        })
    }

    /// n equal steps on [0, t_max] with the first few steps replaced by a
    /// geometric sequence towards 0 (ratio [`GRADED_RATIO`], down to
    /// [`GRADED_DEPTH`]·h).
    ///
    /// The geometric part ends at m·h with m = ⌊1/(1 − ratio)⌋, so no cell
    /// exceeds h and cell/t stays ≤ 1 − ratio there. Solutions and forcings
    /// behaving like t^β near the origin are then resolved without shrinking
    /// h everywhere. The nodes h, …, (m−1)·h are not part of the grid.
    pub fn graded(t_max: f64, n: usize) -> Result<Self> {
        Self::graded_with(t_max, n, GRADED_RATIO, GRADED_DEPTH)
    }

    pub fn graded_with(t_max: f64, n: usize, ratio: f64, depth: f64) -> Result<Self> {
        let h = check_span(t_max, n)?;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidGrid(format!("refinement ratio must lie in (0, 1), got {ratio}")));
        }
        if !(depth > 0.0 && depth < 1.0) {
            return Err(Error::InvalidGrid(format!("refinement depth must lie in (0, 1), got {depth}")));
        }
        let m = ((1.0 / (1.0 - ratio)).floor() as usize).clamp(1, n);
        let top = m as f64 * h;
        let levels = ((depth / m as f64).ln() / ratio.ln()).ceil() as i32;
        let mut nodes = Vec::with_capacity(n + levels as usize + 2);
        nodes.push(0.0);
        for k in (1..=levels).rev() {
            nodes.push(top * ratio.powi(k));
        }
        let start = nodes.len();
        nodes.extend((m..=n).map(|j| j as f64 * h));
        Ok(Self {
            nodes: nodes.into(),
            layout: Layout::UniformTail { start, h },
        })
    }

    /// Arbitrary nodes; must start at 0 and increase strictly.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        match nodes.first() {
            None => return Err(Error::InvalidGrid("grid is empty".into())),
            Some(&t0) if t0 != 0.0 => {
                return Err(Error::InvalidGrid(format!("grid must start at 0, starts at {t0}")))
            }
            _ => {}
        }
        for (j, w) in nodes.windows(2).enumerate() {
            if !w[1].is_finite() || !(w[1] > w[0]) {
                return Err(Error::InvalidGrid(format!(
                    "nodes must be finite and strictly increasing (t[{}] = {}, t[{}] = {})",
                    j,
                    w[0],
                    j + 1,
                    w[1]
                )));
            }
        }
        Ok(Self {
            nodes: nodes.into(),
            layout: Layout::General,
        })
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false: a grid holds at least the node t = 0.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Step of the uniform part, if the grid has one.
    pub fn step(&self) -> Option<f64> {
        match self.layout {
            Layout::UniformTail { h, .. } => Some(h),
            Layout::General => None,
        }
    }

    pub(crate) fn layout(&self) -> Layout {
        self.layout
    }

    /// Index of the cell [t_k, t_{k+1}] containing t (clamped to the grid).
    pub(crate) fn locate(&self, t: f64) -> usize {
        let n = self.nodes.len();
        if n < 2 {
            return 0;
        }
        match self.nodes.partition_point(|&x| x <= t) {
            0 => 0,
            p => (p - 1).min(n - 2),
        }
    }
}

/// Values on a [`TimeGrid`], interpolated piecewise-linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("value at node {j} is not finite")));
        }
        Ok(Self { grid, values })
    }

    /// Wraps values without the finiteness check (internal results that are
    /// checked by the caller, or partial sums reported inside errors).
    pub(crate) fn from_parts(grid: TimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: &TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn zeros(grid: &TimeGrid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid: grid.clone(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn times(&self) -> &[f64] {
        self.grid.nodes()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Piecewise-linear interpolation; constant extrapolation outside the grid.
    pub fn eval(&self, t: f64) -> f64 {
        let nodes = self.grid.nodes();
        if nodes.len() == 1 || t <= 0.0 {
            return self.values[0];
        }
        if t >= self.grid.t_max() {
            return self.values[self.values.len() - 1];
        }
        let k = self.grid.locate(t);
        let (t0, t1) = (nodes[k], nodes[k + 1]);
        let w = (t - t0) / (t1 - t0);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .times()
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| f(t, v))
            .collect();
        Self::from_parts(self.grid.clone(), values)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|_, v| factor * v)
    }

    /// a·self + b·other on the shared grid.
    pub fn linear_combination(&self, a: f64, other: &SampledFunction, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self::from_parts(self.grid.clone(), values))
    }

    pub(crate) fn check_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("sampled functions live on different grids".into()));
        }
        Ok(())
    }
}
