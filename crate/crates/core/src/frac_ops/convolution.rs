//! Product-integration weights for ∫_0^{t_i} k(t_i − u) f(u) du with f
//! piecewise linear on the grid.
//!
//! Each cell contributes two weights (one per endpoint value). Cells next to
//! the singularity use the kernel's antiderivatives; cells further away use
//! a Gauss–Legendre rule sized from the distance to the singularity. On the
//! uniform part of a grid the cell weights depend only on the offset
//! i − k and are computed once. The geometrically refined block [0, H] of a
//! graded grid is lumped through a polynomial interpolant of the kernel for
//! outputs far from it; the interpolation points are equispaced so that
//! neighbouring outputs share kernel evaluations.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::grid::{Layout, SampledFunction, TimeGrid};
use super::kernel::{check_exponent, SingularKernel};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

const MAX_GL: usize = 16;
/// Cells whose near end is closer than this many cell lengths to the
/// singularity use antiderivative weights.
const NEAR_CELLS: f64 = 2.0;
/// Interpolation degrees available to the lumped block.
const LUMP_DEGREES: [usize; 11] = [4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24];
/// Outputs with t ≥ LUMP_DISTANCE·H use the lumped block [0, H].
const LUMP_DISTANCE: f64 = 5.0;
/// Dense rows lump a prefix only when it spans at least this many cells.
const MIN_LUMP_CELLS: usize = 8;

fn gl_rules() -> &'static [(Vec<f64>, Vec<f64>)] {
    static RULES: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    RULES.get_or_init(|| (1..=MAX_GL).map(gauss_legendre).collect())
}

fn gl_rule(m: usize) -> &'static (Vec<f64>, Vec<f64>) {
    &gl_rules()[m.clamp(1, MAX_GL) - 1]
}

/// Points needed for ~16 digits when the nearest singularity sits `d_b`
/// beyond the end of a cell of length `delta` (Bernstein ellipse bound).
fn gl_points(d_b: f64, delta: f64) -> usize {
    let x0 = 2.0 * d_b / delta + 1.0;
    let rho = x0 + (x0 * x0 - 1.0).sqrt();
    ((37.0 / (2.0 * rho.ln())).ceil() as usize).clamp(2, MAX_GL)
}

/// Weights (on the value at distance `d_a`, on the value at distance `d_b`)
/// of ∫ k(s)·(linear interpolant) over s ∈ [d_b, d_a].
pub(crate) fn cell_weights(kernel: &dyn SingularKernel, d_a: f64, d_b: f64) -> (f64, f64) {
    let delta = d_a - d_b;
    if d_b < NEAR_CELLS * delta {
        if let (Some((a1, a2)), Some((b1, b2))) = (kernel.antiderivatives(d_a), kernel.antiderivatives(d_b)) {
            let right = (a2 - b2 - delta * b1) / delta;
            return (a1 - b1 - right, right);
        }
        return linear_g_weights(kernel, d_a, d_b);
    }
    let (x, w) = gl_rule(gl_points(d_b, delta));
    let half = 0.5 * delta;
    let mid = d_b + half;
    let (mut left, mut right) = (0.0, 0.0);
    for (&xj, &wj) in x.iter().zip(w) {
        let s = mid + half * xj;
        let kv = wj * half * kernel.value(s);
        // value at distance d_a is weighted by (s − d_b)/Δ
        let lam = 0.5 * (1.0 + xj);
        left += kv * lam;
        right += kv * (1.0 - lam);
    }
    (left, right)
}

/// g modelled as linear on the cell; the s^{θ−1} factor is integrated exactly.
fn linear_g_weights(kernel: &dyn SingularKernel, d_a: f64, d_b: f64) -> (f64, f64) {
    let th = kernel.exponent();
    let delta = d_a - d_b;
    let (ga, gb) = (kernel.regular_part(d_a), kernel.regular_part(d_b));
    let p1 = (ga - gb) / delta;
    let p0 = gb - p1 * d_b;
    let m = |j: f64| (d_a.powf(th + j) - d_b.powf(th + j)) / (th + j);
    let (m0, m1, m2) = (m(0.0), m(1.0), m(2.0));
    let i0 = p0 * m0 + p1 * m1; // ∫ s^{θ−1} g
    let i1 = p0 * m1 + p1 * m2; // ∫ s^θ g
    ((i1 - d_b * i0) / delta, (d_a * i0 - i1) / delta)
}

/// Interpolation of k(t_i − u) over u ∈ [0, H] at P + 1 equispaced points.
#[derive(Debug, Clone)]
struct LumpSet {
    degree: usize,
    /// moments[j][p] = ∫_0^H L_p(u) φ_j(u) du for the nodes j ≤ start.
    moments: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
struct Lump {
    sets: Vec<LumpSet>,
    /// For rows i ≥ first structured row: (set index, k(t_i − u_p)).
    rows: Vec<(usize, Vec<f64>)>,
}

#[derive(Debug, Clone)]
struct Tail {
    start: usize,
    /// Indexed by cell offset c = i − k ≥ 1; entry 0 unused.
    left: Vec<f64>,
    right: Vec<f64>,
    lump: Option<Lump>,
}

/// Precomputed convolution weights for one kernel on one grid.
#[derive(Debug, Clone)]
pub struct ConvolutionWeights {
    grid: TimeGrid,
    /// Rows below `dense.len()` store nodal weights explicitly.
    dense: Vec<Vec<f64>>,
    tail: Option<Tail>,
}

impl ConvolutionWeights {
    pub fn new(grid: &TimeGrid, kernel: &dyn SingularKernel) -> Result<Self> {
        check_exponent(kernel.exponent())?;
        let nodes = grid.nodes();
        let n = nodes.len();
        let (dense_rows, tail) = match grid.layout() {
            Layout::General => (n, None),
            Layout::UniformTail { start, h } => {
                let first = if start == 0 {
                    0
                } else {
                    let edge = LUMP_DISTANCE * nodes[start] * (1.0 - 1e-12);
                    nodes.partition_point(|&t| t < edge).min(n)
                };
                let cells = n - 1 - start;
                let pairs: Vec<(f64, f64)> = (0..=cells)
                    .into_par_iter()
                    .map(|c| {
                        if c == 0 {
                            (0.0, 0.0)
                        } else {
                            cell_weights(kernel, c as f64 * h, (c - 1) as f64 * h)
                        }
                    })
                    .collect();
                let (left, right) = pairs.into_iter().unzip();
                let lump = (start > 0 && first < n).then(|| build_lump(nodes, start, first, h, kernel));
                (
                    first,
                    Some(Tail {
                        start,
                        left,
                        right,
                        lump,
                    }),
                )
            }
        };
        let dense: Vec<Vec<f64>> = (0..dense_rows)
            .into_par_iter()
            .map(|i| {
                let mut w = vec![0.0; i + 1];
                // cells far below t_i are lumped as in the tail
                let q = nodes[..i].partition_point(|&t| LUMP_DISTANCE * t <= nodes[i]).saturating_sub(1);
                let q = if q >= MIN_LUMP_CELLS { q } else { 0 };
                if q > 0 {
                    let set = lump_set(nodes, q, LUMP_DEGREES[lump_degree_index(nodes[i], nodes[q])]);
                    let step = nodes[q] / set.degree as f64;
                    let kv: Vec<f64> = (0..=set.degree).map(|p| kernel.value(nodes[i] - p as f64 * step)).collect();
                    for (wj, m) in w.iter_mut().zip(&set.moments) {
                        *wj += m.iter().zip(&kv).map(|(a, b)| a * b).sum::<f64>();
                    }
                }
                for k in q..i {
                    let (l, r) = cell_weights(kernel, nodes[i] - nodes[k], nodes[i] - nodes[k + 1]);
                    w[k] += l;
                    w[k + 1] += r;
                }
                w
            })
            .collect();
        let weights = Self {
            grid: grid.clone(),
            dense,
            tail,
        };
        weights.check_finite()?;
        Ok(weights)
    }

    fn check_finite(&self) -> Result<()> {
        let bad = |v: &[f64]| v.iter().any(|x| !x.is_finite());
        let mut broken = self.dense.iter().any(|r| bad(r));
        if let Some(t) = &self.tail {
            broken |= bad(&t.left) || bad(&t.right);
            if let Some(l) = &t.lump {
                broken |= l.rows.iter().any(|r| bad(&r.1))
                    || l.sets.iter().any(|set| set.moments.iter().any(|r| bad(r)));
            }
        }
        if broken {
            return Err(Error::KernelEvaluation(
                "non-finite quadrature weight (kernel series failed on the grid)".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Weight multiplying f(t_i) in row i.
    pub fn diagonal(&self, i: usize) -> f64 {
        if i < self.dense.len() {
            return self.dense[i][i];
        }
        let t = self.tail.as_ref().expect("structured row without tail");
        if i > t.start {
            t.right[1]
        } else {
            0.0
        }
    }

    fn lump_moments(&self, values: &[f64]) -> Option<Vec<Vec<f64>>> {
        let lump = self.tail.as_ref()?.lump.as_ref()?;
        let mv = lump
            .sets
            .iter()
            .map(|set| {
                let mut acc = vec![0.0; set.degree + 1];
                for (m, &v) in set.moments.iter().zip(values) {
                    for (a, &w) in acc.iter_mut().zip(m) {
                        *a += w * v;
                    }
                }
                acc
            })
            .collect();
        Some(mv)
    }

    fn row(&self, i: usize, values: &[f64], mv: Option<&Vec<Vec<f64>>>, with_diagonal: bool) -> f64 {
        let end = if with_diagonal { i + 1 } else { i };
        if i < self.dense.len() {
            return self.dense[i][..end].iter().zip(values).map(|(w, v)| w * v).sum();
        }
        let t = self.tail.as_ref().expect("structured row without tail");
        let mut acc = 0.0;
        if let (Some(lump), Some(mv)) = (&t.lump, mv) {
            let (set, kv) = &lump.rows[i - self.dense.len()];
            acc += kv.iter().zip(&mv[*set]).map(|(a, b)| a * b).sum::<f64>();
        }
        for (j, &v) in values.iter().enumerate().take(end).skip(t.start) {
            let mut w = 0.0;
            if j < i {
                w += t.left[i - j];
            }
            if j > t.start {
                w += t.right[i - j + 1];
            }
            acc += w * v;
        }
        acc
    }

    /// Σ_{j<i} w_ij v_j, i.e. row i without its diagonal term. Only
    /// `values[..i]` is read.
    pub fn partial(&self, i: usize, values: &[f64]) -> f64 {
        let mv = if i < self.dense.len() { None } else { self.lump_moments(values) };
        self.row(i, values, mv.as_ref(), false)
    }

    /// All rows applied to nodal values.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.grid.len(), "value count must match the grid");
        let mv = self.lump_moments(values);
        (0..values.len())
            .into_par_iter()
            .map(|i| self.row(i, values, mv.as_ref(), true))
            .collect()
    }

    pub fn convolve(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if f.grid() != &self.grid {
            return Err(Error::InvalidGrid("function and weights use different grids".into()));
        }
        Ok(SampledFunction::from_parts(self.grid.clone(), self.apply(f.values())))
    }
}

/// Interpolation of k(t − u) on [0, nodes[start]] and its moments against
/// the hat functions of the nodes up to `start`.
fn lump_set(nodes: &[f64], start: usize, degree: usize) -> LumpSet {
    let big_h = nodes[start];
    let step = big_h / degree as f64;
    // barycentric weights (−1)^p C(P, p)
    let mut bary = vec![0.0; degree + 1];
    let mut c = 1.0;
    for (p, b) in bary.iter_mut().enumerate() {
        *b = if p % 2 == 0 { c } else { -c };
        c = c * (degree - p) as f64 / (p + 1) as f64;
    }
    let basis = |u: f64, out: &mut [f64]| {
        let mut denom = 0.0;
        for p in 0..=degree {
            let d = u - p as f64 * step;
            if d == 0.0 {
                out.fill(0.0);
                out[p] = 1.0;
                return;
            }
            out[p] = bary[p] / d;
            denom += out[p];
        }
        out.iter_mut().for_each(|x| *x /= denom);
    };
    let (gx, gw) = gl_rule(degree / 2 + 2);
    let mut moments = vec![vec![0.0; degree + 1]; start + 1];
    let mut l = vec![0.0; degree + 1];
    for k in 0..start {
        let (a, b) = (nodes[k], nodes[k + 1]);
        let half = 0.5 * (b - a);
        for (&x, &w) in gx.iter().zip(gw) {
            let lam = 0.5 * (1.0 + x);
            basis(a + half * (1.0 + x), &mut l);
            for p in 0..=degree {
                let q = w * half * l[p];
                moments[k][p] += q * (1.0 - lam);
                moments[k + 1][p] += q * lam;
            }
        }
    }
    LumpSet { degree, moments }
}

/// Smallest equispaced degree giving ~16 digits for an output at `t`, given
/// the block [0, H]: the error decays like exp(−P·(U(x0) − U(1))) with U the
/// logarithmic potential of the uniform measure on [−1, 1].
fn lump_degree_index(t: f64, big_h: f64) -> usize {
    let x0 = 2.0 * t / big_h - 1.0;
    let u = |x: f64| 0.5 * ((x + 1.0) * (x + 1.0).ln() - (x - 1.0) * (x - 1.0).ln());
    let rate = u(x0) - 2f64.ln();
    let need = (40.0 / rate).ceil() as usize + 2;
    LUMP_DEGREES.iter().position(|&d| d >= need).unwrap_or(LUMP_DEGREES.len() - 1)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn build_lump(nodes: &[f64], start: usize, first: usize, h: f64, kernel: &dyn SingularKernel) -> Lump {
    let big_h = nodes[start];
    let sets: Vec<LumpSet> = LUMP_DEGREES.iter().map(|&d| lump_set(nodes, start, d)).collect();
    let choice: Vec<usize> = nodes[first..].iter().map(|&t| lump_degree_index(t, big_h)).collect();
    let ratio = big_h / h;
    let m = ratio.round();
    let rows = if m >= 1.0 && (ratio - m).abs() <= 1e-9 * m {
        // t_i − p·H/P on a lattice of spacing H/L, L = lcm(m, degrees)
        let m = m as u64;
        let l = LUMP_DEGREES.iter().fold(m, |l, &d| l / gcd(l, d as u64) * d as u64);
        let unit = big_h / l as f64;
        let key = |row: usize, p: usize, d: usize| {
            ((first + row - start) as u64) * (l / m) + l - p as u64 * (l / d as u64)
        };
        let mut keys: Vec<u64> = choice
            .iter()
            .enumerate()
            .flat_map(|(row, &idx)| {
                let d = LUMP_DEGREES[idx];
                (0..=d).map(move |p| key(row, p, d))
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let values: Vec<f64> = keys.par_iter().map(|&k| kernel.value(k as f64 * unit)).collect();
        choice
            .iter()
            .enumerate()
            .map(|(row, &idx)| {
                let d = LUMP_DEGREES[idx];
                let kv = (0..=d)
                    .map(|p| values[keys.binary_search(&key(row, p, d)).expect("lattice key")])
                    .collect();
                (idx, kv)
            })
            .collect()
    } else {
        nodes[first..]
            .par_iter()
            .zip(&choice)
            .map(|(&t, &idx)| {
                let d = LUMP_DEGREES[idx];
                let step = big_h / d as f64;
                (idx, (0..=d).map(|p| kernel.value(t - p as f64 * step)).collect())
            })
            .collect()
    };
    Lump { sets, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_ops::kernel::{FnKernel, PowerKernel};
    use crate::special_fn::gamma;
    use approx::assert_relative_eq;

    fn rl_of_power(nu: f64, rho: f64, t: f64) -> f64 {
        gamma(rho) / gamma(rho + nu) * t.powf(rho + nu - 1.0)
    }

    #[test]
    fn constants_are_exact_on_every_layout() {
        let k = PowerKernel::riemann_liouville(0.3).unwrap();
        for grid in [
            TimeGrid::uniform(2.0, 64).unwrap(),
            TimeGrid::graded(2.0, 64).unwrap(),
            TimeGrid::from_nodes((0..40).map(|j| (j as f64 / 39.0).powi(2) * 2.0).collect()).unwrap(),
        ] {
            let w = ConvolutionWeights::new(&grid, &k).unwrap();
            let out = w.apply(&vec![1.0; grid.len()]);
            for (&t, &v) in grid.nodes().iter().zip(&out) {
                let exact = rl_of_power(0.3, 1.0, t);
                assert!((v - exact).abs() <= 1e-13 * exact.max(1.0), "t={t} v={v} exact={exact}");
            }
        }
    }

    #[test]
    fn linear_data_is_exact() {
        let k = PowerKernel::riemann_liouville(0.5).unwrap();
        let grid = TimeGrid::graded(1.0, 50).unwrap();
        let w = ConvolutionWeights::new(&grid, &k).unwrap();
        let out = w.apply(grid.nodes());
        for (&t, &v) in grid.nodes().iter().zip(&out).skip(1) {
            assert_relative_eq!(v, rl_of_power(0.5, 2.0, t), max_relative = 1e-12);
        }
    }

    #[test]
    fn partial_plus_diagonal_is_the_row() {
        let k = PowerKernel::riemann_liouville(0.7).unwrap();
        let grid = TimeGrid::graded(1.0, 20).unwrap();
        let w = ConvolutionWeights::new(&grid, &k).unwrap();
        let v: Vec<f64> = grid.nodes().iter().map(|t| (3.0 * t).sin() + 0.5).collect();
        let full = w.apply(&v);
        for i in 0..grid.len() {
            let r = w.partial(i, &v) + w.diagonal(i) * v[i];
            assert_relative_eq!(r, full[i], max_relative = 1e-13, epsilon = 1e-300);
        }
    }

    #[test]
    fn generic_kernel_matches_power_kernel() {
        let grid = TimeGrid::graded(1.0, 32).unwrap();
        let scale = 1.0 / gamma(0.4);
        let a = ConvolutionWeights::new(&grid, &PowerKernel::riemann_liouville(0.4).unwrap()).unwrap();
        let b = ConvolutionWeights::new(&grid, &FnKernel::new(0.4, move |_| scale).unwrap()).unwrap();
        let v: Vec<f64> = grid.nodes().iter().map(|t| t.exp()).collect();
        for (x, y) in a.apply(&v).iter().zip(b.apply(&v)) {
            assert_relative_eq!(*x, y, max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    #[test]
    fn weights_are_finite_or_rejected() {
        let grid = TimeGrid::uniform(1.0, 8).unwrap();
        let k = FnKernel::new(0.5, |s: f64| if s > 0.5 { f64::NAN } else { 1.0 }).unwrap();
        assert!(matches!(
            ConvolutionWeights::new(&grid, &k),
            Err(Error::KernelEvaluation(_))
        ));
    }
}
