//! Rectangular parameter grids and maps sampled on them.

use crate::dual::{Scalar, D1, D2};
use crate::error::{Error, Result};
use crate::geometry::ChartSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Grid in R^k: origin, spacing and node count per direction.
///
/// Nodes are enumerated row-major with direction 0 slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        let g = GridSpec {
            origin,
            spacing,
            counts,
        };
        g.validate()?;
        Ok(g)
    }

    /// Same spacing and count in every direction.
    pub fn uniform(k: usize, origin: f64, spacing: f64, count: usize) -> Result<Self> {
        GridSpec::new(vec![origin; k], vec![spacing; k], vec![count; k])
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.origin.len();
        if k == 0 || self.spacing.len() != k || self.counts.len() != k {
            return Err(Error::Shape(
                "grid origin, spacing and counts must share length k >= 1".into(),
            ));
        }
        if self.spacing.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::Precondition("grid spacing must be positive".into()));
        }
        if self.counts.iter().any(|&c| c < 3) {
            return Err(Error::Precondition(
                "grid needs at least 3 nodes per direction".into(),
            ));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.origin.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stride(&self, dir: usize) -> usize {
        self.counts[dir + 1..].iter().product()
    }

    pub fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0; self.k()];
        for d in (0..self.k()).rev() {
            idx[d] = lin % self.counts[d];
            lin /= self.counts[d];
        }
        idx
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.counts)
            .fold(0, |acc, (&i, &c)| acc * c + i)
    }

    /// Parameter coordinates t of a node.
    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(d, &i)| self.origin[d] + self.spacing[d] * i as f64)
            .collect()
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|l| self.node(&self.multi_index(l)))
            .collect()
    }

    /// True when the node lies off the boundary in every direction.
    pub fn is_interior(&self, idx: &[usize]) -> bool {
        idx.iter()
            .zip(&self.counts)
            .all(|(&i, &c)| i > 0 && i + 1 < c)
    }
}

/// Finite-difference accuracy order for grid derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FdOrder {
    Second,
    Fourth,
}

/// Stencil (offsets, weights) for d/dt at index `i` of `count` nodes.
fn stencil(order: FdOrder, i: usize, count: usize) -> (Vec<isize>, Vec<f64>) {
    let order = if count < 5 { FdOrder::Second } else { order };
    let from_end = count - 1 - i;
    let (offs, w, mirror): (Vec<isize>, Vec<f64>, bool) = match order {
        FdOrder::Second => {
            if i == 0 || from_end == 0 {
                (vec![0, 1, 2], vec![-1.5, 2.0, -0.5], from_end == 0)
            } else {
                (vec![-1, 1], vec![-0.5, 0.5], false)
            }
        }
        FdOrder::Fourth => match (i, from_end) {
            (0, _) | (_, 0) => (
                vec![0, 1, 2, 3, 4],
                vec![-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25],
                from_end == 0,
            ),
            (1, _) | (_, 1) => (
                vec![-1, 0, 1, 2, 3],
                vec![-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0],
                from_end == 1 && i != 1,
            ),
            _ => (
                vec![-2, -1, 1, 2],
                vec![1.0 / 12.0, -2.0 / 3.0, 2.0 / 3.0, -1.0 / 12.0],
                false,
            ),
        },
    };
    if mirror {
        (
            offs.iter().map(|o| -o).collect(),
            w.iter().map(|x| -x).collect(),
        )
    } else {
        (offs, w)
    }
}

/// Finite-difference derivative of node-major `values` along `dir` at `idx`.
pub fn fd_derivative(
    grid: &GridSpec,
    values: &[Vec<f64>],
    idx: &[usize],
    dir: usize,
    order: FdOrder,
) -> Vec<f64> {
    let (offs, w) = stencil(order, idx[dir], grid.counts[dir]);
    let base = grid.linear_index(idx) as isize;
    let stride = grid.stride(dir) as isize;
    let center = &values[base as usize];
    let mut out = vec![0.0; center.len()];
    // Weights sum to zero, so differencing against the centre keeps constants exact.
    for (o, wt) in offs.iter().zip(&w) {
        let row = &values[(base + o * stride) as usize];
        for ((acc, v), c) in out.iter_mut().zip(row).zip(center) {
            *acc += wt * (v - c);
        }
    }
    let h = grid.spacing[dir];
    out.iter_mut().for_each(|v| *v /= h);
    out
}

/// A closed-form map t -> R^dim written against [`Scalar`].
pub trait ClosedMap: Send + Sync + 'static {
    fn k(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S>;
    fn in_domain(&self, _t: &[f64]) -> bool {
        true
    }
}

/// Object-safe view of a closed-form map.
pub trait ErasedClosed: Send + Sync {
    fn k(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval_f64(&self, t: &[f64]) -> Vec<f64>;
    fn eval_d1(&self, t: &[D1]) -> Vec<D1>;
    fn eval_d2(&self, t: &[D2]) -> Vec<D2>;
    fn in_domain(&self, t: &[f64]) -> bool;
}

impl<M: ClosedMap> ErasedClosed for M {
    fn k(&self) -> usize {
        ClosedMap::k(self)
    }
    fn dim(&self) -> usize {
        ClosedMap::dim(self)
    }
    fn eval_f64(&self, t: &[f64]) -> Vec<f64> {
        self.eval(t)
    }
    fn eval_d1(&self, t: &[D1]) -> Vec<D1> {
        self.eval(t)
    }
    fn eval_d2(&self, t: &[D2]) -> Vec<D2> {
        self.eval(t)
    }
    fn in_domain(&self, t: &[f64]) -> bool {
        ClosedMap::in_domain(self, t)
    }
}

/// Map sampled on a grid, optionally backed by a closed form with exact derivatives.
///
/// When `chart` is set the values are phase-space points in flat layout;
/// otherwise they live on a base manifold of dimension `dim`.
#[derive(Clone)]
pub struct SolutionMap {
    pub grid: GridSpec,
    pub dim: usize,
    pub chart: Option<ChartSpec>,
    pub values: Vec<Vec<f64>>,
    pub closed: Option<Arc<dyn ErasedClosed>>,
}

impl fmt::Debug for SolutionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionMap")
            .field("grid", &self.grid)
            .field("dim", &self.dim)
            .field("chart", &self.chart)
            .field("closed", &self.closed.is_some())
            .finish()
    }
}

impl SolutionMap {
    pub fn from_values(
        grid: GridSpec,
        dim: usize,
        chart: Option<ChartSpec>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Shape(
                "map values do not match grid and dimension".into(),
            ));
        }
        if let Some(c) = chart {
            if c.dim() != dim {
                return Err(Error::Shape("map dimension differs from chart".into()));
            }
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite map value".into()));
        }
        Ok(SolutionMap {
            grid,
            dim,
            chart,
            values,
            closed: None,
        })
    }

    /// Sample a closed-form map on the grid and keep it for exact derivatives.
    pub fn from_closed(
        grid: GridSpec,
        chart: Option<ChartSpec>,
        map: Arc<dyn ErasedClosed>,
    ) -> Result<Self> {
        if map.k() != grid.k() {
            return Err(Error::Shape("closed map and grid disagree on k".into()));
        }
        let mut values = Vec::with_capacity(grid.len());
        for t in grid.nodes() {
            if !map.in_domain(&t) {
                return Err(Error::Domain(format!("closed map undefined at t = {t:?}")));
            }
            values.push(map.eval_f64(&t));
        }
        let mut m = SolutionMap::from_values(grid, map.dim(), chart, values)?;
        m.closed = Some(map);
        Ok(m)
    }

    /// Derivatives d x / d t^b at node `lin`, one row per direction b.
    pub fn derivatives(&self, lin: usize, order: FdOrder) -> Vec<Vec<f64>> {
        let idx = self.grid.multi_index(lin);
        match &self.closed {
            Some(m) => {
                let t = self.grid.node(&idx);
                (0..self.grid.k())
                    .map(|b| {
                        let td = crate::dual::seed(&t, b);
                        m.eval_d1(&td).iter().map(|d| d.eps).collect()
                    })
                    .collect()
            }
            None => (0..self.grid.k())
                .map(|b| fd_derivative(&self.grid, &self.values, &idx, b, order))
                .collect(),
        }
    }

    /// Drop the closed form so derivatives come from finite differences.
    pub fn without_closed_form(&self) -> Self {
        let mut m = self.clone();
        m.closed = None;
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let g = GridSpec::new(vec![0.0, 1.0], vec![0.5, 0.25], vec![3, 4]).unwrap();
        assert_eq!(g.len(), 12);
        for l in 0..g.len() {
            assert_eq!(g.linear_index(&g.multi_index(l)), l);
        }
        assert_eq!(g.node(&[2, 3]), vec![1.0, 1.75]);
        assert_eq!(g.stride(0), 4);
    }

    #[test]
    fn rejects_small_or_bad_grids() {
        assert!(GridSpec::new(vec![0.0], vec![0.1], vec![2]).is_err());
        assert!(GridSpec::new(vec![0.0], vec![0.0], vec![5]).is_err());
    }

    #[test]
    fn stencils_are_exact_on_polynomials() {
        for (count, order, deg) in [
            (3, FdOrder::Second, 2),
            (7, FdOrder::Fourth, 4),
            (5, FdOrder::Fourth, 4),
        ] {
            let g = GridSpec::new(vec![0.3], vec![0.1], vec![count]).unwrap();
            let vals: Vec<Vec<f64>> = g.nodes().iter().map(|t| vec![t[0].powi(deg)]).collect();
            for i in 0..count {
                let d = fd_derivative(&g, &vals, &[i], 0, order)[0];
                let t = g.node(&[i])[0];
                let exact = deg as f64 * t.powi(deg - 1);
                assert!(
                    (d - exact).abs() < 1e-11,
                    "count {count} node {i}: {d} vs {exact}"
                );
            }
        }
    }
}
