//! Integral sections of k-vector fields on a base manifold by composed RK4
//! flows, commutator checks, lifting through sections and the end-to-end
//! Hamilton-Jacobi pipeline.

use crate::dual::{seed, Scalar, D1, D2};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::grid::ErasedClosed;
pub use crate::grid::{FdOrder, GridSpec, SolutionMap};
use crate::hdw::{map_residual, Mode, Residual};
use crate::hj::{self, GaugeMatrix};
use crate::linalg;
use crate::sections::{SectionZDep, SectionZInd};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Default RK4 steps per grid cell.
pub const STEPS_PER_CELL: usize = 4;
/// Norm beyond which a flow is declared divergent.
pub const DIVERGENCE_GUARD: f64 = 1e9;
/// Agreement required between direction orders at the far corner.
pub const ORDER_TOL: f64 = 1e-8;
/// Commutator level above which integral sections are flagged.
pub const COMMUTATOR_WARN: f64 = 1e-6;
/// Step of the central-difference Jacobian fallback.
pub const FD_JACOBIAN_STEP: f64 = 1e-6;

/// k vector fields Z_1..Z_k on a base manifold of dimension `dim`.
pub trait BaseField: Send + Sync {
    fn dim(&self) -> usize;
    fn k(&self) -> usize;
    /// Row a holds Z_a(x).
    fn eval(&self, x: &[f64]) -> Result<Vec<Vec<f64>>>;
    /// `out[a][r][c]` = d Z_a^r / d x^c; central differences unless overridden.
    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        fd_jacobian(self, x, FD_JACOBIAN_STEP)
    }
}

/// Central-difference Jacobian of a base field.
pub fn fd_jacobian<F: BaseField + ?Sized>(
    f: &F,
    x: &[f64],
    step: f64,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let (d, k) = (f.dim(), f.k());
    let mut out = vec![vec![vec![0.0; d]; d]; k];
    for c in 0..d {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[c] += step;
        xm[c] -= step;
        let (fp, fm) = (f.eval(&xp)?, f.eval(&xm)?);
        for a in 0..k {
            for r in 0..d {
                out[a][r][c] = (fp[a][r] - fm[a][r]) / (2.0 * step);
            }
        }
    }
    Ok(out)
}

/// Base field written against [`Scalar`]; Jacobians come from duals.
pub trait GenericField: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn k(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>>;
}

/// Adapter giving a [`GenericField`] exact Jacobians.
pub struct Exact<F>(pub F);

impl<F: GenericField> BaseField for Exact<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn k(&self) -> usize {
        self.0.k()
    }
    fn eval(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(self.0.eval(x))
    }
    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let d = self.0.dim();
        let cols: Vec<Vec<Vec<D1>>> = (0..d).map(|c| self.0.eval(&seed(x, c))).collect();
        Ok((0..self.0.k())
            .map(|a| {
                (0..d)
                    .map(|r| (0..d).map(|c| cols[c][a][r].eps).collect())
                    .collect()
            })
            .collect())
    }
}

/// max over samples and pairs a < b of |J_b Z_a - J_a Z_b|.
pub fn commutator_defect(f: &dyn BaseField, samples: &[Vec<f64>]) -> Result<f64> {
    let per = samples
        .par_iter()
        .map(|x| {
            let z = f.eval(x)?;
            let j = f.jacobian(x)?;
            let mut worst: f64 = 0.0;
            for a in 0..f.k() {
                for b in a + 1..f.k() {
                    for r in 0..f.dim() {
                        let ja: f64 = (0..f.dim()).map(|c| j[b][r][c] * z[a][c]).sum();
                        let jb: f64 = (0..f.dim()).map(|c| j[a][r][c] * z[b][c]).sum();
                        worst = worst.max((ja - jb).abs());
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

fn component(f: &dyn BaseField, x: &[f64], dir: usize) -> Result<Vec<f64>> {
    Ok(f.eval(x)?.swap_remove(dir))
}

fn axpy(x: &[f64], s: f64, v: &[f64]) -> Vec<f64> {
    x.iter().zip(v).map(|(a, b)| a + s * b).collect()
}

/// One classic RK4 step of Z_dir.
pub fn rk4_step(f: &dyn BaseField, x: &[f64], dir: usize, h: f64) -> Result<Vec<f64>> {
    let k1 = component(f, x, dir)?;
    let k2 = component(f, &axpy(x, 0.5 * h, &k1), dir)?;
    let k3 = component(f, &axpy(x, 0.5 * h, &k2), dir)?;
    let k4 = component(f, &axpy(x, h, &k3), dir)?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Flow of Z_dir for time `dt` in `steps` RK4 steps.
pub fn flow(f: &dyn BaseField, x: &[f64], dir: usize, dt: f64, steps: usize) -> Result<Vec<f64>> {
    let h = dt / steps.max(1) as f64;
    let mut y = x.to_vec();
    for _ in 0..steps.max(1) {
        y = rk4_step(f, &y, dir, h)?;
        let nrm = linalg::norm_inf(&y);
        if !(nrm <= DIVERGENCE_GUARD) {
            return Err(Error::Divergence(format!(
                "flow of component {dir} left the ball of radius {DIVERGENCE_GUARD:e}"
            )));
        }
    }
    Ok(y)
}

/// Compose flows: direction `order[m]` for time `disp[order[m]]`, `steps_per_unit`
/// steps per unit time (at least one step per leg).
pub fn flow_endpoint(
    f: &dyn BaseField,
    start: &[f64],
    disp: &[f64],
    order: &[usize],
    steps_per_unit: f64,
) -> Result<Vec<f64>> {
    let mut y = start.to_vec();
    for &d in order {
        let steps = (disp[d].abs() * steps_per_unit).ceil().max(1.0) as usize;
        y = flow(f, &y, d, disp[d], steps)?;
    }
    Ok(y)
}

/// Integral section with its integrability diagnostics.
#[derive(Clone, Debug)]
pub struct IntegralSection {
    pub map: SolutionMap,
    /// Max commutator defect over the grid nodes.
    pub commutator: f64,
    /// Corner mismatch between forward and reversed direction orders.
    pub order_mismatch: f64,
    pub warning: Option<String>,
}

/// Integrate along direction 0 from the origin, then direction 1 from every
/// node reached, and so on; verify the far corner with the reversed order.
pub fn integral_section(
    f: &dyn BaseField,
    start: &[f64],
    grid: &GridSpec,
    steps_per_cell: usize,
) -> Result<IntegralSection> {
    grid.validate()?;
    if grid.k() != f.k() || start.len() != f.dim() {
        return Err(Error::Shape("grid, start point and field disagree".into()));
    }
    let steps = steps_per_cell.max(1);
    let mut values: Vec<Option<Vec<f64>>> = vec![None; grid.len()];
    values[0] = Some(start.to_vec());
    for d in 0..grid.k() {
        // Seeds: nodes with index 0 in directions >= d, already filled.
        let seeds: Vec<usize> = (0..grid.len())
            .filter(|&l| grid.multi_index(l)[d..].iter().all(|&i| i == 0))
            .collect();
        let rows = seeds
            .par_iter()
            .map(|&l| {
                let mut x = values[l].clone().expect("seed filled by previous sweep");
                let mut out = Vec::with_capacity(grid.counts[d] - 1);
                for _ in 1..grid.counts[d] {
                    x = flow(f, &x, d, grid.spacing[d], steps)?;
                    out.push(x.clone());
                }
                Ok((l, out))
            })
            .collect::<Result<Vec<_>>>()?;
        let stride = grid.stride(d);
        for (l, out) in rows {
            for (m, x) in out.into_iter().enumerate() {
                values[l + (m + 1) * stride] = Some(x);
            }
        }
    }
    let values: Vec<Vec<f64>> = values
        .into_iter()
        .map(|v| v.expect("grid fully swept"))
        .collect();

    let disp: Vec<f64> = (0..grid.k())
        .map(|d| grid.spacing[d] * (grid.counts[d] - 1) as f64)
        .collect();
    let rev: Vec<usize> = (0..grid.k()).rev().collect();
    let mut y = start.to_vec();
    for &d in &rev {
        y = flow(f, &y, d, disp[d], steps * (grid.counts[d] - 1))?;
    }
    let corner = &values[grid.len() - 1];
    let scale = 1.0 + linalg::norm_inf(corner);
    let mismatch = linalg::norm_inf(
        &corner
            .iter()
            .zip(&y)
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>(),
    );
    if !(mismatch <= ORDER_TOL * scale) {
        return Err(Error::Integrability(format!(
            "corner differs by {mismatch:e} between direction orders"
        )));
    }
    let commutator = commutator_defect(f, &values)?;
    let warning = (commutator > COMMUTATOR_WARN)
        .then(|| format!("commutator defect {commutator:e} exceeds {COMMUTATOR_WARN:e}"));
    let map = SolutionMap::from_values(grid.clone(), f.dim(), None, values)?;
    Ok(IntegralSection {
        map,
        commutator,
        order_mismatch: mismatch,
        warning,
    })
}

/// Either kind of section.
#[derive(Clone, Debug)]
pub enum AnySection {
    ZInd(SectionZInd),
    ZDep(SectionZDep),
}

impl AnySection {
    pub fn chart(&self) -> crate::geometry::ChartSpec {
        match self {
            AnySection::ZInd(g) => g.chart,
            AnySection::ZDep(g) => g.chart,
        }
    }

    fn base_dim(&self) -> usize {
        let c = self.chart();
        match self {
            AnySection::ZInd(_) => c.n,
            AnySection::ZDep(_) => c.n + c.k,
        }
    }

    fn point(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            AnySection::ZInd(g) => Ok(g.eval(x)?.to_flat()),
            AnySection::ZDep(g) => {
                let (q, z) = g.split(x)?;
                Ok(g.eval(q, z)?.to_flat())
            }
        }
    }
}

struct Composed {
    sigma: Arc<dyn ErasedClosed>,
    gamma: AnySection,
}

impl Composed {
    fn d1(&self, x: &[D1]) -> Vec<D1> {
        match &self.gamma {
            AnySection::ZInd(g) => g.eval_d1(x),
            AnySection::ZDep(g) => {
                let n = g.chart.n;
                g.eval_d1(&x[..n], &x[n..])
            }
        }
    }

    fn d2(&self, x: &[D2]) -> Vec<D2> {
        match &self.gamma {
            AnySection::ZInd(g) => g.eval_d2(x),
            AnySection::ZDep(g) => {
                let n = g.chart.n;
                g.eval_d2(&x[..n], &x[n..])
            }
        }
    }
}

impl ErasedClosed for Composed {
    fn k(&self) -> usize {
        self.sigma.k()
    }
    fn dim(&self) -> usize {
        self.gamma.chart().dim()
    }
    fn eval_f64(&self, t: &[f64]) -> Vec<f64> {
        self.gamma
            .point(&self.sigma.eval_f64(t))
            .unwrap_or_else(|_| vec![f64::NAN; self.gamma.chart().dim()])
    }
    fn eval_d1(&self, t: &[D1]) -> Vec<D1> {
        self.d1(&self.sigma.eval_d1(t))
    }
    fn eval_d2(&self, t: &[D2]) -> Vec<D2> {
        self.d2(&self.sigma.eval_d2(t))
    }
    fn in_domain(&self, t: &[f64]) -> bool {
        self.sigma.in_domain(t) && self.gamma.point(&self.sigma.eval_f64(t)).is_ok()
    }
}

/// psi = gamma o sigma, keeping a closed form when sigma has one.
pub fn lift(gamma: &AnySection, sigma: &SolutionMap) -> Result<SolutionMap> {
    if sigma.dim != gamma.base_dim() {
        return Err(Error::Shape(
            "base map dimension does not match the section".into(),
        ));
    }
    let chart = gamma.chart();
    if let Some(s) = &sigma.closed {
        let comp = Composed {
            sigma: s.clone(),
            gamma: gamma.clone(),
        };
        return SolutionMap::from_closed(sigma.grid.clone(), Some(chart), Arc::new(comp));
    }
    let values = sigma
        .values
        .iter()
        .map(|x| gamma.point(x))
        .collect::<Result<Vec<_>>>()?;
    SolutionMap::from_values(sigma.grid.clone(), chart.dim(), Some(chart), values)
}

/// Section plus the data the pipeline needs for it.
#[derive(Clone, Debug)]
pub enum PipelineSection {
    ZInd(SectionZInd),
    /// z-dependent section with its gauge matrix (`None`: diagonal solve).
    ZDep(SectionZDep, Option<GaugeMatrix>),
}

/// Tolerances and sampling for [`end_to_end`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub hj_tol: f64,
    pub map_tol: f64,
    pub steps_per_cell: usize,
    pub samples: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

/// Consolidated pipeline outcome.
#[derive(Clone, Debug)]
pub struct EndToEndReport {
    pub stages: Vec<StageResult>,
    pub pass: bool,
    pub warnings: Vec<String>,
    pub base: Option<SolutionMap>,
    pub lifted: Option<SolutionMap>,
    pub residuals: Vec<Residual>,
}

/// HJ check, projection, integration, lift and map residual, in that order.
///
/// Stops with a FAIL report at the first stage over tolerance; errors are
/// tagged with the stage that raised them.
pub fn end_to_end(
    h: &ScalarField,
    gamma: &PipelineSection,
    mode: Mode,
    grid: &GridSpec,
    start: &[f64],
    opts: &PipelineOptions,
) -> Result<EndToEndReport> {
    let mut rep = EndToEndReport {
        stages: Vec::new(),
        pass: false,
        warnings: Vec::new(),
        base: None,
        lifted: None,
        residuals: Vec::new(),
    };
    let hj_rep = match gamma {
        PipelineSection::ZInd(g) => hj::hj_zind(h, g, mode, &opts.samples),
        PipelineSection::ZDep(g, c) => {
            let cm = c
                .clone()
                .unwrap_or_else(|| GaugeMatrix::diagonal(h, g, mode));
            hj::hj_zdep_residual(h, g, &cm, mode, &opts.samples)
        }
    }
    .map_err(|e| e.at("hj"))?;
    let ok = hj_rep.passes(opts.hj_tol);
    rep.stages.push(StageResult {
        stage: "hj".into(),
        value: hj_rep.sup_residual,
        tolerance: Some(opts.hj_tol),
        pass: ok,
    });
    if !ok {
        return Ok(rep);
    }
    let (field, section): (Box<dyn BaseField>, AnySection) = match gamma {
        PipelineSection::ZInd(g) => (
            Box::new(hj::project_q(h, g).map_err(|e| e.at("project"))?),
            AnySection::ZInd(g.clone()),
        ),
        PipelineSection::ZDep(g, c) => {
            let cm = c
                .clone()
                .unwrap_or_else(|| GaugeMatrix::diagonal(h, g, mode));
            (
                Box::new(hj::project_qz(h, g, &cm).map_err(|e| e.at("project"))?),
                AnySection::ZDep(g.clone()),
            )
        }
    };
    let sec = integral_section(field.as_ref(), start, grid, opts.steps_per_cell)
        .map_err(|e| e.at("integrate"))?;
    rep.stages.push(StageResult {
        stage: "integrate".into(),
        value: sec.order_mismatch,
        tolerance: Some(ORDER_TOL),
        pass: true,
    });
    rep.warnings.extend(sec.warning.clone());
    let psi = lift(&section, &sec.map).map_err(|e| e.at("lift"))?;
    let res = map_residual(&psi, h, mode).map_err(|e| e.at("map_residual"))?;
    let sup = Residual::sup(&res).max();
    let ok = sup <= opts.map_tol;
    rep.stages.push(StageResult {
        stage: "map_residual".into(),
        value: sup,
        tolerance: Some(opts.map_tol),
        pass: ok,
    });
    rep.pass = ok;
    rep.base = Some(sec.map);
    rep.lifted = Some(psi);
    rep.residuals = res;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rot;
    impl GenericField for Rot {
        fn dim(&self) -> usize {
            2
        }
        fn k(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
            vec![vec![-x[1], x[0]], vec![x[0], x[1]]]
        }
    }

    struct Shear;
    impl GenericField for Shear {
        fn dim(&self) -> usize {
            2
        }
        fn k(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
            vec![vec![S::one(), S::zero()], vec![S::zero(), x[0]]]
        }
    }

    #[test]
    fn rotation_and_scaling_commute() {
        let f = Exact(Rot);
        let d = commutator_defect(&f, &[vec![0.3, -0.2], vec![1.0, 2.0]]).unwrap();
        assert!(d < 1e-15);
        let fd = fd_jacobian(&f, &[0.3, 0.4], 1e-6).unwrap();
        let ex = f.jacobian(&[0.3, 0.4]).unwrap();
        for a in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    assert!((fd[a][r][c] - ex[a][r][c]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn shear_does_not_commute() {
        let f = Exact(Shear);
        assert!((commutator_defect(&f, &[vec![0.0, 0.0]]).unwrap() - 1.0).abs() < 1e-15);
        let g = GridSpec::uniform(2, 0.0, 0.1, 5).unwrap();
        let r = integral_section(&f, &[0.0, 0.0], &g, 4);
        assert!(matches!(r, Err(Error::Integrability(_))));
    }

    #[test]
    fn zero_field_gives_constant_map() {
        struct Zero;
        impl GenericField for Zero {
            fn dim(&self) -> usize {
                1
            }
            fn k(&self) -> usize {
                2
            }
            fn eval<S: Scalar>(&self, _x: &[S]) -> Vec<Vec<S>> {
                vec![vec![S::zero()], vec![S::zero()]]
            }
        }
        let g = GridSpec::uniform(2, 0.0, 0.1, 4).unwrap();
        let s = integral_section(&Exact(Zero), &[1.5], &g, 4).unwrap();
        assert!(s.map.values.iter().all(|v| v[0] == 1.5));
    }

    #[test]
    fn blow_up_is_divergence() {
        struct Cube;
        impl GenericField for Cube {
            fn dim(&self) -> usize {
                1
            }
            fn k(&self) -> usize {
                1
            }
            fn eval<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
                vec![vec![x[0] * x[0] * x[0]]]
            }
        }
        let g = GridSpec::uniform(1, 0.0, 0.5, 10).unwrap();
        let r = integral_section(&Exact(Cube), &[2.0], &g, 4);
        assert!(matches!(r, Err(Error::Divergence(_))));
    }
}
