//! Built-in example systems: Hamiltonians, candidate sections (valid and
//! deliberately invalid), closed-form solutions and expected verdicts.

mod first_order;
mod hunter_saxton;
mod membrane;
mod telegrapher;
mod telegrapher_quadratic;
mod thermo;

pub use hunter_saxton::invert_g_delta;
pub use membrane::membrane_rates;
pub use telegrapher::{telegrapher_params_from_line, telegrapher_roots};
pub use thermo::{thermo_balance_residual, ThermoFields, ThermoResiduals};

use crate::dual::{Dual, D1, D2};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::ChartSpec;
use crate::grid::{fd_derivative, ErasedClosed, FdOrder, GridSpec, SolutionMap};
use crate::hdw::Mode;
use crate::hj::{CompleteFamily, GaugeMatrix};
use crate::sampling::SampleBox;
use crate::sections::{SectionZDep, SectionZInd};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Named numeric parameters of an example.
pub type Params = BTreeMap<String, f64>;

/// Keys accepted by [`load`], in registry order.
pub const EXAMPLES: [&str; 6] = [
    "telegrapher",
    "telegrapher-quadratic-z",
    "hunter-saxton",
    "first-order-dissipative",
    "membrane",
    "thermo-eit",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Verdict {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionKind {
    ZInd,
    ZDep,
    /// z-dependent complete family parameterised by k*n constants.
    Family,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionInfo {
    pub key: &'static str,
    pub kind: SectionKind,
    pub description: &'static str,
    /// Parameter names of the family, for [`SectionKind::Family`].
    pub family_params: &'static [&'static str],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionInfo {
    pub key: &'static str,
    pub description: &'static str,
    /// Section whose projected dynamics reproduce the solution.
    pub section: Option<&'static str>,
    /// Modes in which the lifted map solves the HdDW equations.
    pub modes: &'static [Mode],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    CheckHj,
    Simulate,
    Solution,
}

/// A corpus test: a run configuration and the verdict and exit code it must produce.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedCase {
    pub name: &'static str,
    pub kind: CaseKind,
    pub mode: Mode,
    pub section: Option<&'static str>,
    pub solution: Option<&'static str>,
    pub gauge: Option<&'static str>,
    pub overrides: Vec<(&'static str, f64)>,
    pub verdict: Verdict,
    pub exit_code: i32,
}

impl ExpectedCase {
    pub fn valid(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub(crate) fn case(
    name: &'static str,
    kind: CaseKind,
    mode: Mode,
    section: Option<&'static str>,
    solution: Option<&'static str>,
) -> ExpectedCase {
    ExpectedCase {
        name,
        kind,
        mode,
        section,
        solution,
        gauge: None,
        overrides: Vec::new(),
        verdict: Verdict::Pass,
        exit_code: 0,
    }
}

impl ExpectedCase {
    pub(crate) fn set(mut self, k: &'static str, v: f64) -> Self {
        self.overrides.push((k, v));
        self
    }
    pub(crate) fn gauge(mut self, g: &'static str) -> Self {
        self.gauge = Some(g);
        self
    }
    pub(crate) fn fails(mut self, exit_code: i32) -> Self {
        self.verdict = Verdict::Fail;
        self.exit_code = exit_code;
        self
    }
}

/// Which gauge matrix to use with a z-dependent section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeSel {
    /// The example's matrix for the run mode, else the diagonal solve.
    Auto,
    Diagonal,
    /// The standard-mode matrix, whatever the run mode.
    ExplicitStandard,
    /// The evolution-mode matrix, whatever the run mode.
    ExplicitEvolution,
}

impl FromStr for GaugeSel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(GaugeSel::Auto),
            "diagonal" => Ok(GaugeSel::Diagonal),
            "explicit-standard" | "standard" => Ok(GaugeSel::ExplicitStandard),
            "explicit-evolution" | "evolution" => Ok(GaugeSel::ExplicitEvolution),
            _ => Err(Error::Config(format!(
                "unknown gauge '{s}' (expected auto, diagonal, explicit-standard or explicit-evolution)"
            ))),
        }
    }
}

/// A built section, with its gauge matrix when z-dependent.
#[derive(Clone, Debug)]
pub enum CorpusSection {
    ZInd(SectionZInd),
    ZDep(SectionZDep, GaugeMatrix),
}

pub(crate) enum Built {
    ZInd(SectionZInd),
    ZDep(SectionZDep),
}

pub(crate) trait ExampleImpl: Send + Sync {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField>;
    fn section(&self, _key: &str, _p: &Params) -> Result<Built> {
        Err(Error::Unknown("this example has no sections".into()))
    }
    /// Closed-form gauge matrix for `which` mode, if the example gives one.
    fn explicit_gauge(
        &self,
        _key: &str,
        _p: &Params,
        _h: &ScalarField,
        _which: Mode,
    ) -> Option<GaugeMatrix> {
        None
    }
    fn family(
        &self,
        _key: &str,
        _p: &Params,
        _h: &ScalarField,
    ) -> Result<Option<Box<dyn CompleteFamily>>> {
        Ok(None)
    }
    /// Sampling box for HJ checks: Q for z-independent sections, Q x R^k otherwise.
    fn sample_box(&self, key: &str, p: &Params) -> SampleBox;
    /// Box of family parameters.
    fn family_box(&self, _key: &str) -> SampleBox {
        SampleBox::cube(2, -1.0, 1.0)
    }
    fn solution(&self, key: &str, p: &Params, mode: Mode) -> Result<Arc<dyn ErasedClosed>>;
    fn default_grid(&self, key: &str) -> GridSpec;
    /// Second-order PDE residual at one point from u, its gradient and Hessian in t.
    fn pde(&self, _p: &Params, _x: &[f64], _du: &[f64], _d2u: &[Vec<f64>]) -> Option<f64> {
        None
    }
}

/// A fully wired example system.
#[derive(Clone)]
pub struct ExampleSystem {
    pub key: &'static str,
    pub title: &'static str,
    pub chart: ChartSpec,
    pub defaults: Params,
    pub sections: Vec<SectionInfo>,
    pub solutions: Vec<SolutionInfo>,
    pub cases: Vec<ExpectedCase>,
    /// Whether the example defines a second-order PDE residual.
    pub has_pde: bool,
    pub(crate) imp: Arc<dyn ExampleImpl>,
}

impl fmt::Debug for ExampleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleSystem")
            .field("key", &self.key)
            .field("chart", &self.chart)
            .field("defaults", &self.defaults)
            .finish()
    }
}

/// Load an example by key.
pub fn load(name: &str) -> Result<ExampleSystem> {
    match name {
        "telegrapher" => Ok(telegrapher::system()),
        "telegrapher-quadratic-z" => Ok(telegrapher_quadratic::system()),
        "hunter-saxton" => Ok(hunter_saxton::system()),
        "first-order-dissipative" => Ok(first_order::system()),
        "membrane" => Ok(membrane::system()),
        "thermo-eit" => Ok(thermo::system()),
        _ => Err(Error::Unknown(format!(
            "unknown example '{name}'; valid keys: {}",
            EXAMPLES.join(", ")
        ))),
    }
}

/// All examples in registry order.
pub fn all() -> Vec<ExampleSystem> {
    EXAMPLES
        .iter()
        .map(|k| load(k).expect("registry key"))
        .collect()
}

/// Closed-form solution `key` of example `name` sampled on `grid`.
pub fn analytic(
    name: &str,
    key: &str,
    params: &Params,
    mode: Mode,
    grid: Option<GridSpec>,
) -> Result<SolutionMap> {
    let ex = load(name)?;
    let p = ex.merge(params)?;
    ex.solution_map(key, &p, mode, grid)
}

impl ExampleSystem {
    /// Defaults overridden by `overrides`; unknown names are rejected.
    pub fn merge(&self, overrides: &Params) -> Result<Params> {
        let mut p = self.defaults.clone();
        for (k, v) in overrides {
            if !p.contains_key(k) {
                return Err(Error::Config(format!(
                    "example {} has no parameter '{k}'; known: {}",
                    self.key,
                    self.defaults.keys().cloned().collect::<Vec<_>>().join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::Config(format!("parameter {k} must be finite")));
            }
            p.insert(k.clone(), *v);
        }
        Ok(p)
    }

    pub fn params_with(&self, overrides: &[(&str, f64)]) -> Result<Params> {
        self.merge(&overrides.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        self.imp.hamiltonian(p)
    }

    pub fn section_info(&self, key: &str) -> Result<&SectionInfo> {
        self.sections.iter().find(|s| s.key == key).ok_or_else(|| {
            Error::Unknown(format!(
                "example {} has no section '{key}'; valid: {}",
                self.key,
                self.sections
                    .iter()
                    .map(|s| s.key)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }

    pub fn solution_info(&self, key: &str) -> Result<&SolutionInfo> {
        self.solutions.iter().find(|s| s.key == key).ok_or_else(|| {
            Error::Unknown(format!(
                "example {} has no solution '{key}'; valid: {}",
                self.key,
                self.solutions
                    .iter()
                    .map(|s| s.key)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }

    /// Build section `key`; z-dependent sections get the gauge chosen by `gauge`.
    pub fn section(
        &self,
        key: &str,
        p: &Params,
        mode: Mode,
        gauge: GaugeSel,
    ) -> Result<CorpusSection> {
        self.section_info(key)?;
        match self.imp.section(key, p)? {
            Built::ZInd(g) => Ok(CorpusSection::ZInd(g)),
            Built::ZDep(g) => {
                let h = self.hamiltonian(p)?;
                let explicit = |which: Mode| {
                    self.imp.explicit_gauge(key, p, &h, which).ok_or_else(|| {
                        Error::Config(format!("section {key} has no {which} gauge matrix"))
                    })
                };
                let c = match gauge {
                    GaugeSel::Diagonal => GaugeMatrix::diagonal(&h, &g, mode),
                    GaugeSel::ExplicitStandard => explicit(Mode::Standard)?,
                    GaugeSel::ExplicitEvolution => explicit(Mode::Evolution)?,
                    GaugeSel::Auto => self
                        .imp
                        .explicit_gauge(key, p, &h, mode)
                        .unwrap_or_else(|| GaugeMatrix::diagonal(&h, &g, mode)),
                };
                Ok(CorpusSection::ZDep(g, c))
            }
        }
    }

    /// Complete family behind a [`SectionKind::Family`] section.
    pub fn family(&self, key: &str, p: &Params) -> Result<Box<dyn CompleteFamily>> {
        let info = self.section_info(key)?;
        if info.kind != SectionKind::Family {
            return Err(Error::Config(format!(
                "section {key} is not a complete family"
            )));
        }
        let h = self.hamiltonian(p)?;
        self.imp
            .family(key, p, &h)?
            .ok_or_else(|| Error::Config(format!("section {key} has no family")))
    }

    pub fn family_box(&self, key: &str) -> SampleBox {
        self.imp.family_box(key)
    }

    pub fn sample_box(&self, key: &str, p: &Params) -> Result<SampleBox> {
        self.section_info(key)?;
        Ok(self.imp.sample_box(key, p))
    }

    pub fn default_grid(&self, solution: &str) -> Result<GridSpec> {
        self.solution_info(solution)?;
        Ok(self.imp.default_grid(solution))
    }

    /// Closed form of solution `key` as a map t -> phase space.
    pub fn closed_solution(
        &self,
        key: &str,
        p: &Params,
        mode: Mode,
    ) -> Result<Arc<dyn ErasedClosed>> {
        self.solution_info(key)?;
        self.imp.solution(key, p, mode)
    }

    /// Closed-form solution sampled on `grid` (default grid when `None`).
    pub fn solution_map(
        &self,
        key: &str,
        p: &Params,
        mode: Mode,
        grid: Option<GridSpec>,
    ) -> Result<SolutionMap> {
        let m = self.closed_solution(key, p, mode)?;
        let grid = match grid {
            Some(g) => g,
            None => self.imp.default_grid(key),
        };
        SolutionMap::from_closed(grid, Some(self.chart), m)
    }

    /// Second-order PDE residual at interior nodes of a phase-space map;
    /// `None` when the example has no scalar PDE.
    pub fn pde_residual(&self, p: &Params, psi: &SolutionMap) -> Result<Option<Vec<f64>>> {
        if !self.has_pde {
            return Ok(None);
        }
        if psi.chart != Some(self.chart) {
            return Err(Error::Shape(
                "PDE residual needs a phase-space map of this example".into(),
            ));
        }
        let (du, d2u) = u_derivatives(psi)?;
        let grid = &psi.grid;
        let mut out = Vec::new();
        for l in 0..grid.len() {
            if psi.closed.is_none() && !grid.is_interior(&grid.multi_index(l)) {
                continue;
            }
            let r = self
                .imp
                .pde(p, &psi.values[l], &du[l], &d2u[l])
                .ok_or_else(|| Error::Precondition("example has no PDE".into()))?;
            out.push(r.abs());
        }
        Ok(Some(out))
    }
}

/// Per-node gradients and Hessians in t.
pub type UDerivatives = (Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>);

/// First and second t-derivatives of the first coordinate of `psi` at every node:
/// exact for closed forms, fourth-order differences otherwise.
pub fn u_derivatives(psi: &SolutionMap) -> Result<UDerivatives> {
    let grid = &psi.grid;
    let k = grid.k();
    if let Some(m) = &psi.closed {
        let mut du = Vec::with_capacity(grid.len());
        let mut d2 = Vec::with_capacity(grid.len());
        for t in grid.nodes() {
            let first: Vec<f64> = (0..k)
                .map(|a| m.eval_d1(&crate::dual::seed(&t, a))[0].eps)
                .collect();
            let second: Vec<Vec<f64>> = (0..k)
                .map(|a| {
                    (0..k)
                        .map(|b| {
                            let td: Vec<D2> = t
                                .iter()
                                .enumerate()
                                .map(|(i, &v)| {
                                    Dual::new(
                                        D1::new(v, if i == a { 1.0 } else { 0.0 }),
                                        D1::new(if i == b { 1.0 } else { 0.0 }, 0.0),
                                    )
                                })
                                .collect();
                            m.eval_d2(&td)[0].eps.eps
                        })
                        .collect()
                })
                .collect();
            du.push(first);
            d2.push(second);
        }
        return Ok((du, d2));
    }
    let u: Vec<Vec<f64>> = psi.values.iter().map(|v| vec![v[0]]).collect();
    let du: Vec<Vec<f64>> = (0..grid.len())
        .map(|l| {
            let idx = grid.multi_index(l);
            (0..k)
                .map(|a| fd_derivative(grid, &u, &idx, a, FdOrder::Fourth)[0])
                .collect()
        })
        .collect();
    let d2 = (0..grid.len())
        .map(|l| {
            let idx = grid.multi_index(l);
            (0..k)
                .map(|a| {
                    let col: Vec<Vec<f64>> = du.iter().map(|d| vec![d[a]]).collect();
                    (0..k)
                        .map(|b| fd_derivative(grid, &col, &idx, b, FdOrder::Fourth)[0])
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok((du, d2))
}

pub(crate) fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub(crate) fn nonzero(p: &Params, key: &str) -> Result<f64> {
    let v = p[key];
    if v == 0.0 {
        return Err(Error::Precondition(format!(
            "parameter {key} must be nonzero"
        )));
    }
    Ok(v)
}

pub(crate) fn positive(p: &Params, key: &str) -> Result<f64> {
    let v = p[key];
    if !(v > 0.0) {
        return Err(Error::Precondition(format!(
            "parameter {key} must be positive"
        )));
    }
    Ok(v)
}

pub(crate) fn unknown_solution(key: &str) -> Error {
    Error::Unknown(format!("unknown solution '{key}'"))
}

pub(crate) fn unknown_section(key: &str) -> Error {
    Error::Unknown(format!("unknown section '{key}'"))
}

pub(crate) fn grid2(lo: f64, spacing: f64, count: usize) -> GridSpec {
    GridSpec::uniform(2, lo, spacing, count).expect("static grid")
}

/// z-dependent family gamma = (q, a z^1 + drift q + l1, -a z^2 + l2, z) on
/// n = 1, k = 2, shared by three examples.
#[derive(Clone, Copy, Debug)]
pub(crate) struct AffineZSection {
    pub a: f64,
    pub drift: f64,
    pub lam: [f64; 2],
}

impl crate::sections::ZDependent for AffineZSection {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn momenta<S: crate::dual::Scalar>(&self, q: &[S], z: &[S]) -> Vec<S> {
        vec![
            z[0] * self.a + q[0] * self.drift + self.lam[0],
            z[1] * (-self.a) + self.lam[1],
        ]
    }
}

/// Constant momenta, independent of q and z.
#[derive(Clone, Debug)]
pub(crate) struct ConstantMomenta {
    pub n: usize,
    pub vals: Vec<f64>,
}

impl crate::sections::ZDependent for ConstantMomenta {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.vals.len() / self.n
    }
    fn momenta<S: crate::dual::Scalar>(&self, _q: &[S], _z: &[S]) -> Vec<S> {
        self.vals.iter().map(|&v| S::cst(v)).collect()
    }
}

type XiFn = dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync;

/// Complete family built on [`AffineZSection`] with the gauge matrices
/// C^st = diag(-(h + Xi/a)/2, -(h - Xi/a)/2) and C^ev = diag(-Xi/2a, Xi/2a).
#[derive(Clone)]
pub(crate) struct AffineFamily {
    pub name: &'static str,
    pub a: f64,
    pub drift: f64,
    pub h: ScalarField,
    /// Closed-form Xi(u, z, lambda).
    pub xi: Arc<XiFn>,
}

impl AffineFamily {
    pub fn member(&self, lam: &[f64]) -> Result<SectionZDep> {
        SectionZDep::new(
            self.name,
            AffineZSection {
                a: self.a,
                drift: self.drift,
                lam: [lam[0], lam[1]],
            },
        )
    }

    pub fn explicit_gauge(&self, lam: &[f64], which: Mode) -> Result<GaugeMatrix> {
        let g = self.member(lam)?;
        let (h, xi, a, lam) = (self.h.clone(), self.xi.clone(), self.a, lam.to_vec());
        let name = format!("{}-explicit-{which}", self.name);
        Ok(GaugeMatrix::new(name, move |q, z| {
            let x = xi(q[0], z, &lam);
            let (ca, cb) = match which {
                Mode::Standard => {
                    let hv = h.value(&g.eval(q, z)?)?;
                    (-0.5 * (hv + x / a), -0.5 * (hv - x / a))
                }
                Mode::Evolution => (-x / (2.0 * a), x / (2.0 * a)),
            };
            Ok(vec![vec![ca, 0.0], vec![0.0, cb]])
        }))
    }
}

impl CompleteFamily for AffineFamily {
    fn chart(&self) -> ChartSpec {
        self.h.chart
    }
    fn n_params(&self) -> usize {
        2
    }
    fn section(&self, lambda: &[f64]) -> Result<SectionZDep> {
        self.member(lambda)
    }
    fn inverse(
        &self,
        pt: &crate::geometry::DarbouxPoint,
    ) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let u = pt.q[0];
        let l1 = pt.p[0][0] - self.a * pt.z[0] - self.drift * u;
        let l2 = pt.p[1][0] + self.a * pt.z[1];
        Some((vec![u], vec![l1, l2], pt.z.clone()))
    }
    fn gauge(&self, lambda: &[f64], mode: Mode) -> Option<GaugeMatrix> {
        self.explicit_gauge(lambda, mode).ok()
    }
}
