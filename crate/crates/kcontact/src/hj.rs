//! Hamilton-Jacobi residuals for z-independent and z-dependent sections,
//! projected k-vector fields, the gauge matrix C and complete-solution checks.

use crate::dual::{seed, D1};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::{ChartSpec, DarbouxPoint};
use crate::hdw::{KVectorField, Mode};
use crate::integrate::BaseField;
use crate::linalg;
use crate::sections::{check_holonomic, check_max_coisotropic, SectionZDep, SectionZInd};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Holonomy tolerance required before z-independent checks.
pub const HOLONOMY_TOL: f64 = 1e-10;
/// Coisotropy tolerance required before z-dependent checks.
pub const COISOTROPY_TOL: f64 = 1e-10;
/// Trace tolerances of the gauge matrix, scaled by max(1, |C|).
pub const TRACE_TOL_STANDARD: f64 = 1e-10;
pub const TRACE_TOL_EVOLUTION: f64 = 1e-12;
/// Number of worst samples kept in a report.
pub const OFFENDERS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HjMode {
    ClassicalZind,
    EvolutionZind,
    ClassicalZdep,
    EvolutionZdep,
}

impl HjMode {
    pub fn zdep(mode: Mode) -> HjMode {
        match mode {
            Mode::Standard => HjMode::ClassicalZdep,
            Mode::Evolution => HjMode::EvolutionZdep,
        }
    }

    pub fn zind(mode: Mode) -> HjMode {
        match mode {
            Mode::Standard => HjMode::ClassicalZind,
            Mode::Evolution => HjMode::EvolutionZind,
        }
    }
}

/// A sample point with its residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub point: Vec<f64>,
    pub residual: f64,
}

/// Sup-norm summary of a Hamilton-Jacobi check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HJReport {
    pub mode: HjMode,
    pub sup_residual: f64,
    pub sample_count: usize,
    pub worst: Vec<Offender>,
    /// Name of the gauge matrix used, for z-dependent checks.
    pub gauge: Option<String>,
}

impl HJReport {
    fn from_residuals(
        mode: HjMode,
        samples: &[Vec<f64>],
        res: Vec<f64>,
        gauge: Option<String>,
    ) -> Self {
        let sup = res.iter().fold(0.0, |m: f64, &v| {
            if v.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(v)
            }
        });
        let mut order: Vec<usize> = (0..res.len()).collect();
        order.sort_by(|&a, &b| res[b].total_cmp(&res[a]).then(a.cmp(&b)));
        HJReport {
            mode,
            sup_residual: sup,
            sample_count: samples.len(),
            worst: order
                .into_iter()
                .take(OFFENDERS)
                .map(|i| Offender {
                    point: samples[i].clone(),
                    residual: res[i],
                })
                .collect(),
            gauge,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.sup_residual <= tol
    }
}

/// Projection of the HdDW dynamics onto Q along a z-independent section:
/// component a at q is sum_i dh/dp_i^a (gamma(q)) d/dq^i.
#[derive(Clone, Debug)]
pub struct ProjectedQ {
    pub h: ScalarField,
    pub gamma: SectionZInd,
}

/// Projected k-vector field on Q; uses only dh/dp along the section.
pub fn project_q(h: &ScalarField, gamma: &SectionZInd) -> Result<ProjectedQ> {
    if h.chart != gamma.chart {
        return Err(Error::Shape("Hamiltonian and section charts differ".into()));
    }
    Ok(ProjectedQ {
        h: h.clone(),
        gamma: gamma.clone(),
    })
}

impl BaseField for ProjectedQ {
    fn dim(&self) -> usize {
        self.h.chart.n
    }

    fn k(&self) -> usize {
        self.h.chart.k
    }

    fn eval(&self, q: &[f64]) -> Result<Vec<Vec<f64>>> {
        let c = self.h.chart;
        let g = self.h.grad_flat(&self.gamma.eval(q)?.to_flat())?;
        Ok((0..c.k)
            .map(|a| g[c.p_index(a, 0)..c.p_index(a, 0) + c.n].to_vec())
            .collect())
    }

    fn jacobian(&self, q: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let c = self.h.chart;
        let pt = self.gamma.eval(q)?;
        self.h.grad_flat(&pt.to_flat())?;
        let cols: Vec<Vec<D1>> = (0..c.n)
            .map(|m| self.h.grad_d1(&self.gamma.eval_d1(&seed(q, m))))
            .collect();
        Ok((0..c.k)
            .map(|a| {
                (0..c.n)
                    .map(|i| (0..c.n).map(|m| cols[m][c.p_index(a, i)].eps).collect())
                    .collect()
            })
            .collect())
    }
}

/// Projection read from the base components of an arbitrary k-vector field.
#[derive(Clone, Debug)]
pub struct ProjectedFromField {
    pub field: KVectorField,
    pub gamma: SectionZInd,
}

impl BaseField for ProjectedFromField {
    fn dim(&self) -> usize {
        self.gamma.chart.n
    }

    fn k(&self) -> usize {
        self.gamma.chart.k
    }

    fn eval(&self, q: &[f64]) -> Result<Vec<Vec<f64>>> {
        let kt = self.field.at(&self.gamma.eval(q)?)?;
        Ok(kt.comp.into_iter().map(|t| t.q).collect())
    }
}

/// sup |h o gamma| for a holonomic section.
pub fn hj_classical_zind(
    h: &ScalarField,
    gamma: &SectionZInd,
    samples: &[Vec<f64>],
) -> Result<HJReport> {
    require_holonomic(gamma, samples)?;
    let res = samples
        .par_iter()
        .map(|q| h.value(&gamma.eval(q)?).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    Ok(HJReport::from_residuals(
        HjMode::ClassicalZind,
        samples,
        res,
        None,
    ))
}

/// Gradient of q -> h(gamma(q)).
pub fn grad_h_on_section(h: &ScalarField, gamma: &SectionZInd, q: &[f64]) -> Result<Vec<f64>> {
    let pt = gamma.eval(q)?;
    h.value(&pt)?;
    Ok((0..q.len())
        .map(|i| h.eval_d1(&gamma.eval_d1(&seed(q, i))).eps)
        .collect())
}

/// sup |d(h o gamma)| for a holonomic section.
pub fn hj_evolution_zind(
    h: &ScalarField,
    gamma: &SectionZInd,
    samples: &[Vec<f64>],
) -> Result<HJReport> {
    require_holonomic(gamma, samples)?;
    let res = samples
        .par_iter()
        .map(|q| grad_h_on_section(h, gamma, q).map(|g| linalg::norm_inf(&g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HJReport::from_residuals(
        HjMode::EvolutionZind,
        samples,
        res,
        None,
    ))
}

/// Classical or evolution z-independent check by mode.
pub fn hj_zind(
    h: &ScalarField,
    gamma: &SectionZInd,
    mode: Mode,
    samples: &[Vec<f64>],
) -> Result<HJReport> {
    match mode {
        Mode::Standard => hj_classical_zind(h, gamma, samples),
        Mode::Evolution => hj_evolution_zind(h, gamma, samples),
    }
}

fn require_holonomic(gamma: &SectionZInd, samples: &[Vec<f64>]) -> Result<()> {
    let d = check_holonomic(gamma, samples)?;
    if !(d <= HOLONOMY_TOL) {
        return Err(Error::Contract(format!(
            "section {} is not holonomic (defect {d:e})",
            gamma.name
        )));
    }
    Ok(())
}

/// Pointwise ingredients of the z-dependent equation.
#[derive(Clone, Debug, PartialEq)]
pub struct ZDepTerms {
    /// h o gamma.
    pub h: f64,
    /// Gamma_b.
    pub gamma_b: Vec<f64>,
    /// Xi_j = d_{q^j}(h o gamma) + sum_b Gamma_b gamma_j^b.
    pub xi: Vec<f64>,
    /// `dz[a][j][b]` = d gamma_j^a / d z^b.
    pub dz: Vec<Vec<Vec<f64>>>,
    /// gamma_j^a at the point.
    pub p: Vec<Vec<f64>>,
}

/// Compute h o gamma, Gamma_b, Xi_j and the z-derivatives of gamma at (q, z).
pub fn zdep_terms(h: &ScalarField, gamma: &SectionZDep, q: &[f64], z: &[f64]) -> Result<ZDepTerms> {
    let c = h.chart;
    if c != gamma.chart {
        return Err(Error::Shape("Hamiltonian and section charts differ".into()));
    }
    let pt = gamma.eval(q, z)?;
    let hv = h.value(&pt)?;
    let g = h.grad_flat(&pt.to_flat())?;
    let jac = gamma.jacobian(q, z)?;
    let gamma_b: Vec<f64> = (0..c.k)
        .map(|b| {
            let mut s = g[c.z_index(b)];
            for a in 0..c.k {
                for i in 0..c.n {
                    s += g[c.p_index(a, i)] * jac.dz[a][i][b];
                }
            }
            s
        })
        .collect();
    let zd: Vec<D1> = z.iter().map(|&v| D1::new(v, 0.0)).collect();
    let xi: Vec<f64> = (0..c.n)
        .map(|j| {
            let dq = h.eval_d1(&gamma.eval_d1(&seed(q, j), &zd)).eps;
            dq + (0..c.k).map(|b| gamma_b[b] * pt.p[b][j]).sum::<f64>()
        })
        .collect();
    Ok(ZDepTerms {
        h: hv,
        gamma_b,
        xi,
        dz: jac.dz,
        p: pt.p,
    })
}

/// Gamma_b = dh(T gamma(d/dz^b)).
pub fn gamma_beta(h: &ScalarField, gamma: &SectionZDep, q: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    Ok(zdep_terms(h, gamma, q, z)?.gamma_b)
}

/// Residual per j: Xi_j + sum_{a,b} C_a^b d gamma_j^a / d z^b.
pub fn zdep_pointwise(t: &ZDepTerms, c: &[Vec<f64>]) -> Vec<f64> {
    let k = c.len();
    t.xi.iter()
        .enumerate()
        .map(|(j, xi)| {
            let mut s = *xi;
            for a in 0..k {
                for b in 0..k {
                    s += c[a][b] * t.dz[a][j][b];
                }
            }
            s
        })
        .collect()
}

type GaugeFn = dyn Fn(&[f64], &[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync;

/// k x k matrix function C(q, z); `c[a][b]` is C_a^b.
#[derive(Clone)]
pub struct GaugeMatrix {
    pub name: String,
    f: Arc<GaugeFn>,
}

impl fmt::Debug for GaugeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeMatrix")
            .field("name", &self.name)
            .finish()
    }
}

impl GaugeMatrix {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync + 'static,
    {
        GaugeMatrix {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, q: &[f64], z: &[f64]) -> Result<Vec<Vec<f64>>> {
        (self.f)(q, z)
    }

    /// Diagonal C solved pointwise by [`solve_diagonal_c`].
    pub fn diagonal(h: &ScalarField, gamma: &SectionZDep, mode: Mode) -> Self {
        let (h, g) = (h.clone(), gamma.clone());
        GaugeMatrix::new(format!("diagonal-{mode}"), move |q, z| {
            solve_diagonal_c(&h, &g, mode, q, z)
        })
    }
}

/// Trace of C required by the mode: -(h o gamma) or 0.
pub fn required_trace(mode: Mode, h_on_gamma: f64) -> f64 {
    match mode {
        Mode::Standard => -h_on_gamma,
        Mode::Evolution => 0.0,
    }
}

fn helmert(k: usize) -> Vec<Vec<f64>> {
    (1..k)
        .map(|m| {
            let s = ((m * (m + 1)) as f64).sqrt();
            (0..k)
                .map(|a| {
                    if a < m {
                        1.0 / s
                    } else if a == m {
                        -(m as f64) / s
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Diagonal gauge matrix solving the z-dependent equation at (q, z).
///
/// The trace is fixed by the mode; the traceless part is the minimum-norm
/// least-squares solution of Xi_j + sum_a c_a d gamma_j^a / d z^a = 0. For
/// k = 2 this is the sum/difference solve of the worked examples.
pub fn solve_diagonal_c(
    h: &ScalarField,
    gamma: &SectionZDep,
    mode: Mode,
    q: &[f64],
    z: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let t = zdep_terms(h, gamma, q, z)?;
    solve_diagonal_from_terms(&t, mode)
}

/// Diagonal solve from precomputed terms.
pub fn solve_diagonal_from_terms(t: &ZDepTerms, mode: Mode) -> Result<Vec<Vec<f64>>> {
    let k = t.dz.len();
    let n = t.xi.len();
    let tr = required_trace(mode, t.h);
    let mut c = vec![tr / k as f64; k];
    if k > 1 {
        let basis = helmert(k);
        let rhs: Vec<f64> = (0..n)
            .map(|j| -(t.xi[j] + (0..k).map(|a| c[a] * t.dz[a][j][a]).sum::<f64>()))
            .collect();
        let m: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                basis
                    .iter()
                    .map(|v| (0..k).map(|a| v[a] * t.dz[a][j][a]).sum())
                    .collect()
            })
            .collect();
        let mm = linalg::to_matrix(&m);
        let scale = 1.0 + linalg::norm_inf(&t.xi) + tr.abs();
        if linalg::numeric_rank(&mm) == 0 || linalg::norm_inf(&m.concat()) <= 1e-14 * scale {
            if linalg::norm_inf(&rhs) > 1e-10 * scale {
                return Err(Error::NoSolution(format!(
                    "diagonal gauge: z-derivative coefficients vanish while Xi = {:?}",
                    t.xi
                )));
            }
        } else {
            let w = linalg::lstsq_min_norm(&mm, &rhs);
            for (v, wm) in basis.iter().zip(&w) {
                for a in 0..k {
                    c[a] += wm * v[a];
                }
            }
        }
    }
    let mut out = vec![vec![0.0; k]; k];
    for a in 0..k {
        out[a][a] = c[a];
    }
    Ok(out)
}

/// sup over samples [q, z] and j of the z-dependent residual with gauge C.
pub fn hj_zdep_residual(
    h: &ScalarField,
    gamma: &SectionZDep,
    c: &GaugeMatrix,
    mode: Mode,
    samples: &[Vec<f64>],
) -> Result<HJReport> {
    let coiso = check_max_coisotropic(gamma, samples)?;
    if !(coiso <= COISOTROPY_TOL) {
        return Err(Error::Contract(format!(
            "section {} is not maximally coisotropic (defect {coiso:e})",
            gamma.name
        )));
    }
    let res = samples
        .par_iter()
        .map(|s| {
            let (q, z) = gamma.split(s)?;
            let t = zdep_terms(h, gamma, q, z)?;
            let cm = c.eval(q, z)?;
            check_trace(&cm, mode, t.h, &c.name)?;
            Ok(linalg::norm_inf(&zdep_pointwise(&t, &cm)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HJReport::from_residuals(
        HjMode::zdep(mode),
        samples,
        res,
        Some(c.name.clone()),
    ))
}

fn check_trace(cm: &[Vec<f64>], mode: Mode, hv: f64, name: &str) -> Result<()> {
    let tr: f64 = (0..cm.len()).map(|a| cm[a][a]).sum();
    let scale = 1.0 + linalg::norm_inf(&cm.concat()) + hv.abs();
    let (target, tol) = match mode {
        Mode::Standard => (-hv, TRACE_TOL_STANDARD),
        Mode::Evolution => (0.0, TRACE_TOL_EVOLUTION),
    };
    if (tr - target).abs() > tol * scale {
        return Err(Error::Contract(format!(
            "gauge matrix {name}: trace {tr:e} violates the {mode} constraint {target:e}"
        )));
    }
    Ok(())
}

/// Projected representative on Q x R^k:
/// component a = U_a^i d/dq^i + sum_b (sum_j gamma_j^b U_a^j + C_a^b) d/dz^b.
#[derive(Clone, Debug)]
pub struct ProjectedQZ {
    pub h: ScalarField,
    pub gamma: SectionZDep,
    pub c: GaugeMatrix,
}

pub fn project_qz(h: &ScalarField, gamma: &SectionZDep, c: &GaugeMatrix) -> Result<ProjectedQZ> {
    if h.chart != gamma.chart {
        return Err(Error::Shape("Hamiltonian and section charts differ".into()));
    }
    Ok(ProjectedQZ {
        h: h.clone(),
        gamma: gamma.clone(),
        c: c.clone(),
    })
}

impl BaseField for ProjectedQZ {
    fn dim(&self) -> usize {
        self.h.chart.n + self.h.chart.k
    }

    fn k(&self) -> usize {
        self.h.chart.k
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let ch = self.h.chart;
        let (q, z) = self.gamma.split(x)?;
        let pt = self.gamma.eval(q, z)?;
        let g = self.h.grad_flat(&pt.to_flat())?;
        let cm = self.c.eval(q, z)?;
        Ok((0..ch.k)
            .map(|a| {
                let u: Vec<f64> = (0..ch.n).map(|i| g[ch.p_index(a, i)]).collect();
                let mut row = u.clone();
                for b in 0..ch.k {
                    let s: f64 = (0..ch.n).map(|j| pt.p[b][j] * u[j]).sum();
                    row.push(s + cm[a][b]);
                }
                row
            })
            .collect())
    }
}

/// Parameterised family of z-dependent sections with an optional inverse.
pub trait CompleteFamily: Send + Sync {
    fn chart(&self) -> ChartSpec;
    /// Number of parameters; the definition requires k * n.
    fn n_params(&self) -> usize;
    fn section(&self, lambda: &[f64]) -> Result<SectionZDep>;
    /// Phi^{-1}: point -> (q, lambda, z).
    fn inverse(&self, _pt: &DarbouxPoint) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        None
    }
    /// Gauge matrix to use for a member; `None` means the diagonal solve.
    fn gauge(&self, _lambda: &[f64], _mode: Mode) -> Option<GaugeMatrix> {
        None
    }
}

/// Failure of one parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedParam {
    pub lambda: Vec<f64>,
    pub residual: f64,
    pub message: Option<String>,
}

/// Aggregated result of checking a complete family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompleteReport {
    pub hj: HJReport,
    pub per_param: Vec<FailedParam>,
    pub failing: Vec<FailedParam>,
    /// max |Phi^{-1}(Phi(q, lambda, z)) - (q, lambda, z)|; `None` without an inverse.
    pub roundtrip: Option<f64>,
}

/// Check every family member on the base samples and the inverse round trip.
pub fn verify_complete(
    family: &dyn CompleteFamily,
    h: &ScalarField,
    mode: Mode,
    params: &[Vec<f64>],
    base: &[Vec<f64>],
    tol: f64,
) -> Result<CompleteReport> {
    let c = family.chart();
    if family.n_params() != c.k * c.n {
        return Err(Error::Precondition(format!(
            "complete family needs k*n = {} parameters, has {}",
            c.k * c.n,
            family.n_params()
        )));
    }
    if params.iter().any(|l| l.len() != family.n_params()) {
        return Err(Error::Shape("parameter point has wrong length".into()));
    }
    let mut per_param = Vec::with_capacity(params.len());
    let mut sup: f64 = 0.0;
    let mut worst: Vec<Offender> = Vec::new();
    let mut gauge_name = None;
    let mut rt: Option<f64> = None;
    for lam in params {
        let outcome = (|| -> Result<HJReport> {
            let g = family.section(lam)?;
            let cm = family
                .gauge(lam, mode)
                .unwrap_or_else(|| GaugeMatrix::diagonal(h, &g, mode));
            hj_zdep_residual(h, &g, &cm, mode, base)
        })();
        match outcome {
            Ok(r) => {
                sup = if r.sup_residual.is_nan() {
                    f64::NAN
                } else {
                    sup.max(r.sup_residual)
                };
                gauge_name = r.gauge.clone();
                worst.extend(r.worst.iter().cloned().map(|mut o| {
                    o.point.extend_from_slice(lam);
                    o
                }));
                per_param.push(FailedParam {
                    lambda: lam.clone(),
                    residual: r.sup_residual,
                    message: None,
                });
            }
            Err(e) => {
                sup = f64::INFINITY;
                per_param.push(FailedParam {
                    lambda: lam.clone(),
                    residual: f64::INFINITY,
                    message: Some(e.to_string()),
                });
            }
        }
        if let Ok(g) = family.section(lam) {
            for s in base {
                let (q, z) = g.split(s)?;
                let pt = g.eval(q, z)?;
                if let Some((q2, l2, z2)) = family.inverse(&pt) {
                    let err = q
                        .iter()
                        .zip(&q2)
                        .chain(lam.iter().zip(&l2))
                        .chain(z.iter().zip(&z2))
                        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    rt = Some(rt.unwrap_or(0.0).max(err));
                }
            }
        }
    }
    worst.sort_by(|a, b| b.residual.total_cmp(&a.residual));
    worst.truncate(OFFENDERS);
    let failing = per_param
        .iter()
        .filter(|p| !(p.residual <= tol))
        .cloned()
        .collect();
    Ok(CompleteReport {
        hj: HJReport {
            mode: HjMode::zdep(mode),
            sup_residual: sup,
            sample_count: params.len() * base.len(),
            worst,
            gauge: gauge_name,
        },
        per_param,
        failing,
        roundtrip: rt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helmert_rows_are_orthonormal_and_traceless() {
        for k in 2..5 {
            let b = helmert(k);
            for (i, u) in b.iter().enumerate() {
                assert!(u.iter().sum::<f64>().abs() < 1e-15);
                for (j, v) in b.iter().enumerate() {
                    let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                    assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn diagonal_solve_two_unknowns() {
        let t = ZDepTerms {
            h: 0.5,
            gamma_b: vec![0.0, 0.0],
            xi: vec![0.3],
            dz: vec![vec![vec![2.0, 0.0]], vec![vec![0.0, -2.0]]],
            p: vec![vec![0.0], vec![0.0]],
        };
        let c = solve_diagonal_from_terms(&t, Mode::Standard).unwrap();
        assert!((c[0][0] + c[1][1] + 0.5).abs() < 1e-15);
        assert!(zdep_pointwise(&t, &c)[0].abs() < 1e-15);
        let c = solve_diagonal_from_terms(&t, Mode::Evolution).unwrap();
        assert!((c[0][0] + c[1][1]).abs() < 1e-15);
        assert!(zdep_pointwise(&t, &c)[0].abs() < 1e-15);
    }

    #[test]
    fn diagonal_solve_without_z_dependence() {
        let mut t = ZDepTerms {
            h: 0.0,
            gamma_b: vec![0.0, 0.0],
            xi: vec![0.0],
            dz: vec![vec![vec![0.0, 0.0]], vec![vec![0.0, 0.0]]],
            p: vec![vec![0.0], vec![0.0]],
        };
        assert_eq!(
            solve_diagonal_from_terms(&t, Mode::Standard).unwrap(),
            vec![vec![0.0; 2]; 2]
        );
        t.xi = vec![1.0];
        assert!(matches!(
            solve_diagonal_from_terms(&t, Mode::Evolution),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn k1_entry_is_minus_h() {
        let t = ZDepTerms {
            h: 0.7,
            gamma_b: vec![0.0],
            xi: vec![0.1],
            dz: vec![vec![vec![1.0]]],
            p: vec![vec![0.0]],
        };
        assert_eq!(
            solve_diagonal_from_terms(&t, Mode::Standard).unwrap(),
            vec![vec![-0.7]]
        );
    }
}
