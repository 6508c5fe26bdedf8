//! Covariant EIT-type thermodynamic model on k = 2 with
//! q = (xi, beta_1, beta_2, V), p_i^mu = (N^mu, -T^{lambda mu}, P^mu), z^mu = S~^mu
//! and h = U + Phi, U = omega xi^2 / 2,
//! Phi = sum N^2 / 2 + tau sum T^2 / 2 + sum P^2 / 2.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};
use crate::grid::ClosedMap;

const K: usize = 2;
const N_FLUX: [f64; K] = [0.3, -0.2];
const T_FLUX: [[f64; K]; K] = [[0.1, 0.2], [-0.1, 0.4]];
const P_FLUX: [f64; K] = [0.5, 0.1];
const XI0: f64 = 0.2;
const BETA0: [f64; K] = [1.0, 0.5];
const V0: f64 = 1.0;

struct Ham {
    k: usize,
    omega: f64,
    tau: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let k = self.k;
        let xi = x.q(0);
        let mut phi = S::zero();
        for mu in 0..k {
            let n = x.p(mu, 0);
            let p = x.p(mu, k + 1);
            phi += (n * n + p * p) * 0.5;
            for l in 0..k {
                let t = x.p(mu, 1 + l);
                phi += t * t * (self.tau * 0.5);
            }
        }
        xi * xi * (self.omega * 0.5) + phi
    }
}

/// Thermodynamic fields at the nodes of a k-dimensional grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermoFields {
    pub grid: GridSpec,
    pub xi: Vec<f64>,
    /// beta[node][lambda]
    pub beta: Vec<Vec<f64>>,
    pub v: Vec<f64>,
    /// n[node][mu]
    pub n: Vec<Vec<f64>>,
    /// t[node][lambda][mu]
    pub t: Vec<Vec<Vec<f64>>>,
    pub p: Vec<Vec<f64>>,
    /// s[node][mu] holds S~^mu.
    pub s: Vec<Vec<f64>>,
}

impl ThermoFields {
    pub fn k(&self) -> usize {
        self.grid.k()
    }

    fn check(&self) -> Result<()> {
        let (len, k) = (self.grid.len(), self.k());
        let ok = self.xi.len() == len
            && self.v.len() == len
            && [&self.beta, &self.n, &self.p, &self.s]
                .iter()
                .all(|a| a.len() == len && a.iter().all(|r| r.len() == k))
            && self.t.len() == len
            && self
                .t
                .iter()
                .all(|m| m.len() == k && m.iter().all(|r| r.len() == k));
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(
                "thermodynamic field arrays do not match the grid".into(),
            ))
        }
    }

    /// Darboux coordinates of one node.
    pub fn darboux(&self, node: usize) -> Vec<f64> {
        let k = self.k();
        let chart = ChartSpec { n: k + 2, k };
        let mut x = vec![0.0; chart.dim()];
        x[chart.q_index(0)] = self.xi[node];
        for l in 0..k {
            x[chart.q_index(1 + l)] = self.beta[node][l];
        }
        x[chart.q_index(k + 1)] = self.v[node];
        for mu in 0..k {
            x[chart.p_index(mu, 0)] = self.n[node][mu];
            for l in 0..k {
                x[chart.p_index(mu, 1 + l)] = -self.t[node][l][mu];
            }
            x[chart.p_index(mu, k + 1)] = self.p[node][mu];
            x[chart.z_index(mu)] = self.s[node][mu];
        }
        x
    }

    /// Inverse of [`ThermoFields::darboux`] applied to a phase-space map.
    pub fn from_map(psi: &SolutionMap) -> Result<ThermoFields> {
        let k = psi.grid.k();
        let chart = ChartSpec { n: k + 2, k };
        if psi.chart != Some(chart) {
            return Err(Error::Shape("map is not on the thermodynamic chart".into()));
        }
        let vals = &psi.values;
        Ok(ThermoFields {
            grid: psi.grid.clone(),
            xi: vals.iter().map(|x| x[chart.q_index(0)]).collect(),
            beta: vals
                .iter()
                .map(|x| (0..k).map(|l| x[chart.q_index(1 + l)]).collect())
                .collect(),
            v: vals.iter().map(|x| x[chart.q_index(k + 1)]).collect(),
            n: vals
                .iter()
                .map(|x| (0..k).map(|m| x[chart.p_index(m, 0)]).collect())
                .collect(),
            t: vals
                .iter()
                .map(|x| {
                    (0..k)
                        .map(|l| (0..k).map(|m| -x[chart.p_index(m, 1 + l)]).collect())
                        .collect()
                })
                .collect(),
            p: vals
                .iter()
                .map(|x| (0..k).map(|m| x[chart.p_index(m, k + 1)]).collect())
                .collect(),
            s: vals
                .iter()
                .map(|x| (0..k).map(|m| x[chart.z_index(m)]).collect())
                .collect(),
        })
    }
}

/// Per-node residual blocks of the thermodynamic field equations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThermoResiduals {
    /// max |d q^i / d x^mu - dh/dp_i^mu| (xi, beta and V relations).
    pub constitutive: Vec<f64>,
    /// max over i of the divergence balance of N, T and P.
    pub balance: Vec<f64>,
    /// Signed entropy residual with the -h term.
    pub entropy_standard: Vec<f64>,
    /// Signed entropy residual without it.
    pub entropy_evolution: Vec<f64>,
}

impl ThermoResiduals {
    pub fn max_constitutive(&self) -> f64 {
        self.constitutive.iter().fold(0.0, |a, &b| a.max(b))
    }
    pub fn max_balance(&self) -> f64 {
        self.balance.iter().fold(0.0, |a, &b| a.max(b))
    }
    pub fn max_entropy(&self, mode: Mode) -> f64 {
        let v = match mode {
            Mode::Standard => &self.entropy_standard,
            Mode::Evolution => &self.entropy_evolution,
        };
        v.iter().fold(0.0, |a, &b| a.max(b.abs()))
    }
}

/// Fourth-order difference residuals of the thermodynamic balance laws for
/// `fields` under the Hamiltonian `h` on the chart n = k + 2.
pub fn thermo_balance_residual(fields: &ThermoFields, h: &ScalarField) -> Result<ThermoResiduals> {
    fields.check()?;
    let k = fields.k();
    let chart = ChartSpec { n: k + 2, k };
    if h.chart != chart {
        return Err(Error::Shape(
            "Hamiltonian chart does not match the field grid".into(),
        ));
    }
    let grid = &fields.grid;
    let values: Vec<Vec<f64>> = (0..grid.len()).map(|l| fields.darboux(l)).collect();
    let n = chart.n;
    let mut out = ThermoResiduals {
        constitutive: Vec::with_capacity(grid.len()),
        balance: Vec::with_capacity(grid.len()),
        entropy_standard: Vec::with_capacity(grid.len()),
        entropy_evolution: Vec::with_capacity(grid.len()),
    };
    for (l, x) in values.iter().enumerate() {
        let idx = grid.multi_index(l);
        let d: Vec<Vec<f64>> = (0..k)
            .map(|b| fd_derivative(grid, &values, &idx, b, FdOrder::Fourth))
            .collect();
        let g = h.grad_flat(x)?;
        let hv = h.value_flat(x)?;
        let mut cons: f64 = 0.0;
        for mu in 0..k {
            for i in 0..n {
                cons = cons.max((d[mu][chart.q_index(i)] - g[chart.p_index(mu, i)]).abs());
            }
        }
        let mut bal: f64 = 0.0;
        for i in 0..n {
            let div: f64 = (0..k).map(|mu| d[mu][chart.p_index(mu, i)]).sum();
            bal = bal.max((div + g[chart.q_index(i)]).abs());
        }
        let div_s: f64 = (0..k).map(|mu| d[mu][chart.z_index(mu)]).sum();
        let mut pdh = 0.0;
        for mu in 0..k {
            for i in 0..n {
                pdh += x[chart.p_index(mu, i)] * g[chart.p_index(mu, i)];
            }
        }
        out.constitutive.push(cons);
        out.balance.push(bal);
        out.entropy_standard.push(div_s - (pdh - hv));
        out.entropy_evolution.push(div_s - pdh);
    }
    Ok(out)
}

/// Constant fluxes with intensives linear in x chosen to satisfy the
/// constitutive relations when U = 0.
struct Linear {
    tau: f64,
    scale: f64,
    slope_error: f64,
    mode: Mode,
}

impl ClosedMap for Linear {
    fn k(&self) -> usize {
        K
    }
    fn dim(&self) -> usize {
        ChartSpec { n: K + 2, k: K }.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let chart = ChartSpec { n: K + 2, k: K };
        let f = self.scale;
        let mut out = vec![S::zero(); chart.dim()];
        let mut xi = S::cst(XI0) + x[0] * self.slope_error;
        let mut v = S::cst(V0);
        let mut phi = 0.0;
        for mu in 0..K {
            xi += x[mu] * (f * N_FLUX[mu]);
            v += x[mu] * (f * P_FLUX[mu]);
            phi += 0.5 * f * f * (N_FLUX[mu].powi(2) + P_FLUX[mu].powi(2));
            out[chart.p_index(mu, 0)] = S::cst(f * N_FLUX[mu]);
            out[chart.p_index(mu, K + 1)] = S::cst(f * P_FLUX[mu]);
        }
        for l in 0..K {
            let mut beta = S::cst(BETA0[l]);
            for mu in 0..K {
                let t = f * T_FLUX[l][mu];
                beta -= x[mu] * (self.tau * t);
                phi += 0.5 * self.tau * t * t;
                out[chart.p_index(mu, 1 + l)] = S::cst(-t);
            }
            out[chart.q_index(1 + l)] = beta;
        }
        out[chart.q_index(0)] = xi;
        out[chart.q_index(K + 1)] = v;
        let rate = match self.mode {
            Mode::Standard => phi,
            Mode::Evolution => 2.0 * phi,
        };
        out[chart.z_index(0)] = x[0] * rate;
        out
    }
}

pub(super) struct Thermo;

impl ExampleImpl for Thermo {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let h = Ham {
            k: K,
            omega: p["omega"],
            tau: p["tau"],
        };
        Ok(ScalarField::new(ChartSpec::new(K + 2, K)?, "thermo-eit", h)
            .with_params(p.iter().map(|(k, v)| (k.clone(), *v)))
            .with_affine_z(vec![0.0; K]))
    }

    fn sample_box(&self, _key: &str, _p: &Params) -> SampleBox {
        SampleBox::cube(K + 2, -1.0, 1.0)
    }

    fn solution(&self, key: &str, p: &Params, mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        match key {
            "balance-linear" => Ok(Arc::new(Linear {
                tau: p["tau"],
                scale: p["flux_scale"],
                slope_error: p["slope_error"],
                mode,
            })),
            _ => Err(unknown_solution(key)),
        }
    }

    fn default_grid(&self, _key: &str) -> GridSpec {
        grid2(0.0, 0.1, 11)
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    ExampleSystem {
        key: "thermo-eit",
        title: "Covariant EIT-type thermodynamic model (k = 2)",
        chart: ChartSpec::new(K + 2, K).expect("chart"),
        defaults: params(&[
            ("omega", 0.0),
            ("tau", 2.0),
            ("flux_scale", 1.0),
            ("slope_error", 0.0),
        ]),
        sections: Vec::new(),
        solutions: vec![SolutionInfo {
            key: "balance-linear",
            description: "constant fluxes, intensives linear in x, S~^1 growing linearly",
            section: None,
            modes: &[Standard, Evolution],
        }],
        cases: vec![
            case(
                "balance-linear-standard",
                Solution,
                Standard,
                None,
                Some("balance-linear"),
            ),
            case(
                "balance-linear-evolution",
                Solution,
                Evolution,
                None,
                Some("balance-linear"),
            ),
            case(
                "constant-intensives",
                Solution,
                Standard,
                None,
                Some("balance-linear"),
            )
            .set("flux_scale", 0.0),
            case(
                "constitutive-mismatch",
                Solution,
                Standard,
                None,
                Some("balance-linear"),
            )
            .set("slope_error", 0.25)
            .fails(1),
            case(
                "nonzero-potential",
                Solution,
                Standard,
                None,
                Some("balance-linear"),
            )
            .set("omega", 1.0)
            .fails(1),
        ],
        has_pde: false,
        imp: Arc::new(Thermo),
    }
}
