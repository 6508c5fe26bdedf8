//! Telegrapher variant with dissipation quadratic in z^t:
//! h = (p_t^2 - p_x^2 / kappa)/2 + epsilon u^2 / 2 + lambda (z^t)^2 / 2.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};
use crate::grid::ClosedMap;

struct Ham {
    kappa: f64,
    lambda: f64,
    eps: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let (u, pt, px, zt) = (x.q(0), x.p(0, 0), x.p(1, 0), x.z(0));
        (pt * pt - px * px / self.kappa) * 0.5
            + u * u * (self.eps * 0.5)
            + zt * zt * (self.lambda * 0.5)
    }
}

/// u = u0 exp(s t + m x) with constant z^t and z^x = A u^2 / (2m) - B x.
struct ExponentialZ {
    u0: f64,
    s: f64,
    m: f64,
    kappa: f64,
    zt: f64,
    a: f64,
    b: f64,
}

impl ClosedMap for ExponentialZ {
    fn k(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        5
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let u = (t[0] * self.s + t[1] * self.m).exp() * self.u0;
        vec![
            u,
            u * self.s,
            u * (-self.kappa * self.m),
            S::cst(self.zt),
            u * u * (self.a / (2.0 * self.m)) - t[1] * self.b,
        ]
    }
}

pub(super) struct QuadraticZ;

impl ExampleImpl for QuadraticZ {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let h = Ham {
            kappa: positive(p, "kappa")?,
            lambda: p["lambda"],
            eps: p["epsilon"],
        };
        Ok(
            ScalarField::new(ChartSpec::new(1, 2)?, "telegrapher-quadratic-z", h)
                .with_params(p.iter().map(|(k, v)| (k.clone(), *v))),
        )
    }

    fn sample_box(&self, _key: &str, _p: &Params) -> SampleBox {
        SampleBox::cube(1, -1.0, 1.0)
    }

    fn solution(&self, key: &str, p: &Params, mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        if key != "exponential-z" {
            return Err(unknown_solution(key));
        }
        let kappa = positive(p, "kappa")?;
        let lambda = nonzero(p, "lambda")?;
        let s = nonzero(p, "s")?;
        let m = nonzero(p, "m")?;
        let eps = p["epsilon"];
        let zt = -(s * s - kappa * m * m + eps) / (lambda * s) + p["dz"];
        let (a, b) = match mode {
            Mode::Standard => (0.5 * (s * s - kappa * m * m - eps), 0.5 * lambda * zt * zt),
            Mode::Evolution => (s * s - kappa * m * m, 0.0),
        };
        Ok(Arc::new(ExponentialZ {
            u0: p["u0"],
            s,
            m,
            kappa,
            zt,
            a,
            b,
        }))
    }

    fn default_grid(&self, _key: &str) -> GridSpec {
        grid2(0.0, 0.02, 50)
    }

    fn pde(&self, p: &Params, x: &[f64], du: &[f64], d2u: &[Vec<f64>]) -> Option<f64> {
        let zt = x[3];
        Some(d2u[0][0] - p["kappa"] * d2u[1][1] + p["lambda"] * zt * du[0] + p["epsilon"] * x[0])
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    ExampleSystem {
        key: "telegrapher-quadratic-z",
        title: "Telegrapher equation with z-quadratic dissipation",
        chart: ChartSpec::new(1, 2).expect("chart"),
        defaults: params(&[
            ("kappa", 1.0),
            ("lambda", 1.0),
            ("epsilon", 0.5),
            ("s", -0.5),
            ("m", 0.3),
            ("u0", 1.0),
            ("dz", 0.0),
        ]),
        sections: Vec::new(),
        solutions: vec![SolutionInfo {
            key: "exponential-z",
            description:
                "u = u0 exp(s t + m x), constant z^t = -(s^2 - kappa m^2 + epsilon)/(lambda s)",
            section: None,
            modes: &[Standard, Evolution],
        }],
        cases: vec![
            case(
                "exponential-z-standard",
                Solution,
                Standard,
                None,
                Some("exponential-z"),
            ),
            case(
                "exponential-z-evolution",
                Solution,
                Evolution,
                None,
                Some("exponential-z"),
            ),
            case(
                "perturbed-zt",
                Solution,
                Standard,
                None,
                Some("exponential-z"),
            )
            .set("dz", 0.1)
            .fails(1),
        ],
        has_pde: true,
        imp: Arc::new(QuadraticZ),
    }
}
