//! Damped membrane u_tt - c^2 (u_xx + u_yy) + lambda u_t + kappa u = 0 on
//! n = 1, k = 3 with h = (p_t^2 - (p_x^2 + p_y^2)/c^2)/2 + kappa u^2/2 + lambda z^t.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};
use crate::grid::ClosedMap;
use crate::sections::ZIndependent;

struct Ham {
    c2: f64,
    kappa: f64,
    lambda: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let (u, pt, px, py) = (x.q(0), x.p(0, 0), x.p(1, 0), x.p(2, 0));
        (pt * pt - (px * px + py * py) / self.c2) * 0.5
            + u * u * (self.kappa * 0.5)
            + x.z(0) * self.lambda
    }
}

/// Plane-wave section: gamma_t = w u, gamma_x = -c^2 m u, gamma_y = -c^2 l u.
struct PlaneWave {
    w: f64,
    m: f64,
    l: f64,
    c2: f64,
    c0: f64,
}

impl ZIndependent for PlaneWave {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        3
    }
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let h = q[0] * q[0] * 0.5;
        vec![
            h * self.w + self.c0,
            h * (-self.c2 * self.m),
            h * (-self.c2 * self.l),
        ]
    }
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        vec![
            q[0] * self.w,
            q[0] * (-self.c2 * self.m),
            q[0] * (-self.c2 * self.l),
        ]
    }
}

struct PlaneWaveSolution {
    sec: PlaneWave,
    u0: f64,
}

impl ClosedMap for PlaneWaveSolution {
    fn k(&self) -> usize {
        3
    }
    fn dim(&self) -> usize {
        7
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let u = (t[0] * self.sec.w + t[1] * self.sec.m + t[2] * self.sec.l).exp() * self.u0;
        let mut x = vec![u];
        x.extend(self.sec.momenta(&[u]));
        x.extend(self.sec.potentials(&[u]));
        x
    }
}

/// u = u0 e^{st} cos(ax) cos(by) with z^t = z^y = 0 and z^x integrated in x.
struct Separable {
    u0: f64,
    s: f64,
    a: f64,
    b: f64,
    c2: f64,
    kappa: f64,
    mode: Mode,
}

impl Separable {
    /// Integral of cos^2(w x) (sign +1) or sin^2(w x) (sign -1) from 0 to x.
    fn int_sq<S: Scalar>(x: S, w: f64, sign: f64) -> S {
        if w == 0.0 {
            return if sign > 0.0 { x } else { S::zero() };
        }
        x * 0.5 + (x * (2.0 * w)).sin() * (sign / (4.0 * w))
    }
}

impl ClosedMap for Separable {
    fn k(&self) -> usize {
        3
    }
    fn dim(&self) -> usize {
        7
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let (s, a, b, c2) = (self.s, self.a, self.b, self.c2);
        let e = (t[0] * s).exp() * self.u0;
        let (cx, sx) = ((t[1] * a).cos(), (t[1] * a).sin());
        let (cy, sy) = ((t[2] * b).cos(), (t[2] * b).sin());
        let u = e * cx * cy;
        let (ux, uy) = (e * sx * cy * (-a), e * cx * sy * (-b));
        let ee = e * e;
        let ic = Self::int_sq(t[1], a, 1.0);
        let is = Self::int_sq(t[1], a, -1.0);
        // coefficient of u^2, u_x^2 and u_y^2 in the entropy-like z balance
        let (cu, cd) = match self.mode {
            Mode::Standard => (0.5 * (s * s - self.kappa), 0.5 * c2),
            Mode::Evolution => (s * s, c2),
        };
        let zx =
            ee * (cy * cy * ic * cu - cy * cy * is * (cd * a * a) - sy * sy * ic * (cd * b * b));
        vec![u, u * s, ux * (-c2), uy * (-c2), S::zero(), zx, S::zero()]
    }
}

/// Decay rates s with s^2 + lambda s + kappa + c^2 (a^2 + b^2) = 0, larger first.
pub fn membrane_rates(c: f64, lambda: f64, kappa: f64, a: f64, b: f64) -> Option<(f64, f64)> {
    let disc = lambda * lambda - 4.0 * (kappa + c * c * (a * a + b * b));
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some((0.5 * (-lambda + r), 0.5 * (-lambda - r)))
}

pub(super) struct Membrane;

impl Membrane {
    fn plane(p: &Params) -> Result<PlaneWave> {
        let c = nonzero(p, "c")?;
        Ok(PlaneWave {
            w: p["w"],
            m: p["m"],
            l: p["l"],
            c2: c * c,
            c0: p["C0"],
        })
    }
}

impl ExampleImpl for Membrane {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let c = nonzero(p, "c")?;
        let h = Ham {
            c2: c * c,
            kappa: p["kappa"],
            lambda: p["lambda"],
        };
        Ok(ScalarField::new(ChartSpec::new(1, 3)?, "membrane", h)
            .with_params(p.iter().map(|(k, v)| (k.clone(), *v)))
            .with_affine_z(vec![p["lambda"], 0.0, 0.0]))
    }

    fn section(&self, key: &str, p: &Params) -> Result<Built> {
        match key {
            "plane-wave" => Ok(Built::ZInd(SectionZInd::new(
                "membrane-plane-wave",
                Self::plane(p)?,
            )?)),
            _ => Err(unknown_section(key)),
        }
    }

    fn sample_box(&self, _key: &str, _p: &Params) -> SampleBox {
        SampleBox::cube(1, -2.0, 2.0)
    }

    fn solution(&self, key: &str, p: &Params, mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        match key {
            "plane-wave" => Ok(Arc::new(PlaneWaveSolution {
                sec: Self::plane(p)?,
                u0: p["u0"],
            })),
            "separable" => {
                let c = nonzero(p, "c")?;
                Ok(Arc::new(Separable {
                    u0: p["u0"],
                    s: p["s"] + p["ds"],
                    a: p["a"],
                    b: p["b"],
                    c2: c * c,
                    kappa: p["kappa"],
                    mode,
                }))
            }
            _ => Err(unknown_solution(key)),
        }
    }

    fn default_grid(&self, _key: &str) -> GridSpec {
        GridSpec::uniform(3, 0.0, 0.0125, 12).expect("static grid")
    }

    fn pde(&self, p: &Params, x: &[f64], du: &[f64], d2u: &[Vec<f64>]) -> Option<f64> {
        let c = p["c"];
        Some(d2u[0][0] - c * c * (d2u[1][1] + d2u[2][2]) + p["lambda"] * du[0] + p["kappa"] * x[0])
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    let (c, lambda, kappa, a, b) = (1.0, 4.0, 2.0, 0.5, 0.5);
    let s = membrane_rates(c, lambda, kappa, a, b)
        .expect("real rates")
        .0;
    // plane wave along x: w^2 + lambda w + kappa - c^2 m^2 = 0
    let (m, l) = (1.0, 0.0);
    let w = 0.5 * (-lambda + (lambda * lambda - 4.0 * (kappa - c * c * (m * m + l * l))).sqrt());
    ExampleSystem {
        key: "membrane",
        title: "Damped membrane (k = 3)",
        chart: ChartSpec::new(1, 3).expect("chart"),
        defaults: params(&[
            ("c", c),
            ("lambda", lambda),
            ("kappa", kappa),
            ("a", a),
            ("b", b),
            ("s", s),
            ("ds", 0.0),
            ("u0", 1.0),
            ("m", m),
            ("l", l),
            ("w", w),
            ("C0", 0.0),
        ]),
        sections: vec![SectionInfo {
            key: "plane-wave",
            kind: SectionKind::ZInd,
            description:
                "gamma = (w u, -c^2 m u, -c^2 l u) with w^2 + lambda w + kappa = c^2 (m^2 + l^2)",
            family_params: &[],
        }],
        solutions: vec![
            SolutionInfo {
                key: "separable",
                description: "u = u0 e^{st} cos(ax) cos(by)",
                section: None,
                modes: &[Standard, Evolution],
            },
            SolutionInfo {
                key: "plane-wave",
                description: "u = u0 exp(w t + m x + l y) lifted through plane-wave",
                section: Some("plane-wave"),
                modes: &[Standard, Evolution],
            },
        ],
        cases: vec![
            case(
                "plane-wave-classical",
                CheckHj,
                Standard,
                Some("plane-wave"),
                None,
            ),
            case(
                "plane-wave-evolution",
                CheckHj,
                Evolution,
                Some("plane-wave"),
                None,
            ),
            case(
                "plane-wave-wrong-rate",
                CheckHj,
                Standard,
                Some("plane-wave"),
                None,
            )
            .set("w", 0.0)
            .fails(1),
            case(
                "separable-standard",
                Solution,
                Standard,
                None,
                Some("separable"),
            ),
            case(
                "separable-evolution",
                Solution,
                Evolution,
                None,
                Some("separable"),
            ),
            case("wrong-s", Solution, Standard, None, Some("separable"))
                .set("ds", 0.1)
                .fails(1),
            case(
                "plane-wave-end-to-end",
                Simulate,
                Standard,
                Some("plane-wave"),
                Some("plane-wave"),
            ),
        ],
        has_pde: true,
        imp: Arc::new(Membrane),
    }
}
