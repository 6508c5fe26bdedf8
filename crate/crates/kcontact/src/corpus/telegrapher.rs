//! Telegrapher equation u_tt - kappa u_xx + lambda u_t + epsilon u = 0 on
//! n = 1, k = 2 with h = (p_t^2 - p_x^2 / kappa)/2 + epsilon u^2 / 2 + lambda z^t.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};
use crate::grid::ClosedMap;
use crate::sections::ZIndependent;

struct Ham {
    kappa: f64,
    lambda: f64,
    eps: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let (u, pt, px) = (x.q(0), x.p(0, 0), x.p(1, 0));
        (pt * pt - px * px / self.kappa) * 0.5 + u * u * (self.eps * 0.5) + x.z(0) * self.lambda
    }
}

/// gamma_t = c a u, gamma_x = a u with potentials c a u^2/2 + c C1 + C0, a u^2/2 + C1.
struct Ansatz {
    a: f64,
    c: f64,
    c0: f64,
    c1: f64,
}

impl ZIndependent for Ansatz {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let u2 = q[0] * q[0];
        vec![
            u2 * (self.c * self.a * 0.5) + (self.c * self.c1 + self.c0),
            u2 * (self.a * 0.5) + self.c1,
        ]
    }
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        vec![q[0] * (self.c * self.a), q[0] * self.a]
    }
}

/// u = u0 exp(a (c t - x / kappa)) lifted through [`Ansatz`].
struct Exponential {
    u0: f64,
    a: f64,
    c: f64,
    kappa: f64,
    c0: f64,
    c1: f64,
}

impl ClosedMap for Exponential {
    fn k(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        5
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let u = ((t[0] * self.c - t[1] / self.kappa) * self.a).exp() * self.u0;
        let u2 = u * u;
        vec![
            u,
            u * (self.c * self.a),
            u * self.a,
            u2 * (self.c * self.a * 0.5) + (self.c * self.c1 + self.c0),
            u2 * (self.a * 0.5) + self.c1,
        ]
    }
}

/// Roots of (c^2 - 1/kappa) a^2 + lambda c a + epsilon = 0, smaller first.
pub fn telegrapher_roots(kappa: f64, lambda: f64, epsilon: f64, c: f64) -> Option<(f64, f64)> {
    let qa = c * c - 1.0 / kappa;
    let qb = lambda * c;
    if qa.abs() < 1e-14 {
        if qb == 0.0 {
            return None;
        }
        let r = -epsilon / qb;
        return Some((r, r));
    }
    let disc = qb * qb - 4.0 * qa * epsilon;
    if disc < 0.0 {
        return None;
    }
    let sg = if qb >= 0.0 { 1.0 } else { -1.0 };
    let s = -0.5 * (qb + sg * disc.sqrt());
    let (r1, r2) = if s == 0.0 {
        (0.0, -qb / qa)
    } else {
        (s / qa, epsilon / s)
    };
    Some((r1.min(r2), r1.max(r2)))
}

/// Line constants (R, L, G, C) to (kappa, lambda, epsilon) for
/// u_tt - u_xx/(LC) + (R/L + G/C) u_t + RG/(LC) u = 0.
pub fn telegrapher_params_from_line(r: f64, l: f64, g: f64, c: f64) -> Result<(f64, f64, f64)> {
    if !(l > 0.0 && c > 0.0) {
        return Err(Error::Precondition(
            "inductance and capacitance must be positive".into(),
        ));
    }
    if !(r >= 0.0 && g >= 0.0) {
        return Err(Error::Precondition(
            "resistance and conductance must be non-negative".into(),
        ));
    }
    Ok((1.0 / (l * c), r / l + g / c, r * g / (l * c)))
}

pub(super) struct Telegrapher;

impl Telegrapher {
    fn xi(p: &Params) -> Arc<super::XiFn> {
        let (kappa, lambda, eps, a) = (p["kappa"], p["lambda"], p["epsilon"], p["a"]);
        Arc::new(move |u, z, lam| {
            let gt = a * z[0] - lambda * u + lam[0];
            let gx = -a * z[1] + lam[1];
            eps * u + a * (gt * gt + gx * gx / kappa)
        })
    }

    fn family_of(p: &Params, h: &ScalarField) -> Result<AffineFamily> {
        Ok(AffineFamily {
            name: "telegrapher-zdep-family",
            a: nonzero(p, "a")?,
            drift: -p["lambda"],
            h: h.clone(),
            xi: Self::xi(p),
        })
    }
}

impl ExampleImpl for Telegrapher {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let kappa = positive(p, "kappa")?;
        let chart = ChartSpec::new(1, 2)?;
        let h = Ham {
            kappa,
            lambda: p["lambda"],
            eps: p["epsilon"],
        };
        Ok(ScalarField::new(chart, "telegrapher", h)
            .with_params(p.iter().map(|(k, v)| (k.clone(), *v)))
            .with_affine_z(vec![p["lambda"], 0.0]))
    }

    fn section(&self, key: &str, p: &Params) -> Result<Built> {
        match key {
            "ansatz-linear" => Ok(Built::ZInd(SectionZInd::new(
                "telegrapher-ansatz-linear",
                Ansatz {
                    a: p["a"],
                    c: p["c"],
                    c0: p["C0"],
                    c1: p["C1"],
                },
            )?)),
            "zdep-family" => {
                let h = self.hamiltonian(p)?;
                Ok(Built::ZDep(
                    Self::family_of(p, &h)?.member(&[p["mu"], p["nu"]])?,
                ))
            }
            "zdep-constant" => Ok(Built::ZDep(SectionZDep::new(
                "telegrapher-zdep-constant",
                ConstantMomenta {
                    n: 1,
                    vals: vec![p["mu"], p["nu"]],
                },
            )?)),
            _ => Err(unknown_section(key)),
        }
    }

    fn explicit_gauge(
        &self,
        key: &str,
        p: &Params,
        h: &ScalarField,
        which: Mode,
    ) -> Option<GaugeMatrix> {
        if key != "zdep-family" {
            return None;
        }
        Self::family_of(p, h)
            .ok()?
            .explicit_gauge(&[p["mu"], p["nu"]], which)
            .ok()
    }

    fn family(
        &self,
        key: &str,
        p: &Params,
        h: &ScalarField,
    ) -> Result<Option<Box<dyn CompleteFamily>>> {
        match key {
            "zdep-family" => Ok(Some(Box::new(Self::family_of(p, h)?))),
            _ => Ok(None),
        }
    }

    fn sample_box(&self, key: &str, _p: &Params) -> SampleBox {
        match key {
            "ansatz-linear" => SampleBox::cube(1, 0.5, 2.0),
            _ => SampleBox::cube(3, -1.0, 1.0),
        }
    }

    fn solution(&self, key: &str, p: &Params, _mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        match key {
            "exponential" => {
                let kappa = positive(p, "kappa")?;
                let (a, c, lambda, eps) = (p["a"], p["c"], p["lambda"], p["epsilon"]);
                let quad = (c * c - 1.0 / kappa) * a * a + lambda * c * a + eps;
                let scale =
                    1.0 + (c * c + 1.0 / kappa) * a * a + (lambda * c * a).abs() + eps.abs();
                if quad.abs() > 1e-12 * scale {
                    return Err(Error::Precondition(format!(
                        "a = {a} is not a root of (c^2 - 1/kappa) a^2 + lambda c a + epsilon (defect {quad:e})"
                    )));
                }
                Ok(Arc::new(Exponential {
                    u0: p["u0"],
                    a,
                    c,
                    kappa,
                    c0: p["C0"],
                    c1: p["C1"],
                }))
            }
            _ => Err(unknown_solution(key)),
        }
    }

    fn default_grid(&self, _key: &str) -> GridSpec {
        grid2(0.0, 0.01, 50)
    }

    fn pde(&self, p: &Params, x: &[f64], du: &[f64], d2u: &[Vec<f64>]) -> Option<f64> {
        Some(d2u[0][0] - p["kappa"] * d2u[1][1] + p["lambda"] * du[0] + p["epsilon"] * x[0])
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    let cases = vec![
        case(
            "classical-valid-root",
            CheckHj,
            Standard,
            Some("ansatz-linear"),
            None,
        ),
        case(
            "evolution-valid-root",
            CheckHj,
            Evolution,
            Some("ansatz-linear"),
            None,
        ),
        case(
            "wrong-root-classical",
            CheckHj,
            Standard,
            Some("ansatz-linear"),
            None,
        )
        .set("a", 2.0 / 3.0)
        .fails(1),
        case(
            "wrong-root-evolution",
            CheckHj,
            Evolution,
            Some("ansatz-linear"),
            None,
        )
        .set("a", 2.0 / 3.0)
        .fails(1),
        case(
            "broken-constant-classical",
            CheckHj,
            Standard,
            Some("ansatz-linear"),
            None,
        )
        .set("C0", 1.0)
        .fails(1),
        case(
            "broken-constant-evolution",
            CheckHj,
            Evolution,
            Some("ansatz-linear"),
            None,
        )
        .set("C0", 1.0),
        case(
            "zdep-family-standard",
            CheckHj,
            Standard,
            Some("zdep-family"),
            None,
        ),
        case(
            "zdep-family-evolution",
            CheckHj,
            Evolution,
            Some("zdep-family"),
            None,
        ),
        case(
            "zdep-diagonal-gauge",
            CheckHj,
            Standard,
            Some("zdep-family"),
            None,
        )
        .gauge("diagonal"),
        case(
            "zdep-constant-no-gauge",
            CheckHj,
            Standard,
            Some("zdep-constant"),
            None,
        )
        .gauge("diagonal")
        .fails(3),
        case(
            "standard-gauge-in-evolution",
            CheckHj,
            Evolution,
            Some("zdep-family"),
            None,
        )
        .gauge("explicit-standard")
        .fails(3),
        case(
            "exponential-end-to-end",
            Simulate,
            Standard,
            Some("ansatz-linear"),
            Some("exponential"),
        ),
        case(
            "exponential-end-to-end-evolution",
            Simulate,
            Evolution,
            Some("ansatz-linear"),
            Some("exponential"),
        ),
        case(
            "exponential-solution",
            Solution,
            Standard,
            None,
            Some("exponential"),
        ),
    ];
    ExampleSystem {
        key: "telegrapher",
        title: "Telegrapher equation",
        chart: ChartSpec::new(1, 2).expect("chart"),
        defaults: params(&[
            ("kappa", 1.0),
            ("lambda", 1.0),
            ("epsilon", 0.0),
            ("c", 2.0),
            ("a", -2.0 / 3.0),
            ("C0", 0.0),
            ("C1", 0.0),
            ("u0", 1.0),
            ("mu", 0.5),
            ("nu", 0.25),
        ]),
        sections: vec![
            SectionInfo {
                key: "ansatz-linear",
                kind: SectionKind::ZInd,
                description:
                    "gamma_t = c a u, gamma_x = a u with a a root of the dispersion quadratic",
                family_params: &[],
            },
            SectionInfo {
                key: "zdep-family",
                kind: SectionKind::Family,
                description: "gamma = (u, a z^t - lambda u + mu, -a z^x + nu, z)",
                family_params: &["mu", "nu"],
            },
            SectionInfo {
                key: "zdep-constant",
                kind: SectionKind::ZDep,
                description: "constant momenta (mu, nu); admits no gauge matrix",
                family_params: &[],
            },
        ],
        solutions: vec![SolutionInfo {
            key: "exponential",
            description: "u = u0 exp(a (c t - x / kappa)) lifted through ansatz-linear",
            section: Some("ansatz-linear"),
            modes: &[Standard, Evolution],
        }],
        cases,
        has_pde: true,
        imp: Arc::new(Telegrapher),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_default_quadratic() {
        let (r1, r2) = telegrapher_roots(1.0, 1.0, 0.0, 2.0).unwrap();
        assert!((r1 + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r2, 0.0);
    }

    #[test]
    fn roots_satisfy_quadratic() {
        let (k, l, e, c) = (0.7, 1.3, 0.2, 1.9);
        let (r1, r2) = telegrapher_roots(k, l, e, c).unwrap();
        for a in [r1, r2] {
            assert!(((c * c - 1.0 / k) * a * a + l * c * a + e).abs() < 1e-13);
        }
    }
}
