//! Non-regular first-order dissipative model h = (u^2 + p_x^2)/2 + lambda z^t
//! on n = 1, k = 2.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};

struct Ham {
    lambda: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let (u, px) = (x.q(0), x.p(1, 0));
        (u * u + px * px) * 0.5 + x.z(0) * self.lambda
    }
}

pub(super) struct FirstOrder;

impl FirstOrder {
    fn family_of(p: &Params, h: &ScalarField) -> Result<AffineFamily> {
        let (a, lambda) = (nonzero(p, "a")?, p["lambda"]);
        Ok(AffineFamily {
            name: "first-order-zdep-family",
            a,
            drift: 0.0,
            h: h.clone(),
            xi: Arc::new(move |u, z, lam| {
                let t = a * z[0] + lam[0];
                let x = -a * z[1] + lam[1];
                u + lambda * t - a * x * x
            }),
        })
    }
}

impl ExampleImpl for FirstOrder {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let lambda = p["lambda"];
        Ok(ScalarField::new(
            ChartSpec::new(1, 2)?,
            "first-order-dissipative",
            Ham { lambda },
        )
        .with_params(p.iter().map(|(k, v)| (k.clone(), *v)))
        .with_affine_z(vec![lambda, 0.0]))
    }

    fn section(&self, key: &str, p: &Params) -> Result<Built> {
        match key {
            "zdep-family" => {
                let h = self.hamiltonian(p)?;
                Ok(Built::ZDep(
                    Self::family_of(p, &h)?.member(&[p["rho"], p["sigma"]])?,
                ))
            }
            "zdep-constant" => Ok(Built::ZDep(SectionZDep::new(
                "first-order-zdep-constant",
                ConstantMomenta {
                    n: 1,
                    vals: vec![p["rho"], p["sigma"]],
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
            .explicit_gauge(&[p["rho"], p["sigma"]], which)
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

    fn sample_box(&self, _key: &str, _p: &Params) -> SampleBox {
        SampleBox::cube(3, -1.0, 1.0)
    }

    fn solution(&self, key: &str, _p: &Params, _mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        Err(unknown_solution(key))
    }

    fn default_grid(&self, _key: &str) -> GridSpec {
        grid2(0.0, 0.02, 50)
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    ExampleSystem {
        key: "first-order-dissipative",
        title: "First-order dissipative model (non-regular)",
        chart: ChartSpec::new(1, 2).expect("chart"),
        defaults: params(&[("lambda", 1.0), ("a", 1.0), ("rho", 0.3), ("sigma", -0.2)]),
        sections: vec![
            SectionInfo {
                key: "zdep-family",
                kind: SectionKind::Family,
                description: "gamma = (u, a z^t + rho, -a z^x + sigma, z)",
                family_params: &["rho", "sigma"],
            },
            SectionInfo {
                key: "zdep-constant",
                kind: SectionKind::ZDep,
                description: "constant momenta (rho, sigma); admits no gauge matrix",
                family_params: &[],
            },
        ],
        solutions: Vec::new(),
        cases: vec![
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
                "zdep-family-diagonal",
                CheckHj,
                Evolution,
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
                "evolution-gauge-in-standard",
                CheckHj,
                Standard,
                Some("zdep-family"),
                None,
            )
            .gauge("explicit-evolution")
            .fails(3),
        ],
        has_pde: false,
        imp: Arc::new(FirstOrder),
    }
}
