//! Hunter-Saxton type system u_tx + u u_xx + u_x^2/2 + mu u_x = 0 with
//! h = -2 p_t p_x + 2 u p_t^2 + mu p_t + 2 mu z^t on n = 1, k = 2.

use super::*;
use crate::dual::Scalar;
use crate::fields::{PhaseFunction, Pt};
use crate::grid::ClosedMap;
use crate::sections::{ZDependent, ZIndependent};

struct Ham {
    mu: f64,
}

impl PhaseFunction for Ham {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        let (u, pt, px) = (x.q(0), x.p(0, 0), x.p(1, 0));
        pt * px * (-2.0) + u * pt * pt * 2.0 + pt * self.mu + x.z(0) * (2.0 * self.mu)
    }
}

/// gamma_t = mu, gamma_x = mu (2u + c) + mu/2.
struct Linear {
    mu: f64,
    c: f64,
    k: f64,
    c1: f64,
}

impl ZIndependent for Linear {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let (u, mu, c) = (q[0], self.mu, self.c);
        vec![
            (u + c) * mu + self.k / mu,
            u * u * mu + u * ((2.0 * c + 1.0) * mu * 0.5) + self.c1,
        ]
    }
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let (u, mu, c) = (q[0], self.mu, self.c);
        vec![S::cst(mu), (u * 2.0 + c) * mu + mu * 0.5]
    }
}

/// Branch with gamma_t = mu + 1/sqrt|u + c| on delta (u + c) > 0.
struct LogBranch {
    mu: f64,
    c: f64,
    delta: f64,
    c1: f64,
}

impl LogBranch {
    fn lift<S: Scalar>(&self, u: S, r: S) -> Vec<S> {
        let (mu, c, d) = (self.mu, self.c, self.delta);
        let gt = S::one() / r + mu;
        vec![
            gt,
            (u * 2.0 + c) * gt + mu * 0.5,
            (u + c) * mu + r * (2.0 * d) + d / mu,
            u * u * mu + u * ((2.0 * c + 1.0) * mu * 0.5) + r.powi(3) * (4.0 / 3.0)
                - r * (2.0 * c * d)
                + self.c1,
        ]
    }
}

impl ZIndependent for LogBranch {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let r = ((q[0] + self.c) * self.delta).sqrt();
        self.lift(q[0], r)[2..].to_vec()
    }
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let r = ((q[0] + self.c) * self.delta).sqrt();
        self.lift(q[0], r)[..2].to_vec()
    }
    fn in_domain(&self, q: &[f64]) -> bool {
        self.delta * (q[0] + self.c) > 0.0
    }
}

/// gamma = (u, 0, mu/2 - z^t, z).
struct Quadratic {
    mu: f64,
}

impl ZDependent for Quadratic {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn momenta<S: Scalar>(&self, _q: &[S], z: &[S]) -> Vec<S> {
        vec![S::zero(), -z[0] + self.mu * 0.5]
    }
}

/// z-independent momenta of [`Linear`] viewed as a z-dependent section.
struct LinearZDep {
    mu: f64,
    c: f64,
}

impl ZDependent for LinearZDep {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        2
    }
    fn momenta<S: Scalar>(&self, q: &[S], _z: &[S]) -> Vec<S> {
        vec![
            S::cst(self.mu),
            (q[0] * 2.0 + self.c) * self.mu + self.mu * 0.5,
        ]
    }
}

fn g_delta<S: Scalar>(r: S, mu: f64, d: f64) -> S {
    r * r * (-d / (2.0 * mu)) + r * (d / (mu * mu)) - (r * mu + 1.0).ln() * (d / mu.powi(3))
}

fn g_delta_prime<S: Scalar>(r: S, mu: f64, d: f64) -> S {
    r * r * (-d) / (r * mu + 1.0)
}

/// Positive r with G_delta(r) = s, where
/// G_delta(r) = -delta r^2/(2 mu) + delta r / mu^2 - delta ln(1 + mu r) / mu^3.
pub fn invert_g_delta(s: f64, mu: f64, delta: f64) -> Result<f64> {
    if !(mu > 0.0) || delta.abs() != 1.0 {
        return Err(Error::Precondition(
            "need mu > 0 and delta = +1 or -1".into(),
        ));
    }
    if !(delta * s < 0.0) {
        return Err(Error::Domain(format!(
            "G_delta has no positive preimage of {s} for delta = {delta}"
        )));
    }
    let f = |r: f64| g_delta(r, mu, delta) - s;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi).signum() == (-s).signum() {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Solver {
                msg: "bracketing G_delta failed".into(),
                residual: f64::INFINITY,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == (-s).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..3 {
        let step = f(r) / g_delta_prime(r, mu, delta);
        if (r - step) > 0.0 {
            r -= step;
        }
    }
    Ok(r)
}

struct LinearSolution {
    sec: Linear,
    u0: f64,
}

impl ClosedMap for LinearSolution {
    fn k(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        5
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let u = (t[1] + t[0] * self.sec.c) * (-2.0 * self.sec.mu) + self.u0;
        let mut x = vec![u];
        x.extend(self.sec.momenta(&[u]));
        x.extend(self.sec.potentials(&[u]));
        x
    }
}

struct QuadraticSolution {
    mu: f64,
    c0: f64,
    c1: f64,
    c2: f64,
}

impl ClosedMap for QuadraticSolution {
    fn k(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        5
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let tt = t[0] + self.c1;
        vec![
            tt * tt + self.c0,
            S::zero(),
            -tt + self.mu * 0.5,
            tt,
            -t[1] + self.c2,
        ]
    }
}

struct LogSolution {
    sec: LogBranch,
    shift: f64,
}

impl LogSolution {
    fn s<S: Scalar>(&self, t: &[S]) -> S {
        t[1] + t[0] * self.sec.c + self.shift
    }
}

impl ClosedMap for LogSolution {
    fn k(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        5
    }
    fn eval<S: Scalar>(&self, t: &[S]) -> Vec<S> {
        let (mu, d) = (self.sec.mu, self.sec.delta);
        let s = self.s(t);
        let r0 = invert_g_delta(s.re(), mu, d).unwrap_or(f64::NAN);
        // Newton from the converged root propagates exact derivatives.
        let mut r = S::cst(r0);
        for _ in 0..2 {
            r = r - (g_delta(r, mu, d) - s) / g_delta_prime(r, mu, d);
        }
        let u = r * r * d - self.sec.c;
        let mut x = vec![u];
        x.extend(self.sec.lift(u, r));
        x
    }
    fn in_domain(&self, t: &[f64]) -> bool {
        self.sec.delta * self.s(t) < 0.0
    }
}

pub(super) struct HunterSaxton;

impl HunterSaxton {
    fn linear(p: &Params) -> Result<Linear> {
        Ok(Linear {
            mu: nonzero(p, "mu")?,
            c: p["c"],
            k: p["K"],
            c1: p["C1"],
        })
    }

    fn log(p: &Params) -> Result<LogBranch> {
        let mu = positive(p, "mu")?;
        let delta = p["delta"];
        if delta != 1.0 && delta != -1.0 {
            return Err(Error::Precondition("delta must be +1 or -1".into()));
        }
        Ok(LogBranch {
            mu,
            c: p["c"],
            delta,
            c1: p["C1"],
        })
    }

    fn family_of(p: &Params, h: &ScalarField) -> Result<AffineFamily> {
        let (a, mu) = (nonzero(p, "a")?, p["mu"]);
        Ok(AffineFamily {
            name: "hunter-saxton-zdep-family",
            a,
            drift: 0.0,
            h: h.clone(),
            xi: Arc::new(move |u, z, lam| {
                let t = a * z[0] + lam[0];
                (2.0 + 4.0 * a * u) * t * t + (2.0 + a) * mu * t
            }),
        })
    }
}

impl ExampleImpl for HunterSaxton {
    fn hamiltonian(&self, p: &Params) -> Result<ScalarField> {
        let mu = p["mu"];
        Ok(
            ScalarField::new(ChartSpec::new(1, 2)?, "hunter-saxton", Ham { mu })
                .with_params(p.iter().map(|(k, v)| (k.clone(), *v)))
                .with_affine_z(vec![2.0 * mu, 0.0]),
        )
    }

    fn section(&self, key: &str, p: &Params) -> Result<Built> {
        let mu = p["mu"];
        match key {
            "linear-zind" => Ok(Built::ZInd(SectionZInd::new(
                "hunter-saxton-linear",
                Self::linear(p)?,
            )?)),
            "log-branch" => Ok(Built::ZInd(SectionZInd::new(
                "hunter-saxton-log-branch",
                Self::log(p)?,
            )?)),
            "zdep-family" => {
                let h = self.hamiltonian(p)?;
                Ok(Built::ZDep(
                    Self::family_of(p, &h)?.member(&[p["rho"], p["sigma"]])?,
                ))
            }
            "zdep-quadratic" => Ok(Built::ZDep(SectionZDep::new(
                "hunter-saxton-quadratic",
                Quadratic { mu },
            )?)),
            "zdep-linear" => Ok(Built::ZDep(SectionZDep::new(
                "hunter-saxton-zdep-linear",
                LinearZDep { mu, c: p["c"] },
            )?)),
            "zdep-constant" => Ok(Built::ZDep(SectionZDep::new(
                "hunter-saxton-zdep-constant",
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
        let (mu, c) = (p["mu"], p["c"]);
        match (key, which) {
            ("zdep-family", _) => Self::family_of(p, h)
                .ok()?
                .explicit_gauge(&[p["rho"], p["sigma"]], which)
                .ok(),
            ("zdep-quadratic", Mode::Evolution) => Some(GaugeMatrix::new(
                "hunter-saxton-quadratic-explicit",
                move |_q, z| {
                    Ok(vec![
                        vec![1.0, -2.0 * z[0] * (0.5 * mu - z[0])],
                        vec![0.0, -1.0],
                    ])
                },
            )),
            ("zdep-linear", Mode::Standard) => Some(GaugeMatrix::new(
                "hunter-saxton-zdep-linear-explicit",
                move |q, z| {
                    Ok(vec![
                        vec![0.0, 0.0],
                        vec![0.0, 2.0 * mu * mu * (q[0] + c) - 2.0 * mu * z[0]],
                    ])
                },
            )),
            _ => None,
        }
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

    fn sample_box(&self, key: &str, p: &Params) -> SampleBox {
        match key {
            "linear-zind" => SampleBox::cube(1, -1.0, 1.0),
            "log-branch" => {
                let c = p["c"];
                if p["delta"] > 0.0 {
                    SampleBox::cube(1, -c + 0.25, -c + 2.0)
                } else {
                    SampleBox::cube(1, -c - 2.0, -c - 0.25)
                }
            }
            _ => SampleBox::cube(3, -1.0, 1.0),
        }
    }

    fn solution(&self, key: &str, p: &Params, _mode: Mode) -> Result<Arc<dyn ErasedClosed>> {
        match key {
            "linear" => Ok(Arc::new(LinearSolution {
                sec: Self::linear(p)?,
                u0: p["u0"],
            })),
            "quadratic" => Ok(Arc::new(QuadraticSolution {
                mu: p["mu"],
                c0: p["c0"],
                c1: p["c1"],
                c2: p["c2"],
            })),
            "logarithmic" => Ok(Arc::new(LogSolution {
                sec: Self::log(p)?,
                shift: p["shift"],
            })),
            _ => Err(unknown_solution(key)),
        }
    }

    fn default_grid(&self, key: &str) -> GridSpec {
        match key {
            "logarithmic" => grid2(0.0, 0.01, 26),
            _ => grid2(0.0, 0.02, 50),
        }
    }

    fn pde(&self, p: &Params, x: &[f64], du: &[f64], d2u: &[Vec<f64>]) -> Option<f64> {
        let u = x[0];
        Some(d2u[0][1] + u * d2u[1][1] + 0.5 * du[1] * du[1] + p["mu"] * du[1])
    }
}

pub(super) fn system() -> ExampleSystem {
    use CaseKind::*;
    use Mode::*;
    let cases = vec![
        case(
            "linear-classical",
            CheckHj,
            Standard,
            Some("linear-zind"),
            None,
        ),
        case(
            "linear-evolution",
            CheckHj,
            Evolution,
            Some("linear-zind"),
            None,
        ),
        case(
            "linear-nonzero-K-classical",
            CheckHj,
            Standard,
            Some("linear-zind"),
            None,
        )
        .set("K", 1.0)
        .fails(1),
        case(
            "linear-nonzero-K-evolution",
            CheckHj,
            Evolution,
            Some("linear-zind"),
            None,
        )
        .set("K", 1.0),
        case(
            "log-branch-classical",
            CheckHj,
            Standard,
            Some("log-branch"),
            None,
        ),
        case(
            "log-branch-evolution",
            CheckHj,
            Evolution,
            Some("log-branch"),
            None,
        ),
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
            "zdep-quadratic-evolution",
            CheckHj,
            Evolution,
            Some("zdep-quadratic"),
            None,
        ),
        case(
            "zdep-linear-standard",
            CheckHj,
            Standard,
            Some("zdep-linear"),
            None,
        ),
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
            "linear-end-to-end",
            Simulate,
            Standard,
            Some("linear-zind"),
            Some("linear"),
        ),
        case(
            "quadratic-end-to-end",
            Simulate,
            Evolution,
            Some("zdep-quadratic"),
            Some("quadratic"),
        ),
        case(
            "log-end-to-end",
            Simulate,
            Evolution,
            Some("log-branch"),
            Some("logarithmic"),
        ),
        case(
            "quadratic-not-standard",
            Solution,
            Standard,
            None,
            Some("quadratic"),
        )
        .fails(1),
    ];
    ExampleSystem {
        key: "hunter-saxton",
        title: "Hunter-Saxton type equation",
        chart: ChartSpec::new(1, 2).expect("chart"),
        defaults: params(&[
            ("mu", 1.0),
            ("c", 0.5),
            ("K", 0.0),
            ("C1", 0.0),
            ("u0", 1.0),
            ("delta", 1.0),
            ("shift", -1.0),
            ("a", 1.0),
            ("rho", 0.3),
            ("sigma", -0.2),
            ("c0", 0.0),
            ("c1", 0.0),
            ("c2", 0.0),
        ]),
        sections: vec![
            SectionInfo {
                key: "linear-zind",
                kind: SectionKind::ZInd,
                description: "gamma_t = mu, gamma_x = mu (2u + c) + mu/2; classical only for K = 0",
                family_params: &[],
            },
            SectionInfo {
                key: "log-branch",
                kind: SectionKind::ZInd,
                description: "gamma_t = mu + 1/sqrt|u + c| on delta (u + c) > 0",
                family_params: &[],
            },
            SectionInfo {
                key: "zdep-family",
                kind: SectionKind::Family,
                description: "gamma = (u, a z^t + rho, -a z^x + sigma, z)",
                family_params: &["rho", "sigma"],
            },
            SectionInfo {
                key: "zdep-quadratic",
                kind: SectionKind::ZDep,
                description: "gamma = (u, 0, mu/2 - z^t, z) with a non-diagonal gauge matrix",
                family_params: &[],
            },
            SectionInfo {
                key: "zdep-linear",
                kind: SectionKind::ZDep,
                description: "linear momenta viewed as z-dependent, diagonal standard gauge",
                family_params: &[],
            },
            SectionInfo {
                key: "zdep-constant",
                kind: SectionKind::ZDep,
                description: "constant momenta (rho, sigma); admits no gauge matrix",
                family_params: &[],
            },
        ],
        solutions: vec![
            SolutionInfo {
                key: "linear",
                description: "u = u0 - 2 mu (x + c t)",
                section: Some("linear-zind"),
                modes: &[Standard, Evolution],
            },
            SolutionInfo {
                key: "quadratic",
                description: "u = (t + c1)^2 + c0 with z = (t + c1, c2 - x)",
                section: Some("zdep-quadratic"),
                modes: &[Evolution],
            },
            SolutionInfo {
                key: "logarithmic",
                description: "u = delta r^2 - c with G_delta(r) = x + c t + shift",
                section: Some("log-branch"),
                modes: &[Standard, Evolution],
            },
        ],
        cases,
        has_pde: true,
        imp: Arc::new(HunterSaxton),
    }
}
