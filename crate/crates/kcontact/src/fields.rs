//! Differentiable scalar fields on the phase space.
//!
//! A field is written once against [`Scalar`] by implementing
//! [`PhaseFunction`]; [`ScalarField`] erases it and evaluates it on floats,
//! first-order duals and nested duals.

use crate::dual::{Dual, Scalar, D1, D2};
use crate::error::{Error, Result};
use crate::geometry::{ChartSpec, DarbouxPoint};
use crate::linalg;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Read-only view of a flat point with named accessors.
#[derive(Clone, Copy)]
pub struct Pt<'a, S> {
    pub chart: ChartSpec,
    pub x: &'a [S],
}

impl<'a, S: Scalar> Pt<'a, S> {
    pub fn new(chart: ChartSpec, x: &'a [S]) -> Self {
        Pt { chart, x }
    }

    pub fn q(&self, i: usize) -> S {
        self.x[self.chart.q_index(i)]
    }

    /// Momentum p_i^a.
    pub fn p(&self, a: usize, i: usize) -> S {
        self.x[self.chart.p_index(a, i)]
    }

    pub fn z(&self, a: usize) -> S {
        self.x[self.chart.z_index(a)]
    }
}

/// A scalar function of a phase-space point, generic over the number type.
///
/// Implementations must be deterministic and side-effect free.
pub trait PhaseFunction: Send + Sync + 'static {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S;

    /// Domain predicate on the flat point; checked before evaluation.
    fn in_domain(&self, _x: &[f64]) -> bool {
        true
    }
}

trait ErasedPhase: Send + Sync {
    fn e0(&self, c: ChartSpec, x: &[f64]) -> f64;
    fn e1(&self, c: ChartSpec, x: &[D1]) -> D1;
    fn e2(&self, c: ChartSpec, x: &[D2]) -> D2;
    fn dom(&self, x: &[f64]) -> bool;
}

impl<F: PhaseFunction> ErasedPhase for F {
    fn e0(&self, c: ChartSpec, x: &[f64]) -> f64 {
        self.eval(Pt::new(c, x))
    }
    fn e1(&self, c: ChartSpec, x: &[D1]) -> D1 {
        self.eval(Pt::new(c, x))
    }
    fn e2(&self, c: ChartSpec, x: &[D2]) -> D2 {
        self.eval(Pt::new(c, x))
    }
    fn dom(&self, x: &[f64]) -> bool {
        self.in_domain(x)
    }
}

/// Type-erased differentiable scalar field with named parameters.
#[derive(Clone)]
pub struct ScalarField {
    pub chart: ChartSpec,
    pub name: String,
    pub params: BTreeMap<String, f64>,
    /// Constant coefficients A_a when the field is declared affine in z.
    pub affine_z: Option<Vec<f64>>,
    inner: Arc<dyn ErasedPhase>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("params", &self.params)
            .finish()
    }
}

impl ScalarField {
    pub fn new<F: PhaseFunction>(chart: ChartSpec, name: impl Into<String>, f: F) -> Self {
        ScalarField {
            chart,
            name: name.into(),
            params: BTreeMap::new(),
            affine_z: None,
            inner: Arc::new(f),
        }
    }

    pub fn with_params<I: IntoIterator<Item = (String, f64)>>(mut self, params: I) -> Self {
        self.params.extend(params);
        self
    }

    /// Declare h = g(q, p) + sum_a A_a z^a.
    pub fn with_affine_z(mut self, a: Vec<f64>) -> Self {
        self.affine_z = Some(a);
        self
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.inner.dom(x)
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.chart.dim() {
            return Err(Error::Shape(format!(
                "{}: point has {} coordinates, chart needs {}",
                self.name,
                x.len(),
                self.chart.dim()
            )));
        }
        if !self.inner.dom(x) {
            return Err(Error::Domain(format!(
                "{}: point outside domain",
                self.name
            )));
        }
        Ok(())
    }

    pub fn value(&self, pt: &DarbouxPoint) -> Result<f64> {
        self.value_flat(&pt.to_flat())
    }

    pub fn value_flat(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.inner.e0(self.chart, x))
    }

    /// Evaluate on first-order duals (no domain check).
    pub fn eval_d1(&self, x: &[D1]) -> D1 {
        self.inner.e1(self.chart, x)
    }

    /// Evaluate on nested duals (no domain check).
    pub fn eval_d2(&self, x: &[D2]) -> D2 {
        self.inner.e2(self.chart, x)
    }

    /// Exact gradient in flat layout.
    pub fn grad_flat(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(crate::dual::gradient(x, |v| self.eval_d1(v)))
    }

    /// Exact gradient at a point whose coordinates are themselves duals.
    ///
    /// The derivative part of each returned entry is the directional
    /// derivative of that gradient entry along the duals' derivative parts.
    pub fn grad_d1(&self, x: &[D1]) -> Vec<D1> {
        (0..x.len())
            .map(|j| {
                let v: Vec<D2> = x
                    .iter()
                    .enumerate()
                    .map(|(m, d)| {
                        Dual::new(
                            D1::new(d.re, if m == j { 1.0 } else { 0.0 }),
                            D1::new(d.eps, 0.0),
                        )
                    })
                    .collect();
                let r = self.eval_d2(&v);
                D1::new(r.re.eps, r.eps.eps)
            })
            .collect()
    }

    /// Exact second derivative with respect to flat coordinates `a` and `b`.
    pub fn second_flat(&self, x: &[f64], a: usize, b: usize) -> f64 {
        let v: Vec<D2> = x
            .iter()
            .enumerate()
            .map(|(m, &xm)| {
                Dual::new(
                    D1::new(xm, if m == b { 1.0 } else { 0.0 }),
                    D1::new(if m == a { 1.0 } else { 0.0 }, 0.0),
                )
            })
            .collect();
        self.eval_d2(&v).eps.eps
    }
}

/// First derivatives split into blocks d/dq, d/dp, d/dz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gradient {
    pub d_q: Vec<f64>,
    pub d_p: Vec<Vec<f64>>,
    pub d_z: Vec<f64>,
}

impl Gradient {
    pub fn from_flat(chart: ChartSpec, g: &[f64]) -> Self {
        let pt = DarbouxPoint::from_flat(chart, g).expect("gradient length matches chart");
        Gradient {
            d_q: pt.q,
            d_p: pt.p,
            d_z: pt.z,
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.d_q.clone();
        for r in &self.d_p {
            v.extend_from_slice(r);
        }
        v.extend_from_slice(&self.d_z);
        v
    }
}

/// Exact gradient by forward dual numbers.
pub fn grad(field: &ScalarField, pt: &DarbouxPoint) -> Result<Gradient> {
    pt.conforms(field.chart)?;
    Ok(Gradient::from_flat(
        field.chart,
        &field.grad_flat(&pt.to_flat())?,
    ))
}

/// Central-difference gradient, used as an independent oracle.
pub fn fd_grad(field: &ScalarField, pt: &DarbouxPoint, step: f64) -> Result<Gradient> {
    if !(step > 0.0) {
        return Err(Error::Precondition(format!(
            "fd step must be positive, got {step}"
        )));
    }
    pt.conforms(field.chart)?;
    let x = pt.to_flat();
    let mut g = vec![0.0; x.len()];
    for j in 0..x.len() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += step;
        xm[j] -= step;
        g[j] = (field.value_flat(&xp)? - field.value_flat(&xm)?) / (2.0 * step);
    }
    Ok(Gradient::from_flat(field.chart, &g))
}

/// Hessian block d^2 h / dp dp, indexed by flat momentum position a*n + i.
pub fn hessian_pp(h: &ScalarField, pt: &DarbouxPoint) -> Result<Vec<Vec<f64>>> {
    pt.conforms(h.chart)?;
    let x = pt.to_flat();
    h.check(&x)?;
    let c = h.chart;
    let m = c.n * c.k;
    let mut out = vec![vec![0.0; m]; m];
    for r in 0..m {
        for s in r..m {
            let v = h.second_flat(&x, c.n + r, c.n + s);
            out[r][s] = v;
            out[s][r] = v;
        }
    }
    Ok(out)
}

/// Regularity of the momentum Hessian: `(is_regular, min |eigenvalue|)`.
///
/// Regular iff the smallest singular value exceeds 1e-9 times the largest.
pub fn check_regularity(h: &ScalarField, pt: &DarbouxPoint) -> Result<(bool, f64)> {
    let hess = hessian_pp(h, pt)?;
    let s = linalg::singular_values(&linalg::to_matrix(&hess));
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    Ok((smax > 0.0 && smin > linalg::RANK_RTOL * smax, smin))
}

/// Newton tolerance on the fibre-derivative residual.
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
pub const NEWTON_MAX_HALVINGS: usize = 10;

/// Solve dh/dp_i^a (q, p, z) = v_a^i for p by damped Newton iteration.
///
/// `v` and `p_init` are k x n, row a holding the copy index.
pub fn invert_fibre_derivative(
    h: &ScalarField,
    q: &[f64],
    z: &[f64],
    v: &[Vec<f64>],
    p_init: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>> {
    let c = h.chart;
    let mut pt = DarbouxPoint::new(c, q.to_vec(), p_init.to_vec(), z.to_vec())?;
    let target = DarbouxPoint::new(c, vec![0.0; c.n], v.to_vec(), vec![0.0; c.k])?;
    let m = c.n * c.k;
    let residual = |pt: &DarbouxPoint| -> Result<Vec<f64>> {
        let g = grad(h, pt)?;
        Ok((0..c.k)
            .flat_map(|a| (0..c.n).map(move |i| (a, i)))
            .map(|(a, i)| g.d_p[a][i] - target.p[a][i])
            .collect())
    };
    let mut f = residual(&pt)?;
    let mut fnorm = linalg::norm_inf(&f);
    for _ in 0..NEWTON_MAX_ITER {
        if fnorm < NEWTON_TOL {
            return Ok(pt.p);
        }
        let hess = hessian_pp(h, &pt)?;
        let jm = linalg::to_matrix(&hess);
        let s = linalg::singular_values(&jm);
        let smax = s.first().copied().unwrap_or(0.0);
        if !(smax > 0.0 && s[m - 1] > linalg::RANK_RTOL * smax) {
            return Err(Error::Regularity(format!(
                "{}: momentum Hessian singular during fibre inversion",
                h.name
            )));
        }
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = linalg::solve(&jm, &rhs).ok_or_else(|| {
            Error::Regularity(format!("{}: momentum Hessian not invertible", h.name))
        })?;
        // Halve until the residual decreases; otherwise keep the smallest step.
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let mut trial = pt.clone();
            for a in 0..c.k {
                for i in 0..c.n {
                    trial.p[a][i] += step * delta[a * c.n + i];
                }
            }
            if let Ok(ft) = residual(&trial) {
                let nt = linalg::norm_inf(&ft);
                let decreased = nt < fnorm;
                accepted = Some((trial, ft, nt));
                if decreased {
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((trial, ft, nt)) = accepted else {
            return Err(Error::Solver {
                msg: format!("{}: damped Newton step left the domain", h.name),
                residual: fnorm,
            });
        };
        pt = trial;
        f = ft;
        fnorm = nt;
    }
    if fnorm < NEWTON_TOL {
        return Ok(pt.p);
    }
    Err(Error::Solver {
        msg: format!(
            "{}: fibre inversion hit {} iterations",
            h.name, NEWTON_MAX_ITER
        ),
        residual: fnorm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Lin;
    impl PhaseFunction for Lin {
        fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
            x.z(0) * 2.0
        }
    }

    struct HalfNormP;
    impl PhaseFunction for HalfNormP {
        fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
            let mut s = S::zero();
            for a in 0..x.chart.k {
                for i in 0..x.chart.n {
                    s += x.p(a, i) * x.p(a, i) * 0.5;
                }
            }
            s
        }
    }

    struct Positive;
    impl PhaseFunction for Positive {
        fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
            x.q(0).ln()
        }
        fn in_domain(&self, x: &[f64]) -> bool {
            x[0] > 0.0
        }
    }

    #[test]
    fn linear_in_z_gradient() {
        let c = ChartSpec::new(1, 2).unwrap();
        let h = ScalarField::new(c, "lin", Lin);
        let g = grad(&h, &DarbouxPoint::zeros(c)).unwrap();
        assert_eq!(g.d_z, vec![2.0, 0.0]);
        assert_eq!(g.d_q, vec![0.0]);
    }

    #[test]
    fn quadratic_is_regular_with_unit_eigenvalue() {
        let c = ChartSpec::new(2, 2).unwrap();
        let h = ScalarField::new(c, "half-norm", HalfNormP);
        let (reg, ev) = check_regularity(&h, &DarbouxPoint::zeros(c)).unwrap();
        assert!(reg);
        assert!((ev - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_inversion_is_identity() {
        let c = ChartSpec::new(2, 2).unwrap();
        let h = ScalarField::new(c, "half-norm", HalfNormP);
        let v = vec![vec![1.0, -2.0], vec![0.5, 3.0]];
        let p = invert_fibre_derivative(&h, &[0.0, 0.0], &[0.0, 0.0], &v, &vec![vec![0.0; 2]; 2])
            .unwrap();
        assert_eq!(p, v);
    }

    #[test]
    fn fd_rejects_nonpositive_step_and_domain_exit() {
        let c = ChartSpec::new(1, 1).unwrap();
        let h = ScalarField::new(c, "log", Positive);
        let pt = DarbouxPoint::new(c, vec![1e-6], vec![vec![0.0]], vec![0.0]).unwrap();
        assert!(matches!(fd_grad(&h, &pt, 0.0), Err(Error::Precondition(_))));
        assert!(matches!(fd_grad(&h, &pt, 1e-5), Err(Error::Domain(_))));
        let bad = DarbouxPoint::new(c, vec![-1.0], vec![vec![0.0]], vec![0.0]).unwrap();
        assert!(matches!(grad(&h, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn grad_d1_matches_hessian_column() {
        let c = ChartSpec::new(1, 1).unwrap();
        let h = ScalarField::new(c, "half-norm", HalfNormP);
        let x = [D1::new(0.0, 0.0), D1::new(2.0, 1.0), D1::new(0.0, 0.0)];
        let g = h.grad_d1(&x);
        assert_eq!(g[1], D1::new(2.0, 1.0));
    }
}
