//! Hamilton-De Donder-Weyl k-vector fields: canonical representatives,
//! residuals for fields and for maps, the gauge kernel, the evolution lift of
//! k-symplectic fields, and the second-order system of affine-in-z
//! Hamiltonians.

use crate::error::{Error, Result};
use crate::fields::{self, grad, ScalarField};
use crate::geometry::{ChartSpec, DarbouxPoint, KTangent, Tangent};
use crate::grid::{fd_derivative, FdOrder, GridSpec, SolutionMap};
use crate::sampling::SampleBox;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Which z-equation a field or map is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Evolution,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "evolution" => Ok(Mode::Evolution),
            _ => Err(Error::Config(format!(
                "mode must be standard or evolution, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Evolution => "evolution",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Standard,
    Evolution,
    Custom,
}

type FieldFn = dyn Fn(&DarbouxPoint) -> Result<KTangent> + Send + Sync;

/// A k-vector field on the phase space.
#[derive(Clone)]
pub struct KVectorField {
    pub chart: ChartSpec,
    pub kind: FieldKind,
    pub hamiltonian: Option<ScalarField>,
    at: Arc<FieldFn>,
}

impl fmt::Debug for KVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KVectorField")
            .field("chart", &self.chart)
            .field("kind", &self.kind)
            .finish()
    }
}

impl KVectorField {
    pub fn custom<F>(chart: ChartSpec, f: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<KTangent> + Send + Sync + 'static,
    {
        KVectorField {
            chart,
            kind: FieldKind::Custom,
            hamiltonian: None,
            at: Arc::new(f),
        }
    }

    pub fn at(&self, pt: &DarbouxPoint) -> Result<KTangent> {
        pt.conforms(self.chart)?;
        (self.at)(pt)
    }

    /// Pointwise sum with a constant k-tangent (for example a gauge element).
    pub fn plus_constant(&self, g: &KTangent) -> KVectorField {
        let base = self.clone();
        let g = g.clone();
        KVectorField::custom(self.chart, move |pt| Ok(base.at(pt)?.add(&g)))
    }
}

fn momentum_pairing(chart: ChartSpec, pt: &DarbouxPoint, d_p: &[Vec<f64>]) -> f64 {
    (0..chart.k)
        .flat_map(|a| (0..chart.n).map(move |i| (a, i)))
        .map(|(a, i)| pt.p[a][i] * d_p[a][i])
        .sum()
}

/// Canonical (equal-split) representative at one point.
pub fn canonical_at(h: &ScalarField, mode: Mode, pt: &DarbouxPoint) -> Result<KTangent> {
    let c = h.chart;
    let g = grad(h, pt)?;
    let kf = c.k as f64;
    let pdp = momentum_pairing(c, pt, &g.d_p);
    let ztrace = match mode {
        Mode::Standard => pdp - h.value(pt)?,
        Mode::Evolution => pdp,
    };
    let mut kt = KTangent::zeros(c);
    for (a, x) in kt.comp.iter_mut().enumerate() {
        x.q.clone_from(&g.d_p[a]);
        for i in 0..c.n {
            let dz_term: f64 = (0..c.k).map(|m| pt.p[m][i] * g.d_z[m]).sum();
            x.p[a][i] = -(g.d_q[i] + dz_term) / kf;
        }
        x.z[a] = ztrace / kf;
    }
    Ok(kt)
}

/// Canonical standard or evolution k-vector field of `h`.
pub fn canonical_kvf(h: &ScalarField, mode: Mode) -> KVectorField {
    let hh = h.clone();
    KVectorField {
        chart: h.chart,
        kind: match mode {
            Mode::Standard => FieldKind::Standard,
            Mode::Evolution => FieldKind::Evolution,
        },
        hamiltonian: Some(h.clone()),
        at: Arc::new(move |pt| canonical_at(&hh, mode, pt)),
    }
}

/// Residuals of the three equation groups.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub r_q: f64,
    pub r_p: f64,
    pub r_z: f64,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.r_q.max(self.r_p).max(self.r_z)
    }

    /// Componentwise maximum; NaN propagates.
    pub fn sup(rs: &[Residual]) -> Residual {
        rs.iter().fold(Residual::default(), |m, r| Residual {
            r_q: fmax(m.r_q, r.r_q),
            r_p: fmax(m.r_p, r.r_p),
            r_z: fmax(m.r_z, r.r_z),
        })
    }
}

fn fmax(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Residuals of a k-tangent `x` at `pt` against the HdDW equations of `h`.
pub fn residual_of(
    h: &ScalarField,
    mode: Mode,
    pt: &DarbouxPoint,
    x: &KTangent,
) -> Result<Residual> {
    let c = h.chart;
    x.conforms(c)?;
    let g = grad(h, pt)?;
    let mut r_q: f64 = 0.0;
    for (b, xb) in x.comp.iter().enumerate() {
        for i in 0..c.n {
            r_q = r_q.max((xb.q[i] - g.d_p[b][i]).abs());
        }
    }
    let mut r_p: f64 = 0.0;
    for i in 0..c.n {
        let mut s = g.d_q[i];
        for (a, xa) in x.comp.iter().enumerate() {
            s += xa.p[a][i] + pt.p[a][i] * g.d_z[a];
        }
        r_p = r_p.max(s.abs());
    }
    let ztr: f64 = x.comp.iter().enumerate().map(|(a, xa)| xa.z[a]).sum();
    let pdp = momentum_pairing(c, pt, &g.d_p);
    let target = match mode {
        Mode::Standard => pdp - h.value(pt)?,
        Mode::Evolution => pdp,
    };
    Ok(Residual {
        r_q,
        r_p,
        r_z: (ztr - target).abs(),
    })
}

/// Residuals of a k-vector field at a point.
pub fn kvf_residual(
    kvf: &KVectorField,
    h: &ScalarField,
    mode: Mode,
    pt: &DarbouxPoint,
) -> Result<Residual> {
    if kvf.chart != h.chart {
        return Err(Error::Shape("field and Hamiltonian charts differ".into()));
    }
    residual_of(h, mode, pt, &kvf.at(pt)?)
}

/// Element of ker chi: a k-tangent with vanishing base components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeElement {
    pub coeffs: KTangent,
}

impl GaugeElement {
    /// Build from a k-tangent, checking the kernel conditions.
    pub fn new(chart: ChartSpec, coeffs: KTangent) -> Result<Self> {
        coeffs.conforms(chart)?;
        let base_zero = coeffs.comp.iter().all(|t| t.q.iter().all(|v| *v == 0.0));
        let ptr: Vec<f64> = (0..chart.n)
            .map(|i| coeffs.comp.iter().enumerate().map(|(a, t)| t.p[a][i]).sum())
            .collect();
        let ztr: f64 = coeffs.comp.iter().enumerate().map(|(a, t)| t.z[a]).sum();
        let tol = 1e-12 * (1.0 + coeffs.norm_inf());
        if !base_zero || ptr.iter().any(|v| v.abs() > tol) || ztr.abs() > tol {
            return Err(Error::Contract("k-tangent is not in ker chi".into()));
        }
        Ok(GaugeElement { coeffs })
    }
}

/// Basis of ker chi: off-diagonal unit insertions plus trace-balanced diagonal pairs.
///
/// The kernel does not depend on the point; `pt` only fixes shapes.
pub fn gauge_basis(chart: ChartSpec, pt: &DarbouxPoint) -> Result<Vec<GaugeElement>> {
    pt.conforms(chart)?;
    let k = chart.k;
    let mut out = Vec::with_capacity(chart.gauge_dimension());
    let mut push = |set: &dyn Fn(&mut KTangent)| {
        let mut kt = KTangent::zeros(chart);
        set(&mut kt);
        out.push(GaugeElement { coeffs: kt });
    };
    for i in 0..chart.n {
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    push(&|kt: &mut KTangent| kt.comp[a].p[b][i] = 1.0);
                }
            }
        }
        for a in 1..k {
            push(&|kt: &mut KTangent| {
                kt.comp[0].p[0][i] = 1.0;
                kt.comp[a].p[a][i] = -1.0;
            });
        }
    }
    for a in 0..k {
        for b in 0..k {
            if a != b {
                push(&|kt: &mut KTangent| kt.comp[a].z[b] = 1.0);
            }
        }
    }
    for a in 1..k {
        push(&|kt: &mut KTangent| {
            kt.comp[0].z[0] = 1.0;
            kt.comp[a].z[a] = -1.0;
        });
    }
    Ok(out)
}

fn derivative_ktangent(chart: ChartSpec, d: &[Vec<f64>]) -> Result<KTangent> {
    Ok(KTangent {
        comp: d
            .iter()
            .map(|row| Tangent::from_flat(chart, row))
            .collect::<Result<_>>()?,
    })
}

/// HdDW residuals of a map at every grid node, fourth-order differences.
pub fn map_residual(psi: &SolutionMap, h: &ScalarField, mode: Mode) -> Result<Vec<Residual>> {
    map_residual_with(psi, h, mode, FdOrder::Fourth)
}

/// HdDW residuals of a map with a chosen difference order.
///
/// Exact derivatives are used when the map carries a closed form.
pub fn map_residual_with(
    psi: &SolutionMap,
    h: &ScalarField,
    mode: Mode,
    order: FdOrder,
) -> Result<Vec<Residual>> {
    let chart = psi
        .chart
        .ok_or_else(|| Error::Shape("map_residual needs a phase-space map".into()))?;
    if chart != h.chart {
        return Err(Error::Shape("map and Hamiltonian charts differ".into()));
    }
    if psi.grid.k() != chart.k {
        return Err(Error::Shape("map grid dimension differs from k".into()));
    }
    if psi.grid.counts.iter().any(|&c| c < 3) {
        return Err(Error::Precondition(
            "grid too small: need 3 nodes per direction".into(),
        ));
    }
    (0..psi.grid.len())
        .into_par_iter()
        .map(|l| {
            let pt = DarbouxPoint::from_flat(chart, &psi.values[l])?;
            let d = psi.derivatives(l, order);
            residual_of(h, mode, &pt, &derivative_ktangent(chart, &d)?)
        })
        .collect()
}

fn ksym_check(hh: &ScalarField, pt: &DarbouxPoint, x: &KTangent) -> Result<()> {
    let c = hh.chart;
    let g = grad(hh, pt)?;
    let mut worst: f64 = 0.0;
    for (a, xa) in x.comp.iter().enumerate() {
        for i in 0..c.n {
            worst = worst.max((xa.q[i] - g.d_p[a][i]).abs());
        }
    }
    for i in 0..c.n {
        let s: f64 = x.comp.iter().enumerate().map(|(a, xa)| xa.p[a][i]).sum();
        worst = worst.max((s + g.d_q[i]).abs());
    }
    worst = worst.max(g.d_z.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    if worst > 1e-10 {
        return Err(Error::Precondition(format!(
            "iota_X omega = dH violated by {worst:e}"
        )));
    }
    Ok(())
}

/// Canonical k-symplectic Hamiltonian field of a z-independent `hh`:
/// X_a^i = dH/dp_i^a, (X_a)_i^a = -(1/k) dH/dq^i, all else zero.
pub fn ksymplectic_canonical(hh: &ScalarField) -> KVectorField {
    let hc = hh.clone();
    KVectorField::custom(hh.chart, move |pt| {
        let c = hc.chart;
        let g = grad(&hc, pt)?;
        let mut kt = KTangent::zeros(c);
        for (a, x) in kt.comp.iter_mut().enumerate() {
            x.q.clone_from(&g.d_p[a]);
            for i in 0..c.n {
                x.p[a][i] = -g.d_q[i] / c.k as f64;
            }
        }
        Ok(kt)
    })
}

/// Canonical evolution lift of a k-symplectic Hamiltonian field.
///
/// E_a keeps the q- and p-blocks of X_a and gets the single z-component
/// (E_a)^a = sum_i p_i^a X_a^i. The precondition iota_X omega = dH (with H
/// independent of z) is checked at every evaluation.
pub fn evolution_lift(hh: &ScalarField, x: &KVectorField) -> Result<KVectorField> {
    if hh.chart != x.chart {
        return Err(Error::Shape(
            "lift: Hamiltonian and field charts differ".into(),
        ));
    }
    let hc = hh.clone();
    let xc = x.clone();
    let mut e = KVectorField::custom(hh.chart, move |pt| {
        let mut kt = xc.at(pt)?;
        ksym_check(&hc, pt, &kt)?;
        for (a, ea) in kt.comp.iter_mut().enumerate() {
            let theta: f64 = ea.q.iter().zip(&pt.p[a]).map(|(v, p)| v * p).sum();
            ea.z.iter_mut().for_each(|v| *v = 0.0);
            ea.z[a] = theta;
        }
        Ok(kt)
    });
    e.kind = FieldKind::Evolution;
    e.hamiltonian = Some(hh.clone());
    Ok(e)
}

/// Number of random points used to detect affinity in z.
pub const AFFINE_SAMPLES: usize = 50;

/// Coefficients A_a of an affine-in-z Hamiltonian.
///
/// Uses the declared coefficients when present, otherwise checks that dh/dz
/// is constant at 50 seeded random in-domain points of [-1, 1]^dim.
pub fn affine_z_coefficients(h: &ScalarField) -> Result<Vec<f64>> {
    if let Some(a) = &h.affine_z {
        return Ok(a.clone());
    }
    let c = h.chart;
    let pts: Vec<Vec<f64>> = SampleBox::cube(c.dim(), -1.0, 1.0)
        .uniform(20 * AFFINE_SAMPLES, 0x5eed)
        .into_iter()
        .filter(|x| h.in_domain(x))
        .take(AFFINE_SAMPLES)
        .collect();
    if pts.is_empty() {
        return Err(Error::Contract(format!(
            "{}: no in-domain points to test affinity",
            h.name
        )));
    }
    let mut first: Option<Vec<f64>> = None;
    for x in &pts {
        let g = h.grad_flat(x)?;
        let dz = g[c.n + c.n * c.k..].to_vec();
        match &first {
            None => first = Some(dz),
            Some(f) => {
                if f.iter().zip(&dz).any(|(a, b)| (a - b).abs() > 1e-10) {
                    return Err(Error::Contract(format!(
                        "{}: Hamiltonian is not affine in z",
                        h.name
                    )));
                }
            }
        }
    }
    Ok(first.unwrap_or_default())
}

/// Residual of the induced second-order system on interior nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderReport {
    /// Linear indices of interior nodes.
    pub nodes: Vec<usize>,
    /// max_i |residual_i| at each interior node.
    pub residual: Vec<f64>,
}

impl SecondOrderReport {
    pub fn sup(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, v| fmax(m, *v))
    }
}

/// Second-order residual sum_a d_a P_i^a + dg/dq^i + sum_a A_a P_i^a for an
/// affine-in-z regular Hamiltonian, with P from fibre-derivative inversion.
pub fn second_order_residual(h: &ScalarField, qmap: &SolutionMap) -> Result<SecondOrderReport> {
    second_order_residual_via(&canonical_kvf(h, Mode::Standard), h, qmap)
}

/// Same residual with the balance term read from the p-blocks of `kvf`:
/// sum_a d_a P_i^a - sum_a (X_a)_i^a (q, P, 0).
pub fn second_order_residual_via(
    kvf: &KVectorField,
    h: &ScalarField,
    qmap: &SolutionMap,
) -> Result<SecondOrderReport> {
    let c = h.chart;
    affine_z_coefficients(h)?;
    if qmap.dim != c.n || qmap.grid.k() != c.k {
        return Err(Error::Shape("qmap must be a map from R^k to Q".into()));
    }
    let grid: &GridSpec = &qmap.grid;
    let z0 = vec![0.0; c.k];
    let p0 = vec![vec![0.0; c.n]; c.k];
    let momenta: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|l| {
            let v = qmap.derivatives(l, FdOrder::Fourth);
            let p = fields::invert_fibre_derivative(h, &qmap.values[l], &z0, &v, &p0)?;
            Ok(p.concat())
        })
        .collect::<Result<_>>()?;
    let interior: Vec<usize> = (0..grid.len())
        .filter(|&l| grid.is_interior(&grid.multi_index(l)))
        .collect();
    let residual = interior
        .par_iter()
        .map(|&l| {
            let idx = grid.multi_index(l);
            let mut div = vec![0.0; c.n];
            for a in 0..c.k {
                let d = fd_derivative(grid, &momenta, &idx, a, FdOrder::Fourth);
                for i in 0..c.n {
                    div[i] += d[a * c.n + i];
                }
            }
            let p: Vec<Vec<f64>> = momenta[l].chunks(c.n).map(|r| r.to_vec()).collect();
            let pt = DarbouxPoint::new(c, qmap.values[l].clone(), p, z0.clone())?;
            let x = kvf.at(&pt)?;
            let mut worst: f64 = 0.0;
            for i in 0..c.n {
                let bal: f64 = x.comp.iter().enumerate().map(|(a, xa)| xa.p[a][i]).sum();
                worst = worst.max((div[i] - bal).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(SecondOrderReport {
        nodes: interior,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Scalar;
    use crate::fields::{PhaseFunction, Pt};
    use crate::geometry::chi;

    struct Wave;
    impl PhaseFunction for Wave {
        fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
            (x.p(0, 0) * x.p(0, 0) - x.p(1, 0) * x.p(1, 0)) * 0.5 + x.z(0) * 0.3
        }
    }

    struct Zero;
    impl PhaseFunction for Zero {
        fn eval<S: Scalar>(&self, _x: Pt<'_, S>) -> S {
            S::zero()
        }
    }

    fn chart12() -> ChartSpec {
        ChartSpec::new(1, 2).unwrap()
    }

    fn pt12() -> DarbouxPoint {
        DarbouxPoint::new(
            chart12(),
            vec![0.4],
            vec![vec![1.2], vec![-0.7]],
            vec![0.1, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn zero_hamiltonian_gives_zero_field() {
        let h = ScalarField::new(chart12(), "zero", Zero);
        let kt = canonical_kvf(&h, Mode::Standard).at(&pt12()).unwrap();
        assert_eq!(kt.norm_inf(), 0.0);
    }

    #[test]
    fn canonical_residual_vanishes_and_modes_differ_by_h() {
        let h = ScalarField::new(chart12(), "wave", Wave);
        let pt = pt12();
        for mode in [Mode::Standard, Mode::Evolution] {
            let r = kvf_residual(&canonical_kvf(&h, mode), &h, mode, &pt).unwrap();
            assert!(r.max() < 1e-14);
        }
        let s = canonical_at(&h, Mode::Standard, &pt).unwrap();
        let e = canonical_at(&h, Mode::Evolution, &pt).unwrap();
        let dz: f64 = (0..2).map(|a| e.comp[a].z[a] - s.comp[a].z[a]).sum();
        assert!((dz - h.value(&pt).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn perturbed_z_component_shows_in_r_z() {
        let h = ScalarField::new(chart12(), "wave", Wave);
        let pt = pt12();
        let mut kt = canonical_at(&h, Mode::Standard, &pt).unwrap();
        kt.comp[1].z[1] += 1e-3;
        let r = residual_of(&h, Mode::Standard, &pt, &kt).unwrap();
        assert!((r.r_z - 1e-3).abs() < 1e-12);
        assert!(r.r_q < 1e-15 && r.r_p < 1e-15);
    }

    #[test]
    fn gauge_basis_counts_and_membership() {
        for (n, k) in [(1, 1), (1, 2), (2, 3)] {
            let c = ChartSpec::new(n, k).unwrap();
            let pt = DarbouxPoint::zeros(c);
            let basis = gauge_basis(c, &pt).unwrap();
            assert_eq!(basis.len(), c.gauge_dimension());
            for g in &basis {
                let (cov, r) = chi(c, &pt, &g.coeffs).unwrap();
                assert!(cov.norm_inf() < 1e-12 && r.abs() < 1e-12);
                assert!(GaugeElement::new(c, g.coeffs.clone()).is_ok());
            }
        }
    }

    #[test]
    fn non_kernel_element_rejected() {
        let c = chart12();
        let mut kt = KTangent::zeros(c);
        kt.comp[0].p[0][0] = 1.0;
        assert!(GaugeElement::new(c, kt).is_err());
    }

    #[test]
    fn lift_of_wave_field() {
        struct Free;
        impl PhaseFunction for Free {
            fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
                (x.p(0, 0) * x.p(0, 0) - x.p(1, 0) * x.p(1, 0)) * 0.5
            }
        }
        let hh = ScalarField::new(chart12(), "free", Free);
        let e = evolution_lift(&hh, &ksymplectic_canonical(&hh)).unwrap();
        let pt = pt12();
        let kt = e.at(&pt).unwrap();
        assert!((kt.comp[0].z[0] - 1.2 * 1.2).abs() < 1e-15);
        assert!((kt.comp[1].z[1] + 0.7 * 0.7).abs() < 1e-15);
        assert!(kvf_residual(&e, &hh, Mode::Evolution, &pt).unwrap().max() < 1e-14);
    }

    #[test]
    fn lift_rejects_non_hamiltonian_input() {
        let hh = ScalarField::new(chart12(), "zero", Zero);
        let bad = KVectorField::custom(chart12(), |_| {
            let mut kt = KTangent::zeros(ChartSpec::new(1, 2).unwrap());
            kt.comp[0].q[0] = 1.0;
            Ok(kt)
        });
        let e = evolution_lift(&hh, &bad).unwrap();
        assert!(matches!(e.at(&pt12()), Err(Error::Precondition(_))));
    }

    #[test]
    fn affinity_detection() {
        let h = ScalarField::new(chart12(), "wave", Wave);
        assert_eq!(affine_z_coefficients(&h).unwrap(), vec![0.3, 0.0]);
        struct Quad;
        impl PhaseFunction for Quad {
            fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
                x.z(0) * x.z(0)
            }
        }
        let q = ScalarField::new(chart12(), "quad", Quad);
        assert!(matches!(affine_z_coefficients(&q), Err(Error::Contract(_))));
    }

    #[test]
    fn constant_map_with_zero_hamiltonian() {
        let c = chart12();
        let h = ScalarField::new(c, "zero", Zero);
        let grid = GridSpec::uniform(2, 0.0, 0.1, 4).unwrap();
        let vals = vec![pt12().to_flat(); grid.len()];
        let psi = SolutionMap::from_values(grid, c.dim(), Some(c), vals).unwrap();
        let r = Residual::sup(&map_residual(&psi, &h, Mode::Standard).unwrap());
        assert_eq!(r.max(), 0.0);
    }
}
