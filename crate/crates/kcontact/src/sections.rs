//! Sections of J -> Q and J -> Q x R^k given by differentiable coefficient
//! functions, with holonomy, isotropy and maximal-coisotropy checks.

use crate::dual::{seed, Scalar, D1, D2};
use crate::error::{Error, Result};
use crate::geometry::{eval_eta, ChartSpec, DarbouxPoint, Tangent};
use std::fmt;
use std::sync::Arc;

/// Coefficients gamma^a(q) and gamma_i^a(q) of a z-independent section.
pub trait ZIndependent: Send + Sync + 'static {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    /// gamma^a, length k.
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S>;
    /// gamma_i^a flattened row-major by a, length k*n.
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S>;
    fn in_domain(&self, _q: &[f64]) -> bool {
        true
    }
}

/// Generating functions W^a(q) of a holonomic section.
pub trait Potentials: Send + Sync + 'static {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn w<S: Scalar>(&self, q: &[S]) -> Vec<S>;
    fn in_domain(&self, _q: &[f64]) -> bool {
        true
    }
}

/// Coefficients gamma_i^a(q, z) of a z-dependent section.
pub trait ZDependent: Send + Sync + 'static {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    /// gamma_i^a(q, z) flattened row-major by a, length k*n.
    fn momenta<S: Scalar>(&self, q: &[S], z: &[S]) -> Vec<S>;
    fn in_domain(&self, _q: &[f64], _z: &[f64]) -> bool {
        true
    }
}

trait ErasedZInd: Send + Sync {
    fn gz0(&self, q: &[f64]) -> Vec<f64>;
    fn gp0(&self, q: &[f64]) -> Vec<f64>;
    fn gz1(&self, q: &[D1]) -> Vec<D1>;
    fn gp1(&self, q: &[D1]) -> Vec<D1>;
    fn gz2(&self, q: &[D2]) -> Vec<D2>;
    fn gp2(&self, q: &[D2]) -> Vec<D2>;
    fn dom(&self, q: &[f64]) -> bool;
}

impl<T: ZIndependent> ErasedZInd for T {
    fn gz0(&self, q: &[f64]) -> Vec<f64> {
        self.potentials(q)
    }
    fn gp0(&self, q: &[f64]) -> Vec<f64> {
        self.momenta(q)
    }
    fn gz1(&self, q: &[D1]) -> Vec<D1> {
        self.potentials(q)
    }
    fn gp1(&self, q: &[D1]) -> Vec<D1> {
        self.momenta(q)
    }
    fn gz2(&self, q: &[D2]) -> Vec<D2> {
        self.potentials(q)
    }
    fn gp2(&self, q: &[D2]) -> Vec<D2> {
        self.momenta(q)
    }
    fn dom(&self, q: &[f64]) -> bool {
        self.in_domain(q)
    }
}

struct FromPotentials<W>(W);

impl<W: Potentials> ZIndependent for FromPotentials<W> {
    fn n(&self) -> usize {
        self.0.n()
    }
    fn k(&self) -> usize {
        self.0.k()
    }
    fn potentials<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        self.0.w(q)
    }
    fn momenta<S: Scalar>(&self, q: &[S]) -> Vec<S> {
        let (n, k) = (self.0.n(), self.0.k());
        let cols: Vec<Vec<S>> = (0..n)
            .map(|i| self.0.w(&seed(q, i)).into_iter().map(|d| d.eps).collect())
            .collect();
        (0..k)
            .flat_map(|a| (0..n).map(move |i| (a, i)))
            .map(|(a, i)| cols[i][a])
            .collect()
    }
    fn in_domain(&self, q: &[f64]) -> bool {
        self.0.in_domain(q)
    }
}

/// Type-erased z-independent section.
#[derive(Clone)]
pub struct SectionZInd {
    pub chart: ChartSpec,
    pub name: String,
    inner: Arc<dyn ErasedZInd>,
}

impl fmt::Debug for SectionZInd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectionZInd")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .finish()
    }
}

impl SectionZInd {
    pub fn new<T: ZIndependent>(name: impl Into<String>, s: T) -> Result<Self> {
        let chart = ChartSpec::new(s.n(), s.k())?;
        Ok(SectionZInd {
            chart,
            name: name.into(),
            inner: Arc::new(s),
        })
    }

    pub fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == self.chart.n && self.inner.dom(q)
    }

    fn check(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.chart.n {
            return Err(Error::Shape(format!(
                "{}: base point has wrong length",
                self.name
            )));
        }
        if !self.inner.dom(q) {
            return Err(Error::Domain(format!(
                "{}: q = {q:?} outside section domain",
                self.name
            )));
        }
        Ok(())
    }

    /// gamma(q) as a phase-space point.
    pub fn eval(&self, q: &[f64]) -> Result<DarbouxPoint> {
        self.check(q)?;
        let mut x = q.to_vec();
        x.extend(self.inner.gp0(q));
        x.extend(self.inner.gz0(q));
        DarbouxPoint::from_flat(self.chart, &x)
    }

    /// gamma at a dual base point, flat layout.
    pub fn eval_d1(&self, q: &[D1]) -> Vec<D1> {
        let mut x = q.to_vec();
        x.extend(self.inner.gp1(q));
        x.extend(self.inner.gz1(q));
        x
    }

    /// gamma at a nested-dual base point, flat layout.
    pub fn eval_d2(&self, q: &[D2]) -> Vec<D2> {
        let mut x = q.to_vec();
        x.extend(self.inner.gp2(q));
        x.extend(self.inner.gz2(q));
        x
    }

    /// Row a, column i of d gamma_j^a / d q^i is `out[a][j][i]`.
    pub fn momenta_jacobian(&self, q: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        self.check(q)?;
        let (n, k) = (self.chart.n, self.chart.k);
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|i| self.inner.gp1(&seed(q, i)).iter().map(|d| d.eps).collect())
            .collect();
        Ok((0..k)
            .map(|a| {
                (0..n)
                    .map(|j| (0..n).map(|i| cols[i][a * n + j]).collect())
                    .collect()
            })
            .collect())
    }

    /// d gamma^a / d q^i as `out[a][i]`.
    pub fn potentials_gradient(&self, q: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check(q)?;
        let (n, k) = (self.chart.n, self.chart.k);
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|i| self.inner.gz1(&seed(q, i)).iter().map(|d| d.eps).collect())
            .collect();
        Ok((0..k)
            .map(|a| (0..n).map(|i| cols[i][a]).collect())
            .collect())
    }

    /// View as a z-dependent section that ignores z.
    pub fn as_zdep(&self) -> SectionZDep {
        SectionZDep {
            chart: self.chart,
            name: self.name.clone(),
            inner: Arc::new(IgnoreZ(self.inner.clone())),
        }
    }
}

/// Holonomic section with gamma^a = W^a and gamma_i^a = dW^a/dq^i.
pub fn from_potentials<W: Potentials>(name: impl Into<String>, w: W) -> Result<SectionZInd> {
    SectionZInd::new(name, FromPotentials(w))
}

trait ErasedZDep: Send + Sync {
    fn gp0(&self, q: &[f64], z: &[f64]) -> Vec<f64>;
    fn gp1(&self, q: &[D1], z: &[D1]) -> Vec<D1>;
    fn gp2(&self, q: &[D2], z: &[D2]) -> Vec<D2>;
    fn dom(&self, q: &[f64], z: &[f64]) -> bool;
}

impl<T: ZDependent> ErasedZDep for T {
    fn gp0(&self, q: &[f64], z: &[f64]) -> Vec<f64> {
        self.momenta(q, z)
    }
    fn gp1(&self, q: &[D1], z: &[D1]) -> Vec<D1> {
        self.momenta(q, z)
    }
    fn gp2(&self, q: &[D2], z: &[D2]) -> Vec<D2> {
        self.momenta(q, z)
    }
    fn dom(&self, q: &[f64], z: &[f64]) -> bool {
        self.in_domain(q, z)
    }
}

struct IgnoreZ(Arc<dyn ErasedZInd>);

impl ErasedZDep for IgnoreZ {
    fn gp0(&self, q: &[f64], _z: &[f64]) -> Vec<f64> {
        self.0.gp0(q)
    }
    fn gp1(&self, q: &[D1], _z: &[D1]) -> Vec<D1> {
        self.0.gp1(q)
    }
    fn gp2(&self, q: &[D2], _z: &[D2]) -> Vec<D2> {
        self.0.gp2(q)
    }
    fn dom(&self, q: &[f64], _z: &[f64]) -> bool {
        self.0.dom(q)
    }
}

/// Type-erased z-dependent section (q, z) -> (q, gamma(q, z), z).
#[derive(Clone)]
pub struct SectionZDep {
    pub chart: ChartSpec,
    pub name: String,
    inner: Arc<dyn ErasedZDep>,
}

impl fmt::Debug for SectionZDep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectionZDep")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .finish()
    }
}

/// Derivatives of gamma_j^a with respect to q and z.
#[derive(Clone, Debug, PartialEq)]
pub struct ZDepJacobian {
    /// `dq[a][j][i]` = d gamma_j^a / d q^i.
    pub dq: Vec<Vec<Vec<f64>>>,
    /// `dz[a][j][b]` = d gamma_j^a / d z^b.
    pub dz: Vec<Vec<Vec<f64>>>,
}

impl SectionZDep {
    pub fn new<T: ZDependent>(name: impl Into<String>, s: T) -> Result<Self> {
        let chart = ChartSpec::new(s.n(), s.k())?;
        Ok(SectionZDep {
            chart,
            name: name.into(),
            inner: Arc::new(s),
        })
    }

    /// Split a sample `[q, z]` into its parts.
    pub fn split<'a>(&self, qz: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        if qz.len() != self.chart.n + self.chart.k {
            return Err(Error::Shape(format!(
                "{}: sample must have n + k entries",
                self.name
            )));
        }
        Ok(qz.split_at(self.chart.n))
    }

    pub fn in_domain(&self, q: &[f64], z: &[f64]) -> bool {
        q.len() == self.chart.n && z.len() == self.chart.k && self.inner.dom(q, z)
    }

    fn check(&self, q: &[f64], z: &[f64]) -> Result<()> {
        if q.len() != self.chart.n || z.len() != self.chart.k {
            return Err(Error::Shape(format!(
                "{}: (q, z) has wrong length",
                self.name
            )));
        }
        if !self.inner.dom(q, z) {
            return Err(Error::Domain(format!(
                "{}: (q, z) = ({q:?}, {z:?}) outside domain",
                self.name
            )));
        }
        Ok(())
    }

    pub fn eval(&self, q: &[f64], z: &[f64]) -> Result<DarbouxPoint> {
        self.check(q, z)?;
        let mut x = q.to_vec();
        x.extend(self.inner.gp0(q, z));
        x.extend_from_slice(z);
        DarbouxPoint::from_flat(self.chart, &x)
    }

    /// gamma at dual (q, z), flat layout.
    pub fn eval_d1(&self, q: &[D1], z: &[D1]) -> Vec<D1> {
        let mut x = q.to_vec();
        x.extend(self.inner.gp1(q, z));
        x.extend_from_slice(z);
        x
    }

    /// gamma at nested-dual (q, z), flat layout.
    pub fn eval_d2(&self, q: &[D2], z: &[D2]) -> Vec<D2> {
        let mut x = q.to_vec();
        x.extend(self.inner.gp2(q, z));
        x.extend_from_slice(z);
        x
    }

    pub fn jacobian(&self, q: &[f64], z: &[f64]) -> Result<ZDepJacobian> {
        self.check(q, z)?;
        let (n, k) = (self.chart.n, self.chart.k);
        let mut qz = q.to_vec();
        qz.extend_from_slice(z);
        let cols: Vec<Vec<f64>> = (0..n + k)
            .map(|m| {
                let s = seed(&qz, m);
                self.inner
                    .gp1(&s[..n], &s[n..])
                    .iter()
                    .map(|d| d.eps)
                    .collect()
            })
            .collect();
        let dq = (0..k)
            .map(|a| {
                (0..n)
                    .map(|j| (0..n).map(|i| cols[i][a * n + j]).collect())
                    .collect()
            })
            .collect();
        let dz = (0..k)
            .map(|a| {
                (0..n)
                    .map(|j| (0..k).map(|b| cols[n + b][a * n + j]).collect())
                    .collect()
            })
            .collect();
        Ok(ZDepJacobian { dq, dz })
    }
}

/// max |gamma_i^a - d gamma^a / d q^i| over samples.
pub fn check_holonomic(g: &SectionZInd, samples: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in samples {
        let pt = g.eval(q)?;
        let dw = g.potentials_gradient(q)?;
        for a in 0..g.chart.k {
            for i in 0..g.chart.n {
                worst = worst.max((pt.p[a][i] - dw[a][i]).abs());
            }
        }
    }
    Ok(worst)
}

/// max |d gamma_i^a / d q^j - d gamma_j^a / d q^i| over samples.
pub fn check_symmetry(g: &SectionZInd, samples: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in samples {
        let jm = g.momenta_jacobian(q)?;
        for slab in &jm {
            worst = worst.max(antisym_defect(slab));
        }
    }
    Ok(worst)
}

fn antisym_defect(m: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i + 1) {
            worst = worst.max((v - m[j][i]).abs());
        }
    }
    worst
}

/// Matrices A^a_{ij} = d gamma_j^a / d q^i + sum_b gamma_i^b d gamma_j^a / d z^b at one sample.
///
/// The section is maximally coisotropic iff every A^a is symmetric.
pub fn coisotropy_matrices(g: &SectionZDep, q: &[f64], z: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
    let pt = g.eval(q, z)?;
    let jac = g.jacobian(q, z)?;
    let (n, k) = (g.chart.n, g.chart.k);
    Ok((0..k)
        .map(|a| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            jac.dq[a][j][i]
                                + (0..k).map(|b| pt.p[b][i] * jac.dz[a][j][b]).sum::<f64>()
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

/// Largest antisymmetric part of the coisotropy matrices over samples `[q, z]`.
pub fn check_max_coisotropic(g: &SectionZDep, samples: &[Vec<f64>]) -> Result<f64> {
    if g.chart.n == 1 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for s in samples {
        let (q, z) = g.split(s)?;
        for m in coisotropy_matrices(g, q, z)? {
            worst = worst.max(antisym_defect(&m));
        }
    }
    Ok(worst)
}

/// max |d gamma_i^a / d q^j - d gamma_j^a / d q^i| at fixed z.
pub fn check_isotropic_slices(g: &SectionZDep, z: &[f64], samples: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in samples {
        let jac = g.jacobian(q, z)?;
        for slab in &jac.dq {
            worst = worst.max(antisym_defect(slab));
        }
    }
    Ok(worst)
}

/// eta evaluated on T gamma (d/dz) for k = 1; equals 1 on every section.
pub fn eta_on_lifted_reeb(g: &SectionZDep, q: &[f64], z: &[f64]) -> Result<f64> {
    if g.chart.k != 1 {
        return Err(Error::Precondition(
            "lifted Reeb contraction is defined for k = 1".into(),
        ));
    }
    let pt = g.eval(q, z)?;
    let jac = g.jacobian(q, z)?;
    let mut v = Tangent::zeros(g.chart);
    for j in 0..g.chart.n {
        v.p[0][j] = jac.dz[0][j][0];
    }
    v.z[0] = 1.0;
    Ok(eval_eta(g.chart, &pt)?[0].apply(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Const;
    impl Potentials for Const {
        fn n(&self) -> usize {
            1
        }
        fn k(&self) -> usize {
            2
        }
        fn w<S: Scalar>(&self, _q: &[S]) -> Vec<S> {
            vec![S::cst(1.0), S::cst(-2.0)]
        }
    }

    struct BadHolo;
    impl ZIndependent for BadHolo {
        fn n(&self) -> usize {
            1
        }
        fn k(&self) -> usize {
            1
        }
        fn potentials<S: Scalar>(&self, _q: &[S]) -> Vec<S> {
            vec![S::zero()]
        }
        fn momenta<S: Scalar>(&self, _q: &[S]) -> Vec<S> {
            vec![S::one()]
        }
    }

    struct Q2;
    impl ZDependent for Q2 {
        fn n(&self) -> usize {
            2
        }
        fn k(&self) -> usize {
            1
        }
        fn momenta<S: Scalar>(&self, q: &[S], _z: &[S]) -> Vec<S> {
            vec![q[1], S::zero()]
        }
    }

    struct Q2Mixed;
    impl ZDependent for Q2Mixed {
        fn n(&self) -> usize {
            2
        }
        fn k(&self) -> usize {
            1
        }
        fn momenta<S: Scalar>(&self, q: &[S], _z: &[S]) -> Vec<S> {
            vec![q[1], q[0] * q[1]]
        }
    }

    #[test]
    fn constant_potentials_give_zero_momenta() {
        let g = from_potentials("c", Const).unwrap();
        let pt = g.eval(&[0.3]).unwrap();
        assert_eq!(pt.p, vec![vec![0.0], vec![0.0]]);
        assert_eq!(pt.z, vec![1.0, -2.0]);
        assert_eq!(check_holonomic(&g, &[vec![0.3]]).unwrap(), 0.0);
    }

    #[test]
    fn constant_momentum_is_not_holonomic() {
        let g = SectionZInd::new("bad", BadHolo).unwrap();
        assert_eq!(check_holonomic(&g, &[vec![0.0], vec![2.0]]).unwrap(), 1.0);
    }

    #[test]
    fn coisotropy_defect_of_q2_section() {
        let g = SectionZDep::new("q2", Q2).unwrap();
        let samples = vec![vec![0.2, -0.4, 0.0], vec![1.0, 3.0, 2.0]];
        assert_eq!(check_max_coisotropic(&g, &samples).unwrap(), 1.0);
    }

    #[test]
    fn isotropic_slice_defect() {
        let g = SectionZDep::new("mixed", Q2Mixed).unwrap();
        for q2 in [0.0, 0.5, 2.0] {
            let d = check_isotropic_slices(&g, &[0.0], &[vec![0.7, q2]]).unwrap();
            assert!((d - (1.0 - q2).abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn n1_sections_are_coisotropic() {
        struct Any;
        impl ZDependent for Any {
            fn n(&self) -> usize {
                1
            }
            fn k(&self) -> usize {
                2
            }
            fn momenta<S: Scalar>(&self, q: &[S], z: &[S]) -> Vec<S> {
                vec![q[0] * z[0], z[1].sin()]
            }
        }
        let g = SectionZDep::new("any", Any).unwrap();
        assert_eq!(
            check_max_coisotropic(&g, &[vec![0.1, 0.2, 0.3]]).unwrap(),
            0.0
        );
        assert_eq!(
            check_isotropic_slices(&g, &[0.2, 0.3], &[vec![0.1]]).unwrap(),
            0.0
        );
    }
}
