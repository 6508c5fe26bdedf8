//! Canonical Darboux chart on the bundle of k-covelocities-momenta with action
//! variables: coordinates (q^i, p_i^a, z^a).
//!
//! Layout convention, used everywhere: momenta are stored as `p[a][i]`
//! (row = copy index a, column = base index i). The flat layout of a point or
//! tangent is `[q (n), p row-major (k*n), z (k)]`.

use crate::error::{Error, Result};
use crate::linalg;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Dimensions of the chart: base dimension `n` and number of contact components `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChartSpec {
    pub n: usize,
    pub k: usize,
}

impl ChartSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Precondition(format!(
                "chart needs n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        Ok(ChartSpec { n, k })
    }

    /// Phase-space dimension n + nk + k.
    pub fn dim(&self) -> usize {
        self.n + self.n * self.k + self.k
    }

    pub fn q_index(&self, i: usize) -> usize {
        i
    }

    pub fn p_index(&self, a: usize, i: usize) -> usize {
        self.n + a * self.n + i
    }

    pub fn z_index(&self, a: usize) -> usize {
        self.n + self.n * self.k + a
    }

    /// Dimension of the fibre of k-tangents, k * dim.
    pub fn ktangent_dim(&self) -> usize {
        self.k * self.dim()
    }

    /// Analytic dimension of the gauge kernel, (n+1)(k^2-1).
    pub fn gauge_dimension(&self) -> usize {
        (self.n + 1) * (self.k * self.k - 1)
    }
}

macro_rules! phase_blocks {
    ($name:ident, $q:ident, $p:ident, $z:ident) => {
        impl $name {
            pub fn zeros(chart: ChartSpec) -> Self {
                $name {
                    $q: vec![0.0; chart.n],
                    $p: vec![vec![0.0; chart.n]; chart.k],
                    $z: vec![0.0; chart.k],
                }
            }

            /// Build from the flat `[q, p, z]` layout.
            pub fn from_flat(chart: ChartSpec, x: &[f64]) -> Result<Self> {
                if x.len() != chart.dim() {
                    return Err(Error::Shape(format!(
                        "{}: expected {} entries, got {}",
                        stringify!($name),
                        chart.dim(),
                        x.len()
                    )));
                }
                let (n, k) = (chart.n, chart.k);
                Ok($name {
                    $q: x[..n].to_vec(),
                    $p: (0..k)
                        .map(|a| x[n + a * n..n + (a + 1) * n].to_vec())
                        .collect(),
                    $z: x[n + n * k..].to_vec(),
                })
            }

            pub fn to_flat(&self) -> Vec<f64> {
                let mut v = self.$q.clone();
                for row in &self.$p {
                    v.extend_from_slice(row);
                }
                v.extend_from_slice(&self.$z);
                v
            }

            /// Verify shapes against a chart.
            pub fn conforms(&self, chart: ChartSpec) -> Result<()> {
                let ok = self.$q.len() == chart.n
                    && self.$z.len() == chart.k
                    && self.$p.len() == chart.k
                    && self.$p.iter().all(|r| r.len() == chart.n);
                if ok {
                    Ok(())
                } else {
                    Err(Error::Shape(format!(
                        "{} does not conform to chart (n={}, k={})",
                        stringify!($name),
                        chart.n,
                        chart.k
                    )))
                }
            }

            pub fn is_finite(&self) -> bool {
                self.to_flat().iter().all(|v| v.is_finite())
            }

            pub fn norm_inf(&self) -> f64 {
                linalg::norm_inf(&self.to_flat())
            }

            pub fn add(&self, o: &Self) -> Self {
                self.zip(o, |a, b| a + b)
            }

            pub fn sub(&self, o: &Self) -> Self {
                self.zip(o, |a, b| a - b)
            }

            pub fn scale(&self, s: f64) -> Self {
                self.zip(self, |a, _| a * s)
            }

            fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
                let v: Vec<f64> = self.$q.iter().zip(&o.$q).map(|(a, b)| f(*a, *b)).collect();
                $name {
                    $q: v,
                    $p: self
                        .$p
                        .iter()
                        .zip(&o.$p)
                        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(*a, *b)).collect())
                        .collect(),
                    $z: self.$z.iter().zip(&o.$z).map(|(a, b)| f(*a, *b)).collect(),
                }
            }
        }
    };
}

/// A point (q^i, p_i^a, z^a) of the phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarbouxPoint {
    pub q: Vec<f64>,
    pub p: Vec<Vec<f64>>,
    pub z: Vec<f64>,
}

phase_blocks!(DarbouxPoint, q, p, z);

impl DarbouxPoint {
    /// Checked constructor: shapes must match the chart and entries be finite.
    pub fn new(chart: ChartSpec, q: Vec<f64>, p: Vec<Vec<f64>>, z: Vec<f64>) -> Result<Self> {
        let pt = DarbouxPoint { q, p, z };
        pt.conforms(chart)?;
        if !pt.is_finite() {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        Ok(pt)
    }
}

/// Components of a one-form at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub dq: Vec<f64>,
    pub dp: Vec<Vec<f64>>,
    pub dz: Vec<f64>,
}

phase_blocks!(Covector, dq, dp, dz);

impl Covector {
    /// Pairing with a tangent vector.
    pub fn apply(&self, v: &Tangent) -> f64 {
        self.to_flat()
            .iter()
            .zip(v.to_flat())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// A tangent vector with blocks X^i, X_i^b, X^b.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    pub q: Vec<f64>,
    pub p: Vec<Vec<f64>>,
    pub z: Vec<f64>,
}

phase_blocks!(Tangent, q, p, z);

/// k tangent vectors at a point, `comp[a]` being X_a.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KTangent {
    pub comp: Vec<Tangent>,
}

impl KTangent {
    pub fn zeros(chart: ChartSpec) -> Self {
        KTangent {
            comp: (0..chart.k).map(|_| Tangent::zeros(chart)).collect(),
        }
    }

    pub fn conforms(&self, chart: ChartSpec) -> Result<()> {
        if self.comp.len() != chart.k {
            return Err(Error::Shape(format!(
                "k-tangent has {} components, chart has k={}",
                self.comp.len(),
                chart.k
            )));
        }
        self.comp.iter().try_for_each(|c| c.conforms(chart))
    }

    /// Flat layout: components concatenated, each in the `[q, p, z]` layout.
    pub fn to_flat(&self) -> Vec<f64> {
        self.comp.iter().flat_map(|c| c.to_flat()).collect()
    }

    pub fn from_flat(chart: ChartSpec, x: &[f64]) -> Result<Self> {
        if x.len() != chart.ktangent_dim() {
            return Err(Error::Shape(format!(
                "k-tangent: expected {} entries, got {}",
                chart.ktangent_dim(),
                x.len()
            )));
        }
        let d = chart.dim();
        Ok(KTangent {
            comp: (0..chart.k)
                .map(|a| Tangent::from_flat(chart, &x[a * d..(a + 1) * d]))
                .collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, o: &KTangent) -> KTangent {
        KTangent {
            comp: self
                .comp
                .iter()
                .zip(&o.comp)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &KTangent) -> KTangent {
        KTangent {
            comp: self
                .comp
                .iter()
                .zip(&o.comp)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> KTangent {
        KTangent {
            comp: self.comp.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        linalg::norm_inf(&self.to_flat())
    }
}

/// Components of the canonical form: eta^a = dz^a - sum_i p_i^a dq^i.
pub fn eval_eta(chart: ChartSpec, pt: &DarbouxPoint) -> Result<Vec<Covector>> {
    pt.conforms(chart)?;
    Ok((0..chart.k)
        .map(|a| {
            let mut c = Covector::zeros(chart);
            c.dq = pt.p[a].iter().map(|v| -v).collect();
            c.dz[a] = 1.0;
            c
        })
        .collect())
}

/// Contraction of d eta^a with `v`, one covector per a:
/// iota_v d eta^a = sum_i (v^i dp_i^a - v_i^a dq^i).
pub fn contract_d_eta(chart: ChartSpec, v: &Tangent) -> Result<Vec<Covector>> {
    v.conforms(chart)?;
    Ok((0..chart.k)
        .map(|a| {
            let mut c = Covector::zeros(chart);
            for i in 0..chart.n {
                c.dp[a][i] = v.q[i];
                c.dq[i] = -v.p[a][i];
            }
            c
        })
        .collect())
}

/// Reeb fields R_b = d/dz^b.
pub fn reeb_fields(chart: ChartSpec) -> Vec<Tangent> {
    (0..chart.k)
        .map(|b| {
            let mut t = Tangent::zeros(chart);
            t.z[b] = 1.0;
            t
        })
        .collect()
}

/// chi(Z) = (iota_Z d eta, iota_Z eta), summed over the copies.
pub fn chi(chart: ChartSpec, pt: &DarbouxPoint, kv: &KTangent) -> Result<(Covector, f64)> {
    pt.conforms(chart)?;
    kv.conforms(chart)?;
    let mut cov = Covector::zeros(chart);
    let mut real = 0.0;
    for (a, za) in kv.comp.iter().enumerate() {
        for i in 0..chart.n {
            cov.dp[a][i] += za.q[i];
            cov.dq[i] -= za.p[a][i];
            real -= pt.p[a][i] * za.q[i];
        }
        real += za.z[a];
    }
    Ok((cov, real))
}

/// Matrix of chi on the k-tangent fibre: (dim + 1) rows by k * dim columns.
pub fn chi_matrix(chart: ChartSpec, pt: &DarbouxPoint) -> Result<DMatrix<f64>> {
    pt.conforms(chart)?;
    let cols = chart.ktangent_dim();
    let mut m = DMatrix::zeros(chart.dim() + 1, cols);
    let mut unit = vec![0.0; cols];
    for c in 0..cols {
        unit[c] = 1.0;
        let kv = KTangent::from_flat(chart, &unit)?;
        let (cov, real) = chi(chart, pt, &kv)?;
        for (r, v) in cov.to_flat().into_iter().enumerate() {
            m[(r, c)] = v;
        }
        m[(chart.dim(), c)] = real;
        unit[c] = 0.0;
    }
    Ok(m)
}

/// Null-space dimension of chi computed from singular values.
pub fn chi_null_deficiency(chart: ChartSpec, pt: &DarbouxPoint) -> Result<usize> {
    let m = chi_matrix(chart, pt)?;
    Ok(m.ncols() - linalg::numeric_rank(&m))
}
