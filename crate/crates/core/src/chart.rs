//! Coordinate-chart backend with finite-difference derivatives.
//!
//! Metrics are closures `x ↦ g_{ij}(x)` on a coordinate box. Christoffel
//! symbols come from fourth-order central differences of the metric and
//! curvature from differences of the Christoffel symbols, so a Ricci
//! evaluation at `x` needs the box to contain `x ± 4h` in every direction.
//!
//! Coordinate conventions match the frame backend: `Γ^k_{ij}` stores
//! `∇_{∂_i} ∂_j = Γ^k_{ij} ∂_k` at index `[i, j, k]`, and lowered curvature
//! `R_{ijkl} = g(R(∂_i, ∂_j) ∂_k, ∂_l)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::FrameGeometry;
use crate::error::{Error, Result};
use crate::frame::{permutation_sign, Tensor};

pub type MetricFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
/// `x ↦ θ` with `θ[(a, i)] = e^a(∂_i)`.
pub type CoframeFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
pub type OneFormFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Fourth-order central difference weights for offsets `±h, ±2h`.
const FD_OFFSETS: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

#[derive(Clone)]
pub struct ChartGeometry {
    name: String,
    dim: usize,
    metric: MetricFn,
    lower: Vec<f64>,
    upper: Vec<f64>,
    step: f64,
}

impl std::fmt::Debug for ChartGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChartGeometry")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("step", &self.step)
            .finish()
    }
}

impl ChartGeometry {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        metric: MetricFn,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("chart dimension must be at least 2"));
        }
        if lower.len() != dim || upper.len() != dim {
            return Err(Error::invalid("chart box does not match the dimension"));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(a, b)| a.partial_cmp(b) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::invalid("chart box is empty"));
        }
        let chart = ChartGeometry {
            name: name.into(),
            dim,
            metric,
            lower,
            upper,
            step: DEFAULT_STEP,
        };
        let centre: Vec<f64> = chart
            .lower
            .iter()
            .zip(&chart.upper)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        chart.metric(&centre)?;
        Ok(chart)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::invalid("finite-difference step must be positive"));
        }
        self.step = step;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    pub fn metric_fn(&self) -> &MetricFn {
        &self.metric
    }

    fn check_inside(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::invalid("point has the wrong dimension"));
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi < self.lower[i] || xi > self.upper[i] || !xi.is_finite() {
                return Err(Error::Domain(format!(
                    "{}: coordinate {i} = {xi} leaves [{}, {}]",
                    self.name, self.lower[i], self.upper[i]
                )));
            }
        }
        Ok(())
    }

    /// Metric at `x`, checked for symmetry and positive definiteness.
    pub fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_inside(x)?;
        let g = (self.metric)(x);
        if g.nrows() != self.dim || g.ncols() != self.dim {
            return Err(Error::invalid("metric closure returned the wrong shape"));
        }
        let asym = (&g - g.transpose()).amax();
        if asym > 1e-12 * g.amax().max(1.0) {
            return Err(Error::Domain(format!("{}: metric not symmetric at {x:?}", self.name)));
        }
        let min_ev = g.clone().symmetric_eigenvalues().min();
        if min_ev.is_nan() || min_ev <= 0.0 {
            return Err(Error::Domain(format!(
                "{}: metric not positive definite at {x:?} (eigenvalue {min_ev})",
                self.name
            )));
        }
        Ok(g)
    }

    /// Fourth-order derivative of a vector-valued quantity along `dir`.
    fn derivative<F>(&self, x: &[f64], dir: usize, f: &F) -> Result<Vec<f64>>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>>,
    {
        let h = self.step;
        let mut acc: Option<Vec<f64>> = None;
        let mut y = x.to_vec();
        for (off, w) in FD_OFFSETS {
            y[dir] = x[dir] + off * h;
            let v = f(&y)?;
            let acc = acc.get_or_insert_with(|| vec![0.0; v.len()]);
            for (a, b) in acc.iter_mut().zip(v) {
                *a += w * b;
            }
        }
        Ok(acc.unwrap().into_iter().map(|v| v / (12.0 * h)).collect())
    }

    /// `∂_k g_{ij}` stored at `[k][i*n + j]`.
    fn metric_derivatives(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_inside(x)?;
        (0..self.dim)
            .map(|k| {
                self.derivative(x, k, &|y: &[f64]| {
                    Ok(self.metric(y)?.iter().copied().collect::<Vec<_>>())
                })
            })
            .collect()
    }

    /// `Γ^k_{ij}` at index `[i, j, k]`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Tensor> {
        let n = self.dim;
        let g = self.metric(x)?;
        let ginv = g.try_inverse().ok_or_else(|| Error::Domain("singular metric".into()))?;
        let dg = self.metric_derivatives(x)?;
        // nalgebra stores column-major: element (i, j) at j*n + i
        let d = |k: usize, i: usize, j: usize| dg[k][j * n + i];
        Ok(Tensor::from_fn(n, 3, |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            0.5 * (0..n)
                .map(|l| ginv[(k, l)] * (d(i, j, l) + d(j, i, l) - d(l, i, j)))
                .sum::<f64>()
        }))
    }

    /// Lowered curvature `R_{ijkl}` of the connection with coefficients
    /// `coeffs(y)[i, j, k] = Γ^k_{ij}`.
    pub fn curvature_of<F>(&self, x: &[f64], coeffs: F) -> Result<Tensor>
    where
        F: Fn(&[f64]) -> Result<Tensor>,
    {
        let n = self.dim;
        let g = self.metric(x)?;
        let gam = coeffs(x)?;
        let dgam: Vec<Vec<f64>> = (0..n)
            .map(|a| self.derivative(x, a, &|y: &[f64]| Ok(coeffs(y)?.data().to_vec())))
            .collect::<Result<_>>()?;
        let flat = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        // R^l_{k i j} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}
        let mut up = Tensor::zeros(n, 4);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = dgam[i][flat(j, k, l)] - dgam[j][flat(i, k, l)];
                        for m in 0..n {
                            s += gam.get(&[i, m, l]) * gam.get(&[j, k, m]) - gam.get(&[j, m, l]) * gam.get(&[i, k, m]);
                        }
                        up.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        Ok(Tensor::from_fn(n, 4, |idx| {
            (0..n)
                .map(|m| up.get(&[idx[0], idx[1], idx[2], m]) * g[(m, idx[3])])
                .sum()
        }))
    }

    /// Levi-Civita curvature `R_{ijkl}` in coordinates.
    pub fn riemann(&self, x: &[f64]) -> Result<Tensor> {
        self.curvature_of(x, |y| self.christoffel(y))
    }

    pub fn ricci(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(ricci_from_lowered(&self.riemann(x)?, &self.metric(x)?))
    }

    pub fn scalar(&self, x: &[f64]) -> Result<f64> {
        let ginv = self.metric(x)?.try_inverse().unwrap();
        Ok((ginv * self.ricci(x)?).trace())
    }

    /// Columns are an orthonormal frame in coordinates: `Fᵀ g F = I`,
    /// with `F = L^{-T}` for the Cholesky factor `g = L Lᵀ`.
    pub fn orthonormal_frame(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric(x)?;
        let l = g
            .cholesky()
            .ok_or_else(|| Error::Domain("metric has no Cholesky factor".into()))?
            .l();
        Ok(l.transpose().try_inverse().unwrap())
    }

    /// `(∇_{∂_i} θ)_j = ∂_i θ_j − Γ^k_{ij} θ_k`, not symmetrised.
    pub fn covariant_derivative(&self, x: &[f64], theta: &OneFormFn) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let gam = self.christoffel(x)?;
        let th = self.eval_form(x, theta)?;
        let dth: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                self.derivative(x, i, &|y: &[f64]| {
                    Ok(self.eval_form(y, theta)?.iter().copied().collect())
                })
            })
            .collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(n, n, |i, j| {
            dth[i][j] - (0..n).map(|k| gam.get(&[i, j, k]) * th[k]).sum::<f64>()
        }))
    }

    /// `(dθ)_{ij} = ∂_i θ_j − ∂_j θ_i`.
    pub fn exterior_derivative(&self, x: &[f64], theta: &OneFormFn) -> Result<DMatrix<f64>> {
        let nab = self.covariant_derivative(x, theta)?;
        Ok(&nab - nab.transpose())
    }

    /// `δθ = −g^{ij} (∇_i θ)_j`.
    pub fn codifferential(&self, x: &[f64], theta: &OneFormFn) -> Result<f64> {
        let ginv = self.metric(x)?.try_inverse().unwrap();
        let nab = self.covariant_derivative(x, theta)?;
        Ok(-ginv.component_mul(&nab).sum())
    }

    fn eval_form(&self, x: &[f64], theta: &OneFormFn) -> Result<DVector<f64>> {
        self.check_inside(x)?;
        let v = theta(x);
        if v.len() != self.dim {
            return Err(Error::invalid("1-form closure returned the wrong length"));
        }
        Ok(v)
    }

    /// Coefficients of `∇^α = ∇^g − ½ H^♯` with `H = ∗α`, as in
    /// [`ChartGeometry::christoffel`]. Dimension four, coordinates positively
    /// oriented.
    pub fn torsion_coefficients(&self, x: &[f64], alpha: &OneFormFn) -> Result<Tensor> {
        if self.dim != 4 {
            return Err(Error::invalid("torsion connection needs dimension 4"));
        }
        let g = self.metric(x)?;
        let ginv = g.clone().try_inverse().unwrap();
        let vol = g.determinant().sqrt();
        let a = self.eval_form(x, alpha)?;
        let a_up = &ginv * &a;
        let h = Tensor::from_fn(4, 3, |idx| {
            vol * (0..4)
                .map(|m| a_up[m] * permutation_sign(&[m, idx[0], idx[1], idx[2]]))
                .sum::<f64>()
        });
        let gam = self.christoffel(x)?;
        Ok(Tensor::from_fn(4, 3, |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            gam.get(idx) - 0.5 * (0..4).map(|l| ginv[(k, l)] * h.get(&[i, j, l])).sum::<f64>()
        }))
    }

    /// Lowered curvature of `∇^α` in coordinates.
    pub fn torsion_curvature(&self, x: &[f64], alpha: &OneFormFn) -> Result<Tensor> {
        self.curvature_of(x, |y| self.torsion_coefficients(y, alpha))
    }

    /// `count` points drawn uniformly from the box shrunk by `margin` on
    /// each side.
    pub fn sample_points(&self, count: usize, seed: u64, margin: f64) -> Result<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi): (Vec<f64>, Vec<f64>) = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| (a + margin, b - margin))
            .unzip();
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::Domain("sampling margin exceeds the chart box".into()));
        }
        Ok((0..count)
            .map(|_| lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..*b)).collect())
            .collect())
    }

    /// Margin that keeps nested curvature stencils inside the box.
    pub fn curvature_margin(&self) -> f64 {
        5.0 * self.step
    }
}

/// `Ric_{jk} = g^{il} R_{ijkl}`.
pub fn ricci_from_lowered(r: &Tensor, g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let ginv = g.clone().try_inverse().unwrap();
    DMatrix::from_fn(n, n, |j, k| {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                s += ginv[(i, l)] * r.get(&[i, j, k, l]);
            }
        }
        s
    })
}

/// Components of a covariant tensor in the orthonormal frame `f`.
pub fn to_frame(t: &Tensor, f: &DMatrix<f64>) -> Tensor {
    let n = t.dim();
    let mut out = t.clone();
    for slot in 0..t.rank() {
        out = Tensor::from_fn(n, t.rank(), |idx| {
            let mut j = idx.to_vec();
            (0..n)
                .map(|i| {
                    j[slot] = i;
                    f[(i, idx[slot])] * out.get(&j)
                })
                .sum()
        });
    }
    out
}

pub fn matrix_to_frame(m: &DMatrix<f64>, f: &DMatrix<f64>) -> DMatrix<f64> {
    f.transpose() * m * f
}

pub fn vector_to_frame(v: &DVector<f64>, f: &DMatrix<f64>) -> Vec<f64> {
    (f.transpose() * v).iter().copied().collect()
}

/// `Ric^D = Ric − 2(∇θ − θ⊗θ) + (δθ − 2|θ|²) g` of the Weyl connection with
/// Lee form `θ`, in coordinates.
pub fn weyl_ricci(chart: &ChartGeometry, theta: &OneFormFn, x: &[f64]) -> Result<DMatrix<f64>> {
    let g = chart.metric(x)?;
    let ginv = g.clone().try_inverse().unwrap();
    let ric = chart.ricci(x)?;
    let th = chart.eval_form(x, theta)?;
    let nab = chart.covariant_derivative(x, theta)?;
    let delta = chart.codifferential(x, theta)?;
    let norm = (th.transpose() * &ginv * &th)[(0, 0)];
    Ok(ric - (nab - &th * th.transpose()) * 2.0 + &g * (delta - 2.0 * norm))
}

/// Euclidean space on `[-1, 1]^dim`.
pub fn euclidean(dim: usize) -> Result<ChartGeometry> {
    ChartGeometry::new(
        "euclidean",
        dim,
        Arc::new(move |_| DMatrix::identity(dim, dim)),
        vec![-1.0; dim],
        vec![1.0; dim],
    )
}

/// `ℝ × S³` with the sphere of radius 2 (sectional curvature ¼) in Hopf
/// coordinates `(t, η, ξ₁, ξ₂)`:
/// `g = dt² + 4(dη² + sin²η dξ₁² + cos²η dξ₂²)`.
pub fn round_s3_product() -> Result<ChartGeometry> {
    ChartGeometry::new(
        "r_x_s3_hopf",
        4,
        Arc::new(|x: &[f64]| {
            let (s, c) = x[1].sin_cos();
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 4.0 * s * s, 4.0 * c * c]))
        }),
        vec![-1.0, 0.3, -1.0, -1.0],
        vec![1.0, 1.2, 1.0, 1.0],
    )
}

/// Left-invariant metric of a frame geometry in coordinates of the second
/// kind `x ↦ exp(x₁e₁)⋯exp(xₙeₙ)` on `[-½, ½]^n`. Returns the chart and the
/// coframe closure `x ↦ θ` with `θ[(a, i)] = e^a(∂_i)`.
pub fn lie_group_chart(geom: &FrameGeometry) -> Result<(ChartGeometry, CoframeFn)> {
    let n = geom.dim();
    let ads: Vec<DMatrix<f64>> = (0..n).map(|a| geom.ad(a)).collect();
    let coframe = Arc::new(move |x: &[f64]| {
        let mut theta = DMatrix::zeros(n, n);
        let mut acc = DMatrix::identity(n, n);
        for i in (0..n).rev() {
            theta.set_column(i, &acc.column(i));
            acc = &acc * (&ads[i] * -x[i]).exp();
        }
        theta
    });
    let cf = coframe.clone();
    let chart = ChartGeometry::new(
        format!("lie_group_{n}d"),
        n,
        Arc::new(move |x: &[f64]| {
            let t = cf(x);
            t.transpose() * t
        }),
        vec![-0.5; n],
        vec![0.5; n],
    )?;
    Ok((chart, coframe))
}
