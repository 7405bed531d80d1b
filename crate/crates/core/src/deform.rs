//! Linearized NS-NS equations on left-invariant tensors of `ℝ × SU(2)`.
//!
//! On invariant data every differential operator is a matrix built from the
//! structure constants, so the infinitesimal deformation problem becomes a
//! finite linear system on the 14-dimensional space of pairs `(τ, η)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_tensor, levi_civita, Connection, CurvatureTensor, FrameGeometry};
use crate::error::{Error, Result};
use crate::frame::max_abs;
use crate::models::round_s3;

/// Singular values below this fraction of the largest span the kernel.
pub const KERNEL_RTOL: f64 = 1e-10;

pub const ROUND_S1XSU2: &str = "round-s1xsu2";

/// A symmetric 2-tensor with constant frame components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSymTensor {
    dim: usize,
    components: Vec<f64>,
}

impl InvariantSymTensor {
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::invalid("tensor must be square"));
        }
        let defect = max_abs(&(m - m.transpose()));
        if defect > 1e-12 {
            return Err(Error::invalid(format!("tensor is not symmetric (defect {defect:e})")));
        }
        Ok(InvariantSymTensor {
            dim: n,
            components: m.iter().copied().collect(),
        })
    }

    /// From the `n(n+1)/2` upper-triangular components in row order.
    pub fn from_upper(dim: usize, v: &[f64]) -> Result<Self> {
        if v.len() != sym_dim(dim) {
            return Err(Error::invalid(format!(
                "expected {} components, got {}",
                sym_dim(dim),
                v.len()
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (idx, (i, j)) in upper_pairs(dim).into_iter().enumerate() {
            m[(i, j)] = v[idx];
            m[(j, i)] = v[idx];
        }
        InvariantSymTensor::from_matrix(&m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(self.dim, self.dim, &self.components)
    }

    pub fn upper(&self) -> Vec<f64> {
        let m = self.matrix();
        upper_pairs(self.dim).into_iter().map(|(i, j)| m[(i, j)]).collect()
    }

    pub fn trace(&self) -> f64 {
        self.matrix().trace()
    }

    pub fn is_trace_free(&self, tol: f64) -> bool {
        self.trace().abs() <= tol
    }

    /// `Σ τ_ij σ_ij`.
    pub fn inner(&self, other: &InvariantSymTensor) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }
}

fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// `(∇_{e_i} τ)_{jk} = −Γ_{ijm} τ_{mk} − Γ_{ikm} τ_{jm}`.
pub fn nabla_tensor(lc: &Connection, i: usize, tau: &DMatrix<f64>) -> DMatrix<f64> {
    let n = lc.dim();
    let g = DMatrix::from_fn(n, n, |j, m| lc.gamma(i, j, m));
    -(&g * tau + tau * g.transpose())
}

/// `(∇_{e_i} β)_j = −Γ_{ijm} β_m`.
pub fn nabla_one_form(lc: &Connection, i: usize, beta: &DVector<f64>) -> DVector<f64> {
    let n = lc.dim();
    let g = DMatrix::from_fn(n, n, |j, m| lc.gamma(i, j, m));
    -(g * beta)
}

/// `∇*∇τ = −Σ_i (∇_{e_i}∇_{e_i} τ − ∇_{∇_{e_i} e_i} τ)`.
pub fn rough_laplacian(lc: &Connection, tau: &DMatrix<f64>) -> DMatrix<f64> {
    let n = lc.dim();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out -= nabla_tensor(lc, i, &nabla_tensor(lc, i, tau));
        for m in 0..n {
            out += nabla_tensor(lc, m, tau) * lc.gamma(i, i, m);
        }
    }
    out
}

pub fn rough_laplacian_one_form(lc: &Connection, beta: &DVector<f64>) -> DVector<f64> {
    let n = lc.dim();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        out -= nabla_one_form(lc, i, &nabla_one_form(lc, i, beta));
        for m in 0..n {
            out += nabla_one_form(lc, m, beta) * lc.gamma(i, i, m);
        }
    }
    out
}

/// `o(τ)_{ab} = Σ R_{iabl} τ_{il}`, normalized so that `o(g) = Ric`.
pub fn curvature_action(r: &CurvatureTensor, tau: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.dim();
    DMatrix::from_fn(n, n, |a, b| {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                s += r.get(i, a, b, l) * tau[(i, l)];
            }
        }
        s
    })
}

/// `(∇*τ)_j = −Σ_i (∇_{e_i} τ)_{ij}`.
pub fn divergence(lc: &Connection, tau: &DMatrix<f64>) -> DVector<f64> {
    let n = lc.dim();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        let d = nabla_tensor(lc, i, tau);
        for j in 0..n {
            out[j] -= d[(i, j)];
        }
    }
    out
}

/// `δβ = −Σ_i (∇_{e_i} β)_i`.
pub fn codifferential(lc: &Connection, beta: &DVector<f64>) -> f64 {
    -(0..lc.dim()).map(|i| nabla_one_form(lc, i, beta)[i]).sum::<f64>()
}

/// `δ*β`, the symmetrized covariant derivative.
pub fn symmetrized_derivative(lc: &Connection, beta: &DVector<f64>) -> DMatrix<f64> {
    let n = lc.dim();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d.set_row(i, &nabla_one_form(lc, i, beta).transpose());
    }
    (&d + d.transpose()) * 0.5
}

/// `(ℒ_X g)_{ik} = Σ_j X_j (Γ_{ijk} + Γ_{kji})` for an invariant vector field.
pub fn lie_derivative_metric(lc: &Connection, x: &DVector<f64>) -> DMatrix<f64> {
    let n = lc.dim();
    DMatrix::from_fn(n, n, |i, k| {
        (0..n).map(|j| x[j] * (lc.gamma(i, j, k) + lc.gamma(k, j, i))).sum()
    })
}

/// `(ℒ_X τ)_{jk} = −τ([X, e_j], e_k) − τ(e_j, [X, e_k])`.
pub fn lie_derivative_tensor(geom: &FrameGeometry, x: &DVector<f64>, tau: &DMatrix<f64>) -> DMatrix<f64> {
    let n = geom.dim();
    let ad = (0..n).fold(DMatrix::zeros(n, n), |acc, a| acc + geom.ad(a) * x[a]);
    // ad[(m, j)] = c_{x j m}
    -(ad.transpose() * tau + tau * &ad)
}

/// `Δ_L τ = ∇*∇τ + Ric∘τ + τ∘Ric − 2 o(τ)` on any frame geometry.
pub fn lichnerowicz(geom: &FrameGeometry, tau: &DMatrix<f64>) -> DMatrix<f64> {
    let lc = levi_civita(geom);
    let r = curvature_tensor(&lc);
    let ric = r.ricci();
    rough_laplacian(&lc, tau) + &ric * tau + tau * &ric - curvature_action(&r, tau) * 2.0
}

/// Whether `e0` is central, so the geometry is `ℝ × Σ` with `φ = e0` parallel.
pub fn is_line_product(geom: &FrameGeometry) -> bool {
    let n = geom.dim();
    (0..n).all(|j| (0..n).all(|k| geom.c(0, j, k) == 0.0 && geom.c(j, k, 0) == 0.0))
}

fn require_product(geom: &FrameGeometry) -> Result<()> {
    if geom.dim() != 4 || !is_line_product(geom) {
        return Err(Error::invalid("expected a 4-dimensional product ℝ × Σ with e0 central"));
    }
    Ok(())
}

pub fn lichnerowicz_invariant(geom: &FrameGeometry, tau: &InvariantSymTensor) -> Result<InvariantSymTensor> {
    require_product(geom)?;
    if tau.dim() != 4 {
        return Err(Error::invalid("tensor must be 4-dimensional"));
    }
    let out = lichnerowicz(geom, &tau.matrix());
    InvariantSymTensor::from_matrix(&((&out + out.transpose()) * 0.5))
}

/// The matrix of a linear map on symmetric tensors in upper-triangular
/// coordinates.
pub fn operator_matrix(dim: usize, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> DMatrix<f64> {
    let pairs = upper_pairs(dim);
    let mut m = DMatrix::zeros(pairs.len(), pairs.len());
    for (col, &(i, j)) in pairs.iter().enumerate() {
        let mut e = DMatrix::zeros(dim, dim);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        let img = f(&e);
        for (row, &(a, b)) in pairs.iter().enumerate() {
            m[(row, col)] = img[(a, b)];
        }
    }
    m
}

/// `τ = 𝔣 φ⊗φ + φ⊙β + τ^⊥` with `φ = e0` and `φ⊙β = φ⊗β + β⊗φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauDecomposition {
    pub f: f64,
    /// Fiber components of `β`.
    pub beta: Vec<f64>,
    /// The fiber block.
    pub tau_perp: Vec<Vec<f64>>,
}

impl TauDecomposition {
    pub fn reassemble(&self) -> DMatrix<f64> {
        let n = self.beta.len() + 1;
        let mut m = DMatrix::zeros(n, n);
        m[(0, 0)] = self.f;
        for (a, b) in self.beta.iter().enumerate() {
            m[(0, a + 1)] = *b;
            m[(a + 1, 0)] = *b;
        }
        for (a, row) in self.tau_perp.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                m[(a + 1, b + 1)] = *v;
            }
        }
        m
    }

    pub fn tau_perp_matrix(&self) -> DMatrix<f64> {
        let n = self.beta.len();
        DMatrix::from_fn(n, n, |a, b| self.tau_perp[a][b])
    }
}

pub fn decompose_tau(tau: &InvariantSymTensor) -> TauDecomposition {
    let m = tau.matrix();
    let n = tau.dim();
    TauDecomposition {
        f: m[(0, 0)],
        beta: (1..n).map(|a| m[(0, a)]).collect(),
        tau_perp: (1..n).map(|a| (1..n).map(|b| m[(a, b)]).collect()).collect(),
    }
}

/// The linearized NS-NS operator and the slice conditions as matrices on
/// `(τ, η)`, with `τ` in upper-triangular coordinates followed by `η`.
#[derive(Clone, Debug)]
pub struct DeformationSystem {
    geometry: FrameGeometry,
    fiber: FrameGeometry,
    /// `½Δ_Lτ − 2δ*δτ + ½(η⊗φ + φ⊗η) − ½τ`.
    pub d_e1: DMatrix<f64>,
    /// `ℒ_{η♯}g − ℒ_{(φ⌟τ)♯}g + ℒ_{φ♯}τ`.
    pub d_e2: DMatrix<f64>,
    /// `dη`, upper-triangular components.
    pub d_e3: DMatrix<f64>,
    /// `2g(η, φ) − τ(φ, φ)`.
    pub d_e4: DMatrix<f64>,
    /// `Δ_Lτ + 2λ φ⊗φ − τ` with `λ = η(φ♯)`.
    pub reduced_e1: DMatrix<f64>,
    /// `ℒ_{(φ⌟τ)♯}g − ℒ_{φ♯}τ`.
    pub lie_compatibility: DMatrix<f64>,
    /// `(∇*τ)`.
    pub divergence: DMatrix<f64>,
    /// `δη`.
    pub codifferential: DMatrix<f64>,
    /// `Tr τ`.
    pub trace: DMatrix<f64>,
    /// `η − η(φ♯)φ`.
    pub eta_along_phi: DMatrix<f64>,
}

fn tau_dim(n: usize) -> usize {
    sym_dim(n)
}

impl DeformationSystem {
    pub fn new(geometry: FrameGeometry) -> Result<Self> {
        require_product(&geometry)?;
        let n = 4;
        let st = tau_dim(n);
        let cols = st + n;
        let lc = levi_civita(&geometry);
        let pairs = upper_pairs(n);
        let antis: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let phi = {
            let mut v = DVector::zeros(n);
            v[0] = 1.0;
            v
        };
        let phi_phi = &phi * phi.transpose();

        let unpack = |x: &DVector<f64>| -> (DMatrix<f64>, DVector<f64>) {
            let mut tau = DMatrix::zeros(n, n);
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                tau[(i, j)] = x[idx];
                tau[(j, i)] = x[idx];
            }
            (tau, x.rows(st, n).into_owned())
        };
        let sym_rows = |m: &DMatrix<f64>| -> Vec<f64> { pairs.iter().map(|&(i, j)| m[(i, j)]).collect() };

        // assemble every block column by column
        type Block<'a> = dyn Fn(&DMatrix<f64>, &DVector<f64>) -> Vec<f64> + 'a;
        let assemble = |rows: usize, f: &Block| {
            let mut m = DMatrix::zeros(rows, cols);
            for c in 0..cols {
                let mut x = DVector::zeros(cols);
                x[c] = 1.0;
                let (tau, eta) = unpack(&x);
                for (r, v) in f(&tau, &eta).into_iter().enumerate() {
                    m[(r, c)] = v;
                }
            }
            m
        };

        let lichn = |tau: &DMatrix<f64>| lichnerowicz(&geometry, tau);
        let x_of = |tau: &DMatrix<f64>| tau.row(0).transpose();
        let sym_outer = |eta: &DVector<f64>| eta * phi.transpose() + &phi * eta.transpose();

        let d_e1 = assemble(st, &|tau, eta| {
            let dd = symmetrized_derivative(&lc, &divergence(&lc, tau));
            let m = lichn(tau) * 0.5 - dd * 2.0 + sym_outer(eta) * 0.5 - tau * 0.5;
            sym_rows(&m)
        });
        let d_e2 = assemble(st, &|tau, eta| {
            let m = lie_derivative_metric(&lc, eta) - lie_derivative_metric(&lc, &x_of(tau))
                + lie_derivative_tensor(&geometry, &phi, tau);
            sym_rows(&m)
        });
        let d_e3 = assemble(antis.len(), &|_, eta| {
            let d = geometry.d_one_form(eta.as_slice());
            antis.iter().map(|&(i, j)| d[(i, j)]).collect()
        });
        let d_e4 = assemble(1, &|tau, eta| vec![2.0 * eta.dot(&phi) - tau[(0, 0)]]);
        let reduced_e1 = assemble(st, &|tau, eta| {
            let lambda = eta.dot(&phi);
            sym_rows(&(lichn(tau) + &phi_phi * (2.0 * lambda) - tau))
        });
        let lie_compatibility = assemble(st, &|tau, _| {
            let m = lie_derivative_metric(&lc, &x_of(tau)) - lie_derivative_tensor(&geometry, &phi, tau);
            sym_rows(&m)
        });
        let divergence_m = assemble(n, &|tau, _| divergence(&lc, tau).iter().copied().collect());
        let codiff = assemble(1, &|_, eta| vec![codifferential(&lc, eta)]);
        let trace = assemble(1, &|tau, _| vec![tau.trace()]);
        let eta_along_phi = assemble(n - 1, &|_, eta| (1..n).map(|a| eta[a]).collect());

        let fiber = fiber_of(&geometry)?;
        Ok(DeformationSystem {
            geometry,
            fiber,
            d_e1,
            d_e2,
            d_e3,
            d_e4,
            reduced_e1,
            lie_compatibility,
            divergence: divergence_m,
            codifferential: codiff,
            trace,
            eta_along_phi,
        })
    }

    /// `ℝ × SU(2)` with the round metric of sectional curvature `¼` and `φ = dt`.
    pub fn round_s1xsu2() -> Result<Self> {
        DeformationSystem::new(round_s3(1.0)?.product_with_line()?)
    }

    pub fn model(name: &str) -> Result<Self> {
        match name {
            ROUND_S1XSU2 => DeformationSystem::round_s1xsu2(),
            other => Err(Error::invalid(format!(
                "unknown deformation model {other:?}; known: {ROUND_S1XSU2}"
            ))),
        }
    }

    pub fn geometry(&self) -> &FrameGeometry {
        &self.geometry
    }

    pub fn fiber(&self) -> &FrameGeometry {
        &self.fiber
    }

    pub fn unknowns(&self) -> usize {
        self.d_e1.ncols()
    }

    /// The system `{Δ_Lτ + 2λφ⊗φ − τ, ℒ_{(φ⌟τ)♯}g − ℒ_{φ♯}τ, ∇*τ, Tr τ, η − λφ}`.
    pub fn reduced_stack(&self) -> DMatrix<f64> {
        stack(&[
            &self.reduced_e1,
            &self.lie_compatibility,
            &self.divergence,
            &self.trace,
            &self.eta_along_phi,
        ])
    }

    /// The full differential together with the slice and trace conditions.
    pub fn full_stack(&self) -> DMatrix<f64> {
        stack(&[
            &self.d_e1,
            &self.d_e2,
            &self.d_e3,
            &self.d_e4,
            &self.divergence,
            &self.codifferential,
            &self.trace,
        ])
    }
}

fn fiber_of(geom: &FrameGeometry) -> Result<FrameGeometry> {
    let n = geom.dim();
    let mut entries = Vec::new();
    for (i, j, k, c) in geom.brackets() {
        if i > 0 && j > 0 && k > 0 {
            entries.push((i - 1, j - 1, k - 1, c));
        }
    }
    FrameGeometry::new(crate::frame::Frame::standard(n - 1)?, &entries)
}

fn stack(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks[0].ncols();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        m.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    m
}

/// Orthonormal basis of the nullspace, as columns.
pub fn nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.max();
    let cut = KERNEL_RTOL * smax.max(1.0);
    let cols: Vec<_> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cut)
        .map(|i| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelElement {
    pub tau: InvariantSymTensor,
    pub eta: Vec<f64>,
    pub lambda: f64,
    pub decomposition: TauDecomposition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub model: String,
    pub unknowns: usize,
    pub dimension: usize,
    pub basis: Vec<KernelElement>,
    pub max_lambda: f64,
    pub max_f: f64,
    pub max_tau_perp: f64,
    /// Rank of the span of the `β` components.
    pub beta_rank: usize,
}

fn kernel_report(model: &str, sys: &DeformationSystem, kernel: &DMatrix<f64>) -> Result<KernelReport> {
    let n = 4;
    let st = tau_dim(n);
    let mut basis = Vec::new();
    let (mut max_lambda, mut max_f, mut max_perp) = (0.0f64, 0.0f64, 0.0f64);
    let mut betas = Vec::new();
    for col in kernel.column_iter() {
        let tau = InvariantSymTensor::from_upper(n, &col.as_slice()[..st])?;
        let eta: Vec<f64> = col.as_slice()[st..].to_vec();
        let decomposition = decompose_tau(&tau);
        max_lambda = max_lambda.max(eta[0].abs());
        max_f = max_f.max(decomposition.f.abs());
        max_perp = max_perp.max(max_abs(&decomposition.tau_perp_matrix()));
        betas.push(DVector::from_vec(decomposition.beta.clone()));
        basis.push(KernelElement {
            tau,
            lambda: eta[0],
            eta,
            decomposition,
        });
    }
    let beta_rank = if betas.is_empty() {
        0
    } else {
        DMatrix::from_columns(&betas).rank(1e-8)
    };
    Ok(KernelReport {
        model: model.to_string(),
        unknowns: sys.unknowns(),
        dimension: basis.len(),
        basis,
        max_lambda,
        max_f,
        max_tau_perp: max_perp,
        beta_rank,
    })
}

/// Kernel of the reduced system on the invariant slice.
pub fn essential_kernel(sys: &DeformationSystem) -> Result<KernelReport> {
    kernel_report(ROUND_S1XSU2, sys, &nullspace(&sys.reduced_stack()))
}

/// Kernel of the full differential with the slice conditions.
pub fn full_kernel(sys: &DeformationSystem) -> Result<KernelReport> {
    kernel_report(ROUND_S1XSU2, sys, &nullspace(&sys.full_stack()))
}

/// Matrix of `∇*∇` on invariant 1-forms.
pub fn rough_laplacian_matrix(geom: &FrameGeometry) -> DMatrix<f64> {
    let lc = levi_civita(geom);
    let n = geom.dim();
    let cols: Vec<_> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            rough_laplacian_one_form(&lc, &e)
        })
        .collect();
    DMatrix::from_columns(&cols)
}
