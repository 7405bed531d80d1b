//! Connections and curvature of left-invariant orthonormal frames.
//!
//! A [`FrameGeometry`] is a Lie algebra with an orthonormal basis, given by
//! its structure constants `[e_i, e_j] = Σ_k c_{ijk} e_k`. Every covariant
//! derivative of an invariant tensor is then algebra in the constants.
//!
//! Index conventions:
//!
//! * `Γ_{ijk} = g(∇_{e_i} e_j, e_k)`.
//! * `R_{ijkl} = g(R(e_i, e_j) e_k, e_l)` with
//!   `R(X, Y) = ∇_X ∇_Y − ∇_Y ∇_X − ∇_{[X,Y]}`. The pair `(i, j)` is the
//!   2-form slot and `(k, l)` the endomorphism slot.
//! * `Ric_{jk} = Σ_i R_{ijki}`, so the round sphere has positive Ricci.
//! * A pair of vectors acts as the skew endomorphism
//!   `(u ∧ v)_{kl} = u_k v_l − u_l v_k`, see [`wedge_endo`]. With this
//!   normalisation the parallel-torsion curvature formula of
//!   [`parallel_torsion_curvature`] holds exactly; the ½-weighted variant
//!   does not.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frame::{
    circ_contract, hodge_star, permutation_sign, Form, Frame, Orientation, Tensor, CURVATURE_NORM_WEIGHT,
};

/// Tolerance for the Jacobi identity and connection invariants.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// A left-invariant orthonormal frame on a Lie group.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameGeometry {
    frame: Frame,
    c: Tensor,
}

impl FrameGeometry {
    /// Builds the geometry from bracket entries `(i, j, k, c)` meaning
    /// `[e_i, e_j] ∋ c e_k`. The partner `[e_j, e_i] = -c e_k` is implied;
    /// listing it explicitly is allowed as long as the signs agree.
    pub fn new(frame: Frame, brackets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let n = frame.dim();
        let mut c = Tensor::zeros(n, 3);
        let mut seen = std::collections::BTreeMap::new();
        for (pos, &(i, j, k, v)) in brackets.iter().enumerate() {
            if i >= n || j >= n || k >= n {
                return Err(Error::invalid(format!(
                    "bracket entry {pos} has an index outside 0..{n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::invalid(format!("bracket entry {pos} is not finite")));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::invalid(format!("bracket entry {pos}: [e{i}, e{i}] must vanish")));
                }
                continue;
            }
            if seen.insert((i, j, k), v).is_some() {
                return Err(Error::invalid(format!(
                    "bracket entry {pos} duplicates ({i}, {j}, {k})"
                )));
            }
            if let Some(&partner) = seen.get(&(j, i, k)) {
                if (partner + v).abs() > STRUCTURE_TOL * partner.abs().max(1.0) {
                    return Err(Error::invalid(format!(
                        "bracket entry {pos}: [e{i}, e{j}] and [e{j}, e{i}] are not antisymmetric \
                         in component {k} ({v} vs {partner})"
                    )));
                }
                continue;
            }
            c.set(&[i, j, k], v);
            c.set(&[j, i, k], -v);
        }
        FrameGeometry::from_structure_constants(frame, c)
    }

    /// Builds the geometry from a full `c_{ijk}` array.
    pub fn from_structure_constants(frame: Frame, c: Tensor) -> Result<Self> {
        let n = frame.dim();
        if c.dim() != n || c.rank() != 3 {
            return Err(Error::invalid("structure constants have the wrong shape"));
        }
        let scale = c.max_abs().max(1.0);
        if c.antisymmetry_defect(0, 1) > STRUCTURE_TOL * scale {
            return Err(Error::invalid("structure constants are not antisymmetric"));
        }
        let geom = FrameGeometry { frame, c };
        let jac = geom.jacobi_defect();
        if jac > STRUCTURE_TOL * scale * scale {
            return Err(Error::invalid(format!(
                "structure constants violate the Jacobi identity (defect {jac:e})"
            )));
        }
        Ok(geom)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// `c_{ijk}` with `[e_i, e_j] = Σ_k c_{ijk} e_k`.
    pub fn structure_constants(&self) -> &Tensor {
        &self.c
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c.get(&[i, j, k])
    }

    /// Nonzero brackets with `i < j`, as `(i, j, k, c)`.
    pub fn brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = self.c(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `[u, v]` for constant-coefficient vectors.
    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for (i, ui) in u.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        s += ui * vj * self.c(i, j, k);
                    }
                }
                s
            })
            .collect()
    }

    /// Matrix of `ad_{e_a}` acting on column vectors: `(ad_a)_{kb} = c_{abk}`.
    pub fn ad(&self, a: usize) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, b| self.c(a, b, k))
    }

    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `Σ_j c_{ijj}`; zero for unimodular algebras.
    pub fn modular_form(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.c(i, j, j)).sum()).collect()
    }

    /// Riemannian product `ℝ × Σ` with `e_0 = ∂_t` central and the fiber
    /// frame shifted to indices `1..=3`, positively oriented.
    pub fn product_with_line(&self) -> Result<FrameGeometry> {
        if self.dim() != 3 {
            return Err(Error::invalid("product with a line needs a 3-dimensional fiber"));
        }
        let mut labels = vec!["t".to_string()];
        labels.extend(self.frame.labels().iter().cloned());
        let frame = Frame::new(labels, Orientation::Positive)?;
        let c = Tensor::from_fn(4, 3, |idx| {
            if idx.contains(&0) {
                0.0
            } else {
                self.c(idx[0] - 1, idx[1] - 1, idx[2] - 1)
            }
        });
        FrameGeometry::from_structure_constants(frame, c)
    }

    /// `(dθ)_{ij} = −θ([e_i, e_j])` for an invariant 1-form.
    pub fn d_one_form(&self, theta: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| -(0..n).map(|k| self.c(i, j, k) * theta[k]).sum::<f64>())
    }
}

/// A metric connection with constant coefficients in the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    geometry: FrameGeometry,
    gamma: Tensor,
    torsion: Option<Form>,
}

impl Connection {
    /// Validates metric compatibility and that the torsion of `gamma`
    /// equals `torsion` (zero when `None`).
    pub fn new(geometry: FrameGeometry, gamma: Tensor, torsion: Option<Form>) -> Result<Self> {
        let n = geometry.dim();
        if gamma.dim() != n || gamma.rank() != 3 {
            return Err(Error::invalid("connection coefficients have the wrong shape"));
        }
        let scale = gamma.max_abs().max(1.0);
        if gamma.antisymmetry_defect(1, 2) > STRUCTURE_TOL * scale {
            return Err(Error::invalid("connection is not metric"));
        }
        if let Some(t) = &torsion {
            if t.dim() != n || t.degree() != 3 {
                return Err(Error::invalid("declared torsion must be a 3-form"));
            }
        }
        let conn = Connection {
            geometry,
            gamma,
            torsion,
        };
        let actual = conn.torsion_tensor();
        let declared = match &conn.torsion {
            Some(t) => t.tensor().clone(),
            None => Tensor::zeros(n, 3),
        };
        let defect = actual.max_abs_diff(&declared)?;
        if defect > STRUCTURE_TOL * scale {
            return Err(Error::invalid(format!(
                "torsion of the coefficients differs from the declared torsion by {defect:e}"
            )));
        }
        Ok(conn)
    }

    pub fn geometry(&self) -> &FrameGeometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    /// `Γ_{ijk} = g(∇_{e_i} e_j, e_k)`.
    pub fn coefficients(&self) -> &Tensor {
        &self.gamma
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma.get(&[i, j, k])
    }

    pub fn torsion(&self) -> Option<&Form> {
        self.torsion.as_ref()
    }

    /// `T_{ijk} = g(∇_i e_j − ∇_j e_i − [e_i, e_j], e_k)`.
    pub fn torsion_tensor(&self) -> Tensor {
        Tensor::from_fn(self.dim(), 3, |x| {
            self.gamma.get(&[x[0], x[1], x[2]])
                - self.gamma.get(&[x[1], x[0], x[2]])
                - self.geometry.c(x[0], x[1], x[2])
        })
    }

    /// `(∇_{e_i} θ)(e_j)` for an invariant 1-form, as a matrix in `(i, j)`.
    pub fn nabla_one_form(&self, theta: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| {
            -(0..n).map(|k| self.gamma(i, j, k) * theta[k]).sum::<f64>()
        })
    }

    /// `∇_u v` for constant-coefficient vectors.
    pub fn nabla_vector(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for (i, ui) in u.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        s += ui * vj * self.gamma(i, j, k);
                    }
                }
                s
            })
            .collect()
    }

    /// `δθ = −Σ_i (∇_{e_i} θ)(e_i)`.
    pub fn codifferential(&self, theta: &[f64]) -> f64 {
        -self.nabla_one_form(theta).trace()
    }

    /// Returns `Err(Precondition)` unless `∇θ = 0` to `tol`.
    pub fn require_parallel(&self, theta: &[f64], tol: f64) -> Result<()> {
        let defect = crate::frame::max_abs(&self.nabla_one_form(theta));
        if defect > tol {
            return Err(Error::precondition(format!(
                "1-form is not parallel (|∇α| = {defect:e})"
            )));
        }
        Ok(())
    }
}

/// The Levi-Civita connection from the Koszul formula
/// `Γ_{ijk} = ½(c_{ijk} − c_{jki} + c_{kij})`.
pub fn levi_civita(geom: &FrameGeometry) -> Connection {
    let gamma = Tensor::from_fn(geom.dim(), 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        0.5 * (geom.c(i, j, k) - geom.c(j, k, i) + geom.c(k, i, j))
    });
    Connection {
        geometry: geom.clone(),
        gamma,
        torsion: None,
    }
}

/// `∇^H = ∇^g − ½ H^♯`, the metric connection with torsion `−H`.
pub fn skew_torsion_connection(geom: &FrameGeometry, h: &Form) -> Result<Connection> {
    if h.degree() != 3 || h.dim() != geom.dim() {
        return Err(Error::invalid("skew torsion must be a 3-form on the frame"));
    }
    if !h
        .tensor()
        .is_totally_antisymmetric(STRUCTURE_TOL * h.max_abs().max(1.0))
    {
        return Err(Error::invalid("skew torsion is not totally antisymmetric"));
    }
    let lc = levi_civita(geom);
    let gamma = lc.gamma.try_sub(&h.tensor().scaled(0.5))?;
    let torsion = h.scaled(-1.0);
    let torsion = if torsion.max_abs() == 0.0 { None } else { Some(torsion) };
    Connection::new(geom.clone(), gamma, torsion)
}

/// `∇^α := ∇^H` with `H = ∗α` in dimension four.
pub fn torsion_connection_from_alpha(geom: &FrameGeometry, alpha: &[f64]) -> Result<Connection> {
    if geom.dim() != 4 || alpha.len() != 4 {
        return Err(Error::invalid("torsion 1-form connection needs dimension 4"));
    }
    let h = hodge_star(&Form::one_form(alpha), geom.frame())?;
    skew_torsion_connection(geom, &h)
}

/// `R_{ijkl} = g(R(e_i, e_j) e_k, e_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    frame: Frame,
    comps: Tensor,
}

impl CurvatureTensor {
    pub fn from_components(frame: Frame, comps: Tensor) -> Result<Self> {
        if comps.dim() != frame.dim() || comps.rank() != 4 {
            return Err(Error::invalid("curvature components have the wrong shape"));
        }
        let scale = comps.max_abs().max(1.0);
        if comps.antisymmetry_defect(0, 1) > 1e-10 * scale || comps.antisymmetry_defect(2, 3) > 1e-10 * scale {
            return Err(Error::invalid("curvature must be skew in both index pairs"));
        }
        Ok(CurvatureTensor { frame, comps })
    }

    /// Finite-difference curvature, whose endomorphism slot is skew only to
    /// discretisation accuracy.
    pub(crate) fn from_chart_components(frame: Frame, comps: Tensor) -> Self {
        CurvatureTensor { frame, comps }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn components(&self) -> &Tensor {
        &self.comps
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.comps.get(&[i, j, k, l])
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.max_abs()
    }

    pub fn max_abs_diff(&self, other: &CurvatureTensor) -> Result<f64> {
        self.comps.max_abs_diff(&other.comps)
    }

    /// `R(e_i, e_j)` as a skew matrix in `(k, l)`.
    pub fn endomorphism(&self, i: usize, j: usize) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, l| self.get(i, j, k, l))
    }

    /// `Σ_cyclic R(e_i, e_j) e_k`, largest component.
    pub fn first_bianchi_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| self.get(i, j, k, i)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// `|R|²`: form norm on the first slot, tensor norm on the second.
    pub fn norm_sq(&self) -> f64 {
        CURVATURE_NORM_WEIGHT * self.comps.sum_sq()
    }

    /// `𝔳(R∘R)_{ab} = Σ R_{aklm} R_{bklm}`.
    pub fn circ(&self) -> DMatrix<f64> {
        circ_contract(&self.comps, &self.comps).expect("same shape")
    }

    /// Hodge dual on the 2-form slot (dimension 4 only).
    pub fn star_form_slot(&self) -> Result<CurvatureTensor> {
        if self.dim() != 4 {
            return Err(Error::invalid("self-duality is only defined in dimension 4"));
        }
        let sign = self.frame.orientation().sign();
        let comps = Tensor::from_fn(4, 4, |x| {
            let mut s = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    let eps = permutation_sign(&[m, n, x[0], x[1]]);
                    if eps != 0.0 {
                        s += eps * self.get(m, n, x[2], x[3]);
                    }
                }
            }
            0.5 * sign * s
        });
        Ok(CurvatureTensor {
            frame: self.frame.clone(),
            comps,
        })
    }

    /// `(R⁺, R⁻)` with `R± = ½(R ± ∗R)` on the 2-form slot.
    pub fn sd_asd_split(&self) -> Result<(CurvatureTensor, CurvatureTensor)> {
        let star = self.star_form_slot()?;
        let plus = self.comps.try_add(&star.comps)?.scaled(0.5);
        let minus = self.comps.try_sub(&star.comps)?.scaled(0.5);
        Ok((
            CurvatureTensor {
                frame: self.frame.clone(),
                comps: plus,
            },
            CurvatureTensor {
                frame: self.frame.clone(),
                comps: minus,
            },
        ))
    }

    /// `(|R⁺|², |R⁻|²)`.
    pub fn sd_asd_norms(&self) -> Result<(f64, f64)> {
        let (p, m) = self.sd_asd_split()?;
        Ok((p.norm_sq(), m.norm_sq()))
    }

    /// `(v ⌟ R)_{jkl} = Σ_i v_i R_{ijkl}`.
    pub fn interior(&self, v: &[f64]) -> Tensor {
        let n = self.dim();
        Tensor::from_fn(n, 3, |x| (0..n).map(|i| v[i] * self.get(i, x[0], x[1], x[2])).sum())
    }
}

/// Curvature of a constant-coefficient connection:
/// `R_{ijkl} = Σ_m (Γ_{jkm} Γ_{iml} − Γ_{ikm} Γ_{jml}) − Σ_m c_{ijm} Γ_{mkl}`.
pub fn curvature_tensor(conn: &Connection) -> CurvatureTensor {
    let n = conn.dim();
    let geom = conn.geometry();
    let comps = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let mut s = 0.0;
        for m in 0..n {
            s += conn.gamma(j, k, m) * conn.gamma(i, m, l)
                - conn.gamma(i, k, m) * conn.gamma(j, m, l)
                - geom.c(i, j, m) * conn.gamma(m, k, l);
        }
        s
    });
    CurvatureTensor {
        frame: geom.frame().clone(),
        comps,
    }
}

/// `(u ∧ v)_{kl} = u_k v_l − u_l v_k`.
pub fn wedge_endo(u: &[f64], v: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    DMatrix::from_fn(n, n, |k, l| u[k] * v[l] - u[l] * v[k])
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn curvature_from_pairs(frame: &Frame, mut pair: impl FnMut(usize, usize) -> DMatrix<f64>) -> CurvatureTensor {
    let n = frame.dim();
    let mut comps = Tensor::zeros(n, 4);
    for i in 0..n {
        for j in 0..n {
            let m = pair(i, j);
            for k in 0..n {
                for l in 0..n {
                    comps.set(&[i, j, k, l], m[(k, l)]);
                }
            }
        }
    }
    CurvatureTensor {
        frame: frame.clone(),
        comps,
    }
}

/// Three-dimensional curvature from Ricci:
/// `R(v₁, v₂) = (s/2) v₁∧v₂ + v₂∧Ric(v₁) + Ric(v₂)∧v₁`.
pub fn riemann_from_ricci_3d(ric: &DMatrix<f64>, s: f64) -> Result<CurvatureTensor> {
    if ric.nrows() != 3 || ric.ncols() != 3 {
        return Err(Error::invalid("Riemann-from-Ricci reconstruction needs dimension 3"));
    }
    let frame = Frame::standard(3)?;
    Ok(curvature_from_pairs(&frame, |i, j| {
        let (ei, ej) = (unit(3, i), unit(3, j));
        let ric_i: Vec<f64> = ric.column(i).iter().copied().collect();
        let ric_j: Vec<f64> = ric.column(j).iter().copied().collect();
        wedge_endo(&ei, &ej) * (0.5 * s) + wedge_endo(&ej, &ric_i) + wedge_endo(&ric_j, &ei)
    }))
}

/// Right side of the three-dimensional identity
/// `𝔳(R∘R) = −2 Ric∘Ric + 2s Ric + (2|Ric|² − s²) h`.
pub fn rho_rho_3d(ric: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    let n = ric.nrows();
    let ric_sq = ric.transpose() * ric;
    let norm = crate::frame::tensor_norm_sq(ric);
    &ric_sq * -2.0 + ric * (2.0 * s) + DMatrix::identity(n, n) * (2.0 * norm - s * s)
}

/// Curvature of `∇^α` predicted from `R^g` for parallel `α`:
/// `R^g(v₁,v₂) + ¼(|α|² v₁∧v₂ + α(v₂) α∧v₁ − α(v₁) α∧v₂)`.
pub fn parallel_torsion_curvature(rg: &CurvatureTensor, alpha: &[f64]) -> CurvatureTensor {
    let n = rg.dim();
    let a2: f64 = alpha.iter().map(|a| a * a).sum();
    curvature_from_pairs(rg.frame(), |i, j| {
        let (ei, ej) = (unit(n, i), unit(n, j));
        let corr = wedge_endo(&ei, &ej) * a2 + wedge_endo(alpha, &ei) * alpha[j] - wedge_endo(alpha, &ej) * alpha[i];
        rg.endomorphism(i, j) + corr * 0.25
    })
}

/// `𝔳(R^g∘R^g) − |α|² Ric^g + (|α|²/4)(|α|² g − α⊗α)` for parallel `α`.
pub fn parallel_torsion_circ(rg: &CurvatureTensor, alpha: &[f64]) -> DMatrix<f64> {
    let n = rg.dim();
    let a2: f64 = alpha.iter().map(|a| a * a).sum();
    let aa = crate::frame::outer(alpha, alpha);
    rg.circ() - rg.ricci() * a2 + (DMatrix::identity(n, n) * a2 - aa) * (a2 / 4.0)
}

/// Principal Ricci curvatures in ascending order.
pub fn ricci_spectrum(ric: &DMatrix<f64>) -> Vec<f64> {
    let sym = (ric + ric.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::max_abs;

    fn geom3(brackets: &[(usize, usize, usize, f64)]) -> FrameGeometry {
        FrameGeometry::new(Frame::standard(3).unwrap(), brackets).unwrap()
    }

    fn su2(c: f64) -> FrameGeometry {
        geom3(&[(0, 1, 2, c), (1, 2, 0, c), (2, 0, 1, c)])
    }

    fn heisenberg(m: f64) -> FrameGeometry {
        geom3(&[(0, 1, 2, m)])
    }

    fn hyperbolic(c: f64) -> FrameGeometry {
        geom3(&[(2, 0, 0, c), (2, 1, 1, c)])
    }

    fn sl2(a: f64, s: f64) -> FrameGeometry {
        geom3(&[
            (2, 0, 0, -s),
            (2, 0, 1, -a),
            (2, 1, 0, a),
            (2, 1, 1, s),
            (0, 1, 2, -2.0 * a),
        ])
    }

    fn sectional(r: &CurvatureTensor, a: usize, b: usize) -> f64 {
        r.get(a, b, b, a)
    }

    /// Independent Koszul oracle working with vectors instead of indices.
    fn koszul_oracle(g: &FrameGeometry, i: usize, j: usize) -> Vec<f64> {
        let n = g.dim();
        let e = |a: usize| unit(n, a);
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        (0..n)
            .map(|k| {
                0.5 * (dot(&g.bracket(&e(i), &e(j)), &e(k)) - dot(&g.bracket(&e(j), &e(k)), &e(i))
                    + dot(&g.bracket(&e(k), &e(i)), &e(j)))
            })
            .collect()
    }

    #[test]
    fn rejects_non_antisymmetric_and_non_jacobi_brackets() {
        let f = Frame::standard(3).unwrap();
        assert!(FrameGeometry::new(f.clone(), &[(0, 1, 2, 1.0), (1, 0, 2, 1.0)]).is_err());
        assert!(FrameGeometry::new(f.clone(), &[(0, 1, 2, 1.0), (1, 0, 2, -1.0)]).is_ok());
        assert!(FrameGeometry::new(f.clone(), &[(0, 0, 2, 1.0)]).is_err());
        assert!(FrameGeometry::new(f.clone(), &[(0, 1, 2, 1.0), (0, 1, 2, 1.0)]).is_err());
        // [e0,e1]=e1, [e0,e2]=e0, [e1,e2]=e0 breaks Jacobi
        assert!(FrameGeometry::new(f, &[(0, 1, 1, 1.0), (0, 2, 0, 1.0), (1, 2, 0, 1.0)]).is_err());
    }

    #[test]
    fn flat_torus_has_zero_connection() {
        let g = geom3(&[]);
        let lc = levi_civita(&g);
        assert_eq!(lc.coefficients().max_abs(), 0.0);
        let r = curvature_tensor(&lc);
        assert_eq!(r.max_abs(), 0.0);
        assert_eq!(r.scalar(), 0.0);
    }

    #[test]
    fn su2_christoffels_are_half_epsilon() {
        let g = su2(1.0);
        let lc = levi_civita(&g);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let expected = 0.5 * permutation_sign(&[i, j, k]);
                    assert!((lc.gamma(i, j, k) - expected).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn koszul_matches_vector_oracle() {
        for g in [su2(1.0), heisenberg(0.7), hyperbolic(0.4), sl2(0.5, 0.8)] {
            let lc = levi_civita(&g);
            for i in 0..3 {
                for j in 0..3 {
                    let oracle = koszul_oracle(&g, i, j);
                    for (k, o) in oracle.iter().enumerate() {
                        assert!((lc.gamma(i, j, k) - o).abs() < 1e-15);
                    }
                }
            }
            assert!(lc.torsion_tensor().max_abs() < 1e-15);
            assert!(lc.coefficients().antisymmetry_defect(1, 2) < 1e-15);
        }
    }

    #[test]
    fn heisenberg_connection_by_hand() {
        let m = 1.3;
        let lc = levi_civita(&heisenberg(m));
        assert!((lc.gamma(0, 1, 2) - m / 2.0).abs() < 1e-15);
        assert!((lc.gamma(0, 2, 1) + m / 2.0).abs() < 1e-15);
        assert!((lc.gamma(1, 2, 0) - m / 2.0).abs() < 1e-15);
    }

    #[test]
    fn round_sphere_curvature() {
        // [e_i, e_j] = e_k gives sectional curvature 1/4
        let r = curvature_tensor(&levi_civita(&su2(1.0)));
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!((sectional(&r, a, b) - 0.25).abs() < 1e-15);
                }
            }
        }
        assert!(max_abs(&(r.ricci() - DMatrix::identity(3, 3) * 0.5)) < 1e-15);
        assert!(r.first_bianchi_defect() < 1e-15);
    }

    #[test]
    fn hyperbolic_sectional_curvature() {
        let c = 0.5;
        let r = curvature_tensor(&levi_civita(&hyperbolic(c)));
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!((sectional(&r, a, b) + c * c).abs() < 1e-15);
                }
            }
        }
        // s = -6c²; at c = 1/√(8κ) this is -3/(4κ)
        assert!((r.scalar() + 6.0 * c * c).abs() < 1e-15);
        let kappa = 1.0;
        let r = curvature_tensor(&levi_civita(&hyperbolic(1.0 / (8.0f64 * kappa).sqrt())));
        assert!((r.scalar() + 3.0 / (4.0 * kappa)).abs() < 1e-14);
    }

    #[test]
    fn heisenberg_ricci_spectrum() {
        let m = 1.0;
        let r = curvature_tensor(&levi_civita(&heisenberg(m)));
        let spec = ricci_spectrum(&r.ricci());
        let expected = [-m * m / 2.0, -m * m / 2.0, m * m / 2.0];
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((r.scalar() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_of_circ_is_twice_norm() {
        let r = curvature_tensor(&levi_civita(&su2(1.0)));
        let mut brute = 0.0;
        for a in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        brute += r.get(a, k, l, m).powi(2);
                    }
                }
            }
        }
        assert!((r.circ().trace() - brute).abs() < 1e-15);
        assert!((r.circ().trace() - 2.0 * r.norm_sq()).abs() < 1e-15);
    }

    #[test]
    fn riemann_from_ricci_matches_direct() {
        for g in [
            geom3(&[]),
            su2(1.0),
            su2(2.0f64.sqrt()),
            heisenberg(0.9),
            hyperbolic(0.3),
            sl2(0.5, 0.75f64.sqrt()),
            sl2(0.0, 0.7),
        ] {
            let r = curvature_tensor(&levi_civita(&g));
            let rec = riemann_from_ricci_3d(&r.ricci(), r.scalar()).unwrap();
            assert!(rec.max_abs_diff(&r).unwrap() < 1e-14);
            assert!(max_abs(&(r.circ() - rho_rho_3d(&r.ricci(), r.scalar()))) < 1e-14);
            let ric_n = crate::frame::tensor_norm_sq(&r.ricci());
            assert!((r.norm_sq() - (2.0 * ric_n - 0.5 * r.scalar().powi(2))).abs() < 1e-14);
        }
    }

    #[test]
    fn einstein_ricci_reconstructs_constant_curvature() {
        let r = riemann_from_ricci_3d(&(DMatrix::identity(3, 3) * 0.5), 1.5).unwrap();
        let direct = curvature_tensor(&levi_civita(&su2(1.0)));
        assert!(r.max_abs_diff(&direct).unwrap() < 1e-15);
    }

    #[test]
    fn riemann_from_ricci_rejects_4d() {
        assert!(riemann_from_ricci_3d(&DMatrix::identity(4, 4), 0.0).is_err());
    }

    #[test]
    fn torsion_connection_of_round_product_is_flat() {
        let g = su2(1.0).product_with_line().unwrap();
        let conn = torsion_connection_from_alpha(&g, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(curvature_tensor(&conn).max_abs() < 1e-15);
        // torsion is -H
        let h = hodge_star(&Form::one_form(&[1.0, 0.0, 0.0, 0.0]), g.frame()).unwrap();
        let t = conn.torsion_tensor();
        assert!(t.try_add(h.tensor()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn zero_torsion_gives_levi_civita() {
        let g = heisenberg(1.0).product_with_line().unwrap();
        let conn = skew_torsion_connection(&g, &Form::zeros(4, 3)).unwrap();
        assert_eq!(conn, levi_civita(&g));
    }

    #[test]
    fn skew_torsion_rejects_non_forms() {
        let g = heisenberg(1.0).product_with_line().unwrap();
        let mut t = Tensor::zeros(4, 3);
        t.set(&[1, 2, 3], 1.0);
        let bad = Form::from_tensor(t);
        assert!(bad.is_err());
        assert!(skew_torsion_connection(&g, &Form::zeros(4, 2)).is_err());
    }

    #[test]
    fn connection_new_checks_torsion_declaration() {
        let g = heisenberg(1.0);
        let lc = levi_civita(&g);
        let wrong = Some(Form::basis(3, &[0, 1, 2]).unwrap());
        assert!(Connection::new(g.clone(), lc.coefficients().clone(), wrong).is_err());
        assert!(Connection::new(g, lc.coefficients().clone(), None).is_ok());
    }

    fn check_parallel_formulas(fiber: FrameGeometry, a: f64) {
        let g = fiber.product_with_line().unwrap();
        let alpha = [a, 0.0, 0.0, 0.0];
        let lc = levi_civita(&g);
        lc.require_parallel(&alpha, 1e-12).unwrap();
        let rg = curvature_tensor(&lc);
        let ra = curvature_tensor(&torsion_connection_from_alpha(&g, &alpha).unwrap());
        let predicted = parallel_torsion_curvature(&rg, &alpha);
        assert!(ra.max_abs_diff(&predicted).unwrap() < 1e-13);
        assert!(max_abs(&(ra.circ() - parallel_torsion_circ(&rg, &alpha))) < 1e-13);
        // α ⌟ R_{∇^α} = 0 and SD/ASD balance
        assert!(ra.interior(&alpha).max_abs() < 1e-14);
        let (p, m) = ra.sd_asd_norms().unwrap();
        assert!((p - m).abs() < 1e-13);
    }

    #[test]
    fn parallel_torsion_formulas() {
        check_parallel_formulas(su2(1.0), 1.0);
        check_parallel_formulas(heisenberg(1.0), 1.0);
        check_parallel_formulas(hyperbolic(0.5), 1.5f64.sqrt());
        check_parallel_formulas(sl2(0.5, 0.75f64.sqrt()), 2.0f64.sqrt());
        check_parallel_formulas(sl2(0.0, 0.5), 1.0);
        check_parallel_formulas(su2(0.8), 0.37);
    }

    #[test]
    fn half_weighted_wedge_fails_the_parallel_formula() {
        let g = su2(1.0).product_with_line().unwrap();
        let alpha = [1.0, 0.0, 0.0, 0.0];
        let rg = curvature_tensor(&levi_civita(&g));
        let full = parallel_torsion_curvature(&rg, &alpha);
        // halving the correction leaves a nonzero remainder on a flat connection
        let half = Tensor::from_fn(4, 4, |x| {
            0.5 * (full.get(x[0], x[1], x[2], x[3]) + rg.get(x[0], x[1], x[2], x[3]))
        });
        assert!(half.max_abs() > 0.1);
        assert!(full.max_abs() < 1e-15);
    }

    #[test]
    fn non_parallel_form_is_rejected() {
        let g = heisenberg(1.0).product_with_line().unwrap();
        let lc = levi_civita(&g);
        let err = lc.require_parallel(&[0.0, 1.0, 0.0, 0.0], 1e-12).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn product_keeps_time_direction_central() {
        let g = sl2(0.5, 0.3).product_with_line().unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert_eq!(g.c(0, j, k), 0.0);
            }
        }
        assert_eq!(g.frame().labels()[0], "t");
    }
}
