//! Dense multilinear algebra over a fixed orthonormal frame.
//!
//! Every object here lives in the components of an orthonormal frame
//! `e_0, .., e_{n-1}` with `n` equal to 3 or 4, so the metric is the identity
//! and the musical isomorphisms act trivially on components.
//!
//! Conventions fixed for the whole crate:
//!
//! * `e^1 ∧ e^2` has components `ω_{12} = 1`, `ω_{21} = -1`; in general
//!   `(α ∧ β)_{ij} = α_i β_j - α_j β_i` for 1-forms.
//! * The inner product of k-forms is `⟨ω, η⟩ = (1/k!) Σ ω_I η_I`.
//! * The Hodge star is fixed by `ω ∧ ∗η = ⟨ω, η⟩ vol` with
//!   `vol = orientation · e^0 ∧ .. ∧ e^{n-1}`, so `∗(e^1∧e^2) = e^3∧e^4` on a
//!   positively oriented 4-frame and `∗∗ = (-1)^{k(n-k)}`.
//! * In dimension four the torsion 3-form attached to a 1-form `α` is
//!   `H = ∗α`. Since `∗∗ = -1` on 1-forms this is the same as `α = -∗H`,
//!   so both normalisations of the torsion agree.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance used when validating (anti)symmetry of stored components.
pub const SYMMETRY_TOL: f64 = 1e-14;

/// Weight of the squared curvature norm: the form norm on the first (2-form)
/// slot and the tensor norm on the endomorphism slot give
/// `|R|² = CURVATURE_NORM_WEIGHT · Σ R_{ijkl}²`.
pub const CURVATURE_NORM_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

/// An ordered orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    labels: Vec<String>,
    orientation: Orientation,
}

impl Frame {
    pub fn new<S: Into<String>>(labels: Vec<S>, orientation: Orientation) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if !(3..=4).contains(&labels.len()) {
            return Err(Error::invalid(format!(
                "frame dimension must be 3 or 4, got {}",
                labels.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::invalid(format!("duplicate frame label {a:?}")));
            }
        }
        Ok(Frame { labels, orientation })
    }

    /// Positively oriented frame labelled `e0, e1, ..`.
    pub fn standard(dim: usize) -> Result<Self> {
        Frame::new((0..dim).map(|i| format!("e{i}")).collect(), Orientation::Positive)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Dense real array with `rank` indices, each running over `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor {
            dim,
            rank,
            data: vec![0.0; dim.pow(rank as u32)],
        }
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Tensor::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let k = self.flat(idx);
        self.data[k] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let k = self.flat(idx);
        self.data[k] += value;
    }

    /// Iterate over all multi-indices together with the stored value.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut idx = vec![0usize; self.rank];
        for (flat, &v) in self.data.iter().enumerate() {
            self.unflatten(flat, &mut idx);
            f(&idx, v);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sum_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn scaled(&self, s: f64) -> Tensor {
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    fn check_shape(&self, other: &Tensor) -> Result<()> {
        if self.dim != other.dim || self.rank != other.rank {
            return Err(Error::invalid(format!(
                "shape mismatch: ({}, rank {}) vs ({}, rank {})",
                self.dim, self.rank, other.dim, other.rank
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_shape(other)?;
        Ok(Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.try_add(&other.scaled(-1.0))
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    /// Largest violation of antisymmetry under swapping slots `a` and `b`.
    pub fn antisymmetry_defect(&self, a: usize, b: usize) -> f64 {
        let mut worst: f64 = 0.0;
        self.for_each(|idx, v| {
            let mut sw = idx.to_vec();
            sw.swap(a, b);
            worst = worst.max((v + self.get(&sw)).abs());
        });
        worst
    }

    pub fn is_totally_antisymmetric(&self, tol: f64) -> bool {
        for a in 0..self.rank {
            for b in a + 1..self.rank {
                if self.antisymmetry_defect(a, b) > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Sign of the permutation taking `idx` to sorted order, or 0 on repeats.
pub fn permutation_sign(idx: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// A differential form with constant components in the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    comps: Tensor,
}

impl Form {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        Form {
            comps: Tensor::zeros(dim, degree),
        }
    }

    pub fn from_tensor(comps: Tensor) -> Result<Self> {
        if comps.rank() > comps.dim() {
            return Err(Error::invalid(format!(
                "form degree {} exceeds dimension {}",
                comps.rank(),
                comps.dim()
            )));
        }
        let scale = comps.max_abs().max(1.0);
        if !comps.is_totally_antisymmetric(SYMMETRY_TOL * scale) {
            return Err(Error::invalid("form components are not totally antisymmetric"));
        }
        Ok(Form { comps })
    }

    pub fn one_form(comps: &[f64]) -> Self {
        let mut t = Tensor::zeros(comps.len(), 1);
        for (i, &c) in comps.iter().enumerate() {
            t.set(&[i], c);
        }
        Form { comps: t }
    }

    /// `e^{i_1} ∧ .. ∧ e^{i_k}`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= dim) {
            return Err(Error::invalid("basis index out of range"));
        }
        let comps = Tensor::from_fn(dim, indices.len(), |idx| {
            // nonzero only on permutations of `indices`
            let mut sorted_a = idx.to_vec();
            let mut sorted_b = indices.to_vec();
            sorted_a.sort_unstable();
            sorted_b.sort_unstable();
            if sorted_a != sorted_b {
                return 0.0;
            }
            let pos: Vec<usize> = idx
                .iter()
                .map(|i| indices.iter().position(|j| j == i).unwrap())
                .collect();
            permutation_sign(&pos)
        });
        Form::from_tensor(comps)
    }

    pub fn dim(&self) -> usize {
        self.comps.dim()
    }

    pub fn degree(&self) -> usize {
        self.comps.rank()
    }

    pub fn tensor(&self) -> &Tensor {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.comps.get(idx)
    }

    /// Components of a 1-form as a vector.
    pub fn components(&self) -> Vec<f64> {
        self.comps.data().to_vec()
    }

    pub fn scaled(&self, s: f64) -> Form {
        Form {
            comps: self.comps.scaled(s),
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        Ok(Form {
            comps: self.comps.try_add(&other.comps)?,
        })
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        Ok(Form {
            comps: self.comps.try_sub(&other.comps)?,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.max_abs()
    }

    pub fn inner(&self, other: &Form) -> Result<f64> {
        self.comps.check_shape(&other.comps)?;
        let s: f64 = self
            .comps
            .data()
            .iter()
            .zip(other.comps.data())
            .map(|(a, b)| a * b)
            .sum();
        Ok(s / factorial(self.degree()))
    }

    pub fn norm_sq(&self) -> f64 {
        self.comps.sum_sq() / factorial(self.degree())
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.dim() != other.dim() {
            return Err(Error::invalid("wedge of forms on different frames"));
        }
        let (k, l) = (self.degree(), other.degree());
        if k + l > self.dim() {
            return Ok(Form::zeros(self.dim(), k + l));
        }
        let perms = permutations(k + l);
        let norm = factorial(k) * factorial(l);
        let comps = Tensor::from_fn(self.dim(), k + l, |idx| {
            let mut acc = 0.0;
            for p in &perms {
                let permuted: Vec<usize> = p.iter().map(|&s| idx[s]).collect();
                acc += permutation_sign(p) * self.comps.get(&permuted[..k]) * other.comps.get(&permuted[k..]);
            }
            acc / norm
        });
        Ok(Form { comps })
    }

    /// Interior product `v ⌟ ω`.
    pub fn interior(&self, v: &[f64]) -> Result<Form> {
        if v.len() != self.dim() || self.degree() == 0 {
            return Err(Error::invalid("interior product shape mismatch"));
        }
        let comps = Tensor::from_fn(self.dim(), self.degree() - 1, |idx| {
            let mut full = Vec::with_capacity(idx.len() + 1);
            full.push(0);
            full.extend_from_slice(idx);
            (0..self.dim())
                .map(|i| {
                    full[0] = i;
                    v[i] * self.comps.get(&full)
                })
                .sum()
        });
        Ok(Form { comps })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Hodge dual of a constant-coefficient form.
pub fn hodge_star(form: &Form, frame: &Frame) -> Result<Form> {
    let n = frame.dim();
    if form.dim() != n {
        return Err(Error::invalid(format!(
            "form lives in dimension {}, frame has dimension {n}",
            form.dim()
        )));
    }
    let k = form.degree();
    if k > n {
        return Err(Error::invalid(format!("degree {k} exceeds dimension {n}")));
    }
    let sign = frame.orientation().sign() / factorial(k);
    let mut comps = Tensor::zeros(n, n - k);
    let mut full = vec![0usize; n];
    form.tensor().for_each(|i_idx, w| {
        if w == 0.0 {
            return;
        }
        full[..k].copy_from_slice(i_idx);
        let mut j_idx = vec![0usize; n - k];
        let total = n.pow((n - k) as u32);
        for flat in 0..total {
            let mut f = flat;
            for slot in j_idx.iter_mut().rev() {
                *slot = f % n;
                f /= n;
            }
            full[k..].copy_from_slice(&j_idx);
            let eps = permutation_sign(&full);
            if eps != 0.0 {
                comps.add_at(&j_idx, sign * w * eps);
            }
        }
    });
    Ok(Form { comps })
}

/// Self-dual and anti-self-dual parts `ω± = ½(ω ± ∗ω)` of a 2-form in 4D.
pub fn sd_asd_split(form: &Form, frame: &Frame) -> Result<(Form, Form)> {
    if frame.dim() != 4 || form.degree() != 2 {
        return Err(Error::invalid("self-dual splitting needs a 2-form in dimension 4"));
    }
    let star = hodge_star(form, frame)?;
    let plus = form.try_add(&star)?.scaled(0.5);
    let minus = form.try_sub(&star)?.scaled(0.5);
    Ok((plus, minus))
}

/// The ∘-contraction of two tensors sharing their shape: the first slot stays
/// free and every remaining slot is contracted with the tensor inner product,
/// then the result is symmetrised,
/// `(P∘Q)_{ab} = ½ Σ (P_{a…} Q_{b…} + P_{b…} Q_{a…})`.
///
/// For a 3-form this is `(H∘H)_{ij} = H_{ilm} H_j^{lm}`; for a curvature tensor
/// stored with its 2-form slot first it is `𝔳(R∘R)_{ij} = R_{iklm} R_j^{klm}`.
pub fn circ_contract(p: &Tensor, q: &Tensor) -> Result<DMatrix<f64>> {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return Err(Error::invalid("circ contraction of tensors with different shapes"));
    }
    if p.rank() == 0 {
        return Err(Error::invalid("circ contraction needs at least one slot"));
    }
    let n = p.dim();
    let block = p.data().len() / n;
    let mut out = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let pa = &p.data()[a * block..(a + 1) * block];
            let qb = &q.data()[b * block..(b + 1) * block];
            let pb = &p.data()[b * block..(b + 1) * block];
            let qa = &q.data()[a * block..(a + 1) * block];
            let s1: f64 = pa.iter().zip(qb).map(|(x, y)| x * y).sum();
            let s2: f64 = pb.iter().zip(qa).map(|(x, y)| x * y).sum();
            out[(a, b)] = 0.5 * (s1 + s2);
        }
    }
    Ok(out)
}

/// `u ⊗ v` as a matrix.
pub fn outer(u: &[f64], v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
}

/// Max-norm of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Squared tensor norm `Σ m_ij²` of a 2-tensor.
pub fn tensor_norm_sq(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame4() -> Frame {
        Frame::standard(4).unwrap()
    }

    fn random_form(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> Form {
        let raw = Tensor::from_fn(dim, degree, |_| rng.gen_range(-1.0..1.0));
        // antisymmetrise
        let perms = permutations(degree);
        let comps = Tensor::from_fn(dim, degree, |idx| {
            perms
                .iter()
                .map(|p| {
                    let q: Vec<usize> = p.iter().map(|&s| idx[s]).collect();
                    permutation_sign(p) * raw.get(&q)
                })
                .sum::<f64>()
                / factorial(degree)
        });
        Form::from_tensor(comps).unwrap()
    }

    #[test]
    fn frame_rejects_bad_input() {
        assert!(Frame::new(vec!["a", "b"], Orientation::Positive).is_err());
        assert!(Frame::new(vec!["a", "b", "a"], Orientation::Positive).is_err());
        assert!(Frame::new(vec!["t", "x", "y", "z"], Orientation::Negative).is_ok());
    }

    #[test]
    fn star_of_e12_is_e34() {
        // frame labels e0..e3, so e^1∧e^2 of the usual numbering is (0,1)
        let w = Form::basis(4, &[0, 1]).unwrap();
        let star = hodge_star(&w, &frame4()).unwrap();
        assert_eq!(star, Form::basis(4, &[2, 3]).unwrap());
    }

    #[test]
    fn star_squares_to_sign_on_all_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [3usize, 4] {
            for orientation in [Orientation::Positive, Orientation::Negative] {
                let frame = Frame::new((0..dim).map(|i| format!("f{i}")).collect(), orientation).unwrap();
                for k in 0..=dim {
                    let w = random_form(&mut rng, dim, k);
                    let ss = hodge_star(&hodge_star(&w, &frame).unwrap(), &frame).unwrap();
                    let sign = if (k * (dim - k)) % 2 == 0 { 1.0 } else { -1.0 };
                    let diff = ss.try_sub(&w.scaled(sign)).unwrap().max_abs();
                    assert!(diff < 1e-14, "dim {dim} k {k}: {diff}");
                }
            }
        }
    }

    #[test]
    fn star_is_isometric_and_defines_volume_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let frame = frame4();
        let vol = Form::basis(4, &[0, 1, 2, 3]).unwrap();
        for k in 0..=4 {
            let a = random_form(&mut rng, 4, k);
            let b = random_form(&mut rng, 4, k);
            let lhs = a.wedge(&hodge_star(&b, &frame).unwrap()).unwrap();
            let expected = vol.scaled(a.inner(&b).unwrap());
            assert!(lhs.try_sub(&expected).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn degree_above_dimension_is_rejected() {
        let t = Tensor::zeros(3, 4);
        assert!(Form::from_tensor(t).is_err());
    }

    #[test]
    fn torsion_form_of_time_direction() {
        // α = |α| e^0 on ℝ×Σ; H = ∗α must satisfy α = -∗H.
        let a = 1.7;
        let frame = frame4();
        let alpha = Form::one_form(&[a, 0.0, 0.0, 0.0]);
        let h = hodge_star(&alpha, &frame).unwrap();
        assert_eq!(h, Form::basis(4, &[1, 2, 3]).unwrap().scaled(a));
        let back = hodge_star(&h, &frame).unwrap().scaled(-1.0);
        assert!(back.try_sub(&alpha).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn sd_split_of_basis_form() {
        let w = Form::basis(4, &[0, 1]).unwrap();
        let (plus, minus) = sd_asd_split(&w, &frame4()).unwrap();
        let expected = Form::basis(4, &[0, 1])
            .unwrap()
            .try_add(&Form::basis(4, &[2, 3]).unwrap())
            .unwrap()
            .scaled(0.5);
        assert_eq!(plus, expected);
        assert!(plus.try_add(&minus).unwrap().try_sub(&w).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn sd_split_fixes_self_dual_forms() {
        let w = Form::basis(4, &[0, 2])
            .unwrap()
            .try_add(&hodge_star(&Form::basis(4, &[0, 2]).unwrap(), &frame4()).unwrap())
            .unwrap();
        let (plus, minus) = sd_asd_split(&w, &frame4()).unwrap();
        assert!(plus.try_sub(&w).unwrap().max_abs() < 1e-15);
        assert!(minus.max_abs() < 1e-15);
    }

    #[test]
    fn sd_asd_parts_are_orthogonal_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let frame = frame4();
        for _ in 0..100 {
            let w = random_form(&mut rng, 4, 2);
            let (p, m) = sd_asd_split(&w, &frame).unwrap();
            assert!(p.inner(&m).unwrap().abs() < 1e-14);
            let star_p = hodge_star(&p, &frame).unwrap();
            let star_m = hodge_star(&m, &frame).unwrap();
            assert!(star_p.try_sub(&p).unwrap().max_abs() < 1e-14);
            assert!(star_m.try_add(&m).unwrap().max_abs() < 1e-14);
            // idempotence
            let (pp, pm) = sd_asd_split(&p, &frame).unwrap();
            assert!(pp.try_sub(&p).unwrap().max_abs() < 1e-14);
            assert!(pm.max_abs() < 1e-14);
        }
    }

    #[test]
    fn sd_split_rejects_wrong_shapes() {
        let frame3 = Frame::standard(3).unwrap();
        assert!(sd_asd_split(&Form::basis(3, &[0, 1]).unwrap(), &frame3).is_err());
        assert!(sd_asd_split(&Form::basis(4, &[0]).unwrap(), &frame4()).is_err());
    }

    #[test]
    fn circ_of_volume_three_form() {
        // brute force H_{ilm} H_{jlm} for H = c e^{012} in 4D
        let c = 1.3;
        let h = Form::basis(4, &[0, 1, 2]).unwrap().scaled(c);
        let hh = circ_contract(h.tensor(), h.tensor()).unwrap();
        let mut brute = DMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    for m in 0..4 {
                        brute[(i, j)] += h.get(&[i, l, m]) * h.get(&[j, l, m]);
                    }
                }
            }
        }
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            2.0 * c * c,
            2.0 * c * c,
            2.0 * c * c,
            0.0,
        ]));
        assert!(max_abs(&(&hh - &brute)) < 1e-15);
        assert!(max_abs(&(&hh - &expected)) < 1e-14);
    }

    #[test]
    fn circ_of_zero_and_mismatch() {
        let z = Tensor::zeros(4, 3);
        assert_eq!(max_abs(&circ_contract(&z, &z).unwrap()), 0.0);
        assert!(circ_contract(&Tensor::zeros(4, 3), &Tensor::zeros(3, 3)).is_err());
    }

    #[test]
    fn wedge_and_interior_basics() {
        let a = Form::one_form(&[1.0, 2.0, 0.0]);
        let b = Form::one_form(&[0.0, 1.0, 3.0]);
        let ab = a.wedge(&b).unwrap();
        assert_eq!(ab.get(&[0, 1]), 1.0);
        assert_eq!(ab.get(&[1, 0]), -1.0);
        assert_eq!(ab.get(&[1, 2]), 6.0);
        let v = [0.0, 1.0, 0.0];
        let i = ab.interior(&v).unwrap();
        // (a∧b)(e1, ·) = a1 b - b1 a
        let expected = b.scaled(2.0).try_sub(&a).unwrap();
        assert!(i.try_sub(&expected).unwrap().max_abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn circ_is_symmetric_and_bilinear(
            p in proptest::collection::vec(-1.0f64..1.0, 64),
            q in proptest::collection::vec(-1.0f64..1.0, 64),
            s in -3.0f64..3.0,
        ) {
            let mut it = p.iter();
            let pt = Tensor::from_fn(4, 3, |_| *it.next().unwrap());
            let mut it = q.iter();
            let qt = Tensor::from_fn(4, 3, |_| *it.next().unwrap());
            let pq = circ_contract(&pt, &qt).unwrap();
            proptest::prop_assert!(max_abs(&(&pq - pq.transpose())) < 1e-14);
            let sum = pt.try_add(&qt.scaled(s)).unwrap();
            let lhs = circ_contract(&sum, &pt).unwrap();
            let rhs = circ_contract(&pt, &pt).unwrap() + circ_contract(&qt, &pt).unwrap() * s;
            proptest::prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
        }
    }
}
