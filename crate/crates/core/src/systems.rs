//! Residual evaluators for the soliton systems.
//!
//! Each evaluator reduces a configuration to per-point data in an
//! orthonormal frame ([`PointData`]) and measures every equation in max norm
//! over tensor components. Frame configurations are exact and have a single
//! point; chart configurations are sampled at seeded random points.
//!
//! The Einstein equations contain the literal, non-symmetrised `∇φ`. The
//! symmetrised variant is reported as a diagnostic together with the
//! asymmetry `|∇φ − (∇φ)ᵀ|`, which vanishes whenever `φ` is closed.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chart::{matrix_to_frame, to_frame, vector_to_frame, ChartGeometry, OneFormFn};
use crate::curvature::{curvature_tensor, levi_civita, torsion_connection_from_alpha, CurvatureTensor, FrameGeometry};
use crate::error::{Error, Result};
use crate::frame::{max_abs, outer, tensor_norm_sq, Frame};

pub const REPORT_SCHEMA: &str = "hetlab.report/1";

/// Tolerance for matching `2κ|α|²` against the quantised values 1, 2, 3.
pub const RATIO_TAG_TOL: f64 = 1e-8;

/// Tolerance of the parallelism check on the chart backend.
pub const CHART_PARALLEL_TOL: f64 = 1e-6;

/// Default number of chart sample points.
pub const DEFAULT_CHART_POINTS: usize = 32;

#[derive(Clone)]
pub enum SolitonGeometry {
    Frame {
        geometry: FrameGeometry,
        phi: Vec<f64>,
        alpha: Vec<f64>,
    },
    Chart {
        chart: ChartGeometry,
        phi: OneFormFn,
        alpha: OneFormFn,
        points: Vec<Vec<f64>>,
    },
}

impl std::fmt::Debug for SolitonGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolitonGeometry::Frame { geometry, phi, alpha } => f
                .debug_struct("Frame")
                .field("geometry", geometry)
                .field("phi", phi)
                .field("alpha", alpha)
                .finish(),
            SolitonGeometry::Chart { chart, points, .. } => f
                .debug_struct("Chart")
                .field("chart", chart)
                .field("points", &points.len())
                .finish_non_exhaustive(),
        }
    }
}

/// `(g, φ, α, κ)`.
#[derive(Clone, Debug)]
pub struct SolitonConfig {
    name: String,
    kappa: f64,
    geometry: SolitonGeometry,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::invalid(format!("κ must be positive, got {kappa}")));
    }
    Ok(())
}

impl SolitonConfig {
    /// Invariant configuration on a 4-dimensional frame geometry.
    pub fn frame(
        name: impl Into<String>,
        geometry: FrameGeometry,
        phi: Vec<f64>,
        alpha: Vec<f64>,
        kappa: f64,
    ) -> Result<Self> {
        check_kappa(kappa)?;
        if geometry.dim() != 4 || phi.len() != 4 || alpha.len() != 4 {
            return Err(Error::invalid("soliton configurations live in dimension 4"));
        }
        let dphi = max_abs(&geometry.d_one_form(&phi));
        if dphi > 1e-12 {
            return Err(Error::invalid(format!("φ is not closed (|dφ| = {dphi:e})")));
        }
        Ok(SolitonConfig {
            name: name.into(),
            kappa,
            geometry: SolitonGeometry::Frame { geometry, phi, alpha },
        })
    }

    /// Configuration on a chart, evaluated at `count` seeded sample points.
    pub fn chart(
        name: impl Into<String>,
        chart: ChartGeometry,
        phi: OneFormFn,
        alpha: OneFormFn,
        kappa: f64,
        count: usize,
        seed: u64,
    ) -> Result<Self> {
        check_kappa(kappa)?;
        if chart.dim() != 4 {
            return Err(Error::invalid("soliton configurations live in dimension 4"));
        }
        if count == 0 {
            return Err(Error::invalid("need at least one chart sample point"));
        }
        let points = chart.sample_points(count, seed, chart.curvature_margin())?;
        for x in &points {
            let dphi = max_abs(&chart.exterior_derivative(x, &phi)?);
            if dphi > CHART_PARALLEL_TOL {
                return Err(Error::invalid(format!("φ is not closed at {x:?} (|dφ| = {dphi:e})")));
            }
        }
        Ok(SolitonConfig {
            name: name.into(),
            kappa,
            geometry: SolitonGeometry::Chart {
                chart,
                phi,
                alpha,
                points,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn geometry(&self) -> &SolitonGeometry {
        &self.geometry
    }

    pub fn backend(&self) -> Backend {
        match self.geometry {
            SolitonGeometry::Frame { .. } => Backend::Frame,
            SolitonGeometry::Chart { .. } => Backend::Chart,
        }
    }

    /// Frame-backend geometry, when present.
    pub fn frame_geometry(&self) -> Option<&FrameGeometry> {
        match &self.geometry {
            SolitonGeometry::Frame { geometry, .. } => Some(geometry),
            SolitonGeometry::Chart { .. } => None,
        }
    }

    /// Per-point data in an orthonormal frame.
    pub fn point_data(&self) -> Result<Vec<PointData>> {
        match &self.geometry {
            SolitonGeometry::Frame { geometry, phi, alpha } => Ok(vec![PointData::from_frame(geometry, phi, alpha)?]),
            SolitonGeometry::Chart {
                chart,
                phi,
                alpha,
                points,
            } => points
                .iter()
                .map(|x| PointData::from_chart(chart, phi, alpha, x))
                .collect(),
        }
    }

    fn require_alpha_equals_phi(&self) -> Result<()> {
        match &self.geometry {
            SolitonGeometry::Frame { phi, alpha, .. } => {
                let diff = phi.iter().zip(alpha).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if diff > 1e-14 {
                    return Err(Error::invalid("NS-NS evaluation needs α = φ"));
                }
            }
            SolitonGeometry::Chart { phi, alpha, points, .. } => {
                for x in points {
                    if (phi(x) - alpha(x)).amax() > 1e-14 {
                        return Err(Error::invalid(format!("NS-NS evaluation needs α = φ (at {x:?})")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Frame,
    Chart,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Frame => "frame",
            Backend::Chart => "chart",
        }
    }
}

/// Everything the evaluators need at one point, in an orthonormal frame.
#[derive(Clone, Debug)]
pub struct PointData {
    pub phi: Vec<f64>,
    pub alpha: Vec<f64>,
    pub ricci: DMatrix<f64>,
    /// `(∇_{e_i} φ)(e_j)`.
    pub nabla_phi: DMatrix<f64>,
    pub nabla_alpha: DMatrix<f64>,
    pub d_phi: DMatrix<f64>,
    pub d_alpha: DMatrix<f64>,
    pub delta_phi: f64,
    pub delta_alpha: f64,
    pub lc_curvature: CurvatureTensor,
    pub torsion_curvature: CurvatureTensor,
}

impl PointData {
    pub fn from_frame(geom: &FrameGeometry, phi: &[f64], alpha: &[f64]) -> Result<Self> {
        let lc = levi_civita(geom);
        let rg = curvature_tensor(&lc);
        let ra = curvature_tensor(&torsion_connection_from_alpha(geom, alpha)?);
        Ok(PointData {
            phi: phi.to_vec(),
            alpha: alpha.to_vec(),
            ricci: rg.ricci(),
            nabla_phi: lc.nabla_one_form(phi),
            nabla_alpha: lc.nabla_one_form(alpha),
            d_phi: geom.d_one_form(phi),
            d_alpha: geom.d_one_form(alpha),
            delta_phi: lc.codifferential(phi),
            delta_alpha: lc.codifferential(alpha),
            lc_curvature: rg,
            torsion_curvature: ra,
        })
    }

    pub fn from_chart(chart: &ChartGeometry, phi: &OneFormFn, alpha: &OneFormFn, x: &[f64]) -> Result<Self> {
        let f = chart.orthonormal_frame(x)?;
        let frame = Frame::standard(4)?;
        let lc = CurvatureTensor::from_chart_components(frame.clone(), to_frame(&chart.riemann(x)?, &f));
        let ra = CurvatureTensor::from_chart_components(frame, to_frame(&chart.torsion_curvature(x, alpha)?, &f));
        Ok(PointData {
            phi: vector_to_frame(&phi(x), &f),
            alpha: vector_to_frame(&alpha(x), &f),
            ricci: matrix_to_frame(&chart.ricci(x)?, &f),
            nabla_phi: matrix_to_frame(&chart.covariant_derivative(x, phi)?, &f),
            nabla_alpha: matrix_to_frame(&chart.covariant_derivative(x, alpha)?, &f),
            d_phi: matrix_to_frame(&chart.exterior_derivative(x, phi)?, &f),
            d_alpha: matrix_to_frame(&chart.exterior_derivative(x, alpha)?, &f),
            delta_phi: chart.codifferential(x, phi)?,
            delta_alpha: chart.codifferential(x, alpha)?,
            lc_curvature: lc,
            torsion_curvature: ra,
        })
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    fn alpha_norm_sq(&self) -> f64 {
        self.alpha.iter().map(|a| a * a).sum()
    }

    fn phi_norm_sq(&self) -> f64 {
        self.phi.iter().map(|a| a * a).sum()
    }

    /// Ricci tensor of the leaf orthogonal to `α`, in an orthonormal basis of
    /// `α^⊥`. `None` when `α = 0`.
    pub fn leaf_ricci(&self) -> Option<DMatrix<f64>> {
        let a2 = self.alpha_norm_sq();
        if a2 < 1e-24 {
            return None;
        }
        let n = self.dim();
        let p = DMatrix::identity(n, n) - outer(&self.alpha, &self.alpha) / a2;
        let eig = p.symmetric_eigen();
        let cols: Vec<_> = (0..n)
            .filter(|&i| eig.eigenvalues[i] > 0.5)
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect();
        let b = DMatrix::from_columns(&cols);
        Some(b.transpose() * &self.ricci * b)
    }
}

/// `(φ ∧ α)_{ij} = φ_i α_j − φ_j α_i`.
fn wedge_matrix(u: &[f64], v: &[f64]) -> DMatrix<f64> {
    outer(u, v) - outer(v, u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioTag {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "other")]
    Other,
}

impl RatioTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioTag::One => "1",
            RatioTag::Two => "2",
            RatioTag::Three => "3",
            RatioTag::Other => "other",
        }
    }

    pub fn from_ratio(r: f64) -> Self {
        for (v, tag) in [(1.0, RatioTag::One), (2.0, RatioTag::Two), (3.0, RatioTag::Three)] {
            if (r - v).abs() <= RATIO_TAG_TOL {
                return tag;
            }
        }
        RatioTag::Other
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedScalars {
    /// Scalar curvature of the leaf `α^⊥`.
    pub s_h: Option<f64>,
    pub ric_h_norm_sq: Option<f64>,
    /// Principal Ricci curvatures of the leaf, ascending.
    pub leaf_ricci_spectrum: Option<Vec<f64>>,
    pub r_plus_sq: Option<f64>,
    pub r_minus_sq: Option<f64>,
    pub alpha_norm_sq: f64,
    pub two_kappa_alpha_sq: f64,
    pub ratio_tag: RatioTag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema: String,
    pub system: String,
    pub config: String,
    pub backend: Backend,
    pub kappa: f64,
    pub points: usize,
    pub einstein: Option<f64>,
    pub maxwell: Option<f64>,
    pub dilaton: Option<f64>,
    pub bianchi: Option<f64>,
    pub sd_asd_balance: Option<f64>,
    /// Further residuals that count towards pass/fail.
    pub extra: BTreeMap<String, f64>,
    /// Informational quantities that do not count towards pass/fail.
    pub diagnostics: BTreeMap<String, f64>,
    pub derived: DerivedScalars,
}

impl ResidualReport {
    fn new(system: &str, config: &str, backend: Backend, kappa: f64, points: usize) -> Self {
        ResidualReport {
            schema: REPORT_SCHEMA.to_string(),
            system: system.to_string(),
            config: config.to_string(),
            backend,
            kappa,
            points,
            einstein: None,
            maxwell: None,
            dilaton: None,
            bianchi: None,
            sd_asd_balance: None,
            extra: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            derived: DerivedScalars {
                s_h: None,
                ric_h_norm_sq: None,
                leaf_ricci_spectrum: None,
                r_plus_sq: None,
                r_minus_sq: None,
                alpha_norm_sq: 0.0,
                two_kappa_alpha_sq: 0.0,
                ratio_tag: RatioTag::Other,
            },
        }
    }

    /// All residuals that enter pass/fail, by name.
    pub fn residuals(&self) -> Vec<(String, f64)> {
        let named = [
            ("einstein", self.einstein),
            ("maxwell", self.maxwell),
            ("dilaton", self.dilaton),
            ("bianchi", self.bianchi),
            ("sd_asd_balance", self.sd_asd_balance),
        ];
        named
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .chain(self.extra.iter().map(|(k, v)| (k.clone(), *v)))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().fold(0.0, |m, (_, v)| m.max(*v))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residuals().iter().all(|(_, v)| *v < tol)
    }
}

fn bump(slot: &mut Option<f64>, v: f64) {
    let v = if v.is_nan() { f64::INFINITY } else { v.abs() };
    *slot = Some(slot.map_or(v, |s| s.max(v)));
}

fn bump_map(map: &mut BTreeMap<String, f64>, key: &str, v: f64) {
    let v = if v.is_nan() { f64::INFINITY } else { v.abs() };
    let e = map.entry(key.to_string()).or_insert(0.0);
    *e = e.max(v);
}

fn fill_derived(report: &mut ResidualReport, p: &PointData, kappa: f64) -> Result<()> {
    let a2 = p.alpha_norm_sq();
    let (rp, rm) = p.torsion_curvature.sd_asd_norms()?;
    report.derived.alpha_norm_sq = a2;
    report.derived.two_kappa_alpha_sq = 2.0 * kappa * a2;
    report.derived.ratio_tag = RatioTag::from_ratio(2.0 * kappa * a2);
    report.derived.r_plus_sq = Some(rp);
    report.derived.r_minus_sq = Some(rm);
    if let Some(rh) = p.leaf_ricci() {
        report.derived.s_h = Some(rh.trace());
        report.derived.ric_h_norm_sq = Some(tensor_norm_sq(&rh));
        report.derived.leaf_ricci_spectrum = Some(crate::curvature::ricci_spectrum(&rh));
    }
    Ok(())
}

fn hessian_diagnostics(report: &mut ResidualReport, p: &PointData, einstein_literal: &DMatrix<f64>) {
    let sym = (&p.nabla_phi + p.nabla_phi.transpose()) * 0.5;
    let symmetrized = einstein_literal - &p.nabla_phi + sym;
    bump_map(
        &mut report.diagnostics,
        "hessian_asymmetry",
        max_abs(&(&p.nabla_phi - p.nabla_phi.transpose())),
    );
    bump_map(&mut report.diagnostics, "einstein_symmetrized", max_abs(&symmetrized));
}

/// The Heterotic soliton system with trivial gauge bundle.
pub fn heterotic_soliton_residual(cfg: &SolitonConfig) -> Result<ResidualReport> {
    let k = cfg.kappa;
    let data = cfg.point_data()?;
    let mut rep = ResidualReport::new("heterotic", cfg.name(), cfg.backend(), k, data.len());
    for p in &data {
        let n = p.dim();
        let a2 = p.alpha_norm_sq();
        let ra = &p.torsion_curvature;
        let (rp, rm) = ra.sd_asd_norms()?;
        let e = &p.ricci + &p.nabla_phi + outer(&p.alpha, &p.alpha) * 0.5 - DMatrix::identity(n, n) * (0.5 * a2)
            + ra.circ() * k;
        bump(&mut rep.einstein, max_abs(&e));
        bump(
            &mut rep.maxwell,
            max_abs(&(&p.d_alpha - wedge_matrix(&p.phi, &p.alpha))),
        );
        bump(&mut rep.dilaton, p.delta_phi + p.phi_norm_sq() + k * ra.norm_sq() - a2);
        bump(&mut rep.bianchi, p.delta_alpha - k * (rp - rm));
        hessian_diagnostics(&mut rep, p, &e);
        bump_map(&mut rep.diagnostics, "torsion_curvature_max", ra.max_abs());
    }
    fill_derived(&mut rep, &data[0], k)?;
    Ok(rep)
}

/// The NS-NS system, `α = φ`.
pub fn nsns_residual(cfg: &SolitonConfig) -> Result<ResidualReport> {
    cfg.require_alpha_equals_phi()?;
    let k = cfg.kappa;
    let data = cfg.point_data()?;
    let mut rep = ResidualReport::new("nsns", cfg.name(), cfg.backend(), k, data.len());
    for p in &data {
        let n = p.dim();
        let id = DMatrix::identity(n, n);
        let f2 = p.phi_norm_sq();
        let rf = &p.torsion_curvature;
        let (rp, rm) = rf.sd_asd_norms()?;
        let base = &p.ricci + &p.nabla_phi + outer(&p.phi, &p.phi) * 0.5;
        let e = &base - &id * (0.5 * f2) + rf.circ() * k;
        bump(&mut rep.einstein, max_abs(&e));
        bump(&mut rep.maxwell, max_abs(&p.d_phi));
        bump(&mut rep.dilaton, p.delta_phi + k * rm);
        bump(&mut rep.sd_asd_balance, rp);
        bump(&mut rep.bianchi, p.delta_phi - k * (rp - rm));
        let conformal = &base - &id * (0.5 * (f2 + p.delta_phi));
        bump_map(&mut rep.extra, "conformal_einstein", max_abs(&conformal));
        bump_map(&mut rep.extra, "asd_circ", max_abs(&(rf.circ() - &id * (0.5 * rm))));
        hessian_diagnostics(&mut rep, p, &e);
        bump_map(&mut rep.diagnostics, "torsion_curvature_max", rf.max_abs());
    }
    fill_derived(&mut rep, &data[0], k)?;
    Ok(rep)
}

/// Residual of the closed Einstein-Weyl equation
/// `Ric + ∇φ + ½φ⊗φ − ½(|φ|² + δφ) g` alone, in max norm over the points.
pub fn conformal_einstein_residual(cfg: &SolitonConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in cfg.point_data()? {
        let n = p.dim();
        let e = &p.ricci + &p.nabla_phi + outer(&p.phi, &p.phi) * 0.5
            - DMatrix::identity(n, n) * (0.5 * (p.phi_norm_sq() + p.delta_phi));
        worst = worst.max(max_abs(&e));
    }
    Ok(worst)
}

/// The null system with parallel torsion, `φ = 0`, `∇α = 0`.
pub fn null_parallel_residual(cfg: &SolitonConfig) -> Result<ResidualReport> {
    let k = cfg.kappa;
    let data = cfg.point_data()?;
    let par_tol = match cfg.backend() {
        Backend::Frame => 1e-12,
        Backend::Chart => CHART_PARALLEL_TOL,
    };
    for p in &data {
        if p.phi.iter().any(|v| v.abs() > 1e-14) {
            return Err(Error::precondition("null system needs φ = 0"));
        }
        let defect = max_abs(&p.nabla_alpha);
        if defect > par_tol {
            return Err(Error::precondition(format!("α is not parallel (|∇α| = {defect:e})")));
        }
    }
    let mut rep = ResidualReport::new("null-parallel", cfg.name(), cfg.backend(), k, data.len());
    for p in &data {
        let n = p.dim();
        let a2 = p.alpha_norm_sq();
        let ra = &p.torsion_curvature;
        let (rp, rm) = ra.sd_asd_norms()?;
        let e = &p.ricci + outer(&p.alpha, &p.alpha) * 0.5 - DMatrix::identity(n, n) * (0.5 * a2) + ra.circ() * k;
        bump(&mut rep.einstein, max_abs(&e));
        bump(&mut rep.maxwell, max_abs(&p.d_alpha));
        bump(&mut rep.dilaton, k * ra.norm_sq() - a2);
        bump(&mut rep.bianchi, p.delta_alpha - k * (rp - rm));
        bump(&mut rep.sd_asd_balance, rp - rm);
        bump_map(&mut rep.diagnostics, "torsion_curvature_max", ra.max_abs());
    }
    fill_derived(&mut rep, &data[0], k)?;
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BianchiBalance {
    pub r_plus_sq: f64,
    pub r_minus_sq: f64,
    /// `max |δα − κ(|R⁺|² − |R⁻|²)|` over the points.
    pub residual: f64,
}

/// SD/ASD norms of `R_{∇^α}` and the Bianchi residual. The norms are taken at
/// the first sample point.
pub fn bianchi_balance(cfg: &SolitonConfig) -> Result<BianchiBalance> {
    let data = cfg.point_data()?;
    let mut residual: f64 = 0.0;
    for p in &data {
        let (rp, rm) = p.torsion_curvature.sd_asd_norms()?;
        residual = residual.max((p.delta_alpha - cfg.kappa * (rp - rm)).abs());
    }
    let (r_plus_sq, r_minus_sq) = data[0].torsion_curvature.sd_asd_norms()?;
    Ok(BianchiBalance {
        r_plus_sq,
        r_minus_sq,
        residual,
    })
}

/// The reduced equations on a three-dimensional leaf `(Σ, h)`:
/// `−2κ Ric∘Ric + (1 − 2κ|α|²) Ric + (|α|²/2)(1 − κ|α|²) h = 0` and
/// `s^h = −½|α|²`, plus the implied value of `|Ric^h|²`.
pub fn leaf_equations_residual(sigma: &FrameGeometry, alpha_norm_sq: f64, kappa: f64) -> Result<ResidualReport> {
    check_kappa(kappa)?;
    if sigma.dim() != 3 {
        return Err(Error::invalid("leaf equations need a 3-dimensional geometry"));
    }
    let a2 = alpha_norm_sq;
    let r = curvature_tensor(&levi_civita(sigma));
    let ric = r.ricci();
    let s = ric.trace();
    let e = &ric * &ric * (-2.0 * kappa)
        + &ric * (1.0 - 2.0 * kappa * a2)
        + DMatrix::identity(3, 3) * (0.5 * a2 * (1.0 - kappa * a2));
    let mut rep = ResidualReport::new(
        "leaf",
        &format!("{:?}", sigma.frame().labels()),
        Backend::Frame,
        kappa,
        1,
    );
    rep.einstein = Some(max_abs(&e));
    rep.extra.insert("scalar".into(), (s + 0.5 * a2).abs());
    let expected = a2 / (2.0 * kappa) * (1.0 - 0.5 * kappa * a2);
    rep.extra
        .insert("ricci_norm".into(), (tensor_norm_sq(&ric) - expected).abs());
    rep.derived.s_h = Some(s);
    rep.derived.ric_h_norm_sq = Some(tensor_norm_sq(&ric));
    rep.derived.leaf_ricci_spectrum = Some(crate::curvature::ricci_spectrum(&ric));
    rep.derived.alpha_norm_sq = a2;
    rep.derived.two_kappa_alpha_sq = 2.0 * kappa * a2;
    rep.derived.ratio_tag = RatioTag::from_ratio(2.0 * kappa * a2);
    Ok(rep)
}

impl SolitonConfig {
    /// The same invariant configuration on a Lie-group coordinate chart.
    pub fn to_chart(&self, count: usize, seed: u64) -> Result<SolitonConfig> {
        let SolitonGeometry::Frame { geometry, phi, alpha } = &self.geometry else {
            return Err(Error::invalid("configuration is already on a chart"));
        };
        let (chart, coframe) = crate::chart::lie_group_chart(geometry)?;
        let pull_back = |v: &[f64]| -> OneFormFn {
            let v = nalgebra::DVector::from_column_slice(v);
            let cf = coframe.clone();
            std::sync::Arc::new(move |x: &[f64]| cf(x).transpose() * &v)
        };
        SolitonConfig::chart(
            self.name.clone(),
            chart,
            pull_back(phi),
            pull_back(alpha),
            self.kappa,
            count,
            seed,
        )
    }
}
