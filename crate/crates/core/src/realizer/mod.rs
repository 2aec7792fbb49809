//! Floating-point realization of the local model: a is represented by its adjoint
//! matrices, the chart is x(t) = exp(Σ tᵢ ad_{eᵢ}), and the curvature of ω̄ = λ̄(x⁻¹dx)
//! is compared against R₀ by central finite differences.

mod expm;

pub use expm::{expm, one_norm};

use nalgebra::{DMatrix, DVector, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::Matrix;
use crate::lie_builder::{center, LieAlgebraStructure};
use crate::subalgebra::LieSubalgebra;
use crate::tensor_algebra::{CurvatureTensor, Lifting};

pub type FloatMatrix = DMatrix<f64>;
pub type FloatVector = DVector<f64>;

pub fn to_float(m: &Matrix) -> FloatMatrix {
    let n = m.dim();
    FloatMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64())
}

fn max_abs(m: &FloatMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationConfig {
    pub fd_step: f64,
    pub tolerance: f64,
    pub sample_points: Vec<Vec<f64>>,
    pub seed: u64,
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 7;
const OFFSET_POINTS: usize = 6;
const SAMPLE_RADIUS: f64 = 0.1;

impl RealizationConfig {
    /// Origin plus six seeded points of norm at most 0.1 in ℝⁿ.
    pub fn new(n: usize, fd_step: f64, tolerance: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = vec![vec![0.0; n]];
        for _ in 0..OFFSET_POINTS {
            let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let radius = SAMPLE_RADIUS * rng.random::<f64>();
            points.push(dir.iter().map(|x| x / norm * radius).collect());
        }
        let cfg = RealizationConfig {
            fd_step,
            tolerance,
            sample_points: points,
            seed,
        };
        cfg.validate(n)?;
        Ok(cfg)
    }

    pub fn with_defaults(n: usize) -> Self {
        RealizationConfig::new(n, DEFAULT_FD_STEP, DEFAULT_TOLERANCE, DEFAULT_SEED).expect("defaults are valid")
    }

    /// Same step and tolerance, evaluated only at the origin.
    pub fn identity_only(n: usize, fd_step: f64, tolerance: f64) -> Result<Self> {
        let cfg = RealizationConfig {
            fd_step,
            tolerance,
            sample_points: vec![vec![0.0; n]],
            seed: 0,
        };
        cfg.validate(n)?;
        Ok(cfg)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.fd_step.is_finite() && self.fd_step > 0.0) {
            return Err(Error::Config(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        for (i, p) in self.sample_points.iter().enumerate() {
            if p.len() != n || !p.iter().all(|x| x.is_finite()) {
                return Err(Error::Config(format!("sample point {i} must be {n} finite coordinates")));
            }
        }
        Ok(())
    }
}

/// ad_a for every basis element of a, or `Unsupported` when the center is nontrivial.
pub fn adjoint_realization(alg: &LieAlgebraStructure) -> Result<Vec<FloatMatrix>> {
    let z = center(alg);
    if !z.is_empty() {
        return Err(Error::Unsupported(format!(
            "nontrivial center of dimension {}; the adjoint representation is not faithful",
            z.len()
        )));
    }
    Ok((0..alg.dim).map(|a| to_float(&alg.ad(a))).collect())
}

/// max |[ad_a, ad_b] − Σ c_ab^c ad_c| over all pairs.
pub fn ad_commutator_error(alg: &LieAlgebraStructure, ads: &[FloatMatrix]) -> f64 {
    let mut err: f64 = 0.0;
    for a in 0..alg.dim {
        for b in 0..alg.dim {
            let lhs = &ads[a] * &ads[b] - &ads[b] * &ads[a];
            let rhs = alg
                .constant(a, b)
                .iter()
                .zip(ads)
                .fold(FloatMatrix::zeros(alg.dim, alg.dim), |acc, (c, m)| acc + m * c.to_f64());
            err = err.max(max_abs(&(lhs - rhs)));
        }
    }
    err
}

/// Left-invariant frame of the exponential chart and the forms built on it.
struct Chart {
    k: usize,
    n: usize,
    ads: Vec<FloatMatrix>,
    ad_basis: SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    h: Vec<FloatMatrix>,
    lam: Vec<FloatMatrix>,
}

impl Chart {
    fn new(alg: &LieAlgebraStructure, h: &LieSubalgebra, lam: &Lifting) -> Result<Self> {
        let ads = adjoint_realization(alg)?;
        let d = alg.dim;
        let cols: Vec<FloatVector> = ads.iter().map(|m| FloatVector::from_column_slice(m.as_slice())).collect();
        let stacked = FloatMatrix::from_columns(&cols);
        Ok(Chart {
            k: alg.h_dim,
            n: d - alg.h_dim,
            ad_basis: stacked.svd(true, true),
            ads,
            h: h.basis().iter().map(to_float).collect(),
            lam: lam.components().iter().map(to_float).collect(),
        })
    }

    fn generator(&self, t: &[f64]) -> FloatMatrix {
        let d = self.ads.len();
        t.iter()
            .enumerate()
            .fold(FloatMatrix::zeros(d, d), |acc, (i, ti)| acc + &self.ads[self.k + i] * *ti)
    }

    /// a-coordinates of ξⱼ = x⁻¹ ∂ⱼx at x = exp(Σ tᵢ ad_{eᵢ}), j = 1…n.
    fn frame(&self, t: &[f64]) -> Result<Vec<FloatVector>> {
        let d = self.ads.len();
        let z = self.generator(t);
        let x = expm(&z)?;
        let x_inv = x.clone().lu().try_inverse().ok_or(Error::ExpOverflow)?;
        let mut out = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut block = FloatMatrix::zeros(2 * d, 2 * d);
            block.view_mut((0, 0), (d, d)).copy_from(&z);
            block.view_mut((d, d), (d, d)).copy_from(&z);
            block.view_mut((0, d), (d, d)).copy_from(&self.ads[self.k + j]);
            let dx = expm(&block)?.view((0, d), (d, d)).into_owned();
            let xi = &x_inv * dx;
            let rhs = FloatVector::from_column_slice(xi.as_slice());
            let c = self.ad_basis.solve(&rhs, 1e-13).map_err(|e| Error::Unsupported(e.to_string()))?;
            out.push(c);
        }
        Ok(out)
    }

    fn h_part(&self, c: &FloatVector) -> FloatMatrix {
        self.h.iter().enumerate().fold(FloatMatrix::zeros(self.n, self.n), |acc, (a, m)| acc + m * c[a])
    }

    fn kappa(&self, c: &FloatVector) -> FloatVector {
        c.rows(self.k, self.n).into_owned()
    }

    fn lam_of(&self, x: &FloatVector) -> FloatMatrix {
        self.lam.iter().enumerate().fold(FloatMatrix::zeros(self.n, self.n), |acc, (i, m)| acc + m * x[i])
    }

    /// ω̄(∂ⱼ) = λ̄(ξⱼ).
    fn omega(&self, c: &FloatVector) -> FloatMatrix {
        self.h_part(c) + self.lam_of(&self.kappa(c))
    }

    fn omegas(&self, t: &[f64]) -> Result<Vec<FloatMatrix>> {
        Ok(self.frame(t)?.iter().map(|c| self.omega(c)).collect())
    }
}

fn eval_r_float(r: &[(usize, usize, FloatMatrix)], n: usize, u: &FloatVector, v: &FloatVector) -> FloatMatrix {
    r.iter().fold(FloatMatrix::zeros(n, n), |acc, (i, j, m)| acc + m * (u[*i] * v[*j] - u[*j] * v[*i]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointDeviation {
    pub index: usize,
    pub point: Vec<f64>,
    pub deviation: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdReport {
    pub name: &'static str,
    pub fd_step: f64,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub pass: bool,
    pub points: Vec<PointDeviation>,
}

fn collect(name: &'static str, cfg: &RealizationConfig, devs: Vec<f64>, scale_offsets: bool) -> FdReport {
    let points: Vec<PointDeviation> = cfg
        .sample_points
        .iter()
        .zip(devs)
        .enumerate()
        .map(|(index, (p, deviation))| {
            let at_identity = p.iter().all(|x| *x == 0.0);
            let limit = if at_identity || !scale_offsets { cfg.tolerance } else { 10.0 * cfg.tolerance };
            PointDeviation {
                index,
                point: p.clone(),
                deviation,
                limit,
                pass: deviation <= limit,
            }
        })
        .collect();
    FdReport {
        name,
        fd_step: cfg.fd_step,
        tolerance: cfg.tolerance,
        max_deviation: points.iter().map(|p| p.deviation).fold(0.0, f64::max),
        pass: points.iter().all(|p| p.pass),
        points,
    }
}

/// Ω̄(∂ᵢ,∂ⱼ) = ∂ᵢω̄(∂ⱼ) − ∂ⱼω̄(∂ᵢ) + [ω̄(∂ᵢ),ω̄(∂ⱼ)] against R₀(κ̄∂ᵢ, κ̄∂ⱼ); derivatives by
/// central differences. Limit is `tolerance` at the identity and 10·`tolerance` elsewhere.
pub fn curvature_fd_check(
    alg: &LieAlgebraStructure,
    h: &LieSubalgebra,
    lam: &Lifting,
    r: &CurvatureTensor,
    cfg: &RealizationConfig,
) -> Result<FdReport> {
    let chart = Chart::new(alg, h, lam)?;
    let n = chart.n;
    cfg.validate(n)?;
    let rf: Vec<(usize, usize, FloatMatrix)> = r.pairs().map(|(i, j, m)| (i, j, to_float(m))).collect();
    let step = cfg.fd_step;
    let mut devs = Vec::with_capacity(cfg.sample_points.len());
    for p in &cfg.sample_points {
        let frame = chart.frame(p)?;
        let om: Vec<FloatMatrix> = frame.iter().map(|c| chart.omega(c)).collect();
        let mut deriv = Vec::with_capacity(n);
        for i in 0..n {
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[i] += step;
            minus[i] -= step;
            let (op, omn) = (chart.omegas(&plus)?, chart.omegas(&minus)?);
            deriv.push((0..n).map(|j| (&op[j] - &omn[j]) / (2.0 * step)).collect::<Vec<_>>());
        }
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let big_omega = &deriv[i][j] - &deriv[j][i] + (&om[i] * &om[j] - &om[j] * &om[i]);
                let want = eval_r_float(&rf, n, &chart.kappa(&frame[i]), &chart.kappa(&frame[j]));
                dev = dev.max(max_abs(&(big_omega - want)));
            }
        }
        devs.push(dev);
    }
    Ok(collect("curvature_fd", cfg, devs, true))
}

/// ω̄(∂ⱼ) − λ(κ̄∂ⱼ) projected off span(h) by float least squares; its norm must stay under
/// `tolerance` at every sample point.
pub fn inner_torsion_fd_check(
    alg: &LieAlgebraStructure,
    lam: &Lifting,
    h: &LieSubalgebra,
    cfg: &RealizationConfig,
) -> Result<FdReport> {
    let chart = Chart::new(alg, h, lam)?;
    let n = chart.n;
    cfg.validate(n)?;
    let hcols: Vec<FloatVector> = chart.h.iter().map(|m| FloatVector::from_column_slice(m.as_slice())).collect();
    let hsvd = (!hcols.is_empty()).then(|| FloatMatrix::from_columns(&hcols).svd(true, true));
    let mut devs = Vec::with_capacity(cfg.sample_points.len());
    for p in &cfg.sample_points {
        let mut dev: f64 = 0.0;
        for c in chart.frame(p)? {
            let res = chart.omega(&c) - chart.lam_of(&chart.kappa(&c));
            let v = FloatVector::from_column_slice(res.as_slice());
            let off = match &hsvd {
                None => v,
                Some(svd) => {
                    let coef = svd.solve(&v, 1e-13).map_err(|e| Error::Unsupported(e.to_string()))?;
                    let stacked = FloatMatrix::from_columns(&hcols);
                    &v - stacked * coef
                }
            };
            dev = dev.max(off.norm());
        }
        devs.push(dev);
    }
    Ok(collect("inner_torsion_fd", cfg, devs, false))
}

/// Everything `realize` reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationReport {
    pub supported: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ad_commutator_error: Option<f64>,
    pub checks: Vec<FdReport>,
    pub pass: bool,
}

/// Adjoint realization plus both finite-difference checks. A nontrivial center gives an
/// unsupported (not failed) report.
pub fn realize(
    alg: &LieAlgebraStructure,
    h: &LieSubalgebra,
    lam: &Lifting,
    r: &CurvatureTensor,
    cfg: &RealizationConfig,
) -> Result<RealizationReport> {
    let ads = match adjoint_realization(alg) {
        Ok(ads) => ads,
        Err(Error::Unsupported(reason)) => {
            return Ok(RealizationReport {
                supported: false,
                reason: Some(reason),
                ad_commutator_error: None,
                checks: Vec::new(),
                pass: false,
            })
        }
        Err(e) => return Err(e),
    };
    let curv = curvature_fd_check(alg, h, lam, r, cfg)?;
    let inner = inner_torsion_fd_check(alg, lam, h, cfg)?;
    let pass = curv.pass && inner.pass;
    Ok(RealizationReport {
        supported: true,
        reason: None,
        ad_commutator_error: Some(ad_commutator_error(alg, &ads)),
        checks: vec![curv, inner],
        pass,
    })
}
