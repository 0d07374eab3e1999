//! The smooth bump model and interpolation error experiments.

use std::f64::consts::E;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{self, Family};
use crate::lie::{self, Algebra, AlgebraName};
use crate::linalg::{self, Vec3};
use crate::orbit::{unit_phase, CompensatedSum};
use crate::sampling;
use crate::transforms::{Interpolant, SampledField, SpectralField, TransformPlan};

/// Radial bump: 1 inside `alpha`, 0 outside `beta`, smooth in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub alpha: f64,
    pub beta: f64,
    /// Orthonormal coordinates.
    pub center: Vec3,
}

impl BumpSpec {
    pub fn new(alpha: f64, beta: f64, center: Vec3) -> Result<Self> {
        if !(alpha > 0.0 && beta > alpha) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidBump { alpha, beta });
        }
        Ok(BumpSpec { alpha, beta, center })
    }

    pub fn radius(&self, p: &Vec3) -> f64 {
        let d: Vec3 = std::array::from_fn(|i| p[i] - self.center[i]);
        linalg::dot(&d, &d).sqrt()
    }

    pub fn eval(&self, p: &Vec3) -> f64 {
        self.eval_radius(self.radius(p))
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        if r <= self.alpha {
            1.0
        } else if r >= self.beta {
            0.0
        } else {
            let s = (r - self.alpha) / (self.beta - self.alpha);
            E * (1.0 / (s * s - 1.0)).exp()
        }
    }
}

/// A named experiment: the bump, the algebra and the family of the interpolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub algebra: AlgebraName,
    pub family: Family,
    pub bump: BumpSpec,
    /// Published `∫|f − I_M|²` for `M = 8, 16, 24, 32, 40`.
    pub reference: [(i64, f64); 5],
}

pub const PRESET_MODULI: [i64; 5] = [8, 16, 24, 32, 40];

pub fn preset_f1() -> Preset {
    Preset {
        name: "f1",
        algebra: AlgebraName::C3,
        family: Family::Short,
        bump: BumpSpec { alpha: 1.0 / 20.0, beta: 1.0 / 9.0, center: [11.0 / 20.0, 1.0 / 3.0, 1.0 / 8.0] },
        reference: [(8, 2162.5e-6), (16, 350.62e-6), (24, 77.45e-6), (32, 32.14e-6), (40, 15.88e-6)],
    }
}

pub fn preset_f2() -> Preset {
    Preset {
        name: "f2",
        algebra: AlgebraName::B3,
        family: Family::Long,
        bump: BumpSpec { alpha: 1.0 / 20.0, beta: 1.0 / 9.0, center: [1.0 / 2.0, 1.0 / 3.0, 1.0 / 8.0] },
        reference: [(8, 574.87e-6), (16, 202.74e-6), (24, 57.16e-6), (32, 13.07e-6), (40, 12.73e-6)],
    }
}

/// Samples the bump on `F_M` and transforms it.
pub fn interpolate_bump(plan: &TransformPlan, bump: &BumpSpec) -> Result<(SampledField, SpectralField)> {
    let values = plan.points.iter().map(|p| Complex64::new(bump.eval(&p.orthonormal()), 0.0)).collect();
    let field = SampledField::new(plan.algebra, plan.family, plan.modulus, values)?;
    let spectral = plan.forward(&field)?;
    Ok((field, spectral))
}

/// Randomly shifted lattice `x = (j + s)/N` on the torus of α∨-coordinates,
/// holding the model values at the folded points.
///
/// For `x = w⁻¹(x_F − q∨)` the interpolant satisfies `I(x_F) = σ(w) I(x)`, so
/// `∫_F |f − I|² = (1/|W|) ∫_T |f(x_F) − σ(w) I(x)|²`. The interpolant on the
/// lattice is a single inverse FFT of its folded coefficients.
pub struct LatticeEstimator {
    pub algebra: AlgebraName,
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    shift: Vec3,
    model: Vec<f64>,
    signs: Vec<i8>,
    fft: Arc<dyn Fft<f64>>,
}

impl LatticeEstimator {
    /// `samples` is rounded up to the next cube `N³`.
    pub fn new(algebra: AlgebraName, family: Family, bump: &BumpSpec, samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        let alg = Algebra::get(algebra);
        let mut n = (samples as f64).cbrt().round() as usize;
        while n * n * n < samples {
            n += 1;
        }
        let n = n.max(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec3 = std::array::from_fn(|_| rng.gen::<f64>());
        let hom = family.sign_hom();
        let folded: Vec<(f64, i8)> = (0..n * n * n)
            .into_par_iter()
            .map(|idx| {
                let j = [idx / (n * n), idx / n % n, idx % n];
                let x: Vec3 = std::array::from_fn(|k| (j[k] as f64 + shift[k]) / n as f64);
                let red = grids::reduce_alphavee(alg, &x).expect("alcove walk terminates");
                (bump.eval(&red.orthonormal), red.sign(alg, hom))
            })
            .collect();
        let (model, signs) = folded.into_iter().unzip();
        let fft = FftPlanner::new().plan_fft_inverse(n);
        Ok(LatticeEstimator { algebra, family, n, seed, shift, model, signs, fft })
    }

    pub fn samples(&self) -> usize {
        self.n * self.n * self.n
    }

    fn volume_weight(&self) -> f64 {
        let alg = Algebra::get(self.algebra);
        alg.volume_const / (lie::WEYL_ORDER as f64 * self.samples() as f64)
    }

    /// Values of the interpolant on the lattice, in lattice order.
    pub fn interpolant_on_lattice(&self, spectral: &SpectralField) -> Result<Vec<Complex64>> {
        let alg = Algebra::get(self.algebra);
        let weights = grids::enumerate_weights(alg, spectral.family, spectral.modulus)?;
        if spectral.algebra != self.algebra || spectral.family != self.family {
            return Err(Error::Metadata("interpolant and estimator disagree on algebra or family".into()));
        }
        let n = self.n as i64;
        let hom = self.family.sign_hom();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.samples()];
        for (gw, c) in weights.iter().zip(&spectral.coefficients) {
            for w in alg.group() {
                let mu = w.act_weight(&gw.weight().0);
                let phase = unit_phase((0..3).map(|k| mu[k] as f64 * self.shift[k]).sum::<f64>() / n as f64);
                let idx = mu.map(|v| v.rem_euclid(n) as usize);
                buf[(idx[0] * self.n + idx[1]) * self.n + idx[2]] += c * phase * w.sign(hom) as f64;
            }
        }
        fft3(&mut buf, self.n, &self.fft);
        Ok(buf)
    }

    /// `∫_F |f − I|² dx`.
    pub fn error(&self, spectral: &SpectralField) -> Result<f64> {
        let values = self.interpolant_on_lattice(spectral)?;
        let total = ordered_sum(values.len(), |i| (Complex64::new(self.model[i], 0.0) - values[i] * self.signs[i] as f64).norm_sqr());
        Ok(total * self.volume_weight())
    }

    /// `∫_F |f|² dx`.
    pub fn model_norm(&self) -> f64 {
        ordered_sum(self.model.len(), |i| self.model[i] * self.model[i]) * self.volume_weight()
    }
}

const SUM_CHUNK: usize = 1 << 16;

/// Parallel sum with a schedule-independent reduction order.
fn ordered_sum(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let chunks = len.div_ceil(SUM_CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = CompensatedSum::default();
            for i in c * SUM_CHUNK..len.min((c + 1) * SUM_CHUNK) {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for p in partial {
        acc.add(p);
    }
    acc.value()
}

/// Unnormalized 3D transform of an `n³` row-major cube, one axis at a time.
fn fft3(buf: &mut [Complex64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    let mut tmp = vec![Complex64::new(0.0, 0.0); buf.len()];
    for _ in 0..3 {
        buf.par_chunks_mut(n).for_each(|line| fft.process(line));
        // (i, j, k) → (k, i, j), so the next axis becomes contiguous
        tmp.par_chunks_mut(n * n).enumerate().for_each(|(k, plane)| {
            for i in 0..n {
                for j in 0..n {
                    plane[i * n + j] = buf[(i * n + j) * n + k];
                }
            }
        });
        buf.copy_from_slice(&tmp);
    }
}

/// `∫_F |f − I|²` by plain Monte Carlo over `F`.
pub fn monte_carlo_error(interp: &Interpolant, bump: &BumpSpec, samples: usize, seed: u64) -> f64 {
    let alg = Algebra::get(interp.algebra);
    let batches = samples.div_ceil(SUM_CHUNK);
    let partial: Vec<f64> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut acc = CompensatedSum::default();
            for _ in 0..SUM_CHUNK.min(samples - b * SUM_CHUNK) {
                let x = sampling::uniform_in_domain(alg, &mut rng);
                let f = bump.eval(&alg.point_to_orthonormal(&x));
                acc.add((Complex64::new(f, 0.0) - interp.eval(&x)).norm_sqr());
            }
            acc.value()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for p in partial {
        acc.add(p);
    }
    acc.value() * alg.domain_volume() / samples as f64
}

/// `∫_F |I|² = K Σ_λ d_λ |c_λ|²`.
pub fn interpolant_norm(spectral: &SpectralField) -> Result<f64> {
    let alg = Algebra::get(spectral.algebra);
    let weights = grids::enumerate_weights(alg, spectral.family, spectral.modulus)?;
    let mut acc = CompensatedSum::default();
    for (w, c) in weights.iter().zip(&spectral.coefficients) {
        acc.add(lie::stabilizer_order_d(alg, &w.weight()) as f64 * c.norm_sqr());
    }
    Ok(alg.volume_const * acc.value())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub algebra: AlgebraName,
    pub family: Family,
    #[serde(rename = "M")]
    pub modulus: i64,
    pub bump: BumpSpec,
    pub error_l2: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub model_norm: f64,
    pub interpolant_norm: f64,
    /// Largest `|Im I_M|` on the grid.
    pub max_imag_on_grid: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

pub struct ExperimentResult {
    pub report: ExperimentReport,
    pub field: SampledField,
    pub spectral: SpectralField,
}

/// One interpolation experiment, reusing a prepared estimator.
pub fn run_with_estimator(est: &LatticeEstimator, modulus: i64, bump: &BumpSpec) -> Result<ExperimentResult> {
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus));
    }
    let plan = TransformPlan::new(est.algebra, est.family, modulus)?;
    let (field, spectral) = interpolate_bump(&plan, bump)?;
    let back = plan.inverse_on_grid(&spectral)?;
    let max_imag_on_grid = back.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let report = ExperimentReport {
        algebra: est.algebra,
        family: est.family,
        modulus,
        bump: *bump,
        error_l2: est.error(&spectral)?,
        mc_samples: est.samples(),
        seed: est.seed,
        grid_points: plan.points.len(),
        model_norm: est.model_norm(),
        interpolant_norm: interpolant_norm(&spectral)?,
        max_imag_on_grid,
        reference: None,
        runtime_ms: None,
    };
    Ok(ExperimentResult { report, field, spectral })
}

pub fn run_experiment(
    algebra: AlgebraName,
    family: Family,
    modulus: i64,
    bump: &BumpSpec,
    samples: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    let est = LatticeEstimator::new(algebra, family, bump, samples, seed)?;
    run_with_estimator(&est, modulus, bump)
}

/// A regular planar cut through the bounding box of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub axis: usize,
    pub value: f64,
    /// Coordinates along the first and second free axes.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Row-major, one row per `v`.
    pub values: Vec<Complex64>,
}

impl Slice {
    pub fn free_axes(axis: usize) -> (usize, usize) {
        match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }
}

/// Samples `f` (orthonormal coordinates) on `resolution²` points of the plane
/// `p[axis] = value`, spanning the bounding box of `F`.
pub fn slice_export(
    algebra: AlgebraName,
    axis: usize,
    value: f64,
    resolution: usize,
    f: impl Fn(&Vec3) -> Complex64 + Sync,
) -> Result<Slice> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("slice resolution must be at least 2".into()));
    }
    if axis > 2 {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
    }
    let verts = Algebra::get(algebra).domain_vertices();
    let (a, b) = Slice::free_axes(axis);
    let range = |c: usize| {
        let lo = verts.iter().map(|v| v[c]).fold(f64::INFINITY, f64::min);
        let hi = verts.iter().map(|v| v[c]).fold(f64::NEG_INFINITY, f64::max);
        (0..resolution).map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64).collect::<Vec<f64>>()
    };
    let (u, v) = (range(a), range(b));
    let values = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let mut p = [0.0; 3];
            p[axis] = value;
            p[a] = u[idx % resolution];
            p[b] = v[idx / resolution];
            f(&p)
        })
        .collect();
    Ok(Slice { axis, value, u, v, values })
}
