//! Discrete Sˢ/Sˡ transforms on `F_M`, orthogonality checks and interpolation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grids::{self, Family, GridPoint, GridWeight};
use crate::lie::{self, Algebra, AlgebraName, SignHom, Weight};
use crate::linalg::{self, IVec3, Vec3};
use crate::orbit::{unit_phase, ComplexSum, OrbitFamily, RootsOfUnity, TrigPolynomial};
use crate::sampling;

fn validate(alg: AlgebraName, family: Family, m: i64, values: &[Complex64]) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidModulus(m));
    }
    let expected = grids::grid_count(alg, family, m) as usize;
    if values.len() != expected {
        return Err(Error::LengthMismatch { expected, found: values.len() });
    }
    if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// Values of a function on the canonical order of `F_M^s` or `F_M^l`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub algebra: AlgebraName,
    pub family: Family,
    pub modulus: i64,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(algebra: AlgebraName, family: Family, modulus: i64, values: Vec<Complex64>) -> Result<Self> {
        validate(algebra, family, modulus, &values)?;
        Ok(SampledField { algebra, family, modulus, values })
    }

    /// Samples `f` (orthonormal coordinates) on the grid.
    pub fn from_fn(algebra: AlgebraName, family: Family, modulus: i64, f: impl Fn(&Vec3) -> Complex64 + Sync) -> Result<Self> {
        let alg = Algebra::get(algebra);
        let pts = grids::enumerate_grid(alg, family, modulus)?;
        let values = pts.par_iter().map(|p| f(&p.orthonormal())).collect();
        Self::new(algebra, family, modulus, values)
    }
}

/// Expansion coefficients indexed by the canonical order of `Λ_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub algebra: AlgebraName,
    pub family: Family,
    pub modulus: i64,
    pub coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(algebra: AlgebraName, family: Family, modulus: i64, coefficients: Vec<Complex64>) -> Result<Self> {
        validate(algebra, family, modulus, &coefficients)?;
        Ok(SpectralField { algebra, family, modulus, coefficients })
    }
}

/// Grid, weights and normalization data shared by the transforms at fixed `M`.
#[derive(Clone, Debug)]
pub struct TransformPlan {
    pub algebra: AlgebraName,
    pub family: Family,
    pub modulus: i64,
    pub points: Vec<GridPoint>,
    pub weights: Vec<GridWeight>,
    /// `ε(x)` per point.
    pub eps: Vec<usize>,
    /// `h∨_λ` per weight.
    pub h: Vec<usize>,
    numerators: Vec<IVec3>,
    table: RootsOfUnity,
}

impl TransformPlan {
    pub fn new(algebra: AlgebraName, family: Family, modulus: i64) -> Result<Self> {
        let alg = Algebra::get(algebra);
        let points = grids::enumerate_grid(alg, family, modulus)?;
        let weights = grids::enumerate_weights(alg, family, modulus)?;
        let den = alg.cartan_det() * modulus;
        let eps = points.par_iter().map(|p| lie::orbit_size_eps(alg, &p.torus_point())).collect();
        let h = weights.par_iter().map(|w| lie::stabilizer_order_h(alg, &w.weight(), modulus)).collect();
        let numerators =
            points.iter().map(|p| p.torus_point().numerators_over(den).expect("grid denominators divide det C · M")).collect();
        Ok(TransformPlan { algebra, family, modulus, points, weights, eps, h, numerators, table: RootsOfUnity::new(den) })
    }

    pub fn algebra_data(&self) -> &'static Algebra {
        Algebra::get(self.algebra)
    }

    fn hom(&self) -> SignHom {
        self.family.sign_hom()
    }

    /// `k M³ h∨_λ`, the squared discrete norm of `φ_λ`.
    pub fn norm(&self, index: usize) -> f64 {
        let alg = self.algebra_data();
        (alg.discrete_const * self.modulus.pow(3)) as f64 * self.h[index] as f64
    }

    /// `φ_λ(x)` for weight `wi` at grid point `pi`, with exact phases.
    #[inline]
    pub fn basis(&self, wi: usize, pi: usize) -> Complex64 {
        self.basis_with(&self.weights[wi].weight().0, pi)
    }

    fn basis_with(&self, lambda: &IVec3, pi: usize) -> Complex64 {
        let alg = self.algebra_data();
        let hom = self.hom();
        let num = &self.numerators[pi];
        let mut acc = ComplexSum::default();
        for w in alg.group() {
            let mu = w.act_weight(lambda);
            acc.add(self.table.get(linalg::idot(&mu, num)) * w.sign(hom) as f64);
        }
        acc.value()
    }

    /// The row `(φ_λ(x))_x` for one weight.
    pub fn basis_row(&self, wi: usize) -> Vec<Complex64> {
        let lambda = self.weights[wi].weight().0;
        (0..self.points.len()).map(|pi| self.basis_with(&lambda, pi)).collect()
    }

    fn check(&self, algebra: AlgebraName, family: Family, modulus: i64) -> Result<()> {
        if (algebra, family, modulus) != (self.algebra, self.family, self.modulus) {
            return Err(Error::Metadata(format!(
                "field is {algebra} {family} M={modulus}, plan is {} {} M={}",
                self.algebra, self.family, self.modulus
            )));
        }
        Ok(())
    }

    /// `c_λ = (k M³ h∨_λ)⁻¹ Σ_x ε(x) f(x) conj(φ_λ(x))`.
    pub fn forward(&self, field: &SampledField) -> Result<SpectralField> {
        self.check(field.algebra, field.family, field.modulus)?;
        validate(field.algebra, field.family, field.modulus, &field.values)?;
        let weighted: Vec<Complex64> = field.values.iter().zip(&self.eps).map(|(v, &e)| v * e as f64).collect();
        let coefficients = (0..self.weights.len())
            .into_par_iter()
            .map(|wi| {
                let lambda = self.weights[wi].weight().0;
                let mut acc = ComplexSum::default();
                for (pi, v) in weighted.iter().enumerate() {
                    acc.add(v * self.basis_with(&lambda, pi).conj());
                }
                acc.value() / self.norm(wi)
            })
            .collect();
        SpectralField::new(self.algebra, self.family, self.modulus, coefficients)
    }

    /// The interpolant evaluated back on the grid.
    pub fn inverse_on_grid(&self, spectral: &SpectralField) -> Result<SampledField> {
        self.check(spectral.algebra, spectral.family, spectral.modulus)?;
        let lambdas: Vec<IVec3> = self.weights.iter().map(|w| w.weight().0).collect();
        let values = (0..self.points.len())
            .into_par_iter()
            .map(|pi| {
                let mut acc = ComplexSum::default();
                for (c, lambda) in spectral.coefficients.iter().zip(&lambdas) {
                    acc.add(c * self.basis_with(lambda, pi));
                }
                acc.value()
            })
            .collect();
        SampledField::new(self.algebra, self.family, self.modulus, values)
    }
}

pub fn forward_transform(field: &SampledField) -> Result<SpectralField> {
    TransformPlan::new(field.algebra, field.family, field.modulus)?.forward(field)
}

/// `I_M = Σ_λ c_λ φ_λ` as a trigonometric polynomial in α∨-coordinates.
#[derive(Clone, Debug)]
pub struct Interpolant {
    pub algebra: AlgebraName,
    pub family: Family,
    poly: TrigPolynomial,
}

impl Interpolant {
    pub fn new(spectral: &SpectralField) -> Result<Self> {
        let alg = Algebra::get(spectral.algebra);
        let weights = grids::enumerate_weights(alg, spectral.family, spectral.modulus)?;
        validate(spectral.algebra, spectral.family, spectral.modulus, &spectral.coefficients)?;
        let poly = TrigPolynomial::from_orbits(
            alg,
            spectral.family.sign_hom(),
            weights.iter().zip(&spectral.coefficients).map(|(w, c)| (w.weight().0, *c)),
        );
        Ok(Interpolant { algebra: spectral.algebra, family: spectral.family, poly })
    }

    pub fn polynomial(&self) -> &TrigPolynomial {
        &self.poly
    }

    /// Value at a point in α∨-coordinates.
    pub fn eval(&self, x: &Vec3) -> Complex64 {
        self.poly.eval(x)
    }

    pub fn eval_orthonormal(&self, p: &Vec3) -> Complex64 {
        self.poly.eval(&Algebra::get(self.algebra).point_from_orthonormal(p))
    }
}

/// The interpolant at a single point (α∨-coordinates).
pub fn inverse_transform(spectral: &SpectralField, x: &Vec3) -> Result<Complex64> {
    Ok(Interpolant::new(spectral)?.eval(x))
}

pub fn inverse_on_grid(spectral: &SpectralField) -> Result<SampledField> {
    TransformPlan::new(spectral.algebra, spectral.family, spectral.modulus)?.inverse_on_grid(spectral)
}

/// `Σ_x ε(x)|f(x)|²` and `k M³ Σ_λ h∨_λ |c_λ|²`.
pub fn parseval_sides(plan: &TransformPlan, field: &SampledField, spectral: &SpectralField) -> (f64, f64) {
    let mut lhs = ComplexSum::default();
    for (v, &e) in field.values.iter().zip(&plan.eps) {
        lhs.add(Complex64::new(v.norm_sqr() * e as f64, 0.0));
    }
    let mut rhs = ComplexSum::default();
    for (i, c) in spectral.coefficients.iter().enumerate() {
        rhs.add(Complex64::new(c.norm_sqr() * plan.norm(i), 0.0));
    }
    (lhs.value().re, rhs.value().re)
}

/// A dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// Largest `|G_ij| / min(|G_ii|, |G_jj|)` over `i ≠ j`.
    pub fn max_offdiag_ratio(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let scale = self.get(i, i).norm().min(self.get(j, j).norm());
                    worst = worst.max(self.get(i, j).norm() / scale);
                }
            }
        }
        worst
    }
}

/// `G[λ, λ'] = Σ_x ε(x) φ_λ(x) conj(φ_λ'(x))` over `F_M`.
pub fn discrete_gram_matrix(algebra: AlgebraName, family: Family, modulus: i64) -> Result<(Matrix, TransformPlan)> {
    let plan = TransformPlan::new(algebra, family, modulus)?;
    Ok((gram_from_plan(&plan), plan))
}

/// The Gram matrix using the plan's `ε` weights as stored.
pub fn gram_from_plan(plan: &TransformPlan) -> Matrix {
    let n = plan.weights.len();
    let rows: Vec<Vec<Complex64>> = (0..n).into_par_iter().map(|wi| plan.basis_row(wi)).collect();
    let data = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut acc = ComplexSum::default();
            for (pi, &e) in plan.eps.iter().enumerate() {
                acc.add(rows[i][pi] * rows[j][pi].conj() * e as f64);
            }
            acc.value()
        })
        .collect();
    Matrix { rows: n, cols: n, data }
}

/// Largest `|G_λλ − k M³ h∨_λ| / (k M³ h∨_λ)`.
pub fn gram_diagonal_deviation(gram: &Matrix, plan: &TransformPlan) -> f64 {
    (0..gram.rows).map(|i| (gram.get(i, i) - plan.norm(i)).norm() / plan.norm(i)).fold(0.0, f64::max)
}

/// Quadrature over `F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quadrature {
    /// Uniform samples in `F`, split into fixed batches seeded from `seed`.
    MonteCarlo { samples: usize, seed: u64 },
    /// Midpoint rule with `n³` cells on the collapsed cube `[0,1]³ → F`.
    Midpoint { n: usize },
}

const MC_BATCH: usize = 1 << 14;

/// Per-coordinate tables of `e^{2πi n x_j}`, `|n| ≤ bound`.
struct PhaseTable {
    bound: i64,
    powers: [Vec<Complex64>; 3],
}

impl PhaseTable {
    fn new(x: &Vec3, bound: i64) -> Self {
        let powers = std::array::from_fn(|j| {
            let base = unit_phase(x[j]);
            let mut pos = Vec::with_capacity(bound as usize + 1);
            let mut z = Complex64::new(1.0, 0.0);
            for _ in 0..=bound {
                pos.push(z);
                z *= base;
            }
            let mut v: Vec<Complex64> = pos[1..].iter().rev().map(|z| z.conj()).collect();
            v.extend(pos);
            v
        });
        PhaseTable { bound, powers }
    }

    #[inline]
    fn at(&self, mu: &IVec3) -> Complex64 {
        let b = self.bound;
        self.powers[0][(mu[0] + b) as usize] * self.powers[1][(mu[1] + b) as usize] * self.powers[2][(mu[2] + b) as usize]
    }
}

/// Precomputed orbits `(wλ, σ(w))` of a list of weights.
struct OrbitBatch {
    orbits: Vec<Vec<(IVec3, f64)>>,
    bound: i64,
}

impl OrbitBatch {
    fn new(alg: &Algebra, hom: SignHom, weights: &[Weight]) -> Self {
        let orbits: Vec<Vec<(IVec3, f64)>> = weights
            .iter()
            .map(|w| alg.group().iter().map(|g| (g.act_weight(&w.0), g.sign(hom) as f64)).collect())
            .collect();
        let bound = orbits.iter().flatten().flat_map(|(mu, _)| mu.iter().map(|v| v.abs())).max().unwrap_or(0);
        OrbitBatch { orbits, bound }
    }

    fn eval(&self, x: &Vec3) -> Vec<Complex64> {
        let t = PhaseTable::new(x, self.bound);
        self.orbits.iter().map(|o| o.iter().map(|(mu, s)| t.at(mu) * s).sum()).collect()
    }
}

/// Integrates `g(x)` over `F` (α∨-coordinates) for a vector-valued `g`.
fn integrate<G>(alg: &Algebra, len: usize, method: Quadrature, g: G) -> Vec<Complex64>
where
    G: Fn(&Vec3) -> Vec<Complex64> + Sync,
{
    let volume = alg.domain_volume();
    let accumulate = |acc: &mut Vec<Complex64>, v: Vec<Complex64>, w: f64| {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b * w;
        }
    };
    match method {
        Quadrature::MonteCarlo { samples, seed } => {
            let batches = samples.div_ceil(MC_BATCH);
            let partial: Vec<Vec<Complex64>> = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(b as u64);
                    let count = MC_BATCH.min(samples - b * MC_BATCH);
                    let mut acc = vec![Complex64::new(0.0, 0.0); len];
                    for _ in 0..count {
                        let x = sampling::uniform_in_domain(alg, &mut rng);
                        accumulate(&mut acc, g(&x), 1.0);
                    }
                    acc
                })
                .collect();
            let mut total = vec![ComplexSum::default(); len];
            for p in partial {
                for (t, v) in total.iter_mut().zip(p) {
                    t.add(v);
                }
            }
            total.iter().map(|t| t.value() * (volume / samples as f64)).collect()
        }
        Quadrature::Midpoint { n } => {
            let h = 1.0 / n as f64;
            let verts = alg.domain_vertices();
            let partial: Vec<Vec<Complex64>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let s = (i as f64 + 0.5) * h;
                    let mut acc = vec![Complex64::new(0.0, 0.0); len];
                    for j in 0..n {
                        let t = (j as f64 + 0.5) * h;
                        for k in 0..n {
                            let u = (k as f64 + 0.5) * h;
                            let p = [s * (1.0 - t), s * t * (1.0 - u), s * t * u];
                            let orth: Vec3 = std::array::from_fn(|c| (0..3).map(|v| p[v] * verts[v + 1][c]).sum());
                            let x = alg.point_from_orthonormal(&orth);
                            accumulate(&mut acc, g(&x), s * s * t);
                        }
                    }
                    acc
                })
                .collect();
            let mut total = vec![ComplexSum::default(); len];
            for p in partial {
                for (t, v) in total.iter_mut().zip(p) {
                    t.add(v);
                }
            }
            // the collapsed cube has volume 1/6 against the unit simplex
            let scale = 6.0 * volume * h * h * h;
            total.iter().map(|t| t.value() * scale).collect()
        }
    }
}

/// `∫_F φ_λ conj(φ_λ') dx` for every pair from `weights`, as a matrix.
pub fn continuous_gram(algebra: AlgebraName, family: OrbitFamily, weights: &[Weight], method: Quadrature) -> Result<Matrix> {
    let alg = Algebra::get(algebra);
    for w in weights {
        if !family.admits(alg, w) {
            return Err(Error::WeightOutsideCone { weight: w.0, family: family.to_string() });
        }
    }
    let batch = OrbitBatch::new(alg, family.sign_hom(), weights);
    let n = weights.len();
    let data = integrate(alg, n * n, method, |x| {
        let v = batch.eval(x);
        let mut out = Vec::with_capacity(n * n);
        for a in &v {
            for b in &v {
                out.push(a * b.conj());
            }
        }
        out
    });
    Ok(Matrix { rows: n, cols: n, data })
}

/// `∫_F φ_λ conj(φ_λ') dx`.
pub fn continuous_inner_product(
    algebra: AlgebraName,
    family: OrbitFamily,
    lambda: Weight,
    lambda2: Weight,
    method: Quadrature,
) -> Result<Complex64> {
    Ok(continuous_gram(algebra, family, &[lambda, lambda2], method)?.get(0, 1))
}

/// Expected value `K·d_λ` of the continuous norm.
pub fn continuous_norm(algebra: AlgebraName, lambda: &Weight) -> f64 {
    let alg = Algebra::get(algebra);
    alg.volume_const * lie::stabilizer_order_d(alg, lambda) as f64
}

/// Random field on the grid, values in the unit square.
pub fn random_field(algebra: AlgebraName, family: Family, modulus: i64, seed: u64) -> Result<SampledField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grids::grid_count(algebra, family, modulus).max(0) as usize;
    let values = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SampledField::new(algebra, family, modulus, values)
}
