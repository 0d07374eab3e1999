//! Evaluation of the C-, S-, Sˢ- and Sˡ-functions
//! `ψ^σ_λ(x) = Σ_w σ(w) e^{2πi⟨wλ, x⟩}` and checks of their symmetries.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grids::Family;
use crate::lie::{Algebra, AlgebraName, SignHom, TorusPoint, Weight};
use crate::linalg::{self, IVec3, Vec3};
use crate::sampling;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitFamily {
    C,
    S,
    Ss,
    Sl,
}

impl OrbitFamily {
    pub const ALL: [OrbitFamily; 4] = [OrbitFamily::C, OrbitFamily::S, OrbitFamily::Ss, OrbitFamily::Sl];

    pub fn sign_hom(self) -> SignHom {
        match self {
            OrbitFamily::C => SignHom::Trivial,
            OrbitFamily::S => SignHom::Det,
            OrbitFamily::Ss => SignHom::Short,
            OrbitFamily::Sl => SignHom::Long,
        }
    }

    /// Whether `weight` belongs to the cone labelling this family.
    pub fn admits(self, alg: &Algebra, weight: &Weight) -> bool {
        match self {
            OrbitFamily::C => weight.is_dominant(),
            OrbitFamily::S => weight.is_strictly_dominant(),
            OrbitFamily::Ss => weight.in_short_cone(alg),
            OrbitFamily::Sl => weight.in_long_cone(alg),
        }
    }
}

impl From<Family> for OrbitFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Short => OrbitFamily::Ss,
            Family::Long => OrbitFamily::Sl,
        }
    }
}

impl fmt::Display for OrbitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitFamily::C => "C",
            OrbitFamily::S => "S",
            OrbitFamily::Ss => "Ss",
            OrbitFamily::Sl => "Sl",
        };
        f.write_str(s)
    }
}

impl FromStr for OrbitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(OrbitFamily::C),
            "S" => Ok(OrbitFamily::S),
            "Ss" | "ss" | "s" => Ok(OrbitFamily::Ss),
            "Sl" | "sl" | "l" => Ok(OrbitFamily::Sl),
            _ => Err(Error::InvalidArgument(format!("unknown orbit family '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitFunctionSpec {
    pub algebra: AlgebraName,
    pub family: OrbitFamily,
    pub weight: Weight,
}

impl OrbitFunctionSpec {
    pub fn new(algebra: AlgebraName, family: OrbitFamily, weight: Weight) -> Result<Self> {
        if !family.admits(Algebra::get(algebra), &weight) {
            return Err(Error::WeightOutsideCone { weight: weight.0, family: family.to_string() });
        }
        Ok(OrbitFunctionSpec { algebra, family, weight })
    }

    pub fn algebra(&self) -> &'static Algebra {
        Algebra::get(self.algebra)
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e^{2πiθ}` after reducing `θ` to `[-1/2, 1/2]`.
#[inline]
pub fn unit_phase(theta: f64) -> Complex64 {
    let r = theta - theta.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// Table of `e^{2πik/n}`, `k = 0..n`.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    n: i64,
    values: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(n: i64) -> Self {
        assert!(n > 0);
        let values = (0..n)
            .map(|k| {
                // fold into [-n/2, n/2] before scaling
                let k = if 2 * k > n { k - n } else { k };
                let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        RootsOfUnity { n, values }
    }

    pub fn order(&self) -> i64 {
        self.n
    }

    #[inline]
    pub fn get(&self, k: i64) -> Complex64 {
        self.values[k.rem_euclid(self.n) as usize]
    }
}

/// `Σ_w σ(w) e^{2πi⟨wλ, x⟩}` for an arbitrary integer weight (no cone check).
pub fn orbit_sum(alg: &Algebra, hom: SignHom, weight: &IVec3, x: &Vec3) -> Complex64 {
    let mut acc = ComplexSum::default();
    for w in alg.group() {
        let mu = w.act_weight(weight);
        let theta = mu[0] as f64 * x[0] + mu[1] as f64 * x[1] + mu[2] as f64 * x[2];
        acc.add(unit_phase(theta) * w.sign(hom) as f64);
    }
    acc.value()
}

/// Orbit sum at a rational point with exact phase reduction.
pub fn orbit_sum_exact(alg: &Algebra, hom: SignHom, weight: &IVec3, x: &TorusPoint, table: &RootsOfUnity) -> Complex64 {
    let num = x.numerators_over(table.order()).expect("table order must be a multiple of the point denominator");
    let mut acc = ComplexSum::default();
    for w in alg.group() {
        let mu = w.act_weight(weight);
        acc.add(table.get(linalg::idot(&mu, &num)) * w.sign(hom) as f64);
    }
    acc.value()
}

/// Generic 48-term evaluation at a point in α∨-coordinates.
pub fn eval_generic(spec: &OrbitFunctionSpec, x: &Vec3) -> Complex64 {
    orbit_sum(spec.algebra(), spec.family.sign_hom(), &spec.weight.0, x)
}

/// Generic evaluation at a torus point, phases reduced exactly mod 1.
pub fn eval_at_torus_point(spec: &OrbitFunctionSpec, x: &TorusPoint) -> Complex64 {
    let table = RootsOfUnity::new(x.denominator());
    orbit_sum_exact(spec.algebra(), spec.family.sign_hom(), &spec.weight.0, x, &table)
}

pub use crate::explicit::eval_explicit;

/// A trigonometric polynomial `Σ c_μ e^{2πi⟨μ, x⟩}` with merged frequencies,
/// grouped by `(μ_1, μ_2)` for fast evaluation.
#[derive(Clone, Debug, Default)]
pub struct TrigPolynomial {
    terms: Vec<(IVec3, Complex64)>,
    groups: Vec<(i64, i64, usize, usize)>,
    bound: i64,
}

impl TrigPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (IVec3, Complex64)>) -> Self {
        let mut merged: BTreeMap<IVec3, Complex64> = BTreeMap::new();
        for (mu, c) in terms {
            *merged.entry(mu).or_default() += c;
        }
        let terms: Vec<(IVec3, Complex64)> = merged.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
        let bound = terms.iter().flat_map(|(mu, _)| mu.iter().map(|v| v.abs())).max().unwrap_or(0);
        let mut groups = Vec::new();
        let mut start = 0;
        while start < terms.len() {
            let key = (terms[start].0[0], terms[start].0[1]);
            let mut end = start;
            while end < terms.len() && (terms[end].0[0], terms[end].0[1]) == key {
                end += 1;
            }
            groups.push((key.0, key.1, start, end));
            start = end;
        }
        TrigPolynomial { terms, groups, bound }
    }

    /// The orbit function `coeff · ψ^σ_λ` as a trigonometric polynomial.
    pub fn from_orbits(alg: &Algebra, hom: SignHom, orbits: impl IntoIterator<Item = (IVec3, Complex64)>) -> Self {
        let mut terms = Vec::new();
        for (weight, coeff) in orbits {
            for w in alg.group() {
                terms.push((w.act_weight(&weight), coeff * w.sign(hom) as f64));
            }
        }
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[(IVec3, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest absolute frequency component.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn eval(&self, x: &Vec3) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let b = self.bound;
        let powers: [Vec<Complex64>; 3] =
            std::array::from_fn(|j| (-b..=b).map(|n| unit_phase(n as f64 * x[j])).collect());
        let at = |j: usize, n: i64| powers[j][(n + b) as usize];
        let mut total = Complex64::new(0.0, 0.0);
        for &(m1, m2, start, end) in &self.groups {
            let mut inner = Complex64::new(0.0, 0.0);
            for (mu, c) in &self.terms[start..end] {
                inner += c * at(2, mu[2]);
            }
            total += inner * at(0, m1) * at(1, m2);
        }
        total
    }
}

fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymmetryReport {
    pub trials: usize,
    /// `max |ψ(x+q∨) − ψ(x)|` (relative)
    pub shift: f64,
    /// `max |ψ(wx) − σ(w)ψ(x)|` (relative)
    pub weyl_point: f64,
    /// `max |ψ_{wλ}(x) − σ(w)ψ_λ(x)|` (relative)
    pub weyl_weight: f64,
}

impl SymmetryReport {
    pub fn max_deviation(&self) -> f64 {
        self.shift.max(self.weyl_point).max(self.weyl_weight)
    }
}

/// Randomized check of shift invariance and Weyl (anti)invariance in both arguments.
pub fn verify_symmetries(spec: &OrbitFunctionSpec, trials: usize, seed: u64) -> SymmetryReport {
    let alg = spec.algebra();
    let hom = spec.family.sign_hom();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SymmetryReport { trials, ..Default::default() };
    for _ in 0..trials {
        let x: Vec3 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let q: IVec3 = std::array::from_fn(|_| rng.gen_range(-3..=3));
        let w = &alg.group()[rng.gen_range(0..alg.group().len())];
        let base = eval_generic(spec, &x);
        let shifted: Vec3 = std::array::from_fn(|k| x[k] + q[k] as f64);
        report.shift = report.shift.max(rel_dev(eval_generic(spec, &shifted), base));
        let sigma = w.sign(hom) as f64;
        report.weyl_point = report.weyl_point.max(rel_dev(eval_generic(spec, &w.act_point(&x)), base * sigma));
        let moved = orbit_sum(alg, hom, &w.act_weight(&spec.weight.0), &x);
        report.weyl_weight = report.weyl_weight.max(rel_dev(moved, base * sigma));
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

/// `φ_λ(x)·φ_λ'(x)` against `Σ_w σ(w) Φ_{λ+wλ'}(x)`.
pub fn product_decomposition_check(
    algebra: AlgebraName,
    family: Family,
    lambda: &Weight,
    lambda_prime: &Weight,
    x: &Vec3,
) -> Result<ProductCheck> {
    let of = OrbitFamily::from(family);
    let a = OrbitFunctionSpec::new(algebra, of, *lambda)?;
    let b = OrbitFunctionSpec::new(algebra, of, *lambda_prime)?;
    let alg = Algebra::get(algebra);
    let hom = family.sign_hom();
    let lhs = eval_generic(&a, x) * eval_generic(&b, x);
    let mut acc = ComplexSum::default();
    for w in alg.group() {
        let image = w.act_weight(&lambda_prime.0);
        let sum = [lambda.0[0] + image[0], lambda.0[1] + image[1], lambda.0[2] + image[2]];
        acc.add(orbit_sum(alg, SignHom::Trivial, &sum, x) * w.sign(hom) as f64);
    }
    let rhs = acc.value();
    Ok(ProductCheck { lhs, rhs, deviation: (lhs - rhs).norm() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigCheck {
    pub orbit_value: Complex64,
    pub det_per_value: Complex64,
    pub deviation: f64,
}

fn permanent(m: &[Vec3; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] + m[1][2] * m[2][1]) + m[0][1] * (m[1][0] * m[2][2] + m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] + m[1][1] * m[2][0])
}

/// C3 orbit functions as determinants/permanents of `(cos 2πλ_i x_j)` and
/// `(sin 2πλ_i x_j)` in orthonormal coordinates:
/// `Φ = 8 cos⁺`, `φ = −8i sin⁻`, `φˢ = 8 cos⁻`, `φˡ = −8i sin⁺`.
pub fn trig_correspondence_c3(family: OrbitFamily, weight: &Weight, x: &Vec3) -> Result<TrigCheck> {
    let spec = OrbitFunctionSpec::new(AlgebraName::C3, family, *weight)?;
    let alg = spec.algebra();
    let lam = alg.weight_to_orthonormal(&weight.0);
    let pt = alg.point_to_orthonormal(x);
    let cosm: [Vec3; 3] = std::array::from_fn(|i| std::array::from_fn(|j| (TAU * lam[i] * pt[j]).cos()));
    let sinm: [Vec3; 3] = std::array::from_fn(|i| std::array::from_fn(|j| (TAU * lam[i] * pt[j]).sin()));
    let det_per_value = match family {
        OrbitFamily::C => Complex64::new(8.0 * permanent(&cosm), 0.0),
        OrbitFamily::S => Complex64::new(0.0, -8.0 * linalg::det(&sinm)),
        OrbitFamily::Ss => Complex64::new(8.0 * linalg::det(&cosm), 0.0),
        OrbitFamily::Sl => Complex64::new(0.0, -8.0 * permanent(&sinm)),
    };
    let orbit_value = eval_generic(&spec, x);
    Ok(TrigCheck { orbit_value, det_per_value, deviation: (orbit_value - det_per_value).norm() })
}

/// Maximum `|ψ|` over random points of the zero boundary (`Hˢ` or `Hˡ`).
pub fn max_on_boundary(spec: &OrbitFunctionSpec, family: Family, samples: usize, seed: u64) -> f64 {
    let alg = spec.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| eval_generic(spec, &sampling::boundary_point(alg, family, &mut rng)).norm())
        .fold(0.0, f64::max)
}
