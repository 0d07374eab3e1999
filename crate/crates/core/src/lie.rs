//! Root-system data for B3 and C3 and the action of their Weyl group.
//!
//! Conventions used throughout the crate:
//!
//! - weights are integer triples in the ω-basis,
//! - points are triples in the α∨-basis,
//!
//! so that the pairing `⟨λ, x⟩` is the plain dot product of coordinates
//! (`⟨ω_i, α∨_j⟩ = δ_ij`). The Cartan matrix is `C_ij = ⟨α_i, α∨_j⟩`; row `i`
//! holds the ω-coordinates of `α_i`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, gcd, IMat3, IVec3, Vec3};

/// Order of the Weyl group of both supported algebras.
pub const WEYL_ORDER: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraName {
    B3,
    C3,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 2] = [AlgebraName::B3, AlgebraName::C3];
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraName::B3 => f.write_str("B3"),
            AlgebraName::C3 => f.write_str("C3"),
        }
    }
}

impl FromStr for AlgebraName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "B3" => Ok(AlgebraName::B3),
            "C3" => Ok(AlgebraName::C3),
            _ => Err(Error::InvalidArgument(format!("unknown algebra '{s}' (expected B3 or C3)"))),
        }
    }
}

/// The four admissible sign homomorphisms `W → {±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignHom {
    /// `𝟙(w) = 1`
    Trivial,
    /// `σᵉ(w) = det w`
    Det,
    /// `σˢ`: −1 on reflections in short simple roots
    Short,
    /// `σˡ`: −1 on reflections in long simple roots
    Long,
}

impl SignHom {
    pub const ALL: [SignHom; 4] = [SignHom::Trivial, SignHom::Det, SignHom::Short, SignHom::Long];

    fn index(self) -> usize {
        match self {
            SignHom::Trivial => 0,
            SignHom::Det => 1,
            SignHom::Short => 2,
            SignHom::Long => 3,
        }
    }

    /// Value on the simple reflection `r_i`, given whether `α_i` is short.
    pub fn on_generator(self, is_short: bool) -> i8 {
        match self {
            SignHom::Trivial => 1,
            SignHom::Det => -1,
            SignHom::Short => {
                if is_short {
                    -1
                } else {
                    1
                }
            }
            SignHom::Long => {
                if is_short {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// One element of the Weyl group, stored as its integer action on both
/// coordinate systems together with its four sign values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on ω-coordinates of weights.
    pub omega: IMat3,
    /// Action on α∨-coordinates of points (the contragredient of `omega`).
    pub alphavee: IMat3,
    signs: [i8; 4],
}

impl WeylElement {
    fn identity() -> Self {
        WeylElement { omega: linalg::IDENTITY, alphavee: linalg::IDENTITY, signs: [1; 4] }
    }

    #[inline]
    pub fn sign(&self, hom: SignHom) -> i8 {
        self.signs[hom.index()]
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    #[inline]
    pub fn act_weight(&self, weight: &IVec3) -> IVec3 {
        linalg::iapply(&self.omega, weight)
    }

    #[inline]
    pub fn act_point(&self, x: &Vec3) -> Vec3 {
        linalg::iapply_f(&self.alphavee, x)
    }

    pub fn act_torus(&self, x: &TorusPoint) -> TorusPoint {
        TorusPoint::from_numerators(linalg::iapply(&self.alphavee, &x.num), x.den)
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut signs = [0; 4];
        for (k, s) in signs.iter_mut().enumerate() {
            *s = self.signs[k] * other.signs[k];
        }
        WeylElement {
            omega: linalg::imul(&self.omega, &other.omega),
            alphavee: linalg::imul(&self.alphavee, &other.alphavee),
            signs,
        }
    }
}

/// Static data of B3 or C3, including its Weyl group.
#[derive(Debug)]
pub struct Algebra {
    pub name: AlgebraName,
    /// Orthonormal coordinates of `α_1, α_2, α_3`.
    pub simple_roots: [Vec3; 3],
    pub coroots: [Vec3; 3],
    pub weights: [Vec3; 3],
    pub coweights: [Vec3; 3],
    pub cartan: IMat3,
    pub coxeter: IMat3,
    /// Coefficients of the highest root in the α-basis.
    pub marks: IVec3,
    /// Coefficients of the highest dual root in the α∨-basis.
    pub dual_marks: IVec3,
    /// `short[i]` is true when `α_{i+1}` is a short root.
    pub short: [bool; 3],
    /// `K = |W|·|F|`.
    pub volume_const: f64,
    /// `k = |W|·det C`.
    pub discrete_const: i64,
    /// The coroot of the highest root, in α∨-coordinates; `r_0 x = r_ξ x + xi_coroot`.
    pub xi_coroot: IVec3,
    group: Vec<WeylElement>,
    by_alphavee: HashMap<IMat3, usize>,
}

impl Algebra {
    /// Shared, lazily built instance.
    pub fn get(name: AlgebraName) -> &'static Algebra {
        static B3: OnceLock<Algebra> = OnceLock::new();
        static C3: OnceLock<Algebra> = OnceLock::new();
        let cell = match name {
            AlgebraName::B3 => &B3,
            AlgebraName::C3 => &C3,
        };
        cell.get_or_init(|| build_algebra(name).expect("built-in root data is consistent"))
    }

    pub fn group(&self) -> &[WeylElement] {
        &self.group
    }

    /// Index of the group element with the given α∨-action, if any.
    pub fn element_index(&self, alphavee: &IMat3) -> Option<usize> {
        self.by_alphavee.get(alphavee).copied()
    }

    pub fn cartan_det(&self) -> i64 {
        linalg::idet(&self.cartan)
    }

    /// Volume of the fundamental domain `F`.
    pub fn domain_volume(&self) -> f64 {
        self.volume_const / WEYL_ORDER as f64
    }

    /// Vertices `0, ω∨_i / m_i` of `F` in orthonormal coordinates.
    pub fn domain_vertices(&self) -> [Vec3; 4] {
        let mut v = [[0.0; 3]; 4];
        for i in 0..3 {
            v[i + 1] = linalg::scale(&self.coweights[i], 1.0 / self.marks[i] as f64);
        }
        v
    }

    pub fn is_short(&self, i: usize) -> bool {
        self.short[i]
    }

    /// Orthonormal coordinates of a point given in the α∨-basis.
    pub fn point_to_orthonormal(&self, x: &Vec3) -> Vec3 {
        linalg::combine(x, &self.coroots)
    }

    /// α∨-coordinates of a point given in orthonormal coordinates.
    pub fn point_from_orthonormal(&self, p: &Vec3) -> Vec3 {
        // x_j = ⟨p, ω_j⟩
        [linalg::dot(p, &self.weights[0]), linalg::dot(p, &self.weights[1]), linalg::dot(p, &self.weights[2])]
    }

    /// Orthonormal coordinates of a weight given in the ω-basis.
    pub fn weight_to_orthonormal(&self, w: &IVec3) -> Vec3 {
        linalg::combine(&[w[0] as f64, w[1] as f64, w[2] as f64], &self.weights)
    }

    /// Coefficients of a point in the ω∨-basis: `y_i = ⟨x, α_i⟩ = Σ_j C_ij x_j`.
    pub fn coweight_coords(&self, x: &Vec3) -> Vec3 {
        linalg::iapply_f(&self.cartan, x)
    }

    /// Whether `ν` (ω-coordinates) lies in `M·Q`.
    pub fn is_in_scaled_root_lattice(&self, nu: &IVec3, modulus: i64) -> bool {
        // ν = Cᵀ n  ⇔  adj(Cᵀ) ν = det(C) n
        let adj = linalg::iadjugate(&linalg::itranspose(&self.cartan));
        let scaled = linalg::iapply(&adj, nu);
        let q = modulus * self.cartan_det();
        scaled.iter().all(|v| v.rem_euclid(q) == 0)
    }
}

fn simple_roots(name: AlgebraName) -> [Vec3; 3] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match name {
        AlgebraName::B3 => [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [0.0, 0.0, 1.0]],
        AlgebraName::C3 => [[r, -r, 0.0], [0.0, r, -r], [0.0, 0.0, std::f64::consts::SQRT_2]],
    }
}

fn round_integral(value: f64, what: &'static str) -> Result<i64> {
    let r = value.round();
    if (value - r).abs() > 1e-9 {
        return Err(Error::NonIntegral { what, value });
    }
    Ok(r as i64)
}

/// Builds the full data set for one algebra from its simple roots.
pub fn build_algebra(name: AlgebraName) -> Result<Algebra> {
    let simple_roots = simple_roots(name);
    let norms: Vec<f64> = simple_roots.iter().map(|a| linalg::dot(a, a)).collect();
    let coroots: [Vec3; 3] = std::array::from_fn(|i| linalg::scale(&simple_roots[i], 2.0 / norms[i]));
    // ω is the basis dual to α∨: Ω · (A∨)ᵀ = I
    let weights = linalg::inverse(&linalg::transpose(&coroots));
    let coweights: [Vec3; 3] = std::array::from_fn(|i| linalg::scale(&weights[i], 2.0 / norms[i]));

    let mut cartan = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            cartan[i][j] = round_integral(linalg::dot(&simple_roots[i], &coroots[j]), "Cartan entry")?;
        }
    }
    let mut coxeter = [[1; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                coxeter[i][j] = match cartan[i][j] * cartan[j][i] {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    3 => 6,
                    other => {
                        return Err(Error::NonIntegral { what: "Coxeter exponent", value: other as f64 });
                    }
                };
            }
        }
    }
    let longest = norms.iter().cloned().fold(f64::MIN, f64::max);
    let short: [bool; 3] = std::array::from_fn(|i| norms[i] < longest - 1e-9);

    let group = generate_from_cartan(&cartan, short)?;

    // Highest root: maximal height in the W-orbit of the simple roots (α-coordinates).
    let ct_adj = linalg::iadjugate(&linalg::itranspose(&cartan));
    let det = linalg::idet(&cartan);
    let mut highest: Option<IVec3> = None;
    for w in &group {
        for row in &cartan {
            let root_omega = w.act_weight(row);
            let scaled = linalg::iapply(&ct_adj, &root_omega);
            if scaled.iter().any(|v| v % det != 0) {
                return Err(Error::NonIntegral { what: "root in α-basis", value: scaled[0] as f64 / det as f64 });
            }
            let alpha_coords = [scaled[0] / det, scaled[1] / det, scaled[2] / det];
            if highest.is_none_or(|h| alpha_coords.iter().sum::<i64>() > h.iter().sum::<i64>()) {
                highest = Some(alpha_coords);
            }
        }
    }
    let marks = highest.expect("group is non-empty");

    // Highest dual root: orbit of the unit vectors under the α∨-action.
    let mut dual_highest: Option<IVec3> = None;
    for w in &group {
        for j in 0..3 {
            let mut e = [0; 3];
            e[j] = 1;
            let c = linalg::iapply(&w.alphavee, &e);
            if dual_highest.is_none_or(|h| c.iter().sum::<i64>() > h.iter().sum::<i64>()) {
                dual_highest = Some(c);
            }
        }
    }
    let dual_marks = dual_highest.expect("group is non-empty");

    let vertices: [Vec3; 3] = std::array::from_fn(|i| linalg::scale(&coweights[i], 1.0 / marks[i] as f64));
    let volume = linalg::det(&vertices).abs() / 6.0;
    let volume_const = group.len() as f64 * volume;
    let discrete_const = group.len() as i64 * det;

    // ξ∨ = 2ξ/⟨ξ,ξ⟩ expressed in α∨-coordinates (x_j = ⟨ξ∨, ω_j⟩).
    let xi = linalg::combine(&[marks[0] as f64, marks[1] as f64, marks[2] as f64], &simple_roots);
    let xi_cor = linalg::scale(&xi, 2.0 / linalg::dot(&xi, &xi));
    let mut xi_coroot = [0; 3];
    for j in 0..3 {
        xi_coroot[j] = round_integral(linalg::dot(&xi_cor, &weights[j]), "highest coroot")?;
    }

    let by_alphavee = group.iter().enumerate().map(|(i, w)| (w.alphavee, i)).collect();
    Ok(Algebra {
        name,
        simple_roots,
        coroots,
        weights,
        coweights,
        cartan,
        coxeter,
        marks,
        dual_marks,
        short,
        volume_const,
        discrete_const,
        xi_coroot,
        group,
        by_alphavee,
    })
}

/// Simple reflection `r_i` acting on ω-coordinates: `r_i λ = λ − λ_i·(row i of C)`.
pub fn reflection_omega(cartan: &IMat3, i: usize) -> IMat3 {
    let mut r = linalg::IDENTITY;
    for k in 0..3 {
        r[k][i] -= cartan[i][k];
    }
    r
}

/// Simple reflection `r_i` acting on α∨-coordinates: `r_i x = x − ⟨α_i, x⟩ α∨_i`.
pub fn reflection_alphavee(cartan: &IMat3, i: usize) -> IMat3 {
    linalg::itranspose(&reflection_omega(cartan, i))
}

fn generate_from_cartan(cartan: &IMat3, short: [bool; 3]) -> Result<Vec<WeylElement>> {
    let generators: Vec<WeylElement> = (0..3)
        .map(|i| WeylElement {
            omega: reflection_omega(cartan, i),
            alphavee: reflection_alphavee(cartan, i),
            signs: std::array::from_fn(|k| SignHom::ALL[k].on_generator(short[i])),
        })
        .collect();

    // Breadth-first closure; the discovery order is the canonical element order.
    let cap = 4 * WEYL_ORDER;
    let mut seen: HashSet<IMat3> = HashSet::new();
    let mut elements = Vec::with_capacity(WEYL_ORDER);
    let mut queue = VecDeque::new();
    let id = WeylElement::identity();
    seen.insert(id.omega);
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in &generators {
            let next = g.compose(s);
            if seen.insert(next.omega) {
                queue.push_back(next);
            }
        }
        elements.push(g);
        if seen.len() > cap {
            return Err(Error::GroupClosure { found: seen.len(), expected: WEYL_ORDER });
        }
    }
    if elements.len() != WEYL_ORDER {
        return Err(Error::GroupClosure { found: elements.len(), expected: WEYL_ORDER });
    }
    Ok(elements)
}

/// Regenerates the Weyl group from the algebra's Cartan matrix.
pub fn generate_weyl_group(alg: &Algebra) -> Result<Vec<WeylElement>> {
    generate_from_cartan(&alg.cartan, alg.short)
}

pub fn sign_value(hom: SignHom, w: &WeylElement) -> i8 {
    w.sign(hom)
}

/// Whether a ±1 assignment on `r_1, r_2, r_3` respects the Coxeter relations.
pub fn admissibility_check(alg: &Algebra, values: [i8; 3]) -> bool {
    for i in 0..3 {
        if values[i].abs() != 1 {
            return false;
        }
        for j in 0..3 {
            let base = (values[i] * values[j]) as i64;
            if base.pow(alg.coxeter[i][j] as u32) != 1 {
                return false;
            }
        }
    }
    true
}

/// A weight in ω-coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub IVec3);

impl Weight {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Weight([a, b, c])
    }

    pub fn coords(&self) -> IVec3 {
        self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    pub fn is_strictly_dominant(&self) -> bool {
        self.0.iter().all(|&v| v >= 1)
    }

    /// `P⁺ˢ`: dominant and not orthogonal to any short simple root.
    pub fn in_short_cone(&self, alg: &Algebra) -> bool {
        self.is_dominant() && (0..3).all(|i| !alg.short[i] || self.0[i] >= 1)
    }

    /// `P⁺ˡ`: dominant and not orthogonal to any long simple root.
    pub fn in_long_cone(&self, alg: &Algebra) -> bool {
        self.is_dominant() && (0..3).all(|i| alg.short[i] || self.0[i] >= 1)
    }
}

/// A point of the torus `ℝ³/Q∨` with rational α∨-coordinates `num / den`,
/// kept in lowest terms with numerators in `[0, den)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    num: IVec3,
    den: i64,
}

impl TorusPoint {
    pub fn new(num: IVec3, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidModulus(den));
        }
        Ok(Self::from_numerators(num, den))
    }

    fn from_numerators(num: IVec3, den: i64) -> Self {
        let mut num = num.map(|v| v.rem_euclid(den));
        let g = num.iter().fold(den, |g, &v| gcd(g, v));
        let den = den / g;
        for v in &mut num {
            *v /= g;
        }
        TorusPoint { num, den }
    }

    pub fn origin() -> Self {
        TorusPoint { num: [0; 3], den: 1 }
    }

    pub fn numerators(&self) -> IVec3 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Numerators over a denominator that is a multiple of the stored one.
    pub fn numerators_over(&self, den: i64) -> Option<IVec3> {
        if den % self.den != 0 {
            return None;
        }
        let f = den / self.den;
        Some(self.num.map(|v| v * f))
    }

    pub fn coords(&self) -> Vec3 {
        self.num.map(|v| v as f64 / self.den as f64)
    }

    pub fn shifted(&self, q: &IVec3) -> TorusPoint {
        let num = [self.num[0] + q[0] * self.den, self.num[1] + q[1] * self.den, self.num[2] + q[2] * self.den];
        TorusPoint::from_numerators(num, self.den)
    }
}

/// `⟨λ, x⟩` as an exact fraction `(numerator, denominator)` (not reduced mod 1).
pub fn pairing(weight: &Weight, x: &TorusPoint) -> (i64, i64) {
    (linalg::idot(&weight.0, &x.num), x.den)
}

/// `d_λ = |Stab_W(λ)|`.
pub fn stabilizer_order_d(alg: &Algebra, weight: &Weight) -> usize {
    alg.group().iter().filter(|w| w.act_weight(&weight.0) == weight.0).count()
}

/// Number of `w ∈ W` with `wx ≡ x mod Q∨`.
pub fn torus_stabilizer_order(alg: &Algebra, x: &TorusPoint) -> usize {
    alg.group().iter().filter(|w| w.act_torus(x) == *x).count()
}

/// `ε(x) = |Wx|` on the torus `ℝ³/Q∨`.
pub fn orbit_size_eps(alg: &Algebra, x: &TorusPoint) -> usize {
    let orbit: HashSet<TorusPoint> = alg.group().iter().map(|w| w.act_torus(x)).collect();
    orbit.len()
}

/// `h∨_λ`: number of `w ∈ W` with `wλ ≡ λ mod MQ`.
pub fn stabilizer_order_h(alg: &Algebra, weight: &Weight, modulus: i64) -> usize {
    alg.group()
        .iter()
        .filter(|w| {
            let image = w.act_weight(&weight.0);
            let diff = [weight.0[0] - image[0], weight.0[1] - image[1], weight.0[2] - image[2]];
            alg.is_in_scaled_root_lattice(&diff, modulus)
        })
        .count()
}
