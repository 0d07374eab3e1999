//! Fundamental domains, the point grids `F_M` and the weight sets `Λ_M`.
//!
//! A point of `F` is written through its barycentric coordinates
//! `(y_0, y_1, y_2, y_3)`, `x = Σ y_i ω∨_i`, `y_0 + Σ m_i y_i = 1`; a point of
//! the dual domain `F∨` through `(z_0, …, z_3)`, `λ = Σ z_i ω_i`,
//! `z_0 + Σ m∨_i z_i = 1`. Grids are the integer solutions `u = M·y`
//! (resp. `t = M·z`) with the positivity pattern of the family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Algebra, AlgebraName, SignHom, TorusPoint, Weight};
use crate::linalg::{self, IMat3, IVec3, Vec3};

/// Boundary tolerance of the region predicates.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "s")]
    Short,
    #[serde(rename = "l")]
    Long,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Short, Family::Long];

    pub fn sign_hom(self) -> SignHom {
        match self {
            Family::Short => SignHom::Short,
            Family::Long => SignHom::Long,
        }
    }

    pub fn region(self) -> Region {
        match self {
            Family::Short => Region::Fs,
            Family::Long => Region::Fl,
        }
    }

    pub fn dual_region(self) -> Region {
        match self {
            Family::Short => Region::Fsvee,
            Family::Long => Region::Flvee,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Short => f.write_str("s"),
            Family::Long => f.write_str("l"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" | "S" | "short" | "Ss" => Ok(Family::Short),
            "l" | "L" | "long" | "Sl" => Ok(Family::Long),
            _ => Err(Error::InvalidArgument(format!("unknown family '{s}' (expected s or l)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    F,
    Fs,
    Fl,
    Fvee,
    Fsvee,
    Flvee,
}

/// Which of the four barycentric coordinates must be strictly positive.
pub(crate) fn strict_pattern(alg: &Algebra, region: Region) -> [bool; 4] {
    let s = alg.short;
    match region {
        Region::F | Region::Fvee => [false; 4],
        // Hˢ is fixed by the short simple reflections
        Region::Fs => [false, s[0], s[1], s[2]],
        // Hˡ is fixed by r_0 and the long simple reflections
        Region::Fl => [true, !s[0], !s[1], !s[2]],
        // H^{s∨} is fixed by r∨_0 and the short simple reflections
        Region::Fsvee => [true, s[0], s[1], s[2]],
        Region::Flvee => [false, !s[0], !s[1], !s[2]],
    }
}

/// Barycentric `(y_0, …, y_3)` of an orthonormal point with respect to `F`.
pub fn domain_coordinates(alg: &Algebra, p: &Vec3) -> [f64; 4] {
    let x = alg.point_from_orthonormal(p);
    let y = alg.coweight_coords(&x);
    let m = alg.marks;
    let y0 = 1.0 - (m[0] as f64 * y[0] + m[1] as f64 * y[1] + m[2] as f64 * y[2]);
    [y0, y[0], y[1], y[2]]
}

/// Barycentric `(z_0, …, z_3)` of an orthonormal point with respect to `F∨`.
pub fn dual_domain_coordinates(alg: &Algebra, p: &Vec3) -> [f64; 4] {
    let z: Vec3 = std::array::from_fn(|i| linalg::dot(p, &alg.coroots[i]));
    let m = alg.dual_marks;
    let z0 = 1.0 - (m[0] as f64 * z[0] + m[1] as f64 * z[1] + m[2] as f64 * z[2]);
    [z0, z[0], z[1], z[2]]
}

pub fn domain_membership(alg: &Algebra, region: Region, p: &Vec3) -> bool {
    let coords = match region {
        Region::F | Region::Fs | Region::Fl => domain_coordinates(alg, p),
        Region::Fvee | Region::Fsvee | Region::Flvee => dual_domain_coordinates(alg, p),
    };
    let strict = strict_pattern(alg, region);
    coords.iter().zip(strict).all(|(&c, s)| if s { c > BOUNDARY_TOL } else { c >= -BOUNDARY_TOL })
}

/// A point of `F_M^s` or `F_M^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub barycentric: [i64; 4],
    pub modulus: i64,
    pub algebra: AlgebraName,
    pub family: Family,
}

impl GridPoint {
    /// Exact α∨-coordinates `adj(C)·(u_1,u_2,u_3) / (det C · M)`.
    pub fn torus_point(&self) -> TorusPoint {
        let alg = Algebra::get(self.algebra);
        let u = [self.barycentric[1], self.barycentric[2], self.barycentric[3]];
        let num = linalg::iapply(&linalg::iadjugate(&alg.cartan), &u);
        TorusPoint::new(num, alg.cartan_det() * self.modulus).expect("positive modulus")
    }

    /// α∨-coordinates as reals (not reduced mod 1).
    pub fn alphavee_coords(&self) -> Vec3 {
        let alg = Algebra::get(self.algebra);
        let u = [self.barycentric[1], self.barycentric[2], self.barycentric[3]];
        let num = linalg::iapply(&linalg::iadjugate(&alg.cartan), &u);
        let den = (alg.cartan_det() * self.modulus) as f64;
        num.map(|v| v as f64 / den)
    }

    pub fn orthonormal(&self) -> Vec3 {
        let alg = Algebra::get(self.algebra);
        let y: Vec3 = std::array::from_fn(|i| self.barycentric[i + 1] as f64 / self.modulus as f64);
        linalg::combine(&y, &alg.coweights)
    }
}

/// A weight of `Λ_M^s` or `Λ_M^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridWeight {
    pub barycentric: [i64; 4],
    pub modulus: i64,
    pub algebra: AlgebraName,
    pub family: Family,
}

impl GridWeight {
    pub fn weight(&self) -> Weight {
        Weight([self.barycentric[1], self.barycentric[2], self.barycentric[3]])
    }

    pub fn orthonormal(&self) -> Vec3 {
        Algebra::get(self.algebra).weight_to_orthonormal(&self.weight().0)
    }
}

fn check_modulus(m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

/// Nonnegative solutions of `v_0 + Σ c_i v_i = m` with `v_k ≥ 1` where `strict[k]`,
/// in lexicographic order of `(v_1, v_2, v_3)`.
fn solutions(coeffs: IVec3, strict: [bool; 4], m: i64) -> Vec<[i64; 4]> {
    let lo: [i64; 4] = strict.map(|s| s as i64);
    let mut out = Vec::new();
    let mut v1 = lo[1];
    while coeffs[0] * v1 + lo[0] <= m {
        let r1 = m - coeffs[0] * v1;
        let mut v2 = lo[2];
        while coeffs[1] * v2 + lo[0] <= r1 {
            let r2 = r1 - coeffs[1] * v2;
            let mut v3 = lo[3];
            while coeffs[2] * v3 + lo[0] <= r2 {
                let v0 = r2 - coeffs[2] * v3;
                out.push([v0, v1, v2, v3]);
                v3 += 1;
            }
            v2 += 1;
        }
        v1 += 1;
    }
    out
}

pub fn enumerate_grid(alg: &Algebra, family: Family, m: i64) -> Result<Vec<GridPoint>> {
    check_modulus(m)?;
    let pattern = strict_pattern(alg, family.region());
    Ok(solutions(alg.marks, pattern, m)
        .into_iter()
        .map(|u| GridPoint { barycentric: u, modulus: m, algebra: alg.name, family })
        .collect())
}

pub fn enumerate_weights(alg: &Algebra, family: Family, m: i64) -> Result<Vec<GridWeight>> {
    check_modulus(m)?;
    let pattern = strict_pattern(alg, family.dual_region());
    Ok(solutions(alg.dual_marks, pattern, m)
        .into_iter()
        .map(|t| GridWeight { barycentric: t, modulus: m, algebra: alg.name, family })
        .collect())
}

/// Closed-form `|F_M| = |Λ_M|`.
pub fn grid_count(name: AlgebraName, family: Family, m: i64) -> i64 {
    let k = m / 2;
    let large = matches!((name, family), (AlgebraName::B3, Family::Short) | (AlgebraName::C3, Family::Long));
    match (large, m % 2 == 0) {
        (true, true) => k * (k + 1) * (2 * k + 1) / 6,
        (true, false) => k * (k + 1) * (k + 2) / 3,
        (false, true) => k * (k - 1) * (2 * k - 1) / 6,
        (false, false) => k * (k + 1) * (k - 1) / 3,
    }
}

/// `x_F = w·x + q∨`: the affine Weyl group element that folds a point into `F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduction {
    /// The folded point in α∨-coordinates.
    pub alphavee: Vec3,
    pub orthonormal: Vec3,
    /// Index of `w` in the canonical group order.
    pub element: usize,
    /// `q∨` in α∨-coordinates.
    pub shift: IVec3,
}

impl Reduction {
    pub fn sign(&self, alg: &Algebra, hom: SignHom) -> i8 {
        alg.group()[self.element].sign(hom)
    }
}

const MAX_REDUCTION_STEPS: usize = 100_000;

/// α∨-action of `r_ξ`: `x ↦ x − ⟨ξ, x⟩ ξ∨`.
fn xi_reflection(alg: &Algebra) -> IMat3 {
    let xi_row: IVec3 = std::array::from_fn(|j| (0..3).map(|i| alg.marks[i] * alg.cartan[i][j]).sum());
    let mut r = linalg::IDENTITY;
    for k in 0..3 {
        for j in 0..3 {
            r[k][j] -= alg.xi_coroot[k] * xi_row[j];
        }
    }
    r
}

/// Integer transformation `(L, s)` with `L x + s ∈ F` for `x` in α∨-coordinates.
///
/// Walks across violated walls of the alcove: a simple wall `y_i < 0` is
/// crossed with `r_i`, the affine wall `y_0 < 0` with `r_0`. Each step removes
/// one separating hyperplane, so the walk is finite.
fn fold_transform(alg: &Algebra, x0: &Vec3, tol: f64) -> Result<(IMat3, IVec3)> {
    let reflections: [IMat3; 3] = std::array::from_fn(|i| crate::lie::reflection_alphavee(&alg.cartan, i));
    let r_xi = xi_reflection(alg);
    let mut l = linalg::IDENTITY;
    let mut s = [0i64; 3];
    let mut x = *x0;
    for _ in 0..MAX_REDUCTION_STEPS {
        let y = alg.coweight_coords(&x);
        let (mut worst, mut which) = (-tol, None);
        for (i, &v) in y.iter().enumerate() {
            if v < worst {
                worst = v;
                which = Some(i);
            }
        }
        if let Some(i) = which {
            let r = &reflections[i];
            l = linalg::imul(r, &l);
            s = linalg::iapply(r, &s);
            x = linalg::iapply_f(r, &x);
            continue;
        }
        let height: f64 = (0..3).map(|i| alg.marks[i] as f64 * y[i]).sum();
        if 1.0 - height < -tol {
            l = linalg::imul(&r_xi, &l);
            s = linalg::iapply(&r_xi, &s);
            for k in 0..3 {
                s[k] += alg.xi_coroot[k];
            }
            x = linalg::iapply_f(&r_xi, &x);
            for k in 0..3 {
                x[k] += alg.xi_coroot[k] as f64;
            }
            continue;
        }
        return Ok((l, s));
    }
    Err(Error::ReductionDiverged(MAX_REDUCTION_STEPS))
}

/// Folds an arbitrary orthonormal point into `F`.
pub fn reduce_to_domain(alg: &Algebra, p: &Vec3) -> Result<Reduction> {
    let x0 = alg.point_from_orthonormal(p);
    reduce_alphavee(alg, &x0)
}

/// As [`reduce_to_domain`], for a point given in α∨-coordinates.
pub fn reduce_alphavee(alg: &Algebra, x0: &Vec3) -> Result<Reduction> {
    let (l, s) = fold_transform(alg, x0, BOUNDARY_TOL)?;
    let lx = linalg::iapply_f(&l, x0);
    let x: Vec3 = std::array::from_fn(|k| lx[k] + s[k] as f64);
    let element = alg.element_index(&l).expect("reflections compose to group elements");
    Ok(Reduction { alphavee: x, orthonormal: alg.point_to_orthonormal(&x), element, shift: s })
}

/// Exact canonical representative in `F` of a torus point, as `(numerators, den)`
/// in α∨-coordinates, together with the group element used.
pub fn reduce_torus_point(alg: &Algebra, x: &TorusPoint) -> Result<(IVec3, i64, usize)> {
    let den = x.denominator();
    let approx = x.coords();
    let (l, s) = fold_transform(alg, &approx, 1e-9 / den as f64)?;
    let lx = linalg::iapply(&l, &x.numerators());
    let num: IVec3 = std::array::from_fn(|k| lx[k] + s[k] * den);
    let y = linalg::iapply(&alg.cartan, &num);
    let height: i64 = (0..3).map(|i| alg.marks[i] * y[i]).sum();
    if y.iter().any(|&v| v < 0) || height > den {
        return Err(Error::ReductionDiverged(0));
    }
    let element = alg.element_index(&l).expect("group element");
    Ok((num, den, element))
}

/// Barycentric integer coordinates `u = M·y` of the canonical representative,
/// or `None` if the point is not in `(1/M)P∨`.
pub fn canonical_barycentric(alg: &Algebra, x: &TorusPoint, m: i64) -> Result<Option<[i64; 4]>> {
    let (num, den, _) = reduce_torus_point(alg, x)?;
    let y = linalg::iapply(&alg.cartan, &num);
    let scaled = y.map(|v| v * m);
    if scaled.iter().any(|v| v % den != 0) {
        return Ok(None);
    }
    let u = scaled.map(|v| v / den);
    let u0 = m - (0..3).map(|i| alg.marks[i] * u[i]).sum::<i64>();
    Ok(Some([u0, u[0], u[1], u[2]]))
}
