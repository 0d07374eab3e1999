//! Random points of the fundamental domain and of its zero boundaries.

use rand::Rng;

use crate::grids::{strict_pattern, Family};
use crate::lie::Algebra;
use crate::linalg::{self, Vec3};

/// Uniform point of the standard 3-simplex as barycentric weights.
pub fn uniform_barycentric<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let mut e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = e.iter().sum();
    for v in &mut e {
        *v /= total;
    }
    e
}

/// Point of `F` (α∨-coordinates) with barycentric weights `b` on the
/// vertices `0, ω∨_i/m_i`.
pub fn simplex_point(alg: &Algebra, b: &[f64; 4]) -> Vec3 {
    let y: Vec3 = std::array::from_fn(|i| b[i + 1] / alg.marks[i] as f64);
    let cartan: [Vec3; 3] = std::array::from_fn(|i| alg.cartan[i].map(|v| v as f64));
    linalg::apply(&linalg::inverse(&cartan), &y)
}

pub fn uniform_in_domain<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Vec3 {
    simplex_point(alg, &uniform_barycentric(rng))
}

/// Random point of `Hˢ` (short family) or `Hˡ` (long family).
pub fn boundary_point<R: Rng + ?Sized>(alg: &Algebra, family: Family, rng: &mut R) -> Vec3 {
    let pattern = strict_pattern(alg, family.region());
    let faces: Vec<usize> = (0..4).filter(|&k| pattern[k]).collect();
    let face = faces[rng.gen_range(0..faces.len())];
    let mut b = uniform_barycentric(rng);
    b[face] = 0.0;
    let total: f64 = b.iter().sum();
    for v in &mut b {
        *v /= total;
    }
    simplex_point(alg, &b)
}
