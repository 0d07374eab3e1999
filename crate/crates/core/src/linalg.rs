//! Small fixed-size helpers for 3×3 integer and real matrices.

pub type IMat3 = [[i64; 3]; 3];
pub type IVec3 = [i64; 3];
pub type Vec3 = [f64; 3];

pub const IDENTITY: IMat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn imul(a: &IMat3, b: &IMat3) -> IMat3 {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[inline]
pub fn iapply(a: &IMat3, v: &IVec3) -> IVec3 {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

#[inline]
pub fn iapply_f(a: &IMat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][0] as f64 * v[0] + a[i][1] as f64 * v[1] + a[i][2] as f64 * v[2];
    }
    out
}

pub fn itranspose(a: &IMat3) -> IMat3 {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn idet(a: &IMat3) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Adjugate, so that `a · adj(a) = det(a) · I`.
pub fn iadjugate(a: &IMat3) -> IMat3 {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
            out[i][j] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    out
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn idot(a: &IVec3, b: &IVec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn scale(v: &Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Linear combination `Σ c_i · basis[i]`.
pub fn combine(coeffs: &Vec3, basis: &[Vec3; 3]) -> Vec3 {
    let mut out = [0.0; 3];
    for (c, b) in coeffs.iter().zip(basis) {
        for k in 0..3 {
            out[k] += c * b[k];
        }
    }
    out
}

pub fn det(a: &[Vec3; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn inverse(a: &[Vec3; 3]) -> [Vec3; 3] {
    let d = det(a);
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
            out[i][j] = if (i + j) % 2 == 0 { minor / d } else { -minor / d };
        }
    }
    out
}

pub fn transpose(a: &[Vec3; 3]) -> [Vec3; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn apply(a: &[Vec3; 3], v: &Vec3) -> Vec3 {
    [dot(&a[0], v), dot(&a[1], v), dot(&a[2], v)]
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_identity() {
        let a: IMat3 = [[2, -1, 0], [-1, 2, -2], [0, -1, 2]];
        let adj = iadjugate(&a);
        let d = idet(&a);
        assert_eq!(d, 2);
        let prod = imul(&a, &adj);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn float_inverse() {
        let a = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [0.0, 0.0, 2.0]];
        let inv = inverse(&a);
        let v = [0.3, -1.2, 4.0];
        let back = apply(&a, &apply(&inv, &v));
        for k in 0..3 {
            assert!((back[k] - v[k]).abs() < 1e-14);
        }
    }
}
