//! 48-term sums recomputed in 200-bit arithmetic at rational points.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weyl_orbit::grids::Family;
use weyl_orbit::lie::{Algebra, AlgebraName, SignHom, TorusPoint, Weight};
use weyl_orbit::orbit::{eval_at_torus_point, eval_generic, product_decomposition_check, OrbitFamily, OrbitFunctionSpec};

const P: usize = 200;
const RM: RoundingMode = RoundingMode::ToEven;

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("decimal output")
}

/// `Σ_w σ(w) e^{2πi⟨wλ, n/q⟩}` with all arithmetic at `P` bits.
fn big_orbit_sum(alg: &Algebra, hom: SignHom, lambda: [i64; 3], num: [i64; 3], q: i64, cc: &mut Consts) -> (BigFloat, BigFloat) {
    let two_pi = cc.pi(P, RM).mul(&BigFloat::from_i64(2, P), P, RM);
    let mut re = BigFloat::from_i64(0, P);
    let mut im = BigFloat::from_i64(0, P);
    for w in alg.group() {
        let mu = w.act_weight(&lambda);
        let k = (mu[0] * num[0] + mu[1] * num[1] + mu[2] * num[2]).rem_euclid(q);
        let theta = two_pi.mul(&BigFloat::from_i64(k, P), P, RM).div(&BigFloat::from_i64(q, P), P, RM);
        let s = BigFloat::from_i64(w.sign(hom) as i64, P);
        re = re.add(&theta.cos(P, RM, cc).mul(&s, P, RM), P, RM);
        im = im.add(&theta.sin(P, RM, cc).mul(&s, P, RM), P, RM);
    }
    (re, im)
}

fn to_complex(z: &(BigFloat, BigFloat)) -> Complex64 {
    Complex64::new(to_f64(&z.0), to_f64(&z.1))
}

#[test]
fn generic_sum_matches_high_precision() {
    let mut cc = Consts::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let alg = Algebra::get(AlgebraName::B3);
    let spec = OrbitFunctionSpec::new(AlgebraName::B3, OrbitFamily::Ss, Weight::new(1, 1, 1)).unwrap();
    for _ in 0..10 {
        let q = rng.gen_range(7..200);
        let num: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-q..q));
        let want = to_complex(&big_orbit_sum(alg, SignHom::Short, [1, 1, 1], num, q, &mut cc));
        let x = num.map(|v| v as f64 / q as f64);
        let got = eval_generic(&spec, &x);
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{got} vs {want}");
        let exact = eval_at_torus_point(&spec, &TorusPoint::new(num, q).unwrap());
        assert!((exact - want).norm() < 1e-12 * want.norm().max(1.0));
    }
}

#[test]
fn every_family_matches_high_precision() {
    let mut cc = Consts::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in [OrbitFamily::C, OrbitFamily::S, OrbitFamily::Ss, OrbitFamily::Sl] {
            let lambda = loop {
                let w = Weight(std::array::from_fn(|_| rng.gen_range(0..9)));
                if family.admits(alg, &w) {
                    break w;
                }
            };
            let q = rng.gen_range(5..120);
            let num: [i64; 3] = std::array::from_fn(|_| rng.gen_range(0..q));
            let want = to_complex(&big_orbit_sum(alg, family.sign_hom(), lambda.0, num, q, &mut cc));
            let spec = OrbitFunctionSpec::new(name, family, lambda).unwrap();
            let got = eval_at_torus_point(&spec, &TorusPoint::new(num, q).unwrap());
            assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{name} {family}");
        }
    }
}

fn big_product_check(name: AlgebraName, family: Family, l1: [i64; 3], l2: [i64; 3], num: [i64; 3], q: i64) -> (Complex64, Complex64) {
    let mut cc = Consts::new().unwrap();
    let alg = Algebra::get(name);
    let hom = family.sign_hom();
    let a = big_orbit_sum(alg, hom, l1, num, q, &mut cc);
    let b = big_orbit_sum(alg, hom, l2, num, q, &mut cc);
    let lhs_re = a.0.mul(&b.0, P, RM).sub(&a.1.mul(&b.1, P, RM), P, RM);
    let lhs_im = a.0.mul(&b.1, P, RM).add(&a.1.mul(&b.0, P, RM), P, RM);
    let mut re = BigFloat::from_i64(0, P);
    let mut im = BigFloat::from_i64(0, P);
    for w in alg.group() {
        let image = w.act_weight(&l2);
        let sum = [l1[0] + image[0], l1[1] + image[1], l1[2] + image[2]];
        let c = big_orbit_sum(alg, SignHom::Trivial, sum, num, q, &mut cc);
        let s = BigFloat::from_i64(w.sign(hom) as i64, P);
        re = re.add(&c.0.mul(&s, P, RM), P, RM);
        im = im.add(&c.1.mul(&s, P, RM), P, RM);
    }
    (to_complex(&(lhs_re, lhs_im)), to_complex(&(re, im)))
}

#[test]
fn product_decomposition_against_high_precision() {
    for (name, family, l1, l2) in [
        (AlgebraName::B3, Family::Short, [0, 0, 1], [0, 0, 1]),
        (AlgebraName::C3, Family::Long, [0, 0, 1], [1, 0, 1]),
    ] {
        let (num, q) = ([3, -5, 7], 23);
        let (lhs, rhs) = big_product_check(name, family, l1, l2, num, q);
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        let x = num.map(|v| v as f64 / q as f64);
        let check = product_decomposition_check(name, family, &Weight(l1), &Weight(l2), &x).unwrap();
        assert!((check.lhs - lhs).norm() < 1e-9 && (check.rhs - rhs).norm() < 1e-9);
        assert!(check.deviation < 1e-9);
    }
}
