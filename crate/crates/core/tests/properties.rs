use num_complex::Complex64;
use proptest::prelude::*;

use weyl_orbit::grids::Family;
use weyl_orbit::lie::{orbit_size_eps, torus_stabilizer_order, Algebra, AlgebraName, TorusPoint, Weight, WEYL_ORDER};
use weyl_orbit::linalg;
use weyl_orbit::orbit::{
    eval_generic, max_on_boundary, product_decomposition_check, trig_correspondence_c3, verify_symmetries, OrbitFamily,
    OrbitFunctionSpec,
};
use weyl_orbit::transforms::{parseval_sides, random_field, Interpolant, TransformPlan};

fn algebra() -> impl Strategy<Value = AlgebraName> {
    prop_oneof![Just(AlgebraName::B3), Just(AlgebraName::C3)]
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Short), Just(Family::Long)]
}

fn orbit_family() -> impl Strategy<Value = OrbitFamily> {
    prop_oneof![Just(OrbitFamily::C), Just(OrbitFamily::S), Just(OrbitFamily::Ss), Just(OrbitFamily::Sl)]
}

/// A weight admitted by the family, obtained by shifting the forced coordinates up.
fn admitted(name: AlgebraName, family: OrbitFamily, raw: [i64; 3]) -> Weight {
    let alg = Algebra::get(name);
    let mut w = Weight(raw);
    for i in 0..3 {
        if !family.admits(alg, &w) && w.0[i] == 0 {
            let mut bumped = w;
            bumped.0[i] = 1;
            let needed = match family {
                OrbitFamily::C => false,
                OrbitFamily::S => true,
                OrbitFamily::Ss => alg.short[i],
                OrbitFamily::Sl => !alg.short[i],
            };
            if needed {
                w = bumped;
            }
        }
    }
    assert!(family.admits(alg, &w), "{name} {family} {w:?}");
    w
}

fn scale(z: Complex64) -> f64 {
    z.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_weyl_invariant(name in algebra(), w in 0usize..48, lam in prop::array::uniform3(-20i64..20), num in prop::array::uniform3(-50i64..50)) {
        let el = &Algebra::get(name).group()[w];
        let a = linalg::idot(&el.act_weight(&lam), &linalg::iapply(&el.alphavee, &num));
        prop_assert_eq!(a, linalg::idot(&lam, &num));
    }

    #[test]
    fn orbit_times_stabilizer_is_group_order(name in algebra(), num in prop::array::uniform3(-40i64..40), den in 1i64..40) {
        let alg = Algebra::get(name);
        let x = TorusPoint::new(num, den).unwrap();
        prop_assert_eq!(orbit_size_eps(alg, &x) * torus_stabilizer_order(alg, &x), WEYL_ORDER);
    }

    #[test]
    fn group_is_closed_and_signs_multiply(name in algebra(), a in 0usize..48, b in 0usize..48) {
        let alg = Algebra::get(name);
        let g = alg.group()[a].compose(&alg.group()[b]);
        let idx = alg.element_index(&g.alphavee);
        prop_assert!(idx.is_some());
        prop_assert_eq!(&alg.group()[idx.unwrap()], &g);
    }

    #[test]
    fn shift_and_weyl_symmetry(name in algebra(), fam in orbit_family(), raw in prop::array::uniform3(0i64..7), seed in any::<u64>()) {
        let spec = OrbitFunctionSpec::new(name, fam, admitted(name, fam, raw)).unwrap();
        prop_assert!(verify_symmetries(&spec, 8, seed).max_deviation() < 1e-10);
    }

    #[test]
    fn boundary_vanishing(name in algebra(), fam in family(), raw in prop::array::uniform3(0i64..7), seed in any::<u64>()) {
        let spec = OrbitFunctionSpec::new(name, fam.into(), admitted(name, fam.into(), raw)).unwrap();
        prop_assert!(max_on_boundary(&spec, fam, 16, seed) < 1e-10);
    }

    #[test]
    fn product_decomposes(name in algebra(), fam in family(), r1 in prop::array::uniform3(0i64..5), r2 in prop::array::uniform3(0i64..5), x in prop::array::uniform3(-1.0f64..1.0)) {
        let l1 = admitted(name, fam.into(), r1);
        let l2 = admitted(name, fam.into(), r2);
        let check = product_decomposition_check(name, fam, &l1, &l2, &x).unwrap();
        prop_assert!(check.deviation < 1e-9 * scale(check.lhs), "{}", check.deviation);
    }

    #[test]
    fn c3_trig_forms(fam in orbit_family(), raw in prop::array::uniform3(0i64..7), x in prop::array::uniform3(-1.0f64..1.0)) {
        let lam = admitted(AlgebraName::C3, fam, raw);
        let check = trig_correspondence_c3(fam, &lam, &x).unwrap();
        prop_assert!(check.deviation < 1e-10 * scale(check.orbit_value));
    }

    #[test]
    fn values_are_real_or_imaginary(name in algebra(), fam in orbit_family(), raw in prop::array::uniform3(0i64..7), x in prop::array::uniform3(-1.0f64..1.0)) {
        let spec = OrbitFunctionSpec::new(name, fam, admitted(name, fam, raw)).unwrap();
        let v = eval_generic(&spec, &x);
        prop_assert!(v.re.abs().min(v.im.abs()) < 1e-10 * scale(v));
        if fam == OrbitFamily::C {
            prop_assert!(v.im.abs() < 1e-10 * scale(v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_and_parseval(name in algebra(), fam in family(), m in 4i64..12, seed in any::<u64>()) {
        let plan = TransformPlan::new(name, fam, m).unwrap();
        let field = random_field(name, fam, m, seed).unwrap();
        let spectral = plan.forward(&field).unwrap();
        let back = plan.inverse_on_grid(&spectral).unwrap();
        let peak = field.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (a, b) in field.values.iter().zip(&back.values) {
            prop_assert!((a - b).norm() < 1e-9 * peak);
        }
        let (lhs, rhs) = parseval_sides(&plan, &field, &spectral);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(1e-300));
    }

    #[test]
    fn interpolant_reproduces_samples(name in algebra(), fam in family(), m in 2i64..9, seed in any::<u64>()) {
        let plan = TransformPlan::new(name, fam, m).unwrap();
        let field = random_field(name, fam, m, seed).unwrap();
        let interp = Interpolant::new(&plan.forward(&field).unwrap()).unwrap();
        for (p, v) in plan.points.iter().zip(&field.values) {
            prop_assert!((interp.eval(&p.alphavee_coords()) - v).norm() < 1e-9 * scale(*v));
        }
    }
}
