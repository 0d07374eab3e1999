use std::collections::{BTreeSet, HashSet};

use weyl_orbit::grids::{canonical_barycentric, domain_membership, enumerate_grid, enumerate_weights, Family, Region};
use weyl_orbit::lie::{Algebra, AlgebraName, TorusPoint};
use weyl_orbit::linalg;

/// Every class of `(1/M)P∨/Q∨`, folded into `F` and kept if it lies in the region.
fn brute_force(alg: &Algebra, family: Family, m: i64) -> BTreeSet<[i64; 4]> {
    let den = alg.cartan_det() * m;
    let strict: [bool; 4] = match family {
        Family::Short => [false, alg.short[0], alg.short[1], alg.short[2]],
        Family::Long => [true, !alg.short[0], !alg.short[1], !alg.short[2]],
    };
    let mut out = BTreeSet::new();
    let mut seen = HashSet::new();
    for a in 0..den {
        for b in 0..den {
            for c in 0..den {
                let x = TorusPoint::new([a, b, c], den).unwrap();
                // coweight coordinates C·x must be multiples of 1/M
                let y = linalg::iapply(&alg.cartan, &x.numerators_over(den).unwrap());
                if y.iter().any(|v| v % alg.cartan_det() != 0) {
                    continue;
                }
                if !seen.insert(x) {
                    continue;
                }
                let u = canonical_barycentric(alg, &x, m).unwrap().expect("point of (1/M)P∨");
                if u.iter().zip(strict).all(|(&v, s)| !s || v > 0) {
                    out.insert(u);
                }
            }
        }
    }
    assert_eq!(seen.len() as i64, alg.cartan_det() * m * m * m);
    out
}

#[test]
fn enumeration_equals_brute_force() {
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for m in 1..=8 {
                let grid: BTreeSet<[i64; 4]> = enumerate_grid(alg, family, m).unwrap().iter().map(|p| p.barycentric).collect();
                assert_eq!(grid, brute_force(alg, family, m), "{name} {family} M={m}");
            }
        }
    }
}

#[test]
fn points_and_weights_lie_in_their_regions() {
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for p in enumerate_grid(alg, family, 9).unwrap() {
                assert!(domain_membership(alg, family.region(), &p.orthonormal()));
            }
            for w in enumerate_weights(alg, family, 9).unwrap() {
                let scaled: [f64; 3] = w.orthonormal().map(|v| v / 9.0);
                assert!(domain_membership(alg, family.dual_region(), &scaled), "{name} {family} {:?}", w.barycentric);
            }
        }
    }
}

#[test]
fn region_examples() {
    let b3 = Algebra::get(AlgebraName::B3);
    assert!(domain_membership(b3, Region::F, &[0.0; 3]));
    assert!(!domain_membership(b3, Region::Fs, &[0.0; 3]));
    let v = b3.coweights[2].map(|c| c / 2.0);
    assert!(domain_membership(b3, Region::F, &v));
}
