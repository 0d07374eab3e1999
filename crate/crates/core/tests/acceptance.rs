//! Acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance`. The process exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weyl_orbit::grids::{self, domain_membership, Family};
use weyl_orbit::lie::{orbit_size_eps, stabilizer_order_d, torus_stabilizer_order, Algebra, AlgebraName, TorusPoint, Weight};
use weyl_orbit::models::{self, LatticeEstimator, Preset};
use weyl_orbit::orbit::{product_decomposition_check, OrbitFamily};
use weyl_orbit::transforms::{self, continuous_gram, Quadrature};
use weyl_orbit::verify;

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Merges library checks into one outcome.
fn from_checks(checks: &[verify::Check]) -> Outcome {
    let passed = checks.iter().all(|c| c.passed);
    let detail = checks.iter().map(|c| format!("{} [{}; {}]", c.name, c.checked, c.detail)).collect::<Vec<_>>().join("; ");
    outcome(passed, detail)
}

fn within(limit: Duration, elapsed: Duration, mut o: Outcome) -> Outcome {
    if elapsed > limit {
        o.passed = false;
        o.detail += &format!("; runtime {elapsed:.2?} exceeds {limit:?}");
    } else {
        o.detail += &format!("; runtime {elapsed:.2?}");
    }
    o
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let checks = [verify::check_stabilizer_table(20, 1), verify::check_orbit_tables(&[6, 10, 11], usize::MAX, 1)];
    within(Duration::from_secs(10), start.elapsed(), from_checks(&checks))
}

/// `|F_M| = |Λ_M|` in closed form: the "large" pair is B3 short and C3 long.
fn closed_form(large: bool, m: i64) -> i64 {
    let k = m / 2;
    match (large, m % 2) {
        (true, 0) => k * (k + 1) * (2 * k + 1) / 6,
        (true, _) => k * (k + 1) * (k + 2) / 3,
        (false, 0) => k * (k - 1) * (2 * k - 1) / 6,
        (false, _) => k * (k + 1) * (k - 1) / 3,
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (name, family, large) in [
        (AlgebraName::B3, Family::Short, true),
        (AlgebraName::B3, Family::Long, false),
        (AlgebraName::C3, Family::Short, false),
        (AlgebraName::C3, Family::Long, true),
    ] {
        let alg = Algebra::get(name);
        for m in 1..=30 {
            let want = closed_form(large, m) as usize;
            let p = grids::enumerate_grid(alg, family, m).unwrap().len();
            let w = grids::enumerate_weights(alg, family, m).unwrap().len();
            if p != want || w != want {
                bad.push(format!("{name} {family} M={m}: {p}/{w} vs {want}"));
            }
        }
    }
    let o = if bad.is_empty() { outcome(true, "120 moduli exact") } else { outcome(false, bad.join(", ")) };
    within(Duration::from_secs(5), start.elapsed(), o)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst_off = 0.0f64;
    let mut worst_diag = 0.0f64;
    let mut bad = Vec::new();
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for m in [4, 6, 8, 10] {
                let (g, plan) = transforms::discrete_gram_matrix(name, family, m).unwrap();
                for (i, w) in plan.weights.iter().enumerate() {
                    let h = weyl_orbit::lie::stabilizer_order_h(alg, &w.weight(), m);
                    let want = 96.0 * (m * m * m) as f64 * h as f64;
                    let dev = (g.get(i, i).re - want).abs() / want + g.get(i, i).im.abs() / want;
                    worst_diag = worst_diag.max(dev);
                    for j in 0..plan.weights.len() {
                        if j != i {
                            worst_off = worst_off.max(g.get(i, j).norm() / want);
                        }
                    }
                }
                if worst_off >= 1e-8 || worst_diag >= 1e-8 {
                    bad.push(format!("{name} {family} M={m}"));
                }
            }
        }
    }
    let mut detail = format!("max off-diagonal/diagonal {worst_off:.2e}, diagonal deviation {worst_diag:.2e}");
    if !bad.is_empty() {
        detail += &format!(" (failing: {})", bad.join(", "));
    }
    let o = outcome(bad.is_empty(), detail);
    within(Duration::from_secs(120), start.elapsed(), o)
}

fn criterion_4() -> Outcome {
    from_checks(&[verify::check_explicit(500, 4)])
}

fn admitted_weights(alg: &Algebra, family: OrbitFamily, count: usize, rng: &mut ChaCha8Rng) -> Vec<Weight> {
    let mut out: Vec<Weight> = Vec::new();
    while out.len() < count {
        let w = Weight(std::array::from_fn(|_| rng.gen_range(0..4)));
        if family.admits(alg, &w) && !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_diag = 0.0f64;
    let mut worst_cross = 0.0f64;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in OrbitFamily::ALL {
            // five weights give ten distinct pairs
            let ws = admitted_weights(alg, family, 5, &mut rng);
            let g = continuous_gram(name, family, &ws, Quadrature::MonteCarlo { samples: 1_000_000, seed: rng.gen() }).unwrap();
            let norms: Vec<f64> = ws.iter().map(|w| alg.volume_const * stabilizer_order_d(alg, w) as f64).collect();
            for i in 0..ws.len() {
                worst_diag = worst_diag.max((g.get(i, i).re - norms[i]).abs() / norms[i]);
                for j in i + 1..ws.len() {
                    let scale = (norms[i] * norms[j]).sqrt();
                    worst_cross = worst_cross.max(g.get(i, j).norm() / scale);
                }
            }
        }
    }
    outcome(
        worst_diag < 0.02 && worst_cross < 0.02,
        format!("max relative norm deviation {worst_diag:.4}, max cross term {worst_cross:.4} (limit 0.02)"),
    )
}

fn table5(preset: &Preset, lines: &mut Vec<String>) -> bool {
    let est = LatticeEstimator::new(preset.algebra, preset.family, &preset.bump, 10_000_000, 0).unwrap();
    let mut ok = true;
    let mut prev = f64::INFINITY;
    for &(m, reference) in &preset.reference {
        let err = models::run_with_estimator(&est, m, &preset.bump).unwrap().report.error_l2;
        let ratio = err / reference;
        let close = (ratio - 1.0).abs() <= 0.15;
        let decreasing = err < prev;
        prev = err;
        ok &= close && decreasing;
        lines.push(format!(
            "{} M={m}: {err:.4e} vs {reference:.4e} (ratio {ratio:.3}){}{}",
            preset.name,
            if close { "" } else { " outside ±15%" },
            if decreasing { "" } else { " not decreasing" }
        ));
    }
    ok
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let a = table5(&models::preset_f1(), &mut lines);
    let b = table5(&models::preset_f2(), &mut lines);
    within(Duration::from_secs(1800), start.elapsed(), outcome(a && b, lines.join("; ")))
}

fn criterion_7() -> Outcome {
    let checks = [
        verify::check_round_trip(&(2..=12).collect::<Vec<_>>(), 7),
        verify::check_boundary(500, 7),
        verify::check_symmetries(500, 7),
        verify::check_trig(500, 7),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    let mut worst = 0.0f64;
    let mut product_ok = true;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for _ in 0..200 {
                let ws = admitted_weights(alg, family.into(), 2, &mut rng);
                let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let c = product_decomposition_check(name, family, &ws[0], &ws[1], &x).unwrap();
                let rel = c.deviation / c.lhs.norm().max(1.0);
                worst = worst.max(rel);
                product_ok &= rel < 1e-9;
            }
        }
    }

    let mut orbit_ok = true;
    let mut counted = 0;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for _ in 0..2000 {
            let den = rng.gen_range(1..60);
            let x = TorusPoint::new(std::array::from_fn(|_| rng.gen_range(-100..100)), den).unwrap();
            orbit_ok &= orbit_size_eps(alg, &x) * torus_stabilizer_order(alg, &x) == 48;
            counted += 1;
        }
    }
    let mut o = from_checks(&checks);
    o.passed &= product_ok && orbit_ok;
    o.detail += &format!("; product decomposition worst {worst:.2e}; orbit-stabilizer exact on {counted} points: {orbit_ok}");
    o
}

/// Folds every class of `(1/M)P∨/Q∨` with the floating-point alcove walk and
/// keeps those inside the region.
fn brute_force(alg: &Algebra, family: Family, m: i64) -> BTreeSet<[i64; 4]> {
    let den = 2 * m;
    let mut out = BTreeSet::new();
    for a in 0..den {
        for b in 0..den {
            for c in 0..den {
                let x = [a as f64 / den as f64, b as f64 / den as f64, c as f64 / den as f64];
                let y = alg.coweight_coords(&x);
                if y.iter().any(|v| (v * m as f64 - (v * m as f64).round()).abs() > 1e-9) {
                    continue;
                }
                let red = grids::reduce_alphavee(alg, &x).unwrap();
                if !domain_membership(alg, family.region(), &red.orthonormal) {
                    continue;
                }
                let y = alg.coweight_coords(&red.alphavee);
                let u: [i64; 3] = y.map(|v| (v * m as f64).round() as i64);
                let u0 = m - (0..3).map(|i| alg.marks[i] * u[i]).sum::<i64>();
                out.insert([u0, u[0], u[1], u[2]]);
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for m in 1..=8 {
                let grid: BTreeSet<[i64; 4]> = grids::enumerate_grid(alg, family, m).unwrap().iter().map(|p| p.barycentric).collect();
                if grid != brute_force(alg, family, m) {
                    bad.push(format!("{name} {family} M={m}"));
                }
            }
        }
    }
    if bad.is_empty() {
        outcome(true, "32 grids equal")
    } else {
        outcome(false, format!("mismatch: {}", bad.join(", ")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "structural tables", criterion_1),
        (2, "counting formulas", criterion_2),
        (3, "discrete orthogonality", criterion_3),
        (4, "explicit expansions", criterion_4),
        (5, "continuous orthogonality", criterion_5),
        (6, "interpolation errors", criterion_6),
        (7, "property suites", criterion_7),
        (8, "brute-force grids", criterion_8),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let o = run();
        println!("{} criterion {n} ({name}): {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.passed as usize;
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
