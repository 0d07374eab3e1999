//! Reference tables of stabilizer orders and the verification suite run by
//! `weyl-orbit verify`.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grids::{self, Family};
use crate::lie::{self, Algebra, AlgebraName, Weight};
use crate::linalg::Vec3;
use crate::orbit::{self, OrbitFamily, OrbitFunctionSpec};
use crate::transforms::{self, TransformPlan};

/// A zero pattern of barycentric coordinates (`true` = positive) with its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub positive: [bool; 4],
    pub value: usize,
}

const T: bool = true;
const F: bool = false;

const fn row(positive: [bool; 4], value: usize) -> TableRow {
    TableRow { positive, value }
}

/// `d_λ` by the zero pattern of `(a, b, c)`; identical for B3 and C3.
pub const STABILIZER_TABLE: [([bool; 3], usize); 8] = [
    ([T, T, T], 1),
    ([T, T, F], 2),
    ([T, F, T], 2),
    ([F, T, T], 2),
    ([T, F, F], 8),
    ([F, T, F], 4),
    ([F, F, T], 6),
    ([F, F, F], 48),
];

const B3_EPS_S: [TableRow; 8] = [
    row([T, T, T, T], 48),
    row([F, T, T, T], 24),
    row([T, F, T, T], 24),
    row([T, T, F, T], 24),
    row([F, F, T, T], 12),
    row([T, F, F, T], 8),
    row([F, T, F, T], 8),
    row([F, F, F, T], 2),
];
const B3_EPS_L: [TableRow; 2] = [row([T, T, T, T], 48), row([T, T, T, F], 24)];
const B3_H_S: [TableRow; 4] = [row([T, T, T, T], 1), row([T, F, T, T], 2), row([T, T, F, T], 2), row([T, F, F, T], 6)];
const B3_H_L: [TableRow; 4] = [row([T, T, T, T], 1), row([F, T, T, T], 2), row([T, T, T, F], 2), row([F, T, T, F], 4)];

const C3_EPS_S: [TableRow; 4] = [row([T, T, T, T], 48), row([F, T, T, T], 24), row([T, T, T, F], 24), row([F, T, T, F], 12)];
const C3_EPS_L: [TableRow; 4] = [row([T, T, T, T], 48), row([T, F, T, T], 24), row([T, T, F, T], 24), row([T, F, F, T], 8)];
const C3_H_S: [TableRow; 2] = [row([T, T, T, T], 1), row([T, T, T, F], 2)];
const C3_H_L: [TableRow; 8] = [
    row([T, T, T, T], 1),
    row([F, T, T, T], 2),
    row([T, F, T, T], 2),
    row([T, T, F, T], 2),
    row([F, F, T, T], 4),
    row([T, F, F, T], 6),
    row([F, T, F, T], 6),
    row([F, F, F, T], 24),
];

/// `ε(x)` by the zero pattern of `[u0, u1, u2, u3]`.
pub fn eps_table(algebra: AlgebraName, family: Family) -> &'static [TableRow] {
    match (algebra, family) {
        (AlgebraName::B3, Family::Short) => &B3_EPS_S,
        (AlgebraName::B3, Family::Long) => &B3_EPS_L,
        (AlgebraName::C3, Family::Short) => &C3_EPS_S,
        (AlgebraName::C3, Family::Long) => &C3_EPS_L,
    }
}

/// `h∨_λ` by the zero pattern of `[t0, t1, t2, t3]`.
pub fn h_table(algebra: AlgebraName, family: Family) -> &'static [TableRow] {
    match (algebra, family) {
        (AlgebraName::B3, Family::Short) => &B3_H_S,
        (AlgebraName::B3, Family::Long) => &B3_H_L,
        (AlgebraName::C3, Family::Short) => &C3_H_S,
        (AlgebraName::C3, Family::Long) => &C3_H_L,
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    /// First counterexample, or a short summary.
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, checked: 0, detail: String::new() }
    }

    fn fail(&mut self, detail: String) {
        if self.passed {
            self.detail = detail;
        }
        self.passed = false;
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(detail());
        }
    }

    fn summary(mut self, text: String) -> Self {
        if self.passed {
            self.detail = text;
        }
        self
    }
}

/// `d_λ` against the table for `trials` random instantiations per row.
pub fn check_stabilizer_table(trials: usize, seed: u64) -> Check {
    let mut check = Check::new("stabilizer orders d");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for (pattern, want) in STABILIZER_TABLE {
            for _ in 0..trials {
                let w = Weight(std::array::from_fn(|i| if pattern[i] { rng.gen_range(1..=25) } else { 0 }));
                let got = lie::stabilizer_order_d(alg, &w);
                check.expect(got == want, || format!("{name} λ={:?}: d={got}, table {want}", w.0));
            }
        }
    }
    let n = check.checked;
    check.summary(format!("{n} weights"))
}

fn pattern_of(b: &[i64; 4]) -> [bool; 4] {
    b.map(|v| v > 0)
}

/// `ε` and `h∨` against the tables: every grid element's pattern must have a
/// row, and each row is tested on up to `per_row` random members.
pub fn check_orbit_tables(moduli: &[i64], per_row: usize, seed: u64) -> Check {
    let mut check = Check::new("coefficients eps and h");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for &m in moduli {
                let points = grids::enumerate_grid(alg, family, m).expect("positive modulus");
                let weights = grids::enumerate_weights(alg, family, m).expect("positive modulus");
                for (label, table, items) in [
                    ("eps", eps_table(name, family), points.iter().map(|p| p.barycentric).collect::<Vec<_>>()),
                    ("h", h_table(name, family), weights.iter().map(|w| w.barycentric).collect::<Vec<_>>()),
                ] {
                    for b in &items {
                        let pat = pattern_of(b);
                        check.expect(table.iter().any(|r| r.positive == pat), || {
                            format!("{name} {family} M={m} {label}: pattern of {b:?} missing from table")
                        });
                    }
                    for r in table {
                        let mut class: Vec<&[i64; 4]> = items.iter().filter(|b| pattern_of(b) == r.positive).collect();
                        class.shuffle(&mut rng);
                        for b in class.into_iter().take(per_row) {
                            let got = if label == "eps" {
                                let p = grids::GridPoint { barycentric: *b, modulus: m, algebra: name, family };
                                lie::orbit_size_eps(alg, &p.torus_point())
                            } else {
                                lie::stabilizer_order_h(alg, &Weight([b[1], b[2], b[3]]), m)
                            };
                            check.expect(got == r.value, || {
                                format!("{name} {family} M={m} {label}{b:?} = {got}, table {}", r.value)
                            });
                        }
                    }
                }
            }
        }
    }
    let n = check.checked;
    check.summary(format!("{n} comparisons"))
}

/// Closed-form grid sizes for `M = 1..=max_m`.
pub fn check_counts(max_m: i64) -> Check {
    let mut check = Check::new("grid counts");
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            for m in 1..=max_m {
                let want = grids::grid_count(name, family, m) as usize;
                let p = grids::enumerate_grid(alg, family, m).map(|v| v.len()).unwrap_or(usize::MAX);
                let w = grids::enumerate_weights(alg, family, m).map(|v| v.len()).unwrap_or(usize::MAX);
                check.expect(p == want && w == want, || format!("{name} {family} M={m}: |F|={p}, |Λ|={w}, formula {want}"));
            }
        }
    }
    let n = check.checked;
    check.summary(format!("{n} moduli"))
}

/// Gram diagonality. `corrupt_eps` perturbs one `ε` entry as a negative control.
pub fn check_gram(moduli: &[i64], corrupt_eps: bool) -> Check {
    let mut check = Check::new("discrete orthogonality");
    let mut worst = 0.0f64;
    for name in AlgebraName::ALL {
        for family in Family::ALL {
            for &m in moduli {
                let mut plan = TransformPlan::new(name, family, m).expect("positive modulus");
                if plan.weights.is_empty() {
                    continue;
                }
                if corrupt_eps {
                    let last = plan.eps.len() - 1;
                    plan.eps[last] += 1;
                }
                let g = transforms::gram_from_plan(&plan);
                let off = g.max_offdiag_ratio();
                let diag = transforms::gram_diagonal_deviation(&g, &plan);
                worst = worst.max(off).max(diag);
                check.expect(off < 1e-8 && diag < 1e-8, || {
                    format!("{name} {family} M={m}: off-diagonal ratio {off:.3e}, diagonal deviation {diag:.3e}")
                });
            }
        }
    }
    check.summary(format!("worst deviation {worst:.3e}"))
}

fn random_weight(rng: &mut ChaCha8Rng, alg: &Algebra, family: OrbitFamily, max: i64) -> Weight {
    loop {
        let w = Weight(std::array::from_fn(|_| rng.gen_range(0..=max)));
        if family.admits(alg, &w) {
            return w;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec3 {
    std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
}

/// Explicit expansions against the generic sum, with purity.
pub fn check_explicit(trials: usize, seed: u64) -> Check {
    let mut check = Check::new("explicit expansions");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in [OrbitFamily::Ss, OrbitFamily::Sl] {
            let imaginary = matches!((name, family), (AlgebraName::B3, OrbitFamily::Ss) | (AlgebraName::C3, OrbitFamily::Sl));
            for _ in 0..trials {
                let w = random_weight(&mut rng, alg, family, 12);
                let x = random_point(&mut rng);
                let spec = OrbitFunctionSpec::new(name, family, w).expect("admissible");
                let g = orbit::eval_generic(&spec, &x);
                let e = orbit::eval_explicit(&spec, &x).expect("explicit family");
                let dev = (g - e).norm() / g.norm().max(1.0);
                let impurity = if imaginary { g.re.abs() } else { g.im.abs() };
                worst = worst.max(dev);
                check.expect(dev < 1e-10 && impurity < 1e-10, || {
                    format!("{name} {family} λ={:?} x={x:?}: deviation {dev:.3e}, impurity {impurity:.3e}", w.0)
                });
            }
        }
    }
    check.summary(format!("worst relative deviation {worst:.3e}"))
}

/// Shift and Weyl (anti)invariance for all four families.
pub fn check_symmetries(trials: usize, seed: u64) -> Check {
    let mut check = Check::new("symmetries");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in [OrbitFamily::C, OrbitFamily::S, OrbitFamily::Ss, OrbitFamily::Sl] {
            let spec = OrbitFunctionSpec::new(name, family, random_weight(&mut rng, alg, family, 6)).expect("admissible");
            let dev = orbit::verify_symmetries(&spec, trials, rng.gen()).max_deviation();
            worst = worst.max(dev);
            check.expect(dev < 1e-10, || format!("{name} {family} λ={:?}: deviation {dev:.3e}", spec.weight.0));
        }
    }
    check.summary(format!("worst relative deviation {worst:.3e}"))
}

/// Vanishing of Sˢ on `Hˢ` and Sˡ on `Hˡ`.
pub fn check_boundary(samples: usize, seed: u64) -> Check {
    let mut check = Check::new("boundary vanishing");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for name in AlgebraName::ALL {
        let alg = Algebra::get(name);
        for family in Family::ALL {
            let of = OrbitFamily::from(family);
            let spec = OrbitFunctionSpec::new(name, of, random_weight(&mut rng, alg, of, 8)).expect("admissible");
            let v = orbit::max_on_boundary(&spec, family, samples, rng.gen());
            worst = worst.max(v);
            check.expect(v < 1e-10, || format!("{name} {of} λ={:?}: |ψ| = {v:.3e} on the boundary", spec.weight.0));
        }
    }
    check.summary(format!("max |ψ| {worst:.3e}"))
}

/// C3 orbit functions as determinants and permanents.
pub fn check_trig(trials: usize, seed: u64) -> Check {
    let mut check = Check::new("C3 determinant/permanent correspondence");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = Algebra::get(AlgebraName::C3);
    let mut worst = 0.0f64;
    for family in [OrbitFamily::C, OrbitFamily::S, OrbitFamily::Ss, OrbitFamily::Sl] {
        for _ in 0..trials {
            let w = random_weight(&mut rng, alg, family, 8);
            let x = random_point(&mut rng);
            let t = orbit::trig_correspondence_c3(family, &w, &x).expect("admissible");
            worst = worst.max(t.deviation);
            check.expect(t.deviation < 1e-10, || format!("{family} λ={:?}: deviation {:.3e}", w.0, t.deviation));
        }
    }
    check.summary(format!("worst deviation {worst:.3e}"))
}

/// Forward then inverse transform of random data, and Parseval.
pub fn check_round_trip(moduli: &[i64], seed: u64) -> Check {
    let mut check = Check::new("round trip and Parseval");
    let mut worst = 0.0f64;
    for name in AlgebraName::ALL {
        for family in Family::ALL {
            for &m in moduli {
                let plan = TransformPlan::new(name, family, m).expect("positive modulus");
                let f = transforms::random_field(name, family, m, seed ^ m as u64).expect("valid field");
                let s = plan.forward(&f).expect("matching plan");
                let back = plan.inverse_on_grid(&s).expect("matching plan");
                let dev = back
                    .values
                    .iter()
                    .zip(&f.values)
                    .map(|(a, b): (&Complex64, &Complex64)| (a - b).norm() / b.norm().max(1.0))
                    .fold(0.0, f64::max);
                let (l, r) = transforms::parseval_sides(&plan, &f, &s);
                let pdev = if l > 0.0 { (l - r).abs() / l } else { r.abs() };
                worst = worst.max(dev);
                check.expect(dev < 1e-9 && pdev < 1e-8, || {
                    format!("{name} {family} M={m}: round trip {dev:.3e}, Parseval {pdev:.3e}")
                });
            }
        }
    }
    check.summary(format!("worst round-trip deviation {worst:.3e}"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub max_m: i64,
    pub seed: u64,
    pub corrupt_eps: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_m: 8, seed: 0, corrupt_eps: false }
    }
}

/// All suites, in a fixed order.
pub fn run_suite(opts: &SuiteOptions) -> Vec<Check> {
    let moduli: Vec<i64> = (2..=opts.max_m).filter(|m| m % 2 == 0).collect();
    vec![
        check_stabilizer_table(20, opts.seed),
        check_orbit_tables(&[6, 10, 11], 10, opts.seed),
        check_counts(30),
        check_gram(&moduli, opts.corrupt_eps),
        check_explicit(100, opts.seed),
        check_symmetries(100, opts.seed),
        check_boundary(50, opts.seed),
        check_trig(50, opts.seed),
        check_round_trip(&(2..=opts.max_m).collect::<Vec<_>>(), opts.seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_hold() {
        let c = check_stabilizer_table(5, 1);
        assert!(c.passed, "{}", c.detail);
        let c = check_orbit_tables(&[6, 7], 3, 1);
        assert!(c.passed, "{}", c.detail);
    }

    #[test]
    fn corrupted_eps_is_caught() {
        assert!(check_gram(&[4], false).passed);
        let c = check_gram(&[4], true);
        assert!(!c.passed);
        assert!(c.detail.contains("M=4"));
    }
}
