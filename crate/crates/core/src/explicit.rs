//! Closed 24-term sine/cosine expansions of the Sˢ- and Sˡ-functions.
//!
//! Each term is written as the printed linear form `⟨wλ, x⟩` in the weight
//! coordinates `(a, b, c)` and the point coordinates `(x, y, z)`; the two
//! halves `w` and `−w` of the group combine into one sine or cosine.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{Algebra, AlgebraName};
use crate::linalg::{IMat3, Vec3};
use crate::orbit::{ComplexSum, OrbitFamily, OrbitFunctionSpec};

const B3_SHORT: &str = "\
+(ax+by+cz) +(-ax+(a+b)y+cz)
+((a+b)x-by+(2b+c)z) -(ax+(b+c)y-cz)
+(bx-(a+b)y+(2a+2b+c)z) -(-ax+(a+b+c)y-cz)
+(-(a+b)x+ay+(2b+c)z) -((a+b)x+(b+c)y-(2b+c)z)
-((a+b+c)x-(b+c)y+(2b+c)z) +(-bx-ay+(2a+2b+c)z)
-(bx+(a+b+c)y-(2a+2b+c)z) -((b+c)x-(a+b+c)y+(2a+2b+c)z)
-(-(a+b)x+(a+2b+c)y-(2b+c)z) -((a+2b+c)x-(b+c)y+cz)
-(-(a+b+c)x+ay+(2b+c)z) +((a+b+c)x+by-(2b+c)z)
-(-bx+(a+2b+c)y-(2a+2b+c)z) -((a+2b+c)x-(a+b+c)y+cz)
-(-(b+c)x-ay+(2a+2b+c)z) +((b+c)x+(a+b)y-(2a+2b+c)z)
-((b+c)x-(a+2b+c)y+(2a+2b+c)z) -(-(a+2b+c)x+(a+b)y+cz)
+((a+2b+c)x-by-cz) +(-(a+b+c)x+(a+2b+c)y-(2b+c)z)";

const B3_LONG: &str = "\
+(ax+by+cz) -(-ax+(a+b)y+cz)
-((a+b)x-by+(2b+c)z) +(ax+(b+c)y-cz)
+(bx-(a+b)y+(2a+2b+c)z) -(-ax+(a+b+c)y-cz)
+(-(a+b)x+ay+(2b+c)z) -((a+b)x+(b+c)y-(2b+c)z)
-((a+b+c)x-(b+c)y+(2b+c)z) -(-bx-ay+(2a+2b+c)z)
+(bx+(a+b+c)y-(2a+2b+c)z) +((b+c)x-(a+b+c)y+(2a+2b+c)z)
+(-(a+b)x+(a+2b+c)y-(2b+c)z) +((a+2b+c)x-(b+c)y+cz)
+(-(a+b+c)x+ay+(2b+c)z) -((a+b+c)x+by-(2b+c)z)
-(-bx+(a+2b+c)y-(2a+2b+c)z) -((a+2b+c)x-(a+b+c)y+cz)
-(-(b+c)x-ay+(2a+2b+c)z) +((b+c)x+(a+b)y-(2a+2b+c)z)
-((b+c)x-(a+2b+c)y+(2a+2b+c)z) -(-(a+2b+c)x+(a+b)y+cz)
+((a+2b+c)x-by-cz) +(-(a+b+c)x+(a+2b+c)y-(2b+c)z)";

const C3_SHORT: &str = "\
+(ax+by+cz) -(-ax+(a+b)y+cz)
-((a+b)x-by+(b+c)z) +(ax+(b+2c)y-cz)
+(bx-(a+b)y+(a+b+c)z) -(-ax+(a+b+2c)y-cz)
+(-(a+b)x+ay+(b+c)z) -((a+b)x+(b+2c)y-(b+c)z)
-((a+b+2c)x-(b+2c)y+(b+c)z) -(-bx-ay+(a+b+c)z)
+(bx+(a+b+2c)y-(a+b+c)z) +((b+2c)x-(a+b+2c)y+(a+b+c)z)
+(-(a+b)x+(a+2b+2c)y-(b+c)z) +((a+2b+2c)x-(b+2c)y+cz)
+(-(a+b+2c)x+ay+(b+c)z) -((a+b+2c)x+by-(b+c)z)
-(-bx+(a+2b+2c)y-(a+b+c)z) -((a+2b+2c)x-(a+b+2c)y+cz)
-(-(b+2c)x-ay+(a+b+c)z) +((b+2c)x+(a+b)y-(a+b+c)z)
-((b+2c)x-(a+2b+2c)y+(a+b+c)z) -(-(a+2b+2c)x+(a+b)y+cz)
+((a+2b+2c)x-by-cz) +(-(a+b+2c)x+(a+2b+2c)y-(b+c)z)";

const C3_LONG: &str = "\
+(ax+by+cz) +(-ax+(a+b)y+cz)
+((a+b)x-by+(b+c)z) -(ax+(b+2c)y-cz)
+(bx-(a+b)y+(a+b+c)z) -(-ax+(a+b+2c)y-cz)
+(-(a+b)x+ay+(b+c)z) -((a+b)x+(b+2c)y-(b+c)z)
-((a+b+2c)x-(b+2c)y+(b+c)z) +(-bx-ay+(a+b+c)z)
-(bx+(a+b+2c)y-(a+b+c)z) -((b+2c)x-(a+b+2c)y+(a+b+c)z)
-(-(a+b)x+(a+2b+2c)y-(b+c)z) -((a+2b+2c)x-(b+2c)y+cz)
-(-(a+b+2c)x+ay+(b+c)z) +((a+b+2c)x+by-(b+c)z)
-(-bx+(a+2b+2c)y-(a+b+c)z) -((a+2b+2c)x-(a+b+2c)y+cz)
-(-(b+2c)x-ay+(a+b+c)z) +((b+2c)x+(a+b)y-(a+b+c)z)
-((b+2c)x-(a+2b+2c)y+(a+b+c)z) -(-(a+2b+2c)x+(a+b)y+cz)
+((a+2b+2c)x-by-cz) +(-(a+b+2c)x+(a+2b+2c)y-(b+c)z)";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `2i Σ ± sin(2π⟨wλ, x⟩)`
    Sine,
    /// `2 Σ ± cos(2π⟨wλ, x⟩)`
    Cosine,
}

/// One term: sign and the matrix taking `(a, b, c)` to the coefficients of `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub sign: i8,
    pub form: IMat3,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub kind: Kind,
    pub terms: Vec<Term>,
}

fn parse_linear(s: &str) -> std::result::Result<[i64; 3], String> {
    let mut out = [0; 3];
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let n: i64 = if i > start { s[start..i].parse().map_err(|e| format!("{e}"))? } else { 1 };
        let slot = match bytes.get(i) {
            Some(b'a') => 0,
            Some(b'b') => 1,
            Some(b'c') => 2,
            other => return Err(format!("expected a, b or c in '{s}', found {other:?}")),
        };
        out[slot] += sign * n;
        i += 1;
    }
    Ok(out)
}

/// Parses a term such as `-(-(a+b)x+ay+(2b+c)z)`.
pub fn parse_term(t: &str) -> std::result::Result<Term, String> {
    let t = t.trim();
    let sign = match t.as_bytes().first() {
        Some(b'+') => 1,
        Some(b'-') => -1,
        _ => return Err(format!("term '{t}' must start with a sign")),
    };
    let body = t[1..].strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(|| format!("unbalanced term '{t}'"))?;
    let mut rows: [Option<[i64; 3]>; 3] = [None; 3];
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut neg = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            neg = bytes[i] == b'-';
            i += 1;
        }
        let coeff = if bytes.get(i) == Some(&b'(') {
            let close = body[i..].find(')').ok_or_else(|| format!("unbalanced coefficient in '{t}'"))? + i;
            let c = parse_linear(&body[i + 1..close])?;
            i = close + 1;
            c
        } else {
            let start = i;
            while i < bytes.len() && !matches!(bytes[i], b'x' | b'y' | b'z') {
                i += 1;
            }
            parse_linear(&body[start..i])?
        };
        let var = match bytes.get(i) {
            Some(b'x') => 0,
            Some(b'y') => 1,
            Some(b'z') => 2,
            other => return Err(format!("expected x, y or z in '{t}', found {other:?}")),
        };
        i += 1;
        if rows[var].is_some() {
            return Err(format!("variable repeated in '{t}'"));
        }
        rows[var] = Some(if neg { coeff.map(|v| -v) } else { coeff });
    }
    let form = [rows[0].unwrap_or([0; 3]), rows[1].unwrap_or([0; 3]), rows[2].unwrap_or([0; 3])];
    Ok(Term { sign, form })
}

fn parse_table(text: &str, kind: Kind) -> Expansion {
    let terms: Vec<Term> = text.split_whitespace().map(|t| parse_term(t).expect("built-in expansion parses")).collect();
    assert_eq!(terms.len(), 24);
    Expansion { kind, terms }
}

/// The expansion for `(algebra, family)`, or an error for C and S.
pub fn expansion(algebra: AlgebraName, family: OrbitFamily) -> Result<&'static Expansion> {
    static TABLES: OnceLock<[Expansion; 4]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        [
            parse_table(B3_SHORT, Kind::Sine),
            parse_table(B3_LONG, Kind::Cosine),
            parse_table(C3_SHORT, Kind::Cosine),
            parse_table(C3_LONG, Kind::Sine),
        ]
    });
    match (algebra, family) {
        (AlgebraName::B3, OrbitFamily::Ss) => Ok(&tables[0]),
        (AlgebraName::B3, OrbitFamily::Sl) => Ok(&tables[1]),
        (AlgebraName::C3, OrbitFamily::Ss) => Ok(&tables[2]),
        (AlgebraName::C3, OrbitFamily::Sl) => Ok(&tables[3]),
        _ => Err(Error::UnsupportedExplicit { algebra, family: family.to_string() }),
    }
}

/// Evaluates the closed expansion at a point in α∨-coordinates.
pub fn eval_explicit(spec: &OrbitFunctionSpec, x: &Vec3) -> Result<Complex64> {
    let exp = expansion(spec.algebra, spec.family)?;
    let lam = spec.weight.0;
    let mut acc = ComplexSum::default();
    for term in &exp.terms {
        let mut theta = 0.0;
        for (k, row) in term.form.iter().enumerate() {
            theta += (row[0] * lam[0] + row[1] * lam[1] + row[2] * lam[2]) as f64 * x[k];
        }
        let r = theta - theta.round();
        let v = match exp.kind {
            Kind::Sine => (TAU * r).sin(),
            Kind::Cosine => (TAU * r).cos(),
        };
        acc.add(Complex64::new(term.sign as f64 * v, 0.0));
    }
    let s = acc.value().re;
    Ok(match exp.kind {
        Kind::Sine => Complex64::new(0.0, 2.0 * s),
        Kind::Cosine => Complex64::new(2.0 * s, 0.0),
    })
}

/// A term whose linear form is not `wλ` for a group element with the
/// matching sign.
#[derive(Clone, Debug, PartialEq)]
pub struct TermMismatch {
    pub index: usize,
    pub reason: String,
}

/// Checks every term against the group: its form must be the ω-action of some
/// `w` with `σ(w)` equal to the printed sign, and the 24 terms together with
/// their negatives must cover all 48 elements.
pub fn audit_expansion(algebra: AlgebraName, family: OrbitFamily) -> Result<Vec<TermMismatch>> {
    let exp = expansion(algebra, family)?;
    audit_terms(algebra, family, &exp.terms)
}

pub fn audit_terms(algebra: AlgebraName, family: OrbitFamily, terms: &[Term]) -> Result<Vec<TermMismatch>> {
    let alg = Algebra::get(algebra);
    let hom = family.sign_hom();
    let mut hit = vec![false; alg.group().len()];
    let mut out = Vec::new();
    for (index, term) in terms.iter().enumerate() {
        match alg.group().iter().position(|w| w.omega == term.form) {
            None => out.push(TermMismatch { index, reason: "not the action of a group element".into() }),
            Some(i) => {
                let w = &alg.group()[i];
                if w.sign(hom) != term.sign {
                    out.push(TermMismatch { index, reason: format!("sign {} but σ(w) = {}", term.sign, w.sign(hom)) });
                }
                hit[i] = true;
                let neg = term.form.map(|r| r.map(|v| -v));
                if let Some(j) = alg.group().iter().position(|w| w.omega == neg) {
                    hit[j] = true;
                }
            }
        }
    }
    if out.is_empty() && hit.iter().any(|h| !h) {
        out.push(TermMismatch { index: terms.len(), reason: "terms do not cover the group".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Weight;
    use crate::orbit::eval_generic;

    #[test]
    fn parse_examples() {
        let t = parse_term("-(-(a+b)x+(a+2b+c)y-(2b+c)z)").unwrap();
        assert_eq!(t.sign, -1);
        assert_eq!(t.form, [[-1, -1, 0], [1, 2, 1], [0, -2, -1]]);
        let t = parse_term("+(-bx-ay+(2a+2b+c)z)").unwrap();
        assert_eq!(t.form, [[0, -1, 0], [-1, 0, 0], [2, 2, 1]]);
        assert!(parse_term("(ax)").is_err());
        assert!(parse_term("+(ax+by").is_err());
    }

    #[test]
    fn every_term_matches_the_group() {
        for name in AlgebraName::ALL {
            for fam in [OrbitFamily::Ss, OrbitFamily::Sl] {
                assert!(audit_expansion(name, fam).unwrap().is_empty(), "{name} {fam}");
            }
        }
    }

    #[test]
    fn audit_flags_uncorrected_terms() {
        // the z-sign of the tenth term, as it appears in older transcriptions
        let mut terms = expansion(AlgebraName::B3, OrbitFamily::Ss).unwrap().terms.clone();
        terms[9] = parse_term("+(-bx-ay-(2a+2b+c)z)").unwrap();
        let bad = audit_terms(AlgebraName::B3, OrbitFamily::Ss, &terms).unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].index, 9);
    }

    #[test]
    fn unsupported_families() {
        let s = OrbitFunctionSpec::new(AlgebraName::B3, OrbitFamily::C, Weight::new(1, 0, 0)).unwrap();
        assert!(eval_explicit(&s, &[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn purity_and_agreement() {
        let x = [0.137, 0.291, -0.083];
        let cases = [
            (AlgebraName::B3, OrbitFamily::Ss, [1, 2, 1], Kind::Sine),
            (AlgebraName::B3, OrbitFamily::Sl, [2, 1, 0], Kind::Cosine),
            (AlgebraName::C3, OrbitFamily::Ss, [1, 1, 2], Kind::Cosine),
            (AlgebraName::C3, OrbitFamily::Sl, [0, 1, 1], Kind::Sine),
        ];
        for (name, fam, w, kind) in cases {
            let spec = OrbitFunctionSpec::new(name, fam, Weight(w)).unwrap();
            let g = eval_generic(&spec, &x);
            let e = eval_explicit(&spec, &x).unwrap();
            assert!((g - e).norm() < 1e-10 * g.norm().max(1.0));
            match kind {
                Kind::Sine => assert!(g.re.abs() < 1e-12),
                Kind::Cosine => assert!(g.im.abs() < 1e-12),
            }
        }
    }

    #[test]
    fn b3_short_at_origin() {
        let s = OrbitFunctionSpec::new(AlgebraName::B3, OrbitFamily::Ss, Weight::new(3, 1, 2)).unwrap();
        assert!(eval_explicit(&s, &[0.0; 3]).unwrap().norm() < 1e-14);
    }
}
