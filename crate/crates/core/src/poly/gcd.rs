//! Exact division, multivariate GCD via a primitive pseudo-remainder
//! sequence, and square-free decomposition.
//!
//! GCDs over Q[x1..xn] are only defined up to a nonzero rational unit; this
//! module always returns the canonical representative (coprime integer
//! coefficients, positive leading coefficient under graded lex).

use super::{Polynomial, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact quotient `f / g`, or `None` when `g` does not divide `f`.
/// Division is performed over Q, so rational contents never obstruct it.
pub fn exact_div(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let ring = f.ring().clone();
    let mut r = f.clone();
    let mut q = Polynomial::zero(&ring);
    let (gm, gc) = {
        let (m, c) = g.leading_term().unwrap();
        (m.clone(), c.clone())
    };
    while !r.is_zero() {
        let (rm, rc) = {
            let (m, c) = r.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        // Monomial quotient; fails if any exponent would go negative.
        let mut qm = rm.clone();
        for (a, b) in qm.0.iter_mut().zip(gm.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        let qc = &rc / &gc;
        let term = Polynomial {
            ring: ring.clone(),
            terms: [(qm, qc)].into_iter().collect(),
        };
        r = &r - &(g * &term);
        q = &q + &term;
        // The leading monomial of r strictly decreases, so this terminates.
    }
    Some(q)
}

/// Canonical GCD of two polynomials of one ring.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let mut f = f.normalized();
    let mut g = g.normalized();
    if f.is_constant() || g.is_constant() {
        return Polynomial::from_int(f.ring(), 1);
    }
    // The monomial part of the gcd is read off minimum exponents; stripping
    // it here keeps pure powers out of the remainder sequence and lets the
    // coprimality certificate below cover the stripped parts.
    let mono_powers: Vec<(Var, u32)> = f
        .ring()
        .vars()
        .map(|v| (v, min_exp(&f, v).min(min_exp(&g, v))))
        .filter(|&(_, k)| k > 0)
        .collect();
    if !mono_powers.is_empty() {
        let m = Polynomial::monomial(f.ring(), &mono_powers, BigRational::one());
        f = exact_div(&f, &m).expect("monomial content divides");
        g = exact_div(&g, &m).expect("monomial content divides");
        return (&m * &gcd(&f, &g)).normalized();
    }
    // A common divisor only involves variables present in both inputs.
    let shared: Vec<Var> = f
        .vars_present()
        .into_iter()
        .filter(|v| g.degree_in(*v) > 0)
        .collect();
    if shared.is_empty() {
        return Polynomial::from_int(f.ring(), 1);
    }
    // Typical inputs here are coprime; prove that cheaply when possible
    // instead of running the remainder sequence, whose intermediate
    // coefficient swell dominates everything else on wide rings.
    if certified_coprime(&f, &g, &shared) {
        return Polynomial::from_int(f.ring(), 1);
    }
    // Main variable: cheapest by combined degree.
    let v = *shared
        .iter()
        .min_by_key(|&&v| f.degree_in(v) + g.degree_in(v))
        .unwrap();

    let (cont_f, pp_f) = split_content(&f, v);
    let (cont_g, pp_g) = split_content(&g, v);

    let mut a = to_coeffs(&pp_f, v);
    let mut b = to_coeffs(&pp_g, v);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    // Primitive PRS: pseudo-remainders re-primitivized each round.
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_coeffs(r);
    }
    let pp_gcd = from_coeffs(f.ring(), v, &a).normalized();
    (&gcd(&cont_f, &cont_g) * &pp_gcd).normalized()
}

/// GCD of a sequence; the GCD of an empty sequence is 0.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Option<Polynomial> {
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.normalized(),
            Some(a) => {
                if a.is_constant() && !a.is_zero() {
                    return Some(a); // gcd already 1
                }
                gcd(&a, p)
            }
        });
    }
    acc
}

/// Content/primitive-part split with respect to one variable:
/// `f = cont * pp` with `cont` free of `v` and `pp` primitive in `v`.
pub fn split_content(f: &Polynomial, v: Var) -> (Polynomial, Polynomial) {
    let coeffs = to_coeffs(f, v);
    let cont = gcd_many(coeffs.iter().filter(|c| !c.is_zero()))
        .unwrap_or_else(|| Polynomial::zero(f.ring()));
    if cont.is_zero() {
        return (cont, f.clone());
    }
    let pp = exact_div(f, &cont).expect("content divides");
    (cont, pp)
}

/// Square-free decomposition: pairwise-coprime square-free canonical factors
/// with multiplicities whose weighted product equals the normalized input.
pub fn squarefree_decomposition(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let p = p.normalized();
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    squarefree_into(&p, &mut out);
    out.sort();
    out
}

fn squarefree_into(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) {
    if p.is_constant() {
        return;
    }
    let v = p.vars_present()[0];
    let (cont, pp) = split_content(p, v);
    if !cont.is_constant() {
        squarefree_into(&cont.normalized(), out);
    }
    // Yun's algorithm on the v-primitive part (characteristic zero; every
    // factor of pp involves v, so d/dv sees all multiplicities).
    let pp = pp.normalized();
    let dp = pp.partial_derivative(v);
    let g = gcd(&pp, &dp);
    let mut c = exact_div(&pp, &g).expect("gcd divides");
    let mut d = &exact_div(&dp, &g).expect("gcd divides") - &c.partial_derivative(v);
    let mut i = 1u32;
    while !c.is_constant() {
        let h = gcd(&c, &d);
        if !h.is_constant() {
            out.push((h.clone(), i));
        }
        c = exact_div(&c, &h).expect("gcd divides");
        d = &exact_div(&d, &h).expect("gcd divides") - &c.partial_derivative(v);
        i += 1;
    }
}

fn min_exp(f: &Polynomial, v: Var) -> u32 {
    f.terms_desc().map(|(m, _)| m.exp(v) as u32).min().unwrap_or(0)
}

/// Tries to certify `gcd(f, g) == 1` from univariate images.  Substituting
/// integers for every variable but `v` maps a common divisor to a common
/// divisor of the images, so whenever both leading coefficients in `v`
/// survive the substitution, `deg_v gcd(f, g)` is bounded by the degree of
/// the image gcd.  A zero bound for every shared variable proves the gcd
/// constant.  `false` means "no conclusion", never "not coprime".
fn certified_coprime(f: &Polynomial, g: &Polynomial, shared: &[Var]) -> bool {
    'vars: for &v in shared {
        let df = f.degree_in(v);
        let dg = g.degree_in(v);
        for attempt in 0..4u32 {
            let Some(a) = univariate_image(f, v, df, attempt) else {
                continue;
            };
            let Some(b) = univariate_image(g, v, dg, attempt) else {
                continue;
            };
            if univariate_gcd_degree(a, b) == 0 {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

/// Distinct small primes assigned to the substituted variables; different
/// attempts permute the assignment.  Collisions past the table length only
/// weaken the certificate, never its soundness.
const EVAL_PRIMES: [i64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
    89, 97, 101, 103, 107, 109, 113, 127, 131,
];

/// Coefficient vector of the univariate image of `f` in `v` under the
/// substitution of attempt-specific primes for all other variables, or
/// `None` when the leading coefficient in `v` vanished.
fn univariate_image(f: &Polynomial, v: Var, deg: u32, attempt: u32) -> Option<Vec<BigRational>> {
    let mut coeffs = vec![BigRational::zero(); deg as usize + 1];
    for (m, c) in f.terms_desc() {
        let mut w = BigInt::one();
        for u in f.ring().vars() {
            if u == v {
                continue;
            }
            let e = m.exp(u);
            if e == 0 {
                continue;
            }
            let slot = (u.0 as usize * 7 + attempt as usize * 13 + 1) % EVAL_PRIMES.len();
            let val = BigInt::from(EVAL_PRIMES[slot]);
            for _ in 0..e {
                w *= &val;
            }
        }
        coeffs[m.exp(v) as usize] += c * BigRational::from_integer(w);
    }
    if coeffs[deg as usize].is_zero() {
        None
    } else {
        Some(coeffs)
    }
}

/// Degree of the gcd of two univariate rational polynomials given as
/// coefficient vectors (index = power); both inputs are nonzero.
fn univariate_gcd_degree(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> usize {
    fn trim_zeros(v: &mut Vec<BigRational>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    trim_zeros(&mut a);
    trim_zeros(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let q = &a[a.len() - 1] / &b[b.len() - 1];
            let shift = a.len() - b.len();
            for (k, bc) in b.iter().enumerate() {
                let t = bc * &q;
                a[shift + k] -= t;
            }
            trim_zeros(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    debug_assert!(!a.is_empty(), "gcd of nonzero polynomials is nonzero");
    a.len().saturating_sub(1)
}

/// Coefficient vector of `f` viewed as univariate in `v` (index = power).
fn to_coeffs(f: &Polynomial, v: Var) -> Vec<Polynomial> {
    let d = f.degree_in(v);
    (0..=d).map(|k| f.coefficient_of(v, k)).collect()
}

fn from_coeffs(ring: &super::Ring, v: Var, coeffs: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero(ring);
    let xv = Polynomial::variable(ring, v);
    let mut pow = Polynomial::from_int(ring, 1);
    for c in coeffs {
        acc = &acc + &(c * &pow);
        pow = &pow * &xv;
    }
    acc
}

fn trim(mut v: Vec<Polynomial>) -> Vec<Polynomial> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of coefficient vectors in the main variable; the result
/// is only meaningful up to a unit, which the primitive PRS removes anyway.
fn pseudo_rem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    loop {
        r = trim(r);
        if r.len() <= db {
            return r;
        }
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bc) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = &r[idx] - &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
    }
}

fn primitive_coeffs(coeffs: Vec<Polynomial>) -> Vec<Polynomial> {
    let coeffs = trim(coeffs);
    if coeffs.is_empty() {
        return coeffs;
    }
    let cont = gcd_many(coeffs.iter().filter(|c| !c.is_zero())).unwrap();
    coeffs
        .into_iter()
        .map(|c| {
            if c.is_zero() {
                c
            } else {
                exact_div(&c, &cont).expect("content divides")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Ring, VarKind};

    fn ring() -> Ring {
        Ring::new(
            ["x", "y", "z"]
                .iter()
                .map(|n| (n.to_string(), VarKind::Schwinger))
                .collect(),
        )
        .unwrap()
    }

    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn exact_div_round_trip() {
        let r = ring();
        let f = p(&r, "1*x + 1*y");
        let g = p(&r, "2*x + -1*z + 3");
        let prod = &f * &g;
        assert_eq!(exact_div(&prod, &f).unwrap(), g);
        assert_eq!(exact_div(&prod, &g).unwrap(), f);
        assert!(exact_div(&prod, &p(&r, "1*x + 2*y")).is_none());
    }

    #[test]
    fn gcd_of_products_with_common_factor() {
        let r = ring();
        let c = p(&r, "1*x + 1*y + 1*z");
        let f = &c * &p(&r, "1*x + -1*y");
        let g = &c * &p(&r, "3*y + 2*z");
        assert_eq!(gcd(&f, &g), c);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let r = ring();
        let f = p(&r, "1*x + 1*y");
        let g = p(&r, "1*x + -1*y");
        assert_eq!(gcd(&f, &g), p(&r, "1"));
    }

    #[test]
    fn gcd_ignores_rational_content() {
        let r = ring();
        let c = p(&r, "1*x*y + 1");
        let f = &p(&r, "2/3") * &c;
        let g = &p(&r, "-5") * &(&c * &p(&r, "1*z + 1"));
        assert_eq!(gcd(&f, &g), c);
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let r = ring();
        let a = p(&r, "1*x + 1*y");
        let b = p(&r, "1*x + -1*z");
        let q = &(&a * &a) * &(&(&b * &b) * &b); // a^2 * b^3
        let dec = squarefree_decomposition(&q);
        let mut expected = vec![(a.clone(), 2), (b.clone(), 3)];
        expected.sort();
        assert_eq!(dec, expected);
        let mut rebuilt = Polynomial::from_int(&r, 1);
        for (f, m) in &dec {
            rebuilt = &rebuilt * &f.pow(*m);
        }
        assert_eq!(rebuilt, q.normalized());
    }

    #[test]
    fn squarefree_decomposition_handles_content_factors() {
        let r = ring();
        // (y^2) * (x + y): the repeated factor lives in the x-content.
        let q = &(&p(&r, "1*y") * &p(&r, "1*y")) * &p(&r, "1*x + 1*y");
        let dec = squarefree_decomposition(&q);
        assert!(dec.contains(&(p(&r, "1*y"), 2)));
        assert!(dec.contains(&(p(&r, "1*x + 1*y"), 1)));
    }
}
