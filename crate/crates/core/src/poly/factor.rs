//! Factorization into irreducible factors over Q.
//!
//! Strategy, cheapest first:
//! 1. split off monomial and rational content;
//! 2. square-free decomposition (multivariate Yun);
//! 3. square-free parts with a single variable go to the exact univariate
//!    factorizer;
//! 4. parts that are linear in some variable split as content times an
//!    irreducible primitive part (a primitive polynomial of degree one in a
//!    variable is irreducible by Gauss's lemma) — this covers the multilinear
//!    polynomials that dominate reduction runs;
//! 5. anything left (degree >= 2 in every present variable) is mapped to one
//!    variable by Kronecker substitution, factored exactly over Z, and
//!    recombined by exhaustive sub-multiset trial division.
//!
//! The worst case is exponential; a configurable budget turns oversized
//! inputs into a resource-limit error instead of a wrong answer.

use super::gcd::{exact_div, split_content, squarefree_decomposition};
use super::zpoly::{self, ZPoly};
use super::{PolyError, Polynomial, Ring, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Resource limits for factorization.  `max_total_degree` bounds the total
/// degree of the (content-stripped) input; `max_kronecker_degree` bounds the
/// degree of the univariate Kronecker image used for the dense fallback.
#[derive(Debug, Clone)]
pub struct FactorBudget {
    pub max_total_degree: u32,
    pub max_kronecker_degree: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            max_total_degree: 24,
            max_kronecker_degree: 4096,
        }
    }
}

/// A complete factorization `input = unit * prod factors[i]^mult[i]` with
/// canonical (primitive, positive-leading) pairwise distinct irreducible
/// factors, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand_in(&self, ring: &Ring) -> Polynomial {
        let mut acc = Polynomial::constant(ring, self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

pub(super) fn factor_over_q(
    p: &Polynomial,
    budget: &FactorBudget,
) -> Result<Factorization, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let ring = p.ring().clone();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();

    // Monomial content: minimum exponent of each variable.
    let mut core = p.clone();
    for v in p.vars_present() {
        let emin = p
            .terms_desc()
            .map(|(m, _)| m.exp(v) as u32)
            .min()
            .unwrap_or(0);
        if emin > 0 {
            let mono = Polynomial::monomial(&ring, &[(v, emin)], BigRational::one());
            core = exact_div(&core, &mono).expect("monomial content divides");
            factors.push((Polynomial::variable(&ring, v), emin));
        }
    }
    let (_, core) = core.content_unit();

    if core.total_degree() > budget.max_total_degree {
        return Err(PolyError::ResourceLimit(format!(
            "factorization input has total degree {} > budget {}",
            core.total_degree(),
            budget.max_total_degree
        )));
    }

    if !core.is_constant() {
        for (part, mult) in squarefree_decomposition(&core) {
            for f in irreducible_squarefree(&part, budget)? {
                factors.push((f, mult));
            }
        }
    }

    factors.sort();
    // Merge any coinciding factors defensively (square-free parts are
    // pairwise coprime, so this is normally a no-op).
    let mut merged: Vec<(Polynomial, u32)> = Vec::new();
    for (f, m) in factors {
        match merged.last_mut() {
            Some((g, k)) if *g == f => *k += m,
            _ => merged.push((f, m)),
        }
    }

    // The unit is whatever rational is left after dividing the input by the
    // reassembled product; computing it this way keeps the round-trip
    // invariant exact by construction.
    let mut prod = Polynomial::from_int(&ring, 1);
    for (f, m) in &merged {
        prod = &prod * &f.pow(*m);
    }
    let unit = exact_div(p, &prod)
        .and_then(|q| q.constant_value())
        .expect("factor product divides the input with constant quotient");
    debug_assert!(!unit.is_zero());

    Ok(Factorization {
        unit,
        factors: merged,
    })
}

/// Irreducible factors of a square-free non-constant polynomial, canonical
/// and unordered (the caller sorts).
fn irreducible_squarefree(
    q: &Polynomial,
    budget: &FactorBudget,
) -> Result<Vec<Polynomial>, PolyError> {
    let q = q.normalized();
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let vars = q.vars_present();

    if vars.len() == 1 {
        return Ok(factor_univariate(&q, vars[0]));
    }

    // Linear in some variable: content * primitive part, the latter
    // irreducible outright.
    if let Some(&v) = vars.iter().find(|&&v| q.degree_in(v) == 1) {
        let (cont, pp) = split_content(&q, v);
        let mut out = vec![pp.normalized()];
        if !cont.is_constant() {
            out.extend(irreducible_squarefree(&cont, budget)?);
        }
        return Ok(out);
    }

    // Quadratic in some variable: the quadratic formula over the fraction
    // field of the other variables decides the split, so the dense fallback
    // is never needed for this shape.
    if let Some(&v) = vars.iter().find(|&&v| q.degree_in(v) == 2) {
        let (cont, pp) = split_content(&q, v);
        let mut out = split_quadratic(&pp, v, budget)?;
        if !cont.is_constant() {
            out.extend(irreducible_squarefree(&cont, budget)?);
        }
        return Ok(out);
    }

    kronecker_factor(&q, &vars, budget)
}

/// Factors a polynomial that is primitive and of degree two in `v`.  By
/// Gauss's lemma a nontrivial split must be into two factors of degree one
/// in `v` over the rational function field of the other variables, which
/// exists exactly when the discriminant is a perfect square (polynomial
/// rings are integrally closed, so a fraction-field square root of a
/// polynomial is itself a polynomial).
fn split_quadratic(
    pp: &Polynomial,
    v: Var,
    budget: &FactorBudget,
) -> Result<Vec<Polynomial>, PolyError> {
    let ring = pp.ring().clone();
    let a = pp.coefficient_of(v, 2);
    let b = pp.coefficient_of(v, 1);
    let c = pp.coefficient_of(v, 0);
    let disc = &(&b * &b) - &(&(&a * &c) * &Polynomial::from_int(&ring, 4));
    // Completing the square: 4a * pp = (2av + b)^2 - disc.
    let two_av_b = &(&(&a * &Polynomial::variable(&ring, v)) * &Polynomial::from_int(&ring, 2)) + &b;
    let halves = if disc.is_zero() {
        vec![two_av_b]
    } else if let Some(s) = poly_sqrt(&disc) {
        vec![&two_av_b - &s, &two_av_b + &s]
    } else {
        return Ok(vec![pp.normalized()]);
    };
    // Every irreducible factor of pp divides 4a * pp, hence one of the
    // halves; factoring those (they have strictly smaller total degree) and
    // trial-dividing recovers the multiset exactly.
    let mut candidates: Vec<Polynomial> = Vec::new();
    for h in &halves {
        for (f, _) in factor_over_q(h, budget)?.factors {
            if f.total_degree() > 0 && !candidates.contains(&f) {
                candidates.push(f);
            }
        }
    }
    let mut out = Vec::new();
    let mut rem = pp.normalized();
    for f in &candidates {
        while !rem.is_constant() {
            match exact_div(&rem, f) {
                Some(quot) => {
                    out.push(f.clone());
                    rem = quot;
                }
                None => break,
            }
        }
    }
    assert!(
        rem.is_constant(),
        "factors of the completed square exhaust the quadratic"
    );
    Ok(out)
}

/// The exact square root of a polynomial, if one exists.  Runs the schoolbook
/// digit-by-digit method on the graded-lex term order: the leading term of
/// the root is forced, and each further term is the leading term of the
/// remainder divided by twice the root's leading term.
fn poly_sqrt(d: &Polynomial) -> Option<Polynomial> {
    if d.is_zero() {
        return Some(d.clone());
    }
    let ring = d.ring().clone();
    let (lm, lc) = d.leading_term().expect("nonzero polynomial");
    let root_coeff = rational_sqrt(lc)?;
    let mut root_powers = Vec::new();
    for u in ring.vars() {
        let e = lm.exp(u);
        if e % 2 != 0 {
            return None;
        }
        if e > 0 {
            root_powers.push((u, e as u32 / 2));
        }
    }
    let s0 = Polynomial::monomial(&ring, &root_powers, root_coeff);
    let mut s = s0.clone();
    let mut r = d - &(&s0 * &s0);
    while !r.is_zero() {
        let (rm, rc) = r.leading_term().expect("nonzero remainder");
        // t = leading term of r divided by 2*s0; a failed monomial division
        // means d has no square root.
        let mut t_powers = Vec::new();
        for u in ring.vars() {
            let (er, e0) = (rm.exp(u), s0.leading_term().unwrap().0.exp(u));
            if er < e0 {
                return None;
            }
            if er > e0 {
                t_powers.push((u, (er - e0) as u32));
            }
        }
        let tc = rc / (s0.leading_term().unwrap().1 * BigRational::from_integer(2.into()));
        let t = Polynomial::monomial(&ring, &t_powers, tc);
        // r -= 2st + t^2 keeps r = d - s^2; the leading monomial strictly
        // decreases, so this terminates.
        r = &r - &(&(&(&s + &s) * &t) + &(&t * &t));
        s = &s + &t;
    }
    Some(s)
}

/// The exact square root of a rational, if one exists.
fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    use num_traits::Signed;
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact univariate factorization via the integer factorizer.
fn factor_univariate(q: &Polynomial, v: Var) -> Vec<Polynomial> {
    let z = to_zpoly(q, v);
    zpoly::factor_squarefree(&z.primitive())
        .into_iter()
        .map(|f| from_zpoly(q.ring(), v, &f))
        .collect()
}

fn to_zpoly(q: &Polynomial, v: Var) -> ZPoly {
    let d = q.degree_in(v);
    let coeffs = (0..=d)
        .map(|k| {
            let c = q
                .coefficient_of(v, k)
                .constant_value()
                .expect("univariate polynomial");
            assert!(c.denom().is_one(), "normalized input has integer coefficients");
            c.numer().clone()
        })
        .collect();
    ZPoly::from_coeffs(coeffs)
}

fn from_zpoly(ring: &Ring, v: Var, f: &ZPoly) -> Polynomial {
    let mut acc = Polynomial::zero(ring);
    for (k, c) in f.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc
            + &Polynomial::monomial(
                ring,
                &[(v, k as u32)],
                BigRational::from_integer(c.clone()),
            );
    }
    acc
}

/// Dense fallback: Kronecker substitution x_i -> t^(w_i) with mixed-radix
/// weights, exact factorization over Z, and sub-multiset recombination.
fn kronecker_factor(
    q: &Polynomial,
    vars: &[Var],
    budget: &FactorBudget,
) -> Result<Vec<Polynomial>, PolyError> {
    let degs: Vec<u64> = vars.iter().map(|&v| q.degree_in(v) as u64).collect();
    let mut radix_span: u64 = 1;
    for &d in &degs {
        radix_span = radix_span
            .checked_mul(d + 1)
            .filter(|&x| x <= budget.max_kronecker_degree + 1)
            .ok_or_else(|| {
                PolyError::ResourceLimit(format!(
                    "Kronecker image degree exceeds budget {}",
                    budget.max_kronecker_degree
                ))
            })?;
    }
    let mut weights = vec![1u64; vars.len()];
    for i in 1..vars.len() {
        weights[i] = weights[i - 1] * (degs[i - 1] + 1);
    }

    // Dense univariate image over Z: the substitution x_i -> t^(w_i) maps
    // distinct in-radix exponent vectors to distinct powers of t, so no
    // coefficient collisions occur.
    let mut coeffs = vec![BigInt::zero(); radix_span as usize];
    for (m, c) in q.terms_desc() {
        let e: u64 = vars
            .iter()
            .zip(&weights)
            .map(|(&v, &w)| m.exp(v) as u64 * w)
            .sum();
        debug_assert!(c.denom().is_one(), "normalized input has integer coefficients");
        coeffs[e as usize] = c.numer().clone();
    }
    let image = ZPoly::from_coeffs(coeffs);

    // Image factors with multiplicities (the image of a square-free
    // polynomial need not be square-free).
    let mut items: Vec<(ZPoly, u32)> = Vec::new();
    for (part, mult) in zpoly::squarefree_decomposition(&image) {
        for f in zpoly::factor_squarefree(&part) {
            items.push((f, mult));
        }
    }

    let mut out = Vec::new();
    let mut rem = q.normalized();
    'outer: loop {
        if rem.is_constant() {
            return Ok(out);
        }
        let total: u32 = items.iter().map(|(_, m)| m).sum();
        if total <= 1 {
            out.push(rem.normalized());
            return Ok(out);
        }
        // If any proper factor of `rem` exists, its image is a sub-multiset
        // of size <= total/2 (up to complementing), so this search is
        // complete.
        for size in 1..=(total / 2) {
            let caps: Vec<u32> = items.iter().map(|(_, m)| *m).collect();
            for counts in count_vectors(&caps, size) {
                let mut prod = ZPoly(vec![BigInt::one()]);
                for (i, &c) in counts.iter().enumerate() {
                    for _ in 0..c {
                        prod = prod.mul(&items[i].0);
                    }
                }
                let cand =
                    decode_kronecker(q.ring(), vars, &weights, &degs, &prod).normalized();
                if cand.is_constant() {
                    continue;
                }
                if let Some(quot) = exact_div(&rem, &cand) {
                    out.push(cand);
                    rem = quot.normalized();
                    for (i, &c) in counts.iter().enumerate() {
                        items[i].1 -= c;
                    }
                    items.retain(|(_, m)| *m > 0);
                    continue 'outer;
                }
            }
        }
        out.push(rem.normalized());
        return Ok(out);
    }
}

/// All vectors `c` with `0 <= c[i] <= caps[i]` and `sum c[i] == size`.
fn count_vectors(caps: &[u32], size: u32) -> Vec<Vec<u32>> {
    fn rec(caps: &[u32], size: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == caps.len() {
            if size == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=caps[i].min(size) {
            cur.push(c);
            rec(caps, size - c, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(caps, size, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarKind;

    fn ring_abc() -> Ring {
        Ring::new(
            ["a1", "a2", "a3"]
                .iter()
                .map(|n| (n.to_string(), VarKind::Schwinger))
                .collect(),
        )
        .unwrap()
    }

    fn p(ring: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    fn check_round_trip(input: &Polynomial, fac: &Factorization) {
        assert_eq!(&fac.expand_in(input.ring()), input);
        for (f, _) in &fac.factors {
            assert_eq!(&f.normalized(), f, "factors are canonical");
        }
        for w in fac.factors.windows(2) {
            assert!(w[0].0 < w[1].0, "factors strictly sorted");
        }
    }

    #[test]
    fn constant_input_has_empty_factor_list() {
        let ring = ring_abc();
        let input = p(&ring, "-7/3");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        assert!(fac.factors.is_empty());
        check_round_trip(&input, &fac);
    }

    #[test]
    fn zero_input_is_an_error() {
        let ring = ring_abc();
        let zero = Polynomial::zero(&ring);
        assert!(matches!(
            zero.factor_over_q(&FactorBudget::default()),
            Err(PolyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn monomial_content_is_split_off() {
        let ring = ring_abc();
        let input = p(&ring, "6*a1^2*a2 + 6*a1*a2^2");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        let names: Vec<String> = fac.factors.iter().map(|(f, m)| format!("({f})^{m}")).collect();
        assert_eq!(names, vec!["(1*a2)^1", "(1*a1)^1", "(1*a1 + 1*a2)^1"]);
        assert_eq!(fac.unit, BigRational::from_integer(6.into()));
    }

    #[test]
    fn difference_of_squares_splits() {
        let ring = ring_abc();
        let input = p(&ring, "1*a1^2 + -1*a2^2");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn multiplicities_are_recovered() {
        let ring = ring_abc();
        let f = p(&ring, "1*a1 + 1*a2");
        let g = p(&ring, "1*a1 + -1*a2");
        let input = &(&f.pow(2) * &g.pow(3)) * &p(&ring, "-5/2");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        let mut mults: Vec<u32> = fac.factors.iter().map(|(_, m)| *m).collect();
        mults.sort();
        assert_eq!(mults, vec![2, 3]);
    }

    #[test]
    fn multilinear_spanning_tree_sum_is_irreducible() {
        let ring = ring_abc();
        let input = p(&ring, "1*a1*a2 + 1*a1*a3 + 1*a2*a3");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].1, 1);
    }

    #[test]
    fn univariate_quartic_splits_into_quadratics() {
        let ring = ring_abc();
        let f = p(&ring, "1*a1^2 + 1*a1 + 1");
        let g = p(&ring, "2*a1^2 + 3");
        let input = &f * &g;
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 2);
    }

    #[test]
    fn kronecker_path_recovers_bivariate_quadratics() {
        let ring = ring_abc();
        // Both factors have degree 2 in each variable, so no linear split
        // applies and the dense fallback must run.
        let f = p(&ring, "1*a1^2 + 1*a2^2 + 1");
        let g = p(&ring, "1*a1^2 + 2*a2^2 + 3");
        let input = &f * &g;
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.iter().any(|(h, _)| *h == f));
        assert!(fac.factors.iter().any(|(h, _)| *h == g));
    }

    #[test]
    fn irreducible_biquadratic_is_recognized() {
        let ring = ring_abc();
        let input = p(&ring, "1*a1^2*a2^2 + 1*a1^2 + 1*a2^2 + 2");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 1, "got {:?}", fac.factors);
    }

    #[test]
    fn mixed_kind_variables_factor_together() {
        let ring = Ring::new(vec![
            ("a1".into(), VarKind::Schwinger),
            ("s_1_2".into(), VarKind::Kinematic),
        ])
        .unwrap();
        let input = p(&ring, "1*a1^2*s_1_2 + 1*a1*s_1_2^2");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.factors.len(), 3);
    }

    #[test]
    fn total_degree_budget_is_enforced() {
        let ring = ring_abc();
        let input = p(&ring, "1*a1 + 1").pow(25);
        assert!(matches!(
            input.factor_over_q(&FactorBudget::default()),
            Err(PolyError::ResourceLimit(_))
        ));
    }

    #[test]
    fn pure_power_of_variable_skips_budget() {
        let ring = ring_abc();
        // A bare monomial of high degree is all monomial content, which is
        // stripped before the budget applies.
        let input = p(&ring, "4*a1^30");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].1, 30);
    }

    #[test]
    fn rational_unit_is_exact() {
        let ring = ring_abc();
        let input = p(&ring, "-3/4*a1*a2 + -3/4*a1 + -3/4*a2 + -3/4");
        let fac = input.factor_over_q(&FactorBudget::default()).unwrap();
        check_round_trip(&input, &fac);
        assert_eq!(fac.unit, "-3/4".parse::<BigRational>().unwrap());
        assert_eq!(fac.factors.len(), 2);
    }
}

fn decode_kronecker(
    ring: &Ring,
    vars: &[Var],
    weights: &[u64],
    degs: &[u64],
    f: &ZPoly,
) -> Polynomial {
    let mut acc = Polynomial::zero(ring);
    for (e, c) in f.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut powers = Vec::with_capacity(vars.len());
        let mut rest = e as u64;
        for i in (0..vars.len()).rev() {
            let ei = rest / weights[i];
            rest %= weights[i];
            debug_assert!(ei <= degs[i], "in-radix exponents decode within degree bounds");
            powers.push((vars[i], ei as u32));
        }
        acc = &acc
            + &Polynomial::monomial(ring, &powers, BigRational::from_integer(c.clone()));
    }
    acc
}

