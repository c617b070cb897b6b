//! Exact multivariate polynomials over the rationals.
//!
//! Polynomials are kept in a canonical form at all times: a sorted term map
//! from exponent vectors to nonzero rational coefficients, ordered by graded
//! lexicographic order on the monomials.  Equality of the underlying maps is
//! therefore equality of polynomials, and the serialized text form is unique.
//!
//! A [`Ring`] fixes the variable set (names, kinds and their order) once; all
//! polynomials carry a handle to their ring and operations on polynomials
//! from different rings panic.  Variables are either Schwinger parameters
//! (integration variables attached to graph edges) or kinematic symbols
//! (momentum invariants and squared masses), which lets callers restrict
//! elimination orders to integration variables while factoring over the full
//! coefficient field.

mod factor;
mod gcd;
mod zpoly;

pub use factor::{FactorBudget, Factorization};
pub use gcd::gcd as poly_gcd;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// What a variable stands for; reduction orders may only contain
/// [`VarKind::Schwinger`] variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Integration variable attached to a graph edge.
    Schwinger,
    /// Kinematic invariant or squared mass; never eliminated.
    Kinematic,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    vars: Vec<(String, VarKind)>,
}

/// A fixed, ordered variable context shared by a family of polynomials.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

/// Handle to a variable of some [`Ring`]; the index is the position in the
/// ring's declaration order, which is also the tie-break order of the
/// monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Ring {
    /// Creates a ring from `(name, kind)` pairs.  Names must be nonempty,
    /// distinct, start with a letter and contain only `[A-Za-z0-9_]`.
    pub fn new(vars: Vec<(String, VarKind)>) -> Result<Ring, PolyError> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &vars {
            let mut chars = name.chars();
            let ok_head = chars.next().map(|c| c.is_ascii_alphabetic()).unwrap_or(false);
            let ok_tail = name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok_head || !ok_tail {
                return Err(PolyError::BadVariableName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(PolyError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Ring(Arc::new(RingData { vars })))
    }

    pub fn num_vars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.0.vars[v.0 as usize].0
    }

    pub fn kind(&self, v: Var) -> VarKind {
        self.0.vars[v.0 as usize].1
    }

    /// Looks a variable up by name.
    pub fn var(&self, name: &str) -> Option<Var> {
        self.0
            .vars
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| Var(i as u32))
    }

    /// All variables, in declaration order.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.num_vars()).map(|i| Var(i as u32))
    }

    /// All variables of one kind, in declaration order.
    pub fn vars_of_kind(&self, kind: VarKind) -> Vec<Var> {
        self.vars().filter(|&v| self.kind(v) == kind).collect()
    }
}

/// Exponent vector; always exactly `ring.num_vars()` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(SmallVec<[u8; 16]>);

impl Mono {
    fn one(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0u8, n))
    }

    fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v.0 as usize]
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(other.0.iter()) {
            *a = a
                .checked_add(*b)
                .expect("monomial exponent overflow (u8); raise the factor budget instead");
        }
        Mono(out)
    }

    fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    /// Graded lexicographic: total degree first, then the leftmost differing
    /// exponent decides (earlier variables are "bigger").
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A multivariate polynomial with rational coefficients in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Mono, BigRational>,
}

/// Errors from polynomial-layer operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not linear in {0}")]
    NotLinear(String),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: BigRational) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Mono::one(ring.num_vars()), c);
        }
        p
    }

    pub fn from_int(ring: &Ring, c: i64) -> Polynomial {
        Polynomial::constant(ring, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn variable(ring: &Ring, v: Var) -> Polynomial {
        Polynomial::monomial(ring, &[(v, 1)], BigRational::one())
    }

    /// `c * prod v_i^{e_i}`.
    pub fn monomial(ring: &Ring, powers: &[(Var, u32)], c: BigRational) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if c.is_zero() {
            return p;
        }
        let mut m = Mono::one(ring.num_vars());
        for &(v, e) in powers {
            let e8 = u8::try_from(e).expect("exponent too large for monomial representation");
            m.0[v.0 as usize] += e8;
        }
        p.terms.insert(m, c);
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value if this polynomial has degree zero.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Degree in one variable; zero for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v) as u32).max().unwrap_or(0)
    }

    /// Variables with positive degree, in declaration order.
    pub fn vars_present(&self) -> Vec<Var> {
        let n = self.ring.num_vars();
        let mut present = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    present[i] = true;
                }
            }
        }
        (0..n).filter(|&i| present[i]).map(|i| Var(i as u32)).collect()
    }

    /// True iff the degree in `v` is at most one.
    pub fn linear_in(&self, v: Var) -> bool {
        self.degree_in(v) <= 1
    }

    fn insert_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(
            self.ring == other.ring,
            "polynomial operands come from different rings"
        );
    }

    /// Partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        let idx = v.0 as usize;
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] = e - 1;
            out.insert_term(m2, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Substitutes `v = 0`.
    pub fn eval_zero(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        let idx = v.0 as usize;
        for (m, c) in &self.terms {
            if m.0[idx] == 0 {
                out.insert_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes a rational value for `v`.
    pub fn eval_at(&self, v: Var, value: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        let idx = v.0 as usize;
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value;
            }
            out.insert_term(m2, coeff);
        }
        out
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        let idx = v.0 as usize;
        for (m, c) in &self.terms {
            if m.0[idx] as u32 == k {
                let mut m2 = m.clone();
                m2.0[idx] = 0;
                out.insert_term(m2, c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`: the coefficient of the
    /// highest power of `v`.  For degree zero this is the polynomial itself.
    pub fn leading_coefficient(&self, v: Var) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let d = self.degree_in(v);
        Ok(self.coefficient_of(v, d))
    }

    /// Leading monomial and coefficient under the ring's graded-lex order.
    pub fn leading_term(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Iterates terms in descending monomial order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::from_int(&self.ring, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Splits off the rational content: returns `(unit, primitive)` with
    /// `self = unit * primitive`, where `primitive` has coprime integer
    /// coefficients and a positive leading coefficient under graded lex.
    /// The unit of the zero polynomial is 1.
    pub fn content_unit(&self) -> (BigRational, Polynomial) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut unit = BigRational::new(num_gcd, den_lcm);
        if self.leading_term().unwrap().1.is_negative() {
            unit = -unit;
        }
        let inv = unit.recip();
        let mut prim = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            prim.terms.insert(m.clone(), c * &inv);
        }
        (unit, prim)
    }

    /// Primitive, positive-leading-coefficient representative of the class
    /// of `self` modulo nonzero rational prefactors.
    pub fn normalized(&self) -> Polynomial {
        self.content_unit().1
    }

    /// `(df/dv) * g(v=0) - (dg/dv) * f(v=0)`, defined when both inputs are
    /// linear in `v`.  This is (up to sign) the resultant of two polynomials
    /// linear in `v` and is the source of the cross terms of a reduction
    /// step.
    pub fn pair_resultant(f: &Polynomial, g: &Polynomial, v: Var) -> Result<Polynomial, PolyError> {
        f.assert_same_ring(g);
        if !f.linear_in(v) {
            return Err(PolyError::NotLinear(f.ring.name(v).to_string()));
        }
        if !g.linear_in(v) {
            return Err(PolyError::NotLinear(g.ring.name(v).to_string()));
        }
        Ok(&(&f.partial_derivative(v) * &g.eval_zero(v)) - &(&g.partial_derivative(v) * &f.eval_zero(v)))
    }

    /// Checks the interchange identity between leading coefficients and pair
    /// resultants: with `f, g` linear in `v1` and `vl != v1`, the resultant
    /// of the `vl`-leading coefficients either vanishes or equals the
    /// `vl`-leading coefficient of the resultant of `f` and `g`.
    pub fn lc_resultant_identity_check(
        f: &Polynomial,
        g: &Polynomial,
        v1: Var,
        vl: Var,
    ) -> Result<bool, PolyError> {
        assert!(v1 != vl, "the two variables must be distinct");
        let lf = f.leading_coefficient(vl)?;
        let lg = g.leading_coefficient(vl)?;
        let lhs = Polynomial::pair_resultant(&lf, &lg, v1)?;
        if lhs.is_zero() {
            return Ok(true);
        }
        let r = Polynomial::pair_resultant(f, g, v1)?;
        if r.is_zero() {
            return Ok(false);
        }
        Ok(lhs == r.leading_coefficient(vl)?)
    }

    /// Factors into irreducible factors over Q.  See [`Factorization`].
    pub fn factor_over_q(&self, budget: &FactorBudget) -> Result<Factorization, PolyError> {
        factor::factor_over_q(self, budget)
    }

    /// Canonical text form: terms in descending graded-lex order, each as
    /// `coef*var^exp*...`, joined by ` + `; the zero polynomial is `0`.
    pub fn to_text(&self) -> String {
        format!("{}", self)
    }

    /// Parses the canonical text form produced by [`Polynomial::to_text`].
    pub fn parse(ring: &Ring, input: &str) -> Result<Polynomial, PolyError> {
        parse_poly(ring, input)
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polynomial {
    /// Total order on polynomials of one ring: by descending term sequence.
    /// Used to keep polynomial sets canonically sorted.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let ord = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.denom().is_one() {
                write!(f, "{}", c.numer())?;
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())?;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "*{}", self.ring.name(Var(i as u32)))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

fn parse_poly(ring: &Ring, input: &str) -> Result<Polynomial, PolyError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut out = Polynomial::zero(ring);
    let mut pos = 0usize;
    for piece in s.split(" + ") {
        let term = piece.trim();
        let base = pos;
        pos += piece.len() + 3;
        let mut factors = term.split('*');
        let coef_str = factors.next().unwrap_or("");
        let coef = parse_rational(coef_str).ok_or_else(|| PolyError::Parse {
            pos: base,
            msg: format!("expected rational coefficient, found `{coef_str}`"),
        })?;
        let mut powers: Vec<(Var, u32)> = Vec::new();
        for fpart in factors {
            let (name, exp) = match fpart.split_once('^') {
                Some((n, e)) => {
                    let exp: u32 = e.parse().map_err(|_| PolyError::Parse {
                        pos: base,
                        msg: format!("bad exponent `{e}`"),
                    })?;
                    (n, exp)
                }
                None => (fpart, 1),
            };
            let v = ring.var(name).ok_or_else(|| PolyError::Parse {
                pos: base,
                msg: format!("unknown variable `{name}`"),
            })?;
            powers.push((v, exp));
        }
        let mono = Polynomial::monomial(ring, &powers, coef);
        out = &out + &mono;
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ring() -> Ring {
        Ring::new(vec![
            ("a1".into(), VarKind::Schwinger),
            ("a2".into(), VarKind::Schwinger),
            ("a3".into(), VarKind::Schwinger),
            ("s_1_2".into(), VarKind::Kinematic),
        ])
        .unwrap()
    }

    fn p(ring: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    #[test]
    fn canonical_form_is_unique() {
        let r = small_ring();
        let a1 = Polynomial::variable(&r, r.var("a1").unwrap());
        let a2 = Polynomial::variable(&r, r.var("a2").unwrap());
        let left = &(&a1 + &a2) * &(&a1 - &a2);
        let sq = |x: &Polynomial| x * x;
        let right = &sq(&a1) - &sq(&a2);
        assert_eq!(left, right);
        assert_eq!(left.to_text(), "1*a1^2 + -1*a2^2");
    }

    #[test]
    fn graded_lex_display_order() {
        let r = small_ring();
        let q = p(&r, "1*a2 + 1*a1 + 2*a1^2 + 1/2");
        assert_eq!(q.to_text(), "2*a1^2 + 1*a1 + 1*a2 + 1/2");
    }

    #[test]
    fn addition_cancels_to_zero() {
        let r = small_ring();
        let q = p(&r, "2*a1*a2 + -1*a3");
        let zero = &q - &q;
        assert!(zero.is_zero());
        assert_eq!(zero.to_text(), "0");
    }

    #[test]
    fn parse_round_trip() {
        let r = small_ring();
        for text in [
            "0",
            "5",
            "-3/2*a1^2*a2 + 1*a3 + -1*s_1_2",
            "1*a1*a2*a3*s_1_2",
        ] {
            assert_eq!(p(&r, text).to_text(), text);
        }
    }

    #[test]
    fn parse_rejects_unknown_variable() {
        let r = small_ring();
        assert!(matches!(
            Polynomial::parse(&r, "1*zz"),
            Err(PolyError::Parse { .. })
        ));
    }

    #[test]
    fn derivative_and_eval_commute_on_distinct_vars() {
        let r = small_ring();
        let q = p(&r, "3*a1^2*a2 + 2*a1*a3 + 1*a2*a3 + 7");
        let v1 = r.var("a1").unwrap();
        let v2 = r.var("a2").unwrap();
        let left = q.partial_derivative(v1).eval_zero(v2);
        let right = q.eval_zero(v2).partial_derivative(v1);
        assert_eq!(left, right);
    }

    #[test]
    fn linearity_decomposition() {
        let r = small_ring();
        let q = p(&r, "2*a1*a2 + 1*a1*s_1_2 + 5*a2*a3 + 3");
        let v = r.var("a1").unwrap();
        assert!(q.linear_in(v));
        let rebuilt = &(&q.partial_derivative(v) * &Polynomial::variable(&r, v)) + &q.eval_zero(v);
        assert_eq!(rebuilt, q);
    }

    #[test]
    fn leading_coefficient_degree_zero_returns_input() {
        let r = small_ring();
        let q = p(&r, "2*a2 + 3");
        let v = r.var("a1").unwrap();
        assert_eq!(q.leading_coefficient(v).unwrap(), q);
        assert_eq!(
            Polynomial::zero(&r).leading_coefficient(v),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn pair_resultant_matches_hand_expansion() {
        // f = a1 + a2, g = a1*a2 + 1 (a2 playing the "other" variable).
        let r = small_ring();
        let f = p(&r, "1*a1 + 1*a2");
        let g = p(&r, "1*a1*a2 + 1");
        let v = r.var("a1").unwrap();
        let res = Polynomial::pair_resultant(&f, &g, v).unwrap();
        assert_eq!(res, p(&r, "-1*a2^2 + 1"));
    }

    #[test]
    fn pair_resultant_rejects_nonlinear() {
        let r = small_ring();
        let f = p(&r, "1*a1^2");
        let g = p(&r, "1*a2");
        let v = r.var("a1").unwrap();
        assert!(matches!(
            Polynomial::pair_resultant(&f, &g, v),
            Err(PolyError::NotLinear(_))
        ));
    }

    #[test]
    fn pair_resultant_with_constant_member() {
        let r = small_ring();
        let f = p(&r, "4");
        let g = p(&r, "1*a1*a3 + 2*a2");
        let v = r.var("a1").unwrap();
        // (df/dv)*g(0) - (dg/dv)*f(0) = -4*a3
        let res = Polynomial::pair_resultant(&f, &g, v).unwrap();
        assert_eq!(res, p(&r, "-4*a3"));
    }

    #[test]
    fn lc_resultant_identity_on_fixed_example() {
        let r = small_ring();
        let f = p(&r, "1*a1 + 1*a3");
        let g = p(&r, "1*a1*a3 + 1");
        let v1 = r.var("a1").unwrap();
        let vl = r.var("a3").unwrap();
        assert!(Polynomial::lc_resultant_identity_check(&f, &g, v1, vl).unwrap());
    }

    #[test]
    fn content_unit_normalizes_sign_and_denominators() {
        let r = small_ring();
        let q = p(&r, "-4/3*a1 + 2/3*a2");
        let (unit, prim) = q.content_unit();
        assert_eq!(prim.to_text(), "2*a1 + -1*a2");
        assert_eq!(unit, BigRational::new(BigInt::from(-2), BigInt::from(3)));
        assert_eq!(&Polynomial::constant(&r, unit) * &prim, q);
    }

    #[test]
    fn eval_at_substitutes_rationals() {
        let r = small_ring();
        let q = p(&r, "1*a1^2*a2 + 2*a1 + 1");
        let v = r.var("a1").unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(q.eval_at(v, &half), p(&r, "1/4*a2 + 2"));
    }

    #[test]
    fn ring_rejects_bad_names() {
        assert!(Ring::new(vec![("1abc".into(), VarKind::Schwinger)]).is_err());
        assert!(Ring::new(vec![
            ("x".into(), VarKind::Schwinger),
            ("x".into(), VarKind::Schwinger)
        ])
        .is_err());
    }

    #[test]
    #[should_panic(expected = "different rings")]
    fn cross_ring_arithmetic_panics() {
        let r1 = small_ring();
        let r2 = Ring::new(vec![("b1".into(), VarKind::Schwinger)]).unwrap();
        let _ = &Polynomial::from_int(&r1, 1) + &Polynomial::variable(&r2, Var(0));
    }
}
