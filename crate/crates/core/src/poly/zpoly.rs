//! Univariate integer polynomials and exact factorization over Z.
//!
//! The pipeline is the classical Zassenhaus method: factor modulo a small
//! prime that keeps the input square-free, Hensel-lift the modular factors
//! past the Landau-Mignotte coefficient bound, then recombine subsets of
//! lifted factors by exact trial division.  Everything is exact; a missed
//! split cannot occur because recombination is exhaustive up to half the
//! modular factor count and the remainder is then provably irreducible.

use crate::rng::SplitMix64;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense univariate polynomial over Z, little-endian, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn zero() -> ZPoly {
        ZPoly(Vec::new())
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> ZPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; zero polynomial reports 0 by convention (check `is_zero`).
    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] += b;
        }
        ZPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        ZPoly::from_coeffs(out)
    }

    /// Exact quotient over Z, or `None` if `g` does not divide `self` in Z[x].
    pub fn exact_div(&self, g: &ZPoly) -> Option<ZPoly> {
        assert!(!g.is_zero());
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.deg() < g.deg() {
            return None;
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.deg() - g.deg() + 1];
        let glc = g.lc();
        for k in (0..q.len()).rev() {
            let top = std::mem::take(&mut r[k + g.deg()]);
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(glc);
            if !rem.is_zero() {
                return None;
            }
            for (j, gc) in g.0.iter().enumerate().take(g.deg()) {
                r[k + j] -= &c * gc;
            }
            q[k] = c;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(ZPoly::from_coeffs(q))
        } else {
            None
        }
    }

    /// Integer content (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    /// Canonical form: coprime coefficients, positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn eval_zero(&self) -> BigInt {
        self.0.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }
}

/// A scalar multiple of `f mod g` with integer coefficients (each elimination
/// step pre-multiplies by `lc(g)`); only used inside the primitive remainder
/// sequence, where scalars are irrelevant.
fn pseudo_rem(f: &ZPoly, g: &ZPoly) -> ZPoly {
    assert!(!g.is_zero());
    let mut r = f.0.clone();
    let glc = g.lc().clone();
    let dg = g.deg();
    while !r.iter().all(|x| x.is_zero()) {
        let dr = r.iter().rposition(|x| !x.is_zero()).unwrap();
        if dr < dg {
            break;
        }
        let top = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &glc;
        }
        for (j, gc) in g.0.iter().enumerate() {
            r[dr - dg + j] -= &top * gc;
        }
    }
    ZPoly::from_coeffs(r)
}

/// Gcd over Z, canonical (primitive with positive leading coefficient times
/// the gcd of the integer contents).
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.primitive().mul(&ZPoly(vec![b.content()]));
    }
    if b.is_zero() {
        return a.primitive().mul(&ZPoly(vec![a.content()]));
    }
    let cont = a.content().gcd(&b.content());
    let (mut r0, mut r1) = if a.deg() >= b.deg() {
        (a.primitive(), b.primitive())
    } else {
        (b.primitive(), a.primitive())
    };
    while !r1.is_zero() {
        let r2 = pseudo_rem(&r0, &r1).primitive();
        r0 = r1;
        r1 = r2;
    }
    r0.primitive().mul(&ZPoly(vec![cont]))
}

/// Yun's square-free decomposition of a nonzero polynomial over Z; returns
/// primitive square-free parts with their multiplicities (content dropped).
pub fn squarefree_decomposition(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    assert!(!f.is_zero());
    let f = f.primitive();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let g = gcd(&f, &df).primitive();
    let mut c = f.exact_div(&g).expect("gcd divides");
    let mut d = df.exact_div(&g).expect("gcd divides derivative").sub(&c.derivative());
    let mut i = 1u32;
    while c.deg() > 0 {
        let a = gcd(&c, &d).primitive();
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        c = c.exact_div(&a).expect("part divides");
        d = d.exact_div(&a).expect("part divides").sub(&c.derivative());
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a small prime.
// ---------------------------------------------------------------------------

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invm(a: u64, p: u64) -> u64 {
    // Extended Euclid; p prime, a != 0 mod p.
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

/// Dense polynomial over F_p, little-endian, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
struct MPoly {
    c: Vec<u64>,
    p: u64,
}

impl MPoly {
    fn from_coeffs(mut c: Vec<u64>, p: u64) -> MPoly {
        while c.last().is_some_and(|&x| x == 0) {
            c.pop();
        }
        MPoly { c, p }
    }

    fn zero(p: u64) -> MPoly {
        MPoly { c: Vec::new(), p }
    }

    fn one(p: u64) -> MPoly {
        MPoly { c: vec![1], p }
    }

    fn x(p: u64) -> MPoly {
        MPoly { c: vec![0, 1], p }
    }

    fn from_zpoly(f: &ZPoly, p: u64) -> MPoly {
        let pb = BigInt::from(p);
        MPoly::from_coeffs(
            f.0.iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
            p,
        )
    }

    fn to_zpoly(&self) -> ZPoly {
        ZPoly::from_coeffs(self.c.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lc(&self) -> u64 {
        *self.c.last().expect("lc of zero")
    }

    fn sub(&self, other: &MPoly) -> MPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.c.iter().enumerate() {
            out[i] = a;
        }
        for (i, &b) in other.c.iter().enumerate() {
            out[i] = subm(out[i], b, self.p);
        }
        MPoly::from_coeffs(out, self.p)
    }

    fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.p);
        }
        let mut out = vec![0u128; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % self.p as u128;
            }
        }
        MPoly::from_coeffs(out.into_iter().map(|x| x as u64).collect(), self.p)
    }

    fn scale(&self, k: u64) -> MPoly {
        MPoly::from_coeffs(self.c.iter().map(|&c| mulm(c, k, self.p)).collect(), self.p)
    }

    fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.lc(), self.p))
    }

    fn rem(&self, m: &MPoly) -> MPoly {
        assert!(!m.is_zero());
        let mut r = self.c.clone();
        let inv = invm(m.lc(), self.p);
        while r.len() >= m.c.len() && !r.is_empty() {
            let top = *r.last().unwrap();
            if top == 0 {
                r.pop();
                continue;
            }
            let c = mulm(top, inv, self.p);
            let off = r.len() - m.c.len();
            for (j, &mc) in m.c.iter().enumerate() {
                r[off + j] = subm(r[off + j], mulm(c, mc, self.p), self.p);
            }
            while r.last().is_some_and(|&x| x == 0) {
                r.pop();
            }
        }
        MPoly::from_coeffs(r, self.p)
    }

    fn divrem(&self, m: &MPoly) -> (MPoly, MPoly) {
        assert!(!m.is_zero());
        if self.deg() < m.deg() || self.is_zero() {
            return (MPoly::zero(self.p), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len() - m.c.len() + 1];
        let inv = invm(m.lc(), self.p);
        for k in (0..q.len()).rev() {
            let top = r[k + m.deg()];
            if top == 0 {
                continue;
            }
            let c = mulm(top, inv, self.p);
            q[k] = c;
            for (j, &mc) in m.c.iter().enumerate() {
                r[k + j] = subm(r[k + j], mulm(c, mc, self.p), self.p);
            }
        }
        (MPoly::from_coeffs(q, self.p), MPoly::from_coeffs(r, self.p))
    }

    fn gcd(&self, other: &MPoly) -> MPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns (s, t) with s*self + t*other = 1.
    /// Requires the inputs to be coprime.
    fn bezout(&self, other: &MPoly) -> (MPoly, MPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (MPoly::one(p), MPoly::zero(p));
        let (mut t0, mut t1) = (MPoly::zero(p), MPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1.clone(), s0.sub(&q.mul(&s1)));
            (t0, t1) = (t1.clone(), t0.sub(&q.mul(&t1)));
        }
        assert_eq!(r0.deg(), 0, "bezout inputs must be coprime");
        let inv = invm(r0.lc(), p);
        (s0.scale(inv), t0.scale(inv))
    }

    fn derivative(&self) -> MPoly {
        if self.c.len() <= 1 {
            return MPoly::zero(self.p);
        }
        MPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulm(c, (i as u64) % self.p, self.p))
                .collect(),
            self.p,
        )
    }

    fn powmod(&self, exp: &BigUint, m: &MPoly) -> MPoly {
        let mut base = self.rem(m);
        let mut acc = MPoly::one(self.p);
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }
}

/// Distinct-degree then equal-degree factorization of a monic square-free
/// polynomial mod p.  Returns monic irreducible factors.
fn factor_mod_p(f: &MPoly, rng: &mut SplitMix64) -> Vec<MPoly> {
    let p = f.p;
    let mut out = Vec::new();
    let mut v = f.monic();
    let mut h = MPoly::x(p);
    let mut d = 0usize;
    while v.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&BigUint::from(p), &v);
        let g = h.sub(&MPoly::x(p)).gcd(&v);
        if g.deg() > 0 {
            equal_degree_split(&g, d, rng, &mut out);
            v = v.divrem(&g).0.monic();
            h = h.rem(&v);
        }
    }
    if v.deg() > 0 {
        out.push(v);
    }
    out
}

/// Cantor-Zassenhaus: splits a monic product of degree-d irreducibles.
fn equal_degree_split(g: &MPoly, d: usize, rng: &mut SplitMix64, out: &mut Vec<MPoly>) {
    if g.deg() == d {
        out.push(g.monic());
        return;
    }
    let p = g.p;
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let coeffs: Vec<u64> = (0..g.deg()).map(|_| rng.next_u64() % p).collect();
        let a = MPoly::from_coeffs(coeffs, p);
        if a.deg() < 1 && a.is_zero() {
            continue;
        }
        let b = a.powmod(&exp, g);
        let split = b.sub(&MPoly::one(p)).gcd(g);
        if split.deg() > 0 && split.deg() < g.deg() {
            let rest = g.divrem(&split).0.monic();
            equal_degree_split(&split, d, rng, out);
            equal_degree_split(&rest, d, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting.
// ---------------------------------------------------------------------------

fn modm_poly(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::from_coeffs(f.0.iter().map(|c| c.mod_floor(m)).collect())
}

fn mulmod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    modm_poly(&a.mul(b), m)
}

fn submod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    modm_poly(&a.sub(b), m)
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn divrem_monic_mod(a: &ZPoly, h: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(h.lc().is_one());
    if a.is_zero() || a.deg() < h.deg() {
        return (ZPoly::zero(), a.clone());
    }
    let mut r = a.0.clone();
    let mut q = vec![BigInt::zero(); a.deg() - h.deg() + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + h.deg()].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        q[k] = c.clone();
        for (j, hc) in h.0.iter().enumerate() {
            let v = (&r[k + j] - &c * hc).mod_floor(m);
            r[k + j] = v;
        }
    }
    r.truncate(h.deg());
    (
        modm_poly(&ZPoly::from_coeffs(q), m),
        modm_poly(&ZPoly::from_coeffs(r), m),
    )
}

/// One quadratic Hensel step: lifts `f = g*h (mod m)`, `s*g + t*h = 1 (mod m)`
/// with `h` monic to the same data mod `m^2`.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let one = ZPoly(vec![BigInt::one()]);
    let e = submod(f, &g.mul(h), &m2);
    let (q, r) = divrem_monic_mod(&mulmod(s, &e, &m2), h, &m2);
    let g1 = modm_poly(&g.add(&t.mul(&e)).add(&q.mul(g)), &m2);
    let h1 = modm_poly(&h.add(&r), &m2);
    // Lift the Bezout pair alongside.
    let b = submod(&s.mul(&g1).add(&t.mul(&h1)), &one, &m2);
    let (c, d) = divrem_monic_mod(&mulmod(s, &b, &m2), &h1, &m2);
    let s1 = submod(s, &d, &m2);
    let t1 = modm_poly(&t.sub(&t.mul(&b)).sub(&c.mul(&g1)), &m2);
    (g1, h1, s1, t1)
}

/// Lifts the pair factorization to modulus at least `target`, returning
/// (g, h) and the modulus reached.
fn hensel_pair(
    f: &ZPoly,
    g0: &ZPoly,
    h0: &ZPoly,
    s0: &ZPoly,
    t0: &ZPoly,
    p: &BigInt,
    target: &BigInt,
) -> (ZPoly, ZPoly, BigInt) {
    let (mut g, mut h, mut s, mut t) = (g0.clone(), h0.clone(), s0.clone(), t0.clone());
    let mut m = p.clone();
    while &m < target {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    (g, h, m)
}

/// Multifactor Hensel lifting: given monic modular factors of `f` mod p,
/// returns their monic lifts mod `modulus` (a power of p >= target).
fn hensel_lift_all(
    f: &ZPoly,
    factors_p: &[MPoly],
    p: u64,
    target: &BigInt,
) -> (Vec<ZPoly>, BigInt) {
    let pb = BigInt::from(p);
    // Final modulus every subtree must reach (a fixed power of p).
    let mut modulus = pb.clone();
    while &modulus < target {
        modulus = &modulus * &modulus;
    }
    let mut out = Vec::with_capacity(factors_p.len());
    lift_rec(
        &modm_poly(f, &modulus),
        factors_p,
        p,
        &modulus,
        &mut out,
    );
    (out, modulus)
}

fn lift_rec(fval: &ZPoly, factors: &[MPoly], p: u64, modulus: &BigInt, out: &mut Vec<ZPoly>) {
    if factors.len() == 1 {
        // fval = lc * monic-factor (mod modulus); recover the monic lift.
        let lc = fval.lc().clone();
        let inv = modinv(&lc, modulus);
        out.push(modm_poly(&fval.mul(&ZPoly(vec![inv])), modulus));
        return;
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let pb = BigInt::from(p);
    // g carries the leading coefficient; h is monic.
    let mut gp = MPoly::from_coeffs(vec![fval.lc().mod_floor(&pb).to_u64().unwrap()], p);
    for fac in left {
        gp = gp.mul(fac);
    }
    let mut hp = MPoly::one(p);
    for fac in right {
        hp = hp.mul(fac);
    }
    let (sp, tp) = gp.bezout(&hp);
    let (g, h, m) = hensel_pair(
        fval,
        &gp.to_zpoly(),
        &hp.to_zpoly(),
        &sp.to_zpoly(),
        &tp.to_zpoly(),
        &pb,
        modulus,
    );
    debug_assert!(&m >= modulus);
    let g = modm_poly(&g, modulus);
    let h = modm_poly(&h, modulus);
    lift_rec(&g, left, p, modulus, out);
    lift_rec(&h, right, p, modulus, out);
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    // Extended Euclid over BigInt; gcd(a, m) must be 1.
    let (mut t, mut new_t) = (BigInt::zero(), BigInt::one());
    let (mut r, mut new_r) = (m.clone(), a.mod_floor(m));
    while !new_r.is_zero() {
        let q = &r / &new_r;
        let tmp_t = &t - &q * &new_t;
        t = std::mem::replace(&mut new_t, tmp_t);
        let tmp_r = &r - &q * &new_r;
        r = std::mem::replace(&mut new_r, tmp_r);
    }
    debug_assert!(r.is_one());
    t.mod_floor(m)
}

/// Centers coefficients into (-m/2, m/2].
fn symmetric(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::from_coeffs(
        f.0.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Zassenhaus driver.
// ---------------------------------------------------------------------------

const PRIME_TABLE: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421,
    431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541,
];

/// Factors a primitive square-free polynomial with positive leading
/// coefficient into canonical irreducible factors over Z.
pub(crate) fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    assert!(!f.is_zero() && f.lc().is_positive());
    if f.deg() == 0 {
        return Vec::new();
    }
    if f.deg() == 1 {
        return vec![f.primitive()];
    }
    let mut rng = SplitMix64::new(
        0x5EED_u64 ^ f.0.iter().fold(0u64, |h, c| {
            h.wrapping_mul(0x100000001B3).wrapping_add(c.mod_floor(&BigInt::from(u64::MAX)).to_u64().unwrap_or(1))
        }),
    );

    // Pick a prime keeping f square-free; among a few admissible primes use
    // the one giving the fewest modular factors.
    let mut best: Option<(u64, Vec<MPoly>)> = None;
    let mut tried = 0;
    for &p in PRIME_TABLE {
        if (f.lc() % p).is_zero() {
            continue;
        }
        let fp = MPoly::from_zpoly(f, p).monic();
        if fp.deg() != f.deg() {
            continue;
        }
        if fp.gcd(&fp.derivative()).deg() != 0 {
            continue;
        }
        let fac = factor_mod_p(&fp, &mut rng);
        if fac.len() == 1 {
            return vec![f.primitive()];
        }
        if best.as_ref().map(|(_, b)| fac.len() < b.len()).unwrap_or(true) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 4 {
            break;
        }
    }
    let (p, factors_p) = best.expect("no admissible prime found (square-free input expected)");

    // Landau-Mignotte: any factor of f (scaled by lc) has coefficients
    // bounded by lc * 2^n * ||f||_2.
    let n = f.deg();
    let l2: BigInt = f.0.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = f.lc().abs() * (BigInt::one() << n) * l2;
    let target: BigInt = bound * 2 + 1;
    let (lifted, modulus) = hensel_lift_all(f, &factors_p, p, &target);

    recombine(f.clone(), lifted, &modulus)
}

/// Advances to the next lexicographic k-combination of {0..n-1}.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - k {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    'outer: loop {
        let r = lifted.len();
        if r == 0 {
            break;
        }
        if r == 1 {
            out.push(f.primitive());
            return out;
        }
        let f0 = f.eval_zero();
        let lc_f0 = if f0.is_zero() { BigInt::zero() } else { f.lc() * &f0 };
        for s in 1..=(r / 2) {
            let mut combo: Vec<usize> = (0..s).collect();
            loop {
                // Candidate: lc(f) * product of chosen monic lifts, centered.
                let mut cand = ZPoly(vec![f.lc().clone()]);
                for &i in &combo {
                    cand = mulmod(&cand, &lifted[i], modulus);
                }
                let cand = symmetric(&cand, modulus).primitive();
                // Cheap screen: the constant term of a true factor divides
                // lc(f) * f(0) when the latter is nonzero.
                let quick_ok = lc_f0.is_zero()
                    || cand.eval_zero().is_zero()
                    || (&lc_f0 % cand.eval_zero()).is_zero();
                if quick_ok {
                    if let Some(q) = f.exact_div(&cand) {
                        out.push(cand);
                        f = q.primitive();
                        let chosen: std::collections::BTreeSet<usize> =
                            combo.iter().copied().collect();
                        lifted = lifted
                            .into_iter()
                            .enumerate()
                            .filter(|(i, _)| !chosen.contains(i))
                            .map(|(_, v)| v)
                            .collect();
                        continue 'outer;
                    }
                }
                if !next_combination(&mut combo, r) {
                    break;
                }
            }
        }
        // No subset of size <= r/2 divides f: the remainder is irreducible
        // (a proper factor would be witnessed by a subset or its complement).
        out.push(f.primitive());
        return out;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(coeffs: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn sorted(mut v: Vec<ZPoly>) -> Vec<ZPoly> {
        v.sort_by_key(|f| (f.deg(), f.0.iter().map(|c| c.clone()).collect::<Vec<_>>().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        v
    }

    #[test]
    fn mod_p_factoring_splits_product_of_linears() {
        let mut rng = SplitMix64::new(42);
        // x^3 - x = x(x-1)(x+1) mod 5
        let f = MPoly::from_zpoly(&zp(&[0, -1, 0, 1]), 5).monic();
        let fac = factor_mod_p(&f, &mut rng);
        assert_eq!(fac.len(), 3);
        let mut prod = MPoly::one(5);
        for g in &fac {
            assert_eq!(g.deg(), 1);
            prod = prod.mul(g);
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn factors_product_of_distinct_linears_and_quadratic() {
        // (x+1)(x-2)(3x+5)(x^2+x+1)
        let f = zp(&[1, 1]).mul(&zp(&[-2, 1])).mul(&zp(&[5, 3])).mul(&zp(&[1, 1, 1]));
        let fac = sorted(factor_squarefree(&f.primitive()));
        assert_eq!(fac.len(), 4);
        let mut prod = ZPoly(vec![BigInt::one()]);
        for g in &fac {
            prod = prod.mul(g);
        }
        assert_eq!(prod, f.primitive());
        assert!(fac.contains(&zp(&[1, 1, 1])));
        assert!(fac.contains(&zp(&[5, 3])));
    }

    #[test]
    fn detects_irreducible_cyclotomic() {
        // x^4 + x^3 + x^2 + x + 1 (5th cyclotomic, irreducible)
        let f = zp(&[1, 1, 1, 1, 1]);
        let fac = factor_squarefree(&f);
        assert_eq!(fac, vec![f]);
    }

    #[test]
    fn splits_x8_minus_1_into_cyclotomics() {
        let f = zp(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = sorted(factor_squarefree(&f));
        let expected = sorted(vec![
            zp(&[-1, 1]),
            zp(&[1, 1]),
            zp(&[1, 0, 1]),
            zp(&[1, 0, 0, 0, 1]),
        ]);
        assert_eq!(fac, expected);
    }

    #[test]
    fn large_coefficient_product_recovered() {
        // (123456789*x^2 + 987654321*x + 1000000007)(x^3 - 2)
        let a = zp(&[1000000007, 987654321, 123456789]);
        let b = zp(&[-2, 0, 0, 1]);
        let fac = sorted(factor_squarefree(&a.mul(&b)));
        assert_eq!(fac.len(), 2);
        assert!(fac.contains(&a));
        assert!(fac.contains(&b));
    }

    #[test]
    fn x_is_a_factor_when_constant_term_vanishes() {
        // x * (x^2 + 3x + 1)
        let f = zp(&[0, 1]).mul(&zp(&[1, 3, 1]));
        let fac = sorted(factor_squarefree(&f));
        assert_eq!(fac.len(), 2);
        assert!(fac.contains(&zp(&[0, 1])));
        assert!(fac.contains(&zp(&[1, 3, 1])));
    }

    #[test]
    fn exact_div_rejects_non_divisor() {
        let f = zp(&[1, 2, 1]);
        assert!(f.exact_div(&zp(&[1, 1])).is_some());
        assert!(f.exact_div(&zp(&[-1, 1])).is_none());
    }
}
