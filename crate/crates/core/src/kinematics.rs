//! Symbolic external-momentum algebra.
//!
//! A process has external momenta `ρ_1 … ρ_r` subject to momentum
//! conservation `Σ ρ_i = 0`, which we use to eliminate `ρ_r`.  The invariant
//! symbols are the remaining squares `s_i_i = ρ_i²` (dropped when leg `i` is
//! on-shell, i.e. massless with `ρ_i² = 0`) and the doubled dot products
//! `s_i_j = 2 ρ_i·ρ_j` for `i < j < r`.  When leg `r` is itself on-shell,
//! expanding `ρ_r² = 0` yields one linear relation among those symbols; we
//! use it to eliminate the lexicographically last symbol it contains.
//!
//! For four on-shell legs this leaves the basis `{s_1_2, s_1_3}` with
//! `s_2_3 = -s_1_2 - s_1_3`, and for three on-shell legs every invariant
//! vanishes.

use crate::graph::io::MomentaHeader;
use crate::poly::{Polynomial, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinematicsError {
    #[error("momentum label p{leg} out of range 1..={r}")]
    BadLeg { leg: u32, r: u32 },
    #[error("ring is missing the invariant symbol `{0}`")]
    MissingSymbol(String),
}

/// Fixed external-leg configuration: leg count, on-shell conditions, and the
/// induced invariant basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinematicsContext {
    r: u32,
    onshell: BTreeSet<u32>,
    /// Symbol supports `(i, j)` with `i <= j`, ascending.  `(i, i)` is
    /// `ρ_i²`, `(i, j)` is `2 ρ_i·ρ_j`.
    prelim: Vec<(u32, u32)>,
    /// Index into `prelim` of the symbol eliminated by `ρ_r² = 0`, together
    /// with the indices of the other symbols in that relation.
    elim: Option<(usize, Vec<usize>)>,
}

impl KinematicsContext {
    /// No external momenta at all: every momentum square is zero.
    pub fn trivial() -> KinematicsContext {
        KinematicsContext { r: 0, onshell: BTreeSet::new(), prelim: Vec::new(), elim: None }
    }

    pub fn new(r: u32, onshell: &[u32]) -> Result<KinematicsContext, KinematicsError> {
        let mut shell = BTreeSet::new();
        for &i in onshell {
            if i == 0 || i > r {
                return Err(KinematicsError::BadLeg { leg: i, r });
            }
            shell.insert(i);
        }
        let mut prelim = Vec::new();
        for i in 1..r {
            if !shell.contains(&i) {
                prelim.push((i, i));
            }
        }
        for i in 1..r {
            for j in (i + 1)..r {
                prelim.push((i, j));
            }
        }
        prelim.sort_unstable();
        let elim = if r >= 1 && shell.contains(&r) && !prelim.is_empty() {
            // ρ_r = -(ρ_1 + … + ρ_{r-1}), so ρ_r² = Σ s_i_i + Σ s_i_j where
            // on-shell squares contribute nothing.  Solve for the last
            // symbol of the relation.
            let support: Vec<usize> = (0..prelim.len()).collect();
            let (&last, rest) = support.split_last().unwrap();
            Some((last, rest.to_vec()))
        } else {
            None
        };
        Ok(KinematicsContext { r, onshell: shell, prelim, elim })
    }

    pub fn from_header(h: &MomentaHeader) -> Result<KinematicsContext, KinematicsError> {
        KinematicsContext::new(h.r, &h.onshell)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn onshell(&self) -> impl Iterator<Item = u32> + '_ {
        self.onshell.iter().copied()
    }

    /// Names of the independent invariant symbols, in canonical order.
    pub fn basis(&self) -> Vec<String> {
        self.basis_supports().map(|(i, j)| symbol_name(i, j)).collect()
    }

    fn basis_supports(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let skip = self.elim.as_ref().map(|(k, _)| *k);
        self.prelim
            .iter()
            .enumerate()
            .filter(move |(k, _)| Some(*k) != skip)
            .map(|(_, &s)| s)
    }

    /// Integer coordinates of `(Σ legs)²` with respect to [`basis`], one per
    /// basis symbol.  Legs form a multiset; repeats are allowed.
    ///
    /// [`basis`]: KinematicsContext::basis
    pub fn square_coefficients(&self, legs: &[u32]) -> Result<Vec<i64>, KinematicsError> {
        let reduced = self.reduced_counts(legs)?;
        let mut coeff = vec![0i64; self.prelim.len()];
        for (k, &(i, j)) in self.prelim.iter().enumerate() {
            coeff[k] = if i == j {
                reduced[i as usize] * reduced[i as usize]
            } else {
                reduced[i as usize] * reduced[j as usize]
            };
        }
        if let Some((k, rest)) = &self.elim {
            let c = coeff[*k];
            coeff[*k] = 0;
            for &other in rest {
                coeff[other] -= c;
            }
        }
        Ok(self
            .prelim
            .iter()
            .enumerate()
            .filter(|(k, _)| self.elim.as_ref().map(|(e, _)| e) != Some(k))
            .map(|(k, _)| coeff[k])
            .collect())
    }

    /// `(Σ legs)²` as a polynomial; the ring must contain every basis symbol.
    pub fn momentum_square(
        &self,
        ring: &Ring,
        legs: &[u32],
    ) -> Result<Polynomial, KinematicsError> {
        let coeffs = self.square_coefficients(legs)?;
        let mut acc = Polynomial::zero(ring);
        for (name, c) in self.basis().into_iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            let v = ring.var(&name).ok_or(KinematicsError::MissingSymbol(name))?;
            let term = Polynomial::monomial(ring, &[(v, 1)], BigRational::from(BigInt::from(c)));
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Whether `Σ legs` vanishes identically under momentum conservation
    /// (independent of on-shell conditions).
    pub fn is_zero_momentum(&self, legs: &[u32]) -> Result<bool, KinematicsError> {
        Ok(self.reduced_counts(legs)?.iter().all(|&c| c == 0))
    }

    /// Leg counts with `ρ_r` eliminated: entry `i` (1-based, `i < r`) is
    /// `count(i) - count(r)`.  Entries 0 and `r` are zero.
    fn reduced_counts(&self, legs: &[u32]) -> Result<Vec<i64>, KinematicsError> {
        let mut counts = vec![0i64; self.r as usize + 1];
        for &leg in legs {
            if leg == 0 || leg > self.r {
                return Err(KinematicsError::BadLeg { leg, r: self.r });
            }
            counts[leg as usize] += 1;
        }
        if self.r >= 1 {
            let last = counts[self.r as usize];
            for c in counts.iter_mut() {
                *c -= last;
            }
            counts[0] = 0;
            counts[self.r as usize] = 0;
        }
        Ok(counts)
    }
}

/// `s_<i>_<j>` — the invariant-symbol naming scheme.
pub fn symbol_name(i: u32, j: u32) -> String {
    format!("s_{i}_{j}")
}
