//! Fixity, fixed-point profiles, derangements and elusiveness.
//!
//! Everything here is an exhaustive scan over the group's elements, bounded
//! by the enumeration cap.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// The largest number of points fixed by a non-identity element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixityResult {
    pub fixity: usize,
    /// First enumerated element attaining the maximum.
    pub witness: Permutation,
    pub witness_fixed_set: Vec<usize>,
}

/// Fixed-point counts of `p`-elements, keyed by count, each with an example element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeBucket {
    /// Non-identity elements of order `p^a`, `a >= 1`.
    pub prime_power: BTreeMap<usize, Permutation>,
    /// Elements of order exactly `p`.
    pub prime_order: BTreeMap<usize, Permutation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeFixProfile {
    pub by_prime: BTreeMap<u64, PrimeBucket>,
}

impl PrimeFixProfile {
    pub fn prime_power_counts(&self, p: u64) -> BTreeSet<usize> {
        self.by_prime.get(&p).map(|b| b.prime_power.keys().copied().collect()).unwrap_or_default()
    }

    pub fn prime_order_counts(&self, p: u64) -> BTreeSet<usize> {
        self.by_prime.get(&p).map(|b| b.prime_order.keys().copied().collect()).unwrap_or_default()
    }
}

/// Result of one pass over every element.
#[derive(Clone, Debug)]
pub struct ElementCensus {
    /// Absent for the trivial group.
    pub fixity: Option<FixityResult>,
    pub profile: PrimeFixProfile,
    /// First fixed-point-free element of any order.
    pub derangement: Option<Permutation>,
    /// First fixed-point-free element of order exactly `p`, per prime `p`.
    pub prime_derangements: BTreeMap<u64, Permutation>,
    /// Sum over elements of `|Fix(g)|^2`.
    pub fixed_square_sum: u128,
}

impl ElementCensus {
    pub fn scan(group: &PermGroup, cap: u64) -> Result<ElementCensus> {
        let mut census = ElementCensus {
            fixity: None,
            profile: PrimeFixProfile::default(),
            derangement: None,
            prime_derangements: BTreeMap::new(),
            fixed_square_sum: 0,
        };
        for g in group.elements(cap)? {
            let fix = g.num_fixed_points();
            census.fixed_square_sum += (fix as u128) * (fix as u128);
            if g.is_identity() {
                continue;
            }
            if census.fixity.as_ref().is_none_or(|f| fix > f.fixity) {
                census.fixity =
                    Some(FixityResult { fixity: fix, witness_fixed_set: g.fixed_points(), witness: g.clone() });
            }
            if fix == 0 && census.derangement.is_none() {
                census.derangement = Some(g.clone());
            }
            let order = g.order();
            let factored = factorize(order)?;
            if let Some(p) = factored.prime_power_base() {
                let bucket = census.profile.by_prime.entry(p).or_default();
                bucket.prime_power.entry(fix).or_insert_with(|| g.clone());
                if order == p {
                    bucket.prime_order.entry(fix).or_insert_with(|| g.clone());
                }
            }
            for p in factored.primes() {
                if census.prime_derangements.contains_key(&p) {
                    continue;
                }
                let h = if order == p { g.clone() } else { g.pow(order / p) };
                if h.num_fixed_points() == 0 {
                    census.prime_derangements.insert(p, h);
                }
            }
        }
        Ok(census)
    }

    /// No fixed-point-free element of prime order.
    pub fn is_elusive(&self) -> bool {
        self.prime_derangements.is_empty()
    }
}

pub fn fixity(group: &PermGroup, cap: u64) -> Result<FixityResult> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    ElementCensus::scan(group, cap)?.fixity.ok_or(Error::TrivialGroup)
}

pub fn prime_fix_profile(group: &PermGroup, cap: u64) -> Result<PrimeFixProfile> {
    Ok(ElementCensus::scan(group, cap)?.profile)
}

/// A fixed-point-free element of order exactly `p`, if the group has one.
pub fn prime_order_derangement(group: &PermGroup, p: u64, cap: u64) -> Result<Option<Permutation>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = group.order()?;
    if order % p != 0 {
        return Err(Error::PrimeNotDividingOrder { p, order });
    }
    for g in group.elements(cap)? {
        let ord = g.order();
        if ord % p == 0 {
            let h = g.pow(ord / p);
            if h.num_fixed_points() == 0 {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}

/// Transitive with no fixed-point-free element of prime order.
pub fn is_elusive(group: &PermGroup, cap: u64) -> Result<bool> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    Ok(ElementCensus::scan(group, cap)?.is_elusive())
}

/// Transitive with `|G| = |Omega|`.
pub fn is_regular(group: &PermGroup) -> Result<bool> {
    Ok(group.is_transitive() && group.order()? == group.degree() as u64)
}

/// Transitive, not regular, and every non-identity element fixes at most one point.
pub fn is_frobenius(group: &PermGroup, cap: u64) -> Result<bool> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    if is_regular(group)? {
        return Ok(false);
    }
    Ok(fixity(group, cap)?.fixity == 1)
}

/// All point stabilizers trivial: every orbit has length `|H|`.
pub fn is_semiregular_subgroup(group: &PermGroup) -> Result<bool> {
    let order = group.order()?;
    Ok(group.orbits().iter().all(|o| o.len() as u64 == order))
}
