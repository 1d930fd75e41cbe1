//! Structural predicates and the normal subgroup lattice.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{factorize, lcm, FactoredInteger};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::Caps;

/// Summary of one normal subgroup, as consumed by the lemma checks.
#[derive(Clone, Debug)]
pub struct NormalSubgroupInfo {
    pub subgroup: PermGroup,
    pub order: FactoredInteger,
    pub is_abelian: bool,
    pub is_cyclic: bool,
    /// `Some(p)` when the order is a nontrivial power of `p`.
    pub is_p_group_for: Option<u64>,
    /// Least prime divisor of the order; absent for the trivial subgroup.
    pub smallest_prime: Option<u64>,
    pub is_elementary_abelian_of: Option<(u64, u32)>,
    pub abelian_invariants: Option<Vec<u64>>,
    /// Every orbit has length `|N|`, i.e. all point stabilizers are trivial.
    pub is_semiregular: bool,
    /// Orbit lengths on the full point set, ascending.
    pub orbit_lengths: Vec<usize>,
    pub is_minimal_normal: bool,
}

impl NormalSubgroupInfo {
    pub fn is_trivial(&self) -> bool {
        self.order.value() == 1
    }
}

pub fn is_abelian(group: &PermGroup) -> bool {
    let gens = group.generators();
    gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| (a * b) == (b * a)))
}

/// Smallest subgroup containing `elements` that is normalized by `group`.
pub fn normal_closure(group: &PermGroup, elements: &[Permutation]) -> Result<PermGroup> {
    for s in elements {
        if !group.contains(s)? {
            return Err(Error::ElementNotInGroup(s.to_string()));
        }
    }
    normal_closure_unchecked(group, elements)
}

fn normal_closure_unchecked(group: &PermGroup, elements: &[Permutation]) -> Result<PermGroup> {
    let mut closure = PermGroup::from_generators(group.degree(), elements.iter().cloned())?;
    let mut gens = closure.generators().to_vec();
    let mut k = 0;
    while k < gens.len() {
        let h = gens[k].clone();
        k += 1;
        for s in group.generators() {
            let c = h.conjugate_by(s);
            if !closure.contains(&c)? {
                gens.push(c);
                closure = PermGroup::from_generators(group.degree(), gens.iter().cloned())?;
            }
        }
    }
    Ok(closure)
}

/// Commutator subgroup: normal closure of the generator commutators.
pub fn derived_subgroup(group: &PermGroup) -> Result<PermGroup> {
    let gens = group.generators();
    let mut commutators = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b);
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    normal_closure_unchecked(group, &commutators)
}

/// The derived series from `group` down to its last term.
pub fn derived_series(group: &PermGroup) -> Result<Vec<PermGroup>> {
    let mut series = vec![group.clone()];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(series);
        }
        let next = derived_subgroup(last)?;
        if next.order()? == last.order()? {
            return Ok(series);
        }
        series.push(next);
    }
}

pub fn is_solvable(group: &PermGroup) -> Result<bool> {
    Ok(derived_series(group)?.last().expect("nonempty").is_trivial())
}

/// Least `e` with `g^e = 1` for every element.
pub fn exponent(group: &PermGroup, cap: u64) -> Result<u64> {
    if is_abelian(group) {
        return Ok(group.generators().iter().fold(1, |acc, g| lcm(acc, g.order())));
    }
    Ok(group.elements(cap)?.fold(1, |acc, g| lcm(acc, g.order())))
}

pub fn is_cyclic(group: &PermGroup, cap: u64) -> Result<bool> {
    if !is_abelian(group) {
        return Ok(false);
    }
    Ok(exponent(group, cap)? == group.order()?)
}

/// `(p, k)` when the group is isomorphic to `(Z_p)^k` with `k >= 1`.
pub fn is_elementary_abelian(group: &PermGroup) -> Result<Option<(u64, u32)>> {
    if group.is_trivial() || !is_abelian(group) {
        return Ok(None);
    }
    let order = factorize(group.order()?)?;
    match order.factors() {
        &[(p, k)] if group.generators().iter().all(|g| g.order() == p) => Ok(Some((p, k))),
        _ => Ok(None),
    }
}

/// Invariant factors `d_1 | d_2 | ...` of an abelian group, from the census
/// of element orders. The trivial group has no factors.
pub fn abelian_invariants(group: &PermGroup, cap: u64) -> Result<Vec<u64>> {
    if !is_abelian(group) {
        return Err(Error::NotAbelian);
    }
    let order = factorize(group.order()?)?;
    let mut census: BTreeMap<u64, u64> = BTreeMap::new();
    for g in group.elements(cap)? {
        *census.entry(g.order()).or_default() += 1;
    }
    let mut parts_by_prime = Vec::new();
    for &(p, a) in order.factors() {
        // log_p #{g : g^(p^i) = 1} for i = 0..=a
        let mut logs = Vec::with_capacity(a as usize + 1);
        for i in 0..=a {
            let bound = p.pow(i);
            let count: u64 = census.iter().filter(|(&ord, _)| bound % ord == 0).map(|(_, &c)| c).sum();
            logs.push(count.ilog(p));
        }
        // d[i] = number of cyclic p-factors of order >= p^(i+1)
        let d: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let rank = d.first().copied().unwrap_or(0);
        let parts: Vec<u32> = (1..=rank).map(|j| d.iter().filter(|&&x| x >= j).count() as u32).collect();
        parts_by_prime.push((p, parts));
    }
    Ok(combine_prime_parts(&parts_by_prime))
}

// Each entry is a prime with its partition (descending). Returns ascending factors.
fn combine_prime_parts(parts_by_prime: &[(u64, Vec<u32>)]) -> Vec<u64> {
    let width = parts_by_prime.iter().map(|(_, parts)| parts.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..width)
        .map(|t| parts_by_prime.iter().map(|(p, parts)| p.pow(parts.get(t).copied().unwrap_or(0))).product())
        .collect();
    factors.reverse();
    factors
}

/// Invariant factors of the direct product of cyclic groups of the given orders.
pub fn invariant_factors_of_product(cyclic_orders: &[u64]) -> Result<Vec<u64>> {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &m in cyclic_orders {
        for &(p, e) in factorize(m)?.factors() {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let parts: Vec<(u64, Vec<u32>)> = by_prime
        .into_iter()
        .map(|(p, mut parts)| {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            (p, parts)
        })
        .collect();
    Ok(combine_prime_parts(&parts))
}

/// Conjugacy classes as lists of element indices into `elements`.
fn conjugacy_classes(group: &PermGroup, elements: &[Permutation]) -> Vec<Vec<usize>> {
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut class_of = vec![usize::MAX; elements.len()];
    let mut classes = Vec::new();
    for start in 0..elements.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut k = 0;
        while k < members.len() {
            let x = &elements[members[k]];
            k += 1;
            for s in group.generators() {
                let y = index[&x.conjugate_by(s)];
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
        }
        classes.push(members);
    }
    classes
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ClassSet(Vec<u64>);

impl ClassSet {
    fn of(group: &PermGroup, reps: &[&Permutation]) -> ClassSet {
        let mut words = vec![0u64; reps.len().div_ceil(64)];
        for (c, rep) in reps.iter().enumerate() {
            if group.chain().contains(rep) {
                words[c / 64] |= 1 << (c % 64);
            }
        }
        ClassSet(words)
    }

    fn is_subset(&self, other: &ClassSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Every normal subgroup of `group`, trivial and whole group included,
/// ordered by size.
pub fn normal_subgroups(group: &PermGroup, caps: &Caps) -> Result<Vec<NormalSubgroupInfo>> {
    let elements: Vec<Permutation> = group.elements(caps.enumeration_cap)?.collect();
    let classes = conjugacy_classes(group, &elements);
    let reps: Vec<&Permutation> = classes.iter().map(|c| &elements[c[0]]).collect();

    let mut lattice: Vec<(ClassSet, PermGroup)> = Vec::new();
    let mut seen: HashMap<ClassSet, usize> = HashMap::new();
    let mut insert = |lattice: &mut Vec<(ClassSet, PermGroup)>, h: PermGroup| -> Result<bool> {
        let key = ClassSet::of(&h, &reps);
        if seen.contains_key(&key) {
            return Ok(false);
        }
        if lattice.len() >= caps.lattice_cap {
            return Err(Error::LatticeCapExceeded(caps.lattice_cap));
        }
        seen.insert(key.clone(), lattice.len());
        lattice.push((key, h));
        Ok(true)
    };

    insert(&mut lattice, PermGroup::trivial(group.degree())?)?;
    for rep in &reps {
        if !rep.is_identity() {
            insert(&mut lattice, normal_closure_unchecked(group, &[(*rep).clone()])?)?;
        }
    }
    // Close under joins; the join of two normal subgroups is normal.
    let mut i = 0;
    while i < lattice.len() {
        for j in 0..i {
            let (a, b) = (&lattice[i], &lattice[j]);
            if a.0.is_subset(&b.0) || b.0.is_subset(&a.0) {
                continue;
            }
            let joined = a.1.join(&b.1)?;
            insert(&mut lattice, joined)?;
        }
        i += 1;
    }

    let mut sized = Vec::with_capacity(lattice.len());
    for (key, h) in lattice {
        sized.push((h.order()?, key, h));
    }
    sized.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let mut infos = Vec::with_capacity(sized.len());
    for (k, (order, key, h)) in sized.iter().enumerate() {
        let minimal =
            *order > 1 && !sized[..k].iter().any(|(o, other, _)| *o > 1 && other != key && other.is_subset(key));
        infos.push(describe(h, *order, minimal, caps)?);
    }
    Ok(infos)
}

fn describe(h: &PermGroup, order: u64, is_minimal_normal: bool, caps: &Caps) -> Result<NormalSubgroupInfo> {
    let factored = factorize(order)?;
    let abelian = is_abelian(h);
    let abelian_invariants = if abelian { Some(abelian_invariants(h, caps.enumeration_cap)?) } else { None };
    let is_cyclic = abelian && abelian_invariants.as_ref().is_some_and(|inv| inv.len() <= 1);
    let mut orbit_lengths: Vec<usize> = h.orbits().iter().map(Vec::len).collect();
    orbit_lengths.sort_unstable();
    Ok(NormalSubgroupInfo {
        subgroup: h.clone(),
        is_abelian: abelian,
        is_cyclic,
        is_p_group_for: factored.prime_power_base(),
        smallest_prime: factored.smallest_prime(),
        is_elementary_abelian_of: is_elementary_abelian(h)?,
        abelian_invariants,
        is_semiregular: orbit_lengths.iter().all(|&l| l as u64 == order),
        orbit_lengths,
        is_minimal_normal,
        order: factored,
    })
}

/// Nontrivial normal subgroups containing no smaller nontrivial one.
pub fn minimal_normal_subgroups(lattice: &[NormalSubgroupInfo]) -> Vec<NormalSubgroupInfo> {
    lattice.iter().filter(|n| n.is_minimal_normal).cloned().collect()
}
