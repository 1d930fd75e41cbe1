//! Permutation groups given by generators.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::chain::{Elements, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

/// A subgroup of `Sym(degree)` given by generators.
///
/// The stabilizer chain is built on first use and cached; after that the value
/// is immutable and can be shared between threads.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

impl PermGroup {
    /// Identity generators and repeated generators are dropped.
    pub fn from_generators(degree: usize, gens: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidDegree(degree));
        }
        let mut seen = HashSet::new();
        let mut generators = Vec::new();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
            if !g.is_identity() && seen.insert(g.clone()) {
                generators.push(g);
            }
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::from_generators(degree, [])
    }

    pub(crate) fn with_chain(degree: usize, generators: Vec<Permutation>, chain: StabilizerChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup { degree, generators, chain: cell }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity_unchecked(self.degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    fn check_point(&self, alpha: usize) -> Result<()> {
        if alpha >= self.degree {
            Err(Error::PointOutOfRange { point: alpha, degree: self.degree })
        } else {
            Ok(())
        }
    }

    /// The orbit of `alpha`, sorted ascending.
    pub fn orbit(&self, alpha: usize) -> Result<Vec<usize>> {
        self.check_point(alpha)?;
        let mut seen = vec![false; self.degree];
        seen[alpha] = true;
        let mut queue = vec![alpha];
        let mut k = 0;
        while k < queue.len() {
            let x = queue[k];
            k += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Ok(queue)
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for alpha in 0..self.degree {
            if assigned[alpha] {
                continue;
            }
            let orbit = self.orbit(alpha).expect("point in range");
            for &x in &orbit {
                assigned[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// The cached stabilizer chain, built with a greedy base.
    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::build(self.degree, &self.generators, &[]).expect("generators validated"))
    }

    /// A fresh chain whose base starts with `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> Result<StabilizerChain> {
        StabilizerChain::build(self.degree, &self.generators, prefix)
    }

    pub fn order(&self) -> Result<u64> {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: g.degree() });
        }
        Ok(self.chain().contains(g))
    }

    /// `G_alpha`, generated by the level-one strong generators of a chain with
    /// `alpha` as its first base point.
    pub fn point_stabilizer(&self, alpha: usize) -> Result<PermGroup> {
        self.check_point(alpha)?;
        let chain = self.chain_with_base(&[alpha])?;
        let tail = chain.tail(1);
        let gens = chain.stabilizer_generators(1).to_vec();
        let mut group = PermGroup::from_generators(self.degree, gens)?;
        if group.generators.is_empty() {
            return Ok(group);
        }
        group = PermGroup::with_chain(self.degree, group.generators, tail);
        Ok(group)
    }

    /// Enumerates every element exactly once, refusing groups larger than `cap`.
    pub fn elements(&self, cap: u64) -> Result<Elements<'_>> {
        let order = self.order()?;
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
        Ok(Elements::new(self.chain()))
    }

    /// `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equal order and generators of one contained in the other.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        Ok(self.order()? == other.order()? && self.is_subgroup_of(other)?)
    }

    /// Subgroup generated by the union of both generating sets.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        PermGroup::from_generators(self.degree, self.generators.iter().chain(other.generators.iter()).cloned())
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, <", self.degree)?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">)")
    }
}

/// Brute-force closure of a generating set under multiplication. Only
/// intended as a cross-check for small groups.
pub fn naive_closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity_unchecked(degree);
    let mut set = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x * g;
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}
