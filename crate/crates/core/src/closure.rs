//! Orbitals and 2-closure.
//!
//! The 2-closure of `G` is the automorphism group of the complete digraph on
//! `0..n` whose arcs are colored by the `G`-orbit of the pair. It is found by
//! individualization-refinement backtracking over that coloring.

use std::collections::{BTreeMap, BTreeSet};

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// The coloring of `Omega x Omega` by orbit of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalPartition {
    degree: usize,
    colors: Vec<u32>,
    rank: usize,
    diagonal_colors: BTreeSet<u32>,
}

impl OrbitalPartition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of orbitals.
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.colors[i * self.degree + j]
    }

    pub fn diagonal_colors(&self) -> &BTreeSet<u32> {
        &self.diagonal_colors
    }

    /// Size of every color class, indexed by color.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// `g` maps every color class onto itself.
    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        let n = self.degree;
        g.degree() == n
            && (0..n).all(|i| {
                let gi = g.apply(i);
                (0..n).all(|j| self.color(i, j) == self.color(gi, g.apply(j)))
            })
    }

    /// Coarsest equitable refinement of `cells`: points stay together only if
    /// they have equal numbers of out- and in-arcs of every color into every
    /// current cell. Split fragments take the place of their parent cell,
    /// ordered by their count vectors.
    pub fn refine(&self, cells: &OrderedPartition) -> Result<OrderedPartition> {
        if cells.degree != self.degree {
            return Err(Error::MalformedPartition(format!(
                "partition covers {} points, coloring has {}",
                cells.degree, self.degree
            )));
        }
        Ok(self.refine_unchecked(cells.cells.clone()))
    }

    fn refine_unchecked(&self, mut cells: Vec<Vec<usize>>) -> OrderedPartition {
        let n = self.degree;
        let mut cell_of = vec![0usize; n];
        loop {
            for (k, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = k;
                }
            }
            let before = cells.len();
            let mut next = Vec::with_capacity(n);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    groups.entry(self.signature(v, &cell_of)).or_default().push(v);
                }
                next.extend(groups.into_values());
            }
            cells = next;
            if cells.len() == before {
                break;
            }
        }
        OrderedPartition { degree: n, cells }
    }

    fn signature(&self, v: usize, cell_of: &[usize]) -> Signature {
        let mut counts: BTreeMap<(usize, u32, u8), u32> = BTreeMap::new();
        for (u, &cell) in cell_of.iter().enumerate() {
            *counts.entry((cell, self.color(v, u), 0)).or_default() += 1;
            *counts.entry((cell, self.color(u, v), 1)).or_default() += 1;
        }
        counts.into_iter().map(|((k, c, d), m)| (k, c, d, m)).collect()
    }
}

/// Sorted (cell, color, direction, count) entries for one point.
type Signature = Vec<(usize, u32, u8, u32)>;

/// Orbits of `G` on ordered pairs. Colors are numbered in order of first
/// appearance when scanning pairs row by row.
pub fn orbitals(group: &PermGroup) -> OrbitalPartition {
    let n = group.degree();
    let mut colors = vec![u32::MAX; n * n];
    let mut rank = 0u32;
    let mut diagonal_colors = BTreeSet::new();
    for start in 0..n * n {
        if colors[start] != u32::MAX {
            continue;
        }
        colors[start] = rank;
        let mut queue = vec![start];
        while let Some(pair) = queue.pop() {
            let (i, j) = (pair / n, pair % n);
            for g in group.generators() {
                let image = g.apply(i) * n + g.apply(j);
                if colors[image] == u32::MAX {
                    colors[image] = rank;
                    queue.push(image);
                }
            }
        }
        rank += 1;
    }
    for i in 0..n {
        diagonal_colors.insert(colors[i * n + i]);
    }
    OrbitalPartition { degree: n, colors, rank: rank as usize, diagonal_colors }
}

/// An ordered partition of `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    degree: usize,
    cells: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(degree: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; degree];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::MalformedPartition("empty cell".into()));
            }
            for &v in cell {
                if v >= degree || seen[v] {
                    return Err(Error::MalformedPartition(format!("point {v} invalid or repeated")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::MalformedPartition(format!("point {v} missing")));
        }
        Ok(OrderedPartition { degree, cells })
    }

    pub fn unit(degree: usize) -> Self {
        OrderedPartition { degree, cells: vec![(0..degree).collect()] }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.degree
    }

    fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    fn individualize(&self, k: usize, x: usize) -> Vec<Vec<usize>> {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..k]);
        cells.push(vec![x]);
        cells.push(self.cells[k].iter().copied().filter(|&v| v != x).collect());
        cells.extend_from_slice(&self.cells[k + 1..]);
        cells
    }

    fn first_non_singleton(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.len() > 1)
    }
}

struct Search<'a> {
    coloring: &'a OrbitalPartition,
    /// Partitions along the first path; `path[m]` is discrete.
    path: Vec<OrderedPartition>,
    /// Index of the target cell in `path[i]`, for `i < m`.
    targets: Vec<usize>,
    base: Vec<usize>,
    first_leaf: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(coloring: &'a OrbitalPartition) -> Self {
        let root = coloring.refine_unchecked(vec![(0..coloring.degree).collect()]);
        let mut path = vec![root];
        let mut targets = Vec::new();
        let mut base = Vec::new();
        while let Some(k) = path.last().unwrap().first_non_singleton() {
            let node = path.last().unwrap();
            let b = *node.cells[k].iter().min().expect("nonempty");
            let child = coloring.refine_unchecked(node.individualize(k, b));
            targets.push(k);
            base.push(b);
            path.push(child);
        }
        let first_leaf = path.last().unwrap().cells.iter().map(|c| c[0]).collect();
        Search { coloring, path, targets, base, first_leaf }
    }

    /// An automorphism fixing `base[..depth]` and sending `base[depth]` to `x`.
    fn find(&self, depth: usize, x: usize) -> Option<Permutation> {
        self.descend(&self.path[depth], depth, x)
    }

    fn descend(&self, node: &OrderedPartition, depth: usize, x: usize) -> Option<Permutation> {
        let child = self.coloring.refine_unchecked(node.individualize(self.targets[depth], x));
        if child.shape() != self.path[depth + 1].shape() {
            return None;
        }
        if child.is_discrete() {
            let mut images = vec![0usize; self.coloring.degree];
            for (t, cell) in child.cells.iter().enumerate() {
                images[self.first_leaf[t]] = cell[0];
            }
            let sigma = Permutation::from_images(&images).expect("leaf defines a bijection");
            return self.coloring.is_preserved_by(&sigma).then_some(sigma);
        }
        let k = self.targets[depth + 1];
        let mut candidates = child.cells[k].clone();
        candidates.sort_unstable();
        candidates.into_iter().find_map(|y| self.descend(&child, depth + 1, y))
    }
}

fn orbit_under(gens: &[&Permutation], start: usize, degree: usize) -> Vec<bool> {
    let mut seen = vec![false; degree];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Generators of the full color-preserving group of `coloring`. Every element
/// of `known` must already preserve the coloring; they seed the pruning.
pub fn color_automorphisms(coloring: &OrbitalPartition, known: &[Permutation]) -> Result<Vec<Permutation>> {
    let n = coloring.degree;
    let search = Search::new(coloring);
    let seed = StabilizerChain::build(n, known, &search.base)?;
    let m = search.base.len();
    // found[i]: new generators fixing base[..i] pointwise, discovered at level i
    let mut found: Vec<Vec<Permutation>> = vec![Vec::new(); m];
    for i in (0..m).rev() {
        let b = search.base[i];
        let level_gens = |found: &[Vec<Permutation>]| -> Vec<Permutation> {
            seed.stabilizer_generators(i)
                .iter()
                .filter(|g| search.base[..i].iter().all(|&p| g.apply(p) == p))
                .chain(found[i..].iter().flatten())
                .cloned()
                .collect()
        };
        let mut gens = level_gens(&found);
        let mut orbit = orbit_under(&gens.iter().collect::<Vec<_>>(), b, n);
        let mut cell = search.path[i].cells[search.targets[i]].clone();
        cell.sort_unstable();
        for x in cell {
            if orbit[x] {
                continue;
            }
            if let Some(sigma) = search.find(i, x) {
                found[i].push(sigma);
                gens = level_gens(&found);
                orbit = orbit_under(&gens.iter().collect::<Vec<_>>(), b, n);
            }
        }
    }
    let mut out: Vec<Permutation> = known.to_vec();
    out.extend(found.into_iter().rev().flatten());
    Ok(out)
}

/// `G^(2)`, the largest subgroup of `Sym(n)` with the same orbitals as `G`.
pub fn two_closure(group: &PermGroup, degree_cap: usize) -> Result<PermGroup> {
    if group.degree() > degree_cap {
        return Err(Error::DegreeCapExceeded { degree: group.degree(), cap: degree_cap });
    }
    let coloring = orbitals(group);
    let gens = color_automorphisms(&coloring, group.generators())?;
    PermGroup::from_generators(group.degree(), gens)
}

/// `G = G^(2)`. Decided by membership, so it works even when the closure's
/// order overflows.
pub fn is_2_closed(group: &PermGroup, degree_cap: usize) -> Result<bool> {
    let closure = two_closure(group, degree_cap)?;
    closure.is_subgroup_of(group)
}
