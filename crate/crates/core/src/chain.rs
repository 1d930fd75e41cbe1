//! Base and strong generating set built by deterministic Schreier-Sims.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
pub struct Level {
    base_point: usize,
    /// Strong generators fixing all earlier base points.
    generators: Vec<Permutation>,
    /// `transversal[x]` maps `base_point` to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut level = Level { base_point, generators: Vec::new(), transversal: Vec::new(), orbit: Vec::new() };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[self.base_point] = Some(Permutation::identity_unchecked(degree));
        let mut orbit = vec![self.base_point];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for s in &self.generators {
                let y = s.apply(x);
                if transversal[y].is_none() {
                    let rep = transversal[x].as_ref().expect("orbit point has a representative");
                    transversal[y] = Some(rep * s);
                    orbit.push(y);
                }
            }
        }
        self.transversal = transversal;
        self.orbit = orbit;
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Basic orbit in discovery order (base point first).
    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn representative(&self, point: usize) -> Option<&Permutation> {
        self.transversal.get(point).and_then(Option::as_ref)
    }
}

/// A stabilizer chain `G = G_0 > G_1 > ... > G_k = 1`.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Runs Schreier-Sims on `generators`. Points in `base_prefix` become the
    /// first base points, in order; further base points are chosen as the least
    /// point moved by the generator that needs them.
    pub fn build(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        for &b in base_prefix {
            if b >= degree {
                return Err(Error::PointOutOfRange { point: b, degree });
            }
        }
        let mut chain = StabilizerChain { degree, levels: Vec::new() };
        for &b in base_prefix {
            if !chain.levels.iter().any(|l| l.base_point == b) {
                chain.levels.push(Level::new(degree, b));
            }
        }
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if chain.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let b = g.first_moved_point().expect("non-identity");
                chain.levels.push(Level::new(degree, b));
            }
        }
        for g in generators.iter().filter(|g| !g.is_identity()) {
            let depth = chain.fixed_prefix_len(g).min(chain.levels.len() - 1);
            for level in &mut chain.levels[..=depth] {
                if !level.generators.contains(g) {
                    level.generators.push(g.clone());
                }
            }
        }
        for level in &mut chain.levels {
            level.rebuild(degree);
        }
        chain.complete();
        Ok(chain)
    }

    /// Number of leading base points fixed by `g`.
    fn fixed_prefix_len(&self, g: &Permutation) -> usize {
        self.levels.iter().take_while(|l| g.apply(l.base_point) == l.base_point).count()
    }

    fn complete(&mut self) {
        let n = self.degree;
        let mut i = self.levels.len();
        while i > 0 {
            let level = i - 1;
            match self.find_failing_schreier_generator(level) {
                None => i -= 1,
                Some((residue, drop)) => {
                    if drop == self.levels.len() {
                        let b = residue.first_moved_point().expect("non-identity residue");
                        self.levels.push(Level::new(n, b));
                    }
                    for l in &mut self.levels[level + 1..=drop] {
                        l.generators.push(residue.clone());
                        l.rebuild(n);
                    }
                    i = drop + 1;
                }
            }
        }
    }

    fn find_failing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &x in &lv.orbit {
            let ux = lv.representative(x).expect("orbit point");
            for s in &lv.generators {
                let y = s.apply(x);
                let uy = lv.representative(y).expect("orbit is closed");
                let prod = ux * s;
                if &prod == uy {
                    continue;
                }
                let h = &prod * &uy.inverse();
                let (residue, drop) = self.sift_from(&h, level + 1);
                if !residue.is_identity() || drop < self.levels.len() {
                    return Some((residue, drop));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut g = g.clone();
        for (k, level) in self.levels.iter().enumerate().skip(from) {
            let y = g.apply(level.base_point);
            match level.representative(y) {
                None => return (g, k),
                Some(u) => g = &g * &u.inverse(),
            }
        }
        let len = self.levels.len();
        (g, len)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Product of basic orbit lengths, with overflow reported.
    pub fn order(&self) -> Result<u64> {
        self.levels.iter().try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64)).ok_or(Error::OrderOverflow)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, drop) = self.sift_from(g, 0);
        drop == self.levels.len() && residue.is_identity()
    }

    /// The chain for the pointwise stabilizer of the first `k` base points.
    pub fn tail(&self, k: usize) -> StabilizerChain {
        StabilizerChain { degree: self.degree, levels: self.levels[k.min(self.levels.len())..].to_vec() }
    }

    /// Strong generators of the stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> &[Permutation] {
        self.levels.get(k).map_or(&[], |l| l.generators.as_slice())
    }
}

/// Iterator over all group elements as products of transversal elements.
///
/// Every element factors uniquely as `t_{k-1} * ... * t_1 * t_0` with
/// `t_i` from the transversal of level `i`.
pub struct Elements<'a> {
    chain: &'a StabilizerChain,
    digits: Vec<usize>,
    /// `partial[i] = t_{k-1} * ... * t_i`; `partial[k]` is the identity.
    partial: Vec<Permutation>,
    done: bool,
}

impl<'a> Elements<'a> {
    pub(crate) fn new(chain: &'a StabilizerChain) -> Self {
        let k = chain.levels.len();
        let mut it = Elements {
            chain,
            digits: vec![0; k],
            partial: vec![Permutation::identity_unchecked(chain.degree); k + 1],
            done: false,
        };
        it.recompute_from(k);
        it
    }

    fn rep(&self, level: usize) -> &Permutation {
        let l = &self.chain.levels[level];
        l.representative(l.orbit[self.digits[level]]).expect("orbit point")
    }

    // Recompute partial products for levels below `top`.
    fn recompute_from(&mut self, top: usize) {
        for i in (0..top).rev() {
            self.partial[i] = &self.partial[i + 1] * self.rep(i);
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = self.partial[0].clone();
        // Advance the mixed-radix counter, least significant digit = level 0.
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.chain.levels[i].orbit.len() {
                self.recompute_from(i + 1);
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}
