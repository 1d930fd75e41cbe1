//! Permutations of the dense point set `0..degree`.
//!
//! Composition acts left to right: `(a * b)(x) = b(a(x))`, so `x^(ab) = (x^a)^b`.

use std::fmt;
use std::ops::Mul;

use crate::arith::lcm;
use crate::error::{Error, Result};

/// Largest supported degree. Points are stored as `u8`.
pub const MAX_DEGREE: usize = 256;

/// A permutation stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

/// Multiset of cycle lengths (fixed points count as 1-cycles), sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn count(&self, len: usize) -> usize {
        self.0.iter().filter(|&&l| l == len).count()
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        Err(Error::InvalidDegree(n))
    } else {
        Ok(())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self::identity_unchecked(n))
    }

    pub(crate) fn identity_unchecked(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| i as u8).collect() }
    }

    /// Builds a permutation from `images[i] = image of i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(Error::NotABijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.iter().map(|&x| x as u8).collect() })
    }

    /// Builds a permutation from a list of disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        check_degree(degree)?;
        let mut images: Vec<u8> = (0..degree).map(|i| i as u8).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p >= degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if used[p] {
                    return Err(Error::RepeatedPoint(p));
                }
                used[p] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(k + 1) % cycle.len()] as u8;
            }
        }
        Ok(Permutation { images: images.into_boxed_slice() })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `point`. Panics if `point >= degree`.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Checked composition, `a` first then `b`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv.into_boxed_slice() }
    }

    /// Conjugate `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        &(&other.inverse() * self) * other
    }

    /// Commutator `a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        &(&(&self.inverse() * &other.inverse()) * self) * other
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Self::identity_unchecked(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// All cycles, including fixed points as 1-cycles, each starting at its
    /// least element and ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lengths)
    }

    /// Least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) == i).collect()
    }

    pub fn num_fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i == x as usize).count()
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        (0..self.degree()).find(|&i| self.apply(i) != i)
    }

    /// True iff all cycles (fixed points included) have the same length.
    pub fn is_semiregular(&self) -> bool {
        let ct = self.cycle_type();
        ct.lengths().windows(2).all(|w| w[0] == w[1])
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        check_degree(degree)?;
        let cycles = parse_cycle_list(text)?;
        Permutation::from_cycles(degree, &cycles)
    }

    /// Canonical cycle notation: 1-cycles omitted, identity rendered `()`.
    pub fn format_cycles(&self) -> String {
        self.to_string()
    }
}

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>> {
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: &str| Error::MalformedSyntax { pos, msg: msg.to_string() };
    let mut cycles = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(i, "empty permutation"));
    }
    let mut saw_identity = false;
    while i < bytes.len() {
        if bytes[i] != b'(' {
            return Err(err(i, "expected `(`"));
        }
        let open = i;
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            match bytes.get(i) {
                None => return Err(err(i, "unterminated cycle")),
                Some(b')') => {
                    i += 1;
                    break;
                }
                Some(c) if c.is_ascii_digit() => {
                    if !cycle.is_empty() && !bytes[i - 1].is_ascii_whitespace() {
                        return Err(err(i, "points must be separated by spaces"));
                    }
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let p: usize = text[start..i].parse().map_err(|_| err(start, "point too large"))?;
                    cycle.push(p);
                }
                Some(_) => return Err(err(i, "unexpected character")),
            }
        }
        match cycle.len() {
            0 => saw_identity = true,
            1 => return Err(err(open, "a cycle needs at least two points")),
            _ => cycles.push(cycle),
        }
        skip_ws(&mut i);
    }
    if saw_identity && (!cycles.is_empty() || text.matches('(').count() > 1) {
        return Err(err(0, "`()` must stand alone"));
    }
    Ok(cycles)
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Left-to-right product. Both operands must share a degree.
    #[inline]
    fn mul(self, rhs: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation { images: self.images.iter().map(|&x| rhs.images[x as usize]).collect() }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self, self.degree())
    }
}
