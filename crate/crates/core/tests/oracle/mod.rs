//! Naive reference computations on raw image vectors.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use pga_core::{PermGroup, Permutation};

pub type Img = Vec<u8>;

pub fn images(p: &Permutation) -> Img {
    p.images().map(|x| x as u8).collect()
}

pub fn gens(g: &PermGroup) -> Vec<Img> {
    g.generators().iter().map(images).collect()
}

/// Apply `a`, then `b`.
pub fn then(a: &[u8], b: &[u8]) -> Img {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn identity(n: usize) -> Img {
    (0..n as u8).collect()
}

/// Every element reachable from the identity by right multiplication with generators.
pub fn closure(n: usize, gens: &[Img]) -> HashSet<Img> {
    let mut seen = HashSet::from([identity(n)]);
    let mut queue = VecDeque::from([identity(n)]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = then(&x, s);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn all_perms(n: usize) -> Vec<Img> {
    fn rec(prefix: &mut Img, used: &mut [bool], out: &mut Vec<Img>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Orbit label of every ordered pair `(i, j)`, stored at `i * n + j`.
pub fn orbital_labels(n: usize, gens: &[Img]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n * n];
    let mut next = 0;
    for start in 0..n * n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            let (i, j) = (k / n, k % n);
            for s in gens {
                let m = s[i] as usize * n + s[j] as usize;
                if label[m] == usize::MAX {
                    label[m] = next;
                    stack.push(m);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn rank(n: usize, gens: &[Img]) -> usize {
    orbital_labels(n, gens).into_iter().collect::<HashSet<_>>().len()
}

pub fn preserves_labels(n: usize, label: &[usize], p: &[u8]) -> bool {
    (0..n).all(|i| (0..n).all(|j| label[i * n + j] == label[p[i] as usize * n + p[j] as usize]))
}

/// Every permutation of `0..n` mapping each orbital onto itself.
pub fn brute_two_closure(n: usize, gens: &[Img]) -> HashSet<Img> {
    let label = orbital_labels(n, gens);
    all_perms(n).into_iter().filter(|p| preserves_labels(n, &label, p)).collect()
}

pub fn fixed(p: &[u8]) -> usize {
    p.iter().enumerate().filter(|&(i, &x)| i == x as usize).count()
}

pub fn to_perm(p: &[u8]) -> Permutation {
    Permutation::from_images(&p.iter().map(|&x| x as usize).collect::<Vec<_>>()).unwrap()
}
