//! Labeled comb posets and their linear extensions.

use std::collections::BTreeSet;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::perm::Permutation;
use crate::{Count, Error, Result};

/// A poset on labels `1..=n` presented by its Hasse diagram. A cover pair
/// `(a, b)` means `a` is covered by `b`. The strict order is the transitive
/// closure of the covers, stored as a matrix at construction time.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledPoset {
    n: u32,
    covers: BTreeSet<(u32, u32)>,
    less: Vec<Vec<bool>>,
}

impl std::fmt::Debug for LabeledPoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LabeledPoset")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct PosetRepr {
    n: u32,
    covers: Vec<(u32, u32)>,
}

impl Serialize for LabeledPoset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PosetRepr {
            n: self.n,
            covers: self.covers.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledPoset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PosetRepr::deserialize(deserializer)?;
        LabeledPoset::from_covers(repr.n, repr.covers).map_err(serde::de::Error::custom)
    }
}

impl LabeledPoset {
    /// Build a poset from explicit cover pairs, rejecting cycles and covers
    /// implied by the transitive closure of the others.
    pub fn from_covers(n: u32, covers: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroParameter { name: "n" });
        }
        let covers: BTreeSet<(u32, u32)> = covers.into_iter().collect();
        for &(a, b) in &covers {
            if a == b {
                return Err(Error::SelfCover(a, b));
            }
            for label in [a, b] {
                if label == 0 || label > n {
                    return Err(Error::LabelOutOfRange { label, n });
                }
            }
        }
        let less = closure(n as usize, &covers)?;
        // Irredundancy: no cover may factor through an intermediate element.
        for &(a, b) in &covers {
            let ai = a as usize - 1;
            let bi = b as usize - 1;
            for (c, row) in less.iter().enumerate() {
                if less[ai][c] && row[bi] {
                    return Err(Error::RedundantCover(a, b));
                }
            }
        }
        Ok(LabeledPoset { n, covers, less })
    }

    /// The alpha-labeled comb: element `e_{i,j}` gets label `(j-1)s + i`.
    pub fn comb_alpha(s: u32, t: u32) -> Result<Self> {
        let covers = comb_covers(s, t, |i, j| (j - 1) * s + i)?;
        Self::from_covers(s * t, covers)
    }

    /// The beta-labeled comb: element `e_{i,j}` gets label `(i-1)t + j`.
    pub fn comb_beta(s: u32, t: u32) -> Result<Self> {
        let covers = comb_covers(s, t, |i, j| (i - 1) * t + j)?;
        Self::from_covers(s * t, covers)
    }

    /// The uneven comb: `comb_alpha(s, ceil(n/s))` restricted to labels `<= n`.
    pub fn uneven_alpha(s: u32, n: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::ZeroParameter { name: "s" });
        }
        if n == 0 {
            return Err(Error::ZeroParameter { name: "n" });
        }
        let t = n.div_ceil(s);
        let covers = comb_covers(s, t, |i, j| (j - 1) * s + i)?;
        let covers: Vec<(u32, u32)> = covers.into_iter().filter(|&(a, b)| a <= n && b <= n).collect();
        Self::from_covers(n, covers)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn covers(&self) -> &BTreeSet<(u32, u32)> {
        &self.covers
    }

    /// Strict order: `a <_P b`.
    pub fn is_less(&self, a: u32, b: u32) -> bool {
        self.less[a as usize - 1][b as usize - 1]
    }

    /// True when `perm` is a permutation of `1..=n` in which `x` precedes `y`
    /// whenever `x <_P y`.
    pub fn is_linear_extension(&self, perm: &Permutation) -> bool {
        if perm.len() as u32 != self.n || !perm.is_standard() {
            return false;
        }
        let mut pos = vec![0usize; self.n as usize + 1];
        for (i, &e) in perm.entries().iter().enumerate() {
            pos[e as usize] = i;
        }
        self.covers.iter().all(|&(a, b)| pos[a as usize] < pos[b as usize])
    }

    /// Every label has at most one lower cover, so the Hasse diagram is a
    /// forest rooted at the minimal elements.
    pub fn is_forest(&self) -> bool {
        let mut lower = vec![0u32; self.n as usize + 1];
        for &(_, b) in &self.covers {
            lower[b as usize] += 1;
            if lower[b as usize] > 1 {
                return false;
            }
        }
        true
    }

    /// Visit every linear extension in lexicographic order; returns the count.
    pub fn enumerate_linear_extensions<F: FnMut(&Permutation)>(
        &self,
        cap: usize,
        mut visit: F,
    ) -> Result<Count> {
        if self.n as usize > cap {
            return Err(Error::SizeCap { n: self.n, cap });
        }
        let n = self.n as usize;
        // pending[b] = number of lower covers of b not yet placed
        let mut pending = vec![0u32; n + 1];
        let mut above: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for &(a, b) in &self.covers {
            pending[b as usize] += 1;
            above[a as usize].push(b);
        }
        let mut used = vec![false; n + 1];
        let mut prefix: Vec<u32> = Vec::with_capacity(n);
        let mut count: u64 = 0;

        fn rec<F: FnMut(&Permutation)>(
            n: usize,
            pending: &mut Vec<u32>,
            above: &Vec<Vec<u32>>,
            used: &mut Vec<bool>,
            prefix: &mut Vec<u32>,
            count: &mut u64,
            visit: &mut F,
        ) {
            if prefix.len() == n {
                *count += 1;
                let perm = Permutation::new(prefix.clone())
                    .expect("prefix entries are distinct by construction");
                visit(&perm);
                return;
            }
            for label in 1..=n as u32 {
                if used[label as usize] || pending[label as usize] > 0 {
                    continue;
                }
                used[label as usize] = true;
                prefix.push(label);
                for &b in &above[label as usize] {
                    pending[b as usize] -= 1;
                }
                rec(n, pending, above, used, prefix, count, visit);
                for &b in &above[label as usize] {
                    pending[b as usize] += 1;
                }
                prefix.pop();
                used[label as usize] = false;
            }
        }
        rec(n, &mut pending, &above, &mut used, &mut prefix, &mut count, &mut visit);
        Ok(Count::from(count))
    }

    /// All linear extensions, in lexicographic order.
    pub fn linear_extensions(&self, cap: usize) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.enumerate_linear_extensions(cap, |p| out.push(p.clone()))?;
        Ok(out)
    }

    /// Knuth's hook formula for forests: `e(P) = n! / prod d(x)` where
    /// `d(x) = |{y : y >= x}|`.
    pub fn count_extensions_hook(&self) -> Result<Count> {
        if !self.is_forest() {
            return Err(Error::NotForest);
        }
        let n = self.n as usize;
        let mut numerator = Count::one();
        for i in 2..=n {
            numerator *= i as u32;
        }
        let mut denominator = Count::one();
        for x in 0..n {
            let d = 1 + self.less[x].iter().filter(|&&b| b).count();
            denominator *= d as u32;
        }
        let (q, r) = num_integer::Integer::div_rem(&numerator, &denominator);
        if r != Count::ZERO {
            return Err(Error::Internal("hook product does not divide n!".into()));
        }
        Ok(q)
    }
}

fn comb_covers(s: u32, t: u32, label: impl Fn(u32, u32) -> u32) -> Result<Vec<(u32, u32)>> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if t == 0 {
        return Err(Error::ZeroParameter { name: "t" });
    }
    let mut covers = Vec::new();
    for i in 1..s {
        covers.push((label(i, 1), label(i + 1, 1)));
    }
    for i in 1..=s {
        for j in 1..t {
            covers.push((label(i, j), label(i, j + 1)));
        }
    }
    Ok(covers)
}

fn closure(n: usize, covers: &BTreeSet<(u32, u32)>) -> Result<Vec<Vec<bool>>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in covers {
        adj[a as usize - 1].push(b as usize - 1);
    }
    let mut less = vec![vec![false; n]; n];
    for (start, row) in less.iter_mut().enumerate() {
        let mut stack = vec![start];
        let mut seen = vec![false; n];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    if w == start {
                        return Err(Error::Cyclic);
                    }
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    Ok(less)
}
