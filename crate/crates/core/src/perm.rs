//! Permutations, pattern containment, classical statistics, and the
//! brute-force pattern-avoiding-extension oracle.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::poset::LabeledPoset;
use crate::{Count, Error, Result};

/// A sequence of distinct positive integers. The ground set is not required
/// to be an initial segment; `flatten` relabels to `1..=m` when needed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", strs.join(" "))
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<u32>::deserialize(deserializer)?;
        Permutation::new(entries).map_err(serde::de::Error::custom)
    }
}

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::ZeroEntry);
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEntry);
        }
        Ok(Permutation { entries })
    }

    pub fn empty() -> Self {
        Permutation { entries: Vec::new() }
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            entries: (1..=n).collect(),
        }
    }

    /// Parse a one-line pattern like "321" (single digits) or "3 2 1".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Vec<u32> = if s.contains(|c: char| c.is_whitespace() || c == ',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| Error::InvalidInput(format!("bad permutation entry {p:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d > 0)
                        .ok_or_else(|| Error::InvalidInput(format!("bad permutation digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// True when the entries form a permutation of `1..=n`.
    pub fn is_standard(&self) -> bool {
        let n = self.entries.len() as u32;
        self.entries.iter().all(|&e| e <= n)
    }

    /// Order-isomorphic relabeling onto `1..=m`.
    pub fn flatten(&self) -> Permutation {
        let mut sorted: Vec<u32> = self.entries.clone();
        sorted.sort_unstable();
        let entries = self
            .entries
            .iter()
            .map(|e| (sorted.binary_search(e).unwrap() + 1) as u32)
            .collect();
        Permutation { entries }
    }

    /// True iff some index subsequence is order-isomorphic to `pattern`.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k == 0 {
            return true;
        }
        if k > self.len() {
            return false;
        }
        if k == 3 {
            return self.contains3(pattern.entries[0], pattern.entries[1], pattern.entries[2]);
        }
        contains_backtrack(&self.entries, &pattern.entries)
    }

    // Length-3 patterns are the whole universe here, so they get a direct scan.
    fn contains3(&self, p1: u32, p2: u32, p3: u32) -> bool {
        let v = &self.entries;
        let n = v.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if (v[i] < v[j]) != (p1 < p2) {
                    continue;
                }
                for k in (j + 1)..n {
                    if (v[i] < v[k]) == (p1 < p3) && (v[j] < v[k]) == (p2 < p3) {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    pub fn avoids_all(&self, patterns: &[Permutation]) -> bool {
        patterns.iter().all(|p| self.avoids(p))
    }

    /// Entrywise `n + 1 - x`. Requires a permutation of `1..=n`.
    pub fn complement(&self) -> Result<Permutation> {
        if !self.is_standard() {
            return Err(Error::NotStandard);
        }
        let n = self.entries.len() as u32;
        Ok(Permutation {
            entries: self.entries.iter().map(|&e| n + 1 - e).collect(),
        })
    }

    pub fn reverse(&self) -> Permutation {
        let mut entries = self.entries.clone();
        entries.reverse();
        Permutation { entries }
    }

    /// `self` followed by `other` shifted up by `self.len()`. Both operands
    /// must be standard permutations.
    pub fn direct_sum(&self, other: &Permutation) -> Result<Permutation> {
        if !self.is_standard() || !other.is_standard() {
            return Err(Error::NotStandard);
        }
        let m = self.entries.len() as u32;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&e| m + e));
        Ok(Permutation { entries })
    }

    /// Entries smaller than everything to their left, as 1-based
    /// (position, value) pairs.
    pub fn left_to_right_minima(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut min = u32::MAX;
        for (i, &e) in self.entries.iter().enumerate() {
            if e < min {
                min = e;
                out.push((i + 1, e));
            }
        }
        out
    }

    /// Entries smaller than everything to their right.
    pub fn right_to_left_minima(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut min = u32::MAX;
        for (i, &e) in self.entries.iter().enumerate().rev() {
            if e < min {
                min = e;
                out.push((i + 1, e));
            }
        }
        out.reverse();
        out
    }

    /// Entries larger than everything to their left.
    pub fn left_to_right_maxima(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut max = 0;
        for (i, &e) in self.entries.iter().enumerate() {
            if e > max {
                max = e;
                out.push((i + 1, e));
            }
        }
        out
    }

    /// `sigma_i < sigma_{s+i}` for all valid `i`.
    pub fn is_s_stratified(&self, s: u32) -> bool {
        let s = s as usize;
        let v = &self.entries;
        (0..v.len().saturating_sub(s)).all(|i| v[i] < v[i + s])
    }

    /// The Simion-Schmidt map from 123-avoiders onto 132-avoiders: the
    /// left-to-right minima keep their values and positions, and every other
    /// position is filled left to right with the smallest unused value larger
    /// than the running minimum.
    pub fn simion_schmidt(&self) -> Result<Permutation> {
        if !self.is_standard() {
            return Err(Error::NotStandard);
        }
        if self.contains(&Permutation::parse("123").unwrap()) {
            return Err(Error::MustAvoid("123"));
        }
        let n = self.entries.len() as u32;
        let mut used = vec![false; n as usize + 1];
        let mut out = vec![0u32; self.entries.len()];
        let mut min = u32::MAX;
        for (i, &e) in self.entries.iter().enumerate() {
            if e < min {
                min = e;
                out[i] = e;
                used[e as usize] = true;
            }
        }
        let mut min = u32::MAX;
        for slot in out.iter_mut() {
            if *slot != 0 {
                min = *slot;
                continue;
            }
            let v = ((min + 1)..=n)
                .find(|&v| !used[v as usize])
                .ok_or_else(|| Error::Internal("simion_schmidt ran out of values".into()))?;
            used[v as usize] = true;
            *slot = v;
        }
        Ok(Permutation { entries: out })
    }
}

// General-pattern containment by backtracking over increasing positions.
fn contains_backtrack(v: &[u32], pat: &[u32]) -> bool {
    fn rec(v: &[u32], pat: &[u32], chosen: &mut Vec<usize>) -> bool {
        let d = chosen.len();
        if d == pat.len() {
            return true;
        }
        let start = chosen.last().map_or(0, |&p| p + 1);
        'next: for i in start..v.len() {
            if v.len() - i < pat.len() - d {
                return false;
            }
            for (e, &j) in chosen.iter().enumerate() {
                if (v[j] < v[i]) != (pat[e] < pat[d]) {
                    continue 'next;
                }
            }
            chosen.push(i);
            if rec(v, pat, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(v, pat, &mut Vec::new())
}

/// A nonempty set of patterns, each a permutation of an initial segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Permutation>,
}

impl PatternSet {
    pub fn new(mut patterns: Vec<Permutation>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::InvalidInput("pattern set must be nonempty".into()));
        }
        for p in &patterns {
            if p.is_empty() || !p.is_standard() {
                return Err(Error::BadPattern);
            }
        }
        patterns.sort();
        patterns.dedup();
        Ok(PatternSet { patterns })
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self
            .patterns
            .iter()
            .map(|p| p.entries().iter().map(|e| e.to_string()).collect())
            .collect();
        write!(f, "{}", strs.join(","))
    }
}

/// Ground-truth oracle: enumerate every linear extension of `p` and count the
/// ones avoiding all patterns in `pats`. Enumeration is unpruned by design;
/// the closed forms are the fast path.
pub fn count_avoiding_extensions(
    p: &LabeledPoset,
    pats: &PatternSet,
    cap: usize,
) -> Result<Count> {
    let mut count = Count::ZERO;
    p.enumerate_linear_extensions(cap, |pi| {
        if pi.avoids_all(pats.patterns()) {
            count += 1u32;
        }
    })?;
    Ok(count)
}

/// Like [`count_avoiding_extensions`] but collects the surviving extensions.
pub fn avoiding_extensions(
    p: &LabeledPoset,
    pats: &PatternSet,
    cap: usize,
) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    p.enumerate_linear_extensions(cap, |pi| {
        if pi.avoids_all(pats.patterns()) {
            out.push(pi.clone());
        }
    })?;
    Ok(out)
}

/// Enumerate the permutations of `ground` avoiding all of `patterns`,
/// pruning prefixes as soon as they contain a pattern.
pub fn for_each_avoiding_perm<F: FnMut(&[u32])>(
    ground: &[u32],
    patterns: &[Permutation],
    mut visit: F,
) {
    let mut prefix: Vec<u32> = Vec::with_capacity(ground.len());
    let mut used = vec![false; ground.len()];
    rec_avoiders(ground, patterns, &mut prefix, &mut used, &mut visit);
}

fn rec_avoiders<F: FnMut(&[u32])>(
    ground: &[u32],
    patterns: &[Permutation],
    prefix: &mut Vec<u32>,
    used: &mut Vec<bool>,
    visit: &mut F,
) {
    if prefix.len() == ground.len() {
        visit(prefix);
        return;
    }
    for i in 0..ground.len() {
        if used[i] {
            continue;
        }
        prefix.push(ground[i]);
        // Any new occurrence must end at the entry just appended.
        if !patterns.iter().any(|p| occurrence_ending_at_last(prefix, p.entries())) {
            used[i] = true;
            rec_avoiders(ground, patterns, prefix, used, visit);
            used[i] = false;
        }
        prefix.pop();
    }
}

fn occurrence_ending_at_last(v: &[u32], pat: &[u32]) -> bool {
    let k = pat.len();
    if v.len() < k {
        return false;
    }
    let last = v.len() - 1;
    if k == 3 {
        for i in 0..last {
            for j in (i + 1)..last {
                if (v[i] < v[j]) == (pat[0] < pat[1])
                    && (v[i] < v[last]) == (pat[0] < pat[2])
                    && (v[j] < v[last]) == (pat[1] < pat[2])
                {
                    return true;
                }
            }
        }
        return false;
    }
    // General case: fix the last pattern entry at the end and backtrack the rest.
    fn rec(v: &[u32], pat: &[u32], last: usize, chosen: &mut Vec<usize>) -> bool {
        let d = chosen.len();
        if d == pat.len() - 1 {
            return chosen
                .iter()
                .enumerate()
                .all(|(e, &j)| (v[j] < v[last]) == (pat[e] < pat[pat.len() - 1]));
        }
        let start = chosen.last().map_or(0, |&p| p + 1);
        'next: for i in start..last {
            for (e, &j) in chosen.iter().enumerate() {
                if (v[j] < v[i]) != (pat[e] < pat[d]) {
                    continue 'next;
                }
            }
            chosen.push(i);
            if rec(v, pat, last, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(v, pat, last, &mut Vec::new())
}

/// |X_0(k, m)|: 231-avoiding permutations of S_m with first entry m and
/// k-th entry 1, counted by exhaustion.
pub fn x0_count_brute(k: u32, m: u32, cap: usize) -> Result<Count> {
    if k == 0 || m == 0 {
        return Err(Error::ZeroParameter { name: "k/m" });
    }
    if m as usize > cap {
        return Err(Error::SizeCap { n: m, cap });
    }
    if k > m {
        return Ok(Count::ZERO);
    }
    let ground: Vec<u32> = (1..=m).collect();
    let pat = Permutation::parse("231").unwrap();
    let mut count: u64 = 0;
    for_each_avoiding_perm(&ground, std::slice::from_ref(&pat), |p| {
        if p[0] == m && p[k as usize - 1] == 1 {
            count += 1;
        }
    });
    Ok(Count::from(count))
}

/// u(l, n): 123-avoiding permutations of S_n with the entry n in position l.
pub fn u_count_brute(l: u32, n: u32, cap: usize) -> Result<Count> {
    if l == 0 || n == 0 {
        return Err(Error::ZeroParameter { name: "l/n" });
    }
    if n as usize > cap {
        return Err(Error::SizeCap { n, cap });
    }
    if l > n {
        return Ok(Count::ZERO);
    }
    let ground: Vec<u32> = (1..=n).collect();
    let pat = Permutation::parse("123").unwrap();
    let mut count: u64 = 0;
    for_each_avoiding_perm(&ground, std::slice::from_ref(&pat), |p| {
        if p[l as usize - 1] == n {
            count += 1;
        }
    });
    Ok(Count::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    // Independent all-subsequences containment check for cross-validation.
    fn contains_naive(perm: &Permutation, pat: &Permutation) -> bool {
        fn combos(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().map_or(0, |&c| c + 1);
            for i in start..n {
                cur.push(i);
                combos(n, k, cur, out);
                cur.pop();
            }
        }
        let v = perm.entries();
        let q = pat.entries();
        let mut all = Vec::new();
        combos(v.len(), q.len(), &mut Vec::new(), &mut all);
        all.iter().any(|idx| {
            (0..q.len()).all(|a| (0..q.len()).all(|b| (v[idx[a]] < v[idx[b]]) == (q[a] < q[b])))
        })
    }

    #[test]
    fn containment_worked_examples() {
        assert!(!p("12364758").contains(&p("321")));
        assert!(!Permutation::identity(8).contains(&p("21")));
        assert!(!p("123846579").contains(&p("231")));
        assert!(p("123846579").contains(&p("321")));
    }

    #[test]
    fn containment_matches_naive_small() {
        let pats: Vec<Permutation> =
            ["123", "132", "213", "231", "312", "321", "1234", "2413", "3142"]
                .iter()
                .map(|s| p(s))
                .collect();
        let ground: Vec<u32> = (1..=6).collect();
        for_each_avoiding_perm(&ground, &[], |perm| {
            let perm = Permutation::new(perm.to_vec()).unwrap();
            for pat in &pats {
                assert_eq!(perm.contains(pat), contains_naive(&perm, pat), "{perm} vs {pat}");
            }
        });
    }

    #[test]
    fn complement_reverse_examples() {
        assert_eq!(p("132").complement().unwrap(), p("312"));
        assert_eq!(p("123").reverse(), p("321"));
        // reverse and complement commute
        assert_eq!(
            p("231").reverse().complement().unwrap(),
            p("231").complement().unwrap().reverse()
        );
        assert_eq!(p("231").complement().unwrap(), p("213"));
        assert!(p("57").complement().is_err());
    }

    #[test]
    fn minima_maxima() {
        let rlm = p("12364758").right_to_left_minima();
        let values: Vec<u32> = rlm.iter().map(|&(_, v)| v).collect();
        assert_eq!(values, vec![1, 2, 3, 4, 5, 8]);

        let id = Permutation::identity(5);
        assert_eq!(id.right_to_left_minima().len(), 5);
        assert_eq!(id.left_to_right_minima(), vec![(1, 1)]);

        let dec = p("54321");
        assert_eq!(dec.left_to_right_minima().len(), 5);
        assert_eq!(dec.left_to_right_maxima(), vec![(1, 5)]);
    }

    #[test]
    fn stratified() {
        assert!(p("321").is_s_stratified(3));
        assert!(p("321").is_s_stratified(4));
        assert!(!p("21").is_s_stratified(1));
        assert!(p("12").is_s_stratified(1));
    }

    #[test]
    fn simion_schmidt_basics() {
        assert_eq!(p("1").simion_schmidt().unwrap(), p("1"));
        assert_eq!(p("321").simion_schmidt().unwrap(), p("321"));
        assert!(p("123").simion_schmidt().is_err());
    }

    #[test]
    fn simion_schmidt_bijection_small() {
        let pat123 = p("123");
        let pat132 = p("132");
        for n in 1..=7u32 {
            let ground: Vec<u32> = (1..=n).collect();
            let mut images = std::collections::BTreeSet::new();
            let mut avoiders132 = std::collections::BTreeSet::new();
            let mut count123 = 0usize;
            for_each_avoiding_perm(&ground, std::slice::from_ref(&pat123), |q| {
                count123 += 1;
                let q = Permutation::new(q.to_vec()).unwrap();
                let img = q.simion_schmidt().unwrap();
                assert!(img.avoids(&pat132));
                assert_eq!(q.left_to_right_minima(), img.left_to_right_minima());
                images.insert(img);
            });
            for_each_avoiding_perm(&ground, std::slice::from_ref(&pat132), |q| {
                avoiders132.insert(Permutation::new(q.to_vec()).unwrap());
            });
            assert_eq!(images.len(), count123);
            assert_eq!(images, avoiders132);
        }
    }

    // Conjugated bijection: 123-avoiders with (k-1)-th entry n map
    // bijectively onto 231-avoiders with (k-1)-th entry 1.
    #[test]
    fn conjugated_bijection_small() {
        let pat123 = p("123");
        let pat231 = p("231");
        for n in 2..=6u32 {
            for k in 2..=n {
                let ground: Vec<u32> = (1..=n).collect();
                let mut images = std::collections::BTreeSet::new();
                let mut sources = 0usize;
                for_each_avoiding_perm(&ground, std::slice::from_ref(&pat123), |q| {
                    if q[(k - 2) as usize] != n {
                        return;
                    }
                    sources += 1;
                    let q = Permutation::new(q.to_vec()).unwrap();
                    let img = q
                        .complement()
                        .unwrap()
                        .reverse()
                        .simion_schmidt()
                        .unwrap()
                        .reverse();
                    assert!(img.avoids(&pat231));
                    assert_eq!(img.entries()[(k - 2) as usize], 1);
                    images.insert(img);
                });
                let mut targets = 0usize;
                for_each_avoiding_perm(&ground, std::slice::from_ref(&pat231), |q| {
                    if q[(k - 2) as usize] == 1 {
                        targets += 1;
                    }
                });
                assert_eq!(images.len(), sources);
                assert_eq!(sources, targets, "n={n} k={k}");
            }
        }
    }

    // In a 321-avoider the non-right-to-left-minima increase left to right.
    #[test]
    fn non_minima_increase_in_321_avoiders() {
        let pat321 = p("321");
        for n in 1..=7u32 {
            let ground: Vec<u32> = (1..=n).collect();
            for_each_avoiding_perm(&ground, std::slice::from_ref(&pat321), |q| {
                let q = Permutation::new(q.to_vec()).unwrap();
                let minima: std::collections::BTreeSet<u32> =
                    q.right_to_left_minima().iter().map(|&(_, v)| v).collect();
                let rest: Vec<u32> = q
                    .entries()
                    .iter()
                    .copied()
                    .filter(|v| !minima.contains(v))
                    .collect();
                assert!(rest.windows(2).all(|w| w[0] < w[1]));
            });
        }
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(p("1").direct_sum(&p("1")).unwrap(), p("12"));
        assert_eq!(p("21").direct_sum(&p("21")).unwrap(), p("2143"));
        assert!(p("57").direct_sum(&p("1")).is_err());
    }

    #[test]
    fn x0_and_u_counts() {
        assert_eq!(x0_count_brute(1, 1, 12).unwrap(), Count::from(1u32));
        assert_eq!(x0_count_brute(5, 3, 12).unwrap(), Count::ZERO);
        assert_eq!(u_count_brute(1, 1, 12).unwrap(), Count::from(1u32));
        // |X_0(k, m)| = u(k-1, m-1)
        for m in 2..=8u32 {
            for k in 2..=m {
                assert_eq!(
                    x0_count_brute(k, m, 12).unwrap(),
                    u_count_brute(k - 1, m - 1, 12).unwrap(),
                    "k={k} m={m}"
                );
            }
        }
    }

    #[test]
    fn flatten_and_patterns_on_general_ground_sets() {
        let q = Permutation::new(vec![8, 6, 7, 9]).unwrap();
        assert_eq!(q.flatten(), p("3124"));
        assert!(q.contains(&p("312")));
        assert!(q.avoids(&p("231")));
    }

    #[test]
    fn serde_json_roundtrip() {
        let q = p("3124");
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[3,1,2,4]");
        let back: Permutation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
