//! Closed forms, recurrences, and constructive bijections for the
//! pattern-avoiding linear-extension counts, in exact arithmetic.
//!
//! Memo tables are process-wide and grow monotonically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_traits::{CheckedSub, One};
use serde::Serialize;

use crate::perm::{count_avoiding_extensions, PatternSet, Permutation};
use crate::poset::LabeledPoset;
use crate::series::{catalan_series, TruncatedSeries};
use crate::{Count, Error, Result};

/// Binomial coefficient with the `k > n` convention of zero.
pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return Count::ZERO;
    }
    num_integer::binomial(Count::from(n), Count::from(k))
}

fn pow2(e: u64) -> Count {
    Count::one() << e as usize
}

// memoized rows of the various integer recurrences, keyed by their parameters
type RowTable<K> = LazyLock<Mutex<HashMap<K, Vec<Count>>>>;

static CATALAN: LazyLock<Mutex<Vec<Count>>> = LazyLock::new(|| Mutex::new(vec![Count::one()]));

/// The m-th Catalan number.
pub fn catalan(m: u64) -> Count {
    let mut table = CATALAN.lock().unwrap();
    while table.len() as u64 <= m {
        let n = table.len();
        let mut sum = Count::ZERO;
        for i in 0..n {
            sum += &table[i] * &table[n - 1 - i];
        }
        table.push(sum);
    }
    table[m as usize].clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    Alpha,
    Beta,
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Labeling::Alpha => write!(f, "alpha"),
            Labeling::Beta => write!(f, "beta"),
        }
    }
}

/// How a count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Recurrence,
    Series,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ClosedForm => write!(f, "closed-form"),
            Method::Recurrence => write!(f, "recurrence"),
            Method::Series => write!(f, "series"),
            Method::Oracle => write!(f, "oracle"),
        }
    }
}

/// Result of a dispatch: either an exact value or an explicit marker that no
/// formula applies and brute force is out of reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eval {
    Value { value: Count, method: Method },
    Unavailable,
}

impl Eval {
    fn value(value: Count, method: Method) -> Self {
        Eval::Value { value, method }
    }

    pub fn unwrap_value(self) -> Count {
        match self {
            Eval::Value { value, .. } => value,
            Eval::Unavailable => panic!("no value available"),
        }
    }
}

// The identity permutation is the unique extension of a chain; it avoids a
// pattern unless the pattern is itself increasing and fits.
fn chain_count(n: u32, patterns: &[Permutation]) -> Count {
    let avoided = patterns.iter().all(|p| {
        let increasing = p.entries().windows(2).all(|w| w[0] < w[1]);
        !(increasing && p.len() as u32 <= n)
    });
    if avoided {
        Count::one()
    } else {
        Count::ZERO
    }
}

fn oracle_eval(poset: &LabeledPoset, patterns: &[Permutation], cap: usize) -> Result<Eval> {
    if poset.n() as usize > cap {
        return Ok(Eval::Unavailable);
    }
    let pats = PatternSet::new(patterns.to_vec())?;
    let value = count_avoiding_extensions(poset, &pats, cap)?;
    Ok(Eval::value(value, Method::Oracle))
}

// ---------------------------------------------------------------------------
// A_231 on uneven alpha combs (initial band from the generating function,
// then the Catalan-weighted recurrence)
// ---------------------------------------------------------------------------

static A231: RowTable<u32> = LazyLock::new(Default::default);

fn a231_vec(s: u32, n_max: u32) -> Result<Vec<Count>> {
    let mut tables = A231.lock().unwrap();
    let vec = tables.entry(s).or_default();
    if vec.is_empty() {
        // Band s <= n < 2s: coefficient of x^s in (x C(x))^h C(x C(x)),
        // h = 2s - n.
        let order = s as usize;
        let c = catalan_series(order);
        let xc = TruncatedSeries::x(order).mul(&c);
        let mut cur = c.compose(&xc)?;
        let mut by_h: Vec<Count> = Vec::with_capacity(order + 1);
        by_h.push(cur.coeff_count(order)?); // h = 0, kept for cross-checks
        for _ in 1..=s {
            cur = cur.mul(&xc);
            by_h.push(cur.coeff_count(order)?);
        }
        for n in s..2 * s {
            vec.push(by_h[(2 * s - n) as usize].clone());
        }
    }
    while (vec.len() as u32) + s <= n_max {
        let n = vec.len() as u32 + s;
        debug_assert!(n >= 2 * s);
        let mut sum = Count::ZERO;
        for j in 1..=s.min(n.saturating_sub(s)) {
            sum += catalan(j as u64 - 1) * &vec[(n - j - s) as usize];
        }
        vec.push(sum);
    }
    Ok(vec.clone())
}

/// `A_231(U_{spine=s,n})`.
pub fn a231_uneven(s: u32, n: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if n < s {
        return Err(Error::OutOfRange(format!("uneven comb requires n >= s, got s={s} n={n}")));
    }
    Ok(a231_vec(s, n)?[(n - s) as usize].clone())
}

// ---------------------------------------------------------------------------
// A_312 on uneven alpha combs via the d_s table
// ---------------------------------------------------------------------------

static D_TABLE: RowTable<u32> = LazyLock::new(Default::default);

/// `d_s(k)`: `d_s(0) = 1`, `d_s(k) = 0` for `k < 0`, and
/// `d_s(k) = sum_{j=1}^{s} d_s(j-1) d_s(k-j)` otherwise.
pub fn d_value(s: u32, k: i64) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if k < 0 {
        return Ok(Count::ZERO);
    }
    let k = k as usize;
    let mut tables = D_TABLE.lock().unwrap();
    let vec = tables.entry(s).or_insert_with(|| vec![Count::one()]);
    while vec.len() <= k {
        let m = vec.len();
        let mut sum = Count::ZERO;
        for j in 1..=(s as usize).min(m) {
            sum += &vec[j - 1] * &vec[m - j];
        }
        vec.push(sum);
    }
    Ok(vec[k].clone())
}

/// `A_312(U_{spine=s,n}) = d_s(n - s + 1)`.
pub fn a312_uneven(s: u32, n: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if n < s {
        return Err(Error::OutOfRange(format!("uneven comb requires n >= s, got s={s} n={n}")));
    }
    d_value(s, (n - s + 1) as i64)
}

// ---------------------------------------------------------------------------
// The phi decomposition of 231-avoiding extensions into head/tail/positions
// ---------------------------------------------------------------------------

/// The triple image of a 231-avoiding extension of `U_{spine=s,2s-h}`:
/// the head block of large entries, the trailing block, and the window
/// positions holding the leftover spine labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTriple {
    pub head: Permutation,
    pub tail: Permutation,
    pub positions: BTreeSet<u32>,
}

pub fn decompose_231(pi: &Permutation, s: u32, h: u32) -> Result<PhiTriple> {
    if s < h + 1 {
        return Err(Error::OutOfRange(format!("decomposition needs s >= h + 1, got s={s} h={h}")));
    }
    let n = 2 * s - h;
    let poset = LabeledPoset::uneven_alpha(s, n)?;
    if !poset.is_linear_extension(pi) {
        return Err(Error::InvalidInput(format!(
            "{pi} is not a linear extension of the uneven comb (s={s}, n={n})"
        )));
    }
    if pi.contains(&Permutation::parse("231").unwrap()) {
        return Err(Error::MustAvoid("231"));
    }
    let sigma: Vec<u32> = pi.entries().iter().copied().filter(|&e| e > s).collect();
    let m = sigma[0] - s;
    let k = sigma
        .iter()
        .position(|&e| e == s + 1)
        .ok_or_else(|| Error::Internal("sigma is missing s+1".into()))? as u32
        + 1;
    if k > m || (m as usize) > sigma.len() {
        return Err(Error::Internal(format!("invalid block sizes k={k} m={m}")));
    }
    let head = Permutation::new(sigma[..m as usize].to_vec())?;
    let tail = Permutation::new(sigma[m as usize..].to_vec())?;
    let positions: BTreeSet<u32> = ((m + 1)..=(s + k))
        .filter(|&j| {
            let e = pi.entries()[j as usize - 1];
            e > m && e <= s
        })
        .collect();
    Ok(PhiTriple { head, tail, positions })
}

pub fn recompose_231(triple: &PhiTriple, s: u32, h: u32) -> Result<Permutation> {
    if s < h + 1 {
        return Err(Error::OutOfRange(format!("recomposition needs s >= h + 1, got s={s} h={h}")));
    }
    let n = 2 * s - h;
    let head = triple.head.entries();
    let m = head.len() as u32;
    if m == 0 || head[0] != s + m {
        return Err(Error::InvalidInput("head must start with its largest entry s+m".into()));
    }
    {
        let mut sorted = head.to_vec();
        sorted.sort_unstable();
        if sorted != ((s + 1)..=(s + m)).collect::<Vec<u32>>() {
            return Err(Error::InvalidInput("head must be a permutation of {s+1,...,s+m}".into()));
        }
    }
    let k = head
        .iter()
        .position(|&e| e == s + 1)
        .ok_or_else(|| Error::InvalidInput("head must contain s+1".into()))? as u32
        + 1;
    if triple.positions.len() as u32 != s - m
        || triple.positions.iter().any(|&j| j <= m || j > s + k)
    {
        return Err(Error::InvalidInput(
            "positions must be an (s-m)-subset of {m+1,...,s+k}".into(),
        ));
    }
    let mut out = vec![0u32; n as usize];
    for (i, slot) in out.iter_mut().take(m as usize).enumerate() {
        *slot = i as u32 + 1;
    }
    let mut spine_left = (m + 1)..=s;
    let mut head_iter = head[..k as usize].iter();
    for j in (m + 1)..=(s + k) {
        out[j as usize - 1] = if triple.positions.contains(&j) {
            spine_left
                .next()
                .ok_or_else(|| Error::Internal("ran out of spine labels".into()))?
        } else {
            *head_iter
                .next()
                .ok_or_else(|| Error::Internal("ran out of head entries".into()))?
        };
    }
    let rest: Vec<u32> = head[k as usize..]
        .iter()
        .chain(triple.tail.entries())
        .copied()
        .collect();
    if (s + k) as usize + rest.len() != n as usize {
        return Err(Error::InvalidInput("block lengths do not add up to 2s-h".into()));
    }
    out[(s + k) as usize..].copy_from_slice(&rest);
    let pi = Permutation::new(out)?;
    let poset = LabeledPoset::uneven_alpha(s, n)?;
    if !poset.is_linear_extension(&pi) || pi.contains(&Permutation::parse("231").unwrap()) {
        return Err(Error::InvalidInput(
            "triple does not recompose to a 231-avoiding linear extension".into(),
        ));
    }
    Ok(pi)
}

// ---------------------------------------------------------------------------
// Omega / Lambda machinery and A_321 on alpha combs with t = 2
// ---------------------------------------------------------------------------

/// Comb parameters together with a prescribed non-minima set
/// `W subset of {s+1, ..., st}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSpec {
    s: u32,
    t: u32,
    w: Vec<u32>,
}

impl OmegaSpec {
    pub fn new(s: u32, t: u32, w: Vec<u32>) -> Result<Self> {
        if s < 2 || t < 2 {
            return Err(Error::OutOfRange(format!("OmegaSpec requires s, t >= 2, got s={s} t={t}")));
        }
        if w.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidInput("W must be strictly increasing".into()));
        }
        if w.iter().any(|&x| x <= s || x > s * t) {
            return Err(Error::InvalidInput("W must lie in {s+1, ..., st}".into()));
        }
        Ok(OmegaSpec { s, t, w })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn w(&self) -> &[u32] {
        &self.w
    }

    // Per-coordinate window: w_l - s + l <= i_l <= w_l - 1 (1-based l).
    fn window(&self, l: usize) -> (i64, i64) {
        let w = self.w[l] as i64;
        (w - self.s as i64 + l as i64 + 1, w - 1)
    }
}

/// `|Omega_{s,t}(W)|`: strictly increasing index tuples within the windows.
pub fn omega_count(spec: &OmegaSpec) -> Count {
    let k = spec.w.len();
    if k == 0 {
        return Count::one();
    }
    let max_pos = (spec.s * spec.t) as i64;
    // prev[i] = ways to fill the first l coordinates with i_l = i
    let mut prev = vec![Count::ZERO; max_pos as usize + 1];
    let (lo, hi) = spec.window(0);
    for i in lo.max(1)..=hi.min(max_pos) {
        prev[i as usize] = Count::one();
    }
    for l in 1..k {
        let mut next = vec![Count::ZERO; max_pos as usize + 1];
        let (lo, hi) = spec.window(l);
        let mut below = Count::ZERO;
        for i in 1..=max_pos {
            below += &prev[i as usize - 1];
            if i >= lo && i <= hi {
                next[i as usize] = below.clone();
            }
        }
        prev = next;
    }
    prev.into_iter().sum()
}

/// All index tuples in `Omega_{s,t}(W)`, lexicographically.
pub fn omega_enumerate(spec: &OmegaSpec) -> Vec<Vec<u32>> {
    fn rec(spec: &OmegaSpec, l: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if l == spec.w.len() {
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = spec.window(l);
        let floor = cur.last().map_or(0, |&p| p as i64);
        for i in lo.max(floor + 1).max(1)..=hi {
            cur.push(i as u32);
            rec(spec, l + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(spec, 0, &mut Vec::new(), &mut out);
    out
}

/// Build `mu_W(I)`: place `w_l` at position `i_l` and fill the remaining
/// positions with `[st] \ W` in increasing order. The output is checked to be
/// a 321-avoiding linear extension of the alpha comb whose right-to-left
/// minima are exactly `[st] \ W`.
pub fn mu_build(spec: &OmegaSpec, index_set: &[u32]) -> Result<Permutation> {
    let k = spec.w.len();
    if index_set.len() != k {
        return Err(Error::InvalidInput("index set size must match |W|".into()));
    }
    if index_set.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidInput("index set must be strictly increasing".into()));
    }
    for (l, &i) in index_set.iter().enumerate() {
        let (lo, hi) = spec.window(l);
        if (i as i64) < lo || (i as i64) > hi {
            return Err(Error::InvalidInput(format!(
                "index {i} violates the window [{lo}, {hi}] for w_{}",
                l + 1
            )));
        }
    }
    let n = spec.s * spec.t;
    let mut out = vec![0u32; n as usize];
    for (l, &i) in index_set.iter().enumerate() {
        out[i as usize - 1] = spec.w[l];
    }
    let in_w: BTreeSet<u32> = spec.w.iter().copied().collect();
    let mut fill = (1..=n).filter(|x| !in_w.contains(x));
    for slot in out.iter_mut() {
        if *slot == 0 {
            *slot = fill
                .next()
                .ok_or_else(|| Error::Internal("mu_build ran out of fill values".into()))?;
        }
    }
    let mu = Permutation::new(out)?;
    let poset = LabeledPoset::comb_alpha(spec.s, spec.t)?;
    let minima: BTreeSet<u32> = mu.right_to_left_minima().iter().map(|&(_, v)| v).collect();
    let complement: BTreeSet<u32> = (1..=n).filter(|x| !in_w.contains(x)).collect();
    if mu.contains(&Permutation::parse("321").unwrap())
        || !poset.is_linear_extension(&mu)
        || minima != complement
    {
        return Err(Error::Internal(format!("mu_W(I) failed its Lambda membership check: {mu}")));
    }
    Ok(mu)
}

/// `A_321(K_{s,2}^alpha)` by summing `|Omega_{s,2}(W)|` over all
/// `W subset of {s+1, ..., 2s}` (the map onto Lambda is bijective at t = 2).
pub fn a321_alpha_spine2(s: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if s == 1 {
        return Ok(Count::one());
    }
    if s > 30 {
        return Err(Error::OutOfRange(format!("subset sum over 2^{s} subsets is impractical")));
    }
    let mut total = Count::ZERO;
    for mask in 0u64..(1u64 << s) {
        let w: Vec<u32> = (0..s).filter(|b| mask >> b & 1 == 1).map(|b| s + 1 + b).collect();
        let spec = OmegaSpec::new(s, 2, w)?;
        total += omega_count(&spec);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// A_321 on beta combs: F table, word encoding, and the main sum
// ---------------------------------------------------------------------------

static F_TABLE: RowTable<(u32, u32)> = LazyLock::new(Default::default);

// Row of F_{s,t}(k) for k in s..=(s-1)t+1, indexed by k - s.
fn f_row(s: u32, t: u32) -> Vec<Count> {
    if let Some(row) = F_TABLE.lock().unwrap().get(&(s, t)) {
        return row.clone();
    }
    let row: Vec<Count> = if s == 2 {
        // F_{2,t}(k) = 1 for 2 <= k <= t+1
        vec![Count::one(); t as usize]
    } else {
        let prev = f_row(s - 1, t);
        let k_max = (s - 1) * t + 1;
        (s..=k_max)
            .map(|k| {
                let j_min = (k as i64 - ((s - 2) * t) as i64 - 2).max(0) as u64;
                let mut sum = Count::ZERO;
                let i_hi = (k - 1).min((s - 2) * t + 1);
                for i in (s - 1)..=i_hi {
                    let f_prev = &prev[(i - (s - 1)) as usize];
                    if f_prev == &Count::ZERO {
                        continue;
                    }
                    let mut inner = Count::ZERO;
                    for j in j_min..=(t as u64 - 1) {
                        inner += binomial((k - i - 1) as u64, j);
                    }
                    sum += f_prev * inner;
                }
                sum
            })
            .collect()
    };
    F_TABLE.lock().unwrap().insert((s, t), row.clone());
    row
}

/// `F_{s,t}(k)`; zero outside `s <= k <= (s-1)t + 1`.
pub fn f_beta(s: u32, t: u32, k: i64) -> Result<Count> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!("F_{{s,t}} requires s, t >= 2, got s={s} t={t}")));
    }
    if k < s as i64 || k > ((s - 1) * t + 1) as i64 {
        return Ok(Count::ZERO);
    }
    Ok(f_row(s, t)[(k - s as i64) as usize].clone())
}

/// `A_321(K_{s,t}^beta) = sum_k binom(st - k, t - 1) F_{s,t}(k)`.
pub fn a321_beta(s: u32, t: u32) -> Result<Count> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!(
            "the F-sum formula requires s, t >= 2, got s={s} t={t}"
        )));
    }
    let row = f_row(s, t);
    let mut total = Count::ZERO;
    for (idx, f) in row.iter().enumerate() {
        let k = s as u64 + idx as u64;
        total += binomial((s * t) as u64 - k, t as u64 - 1) * f;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Word encoding of 321-avoiding beta-extension prefixes
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
    C,
}

pub fn word_to_string(word: &[Letter]) -> String {
    word.iter()
        .map(|l| match l {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
        })
        .collect()
}

pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            'c' => Ok(Letter::C),
            _ => Err(Error::InvalidInput(format!("bad word letter {c:?}"))),
        })
        .collect()
}

/// Check properties (i)-(iv) defining the valid `{a,b,c}` words of length k:
/// exactly `s` c's, at the ends; the i-th c at position `<= (i-1)t + 1`; and
/// the b-count between consecutive c's inside the stated band.
pub fn word_is_valid(word: &[Letter], s: u32, t: u32) -> bool {
    if s < 2 || t < 2 {
        return false;
    }
    let k = word.len();
    let c_positions: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == Letter::C)
        .map(|(i, _)| i + 1)
        .collect();
    if c_positions.len() != s as usize || k == 0 {
        return false;
    }
    if c_positions[0] != 1 || *c_positions.last().unwrap() != k {
        return false;
    }
    for (i, &pos) in c_positions.iter().enumerate() {
        if pos as u64 > (i as u64) * t as u64 + 1 {
            return false;
        }
    }
    for i in 1..c_positions.len() {
        let lo = c_positions[i - 1];
        let hi = c_positions[i];
        let b_count = word[lo..hi - 1].iter().filter(|&&l| l == Letter::B).count() as i64;
        let lower = hi as i64 - ((i as i64 - 1) * t as i64) - 2;
        if b_count < lower || b_count > t as i64 - 1 {
            return false;
        }
    }
    true
}

/// Encode the prefix `pi_1 ... pi_k` (ending at the top spine label
/// `(s-1)t + 1`) of a 321-avoiding extension of the beta comb as a word:
/// spine labels become c, other left-to-right maxima become b, the rest a.
pub fn beta_word_encode(prefix: &Permutation, s: u32, t: u32) -> Result<Vec<Letter>> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!("word encoding requires s, t >= 2, got s={s} t={t}")));
    }
    let top = (s - 1) * t + 1;
    let entries = prefix.entries();
    if entries.last() != Some(&top) {
        return Err(Error::InvalidInput(format!("prefix must end with {top}")));
    }
    if entries.iter().any(|&e| e > s * t) {
        return Err(Error::InvalidInput("prefix entries must lie in [st]".into()));
    }
    if prefix.contains(&Permutation::parse("321").unwrap()) {
        return Err(Error::MustAvoid("321"));
    }
    let maxima: BTreeSet<usize> = prefix.left_to_right_maxima().iter().map(|&(p, _)| p).collect();
    let word: Vec<Letter> = entries
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            if e % t == 1 % t {
                Letter::C
            } else if maxima.contains(&(i + 1)) {
                Letter::B
            } else {
                Letter::A
            }
        })
        .collect();
    if !word_is_valid(&word, s, t) {
        return Err(Error::InvalidInput(format!(
            "prefix {prefix} does not encode to a valid word"
        )));
    }
    let back = beta_word_decode(&word, s, t)?;
    if &back != prefix {
        return Err(Error::InvalidInput(format!(
            "prefix {prefix} is not a valid extension prefix (canonical decode is {back})"
        )));
    }
    Ok(word)
}

/// Recover the unique prefix from a valid word.
pub fn beta_word_decode(word: &[Letter], s: u32, t: u32) -> Result<Permutation> {
    if !word_is_valid(word, s, t) {
        return Err(Error::InvalidInput(format!(
            "word {} violates properties (i)-(iv)",
            word_to_string(word)
        )));
    }
    let n = s * t;
    let mut used = vec![false; n as usize + 1];
    let mut out: Vec<u32> = Vec::with_capacity(word.len());
    let mut j = 0u32; // largest j with (j-1)t + 1 already placed
    for &letter in word {
        let next = match letter {
            Letter::C => j * t + 1,
            Letter::B => ((j - 1) * t + 2..=j * t)
                .find(|&v| !used[v as usize])
                .ok_or_else(|| Error::Internal("no b-value available".into()))?,
            Letter::A => (1..=(j - 1) * t)
                .find(|&v| !used[v as usize])
                .ok_or_else(|| Error::Internal("no a-value available".into()))?,
        };
        if letter == Letter::C {
            j += 1;
        }
        used[next as usize] = true;
        out.push(next);
    }
    Permutation::new(out)
}

// ---------------------------------------------------------------------------
// Double-avoidance recurrences on uneven alpha combs
// ---------------------------------------------------------------------------

static A231_321: RowTable<u32> = LazyLock::new(Default::default);

/// `A_{231,321}(U_{spine=s,n})`: 1 for `n <= s`, otherwise the length-s sum
/// recurrence. Values extend down to n = 0 (the empty poset) so the sum is
/// always total.
pub fn a231_321_uneven(s: u32, n: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    let mut tables = A231_321.lock().unwrap();
    let vec = tables.entry(s).or_insert_with(|| vec![Count::one(); s as usize + 1]);
    while vec.len() as u32 <= n {
        let m = vec.len() as u32;
        let sum: Count = (1..=s).map(|j| vec[(m - j) as usize].clone()).sum();
        vec.push(sum);
    }
    Ok(vec[n as usize].clone())
}

static A231_312: RowTable<u32> = LazyLock::new(Default::default);

/// `A_{231,312}(U_{spine=s,n}) = A_{312,321}(U_{spine=s,n})`: 1 for `n <= s`,
/// `2^{n-s}` for `s < n < 2s`, then `2 A(n-1) - A(n-1-s)`.
pub fn a231_312_uneven(s: u32, n: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    let mut tables = A231_312.lock().unwrap();
    let vec = tables.entry(s).or_insert_with(|| {
        let mut v = vec![Count::one(); s as usize + 1];
        for m in (s + 1)..(2 * s) {
            v.push(pow2((m - s) as u64));
        }
        v
    });
    while vec.len() as u32 <= n {
        let m = vec.len() as u32;
        let double = &vec[(m - 1) as usize] * 2u32;
        let sub = &vec[(m - 1 - s) as usize];
        let val = double
            .checked_sub(sub)
            .ok_or_else(|| Error::Internal("negative value in the 231/312 recurrence".into()))?;
        vec.push(val);
    }
    Ok(vec[n as usize].clone())
}

// ---------------------------------------------------------------------------
// Ballot paths
// ---------------------------------------------------------------------------

/// Lattice paths from (0,0) to (s-1,k) never rising above the diagonal:
/// `((s-k)/s) * binom(s+k-1, k)`. By convention the count is 0 at `k = s`.
pub fn ballot_paths(s: u32, k: u32) -> Result<Count> {
    if s == 0 {
        return Err(Error::ZeroParameter { name: "s" });
    }
    if k > s {
        return Err(Error::OutOfRange(format!("ballot count needs k <= s, got s={s} k={k}")));
    }
    if k == s {
        return Ok(Count::ZERO);
    }
    let num = binomial((s + k - 1) as u64, k as u64) * Count::from(s - k);
    let (q, r) = num_integer::Integer::div_rem(&num, &Count::from(s));
    if r != Count::ZERO {
        return Err(Error::Internal("ballot count is not an integer".into()));
    }
    Ok(q)
}

// ---------------------------------------------------------------------------
// Dispatch over patterns and labelings
// ---------------------------------------------------------------------------

fn pat3(entries: &Permutation) -> Option<[u32; 3]> {
    let f = entries.flatten();
    let e = f.entries();
    (e.len() == 3).then(|| [e[0], e[1], e[2]])
}

/// Single-pattern dispatch for alpha-labeled combs.
pub fn a_single_alpha(pattern: &Permutation, s: u32, t: u32, cap: usize) -> Result<Eval> {
    if s == 0 || t == 0 {
        return Err(Error::ZeroParameter { name: "s/t" });
    }
    if s == 1 || t == 1 {
        return Ok(Eval::value(
            chain_count(s * t, std::slice::from_ref(pattern)),
            Method::ClosedForm,
        ));
    }
    let Some(p) = pat3(pattern) else {
        return oracle_eval(&LabeledPoset::comb_alpha(s, t)?, std::slice::from_ref(pattern), cap);
    };
    match p {
        [1, 2, 3] => Ok(Eval::value(Count::ZERO, Method::ClosedForm)),
        [1, 3, 2] => Ok(Eval::value(Count::one(), Method::ClosedForm)),
        [2, 1, 3] => Ok(Eval::value(catalan(s as u64), Method::ClosedForm)),
        [2, 3, 1] => Ok(Eval::value(a231_uneven(s, s * t)?, Method::Recurrence)),
        [3, 1, 2] => Ok(Eval::value(a312_uneven(s, s * t)?, Method::Recurrence)),
        [3, 2, 1] => {
            if t == 2 {
                Ok(Eval::value(a321_alpha_spine2(s)?, Method::ClosedForm))
            } else {
                // no known closed form for t >= 3, only growth-rate bounds
                oracle_eval(&LabeledPoset::comb_alpha(s, t)?, std::slice::from_ref(pattern), cap)
            }
        }
        _ => unreachable!("pat3 yields a standard length-3 permutation"),
    }
}

/// Single-pattern dispatch for beta-labeled combs.
pub fn a_single_beta(pattern: &Permutation, s: u32, t: u32, cap: usize) -> Result<Eval> {
    if s == 0 || t == 0 {
        return Err(Error::ZeroParameter { name: "s/t" });
    }
    if s == 1 || t == 1 {
        return Ok(Eval::value(
            chain_count(s * t, std::slice::from_ref(pattern)),
            Method::ClosedForm,
        ));
    }
    let Some(p) = pat3(pattern) else {
        return oracle_eval(&LabeledPoset::comb_beta(s, t)?, std::slice::from_ref(pattern), cap);
    };
    match p {
        [1, 2, 3] => Ok(Eval::value(Count::ZERO, Method::ClosedForm)),
        [1, 3, 2] => Ok(Eval::value(Count::one(), Method::ClosedForm)),
        [2, 1, 3] | [2, 3, 1] => Ok(Eval::value(Count::from(t).pow(s - 1), Method::ClosedForm)),
        [3, 1, 2] => {
            // (1/(st+1)) binom(s(t+1), s)
            let num = binomial((s as u64) * (t as u64 + 1), s as u64);
            let (q, r) = num_integer::Integer::div_rem(&num, &Count::from(s * t + 1));
            if r != Count::ZERO {
                return Err(Error::Internal("312-beta count is not an integer".into()));
            }
            Ok(Eval::value(q, Method::ClosedForm))
        }
        [3, 2, 1] => {
            if t == 2 {
                // (1/(2s+1)) binom(3s, s)
                let num = binomial(3 * s as u64, s as u64);
                let (q, r) = num_integer::Integer::div_rem(&num, &Count::from(2 * s + 1));
                if r != Count::ZERO {
                    return Err(Error::Internal("321-beta count is not an integer".into()));
                }
                Ok(Eval::value(q, Method::ClosedForm))
            } else {
                Ok(Eval::value(a321_beta(s, t)?, Method::Recurrence))
            }
        }
        _ => unreachable!("pat3 yields a standard length-3 permutation"),
    }
}

/// Two-pattern dispatch. Every pair of distinct length-3 patterns is covered
/// by a closed form when `s, t >= 2`; chains are answered exactly.
pub fn a_pair(
    labeling: Labeling,
    first: &Permutation,
    second: &Permutation,
    s: u32,
    t: u32,
    cap: usize,
) -> Result<Eval> {
    if s == 0 || t == 0 {
        return Err(Error::ZeroParameter { name: "s/t" });
    }
    let patterns = [first.clone(), second.clone()];
    if s == 1 || t == 1 {
        return Ok(Eval::value(chain_count(s * t, &patterns), Method::ClosedForm));
    }
    let (Some(a), Some(b)) = (pat3(first), pat3(second)) else {
        let poset = match labeling {
            Labeling::Alpha => LabeledPoset::comb_alpha(s, t)?,
            Labeling::Beta => LabeledPoset::comb_beta(s, t)?,
        };
        return oracle_eval(&poset, &patterns, cap);
    };
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a == b {
        return Err(Error::InvalidInput("pattern pair must be distinct".into()));
    }
    if a == [1, 2, 3] {
        return Ok(Eval::value(Count::ZERO, Method::ClosedForm));
    }
    if a == [1, 3, 2] {
        return Ok(Eval::value(Count::one(), Method::ClosedForm));
    }
    let value = match (labeling, a, b) {
        (Labeling::Alpha, [2, 1, 3], [2, 3, 1]) | (Labeling::Alpha, [2, 1, 3], [3, 1, 2]) => {
            Eval::value(pow2(s as u64 - 1), Method::ClosedForm)
        }
        (Labeling::Alpha, [2, 1, 3], [3, 2, 1]) => {
            Eval::value(binomial(s as u64, 2) + Count::one(), Method::ClosedForm)
        }
        (Labeling::Alpha, [2, 3, 1], [3, 1, 2]) | (Labeling::Alpha, [3, 1, 2], [3, 2, 1]) => {
            Eval::value(a231_312_uneven(s, s * t)?, Method::Recurrence)
        }
        (Labeling::Alpha, [2, 3, 1], [3, 2, 1]) => {
            Eval::value(a231_321_uneven(s, s * t)?, Method::Recurrence)
        }
        (Labeling::Beta, [2, 1, 3], [2, 3, 1]) => Eval::value(Count::one(), Method::ClosedForm),
        (Labeling::Beta, [2, 1, 3], [3, 1, 2]) | (Labeling::Beta, [2, 3, 1], [3, 1, 2]) => {
            Eval::value(pow2(s as u64 - 1), Method::ClosedForm)
        }
        (Labeling::Beta, [2, 1, 3], [3, 2, 1]) => Eval::value(
            Count::from((s - 1) as u64 * (t - 1) as u64) + Count::one(),
            Method::ClosedForm,
        ),
        (Labeling::Beta, [2, 3, 1], [3, 2, 1]) => {
            Eval::value(Count::from(t).pow(s - 1), Method::ClosedForm)
        }
        (Labeling::Beta, [3, 1, 2], [3, 2, 1]) => {
            Eval::value(Count::from(t + 1).pow(s - 1), Method::ClosedForm)
        }
        _ => {
            let poset = match labeling {
                Labeling::Alpha => LabeledPoset::comb_alpha(s, t)?,
                Labeling::Beta => LabeledPoset::comb_beta(s, t)?,
            };
            oracle_eval(&poset, &patterns, cap)?
        }
    };
    Ok(value)
}

/// Pair dispatch on uneven alpha combs: only {231,312}, {312,321}, {231,321}
/// have stated forms there.
pub fn a_pair_uneven(first: &Permutation, second: &Permutation, s: u32, n: u32) -> Result<Eval> {
    let (Some(a), Some(b)) = (pat3(first), pat3(second)) else {
        return Ok(Eval::Unavailable);
    };
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        ([2, 3, 1], [3, 1, 2]) | ([3, 1, 2], [3, 2, 1]) => {
            Ok(Eval::value(a231_312_uneven(s, n)?, Method::Recurrence))
        }
        ([2, 3, 1], [3, 2, 1]) => Ok(Eval::value(a231_321_uneven(s, n)?, Method::Recurrence)),
        _ => Ok(Eval::Unavailable),
    }
}
