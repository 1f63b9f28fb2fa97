//! Growth-rate bounds on the 321-avoiding extension counts and the exact
//! finite-parameter inequalities supporting them.
//!
//! Floats appear only in reports; every dominance check happens on exact
//! integers or rationals first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::closed::{a321_beta, ballot_paths, binomial};
use crate::{Count, Error, Result};

/// Growth-rate report: exact counts reduced to floating roots next to the
/// limit bounds they approach, plus any violated exact inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// which parameter is swept, e.g. ("s", 2) for spine roots at tooth 2
    pub parameter: (String, u32),
    /// (index, index-th root of the exact count)
    pub roots: Vec<(u32, f64)>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// empty on success; each entry names one failed exact comparison
    pub violations: Vec<String>,
}

/// `gamma(t) = t(t-1)/(2t-1)`, the limiting maximizer location for the
/// binomial-product summand.
pub fn gamma(t: u32) -> f64 {
    let t = t as f64;
    t * (t - 1.0) / (2.0 * t - 1.0)
}

fn rational(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through a logarithm for out-of-range magnitudes
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let ln = big_ln(&r.numer().abs().to_biguint().unwrap())
            - big_ln(&r.denom().abs().to_biguint().unwrap());
        sign * ln.exp()
    })
}

// Natural log of a positive big integer via its bit length.
fn big_ln(x: &Count) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 900 {
        return x.to_f64().expect("fits in f64 range").ln();
    }
    let shift = bits - 900;
    let top = (x >> shift).to_f64().expect("900-bit prefix fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `x^{1/n}` as a float, stable for counts far beyond f64 range.
pub fn nth_root_f64(x: &Count, n: u32) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (big_ln(x) / n as f64).exp()
}

/// Exact value of `(2t-1)^{2t-1} / ((t-1)^{t-1} t^t)`.
pub fn thm4_upper_exact(t: u32) -> Result<BigRational> {
    if t < 2 {
        return Err(Error::OutOfRange(format!("the spine growth bounds need t >= 2, got t={t}")));
    }
    let t = t as u64;
    let num = rational(2 * t - 1).pow((2 * t - 1) as i32);
    let den = rational(t - 1).pow((t - 1) as i32) * rational(t).pow(t as i32);
    Ok(num / den)
}

/// The two displayed bounds on `lim_s A_321(K_{s,t}^alpha)^{1/s}`:
/// `4^{t-2} (3 + 2 sqrt 2)` below and `(2t-1)^{2t-1}/((t-1)^{t-1} t^t)` above.
pub fn thm4_bounds(t: u32) -> Result<(f64, f64)> {
    let upper = thm4_upper_exact(t)?;
    let lower = 4f64.powi(t as i32 - 2) * (3.0 + 2.0 * 2f64.sqrt());
    Ok((lower, rational_to_f64(&upper)))
}

/// The same upper limit through its Stirling form
/// `f(t-1) f(t) / (f(g)^2 f(t-1-g) f(t-g))` with `f(x) = x^x` and
/// `g = gamma(t)`; used to cross-check the simplified closed form.
pub fn thm4_upper_via_gamma(t: u32) -> Result<f64> {
    if t < 2 {
        return Err(Error::OutOfRange(format!("the spine growth bounds need t >= 2, got t={t}")));
    }
    fn f(x: f64) -> f64 {
        x.powf(x)
    }
    let t = t as f64;
    let g = t * (t - 1.0) / (2.0 * t - 1.0);
    Ok(f(t - 1.0) * f(t) / (f(g) * f(g) * f(t - 1.0 - g) * f(t - g)))
}

/// The binomial-product summand `u_{s,t}(k) = binom((t-1)s, k) binom(st, k)`.
pub fn u_value(s: u32, t: u32, k: u64) -> Count {
    binomial((t - 1) as u64 * s as u64, k) * binomial(s as u64 * t as u64, k)
}

/// Exact upper bound `sum_{k=0}^{st-s} u_{s,t}(k)` on `A_321(K_{s,t}^alpha)`.
pub fn thm4_upper_sum(s: u32, t: u32) -> Result<Count> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!("the sum bound needs s, t >= 2, got s={s} t={t}")));
    }
    let mut total = Count::ZERO;
    for k in 0..=(s as u64 * t as u64 - s as u64) {
        total += u_value(s, t, k);
    }
    Ok(total)
}

/// Exact lower bound `((s-k)/s) binom(s+k-1, k)` on `|Omega_{s,t}(W)|` when
/// `|W| = k < s`; an integer by the ballot theorem.
pub fn lambda_lower(s: u32, _t: u32, k: u32) -> Result<Count> {
    if k >= s {
        return Err(Error::OutOfRange(format!("the Omega lower bound needs k < s, got s={s} k={k}")));
    }
    ballot_paths(s, k)
}

/// Exact upper bound `sum_k 2^{k-s} binom(k, s) binom(st-k, t-1)` on
/// `A_321(K_{s,t}^beta)`.
pub fn remark2_upper(s: u32, t: u32) -> Result<Count> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!("the sum bound needs s, t >= 2, got s={s} t={t}")));
    }
    let mut total = Count::ZERO;
    for k in (s as u64)..=((s as u64 - 1) * t as u64 + 1) {
        total += (Count::one() << (k - s as u64) as usize)
            * binomial(k, s as u64)
            * binomial(s as u64 * t as u64 - k, t as u64 - 1);
    }
    Ok(total)
}

/// The single-term summand `2^{k-s} binom(st-k, t-1)` whose maximum over
/// `s <= k <= (s-1)t+1` sits at `k = st - 2(t-1)`.
pub fn thm6_summand(s: u32, t: u32, k: u64) -> Count {
    (Count::one() << (k - s as u64) as usize) * binomial(s as u64 * t as u64 - k, t as u64 - 1)
}

/// Exact value of the finite lower expression
/// `binom(2(t-1), t-1) 2^{st-2(t-1)-s} / (st-2t-4)^{s-2}`.
pub fn thm6_lower_exact(s: u32, t: u32) -> Result<BigRational> {
    if s < 3 {
        return Err(Error::OutOfRange(format!("the tooth lower expression needs s >= 3, got s={s}")));
    }
    let den_base = s as i64 * t as i64 - 2 * t as i64 - 4;
    if den_base <= 0 {
        return Err(Error::OutOfRange(format!(
            "the tooth lower expression needs st - 2t - 4 > 0, got {den_base} at s={s} t={t}"
        )));
    }
    let num = binomial(2 * (t as u64 - 1), t as u64 - 1)
        * (Count::one() << ((s as usize - 2) * (t as usize - 1)));
    let num = BigRational::from_integer(BigInt::from(num));
    Ok(num / rational(den_base as u64).pow(s as i32 - 2))
}

/// Exact value of the finite upper expression
/// `((s-1)t+1)^s ((s-1)t-s+2) 2^{st-2(t-1)-s} binom(2(t-1), t-1)`.
pub fn thm6_upper_exact(s: u32, t: u32) -> Result<Count> {
    if s < 2 || t < 2 {
        return Err(Error::OutOfRange(format!(
            "the tooth upper expression needs s, t >= 2, got s={s} t={t}"
        )));
    }
    let top = (s as u64 - 1) * t as u64;
    Ok(Count::from(top + 1).pow(s)
        * Count::from(top - s as u64 + 2)
        * (Count::one() << ((s as usize - 2) * (t as usize - 1)))
        * binomial(2 * (t as u64 - 1), t as u64 - 1))
}

/// Both finite expressions bracketing `A_321(K_{s,t}^beta)` as floats.
/// At `s = 2` the count itself is `binom(2t, t)/2`, so both sides collapse
/// to that exact value.
pub fn thm6_sandwich(s: u32, t: u32) -> Result<(f64, f64)> {
    if s == 2 {
        let v = binomial(2 * t as u64, t as u64) / Count::from(2u32);
        let f = big_ln(&v).exp();
        return Ok((f, f));
    }
    let lower = rational_to_f64(&thm6_lower_exact(s, t)?);
    let upper = big_ln(&thm6_upper_exact(s, t)?).exp();
    Ok((lower, upper))
}

/// Check supermultiplicativity (`a_m a_n <= a_{m+n}`) of a sequence indexed
/// from s = 1, and — since the root sequence then converges to its supremum —
/// that every finite root stays under the spine upper limit at tooth `t`.
/// All comparisons are exact; floats only decorate the report.
pub fn supermultiplicativity_report(values: &[Count], t: u32) -> Result<BoundReport> {
    let (lower, upper) = thm4_bounds(t)?;
    let mut violations = Vec::new();
    for m in 1..=values.len() {
        for n in m..=values.len() {
            if m + n > values.len() {
                break;
            }
            let prod = &values[m - 1] * &values[n - 1];
            if prod > values[m + n - 1] {
                violations.push(format!("a_{m} * a_{n} > a_{}", m + n));
            }
        }
    }
    // a_s <= upper^s, i.e. a_s * ((t-1)^{t-1} t^t)^s <= (2t-1)^{(2t-1)s}
    let t64 = t as u64;
    let den = Count::from(t64 - 1).pow(t - 1) * Count::from(t64).pow(t);
    let num = Count::from(2 * t64 - 1);
    let mut roots = Vec::with_capacity(values.len());
    for (i, a) in values.iter().enumerate() {
        let s = i as u32 + 1;
        roots.push((s, nth_root_f64(a, s)));
        if a * den.pow(s) > num.pow((2 * t - 1) * s) {
            violations.push(format!("a_{s}^(1/{s}) exceeds the upper limit bound"));
        }
    }
    Ok(BoundReport {
        parameter: ("t".into(), t),
        roots,
        lower_bound: lower,
        upper_bound: upper,
        violations,
    })
}

/// Monitored (never asserted) convergence of `A_321(K_{s,t}^beta)^{1/t}`
/// toward `2^s` as the tooth length grows.
pub fn beta_root_convergence(s: u32, t_max: u32) -> Result<BoundReport> {
    if s < 2 || t_max < 2 {
        return Err(Error::OutOfRange(format!(
            "convergence report needs s, t_max >= 2, got s={s} t_max={t_max}"
        )));
    }
    let limit = 2f64.powi(s as i32);
    let mut roots = Vec::new();
    for t in 2..=t_max {
        roots.push((t, nth_root_f64(&a321_beta(s, t)?, t)));
    }
    Ok(BoundReport {
        parameter: ("s".into(), s),
        roots,
        lower_bound: limit,
        upper_bound: limit,
        violations: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::{
        a321_alpha_spine2, catalan, omega_count, OmegaSpec,
    };
    use crate::perm::{count_avoiding_extensions, PatternSet, Permutation};
    use crate::poset::LabeledPoset;
    use crate::DEFAULT_ENUM_CAP as CAP;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn thm4_values_at_t2() {
        let (lower, upper) = thm4_bounds(2).unwrap();
        assert!((lower - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(thm4_upper_exact(2).unwrap(), BigRational::new(27.into(), 4.into()));
        assert!((upper - 6.75).abs() < 1e-12);
        assert!(thm4_bounds(1).is_err());
    }

    #[test]
    fn thm4_lower_below_upper() {
        for t in 2..=50 {
            let (lower, upper) = thm4_bounds(t).unwrap();
            assert!(lower < upper, "t={t}: {lower} !< {upper}");
        }
    }

    #[test]
    fn gamma_form_matches_closed_form() {
        for t in 2..=20 {
            let via_gamma = thm4_upper_via_gamma(t).unwrap();
            let closed = rational_to_f64(&thm4_upper_exact(t).unwrap());
            assert!(
                ((via_gamma - closed) / closed).abs() < 1e-9,
                "t={t}: {via_gamma} vs {closed}"
            );
        }
    }

    #[test]
    fn gamma_tracks_the_discrete_maximizer() {
        // r_s(t)/s approaches t(t-1)/(2t-1); check the drift is small already
        for t in 2..=4u32 {
            let s = 40u32;
            let (r, _) = (0..=(s as u64 * t as u64 - s as u64))
                .map(|k| (k, u_value(s, t, k)))
                .max_by(|a, b| a.1.cmp(&b.1))
                .unwrap();
            assert!((r as f64 / s as f64 - gamma(t)).abs() < 0.1, "t={t} r={r}");
        }
    }

    #[test]
    fn eq4_sum_values_and_dominance() {
        assert_eq!(thm4_upper_sum(2, 2).unwrap(), c(15));
        for s in 1..=13u32 {
            if s >= 2 {
                assert!(thm4_upper_sum(s, 2).unwrap() >= a321_alpha_spine2(s).unwrap(), "s={s}");
            }
        }
        // dominance over the oracle for every comb with at most 12 elements
        let pat = PatternSet::new(vec![Permutation::parse("321").unwrap()]).unwrap();
        for s in 2..=6u32 {
            for t in 2..=6u32 {
                if s * t > 12 {
                    continue;
                }
                let poset = LabeledPoset::comb_alpha(s, t).unwrap();
                let exact = count_avoiding_extensions(&poset, &pat, CAP).unwrap();
                assert!(thm4_upper_sum(s, t).unwrap() >= exact, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn lambda_lower_values_and_dominance() {
        assert_eq!(lambda_lower(7, 2, 0).unwrap(), c(1));
        assert_eq!(lambda_lower(5, 2, 2).unwrap(), c(9));
        assert!(lambda_lower(5, 2, 5).is_err());
        for s in 2..=7u32 {
            for mask in 0u64..(1 << s) {
                let w: Vec<u32> =
                    (0..s).filter(|b| mask >> b & 1 == 1).map(|b| s + 1 + b).collect();
                let k = w.len() as u32;
                if k >= s {
                    continue;
                }
                let spec = OmegaSpec::new(s, 2, w).unwrap();
                assert!(
                    omega_count(&spec) >= lambda_lower(s, 2, k).unwrap(),
                    "s={s} mask={mask:b}"
                );
            }
        }
    }

    #[test]
    fn remark2_values_and_dominance() {
        assert_eq!(remark2_upper(2, 2).unwrap(), c(8));
        for s in 2..=5u32 {
            for t in 2..=5u32 {
                assert!(remark2_upper(s, t).unwrap() >= a321_beta(s, t).unwrap(), "s={s} t={t}");
            }
        }
        let pat = PatternSet::new(vec![Permutation::parse("321").unwrap()]).unwrap();
        for s in 2..=6u32 {
            for t in 2..=6u32 {
                if s * t > 12 {
                    continue;
                }
                let poset = LabeledPoset::comb_beta(s, t).unwrap();
                let exact = count_avoiding_extensions(&poset, &pat, CAP).unwrap();
                assert!(remark2_upper(s, t).unwrap() >= exact, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn thm6_summand_peaks_where_claimed() {
        // re-verify rather than trust: the max of 2^{k-s} binom(st-k, t-1)
        // over s <= k <= (s-1)t+1 is attained at k = st - 2(t-1)
        for s in 3..=7u32 {
            for t in 2..=7u32 {
                let k_star = s as u64 * t as u64 - 2 * (t as u64 - 1);
                let max = (s as u64..=((s as u64 - 1) * t as u64 + 1))
                    .map(|k| thm6_summand(s, t, k))
                    .max()
                    .unwrap();
                assert_eq!(thm6_summand(s, t, k_star), max, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn thm6_brackets_the_count() {
        // at s = 3 the lower denominator st - 2t - 4 = t - 4 needs t >= 5
        for t in 5..=12u32 {
            let exact = BigRational::from_integer(BigInt::from(a321_beta(3, t).unwrap()));
            let lower = thm6_lower_exact(3, t).unwrap();
            let upper = BigRational::from_integer(BigInt::from(thm6_upper_exact(3, t).unwrap()));
            assert!(lower <= exact, "t={t}");
            assert!(exact <= upper, "t={t}");
        }
        // the lower expression is refused outside its provable domain
        assert!(thm6_lower_exact(3, 2).is_err());
        assert!(thm6_lower_exact(2, 9).is_err());
        let (lo, hi) = thm6_sandwich(3, 5).unwrap();
        assert!(lo < hi);
    }

    #[test]
    fn thm6_sandwich_collapses_at_s2() {
        for t in 2..=9u32 {
            let (lo, hi) = thm6_sandwich(2, t).unwrap();
            assert_eq!(lo, hi);
            let exact = binomial(2 * t as u64, t as u64) / c(2);
            assert!((lo - exact.to_f64().unwrap()).abs() / lo < 1e-12, "t={t}");
            assert_eq!(a321_beta(2, t).unwrap(), exact);
        }
    }

    #[test]
    fn supermultiplicativity_of_the_spine_sequence() {
        let values: Vec<Count> = (1..=13u32).map(|s| a321_alpha_spine2(s).unwrap()).collect();
        let report = supermultiplicativity_report(&values, 2).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(report.roots.len(), 13);
        for &(_, r) in &report.roots {
            assert!(r <= 6.75);
        }
        assert!((report.roots[12].1 - 936575968f64.powf(1.0 / 13.0)).abs() < 1e-6);

        let ones = vec![Count::one(); 10];
        assert!(supermultiplicativity_report(&ones, 2).unwrap().violations.is_empty());

        // a failing sequence is reported, not silently accepted
        let bad = vec![c(5), c(5), c(5)];
        assert!(!supermultiplicativity_report(&bad, 2).unwrap().violations.is_empty());
    }

    #[test]
    fn direct_sum_witnesses_supermultiplicativity() {
        // concatenating extensions realizes a_m * a_n distinct extensions of
        // the (m+n)-spine comb, which is why the sequence is supermultiplicative
        let values: Vec<Count> = (1..=4u32).map(|s| a321_alpha_spine2(s).unwrap()).collect();
        assert!(&values[1] * &values[1] <= values[3].clone());
        assert!(&values[0] * &values[2] <= values[3].clone());
    }

    #[test]
    fn convergence_report_shape() {
        let report = beta_root_convergence(2, 8).unwrap();
        assert_eq!(report.parameter, ("s".into(), 2));
        assert_eq!(report.roots.len(), 7);
        assert_eq!(report.lower_bound, 4.0);
        // monitored only: roots should at least be finite and positive
        assert!(report.roots.iter().all(|&(_, r)| r.is_finite() && r > 1.0));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"roots\""));
    }

    #[test]
    fn huge_root_is_stable() {
        // 2^4000 has a well-defined 1000th root of 16
        let big = Count::one() << 4000;
        assert!((nth_root_f64(&big, 1000) - 16.0).abs() < 1e-9);
        assert!(big_ln(&catalan(3)).exp() - 5.0 < 1e-9);
    }
}
