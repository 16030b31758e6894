//! Closed-form distributions of the node parameters.
//!
//! Each pmf has an exact evaluator returning a reduced rational and a float
//! evaluator for large `n`. The exact evaluators transcribe the closed forms
//! term by term with [`gbin`]. The float evaluators avoid the catastrophic
//! cancellation of the alternating sums by keeping every large generalized
//! binomial as an integer product over the shared denominator `(k+1)^n n!`,
//! summing exactly, and rounding once at the end; prefactors without
//! cancellation go through log-Gamma.
//!
//! Supports: out-degree of node `j` lives on `0..=n-j`, root out-degree on
//! `0..=n`, out-degree of a random node on `0..=n-1`, descendants of node `j`
//! on `1..=n-j+1` and of a random node on `1..=n`. Outside the support every
//! evaluator returns exactly zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{
    binomial, falling_product, gbin, gbin_f64, lcm_u64, ln_abs_bigint, ln_factorial, ln_gamma, ln_gbin, ratio_to_f64,
    rational, rational_to_f64,
};

/// Exact probability, always in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    pub fn new(value: BigRational) -> Self {
        Self(value)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn q(k: usize) -> i64 {
    k as i64 + 1
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    Ok(())
}

fn check_node(k: usize, n: u64, j: u64) -> Result<()> {
    check_k(k)?;
    if j < 1 || j > n {
        return Err(Error::InvalidParameter(format!("need n >= j >= 1, got n={n}, j={j}")));
    }
    Ok(())
}

fn check_random(k: usize, n: u64) -> Result<()> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::InvalidParameter("a random inserted node needs n >= 1".into()));
    }
    Ok(())
}

/// `T_n = prod_{l<n} (1 + (k+1) l)`, the number of trees of size `n`.
pub fn count_trees(k: usize, n: u64) -> BigInt {
    falling_product(1, -q(k), n)
}

/// `T_n` through `n! (k+1)^n gbin(n - k/(k+1), n)`.
pub fn count_trees_gbin(k: usize, n: u64) -> BigInt {
    let qq = q(k);
    let v = gbin(&rational(n as i64 * qq - k as i64, qq), n)
        * BigRational::from_integer(crate::numeric::factorial(n) * num_traits::pow(BigInt::from(qq), n as usize));
    assert!(v.is_integer());
    v.to_integer()
}

/// `S_n = (n-1)! (k+1)^{n-1} gbin(n - 1 - 1/(k+1), n - 1)`, trees whose root clique has one child.
pub fn count_s(k: usize, n: u64) -> Result<BigInt> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::InvalidParameter("S_n needs n >= 1".into()));
    }
    let qq = q(k);
    let m = n - 1;
    let v = gbin(&rational(m as i64 * qq - 1, qq), m)
        * BigRational::from_integer(crate::numeric::factorial(m) * num_traits::pow(BigInt::from(qq), m as usize));
    assert!(v.is_integer());
    Ok(v.to_integer())
}

/// `ln T_n` via `T_n = (k+1)^n Γ(n + 1/(k+1)) / Γ(1/(k+1))`.
pub fn ln_count_trees(k: usize, n: u64) -> f64 {
    let qf = (k + 1) as f64;
    n as f64 * qf.ln() + ln_gamma(n as f64 + 1.0 / qf) - ln_gamma(1.0 / qf)
}

fn frac(num: i64, den: i64) -> BigRational {
    rational(num, den)
}

fn signed_binomial(m: u64, l: u64) -> BigRational {
    let b = BigRational::from_integer(binomial(m, l));
    if l.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// Out-degree of node `j` in a tree of size `n`.
pub fn pmf_outdegree(k: usize, n: u64, j: u64, m: u64) -> Result<ExactProbability> {
    check_node(k, n, j)?;
    if m > n - j {
        return Ok(ExactProbability::zero());
    }
    let (qq, ki) = (q(k), k as i64);
    let (ni, ji) = (n as i64, j as i64);
    let prefactor = gbin(&frac(ji * qq - ki, qq), j)
        / (gbin(&frac(ni * qq - ki, qq), n) * BigRational::from_integer(binomial(n, j)));
    let sum: BigRational = (0..=m)
        .map(|l| signed_binomial(m, l) * gbin(&frac(ni * qq - ki * (2 + l as i64), qq), n - j))
        .sum();
    Ok(ExactProbability(prefactor * sum))
}

/// Out-degree of the root node `0_1` in a tree of size `n`.
pub fn pmf_root_outdegree(k: usize, n: u64, m: u64) -> Result<ExactProbability> {
    check_k(k)?;
    if m > n {
        return Ok(ExactProbability::zero());
    }
    let (qq, ki) = (q(k), k as i64);
    let ni = n as i64;
    let prefactor = gbin(&frac(m as i64 * ki - (ki - 1), ki), m) / gbin(&frac(ni * qq - ki, qq), n);
    let sum: BigRational = (0..=m)
        .map(|l| signed_binomial(m, l) * gbin(&frac((ni - 1) * qq - ki * l as i64, qq), n))
        .sum();
    Ok(ExactProbability(prefactor * sum))
}

/// Out-degree of a uniformly chosen inserted node in a tree of size `n`.
pub fn pmf_random_outdegree(k: usize, n: u64, m: u64) -> Result<ExactProbability> {
    check_random(k, n)?;
    if m >= n {
        return Ok(ExactProbability::zero());
    }
    let (qq, ki) = (q(k), k as i64);
    let ni = n as i64;
    let head = gbin(&frac(ni * qq + 1, qq), n);
    let sum: BigRational = (0..=m)
        .map(|l| {
            let li = l as i64;
            signed_binomial(m, l) / BigRational::from_integer(BigInt::from(ki * (li + 2) + 1))
                * (&head - gbin(&frac(ni * qq - ki * (li + 2), qq), n))
        })
        .sum();
    let norm = BigRational::from_integer(BigInt::from(n)) * gbin(&frac(ni * qq - ki, qq), n);
    Ok(ExactProbability(sum / norm))
}

/// Number of descendants of node `j` (itself included) in a tree of size `n`.
pub fn pmf_descendants(k: usize, n: u64, j: u64, m: u64) -> Result<ExactProbability> {
    check_node(k, n, j)?;
    if m < 1 || m > n - j + 1 {
        return Ok(ExactProbability::zero());
    }
    let qq = q(k);
    let (ni, mi) = (n as i64, m as i64);
    let v = gbin(&frac((mi - 1) * qq - 1, qq), m - 1) * gbin(&frac((ni - mi - 1) * qq + 2, qq), n + 1 - m - j)
        / gbin(&frac(ni * qq - k as i64, qq), n - j);
    Ok(ExactProbability(v))
}

/// Number of descendants of a uniformly chosen inserted node in a tree of size `n`.
pub fn pmf_random_descendants(k: usize, n: u64, m: u64) -> Result<ExactProbability> {
    check_random(k, n)?;
    if m < 1 || m > n {
        return Ok(ExactProbability::zero());
    }
    let (qq, ki) = (q(k), k as i64);
    let ni = n as i64;
    let head = gbin(&frac(ni * qq + 1, qq), n);
    let sum: BigRational = (0..m)
        .map(|l| {
            let li = l as i64;
            signed_binomial(m - 1, l) / BigRational::from_integer(BigInt::from(qq * (li + 1) + ki))
                * (&head - gbin(&frac((ni - li - 2) * qq + 2, qq), n))
        })
        .sum();
    let prefactor = gbin(&frac((m as i64 - 1) * qq - 1, qq), m - 1)
        / (BigRational::from_integer(BigInt::from(n)) * gbin(&frac(ni * qq - ki, qq), n));
    Ok(ExactProbability(prefactor * sum))
}

/// Limit law of the out-degree of a random node:
/// `p_m = (k+1) / (k (m+1) gbin(m + 2 + 1/k, m + 1))`.
pub fn limit_random_outdegree(k: usize, m: u64) -> Result<BigRational> {
    check_k(k)?;
    let ki = k as i64;
    let denom = BigRational::from_integer(BigInt::from(ki * (m as i64 + 1)))
        * gbin(&frac((m as i64 + 2) * ki + 1, ki), m + 1);
    Ok(BigRational::from_integer(BigInt::from(ki + 1)) / denom)
}

/// `p_m` in floating point, stable for large `m`.
pub fn limit_random_outdegree_f64(k: usize, m: u64) -> f64 {
    let kf = k as f64;
    let s = 1.0 / kf;
    (kf + 1.0) / kf * (ln_gamma(2.0 + s) + ln_gamma(m as f64 + 1.0) - ln_gamma(m as f64 + 3.0 + s)).exp()
}

/// Limit law of the descendant count of a random node:
/// `k / ((k+1) (m + k/(k+1)) (m - 1/(k+1)))` for `m >= 1`.
pub fn limit_random_descendants(k: usize, m: u64) -> Result<BigRational> {
    check_k(k)?;
    if m < 1 {
        return Ok(BigRational::zero());
    }
    let (qq, ki, mi) = (q(k), k as i64, m as i64);
    let v = frac(ki, qq) / (frac(mi * qq + ki, qq) * frac(mi * qq - 1, qq));
    Ok(v)
}

// ---------------------------------------------------------------------------
// float path

/// `prod_{i<count} (a - (k+1) i)`: numerator of `gbin(a/(k+1), count)` over `(k+1)^count count!`.
fn fnum(k: usize, a: i64, count: u64) -> BigInt {
    falling_product(a, q(k), count)
}

fn alternating(m: u64, terms: impl Fn(u64) -> BigInt) -> BigInt {
    (0..=m)
        .map(|l| {
            let t = binomial(m, l) * terms(l);
            if l.is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

fn exp_signed(ln_abs_int: &BigInt, ln_rest: f64) -> f64 {
    if ln_abs_int.is_zero() {
        return 0.0;
    }
    let v = (ln_abs_bigint(ln_abs_int) + ln_rest).exp();
    if ln_abs_int.is_negative() {
        -v
    } else {
        v
    }
}

/// Out-degree pmf of node `j` for `m = 0..=m_max`, float evaluation.
///
/// The alternating sum is an exact integer over the shared denominator; the
/// prefactor reduces to `T_j / T_n`.
pub fn pmf_outdegree_f64(k: usize, n: u64, j: u64, m_max: u64) -> Result<Vec<f64>> {
    check_node(k, n, j)?;
    let (qq, ki) = (q(k), k as i64);
    let span = n - j;
    let top = m_max.min(span);
    let products: Vec<BigInt> = (0..=top)
        .map(|l| fnum(k, n as i64 * qq - ki * (2 + l as i64), span))
        .collect();
    let ln_pref = ln_count_trees(k, j) - ln_count_trees(k, n);
    Ok((0..=m_max)
        .map(|m| {
            if m > span {
                return 0.0;
            }
            exp_signed(&alternating(m, |l| products[l as usize].clone()), ln_pref)
        })
        .collect())
}

/// Root out-degree pmf for `m = 0..=m_max`, float evaluation.
pub fn pmf_root_outdegree_f64(k: usize, n: u64, m_max: u64) -> Result<Vec<f64>> {
    check_k(k)?;
    let (qq, ki) = (q(k), k as i64);
    let top = m_max.min(n);
    let products: Vec<BigInt> = (0..=top)
        .map(|l| fnum(k, (n as i64 - 1) * qq - ki * l as i64, n))
        .collect();
    let g = fnum(k, n as i64 * qq - ki, n);
    let kf = k as f64;
    Ok((0..=m_max)
        .map(|m| {
            if m > n {
                return 0.0;
            }
            let ratio = ratio_to_f64(&alternating(m, |l| products[l as usize].clone()), &g);
            ratio * gbin_f64(m as f64 - (kf - 1.0) / kf, m)
        })
        .collect())
}

/// Random-node out-degree pmf for `m = 0..=m_max`, float evaluation.
pub fn pmf_random_outdegree_f64(k: usize, n: u64, m_max: u64) -> Result<Vec<f64>> {
    check_random(k, n)?;
    let (qq, ki) = (q(k), k as i64);
    let ni = n as i64;
    let top = m_max.min(n - 1);
    let head = fnum(k, ni * qq + 1, n);
    let tails: Vec<BigInt> = (0..=top).map(|l| &head - fnum(k, ni * qq - ki * (l as i64 + 2), n)).collect();
    let g = fnum(k, ni * qq - ki, n);
    Ok((0..=m_max)
        .map(|m| {
            if m >= n {
                return 0.0;
            }
            let divisors = |l: u64| (ki * (l as i64 + 2) + 1) as u64;
            let lcm = lcm_u64((0..=m).map(divisors));
            let sum = alternating(m, |l| &lcm / BigInt::from(divisors(l)) * &tails[l as usize]);
            ratio_to_f64(&sum, &(lcm * BigInt::from(n) * &g))
        })
        .collect())
}

/// Descendant pmf of node `j` at one `m`, log-Gamma evaluation (no cancellation).
pub fn pmf_descendants_f64(k: usize, n: u64, j: u64, m: u64) -> Result<f64> {
    check_node(k, n, j)?;
    if m < 1 || m > n - j + 1 {
        return Ok(0.0);
    }
    let qf = (k + 1) as f64;
    let (nf, mf) = (n as f64, m as f64);
    let parts = [
        ln_gbin(mf - 1.0 - 1.0 / qf, m - 1),
        ln_gbin(nf - mf - 1.0 + 2.0 / qf, n + 1 - m - j),
        ln_gbin(nf - k as f64 / qf, n - j),
    ];
    match parts {
        [Some((a, sa)), Some((b, sb)), Some((c, sc))] => Ok(sa * sb * sc * (a + b - c).exp()),
        _ => Ok(0.0),
    }
}

/// Random-node descendant pmf for `m = 1..=m_max` (index 0 is `m = 1`), float evaluation.
pub fn pmf_random_descendants_f64(k: usize, n: u64, m_max: u64) -> Result<Vec<f64>> {
    check_random(k, n)?;
    let (qq, ki) = (q(k), k as i64);
    let ni = n as i64;
    let top = m_max.min(n);
    let head = fnum(k, ni * qq + 1, n);
    let tails: Vec<BigInt> = (0..top)
        .map(|l| &head - fnum(k, (ni - l as i64 - 2) * qq + 2, n))
        .collect();
    let g = fnum(k, ni * qq - ki, n);
    let qf = qq as f64;
    Ok((1..=m_max)
        .map(|m| {
            if m > n {
                return 0.0;
            }
            let divisors = |l: u64| (qq * (l as i64 + 1) + ki) as u64;
            let lcm = lcm_u64((0..m).map(divisors));
            let sum = alternating(m - 1, |l| &lcm / BigInt::from(divisors(l)) * &tails[l as usize]);
            let ratio = ratio_to_f64(&sum, &(lcm * BigInt::from(n) * &g));
            ratio * gbin_f64(m as f64 - 1.0 - 1.0 / qf, m - 1)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// limiting moments

/// `E(Y_j^s) = s! Γ(j + 1/(k+1)) / Γ(j + 1 + k(s-1)/(k+1))`, the `s`-th moment of
/// the limit of `n^{-k/(k+1)} Y_{n,j}` for fixed `j`.
pub fn moment_yj(k: usize, j: u64, s: u64) -> f64 {
    let qf = (k + 1) as f64;
    let jf = j as f64;
    let kf = k as f64;
    (ln_factorial(s) + ln_gamma(jf + 1.0 / qf) - ln_gamma(jf + 1.0 + kf * (s as f64 - 1.0) / qf)).exp()
}

/// Moments of the limit of `n^{-k/(k+1)} Y_{n,0}` (root out-degree).
pub fn moment_y0(k: usize, s: u64) -> f64 {
    let qf = (k + 1) as f64;
    let kf = k as f64;
    let sf = s as f64;
    (ln_gamma(1.0 / qf) + ln_gamma(sf + 1.0 / kf) - ln_gamma(1.0 / kf) - ln_gamma(kf * sf / qf + 1.0 / qf)).exp()
}

/// Moments of the limit of `X_{n,j} / n` for fixed `j`.
pub fn moment_xj(k: usize, j: u64, s: u64) -> f64 {
    let qf = (k + 1) as f64;
    let sf = s as f64;
    gbin_f64(sf - 1.0 / qf, s) / gbin_f64(sf + j as f64 - k as f64 / qf, s)
}

/// Moments of the limit of `(j/n) X_{n,j}` for `1 << j << n`.
pub fn moment_x(k: usize, s: u64) -> f64 {
    let qf = (k + 1) as f64;
    (ln_factorial(s)).exp() * gbin_f64(s as f64 - 1.0 / qf, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn tree_counts() {
        for k in 1..5 {
            assert_eq!(count_trees(k, 0), BigInt::one());
            assert_eq!(count_trees(k, 1), BigInt::one());
            for n in 0..15 {
                assert_eq!(count_trees(k, n), count_trees_gbin(k, n));
            }
        }
        assert_eq!(count_trees(2, 2), BigInt::from(4));
        assert_eq!(count_trees(2, 3), BigInt::from(28));
        assert_eq!(count_trees(2, 4), BigInt::from(280));
        assert_eq!(count_trees(1, 4), BigInt::from(105));
        assert_eq!(count_trees(3, 3), BigInt::from(45));
        assert_eq!(count_s(1, 1).unwrap(), BigInt::one());
        assert_eq!(count_s(1, 3).unwrap(), BigInt::from(3));
        assert_eq!(count_s(2, 3).unwrap(), BigInt::from(2 * 5));
        assert!((ln_count_trees(3, 40) - ln_abs_bigint(&count_trees(3, 40))).abs() < 1e-10);
    }

    #[test]
    fn small_values() {
        assert_eq!(pmf_outdegree(2, 5, 5, 0).unwrap(), ExactProbability::one());
        assert_eq!(pmf_outdegree(2, 2, 1, 1).unwrap().value(), &r(1, 2));
        assert_eq!(pmf_root_outdegree(3, 0, 0).unwrap(), ExactProbability::one());
        assert_eq!(pmf_root_outdegree(1, 1, 1).unwrap(), ExactProbability::one());
        assert_eq!(pmf_descendants(2, 6, 6, 1).unwrap(), ExactProbability::one());
        assert_eq!(pmf_descendants(2, 2, 1, 2).unwrap().value(), &r(1, 2));
        assert_eq!(pmf_random_descendants(3, 1, 1).unwrap(), ExactProbability::one());
        assert_eq!(limit_random_outdegree(1, 0).unwrap(), r(2, 3));
        assert_eq!(limit_random_descendants(1, 1).unwrap(), r(2, 3));
        assert!(pmf_outdegree(2, 3, 4, 0).is_err());
        assert!(pmf_outdegree(2, 3, 0, 0).is_err());
        assert!(pmf_random_outdegree(2, 0, 0).is_err());
    }

    #[test]
    fn root_outdegree_small_case() {
        // k = 2, n = 2: node 1 always touches 0_1; node 2 does in 3 of its 4 slots
        // (two root-clique positions and clique {0_1, 1}), so d⁺(0_1) = 2 w.p. 3/4.
        assert_eq!(pmf_root_outdegree(2, 2, 1).unwrap().value(), &r(1, 4));
        assert_eq!(pmf_root_outdegree(2, 2, 2).unwrap().value(), &r(3, 4));
    }

    #[test]
    fn normalization() {
        for k in 1..=4usize {
            for n in 1..=9u64 {
                for j in 1..=n {
                    let s: BigRational = (0..=n).map(|m| pmf_outdegree(k, n, j, m).unwrap().into_inner()).sum();
                    assert!(s.is_one(), "outdegree k={k} n={n} j={j}");
                    let s: BigRational =
                        (0..=n + 1).map(|m| pmf_descendants(k, n, j, m).unwrap().into_inner()).sum();
                    assert!(s.is_one(), "descendants k={k} n={n} j={j}");
                }
                let sums = [
                    (0..=n).map(|m| pmf_root_outdegree(k, n, m).unwrap().into_inner()).sum::<BigRational>(),
                    (0..=n).map(|m| pmf_random_outdegree(k, n, m).unwrap().into_inner()).sum(),
                    (0..=n).map(|m| pmf_random_descendants(k, n, m).unwrap().into_inner()).sum(),
                ];
                assert!(sums.iter().all(One::is_one), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn probabilities_lie_in_unit_interval() {
        for k in 1..=3 {
            for n in 1..=8 {
                for j in 1..=n {
                    for m in 0..=n + 1 {
                        for p in [pmf_outdegree(k, n, j, m).unwrap(), pmf_descendants(k, n, j, m).unwrap()] {
                            assert!(!p.value().is_negative() && p.value() <= &BigRational::one());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn float_agrees_with_exact() {
        for k in 1..=3usize {
            let n = 40;
            for j in [1u64, 2, 7, 20, 39, 40] {
                let fl = pmf_outdegree_f64(k, n, j, n).unwrap();
                for m in 0..=n {
                    let ex = pmf_outdegree(k, n, j, m).unwrap().to_f64();
                    assert!((fl[m as usize] - ex).abs() <= 1e-9 * ex.abs() + 1e-300, "k={k} j={j} m={m}");
                    let ex = pmf_descendants(k, n, j, m + 1).unwrap().to_f64();
                    let fl = pmf_descendants_f64(k, n, j, m + 1).unwrap();
                    assert!((fl - ex).abs() <= 1e-9 * ex.abs(), "desc k={k} j={j} m={m}");
                }
            }
            let root = pmf_root_outdegree_f64(k, n, n).unwrap();
            let rnd = pmf_random_outdegree_f64(k, n, n).unwrap();
            let rdesc = pmf_random_descendants_f64(k, n, n).unwrap();
            for m in 0..=n {
                let ex = pmf_root_outdegree(k, n, m).unwrap().to_f64();
                assert!((root[m as usize] - ex).abs() <= 1e-9 * ex.abs(), "root k={k} m={m}");
                let ex = pmf_random_outdegree(k, n, m).unwrap().to_f64();
                assert!((rnd[m as usize] - ex).abs() <= 1e-9 * ex.abs(), "rnd k={k} m={m}");
            }
            for m in 1..=n {
                let ex = pmf_random_descendants(k, n, m).unwrap().to_f64();
                assert!((rdesc[m as usize - 1] - ex).abs() <= 1e-9 * ex.abs(), "rdesc k={k} m={m}");
            }
        }
    }

    #[test]
    fn limit_laws() {
        for k in 1..=3usize {
            // telescoping: partial sums of the descendant limit are 1 - k/((k+1)M + k) ... check exactly
            let partial: BigRational = (1..=50).map(|m| limit_random_descendants(k, m).unwrap()).sum();
            let qq = k as i64 + 1;
            let tail = r(k as i64, 50 * qq + k as i64);
            assert_eq!(partial + tail, BigRational::one());
            for m in 0..30 {
                let ex = rational_to_f64(&limit_random_outdegree(k, m).unwrap());
                assert!((limit_random_outdegree_f64(k, m) - ex).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn moments() {
        for k in 1..=4 {
            assert!((moment_yj(k, 3, 0) - 1.0).abs() < 1e-14);
            assert!((moment_y0(k, 0) - 1.0).abs() < 1e-14);
            assert!((moment_xj(k, 2, 0) - 1.0).abs() < 1e-14);
            assert!((moment_x(k, 0) - 1.0).abs() < 1e-14);
            assert!((moment_x(k, 1) - k as f64 / (k + 1) as f64).abs() < 1e-14);
        }
        assert!((moment_yj(1, 1, 1) - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
    }
}
