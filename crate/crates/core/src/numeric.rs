//! Arbitrary-precision and floating-point helpers shared by the exact and
//! asymptotic evaluators.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational `num/den` as a `BigRational`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Generalized binomial coefficient `x(x-1)...(x-n+1)/n!` for rational `x`.
pub fn gbin(x: &BigRational, n: u64) -> BigRational {
    // x = p/q, so the numerator is prod (p - q i) and the denominator q^n n!.
    let p = x.numer();
    let q = x.denom();
    let factors: Vec<BigInt> = (0..n).map(|i| p - q * BigInt::from(i)).collect();
    let num = product(factors);
    let den = num_traits::pow(q.clone(), n as usize) * factorial(n);
    BigRational::new(num, den)
}

/// `gbin(a/q, n)` in factored form: returns the integer `prod_{i<n} (a - q i)`;
/// the value is that integer divided by `q^n n!`.
pub fn gbin_numerator(a: i64, q: i64, n: u64) -> BigInt {
    falling_product(a, q, n)
}

/// `prod_{i<count} (start - step*i)` computed with a balanced product tree.
pub fn falling_product(start: i64, step: i64, count: u64) -> BigInt {
    let factors: Vec<BigInt> = (0..count as i64)
        .map(|i| BigInt::from(start as i128 - step as i128 * i as i128))
        .collect();
    product(factors)
}

fn product(mut xs: Vec<BigInt>) -> BigInt {
    if xs.is_empty() {
        return BigInt::one();
    }
    while xs.len() > 1 {
        let mut next = Vec::with_capacity(xs.len().div_ceil(2));
        let mut it = xs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        xs = next;
    }
    xs.pop().unwrap()
}

pub fn factorial(n: u64) -> BigInt {
    product((1..=n).map(BigInt::from).collect())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, k)` in floating point via log-Gamma; exact for small arguments up to rounding.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Natural log of `|x|`, valid for integers far outside the `f64` range.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `num/den` rounded to `f64` without materializing huge intermediates.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let (n, d) = (num.abs(), den.abs());
    let shift = n.bits() as i64 - d.bits() as i64 - 70;
    let q = if shift >= 0 {
        n / (d << shift as u64)
    } else {
        (n << (-shift) as u64) / d
    };
    let v = scale_by_pow2(q.to_f64().unwrap(), shift);
    if negative {
        -v
    } else {
        v
    }
}

fn scale_by_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    ratio_to_f64(x.numer(), x.denom())
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    statrs::function::gamma::ln_gamma(x)
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub fn signed_ln_gamma(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma(x), 1.0));
    }
    if x == x.round() {
        return Err(Error::Domain(format!("Gamma has a pole at {x}")));
    }
    // reflection: Γ(x) Γ(1-x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    Ok((ln, s.signum()))
}

/// `Γ(x)` for real non-pole `x`.
pub fn gamma(x: f64) -> Result<f64> {
    let (ln, sign) = signed_ln_gamma(x)?;
    Ok(sign * ln.exp())
}

/// `(ln |gbin(x, n)|, sign)`, or `None` when the coefficient is exactly zero.
pub fn ln_gbin(x: f64, n: u64) -> Option<(f64, f64)> {
    if n == 0 {
        return Some((0.0, 1.0));
    }
    let nf = n as f64;
    if x == x.round() && x >= 0.0 && x < nf {
        return None;
    }
    if x < 0.0 {
        // gbin(x, n) = (-1)^n gbin(n - 1 - x, n)
        let (ln, _) = ln_gbin(nf - 1.0 - x, n)?;
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Some((ln, sign));
    }
    let (lo, sign) = signed_ln_gamma(x - nf + 1.0).ok()?;
    Some((ln_gamma(x + 1.0) - ln_factorial(n) - lo, sign))
}

pub fn gbin_f64(x: f64, n: u64) -> f64 {
    match ln_gbin(x, n) {
        Some((ln, sign)) => sign * ln.exp(),
        None => 0.0,
    }
}

/// Trigamma `Ψ'(x)`: recurrence up to `x >= 12`, asymptotic series there,
/// reflection for negative non-integer arguments.
pub fn trigamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        if x == x.round() {
            return Err(Error::Domain(format!("trigamma has a pole at {x}")));
        }
        let s = (std::f64::consts::PI * x).sin();
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        return Ok(pi2 / (s * s) - trigamma(1.0 - x)?);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x^2) + sum B_{2j} / x^{2j+1}
    let series = inv
        + 0.5 * inv2
        + inv * inv2
            * (1.0 / 6.0
                + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0)))));
    Ok(acc + series)
}

/// First-order harmonic number `H_k`.
pub fn harmonic(k: u64) -> f64 {
    (1..=k).map(|l| 1.0 / l as f64).sum()
}

/// Second-order harmonic number `H_k^(2)`.
pub fn harmonic2(k: u64) -> f64 {
    (1..=k).map(|l| 1.0 / (l * l) as f64).sum()
}

pub fn lcm_u64(xs: impl IntoIterator<Item = u64>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(&BigInt::from(x)))
}
