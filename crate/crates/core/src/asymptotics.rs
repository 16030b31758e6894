//! Limit laws, the clustering constant, distance growth rates and the
//! characteristic equation behind the distance limit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use statrs::distribution::{
    Beta, Continuous, ContinuousCDF, Discrete, DiscreteCDF, Exp, Gamma, NegativeBinomial, Normal,
};

use crate::error::{Error, Result};
use crate::exact::{moment_y0, moment_yj};
use crate::numeric::{gbin_f64, harmonic, harmonic2, ln_gamma, trigamma};

/// Which parameter a limit law describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// Out-degree `Y_{n,j}` of node `j`.
    Degree,
    /// Descendant count `X_{n,j}` of node `j`.
    Descendants,
}

/// Growth of `j` with `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Regime {
    /// `j` fixed.
    Fixed(u64),
    /// `j -> inf`, `j = o(n)`.
    Small,
    /// `j ~ rho n`, `0 < rho < 1`.
    Central(f64),
    /// `n - j = o(n)`.
    Large,
}

/// A limiting distribution.
///
/// Normalizations by regime: degree, fixed `j`: `n^{-k/(k+1)} Y_{n,j}`;
/// degree, small `j`: `(j/n)^{k/(k+1)} Y_{n,j}`; descendants, fixed `j`:
/// `X_{n,j}/n`; descendants, small `j`: `(j/n) X_{n,j}`; descendants,
/// central: `X_{n,j} - 1`. The other regimes need no normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LawDescriptor {
    Exponential { rate: f64 },
    /// Failures before the first success, on `{0, 1, ...}`.
    Geometric { p: f64 },
    Beta { a: f64, b: f64 },
    Gamma { shape: f64, scale: f64 },
    /// `gbin(m + r - 1, m) p^r (1-p)^m` on `{0, 1, ...}`.
    NegativeBinomial { r: f64, p: f64 },
    Gaussian { mean: f64, variance: f64 },
    PointMass { at: f64 },
    /// Known only through its moments; `node: None` is the root `0_1`.
    MomentSequence { k: usize, node: Option<u64> },
}

impl LawDescriptor {
    pub fn family(&self) -> &'static str {
        match self {
            LawDescriptor::Exponential { .. } => "exponential",
            LawDescriptor::Geometric { .. } => "geometric",
            LawDescriptor::Beta { .. } => "beta",
            LawDescriptor::Gamma { .. } => "gamma",
            LawDescriptor::NegativeBinomial { .. } => "negative-binomial",
            LawDescriptor::Gaussian { .. } => "gaussian",
            LawDescriptor::PointMass { .. } => "point-mass",
            LawDescriptor::MomentSequence { .. } => "moment-sequence",
        }
    }

    /// True for laws on the non-negative integers.
    pub fn is_discrete(&self) -> bool {
        match self {
            LawDescriptor::Geometric { .. } | LawDescriptor::NegativeBinomial { .. } => true,
            LawDescriptor::PointMass { at } => at.fract() == 0.0 && *at >= 0.0,
            _ => false,
        }
    }

    fn domain(&self, what: &str) -> Error {
        Error::Domain(format!("{what} is not defined for a {} law", self.family()))
    }

    pub fn pmf(&self, m: u64) -> Result<f64> {
        Ok(match *self {
            LawDescriptor::Geometric { p } => p * (1.0 - p).powf(m as f64),
            LawDescriptor::NegativeBinomial { r, p } => negbin(r, p)?.pmf(m),
            LawDescriptor::PointMass { at } if self.is_discrete() => (m as f64 == at) as u8 as f64,
            _ => return Err(self.domain("a mass function")),
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(match *self {
            LawDescriptor::Exponential { rate } => Exp::new(rate).map_err(dom)?.pdf(x),
            LawDescriptor::Beta { a, b } => Beta::new(a, b).map_err(dom)?.pdf(x),
            LawDescriptor::Gamma { shape, scale } => Gamma::new(shape, 1.0 / scale).map_err(dom)?.pdf(x),
            LawDescriptor::Gaussian { mean, variance } => Normal::new(mean, variance.sqrt()).map_err(dom)?.pdf(x),
            _ => return Err(self.domain("a density")),
        })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(match *self {
            LawDescriptor::Exponential { rate } => Exp::new(rate).map_err(dom)?.cdf(x),
            LawDescriptor::Beta { a, b } => Beta::new(a, b).map_err(dom)?.cdf(x),
            LawDescriptor::Gamma { shape, scale } => Gamma::new(shape, 1.0 / scale).map_err(dom)?.cdf(x),
            LawDescriptor::Gaussian { mean, variance } => Normal::new(mean, variance.sqrt()).map_err(dom)?.cdf(x),
            LawDescriptor::Geometric { p } => {
                if x < 0.0 {
                    0.0
                } else {
                    1.0 - (1.0 - p).powf(x.floor() + 1.0)
                }
            }
            LawDescriptor::NegativeBinomial { r, p } => {
                if x < 0.0 {
                    0.0
                } else {
                    negbin(r, p)?.cdf(x.floor() as u64)
                }
            }
            LawDescriptor::PointMass { at } => (x >= at) as u8 as f64,
            LawDescriptor::MomentSequence { .. } => return Err(self.domain("a distribution function")),
        })
    }

    /// Raw moment `E[X^s]`.
    pub fn moment(&self, s: u32) -> f64 {
        let sf = s as f64;
        match *self {
            LawDescriptor::Exponential { rate } => (ln_gamma(sf + 1.0) - sf * rate.ln()).exp(),
            LawDescriptor::Beta { a, b } => (0..s).map(|i| (a + i as f64) / (a + b + i as f64)).product(),
            LawDescriptor::Gamma { shape, scale } => {
                (0..s).map(|i| shape + i as f64).product::<f64>() * scale.powi(s as i32)
            }
            LawDescriptor::Gaussian { mean, variance } => {
                // E X^s = mean E X^{s-1} + (s-1) variance E X^{s-2}
                let (mut prev, mut cur) = (1.0, mean);
                if s == 0 {
                    return 1.0;
                }
                for i in 2..=s {
                    let next = mean * cur + (i - 1) as f64 * variance * prev;
                    prev = cur;
                    cur = next;
                }
                cur
            }
            LawDescriptor::PointMass { at } => at.powi(s as i32),
            LawDescriptor::MomentSequence { k, node: Some(j) } => moment_yj(k, j, s as u64),
            LawDescriptor::MomentSequence { k, node: None } => moment_y0(k, s as u64),
            LawDescriptor::Geometric { .. } | LawDescriptor::NegativeBinomial { .. } => {
                let mut total = 0.0;
                let mut mass = 0.0;
                for m in 0..10_000_000u64 {
                    let p = self.pmf(m).unwrap_or(0.0);
                    total += p * (m as f64).powi(s as i32);
                    mass += p;
                    if 1.0 - mass < 1e-17 && m > 10 {
                        break;
                    }
                }
                total
            }
        }
    }
}

fn dom<E: std::fmt::Display>(e: E) -> Error {
    Error::Domain(e.to_string())
}

fn negbin(r: f64, p: f64) -> Result<NegativeBinomial> {
    NegativeBinomial::new(r, p).map_err(dom)
}

/// Limit law of `quantity` at node `j` in the given regime.
pub fn regime_law(k: usize, regime: Regime, quantity: Quantity) -> Result<LawDescriptor> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    let q = (k + 1) as f64;
    let r = k as f64 / q;
    if let Regime::Central(rho) = regime {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("central regime needs 0 < rho < 1, got {rho}")));
        }
    }
    if regime == Regime::Fixed(0) {
        return Err(Error::InvalidParameter("node labels start at 1".into()));
    }
    Ok(match (quantity, regime) {
        (Quantity::Degree, Regime::Fixed(j)) => LawDescriptor::MomentSequence { k, node: Some(j) },
        (Quantity::Degree, Regime::Small) => LawDescriptor::Exponential { rate: 1.0 },
        (Quantity::Degree, Regime::Central(rho)) => LawDescriptor::Geometric { p: rho.powf(r) },
        (Quantity::Degree, Regime::Large) => LawDescriptor::PointMass { at: 0.0 },
        (Quantity::Descendants, Regime::Fixed(j)) => LawDescriptor::Beta {
            a: r,
            b: j as f64 - 1.0 + 2.0 / q,
        },
        (Quantity::Descendants, Regime::Small) => LawDescriptor::Gamma { shape: r, scale: 1.0 },
        (Quantity::Descendants, Regime::Central(rho)) => LawDescriptor::NegativeBinomial { r, p: rho },
        (Quantity::Descendants, Regime::Large) => LawDescriptor::PointMass { at: 1.0 },
    })
}

/// Limit of `n^{-k/(k+1)}` times the root out-degree.
pub fn root_degree_law(k: usize) -> LawDescriptor {
    LawDescriptor::MomentSequence { k, node: None }
}

// ---------------------------------------------------------------------------
// clustering constant

/// A positive series summed up to a certified remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Upper bound on the neglected tail.
    pub tail_bound: f64,
    pub terms: u64,
}

/// `f(d)`: clustering coefficient of a node of degree `d` in a k-tree.
fn clustering_of_degree(k: f64, d: f64) -> f64 {
    (k - 1.0) / d * (2.0 - (k - 2.0) / (d - 1.0))
}

/// Limit of the expected clustering coefficient of a random node, as the
/// series `sum_m p_m f(m + k)` with `p_m` the limiting out-degree law.
///
/// The sum stops once the remainder bound
/// `2(k-1) A M^{-2-1/k} / (2 + 1/k)` with `A = (k+1)/k Γ(2+1/k)` drops below
/// `tol`; it follows from `p_m <= A (m+1)^{-2-1/k}` and `f(d) <= 2(k-1)/d`.
pub fn clustering_series(k: usize, tol: f64) -> Result<SeriesSum> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "the clustering constant needs k >= 2, got {k}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let kf = k as f64;
    let s = 2.0 + 1.0 / kf;
    let a = (kf + 1.0) / kf * ln_gamma(s).exp();
    let bound = |m: f64| 2.0 * (kf - 1.0) * a * m.powf(-s) / s;
    let mut p = (kf + 1.0) / (2.0 * kf + 1.0);
    // Neumaier summation
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut m = 0u64;
    loop {
        let term = p * clustering_of_degree(kf, m as f64 + kf);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        m += 1;
        p *= m as f64 / (m as f64 + s);
        let rest = bound(m as f64);
        if rest <= tol {
            return Ok(SeriesSum {
                value: sum + comp,
                tail_bound: rest,
                terms: m,
            });
        }
    }
}

pub fn clustering_constant(k: usize, tol: f64) -> Result<f64> {
    clustering_series(k, tol).map(|s| s.value)
}

/// The same constant through its closed form with trigamma values. Loses
/// accuracy to cancellation as `k` grows; meant as a cross-check for small `k`.
pub fn clustering_constant_closed_form(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "the clustering constant needs k >= 2, got {k}"
        )));
    }
    let kf = k as f64;
    let inv = 1.0 / kf;
    let b = gbin_f64(kf - 4.0 - inv, k as u64 - 2);
    let first: f64 = (1..=k as u64 - 2)
        .map(|l| {
            let lf = l as f64;
            1.0 / (lf * lf * gbin_f64(lf + 3.0 + inv - kf, l))
        })
        .sum();
    let second: f64 = (0..=(k as i64 - 3))
        .map(|l| {
            let lf = l as f64;
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            // weight 1/(k-2); a weight of 1/(l+1) coincides with it only for k = 3
            sign / ((kf - 2.0) * (lf - 1.0 - inv) * crate::numeric::binomial_f64(k as u64 - 3, l as u64))
        })
        .sum();
    let psi = trigamma(4.0 + inv - kf)?;
    Ok((kf + 1.0) * (1.0 / (kf - 1.0) + 3.0 / kf * b * first + 3.0 / kf * second - 3.0 / kf * b * psi))
}

// ---------------------------------------------------------------------------
// distances

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceParams {
    pub k: usize,
    /// `H_k = sum_{l<=k} 1/l`.
    pub h: f64,
    /// `H_k^(2) = sum_{l<=k} 1/l^2`.
    pub h2: f64,
    /// Slope of the mean against `ln n`: `1/((k+1) H_k)`.
    pub mean_coefficient: f64,
    /// Slope of the variance against `ln n`: `H_k^(2)/((k+1) H_k^3)`.
    pub variance_coefficient: f64,
}

pub fn distance_params(k: usize) -> Result<DistanceParams> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    let h = harmonic(k as u64);
    let h2 = harmonic2(k as u64);
    let q = (k + 1) as f64;
    Ok(DistanceParams {
        k,
        h,
        h2,
        mean_coefficient: 1.0 / (q * h),
        variance_coefficient: h2 / (q * h * h * h),
    })
}

/// Leading-order Gaussian law of the root distance of node `n`.
pub fn distance_law(k: usize, n: u64) -> Result<LawDescriptor> {
    let p = distance_params(k)?;
    let ln = (n as f64).ln();
    Ok(LawDescriptor::Gaussian {
        mean: p.mean_coefficient * ln,
        variance: p.variance_coefficient * ln,
    })
}

// ---------------------------------------------------------------------------
// characteristic equation

/// Roots of `prod_{r<k} (α - r/(k+1)) = k! v / (k+1)^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharRoots {
    pub k: usize,
    pub v: f64,
    /// All `k` roots; the first is `α₁`, the branch through `k/(k+1)` at `v = 1`.
    pub roots: Vec<(f64, f64)>,
    /// Largest `|P(α)|` over the roots.
    pub residual: f64,
}

impl CharRoots {
    pub fn alpha1(&self) -> Complex64 {
        let (re, im) = self.roots[0];
        Complex64::new(re, im)
    }
}

/// `k! / (k+1)^k`.
fn char_constant(k: usize) -> f64 {
    let q = (k + 1) as f64;
    (1..=k).map(|r| r as f64 / q).product()
}

/// Monic coefficients, lowest degree first, of `prod_{r<k} (α - r/(k+1)) - c v`.
fn char_poly(k: usize, v: f64) -> Vec<f64> {
    let q = (k + 1) as f64;
    let mut coef = vec![1.0];
    for r in 0..k {
        let root = r as f64 / q;
        let mut next = vec![0.0; coef.len() + 1];
        for (i, c) in coef.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= root * c;
        }
        coef = next;
    }
    coef[0] -= char_constant(k) * v;
    coef
}

fn horner(coef: &[f64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coef.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn all_roots(k: usize, v: f64) -> Vec<Complex64> {
    let coef = char_poly(k, v);
    let mut companion = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        companion[(i, k - 1)] = -coef[i];
    }
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z| {
            let mut z = Complex64::new(z.re, z.im);
            // one Newton polish, plus a second if it still helps
            for _ in 0..2 {
                let (p, dp) = horner(&coef, z);
                if dp.norm() > 0.0 {
                    z -= p / dp;
                }
            }
            z
        })
        .collect()
}

fn ordered(k: usize, v: f64, roots: Vec<Complex64>, alpha1: usize) -> CharRoots {
    let coef = char_poly(k, v);
    let residual = roots.iter().map(|&z| horner(&coef, z).0.norm()).fold(0.0, f64::max);
    let mut out = vec![roots[alpha1]];
    out.extend(roots.iter().enumerate().filter(|&(i, _)| i != alpha1).map(|(_, &z)| z));
    CharRoots {
        k,
        v,
        roots: out.into_iter().map(|z| (z.re, z.im)).collect(),
        residual,
    }
}

/// Pick the root closest to `target`, refusing when another root is nearly as close.
fn nearest(roots: &[Complex64], target: Complex64) -> Result<usize> {
    let mut dist: Vec<(f64, usize)> = roots.iter().enumerate().map(|(i, z)| ((z - target).norm(), i)).collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0));
    if dist.len() > 1 && dist[1].0 < 2.0 * dist[0].0 + 1e-9 {
        return Err(Error::RootTracking(format!(
            "two roots within {:.3e} and {:.3e} of the tracked branch",
            dist[0].0, dist[1].0
        )));
    }
    Ok(dist[0].1)
}

/// All roots at `v`, with `α₁` followed from `v = 1` in small steps.
pub fn char_roots(k: usize, v: f64) -> Result<CharRoots> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("v must be finite, got {v}")));
    }
    let start = Complex64::new(k as f64 / (k + 1) as f64, 0.0);
    let steps = ((v - 1.0).abs() / 0.01).ceil().max(1.0) as usize;
    let mut tracked = start;
    let mut last = (Vec::new(), 0);
    for s in 0..=steps {
        let vs = 1.0 + (v - 1.0) * s as f64 / steps as f64;
        let roots = all_roots(k, vs);
        let i = nearest(&roots, tracked)?;
        tracked = roots[i];
        last = (roots, i);
    }
    Ok(ordered(k, v, last.0, last.1))
}

/// `α₁'(1)` from implicit differentiation: `c / P'(α₁(1))` with `c = k!/(k+1)^k`.
pub fn alpha1_derivative(k: usize) -> Result<f64> {
    let roots = char_roots(k, 1.0)?;
    let (_, dp) = horner(&char_poly(k, 1.0), roots.alpha1());
    Ok(char_constant(k) / dp.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::limit_random_outdegree;
    use crate::metrics::clustering_formula;
    use crate::numeric::rational;
    use std::f64::consts::PI;

    #[test]
    fn series_terms_are_degree_law_times_clustering() {
        for k in 2..=6usize {
            let kf = k as f64;
            let s = 2.0 + 1.0 / kf;
            let mut p = (kf + 1.0) / (2.0 * kf + 1.0);
            for m in 0..50u64 {
                // the recurrence for p_m against the exact law
                let pm = limit_random_outdegree(k, m).unwrap();
                assert!((p - crate::numeric::rational_to_f64(&pm)).abs() < 1e-15);
                // the printed summand, exactly: (k+1)(k-1) / (k (m+1)(m+k) gbin(m+2+1/k, m+1)) (2 - (k-2)/(m+k-1))
                let ki = k as i64;
                let mi = m as i64;
                let printed = rational((ki + 1) * (ki - 1), ki * (mi + 1) * (mi + ki))
                    / crate::numeric::gbin(&rational((mi + 2) * ki + 1, ki), m + 1)
                    * (rational(2, 1) - rational(ki - 2, mi + ki - 1));
                let f = clustering_formula(k, m as usize + k).unwrap();
                let f = rational(*f.numer() as i64, *f.denom() as i64);
                assert_eq!(printed, pm * f);
                p *= (m + 1) as f64 / ((m + 1) as f64 + s);
            }
        }
    }

    #[test]
    fn table_one() {
        let table = [
            (2, 0.793390),
            (3, 0.843184),
            (4, 0.871356),
            (5, 0.889998),
            (6, 0.903449),
            (10, 0.933975),
            (50, 0.982804),
            (100, 0.990885),
        ];
        for (k, c) in table {
            let v = clustering_constant(k, 1e-9).unwrap();
            assert!((v - c).abs() < 1e-5, "k={k}: {v}");
        }
        // 23 - 9π²/4
        assert!((clustering_constant(2, 1e-13).unwrap() - (23.0 - 2.25 * PI * PI)).abs() < 1e-11);
    }

    #[test]
    fn closed_forms_agree_with_series() {
        for k in 2..=8 {
            let series = clustering_constant(k, 1e-12).unwrap();
            let closed = clustering_constant_closed_form(k).unwrap();
            assert!((series - closed).abs() < 1e-8, "k={k}: {series} vs {closed}");
        }
        let psi = |x: f64| trigamma(x).unwrap();
        let rows = [
            (3, -5.0 + 16.0 / 3.0 * psi(4.0 / 3.0)),
            (4, 1051.0 / 96.0 - 75.0 / 128.0 * psi(0.25)),
            (5, 512.0 / 125.0 - 72.0 / 625.0 * psi(-0.8)),
            (6, 148003.0 / 57024.0 - 2695.0 / 62208.0 * psi(-11.0 / 6.0)),
        ];
        for (k, c) in rows {
            assert!((clustering_constant(k, 1e-12).unwrap() - c).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn clustering_constant_increases_to_one() {
        let values: Vec<f64> = (2..=100).map(|k| clustering_constant(k, 1e-10).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        assert!(values.iter().all(|&c| c < 1.0));
        assert!(clustering_constant(1, 1e-6).is_err());
        assert!(clustering_constant(3, 0.0).is_err());
    }

    #[test]
    fn tail_bound_is_honest() {
        let coarse = clustering_series(3, 1e-4).unwrap();
        let fine = clustering_constant(3, 1e-13).unwrap();
        assert!(fine - coarse.value <= coarse.tail_bound);
        assert!(fine >= coarse.value);
    }

    #[test]
    fn distance_coefficients() {
        let p = distance_params(1).unwrap();
        assert_eq!((p.mean_coefficient, p.variance_coefficient), (0.5, 0.5));
        let p = distance_params(2).unwrap();
        assert!((p.mean_coefficient - 2.0 / 9.0).abs() < 1e-15);
        let c: Vec<DistanceParams> = (1..=50).map(|k| distance_params(k).unwrap()).collect();
        assert!(c.windows(2).all(|w| w[1].mean_coefficient < w[0].mean_coefficient
            && w[1].variance_coefficient < w[0].variance_coefficient));
    }

    #[test]
    fn alpha_one_at_v_one() {
        for k in 1..=10 {
            let roots = char_roots(k, 1.0).unwrap();
            assert_eq!(roots.roots.len(), k);
            let a = roots.alpha1();
            assert!((a.re - k as f64 / (k + 1) as f64).abs() < 1e-12 && a.im.abs() < 1e-12);
            assert!(roots.residual < 1e-12, "k={k}: {}", roots.residual);
            let h = harmonic(k as u64);
            let d = alpha1_derivative(k).unwrap();
            assert!((d * (k + 1) as f64 * h - 1.0).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn known_other_roots() {
        let r = char_roots(2, 1.0).unwrap();
        assert!((r.roots[1].0 + 1.0 / 3.0).abs() < 1e-12);
        let r = char_roots(3, 1.0).unwrap();
        let mut im: Vec<f64> = r.roots[1..].iter().map(|z| z.1).collect();
        im.sort_by(f64::total_cmp);
        let w = 1.0 / (2.0 * 2f64.sqrt());
        assert!((im[0] + w).abs() < 1e-12 && (im[1] - w).abs() < 1e-12);
        for v in [0.3, 0.9, 1.7] {
            let r = char_roots(1, v).unwrap();
            assert!((r.roots[0].0 - v / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tracking_moves_continuously() {
        let a = char_roots(4, 1.2).unwrap();
        let b = char_roots(4, 1.21).unwrap();
        assert!((a.alpha1() - b.alpha1()).norm() < 0.01);
        assert!(a.residual < 1e-10);
        // derivative by finite difference
        let h = 1e-5;
        let fd = (char_roots(4, 1.0 + h).unwrap().alpha1().re - char_roots(4, 1.0 - h).unwrap().alpha1().re) / (2.0 * h);
        assert!((fd - alpha1_derivative(4).unwrap()).abs() < 1e-7);
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn laws_are_normalized() {
        for k in 1..=4usize {
            for rho in [0.2, 0.5, 0.8] {
                for q in [Quantity::Degree, Quantity::Descendants] {
                    let law = regime_law(k, Regime::Central(rho), q).unwrap();
                    let total: f64 = (0..20_000).map(|m| law.pmf(m).unwrap()).sum();
                    assert!((total - 1.0).abs() < 1e-8, "{law:?}");
                }
            }
            for j in 1..=3u64 {
                // substitute x = u^{1/a} near 0 and 1 - x = w^{1/b} near 1 to remove the endpoint singularities
                let LawDescriptor::Beta { a, b } = regime_law(k, Regime::Fixed(j), Quantity::Descendants).unwrap() else {
                    panic!()
                };
                let law = LawDescriptor::Beta { a, b };
                let lo = simpson(|u| law_pdf_sub(&law, u, a), 0.0, 0.5f64.powf(a), 20_000);
                let hi = simpson(|w| law_pdf_sub_hi(&law, w, b), 0.0, 0.5f64.powf(b), 20_000);
                assert!((lo + hi - 1.0).abs() < 1e-8, "beta({a},{b}): {}", lo + hi);
            }
            let g = regime_law(k, Regime::Small, Quantity::Descendants).unwrap();
            let LawDescriptor::Gamma { shape, .. } = g else { panic!() };
            let lo = simpson(|u| law_pdf_sub(&g, u, shape), 0.0, 1.0, 20_000);
            let hi = simpson(|x| g.pdf(x).unwrap(), 1.0, 60.0, 200_000);
            assert!((lo + hi - 1.0).abs() < 1e-8, "gamma: {}", lo + hi);
        }
        let e = regime_law(2, Regime::Small, Quantity::Degree).unwrap();
        assert!((simpson(|x| e.pdf(x).unwrap(), 0.0, 60.0, 200_000) - 1.0).abs() < 1e-8);
        let d = distance_law(2, 1 << 17).unwrap();
        let LawDescriptor::Gaussian { mean, variance } = d else { panic!() };
        let sd = variance.sqrt();
        assert!((simpson(|x| d.pdf(x).unwrap(), mean - 12.0 * sd, mean + 12.0 * sd, 20_000) - 1.0).abs() < 1e-8);
    }

    /// Density after `x = u^{1/a}`: `pdf(x) dx/du`, finite at `u = 0`.
    fn law_pdf_sub(law: &LawDescriptor, u: f64, a: f64) -> f64 {
        if u == 0.0 {
            // pdf(x) ~ C x^{a-1}, dx/du = u^{1/a - 1}/a, product -> C/a
            let x = 1e-12f64;
            return law.pdf(x).unwrap() * x.powf(1.0 - a) / a;
        }
        let x = u.powf(1.0 / a);
        law.pdf(x).unwrap() * x / (a * u)
    }

    fn law_pdf_sub_hi(law: &LawDescriptor, w: f64, b: f64) -> f64 {
        if w == 0.0 {
            let y = 1e-12f64;
            return law.pdf(1.0 - y).unwrap() * y.powf(1.0 - b) / b;
        }
        let y = w.powf(1.0 / b);
        law.pdf(1.0 - y).unwrap() * y / (b * w)
    }

    #[test]
    fn regime_examples() {
        let g = regime_law(2, Regime::Central(0.5), Quantity::Degree).unwrap();
        let p = 0.5f64.powf(2.0 / 3.0);
        assert!((g.pmf(3).unwrap() - p * (1.0 - p).powi(3)).abs() < 1e-15);
        let nb = regime_law(2, Regime::Central(0.5), Quantity::Descendants).unwrap();
        assert!((nb.pmf(2).unwrap() - gbin_f64(2.0 - 1.0 / 3.0, 2) * 0.5f64.powf(2.0 / 3.0) * 0.25).abs() < 1e-14);
        assert_eq!(regime_law(3, Regime::Large, Quantity::Degree).unwrap(), LawDescriptor::PointMass { at: 0.0 });
        assert_eq!(regime_law(3, Regime::Large, Quantity::Descendants).unwrap().pmf(1).unwrap(), 1.0);
        assert!(regime_law(2, Regime::Central(1.0), Quantity::Degree).is_err());
        assert!(regime_law(2, Regime::Fixed(2), Quantity::Degree).unwrap().pmf(0).is_err());
        // beta and gamma moments agree with the descendant moment formulas
        for k in 1..=3 {
            for j in 1..=3 {
                let b = regime_law(k, Regime::Fixed(j), Quantity::Descendants).unwrap();
                for s in 0..=4 {
                    assert!((b.moment(s) - crate::exact::moment_xj(k, j, s as u64)).abs() < 1e-12);
                }
            }
            let g = regime_law(k, Regime::Small, Quantity::Descendants).unwrap();
            for s in 0..=4 {
                assert!((g.moment(s) - crate::exact::moment_x(k, s as u64)).abs() < 1e-10);
            }
        }
        let e = regime_law(2, Regime::Small, Quantity::Degree).unwrap();
        assert!((e.moment(3) - 6.0).abs() < 1e-12);
        let geo = regime_law(1, Regime::Central(0.25), Quantity::Degree).unwrap();
        assert!((geo.moment(1) - (1.0 - 0.5) / 0.5).abs() < 1e-12);
    }
}
