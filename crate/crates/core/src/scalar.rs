//! Scalar inequality kernel.
//!
//! Everything the bound evaluators compose lives here as pure functions of a
//! handful of reals:
//!
//! * the coefficient pattern `j^t - (j-1)^t` that weights sorted power sums,
//! * the two-point gaps `(1+x)^mu - x^mu` versus `(m+1)^mu - m^mu`,
//! * the inequality chains for `(1+x)^mu` on `0 <= x <= 1/k`, whose weaker
//!   members reproduce the older power-weighted bounds.
//!
//! All functions validate their domain and return [`Error::Domain`] rather
//! than clamping.

use crate::error::{Error, Result};
use crate::real::{pow, Real};

fn check_finite<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}

/// Ratio parameter `k` and exponent `mu` of one inequality chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams<T> {
    pub k: T,
    pub mu: T,
}

impl<T: Real> ChainParams<T> {
    /// Parameters for the lower-bound chain (`k >= 1`, `mu >= 1`).
    pub fn monogamy(k: T, mu: T) -> Result<Self> {
        check_finite("k", k)?;
        check_finite("mu", mu)?;
        if k < T::one() {
            return Err(Error::Domain(format!("chain ratio k = {k} must be >= 1")));
        }
        if mu < T::one() {
            return Err(Error::Domain(format!(
                "monogamy exponent mu = {mu} must be >= 1"
            )));
        }
        Ok(Self { k, mu })
    }

    /// Parameters for the upper-bound chain (`k >= 1`, `0 <= mu <= 1`).
    pub fn polygamy(k: T, mu: T) -> Result<Self> {
        check_finite("k", k)?;
        check_finite("mu", mu)?;
        if k < T::one() {
            return Err(Error::Domain(format!("chain ratio k = {k} must be >= 1")));
        }
        if mu < T::zero() || mu > T::one() {
            return Err(Error::Domain(format!(
                "polygamy exponent mu = {mu} must lie in [0, 1]"
            )));
        }
        Ok(Self { k, mu })
    }

    /// `(k+1)^mu - k^mu`, the coefficient shared by the middle chain members.
    pub fn step(&self) -> T {
        pow(self.k + T::one(), self.mu) - pow(self.k, self.mu)
    }

    fn check_x(&self, x: T) -> Result<()> {
        check_finite("x", x)?;
        let upper = T::one() / self.k;
        if x < T::zero() || x > upper * (T::one() + T::lit(1e-12)) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1/k = {upper}]")));
        }
        Ok(())
    }
}

/// Coefficients `c_j = j^t - (j-1)^t` for `j = 1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCoefficients<T> {
    pub t: T,
    pub coeffs: Vec<T>,
}

impl<T: Real> WeightedCoefficients<T> {
    pub fn new(n: usize, t: T) -> Result<Self> {
        let coeffs = (1..=n)
            .map(|j| coeff_step(j, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { t, coeffs })
    }

    /// `sum_j c_j * a_j^t` over the leading `min(n, a.len())` entries.
    pub fn apply(&self, a: &[T]) -> T {
        self.coeffs
            .iter()
            .zip(a)
            .map(|(&c, &v)| c * pow(v, self.t))
            .sum()
    }
}

/// `j^t - (j-1)^t`; `c_1 = 1` for every `t`, including `t = 0`.
pub fn coeff_step<T: Real>(j: usize, t: T) -> Result<T> {
    check_finite("t", t)?;
    match j {
        0 => Err(Error::Domain("coefficient index j must be >= 1".into())),
        1 => Ok(T::one()),
        _ => {
            let j = T::from_usize(j);
            Ok(pow(j, t) - pow(j - T::one(), t))
        }
    }
}

fn check_gap_domain<T: Real>(x: T, m: T) -> Result<()> {
    check_finite("x", x)?;
    check_finite("m", m)?;
    if m < T::one() || x < m {
        return Err(Error::Domain(format!(
            "need x >= m >= 1, got x = {x}, m = {m}"
        )));
    }
    Ok(())
}

/// `(1+x)^mu - x^mu - (m+1)^mu + m^mu`, nonnegative for `x >= m >= 1`, `mu >= 1`.
pub fn lemma1_gap<T: Real>(x: T, m: T, mu: T) -> Result<T> {
    check_gap_domain(x, m)?;
    check_finite("mu", mu)?;
    if mu < T::one() {
        return Err(Error::Domain(format!("mu = {mu} must be >= 1")));
    }
    let one = T::one();
    Ok((one + x).powf(mu) - x.powf(mu) - (m + one).powf(mu) + m.powf(mu))
}

/// `x^mu + (m+1)^mu - m^mu - (1+x)^mu`, nonnegative for `x >= m >= 1`, `0 <= mu <= 1`.
pub fn lemma4_gap<T: Real>(x: T, m: T, mu: T) -> Result<T> {
    check_gap_domain(x, m)?;
    check_finite("mu", mu)?;
    if mu < T::zero() || mu > T::one() {
        return Err(Error::Domain(format!("mu = {mu} must lie in [0, 1]")));
    }
    let one = T::one();
    Ok(pow(x, mu) + pow(m + one, mu) - pow(m, mu) - pow(one + x, mu))
}

fn check_sorted_nonneg<T: Real>(a: &[T]) -> Result<()> {
    for (i, &v) in a.iter().enumerate() {
        check_finite("a_j", v)?;
        if v < T::zero() {
            return Err(Error::Domain(format!("entry {i} is negative ({v})")));
        }
        if i > 0 && v > a[i - 1] {
            return Err(Error::Unsorted { index: i });
        }
    }
    Ok(())
}

fn weighted_power_sum<T: Real>(a: &[T], mu: T) -> Result<T> {
    Ok(WeightedCoefficients::new(a.len(), mu)?.apply(a))
}

/// `sum_j (j^mu - (j-1)^mu) a_j^mu`, a lower bound on `(sum a)^mu` for `mu >= 1`.
///
/// `a` must already be sorted nonincreasing.
pub fn weighted_power_lower<T: Real>(a: &[T], mu: T) -> Result<T> {
    check_finite("mu", mu)?;
    if mu < T::one() {
        return Err(Error::Domain(format!("mu = {mu} must be >= 1")));
    }
    check_sorted_nonneg(a)?;
    weighted_power_sum(a, mu)
}

/// Same weighted sum as [`weighted_power_lower`]; an upper bound on
/// `(sum a)^mu` for `0 <= mu <= 1`.
pub fn weighted_power_upper<T: Real>(a: &[T], mu: T) -> Result<T> {
    check_finite("mu", mu)?;
    if mu < T::zero() || mu > T::one() {
        return Err(Error::Domain(format!("mu = {mu} must lie in [0, 1]")));
    }
    check_sorted_nonneg(a)?;
    weighted_power_sum(a, mu)
}

/// Members of the lower-bound chain `(1+x)^mu >= tight >= mid >= tail`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonoChain<T> {
    pub lhs: T,
    /// `1 + (k mu/(k+1)) x + [(k+1)^mu - (1 + mu/(k+1)) k^mu] x^mu`
    pub tight: T,
    /// `1 + [(k+1)^mu - k^mu] x^mu`
    pub mid: T,
    /// `1 + (2^mu - 1) x^mu`
    pub tail: T,
}

/// Members of the upper-bound chain `(1+x)^mu <= tight <= mid <= tail <= poly_tail`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyChain<T> {
    pub lhs: T,
    /// `1 + (k^2 mu/(k+1)^2) x + ((k+1)^mu - [k mu/(k+1)^2 + 1] k^mu) x^mu`
    pub tight: T,
    /// `1 + [(k+1)^mu - k^mu] x^mu`
    pub mid: T,
    /// `1 + (2^mu - 1) x^mu`
    pub tail: T,
    /// `1 + mu x^mu`
    pub poly_tail: T,
}

/// Coefficient of the `x` term in the tight lower chain, `k mu / (k+1)`.
pub fn mono_cross_coeff<T: Real>(k: T, mu: T) -> T {
    k * mu / (k + T::one())
}

/// Coefficient of the `x^mu` term in the tight lower chain.
pub fn mono_power_coeff<T: Real>(k: T, mu: T) -> T {
    let one = T::one();
    pow(k + one, mu) - (one + mu / (k + one)) * pow(k, mu)
}

/// Coefficient of the `x` term in the tight upper chain, `k^2 mu / (k+1)^2`.
pub fn poly_cross_coeff<T: Real>(k: T, mu: T) -> T {
    let kp1 = k + T::one();
    k * k * mu / (kp1 * kp1)
}

/// Coefficient of the `x^mu` term in the tight upper chain.
pub fn poly_power_coeff<T: Real>(k: T, mu: T) -> T {
    let one = T::one();
    let kp1 = k + one;
    pow(kp1, mu) - (k * mu / (kp1 * kp1) + one) * pow(k, mu)
}

pub fn mono_chain<T: Real>(params: ChainParams<T>, x: T) -> Result<MonoChain<T>> {
    let ChainParams { k, mu } = ChainParams::monogamy(params.k, params.mu)?;
    params.check_x(x)?;
    let one = T::one();
    let xm = pow(x, mu);
    Ok(MonoChain {
        lhs: (one + x).powf(mu),
        tight: one + mono_cross_coeff(k, mu) * x + mono_power_coeff(k, mu) * xm,
        mid: one + params.step() * xm,
        tail: one + (pow(T::lit(2.0), mu) - one) * xm,
    })
}

pub fn poly_chain<T: Real>(params: ChainParams<T>, x: T) -> Result<PolyChain<T>> {
    let ChainParams { k, mu } = ChainParams::polygamy(params.k, params.mu)?;
    params.check_x(x)?;
    let one = T::one();
    let xm = pow(x, mu);
    Ok(PolyChain {
        lhs: pow(one + x, mu),
        tight: one + poly_cross_coeff(k, mu) * x + poly_power_coeff(k, mu) * xm,
        mid: one + params.step() * xm,
        tail: one + (pow(T::lit(2.0), mu) - one) * xm,
        poly_tail: one + mu * xm,
    })
}
