//! Tightened monogamy lower bounds and polygamy upper bounds.
//!
//! Given the one-to-rest value `E(A|B_1...B_{N-1})`, the pairwise values
//! `E(A|B_i)` and an exponent `eta`, each evaluator returns a [`BoundReport`]
//! with the new bound, the weaker comparison bounds, the precondition flags
//! and the gap to the left-hand side `E^eta(A|rest)`.
//!
//! | evaluator          | regime    | parties | precondition                        |
//! |--------------------|-----------|---------|-------------------------------------|
//! | [`theorem1_bound`] | monogamy  | N >= 3  | none (values are relabeled)         |
//! | [`theorem2_bound`] | monogamy  | N = 3   | `E_1 >= g E_2` or `g E_1 <= E_2`    |
//! | [`theorem3_bound`] | monogamy  | N >= 4  | head/tail partition at index `m`    |
//! | [`theorem4_bound`] | polygamy  | N >= 3  | none (values are relabeled)         |
//! | [`theorem5_bound`] | polygamy  | N = 3   | as theorem 2                        |
//! | [`theorem6_bound`] | polygamy  | N >= 4  | as theorem 3                        |
//!
//! With `t = eta / base_power`, monogamy evaluators need `t >= 1` and
//! polygamy evaluators `0 <= t <= 1`. The comparison columns are the weaker
//! members of the scalar chains in [`crate::scalar`]: `chain_mid` replaces
//! the tight two-term step by `(k+1)^t - k^t`, `chain_tail` by `2^t - 1`, and
//! (polygamy only) `poly_tail` by `t`.
//!
//! When preconditions fail the formula value is still reported, with
//! `conditions.satisfied == false`; no bound is claimed in that case.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MeasureVector;
use crate::real::{pow, Real};
use crate::scalar::{
    mono_cross_coeff, mono_power_coeff, poly_cross_coeff, poly_power_coeff, WeightedCoefficients,
};

/// Relative slack on the `gamma` threshold comparisons.
pub const CONDITION_RTOL: f64 = 1e-9;
/// A report is a violation when its gap is below `-SOUNDNESS_TOL`.
pub const SOUNDNESS_TOL: f64 = 1e-9;
/// Absolute slack on the ordering of the bound columns.
pub const CHAIN_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Monogamy,
    Polygamy,
}

/// Exponents entering every bound: the base power (`alpha_c` for monogamy,
/// `beta_c` for polygamy) and `eta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentConfig<T> {
    pub base_power: T,
    pub eta: T,
}

impl<T: Real> ExponentConfig<T> {
    pub fn new(base_power: T, eta: T) -> Result<Self> {
        if !base_power.is_finite() || base_power <= T::zero() {
            return Err(Error::Domain(format!(
                "base power must be > 0, got {base_power}"
            )));
        }
        if !eta.is_finite() || eta < T::zero() {
            return Err(Error::Domain(format!("eta must be >= 0, got {eta}")));
        }
        Ok(Self { base_power, eta })
    }

    /// Config valid for the monogamy evaluators (`eta >= base_power`).
    pub fn monogamy(base_power: T, eta: T) -> Result<Self> {
        let cfg = Self::new(base_power, eta)?;
        cfg.check(Regime::Monogamy)?;
        Ok(cfg)
    }

    /// Config valid for the polygamy evaluators (`0 <= eta <= base_power`).
    pub fn polygamy(base_power: T, eta: T) -> Result<Self> {
        let cfg = Self::new(base_power, eta)?;
        cfg.check(Regime::Polygamy)?;
        Ok(cfg)
    }

    pub fn t(&self) -> T {
        self.eta / self.base_power
    }

    fn check(&self, regime: Regime) -> Result<()> {
        let t = self.t();
        match regime {
            Regime::Monogamy if t < T::one() => Err(Error::Domain(format!(
                "monogamy bounds need eta >= base power (t = {t} < 1)"
            ))),
            Regime::Polygamy if t > T::one() => Err(Error::Domain(format!(
                "polygamy bounds need eta <= base power (t = {t} > 1)"
            ))),
            _ => Ok(()),
        }
    }
}

/// Threshold parameters and which partition conditions hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionConditions<T> {
    pub gamma: T,
    pub gamma_prime: T,
    /// `gamma^base_power`
    pub k: T,
    /// `gamma_prime^base_power`
    pub k_prime: T,
    /// Partition index used (multi-party evaluators) or the largest admissible one.
    pub m: Option<usize>,
    /// `head[i-1]`: `E_i >= gamma * sum_{l>i} E_l`. For the two-party
    /// evaluators, the single entry is `E_1 >= gamma E_2`.
    pub head: Vec<bool>,
    /// `tail[j-1]`: `gamma' E_j <= sum_{l>j} E_l`. For the two-party
    /// evaluators, the single entry is `gamma E_1 <= E_2`.
    pub tail: Vec<bool>,
    /// Every admissible partition index, ascending.
    pub admissible: Vec<usize>,
    pub satisfied: bool,
}

impl<T: Real> PartitionConditions<T> {
    fn unconditional() -> Self {
        Self {
            gamma: T::one(),
            gamma_prime: T::one(),
            k: T::one(),
            k_prime: T::one(),
            m: None,
            head: Vec::new(),
            tail: Vec::new(),
            admissible: Vec::new(),
            satisfied: true,
        }
    }
}

/// Which of the two pairwise values carries the leading `E^eta` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `E_1 >= gamma E_2`: `E_1` leads.
    Forward,
    /// `gamma E_1 <= E_2`: roles swapped, `E_2` leads.
    Swapped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub theorem: u8,
    pub regime: Regime,
    pub exponents: ExponentConfig<T>,
    /// `E^eta` of the one-to-rest cut.
    pub lhs: T,
    pub bound_new: T,
    pub bound_chain_mid: T,
    pub bound_chain_tail: T,
    pub bound_poly_tail: Option<T>,
    pub conditions: PartitionConditions<T>,
    pub orientation: Option<Orientation>,
    /// `lhs - bound_new` (monogamy) or `bound_new - lhs` (polygamy).
    pub gap: T,
    /// All measure values are zero; every entry is reported as 0.
    pub degenerate: bool,
}

impl<T: Real> BoundReport<T> {
    /// Preconditions hold and the bound is violated beyond `SOUNDNESS_TOL`.
    pub fn is_violation(&self) -> bool {
        self.conditions.satisfied && self.gap < -T::lit(SOUNDNESS_TOL)
    }

    /// Whether the bound columns are ordered as the chains predict, with
    /// absolute slack `slack`.
    pub fn chain_ordered(&self, slack: T) -> bool {
        match self.regime {
            Regime::Monogamy => {
                self.bound_new >= self.bound_chain_mid - slack
                    && self.bound_chain_mid >= self.bound_chain_tail - slack
            }
            Regime::Polygamy => {
                let poly = self.bound_poly_tail.unwrap_or(self.bound_chain_tail);
                self.bound_new <= self.bound_chain_mid + slack
                    && self.bound_chain_mid <= self.bound_chain_tail + slack
                    && self.bound_chain_tail <= poly + slack
            }
        }
    }
}

struct Columns<T> {
    new: T,
    mid: T,
    tail: T,
    poly_tail: T,
}

fn validate_inputs<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    regime: Regime,
) -> Result<()> {
    ExponentConfig::new(cfg.base_power, cfg.eta)?.check(regime)?;
    if std::iter::once(&mv.one_to_rest)
        .chain(&mv.pairwise)
        .any(|v| !v.is_finite() || *v < T::zero())
    {
        return Err(Error::Domain(
            "measure values must be finite and >= 0".into(),
        ));
    }
    Ok(())
}

fn check_gamma<T: Real>(name: &str, g: T) -> Result<()> {
    if !g.is_finite() || g < T::one() {
        return Err(Error::Domain(format!(
            "{name} must be a finite value >= 1, got {g}"
        )));
    }
    Ok(())
}

fn assemble<T: Real>(
    theorem: u8,
    regime: Regime,
    mv: &MeasureVector<T>,
    cfg: ExponentConfig<T>,
    conditions: PartitionConditions<T>,
    orientation: Option<Orientation>,
    cols: Columns<T>,
) -> BoundReport<T> {
    let degenerate = mv.is_all_zero();
    let poly = regime == Regime::Polygamy;
    if degenerate {
        return BoundReport {
            theorem,
            regime,
            exponents: cfg,
            lhs: T::zero(),
            bound_new: T::zero(),
            bound_chain_mid: T::zero(),
            bound_chain_tail: T::zero(),
            bound_poly_tail: poly.then(T::zero),
            conditions,
            orientation,
            gap: T::zero(),
            degenerate,
        };
    }
    let lhs = pow(mv.one_to_rest, cfg.eta);
    let gap = match regime {
        Regime::Monogamy => lhs - cols.new,
        Regime::Polygamy => cols.new - lhs,
    };
    BoundReport {
        theorem,
        regime,
        exponents: cfg,
        lhs,
        bound_new: cols.new,
        bound_chain_mid: cols.mid,
        bound_chain_tail: cols.tail,
        bound_poly_tail: poly.then_some(cols.poly_tail),
        conditions,
        orientation,
        gap,
        degenerate,
    }
}

fn sorted_desc<T: Real>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

fn weighted_sum_bound<T: Real>(
    theorem: u8,
    regime: Regime,
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
) -> Result<BoundReport<T>> {
    validate_inputs(mv, cfg, regime)?;
    if mv.parties() < 3 {
        return Err(Error::Domain(format!(
            "need N >= 3 parties, got {}",
            mv.parties()
        )));
    }
    let t = cfg.t();
    // Relabel so the pairwise values are nonincreasing.
    let e = sorted_desc(&mv.pairwise);
    let coeffs = WeightedCoefficients::new(e.len(), t)?;
    let powered: Vec<T> = e.iter().map(|&v| pow(v, cfg.eta)).collect();
    let rest: T = powered[1..].iter().copied().sum();
    let step = pow(T::lit(2.0), t) - T::one();
    let tail = powered[0] + step * rest;
    let cols = Columns {
        new: coeffs.apply(
            &e.iter()
                .map(|&v| pow(v, cfg.base_power))
                .collect::<Vec<_>>(),
        ),
        // No k-family exists here; the mid column coincides with the tail.
        mid: tail,
        tail,
        poly_tail: powered[0] + t * rest,
    };
    Ok(assemble(
        theorem,
        regime,
        mv,
        *cfg,
        PartitionConditions::unconditional(),
        None,
        cols,
    ))
}

/// Lower bound `sum_j [j^t - (j-1)^t] E_(j)^eta` over the pairwise values
/// sorted nonincreasing.
pub fn theorem1_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
) -> Result<BoundReport<T>> {
    weighted_sum_bound(1, Regime::Monogamy, mv, cfg)
}

/// Upper bound with the same weighted sum as [`theorem1_bound`], for `t <= 1`.
pub fn theorem4_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
) -> Result<BoundReport<T>> {
    weighted_sum_bound(4, Regime::Polygamy, mv, cfg)
}

fn cross_term<T: Real>(coeff: T, base_factor: T, eta_factor: T, cfg: &ExponentConfig<T>) -> T {
    // coeff * base_factor^base_power * eta_factor^(eta - base_power); the term
    // is 0 whenever its coefficient or powered factor vanishes, even if the
    // other factor would be raised to a negative power of zero.
    if coeff == T::zero() || base_factor == T::zero() {
        return T::zero();
    }
    coeff * pow(base_factor, cfg.base_power) * pow(eta_factor, cfg.eta - cfg.base_power)
}

fn tight_coeffs<T: Real>(regime: Regime, k: T, t: T) -> (T, T) {
    match regime {
        Regime::Monogamy => (mono_cross_coeff(k, t), mono_power_coeff(k, t)),
        Regime::Polygamy => (poly_cross_coeff(k, t), poly_power_coeff(k, t)),
    }
}

fn at_least<T: Real>(big: T, small: T) -> bool {
    big >= small * (T::one() - T::lit(CONDITION_RTOL))
}

fn two_party_bound<T: Real>(
    theorem: u8,
    regime: Regime,
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
) -> Result<BoundReport<T>> {
    validate_inputs(mv, cfg, regime)?;
    check_gamma("gamma", gamma)?;
    if mv.parties() != 3 {
        return Err(Error::Domain(format!(
            "two-party bounds need exactly N = 3 parties, got {}",
            mv.parties()
        )));
    }
    let (e1, e2) = (mv.pairwise[0], mv.pairwise[1]);
    let t = cfg.t();
    let k = pow(gamma, cfg.base_power);
    let forward = at_least(e1, gamma * e2);
    let swapped = at_least(e2, gamma * e1);
    let orientation = if forward || (!swapped && e1 >= e2) {
        Orientation::Forward
    } else {
        Orientation::Swapped
    };
    let (lead, other) = match orientation {
        Orientation::Forward => (e1, e2),
        Orientation::Swapped => (e2, e1),
    };

    let (cross, power) = tight_coeffs(regime, k, t);
    let lead_eta = pow(lead, cfg.eta);
    let other_eta = pow(other, cfg.eta);
    let cols = Columns {
        new: lead_eta + cross_term(cross, other, lead, cfg) + power * other_eta,
        mid: lead_eta + (pow(k + T::one(), t) - pow(k, t)) * other_eta,
        tail: lead_eta + (pow(T::lit(2.0), t) - T::one()) * other_eta,
        poly_tail: lead_eta + t * other_eta,
    };
    let conditions = PartitionConditions {
        gamma,
        gamma_prime: gamma,
        k,
        k_prime: k,
        m: None,
        head: vec![forward],
        tail: vec![swapped],
        admissible: Vec::new(),
        satisfied: forward || swapped,
    };
    Ok(assemble(
        theorem,
        regime,
        mv,
        *cfg,
        conditions,
        Some(orientation),
        cols,
    ))
}

/// Three-party lower bound
/// `E_1^eta + (kt/(k+1)) E_1^(eta-a) E_2^a + [(k+1)^t - (1 + t/(k+1)) k^t] E_2^eta`
/// with `k = gamma^a`, valid when `E_1 >= gamma E_2`; when instead
/// `gamma E_1 <= E_2` the roles of the two values are exchanged.
pub fn theorem2_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
) -> Result<BoundReport<T>> {
    two_party_bound(2, Regime::Monogamy, mv, cfg, gamma)
}

/// Three-party upper bound
/// `E_1^eta + (k^2 t/(k+1)^2) E_1^(eta-b) E_2^b + ((k+1)^t - [kt/(k+1)^2 + 1] k^t) E_2^eta`,
/// with the same orientation rule as [`theorem2_bound`].
pub fn theorem5_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
) -> Result<BoundReport<T>> {
    two_party_bound(5, Regime::Polygamy, mv, cfg, gamma)
}

/// Evaluates the head conditions `E_i >= gamma sum_{l>i} E_l` and tail
/// conditions `gamma' E_j <= sum_{l>j} E_l` (for `i, j = 1..N-2`, in label
/// order) and collects every admissible partition index `1 <= m <= N-3`.
/// `m` in the result is the largest admissible index.
pub fn check_conditions<T: Real>(
    mv: &MeasureVector<T>,
    gamma: T,
    gamma_prime: T,
    base_power: T,
) -> Result<PartitionConditions<T>> {
    check_gamma("gamma", gamma)?;
    check_gamma("gamma'", gamma_prime)?;
    let e = &mv.pairwise;
    let n1 = e.len();
    let suffix = suffix_sums(e);
    let inner = n1.saturating_sub(1);
    let head: Vec<bool> = (0..inner)
        .map(|i| at_least(e[i], gamma * suffix[i + 1]))
        .collect();
    let tail: Vec<bool> = (0..inner)
        .map(|j| at_least(suffix[j + 1], gamma_prime * e[j]))
        .collect();
    let admissible: Vec<usize> = (1..n1.saturating_sub(1))
        .filter(|&m| head[..m].iter().all(|&h| h) && tail[m..].iter().all(|&t| t))
        .collect();
    Ok(PartitionConditions {
        gamma,
        gamma_prime,
        k: pow(gamma, base_power),
        k_prime: pow(gamma_prime, base_power),
        m: admissible.last().copied(),
        satisfied: !admissible.is_empty(),
        head,
        tail,
        admissible,
    })
}

/// `suffix[i] = sum_{l >= i} e[l]`, with a trailing 0.
fn suffix_sums<T: Real>(e: &[T]) -> Vec<T> {
    let mut s = vec![T::zero(); e.len() + 1];
    for i in (0..e.len()).rev() {
        s[i] = s[i + 1] + e[i];
    }
    s
}

/// Largest `(gamma, gamma')` making partition index `m` admissible for the
/// pairwise values in label order, or `None` if even `gamma = gamma' = 1`
/// fails. An unbounded threshold is reported as 1: it only arises when every
/// term it multiplies vanishes.
pub fn partition_gammas<T: Real>(mv: &MeasureVector<T>, m: usize) -> Option<(T, T)> {
    let e = &mv.pairwise;
    let n1 = e.len();
    if m < 1 || m + 2 > n1 {
        return None;
    }
    let suffix = suffix_sums(e);
    let mut gamma = T::infinity();
    for i in 0..m {
        if suffix[i + 1] > T::zero() {
            gamma = gamma.min(e[i] / suffix[i + 1]);
        }
    }
    let mut gamma_prime = T::infinity();
    for j in m..n1 - 1 {
        if e[j] > T::zero() {
            gamma_prime = gamma_prime.min(suffix[j + 1] / e[j]);
        }
    }
    let finite_or_one = |g: T| if g.is_finite() { g } else { T::one() };
    let (gamma, gamma_prime) = (finite_or_one(gamma), finite_or_one(gamma_prime));
    let admissible = |g: T| g >= T::one() * (T::one() - T::lit(CONDITION_RTOL));
    (admissible(gamma) && admissible(gamma_prime))
        .then(|| (gamma.max(T::one()), gamma_prime.max(T::one())))
}

fn partition_bound<T: Real>(
    theorem: u8,
    regime: Regime,
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
    gamma_prime: T,
    m: usize,
) -> Result<BoundReport<T>> {
    validate_inputs(mv, cfg, regime)?;
    let parties = mv.parties();
    if parties < 4 {
        return Err(Error::Domain(format!(
            "partition bounds need N >= 4 parties, got {parties}"
        )));
    }
    if m < 1 || m > parties - 3 {
        return Err(Error::Domain(format!(
            "partition index m = {m} outside 1..={}",
            parties - 3
        )));
    }
    let mut conditions = check_conditions(mv, gamma, gamma_prime, cfg.base_power)?;
    conditions.m = Some(m);
    conditions.satisfied = conditions.admissible.contains(&m);
    let (k, kp) = (conditions.k, conditions.k_prime);

    let t = cfg.t();
    let e = &mv.pairwise;
    let n1 = e.len();
    let powered: Vec<T> = e.iter().map(|&v| pow(v, cfg.eta)).collect();
    let (second_last, last) = (n1 - 2, n1 - 1);
    let middle: T = powered[m..second_last].iter().copied().sum();

    // Head terms use step^(i-1), the middle block step^m * step', the final
    // pair step^m * {closing pair}. Each comparison column swaps in weaker steps.
    let layout = |step: T, step_p: T, closing: T| -> T {
        let head: T = powered[..m]
            .iter()
            .enumerate()
            .map(|(i, &p)| step.powi(i as i32) * p)
            .sum();
        let scale = step.powi(m as i32);
        head + scale * step_p * middle + scale * closing
    };

    let step = pow(k + T::one(), t) - pow(k, t);
    let step_p = pow(kp + T::one(), t) - pow(kp, t);
    let (cross_p, power_p) = tight_coeffs(regime, kp, t);
    let tight_closing = power_p * powered[second_last]
        + cross_term(cross_p, e[second_last], e[last], cfg)
        + powered[last];
    let closing_with = |s: T| s * powered[second_last] + powered[last];

    let two_step = pow(T::lit(2.0), t) - T::one();
    let cols = Columns {
        new: layout(step, step_p, tight_closing),
        mid: layout(step, step_p, closing_with(step_p)),
        tail: layout(two_step, two_step, closing_with(two_step)),
        poly_tail: layout(t, t, closing_with(t)),
    };
    Ok(assemble(theorem, regime, mv, *cfg, conditions, None, cols))
}

/// Multi-party lower bound for a head/tail partition at index `m`, in the
/// pairwise label order given.
pub fn theorem3_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
    gamma_prime: T,
    m: usize,
) -> Result<BoundReport<T>> {
    partition_bound(3, Regime::Monogamy, mv, cfg, gamma, gamma_prime, m)
}

/// Multi-party upper bound for a head/tail partition at index `m`.
pub fn theorem6_bound<T: Real>(
    mv: &MeasureVector<T>,
    cfg: &ExponentConfig<T>,
    gamma: T,
    gamma_prime: T,
    m: usize,
) -> Result<BoundReport<T>> {
    partition_bound(6, Regime::Polygamy, mv, cfg, gamma, gamma_prime, m)
}

/// Largest admissible threshold for `e1 >= gamma e2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaLimit<T> {
    Finite(T),
    /// `e2 = 0 < e1`: every `gamma >= 1` qualifies.
    Unbounded,
    /// `e1 < e2`: exchange the roles of the two values.
    SwapRoles,
    /// Both values are zero.
    Degenerate,
}

pub fn max_admissible_gamma<T: Real>(e1: T, e2: T) -> GammaLimit<T> {
    if e1 == T::zero() && e2 == T::zero() {
        GammaLimit::Degenerate
    } else if e1 < e2 {
        GammaLimit::SwapRoles
    } else if e2 == T::zero() {
        GammaLimit::Unbounded
    } else {
        GammaLimit::Finite(e1 / e2)
    }
}
