use std::io::Write;

use anyhow::{bail, Result};
use clap::Args;
use mpbounds::bounds::Regime;
use mpbounds::measures::measure_vector;
use mpbounds::{
    check_conditions, max_admissible_gamma, partition_gammas, theorem1_bound, theorem2_bound,
    theorem3_bound, theorem4_bound, theorem5_bound, theorem6_bound, BoundReport, ExponentConfig,
    GammaLimit, MeasureKind, MeasureVector, Orientation,
};

use crate::format::{Format, Record};
use crate::{Kind, StateSource, EXIT_CONDITIONS, EXIT_FAILED, EXIT_OK};

#[derive(Clone, Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// 1-3: monogamy lower bounds, 4-6: polygamy upper bounds
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub theorem: u8,

    #[arg(long)]
    pub eta: f64,

    #[arg(long, default_value_t = 2.0)]
    pub base_power: f64,

    /// Defaults to concurrence for theorems 1-3 and assistance for 4-6
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,

    /// Head threshold; the largest admissible value when omitted
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Tail threshold (theorems 3 and 6); defaults to --gamma when that is given
    #[arg(long)]
    pub gamma_prime: Option<f64>,

    /// Partition index (theorems 3 and 6); the largest admissible one when omitted
    #[arg(long)]
    pub m: Option<usize>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Caller choices for the threshold parameters; `None` selects automatically.
#[derive(Clone, Copy, Debug, Default)]
pub struct Selection {
    pub gamma: Option<f64>,
    pub gamma_prime: Option<f64>,
    pub m: Option<usize>,
}

pub fn regime_of(theorem: u8) -> Regime {
    if theorem <= 3 {
        Regime::Monogamy
    } else {
        Regime::Polygamy
    }
}

pub fn default_kind(theorem: u8) -> Kind {
    match regime_of(theorem) {
        Regime::Monogamy => Kind::Concurrence,
        Regime::Polygamy => Kind::Assistance,
    }
}

/// Largest `gamma` for the two-party bounds, in whichever orientation holds.
pub fn auto_pair_gamma(mv: &MeasureVector) -> f64 {
    let [e1, e2] = match mv.pairwise[..] {
        [a, b] => [a, b],
        _ => return 1.0,
    };
    match max_admissible_gamma(e1, e2) {
        GammaLimit::Finite(g) => g.max(1.0),
        GammaLimit::SwapRoles if e1 > 0.0 => e2 / e1,
        _ => 1.0,
    }
}

/// Resolves `(gamma, gamma', m)` for the partition bounds.
pub fn resolve_partition(
    mv: &MeasureVector,
    sel: &Selection,
    base_power: f64,
) -> Result<(f64, f64, usize)> {
    let max_m = mv.parties().saturating_sub(3);
    if sel.gamma.is_none() && sel.gamma_prime.is_none() {
        let tightest = |m: usize| partition_gammas(mv, m).map(|(g, gp)| (g, gp, m));
        return Ok(match sel.m {
            Some(m) => tightest(m).unwrap_or((1.0, 1.0, m)),
            None => (1..=max_m)
                .rev()
                .find_map(tightest)
                .unwrap_or((1.0, 1.0, 1)),
        });
    }
    let gamma = sel.gamma.unwrap_or(1.0);
    let gamma_prime = sel.gamma_prime.unwrap_or(gamma);
    let m = match sel.m {
        Some(m) => m,
        None => check_conditions(mv, gamma, gamma_prime, base_power)?
            .m
            .unwrap_or(1),
    };
    Ok((gamma, gamma_prime, m))
}

pub fn evaluate(
    theorem: u8,
    mv: &MeasureVector,
    cfg: &ExponentConfig,
    sel: &Selection,
) -> Result<BoundReport> {
    Ok(match theorem {
        1 => theorem1_bound(mv, cfg)?,
        4 => theorem4_bound(mv, cfg)?,
        2 | 5 => {
            let gamma = sel.gamma.unwrap_or_else(|| auto_pair_gamma(mv));
            if theorem == 2 {
                theorem2_bound(mv, cfg, gamma)?
            } else {
                theorem5_bound(mv, cfg, gamma)?
            }
        }
        3 | 6 => {
            if mv.parties() < 4 {
                bail!(
                    "theorem {theorem} needs at least 4 parties, the state has {}",
                    mv.parties()
                );
            }
            let (gamma, gamma_prime, m) = resolve_partition(mv, sel, cfg.base_power)?;
            if theorem == 3 {
                theorem3_bound(mv, cfg, gamma, gamma_prime, m)?
            } else {
                theorem6_bound(mv, cfg, gamma, gamma_prime, m)?
            }
        }
        other => bail!("unknown theorem {other}"),
    })
}

pub fn verdict(report: &BoundReport) -> &'static str {
    if !report.conditions.satisfied {
        "not applicable"
    } else if report.is_violation() {
        "violated"
    } else {
        "sound"
    }
}

pub fn exit_code(report: &BoundReport) -> u8 {
    if !report.conditions.satisfied {
        EXIT_CONDITIONS
    } else if report.is_violation() {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

fn flags(v: &[bool]) -> String {
    v.iter()
        .map(|&b| if b { "pass" } else { "fail" })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn report_record(label: &str, kind: MeasureKind, r: &BoundReport) -> Record {
    let c = &r.conditions;
    let has_thresholds = !matches!(r.theorem, 1 | 4);
    let threshold = |v: f64| has_thresholds.then_some(v);
    let mut rec = Record::new();
    rec.push("state", label)
        .push("kind", kind.label())
        .push("theorem", r.theorem as usize)
        .push(
            "regime",
            match r.regime {
                Regime::Monogamy => "monogamy",
                Regime::Polygamy => "polygamy",
            },
        )
        .push("eta", r.exponents.eta)
        .push("base_power", r.exponents.base_power)
        .push("t", r.exponents.t())
        .push("gamma", threshold(c.gamma))
        .push("gamma_prime", threshold(c.gamma_prime))
        .push("k", threshold(c.k))
        .push("k_prime", threshold(c.k_prime))
        .push("m", c.m)
        .push(
            "orientation",
            r.orientation.map(|o| match o {
                Orientation::Forward => "forward",
                Orientation::Swapped => "swapped",
            }),
        )
        .push("lhs", r.lhs)
        .push("bound_new", r.bound_new)
        .push("bound_chain_mid", r.bound_chain_mid)
        .push("bound_chain_tail", r.bound_chain_tail)
        .push("bound_poly_tail", r.bound_poly_tail)
        .push("head_conditions", has_thresholds.then(|| flags(&c.head)))
        .push("tail_conditions", has_thresholds.then(|| flags(&c.tail)))
        .push("conditions_satisfied", c.satisfied)
        .push("gap", r.gap)
        .push("degenerate", r.degenerate)
        .push("verdict", verdict(r));
    rec
}

pub fn run(args: &BoundsArgs, out: &mut dyn Write) -> Result<u8> {
    let (label, psi) = args.source.load()?;
    let kind = MeasureKind::from(args.kind.unwrap_or_else(|| default_kind(args.theorem)));
    let mv = measure_vector(&psi, kind)?;
    let cfg = ExponentConfig::new(args.base_power, args.eta)?;
    let sel = Selection {
        gamma: args.gamma,
        gamma_prime: args.gamma_prime,
        m: args.m,
    };
    let report = evaluate(args.theorem, &mv, &cfg, &sel)?;
    report_record(&label, kind, &report).write(out, args.format)?;
    Ok(exit_code(&report))
}
