use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use itertools::Itertools;
use mpbounds::bounds::Regime;
use mpbounds::measures::measure_vector;
use mpbounds::states::haar_random_state;
use mpbounds::{
    partition_gammas, BoundReport, ExponentConfig, MeasureKind, MeasureVector, StateVector,
};
use rayon::prelude::*;

use crate::bounds_cmd::{auto_pair_gamma, evaluate, Selection};
use crate::format::{sig12, Format, Record};
use crate::{Kind, EXIT_FAILED, EXIT_OK};

#[derive(Clone, Debug, Args)]
pub struct FuzzArgs {
    /// Number of qubits (3 to 5)
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
    pub n: u8,

    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    /// Trial i uses the state seeded with seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Concurrence checks the monogamy bounds, assistance the polygamy bounds
    #[arg(long, value_enum, default_value = "concurrence")]
    pub kind: Kind,

    /// Comma-separated exponents; defaults to {1, 1.25, 1.5, 2} x base power
    /// (monogamy) or {0.25, 0.5, 0.75, 1} x base power (polygamy)
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,

    #[arg(long, default_value_t = 2.0)]
    pub base_power: f64,

    /// Directory receiving the states that violate a bound
    #[arg(long, default_value = "fuzz-failures")]
    pub failures_dir: PathBuf,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub n_qubits: usize,
    pub trials: usize,
    pub seed: u64,
    pub kind: MeasureKind,
    pub etas: Vec<f64>,
    pub base_power: f64,
}

impl FuzzConfig {
    pub fn regime(&self) -> Regime {
        match self.kind {
            MeasureKind::Concurrence => Regime::Monogamy,
            MeasureKind::ConcurrenceOfAssistance => Regime::Polygamy,
        }
    }

    pub fn default_etas(kind: MeasureKind, base_power: f64) -> Vec<f64> {
        let scale: &[f64] = match kind {
            MeasureKind::Concurrence => &[1.0, 1.25, 1.5, 2.0],
            MeasureKind::ConcurrenceOfAssistance => &[0.25, 0.5, 0.75, 1.0],
        };
        scale.iter().map(|s| s * base_power).collect()
    }

    fn validate(&self) -> Result<()> {
        if !(3..=5).contains(&self.n_qubits) {
            bail!("--n must be between 3 and 5, got {}", self.n_qubits);
        }
        if self.trials == 0 {
            bail!("--trials must be >= 1");
        }
        if self.etas.is_empty() {
            bail!("at least one exponent is required");
        }
        for &eta in &self.etas {
            match self.regime() {
                Regime::Monogamy => ExponentConfig::monogamy(self.base_power, eta)?,
                Regime::Polygamy => ExponentConfig::polygamy(self.base_power, eta)?,
            };
        }
        Ok(())
    }

    fn theorems(&self) -> [u8; 2] {
        let paired = self.n_qubits == 3;
        match (self.regime(), paired) {
            (Regime::Monogamy, true) => [1, 2],
            (Regime::Monogamy, false) => [1, 3],
            (Regime::Polygamy, true) => [4, 5],
            (Regime::Polygamy, false) => [4, 6],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TheoremTally {
    pub evaluations: usize,
    pub satisfied: usize,
    pub violations: usize,
    /// Smallest gap among evaluations whose conditions hold.
    pub worst_gap: Option<f64>,
}

impl TheoremTally {
    fn add(&mut self, r: &BoundReport) {
        self.evaluations += 1;
        if r.conditions.satisfied {
            self.satisfied += 1;
            self.worst_gap = Some(self.worst_gap.map_or(r.gap, |w| w.min(r.gap)));
        }
        if r.is_violation() {
            self.violations += 1;
        }
    }

    fn merge(&mut self, other: &TheoremTally) {
        self.evaluations += other.evaluations;
        self.satisfied += other.satisfied;
        self.violations += other.violations;
        self.worst_gap = match (self.worst_gap, other.worst_gap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub theorem: u8,
    pub eta: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub m: Option<usize>,
    /// Pairwise label order used (indices into the state's `B1..`).
    pub order: Vec<usize>,
    pub gap: f64,
    pub state: StateVector,
}

#[derive(Clone, Debug, Default)]
pub struct FuzzSummary {
    pub per_theorem: BTreeMap<u8, TheoremTally>,
    pub failures: Vec<Failure>,
}

impl FuzzSummary {
    pub fn total(&self) -> TheoremTally {
        let mut t = TheoremTally::default();
        for tally in self.per_theorem.values() {
            t.merge(tally);
        }
        t
    }
}

fn permuted(mv: &MeasureVector, order: &[usize]) -> MeasureVector {
    MeasureVector {
        one_to_rest: mv.one_to_rest,
        pairwise: order.iter().map(|&i| mv.pairwise[i]).collect(),
    }
}

/// All (threshold, label order) choices checked for one theorem.
fn selections(theorem: u8, mv: &MeasureVector) -> Vec<(Vec<usize>, Selection)> {
    let n1 = mv.pairwise.len();
    let identity: Vec<usize> = (0..n1).collect();
    match theorem {
        1 | 4 => vec![(identity, Selection::default())],
        2 | 5 => {
            let mut gammas = vec![1.0];
            let g = auto_pair_gamma(mv);
            if g != 1.0 {
                gammas.push(g);
            }
            gammas
                .into_iter()
                .map(|g| {
                    (
                        identity.clone(),
                        Selection {
                            gamma: Some(g),
                            ..Selection::default()
                        },
                    )
                })
                .collect()
        }
        _ => {
            let mut out = Vec::new();
            for order in (0..n1).permutations(n1) {
                let p = permuted(mv, &order);
                for m in 1..=n1 - 2 {
                    let unit = Selection {
                        gamma: Some(1.0),
                        gamma_prime: Some(1.0),
                        m: Some(m),
                    };
                    out.push((order.clone(), unit));
                    if let Some((g, gp)) = partition_gammas(&p, m) {
                        if (g, gp) != (1.0, 1.0) {
                            out.push((
                                order.clone(),
                                Selection {
                                    gamma: Some(g),
                                    gamma_prime: Some(gp),
                                    m: Some(m),
                                },
                            ));
                        }
                    }
                }
            }
            out
        }
    }
}

fn run_trial(cfg: &FuzzConfig, trial: usize) -> Result<FuzzSummary> {
    let seed = cfg.seed.wrapping_add(trial as u64);
    let psi: StateVector = haar_random_state(cfg.n_qubits, seed)?;
    let mv = measure_vector(&psi, cfg.kind)?;
    let mut summary = FuzzSummary::default();
    for theorem in cfg.theorems() {
        let choices = selections(theorem, &mv);
        let tally = summary.per_theorem.entry(theorem).or_default();
        for &eta in &cfg.etas {
            let exps = ExponentConfig::new(cfg.base_power, eta)?;
            for (order, sel) in &choices {
                let report = evaluate(theorem, &permuted(&mv, order), &exps, sel)?;
                tally.add(&report);
                if report.is_violation() {
                    summary.failures.push(Failure {
                        trial,
                        seed,
                        theorem,
                        eta,
                        gamma: report.conditions.gamma,
                        gamma_prime: report.conditions.gamma_prime,
                        m: report.conditions.m,
                        order: order.clone(),
                        gap: report.gap,
                        state: psi.clone(),
                    });
                }
            }
        }
    }
    Ok(summary)
}

/// Runs every trial (in parallel) and merges the results in trial order.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    cfg.validate()?;
    let trials: Vec<FuzzSummary> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_>>()?;
    let mut summary = FuzzSummary::default();
    for t in trials {
        for (theorem, tally) in &t.per_theorem {
            summary
                .per_theorem
                .entry(*theorem)
                .or_default()
                .merge(tally);
        }
        summary.failures.extend(t.failures);
    }
    Ok(summary)
}

fn write_failures(dir: &PathBuf, failures: &[Failure]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut index = String::from("trial,seed,theorem,eta,gamma,gamma_prime,m,order,gap\n");
    for f in failures {
        let m = f.m.map_or("-".to_string(), |m| m.to_string());
        let order = f.order.iter().map(|i| (i + 1).to_string()).join(" ");
        index += &format!(
            "{},{},{},{},{},{},{m},{order},{}\n",
            f.trial,
            f.seed,
            f.theorem,
            sig12(f.eta),
            sig12(f.gamma),
            sig12(f.gamma_prime),
            sig12(f.gap)
        );
        let path = dir.join(format!("trial{}_seed{}.json", f.trial, f.seed));
        f.state
            .save(&path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let path = dir.join("failures.csv");
    std::fs::write(&path, index).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn summary_record(cfg: &FuzzConfig, summary: &FuzzSummary) -> Record {
    let total = summary.total();
    let mut r = Record::new();
    r.push("n_qubits", cfg.n_qubits)
        .push("trials", cfg.trials)
        .push("seed", cfg.seed.to_string())
        .push("kind", cfg.kind.label())
        .push("base_power", cfg.base_power)
        .push("etas", cfg.etas.iter().map(|&e| sig12(e)).join(" "))
        .push("evaluations", total.evaluations)
        .push("conditions_satisfied", total.satisfied)
        .push("violations", total.violations)
        .push("worst_gap", total.worst_gap);
    for (theorem, t) in &summary.per_theorem {
        r.push(format!("theorem{theorem}_evaluations"), t.evaluations)
            .push(format!("theorem{theorem}_satisfied"), t.satisfied)
            .push(format!("theorem{theorem}_violations"), t.violations)
            .push(format!("theorem{theorem}_worst_gap"), t.worst_gap);
    }
    r
}

pub fn run(args: &FuzzArgs, out: &mut dyn Write) -> Result<u8> {
    let kind = MeasureKind::from(args.kind);
    let etas = if args.eta.is_empty() {
        FuzzConfig::default_etas(kind, args.base_power)
    } else {
        args.eta.clone()
    };
    let cfg = FuzzConfig {
        n_qubits: args.n as usize,
        trials: args.trials,
        seed: args.seed,
        kind,
        etas,
        base_power: args.base_power,
    };
    let summary = run_fuzz(&cfg)?;
    summary_record(&cfg, &summary).write(out, args.format)?;
    if summary.failures.is_empty() {
        return Ok(EXIT_OK);
    }
    write_failures(&args.failures_dir, &summary.failures)?;
    eprintln!(
        "{} violation(s); states written to {}",
        summary.failures.len(),
        args.failures_dir.display()
    );
    Ok(EXIT_FAILED)
}
