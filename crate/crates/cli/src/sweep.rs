use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use mpbounds::bounds::Regime;
use mpbounds::measures::measure_vector;
use mpbounds::{BoundReport, ExponentConfig, MeasureKind, StateVector};

use crate::bounds_cmd::{evaluate, Selection};
use crate::format::sig12;
use crate::{Kind, StateSource, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Monogamy,
    Polygamy,
}

impl From<Mode> for Regime {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Monogamy => Regime::Monogamy,
            Mode::Polygamy => Regime::Polygamy,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: StateSource,

    #[arg(long, value_enum)]
    pub mode: Mode,

    /// Defaults to the base power (monogamy) or 0 (polygamy)
    #[arg(long)]
    pub eta_min: Option<f64>,

    /// Defaults to 3x the base power (monogamy) or the base power (polygamy)
    #[arg(long)]
    pub eta_max: Option<f64>,

    #[arg(long, default_value_t = 81)]
    pub steps: usize,

    #[arg(long, default_value_t = 2.0)]
    pub base_power: f64,

    /// `k = gamma^base_power` for every threshold
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,

    /// Defaults to concurrence (monogamy) or assistance (polygamy)
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,

    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub eta_min: f64,
    pub eta_max: f64,
    pub steps: usize,
    pub base_power: f64,
    pub k: f64,
    pub mode: Mode,
}

impl SweepSpec {
    pub fn new(
        mode: Mode,
        eta_min: Option<f64>,
        eta_max: Option<f64>,
        steps: usize,
        base_power: f64,
        k: f64,
    ) -> Result<Self> {
        if !(base_power.is_finite() && base_power > 0.0) {
            bail!("base power must be > 0, got {base_power}");
        }
        let (lo, hi) = match mode {
            Mode::Monogamy => (base_power, 3.0 * base_power),
            Mode::Polygamy => (0.0, base_power),
        };
        let spec = Self {
            eta_min: eta_min.unwrap_or(lo),
            eta_max: eta_max.unwrap_or(hi),
            steps,
            base_power,
            k,
            mode,
        };
        if !(spec.eta_min.is_finite() && spec.eta_max.is_finite()) || spec.eta_min > spec.eta_max {
            bail!(
                "need eta_min <= eta_max, got [{}, {}]",
                spec.eta_min,
                spec.eta_max
            );
        }
        match mode {
            Mode::Monogamy if spec.eta_min < base_power => {
                bail!(
                    "monogamy sweeps need eta_min >= base power ({} < {base_power})",
                    spec.eta_min
                )
            }
            Mode::Polygamy if spec.eta_max > base_power || spec.eta_min < 0.0 => {
                bail!(
                    "polygamy sweeps need 0 <= eta <= base power, got [{}, {}]",
                    spec.eta_min,
                    spec.eta_max
                )
            }
            _ => {}
        }
        if steps == 0 {
            bail!("steps must be >= 1");
        }
        if !(k.is_finite() && k >= 1.0) {
            bail!("k must be >= 1, got {k}");
        }
        Ok(spec)
    }

    /// Equally spaced exponents; the endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.eta_min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| match i {
                0 => self.eta_min,
                i if i == last => self.eta_max,
                i => self.eta_min + (self.eta_max - self.eta_min) * i as f64 / last as f64,
            })
            .collect()
    }

    pub fn gamma(&self) -> f64 {
        self.k.powf(1.0 / self.base_power)
    }
}

/// Two-party bound for three qubits, the partition bound otherwise.
pub fn theorem_for(mode: Mode, n_qubits: usize) -> u8 {
    match (mode, n_qubits) {
        (Mode::Monogamy, 3) => 2,
        (Mode::Monogamy, _) => 3,
        (Mode::Polygamy, 3) => 5,
        (Mode::Polygamy, _) => 6,
    }
}

pub fn sweep_reports(
    psi: &StateVector,
    spec: &SweepSpec,
    kind: MeasureKind,
) -> Result<Vec<BoundReport>> {
    let mv = measure_vector(psi, kind)?;
    let theorem = theorem_for(spec.mode, psi.n_qubits());
    let gamma = spec.gamma();
    let sel = Selection {
        gamma: Some(gamma),
        gamma_prime: Some(gamma),
        m: None,
    };
    spec.grid()
        .into_iter()
        .map(|eta| {
            evaluate(
                theorem,
                &mv,
                &ExponentConfig::new(spec.base_power, eta)?,
                &sel,
            )
        })
        .collect()
}

pub fn csv_header(mode: Mode) -> &'static str {
    match mode {
        Mode::Monogamy => "eta,lhs,bound_new,bound_chain_mid,bound_chain_tail,conditions_ok",
        Mode::Polygamy => {
            "eta,lhs,bound_new,bound_chain_mid,bound_chain_tail,bound_poly_tail,conditions_ok"
        }
    }
}

pub fn write_csv(reports: &[BoundReport], mode: Mode, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{}", csv_header(mode))?;
    for r in reports {
        let mut cells = vec![
            sig12(r.exponents.eta),
            sig12(r.lhs),
            sig12(r.bound_new),
            sig12(r.bound_chain_mid),
            sig12(r.bound_chain_tail),
        ];
        if mode == Mode::Polygamy {
            cells.push(sig12(r.bound_poly_tail.unwrap_or(f64::NAN)));
        }
        cells.push(r.conditions.satisfied.to_string());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn run(args: &SweepArgs, out: &mut dyn Write) -> Result<u8> {
    let (_, psi) = args.source.load()?;
    let spec = SweepSpec::new(
        args.mode,
        args.eta_min,
        args.eta_max,
        args.steps,
        args.base_power,
        args.k,
    )?;
    let kind = args.kind.unwrap_or(match args.mode {
        Mode::Monogamy => Kind::Concurrence,
        Mode::Polygamy => Kind::Assistance,
    });
    let reports = sweep_reports(&psi, &spec, kind.into())?;
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_csv(&reports, spec.mode, &mut w)?;
            w.flush()
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => write_csv(&reports, spec.mode, out)?,
    }
    Ok(EXIT_OK)
}
