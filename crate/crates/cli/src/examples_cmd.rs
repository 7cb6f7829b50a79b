use std::io::Write;

use anyhow::Result;
use clap::Args;
use mpbounds::measures::measure_vector;
use mpbounds::states::catalog;
use mpbounds::{theorem1_bound, theorem4_bound, ExponentConfig, MeasureKind, StateVector};

use crate::format::sig12;
use crate::{EXIT_FAILED, EXIT_OK};

/// Saturation gaps of the four-qubit W state must stay below this.
pub const SATURATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Args)]
pub struct ExamplesArgs {
    /// Allowed deviation of each computed measure from its closed form
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    pub fn passed(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

fn measure_checks(
    checks: &mut Vec<Check>,
    state: &str,
    psi: &StateVector,
    kind: MeasureKind,
    expected: (f64, &[f64]),
    names: &[&str],
    tolerance: f64,
) -> Result<()> {
    let prefix = match kind {
        MeasureKind::Concurrence => "C",
        MeasureKind::ConcurrenceOfAssistance => "Ca",
    };
    let mv = measure_vector(psi, kind)?;
    checks.push(Check {
        name: format!("{state} {prefix}(A|{})", names.join("")),
        computed: mv.one_to_rest,
        expected: expected.0,
        tolerance,
    });
    for ((&v, &e), name) in mv.pairwise.iter().zip(expected.1).zip(names) {
        checks.push(Check {
            name: format!("{state} {prefix}(A|{name})"),
            computed: v,
            expected: e,
            tolerance,
        });
    }
    Ok(())
}

/// Every closed-form measure value of the two worked examples, followed by
/// the W-state saturation gaps of the weighted-sum bounds.
pub fn example_checks(tolerance: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let w4: StateVector = catalog("w4")?;
    let half = [0.5; 3];
    let w4_cut = 3f64.sqrt() / 2.0;
    for kind in [
        MeasureKind::Concurrence,
        MeasureKind::ConcurrenceOfAssistance,
    ] {
        measure_checks(
            &mut checks,
            "w4",
            &w4,
            kind,
            (w4_cut, &half),
            &["B", "C", "D"],
            tolerance,
        )?;
    }

    let ex2: StateVector = catalog("example2")?;
    let cut = 106f64.sqrt() / 12.0;
    let c = [2f64.sqrt() / 3.0, 2f64.sqrt() / 2.0];
    let ca = [34f64.sqrt() / 12.0, 74f64.sqrt() / 12.0];
    measure_checks(
        &mut checks,
        "example2",
        &ex2,
        MeasureKind::Concurrence,
        (cut, &c),
        &["B", "C"],
        tolerance,
    )?;
    measure_checks(
        &mut checks,
        "example2",
        &ex2,
        MeasureKind::ConcurrenceOfAssistance,
        (cut, &ca),
        &["B", "C"],
        tolerance,
    )?;

    let mv_c = measure_vector(&w4, MeasureKind::Concurrence)?;
    for eta in [2.0, 3.0, 4.0] {
        let r = theorem1_bound(&mv_c, &ExponentConfig::monogamy(2.0, eta)?)?;
        checks.push(Check {
            name: format!("w4 theorem 1 gap, eta={eta}"),
            computed: r.gap,
            expected: 0.0,
            tolerance: SATURATION_TOL,
        });
    }
    let mv_a = measure_vector(&w4, MeasureKind::ConcurrenceOfAssistance)?;
    for eta in [0.5, 1.0, 2.0] {
        let r = theorem4_bound(&mv_a, &ExponentConfig::polygamy(2.0, eta)?)?;
        checks.push(Check {
            name: format!("w4 theorem 4 gap, eta={eta}"),
            computed: r.gap,
            expected: 0.0,
            tolerance: SATURATION_TOL,
        });
    }
    Ok(checks)
}

pub fn run(args: &ExamplesArgs, out: &mut dyn Write) -> Result<u8> {
    let checks = example_checks(args.tolerance)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0) + 2;
    writeln!(
        out,
        "{:<width$}{:<22}{:<22}{:<12}status",
        "check", "computed", "expected", "deviation"
    )?;
    for c in &checks {
        writeln!(
            out,
            "{:<width$}{:<22}{:<22}{:<12}{}",
            c.name,
            sig12(c.computed),
            sig12(c.expected),
            format!("{:.1e}", c.deviation()),
            if c.passed() { "pass" } else { "FAIL" }
        )?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(
        out,
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}
