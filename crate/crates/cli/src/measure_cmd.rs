use std::io::Write;

use anyhow::Result;
use clap::Args;
use mpbounds::measures::measure_vector;
use mpbounds::{MeasureKind, MeasureVector};

use crate::format::{Format, Record};
use crate::{Kind, StateSource, EXIT_OK};

#[derive(Clone, Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub source: StateSource,

    #[arg(long, value_enum, default_value = "concurrence")]
    pub kind: Kind,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Party labels `B1..B{N-1}` for the qubits after A.
pub fn party_label(index: usize) -> String {
    format!("B{}", index + 1)
}

pub fn measure_record(
    label: &str,
    n_qubits: usize,
    kind: MeasureKind,
    mv: &MeasureVector,
) -> Record {
    let mut r = Record::new();
    r.push("state", label)
        .push("n_qubits", n_qubits)
        .push("kind", kind.label());
    r.push("A|rest", mv.one_to_rest);
    for (i, &v) in mv.pairwise.iter().enumerate() {
        r.push(format!("A|{}", party_label(i)), v);
    }
    r
}

pub fn run(args: &MeasureArgs, out: &mut dyn Write) -> Result<u8> {
    let (label, psi) = args.source.load()?;
    let kind = MeasureKind::from(args.kind);
    let mv = measure_vector(&psi, kind)?;
    measure_record(&label, psi.n_qubits(), kind, &mv).write(out, args.format)?;
    Ok(EXIT_OK)
}
