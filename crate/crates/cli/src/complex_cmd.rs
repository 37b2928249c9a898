use std::path::PathBuf;

use clap::Subcommand;
use serde_json::{json, Value};
use vortex_core::complex::{tensor_product, ChainVector, FilteredComplex, Spectral};
use vortex_core::novikov::Coefficient;

use crate::io::{invalid, parse_floor, read_json, CliError, Output};
use crate::{with_mode, Mode};

#[derive(Debug, Subcommand)]
pub enum ComplexCmd {
    /// Check δ² = 0, action drop and degree parity.
    Validate(ComplexArgs),
    /// Homology ranks by degree (or parity).
    Homology(ComplexArgs),
    /// Spectral number of a class with a witnessing cycle.
    Spectral {
        #[command(flatten)]
        args: ComplexArgs,
        #[arg(long)]
        class: PathBuf,
    },
    /// The action spectrum.
    Spectrum(ComplexArgs),
    /// Tensor product of two complexes.
    Tensor {
        /// Two complexes, in order.
        #[arg(long, num_args = 2, required = true)]
        complex: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Rational)]
        mode: Mode,
    },
}

#[derive(Debug, clap::Args)]
pub struct ComplexArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Rational)]
    mode: Mode,
    /// Overrides the complex's truncation floor (a rational or -inf).
    #[arg(long, allow_hyphen_values = true)]
    floor: Option<String>,
}

fn load<C: Coefficient>(a: &ComplexArgs) -> Result<FilteredComplex<C>, CliError> {
    let mut c = FilteredComplex::<C>::from_json(&read_json(&a.complex)?).map_err(invalid)?;
    if let Some(f) = &a.floor {
        c.floor = parse_floor(f)?;
    }
    Ok(c)
}

fn valid<C: Coefficient>(c: &FilteredComplex<C>) -> Result<(), CliError> {
    let report = c.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("invalid complex: {report}")))
    }
}

fn spectral_json<C: Coefficient>(s: &Spectral<C>) -> Value {
    match s {
        Spectral::NegInfinity => json!({"version": vortex_core::SCHEMA_VERSION, "value": null}),
        Spectral::Finite(r) => json!({
            "version": vortex_core::SCHEMA_VERSION,
            "value": vortex_core::rational::format_q(&r.value),
            "witness_cycle": r.witness_cycle.to_json(),
            "spectrality_witness": r.spectrality_witness.as_ref().map(|(g, v)| json!({"generator": g, "lattice_vector": v})),
        }),
    }
}

fn run_mode<C: Coefficient>(cmd: &ComplexCmd) -> Result<Output, CliError> {
    match cmd {
        ComplexCmd::Validate(a) => {
            let c = load::<C>(a)?;
            let report = c.validate();
            let ok = report.is_valid();
            Ok(Output::json(&json!({"valid": ok, "violations": report.violations}), ok))
        }
        ComplexCmd::Homology(a) => {
            let c = load::<C>(a)?;
            valid(&c)?;
            let h = c.homology_rank().map_err(invalid)?;
            Ok(Output::json(&json!({"total": h.total(), "homology": h}), true))
        }
        ComplexCmd::Spectral { args, class } => {
            let c = load::<C>(args)?;
            valid(&c)?;
            let z = ChainVector::<C>::from_json(&read_json(class)?).map_err(invalid)?;
            let s = c.spectral_number(&z).map_err(invalid)?;
            Ok(Output::json(&spectral_json(&s), true))
        }
        ComplexCmd::Spectrum(a) => {
            let c = load::<C>(a)?;
            Ok(Output::json(&serde_json::to_value(c.spectrum().describe()).expect("encodes"), true))
        }
        ComplexCmd::Tensor { complex, .. } => {
            let c0 = FilteredComplex::<C>::from_json(&read_json(&complex[0])?).map_err(invalid)?;
            let c1 = FilteredComplex::<C>::from_json(&read_json(&complex[1])?).map_err(invalid)?;
            let t = tensor_product(&c0, &c1).map_err(invalid)?;
            Ok(Output::json(&t.to_json(), true))
        }
    }
}

pub fn run(cmd: &ComplexCmd) -> Result<Output, CliError> {
    let mode = match cmd {
        ComplexCmd::Validate(a) | ComplexCmd::Homology(a) | ComplexCmd::Spectrum(a) => a.mode,
        ComplexCmd::Spectral { args, .. } => args.mode,
        ComplexCmd::Tensor { mode, .. } => *mode,
    };
    with_mode!(mode, C => run_mode::<C>(cmd))
}
