//! The `spekkens` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::document::{read_state, write_state};
use crate::epistemic::{pure_states, EpistemicState, PhaseSpace};
use crate::equivalence::{check_state_equivalence, check_update_equivalence, measurement_catalogue, CaseReport};
use crate::error::Error;
use crate::expr::{format_observable, parse_observable};
use crate::measurement::{outcome_probabilities, update, SharpMeasurement};
use crate::render::render_map;
use crate::stabilizer::ChiConvention;
use crate::wigner::wigner_of_epistemic;
use crate::zmod::Form;
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "spekkens", version, about = "Epistemically restricted phase-space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a state document and print its canonical form.
    Validate { file: PathBuf },
    /// Print the state's distribution over phase space.
    Support { file: PathBuf },
    /// Measure observables and print outcome probabilities and the posterior.
    Measure {
        file: PathBuf,
        /// Observable expression, e.g. "X+P" or "2X1-P2". Repeatable.
        #[arg(long = "obs", required = true)]
        obs: Vec<String>,
        /// Observed value, one per --obs.
        #[arg(long, conflicts_with = "sample")]
        outcome: Vec<u64>,
        /// Draw the outcome from the exact distribution with this seed.
        #[arg(long)]
        sample: Option<u64>,
        /// Write the posterior document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact Wigner function (odd d).
    Wigner { file: PathBuf },
    /// Cross-check the three routes on stabilizer states (odd d).
    Equiv {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
        /// Every pure state against every measurement element.
        #[arg(long)]
        exhaustive: bool,
        /// Include coarse-graining observables.
        #[arg(long)]
        coarse: bool,
        /// Write one JSON line per case here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List every pure state as a JSON document per line.
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            2
        }
    }
}

fn load(path: &Path) -> std::result::Result<EpistemicState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(read_state(&text)?)
}

fn grid(state: &EpistemicState) -> std::result::Result<String, Failure> {
    let dist = state.distribution()?;
    Ok(render_map(state.space(), |l| dist.probability(l))?)
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Validate { file } => {
            let state = load(&file)?;
            writeln!(out, "valid")?;
            writeln!(out, "V  = {}", state.known())?;
            writeln!(out, "V⊥ = {}", state.known_perp())?;
            writeln!(out, "w  = {}", state.shift())?;
            writeln!(out, "{}", if state.is_pure() { "pure" } else { "mixed" })?;
            writeln!(out, "{}", write_state(&state))?;
        }
        Command::Support { file } => {
            let state = load(&file)?;
            write!(out, "{}", grid(&state)?)?;
        }
        Command::Measure {
            file,
            obs,
            outcome,
            sample,
            out: target,
        } => measure(&load(&file)?, &obs, &outcome, sample, target.as_deref(), out)?,
        Command::Wigner { file } => {
            let state = load(&file)?;
            write!(out, "{}", wigner_of_epistemic(&state)?)?;
        }
        Command::Equiv {
            d,
            n,
            exhaustive,
            coarse,
            report,
        } => equiv(d, n, exhaustive, coarse, report.as_deref(), out)?,
        Command::Enumerate { d, n } => {
            let states = pure_states(&PhaseSpace::new(d, n)?)?;
            for s in &states {
                writeln!(out, "{}", write_state(s))?;
            }
            writeln!(out, "{} pure states", states.len())?;
        }
    }
    Ok(())
}

/// Index of the element hit by a uniform draw from the exact distribution.
fn sample_index(probs: &[Rational], seed: u64) -> usize {
    let lcm = probs.iter().fold(1i64, |acc, p| acc.lcm(p.denom()));
    let mut draw = ChaCha8Rng::seed_from_u64(seed).gen_range(0..lcm);
    for (i, p) in probs.iter().enumerate() {
        let weight = p.numer() * (lcm / p.denom());
        if draw < weight {
            return i;
        }
        draw -= weight;
    }
    unreachable!("probabilities sum to one")
}

fn measure(
    state: &EpistemicState,
    exprs: &[String],
    outcomes: &[u64],
    sample: Option<u64>,
    target: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let space = *state.space();
    let observables = exprs
        .iter()
        .map(|e| parse_observable(e, &space))
        .collect::<crate::Result<Vec<_>>>()?;
    let names: Vec<String> = observables.iter().map(format_observable).collect();
    if !outcomes.is_empty() && outcomes.len() != observables.len() {
        return Err(Failure::Usage(format!(
            "{} outcomes given for {} observables",
            outcomes.len(),
            observables.len()
        )));
    }
    let template = SharpMeasurement::from_shift(space, observables.clone(), space.origin())?;
    let table = outcome_probabilities(state, &template)?;
    for (e, p) in &table {
        let vals: Vec<String> = e.outcomes().iter().map(|o| o.to_string()).collect();
        writeln!(out, "P({} = {}) = {p}", names.join(", "), vals.join(", "))?;
    }
    let element = if let Some(seed) = sample {
        let probs: Vec<Rational> = table.iter().map(|(_, p)| *p).collect();
        table[sample_index(&probs, seed)].0.clone()
    } else if !outcomes.is_empty() {
        SharpMeasurement::new(space, observables, outcomes)?
    } else {
        return Ok(());
    };
    let prob = table
        .iter()
        .find(|(e, _)| *e == element)
        .map(|(_, p)| *p)
        .unwrap_or_else(|| Rational::from_integer(0));
    let vals: Vec<String> = element.outcomes().iter().map(|o| o.to_string()).collect();
    writeln!(out, "outcome {} = {}", names.join(", "), vals.join(", "))?;
    writeln!(out, "probability {prob}")?;
    let post = update(state, &element)?;
    writeln!(out, "posterior V⊥ = {}", post.known().complement(Form::Euclidean)?)?;
    write!(out, "{}", grid(&post)?)?;
    let doc = write_state(&post);
    writeln!(out, "{doc}")?;
    if let Some(path) = target {
        std::fs::write(path, format!("{doc}\n"))?;
    }
    Ok(())
}

fn equiv(d: u64, n: usize, exhaustive: bool, coarse: bool, report: Option<&Path>, out: &mut dyn Write) -> CliResult {
    use rayon::prelude::*;

    let space = PhaseSpace::new(d, n)?;
    if !space.is_odd() {
        return Err(Error::EvenDimension(d).into());
    }
    let conv = ChiConvention::default();
    let states = pure_states(&space)?;
    let elements = measurement_catalogue(&space, coarse)?;
    let mut pairs = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for (j, e) in elements.iter().enumerate() {
            // Without --exhaustive, a deterministic stride keeps the run short.
            if exhaustive || (i * elements.len() + j) % 17 == 0 {
                pairs.push((s, e));
            }
        }
    }
    let mut reports: Vec<CaseReport> = states
        .par_iter()
        .map(|s| check_state_equivalence(s, conv))
        .collect::<crate::Result<_>>()?;
    let updates: Vec<CaseReport> = pairs
        .par_iter()
        .map(|(s, e)| check_update_equivalence(s, e, conv))
        .collect::<crate::Result<_>>()?;
    let update_count = updates.len();
    let update_pass = updates.iter().filter(|r| r.pass).count();
    reports.extend(updates);
    if let Some(path) = report {
        let lines: Vec<String> = reports.iter().map(|r| r.to_json_line()).collect();
        std::fs::write(path, lines.join("\n") + "\n")?;
    }
    let state_pass = reports.iter().take(states.len()).filter(|r| r.pass).count();
    writeln!(out, "{state_pass}/{} states pass", states.len())?;
    writeln!(out, "{update_pass}/{update_count} cases pass")?;
    for r in reports.iter().filter(|r| !r.pass) {
        writeln!(out, "{}", r.to_json_line())?;
    }
    if state_pass != states.len() || update_pass != update_count {
        return Err(Error::Inconsistent.into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_exact() {
        let probs = [Rational::new(1, 3), Rational::new(2, 3)];
        assert_eq!(sample_index(&probs, 7), sample_index(&probs, 7));
        let certain = [Rational::from_integer(0), Rational::from_integer(1)];
        for seed in 0..20 {
            assert_eq!(sample_index(&certain, seed), 1);
        }
        let hits = (0..300).filter(|&s| sample_index(&probs, s) == 0).count();
        assert!((60..140).contains(&hits), "{hits}");
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["spekkens", "frobnicate"], &mut o, &mut e), 1);
        assert_eq!(run(["spekkens", "--help"], &mut o, &mut e), 0);
        assert_eq!(run(["spekkens", "validate", "/nonexistent.json"], &mut o, &mut e), 1);
    }
}
