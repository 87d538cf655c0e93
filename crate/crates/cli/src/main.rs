// Copyright 2026 The zhcalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `zhcalc`: evaluate, normalize and compare ZH-diagrams from the shell.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zhcalc::circuits::{circuit_matrix, circuit_to_diagram};
use zhcalc::normalform::{normalize, normalize_with_trace, reduce};
use zhcalc::render::{render, Format};
use zhcalc::rules::{self, SweepConfig, Tag};
use zhcalc::semantics::{Interpretation, StarMode};
use zhcalc::{circuits_equivalent, parse_circuit, Circuit, Diagram, DiagramDocument, RingDescriptor, RingElement};

#[derive(Parser)]
#[command(name = "zhcalc", version, about = "Exact ZH-calculus over commutative rings")]
struct Cli {
    /// dyadic, int, rt2 or mod:<p>; defaults to the document's ring, then dyadic
    #[arg(long, global = true)]
    ring: Option<RingDescriptor>,
    /// Read the star as 1/sqrt2 (needs the rt2 ring)
    #[arg(long, global = true)]
    sqrt2_star: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the matrix a diagram denotes
    Eval { file: PathBuf },
    /// Print the normal form of a diagram
    Normalize {
        file: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        reduced: bool,
    },
    /// Decide whether two diagrams are equal
    Equiv { a: PathBuf, b: PathBuf },
    /// Check the rule catalogue for soundness
    CheckRules {
        /// core, zh_r, derived, alt_ortho, merged or sqrt2; all rules if omitted
        #[arg(long)]
        ruleset: Option<Tag>,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// Comma-separated labels, e.g. `-2,-1,0,1,2`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        labels: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Add this many random labels drawn from -10..=10 (seeded by --seed)
        #[arg(long, default_value_t = 0)]
        random_labels: usize,
    },
    /// Work with quantum circuits
    Circuit {
        #[command(subcommand)]
        action: CircuitAction,
    },
    /// Export a diagram as Graphviz dot or TikZ
    Render {
        file: PathBuf,
        #[arg(long, default_value = "dot")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CircuitAction {
    /// Print the circuit's unitary over rt2
    Eval { file: PathBuf },
    /// Print the circuit as a diagram document
    ToDiagram { file: PathBuf },
    /// Decide whether two circuits implement the same unitary
    Equiv { a: PathBuf, b: PathBuf },
}

/// A failure whose exit status is part of the command's contract.
#[derive(Debug)]
struct Exit(u8);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

struct Loaded {
    diagram: Diagram,
    interp: Interpretation,
}

impl Cli {
    fn interpretation(&self, doc_ring: Option<RingDescriptor>) -> Result<Interpretation> {
        let fallback = if self.sqrt2_star { RingDescriptor::root_two() } else { RingDescriptor::dyadic() };
        let ring = self.ring.or(doc_ring).unwrap_or(fallback);
        let star = if self.sqrt2_star { StarMode::InvSqrt2 } else { StarMode::Half };
        Ok(Interpretation::with_star(ring, star)?)
    }

    fn load(&self, path: &Path) -> Result<Loaded> {
        let doc = DiagramDocument::parse(&read(path)?).with_context(|| path.display().to_string())?;
        let interp = self.interpretation(doc.ring)?;
        let diagram = doc.to_diagram(&interp.ring()).with_context(|| path.display().to_string())?;
        Ok(Loaded { diagram, interp })
    }

    fn star_mode(&self) -> StarMode {
        if self.sqrt2_star {
            StarMode::InvSqrt2
        } else {
            StarMode::Half
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&read(path)?).with_context(|| path.display().to_string())
}

fn verdict(equal: bool) -> Result<()> {
    println!("{}", if equal { "EQUAL" } else { "DIFFERENT" });
    if equal {
        Ok(())
    } else {
        Err(Exit(1).into())
    }
}

fn sweep_labels(
    ring: &RingDescriptor,
    given: &Option<Vec<String>>,
    seed: Option<u64>,
    random: usize,
) -> Result<Vec<RingElement>> {
    let mut labels = match given {
        Some(words) => words
            .iter()
            .map(|w| ring.parse_element(w.trim()).map_err(|e| anyhow!("label {w:?}: {e}")))
            .collect::<Result<Vec<_>>>()?,
        None => (-2..=2).map(|v| ring.from_integer(v)).collect(),
    };
    if random > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
        for _ in 0..random {
            labels.push(ring.from_integer(rng.gen_range(-10..=10)));
        }
    }
    let mut seen = Vec::new();
    labels.retain(|l| {
        if seen.contains(l) {
            false
        } else {
            seen.push(l.clone());
            true
        }
    });
    if labels.is_empty() {
        bail!("no labels to check");
    }
    Ok(labels)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Eval { file } => {
            let l = cli.load(file)?;
            println!("{}", l.interp.interpret(&l.diagram)?);
        }
        Command::Normalize { file, trace, reduced } => {
            let l = cli.load(file)?;
            let (nf, log) = normalize_with_trace(&l.diagram, &l.interp)?;
            let nf = if *reduced { reduce(&nf) } else { nf };
            println!("{nf}");
            if *trace {
                println!("{log}");
            } else {
                println!("{} steps", log.len());
            }
        }
        Command::Equiv { a, b } => {
            let (la, lb) = (cli.load(a)?, cli.load(b)?);
            if la.diagram.signature() != lb.diagram.signature() {
                eprintln!("zhcalc: signatures differ: {:?} vs {:?}", la.diagram.signature(), lb.diagram.signature());
                return Err(Exit(2).into());
            }
            if la.interp.ring() != lb.interp.ring() {
                bail!("documents declare different rings: {} and {}", la.interp.ring(), lb.interp.ring());
            }
            let na = reduce(&normalize(&la.diagram, &la.interp)?);
            let nb = reduce(&normalize(&lb.diagram, &lb.interp)?);
            verdict(na == nb)?;
        }
        Command::CheckRules { ruleset, max_arity, labels, seed, random_labels } => {
            let interp = cli.interpretation(None)?;
            let mut cfg = SweepConfig::new(interp, *max_arity);
            cfg.labels = sweep_labels(&interp.ring(), labels, *seed, *random_labels)?;
            let schemas = rules::catalog(*ruleset);
            let reports = rules::sweep(&schemas, &cfg);
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let skipped = reports.iter().filter(|r| r.skipped.is_some()).count();
            println!(
                "{} rules over {}: {} passed, {} failed, {} skipped",
                reports.len(),
                interp.ring(),
                reports.len() - failed - skipped,
                failed,
                skipped
            );
            if failed > 0 {
                return Err(Exit(1).into());
            }
        }
        Command::Circuit { action } => match action {
            CircuitAction::Eval { file } => println!("{}", circuit_matrix(&load_circuit(file)?)?),
            CircuitAction::ToDiagram { file } => {
                let enc = circuit_to_diagram(&load_circuit(file)?, cli.star_mode());
                if enc.residual_sqrt2 {
                    eprintln!("zhcalc: odd Hadamard count; the diagram denotes sqrt2 times the unitary");
                }
                let ring = match cli.star_mode() {
                    StarMode::InvSqrt2 => RingDescriptor::root_two(),
                    StarMode::Half => RingDescriptor::dyadic(),
                };
                print!("{}", DiagramDocument::from_diagram(&enc.diagram, Some(ring)).serialize());
            }
            CircuitAction::Equiv { a, b } => {
                verdict(circuits_equivalent(&load_circuit(a)?, &load_circuit(b)?)?)?;
            }
        },
        Command::Render { file, format } => {
            let l = cli.load(file)?;
            print!("{}", render(&l.diagram, *format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Exit>() {
            Some(Exit(code)) => ExitCode::from(*code),
            None => {
                eprintln!("zhcalc: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
