use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use gpt_refine::kripke::{edge_to_node_labels, parse_aut, parse_kripke, write_kripke};
use gpt_refine::minimize::{minimize, quotient, MinimizeOptions, Report};
use gpt_refine::oracle::{run_oracle_check, OracleConfig, MAX_ORACLE_STATES};
use gpt_refine::{KripkeStructure, Language};

#[derive(Parser)]
#[command(
    name = "gpt-refine",
    version,
    about = "Minimize finite Kripke structures by partition refinement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert an edge-labelled `.aut` file to a Kripke file.
    Convert { input: PathBuf, output: PathBuf },
    /// Minimize a structure for one language and print a JSON report.
    Minimize {
        input: PathBuf,
        #[arg(long)]
        lang: Language,
        /// Write the JSON report here as well.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Append a CSV row, with a header if the file is new.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the quotient structure here.
        #[arg(long)]
        quotient: Option<PathBuf>,
        /// Fail if some state has no successor.
        #[arg(long)]
        require_total: bool,
        /// Give states without successors a self-loop.
        #[arg(long)]
        add_self_loops: bool,
    },
    /// Compare the refiners against explicit shells on random structures.
    OracleCheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Minimize every `.aut` and `.kripke` file in a directory and print CSV.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        lang: Language,
    },
}

/// I/O problems exit with 2, everything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<io::Error>()) {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Convert { input, output } => convert(&input, &output),
        Command::Minimize {
            input,
            lang,
            report,
            csv,
            quotient,
            require_total,
            add_self_loops,
        } => {
            let opts = MinimizeCmd {
                lang,
                report,
                csv,
                quotient,
                require_total,
                add_self_loops,
            };
            minimize_cmd(&input, &opts)
        }
        Command::OracleCheck {
            seed,
            count,
            max_states,
            inject_fault,
        } => oracle_check(seed, count, max_states, inject_fault),
        Command::Bench { dir, lang } => bench(&dir, lang),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn debug_enabled() -> bool {
    std::env::var("GPT_REFINE_DEBUG").is_ok_and(|v| v == "1")
}

/// `.aut` files are converted on the fly; anything else is read as a
/// Kripke file.
fn load(path: &Path) -> Result<KripkeStructure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "aut") {
        let lts = parse_aut(&text).with_context(|| format!("in {}", path.display()))?;
        Ok(edge_to_node_labels(&lts))
    } else {
        parse_kripke(&text).with_context(|| format!("in {}", path.display()))
    }
}

fn model_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn convert(input: &Path, output: &Path) -> Result<ExitCode> {
    let lts = parse_aut(&read(input)?).with_context(|| format!("in {}", input.display()))?;
    let ks = edge_to_node_labels(&lts);
    write(output, &write_kripke(&ks))?;
    println!(
        "states {} -> {}, transitions {} -> {}",
        lts.num_states,
        ks.num_states(),
        lts.edges.len(),
        ks.num_transitions()
    );
    Ok(ExitCode::SUCCESS)
}

struct MinimizeCmd {
    lang: Language,
    report: Option<PathBuf>,
    csv: Option<PathBuf>,
    quotient: Option<PathBuf>,
    require_total: bool,
    add_self_loops: bool,
}

fn minimize_cmd(input: &Path, cmd: &MinimizeCmd) -> Result<ExitCode> {
    let mut ks = load(input)?;
    if cmd.add_self_loops {
        ks = ks.with_self_loops();
    }
    if cmd.require_total {
        ks.check_total()?;
    }
    let opts = MinimizeOptions {
        debug_sweep: debug_enabled(),
    };
    let run = minimize(&ks, cmd.lang, opts);
    let report = Report::new(&model_name(input), &ks, &run);
    let json = serde_json::to_string(&report)?;
    println!("{json}");
    if let Some(path) = &cmd.report {
        write(path, &format!("{json}\n"))?;
    }
    if let Some(path) = &cmd.csv {
        append_csv(path, &report)?;
    }
    if let Some(path) = &cmd.quotient {
        write(path, &write_kripke(&quotient(&ks, &run.partition)))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn append_csv(path: &Path, report: &Report) -> Result<()> {
    let fresh = !path.exists() || fs::metadata(path)?.len() == 0;
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(report)?;
    w.flush()?;
    Ok(())
}

fn oracle_check(seed: u64, count: usize, max_states: usize, corrupt: bool) -> Result<ExitCode> {
    if !(3..=MAX_ORACLE_STATES).contains(&max_states) {
        bail!("--max-states must be between 3 and {MAX_ORACLE_STATES}");
    }
    let config = OracleConfig {
        seed,
        count,
        max_states,
        corrupt,
    };
    let outcome = run_oracle_check(&config)?;
    match outcome.mismatch {
        None => {
            println!(
                "{} instances, {} checks, all agree",
                outcome.instances, outcome.checks
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(m) => {
            println!("mismatch in {} on instance {}", m.check, m.instance);
            println!("expected {}", m.expected);
            println!("actual   {}", m.actual);
            print!("{}", m.reproducer);
            Ok(ExitCode::from(1))
        }
    }
}

fn bench(dir: &Path, lang: Language) -> Result<ExitCode> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "aut" || e == "kripke"));
    files.sort();
    let stdout = io::stdout();
    let mut w = csv::Writer::from_writer(stdout.lock());
    let opts = MinimizeOptions {
        debug_sweep: debug_enabled(),
    };
    for path in &files {
        let ks = load(path)?;
        let run = minimize(&ks, lang, opts);
        w.serialize(Report::new(&model_name(path), &ks, &run))?;
    }
    w.flush()?;
    io::stdout().flush()?;
    Ok(ExitCode::SUCCESS)
}
