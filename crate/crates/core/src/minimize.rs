//! Minimization driver: picks the refiner for a language, runs it from the
//! label partition, and builds reports and quotients.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bisim::pt_refine;
use crate::kripke::{KripkeBuilder, KripkeStructure};
use crate::partition::Partition;
use crate::reach::{ef_refine_with_stats, EfOptions};
use crate::simeq::sim_refine;
use crate::stutter::gv_refine;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    /// Atoms, boolean connectives and `EX`: strong bisimulation.
    Hml,
    /// Atoms, conjunction and `EX`: simulation equivalence.
    Sim,
    /// Atoms, boolean connectives and `EU`: divergence-blind stuttering.
    Dbs,
    /// Atoms, boolean connectives and `EF`.
    Ef,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::Hml, Language::Sim, Language::Dbs, Language::Ef];

    pub fn name(self) -> &'static str {
        match self {
            Language::Hml => "hml",
            Language::Sim => "sim",
            Language::Dbs => "dbs",
            Language::Ef => "ef",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownLanguage(pub String);

impl fmt::Display for UnknownLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown language `{}` (expected hml, sim, dbs or ef)",
            self.0
        )
    }
}

impl std::error::Error for UnknownLanguage {}

impl FromStr for Language {
    type Err = UnknownLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownLanguage(s.to_string()))
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimizeOptions {
    /// Forwarded to the `EF` refiner.
    pub debug_sweep: bool,
}

#[derive(Clone, Debug)]
pub struct Minimized {
    pub language: Language,
    pub initial: Partition,
    pub partition: Partition,
    pub elapsed: Duration,
}

/// Runs the refiner for `lang` from the label partition. The timing covers
/// the refinement only.
pub fn minimize(ks: &KripkeStructure, lang: Language, opts: MinimizeOptions) -> Minimized {
    let initial = ks.label_partition();
    let start = Instant::now();
    let partition = match lang {
        Language::Hml => pt_refine(ks, &initial),
        Language::Sim => sim_refine(ks).1,
        Language::Dbs => gv_refine(ks, &initial),
        Language::Ef => {
            let opts = EfOptions {
                debug_sweep: opts.debug_sweep,
            };
            ef_refine_with_stats(ks, &initial, opts).0
        }
    };
    Minimized {
        language: lang,
        initial,
        partition,
        elapsed: start.elapsed(),
    }
}

/// One line of a results table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub model: String,
    pub language: Language,
    pub states: usize,
    pub transitions: usize,
    pub initial_blocks: usize,
    pub final_blocks: usize,
    pub time_ms: f64,
}

impl Report {
    pub fn new(model: &str, ks: &KripkeStructure, run: &Minimized) -> Report {
        Report {
            model: model.to_string(),
            language: run.language,
            states: ks.num_states(),
            transitions: ks.num_transitions(),
            initial_blocks: run.initial.num_blocks(),
            final_blocks: run.partition.num_blocks(),
            time_ms: run.elapsed.as_secs_f64() * 1000.0,
        }
    }
}

/// Blocks become states, in partition order, labelled like their members
/// (the label of the first member). `B1 → B2` iff some member of `B1` has a
/// successor in `B2`.
pub fn quotient(ks: &KripkeStructure, p: &Partition) -> KripkeStructure {
    let blocks: Vec<_> = p.blocks().collect();
    let mut index = vec![0usize; p.block_capacity()];
    for (i, b) in blocks.iter().enumerate() {
        index[b.index()] = i;
    }
    let mut builder = KripkeBuilder::new(blocks.len());
    for name in ks.atoms() {
        builder.atom(name);
    }
    for (i, &b) in blocks.iter().enumerate() {
        if let Some(&rep) = p.states(b).first() {
            for &a in ks.labels(rep) {
                builder.label(i, &ks.atoms()[a]);
            }
        }
        for &s in p.states(b) {
            for &t in ks.successors(s) {
                builder.edge(i, index[p.block_of(t).index()]);
            }
        }
    }
    builder.build().expect("block indices are in range")
}
