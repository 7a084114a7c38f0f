//! Cross-checks of the four refiners against explicit shell computations on
//! random structures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bisim::pt_refine;
use crate::domain::MooreDomain;
use crate::error::DomainError;
use crate::kripke::{write_kripke, KripkeStructure};
use crate::partition::Partition;
use crate::random::{random_kripke, RandomParams};
use crate::reach::ef_refine;
use crate::shell::{cpt, MaskGraph, SetOperator};
use crate::simeq::{naive_simulation, sim_refine, LabelMatch};
use crate::stutter::{gv_refine, naive_dbs};

/// Largest structure the oracle accepts; explicit families grow as `2^n`.
pub const MAX_ORACLE_STATES: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub count: usize,
    pub max_states: usize,
    /// Merge two blocks of every bisimulation result before comparing, to
    /// exercise the failure path.
    pub corrupt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub instance: usize,
    pub check: &'static str,
    pub expected: String,
    pub actual: String,
    /// The structure in native format.
    pub reproducer: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleOutcome {
    pub instances: usize,
    pub checks: usize,
    pub mismatch: Option<Mismatch>,
}

/// The explicit partition `pr(cpt(pad(P_ℓ), ops))`.
pub fn shell_partition(
    ks: &KripkeStructure,
    ops: &[SetOperator],
) -> Result<Partition, DomainError> {
    let pad = MooreDomain::pad(&ks.label_partition())?;
    Ok(cpt(&pad, ops)?.pr())
}

/// Operator sets whose shells characterize each refiner.
pub fn oracle_operators(g: &MaskGraph) -> [(&'static str, Vec<SetOperator>); 4] {
    let comp = SetOperator::complement(g.universe());
    [
        ("pre,∁", vec![g.pre_op(), comp.clone()]),
        ("EU,∁", vec![g.eu_op(), comp.clone()]),
        ("pre", vec![g.pre_op()]),
        ("EF,∁", vec![g.ef_op(), comp]),
    ]
}

/// Checks every instance until the first disagreement.
pub fn run_oracle_check(config: &OracleConfig) -> Result<OracleOutcome, DomainError> {
    let params = RandomParams {
        max_states: config.max_states.clamp(3, MAX_ORACLE_STATES),
        ..RandomParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut outcome = OracleOutcome::default();
    for instance in 0..config.count {
        let ks = random_kripke(&mut rng, &params);
        outcome.instances += 1;
        if let Some(m) = check_instance(&ks, instance, config.corrupt, &mut outcome.checks)? {
            outcome.mismatch = Some(m);
            break;
        }
    }
    Ok(outcome)
}

fn check_instance(
    ks: &KripkeStructure,
    instance: usize,
    corrupt: bool,
    checks: &mut usize,
) -> Result<Option<Mismatch>, DomainError> {
    let g = MaskGraph::new(ks)?;
    let [hml, eu, pre, ef] = oracle_operators(&g);
    let pl = ks.label_partition();

    let mut bisim = pt_refine(ks, &pl);
    if corrupt {
        bisim = merge_first_two(&bisim);
    }
    let sim = sim_refine(ks).1;
    let candidates: [(&'static str, Partition, Partition); 6] = [
        ("pt_refine", bisim, shell_partition(ks, &hml.1)?),
        ("gv_refine", gv_refine(ks, &pl), shell_partition(ks, &eu.1)?),
        ("naive_dbs", naive_dbs(ks), gv_refine(ks, &pl)),
        ("sim_refine", sim.clone(), shell_partition(ks, &pre.1)?),
        (
            "naive_simulation",
            naive_simulation(ks, LabelMatch::Equal),
            sim,
        ),
        ("ef_refine", ef_refine(ks, &pl), shell_partition(ks, &ef.1)?),
    ];
    for (check, actual, expected) in candidates {
        *checks += 1;
        if actual != expected {
            return Ok(Some(Mismatch {
                instance,
                check,
                expected: expected.render(0),
                actual: actual.render(0),
                reproducer: write_kripke(ks),
            }));
        }
    }
    Ok(None)
}

fn merge_first_two(p: &Partition) -> Partition {
    let mut classes = p.canonical();
    if classes.len() >= 2 {
        let second = classes.remove(1);
        classes[0].extend(second);
    }
    Partition::from_classes(p.universe(), &classes).expect("merged classes still cover")
}
