//! Forward-complete shells and the generic refinement loops over explicit
//! domains.
//!
//! Everything here enumerates argument tuples over whole families, so it is
//! exponential and only meant for small structures. The efficient refiners
//! in [`bisim`](crate::bisim), [`stutter`](crate::stutter),
//! [`simeq`](crate::simeq) and [`reach`](crate::reach) are tested against it.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{check_universe, MooreDomain};
use crate::error::DomainError;
use crate::kripke::KripkeStructure;
use crate::partition::Partition;
use crate::stateset::Subset;

/// Largest number of argument tuples a single enumeration may visit.
pub const MAX_TUPLES: usize = 1 << 24;

type Eval = dyn Fn(&[Subset]) -> Subset;

/// A named operator on `℘(Σ)^arity`.
#[derive(Clone)]
pub struct SetOperator {
    name: String,
    arity: usize,
    eval: Rc<Eval>,
}

impl SetOperator {
    pub fn new<F: Fn(&[Subset]) -> Subset + 'static>(name: &str, arity: usize, eval: F) -> Self {
        assert!(arity >= 1, "operators take at least one argument");
        SetOperator {
            name: name.to_string(),
            arity,
            eval: Rc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn apply(&self, args: &[Subset]) -> Subset {
        debug_assert_eq!(args.len(), self.arity);
        (self.eval)(args)
    }

    pub fn complement(universe: usize) -> Self {
        Self::new("complement", 1, move |a| a[0].complement(universe))
    }

    pub fn intersection() -> Self {
        Self::new("intersection", 2, |a| a[0].intersection(a[1]))
    }
}

impl fmt::Debug for SetOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A transition relation on at most [`MAX_UNIVERSE`](crate::domain::MAX_UNIVERSE)
/// states with successor and predecessor masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskGraph {
    n: usize,
    succ: Vec<u32>,
    pred: Vec<u32>,
}

impl MaskGraph {
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(
        n: usize,
        edges: I,
    ) -> Result<MaskGraph, DomainError> {
        check_universe(n)?;
        let mut succ = vec![0u32; n];
        let mut pred = vec![0u32; n];
        for (a, b) in edges {
            succ[a] |= 1 << b;
            pred[b] |= 1 << a;
        }
        Ok(MaskGraph { n, succ, pred })
    }

    pub fn new(ks: &KripkeStructure) -> Result<MaskGraph, DomainError> {
        Self::from_edges(ks.num_states(), ks.transitions())
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    fn image(adj: &[u32], set: Subset) -> Subset {
        Subset(
            adj.iter()
                .enumerate()
                .filter(|(_, &m)| m & set.0 != 0)
                .fold(0, |acc, (s, _)| acc | 1 << s),
        )
    }

    pub fn pre(&self, set: Subset) -> Subset {
        Self::image(&self.succ, set)
    }

    pub fn post(&self, set: Subset) -> Subset {
        Self::image(&self.pred, set)
    }

    pub fn pre_tilde(&self, set: Subset) -> Subset {
        self.pre(set.complement(self.n)).complement(self.n)
    }

    pub fn eu(&self, stay: Subset, target: Subset) -> Subset {
        let mut x = target;
        loop {
            let next = x.union(stay.intersection(self.pre(x)));
            if next == x {
                return x;
            }
            x = next;
        }
    }

    pub fn ef(&self, target: Subset) -> Subset {
        self.eu(Subset::full(self.n), target)
    }

    pub fn pre_op(&self) -> SetOperator {
        let g = self.clone();
        SetOperator::new("pre", 1, move |a| g.pre(a[0]))
    }

    pub fn post_op(&self) -> SetOperator {
        let g = self.clone();
        SetOperator::new("post", 1, move |a| g.post(a[0]))
    }

    pub fn pre_tilde_op(&self) -> SetOperator {
        let g = self.clone();
        SetOperator::new("pre~", 1, move |a| g.pre_tilde(a[0]))
    }

    pub fn eu_op(&self) -> SetOperator {
        let g = self.clone();
        SetOperator::new("EU", 2, move |a| g.eu(a[0], a[1]))
    }

    pub fn ef_op(&self) -> SetOperator {
        let g = self.clone();
        SetOperator::new("EF", 1, move |a| g.ef(a[0]))
    }
}

/// Abstractions of the lattice of domains that the generic loop can work in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DomainAbstraction {
    /// All Moore families.
    Identity,
    /// Partitioning domains, through `pad ∘ pr`.
    Partitioning,
    /// Disjunctive domains, through `∇`.
    Disjunctive,
}

impl DomainAbstraction {
    /// `γ(α(A))`.
    pub fn apply(self, a: &MooreDomain) -> Result<MooreDomain, DomainError> {
        match self {
            DomainAbstraction::Identity => Ok(a.clone()),
            DomainAbstraction::Partitioning => MooreDomain::pad(&a.pr()),
            DomainAbstraction::Disjunctive => a.disjunctive(),
        }
    }
}

fn check_tuples(members: usize, arity: usize) -> Result<(), DomainError> {
    let too_many = || DomainError::EnumerationTooLarge {
        what: "argument tuples",
        cap: MAX_TUPLES,
    };
    let count = (members as u128)
        .checked_pow(arity as u32)
        .ok_or_else(too_many)?;
    if count > MAX_TUPLES as u128 {
        Err(too_many())
    } else {
        Ok(())
    }
}

/// Calls `visit` on every tuple in `items^arity` in lexicographic order,
/// stopping early when it returns `false`.
fn for_each_tuple<F: FnMut(&[Subset]) -> bool>(items: &[Subset], arity: usize, mut visit: F) {
    if items.is_empty() {
        return;
    }
    let mut idx = vec![0usize; arity];
    let mut args: Vec<Subset> = vec![items[0]; arity];
    loop {
        if !visit(&args) {
            return;
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < items.len() {
                args[k] = items[idx[k]];
                break;
            }
            idx[k] = 0;
            args[k] = items[0];
        }
    }
}

/// `refine_f(S⃗, A) = M(γ(A) ∪ {f(S⃗)})`.
pub fn refine_op(
    a: &MooreDomain,
    op: &SetOperator,
    args: &[Subset],
) -> Result<MooreDomain, DomainError> {
    a.refine_with(op.apply(args))
}

/// All tuples over `γ(A)` whose image escapes `γ(A)`.
pub fn refiners(a: &MooreDomain, op: &SetOperator) -> Result<Vec<Vec<Subset>>, DomainError> {
    check_tuples(a.len(), op.arity())?;
    let mut out = Vec::new();
    for_each_tuple(a.family(), op.arity(), |args| {
        if !a.contains(op.apply(args)) {
            out.push(args.to_vec());
        }
        true
    });
    Ok(out)
}

/// `S_F(A)`: iterates `X ↦ M(γ(A) ∪ F(γ(X)))` from `{Σ}` to its fixpoint.
pub fn shell_gfp(a: &MooreDomain, ops: &[SetOperator]) -> Result<MooreDomain, DomainError> {
    let n = a.universe();
    let mut x = MooreDomain::top(n)?;
    loop {
        let mut gens: Vec<Subset> = a.family().to_vec();
        for op in ops {
            check_tuples(x.len(), op.arity())?;
            for_each_tuple(x.family(), op.arity(), |args| {
                gens.push(op.apply(args));
                true
            });
        }
        let next = MooreDomain::moore_closure(n, gens)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// How the refinement loops pick the next refiner.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Choice {
    /// The first refiner in a scan of the current family in canonical order,
    /// operators in the given order. Already evaluated tuples are skipped.
    Canonical,
    /// Tuples are examined once each, in the order their members joined the
    /// domain.
    Fifo,
    /// Like `Fifo`, but tuples and new members are shuffled with the seed.
    Random(u64),
}

/// One step of a refinement run: `op(args) = image` was not in the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementStep {
    pub op: String,
    pub args: Vec<Subset>,
    pub image: Subset,
}

#[derive(Clone, Debug)]
pub struct ShellRun {
    pub domain: MooreDomain,
    pub steps: Vec<RefinementStep>,
    /// Operator applications performed; no tuple is evaluated twice.
    pub evaluations: usize,
}

/// `CPT_F(A)`, equal to `S_F(A)`.
pub fn cpt(a: &MooreDomain, ops: &[SetOperator]) -> Result<MooreDomain, DomainError> {
    Ok(cpt_run(a, ops, Choice::Fifo)?.domain)
}

pub fn cpt_run(
    a: &MooreDomain,
    ops: &[SetOperator],
    choice: Choice,
) -> Result<ShellRun, DomainError> {
    gpt_run(DomainAbstraction::Identity, a, ops, choice)
}

/// `GPT_F` in the given abstraction, started from the abstraction of `A`.
pub fn gpt(
    abs: DomainAbstraction,
    a: &MooreDomain,
    ops: &[SetOperator],
) -> Result<MooreDomain, DomainError> {
    Ok(gpt_run(abs, a, ops, Choice::Fifo)?.domain)
}

pub fn gpt_run(
    abs: DomainAbstraction,
    a: &MooreDomain,
    ops: &[SetOperator],
    choice: Choice,
) -> Result<ShellRun, DomainError> {
    let start = abs.apply(a)?;
    match choice {
        Choice::Canonical => canonical_run(abs, start, ops),
        Choice::Fifo => queued_run(abs, start, ops, None),
        Choice::Random(seed) => queued_run(abs, start, ops, Some(ChaCha8Rng::seed_from_u64(seed))),
    }
}

fn canonical_run(
    abs: DomainAbstraction,
    mut a: MooreDomain,
    ops: &[SetOperator],
) -> Result<ShellRun, DomainError> {
    let mut done: HashSet<(usize, Vec<Subset>)> = HashSet::new();
    let mut steps = Vec::new();
    let mut evaluations = 0;
    loop {
        let mut found = None;
        for (i, op) in ops.iter().enumerate() {
            check_tuples(a.len(), op.arity())?;
            for_each_tuple(a.family(), op.arity(), |args| {
                if !done.insert((i, args.to_vec())) {
                    return true;
                }
                evaluations += 1;
                let image = op.apply(args);
                if a.contains(image) {
                    return true;
                }
                found = Some(RefinementStep {
                    op: op.name().to_string(),
                    args: args.to_vec(),
                    image,
                });
                false
            });
            if found.is_some() {
                break;
            }
        }
        let Some(step) = found else {
            return Ok(ShellRun {
                domain: a,
                steps,
                evaluations,
            });
        };
        a = abs.apply(&a.refine_with(step.image)?)?;
        steps.push(step);
    }
}

/// Tuples with largest member index exactly `m`, each listed once.
fn tuples_ending_at(m: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(arity);
    fn go(m: usize, arity: usize, seen_m: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == arity {
            if seen_m {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..=m {
            cur.push(i);
            go(m, arity, seen_m || i == m, cur, out);
            cur.pop();
        }
    }
    go(m, arity, false, &mut cur, &mut out);
    out
}

fn queued_run(
    abs: DomainAbstraction,
    mut a: MooreDomain,
    ops: &[SetOperator],
    mut rng: Option<ChaCha8Rng>,
) -> Result<ShellRun, DomainError> {
    let mut members: Vec<Subset> = a.family().to_vec();
    if let Some(r) = rng.as_mut() {
        members.shuffle(r);
    }
    let mut known: HashSet<Subset> = members.iter().copied().collect();
    let mut steps = Vec::new();
    let mut evaluations = 0;
    let mut m = 0;
    while m < members.len() {
        let mut tasks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, op) in ops.iter().enumerate() {
            check_tuples(m + 1, op.arity())?;
            tasks.extend(tuples_ending_at(m, op.arity()).into_iter().map(|t| (i, t)));
        }
        if let Some(r) = rng.as_mut() {
            tasks.shuffle(r);
        }
        for (i, idx) in tasks {
            let op = &ops[i];
            let args: Vec<Subset> = idx.iter().map(|&j| members[j]).collect();
            evaluations += 1;
            let image = op.apply(&args);
            if a.contains(image) {
                continue;
            }
            a = abs.apply(&a.refine_with(image)?)?;
            let mut fresh: Vec<Subset> = a
                .family()
                .iter()
                .copied()
                .filter(|x| !known.contains(x))
                .collect();
            if let Some(r) = rng.as_mut() {
                fresh.shuffle(r);
            }
            known.extend(fresh.iter().copied());
            members.extend(fresh);
            steps.push(RefinementStep {
                op: op.name().to_string(),
                args,
                image,
            });
        }
        m += 1;
    }
    Ok(ShellRun {
        domain: a,
        steps,
        evaluations,
    })
}

/// Which refiners `IGPT` is allowed to pick.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Subrefiners {
    /// Every tuple over the domain, which makes `IGPT` coincide with `GPT`.
    All,
    /// Tuples of blocks of `pr(A)` that are members of `A`.
    Blocks,
    /// Tuples of block closures `γ(α(B))` for `B ∈ pr(A)`.
    BlockClosures,
}

impl Subrefiners {
    fn candidates(self, a: &MooreDomain) -> Vec<Subset> {
        let mut out: Vec<Subset> = match self {
            Subrefiners::All => return a.family().to_vec(),
            Subrefiners::Blocks => {
                let p = a.pr();
                p.blocks()
                    .map(|b| Subset::from_states(p.states(b).iter().copied()))
                    .filter(|&b| a.contains(b))
                    .collect()
            }
            Subrefiners::BlockClosures => {
                let p = a.pr();
                p.blocks()
                    .map(|b| a.closure_of(Subset::from_states(p.states(b).iter().copied())))
                    .collect()
            }
        };
        out.sort_unstable_by_key(|s| s.canonical_key());
        out.dedup();
        out
    }
}

/// `IGPT_F`: `GPT_F` restricted to the refiners admitted by `filter`.
pub fn igpt(
    abs: DomainAbstraction,
    a: &MooreDomain,
    ops: &[SetOperator],
    filter: Subrefiners,
) -> Result<MooreDomain, DomainError> {
    let mut a = abs.apply(a)?;
    loop {
        let candidates = filter.candidates(&a);
        let mut image = None;
        for op in ops {
            check_tuples(candidates.len(), op.arity())?;
            for_each_tuple(&candidates, op.arity(), |args| {
                let x = op.apply(args);
                if a.contains(x) {
                    true
                } else {
                    image = Some(x);
                    false
                }
            });
            if image.is_some() {
                break;
            }
        }
        match image {
            None => return Ok(a),
            Some(x) => a = abs.apply(&a.refine_with(x)?)?,
        }
    }
}

/// `GPT^Part_F(P)`: splits `P` by `f(S⃗)` for tuples of unions of blocks
/// until no image cuts a block.
pub fn gpt_part(p: &Partition, ops: &[SetOperator]) -> Result<Partition, DomainError> {
    check_universe(p.universe())?;
    let mut p = p.clone();
    'pass: loop {
        let unions = MooreDomain::pad(&p)?;
        for op in ops {
            check_tuples(unions.len(), op.arity())?;
            let mut cut = None;
            for_each_tuple(unions.family(), op.arity(), |args| {
                let x = op.apply(args);
                if unions.contains(x) {
                    true
                } else {
                    cut = Some(x);
                    false
                }
            });
            if let Some(x) = cut {
                let splits = p.split_by_set(&x.to_state_set(p.universe()));
                debug_assert!(!splits.is_empty());
                continue 'pass;
            }
        }
        return Ok(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_compact;

    fn dom(n: usize, text: &str) -> MooreDomain {
        MooreDomain::from_sets(n, parse_compact(text)).unwrap()
    }

    fn chain() -> MaskGraph {
        MaskGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 3)]).unwrap()
    }

    #[test]
    fn mask_graph_operators() {
        let g = chain();
        assert_eq!(g.post(Subset::from_states([1])), Subset::from_states([2]));
        assert_eq!(g.pre(Subset::from_states([3])), Subset::from_states([2, 3]));
        assert_eq!(g.ef(Subset::from_states([3])), Subset::full(4));
        assert_eq!(
            g.eu(Subset::EMPTY, Subset::from_states([2])),
            Subset::from_states([2])
        );
        assert_eq!(g.pre_tilde(Subset::full(4)), Subset::full(4));
    }

    #[test]
    fn shell_of_running_example() {
        let a = dom(4, "∅ 2 1234");
        let post = chain().post_op();
        let expected = dom(4, "∅ 2 3 4 34 234 1234");
        assert_eq!(shell_gfp(&a, &[post.clone()]).unwrap(), expected);
        assert_eq!(cpt(&a, &[post.clone()]).unwrap(), expected);
        assert!(expected.is_forward_complete(&post));
        assert!(refiners(&expected, &post).unwrap().is_empty());
        assert_eq!(shell_gfp(&a, &[]).unwrap(), a);
    }

    #[test]
    fn canonical_choice_reproduces_the_published_trace() {
        let a = dom(4, "∅ 2 1234");
        let run = cpt_run(&a, &[chain().post_op()], Choice::Canonical).unwrap();
        let chosen: Vec<Subset> = run.steps.iter().map(|s| s.args[0]).collect();
        assert_eq!(chosen, parse_compact("2 3 1234 234"));
        let images: Vec<Subset> = run.steps.iter().map(|s| s.image).collect();
        assert_eq!(images, parse_compact("3 4 234 34"));
    }

    #[test]
    fn refine_op_and_refiners() {
        let a = dom(4, "∅ 2 1234");
        let post = chain().post_op();
        let two = Subset::from_states([1]);
        assert_eq!(refine_op(&a, &post, &[two]).unwrap(), dom(4, "∅ 2 3 1234"));
        assert!(refiners(&a, &post).unwrap().contains(&vec![two]));
        assert_eq!(refine_op(&a, &post, &[Subset::EMPTY]).unwrap(), a);
        assert!(refiners(&a, &SetOperator::intersection())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn disjunctive_gpt_example() {
        let a = dom(4, "∅ 2 1234");
        let post = chain().post_op();
        let run = gpt_run(
            DomainAbstraction::Disjunctive,
            &a,
            &[post.clone()],
            Choice::Canonical,
        )
        .unwrap();
        assert_eq!(run.domain, dom(4, "∅ 2 3 4 23 24 34 234 1234"));
        assert_eq!(run.steps.len(), 2);
        assert_eq!(
            gpt(DomainAbstraction::Disjunctive, &a, &[post]).unwrap(),
            run.domain
        );
    }

    #[test]
    fn tuple_generation_covers_each_tuple_once() {
        let mut all: Vec<Vec<usize>> = (0..4).flat_map(|m| tuples_ending_at(m, 2)).collect();
        assert_eq!(all.len(), 16);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn enumeration_cap() {
        let big = MooreDomain::pad(&Partition::discrete(13)).unwrap();
        let eu = MaskGraph::from_edges(13, []).unwrap().eu_op();
        assert!(matches!(
            refiners(&big, &eu),
            Err(DomainError::EnumerationTooLarge { .. })
        ));
    }
}
