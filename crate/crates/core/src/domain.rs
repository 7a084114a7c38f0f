//! Explicit abstract domains of `℘(Σ)`.
//!
//! A [`MooreDomain`] lists every member of an intersection-closed family
//! containing `Σ`. It is meant for small universes, where it serves as a
//! reference for the partition-based algorithms.

use std::collections::HashSet;
use std::fmt;

use crate::error::DomainError;
use crate::partition::Partition;
use crate::shell::SetOperator;
use crate::stateset::Subset;

/// Largest universe the explicit representation accepts.
pub const MAX_UNIVERSE: usize = 24;
/// Largest family the explicit representation accepts.
pub const MAX_FAMILY: usize = 1 << 20;

/// Intersection-closed family of subsets of `[0, universe)` containing `Σ`,
/// sorted by [`Subset::canonical_key`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MooreDomain {
    universe: usize,
    family: Vec<Subset>,
}

pub(crate) fn check_universe(n: usize) -> Result<(), DomainError> {
    if n > MAX_UNIVERSE {
        Err(DomainError::UniverseTooLarge {
            size: n,
            cap: MAX_UNIVERSE,
        })
    } else {
        Ok(())
    }
}

fn check_family(len: usize) -> Result<(), DomainError> {
    if len > MAX_FAMILY {
        Err(DomainError::FamilyTooLarge { cap: MAX_FAMILY })
    } else {
        Ok(())
    }
}

fn sorted(set: HashSet<Subset>) -> Vec<Subset> {
    let mut v: Vec<Subset> = set.into_iter().collect();
    v.sort_unstable_by_key(|s| s.canonical_key());
    v
}

/// Adds `x ∩ m` for every `m` already present. Applied to an
/// intersection-closed set containing `Σ`, this yields `M(set ∪ {x})`.
fn add_meets(set: &mut HashSet<Subset>, x: Subset) -> Result<(), DomainError> {
    if set.contains(&x) {
        return Ok(());
    }
    let fresh: Vec<Subset> = set
        .iter()
        .map(|m| m.intersection(x))
        .filter(|m| !set.contains(m))
        .collect();
    set.extend(fresh);
    check_family(set.len())
}

impl MooreDomain {
    /// `M(X)`: the least intersection-closed family containing `X` and `Σ`.
    pub fn moore_closure<I: IntoIterator<Item = Subset>>(
        universe: usize,
        sets: I,
    ) -> Result<MooreDomain, DomainError> {
        check_universe(universe)?;
        let full = Subset::full(universe);
        let mut set = HashSet::from([full]);
        for x in sets {
            add_meets(&mut set, x.intersection(full))?;
        }
        Ok(MooreDomain {
            universe,
            family: sorted(set),
        })
    }

    /// `D(X)`: closes `M(X)` under arbitrary unions, the empty one included.
    pub fn disjunctive_completion<I: IntoIterator<Item = Subset>>(
        universe: usize,
        sets: I,
    ) -> Result<MooreDomain, DomainError> {
        let moore = Self::moore_closure(universe, sets)?;
        let mut joins = HashSet::from([Subset::EMPTY]);
        for &x in &moore.family {
            if joins.contains(&x) {
                continue;
            }
            let fresh: Vec<Subset> = joins
                .iter()
                .map(|u| u.union(x))
                .filter(|u| !joins.contains(u))
                .collect();
            joins.extend(fresh);
            check_family(joins.len())?;
        }
        Ok(MooreDomain {
            universe,
            family: sorted(joins),
        })
    }

    /// `∇(A)`.
    pub fn disjunctive(&self) -> Result<MooreDomain, DomainError> {
        Self::disjunctive_completion(self.universe, self.family.iter().copied())
    }

    /// Accepts `sets` only if they already form a Moore family.
    pub fn from_sets<I: IntoIterator<Item = Subset>>(
        universe: usize,
        sets: I,
    ) -> Result<MooreDomain, DomainError> {
        check_universe(universe)?;
        let full = Subset::full(universe);
        let set: HashSet<Subset> = sets.into_iter().collect();
        if let Some(x) = set.iter().find(|x| !x.is_subset(full)) {
            return Err(DomainError::NotMooreFamily {
                reason: format!("{x:?} is not a subset of the universe"),
            });
        }
        if !set.contains(&full) {
            return Err(DomainError::NotMooreFamily {
                reason: "the universe is missing".into(),
            });
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&a.intersection(b)) {
                    return Err(DomainError::NotMooreFamily {
                        reason: format!("{a:?} ∩ {b:?} is missing"),
                    });
                }
            }
        }
        Ok(MooreDomain {
            universe,
            family: sorted(set),
        })
    }

    /// `{Σ}`, the most abstract domain.
    pub fn top(universe: usize) -> Result<MooreDomain, DomainError> {
        Self::moore_closure(universe, [])
    }

    /// `pad(P)`: every union of blocks of `P`.
    pub fn pad(partition: &Partition) -> Result<MooreDomain, DomainError> {
        let n = partition.universe();
        check_universe(n)?;
        let blocks: Vec<Subset> = partition
            .blocks()
            .map(|b| Subset::from_states(partition.states(b).iter().copied()))
            .collect();
        if blocks.len() > MAX_FAMILY.trailing_zeros() as usize {
            return Err(DomainError::FamilyTooLarge { cap: MAX_FAMILY });
        }
        let family = (0u32..1 << blocks.len())
            .map(|pick| {
                blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick & (1 << i) != 0)
                    .fold(Subset::EMPTY, |acc, (_, b)| acc.union(*b))
            })
            .collect::<HashSet<_>>();
        Ok(MooreDomain {
            universe: n,
            family: sorted(family),
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Members in canonical order.
    pub fn family(&self) -> &[Subset] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.family
            .binary_search_by_key(&set.canonical_key(), |m| m.canonical_key())
            .is_ok()
    }

    /// `γ(α(S))`: the least member containing `S`.
    pub fn closure_of(&self, set: Subset) -> Subset {
        self.family
            .iter()
            .filter(|m| set.is_subset(**m))
            .fold(Subset::full(self.universe), |acc, m| acc.intersection(*m))
    }

    /// `pr(A)`: states with the same closure share a block.
    pub fn pr(&self) -> Partition {
        Partition::from_key(self.universe, |s| self.closure_of(Subset::singleton(s)))
    }

    /// `M(γ(A) ∪ {x})`.
    pub fn refine_with(&self, x: Subset) -> Result<MooreDomain, DomainError> {
        if self.contains(x) {
            return Ok(self.clone());
        }
        let mut set: HashSet<Subset> = self.family.iter().copied().collect();
        add_meets(&mut set, x.intersection(Subset::full(self.universe)))?;
        Ok(MooreDomain {
            universe: self.universe,
            family: sorted(set),
        })
    }

    /// Closed under complements, i.e. `A = pad(pr(A))`.
    pub fn is_partitioning(&self) -> bool {
        self.family
            .iter()
            .all(|m| self.contains(m.complement(self.universe)))
    }

    /// Closed under all unions, the empty one included.
    pub fn is_disjunctive(&self) -> bool {
        self.contains(Subset::EMPTY)
            && self
                .family
                .iter()
                .all(|&a| self.family.iter().all(|&b| self.contains(a.union(b))))
    }

    /// `f(γ(A)^k) ⊆ γ(A)`, by enumeration of all argument tuples.
    pub fn is_forward_complete(&self, op: &SetOperator) -> bool {
        let mut args = vec![Subset::EMPTY; op.arity()];
        let m = self.family.len();
        let mut idx = vec![0usize; op.arity()];
        loop {
            for (a, &i) in args.iter_mut().zip(&idx) {
                *a = self.family[i];
            }
            if !self.contains(op.apply(&args)) {
                return false;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return true;
                }
                idx[k] += 1;
                if idx[k] < m {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Compact rendering such as `{∅, 2, 34, 1234}`: states are printed as
    /// `s + base`, run together when every label is a single digit and
    /// separated by `.` otherwise.
    pub fn render(&self, base: usize) -> String {
        let members: Vec<String> = self
            .family
            .iter()
            .map(|m| render_subset(*m, self.universe, base))
            .collect();
        format!("{{{}}}", members.join(", "))
    }
}

pub fn render_subset(set: Subset, universe: usize, base: usize) -> String {
    if set.is_empty() {
        return "∅".into();
    }
    let sep = if universe + base <= 10 { "" } else { "." };
    set.iter()
        .map(|s| (s + base).to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Parses the compact one-based notation used in [`MooreDomain::render`]
/// with `base = 1` for universes of at most nine states, e.g.
/// `"∅, 2, 1234"`. Members may be separated by commas or whitespace, and
/// braces are ignored.
pub fn parse_compact(text: &str) -> Vec<Subset> {
    text.split(|c: char| c == ',' || c.is_whitespace() || c == '{' || c == '}')
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t == "∅" {
                Subset::EMPTY
            } else {
                t.chars()
                    .map(|c| {
                        let d = c.to_digit(10).expect("compact notation uses digits 1-9") as usize;
                        assert!(d >= 1, "compact notation is one-based");
                        d - 1
                    })
                    .collect()
            }
        })
        .collect()
}

impl fmt::Debug for MooreDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(n: usize, text: &str) -> MooreDomain {
        MooreDomain::from_sets(n, parse_compact(text)).unwrap()
    }

    fn part(n: usize, text: &str) -> Partition {
        let classes: Vec<Vec<usize>> = parse_compact(text)
            .into_iter()
            .map(|s| s.iter().collect())
            .collect();
        Partition::from_classes(n, &classes).unwrap()
    }

    #[test]
    fn moore_closure_examples() {
        let m = MooreDomain::moore_closure(3, parse_compact("12 13")).unwrap();
        assert_eq!(m, dom(3, "1 12 13 123"));
        assert_eq!(MooreDomain::moore_closure(3, []).unwrap(), dom(3, "123"));
        let m = MooreDomain::moore_closure(5, parse_compact("1235 4 135")).unwrap();
        assert_eq!(m.render(1), "{∅, 4, 135, 1235, 12345}");
    }

    #[test]
    fn disjunctive_completion_examples() {
        let d = MooreDomain::disjunctive_completion(4, parse_compact("∅ 2 3 1234")).unwrap();
        assert_eq!(d, dom(4, "∅ 2 3 23 1234"));
        let d = MooreDomain::disjunctive_completion(4, parse_compact("∅ 2 3 23 4 1234")).unwrap();
        assert_eq!(d, dom(4, "∅ 2 3 4 23 24 34 234 1234"));
        assert!(d.is_disjunctive());
    }

    #[test]
    fn closure_and_pr_on_small_domains() {
        let a5 = dom(4, "∅ 12 123 124 1234");
        assert_eq!(
            a5.closure_of(Subset::from_states([2])),
            Subset::from_states([0, 1, 2])
        );
        assert_eq!(a5.closure_of(Subset::EMPTY), Subset::EMPTY);
        assert_eq!(a5.pr().render(1), "{1 2 | 3 | 4}");
        let a4 = dom(4, "12 123 124 1234");
        assert_eq!(a4.closure_of(Subset::EMPTY), Subset::from_states([0, 1]));
        for m in a5.family() {
            assert_eq!(a5.closure_of(*m), *m);
        }
    }

    #[test]
    fn pad_examples() {
        let p = part(4, "12 3 4");
        let a3 = MooreDomain::pad(&p).unwrap();
        assert_eq!(a3, dom(4, "∅ 12 3 4 34 123 124 1234"));
        assert!(a3.is_partitioning());
        assert!(!dom(4, "∅ 12 123 124 1234").is_partitioning());
        assert_eq!(
            MooreDomain::pad(&Partition::trivial(3)).unwrap(),
            dom(3, "∅ 123")
        );
        let pl = part(5, "1235 4");
        assert_eq!(
            MooreDomain::pad(&pl).unwrap().render(1),
            "{∅, 4, 1235, 12345}"
        );
    }

    #[test]
    fn from_sets_rejects_non_moore() {
        assert!(MooreDomain::from_sets(3, parse_compact("12 23")).is_err());
        assert!(MooreDomain::from_sets(3, parse_compact("12 23 2 123")).is_ok());
        assert!(matches!(
            MooreDomain::moore_closure(25, []),
            Err(DomainError::UniverseTooLarge { size: 25, .. })
        ));
    }

    #[test]
    fn refine_with_adds_meets() {
        let a = dom(4, "∅ 2 1234");
        let b = a.refine_with(Subset::from_states([2])).unwrap();
        assert_eq!(b, dom(4, "∅ 2 3 1234"));
        assert_eq!(a.refine_with(Subset::from_states([1])).unwrap(), a);
    }

    #[test]
    fn render_uses_separators_for_large_universes() {
        let d = MooreDomain::moore_closure(12, [Subset::from_states([0, 10])]).unwrap();
        assert_eq!(d.render(1), "{1.11, 1.2.3.4.5.6.7.8.9.10.11.12}");
    }
}
