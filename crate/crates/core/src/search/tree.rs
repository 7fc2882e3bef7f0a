//! Part-1 and part-2 trees.
//!
//! Part 1 admits `σ` when `s_i ∈ U_{F_i}` and `U ∪ {A_σ}` passes bounded fip,
//! where `A_σ = ⋂_{m ∈ FS(σ)} (A − m)`. Part 2 additionally requires
//! `NS(σ) ⊆ A`, checked exactly. A node at depth `m` is a witness.
//!
//! Dead ends are resolved in post-order (Kleene–Brouwer order) into an
//! accumulated family `V ⊇ U` until `V ∪ {A_σ}` fails fip:
//! part-1 dead ends through the pair-failure and membership lemmas, part-2
//! dead ends through a nested part-1 search whose witness `S` contributes
//! the schema `{Z − n | n ∈ Z}` for `Z = FS(s_1..s_j) + gℕ`, `g` the gcd
//! of the remaining terms. `Z` contains `FS` of an infinite continuation
//! of `S` by multiples of `g`.

use std::sync::Arc;

use super::{
    constraint_part, Diagnostics, ExtensionCert, NsCheck, PartBank, SearchError, SearchLimits,
    SearchNode, SearchOutcome, WitnessCert,
};
use crate::bits::Bits;
use crate::family::{
    bounded_fip, bounded_fip_with, Family, FipPolicy, GeneratorSchema, Item, ItemId,
};
use crate::semigroup::{extend_after_pair_failure, extend_by_membership, SemigroupError};
use crate::setexpr::{finite_sums, nonempty_sums, NatSet, SetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Part1,
    Part2,
}

pub(crate) struct Budget {
    used: usize,
    max: usize,
}

impl Budget {
    pub(crate) fn new(max: usize) -> Self {
        Budget { used: 0, max }
    }

    pub(crate) fn take(&mut self) -> bool {
        self.used += 1;
        self.used <= self.max
    }
}

enum RawOutcome {
    Witness(Vec<u64>, Vec<Vec<ItemId>>),
    Extension(Family),
    Exhausted,
}

struct Accumulator {
    family: Family,
    bank: Option<PartBank>,
    version: usize,
}

impl Accumulator {
    fn fails(&mut self, target: &Bits, policy: &FipPolicy) -> bool {
        let family = &self.family;
        self.bank
            .get_or_insert_with(|| PartBank::new(&family.items(policy), policy))
            .first_failure(target, policy)
            .is_some()
    }

    fn replace(&mut self, family: Family) {
        self.family = family;
        self.bank = None;
        self.version += 1;
    }
}

struct Tree<'a> {
    mode: Mode,
    a: NatSet,
    m: usize,
    policy: FipPolicy,
    limits: SearchLimits,
    bank: PartBank,
    constraints: Vec<(Vec<ItemId>, Bits)>,
    acc: Accumulator,
    budget: &'a mut Budget,
    diag: Diagnostics,
    /// Whether dead ends grow the accumulator.
    resolve: bool,
}

fn target_window(a: &NatSet, m: usize, policy: &FipPolicy) -> Bits {
    Bits::from_set(a, 0, (m + 1) * policy.len())
}

impl Tree<'_> {
    fn node_passes(&self, window: &Bits) -> bool {
        !self.limits.fip_nodes || self.bank.passes(&window.shifted(0, self.policy.len()), &self.policy)
    }

    fn a_sigma(&self, seq: &[u64]) -> Result<NatSet, SearchError> {
        let fs = finite_sums(seq)?;
        Ok(NatSet::intersect(fs.into_iter().map(|f| self.a.shift(f)).collect()))
    }

    /// Explores the subtree at `seq`, whose node condition already holds.
    fn explore(&mut self, seq: &mut Vec<u64>, window: &Bits) -> Result<bool, SearchError> {
        let depth = seq.len();
        self.diag.max_depth = self.diag.max_depth.max(depth);
        if depth == self.m {
            return Ok(true);
        }
        let len = self.policy.len();
        let child_len = (self.m - depth) * len;
        let mut candidates = self.constraints[depth].1.clone();
        if self.mode == Mode::Part2 {
            candidates.and_with(&window.shifted(0, len));
        }
        let lo = seq.last().map_or(1, |s| s + 1) as usize;
        let hi = self.limits.child_bound(&self.policy) as usize;
        let mut version = self.acc.version;
        for n in candidates.iter_ones().skip_while(|&n| n < lo).take_while(|&n| n < hi) {
            if self.resolve && self.acc.version != version {
                version = self.acc.version;
                if self.acc.fails(&window.shifted(0, len), &self.policy) {
                    // Every remaining subtree is already excluded by V.
                    break;
                }
            }
            self.diag.candidates_tested += 1;
            let mut child = window.shifted(0, child_len);
            child.and_with(&window.shifted(n, child_len));
            if !self.node_passes(&child) {
                continue;
            }
            if !self.budget.take() {
                return Err(SearchError::BudgetExhausted(self.diag.clone()));
            }
            self.diag.nodes_expanded += 1;
            seq.push(n as u64);
            if self.explore(seq, &child)? {
                return Ok(true);
            }
            seq.pop();
        }
        if self.resolve {
            self.resolve_dead_end(seq, window)?;
        }
        Ok(false)
    }

    fn resolve_dead_end(&mut self, seq: &[u64], window: &Bits) -> Result<(), SearchError> {
        self.diag.dead_ends += 1;
        let target = window.shifted(0, self.policy.len());
        if self.acc.fails(&target, &self.policy) {
            return Ok(());
        }
        let a_sigma = self.a_sigma(seq)?;
        match self.mode {
            Mode::Part1 => self.resolve_by_pair_failure(seq, &a_sigma)?,
            Mode::Part2 => self.resolve_by_nested_search(seq, &a_sigma)?,
        }
        if self.acc.fails(&target, &self.policy) {
            Ok(())
        } else {
            Err(SearchError::Inconclusive {
                reason: format!("dead end {} not excluded by the accumulated family", fmt_seq(seq)),
                diagnostics: self.diag.clone(),
            })
        }
    }

    fn resolve_by_pair_failure(&mut self, seq: &[u64], a_sigma: &NatSet) -> Result<(), SearchError> {
        let depth = seq.len();
        let base = self.acc.family.clone();
        let constraint = base.part(&self.constraints[depth].0, &self.policy)?;
        let lo = seq.last().map_or(1, |s| s + 1);
        let candidates = [NatSet::intersect(vec![constraint.clone(), NatSet::tail(lo)]), constraint];
        let mut last_err = None;
        for y in candidates {
            match extend_after_pair_failure(&base, a_sigma, &y, &self.policy) {
                Ok(ext) => {
                    self.diag.steps.push(format!("{}: {} with Y={}", fmt_seq(seq), ext.lemma, y));
                    self.acc.replace(ext.family);
                    return self.add_complement_by_membership(seq, a_sigma);
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(inconclusive(seq, last_err, &self.diag))
    }

    fn add_complement_by_membership(&mut self, seq: &[u64], a_sigma: &NatSet) -> Result<(), SearchError> {
        let target = self.a_sigma_bits(a_sigma);
        if self.acc.fails(&target, &self.policy) {
            return Ok(());
        }
        let family = self.acc.family.clone();
        let complement = a_sigma.complement();
        let items = family.items(&self.policy);
        for item in items.iter().rev().take(8) {
            if let Ok(ext) = extend_by_membership(&family, &complement, item.id, &self.policy) {
                self.diag.steps.push(format!("{}: {} via {}", fmt_seq(seq), ext.lemma, item.id));
                self.acc.replace(ext.family);
                return Ok(());
            }
        }
        Ok(())
    }

    fn a_sigma_bits(&self, a_sigma: &NatSet) -> Bits {
        Bits::from_set(a_sigma, 0, self.policy.len())
    }

    fn resolve_by_nested_search(&mut self, seq: &[u64], a_sigma: &NatSet) -> Result<(), SearchError> {
        let base = self.acc.family.clone();
        let (raw, diag) = run(
            Mode::Part1,
            &base,
            a_sigma.clone(),
            self.m,
            &self.policy,
            &self.limits,
            self.budget,
            true,
        )?;
        self.diag.absorb(diag);
        match raw {
            RawOutcome::Witness(s, _) => {
                let target = self.a_sigma_bits(a_sigma);
                let mut fallback = None;
                for j in (0..s.len()).rev() {
                    let closure = periodic_closure(&s, j)?;
                    let schema = GeneratorSchema::shifted(closure.clone(), closure.clone(), true);
                    let family = base.append_schema(schema, "periodic closure of a part-1 witness")?;
                    if !bounded_fip(&family, &self.policy).is_verified() {
                        continue;
                    }
                    let mut trial = Accumulator { family, bank: None, version: 0 };
                    if trial.fails(&target, &self.policy) {
                        self.diag.steps.push(format!("{}: closure {}", fmt_seq(seq), closure));
                        self.acc.replace(trial.family);
                        return Ok(());
                    }
                    fallback.get_or_insert((closure, trial.family));
                }
                let Some((closure, family)) = fallback else {
                    return Err(SearchError::Inconclusive {
                        reason: format!("every closure of {} breaks fip", fmt_seq(&s)),
                        diagnostics: self.diag.clone(),
                    });
                };
                self.diag.steps.push(format!("{}: closure {}", fmt_seq(seq), closure));
                self.acc.replace(family);
            }
            RawOutcome::Extension(family) => {
                self.diag.steps.push(format!("{}: part-1 extension", fmt_seq(seq)));
                self.acc.replace(family);
            }
            RawOutcome::Exhausted => unreachable!("resolving searches never report exhaustion"),
        }
        Ok(())
    }
}

fn inconclusive(seq: &[u64], err: Option<SemigroupError>, diag: &Diagnostics) -> SearchError {
    let why = err.map_or_else(|| "no lemma applies".to_string(), |e| e.to_string());
    SearchError::Inconclusive {
        reason: format!("dead end {}: {why}", fmt_seq(seq)),
        diagnostics: diag.clone(),
    }
}

pub(crate) fn fmt_seq(seq: &[u64]) -> String {
    let parts: Vec<String> = seq.iter().map(u64::to_string).collect();
    format!("<{}>", parts.join(","))
}

#[allow(clippy::too_many_arguments)]
fn run(
    mode: Mode,
    base: &Family,
    a: NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
    budget: &mut Budget,
    resolve: bool,
) -> Result<(RawOutcome, Diagnostics), SearchError> {
    let items: Arc<Vec<Item>> = base.items(policy);
    let mut diag = Diagnostics::default();
    let constraints = (1..=m as u64).map(|i| constraint_part(&items, i, policy.len(), &mut diag)).collect();
    let bank = PartBank::new(&items, policy);
    let mut tree = Tree {
        mode,
        a: a.clone(),
        m,
        policy: *policy,
        limits: *limits,
        bank,
        constraints,
        acc: Accumulator { family: base.clone(), bank: None, version: 0 },
        budget,
        diag,
        resolve,
    };
    let window = target_window(&a, m, policy);
    let mut seq = Vec::new();
    let found = if tree.node_passes(&window) {
        tree.explore(&mut seq, &window)?
    } else {
        if resolve {
            tree.resolve_dead_end(&seq, &window)?;
        }
        false
    };
    let outcome = if found {
        let used = (0..seq.len()).map(|i| tree.constraints[i].0.clone()).collect();
        RawOutcome::Witness(seq, used)
    } else if resolve {
        RawOutcome::Extension(tree.acc.family)
    } else {
        RawOutcome::Exhausted
    };
    Ok((outcome, tree.diag))
}

fn search(
    mode: Mode,
    u: &Family,
    a: &NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    policy.validate()?;
    if limits.fip_nodes && !bounded_fip(u, policy).is_verified() {
        return Err(SearchError::Precondition("U does not pass bounded fip".into()));
    }
    let mut budget = Budget::new(limits.max_nodes);
    let (raw, diag) = run(mode, u, a.clone(), m, policy, limits, &mut budget, limits.fip_nodes)?;
    match raw {
        RawOutcome::Witness(seq, constraints) => {
            let fs = finite_sums(&seq)?;
            let shifted: Vec<NatSet> = fs.iter().map(|&f| a.shift(f)).collect();
            let fs_set = NatSet::finite_sums_of(&seq)?;
            let fs_shifts: Vec<NatSet> = fs.iter().map(|&f| fs_set.shift(f)).collect();
            let mut fip_reports = Vec::new();
            if limits.fip_nodes {
                fip_reports.push(("U+{A-n : n in FS(S)}".to_string(), bounded_fip_with(u, &shifted, policy)));
                fip_reports.push(("U+{FS(S)-n : n in FS(S)}".to_string(), bounded_fip_with(u, &fs_shifts, policy)));
            }
            let mut ns_checks = Vec::new();
            if mode == Mode::Part2 {
                let sums = nonempty_sums(&seq)?;
                let holds = sums.iter().all(|&x| a.member(x));
                ns_checks.push(NsCheck { from: 0, target: a.to_string(), sums, holds });
            }
            Ok(SearchOutcome::Witness(WitnessCert {
                node: SearchNode { seq: seq.clone(), signs: None, constraints },
                seq,
                signs: None,
                ns_checks,
                fip_reports,
                policy: *policy,
                diagnostics: diag,
            }))
        }
        RawOutcome::Extension(family) => {
            let fip = bounded_fip(&family, policy);
            let failure = bounded_fip_with(&family, std::slice::from_ref(a), policy);
            if !fip.is_verified() || failure.is_verified() {
                return Err(SearchError::Inconclusive {
                    reason: format!(
                        "accumulated family re-check failed (fip {}, with A {})",
                        fip.verdict, failure.verdict
                    ),
                    diagnostics: diag,
                });
            }
            Ok(SearchOutcome::Extension(ExtensionCert { family, fip, failure, policy: *policy, diagnostics: diag }))
        }
        RawOutcome::Exhausted => Err(SearchError::Inconclusive {
            reason: "tree exhausted without a witness".into(),
            diagnostics: diag,
        }),
    }
}

/// Either a witness `S` of length `m` with `U ∪ {A − n | n ∈ FS(S)}` passing
/// bounded fip, or a family `V ⊇ U` with `V ∪ {A}` failing it.
pub fn search_part1(
    u: &Family,
    a: &NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    search(Mode::Part1, u, a, m, policy, limits)
}

/// As [`search_part1`], with the extra exact condition `NS(S) ⊆ A`.
///
/// With `limits.fip_nodes == false` the tree keeps only the exact
/// conditions and an exhausted tree is reported as
/// [`SearchError::Inconclusive`] rather than resolved into an extension.
pub fn search_part2(
    u: &Family,
    a: &NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    search(Mode::Part2, u, a, m, policy, limits)
}

/// Exhaustive part-2 tree without fip conditions: `Some(S)` for the least
/// `S` in depth-first order, `None` when the finite tree has no depth-`m` node.
pub(crate) fn exact_part2(
    u: &Family,
    a: &NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<(Option<Vec<u64>>, Diagnostics), SearchError> {
    let limits = SearchLimits { fip_nodes: false, ..*limits };
    let mut budget = Budget::new(limits.max_nodes);
    let (raw, diag) = run(Mode::Part2, u, a.clone(), m, policy, &limits, &mut budget, false)?;
    Ok(match raw {
        RawOutcome::Witness(s, _) => (Some(s), diag),
        _ => (None, diag),
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `FS(s[..j]) + gℕ` with `g = gcd(s[j..])`.
fn periodic_closure(s: &[u64], j: usize) -> Result<NatSet, SetError> {
    let g = s[j..].iter().fold(0, |a, &b| gcd(a, b));
    let parts = finite_sums(&s[..j])?
        .into_iter()
        .map(|f| NatSet::intersect(vec![NatSet::residue(f % g, g), NatSet::tail(f)]))
        .collect();
    Ok(NatSet::union(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{trivial_family, Verdict};

    fn p() -> FipPolicy {
        FipPolicy::default()
    }

    fn witness(o: SearchOutcome) -> WitnessCert {
        match o {
            SearchOutcome::Witness(w) => w,
            SearchOutcome::Extension(_) => panic!("expected a witness"),
        }
    }

    fn extension(o: SearchOutcome) -> ExtensionCert {
        match o {
            SearchOutcome::Extension(e) => e,
            SearchOutcome::Witness(w) => panic!("expected an extension, got {:?}", w.seq),
        }
    }

    #[test]
    fn part1_examples() {
        let l = SearchLimits::default();
        let w = witness(search_part1(&trivial_family(), &NatSet::naturals(), 3, &p(), &l).unwrap());
        assert_eq!(w.seq, vec![1, 2, 3]);
        assert!(w.fip_reports[0].1.is_verified());
        let w = witness(search_part1(&trivial_family(), &NatSet::evens(), 3, &p(), &l).unwrap());
        assert_eq!(w.seq, vec![2, 4, 6]);
        // Odds shifted by even sums stay odds, so part 1 finds <2,4>.
        let w = witness(search_part1(&trivial_family(), &NatSet::odds(), 2, &p(), &l).unwrap());
        assert_eq!(w.seq, vec![2, 4]);
    }

    #[test]
    fn part1_finite_target_gives_extension() {
        let l = SearchLimits::default();
        let five = NatSet::explicit(vec![5]).unwrap();
        let e = extension(search_part1(&trivial_family(), &five, 2, &p(), &l).unwrap());
        assert!(e.fip.is_verified());
        assert_eq!(e.failure.verdict, Verdict::RefutedAtBound);
    }

    #[test]
    fn part2_examples() {
        let l = SearchLimits::default();
        let w = witness(search_part2(&trivial_family(), &NatSet::evens(), 3, &p(), &l).unwrap());
        assert_eq!(w.seq, vec![2, 4, 6]);
        assert_eq!(w.ns_checks[0].sums, vec![2, 4, 6, 8, 10, 12]);
        assert!(w.ns_checks[0].holds);
        let e = extension(search_part2(&trivial_family(), &NatSet::odds(), 2, &p(), &l).unwrap());
        assert!(e.fip.is_verified());
        assert_eq!(e.failure.verdict, Verdict::RefutedAtBound);
        let w = witness(search_part2(&trivial_family(), &NatSet::naturals(), 1, &p(), &l).unwrap());
        assert_eq!(w.seq, vec![1]);
    }

    #[test]
    fn part2_residue_dead_tree() {
        let l = SearchLimits::default();
        let a = NatSet::residue(0, 5).complement();
        let e = extension(search_part2(&trivial_family(), &a, 4, &p(), &l).unwrap());
        assert!(e.fip.is_verified());
        assert!(!e.failure.is_verified());
    }

    #[test]
    fn budget_is_enforced() {
        let l = SearchLimits { max_nodes: 2, ..Default::default() };
        let err = search_part2(&trivial_family(), &NatSet::evens(), 4, &p(), &l).unwrap_err();
        assert!(matches!(err, SearchError::BudgetExhausted(_)));
    }

    #[test]
    fn exact_mode_on_finite_class() {
        let l = SearchLimits::default();
        let class = NatSet::from_elements(vec![2, 4, 6, 8, 10, 12]);
        let (s, _) = exact_part2(&trivial_family(), &class, 2, &p(), &l).unwrap();
        assert_eq!(s, Some(vec![2, 4]));
        let class = NatSet::from_elements(vec![1, 2, 4, 8]);
        let (s, _) = exact_part2(&trivial_family(), &class, 2, &p(), &l).unwrap();
        assert_eq!(s, None);
    }
}

