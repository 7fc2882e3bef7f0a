//! Bounded tree searches for finite-sums witnesses.
//!
//! Nodes are finite increasing sequences `σ = ⟨s_1 < … < s_k⟩` (with signs in
//! the iterated search). The search is depth first with the least child
//! first, which visits dead ends in Kleene–Brouwer order; at each dead end
//! the extension lemmas grow an accumulated family so that it excludes the
//! node's target set.

mod iterated;
mod tree;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::bits::Bits;
use crate::family::{for_each_part, FipPolicy, FipReport, Item, ItemId, PartStat, Verdict};
use crate::semigroup::SemigroupError;
use crate::setexpr::{SetError, Sign};

pub use iterated::search_iterated;
pub(crate) use tree::exact_part2;
pub use tree::{search_part1, search_part2};

/// `F_n`: the positions of the set bits of `n`. Every finite set is `F_n`
/// for exactly one `n ≥ 1`; `n = 0` gives the empty set, which is not part
/// of the enumeration.
pub fn canonical_finite_set(n: u64) -> Vec<u64> {
    (0..64).filter(|b| n >> b & 1 == 1).collect()
}

/// Kleene–Brouwer order: a proper extension precedes its prefix, otherwise
/// the first differing entry decides.
pub fn kb_compare<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    b.len().cmp(&a.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Nodes admitted to the tree across the whole search, nested searches included.
    pub max_nodes: usize,
    /// Child candidates are drawn from `(max σ, child_bound)`; `None` means `B`.
    pub child_bound: Option<u64>,
    /// Whether the node fip condition is checked. Explicit finite colorings
    /// switch it off and keep only the exact finite-sums conditions.
    pub fip_nodes: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 200_000, child_bound: None, fip_nodes: true }
    }
}

impl SearchLimits {
    pub(crate) fn child_bound(&self, policy: &FipPolicy) -> u64 {
        self.child_bound.unwrap_or(policy.bound).min(policy.bound)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub nodes_expanded: usize,
    pub candidates_tested: usize,
    pub max_depth: usize,
    pub dead_ends: usize,
    /// Indices of `F_i` beyond the family size, treated as ℕ.
    pub skipped_indices: usize,
    pub steps: Vec<String>,
}

impl Diagnostics {
    pub(crate) fn absorb(&mut self, other: Diagnostics) {
        self.nodes_expanded += other.nodes_expanded;
        self.candidates_tested += other.candidates_tested;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.dead_ends += other.dead_ends;
        self.skipped_indices += other.skipped_indices;
        self.steps.extend(other.steps);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    pub seq: Vec<u64>,
    pub signs: Option<Vec<Sign>>,
    /// For each `i`, the family indices of `F_i` that were applied.
    pub constraints: Vec<Vec<ItemId>>,
}

/// Exact check that the nonzero finite sums of a suffix lie in a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsCheck {
    /// Index (0-based) of the first sequence element of the suffix.
    pub from: usize,
    pub target: String,
    pub sums: Vec<u64>,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct WitnessCert {
    pub seq: Vec<u64>,
    pub signs: Option<Vec<Sign>>,
    pub ns_checks: Vec<NsCheck>,
    /// Named fip reports (e.g. the shifted-target family and the FS family).
    pub fip_reports: Vec<(String, FipReport)>,
    pub node: SearchNode,
    pub policy: FipPolicy,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct ExtensionCert {
    pub family: crate::family::Family,
    /// Bounded fip of the extended family.
    pub fip: FipReport,
    /// Bounded fip of the extended family with the target added.
    pub failure: FipReport,
    pub policy: FipPolicy,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Witness(WitnessCert),
    Extension(ExtensionCert),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SearchError {
    #[error("search budget exhausted after {} nodes", .0.nodes_expanded)]
    BudgetExhausted(Diagnostics),
    #[error("no certificate at bound: {reason}")]
    Inconclusive { reason: String, diagnostics: Diagnostics },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Lemma(#[from] SemigroupError),
}

impl From<crate::family::FamilyError> for SearchError {
    fn from(e: crate::family::FamilyError) -> Self {
        SearchError::Lemma(SemigroupError::Family(e))
    }
}

/// How a part failed the bounded "infinite" test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Thinness {
    Thin,
    DiesOut,
}

/// The distinct parts `U_G` with `|G| < f_max`, for checking `U ∪ {X}`
/// without re-enumerating `U`'s own parts.
pub(crate) struct PartBank {
    parts: Vec<(Vec<ItemId>, Bits)>,
}

impl PartBank {
    pub(crate) fn new(items: &[Item], policy: &FipPolicy) -> Self {
        let ids: Vec<ItemId> = items.iter().map(|i| i.id).collect();
        let bits: Vec<&Bits> = items.iter().map(|i| &i.bits).collect();
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut parts = Vec::new();
        for_each_part::<()>(&bits, policy.max_f - 1, policy.len(), false, |chosen, part| {
            if seen.insert(part.clone()) {
                parts.push((chosen.iter().map(|&i| ids[i]).collect(), part.clone()));
            }
            std::ops::ControlFlow::Continue(())
        });
        PartBank { parts }
    }

    /// First part `U_G ∩ X` that fails the bounded test, in bank order.
    pub(crate) fn first_failure(
        &self,
        extra: &Bits,
        policy: &FipPolicy,
    ) -> Option<(Thinness, PartStat)> {
        let tail = policy.tail_start();
        let mut dying = None;
        for (g, part) in &self.parts {
            let both = part.and(extra);
            let count = both.count();
            let stat = || PartStat { f: g.clone(), count, max: both.max().map(|m| m as u64) };
            if count < policy.min_count {
                return Some((Thinness::Thin, stat()));
            }
            if dying.is_none() && both.max().is_none_or(|m| (m as u64) < tail) {
                dying = Some((Thinness::DiesOut, stat()));
            }
        }
        dying
    }

    pub(crate) fn passes(&self, extra: &Bits, policy: &FipPolicy) -> bool {
        self.first_failure(extra, policy).is_none()
    }
}

impl From<Thinness> for Verdict {
    fn from(t: Thinness) -> Self {
        match t {
            Thinness::Thin => Verdict::RefutedAtBound,
            Thinness::DiesOut => Verdict::Unknown,
        }
    }
}

/// `U_{F_i}` over the family's items; indices past the end are skipped.
pub(crate) fn constraint_part(
    items: &[Item],
    i: u64,
    len: usize,
    diag: &mut Diagnostics,
) -> (Vec<ItemId>, Bits) {
    let mut acc = Bits::ones(len);
    let mut used = Vec::new();
    for idx in canonical_finite_set(i) {
        match items.get(idx as usize) {
            Some(item) => {
                acc.and_with(&item.bits);
                used.push(item.id);
            }
            None => diag.skipped_indices += 1,
        }
    }
    (used, acc)
}

impl fmt::Display for SearchNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.seq.iter().map(u64::to_string).collect();
        write!(f, "<{}>", seq.join(","))?;
        if let Some(signs) = &self.signs {
            let s: Vec<String> = signs.iter().map(Sign::to_string).collect();
            write!(f, " signs=({})", s.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_finite_set(1), vec![0]);
        assert_eq!(canonical_finite_set(3), vec![0, 1]);
        assert_eq!(canonical_finite_set(6), vec![1, 2]);
        assert!(canonical_finite_set(0).is_empty());
    }

    #[test]
    fn canonical_is_a_bijection_on_small_sets() {
        let mut seen = HashSet::new();
        for n in 1..1024u64 {
            assert!(seen.insert(canonical_finite_set(n)));
        }
        // Every subset of {0..9} except ∅ appears.
        assert_eq!(seen.len(), 1023);
    }

    #[test]
    fn enumeration_richness() {
        // For F ⊆ {0,1,2,3}: 2^(8-|F|) values n < 256 have F ⊆ F_n.
        for mask in 1u64..16 {
            let f = canonical_finite_set(mask);
            let hits = (0..256u64)
                .filter(|&n| {
                    let fnn = canonical_finite_set(n);
                    f.iter().all(|x| fnn.contains(x))
                })
                .count();
            assert_eq!(hits, 1 << (8 - f.len()));
        }
    }

    #[test]
    fn kb_examples() {
        assert_eq!(kb_compare(&[1, 2], &[1]), Ordering::Less);
        assert_eq!(kb_compare(&[1], &[2]), Ordering::Less);
        assert_eq!(kb_compare(&[2, 0], &[1, 5]), Ordering::Greater);
        assert_eq!(kb_compare::<u64>(&[], &[]), Ordering::Equal);
        assert_eq!(kb_compare(&[], &[3]), Ordering::Greater);
    }
}
