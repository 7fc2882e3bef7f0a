//! Signed tree for the iterated theorem.
//!
//! Given `A_1, …, A_r`, a node is `σ = ⟨s_1 < … < s_k⟩` with signs
//! `b_i ∈ {+1, −1}` for `i ≤ min(k, r)`, where `+1·A = A` and `−1·A = Aᶜ`.
//! The node requires `NS(s_i, …, s_k) ⊆ b_i·A_i` for each signed `i` and
//! bounded fip for `U ∪ {W}`, `W = ⋂_i ⋂_{m ∈ FS(s_i..s_k)} (b_i·A_i − m)`.

use super::tree::{fmt_seq, Budget};
use super::{
    constraint_part, Diagnostics, NsCheck, PartBank, SearchError, SearchLimits, SearchNode,
    SearchOutcome, WitnessCert,
};
use crate::bits::Bits;
use crate::family::{bounded_fip, bounded_fip_with, Family, FipPolicy, ItemId};
use crate::setexpr::{finite_sums, nonempty_sums, NatSet, Sign};

struct Signed<'a> {
    sets: &'a [NatSet],
    m: usize,
    policy: FipPolicy,
    limits: SearchLimits,
    bank: PartBank,
    constraints: Vec<(Vec<ItemId>, Bits)>,
    budget: Budget,
    diag: Diagnostics,
}

impl Signed<'_> {
    fn explore(
        &mut self,
        seq: &mut Vec<u64>,
        signs: &mut Vec<Sign>,
        windows: &[Bits],
    ) -> Result<bool, SearchError> {
        let depth = seq.len();
        self.diag.max_depth = self.diag.max_depth.max(depth);
        if depth == self.m {
            return Ok(true);
        }
        let len = self.policy.len();
        let child_len = (self.m - depth) * len;
        let lo = seq.last().map_or(1, |s| s + 1) as usize;
        let hi = self.limits.child_bound(&self.policy) as usize;
        let mut candidates = self.constraints[depth].1.clone();
        for w in windows {
            candidates.and_with(&w.shifted(0, len));
        }
        let new_signs: &[Sign] = if depth < self.sets.len() { &[Sign::Plus, Sign::Minus] } else { &[] };
        for n in candidates.iter_ones().skip_while(|&n| n < lo).take_while(|&n| n < hi) {
            let options: Vec<Option<Sign>> =
                if new_signs.is_empty() { vec![None] } else { new_signs.iter().copied().map(Some).collect() };
            for sign in options {
                self.diag.candidates_tested += 1;
                let mut next: Vec<Bits> = windows.to_vec();
                if let Some(b) = sign {
                    let fresh = Bits::from_set(&self.sets[depth].signed(b), 0, (self.m - depth + 1) * len);
                    if !fresh.get(n) {
                        continue;
                    }
                    next.push(fresh);
                }
                let mut meet = Bits::ones(child_len);
                for w in next.iter_mut() {
                    let mut c = w.shifted(0, child_len);
                    c.and_with(&w.shifted(n, child_len));
                    meet.and_with(&c);
                    *w = c;
                }
                if self.limits.fip_nodes && !self.bank.passes(&meet.shifted(0, len), &self.policy) {
                    continue;
                }
                if !self.budget.take() {
                    return Err(SearchError::BudgetExhausted(self.diag.clone()));
                }
                self.diag.nodes_expanded += 1;
                seq.push(n as u64);
                if let Some(b) = sign {
                    signs.push(b);
                }
                if self.explore(seq, signs, &next)? {
                    return Ok(true);
                }
                seq.pop();
                if sign.is_some() {
                    signs.pop();
                }
            }
        }
        self.diag.dead_ends += 1;
        Ok(false)
    }
}

/// Searches for `S` of length `m` and signs `b_i` with `NS(s_i, …, s_m) ⊆
/// b_i·A_i` for every `i ≤ r`. `+1` is tried before `−1`.
pub fn search_iterated(
    u: &Family,
    sets: &[NatSet],
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    policy.validate()?;
    if limits.fip_nodes && !bounded_fip(u, policy).is_verified() {
        return Err(SearchError::Precondition("U does not pass bounded fip".into()));
    }
    let items = u.items(policy);
    let mut diag = Diagnostics::default();
    let constraints = (1..=m as u64).map(|i| constraint_part(&items, i, policy.len(), &mut diag)).collect();
    let mut search = Signed {
        sets,
        m,
        policy: *policy,
        limits: *limits,
        bank: PartBank::new(&items, policy),
        constraints,
        budget: Budget::new(limits.max_nodes),
        diag,
    };
    let mut seq = Vec::new();
    let mut signs = Vec::new();
    if !search.explore(&mut seq, &mut signs, &[])? {
        return Err(SearchError::Inconclusive {
            reason: "signed tree exhausted without a witness".into(),
            diagnostics: search.diag,
        });
    }

    let mut ns_checks = Vec::new();
    let mut shifted = Vec::new();
    for (i, &b) in signs.iter().enumerate() {
        let target = sets[i].signed(b);
        let suffix = &seq[i..];
        let sums = nonempty_sums(suffix)?;
        let holds = sums.iter().all(|&x| target.member(x));
        for f in finite_sums(suffix)? {
            shifted.push(target.shift(f));
        }
        ns_checks.push(NsCheck { from: i, target: format!("{b}*({})", sets[i]), sums, holds });
    }
    let mut fip_reports = Vec::new();
    if limits.fip_nodes {
        let w = NatSet::intersect(shifted);
        fip_reports.push(("U+{W}".to_string(), bounded_fip_with(u, &[w], policy)));
    }
    let used = (0..seq.len()).map(|i| search.constraints[i].0.clone()).collect();
    search.diag.steps.push(format!("witness {}", fmt_seq(&seq)));
    Ok(SearchOutcome::Witness(WitnessCert {
        node: SearchNode { seq: seq.clone(), signs: Some(signs.clone()), constraints: used },
        seq,
        signs: Some(signs),
        ns_checks,
        fip_reports,
        policy: *policy,
        diagnostics: search.diag,
    }))
}
