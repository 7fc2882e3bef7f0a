//! Bounded semigroup verification and the three extension lemmas.
//!
//! A family `U` is a semigroup when it has fip and every member `X`
//! satisfies `X ∈̃ U + U`. The lemmas grow a semigroup by complements of a
//! set `A` (or by `A` itself) once the relevant premises are witnessed at
//! bound. Premises quantified over an infinite index set are checked for
//! `n < min(B, d)`.

use std::fmt;

use crate::bits::Bits;
use crate::family::{
    bounded_fip, bounded_fip_with, sum_tilde_over, tilde_in, Family, FamilyError, FipPolicy,
    FipReport, GeneratorSchema, ItemId, PartStat, Verdict,
};
use crate::setexpr::NatSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SemigroupError {
    #[error("precondition not witnessed at bound: {0}")]
    PreconditionNotWitnessed(String),
    #[error("Y is not verified to be in the family (tilde)")]
    YNotInFamilyTilde,
    #[error("unknown generator {0}")]
    UnknownGenerator(ItemId),
    #[error("extended family failed its re-check: fip {fip}, semigroup {semigroup}")]
    PostconditionFailed { fip: Verdict, semigroup: Verdict },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemVerdict {
    pub item: ItemId,
    pub verdict: Verdict,
    /// Index set naming `Y` when verified.
    pub witness_y: Option<Vec<ItemId>>,
    pub n_range: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupReport {
    pub verdict: Verdict,
    pub fip: FipReport,
    pub items: Vec<ItemVerdict>,
    pub policy: FipPolicy,
}

impl SemigroupReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::VerifiedAtBound
    }
}

/// Result of applying an extension lemma.
#[derive(Debug, Clone)]
pub struct Extension {
    pub family: Family,
    /// The premise evidence: the failing part (`extend_after_fip_failure`), or `None`.
    pub premise: Option<PartStat>,
    /// Bounded fip of the extended family (always verified).
    pub fip: FipReport,
    pub lemma: Lemma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    AfterFipFailure,
    AfterPairFailure,
    ByMembership,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::AfterFipFailure => "extension-after-fip-failure",
            Lemma::AfterPairFailure => "extension-after-pair-failure",
            Lemma::ByMembership => "extension-by-membership",
        })
    }
}

pub fn check_semigroup(family: &Family, policy: &FipPolicy) -> SemigroupReport {
    let fip = bounded_fip(family, policy);
    let range = policy.n_range();
    let items = family.items(policy);
    let verdicts: Vec<ItemVerdict> = items
        .iter()
        .map(|item| {
            let wide = Bits::from_set(&item.set, 0, policy.len() + range as usize);
            let r = sum_tilde_over(&wide, family, family, policy);
            ItemVerdict { item: item.id, verdict: r.verdict, witness_y: r.witness_y, n_range: r.n_range }
        })
        .collect();
    let verdict = verdicts.iter().map(|v| v.verdict).fold(fip.verdict, Verdict::min);
    SemigroupReport { verdict, fip, items: verdicts, policy: *policy }
}

/// `{n | (set − n) ∈̃ family}`, evaluated lazily and memoized.
pub fn tilde_index_set(label: &str, set: NatSet, family: &Family, policy: &FipPolicy) -> NatSet {
    let family = family.clone();
    let policy = *policy;
    NatSet::lazy(label.to_string(), move |n| tilde_in(&set.shift(n), &family, &policy).is_verified())
}

/// True when `report` fails on a part that involves `id`.
fn fails_on(report: &FipReport, ids: &[ItemId]) -> Option<PartStat> {
    report.failing_part().filter(|p| p.f.iter().any(|f| ids.contains(f))).cloned()
}

fn finish(
    family: Family,
    premise: Option<PartStat>,
    lemma: Lemma,
    policy: &FipPolicy,
) -> Result<Extension, SemigroupError> {
    let fip = bounded_fip(&family, policy);
    if !fip.is_verified() {
        return Err(SemigroupError::PostconditionFailed {
            fip: fip.verdict,
            semigroup: Verdict::Unknown,
        });
    }
    Ok(Extension { family, premise, fip, lemma })
}

/// Given a failing part `U_F ∩ A`, adds `{Aᶜ − n | n ∈ X ∪ {0}}` with
/// `X = {n | U_F − n ∈̃ U}`.
///
/// "Finite at bound" is the failing part of the fip check: fewer than `t`
/// elements, or no element in the tail `[τ·B, B)`.
pub fn extend_after_fip_failure(
    family: &Family,
    a: &NatSet,
    policy: &FipPolicy,
) -> Result<Extension, SemigroupError> {
    let a_id = ItemId::Gen(family.generators().len());
    let report = bounded_fip_with(family, std::slice::from_ref(a), policy);
    let Some(failing) = fails_on(&report, &[a_id]) else {
        return Err(SemigroupError::PreconditionNotWitnessed(format!(
            "U with A passes fip at bound ({})",
            report.verdict
        )));
    };
    let rest: Vec<ItemId> = failing.f.iter().copied().filter(|&f| f != a_id).collect();
    let u_part = family.part(&rest, policy)?;
    let index = tilde_index_set("n: U_F - n in~ U", u_part, family, policy);
    let schema = GeneratorSchema::shifted(a.complement(), index, true);
    let extended = family.append_schema(schema, "extension after fip failure")?;
    finish(extended, Some(failing), Lemma::AfterFipFailure, policy)
}

/// Given `Y ∈̃ U` with `U ∪ {A, A − n}` failing fip for every `n ∈ Y`, adds
/// `{Aᶜ − n | n ∈ X}` with `X = {n | Y − n ∈̃ U}`. Falls back to
/// [`extend_after_fip_failure`] when `U ∪ {A}` already fails.
pub fn extend_after_pair_failure(
    family: &Family,
    a: &NatSet,
    y: &NatSet,
    policy: &FipPolicy,
) -> Result<Extension, SemigroupError> {
    if !tilde_in(y, family, policy).is_verified() {
        return Err(SemigroupError::YNotInFamilyTilde);
    }
    let g = family.generators().len();
    let single = bounded_fip_with(family, std::slice::from_ref(a), policy);
    if fails_on(&single, &[ItemId::Gen(g)]).is_some() {
        return extend_after_fip_failure(family, a, policy);
    }
    for n in 0..policy.n_range() {
        if !y.member(n) {
            continue;
        }
        let pair = bounded_fip_with(family, &[a.clone(), a.shift(n)], policy);
        if fails_on(&pair, &[ItemId::Gen(g), ItemId::Gen(g + 1)]).is_none() {
            return Err(SemigroupError::PreconditionNotWitnessed(format!(
                "U with A and A-{n} passes fip at bound"
            )));
        }
    }
    let index = tilde_index_set("n: Y - n in~ U", y.clone(), family, policy);
    let schema = GeneratorSchema::shifted(a.complement(), index, false);
    let extended = family.append_schema(schema, "extension after pair failure")?;
    finish(extended, None, Lemma::AfterPairFailure, policy)
}

/// Given a member `X` of `U` with `A − n ∈̃ U` for each `n ∈ X`, adds `A`.
///
/// `x` may name a generator or a schema instance; the premise asks for a
/// member of the sequence, not merely a set `∈̃ U`.
pub fn extend_by_membership(
    family: &Family,
    a: &NatSet,
    x: ItemId,
    policy: &FipPolicy,
) -> Result<Extension, SemigroupError> {
    let x_set = family.item_set(x, policy).map_err(|_| SemigroupError::UnknownGenerator(x))?;
    for n in 0..policy.n_range() {
        if x_set.member(n) && !tilde_in(&a.shift(n), family, policy).is_verified() {
            return Err(SemigroupError::PreconditionNotWitnessed(format!(
                "A-{n} is not verified in~ U"
            )));
        }
    }
    let extended = family.append_generator(a.clone(), "extension by membership")?;
    let semigroup = check_semigroup(&extended, policy);
    if !semigroup.is_verified() {
        return Err(SemigroupError::PostconditionFailed {
            fip: semigroup.fip.verdict,
            semigroup: semigroup.verdict,
        });
    }
    Ok(Extension { family: extended, premise: None, fip: semigroup.fip, lemma: Lemma::ByMembership })
}
