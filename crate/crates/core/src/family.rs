//! FIP families: finite generator lists plus generator schemas, with bounded
//! checks for the finite intersection property, `X ∈̃ U` and `X ∈̃ U + V`.
//!
//! Every finite index set `F` is enumerated in shortlex order (size first,
//! then lexicographic over item ids), which makes every witness the least
//! one under that order.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex};

use crate::bits::Bits;
use crate::setexpr::{NatSet, SetError, DEFAULT_SIZE_LIMIT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family index {0}")]
    UnknownIndex(ItemId),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("invalid policy: {0}")]
    Policy(String),
}

/// Names one member of a family: a generator, or a schema instance `(schema, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemId {
    Gen(usize),
    Inst { schema: usize, n: u64 },
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemId::Gen(i) => write!(f, "g{i}"),
            ItemId::Inst { schema, n } => write!(f, "s{schema}@{n}"),
        }
    }
}

pub fn format_index_set(f: &[ItemId]) -> String {
    let parts: Vec<String> = f.iter().map(ItemId::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Debug, Clone)]
pub enum SchemaBody {
    /// Instances are `body − n`.
    Shifted(NatSet),
    /// Instances are `[n, ∞)`.
    Tail,
}

/// Infinitely many generators `{instance(n) | n ∈ index_set}` held finitely.
#[derive(Debug, Clone)]
pub struct GeneratorSchema {
    pub body: SchemaBody,
    pub index_set: NatSet,
    pub include_zero: bool,
}

impl GeneratorSchema {
    pub fn shifted(body: NatSet, index_set: NatSet, include_zero: bool) -> Self {
        GeneratorSchema { body: SchemaBody::Shifted(body), index_set, include_zero }
    }

    pub fn admits(&self, n: u64) -> bool {
        (self.include_zero && n == 0) || self.index_set.member(n)
    }

    pub fn instance(&self, n: u64) -> Option<NatSet> {
        if !self.admits(n) {
            return None;
        }
        Some(match &self.body {
            SchemaBody::Shifted(body) => body.shift(n),
            SchemaBody::Tail => NatSet::tail(n),
        })
    }

    fn size(&self) -> usize {
        let body = match &self.body {
            SchemaBody::Shifted(b) => b.size(),
            SchemaBody::Tail => 1,
        };
        body + self.index_set.size()
    }
}

/// Bounded-verification parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FipPolicy {
    /// Naturals scanned: `[0, bound)`.
    pub bound: u64,
    /// Minimum count for a part to look infinite.
    pub min_count: usize,
    /// A part must reach `tail_fraction · bound`.
    pub tail_fraction: f64,
    /// Largest `|F|` examined.
    pub max_f: usize,
    /// Schema instances are taken for `n < inst_bound`.
    pub inst_bound: u64,
}

impl Default for FipPolicy {
    fn default() -> Self {
        FipPolicy { bound: 10_000, min_count: 8, tail_fraction: 0.5, max_f: 3, inst_bound: 64 }
    }
}

impl FipPolicy {
    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.bound < 1 {
            return Err(FamilyError::Policy("bound must be >= 1".into()));
        }
        if self.min_count < 1 {
            return Err(FamilyError::Policy("count must be >= 1".into()));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(FamilyError::Policy("tail must lie in (0, 1]".into()));
        }
        if self.max_f < 1 {
            return Err(FamilyError::Policy("fmax must be >= 1".into()));
        }
        if self.inst_bound < 1 {
            return Err(FamilyError::Policy("inst must be >= 1".into()));
        }
        Ok(())
    }

    /// First position of the tail region `[τ·B, B)`.
    pub fn tail_start(&self) -> u64 {
        (self.tail_fraction * self.bound as f64).ceil() as u64
    }

    /// Range `[0, min(B, d))` over which universally quantified premises are checked.
    pub fn n_range(&self) -> u64 {
        self.bound.min(self.inst_bound)
    }

    pub(crate) fn len(&self) -> usize {
        self.bound as usize
    }
}

impl fmt::Display for FipPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "B={} t={} tau={} fmax={} d={}",
            self.bound, self.min_count, self.tail_fraction, self.max_f, self.inst_bound
        )
    }
}

/// Tri-state outcome of a bounded check; ordered weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    RefutedAtBound,
    Unknown,
    VerifiedAtBound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RefutedAtBound => "RefutedAtBound",
            Verdict::Unknown => "Unknown",
            Verdict::VerifiedAtBound => "VerifiedAtBound",
        })
    }
}

/// Size statistics of one part `U_F ∩ [0, B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartStat {
    pub f: Vec<ItemId>,
    pub count: usize,
    pub max: Option<u64>,
}

impl fmt::Display for PartStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.max.map_or_else(|| "none".to_string(), |m| m.to_string());
        write!(f, "F={} count={} max={}", format_index_set(&self.f), self.count, max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FipReport {
    pub verdict: Verdict,
    /// Refuted: the first part with `count < t`. Unknown: the first part that
    /// dies out before the tail. Verified: the part with the least count.
    pub witnesses: Vec<PartStat>,
    pub policy: FipPolicy,
    pub parts_checked: usize,
}

impl FipReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::VerifiedAtBound
    }

    /// The first part that fails the "infinite at bound" test, if any.
    pub fn failing_part(&self) -> Option<&PartStat> {
        match self.verdict {
            Verdict::VerifiedAtBound => None,
            _ => self.witnesses.first(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TildeResult {
    pub verdict: Verdict,
    /// Shortlex-least `F` with `∅ ≠ U_F ∩ [0,B) ⊆ X`.
    pub witness: Option<Vec<ItemId>>,
    /// First candidate `F` together with an element of `U_F \ X` below `B`.
    pub counterexample: Option<(Vec<ItemId>, u64)>,
    pub policy: FipPolicy,
}

impl TildeResult {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::VerifiedAtBound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumTildeResult {
    pub verdict: Verdict,
    /// Index set over `V` naming the set `Y`.
    pub witness_y: Option<Vec<ItemId>>,
    /// First failing `(Y, n)` pair.
    pub failure: Option<(Vec<ItemId>, u64)>,
    /// Premises were checked for `n < n_range`.
    pub n_range: u64,
    pub policy: FipPolicy,
}

/// A family member materialized on `[0, B)`.
#[derive(Debug, Clone)]
pub struct Item {
    pub id: ItemId,
    pub set: NatSet,
    pub bits: Bits,
}

type ItemCache = Arc<Mutex<HashMap<(u64, u64), Arc<Vec<Item>>>>>;

/// Generators plus schemas; codes a closed subset of βℕ.
#[derive(Clone, Default)]
pub struct Family {
    generators: Vec<NatSet>,
    schemas: Vec<GeneratorSchema>,
    provenance: Vec<String>,
    cache: ItemCache,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("generators", &self.generators)
            .field("schemas", &self.schemas)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// `{ℕ}`.
pub fn trivial_family() -> Family {
    Family::new(vec![NatSet::naturals()], vec![], "trivial")
}

/// The tail schema `{[k, ∞) | k ∈ ℕ}`.
pub fn frechet_family() -> Family {
    let tails =
        GeneratorSchema { body: SchemaBody::Tail, index_set: NatSet::naturals(), include_zero: true };
    Family::new(vec![], vec![tails], "frechet")
}

impl Family {
    pub fn new(generators: Vec<NatSet>, schemas: Vec<GeneratorSchema>, note: &str) -> Self {
        Family {
            generators,
            schemas,
            provenance: vec![note.to_string()],
            cache: ItemCache::default(),
        }
    }

    pub fn generators(&self) -> &[NatSet] {
        &self.generators
    }

    pub fn schemas(&self) -> &[GeneratorSchema] {
        &self.schemas
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// New family with `generators` and `schemas` appended; `self` is unchanged.
    pub fn append(
        &self,
        generators: Vec<NatSet>,
        schemas: Vec<GeneratorSchema>,
        note: &str,
    ) -> Result<Family, FamilyError> {
        for g in &generators {
            g.check_size(DEFAULT_SIZE_LIMIT)?;
        }
        for s in &schemas {
            let size = s.size();
            if size > DEFAULT_SIZE_LIMIT {
                return Err(SetError::TooLarge { size, limit: DEFAULT_SIZE_LIMIT }.into());
            }
        }
        let mut out = Family {
            generators: self.generators.clone(),
            schemas: self.schemas.clone(),
            provenance: self.provenance.clone(),
            cache: ItemCache::default(),
        };
        out.generators.extend(generators);
        out.schemas.extend(schemas);
        out.provenance.push(note.to_string());
        Ok(out)
    }

    pub fn append_generator(&self, set: NatSet, note: &str) -> Result<Family, FamilyError> {
        self.append(vec![set], vec![], note)
    }

    pub fn append_schema(&self, schema: GeneratorSchema, note: &str) -> Result<Family, FamilyError> {
        self.append(vec![], vec![schema], note)
    }

    /// Members of the family under `policy`, generators first, then schema
    /// instances with `n < d` in `(schema, n)` order.
    pub fn items(&self, policy: &FipPolicy) -> Arc<Vec<Item>> {
        let key = (policy.bound, policy.inst_bound);
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return hit.clone();
        }
        let len = policy.len();
        let mut items: Vec<Item> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| Item { id: ItemId::Gen(i), set: g.clone(), bits: Bits::from_set(g, 0, len) })
            .collect();
        for (s, schema) in self.schemas.iter().enumerate() {
            let wide = match &schema.body {
                SchemaBody::Shifted(body) => {
                    Some(Bits::from_set(body, 0, len + policy.inst_bound as usize))
                }
                SchemaBody::Tail => None,
            };
            for n in 0..policy.inst_bound {
                let Some(set) = schema.instance(n) else { continue };
                let bits = match &wide {
                    Some(w) => w.shifted(n as usize, len),
                    None => Bits::from_set(&set, 0, len),
                };
                items.push(Item { id: ItemId::Inst { schema: s, n }, set, bits });
            }
        }
        let items = Arc::new(items);
        self.cache.lock().expect("cache poisoned").insert(key, items.clone());
        items
    }

    pub fn item_set(&self, id: ItemId, policy: &FipPolicy) -> Result<NatSet, FamilyError> {
        match id {
            ItemId::Gen(i) => self.generators.get(i).cloned(),
            ItemId::Inst { schema, n } => {
                if n >= policy.inst_bound {
                    None
                } else {
                    self.schemas.get(schema).and_then(|s| s.instance(n))
                }
            }
        }
        .ok_or(FamilyError::UnknownIndex(id))
    }

    /// `U_F`; the empty index set gives ℕ.
    pub fn part(&self, f: &[ItemId], policy: &FipPolicy) -> Result<NatSet, FamilyError> {
        let sets = f.iter().map(|&id| self.item_set(id, policy)).collect::<Result<Vec<_>, _>>()?;
        Ok(NatSet::intersect(sets))
    }
}

/// Visits every `F` with `|F| ≤ max_f` in shortlex order together with
/// `U_F ∩ [0, len)`. Parts whose prefix is already empty are still visited
/// unless `skip_empty` is set.
pub(crate) fn for_each_part<B>(
    items: &[&Bits],
    max_f: usize,
    len: usize,
    skip_empty: bool,
    mut visit: impl FnMut(&[usize], &Bits) -> ControlFlow<B>,
) -> Option<B> {
    fn rec<B>(
        items: &[&Bits],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        acc: &Bits,
        skip_empty: bool,
        visit: &mut impl FnMut(&[usize], &Bits) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if remaining == 0 {
            return visit(chosen, acc);
        }
        for i in start..items.len() {
            if items.len() - i < remaining {
                break;
            }
            let next = acc.and(items[i]);
            if skip_empty && next.count() == 0 {
                continue;
            }
            chosen.push(i);
            let r = rec(items, i + 1, remaining - 1, chosen, &next, skip_empty, visit);
            chosen.pop();
            r?;
        }
        ControlFlow::Continue(())
    }

    let full = Bits::ones(len);
    let mut chosen = Vec::new();
    for size in 0..=max_f.min(items.len()) {
        if let ControlFlow::Break(b) =
            rec(items, 0, size, &mut chosen, &full, skip_empty, &mut visit)
        {
            return Some(b);
        }
    }
    None
}

fn stat(ids: &[ItemId], chosen: &[usize], bits: &Bits) -> PartStat {
    PartStat {
        f: chosen.iter().map(|&i| ids[i]).collect(),
        count: bits.count(),
        max: bits.max().map(|m| m as u64),
    }
}

/// Bounded fip over explicit bit windows.
pub(crate) fn fip_over(ids: &[ItemId], bits: &[&Bits], policy: &FipPolicy) -> FipReport {
    let tail = policy.tail_start();
    let mut checked = 0usize;
    let mut first_dying: Option<PartStat> = None;
    let mut thinnest: Option<PartStat> = None;
    let refuted = for_each_part(bits, policy.max_f, policy.len(), false, |chosen, part| {
        checked += 1;
        let count = part.count();
        if count < policy.min_count {
            return ControlFlow::Break(stat(ids, chosen, part));
        }
        let reaches_tail = part.max().is_some_and(|m| m as u64 >= tail);
        if !reaches_tail && first_dying.is_none() {
            first_dying = Some(stat(ids, chosen, part));
        }
        if thinnest.as_ref().is_none_or(|t| count < t.count) {
            thinnest = Some(stat(ids, chosen, part));
        }
        ControlFlow::Continue(())
    });
    let (verdict, witnesses) = match (refuted, first_dying) {
        (Some(r), _) => (Verdict::RefutedAtBound, vec![r]),
        (None, Some(d)) => (Verdict::Unknown, vec![d]),
        (None, None) => (Verdict::VerifiedAtBound, thinnest.into_iter().collect()),
    };
    FipReport { verdict, witnesses, policy: *policy, parts_checked: checked }
}

/// Bounded finite intersection property.
///
/// Verified iff every `F` with `|F| ≤ f_max` has `|U_F ∩ [0,B)| ≥ t` and an
/// element in `[τ·B, B)`. Refuted iff some such part has fewer than `t`
/// elements. Parts that are large but die out before the tail give Unknown.
pub fn bounded_fip(family: &Family, policy: &FipPolicy) -> FipReport {
    bounded_fip_with(family, &[], policy)
}

/// Bounded fip of `U ∪ extra`, with `extra` indexed as appended generators.
pub fn bounded_fip_with(family: &Family, extra: &[NatSet], policy: &FipPolicy) -> FipReport {
    let items = family.items(policy);
    let extra_bits: Vec<Bits> = extra.iter().map(|x| Bits::from_set(x, 0, policy.len())).collect();
    fip_over_extended(family, &items, &extra_bits, policy)
}

pub(crate) fn fip_over_extended(
    family: &Family,
    items: &[Item],
    extra: &[Bits],
    policy: &FipPolicy,
) -> FipReport {
    let g = family.generators.len();
    let mut ids: Vec<ItemId> = items.iter().map(|i| i.id).collect();
    let mut bits: Vec<&Bits> = items.iter().map(|i| &i.bits).collect();
    // Extra members sort with the generators, after the existing ones.
    let split = ids.iter().position(|id| !matches!(id, ItemId::Gen(_))).unwrap_or(ids.len());
    for (k, b) in extra.iter().enumerate().rev() {
        ids.insert(split, ItemId::Gen(g + k));
        bits.insert(split, b);
    }
    fip_over(&ids, &bits, policy)
}

pub(crate) fn tilde_over(items: &[Item], target: &Bits, policy: &FipPolicy) -> TildeResult {
    let ids: Vec<ItemId> = items.iter().map(|i| i.id).collect();
    let bits: Vec<&Bits> = items.iter().map(|i| &i.bits).collect();
    let mut counterexample = None;
    let mut saw_empty = false;
    let found = for_each_part(&bits, policy.max_f, policy.len(), false, |chosen, part| {
        if part.count() == 0 {
            saw_empty = true;
            return ControlFlow::Continue(());
        }
        match part.first_outside(target) {
            None => ControlFlow::Break(chosen.iter().map(|&i| ids[i]).collect::<Vec<_>>()),
            Some(x) => {
                if counterexample.is_none() {
                    counterexample = Some((chosen.iter().map(|&i| ids[i]).collect(), x as u64));
                }
                ControlFlow::Continue(())
            }
        }
    });
    let verdict = match (&found, saw_empty) {
        (Some(_), _) => Verdict::VerifiedAtBound,
        (None, false) => Verdict::RefutedAtBound,
        (None, true) => Verdict::Unknown,
    };
    TildeResult { verdict, witness: found, counterexample, policy: *policy }
}

/// Bounded `X ∈̃ U`: some `U_F` with `|F| ≤ f_max`, nonempty at bound, lies in `X` on `[0, B)`.
pub fn tilde_in(x: &NatSet, family: &Family, policy: &FipPolicy) -> TildeResult {
    let items = family.items(policy);
    tilde_over(&items, &Bits::from_set(x, 0, policy.len()), policy)
}

/// Bounded `X ∈̃ U + V`: some `Y = V_F` such that `X − n ∈̃ U` for every
/// `n ∈ Y` below `min(B, d)`.
pub fn sum_tilde_in(x: &NatSet, u: &Family, v: &Family, policy: &FipPolicy) -> SumTildeResult {
    let range = policy.n_range();
    let x_wide = Bits::from_set(x, 0, policy.len() + range as usize);
    sum_tilde_over(&x_wide, u, v, policy)
}

pub(crate) fn sum_tilde_over(
    x_wide: &Bits,
    u: &Family,
    v: &Family,
    policy: &FipPolicy,
) -> SumTildeResult {
    let range = policy.n_range();
    let u_items = u.items(policy);
    let v_items = v.items(policy);
    let ids: Vec<ItemId> = v_items.iter().map(|i| i.id).collect();
    let bits: Vec<&Bits> = v_items.iter().map(|i| &i.bits).collect();
    let mut memo: HashMap<u64, Verdict> = HashMap::new();
    let mut first_failure = None;
    let mut all_refuted = true;
    let found = for_each_part(&bits, policy.max_f, policy.len(), false, |chosen, y| {
        let ns: Vec<u64> = y.iter_ones().map(|n| n as u64).take_while(|&n| n < range).collect();
        if ns.is_empty() {
            all_refuted = false;
            return ControlFlow::Continue(());
        }
        let mut worst = Verdict::VerifiedAtBound;
        for n in ns {
            let verdict = *memo.entry(n).or_insert_with(|| {
                tilde_over(&u_items, &x_wide.shifted(n as usize, policy.len()), policy).verdict
            });
            if verdict < Verdict::VerifiedAtBound {
                worst = worst.min(verdict);
                if first_failure.is_none() {
                    first_failure = Some((chosen.iter().map(|&i| ids[i]).collect(), n));
                }
                if verdict == Verdict::RefutedAtBound {
                    break;
                }
            }
        }
        match worst {
            Verdict::VerifiedAtBound => {
                ControlFlow::Break(chosen.iter().map(|&i| ids[i]).collect::<Vec<_>>())
            }
            Verdict::Unknown => {
                all_refuted = false;
                ControlFlow::Continue(())
            }
            Verdict::RefutedAtBound => ControlFlow::Continue(()),
        }
    });
    let verdict = match (&found, all_refuted) {
        (Some(_), _) => Verdict::VerifiedAtBound,
        (None, true) => Verdict::RefutedAtBound,
        (None, false) => Verdict::Unknown,
    };
    SumTildeResult { verdict, witness_y: found, failure: first_failure, n_range: range, policy: *policy }
}
