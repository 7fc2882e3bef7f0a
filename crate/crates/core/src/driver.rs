//! Top-level constructions: deciding `A` against `Aᶜ`, finite-sums witnesses
//! for colorings, greedy Galvin–Glazer extraction and the iterated decision.

use std::fmt;

use rayon::prelude::*;

use crate::family::{
    bounded_fip, bounded_fip_with, tilde_in, Family, FipPolicy, FipReport, GeneratorSchema,
    TildeResult, Verdict,
};
use crate::search::{
    exact_part2, search_iterated, search_part2, Diagnostics, NsCheck, SearchError, SearchLimits,
    SearchOutcome,
};
use crate::semigroup::{check_semigroup, extend_after_fip_failure, SemigroupError};
use crate::setexpr::{finite_sums, nonempty_sums, NatSet, SetError, Sign};

#[derive(Debug, Clone)]
pub enum Coloring {
    /// Colors `1..=k` of `[1..N]`; `assignment[j - 1]` is the color of `j`.
    Explicit { k: usize, assignment: Vec<u8> },
    /// `k` sets covering ℕ, checked disjoint and covering on `[1, B)`.
    Symbolic { classes: Vec<NatSet> },
}

impl Coloring {
    pub fn explicit(k: usize, assignment: Vec<u8>) -> Result<Self, DriverError> {
        if k == 0 {
            return Err(DriverError::InvalidColoring("k must be >= 1".into()));
        }
        if let Some(j) = assignment.iter().position(|&c| c == 0 || c as usize > k) {
            return Err(DriverError::InvalidColoring(format!(
                "color {} of {} out of range 1..{k}",
                assignment[j],
                j + 1
            )));
        }
        Ok(Coloring::Explicit { k, assignment })
    }

    pub fn symbolic(classes: Vec<NatSet>, policy: &FipPolicy) -> Result<Self, DriverError> {
        if classes.is_empty() {
            return Err(DriverError::InvalidColoring("no classes".into()));
        }
        for n in 1..policy.bound {
            let hits = classes.iter().filter(|c| c.member(n)).count();
            if hits != 1 {
                return Err(DriverError::InvalidColoring(format!("{n} lies in {hits} classes")));
            }
        }
        Ok(Coloring::Symbolic { classes })
    }

    pub fn k(&self) -> usize {
        match self {
            Coloring::Explicit { k, .. } => *k,
            Coloring::Symbolic { classes } => classes.len(),
        }
    }

    /// Domain size `N` of an explicit coloring.
    pub fn domain(&self) -> Option<u64> {
        match self {
            Coloring::Explicit { assignment, .. } => Some(assignment.len() as u64),
            Coloring::Symbolic { .. } => None,
        }
    }

    /// Class `C_i`, `i` counted from 1.
    pub fn class(&self, i: usize) -> NatSet {
        match self {
            Coloring::Explicit { assignment, .. } => NatSet::from_elements(
                (1..=assignment.len() as u64).filter(|&j| assignment[j as usize - 1] as usize == i).collect(),
            ),
            Coloring::Symbolic { classes } => classes[i - 1].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumWitness {
    pub seq: Vec<u64>,
    /// 1-based color index, when the witness answers a coloring.
    pub color: Option<usize>,
    pub sums: Vec<u64>,
    /// Every element of `sums` was checked by direct membership.
    pub holds: bool,
    /// Explicit colorings: the domain `[1..N]` all sums lie in.
    pub domain: Option<u64>,
}

impl SumWitness {
    fn new(seq: Vec<u64>, target: &NatSet, color: Option<usize>, domain: Option<u64>) -> Result<Self, SetError> {
        let sums = nonempty_sums(&seq)?;
        let holds = sums.iter().all(|&x| target.member(x) && domain.is_none_or(|n| x <= n));
        Ok(SumWitness { seq, color, sums, holds, domain })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    Complement,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::Complement => "A^c",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub side: Side,
    pub family: Family,
    /// The chosen side `∈̃ V`.
    pub tilde: TildeResult,
    pub fip: FipReport,
    /// Side `Aᶜ`: bounded fip of `V ∪ {A}`.
    pub failure: Option<FipReport>,
    pub witness: Option<SumWitness>,
    pub search: SearchOutcome,
}

#[derive(Debug, Clone)]
pub struct IteratedWitness {
    pub seq: Vec<u64>,
    pub signs: Vec<Sign>,
    pub checks: Vec<NsCheck>,
    /// `b_i·A_i ∈̃ V` for each `i`.
    pub tildes: Vec<TildeResult>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum DriverError {
    /// `exhaustive` is true when the absence was proved by a complete search.
    #[error("no witness at bound ({})", if *.exhaustive { "exhaustive" } else { "budget hit" })]
    NoWitnessAtBound { exhaustive: bool },
    #[error("search budget exhausted after {} nodes", .0.nodes_expanded)]
    BudgetExhausted(Diagnostics),
    #[error("extraction stuck after {partial:?}")]
    ExtractionStuck { partial: Vec<u64> },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("no certificate at bound: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Lemma(#[from] SemigroupError),
}

impl From<SearchError> for DriverError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExhausted(d) => DriverError::BudgetExhausted(d),
            SearchError::Inconclusive { reason, .. } => DriverError::Inconclusive(reason),
            SearchError::Precondition(p) => DriverError::PreconditionNotMet(p),
            SearchError::Set(s) => DriverError::Set(s),
            SearchError::Lemma(l) => DriverError::Lemma(l),
        }
    }
}

impl From<crate::family::FamilyError> for DriverError {
    fn from(e: crate::family::FamilyError) -> Self {
        DriverError::Lemma(SemigroupError::Family(e))
    }
}

/// Extends `U` to a family deciding `A`: a witness `S` with `NS(S) ⊆ A`
/// (the schema `{NS(S) − n | n ∈ FS(S)}` is added), or the complement
/// schema after the part-2 extension.
pub fn extend_decide(
    u: &Family,
    a: &NatSet,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<Decision, DriverError> {
    policy.validate()?;
    if !bounded_fip(u, policy).is_verified() {
        return Err(DriverError::PreconditionNotMet("U does not pass bounded fip".into()));
    }
    let outcome = search_part2(u, a, m, policy, limits)?;
    match &outcome {
        SearchOutcome::Witness(w) => {
            let ns = NatSet::explicit(nonempty_sums(&w.seq)?)?;
            let fs = NatSet::explicit(finite_sums(&w.seq)?)?;
            let family = u.append_schema(GeneratorSchema::shifted(ns, fs, true), "finite sums of a part-2 witness")?;
            let tilde = tilde_in(a, &family, policy);
            let fip = bounded_fip(&family, policy);
            let witness = SumWitness::new(w.seq.clone(), a, None, None)?;
            Ok(Decision { side: Side::A, family, tilde, fip, failure: None, witness: Some(witness), search: outcome })
        }
        SearchOutcome::Extension(e) => {
            let ext = extend_after_fip_failure(&e.family, a, policy)?;
            let tilde = tilde_in(&a.complement(), &ext.family, policy);
            let failure = bounded_fip_with(&ext.family, std::slice::from_ref(a), policy);
            Ok(Decision {
                side: Side::Complement,
                family: ext.family,
                tilde,
                fip: ext.fip,
                failure: Some(failure),
                witness: None,
                search: outcome,
            })
        }
    }
}

/// A monochromatic `S` of length `m`, trying colors in index order.
///
/// Explicit colorings run the exact part-2 tree on each class with all
/// sums inside `[1..N]`; symbolic colorings chain [`extend_decide`].
pub fn hindman_witness(
    coloring: &Coloring,
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
    jobs: usize,
) -> Result<SumWitness, DriverError> {
    match coloring {
        Coloring::Explicit { k, assignment } => {
            let n = assignment.len() as u64;
            let exact = FipPolicy { bound: n + 1, ..*policy };
            let attempt = |i: usize| -> Result<Option<SumWitness>, DriverError> {
                let class = coloring.class(i);
                match exact_part2(&crate::family::trivial_family(), &class, m, &exact, limits) {
                    Ok((Some(s), _)) => Ok(Some(SumWitness::new(s, &class, Some(i), Some(n))?)),
                    Ok((None, _)) => Ok(None),
                    Err(SearchError::BudgetExhausted(d)) => Err(DriverError::BudgetExhausted(d)),
                    Err(e) => Err(e.into()),
                }
            };
            let results: Vec<Result<Option<SumWitness>, DriverError>> = if jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| DriverError::Inconclusive(e.to_string()))?;
                pool.install(|| (1..=*k).into_par_iter().map(attempt).collect())
            } else {
                let mut out = Vec::new();
                for i in 1..=*k {
                    let r = attempt(i);
                    let done = matches!(r, Ok(Some(_)));
                    out.push(r);
                    if done {
                        break;
                    }
                }
                out
            };
            let mut exhaustive = true;
            for r in results {
                match r {
                    Ok(Some(w)) => return Ok(w),
                    Ok(None) => {}
                    Err(DriverError::BudgetExhausted(_)) => exhaustive = false,
                    Err(e) => return Err(e),
                }
            }
            Err(DriverError::NoWitnessAtBound { exhaustive })
        }
        Coloring::Symbolic { classes } => {
            let mut v = crate::family::trivial_family();
            for (i, class) in classes.iter().enumerate() {
                let d = extend_decide(&v, class, m, policy, limits)?;
                if let (Side::A, Some(mut w)) = (d.side, d.witness) {
                    w.color = Some(i + 1);
                    return Ok(w);
                }
                v = d.family;
            }
            Err(DriverError::NoWitnessAtBound { exhaustive: false })
        }
    }
}

/// Greedy extraction from `C ∈̃ V`: `D_0 = C`, `x_t` is the least
/// `x > x_{t−1}` in `D_t` with `D_t ∩ (D_t − x) ∈̃ V`, and
/// `D_{t+1} = D_t ∩ (D_t − x_t)`. The last element only needs `x ∈ D_t`.
pub fn galvin_glazer(v: &Family, c: &NatSet, m: usize, policy: &FipPolicy) -> Result<SumWitness, DriverError> {
    policy.validate()?;
    let start = tilde_in(c, v, policy);
    if !start.is_verified() {
        return Err(DriverError::PreconditionNotMet(format!("C in~ V is {}", start.verdict)));
    }
    let semigroup = check_semigroup(v, policy);
    if semigroup.verdict == Verdict::RefutedAtBound {
        return Err(DriverError::PreconditionNotMet("V is refuted as a semigroup".into()));
    }
    let mut d = c.clone();
    let mut seq: Vec<u64> = Vec::new();
    for t in 0..m {
        let from = seq.last().map_or(1, |x| x + 1);
        let last = t + 1 == m;
        let next = (from..policy.bound).find_map(|x| {
            if !d.member(x) {
                return None;
            }
            let narrowed = NatSet::intersect(vec![d.clone(), d.shift(x)]);
            (last || tilde_in(&narrowed, v, policy).is_verified()).then_some((x, narrowed))
        });
        let Some((x, narrowed)) = next else {
            return Err(DriverError::ExtractionStuck { partial: seq });
        };
        debug_assert!(c.member(x) && nonempty_sums(&seq)?.iter().all(|&s| c.member(x + s)));
        seq.push(x);
        d = narrowed;
    }
    Ok(SumWitness::new(seq, c, None, None)?)
}

/// Runs the signed tree and adds, for each suffix `S_i = ⟨s_i, …⟩`, the
/// schema `{NS(S_i) − n | n ∈ FS(S_i)}` so that `b_i·A_i ∈̃ V`.
pub fn iterated_decide(
    u: &Family,
    sets: &[NatSet],
    m: usize,
    policy: &FipPolicy,
    limits: &SearchLimits,
) -> Result<(IteratedWitness, Family), DriverError> {
    policy.validate()?;
    if !bounded_fip(u, policy).is_verified() {
        return Err(DriverError::PreconditionNotMet("U does not pass bounded fip".into()));
    }
    let SearchOutcome::Witness(w) = search_iterated(u, sets, m, policy, limits)? else {
        return Err(DriverError::Inconclusive("signed tree returned no witness".into()));
    };
    let signs = w.signs.clone().unwrap_or_default();
    let mut family = u.clone();
    for i in 0..signs.len() {
        let suffix = &w.seq[i..];
        let ns = NatSet::explicit(nonempty_sums(suffix)?)?;
        let fs = NatSet::explicit(finite_sums(suffix)?)?;
        family = family.append_schema(GeneratorSchema::shifted(ns, fs, true), "finite sums of a suffix")?;
    }
    let tildes = signs.iter().enumerate().map(|(i, &b)| tilde_in(&sets[i].signed(b), &family, policy)).collect();
    let witness = IteratedWitness { seq: w.seq, signs, checks: w.ns_checks, tildes };
    Ok((witness, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{frechet_family, trivial_family};

    fn p() -> FipPolicy {
        FipPolicy::default()
    }

    fn l() -> SearchLimits {
        SearchLimits::default()
    }

    fn explicit(digits: &str, k: usize) -> Coloring {
        Coloring::explicit(k, digits.bytes().map(|b| b - b'0').collect()).unwrap()
    }

    #[test]
    fn decide_examples() {
        let d = extend_decide(&trivial_family(), &NatSet::evens(), 3, &p(), &l()).unwrap();
        assert_eq!(d.side, Side::A);
        assert_eq!(d.witness.as_ref().unwrap().seq, vec![2, 4, 6]);
        assert!(d.tilde.is_verified());
        assert_eq!(d.family.generators().len(), 1);

        let d = extend_decide(&trivial_family(), &NatSet::odds(), 2, &p(), &l()).unwrap();
        assert_eq!(d.side, Side::Complement);
        assert!(tilde_in(&NatSet::evens(), &d.family, &p()).is_verified());
        assert_eq!(d.failure.unwrap().verdict, Verdict::RefutedAtBound);

        let d = extend_decide(&trivial_family(), &NatSet::empty(), 1, &p(), &l()).unwrap();
        assert_eq!(d.side, Side::Complement);
        assert!(d.tilde.is_verified());
    }

    #[test]
    fn interval_past_the_bound_is_inconclusive() {
        let a = NatSet::intersect(vec![NatSet::tail(8109), NatSet::tail(10833).complement()]);
        let err = extend_decide(&trivial_family(), &a, 4, &p(), &l()).unwrap_err();
        assert!(matches!(err, DriverError::Inconclusive(_)), "{err}");

        let a = NatSet::intersect(vec![NatSet::tail(3000), NatSet::tail(3400).complement()]);
        let d = extend_decide(&trivial_family(), &a, 4, &p(), &l()).unwrap();
        assert_eq!(d.side, Side::Complement);
    }

    #[test]
    fn residue_block_needs_periodic_closure() {
        let a = NatSet::union((2..6).map(|r| NatSet::residue(r, 8)).collect());
        let d = extend_decide(&trivial_family(), &a, 4, &p(), &l()).unwrap();
        assert_eq!(d.side, Side::Complement);
        assert_eq!(d.failure.unwrap().verdict, Verdict::RefutedAtBound);
    }

    #[test]
    fn hindman_examples() {
        let parity = explicit("121212121212", 2);
        let w = hindman_witness(&parity, 2, &p(), &l(), 1).unwrap();
        assert_eq!((w.seq.clone(), w.color, w.sums.clone()), (vec![2, 4], Some(2), vec![2, 4, 6]));
        assert_eq!(hindman_witness(&parity, 2, &p(), &l(), 4).unwrap(), w);

        let mod3 = explicit("123123123", 3);
        let w = hindman_witness(&mod3, 2, &p(), &l(), 1).unwrap();
        assert_eq!((w.seq, w.color), (vec![3, 6], Some(3)));

        let ws8 = explicit("11212221", 2);
        let err = hindman_witness(&ws8, 2, &p(), &l(), 1).unwrap_err();
        assert!(matches!(err, DriverError::NoWitnessAtBound { exhaustive: true }));
    }

    #[test]
    fn hindman_symbolic() {
        let c = Coloring::symbolic(vec![NatSet::odds(), NatSet::evens()], &p()).unwrap();
        let w = hindman_witness(&c, 2, &p(), &l(), 1).unwrap();
        assert_eq!(w.color, Some(2));
        assert!(w.holds);
        assert!(Coloring::symbolic(vec![NatSet::odds()], &p()).is_err());
    }

    #[test]
    fn galvin_glazer_examples() {
        let evens = Family::new(vec![NatSet::evens()], vec![], "evens");
        let w = galvin_glazer(&evens, &NatSet::evens(), 3, &p()).unwrap();
        assert_eq!(w.seq, vec![2, 4, 6]);
        assert!(w.holds);

        // The finite-sums schema of a finite witness never passes fip.
        let d = extend_decide(&trivial_family(), &NatSet::evens(), 3, &p(), &l()).unwrap();
        assert!(matches!(
            galvin_glazer(&d.family, &NatSet::evens(), 3, &p()),
            Err(DriverError::PreconditionNotMet(_))
        ));

        let ns = NatSet::explicit(nonempty_sums(&[1, 2, 4, 8]).unwrap()).unwrap();
        let fs = NatSet::finite_sums_of(&[1, 2, 4, 8]).unwrap();
        let v = trivial_family().append_schema(GeneratorSchema::shifted(ns, fs, true), "fs").unwrap();
        assert!(matches!(galvin_glazer(&v, &NatSet::odds(), 2, &p()), Err(DriverError::PreconditionNotMet(_))));

        let v = frechet_family().append_generator(NatSet::naturals(), "n").unwrap();
        assert_eq!(galvin_glazer(&v, &NatSet::naturals(), 2, &p()).unwrap().seq, vec![1, 2]);
    }

    #[test]
    fn iterated_examples() {
        let (w, _) = iterated_decide(&trivial_family(), &[NatSet::evens()], 2, &p(), &l()).unwrap();
        assert_eq!((w.seq.clone(), w.signs.clone()), (vec![2, 4], vec![Sign::Plus]));
        assert!(w.tildes[0].is_verified());

        let (w, _) =
            iterated_decide(&trivial_family(), &[NatSet::empty(), NatSet::naturals()], 2, &p(), &l()).unwrap();
        assert_eq!(w.signs, vec![Sign::Minus, Sign::Plus]);

        let (w, v) =
            iterated_decide(&trivial_family(), &[NatSet::evens(), NatSet::residue(0, 3)], 2, &p(), &l()).unwrap();
        assert!(w.checks.iter().all(|c| c.holds));
        assert!(w.tildes.iter().all(TildeResult::is_verified));
        assert_eq!(v.generators().len(), 1);
    }
}
