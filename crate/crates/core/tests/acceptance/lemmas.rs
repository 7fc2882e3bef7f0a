use std::collections::BTreeSet;

use hindman::family::{bounded_fip, bounded_fip_with, frechet_family, trivial_family, Family, FipPolicy, ItemId};
use hindman::semigroup::{
    extend_after_fip_failure, extend_after_pair_failure, extend_by_membership, Extension, SemigroupError,
};
use hindman::setexpr::NatSet;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{ensure, Check};

fn single(s: NatSet) -> Family {
    Family::new(vec![s], vec![], "single")
}

fn random_finite(rng: &mut StdRng, max: u64) -> NatSet {
    let len = rng.gen_range(0..16);
    let elems: BTreeSet<u64> = (0..len).map(|_| rng.gen_range(0..max)).collect();
    NatSet::from_elements(elems.into_iter().collect())
}

/// Infinite sets whose pairwise shifts `A ∩ (A − n)`, `n ≥ 1`, are finite.
fn sparse(rng: &mut StdRng) -> NatSet {
    let r = rng.gen_range(0..100u64);
    let elems: Vec<u64> = match rng.gen_range(0..4) {
        0 => {
            let c = rng.gen_range(1..=3);
            (0..200u64).map(|k| c * k * k + r).collect()
        }
        1 => (0..30u64).map(|k| k * k * k + r).collect(),
        2 => (0..20u32).map(|i| (1u64 << i) + r).collect(),
        _ => (0..300u64).map(|k| k * (k + 1) / 2 + r).collect(),
    };
    NatSet::from_elements(elems)
}

fn sound(name: &str, u: &Family, r: Result<Extension, SemigroupError>, p: &FipPolicy) -> Result<(), String> {
    let ext = r.map_err(|e| format!("{name}: valid instance rejected: {e}"))?;
    let fip = bounded_fip(&ext.family, p);
    ensure(fip.is_verified(), || format!("{name}: extended family is {}", fip.verdict))?;
    ensure(ext.family.generators().len() >= u.generators().len(), || format!("{name}: generators lost"))?;
    let prefix = ext.family.generators()[..u.generators().len()].iter().map(NatSet::to_string);
    ensure(prefix.eq(u.generators().iter().map(NatSet::to_string)), || format!("{name}: U not a prefix"))
}

fn rejected(name: &str, r: Result<Extension, SemigroupError>) -> Result<(), String> {
    match r {
        Err(SemigroupError::PreconditionNotWitnessed(_) | SemigroupError::YNotInFamilyTilde) => Ok(()),
        Err(e) => Err(format!("{name}: unexpected error {e}")),
        Ok(_) => Err(format!("{name}: invalid instance produced a family")),
    }
}

pub fn criterion() -> Check {
    let p = FipPolicy::default();
    let mut rng = StdRng::seed_from_u64(5);
    let bases = [
        trivial_family(),
        frechet_family(),
        single(NatSet::evens()),
        frechet_family().append_generator(NatSet::evens(), "evens").unwrap(),
    ];
    for i in 0..100 {
        let u = &bases[i % bases.len()];
        // Odd residues are thin only against families containing the evens.
        let a = if i % 4 >= 2 && i % 8 >= 4 {
            let k = rng.gen_range(1..=4);
            NatSet::residue(2 * rng.gen_range(0..k) + 1, 2 * k)
        } else {
            random_finite(&mut rng, 2000)
        };
        sound(&format!("fip-failure #{i}"), u, extend_after_fip_failure(u, &a, &p), &p)?;
        rejected(&format!("fip-failure invalid #{i}"), extend_after_fip_failure(u, &NatSet::tail(rng.gen_range(0..40)), &p))?;
    }

    let u = frechet_family();
    for i in 0..100 {
        let a = sparse(&mut rng);
        let y = NatSet::tail(rng.gen_range(1..=20));
        sound(&format!("pair-failure #{i}"), &u, extend_after_pair_failure(&u, &a, &y, &p), &p)?;
        let m = rng.gen_range(2..=6);
        let dense = NatSet::residue(rng.gen_range(0..m), m);
        rejected(&format!("pair-failure invalid pair #{i}"), extend_after_pair_failure(&u, &dense, &NatSet::tail(1), &p))?;
        rejected(&format!("pair-failure invalid Y #{i}"), extend_after_pair_failure(&u, &a, &NatSet::evens(), &p))?;
    }

    for i in 0..100 {
        let q = rng.gen_range(2..=6);
        let u = single(NatSet::residue(0, q));
        let extra = random_finite(&mut rng, 500);
        let a = NatSet::union(vec![NatSet::residue(0, q), extra]);
        sound(&format!("membership #{i}"), &u, extend_by_membership(&u, &a, ItemId::Gen(0), &p), &p)?;
        let off = NatSet::residue(rng.gen_range(1..q), q);
        rejected(&format!("membership invalid #{i}"), extend_by_membership(&u, &off, ItemId::Gen(0), &p))?;
    }

    // Failure of the pair premise is what extend_after_pair_failure consumes.
    let a = sparse(&mut rng);
    let pair = bounded_fip_with(&u, &[a.clone(), a.shift(3)], &p);
    ensure(!pair.is_verified(), || "sparse pair unexpectedly passes".into())?;
    Ok("3 x 100 valid instances extended with fip; 400 invalid instances rejected".into())
}
