use hindman::cli::parse_predicate;
use hindman::driver::{extend_decide, iterated_decide, Side};
use hindman::family::{bounded_fip_with, frechet_family, tilde_in, trivial_family, Family, FipPolicy, Verdict};
use hindman::search::SearchLimits;
use hindman::semigroup::check_semigroup;
use hindman::setexpr::{NatSet, Sign};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{ensure, subset_sums, Check};

fn atom(rng: &mut StdRng) -> String {
    let m = rng.gen_range(2..=12);
    let r = rng.gen_range(0..m);
    let a = rng.gen_range(1..9000);
    // Finite intervals end below tau * B, where the bound can see that they end.
    let lo = rng.gen_range(0..4500);
    match rng.gen_range(0..7) {
        0 => format!("n % {m} == {r}"),
        1 => format!("n % {m} != {r}"),
        2 => format!("n % {m} < {}", r.max(1)),
        3 => format!("n > {a}"),
        4 => format!("n < {}", a.min(500)),
        5 => format!("n >= {lo} && n <= {}", lo + rng.gen_range(0..500)),
        _ => format!("(n + {r}) % {m} >= {}", m / 2),
    }
}

/// Residue, interval and boolean combinations, fixed by the seed.
pub fn corpus() -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(4);
    (0..100)
        .map(|_| match rng.gen_range(0..5) {
            0 | 1 => atom(&mut rng),
            2 => format!("({}) && ({})", atom(&mut rng), atom(&mut rng)),
            3 => format!("({}) || ({})", atom(&mut rng), atom(&mut rng)),
            _ => format!("!({})", atom(&mut rng)),
        })
        .collect()
}

pub fn criterion() -> Check {
    let policy = FipPolicy::default();
    let limits = SearchLimits::default();
    let (mut sides_a, mut sides_c) = (0, 0);
    for text in corpus() {
        let a = parse_predicate(&text).map_err(|e| format!("{text}: {e}"))?;
        let d = extend_decide(&trivial_family(), &a, 4, &policy, &limits).map_err(|e| format!("{text}: {e}"))?;
        match d.side {
            Side::A => {
                let s = &d.witness.as_ref().ok_or("side A without witness")?.seq;
                ensure(s.len() == 4, || format!("{text}: witness {s:?}"))?;
                let bad = subset_sums(s).into_iter().find(|&x| !a.member(x));
                ensure(bad.is_none(), || format!("{text}: {bad:?} in NS({s:?}) is outside A"))?;
                sides_a += 1;
            }
            Side::Complement => {
                let with_a = bounded_fip_with(&d.family, std::slice::from_ref(&a), &policy);
                ensure(with_a.verdict == Verdict::RefutedAtBound, || format!("{text}: V+A is {}", with_a.verdict))?;
                let c = tilde_in(&a.complement(), &d.family, &policy);
                ensure(c.is_verified(), || format!("{text}: complement in~ V is {}", c.verdict))?;
                sides_c += 1;
            }
        }
    }
    Ok(format!("100 predicates, {sides_a} side A, {sides_c} side A^c"))
}

pub fn semigroups() -> Check {
    for bound in [100, 1000, 10_000] {
        let policy = FipPolicy { bound, min_count: 8, tail_fraction: 0.5, ..FipPolicy::default() };
        let single = |s: NatSet| Family::new(vec![s], vec![], "single");
        let cases = [
            ("frechet", frechet_family(), Verdict::VerifiedAtBound),
            ("evens", single(NatSet::evens()), Verdict::VerifiedAtBound),
            ("odds", single(NatSet::odds()), Verdict::RefutedAtBound),
        ];
        for (name, family, want) in cases {
            let got = check_semigroup(&family, &policy).verdict;
            ensure(got == want, || format!("{name} at B={bound}: {got}, expected {want}"))?;
        }
    }
    Ok("frechet, evens verified; odds refuted at B=100,1000,10000".into())
}

pub fn iterated() -> Check {
    let sets = [NatSet::evens(), NatSet::residue(0, 3)];
    let (w, _) = iterated_decide(&trivial_family(), &sets, 4, &FipPolicy::default(), &SearchLimits::default())
        .map_err(|e| e.to_string())?;
    ensure(w.seq.len() == 4 && w.signs.len() == 2, || format!("shape {:?} {:?}", w.seq, w.signs))?;
    for (i, &b) in w.signs.iter().enumerate() {
        let target = |x: u64| sets[i].member(x) == (b == Sign::Plus);
        let bad = subset_sums(&w.seq[i..]).into_iter().find(|&x| !target(x));
        ensure(bad.is_none(), || format!("suffix {} sum {bad:?} outside {b}*A", i + 1))?;
    }
    let signs: Vec<String> = w.signs.iter().map(Sign::to_string).collect();
    Ok(format!("S={:?} signs=({})", w.seq, signs.join(",")))
}
