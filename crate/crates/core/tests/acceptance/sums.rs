use std::collections::BTreeSet;

use hindman::setexpr::{finite_sums, nonempty_sums};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{ensure, subset_sums, Check};

pub fn criterion() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    for case in 0..1000 {
        let len = rng.gen_range(0..=12);
        let mut set = BTreeSet::new();
        while set.len() < len {
            set.insert(rng.gen_range(1..=1_000_000u64));
        }
        let s: Vec<u64> = set.into_iter().collect();
        let ns = subset_sums(&s);
        let mut fs = vec![0];
        fs.extend(&ns);
        let got_fs = finite_sums(&s).map_err(|e| format!("case {case}: {e}"))?;
        let got_ns = nonempty_sums(&s).map_err(|e| format!("case {case}: {e}"))?;
        ensure(got_fs == fs, || format!("case {case}: FS mismatch for {s:?}"))?;
        ensure(got_ns == ns, || format!("case {case}: NS mismatch for {s:?}"))?;
    }
    Ok("1000 random sets".into())
}
