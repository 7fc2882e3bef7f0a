//! Exhaustive ground truth for small instances.
//!
//! Nothing here calls into the search or driver modules; subset sums are
//! recomputed directly.

use rayon::prelude::*;

use crate::setexpr::NatSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("witness must be strictly increasing and start at 1 or above")]
    BadWitness,
    #[error("sum {sum} lies outside the coloring domain [1..{n}]")]
    OutOfDomain { sum: u64, n: u64 },
    #[error("color {0} is not in the coloring")]
    NoSuchColor(u8),
    #[error("k and m must be >= 1")]
    BadParameters,
}

/// What a witness is checked against.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Set(&'a NatSet),
    /// `assignment[j - 1]` is the color of `j`.
    Class { assignment: &'a [u8], color: u8 },
}

/// All `2^|s| − 1` nonempty subset sums, one per nonempty mask.
fn subset_sums(s: &[u64]) -> Vec<u64> {
    (1u64..1 << s.len())
        .map(|mask| s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).sum())
        .collect()
}

/// True iff every nonempty finite sum of `s` lies in the target.
pub fn verify_witness(target: Target<'_>, s: &[u64]) -> Result<bool, OracleError> {
    if s.is_empty() || s[0] == 0 || s.windows(2).any(|w| w[0] >= w[1]) || s.len() > 20 {
        return Err(OracleError::BadWitness);
    }
    let sums = subset_sums(s);
    match target {
        Target::Set(set) => Ok(sums.iter().all(|&x| set.member(x))),
        Target::Class { assignment, color } => {
            let n = assignment.len() as u64;
            if !assignment.contains(&color) {
                return Err(OracleError::NoSuchColor(color));
            }
            if let Some(&sum) = sums.iter().find(|&&x| x > n) {
                return Err(OracleError::OutOfDomain { sum, n });
            }
            Ok(sums.iter().all(|&x| assignment[x as usize - 1] == color))
        }
    }
}

/// Lexicographically first increasing `S` of length `m` whose nonempty sums
/// are all `≤ N` and one color; returns `S` and the color.
pub fn brute_force_witness(assignment: &[u8], m: usize) -> Option<(Vec<u64>, u8)> {
    let n = assignment.len() as u64;
    let color = |x: u64| assignment[x as usize - 1];
    let mut s = Vec::with_capacity(m);
    let mut sums = vec![0u64];
    fn go(
        s: &mut Vec<u64>,
        sums: &mut Vec<u64>,
        m: usize,
        n: u64,
        color: &dyn Fn(u64) -> u8,
    ) -> bool {
        if s.len() == m {
            return true;
        }
        let from = s.last().map_or(1, |x| x + 1);
        let total: u64 = s.iter().sum();
        for x in from..=n.saturating_sub(total) {
            let c = s.first().map_or(color(x), |&f| color(f));
            let fresh: Vec<u64> = sums.iter().map(|y| x + y).collect();
            if fresh.iter().any(|&y| y > n || color(y) != c) {
                continue;
            }
            let keep = sums.len();
            sums.extend(fresh);
            s.push(x);
            if go(s, sums, m, n, color) {
                return true;
            }
            s.pop();
            sums.truncate(keep);
        }
        false
    }
    if m == 0 {
        return None;
    }
    go(&mut s, &mut sums, m, n, &color).then(|| {
        let c = color(s[0]);
        (s, c)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingResult {
    pub k: usize,
    pub m: usize,
    pub max: u64,
    /// Least forcing `N`, or `None` when no `N ≤ max` forces.
    pub value: Option<u64>,
    /// Lexicographically least witness-free coloring of `[1..value − 1]`
    /// (of `[1..max]` when `value` is `None`).
    pub extremal: Vec<u8>,
}

/// Does some `S` of length `m` with `Σ S = j` and one color `c` exist, given
/// colors of `[1..j]` (`col[x - 1]`)?
fn witness_ending_at(col: &[u8], j: u64, m: usize) -> bool {
    let c = col[j as usize - 1];
    fn go(col: &[u8], c: u8, rest: u64, left: usize, from: u64, sums: &mut Vec<u64>) -> bool {
        if left == 1 {
            // The last element is forced: `rest`.
            if rest < from {
                return false;
            }
            return sums.iter().all(|&y| col[(y + rest) as usize - 1] == c);
        }
        // Remaining `left` elements are increasing, so the next one is small.
        let mut x = from;
        while x * left as u64 + (left as u64 * (left as u64 - 1)) / 2 <= rest {
            let keep = sums.len();
            let ok = sums.iter().all(|&y| col[(y + x) as usize - 1] == c);
            if ok {
                let fresh: Vec<u64> = sums[..keep].iter().map(|y| y + x).collect();
                sums.extend(fresh);
                if go(col, c, rest - x, left - 1, x + 1, sums) {
                    return true;
                }
                sums.truncate(keep);
            }
            x += 1;
        }
        false
    }
    go(col, c, j, m, 1, &mut vec![0])
}

/// Extends `prefix` to a witness-free coloring of `[1..n]`, least first.
fn complete(prefix: &mut Vec<u8>, n: usize, k: u8, m: usize, prune: bool) -> bool {
    let j = prefix.len();
    if j == n {
        return true;
    }
    let top = if prune { (prefix.iter().copied().max().unwrap_or(0) + 1).min(k) } else { k };
    for c in 1..=top {
        prefix.push(c);
        if !witness_ending_at(prefix, j as u64 + 1, m) && complete(prefix, n, k, m, prune) {
            return true;
        }
        prefix.pop();
    }
    false
}

fn prefixes(len: usize, k: u8, prune: bool) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &out {
            let top = if prune { (p.iter().copied().max().unwrap_or(0) + 1).min(k) } else { k };
            for c in 1..=top {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Lexicographically least witness-free `k`-coloring of `[1..n]`.
fn least_free_coloring(n: usize, k: u8, m: usize, prune: bool, pool: Option<&rayon::ThreadPool>) -> Option<Vec<u8>> {
    let Some(pool) = pool else {
        let mut prefix = Vec::with_capacity(n);
        return complete(&mut prefix, n, k, m, prune).then_some(prefix);
    };
    let split = n.min(6);
    let tasks: Vec<Vec<u8>> = prefixes(split, k, prune)
        .into_iter()
        .filter(|p| (1..=p.len()).all(|j| !witness_ending_at(&p[..j], j as u64, m)))
        .collect();
    let found: Vec<Option<Vec<u8>>> = pool.install(|| {
        tasks
            .into_par_iter()
            .map(|mut p| complete(&mut p, n, k, m, prune).then_some(p))
            .collect()
    });
    found.into_iter().flatten().next()
}

/// Least `N ≤ max` such that every `k`-coloring of `[1..N]` has a
/// monochromatic `NS(S)`, `|S| = m`, with all sums `≤ N`.
///
/// `prune` restricts the search to colorings in which each color first
/// appears after all smaller colors; relabeling maps every coloring to one
/// of these, and the lexicographically least witness-free coloring is
/// always among them.
pub fn min_forcing_bound(
    k: usize,
    m: usize,
    max: u64,
    jobs: usize,
    prune: bool,
) -> Result<ForcingResult, OracleError> {
    if k == 0 || m == 0 || k > u8::MAX as usize {
        return Err(OracleError::BadParameters);
    }
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|_| OracleError::BadParameters)?,
        )
    } else {
        None
    };
    let mut extremal = Vec::new();
    for n in 1..=max {
        match least_free_coloring(n as usize, k as u8, m, prune, pool.as_ref()) {
            Some(c) => extremal = c,
            None => return Ok(ForcingResult { k, m, max, value: Some(n), extremal }),
        }
    }
    Ok(ForcingResult { k, m, max, value: None, extremal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn verify_examples() {
        let evens = NatSet::evens();
        assert_eq!(verify_witness(Target::Set(&evens), &[2, 4, 6]), Ok(true));
        assert_eq!(verify_witness(Target::Set(&evens), &[1, 2]), Ok(false));
        let class = digits("121211");
        assert_eq!(verify_witness(Target::Class { assignment: &class, color: 2 }, &[2, 4]), Ok(false));
        assert_eq!(
            verify_witness(Target::Class { assignment: &class, color: 2 }, &[4, 5]),
            Err(OracleError::OutOfDomain { sum: 9, n: 6 })
        );
        assert_eq!(verify_witness(Target::Set(&evens), &[4, 2]), Err(OracleError::BadWitness));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_witness(&digits("111"), 2), Some((vec![1, 2], 1)));
        assert_eq!(brute_force_witness(&digits("12121"), 2), None);
        assert_eq!(brute_force_witness(&digits("121212121212"), 2), Some((vec![2, 4], 2)));
        assert_eq!(brute_force_witness(&digits("11212221"), 2), None);
    }

    #[test]
    fn forcing_examples() {
        assert_eq!(min_forcing_bound(1, 2, 10, 1, true).unwrap().value, Some(3));
        assert_eq!(min_forcing_bound(2, 1, 5, 1, true).unwrap().value, Some(1));
        let r = min_forcing_bound(2, 2, 12, 1, true).unwrap();
        assert_eq!(r.value, Some(9));
        assert_eq!(r.extremal, digits("11212221"));
    }

    #[test]
    fn pruning_and_jobs_agree() {
        for n in 1..=8 {
            for k in 1..=3 {
                let a = min_forcing_bound(k, 2, n, 1, true).unwrap();
                assert_eq!(a, min_forcing_bound(k, 2, n, 1, false).unwrap());
                assert_eq!(a, min_forcing_bound(k, 2, n, 3, true).unwrap());
            }
        }
    }
}
