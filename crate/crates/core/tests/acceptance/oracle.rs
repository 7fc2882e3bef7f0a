use hindman::driver::{hindman_witness, Coloring, DriverError};
use hindman::family::FipPolicy;
use hindman::oracle::{brute_force_witness, min_forcing_bound, verify_witness, Target};
use hindman::search::SearchLimits;

use crate::{ensure, Check};

/// Does the coloring of `[1..n]` have `a < b`, `a + b ≤ n`, all one color?
fn has_pair(col: &[u8]) -> bool {
    let n = col.len();
    (1..=n).any(|a| {
        (a + 1..=n).any(|b| a + b <= n && col[a - 1] == col[b - 1] && col[a - 1] == col[a + b - 1])
    })
}

fn bits(mask: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| (mask >> i & 1) as u8 + 1).collect()
}

pub fn forcing() -> Check {
    let r = min_forcing_bound(2, 2, 12, 1, true).map_err(|e| e.to_string())?;
    ensure(r.value == Some(9), || format!("value {:?}", r.value))?;
    ensure(r.extremal == [1, 1, 2, 1, 2, 2, 2, 1], || format!("extremal {:?}", r.extremal))?;
    ensure(!has_pair(&r.extremal), || "extremal coloring has a monochromatic pair".into())?;
    let full = (0..1u32 << 9).all(|m| has_pair(&bits(m, 9)));
    ensure(full, || "some 2-coloring of [1..9] is pair-free".into())?;
    let free8 = (0..1u32 << 8).filter(|&m| !has_pair(&bits(m, 8))).count();
    Ok(format!("N=9, extremal 11212221, {free8} pair-free colorings of [1..8]"))
}

pub fn agreement() -> Check {
    let policy = FipPolicy::default();
    let limits = SearchLimits::default();
    let (mut found, mut total) = (0, 0);
    // Shorter domains exercise the witness-free side.
    for (n, mask) in (1..=10).flat_map(|n| (0..1u32 << n).map(move |m| (n, m))) {
        total += 1;
        let col = bits(mask, n);
        let coloring = Coloring::explicit(2, col.clone()).map_err(|e| e.to_string())?;
        let driver = hindman_witness(&coloring, 2, &policy, &limits, 1);
        let oracle = brute_force_witness(&col, 2);
        match (&driver, &oracle) {
            (Ok(w), Some((s, c))) => {
                let color = w.color.ok_or("driver witness without color")? as u8;
                let ok = verify_witness(Target::Class { assignment: &col, color }, &w.seq);
                ensure(ok == Ok(true), || format!("coloring {mask}/{n}: driver witness {:?} fails", w.seq))?;
                let ok = verify_witness(Target::Class { assignment: &col, color: *c }, s);
                ensure(ok == Ok(true), || format!("coloring {mask}/{n}: oracle witness {s:?} fails"))?;
                found += 1;
            }
            (Err(DriverError::NoWitnessAtBound { exhaustive: true }), None) => {}
            _ => return Err(format!("coloring {mask}/{n}: driver {driver:?}, oracle {oracle:?}")),
        }
    }
    Ok(format!("all {total} colorings of [1..n], n <= 10, {found} with witnesses"))
}
