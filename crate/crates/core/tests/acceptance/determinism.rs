use hindman::cli::run;
use hindman::driver::{hindman_witness, Coloring};
use hindman::family::FipPolicy;
use hindman::search::SearchLimits;

use crate::{decide, ensure, Check};

/// Runs the CLI with `--jobs 1` twice and `--jobs 4` once; all three outputs must match.
fn stable(args: &[&str]) -> Result<String, String> {
    let go = |jobs: &str| {
        let mut full = vec!["hindman"];
        full.extend_from_slice(args);
        full.extend(["--jobs", jobs]);
        run(full)
    };
    let first = go("1");
    ensure(first == go("1"), || format!("{args:?}: two runs differ"))?;
    ensure(first == go("4"), || format!("{args:?}: --jobs 1 and --jobs 4 differ"))?;
    ensure(first.code != 4, || format!("{args:?}: input error {}", first.stderr))?;
    Ok(first.stdout)
}

pub fn criterion() -> Check {
    stable(&["oracle-minbound", "--colors", "2", "--size", "2", "--max", "12"])?;

    let policy = FipPolicy::default();
    let limits = SearchLimits::default();
    let dir = std::env::temp_dir().join(format!("hindman-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for mask in 0..1u32 << 10 {
        let col: Vec<u8> = (0..10).map(|i| (mask >> i & 1) as u8 + 1).collect();
        let c = Coloring::explicit(2, col.clone()).map_err(|e| e.to_string())?;
        let one = format!("{:?}", hindman_witness(&c, 2, &policy, &limits, 1));
        let four = format!("{:?}", hindman_witness(&c, 2, &policy, &limits, 4));
        ensure(one == four, || format!("coloring {mask}: jobs change the result"))?;
        if mask % 64 == 0 {
            let path = dir.join(format!("c{mask}.txt"));
            let digits: String = col.iter().map(|d| char::from(b'0' + d)).collect();
            std::fs::write(&path, format!("colors 2\n{digits}\n")).map_err(|e| e.to_string())?;
            stable(&["hindman", "--coloring", path.to_str().unwrap(), "--size", "2"])?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);

    for text in decide::corpus() {
        stable(&["decide", "--pred", &text, "--size", "4"])?;
    }
    stable(&["iterated", "--preds", "n % 2 == 0;n % 3 == 0", "--size", "4"])?;
    Ok("criteria 2, 3, 4 and 8 reproduce byte for byte".into())
}
