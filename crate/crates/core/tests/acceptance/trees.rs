use hindman::search::kb_compare;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::{ensure, Check};

struct Tree {
    children: Vec<Vec<(u64, usize)>>,
    paths: Vec<Vec<u64>>,
}

fn random_tree(rng: &mut StdRng, max_nodes: usize) -> Tree {
    let mut t = Tree { children: vec![Vec::new()], paths: vec![Vec::new()] };
    let mut frontier = vec![0usize];
    while let Some(node) = frontier.pop() {
        if t.paths.len() >= max_nodes {
            break;
        }
        let mut labels: Vec<u64> = (0..20).collect();
        labels.shuffle(rng);
        let k = rng.gen_range(0..=4).min(max_nodes - t.paths.len());
        for &label in &labels[..k] {
            let id = t.paths.len();
            let mut path = t.paths[node].clone();
            path.push(label);
            t.paths.push(path);
            t.children.push(Vec::new());
            t.children[node].push((label, id));
            frontier.insert(rng.gen_range(0..=frontier.len()), id);
        }
    }
    t
}

fn post_order(t: &Tree, node: usize, out: &mut Vec<Vec<u64>>) {
    let mut kids = t.children[node].clone();
    kids.sort();
    for (_, c) in kids {
        post_order(t, c, out);
    }
    out.push(t.paths[node].clone());
}

pub fn criterion() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut total = 0;
    for case in 0..50 {
        let size = rng.gen_range(1..=500);
        let t = random_tree(&mut rng, size);
        let mut dfs = Vec::new();
        post_order(&t, 0, &mut dfs);
        let mut sorted = t.paths.clone();
        sorted.sort_by(|a, b| kb_compare(a, b));
        ensure(sorted == dfs, || format!("tree {case} ({} nodes) differs", t.paths.len()))?;
        total += t.paths.len();
    }
    Ok(format!("50 trees, {total} nodes"))
}
