//! Plain-text certificates: one `key: value` pair per line, stable order.

use std::fmt;

use crate::driver::{Decision, IteratedWitness, SumWitness};
use crate::family::{format_index_set, Family, FipPolicy, FipReport, SchemaBody, TildeResult};
use crate::oracle::ForcingResult;
use crate::search::{Diagnostics, NsCheck, SearchOutcome};
use crate::semigroup::SemigroupReport;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn policy(&mut self, p: &FipPolicy) -> &mut Self {
        self.push("policy.bound", p.bound)
            .push("policy.count", p.min_count)
            .push("policy.tail", p.tail_fraction)
            .push("policy.fmax", p.max_f)
            .push("policy.inst", p.inst_bound)
    }

    pub fn fip(&mut self, key: &str, r: &FipReport) -> &mut Self {
        self.push(format!("{key}.verdict"), r.verdict).push(format!("{key}.parts"), r.parts_checked);
        if let Some(w) = r.witnesses.first() {
            self.push(format!("{key}.part"), w);
        }
        self
    }

    pub fn tilde(&mut self, key: &str, r: &TildeResult) -> &mut Self {
        self.push(format!("{key}.verdict"), r.verdict);
        if let Some(w) = &r.witness {
            self.push(format!("{key}.witness"), format_index_set(w));
        }
        if let (false, Some((f, n))) = (r.is_verified(), &r.counterexample) {
            self.push(format!("{key}.counterexample"), format!("F={} n={n}", format_index_set(f)));
        }
        self
    }

    pub fn family(&mut self, key: &str, f: &Family) -> &mut Self {
        self.push(format!("{key}.generators"), f.generators().len());
        for (i, g) in f.generators().iter().enumerate() {
            self.push(format!("{key}.g{i}"), g);
        }
        self.push(format!("{key}.schemas"), f.schemas().len());
        for (i, s) in f.schemas().iter().enumerate() {
            let body = match &s.body {
                SchemaBody::Shifted(b) => format!("({b}) - n"),
                SchemaBody::Tail => "[n, inf)".to_string(),
            };
            self.push(format!("{key}.s{i}"), format!("{body} for n in {} zero={}", s.index_set, s.include_zero));
        }
        self
    }

    pub fn diagnostics(&mut self, d: &Diagnostics) -> &mut Self {
        self.push("search.nodes", d.nodes_expanded)
            .push("search.candidates", d.candidates_tested)
            .push("search.depth", d.max_depth)
            .push("search.dead_ends", d.dead_ends)
            .push("search.skipped_indices", d.skipped_indices);
        for (i, s) in d.steps.iter().enumerate() {
            self.push(format!("search.step{i}"), s);
        }
        self
    }

    fn ns_check(&mut self, key: &str, c: &NsCheck) -> &mut Self {
        self.push(format!("{key}.from"), c.from + 1)
            .push(format!("{key}.target"), &c.target)
            .push(format!("{key}.sums"), join(&c.sums))
            .push(format!("{key}.holds"), c.holds)
    }

    pub fn search(&mut self, o: &SearchOutcome) -> &mut Self {
        match o {
            SearchOutcome::Witness(w) => {
                self.push("search.outcome", "witness").push("search.witness", join(&w.seq));
                for (name, r) in &w.fip_reports {
                    self.push("search.fip_family", name);
                    self.fip("search.fip", r);
                }
                self.diagnostics(&w.diagnostics)
            }
            SearchOutcome::Extension(e) => {
                self.push("search.outcome", "extension");
                self.fip("search.extension_fip", &e.fip).fip("search.extension_failure", &e.failure);
                self.diagnostics(&e.diagnostics)
            }
        }
    }

    pub fn sum_witness(&mut self, w: &SumWitness) -> &mut Self {
        self.push("witness", join(&w.seq));
        if let Some(c) = w.color {
            self.push("color", c);
        }
        self.push("ns", join(&w.sums)).push("ns_holds", w.holds)
    }

    pub fn decision(&mut self, d: &Decision) -> &mut Self {
        self.push("side", d.side);
        if let Some(w) = &d.witness {
            self.sum_witness(w);
        }
        self.tilde("chosen_in_family", &d.tilde).fip("family.fip", &d.fip);
        if let Some(f) = &d.failure {
            self.fip("family_with_a.fip", f);
        }
        self.family("family", &d.family).search(&d.search)
    }

    pub fn iterated(&mut self, w: &IteratedWitness, v: &Family) -> &mut Self {
        self.push("witness", join(&w.seq)).push("signs", join(&w.signs));
        for (i, c) in w.checks.iter().enumerate() {
            self.ns_check(&format!("suffix{}", i + 1), c);
        }
        for (i, t) in w.tildes.iter().enumerate() {
            self.tilde(&format!("signed{}_in_family", i + 1), t);
        }
        self.family("family", v)
    }

    pub fn forcing(&mut self, r: &ForcingResult) -> &mut Self {
        self.push("colors", r.k).push("size", r.m).push("max", r.max);
        match r.value {
            Some(n) => self.push("min_bound", n),
            None => self.push("min_bound", format!("none up to {}", r.max)),
        };
        let digits: String = r.extremal.iter().map(|c| char::from(b'0' + c)).collect();
        self.push("extremal.domain", r.extremal.len()).push("extremal", digits)
    }

    pub fn semigroup(&mut self, r: &SemigroupReport) -> &mut Self {
        self.push("semigroup.verdict", r.verdict).fip("fip", &r.fip);
        for it in &r.items {
            let y = it.witness_y.as_deref().map_or_else(|| "none".to_string(), format_index_set);
            self.push(format!("item.{}", it.item), format!("{} Y={y} n<{}", it.verdict, it.n_range));
        }
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}
