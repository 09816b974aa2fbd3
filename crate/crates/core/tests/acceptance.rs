//! Acceptance criteria over the three default seeded configurations.
//!
//! Prints one line per criterion and exits non-zero when a required
//! criterion fails. Criterion 9 is reported but never gates.

use std::process::ExitCode;
use std::time::Instant;

use geiser_core::harness::{run_all, Check, Session, SuiteReport, Verdict, DEFAULT_N_RANGE};

const SEEDS: [u64; 3] = [1, 2, 3];

struct Criterion {
    number: u32,
    title: &'static str,
    /// Check id prefixes that make up the criterion.
    prefixes: &'static [&'static str],
    optional: bool,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { number: 1, title: "pipeline: net, syzygies, quartic, sextic, pullback, smoothness", prefixes: &["pipeline."], optional: false },
    Criterion { number: 2, title: "bitangents: 28 distinct certified lines, collinear pair images", prefixes: &["bitangents."], optional: false },
    Criterion { number: 3, title: "sections: presentation and interpolation agree, pinned values", prefixes: &["sections."], optional: false },
    Criterion { number: 4, title: "splitting table on bitangents and seeded lines", prefixes: &["qpon."], optional: false },
    Criterion { number: 5, title: "threshold jumpers are bitangent over all examined lines", prefixes: &["main."], optional: false },
    Criterion { number: 6, title: "examples: graded fingerprints and the vertex section", prefixes: &["examples."], optional: false },
    Criterion { number: 7, title: "twist identities and Chern searches", prefixes: &["twists."], optional: false },
    Criterion { number: 8, title: "stability under windows, re-basing and reruns", prefixes: &["stability."], optional: false },
    Criterion { number: 9, title: "pencil degree, self-duality, even-case caveat (optional)", prefixes: &["pencil.", "duality.", "main.even-caveat"], optional: true },
];

fn belongs(c: &Check, crit: &Criterion) -> bool {
    // informational optional checks inside a required suite stay out of it
    crit.prefixes.iter().any(|p| c.id.starts_with(p)) && (crit.optional || !c.optional)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut runs: Vec<(u64, Vec<SuiteReport>)> = Vec::new();
    for seed in SEEDS {
        let t = Instant::now();
        let reports = match Session::seeded(seed) {
            Ok(s) => run_all(&s, DEFAULT_N_RANGE),
            Err(e) => {
                let mut r = SuiteReport::new("session", seed);
                r.push("pipeline.session", "session setup", Verdict::Fail, serde_json::json!({ "error": e.to_string() }));
                vec![r]
            }
        };
        println!("seed {seed}: {} suites in {:.1}s", reports.len(), t.elapsed().as_secs_f64());
        runs.push((seed, reports));
    }

    let mut gating_failed = false;
    for crit in &CRITERIA {
        let mut total = 0;
        let mut bad: Vec<String> = Vec::new();
        let mut inconclusive: Vec<String> = Vec::new();
        for (seed, reports) in &runs {
            for c in reports.iter().flat_map(|r| &r.checks).filter(|c| belongs(c, crit)) {
                total += 1;
                match c.verdict {
                    Verdict::Pass => {}
                    Verdict::Fail => bad.push(format!("{}@seed{seed}", c.id)),
                    Verdict::Inconclusive => inconclusive.push(format!("{}@seed{seed}", c.id)),
                }
            }
        }
        let ok = total > 0 && bad.is_empty() && (crit.optional || inconclusive.is_empty());
        let label = match (ok, crit.optional, inconclusive.is_empty()) {
            (true, _, true) => "PASS",
            (true, _, false) => "PASS (some inconclusive)",
            (false, true, _) => "FAIL (non-gating)",
            (false, false, _) => "FAIL",
        };
        println!("criterion {}: {label}  {} [{total} checks]", crit.number, crit.title);
        for id in &bad {
            println!("    failed: {id}");
        }
        for id in &inconclusive {
            println!("    inconclusive: {id}");
        }
        if !ok && !crit.optional {
            gating_failed = true;
            for (_, reports) in &runs {
                for c in reports.iter().flat_map(|r| &r.checks).filter(|c| belongs(c, crit) && c.verdict != Verdict::Pass) {
                    println!("    witness {}: {}", c.id, c.witness);
                }
            }
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if gating_failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
