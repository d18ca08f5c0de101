//! Acceptance criteria at desk scale. Every criterion prints one PASS/FAIL
//! line; the test fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use hl_core::fixtures::{hgr1_example_graph, in_l1};
use hl_core::suite::{self, Report};
use hl_core::Prover;

const SEED: u64 = 0;

/// Wall-clock limits. Criteria without a stated limit share a generous cap
/// so a runaway search still shows up as a failure.
const SGR_LIMIT: Duration = Duration::from_secs(60);
const ALLGRAPHS_LIMIT: Duration = Duration::from_secs(600);
const DEFAULT_LIMIT: Duration = Duration::from_secs(600);

const CUT_PAIRS: usize = 100;
const REVERSIBILITY_SEQUENTS: usize = 100;
const WITNESS_GRAPHS: usize = 50;
const SOUNDNESS_VALUATIONS: u64 = 50;
const STRUCTURAL_CASES: usize = 500;

struct Outcome {
    ok: bool,
    line: String,
}

fn judge(id: usize, title: &str, report: &Report, elapsed: Duration, limit: Duration, extra: Vec<(bool, String)>) -> Outcome {
    let mut problems: Vec<String> = Vec::new();
    if !report.ok() {
        problems.push(format!("{} of {} cases failed", report.cases - report.passed, report.cases));
        problems.extend(report.failures.iter().take(5).cloned());
    }
    if elapsed > limit {
        problems.push(format!("took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()));
    }
    for (ok, what) in extra {
        if !ok {
            problems.push(what);
        }
    }
    let ok = problems.is_empty();
    let mut line = format!(
        "{} criterion {id:>2} {title}: {}/{} cases, {} budget exceeded, {:.1}s",
        if ok { "PASS" } else { "FAIL" },
        report.passed,
        report.cases,
        report.budget_exceeded,
        elapsed.as_secs_f64()
    );
    if !report.counts.is_empty() {
        let counts: Vec<String> = report.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        line.push_str(&format!(" [{}]", counts.join(" ")));
    }
    for p in &problems {
        line.push_str(&format!("\n       {p}"));
    }
    Outcome { ok, line }
}

fn timed(f: impl FnOnce() -> Report) -> (Report, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();

    // Each criterion gets a fresh memo so its timing stands alone.
    let (r, t) = timed(|| suite::sgr_suite(&Prover::new()));
    let accepted = r.counts.get("accepted").copied().unwrap_or(0);
    outcomes.push(judge(1, "SGr language", &r, t, SGR_LIMIT, vec![
        (r.cases == 254, format!("expected 254 words, got {}", r.cases)),
        (accepted == 4, format!("expected 4 accepted words, got {accepted}")),
    ]));

    let (r, t) = timed(|| suite::allgraphs_suite(&Prover::new()));
    let census: Vec<usize> = (1..=3).map(|m| r.counts.get(&format!("census_{m}_edges")).copied().unwrap_or(0)).collect();
    outcomes.push(judge(2, "HGr1 accepts L1", &r, t, ALLGRAPHS_LIMIT, vec![
        (in_l1(&hgr1_example_graph()), "the four-edge example is not in L1".into()),
        (census[0] == 1 && census[1] == 6, format!("census sizes {census:?}")),
    ]));

    let (r, t) = timed(|| suite::bipartite_suite(&Prover::new()));
    outcomes.push(judge(3, "HGr2 accepts bipartite L1", &r, t, DEFAULT_LIMIT, vec![]));

    let (r, t) = timed(|| suite::witness_suite(SEED, WITNESS_GRAPHS, &Prover::new()));
    outcomes.push(judge(4, "witness relabelings derive", &r, t, DEFAULT_LIMIT, vec![
        (r.cases == WITNESS_GRAPHS, format!("expected {WITNESS_GRAPHS} graphs, got {}", r.cases)),
    ]));

    let (r, t) = timed(|| suite::cut_suite(SEED, CUT_PAIRS, &Prover::new()));
    outcomes.push(judge(5, "cut admissibility", &r, t, DEFAULT_LIMIT, vec![
        (r.cases >= CUT_PAIRS, format!("only {} composed pairs", r.cases)),
    ]));

    let (r, t) = timed(|| suite::reversibility_suite(SEED, REVERSIBILITY_SEQUENTS, &Prover::new()));
    let sequents = r.counts.get("sequents").copied().unwrap_or(0);
    outcomes.push(judge(6, "reversibility", &r, t, DEFAULT_LIMIT, vec![
        (sequents >= REVERSIBILITY_SEQUENTS, format!("only {sequents} corpus sequents")),
    ]));

    let (r, t) = timed(|| suite::soundness_suite(SEED, SOUNDNESS_VALUATIONS, &Prover::new()));
    outcomes.push(judge(7, "soundness in finite models", &r, t, DEFAULT_LIMIT, vec![
        (r.cases > 0, "no sequent met the model preconditions".into()),
    ]));

    let (r, t) = timed(|| suite::embedding_suite(SEED, &Prover::new()));
    outcomes.push(judge(8, "Lambek embedding", &r, t, DEFAULT_LIMIT, vec![]));

    let (r, t) = timed(|| suite::conversion_suite(SEED, &Prover::new()));
    let mutants = r.counts.get("tree_mutants").copied().unwrap_or(0);
    outcomes.push(judge(9, "HRG to HL conversion", &r, t, DEFAULT_LIMIT, vec![
        (mutants == 20, format!("expected 20 tree mutants, got {mutants}")),
        (r.cases == 254 + 21, format!("expected 275 cases, got {}", r.cases)),
    ]));

    let (r, t) = timed(|| suite::structural_suite(SEED, STRUCTURAL_CASES));
    outcomes.push(judge(10, "structural properties", &r, t, DEFAULT_LIMIT, vec![
        (r.cases == 4 * STRUCTURAL_CASES, format!("expected {} checks, got {}", 4 * STRUCTURAL_CASES, r.cases)),
    ]));

    // Written to the raw stream so the lines survive output capture.
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        writeln!(err, "{}", o.line).unwrap();
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.ok).map(|o| o.line.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
