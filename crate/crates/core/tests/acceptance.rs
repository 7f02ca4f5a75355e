//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use serde_json::Value;
use ttgeo::cli::{run_suite, Suite, SuiteOptions};
use ttgeo::report::SuiteReport;
use ttgeo::SurfaceId;

const ENUMERATION_SECONDS: f64 = 60.0;
const CAYLEY_SECONDS: f64 = 120.0;
const CAYLEY_RADIUS: usize = 6;
const S11_QI_RADIUS: usize = 8;
const S04_QI_RADIUS: usize = 6;
const S11_QI: (u64, u64) = (4, 3);
const G1_RADIUS: usize = 8;
const TABLE_RADIUS: usize = 6;
const T1_RADIUS: usize = 8;
const T1_REACH: u64 = 5;

fn detail<'a>(s: &'a SuiteReport, check: &str, key: &str) -> &'a Value {
    s.reports
        .iter()
        .find(|r| r.check == check)
        .map(|r| &r.details[key])
        .unwrap_or(&Value::Null)
}

fn run(suite: Suite, surface: Option<SurfaceId>, radius: Option<usize>) -> SuiteReport {
    run_suite(suite, SuiteOptions { surface, radius }).unwrap_or_else(|e| SuiteReport::new(format!("{suite:?}: {e}"), vec![]))
}

fn failed(s: &SuiteReport) -> bool {
    !s.passed || s.reports.is_empty()
}

fn main() {
    ttgeo::parallel::init();
    let mut lines: Vec<(bool, String)> = Vec::new();

    let s = run(Suite::Classes, None, None);
    let secs = detail(&s, "classes-s04", "seconds").as_f64().unwrap_or(f64::INFINITY);
    lines.push((
        !failed(&s) && secs < ENUMERATION_SECONDS,
        format!(
            "1 enumeration: s11 {} class, s04 {} classes, {} up to mirror, {} amphichiral ({secs:.2} s < {ENUMERATION_SECONDS} s)",
            detail(&s, "classes-s11", "classes"),
            detail(&s, "classes-s04", "classes"),
            detail(&s, "classes-s04", "up_to_mirror"),
            detail(&s, "classes-s04", "amphichiral"),
        ),
    ));

    let s = run(Suite::Switches, None, None);
    lines.push((
        !failed(&s),
        format!(
            "2 switch and branch counts: s11 {}/{}, s04 {}/{}",
            detail(&s, "switches-s11", "switches"),
            detail(&s, "switches-s11", "branches"),
            detail(&s, "switches-s04", "switches"),
            detail(&s, "switches-s04", "branches"),
        ),
    ));

    let s = run(Suite::Cycles, None, None);
    lines.push((
        !failed(&s),
        format!(
            "3 vertex cycles: two rays each, weights {} (max 2), dets s11 {} s04 {}",
            detail(&s, "cycles-s04", "weight_histogram"),
            detail(&s, "cycles-s11", "dets"),
            detail(&s, "cycles-s04", "dets"),
        ),
    ));

    let start = Instant::now();
    let s = run(Suite::Cayley, None, Some(CAYLEY_RADIUS));
    let secs = start.elapsed().as_secs_f64();
    lines.push((
        !failed(&s) && secs < CAYLEY_SECONDS,
        format!(
            "4 Cayley isomorphism at radius {CAYLEY_RADIUS}: {} vertices, relators trivial ({secs:.2} s < {CAYLEY_SECONDS} s)",
            detail(&s, "cayley", "vertices"),
        ),
    ));

    let s = run(Suite::Fibers, None, None);
    lines.push((
        !failed(&s),
        format!(
            "5 fibres: s11 size {} diameter {} on {} edges; s04 size {} constant diameter a = {} on {} edges",
            detail(&s, "fibers-s11", "fiber_size"),
            detail(&s, "fibers-s11", "fiber_diameter"),
            detail(&s, "fibers-s11", "complete_edges"),
            detail(&s, "fibers-s04", "fiber_size"),
            detail(&s, "fibers-s04", "fiber_diameter"),
            detail(&s, "fibers-s04", "complete_edges"),
        ),
    ));

    let s11 = run(Suite::Qi, Some(SurfaceId::S11), Some(S11_QI_RADIUS));
    let s04 = run(Suite::Qi, Some(SurfaceId::S04), Some(S04_QI_RADIUS));
    let kc = (detail(&s11, "qi-s11", "k").as_u64(), detail(&s11, "qi-s11", "c").as_u64());
    let pairs = |s: &SuiteReport, c: &str| s.reports.iter().find(|r| r.check == c).map_or(0, |r| r.certified_pairs);
    lines.push((
        !failed(&s11) && !failed(&s04) && kc == (Some(S11_QI.0), Some(S11_QI.1)),
        format!(
            "6 QI: s11 R={S11_QI_RADIUS} (K,C)=({},{}) over {} pairs; s04 R={S04_QI_RADIUS} (K,C)=({},{}) over {} pairs",
            S11_QI.0,
            S11_QI.1,
            pairs(&s11, "qi-s11"),
            detail(&s04, "qi-s04", "k"),
            detail(&s04, "qi-s04", "c"),
            pairs(&s04, "qi-s04"),
        ),
    ));

    let s = run(Suite::Farey, None, Some(G1_RADIUS));
    lines.push((
        !failed(&s),
        format!(
            "7 G1 is the line graph of the dual tree: radius {} window, {} vertices, interior degree 4",
            detail(&s, "g1-line-graph", "rho"),
            detail(&s, "g1-line-graph", "vertices"),
        ),
    ));

    let s = run(Suite::Table1, None, Some(TABLE_RADIUS));
    let rows = detail(&s, "table1", "witnesses").as_array().map_or(0, Vec::len);
    lines.push((!failed(&s), format!("8 split relations at radius {TABLE_RADIUS}: {rows} of 10 rows witnessed, no stray edges")));

    let s = run(Suite::T1reach, None, Some(T1_RADIUS));
    let worst = detail(&s, "t1-reach", "per_class")
        .as_array()
        .and_then(|a| a.iter().map(|c| c["distance"].as_u64()).collect::<Option<Vec<_>>>())
        .and_then(|d| d.into_iter().max());
    lines.push((
        !failed(&s) && worst.is_some_and(|w| w <= T1_REACH),
        format!(
            "9 T1: every vertex of the radius-{T1_RADIUS} ball within {} <= {T1_REACH}; T1 radius-{} ball isomorphic to the s11 ball",
            worst.map_or("?".into(), |w| w.to_string()),
            detail(&s, "t1-structure", "t1_radius"),
        ),
    ));

    let s = run(Suite::Mcg, None, None);
    lines.push((
        !failed(&s),
        format!(
            "10 group action: stabilizers s11 {} s04 {}, counts s11 r<=3 {:?}, transitive, equivariant",
            detail(&s, "stabilizer-s11", "elements").as_array().map_or(0, Vec::len),
            detail(&s, "stabilizer-s04", "elements").as_array().map_or(0, Vec::len),
            (0..=3).map(|r| detail(&s, &format!("properly-discontinuous-s11-r{r}"), "count").as_u64().unwrap_or(0)).collect::<Vec<_>>(),
        ),
    ));

    let s = run(Suite::Splits, None, None);
    lines.push((
        !failed(&s),
        format!(
            "11 split totality: {} s11 and {} s04 tracks",
            detail(&s, "split-totality-s11", "tracks"),
            detail(&s, "split-totality-s04", "tracks"),
        ),
    ));

    let mut ok = true;
    for (pass, line) in &lines {
        ok &= pass;
        println!("[{}] {line}", if *pass { "PASS" } else { "FAIL" });
    }
    if !ok {
        std::process::exit(1);
    }
}
