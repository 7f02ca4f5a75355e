// Labelling the S(0,4) classes by how their splits move the projection.

use ttgeo::complex::{build_ball, derive_class_labels, verify_split_relations, SPLIT_RELATIONS};
use ttgeo::fixtures::{s04_representatives, s04_seed};

pub fn run() -> anyhow::Result<()> {
    let labels = derive_class_labels(&s04_representatives())?;
    for (k, l) in &labels.labels {
        println!("({l}) {k}");
    }
    println!("amphichiral labels {:?}", labels.amphichiral);
    for (a, b, r) in SPLIT_RELATIONS {
        println!("  ({a}) -> ({b}): {r:?}");
    }
    let ball = build_ball(&s04_seed(), 4)?;
    let report = verify_split_relations(&ball, &labels);
    println!("{} split edges checked, passed={}", report.certified_pairs, report.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
