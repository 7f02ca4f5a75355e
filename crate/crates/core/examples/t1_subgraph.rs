// Class-(1) tracks of S(0,4) joined by double splits look like the S(1,1) complex.

use ttgeo::complex::{build_ball, derive_class_labels, distance_to_class, t1_subgraph, truncate};
use ttgeo::fixtures::{s04_representatives, s04_seed, s11_seed};
use ttgeo::graph::rooted_isomorphism;

pub fn run() -> anyhow::Result<()> {
    let one = derive_class_labels(&s04_representatives())?.class_one();
    let ball = build_ball(&s04_seed(), 6)?;
    let t1 = t1_subgraph(&ball, &one)?;
    let root = t1.index_of(&0).expect("the seed has class (1)");
    let (inner, r) = truncate(&t1, root, 3);
    let s11 = build_ball(&s11_seed(), 3)?;
    println!("T1 ball: {} vertices; S(1,1) ball: {}", inner.len(), s11.len());
    println!("isomorphic: {}", rooted_isomorphism(&inner, r, &s11.graph, 0).is_some());
    for t in s04_representatives() {
        println!("  {} is {:?} splits from class (1)", t.class_key(), distance_to_class(&t, &one, 8));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
