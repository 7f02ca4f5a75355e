// Splitting a large branch both ways, and transferring a measure.

use ttgeo::fixtures::s11_seed;
use ttgeo::measures::{slope_pair, TransverseMeasure};
use ttgeo::splitting::{large_branches, neighbors, split_at_dart, Chirality};

pub fn run() -> anyhow::Result<()> {
    let t = s11_seed();
    println!("large branches: {:?}", large_branches(&t));
    let dart = t.large_darts()[0];
    for c in Chirality::BOTH {
        let (s, transfer) = split_at_dart(&t, dart, c);
        let (a, b) = slope_pair(&s)?;
        // a measure on the split track pushes forward to one on the original
        let pushed = transfer.apply(&TransverseMeasure::from_integers(&[1, 1, 1]));
        println!("{c}: complete={} slopes {a} {b}, (1,1,1) maps to {:?}", s.is_complete(), pushed.primitive());
    }
    for n in neighbors(&t) {
        println!("neighbour by {}: {}", n.mv.chirality, n.key);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
