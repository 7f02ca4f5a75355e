// Projection to the Farey graph: fibres and the distance inequalities.

use ttgeo::complex::{build_ball, g1_neighbors, verify_fibers, verify_qi};
use ttgeo::fixtures::s11_seed;

pub fn run() -> anyhow::Result<()> {
    let ball = build_ball(&s11_seed(), 6)?;
    let fibers = verify_fibers(&ball, Some((2, 3)))?;
    println!("fibres: passed={} size={} diameter={}", fibers.passed, fibers.details["fiber_size"], fibers.details["fiber_diameter"]);
    let qi = verify_qi(&ball, 4, 3, &g1_neighbors);
    println!("d_G1 <= d_TT <= 4 d_G1 + 3 over {} certified pairs: {}", qi.certified_pairs, qi.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
