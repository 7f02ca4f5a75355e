// Measure cones, extremal rays and the slopes they carry.

use ttgeo::fixtures::{representatives, s11_seed};
use ttgeo::measures::{extremal_rays, measure_cone, slope_pair, vertex_cycles};
use ttgeo::SurfaceId;

pub fn run() -> anyhow::Result<()> {
    let t = s11_seed();
    println!("s11 seed cone has dimension {}", measure_cone(&t).dimension());
    for m in extremal_rays(&t) {
        println!("  ray {:?}", m.primitive());
    }
    for c in vertex_cycles(&t)? {
        println!("  cycle {:?} has slope {}", c.weights, c.slope);
    }

    for t in representatives(SurfaceId::S04) {
        let (a, b) = slope_pair(&t)?;
        println!("{} carries {a} and {b} (det {})", t.class_key(), a.det_abs(b));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
