// Complete train tracks of both surfaces, up to relabelling and mirror.

use ttgeo::complex::class_table;
use ttgeo::SurfaceId;

pub fn run() -> anyhow::Result<()> {
    for s in [SurfaceId::S11, SurfaceId::S04] {
        let table = class_table(s);
        let amph = table.iter().filter(|c| c.amphichiral).count();
        println!("{s}: {} classes, {amph} amphichiral", table.len());
        for c in &table {
            println!(
                "  {} switches={} branches={} large={}{}",
                c.key,
                c.switches,
                c.branches,
                c.large_branches,
                if c.amphichiral { " (amphichiral)" } else { "" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
