// Slopes, Farey edges, a Farey ball and its dual tree.

use ttgeo::farey::{dual_tree, farey_ball, intersection_number, resolve_i4_to_edge};
use ttgeo::graph::{export, Format};
use ttgeo::{FareyEdge, Slope, SurfaceId};

pub fn run() -> anyhow::Result<()> {
    let a: Slope = "2/3".parse()?;
    let b = Slope::new(-1, -1)?;
    println!("{a} and {b}: det {}", a.det_abs(b));
    println!("on s04 they meet {} times", intersection_number(SurfaceId::S04, a, b));
    println!("det-2 pair 1/1, -1/1 resolves to {}", resolve_i4_to_edge(Slope::new(1, 1)?, Slope::new(-1, 1)?)?);

    let base = FareyEdge::base();
    for e in base.triangle_neighbors() {
        println!("  {base} borders {e}");
    }

    let f = farey_ball(3)?;
    let dual = dual_tree(&f);
    println!("depth 3: {} slopes, {} edges, {} triangles", f.vertices.len(), f.edges.len(), dual.len());
    print!("{}", export(&f.to_graph(), Format::Dot, None)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
