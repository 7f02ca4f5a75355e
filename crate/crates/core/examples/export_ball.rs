// A small ball of the S(0,4) complex as JSON and its Farey image as DOT.

use ttgeo::complex::{build_ball, project_fibers};
use ttgeo::fixtures::s04_seed;
use ttgeo::graph::{export, Format};

pub fn run() -> anyhow::Result<()> {
    let ball = build_ball(&s04_seed(), 2)?;
    let (g, ann) = ball.labelled();
    println!("{}", export(&g, Format::Json, Some(&ann))?);
    let (_, image) = project_fibers(&ball);
    print!("{}", export(&image, Format::Dot, None)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
