// The S(1,1) complex near the seed is the Cayley graph of PSL(2, Z).

use ttgeo::complex::{build_ball, cayley_ball_psl2z, verify_cayley_isomorphism};
use ttgeo::fixtures::s11_seed;

pub fn run() -> anyhow::Result<()> {
    let radius = 5;
    let ball = build_ball(&s11_seed(), radius)?;
    let (cayley, root) = cayley_ball_psl2z(radius);
    println!("ball spheres {:?}", ball.sphere_sizes());
    println!("ball {} vertices / {} edges, cayley {} / {}", ball.len(), ball.graph.edge_count(), cayley.len(), cayley.edge_count());
    match verify_cayley_isomorphism(&ball, &cayley, root) {
        Some(phi) => println!("isomorphic; the seed's neighbours map to {:?}", ball.graph.neighbors(0).iter().map(|&v| cayley.label(phi[v]).to_string()).collect::<Vec<_>>()),
        None => println!("not isomorphic"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
