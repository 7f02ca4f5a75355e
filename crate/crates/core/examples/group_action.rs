// Matrices acting on tracks, stabilizers and orbit counts.

use ttgeo::action::{stabilizer_in_model, verify_properly_discontinuous, MappingClass};
use ttgeo::complex::build_ball;
use ttgeo::fixtures::{s04_seed, s11_seed};
use ttgeo::measures::slope_pair;
use ttgeo::{Psl2, SurfaceId};

pub fn run() -> anyhow::Result<()> {
    let g = MappingClass::new("2,1;1,1".parse::<Psl2>()?);
    let t = s11_seed();
    println!("slopes {:?} move to {:?}", slope_pair(&t)?, slope_pair(&g.act_on_track(&t))?);

    for (s, t) in [(SurfaceId::S11, s11_seed()), (SurfaceId::S04, s04_seed())] {
        let stab = stabilizer_in_model(s, &t, 6);
        let names: Vec<String> = stab.elements.iter().map(ToString::to_string).collect();
        println!("{s} stabilizer of order {}: {names:?}", stab.order());
    }

    let ball = build_ball(&s11_seed(), 4)?;
    for r in 0..=3 {
        let rep = verify_properly_discontinuous(&ball, r, 12, 4);
        println!("elements moving the seed at most {r}: {}", rep.details["count"]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
