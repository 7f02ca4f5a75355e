//! Seed tracks shipped with the crate, and the derivation that produced the
//! `S(0,4)` ones.
//!
//! The `S(1,1)` seed has branches `e, a, b` with `e = a + b` at both switches
//! and marking `a = (1, 0)`, `b = (0, 1)`, `e = (0, 0)`; its vertex cycles are
//! `0/1` and `1/0`. The `S(0,4)` seed is a class-(1) track whose marking is
//! derived from the ribbon structure and normalised so its vertex cycles are
//! again `0/1` and `1/0`, with the right split at either large branch adding
//! the mediant `1/1`.

use crate::complex::project;
use crate::error::{Error, Result};
use crate::farey::Slope;
use crate::measures::{extremal_rays_pairing, trace_curves};
use crate::splitting::{split_at_dart, Chirality};
use crate::track::{enumerate_complete, SurfaceId, TrackJson, TrainTrack};

pub const S11_SEED_JSON: &str = include_str!("../fixtures/s11_seed.json");
pub const S04_SEED_JSON: &str = include_str!("../fixtures/s04_seed.json");
pub const S04_CLASSES_JSON: &str = include_str!("../fixtures/s04_classes.json");

pub fn s11_seed() -> TrainTrack {
    TrainTrack::from_json_str(S11_SEED_JSON).expect("shipped s11 seed parses")
}

pub fn s04_seed() -> TrainTrack {
    TrainTrack::from_json_str(S04_SEED_JSON).expect("shipped s04 seed parses")
}

pub fn seed(surface: SurfaceId) -> TrainTrack {
    match surface {
        SurfaceId::S11 => s11_seed(),
        SurfaceId::S04 => s04_seed(),
    }
}

/// One marked representative per `S(0,4)` class, in class-key order.
pub fn s04_representatives() -> Vec<TrainTrack> {
    let docs: Vec<TrackJson> = serde_json::from_str(S04_CLASSES_JSON).expect("shipped s04 classes parse");
    docs.iter()
        .map(|d| TrainTrack::from_json(d).expect("shipped s04 class is valid"))
        .collect()
}

/// Class representatives of either surface with markings.
pub fn representatives(surface: SurfaceId) -> Vec<TrainTrack> {
    match surface {
        SurfaceId::S11 => vec![s11_seed()],
        SurfaceId::S04 => s04_representatives(),
    }
}

/// Traced total vectors of the two vertex cycles.
fn cycle_vectors(t: &TrainTrack) -> Result<[[i64; 2]; 2]> {
    let rays = extremal_rays_pairing(t.pairing());
    if rays.len() != 2 {
        return Err(Error::Marking(format!("{} vertex cycles", rays.len())));
    }
    let mut out = [[0; 2]; 2];
    for (i, r) in rays.iter().enumerate() {
        let cs = trace_curves(t.pairing(), t.marking(), r);
        if cs.len() != 1 {
            return Err(Error::NotSingleCurve(cs.len()));
        }
        out[i] = cs[0].vector;
    }
    Ok(out)
}

/// Changes the marking basis so the vertex cycles read `1/0` and `0/1`, then
/// reflects if needed so the right split at the first large branch produces `1/1`.
pub fn normalize_marking(t: &TrainTrack) -> Result<TrainTrack> {
    let [v1, v2] = cycle_vectors(t)?;
    let det = v1[0] * v2[1] - v1[1] * v2[0];
    if det.abs() != 1 {
        return Err(Error::Marking(format!("vertex cycles have det {det}, expected 1")));
    }
    let inv = [v2[1] * det, -v2[0] * det, -v1[1] * det, v1[0] * det];
    let based = t.with_marking(t.marking().transform(inv))?;
    let large = based
        .large_darts()
        .first()
        .copied()
        .ok_or_else(|| Error::Marking("no large branch to orient by".into()))?;
    let (right, _) = split_at_dart(&based, large, Chirality::Right);
    let edge = project(&right)?;
    let one = Slope::new(1, 1)?;
    let minus_one = Slope::new(-1, 1)?;
    if edge.contains(one) {
        Ok(based)
    } else if edge.contains(minus_one) {
        based.with_marking(based.marking().transform([1, 0, 0, -1]))
    } else {
        Err(Error::Marking(format!("right split projects to {edge}, not next to the base edge")))
    }
}

/// The class-(1) `S(0,4)` track: two large branches and vertex cycles at det 1.
pub fn derive_s04_seed() -> Result<TrainTrack> {
    let reps = enumerate_complete(SurfaceId::S04);
    let mut found = reps.into_iter().filter(|t| {
        t.large_darts().len() == 2
            && cycle_vectors(t).is_ok_and(|[a, b]| (a[0] * b[1] - a[1] * b[0]).abs() == 1)
    });
    let t = found
        .next()
        .ok_or_else(|| Error::Marking("no class with two large branches at det 1".into()))?;
    if found.next().is_some() {
        return Err(Error::Marking("class (1) is not unique".into()));
    }
    normalize_marking(&t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::slope_pair;

    #[test]
    fn s11_seed_cycles() {
        let t = s11_seed();
        assert!(t.is_complete());
        assert_eq!(slope_pair(&t).unwrap(), (Slope::ZERO, Slope::INFINITY));
    }

    #[test]
    fn shipped_s04_fixtures_match_derivation() {
        let derived = derive_s04_seed().unwrap();
        assert_eq!(s04_seed().to_json(), derived.to_json());
        let reps: Vec<TrackJson> = enumerate_complete(SurfaceId::S04).iter().map(TrainTrack::to_json).collect();
        let shipped: Vec<TrackJson> = s04_representatives().iter().map(TrainTrack::to_json).collect();
        assert_eq!(shipped, reps);
    }

    #[test]
    fn s04_seed_cycles() {
        let t = s04_seed();
        assert!(t.is_complete());
        assert_eq!(slope_pair(&t).unwrap(), (Slope::ZERO, Slope::INFINITY));
        assert_eq!(t.large_darts().len(), 2);
    }

    /// Writes the derived fixtures into `fixtures/`. Run with `--ignored` after
    /// changing the derivation.
    #[test]
    #[ignore]
    fn regenerate_fixtures() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        let seed = derive_s04_seed().unwrap();
        std::fs::write(format!("{dir}/s04_seed.json"), seed.to_json_string() + "\n").unwrap();
        let reps: Vec<TrackJson> = enumerate_complete(SurfaceId::S04).iter().map(TrainTrack::to_json).collect();
        std::fs::write(
            format!("{dir}/s04_classes.json"),
            serde_json::to_string_pretty(&reps).unwrap() + "\n",
        )
        .unwrap();
    }
}
