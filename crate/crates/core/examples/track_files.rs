// Reading a track with arbitrary half-branch ids, and its canonical key.
// Marking vectors are keyed by branch position in `pairing`.

use ttgeo::TrainTrack;

const TRACK: &str = r#"{
  "surface": "s11",
  "switches": [{"L": 10, "S1": 11, "S2": 12}, {"L": 20, "S1": 21, "S2": 22}],
  "pairing": [[10, 20], [11, 21], [12, 22]],
  "marking": {"1": [0, 1], "2": [1, 0]}
}"#;

pub fn run() -> anyhow::Result<()> {
    let t = TrainTrack::from_json_str(TRACK)?;
    println!("complete: {}, recurrent: {}", t.is_complete(), t.is_recurrent());
    println!("class key {}", t.class_key());
    println!("canonical key {}", t.canonical_key());
    println!("mirror key {}", t.mirror().canonical_key());
    println!("{}", t.to_json_string());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
