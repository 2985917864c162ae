//! Scenario files: presets, canonical JSON, validation, constraint audit.
//!
//! Saves a built-in preset to a temporary directory, loads it back, shows
//! that the canonical form is byte-stable, then demonstrates what the
//! validator reports for a broken document and dumps the compiled
//! constraint set.
//!
//! Run with: `cargo run --example scenario_roundtrip`

use orbitplan::scenario::{load, presets, validate};

fn main() {
    let dir = std::env::temp_dir().join("orbitplan-scenario-roundtrip");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("scenario.json");

    let scenario = presets::build("illustrative-coorbital").expect("built-in preset");
    scenario.save(&path).expect("save");
    let loaded = load(&path).expect("load");
    assert_eq!(scenario.to_canonical_json(), loaded.to_canonical_json());
    println!("saved + reloaded {:?}: canonical JSON is byte-identical", path);
    println!("scenario '{}': {} targets, {} agents, seed {}", loaded.name, loaded.targets.len(), loaded.agent_count(), loaded.seed);
    println!();

    // Break the document and show the validator's report.
    let mut broken = scenario.clone();
    broken.sun_unit = [3.0, 0.0, 0.0]; // not a unit vector
    broken.agents.bounds.lower[0] = 9000.0; // lower > upper
    let violations = validate(&broken);
    assert!(!violations.is_empty(), "the broken scenario must not validate");
    println!("validator findings for the broken copy:");
    for v in violations {
        println!("  {}: {}", v.path, v.message);
    }
    println!();

    println!("compiled constraint set of the co-orbital preset:");
    print!("{}", loaded.constraint_set().expect("compiles").dump());
}
