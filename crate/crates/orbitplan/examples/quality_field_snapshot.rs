//! Render the perception-quality field around a pair of targets.
//!
//! Samples the combined observation quality (best face per target, summed
//! over targets) on a planar grid in the equatorial plane and prints an
//! ASCII heat map. Points inside the Earth are masked. The same field is
//! what `orbitplan field` writes as CSV and SVG.
//!
//! Run with: `cargo run --example quality_field_snapshot`

use orbitplan::astro::{kepler_to_state, Constants, KeplerianElements};
use orbitplan::perception::{
    planar_grid, quality_field, FaceSet, FrameMode, QualityWeights, SensorModel,
};
use orbitplan::Vec3;

fn main() {
    let c = Constants::default();
    let faces = FaceSet::new(vec![Vec3::y(), -Vec3::y()], FrameMode::Lvlh).expect("unit normals");
    let snapshot = |nu_deg: f64| {
        let el = KeplerianElements {
            a: 8200.0,
            e: 0.0,
            inc: 0.0,
            raan: 0.0,
            argp: 0.0,
            nu: nu_deg.to_radians(),
        };
        kepler_to_state(&el, &c).expect("valid elements")
    };
    let t1 = snapshot(0.0);
    let t2 = snapshot(150.0);
    let targets = [(t1, &faces), (t2, &faces)];

    let (nx, ny, extent) = (48, 24, 12000.0);
    let points = planar_grid(nx, ny, extent);
    let sun = Vec3::x(); // sunlight travels toward -x
    let samples = quality_field(
        &targets,
        &SensorModel::default(),
        &sun,
        &c,
        &QualityWeights::default(),
        &points,
    )
    .expect("field evaluation");

    let peak = samples.iter().filter_map(|s| s.value).fold(0.0_f64, f64::max);
    println!("field peak value: {peak:.4}");
    println!("('#' >= 80% of peak, '+' >= 50%, '-' >= 20%, '.' below, 'E' inside Earth)");
    for iy in (0..ny).rev() {
        let row: String = (0..nx)
            .map(|ix| match samples[iy * nx + ix].value {
                None => 'E',
                Some(v) if v >= 0.8 * peak => '#',
                Some(v) if v >= 0.5 * peak => '+',
                Some(v) if v >= 0.2 * peak => '-',
                _ => '.',
            })
            .collect();
        println!("{row}");
    }
    println!("grid: {nx}x{ny}, extent +/-{extent} km, targets at 8200 km (nu = 0 and 150 deg)");
}
