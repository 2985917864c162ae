//! Design sun-synchronous and frozen orbits across a low-altitude band.
//!
//! For each altitude in 300..=1000 km the example solves for the inclination
//! whose nodal precession matches the sun-synchronous rate, then finds the
//! frozen eccentricity that cancels the secular perigee drift at that
//! inclination (both forms of the frozen relation are shown).
//!
//! Run with: `cargo run --example sun_sync_frozen_design`

use orbitplan::astro::{frozen_eccentricity, sso_inclination_for, sso_precession_rate, Constants, FrozenForm};

fn main() {
    let c = Constants::default();
    println!("target nodal precession rate: {:.6e} rad/s", c.sso_rate_rad_s);
    println!();
    println!("altitude   a [km]    SSO inc [deg]   rate residual    e_frozen (paper)  e_frozen (standard)");
    for alt_km in (300..=1000).step_by(100) {
        let a = c.r_earth_km + alt_km as f64;
        let inc = sso_inclination_for(a, 0.0, &c).expect("feasible SSO");
        let rate = sso_precession_rate(a, 0.0, inc, &c).expect("valid orbit");
        let e_paper = frozen_eccentricity(a, inc, FrozenForm::Paper, &c).expect("converges");
        let e_std = frozen_eccentricity(a, inc, FrozenForm::Standard, &c).expect("converges");
        println!(
            "{alt_km:>5} km  {a:8.1}     {:9.4}      {:+.2e}        {e_paper:.6}          {e_std:.6}",
            inc.to_degrees(),
            rate - c.sso_rate_rad_s,
        );
    }
    println!();
    println!("The paper-form eccentricity satisfies e = -(J2/J3) sin(i) / (2 a (1 - e^2));");
    println!("the standard form is the textbook e = -J3 R_E sin(i) / (2 J2 a).");
}
