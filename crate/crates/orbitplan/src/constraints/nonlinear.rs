//! Nonlinear constraint residuals over the parameter vector.

use super::{ConstraintError, ParamVector, IDX_A, IDX_ARGP, IDX_E, IDX_INC};
use crate::astro::{frozen_eccentricity, sso_precession_rate, Constants, FrozenForm};

/// A single nonlinear residual. Equalities want residual = 0, inequalities
/// residual <= 0.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearConstraint {
    /// R_E + c_min - a_j (1 - e_j) <= 0.
    AltitudeMin { agent: usize, c_min_km: f64 },
    /// a_j (1 - e_j) - R_E - c_max <= 0.
    AltitudeMax { agent: usize, c_max_km: f64 },
    /// (precession_rate(a_j, e_j, inc_j) - target) / target = 0, scaled by
    /// the target rate so the residual is O(1).
    SsoRate { agent: usize },
    /// argp_j - argp_deg = 0 (90 or 270 by configuration).
    FrozenArgp { agent: usize, argp_deg: f64 },
    /// e_j - frozen_eccentricity(a_j, inc_j) = 0.
    FrozenEcc { agent: usize, form: FrozenForm },
}

impl NonlinearConstraint {
    pub fn is_equality(&self) -> bool {
        !matches!(
            self,
            NonlinearConstraint::AltitudeMin { .. } | NonlinearConstraint::AltitudeMax { .. }
        )
    }

    pub fn label(&self) -> String {
        match self {
            NonlinearConstraint::AltitudeMin { agent, c_min_km } => {
                format!("altitude_min(agent {agent}, {c_min_km} km)")
            }
            NonlinearConstraint::AltitudeMax { agent, c_max_km } => {
                format!("altitude_max(agent {agent}, {c_max_km} km)")
            }
            NonlinearConstraint::SsoRate { agent } => format!("sso_rate(agent {agent})"),
            NonlinearConstraint::FrozenArgp { agent, argp_deg } => {
                format!("frozen_argp(agent {agent}, {argp_deg} deg)")
            }
            NonlinearConstraint::FrozenEcc { agent, .. } => format!("frozen_ecc(agent {agent})"),
        }
    }

    pub fn residual(&self, p: &ParamVector, c: &Constants) -> Result<f64, ConstraintError> {
        let check = |j: usize| -> Result<(), ConstraintError> {
            let m = p.agent_count();
            if j == 0 || j > m {
                return Err(ConstraintError::AgentOutOfRange { index: j, m });
            }
            Ok(())
        };
        match *self {
            NonlinearConstraint::AltitudeMin { agent, c_min_km } => {
                check(agent)?;
                let b = p.block(agent);
                Ok(c.r_earth_km + c_min_km - b[IDX_A] * (1.0 - b[IDX_E]))
            }
            NonlinearConstraint::AltitudeMax { agent, c_max_km } => {
                check(agent)?;
                let b = p.block(agent);
                Ok(b[IDX_A] * (1.0 - b[IDX_E]) - c.r_earth_km - c_max_km)
            }
            NonlinearConstraint::SsoRate { agent } => {
                check(agent)?;
                let b = p.block(agent);
                let rate =
                    sso_precession_rate(b[IDX_A], b[IDX_E], b[IDX_INC].to_radians(), c)?;
                Ok((rate - c.sso_rate_rad_s) / c.sso_rate_rad_s)
            }
            NonlinearConstraint::FrozenArgp { agent, argp_deg } => {
                check(agent)?;
                Ok(p.block(agent)[IDX_ARGP] - argp_deg)
            }
            NonlinearConstraint::FrozenEcc { agent, form } => {
                check(agent)?;
                let b = p.block(agent);
                let e_frozen = frozen_eccentricity(b[IDX_A], b[IDX_INC].to_radians(), form, c)?;
                Ok(b[IDX_E] - e_frozen)
            }
        }
    }
}

/// Minimum-perigee-altitude inequality for 1-based agent j.
pub fn altitude_min(agent: usize, c_min_km: f64) -> NonlinearConstraint {
    NonlinearConstraint::AltitudeMin { agent, c_min_km }
}

/// Maximum-perigee-altitude inequality for 1-based agent j.
pub fn altitude_max(agent: usize, c_max_km: f64) -> NonlinearConstraint {
    NonlinearConstraint::AltitudeMax { agent, c_max_km }
}

/// Sun-synchronous precession equality for 1-based agent j.
pub fn sso_residual(agent: usize) -> NonlinearConstraint {
    NonlinearConstraint::SsoRate { agent }
}

/// The two frozen-orbit equalities for 1-based agent j.
pub fn frozen_residuals(agent: usize, argp_deg: f64, form: FrozenForm) -> [NonlinearConstraint; 2] {
    [
        NonlinearConstraint::FrozenArgp { agent, argp_deg },
        NonlinearConstraint::FrozenEcc { agent, form },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Constants {
        Constants::default()
    }

    fn param(block: [f64; 6]) -> ParamVector {
        ParamVector(block.to_vec())
    }

    #[test]
    fn altitude_min_arithmetic() {
        let nc = altitude_min(1, 300.0);
        let sat = param([7000.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(nc.residual(&sat, &c()).unwrap(), -329.0);
        let boundary = param([6671.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(nc.residual(&boundary, &c()).unwrap(), 0.0);
        let violated = param([8000.0, 0.2, 0.0, 0.0, 0.0, 0.0]);
        assert!((nc.residual(&violated, &c()).unwrap() - 271.0).abs() < 1e-9);
    }

    #[test]
    fn altitude_max_sign() {
        let nc = altitude_max(1, 1000.0);
        let ok = param([7000.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(nc.residual(&ok, &c()).unwrap() < 0.0);
        let high = param([7500.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(nc.residual(&high, &c()).unwrap() > 0.0);
    }

    #[test]
    fn sso_residual_on_and_off_surface() {
        let nc = sso_residual(1);
        let on = param([7171.0, 0.0, 0.0, 0.0, 98.594, 0.0]);
        assert!(nc.residual(&on, &c()).unwrap().abs() < 1e-3);
        // Polar orbit: zero rate, scaled residual -1.
        let polar = param([7171.0, 0.0, 0.0, 0.0, 90.0, 0.0]);
        assert!((nc.residual(&polar, &c()).unwrap() + 1.0).abs() < 1e-12);
        // Residual sign flips across the design inclination.
        let low = param([7171.0, 0.0, 0.0, 0.0, 95.0, 0.0]);
        let high = param([7171.0, 0.0, 0.0, 0.0, 105.0, 0.0]);
        let r_low = nc.residual(&low, &c()).unwrap();
        let r_high = nc.residual(&high, &c()).unwrap();
        assert!(r_low * r_high < 0.0, "r_low = {r_low}, r_high = {r_high}");
    }

    #[test]
    fn frozen_pair_residuals() {
        let [argp_c, ecc_c] = frozen_residuals(1, 90.0, FrozenForm::Paper);
        let mut block = [7171.0, 0.0, 0.0, 90.0, 98.594, 0.0];
        let e_star =
            frozen_eccentricity(7171.0, 98.594_f64.to_radians(), FrozenForm::Paper, &c()).unwrap();
        block[IDX_E] = e_star;
        let p = param(block);
        assert_eq!(argp_c.residual(&p, &c()).unwrap(), 0.0);
        assert!(ecc_c.residual(&p, &c()).unwrap().abs() < 1e-10);

        let mut wrong = block;
        wrong[IDX_ARGP] = 180.0;
        assert_eq!(argp_c.residual(&param(wrong), &c()).unwrap(), 90.0);
    }

    #[test]
    fn residual_is_pure() {
        let nc = sso_residual(1);
        let p = param([7171.0, 0.01, 5.0, 90.0, 98.0, 10.0]);
        let r1 = nc.residual(&p, &c()).unwrap();
        let r2 = nc.residual(&p, &c()).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn agent_index_checked() {
        let nc = sso_residual(2);
        let p = param([7171.0, 0.0, 0.0, 0.0, 98.0, 0.0]);
        assert!(matches!(
            nc.residual(&p, &c()),
            Err(ConstraintError::AgentOutOfRange { .. })
        ));
    }
}
