//! Linear constraint rows over the parameter vector.

use super::{ConstraintError, ParamVector, TrailingGroup, BLOCK, IDX_INC, IDX_NU, IDX_RAAN};
use serde::{Deserialize, Serialize};

/// One dense row `coeffs . p (= | <=) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl LinearRow {
    pub fn residual(&self, p: &ParamVector) -> f64 {
        self.coeffs.iter().zip(&p.0).map(|(c, x)| c * x).sum::<f64>() - self.rhs
    }

    /// Sparse rendering, e.g. `+1*p[3] -1*p[9]`.
    pub fn describe(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| format!("{c:+}*p[{i}]"))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" ")
        }
    }

    pub fn nonzeros(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != 0.0).count()
    }
}

fn unit_row(dim: usize, index: usize, rhs: f64) -> LinearRow {
    let mut coeffs = vec![0.0; dim];
    coeffs[index] = 1.0;
    LinearRow { coeffs, rhs }
}

fn check_agent(j: usize, m: usize) -> Result<(), ConstraintError> {
    if j == 0 || j > m {
        return Err(ConstraintError::AgentOutOfRange { index: j, m });
    }
    Ok(())
}

/// Five equality rows forcing agents j1 and j2 (1-based) onto the same
/// geometric orbit: their first five block elements agree, nu stays free.
pub fn co_orbital(j1: usize, j2: usize, m: usize) -> Result<Vec<LinearRow>, ConstraintError> {
    check_agent(j1, m)?;
    check_agent(j2, m)?;
    if j1 == j2 {
        return Err(ConstraintError::DuplicateAgent(j1));
    }
    let dim = BLOCK * m;
    Ok((0..BLOCK - 1)
        .map(|el| {
            let mut coeffs = vec![0.0; dim];
            coeffs[(j1 - 1) * BLOCK + el] = 1.0;
            coeffs[(j2 - 1) * BLOCK + el] = -1.0;
            LinearRow { coeffs, rhs: 0.0 }
        })
        .collect())
}

/// Uniform trailing spacing: m_o - 1 equalities
/// `nu_{j_{r+1}} - nu_{j_r} = 360 / m_o` degrees plus the inequality
/// `nu_{j_1} <= 360 / m_o`.
pub fn trailing_spacing(
    group: &TrailingGroup,
    m: usize,
) -> Result<(Vec<LinearRow>, LinearRow), ConstraintError> {
    group.validate(m)?;
    let dim = BLOCK * m;
    let gap = 360.0 / group.members.len() as f64;
    let eqs = group
        .members
        .windows(2)
        .map(|pair| {
            let mut coeffs = vec![0.0; dim];
            coeffs[(pair[0] - 1) * BLOCK + IDX_NU] = -1.0;
            coeffs[(pair[1] - 1) * BLOCK + IDX_NU] = 1.0;
            LinearRow { coeffs, rhs: gap }
        })
        .collect();
    let ineq = unit_row(dim, (group.members[0] - 1) * BLOCK + IDX_NU, gap);
    Ok((eqs, ineq))
}

/// Named orbit families pinning elements by unit-row selectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "family")]
pub enum OrbitFamily {
    /// raan = 0 and inc = 0.
    Equatorial,
    /// inc = 90 degrees.
    Polar,
    /// Arbitrary pinned block elements: (block index 0..6, value) pairs.
    Custom { pinned: Vec<(usize, f64)> },
}

/// Unit-row equalities pinning the orbit family of 1-based agent j.
pub fn orbit_type_equalities(
    family: &OrbitFamily,
    j: usize,
    m: usize,
) -> Result<Vec<LinearRow>, ConstraintError> {
    check_agent(j, m)?;
    let dim = BLOCK * m;
    let base = (j - 1) * BLOCK;
    match family {
        OrbitFamily::Equatorial => Ok(vec![
            unit_row(dim, base + IDX_RAAN, 0.0),
            unit_row(dim, base + IDX_INC, 0.0),
        ]),
        OrbitFamily::Polar => Ok(vec![unit_row(dim, base + IDX_INC, 90.0)]),
        OrbitFamily::Custom { pinned } => {
            for (el, _) in pinned {
                if *el >= BLOCK {
                    return Err(ConstraintError::UnknownFamily(format!(
                        "custom pin index {el} out of block range"
                    )));
                }
            }
            Ok(pinned.iter().map(|(el, v)| unit_row(dim, base + el, *v)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn co_orbital_two_agent_pattern() {
        // For m = 2 the stacked rows realize [I5 0 | -I5 0].
        let rows = co_orbital(1, 2, 2).unwrap();
        assert_eq!(rows.len(), 5);
        for (el, row) in rows.iter().enumerate() {
            assert_eq!(row.nonzeros(), 2);
            assert_eq!(row.coeffs[el], 1.0);
            assert_eq!(row.coeffs[BLOCK + el], -1.0);
            assert_eq!(row.rhs, 0.0);
        }
        // nu columns (5 and 11) untouched.
        assert!(rows.iter().all(|r| r.coeffs[5] == 0.0 && r.coeffs[11] == 0.0));
    }

    #[test]
    fn co_orbital_residuals() {
        let rows = co_orbital(1, 2, 2).unwrap();
        let same = ParamVector(vec![
            8000.0, 0.1, 10.0, 20.0, 5.0, 0.0, 8000.0, 0.1, 10.0, 20.0, 5.0, 180.0,
        ]);
        assert!(rows.iter().all(|r| r.residual(&same) == 0.0));
        let mut off = same.clone();
        off.0[6] = 8100.0;
        let residuals: Vec<f64> = rows.iter().map(|r| r.residual(&off)).collect();
        assert_eq!(residuals[0], -100.0);
        assert!(residuals[1..].iter().all(|&r| r == 0.0));
    }

    #[test]
    fn co_orbital_index_checks() {
        assert!(co_orbital(1, 3, 2).is_err());
        assert!(co_orbital(0, 1, 2).is_err());
        assert!(co_orbital(2, 2, 2).is_err());
    }

    #[test]
    fn trailing_two_agents() {
        let group = TrailingGroup { members: vec![1, 2] };
        let (eqs, ineq) = trailing_spacing(&group, 2).unwrap();
        assert_eq!(eqs.len(), 1);
        // nu_2 - nu_1 = 180.
        assert_eq!(eqs[0].coeffs[IDX_NU], -1.0);
        assert_eq!(eqs[0].coeffs[BLOCK + IDX_NU], 1.0);
        assert_eq!(eqs[0].rhs, 180.0);
        // nu_1 <= 180.
        assert_eq!(ineq.coeffs[IDX_NU], 1.0);
        assert_eq!(ineq.rhs, 180.0);
        assert_eq!(ineq.nonzeros(), 1);
    }

    #[test]
    fn trailing_three_agents() {
        let group = TrailingGroup { members: vec![1, 2, 3] };
        let (eqs, _) = trailing_spacing(&group, 3).unwrap();
        assert_eq!(eqs.len(), 2);
        assert!(eqs.iter().all(|r| r.rhs == 120.0));
    }

    #[test]
    fn trailing_uniform_point_is_feasible() {
        let group = TrailingGroup { members: vec![1, 2, 3] };
        let (eqs, ineq) = trailing_spacing(&group, 3).unwrap();
        let mut p = ParamVector(vec![0.0; 18]);
        p.0[IDX_NU] = 40.0;
        p.0[BLOCK + IDX_NU] = 160.0;
        p.0[2 * BLOCK + IDX_NU] = 280.0;
        assert!(eqs.iter().all(|r| r.residual(&p) == 0.0));
        assert!(ineq.residual(&p) <= 0.0);
    }

    #[test]
    fn equatorial_selector_rows() {
        let rows = orbit_type_equalities(&OrbitFamily::Equatorial, 1, 2).unwrap();
        assert_eq!(rows.len(), 2);
        // Pins elements 3 (raan) and 5 (inc) of block 1 (1-based positions).
        assert_eq!(rows[0].coeffs[IDX_RAAN], 1.0);
        assert_eq!(rows[1].coeffs[IDX_INC], 1.0);
        assert!(rows.iter().all(|r| r.rhs == 0.0 && r.nonzeros() == 1));
    }

    #[test]
    fn polar_pins_inclination() {
        let rows = orbit_type_equalities(&OrbitFamily::Polar, 2, 2).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].coeffs[BLOCK + IDX_INC], 1.0);
        assert_eq!(rows[0].rhs, 90.0);
    }

    #[test]
    fn custom_empty_is_empty() {
        let rows = orbit_type_equalities(&OrbitFamily::Custom { pinned: vec![] }, 1, 1).unwrap();
        assert!(rows.is_empty());
        assert!(orbit_type_equalities(&OrbitFamily::Custom { pinned: vec![(9, 1.0)] }, 1, 1)
            .is_err());
    }
}
