//! The finite letter-exchange part `C` of the symmetry group `ℤ^d × C`.

use crate::analysis::require_primitive_aperiodic;
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::perm::{centralizer_of_set, OrderFingerprint, PermGroup, Permutation};
use crate::subst::Substitution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryChecks {
    pub free_action: bool,
    pub divides_alphabet: bool,
    pub equal_orbits: bool,
}

impl SymmetryChecks {
    pub fn all_hold(&self) -> bool {
        self.free_action && self.divides_alphabet && self.equal_orbits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub n_power: usize,
    pub generators: Vec<Permutation>,
    pub group: PermGroup,
    pub fingerprint: OrderFingerprint,
    pub checks: SymmetryChecks,
}

/// Centralizer in `S_n` of the structure group `G^(N)`.
pub fn letter_exchange_group(s: &Substitution, bounds: &Bounds) -> Result<SymmetryReport> {
    let (prim, _) = require_primitive_aperiodic(s, bounds)?;
    let group = centralizer_of_set(&prim.generators, bounds.brute_degree)?;
    let checks = structural_checks(&group, s.n());
    Ok(SymmetryReport {
        n_power: prim.n_power,
        generators: prim.generators,
        fingerprint: group.fingerprint(),
        group,
        checks,
    })
}

fn structural_checks(group: &PermGroup, n: usize) -> SymmetryChecks {
    SymmetryChecks {
        free_action: group.acts_freely(),
        divides_alphabet: n.is_multiple_of(group.order()),
        equal_orbits: group.orbits().iter().all(|o| o.len() == group.order()),
    }
}

/// Re-derives the checks and reports the first violated one.
pub fn validate_symmetry_group(report: &SymmetryReport, n: usize) -> Result<SymmetryChecks> {
    let checks = structural_checks(&report.group, n);
    if !checks.free_action {
        return Err(Error::ViolationDetected("a non-identity letter exchange fixes a letter".into()));
    }
    if !checks.divides_alphabet {
        return Err(Error::ViolationDetected(format!("|C| = {} does not divide {n}", report.group.order())));
    }
    if !checks.equal_orbits {
        return Err(Error::ViolationDetected("orbits of C have unequal sizes".into()));
    }
    Ok(checks)
}
