//! Primitivity and aperiodicity decisions.

use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::perm::{closure, PermGroup, Permutation};
use crate::subst::{Patch, Substitution};

/// Least `N` such that some column satisfies `ϱ_j^N = id`.
pub fn min_identity_power(s: &Substitution) -> usize {
    s.columns().iter().map(Permutation::order).min().expect("shapes are non-empty")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityVerdict {
    pub primitive: bool,
    pub n_power: usize,
    /// Distinct columns of `ϱ^N`, which generate the structure group.
    pub generators: Vec<Permutation>,
    /// Orbit of the first letter under the structure group.
    pub orbit: Vec<usize>,
}

impl PrimitivityVerdict {
    pub fn structure_group(&self, degree: usize, bounds: &Bounds) -> Result<PermGroup> {
        closure(degree, &self.generators, bounds.brute_degree)
    }
}

pub fn is_primitive(s: &Substitution) -> PrimitivityVerdict {
    let n_power = min_identity_power(s);
    let generators = s.distinct_power_columns(n_power);
    let mut orbit = vec![0usize];
    let mut seen = vec![false; s.n()];
    seen[0] = true;
    let mut t = 0;
    while t < orbit.len() {
        let x = orbit[t];
        for g in &generators {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        t += 1;
    }
    orbit.sort_unstable();
    PrimitivityVerdict { primitive: orbit.len() == s.n(), n_power, generators, orbit }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicityScreen {
    /// `L` divides `|𝒜|`, which no periodic bijective substitution allows.
    CannotBePeriodic { length: usize, alphabet: usize },
    Inconclusive,
}

pub fn periodicity_screen(s: &Substitution) -> Result<PeriodicityScreen> {
    if s.dim() != 1 {
        return Err(Error::NotOneDimensional);
    }
    let l = s.shape().lengths()[0];
    Ok(if s.n().is_multiple_of(l) {
        PeriodicityScreen::CannotBePeriodic { length: l, alphabet: s.n() }
    } else {
        PeriodicityScreen::Inconclusive
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AperiodicityStatus {
    Aperiodic,
    Periodic,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AperiodicityWitness {
    /// Two distinct legal 2-words with the same first (or last) letter.
    SharedLetter { first: Patch, second: Patch },
    /// Two legal `2×…×2` blocks differing in exactly one cell.
    OneCell { first: Patch, second: Patch },
    /// Per axis, two legal `2×…×2` blocks that agree on the cells whose
    /// coordinate along that axis is `side`.
    HalfSpaces { pairs: Vec<(usize, usize, Patch, Patch)> },
    /// The only legal 2-words; they force `x = w^∞` with `w = period`.
    Periodic { words: Vec<Patch>, period: Vec<usize> },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperiodicityVerdict {
    pub status: AperiodicityStatus,
    pub witness: AperiodicityWitness,
}

pub fn is_aperiodic(s: &Substitution, bounds: &Bounds) -> Result<AperiodicityVerdict> {
    if !is_primitive(s).primitive {
        return Err(Error::NotPrimitive);
    }
    let blocks = s.legal_blocks(&vec![2; s.dim()], bounds.kmax)?;
    if s.dim() == 1 {
        let words: Vec<&Patch> = blocks.patches.iter().collect();
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                if u.cells[0] == v.cells[0] || u.cells[1] == v.cells[1] {
                    return Ok(AperiodicityVerdict {
                        status: AperiodicityStatus::Aperiodic,
                        witness: AperiodicityWitness::SharedLetter { first: (*u).clone(), second: (*v).clone() },
                    });
                }
            }
        }
        // Every letter has exactly one successor; follow it from the first letter.
        let mut next = vec![usize::MAX; s.n()];
        for w in &words {
            next[w.cells[0]] = w.cells[1];
        }
        let mut period = vec![0];
        let mut x = next[0];
        while x != 0 && x != usize::MAX && period.len() <= s.n() {
            period.push(x);
            x = next[x];
        }
        return Ok(AperiodicityVerdict {
            status: AperiodicityStatus::Periodic,
            witness: AperiodicityWitness::Periodic { words: words.into_iter().cloned().collect(), period },
        });
    }
    if let Some((first, second)) = blocks.one_cell_pair() {
        return Ok(AperiodicityVerdict {
            status: AperiodicityStatus::Aperiodic,
            witness: AperiodicityWitness::OneCell { first, second },
        });
    }
    let mut pairs = Vec::new();
    for axis in 0..s.dim() {
        let found = (0..2).find_map(|side| blocks.half_space_pair(axis, side).map(|(u, v)| (axis, side, u, v)));
        match found {
            Some(pair) => pairs.push(pair),
            None => return Ok(AperiodicityVerdict { status: AperiodicityStatus::Unknown, witness: AperiodicityWitness::None }),
        }
    }
    Ok(AperiodicityVerdict { status: AperiodicityStatus::Aperiodic, witness: AperiodicityWitness::HalfSpaces { pairs } })
}

/// Fails unless the substitution is primitive and provably aperiodic.
pub fn require_primitive_aperiodic(s: &Substitution, bounds: &Bounds) -> Result<(PrimitivityVerdict, AperiodicityVerdict)> {
    let prim = is_primitive(s);
    if !prim.primitive {
        return Err(Error::NotPrimitive);
    }
    let aper = is_aperiodic(s, bounds)?;
    match aper.status {
        AperiodicityStatus::Aperiodic => Ok((prim, aper)),
        AperiodicityStatus::Periodic => Err(Error::NotAperiodic("the hull is periodic".into())),
        AperiodicityStatus::Unknown => Err(Error::NotAperiodic("no proximality witness among legal 2-blocks".into())),
    }
}
