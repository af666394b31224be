//! Reversing and extended symmetries: which signed permutation matrices
//! `A ∈ W_d` lift to the hull, and with which letter exchanges.
//!
//! A matrix is stored by the images of the basis vectors:
//! `A e_j = signs[j] · e_{perm[j]}`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::analysis::require_primitive_aperiodic;
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::perm::{centralizer_in_symmetric, centralizer_order, find_conjugator, lcm, PermGroup, Permutation, RightCoset};
use crate::subst::{box_points, flatten, Shape, Substitution};
use crate::symmetry::{letter_exchange_group, SymmetryReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermMatrix {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let d = perm.len();
        if signs.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: signs.len() });
        }
        if Permutation::from_images(perm.clone()).is_err() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse(format!("not a signed permutation: {perm:?} {signs:?}")));
        }
        Ok(SignedPermMatrix { perm, signs })
    }

    pub fn identity(d: usize) -> Self {
        SignedPermMatrix { perm: (0..d).collect(), signs: vec![1; d] }
    }

    /// `-I`.
    pub fn negation(d: usize) -> Self {
        SignedPermMatrix { perm: (0..d).collect(), signs: vec![-1; d] }
    }

    /// `e_j ↦ e_{j+1 mod d}`.
    pub fn coordinate_cycle(d: usize) -> Self {
        SignedPermMatrix { perm: (0..d).map(|j| (j + 1) % d).collect(), signs: vec![1; d] }
    }

    /// Negates coordinate `axis`.
    pub fn mirror(d: usize, axis: usize) -> Self {
        let mut m = SignedPermMatrix::identity(d);
        m.signs[axis] = -1;
        m
    }

    /// The permutation matrix `e_j ↦ e_{σ(j)}`.
    pub fn from_axis_permutation(sigma: &Permutation) -> Self {
        SignedPermMatrix { perm: sigma.images().to_vec(), signs: vec![1; sigma.degree()] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn axis_perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Entry `A_{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if self.perm[j] == i {
            self.signs[j]
        } else {
            0
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.dim()];
        for j in 0..self.dim() {
            out[self.perm[j]] = self.signs[j] as i64 * v[j];
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let signs = other.perm.iter().zip(&other.signs).map(|(&p, &s)| s * self.signs[p]).collect();
        SignedPermMatrix { perm, signs }
    }

    pub fn inverse(&self) -> SignedPermMatrix {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut signs = vec![1; d];
        for j in 0..d {
            perm[self.perm[j]] = j;
            signs[self.perm[j]] = self.signs[j];
        }
        SignedPermMatrix { perm, signs }
    }

    pub fn is_identity(&self) -> bool {
        *self == SignedPermMatrix::identity(self.dim())
    }

    pub fn order(&self) -> usize {
        let mut m = self.clone();
        let mut k = 1;
        while !m.is_identity() {
            m = m.compose(self);
            k += 1;
        }
        k
    }

    /// A sign change only: the axis permutation is trivial but `A ≠ I`.
    pub fn is_pure_mirror(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| j == p) && !self.is_identity()
    }

    pub fn swaps_axes(&self) -> bool {
        self.perm.iter().enumerate().any(|(j, &p)| j != p)
    }
}

impl fmt::Display for SignedPermMatrix {
    /// Images of `e_1, …, e_d`, e.g. `(+2,-1)` for a quarter turn.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| format!("{}{}", if s > 0 { '+' } else { '-' }, p + 1))
            .join(",");
        write!(f, "({parts})")
    }
}

impl FromStr for SignedPermMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let body = text.trim().trim_start_matches('(').trim_end_matches(')');
        let mut perm = Vec::new();
        let mut signs = Vec::new();
        for token in body.split(',') {
            let token = token.trim();
            let (sign, rest) = match token.chars().next() {
                Some('-') => (-1, &token[1..]),
                Some('+') => (1, &token[1..]),
                _ => (1, token),
            };
            let axis: usize = rest.parse().map_err(|_| Error::Parse(format!("bad matrix entry `{token}`")))?;
            if axis == 0 {
                return Err(Error::Parse("axes are numbered from 1".into()));
            }
            perm.push(axis - 1);
            signs.push(sign);
        }
        SignedPermMatrix::new(perm, signs)
    }
}

impl Serialize for SignedPermMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All `2^d · d!` elements of `W_d`: axis permutations in lexicographic
/// order, each with sign patterns in binary order. The identity comes first.
pub fn enumerate_hyperoctahedral(d: usize, bound: usize) -> Result<Vec<SignedPermMatrix>> {
    if d == 0 || d > bound {
        return Err(Error::DimensionTooLarge { dim: d, bound });
    }
    let mut out = Vec::new();
    for perm in (0..d).permutations(d) {
        for mask in 0..1usize << d {
            let signs = (0..d).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            out.push(SignedPermMatrix { perm: perm.clone(), signs });
        }
    }
    Ok(out)
}

/// The subgroup of `W_d` generated by `gens`, sorted.
pub fn matrix_closure(d: usize, gens: &[SignedPermMatrix]) -> Result<Vec<SignedPermMatrix>> {
    for g in gens {
        if g.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
        }
    }
    let id = SignedPermMatrix::identity(d);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut all: Vec<SignedPermMatrix> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

pub fn is_matrix_subgroup(set: &[SignedPermMatrix]) -> bool {
    let members: HashSet<&SignedPermMatrix> = set.iter().collect();
    let Some(first) = set.first() else { return false };
    members.contains(&SignedPermMatrix::identity(first.dim()))
        && set.iter().all(|a| set.iter().all(|b| members.contains(&a.compose(b))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExclusionReason {
    /// `A` links axes `row` and `col` whose lengths have different prime divisors.
    PrimeFactor { row: usize, col: usize, prime: usize },
    /// Two constraint columns have different cycle types.
    #[serde(serialize_with = "ser_pair")]
    NonConjugate { x: Permutation, y: Permutation },
    EmptyIntersection,
}

fn ser_pair<S: Serializer>(x: &Permutation, y: &Permutation, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("NonConjugate", 2)?;
    st.serialize_field("x", x.images())?;
    st.serialize_field("y", y.images())?;
    st.end()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Checkable,
    Excluded(ExclusionReason),
    Undecided(String),
}

fn prime_divisors(mut x: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= x {
        while x.is_multiple_of(p) {
            out.insert(p);
            x /= p;
        }
        p += 1;
    }
    if x > 1 {
        out.insert(x);
    }
    out
}

pub fn admissibility(a: &SignedPermMatrix, shape: &Shape) -> Admissibility {
    let lengths = shape.lengths();
    for j in 0..a.dim() {
        let i = a.perm[j];
        let (pi, pj) = (prime_divisors(lengths[i]), prime_divisors(lengths[j]));
        if let Some(&prime) = pi.symmetric_difference(&pj).next() {
            return Admissibility::Excluded(ExclusionReason::PrimeFactor { row: i, col: j, prime });
        }
    }
    if (0..a.dim()).all(|j| lengths[a.perm[j]] == lengths[j]) {
        Admissibility::Checkable
    } else {
        Admissibility::Undecided("A does not commute with the expansion Q; geometry alone cannot decide".into())
    }
}

pub fn admissible_matrices(shape: &Shape, bound: usize) -> Result<Vec<(SignedPermMatrix, Admissibility)>> {
    Ok(enumerate_hyperoctahedral(shape.dim(), bound)?
        .into_iter()
        .map(|a| {
            let status = admissibility(&a, shape);
            (a, status)
        })
        .collect())
}

/// `A^(k)(i) = A(i - x_k) + |A| x_k` with `2 x_k = Q^k 𝟙 - 𝟙`, evaluated on
/// doubled coordinates.
pub fn affine_position_map(a: &SignedPermMatrix, shape: &Shape, k: usize, coords: &[usize]) -> Result<Vec<usize>> {
    if a.dim() != shape.dim() {
        return Err(Error::DimensionMismatch { expected: shape.dim(), found: a.dim() });
    }
    if admissibility(a, shape) != Admissibility::Checkable {
        return Err(Error::NotCheckable(a.to_string()));
    }
    shape.check_inside(coords, k)?;
    let sides = shape.level_lengths(k).ok_or(Error::OutOfSupport { coords: coords.to_vec(), level: k })?;
    let two_x: Vec<i64> = sides.iter().map(|&s| s as i64 - 1).collect();
    let shifted: Vec<i64> = coords.iter().zip(&two_x).map(|(&c, &x)| 2 * c as i64 - x).collect();
    let rotated = a.apply(&shifted);
    let mut out = vec![0; a.dim()];
    for (&row, &x) in a.perm.iter().zip(&two_x) {
        out[row] = ((rotated[row] + x) / 2) as usize;
    }
    shape.check_inside(&out, k)?;
    Ok(out)
}

/// Level `k` at which an `A`-invariant set of identity columns exists:
/// opposite columns in one dimension, the corners otherwise.
pub fn reversor_power(s: &Substitution) -> usize {
    let cols = s.columns();
    let lengths = s.shape().lengths();
    if s.dim() == 1 {
        let l = lengths[0];
        (0..l).map(|i| lcm(cols[i].order(), cols[l - 1 - i].order())).min().expect("non-empty")
    } else {
        let corners: Vec<usize> = (0..1usize << s.dim())
            .map(|mask| {
                let c: Vec<usize> = (0..s.dim()).map(|j| if mask >> j & 1 == 1 { lengths[j] - 1 } else { 0 }).collect();
                flatten(&c, lengths)
            })
            .collect();
        corners.into_iter().map(|c| cols[c].order()).fold(1, lcm)
    }
}

/// Distinct pairs `(ϱ^k_i, ϱ^k_{A(i)})` over all level-`k` positions, built
/// digit by digit from the level-one pairs.
pub fn constraint_pairs(s: &Substitution, a: &SignedPermMatrix, k: usize) -> Result<BTreeSet<(Permutation, Permutation)>> {
    let shape = s.shape();
    let mut base = BTreeSet::new();
    for point in box_points(shape.lengths()) {
        let image = affine_position_map(a, shape, 1, &point)?;
        base.insert((s.column_at(&point)?.clone(), s.column_at(&image)?.clone()));
    }
    let id = Permutation::identity(s.n());
    let mut level = BTreeSet::from([(id.clone(), id)]);
    for _ in 0..k {
        level = base
            .iter()
            .flat_map(|(x, y)| level.iter().map(move |(g, h)| (x.compose(g), y.compose(h))))
            .collect();
    }
    Ok(level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetOutcome {
    Realized(RightCoset),
    Empty(ExclusionReason),
}

/// Letter exchanges `π` with `π⁻¹ ∘ ϱ'_i ∘ π = ϱ'_{A(i)}` for every position
/// of `ϱ' = ϱ^k`, `k` from [`reversor_power`].
pub fn extended_coset_for_matrix(s: &Substitution, a: &SignedPermMatrix, bounds: &Bounds) -> Result<CosetOutcome> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: a.dim() });
    }
    if admissibility(a, s.shape()) != Admissibility::Checkable {
        return Err(Error::NotCheckable(a.to_string()));
    }
    require_primitive_aperiodic(s, bounds)?;
    solve_constraints(s, a, reversor_power(s), bounds)
}

fn solve_constraints(s: &Substitution, a: &SignedPermMatrix, k: usize, bounds: &Bounds) -> Result<CosetOutcome> {
    let pairs: Vec<(Permutation, Permutation)> =
        constraint_pairs(s, a, k)?.into_iter().filter(|(x, y)| !(x.is_identity() && y.is_identity())).collect();
    let mut pivot: Option<(&Permutation, Permutation)> = None;
    for (x, y) in &pairs {
        let Some(kappa) = find_conjugator(x, y) else {
            return Ok(CosetOutcome::Empty(ExclusionReason::NonConjugate { x: x.clone(), y: y.clone() }));
        };
        if pivot.as_ref().is_none_or(|(p, _)| centralizer_order(x) < centralizer_order(p)) {
            pivot = Some((x, kappa));
        }
    }
    let n = s.n();
    let (base, kappa) = match pivot {
        Some((x, kappa)) => (centralizer_in_symmetric(x, bounds.brute_degree)?, kappa),
        None => (centralizer_in_symmetric(&Permutation::identity(n), bounds.brute_degree)?, Permutation::identity(n)),
    };
    let solutions: Vec<Permutation> = base
        .elements()
        .iter()
        .map(|c| c.compose(&kappa))
        .filter(|pi| pairs.iter().all(|(x, y)| conjugates(pi, x, y)))
        .collect();
    let Some(first) = solutions.iter().min().cloned() else {
        return Ok(CosetOutcome::Empty(ExclusionReason::EmptyIntersection));
    };
    let inv = first.inverse();
    let subgroup = PermGroup::from_elements(n, solutions.iter().map(|p| p.compose(&inv)).collect());
    Ok(CosetOutcome::Realized(RightCoset::new(subgroup, first)))
}

/// `π⁻¹ x π = y`, checked as `x ∘ π = π ∘ y`.
pub fn conjugates(pi: &Permutation, x: &Permutation, y: &Permutation) -> bool {
    (0..pi.degree()).all(|a| x.apply(pi.apply(a)) == pi.apply(y.apply(a)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    Realized(RightCoset),
    Excluded(ExclusionReason),
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub matrix: SignedPermMatrix,
    pub status: CandidateStatus,
}

/// Order data for one realized matrix: the extended symmetry `π ∘ f_A`
/// has order `lcm(ord A, ord π)`, which must divide `ord(A)·|C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub matrix: SignedPermMatrix,
    pub matrix_order: usize,
    pub c_order: usize,
    /// Distinct orders over the whole coset.
    pub orders: Vec<usize>,
    pub bound: usize,
    pub divides: bool,
    /// `π^{ord A}` lies in `C` for every `π` in the coset.
    pub power_in_c: bool,
}

/// How a one-dimensional reversor reflects: about a letter (`m`, odd
/// `L^k`) or between two letters (`m'`, even `L^k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mirroring {
    #[serde(rename = "m")]
    AboutLetter,
    #[serde(rename = "m'")]
    BetweenLetters,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedReport {
    pub level: usize,
    pub symmetry: SymmetryReport,
    pub candidates: Vec<CandidateReport>,
    /// Realized matrices, sorted.
    pub quotient: Vec<SignedPermMatrix>,
    pub quotient_is_subgroup: bool,
    pub order_checks: Vec<OrderCheck>,
    pub mirroring: Option<Mirroring>,
}

impl ExtendedReport {
    pub fn status_of(&self, a: &SignedPermMatrix) -> Option<&CandidateStatus> {
        self.candidates.iter().find(|c| &c.matrix == a).map(|c| &c.status)
    }

    pub fn undecided(&self) -> impl Iterator<Item = &CandidateReport> {
        self.candidates.iter().filter(|c| matches!(c.status, CandidateStatus::Undecided(_)))
    }
}

pub fn extended_symmetry_group(s: &Substitution, bounds: &Bounds) -> Result<ExtendedReport> {
    let symmetry = letter_exchange_group(s, bounds)?;
    let level = reversor_power(s);
    let mut candidates = Vec::new();
    let mut quotient = Vec::new();
    let mut order_checks = Vec::new();
    for (matrix, admissible) in admissible_matrices(s.shape(), bounds.max_dimension)? {
        let status = match admissible {
            Admissibility::Excluded(reason) => CandidateStatus::Excluded(reason),
            Admissibility::Undecided(why) => CandidateStatus::Undecided(why),
            Admissibility::Checkable => match solve_constraints(s, &matrix, level, bounds)? {
                CosetOutcome::Empty(reason) => CandidateStatus::Excluded(reason),
                CosetOutcome::Realized(coset) => {
                    if coset.subgroup().elements() != symmetry.group.elements() {
                        return Err(Error::ViolationDetected(format!(
                            "solutions for {matrix} form a coset of a group of order {}, not of C",
                            coset.subgroup().order()
                        )));
                    }
                    order_checks.push(order_check(&matrix, &coset, &symmetry.group));
                    quotient.push(matrix.clone());
                    CandidateStatus::Realized(coset)
                }
            },
        };
        candidates.push(CandidateReport { matrix, status });
    }
    quotient.sort();
    let quotient_is_subgroup = is_matrix_subgroup(&quotient);
    let mirroring = (s.dim() == 1).then(|| {
        let side = s.shape().lengths()[0].checked_pow(level as u32);
        if side.is_some_and(|x| x % 2 == 0) || (side.is_none() && s.shape().lengths()[0].is_multiple_of(2)) {
            Mirroring::BetweenLetters
        } else {
            Mirroring::AboutLetter
        }
    });
    Ok(ExtendedReport { level, symmetry, candidates, quotient, quotient_is_subgroup, order_checks, mirroring })
}

fn order_check(matrix: &SignedPermMatrix, coset: &RightCoset, c: &PermGroup) -> OrderCheck {
    let matrix_order = matrix.order();
    let bound = matrix_order * c.order();
    let elements = coset.elements();
    let orders: BTreeSet<usize> = elements.iter().map(|pi| lcm(matrix_order, pi.order())).collect();
    let power_in_c = elements.iter().all(|pi| c.contains(&pi.pow(matrix_order)));
    OrderCheck {
        matrix: matrix.clone(),
        matrix_order,
        c_order: c.order(),
        divides: orders.iter().all(|o| bound.is_multiple_of(*o)),
        orders: orders.into_iter().collect(),
        bound,
        power_in_c,
    }
}
