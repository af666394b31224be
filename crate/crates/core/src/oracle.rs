//! Brute-force cross-checks that share as little code as possible with the
//! algorithms they verify.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::analysis::{min_identity_power, require_primitive_aperiodic};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::extsym::{affine_position_map, reversor_power, SignedPermMatrix};
use crate::perm::{factorial, symmetric_group, Alphabet, Permutation};
use crate::subst::{box_points, Patch, Substitution};

/// Positions enumerated one by one before falling back to digit products.
const POSITION_LIMIT: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub name: String,
    pub agreed: bool,
    pub algorithm: Vec<String>,
    pub oracle: Vec<String>,
    /// First element found on only one side.
    pub mismatch: Option<String>,
}

impl OracleVerdict {
    pub fn compare(name: &str, algorithm: &[Permutation], oracle: &[Permutation], alphabet: &Alphabet) -> Self {
        let a: BTreeSet<&Permutation> = algorithm.iter().collect();
        let o: BTreeSet<&Permutation> = oracle.iter().collect();
        let mismatch = a.symmetric_difference(&o).next().map(|p| {
            let side = if a.contains(p) { "algorithm only" } else { "oracle only" };
            let text = if p.is_identity() { "id".to_string() } else { p.format(alphabet) };
            format!("{side}: {text}")
        });
        let show = |set: &BTreeSet<&Permutation>| set.iter().map(|p| p.format(alphabet)).collect();
        OracleVerdict { name: name.to_string(), agreed: a == o, algorithm: show(&a), oracle: show(&o), mismatch }
    }
}

fn check_symmetric_size(n: usize, bound: usize) -> Result<()> {
    if factorial(n) > factorial(bound) {
        return Err(Error::AlphabetTooLarge { required: factorial(n), limit: factorial(bound) });
    }
    Ok(())
}

/// Distinct columns of `ϱ^k`, read position by position when feasible.
fn columns_at_level(s: &Substitution, k: usize) -> Result<Vec<Permutation>> {
    match (s.shape().level_volume(k), s.shape().level_lengths(k)) {
        (Some(v), Some(sides)) if v <= POSITION_LIMIT => {
            let set: BTreeSet<Permutation> =
                box_points(&sides).map(|p| s.power_column(k, &p)).collect::<Result<_>>()?;
            Ok(set.into_iter().collect())
        }
        _ => Ok(s.distinct_power_columns(k)),
    }
}

/// Every `π ∈ S_n` commuting with all columns of `ϱ^N`.
pub fn brute_letter_exchanges(s: &Substitution, bounds: &Bounds) -> Result<Vec<Permutation>> {
    check_symmetric_size(s.n(), bounds.brute_degree)?;
    let columns = columns_at_level(s, min_identity_power(s))?;
    Ok(symmetric_group(s.n()).filter(|pi| columns.iter().all(|c| pi.commutes_with(c))).collect())
}

/// Pairs `(ϱ^k_u, ϱ^k_{L^k-1-u})` for a possibly huge `k`. The pair sets of
/// consecutive levels follow a deterministic recursion, so once a set
/// repeats the sequence is periodic.
fn mirror_pairs(s: &Substitution, k: usize) -> BTreeSet<(Permutation, Permutation)> {
    let cols = s.columns();
    let l = cols.len();
    let base: BTreeSet<(Permutation, Permutation)> = (0..l).map(|i| (cols[i].clone(), cols[l - 1 - i].clone())).collect();
    let id = Permutation::identity(s.n());
    let mut history: Vec<BTreeSet<(Permutation, Permutation)>> = vec![BTreeSet::from([(id.clone(), id)])];
    let mut index: HashMap<BTreeSet<(Permutation, Permutation)>, usize> = HashMap::from([(history[0].clone(), 0)]);
    for m in 1..=k {
        let prev = &history[m - 1];
        let next: BTreeSet<_> = base
            .iter()
            .flat_map(|(x, y)| prev.iter().map(move |(g, h)| (x.compose(g), y.compose(h))))
            .collect();
        if let Some(&start) = index.get(&next) {
            let period = m - start;
            return history[start + (k - start) % period].clone();
        }
        index.insert(next.clone(), m);
        history.push(next);
    }
    history.pop().expect("non-empty")
}

/// Letter exchanges inducing a reversor according to the two-word criterion:
/// (1) `ab` legal implies `π(b)π(a)` legal, and (2) reversing
/// `π(ϱ^M(ab))` gives `ϱ^M(π(b)π(a))` with `M = n!`, compared column by column.
pub fn brute_reversors_bry(s: &Substitution, bounds: &Bounds) -> Result<Vec<Permutation>> {
    if s.dim() != 1 {
        return Err(Error::NotOneDimensional);
    }
    check_symmetric_size(s.n(), bounds.bry_degree)?;
    require_primitive_aperiodic(s, bounds)?;
    let words: BTreeSet<(usize, usize)> =
        s.legal_blocks(&[2], bounds.kmax)?.patches.iter().map(|p| (p.cells[0], p.cells[1])).collect();
    let pairs = mirror_pairs(s, factorial(s.n()) as usize);
    Ok(symmetric_group(s.n())
        .filter(|pi| {
            let reversed_legal = words.iter().all(|&(a, b)| words.contains(&(pi.apply(b), pi.apply(a))));
            // Column u of the first half of ϱ^M(π(b)π(a)) faces column L^M-1-u
            // of the second half of ϱ^M(ab); likewise with the halves swapped.
            let columnwise = words.iter().all(|&(a, b)| {
                pairs.iter().all(|(x, mirrored)| {
                    pi.apply(mirrored.apply(b)) == x.apply(pi.apply(b)) && pi.apply(mirrored.apply(a)) == x.apply(pi.apply(a))
                })
            });
            reversed_legal && columnwise
        })
        .collect())
}

/// Every `π ∈ S_n` satisfying `π⁻¹ ϱ^k_i π = ϱ^k_{A(i)}` at each explicitly
/// enumerated level-`k` position.
pub fn brute_extended_coset(s: &Substitution, a: &SignedPermMatrix, bounds: &Bounds) -> Result<Vec<Permutation>> {
    check_symmetric_size(s.n(), bounds.brute_degree)?;
    let k = reversor_power(s);
    let volume = s.shape().level_volume(k).unwrap_or(u128::MAX);
    if volume > POSITION_LIMIT {
        return Err(Error::LevelTooLarge { level: k, cells: volume, limit: POSITION_LIMIT });
    }
    let sides = s.shape().level_lengths(k).expect("bounded above");
    let mut constraints = BTreeSet::new();
    for p in box_points(&sides) {
        let q = affine_position_map(a, s.shape(), k, &p)?;
        constraints.insert((s.power_column(k, &p)?, s.power_column(k, &q)?));
    }
    Ok(symmetric_group(s.n())
        .filter(|pi| {
            let inv = pi.inverse();
            constraints.iter().all(|(x, y)| inv.compose(x).compose(pi) == *y)
        })
        .collect())
}

/// Moves a patch by `A` about its own centre and relabels by `π⁻¹`.
pub fn transform_patch(patch: &Patch, a: &SignedPermMatrix, pi: &Permutation) -> Patch {
    let d = patch.dims.len();
    let mut dims = vec![0; d];
    for j in 0..d {
        dims[a.axis_perm()[j]] = patch.dims[j];
    }
    let inv = pi.inverse();
    let mut out = Patch { dims: dims.clone(), cells: vec![0; patch.cells.len()] };
    for x in box_points(&patch.dims) {
        let mut y = vec![0; d];
        for j in 0..d {
            y[a.axis_perm()[j]] = if a.signs()[j] > 0 { x[j] } else { patch.dims[j] - 1 - x[j] };
        }
        let target = crate::subst::flatten(&y, &dims);
        out.cells[target] = inv.apply(patch.get(&x));
    }
    out
}

/// Whether `(A, π)` maps legal cubes of every side `2..=max_side` to legal
/// cubes. A necessary condition for an extended symmetry.
pub fn patch_preservation_check(
    s: &Substitution,
    a: &SignedPermMatrix,
    pi: &Permutation,
    max_side: usize,
    bounds: &Bounds,
) -> Result<bool> {
    for side in 2..=max_side {
        let legal = s.legal_blocks(&vec![side; s.dim()], bounds.kmax)?;
        if !legal.patches.iter().all(|p| legal.contains(&transform_patch(p, a, pi))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `M·𝟙 = |R|·𝟙` for the substitution matrix.
pub fn frequency_eigenvector_check(s: &Substitution) -> bool {
    let volume = s.shape().volume() as u64;
    s.substitution_matrix().times_ones().iter().all(|&x| x == volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extsym::{extended_coset_for_matrix, CosetOutcome};
    use crate::fixtures;
    use crate::symmetry::letter_exchange_group;

    #[test]
    fn letter_exchange_oracle() {
        let b = Bounds::default();
        assert_eq!(brute_letter_exchanges(&fixtures::cyclic(), &b).unwrap().len(), 3);
        let q = fixtures::quaternion();
        let brute = brute_letter_exchanges(&q, &b).unwrap();
        assert_eq!(brute, letter_exchange_group(&q, &b).unwrap().group.elements());
        assert_eq!(brute_letter_exchanges(&fixtures::thue_morse(), &b).unwrap().len(), 2);
    }

    #[test]
    fn bry_oracle() {
        let b = Bounds::default();
        let tm = fixtures::thue_morse();
        let names: Vec<String> = brute_reversors_bry(&tm, &b).unwrap().iter().map(|p| p.format(tm.alphabet())).collect();
        assert_eq!(names, ["", "(a b)"]);
        let cyc = fixtures::cyclic();
        let bry = brute_reversors_bry(&cyc, &b).unwrap();
        let alg = match extended_coset_for_matrix(&cyc, &SignedPermMatrix::negation(1), &b).unwrap() {
            CosetOutcome::Realized(c) => c.elements(),
            CosetOutcome::Empty(_) => Vec::new(),
        };
        assert_eq!(bry, alg);
        assert!(matches!(brute_reversors_bry(&fixtures::periodic(), &b), Err(Error::NotAperiodic(_))));
        assert!(matches!(brute_reversors_bry(&fixtures::quaternion(), &b), Err(Error::AlphabetTooLarge { .. })));
    }

    #[test]
    fn mirror_pairs_use_periodicity_correctly() {
        let s = fixtures::cyclic();
        for k in 1..=9 {
            let side = 3usize.pow(k as u32);
            let direct: BTreeSet<_> = (0..side)
                .map(|u| (s.power_column(k, &[u]).unwrap(), s.power_column(k, &[side - 1 - u]).unwrap()))
                .collect();
            assert_eq!(mirror_pairs(&s, k), direct, "k = {k}");
        }
    }

    #[test]
    fn patches() {
        let b = Bounds::default();
        let sq = fixtures::square_thue_morse();
        let rot: SignedPermMatrix = "(+2,-1)".parse().unwrap();
        assert!(patch_preservation_check(&sq, &rot, &Permutation::identity(2), 3, &b).unwrap());
        let tm = fixtures::thue_morse();
        assert!(patch_preservation_check(&tm, &SignedPermMatrix::identity(1), &Permutation::identity(2), 3, &b).unwrap());
    }

    #[test]
    fn frequency() {
        assert!(frequency_eigenvector_check(&fixtures::thue_morse()));
        assert!(frequency_eigenvector_check(&fixtures::quaternion()));
    }

    #[test]
    fn verdicts() {
        let a = Alphabet::standard(2);
        let id = Permutation::identity(2);
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let v = OracleVerdict::compare("x", std::slice::from_ref(&id), &[id.clone(), swap], &a);
        assert!(!v.agreed);
        assert_eq!(v.mismatch.as_deref(), Some("oracle only: (a b)"));
        assert!(OracleVerdict::compare("x", std::slice::from_ref(&id), std::slice::from_ref(&id), &a).agreed);
    }
}
