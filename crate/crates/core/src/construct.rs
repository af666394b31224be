//! Substitutions whose symmetry group is `ℤ^d × G` and whose extended
//! symmetry group has a prescribed image `P ≤ W_d`. Every output is passed
//! back through the analysis pipeline before it is returned.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::analysis::{is_aperiodic, is_primitive, AperiodicityStatus, AperiodicityVerdict};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::extsym::{
    affine_position_map, enumerate_hyperoctahedral, extended_symmetry_group, matrix_closure, CandidateStatus,
    ExtendedReport, SignedPermMatrix,
};
use crate::perm::{closure, parse_cycles, symmetric_group, Alphabet, OrderFingerprint, PermGroup, Permutation};
use crate::subst::{box_points, flatten, Shape, Substitution};

/// An abstract finite group given by a faithful permutation action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
    /// Names for the points; used as letters when the action is regular.
    pub point_labels: Option<Vec<String>>,
}

impl GroupSpec {
    pub fn new(name: &str, degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::SizeMismatch(degree, g.degree()));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(GroupSpec { name: name.to_string(), degree, generators, point_labels: None })
    }

    pub fn trivial() -> Self {
        GroupSpec { name: "trivial".into(), degree: 1, generators: Vec::new(), point_labels: None }
    }

    pub fn cyclic(n: usize) -> Self {
        let image = (0..n).map(|i| (i + 1) % n).collect();
        let generators = if n > 1 { vec![Permutation::from_images(image).expect("cycle")] } else { Vec::new() };
        GroupSpec { name: format!("C{n}"), degree: n, generators, point_labels: None }
    }

    /// The regular action of `{±1, ±i, ±j, ±k}` by left multiplication with
    /// `i`, `j`, `k`.
    pub fn quaternion() -> Self {
        let labels = ["e", "i", "j", "k", "-e", "-i", "-j", "-k"];
        let generators = (1..4)
            .map(|u| Permutation::from_images((0..8).map(|x| quaternion_product(u, x)).collect()).expect("regular"))
            .collect();
        GroupSpec {
            name: "Q8".into(),
            degree: 8,
            generators,
            point_labels: Some(labels.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn klein() -> Self {
        let generators = vec![
            Permutation::from_images(vec![1, 0, 3, 2]).expect("klein"),
            Permutation::from_images(vec![2, 3, 0, 1]).expect("klein"),
        ];
        GroupSpec { name: "V4".into(), degree: 4, generators, point_labels: None }
    }

    /// `S_n` acting on `n` points, generated by an `n`-cycle and a transposition.
    pub fn symmetric(n: usize) -> Self {
        let mut spec = GroupSpec::cyclic(n);
        spec.name = format!("S{n}");
        if n > 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            spec.generators.push(Permutation::from_images(swap).expect("transposition"));
        }
        spec
    }

    /// Accepts `trivial`, `cN`, `cyclic:N`, `quaternion`, `q8`, `klein`, `v4`,
    /// `sN`, `symmetric:N`, or cycle notation over `a, b, …` separated by `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        let number = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad group `{text}`")));
        match t.as_str() {
            "trivial" | "1" => return Ok(GroupSpec::trivial()),
            "quaternion" | "q8" | "q" => return Ok(GroupSpec::quaternion()),
            "klein" | "v4" => return Ok(GroupSpec::klein()),
            _ => {}
        }
        if t.contains('(') {
            let standard = Alphabet::standard(26);
            let perms: Vec<Permutation> =
                t.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_cycles(s, &standard)).collect::<Result<_>>()?;
            let degree = perms
                .iter()
                .flat_map(|p| (0..26).filter(move |&x| p.apply(x) != x))
                .max()
                .map_or(1, |m| m + 1);
            let perms = perms.iter().map(|p| Permutation::from_images(p.images()[..degree].to_vec())).collect::<Result<_>>()?;
            return GroupSpec::new(text.trim(), degree, perms);
        }
        if let Some(n) = t.strip_prefix("cyclic:").or_else(|| t.strip_prefix('c')) {
            return Ok(GroupSpec::cyclic(number(n)?));
        }
        if let Some(n) = t.strip_prefix("symmetric:").or_else(|| t.strip_prefix('s')) {
            return Ok(GroupSpec::symmetric(number(n)?));
        }
        Err(Error::Parse(format!("unknown group `{text}`")))
    }

    pub fn group(&self, bounds: &Bounds) -> Result<PermGroup> {
        closure(self.degree, &self.generators, bounds.brute_degree)
    }

    /// Drops generators that the earlier ones already produce.
    pub fn minimal_generators(&self, bounds: &Bounds) -> Result<Vec<Permutation>> {
        let full = self.group(bounds)?.order();
        let mut kept: Vec<Permutation> = Vec::new();
        for g in &self.generators {
            if closure(self.degree, &kept, bounds.brute_degree)?.order() == full {
                break;
            }
            if !closure(self.degree, &kept, bounds.brute_degree)?.contains(g) {
                kept.push(g.clone());
            }
        }
        Ok(kept)
    }

    /// Letters indexed by group elements, and `L_s: g ↦ s∘g` for each `s`.
    fn regular(&self, gens: &[Permutation], bounds: &Bounds) -> Result<(Alphabet, Vec<Permutation>)> {
        let group = self.group(bounds)?;
        let mut elements = group.elements().to_vec();
        let regular = group.order() == self.degree && group.is_transitive();
        if regular {
            elements.sort_by_key(|g| g.apply(0));
        }
        let alphabet = match (&self.point_labels, regular) {
            (Some(labels), true) => Alphabet::new(elements.iter().map(|g| labels[g.apply(0)].clone()))?,
            _ => Alphabet::standard(elements.len()),
        };
        let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let columns = gens
            .iter()
            .map(|s| {
                if !group.contains(s) {
                    return Err(Error::Parse(format!("generator {s:?} is not in {}", self.name)));
                }
                Permutation::from_images(elements.iter().map(|g| index[&s.compose(g)]).collect())
            })
            .collect::<Result<_>>()?;
        Ok((alphabet, columns))
    }
}

/// Index of `u·x` for quaternion units numbered `e, i, j, k, -e, -i, -j, -k`.
fn quaternion_product(u: usize, x: usize) -> usize {
    const TABLE: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let (neg, unit) = TABLE[u % 4][x % 4];
    let sign = neg ^ (u >= 4) ^ (x >= 4);
    unit + if sign { 4 } else { 0 }
}

/// A subgroup of the hyperoctahedral group `W_d` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdSubgroupSpec {
    pub dim: usize,
    pub generators: Vec<SignedPermMatrix>,
}

impl WdSubgroupSpec {
    pub fn new(dim: usize, generators: Vec<SignedPermMatrix>) -> Result<Self> {
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
        }
        Ok(WdSubgroupSpec { dim, generators })
    }

    /// Takes a complete element list and rejects it unless it is closed.
    pub fn from_elements(dim: usize, elements: Vec<SignedPermMatrix>) -> Result<Self> {
        let spec = WdSubgroupSpec::new(dim, elements.clone())?;
        let mut given = elements;
        given.sort();
        given.dedup();
        if !crate::extsym::is_matrix_subgroup(&given) {
            return Err(Error::PNotSubgroup(given.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")));
        }
        Ok(spec)
    }

    /// Accepts `trivial`, `pm`, `c4`/`rot`, `v4`/`mirrors`, `cyc`,
    /// `d4`/`full`, or matrices like `(+2,-1);(-1,+2)`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        let rotation = || {
            if dim < 2 {
                return Err(Error::BadDimension(format!("`{text}` needs d ≥ 2")));
            }
            let mut perm: Vec<usize> = (0..dim).collect();
            perm.swap(0, 1);
            let mut signs = vec![1; dim];
            signs[1] = -1;
            SignedPermMatrix::new(perm, signs)
        };
        let generators = match t.as_str() {
            "trivial" | "1" => Vec::new(),
            "pm" | "negation" => vec![SignedPermMatrix::negation(dim)],
            "c4" | "rot" => vec![rotation()?],
            "v4" | "mirrors" => (0..dim).map(|j| SignedPermMatrix::mirror(dim, j)).collect(),
            "cyc" => vec![SignedPermMatrix::coordinate_cycle(dim)],
            "d4" | "full" => {
                let mut gens: Vec<SignedPermMatrix> = (0..dim).map(|j| SignedPermMatrix::mirror(dim, j)).collect();
                if dim > 1 {
                    gens.push(SignedPermMatrix::coordinate_cycle(dim));
                    let mut perm: Vec<usize> = (0..dim).collect();
                    perm.swap(0, 1);
                    gens.push(SignedPermMatrix::new(perm, vec![1; dim])?);
                }
                gens
            }
            _ if t.contains('(') => {
                t.split(';').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect::<Result<_>>()?
            }
            _ => return Err(Error::Parse(format!("unknown subgroup `{text}`"))),
        };
        WdSubgroupSpec::new(dim, generators)
    }

    pub fn elements(&self) -> Result<Vec<SignedPermMatrix>> {
        matrix_closure(self.dim, &self.generators)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    Cayley1d,
    Shell,
    Cantor,
    Nonid,
    CyclicTower,
}

/// What a construction promises about its output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claims {
    pub c_order: usize,
    pub c_fingerprint: OrderFingerprint,
    /// `None` skips the quotient comparison.
    pub quotient: Option<Vec<SignedPermMatrix>>,
    pub reversor_order: Option<usize>,
    /// Non-identity quotient elements must come with letter exchanges outside `C`.
    pub exchanges_outside_c: bool,
}

#[derive(Clone, Debug)]
pub struct ConstructionCertificate {
    pub kind: ConstructionKind,
    pub substitution: Substitution,
    pub claims: Claims,
    pub aperiodicity: AperiodicityVerdict,
    pub extended: ExtendedReport,
    /// Largest `lcm(ord A, ord π)` over realized pairs.
    pub max_reversor_order: usize,
}

/// Runs the pipeline on `s` and fails unless it confirms every claim.
pub fn certify(kind: ConstructionKind, s: Substitution, claims: Claims, bounds: &Bounds) -> Result<ConstructionCertificate> {
    let fail = |msg: String| Err(Error::VerificationFailed(msg));
    if !is_primitive(&s).primitive {
        return fail("output is not primitive".into());
    }
    let aperiodicity = is_aperiodic(&s, bounds)?;
    if aperiodicity.status != AperiodicityStatus::Aperiodic {
        return fail(format!("aperiodicity verdict {:?}", aperiodicity.status));
    }
    let extended = extended_symmetry_group(&s, bounds)?;
    let c = &extended.symmetry.group;
    if c.order() != claims.c_order || extended.symmetry.fingerprint != claims.c_fingerprint {
        return fail(format!(
            "C has order {} and orders {}, expected {} and {}",
            c.order(),
            extended.symmetry.fingerprint,
            claims.c_order,
            claims.c_fingerprint
        ));
    }
    if let Some(quotient) = &claims.quotient {
        if &extended.quotient != quotient {
            return fail(format!(
                "realized matrices [{}] differ from [{}]",
                extended.quotient.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                quotient.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            ));
        }
    }
    if extended.undecided().next().is_some() {
        return fail("some matrices could not be decided".into());
    }
    if claims.exchanges_outside_c {
        for cand in &extended.candidates {
            if let CandidateStatus::Realized(coset) = &cand.status {
                if !cand.matrix.is_identity() && c.contains(coset.representative()) {
                    return fail(format!("{} is realized by a letter exchange in C", cand.matrix));
                }
            }
        }
    }
    let max_reversor_order = extended.order_checks.iter().flat_map(|o| o.orders.iter().copied()).max().unwrap_or(1);
    if let Some(order) = claims.reversor_order {
        if !extended.order_checks.iter().any(|o| o.orders.contains(&order)) {
            return fail(format!("no extended symmetry of order {order}"));
        }
    }
    Ok(ConstructionCertificate { kind, substitution: s, claims, aperiodicity, extended, max_reversor_order })
}

fn group_claims(g: &GroupSpec, quotient: Option<Vec<SignedPermMatrix>>, bounds: &Bounds) -> Result<Claims> {
    let group = g.group(bounds)?;
    Ok(Claims {
        c_order: group.order(),
        c_fingerprint: group.fingerprint(),
        quotient,
        reversor_order: None,
        exchanges_outside_c: false,
    })
}

/// Letters and non-identity columns realizing `C ≅ G`: the left-regular
/// images of `gens`, or for trivial `G` two generators of `S_3`.
fn letter_columns(g: &GroupSpec, gens: &[Permutation], bounds: &Bounds) -> Result<(Alphabet, Vec<Permutation>)> {
    if g.group(bounds)?.order() == 1 {
        let alphabet = Alphabet::standard(3);
        let cols = vec![parse_cycles("(a b c)", &alphabet)?, parse_cycles("(a b)", &alphabet)?];
        return Ok((alphabet, cols));
    }
    if gens.is_empty() {
        return Err(Error::TrivialGroup);
    }
    g.regular(gens, bounds)
}

/// Orbit of `point` under `group` acting on the cube of the given side, one
/// entry per group element.
fn orbit(group: &[SignedPermMatrix], side: usize, point: &[usize]) -> Result<Vec<(SignedPermMatrix, Vec<usize>)>> {
    let shape = Shape::new(vec![side; point.len()])?;
    group.iter().map(|a| Ok((a.clone(), affine_position_map(a, &shape, 1, point)?))).collect()
}

/// `W_d` acts freely on a point of an even-sided cube iff the coordinates
/// lie in pairwise different mirror pairs `{c, side-1-c}`.
fn is_free(point: &[usize], side: usize) -> bool {
    let pairs: BTreeSet<usize> = point.iter().map(|&c| c.min(side - 1 - c)).collect();
    side.is_multiple_of(2) && pairs.len() == point.len()
}

fn cube_substitution(alphabet: Alphabet, d: usize, side: usize, columns: Vec<Permutation>) -> Result<Substitution> {
    Substitution::new(alphabet, Shape::new(vec![side; d])?, columns)
}

/// One-dimensional realization of `ℤ × G`: an identity column followed by
/// the left multiplications by the generators.
pub fn construct_cayley_1d(g: &GroupSpec, bounds: &Bounds) -> Result<ConstructionCertificate> {
    if g.group(bounds)?.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    let (alphabet, cols) = g.regular(&g.generators, bounds)?;
    let mut columns = vec![Permutation::identity(alphabet.len())];
    columns.extend(cols);
    let side = columns.len();
    let s = cube_substitution(alphabet, 1, side, columns)?;
    certify(ConstructionKind::Cayley1d, s, group_claims(g, None, bounds)?, bounds)
}

/// Nested shells around a cube of side `2|S| + 2d + 2`: the innermost `|S|`
/// shells carry the generator columns, the marker column sits on `P·p`.
pub fn construct_shell(
    g: &GroupSpec,
    gens: &[Permutation],
    p: &WdSubgroupSpec,
    d: usize,
    bounds: &Bounds,
) -> Result<ConstructionCertificate> {
    if d == 0 || p.dim != d {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim });
    }
    if d > bounds.max_dimension {
        return Err(Error::DimensionTooLarge { dim: d, bound: bounds.max_dimension });
    }
    let (alphabet, cols) = letter_columns(g, gens, bounds)?;
    let r = cols.len();
    let side = 2 * r + 2 * d + 2;
    let shells = r + d + 1;
    let marker: Vec<usize> = if d == 1 { vec![1] } else { (0..d).collect() };
    let shell_of = |x: &[usize]| x.iter().map(|&c| c.min(side - 1 - c)).min().expect("d ≥ 1");
    if shell_of(&marker) >= shells - r {
        return Err(Error::ShellTooSmall);
    }
    let id = Permutation::identity(alphabet.len());
    let dims = vec![side; d];
    let mut columns: Vec<Permutation> = box_points(&dims)
        .map(|x| {
            let j = shell_of(&x);
            if j >= shells - r { cols[shells - 1 - j].clone() } else { id.clone() }
        })
        .collect();
    let elements = p.elements()?;
    for (_, x) in orbit(&elements, side, &marker)? {
        columns[flatten(&x, &dims)] = cols[0].clone();
    }
    let s = cube_substitution(alphabet, d, side, columns)?;
    certify(ConstructionKind::Shell, s, group_claims(g, Some(elements), bounds)?, bounds)
}

/// Cube side `L = 2d + 2`; each stage expands the previously marked orbit
/// into blocks and marks a fresh `P`-orbit inside them with the next column.
pub fn construct_cantor(
    g: &GroupSpec,
    gens: &[Permutation],
    p: &WdSubgroupSpec,
    d: usize,
    bounds: &Bounds,
) -> Result<ConstructionCertificate> {
    if d == 0 || p.dim != d {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim });
    }
    if d > bounds.max_dimension {
        return Err(Error::DimensionTooLarge { dim: d, bound: bounds.max_dimension });
    }
    let (alphabet, cols) = letter_columns(g, gens, bounds)?;
    let elements = p.elements()?;
    let l = 2 * d + 2;
    let mut side = l;
    let mut labels: Vec<Option<usize>> = vec![None; l.pow(d as u32)];
    let start: Vec<usize> = (1..=d).collect();
    let mut marked = Vec::new();
    for (_, x) in orbit(&elements, side, &start)? {
        let i = flatten(&x, &vec![side; d]);
        labels[i] = Some(0);
        marked.push(i);
    }
    for t in 1..cols.len() {
        let coarse = vec![side; d];
        side *= l;
        let fine = vec![side; d];
        let block = vec![l; d];
        let mut next = vec![None; labels.len() * l.pow(d as u32)];
        for (i, x) in box_points(&fine).enumerate() {
            let parent: Vec<usize> = x.iter().map(|c| c / l).collect();
            next[i] = labels[flatten(&parent, &coarse)];
        }
        let mut expanded: Vec<Vec<usize>> = Vec::new();
        for &m in &marked {
            let u = crate::subst::unflatten(m, &coarse);
            for v in box_points(&block) {
                expanded.push(u.iter().zip(&v).map(|(a, b)| a * l + b).collect());
            }
        }
        expanded.sort();
        let j = expanded.iter().find(|x| is_free(x, side)).ok_or(Error::ShellTooSmall)?.clone();
        marked.clear();
        for (_, x) in orbit(&elements, side, &j)? {
            let i = flatten(&x, &fine);
            next[i] = Some(t);
            marked.push(i);
        }
        labels = next;
    }
    let id = Permutation::identity(alphabet.len());
    let columns = labels.iter().map(|l| l.map_or_else(|| id.clone(), |t| cols[t].clone())).collect();
    let s = cube_substitution(alphabet, d, side, columns)?;
    certify(ConstructionKind::Cantor, s, group_claims(g, Some(elements), bounds)?, bounds)
}

/// An injective homomorphism `P → S_ℓ`, found by trying generator images in
/// lexicographic order.
pub fn embed_in_symmetric(p: &WdSubgroupSpec, ell: usize) -> Result<Option<HashMap<SignedPermMatrix, Permutation>>> {
    let elements = p.elements()?;
    let gens: Vec<SignedPermMatrix> = p.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
    let candidates: Vec<Permutation> = symmetric_group(ell).collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<&Permutation> = choice.iter().map(|&c| &candidates[c]).collect();
        let orders_fit = gens.iter().zip(&images).all(|(g, im)| g.order() % im.order() == 0);
        if orders_fit {
            if let Some(map) = extend_homomorphism(&gens, &images, ell) {
                let distinct: BTreeSet<&Permutation> = map.values().collect();
                if distinct.len() == elements.len() {
                    return Ok(Some(map));
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(None);
            }
            choice[pos] += 1;
            if choice[pos] < candidates.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn extend_homomorphism(
    gens: &[SignedPermMatrix],
    images: &[&Permutation],
    ell: usize,
) -> Option<HashMap<SignedPermMatrix, Permutation>> {
    let d = gens.first().map_or(1, SignedPermMatrix::dim);
    let mut map = HashMap::from([(SignedPermMatrix::identity(d), Permutation::identity(ell))]);
    let mut queue = vec![SignedPermMatrix::identity(d)];
    while let Some(x) = queue.pop() {
        let fx = map[&x].clone();
        for (g, fg) in gens.iter().zip(images) {
            let y = g.compose(&x);
            let fy = fg.compose(&fx);
            match map.get(&y) {
                Some(existing) if *existing != fy => return None,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    queue.push(y);
                }
            }
        }
    }
    Some(map)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `ℤ^ℓ × H` with quotient `P` realized by letter exchanges outside `C`:
/// columns are the transpositions of `S_ℓ` copied over `|H|` index layers,
/// the index maps of `H`, and the identity.
pub fn construct_nonid(h: &GroupSpec, p: &WdSubgroupSpec, ell: usize, bounds: &Bounds) -> Result<ConstructionCertificate> {
    if matches!(ell, 0..=3 | 6) {
        return Err(Error::BadDimension(format!("ℓ = {ell} is not supported")));
    }
    if p.dim != ell {
        return Err(Error::DimensionMismatch { expected: ell, found: p.dim });
    }
    if ell > bounds.max_dimension {
        return Err(Error::DimensionTooLarge { dim: ell, bound: bounds.max_dimension });
    }
    let psi = embed_in_symmetric(p, ell)?
        .ok_or_else(|| Error::BadDimension(format!("P does not embed in S_{ell}")))?;
    let hgroup = h.group(bounds)?;
    let hsize = hgroup.order();
    let hgens = h.minimal_generators(bounds)?;
    let index_maps = if hsize > 1 { h.regular(&hgens, bounds)?.1 } else { Vec::new() };
    let n = ell * hsize;
    let base = Alphabet::standard(ell);
    let names: Vec<String> = (0..ell)
        .flat_map(|x| {
            let base = &base;
            (0..hsize).map(move |i| if hsize == 1 { base.letter(x).to_string() } else { format!("{}{}", base.letter(x), i + 1) })
        })
        .collect();
    let alphabet = Alphabet::new(names)?;
    let letter = |x: usize, i: usize| x * hsize + i;
    let lift = |sigma: &Permutation| {
        let image = (0..n).map(|a| letter(sigma.apply(a / hsize), a % hsize)).collect();
        Permutation::from_images(image).expect("lift")
    };
    let transposition = |x: usize, y: usize| {
        let mut image: Vec<usize> = (0..ell).collect();
        image.swap(x, y);
        Permutation::from_images(image).expect("transposition")
    };
    let elements = p.elements()?;
    let mut remaining: BTreeSet<(usize, usize)> = (0..ell).flat_map(|x| (x + 1..ell).map(move |y| (x, y))).collect();
    let mut representatives = Vec::new();
    while let Some(&(x, y)) = remaining.iter().next() {
        representatives.push(transposition(x, y));
        for a in &elements {
            let sigma = &psi[a];
            let (u, v) = (sigma.apply(x), sigma.apply(y));
            remaining.remove(&(u.min(v), u.max(v)));
        }
    }
    let mut m = ell.max(index_maps.len() + 1);
    while binomial(m, ell) < representatives.len() {
        m += 1;
    }
    let side = 2 * m;
    let dims = vec![side; ell];
    let id = Permutation::identity(n);
    let mut columns = vec![id; side.pow(ell as u32)];
    for (k, eta) in index_maps.iter().enumerate() {
        let pair = k + 1;
        for x in box_points(&dims) {
            if x.iter().all(|&c| c == pair || c == side - 1 - pair) {
                let i = flatten(&x, &dims);
                let layered = (0..n).map(|a| letter(a / hsize, eta.apply(a % hsize))).collect();
                columns[i] = Permutation::from_images(layered)?;
            }
        }
    }
    let subsets = (0..m).combinations(ell);
    for (t, q) in representatives.iter().zip(subsets) {
        for (a, x) in orbit(&elements, side, &q)? {
            let sigma = lift(&psi[&a]);
            columns[flatten(&x, &dims)] = sigma.compose(&lift(t)).compose(&sigma.inverse());
        }
    }
    let s = cube_substitution(alphabet, ell, side, columns)?;
    let mut claims = group_claims(h, Some(elements), bounds)?;
    claims.exchanges_outside_c = true;
    certify(ConstructionKind::Nonid, s, claims, bounds)
}

/// Columns `ε_0, ε_1, …, ε_n, id` on `nk` letters: `ε_0` shifts indices by
/// `k`, `ε_i` rotates each run `a_{bk+i}, …, a_{bk+i+k-1}` (indices mod `nk`).
pub fn tower_columns(n: usize, k: usize) -> Vec<Permutation> {
    let size = n * k;
    let mut out = vec![Permutation::from_images((0..size).map(|a| (a + k) % size).collect()).expect("shift")];
    for i in 0..n {
        let mut image: Vec<usize> = (0..size).collect();
        for b in 0..n {
            for j in 0..k {
                let from = (b * k + i + j) % size;
                let to = (b * k + i + (j + 1) % k) % size;
                image[from] = to;
            }
        }
        out.push(Permutation::from_images(image).expect("runs"));
    }
    out
}

/// `ℤ^n × C_k` with the coordinate `n`-cycle realized by an exchange of
/// order `nk`. Side `2n + 2`; `ε_i` sits at `A^{i-1}·(1, …, n)` and `ε_0`
/// fills the whole `W_n`-orbit of `(0, 2, 3, …, n)`.
pub fn construct_cyclic_tower(n: usize, k: usize, bounds: &Bounds) -> Result<ConstructionCertificate> {
    if n < 2 || k < 2 {
        return Err(Error::BadDimension(format!("tower needs n, k ≥ 2, got n = {n}, k = {k}")));
    }
    if n > bounds.max_dimension {
        return Err(Error::DimensionTooLarge { dim: n, bound: bounds.max_dimension });
    }
    let cols = tower_columns(n, k);
    let alphabet = Alphabet::new((1..=n * k).map(|i| format!("a{i}")))?;
    let side = 2 * n + 2;
    let dims = vec![side; n];
    let mut columns = vec![Permutation::identity(n * k); side.pow(n as u32)];
    let all = enumerate_hyperoctahedral(n, bounds.max_dimension)?;
    let q: Vec<usize> = std::iter::once(0).chain(2..=n).collect();
    for (_, x) in orbit(&all, side, &q)? {
        columns[flatten(&x, &dims)] = cols[0].clone();
    }
    let cycle = SignedPermMatrix::coordinate_cycle(n);
    let mut x: Vec<usize> = (1..=n).collect();
    let shape = Shape::new(dims.clone())?;
    for col in &cols[1..] {
        columns[flatten(&x, &dims)] = col.clone();
        x = affine_position_map(&cycle, &shape, 1, &x)?;
    }
    let s = cube_substitution(alphabet, n, side, columns)?;
    let cyclic = GroupSpec::cyclic(k);
    let mut claims = group_claims(&cyclic, Some(matrix_closure(n, &[cycle])?), bounds)?;
    claims.reversor_order = Some(n * k);
    certify(ConstructionKind::CyclicTower, s, claims, bounds)
}

/// The nine-letter cube of side 3 with `ε_2, ε_3, ε_4` on the coordinate-cycle
/// orbit of `(0, 1, 2)`, `ε_0` on the orbit of `(1, 1, 0)`, `ε_1` on the orbit
/// of `(1, 1, 2)`, and identity columns elsewhere.
pub fn epsilon_example() -> Substitution {
    let alphabet = Alphabet::standard(9);
    let col = |text: &str| parse_cycles(text, &alphabet).expect("valid cycles");
    let eps = [
        col("(a d g)(b e h)(c f i)"),
        col("(a g d)(b h e)(c i f)"),
        col("(a b c)(d e f)(g h i)"),
        col("(b c d)(e f g)(h i a)"),
        col("(c d e)(f g h)(i a b)"),
    ];
    let dims = [3, 3, 3];
    let mut columns = vec![Permutation::identity(9); 27];
    let rotations = |x: [usize; 3]| [x, [x[2], x[0], x[1]], [x[1], x[2], x[0]]];
    for x in rotations([1, 1, 0]) {
        columns[flatten(&x, &dims)] = eps[0].clone();
    }
    for x in rotations([1, 1, 2]) {
        columns[flatten(&x, &dims)] = eps[1].clone();
    }
    for (x, e) in [[0, 1, 2], [1, 2, 0], [2, 0, 1]].iter().zip(&eps[2..]) {
        columns[flatten(x, &dims)] = e.clone();
    }
    Substitution::new(alphabet, Shape::new(dims.to_vec()).expect("cube"), columns).expect("bijective")
}

/// Four letters on a cube of side 6: the six 4-cycles of `S_4`, with
/// `ψ(σ)(a b c d)ψ(σ)⁻¹` at `σ·(0, 1, 2)`, where `σ` permutes the axes and
/// `ψ(σ)` permutes `b, c, d` the same way.
pub fn s4_cube_example() -> Substitution {
    let alphabet = Alphabet::standard(4);
    let four_cycle = parse_cycles("(a b c d)", &alphabet).expect("valid cycle");
    let dims = [6, 6, 6];
    let shape = Shape::new(dims.to_vec()).expect("cube");
    let mut columns = vec![Permutation::identity(4); 216];
    for sigma in symmetric_group(3) {
        let a = SignedPermMatrix::from_axis_permutation(&sigma);
        let x = affine_position_map(&a, &shape, 1, &[0, 1, 2]).expect("square shape");
        let mut image = vec![0; 4];
        for j in 0..3 {
            image[j + 1] = sigma.apply(j) + 1;
        }
        let psi = Permutation::from_images(image).expect("lift");
        columns[flatten(&x, &dims)] = psi.compose(&four_cycle).compose(&psi.inverse());
    }
    Substitution::new(alphabet, shape, columns).expect("bijective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fingerprint(pairs: &[(usize, usize)]) -> OrderFingerprint {
        OrderFingerprint(pairs.iter().copied().collect())
    }

    #[test]
    fn presets() {
        let b = Bounds::default();
        assert_eq!(GroupSpec::quaternion().group(&b).unwrap().fingerprint(), fingerprint(&[(1, 1), (2, 1), (4, 6)]));
        assert_eq!(GroupSpec::klein().group(&b).unwrap().fingerprint(), fingerprint(&[(1, 1), (2, 3)]));
        assert_eq!(GroupSpec::symmetric(3).group(&b).unwrap().order(), 6);
        assert_eq!(GroupSpec::cyclic(5).group(&b).unwrap().order(), 5);
        assert_eq!(GroupSpec::trivial().group(&b).unwrap().order(), 1);
        assert_eq!(GroupSpec::quaternion().minimal_generators(&b).unwrap().len(), 2);
    }

    #[test]
    fn quaternion_products() {
        assert_eq!(quaternion_product(1, 2), 3);
        assert_eq!(quaternion_product(2, 1), 7);
        assert_eq!(quaternion_product(1, 1), 4);
        assert_eq!(quaternion_product(5, 5), 4);
    }

    #[test]
    fn parsing() {
        assert_eq!(GroupSpec::parse("c3").unwrap(), GroupSpec::cyclic(3));
        assert_eq!(GroupSpec::parse("Quaternion").unwrap(), GroupSpec::quaternion());
        assert_eq!(GroupSpec::parse("s4").unwrap(), GroupSpec::symmetric(4));
        let explicit = GroupSpec::parse("(a b c);(a b)").unwrap();
        assert_eq!(explicit.degree, 3);
        assert_eq!(explicit.group(&Bounds::default()).unwrap().order(), 6);
        assert!(GroupSpec::parse("dodecahedral").is_err());
        assert_eq!(WdSubgroupSpec::parse("c4", 2).unwrap().elements().unwrap().len(), 4);
        assert_eq!(WdSubgroupSpec::parse("full", 3).unwrap().elements().unwrap().len(), 48);
        assert_eq!(WdSubgroupSpec::parse("v4", 2).unwrap().elements().unwrap().len(), 4);
        assert_eq!(WdSubgroupSpec::parse("(+2,-1);(-1,+2)", 2).unwrap().elements().unwrap().len(), 8);
        assert!(WdSubgroupSpec::parse("c4", 1).is_err());
        let rot: SignedPermMatrix = "(+2,-1)".parse().unwrap();
        assert!(matches!(
            WdSubgroupSpec::from_elements(2, vec![SignedPermMatrix::identity(2), rot]),
            Err(Error::PNotSubgroup(_))
        ));
    }

    #[test]
    fn cayley() {
        let b = Bounds::default();
        let c3 = construct_cayley_1d(&GroupSpec::cyclic(3), &b).unwrap();
        assert_eq!(c3.substitution.n(), 3);
        assert_eq!(c3.extended.symmetry.group.order(), 3);
        assert!(c3.substitution.columns()[0].is_identity());
        let q = construct_cayley_1d(&GroupSpec::quaternion(), &b).unwrap();
        assert_eq!(q.substitution.shape().lengths(), [4]);
        assert_eq!(q.substitution.alphabet().letters()[..4], ["e", "i", "j", "k"]);
        assert_eq!(q.extended.symmetry.fingerprint, fingerprint(&[(1, 1), (2, 1), (4, 6)]));
        let c2 = construct_cayley_1d(&GroupSpec::cyclic(2), &b).unwrap();
        let names: Vec<String> =
            c2.extended.symmetry.group.elements().iter().map(|p| p.format(c2.substitution.alphabet())).collect();
        assert_eq!(names, ["", "(a b)"]);
        assert_eq!(construct_cayley_1d(&GroupSpec::trivial(), &b).unwrap_err(), Error::TrivialGroup);
    }

    #[test]
    fn shell_geometry() {
        let b = Bounds::default();
        let q = GroupSpec::quaternion();
        let gens = q.minimal_generators(&b).unwrap();
        let p = WdSubgroupSpec::parse("c4", 2).unwrap();
        let cert = construct_shell(&q, &gens, &p, 2, &b).unwrap();
        let s = &cert.substitution;
        assert_eq!(s.shape().lengths(), [10, 10]);
        for corner in [[0, 0], [0, 9], [9, 0], [9, 9]] {
            assert!(s.column_at(&corner).unwrap().is_identity());
        }
        assert!(!s.column_at(&[0, 1]).unwrap().is_identity());
        assert!(s.column_at(&[1, 0]).unwrap().is_identity());
        assert_eq!(cert.extended.quotient, p.elements().unwrap());
        assert_eq!(cert.extended.symmetry.group.order(), 8);
    }

    #[test]
    fn shell_without_orbit_constraints() {
        let b = Bounds::default();
        let g = GroupSpec::cyclic(3);
        let cert = construct_shell(&g, &g.generators, &WdSubgroupSpec::parse("trivial", 2).unwrap(), 2, &b).unwrap();
        assert_eq!(cert.extended.quotient, vec![SignedPermMatrix::identity(2)]);
        assert_eq!(cert.extended.symmetry.group.order(), 3);
    }

    #[test]
    fn shell_trivial_group() {
        let b = Bounds::default();
        let cert = construct_shell(&GroupSpec::trivial(), &[], &WdSubgroupSpec::parse("full", 2).unwrap(), 2, &b).unwrap();
        assert_eq!(cert.substitution.n(), 3);
        assert_eq!(cert.extended.symmetry.group.order(), 1);
        assert_eq!(cert.extended.quotient.len(), 8);
    }

    #[test]
    fn cantor() {
        let b = Bounds::default();
        let q = GroupSpec::quaternion();
        let v4 = WdSubgroupSpec::parse("v4", 2).unwrap();
        let cert = construct_cantor(&q, &q.generators, &v4, 2, &b).unwrap();
        assert_eq!(cert.substitution.shape().lengths(), [216, 216]);
        assert_eq!(cert.extended.quotient, v4.elements().unwrap());
        let c2 = GroupSpec::cyclic(2);
        let one = construct_cantor(&c2, &c2.generators, &WdSubgroupSpec::parse("pm", 1).unwrap(), 1, &b).unwrap();
        assert_eq!(one.extended.quotient.len(), 2);
        let plain = construct_cantor(&c2, &c2.generators, &WdSubgroupSpec::parse("trivial", 2).unwrap(), 2, &b).unwrap();
        assert_eq!(plain.extended.quotient.len(), 1);
    }

    #[test]
    fn tower_of_order_nine() {
        let cert = construct_cyclic_tower(3, 3, &Bounds::default()).unwrap();
        assert_eq!(cert.substitution.n(), 9);
        assert_eq!(cert.max_reversor_order, 9);
        assert_eq!(cert.extended.quotient.len(), 3);
    }

    #[test]
    fn towers_with_larger_letter_groups_fail_verification() {
        // For (2, 2) the runs generate a regular Klein group, so C has order 4;
        // for (3, 2) they generate a regular S_3.
        let b = Bounds::default();
        for (n, k, order) in [(2, 2, 4), (3, 2, 3)] {
            let cols = tower_columns(n, k);
            assert_eq!(crate::perm::centralizer_of_set(&cols, 10).unwrap().order(), order);
            assert!(matches!(construct_cyclic_tower(n, k, &b), Err(Error::VerificationFailed(_))));
        }
    }

    #[test]
    fn tower_columns_follow_the_runs() {
        let cols = tower_columns(3, 3);
        let a = Alphabet::new((1..=9).map(|i| format!("a{i}"))).unwrap();
        assert_eq!(cols[0].format(&a), "(a1 a4 a7)(a2 a5 a8)(a3 a6 a9)");
        assert_eq!(cols[1].format(&a), "(a1 a2 a3)(a4 a5 a6)(a7 a8 a9)");
        assert_eq!(cols[2].format(&a), "(a1 a8 a9)(a2 a3 a4)(a5 a6 a7)");
    }

    #[test]
    fn nonid() {
        let b = Bounds::default();
        let c3 = WdSubgroupSpec::parse("(+2,+3,+1,+4)", 4).unwrap();
        let cert = construct_nonid(&GroupSpec::cyclic(2), &c3, 4, &b).unwrap();
        assert_eq!(cert.substitution.n(), 8);
        assert_eq!(cert.extended.symmetry.group.order(), 2);
        assert_eq!(cert.extended.quotient, c3.elements().unwrap());
        let c2 = WdSubgroupSpec::parse("(+2,+1,+3,+4)", 4).unwrap();
        let plain = construct_nonid(&GroupSpec::trivial(), &c2, 4, &b).unwrap();
        assert_eq!(plain.extended.quotient.len(), 2);
        for ell in [2, 3, 6] {
            let p = WdSubgroupSpec::parse("trivial", ell).unwrap();
            assert!(matches!(construct_nonid(&GroupSpec::cyclic(2), &p, ell, &b), Err(Error::BadDimension(_))));
        }
    }

    #[test]
    fn embeddings() {
        let c3 = WdSubgroupSpec::parse("cyc", 3).unwrap();
        let map = embed_in_symmetric(&c3, 4).unwrap().unwrap();
        assert_eq!(map.len(), 3);
        let full = WdSubgroupSpec::parse("full", 2).unwrap();
        assert!(embed_in_symmetric(&full, 3).unwrap().is_none());
        assert!(embed_in_symmetric(&full, 4).unwrap().is_some());
    }

    #[test]
    fn example_files_match_builders() {
        assert_eq!(fixtures::epsilon_3d(), epsilon_example());
        assert_eq!(fixtures::s4_cube(), s4_cube_example());
    }
}
