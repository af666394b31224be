//! Permutations of a finite alphabet and the small amount of group theory
//! built on top of them.
//!
//! Letters are indices `0..n`. [`Permutation::compose`] follows function
//! notation: `p.compose(&q)` maps `x` to `p(q(x))`, so `q` acts first.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return Err(Error::NotBijection(image));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// Product of the given cycles, rightmost cycle applied first.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Permutation::identity(n);
        for cycle in cycles {
            let mut image: Vec<usize> = (0..n).collect();
            for (t, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::NotBijection(cycle.clone()));
                }
                image[x] = cycle[(t + 1) % cycle.len()];
            }
            acc = acc.compose(&Permutation::from_images(image)?);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ q`. Panics if the degrees differ; see [`Permutation::try_compose`].
    pub fn compose(&self, q: &Permutation) -> Permutation {
        assert_eq!(self.degree(), q.degree(), "composing permutations of different degree");
        Permutation { image: q.image.iter().map(|&x| self.image[x]).collect() }
    }

    pub fn try_compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree() != q.degree() {
            return Err(Error::SizeMismatch(self.degree(), q.degree()));
        }
        Ok(self.compose(q))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }

    /// `κ⁻¹ ∘ self ∘ κ`.
    pub fn conjugate_by(&self, kappa: &Permutation) -> Permutation {
        kappa.inverse().compose(self).compose(kappa)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.degree() == other.degree()
            && self.image.iter().enumerate().all(|(x, &y)| other.image[y] == self.image[other.image[x]])
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|(x, y)| x == *y).count()
    }

    pub fn cycles(&self) -> CycleDecomposition {
        CycleDecomposition { cycles: canonical_cycles(self, false) }
    }

    /// All cycle lengths, fixed points included, in ascending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        canonical_cycles(self, true).iter().map(Vec::len).collect()
    }

    /// Cycle notation over `alphabet`; the identity renders as the empty string.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        self.cycles()
            .cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|&x| alphabet.letter(x)).join(" ")))
            .collect()
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Canonical cycles: each rotated to start at its minimum, sorted by
/// (length, first element).
fn canonical_cycles(p: &Permutation, include_fixed: bool) -> Vec<Vec<usize>> {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p.apply(start);
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p.apply(x);
        }
        if include_fixed || cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    cycles.sort_by_key(|c| (c.len(), c[0]));
    cycles
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn to_permutation(&self, n: usize) -> Result<Permutation> {
        Permutation::from_cycles(n, &self.cycles)
    }
}

/// Named letters with their canonical indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
                return Err(Error::InvalidLetter(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLetter(l.clone()));
            }
        }
        Ok(Alphabet { letters, index })
    }

    /// Letters `a, b, c, …` for `n ≤ 26`, otherwise `x0, x1, …`.
    pub fn standard(n: usize) -> Self {
        let letters: Vec<String> = if n <= 26 {
            (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (0..n).map(|i| format!("x{i}")).collect()
        };
        Alphabet::new(letters).expect("standard letters are valid")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.index.get(letter).copied()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

/// Parses cycle notation such as `"(a b c)(d e)"`. Cycles are multiplied
/// right to left, so disjoint input gives the obvious permutation.
pub fn parse_cycles(text: &str, alphabet: &Alphabet) -> Result<Permutation> {
    let n = alphabet.len();
    let mut result = Permutation::identity(n);
    let mut chars = text.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => break,
            Some('(') => {}
            Some(c) => return Err(Error::MalformedSyntax(format!("expected `(`, found `{c}`"))),
        }
        let mut body = String::new();
        loop {
            match chars.next() {
                None => return Err(Error::MalformedSyntax("unclosed cycle".into())),
                Some(')') => break,
                Some('(') => return Err(Error::MalformedSyntax("nested `(`".into())),
                Some(c) => body.push(c),
            }
        }
        let mut cycle = Vec::new();
        for token in body.split_whitespace() {
            let x = alphabet.index_of(token).ok_or_else(|| Error::UnknownLetter(token.to_string()))?;
            if cycle.contains(&x) {
                return Err(Error::RepeatedLetterInCycle(token.to_string()));
            }
            cycle.push(x);
        }
        if cycle.len() < 2 {
            return Err(Error::MalformedSyntax(format!("cycle `({body})` needs at least two letters")));
        }
        result = result.compose(&Permutation::from_cycles(n, &[cycle])?);
    }
    Ok(result)
}

/// Element-order histogram of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderFingerprint(pub BTreeMap<usize, usize>);

impl OrderFingerprint {
    pub fn of<'a>(elements: impl IntoIterator<Item = &'a Permutation>) -> Self {
        let mut h = BTreeMap::new();
        for p in elements {
            *h.entry(p.order()).or_insert(0) += 1;
        }
        OrderFingerprint(h)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

impl fmt::Display for OrderFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.0.iter().map(|(o, c)| format!("{o}:{c}")).join(", ");
        write!(f, "{{{parts}}}")
    }
}

/// A finite permutation group stored with its full, sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        PermGroup { degree: n, generators: Vec::new(), elements: vec![Permutation::identity(n)] }
    }

    /// Builds a group from a complete element set; a small generating set
    /// is extracted greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            generators.push(e.clone());
            span = bfs_closure(degree, &generators, usize::MAX).expect("unbounded closure");
        }
        PermGroup { degree, generators, elements }
    }

    fn with_parts(degree: usize, generators: Vec<Permutation>, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        PermGroup { degree, generators, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.apply(x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    pub fn fingerprint(&self) -> OrderFingerprint {
        OrderFingerprint::of(&self.elements)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let (small, large) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        let elements = small.elements.iter().filter(|e| large.contains(e)).cloned().collect();
        PermGroup::from_elements(self.degree, elements)
    }

    /// Whether every non-identity element moves every letter.
    pub fn acts_freely(&self) -> bool {
        self.elements.iter().all(|g| g.is_identity() || g.fixed_points() == 0)
    }
}

fn bfs_closure(degree: usize, gens: &[Permutation], limit: usize) -> Result<HashSet<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::AlphabetTooLarge { required: seen.len() as u128 + 1, limit: limit as u128 });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

fn enumeration_limit(bound: usize) -> u128 {
    factorial(bound)
}

/// The group generated by `gens` on `degree` letters. Fails once the group
/// grows past `bound!` elements.
pub fn closure(degree: usize, gens: &[Permutation], bound: usize) -> Result<PermGroup> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::SizeMismatch(degree, g.degree()));
        }
    }
    let limit = usize::try_from(enumeration_limit(bound)).unwrap_or(usize::MAX);
    let set = bfs_closure(degree, gens, limit)?;
    let gens = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    Ok(PermGroup::with_parts(degree, gens, set.into_iter().collect()))
}

/// `|cent_{S_n}(p)| = ∏_k k^{m_k} m_k!` where `m_k` counts `k`-cycles.
pub fn centralizer_order(p: &Permutation) -> u128 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for len in p.cycle_type() {
        *counts.entry(len).or_insert(0) += 1;
    }
    counts
        .iter()
        .map(|(&k, &m)| (k as u128).saturating_pow(m as u32).saturating_mul(factorial(m)))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// Centralizer of `p` in `S_n`, built from the cycle structure: permute
/// cycles of equal length and rotate inside each cycle.
pub fn centralizer_in_symmetric(p: &Permutation, bound: usize) -> Result<PermGroup> {
    let limit = enumeration_limit(bound);
    let required = centralizer_order(p);
    if required > limit {
        return Err(Error::AlphabetTooLarge { required, limit });
    }
    let n = p.degree();
    let all = canonical_cycles(p, true);
    let mut classes: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for c in all {
        classes.entry(c.len()).or_default().push(c);
    }
    let classes: Vec<Vec<Vec<usize>>> = classes.into_values().collect();

    let mut generators = Vec::new();
    for class in &classes {
        let k = class[0].len();
        let m = class.len();
        if k > 1 {
            generators.push(Permutation::from_cycles(n, &class[..1])?);
        }
        if m > 1 {
            let mut swap: Vec<usize> = (0..n).collect();
            let mut shift: Vec<usize> = (0..n).collect();
            for t in 0..k {
                swap[class[0][t]] = class[1][t];
                swap[class[1][t]] = class[0][t];
                for i in 0..m {
                    shift[class[i][t]] = class[(i + 1) % m][t];
                }
            }
            generators.push(Permutation { image: swap });
            if m > 2 {
                generators.push(Permutation { image: shift });
            }
        }
    }

    // Each class contributes (target cycle order, rotation per cycle) choices.
    let mut elements = Vec::with_capacity(required as usize);
    let mut image = vec![0usize; n];
    fill_centralizer(&classes, 0, &mut image, &mut elements);
    Ok(PermGroup::with_parts(n, generators, elements))
}

fn fill_centralizer(classes: &[Vec<Vec<usize>>], ci: usize, image: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if ci == classes.len() {
        out.push(Permutation { image: image.clone() });
        return;
    }
    let class = &classes[ci];
    let m = class.len();
    let k = class[0].len();
    for targets in (0..m).permutations(m) {
        for code in 0..k.pow(m as u32) {
            let mut rest = code;
            for i in 0..m {
                let rotation = rest % k;
                rest /= k;
                let dst = &class[targets[i]];
                for t in 0..k {
                    image[class[i][t]] = dst[(t + rotation) % k];
                }
            }
            fill_centralizer(classes, ci + 1, image, out);
        }
    }
}

/// Centralizer by filtering all of `S_n`; reference implementation.
pub fn centralizer_by_enumeration(gens: &[Permutation], n: usize, bound: usize) -> Result<Vec<Permutation>> {
    let limit = enumeration_limit(bound);
    if factorial(n) > limit {
        return Err(Error::AlphabetTooLarge { required: factorial(n), limit });
    }
    Ok(symmetric_group(n).filter(|t| gens.iter().all(|g| t.commutes_with(g))).collect())
}

/// All of `S_n` in lexicographic order of image arrays.
pub fn symmetric_group(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n).permutations(n).map(|image| Permutation { image })
}

/// `⋂_g cent(g)`. Enumerates the smallest single centralizer and filters it
/// against the remaining generators.
pub fn centralizer_of_set(gens: &[Permutation], bound: usize) -> Result<PermGroup> {
    let first = gens.first().ok_or_else(|| Error::Unsupported("empty generator list".into()))?;
    let n = first.degree();
    for g in gens {
        if g.degree() != n {
            return Err(Error::SizeMismatch(n, g.degree()));
        }
    }
    let pivot = gens.iter().min_by_key(|g| centralizer_order(g)).expect("non-empty");
    let base = centralizer_in_symmetric(pivot, bound)?;
    let elements: Vec<Permutation> =
        base.elements.into_iter().filter(|t| gens.iter().all(|g| t.commutes_with(g))).collect();
    Ok(PermGroup::from_elements(n, elements))
}

/// Some `κ` with `κ⁻¹ g κ = h`, obtained by aligning canonical cycles
/// (fixed points included). `None` iff the cycle types differ.
pub fn find_conjugator(g: &Permutation, h: &Permutation) -> Option<Permutation> {
    if g.degree() != h.degree() {
        return None;
    }
    let cg = canonical_cycles(g, true);
    let ch = canonical_cycles(h, true);
    if cg.iter().map(Vec::len).ne(ch.iter().map(Vec::len)) {
        return None;
    }
    let mut image = vec![0; g.degree()];
    for (a, b) in cg.iter().zip(&ch) {
        for (&x, &y) in a.iter().zip(b) {
            image[y] = x;
        }
    }
    Some(Permutation { image })
}

/// The right coset `subgroup ∘ representative`. The representative is kept
/// as the lexicographically least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightCoset {
    subgroup: PermGroup,
    representative: Permutation,
}

impl RightCoset {
    pub fn new(subgroup: PermGroup, representative: Permutation) -> Self {
        let least = subgroup
            .elements
            .iter()
            .map(|h| h.compose(&representative))
            .min()
            .expect("groups are non-empty");
        RightCoset { subgroup, representative: least }
    }

    pub fn subgroup(&self) -> &PermGroup {
        &self.subgroup
    }

    pub fn representative(&self) -> &Permutation {
        &self.representative
    }

    pub fn len(&self) -> usize {
        self.subgroup.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.representative.degree()
            && self.subgroup.contains(&p.compose(&self.representative.inverse()))
    }

    pub fn elements(&self) -> Vec<Permutation> {
        let mut v: Vec<Permutation> =
            self.subgroup.elements.iter().map(|h| h.compose(&self.representative)).collect();
        v.sort();
        v
    }
}

/// Intersection of right cosets, or `None` when empty. The smallest coset
/// is filtered through membership in all the others.
pub fn coset_intersection(cosets: &[RightCoset]) -> Option<RightCoset> {
    let smallest = cosets.iter().min_by_key(|c| c.len())?;
    let common: Vec<Permutation> =
        smallest.elements().into_iter().filter(|p| cosets.iter().all(|c| c.contains(p))).collect();
    let x0 = common.first()?.clone();
    let inv = x0.inverse();
    let degree = x0.degree();
    let sub = PermGroup::from_elements(degree, common.iter().map(|p| p.compose(&inv)).collect());
    Some(RightCoset::new(sub, x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::standard(3)
    }

    fn p(text: &str, a: &Alphabet) -> Permutation {
        parse_cycles(text, a).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let a = abc();
        let c = p("(a b c)", &a);
        assert_eq!(c.images(), &[1, 2, 0]);
        assert!(p("", &a).is_identity());
        assert_eq!(c.format(&a), "(a b c)");
        assert_eq!(p("(b c a)", &a), c);
        assert_eq!(Permutation::identity(3).format(&a), "");
    }

    #[test]
    fn parse_errors() {
        let a = abc();
        assert_eq!(parse_cycles("(a z)", &a), Err(Error::UnknownLetter("z".into())));
        assert_eq!(parse_cycles("(a b a)", &a), Err(Error::RepeatedLetterInCycle("a".into())));
        assert!(matches!(parse_cycles("(a b", &a), Err(Error::MalformedSyntax(_))));
        assert!(matches!(parse_cycles("a b", &a), Err(Error::MalformedSyntax(_))));
        assert!(matches!(parse_cycles("(a)", &a), Err(Error::MalformedSyntax(_))));
    }

    #[test]
    fn nine_letter_column() {
        let a = Alphabet::standard(9);
        let e0 = p("(a d g)(b e h)(c f i)", &a);
        assert_eq!(e0.images(), &[3, 4, 5, 6, 7, 8, 0, 1, 2]);
        assert_eq!(e0.order(), 3);
    }

    #[test]
    fn compose_convention() {
        let a = abc();
        assert_eq!(p("(a b)", &a).compose(&p("(b c)", &a)), p("(a b c)", &a));
        assert!(p("(a b c)", &a).compose(&p("(a c b)", &a)).is_identity());
        assert_eq!(parse_cycles("(a b)(b c)", &a).unwrap(), p("(a b c)", &a));
        let two = Permutation::identity(2);
        assert_eq!(two.try_compose(&Permutation::identity(3)), Err(Error::SizeMismatch(2, 3)));
    }

    #[test]
    fn decomposition_and_order() {
        let a = Alphabet::standard(6);
        let q = p("(a b c d)(e f)", &a);
        assert_eq!(q.cycles().cycles, vec![vec![4, 5], vec![0, 1, 2, 3]]);
        assert_eq!(q.order(), 4);
        assert!(Permutation::identity(4).cycles().cycles.is_empty());
        assert_eq!(q.cycles().to_permutation(6).unwrap(), q);
    }

    #[test]
    fn centralizers() {
        let a = abc();
        let c = centralizer_in_symmetric(&p("(a b c)", &a), 10).unwrap();
        assert_eq!(c.elements(), &[p("", &a), p("(a b c)", &a), p("(a c b)", &a)][..]);
        let t = centralizer_in_symmetric(&p("(a b)", &a), 10).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(centralizer_in_symmetric(&Permutation::identity(5), 10).unwrap().order(), 120);
        assert!(matches!(
            centralizer_in_symmetric(&Permutation::identity(11), 10),
            Err(Error::AlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn centralizer_formula_matches_enumeration_exhaustively() {
        for n in 1..=6 {
            for q in symmetric_group(n) {
                let fast = centralizer_in_symmetric(&q, 10).unwrap();
                let slow = centralizer_by_enumeration(std::slice::from_ref(&q), n, 10).unwrap();
                assert_eq!(fast.elements(), &slow[..], "{q:?}");
                assert_eq!(fast.order() as u128, centralizer_order(&q));
                let regenerated = closure(n, fast.generators(), 10).unwrap();
                assert_eq!(regenerated.elements(), fast.elements(), "{q:?}");
            }
        }
    }

    #[test]
    fn centralizer_of_symmetric_generators_is_trivial() {
        for n in 3..=6 {
            let gens = [
                Permutation::from_cycles(n, &[vec![0, 1]]).unwrap(),
                Permutation::from_cycles(n, &[(0..n).collect()]).unwrap(),
            ];
            assert_eq!(centralizer_of_set(&gens, 10).unwrap().order(), 1);
        }
    }

    #[test]
    fn conjugators() {
        let a = abc();
        let g = p("(a b c)", &a);
        let h = p("(a c b)", &a);
        let k = find_conjugator(&g, &h).unwrap();
        assert_eq!(k, p("(b c)", &a));
        assert_eq!(g.conjugate_by(&k), h);
        assert_eq!(find_conjugator(&p("", &a), &p("", &a)), Some(p("", &a)));
        assert_eq!(find_conjugator(&p("(a b)", &a), &g), None);
    }

    #[test]
    fn closure_and_transitivity() {
        let a = abc();
        let g = closure(3, &[p("(a b c)", &a)], 10).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_transitive());
        let t = closure(3, &[p("(a b)", &a)], 10).unwrap();
        assert_eq!(t.order(), 2);
        assert!(!t.is_transitive());
        assert_eq!(closure(3, &[], 10).unwrap().order(), 1);
    }

    #[test]
    fn coset_examples() {
        let a = abc();
        let c3 = closure(3, &[p("(a b c)", &a)], 10).unwrap();
        let id = Permutation::identity(3);
        let same = coset_intersection(&[RightCoset::new(c3.clone(), id.clone()), RightCoset::new(c3.clone(), id.clone())]);
        assert_eq!(same.unwrap().elements(), c3.elements().to_vec());

        let cab = centralizer_in_symmetric(&p("(a b)", &a), 10).unwrap();
        let k1 = RightCoset::new(cab.clone(), p("(a b c)", &a));
        assert_eq!(k1.elements(), vec![p("(b c)", &a), p("(a b c)", &a)]);
        let hit = coset_intersection(&[k1.clone(), RightCoset::new(c3, id.clone())]).unwrap();
        assert_eq!(hit.elements(), vec![p("(a b c)", &a)]);
        assert_eq!(hit.subgroup().order(), 1);

        assert!(coset_intersection(&[RightCoset::new(cab, id), k1]).is_none());
    }
}
