//! Bijective rectangular substitutions.
//!
//! Positions in a box with side lengths `dims` are flattened row-major, the
//! last coordinate varying fastest. A level-`k` position `i` has `Q`-adic
//! digits `i_0, …, i_{k-1}` (least significant first) and its column is
//! `ϱ_{i_0} ∘ ϱ_{i_1} ∘ … ∘ ϱ_{i_{k-1}}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Alphabet, Permutation};

pub fn box_volume(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub fn flatten(coords: &[usize], dims: &[usize]) -> usize {
    coords.iter().zip(dims).fold(0, |acc, (&c, &l)| acc * l + c)
}

pub fn unflatten(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; dims.len()];
    for (c, &l) in coords.iter_mut().zip(dims).rev() {
        *c = index % l;
        index /= l;
    }
    coords
}

/// Every coordinate vector of the box, in flat order.
pub fn box_points(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..box_volume(dims)).map(move |i| unflatten(i, dims))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Shape {
    lengths: Vec<usize>,
}

impl Shape {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::BadShape("no dimensions".into()));
        }
        if let Some(l) = lengths.iter().find(|&&l| l < 2) {
            return Err(Error::BadShape(format!("side length {l} is below 2")));
        }
        Ok(Shape { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn volume(&self) -> usize {
        box_volume(&self.lengths)
    }

    /// Side lengths `L_i^k` of the level-`k` support, if they fit in `usize`.
    pub fn level_lengths(&self, k: usize) -> Option<Vec<usize>> {
        self.lengths.iter().map(|&l| l.checked_pow(k as u32)).collect()
    }

    pub fn level_volume(&self, k: usize) -> Option<u128> {
        self.lengths
            .iter()
            .try_fold(1u128, |acc, &l| (l as u128).checked_pow(k as u32).and_then(|p| acc.checked_mul(p)))
    }

    /// Level-one digit positions of a level-`k` position, least significant first.
    pub fn digits(&self, coords: &[usize], k: usize) -> Result<Vec<Vec<usize>>> {
        self.check_inside(coords, k)?;
        let mut rest = coords.to_vec();
        let mut digits = Vec::with_capacity(k);
        for _ in 0..k {
            digits.push(rest.iter().zip(&self.lengths).map(|(&c, &l)| c % l).collect());
            for (c, &l) in rest.iter_mut().zip(&self.lengths) {
                *c /= l;
            }
        }
        Ok(digits)
    }

    pub fn from_digits(&self, digits: &[Vec<usize>]) -> Vec<usize> {
        let mut coords = vec![0; self.dim()];
        for digit in digits.iter().rev() {
            for ((c, &l), &r) in coords.iter_mut().zip(&self.lengths).zip(digit) {
                *c = *c * l + r;
            }
        }
        coords
    }

    pub fn check_inside(&self, coords: &[usize], k: usize) -> Result<()> {
        let out = || Error::OutOfSupport { coords: coords.to_vec(), level: k };
        if coords.len() != self.dim() {
            return Err(out());
        }
        for (&c, &l) in coords.iter().zip(&self.lengths) {
            match l.checked_pow(k as u32) {
                Some(side) if c >= side => return Err(out()),
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A finite box of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Patch {
    pub dims: Vec<usize>,
    pub cells: Vec<usize>,
}

impl Patch {
    pub fn get(&self, coords: &[usize]) -> usize {
        self.cells[flatten(coords, &self.dims)]
    }

    /// All sub-boxes of shape `size`, in flat order of their corner.
    pub fn sub_patches<'a>(&'a self, size: &'a [usize]) -> impl Iterator<Item = Patch> + 'a {
        let range: Vec<usize> = self.dims.iter().zip(size).map(|(&d, &b)| (d + 1).saturating_sub(b)).collect();
        let count = if self.dims.iter().zip(size).any(|(&d, &b)| b > d) { 0 } else { box_volume(&range) };
        (0..count).map(move |o| {
            let origin = unflatten(o, &range);
            let cells = box_points(size)
                .map(|p| {
                    let q: Vec<usize> = p.iter().zip(&origin).map(|(a, b)| a + b).collect();
                    self.get(&q)
                })
                .collect();
            Patch { dims: size.to_vec(), cells }
        })
    }

    /// Number of cells where two equally shaped patches differ.
    pub fn hamming(&self, other: &Patch) -> usize {
        self.cells.iter().zip(&other.cells).filter(|(a, b)| a != b).count()
    }

    /// Letters as text; slices along the first axis are separated by `/`
    /// (`//` between 3D layers, and so on).
    pub fn format(&self, alphabet: &Alphabet) -> String {
        let compact = alphabet.letters().iter().all(|l| l.chars().count() == 1);
        fn go(dims: &[usize], cells: &[usize], alphabet: &Alphabet, compact: bool) -> String {
            if dims.len() == 1 {
                let letters: Vec<&str> = cells.iter().map(|&c| alphabet.letter(c)).collect();
                return letters.join(if compact { "" } else { " " });
            }
            let stride = box_volume(&dims[1..]);
            let sep = "/".repeat(dims.len() - 1);
            let parts: Vec<String> =
                cells.chunks(stride).map(|chunk| go(&dims[1..], chunk, alphabet, compact)).collect();
            parts.join(&sep)
        }
        go(&self.dims, &self.cells, alphabet, compact)
    }
}

/// On-disk form: `{"alphabet": [...], "shape": [...], "rule": {letter: [...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstitutionDocument {
    pub alphabet: Vec<String>,
    pub shape: Vec<usize>,
    pub rule: IndexMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    shape: Shape,
    columns: Vec<Permutation>,
}

/// `M[a][b]` counts the positions `j` with `ϱ_j(a) = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl SubstitutionMatrix {
    pub fn times_ones(&self) -> Vec<u64> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let n = self.entries.len();
        (0..n).map(|b| self.entries.iter().map(|row| row[b]).sum()).collect()
    }

    /// Some power has all entries positive (Wielandt bound `(n-1)^2 + 1`).
    pub fn is_primitive(&self) -> bool {
        let n = self.entries.len();
        let pattern: Vec<Vec<bool>> = self.entries.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut power = pattern.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if power.iter().all(|r| r.iter().all(|&x| x)) {
                return true;
            }
            power = (0..n)
                .map(|i| (0..n).map(|j| (0..n).any(|t| power[i][t] && pattern[t][j])).collect())
                .collect();
        }
        power.iter().all(|r| r.iter().all(|&x| x))
    }
}

impl Substitution {
    pub fn new(alphabet: Alphabet, shape: Shape, columns: Vec<Permutation>) -> Result<Self> {
        if alphabet.len() < 2 {
            return Err(Error::DegenerateAlphabet);
        }
        if columns.len() != shape.volume() {
            return Err(Error::ShapeMismatch {
                letter: "*".into(),
                found: columns.len(),
                expected: shape.volume(),
            });
        }
        for c in &columns {
            if c.degree() != alphabet.len() {
                return Err(Error::SizeMismatch(alphabet.len(), c.degree()));
            }
        }
        Ok(Substitution { alphabet, shape, columns })
    }

    pub fn from_document(doc: &SubstitutionDocument) -> Result<Self> {
        let alphabet = Alphabet::new(doc.alphabet.iter().cloned())?;
        if alphabet.len() < 2 {
            return Err(Error::DegenerateAlphabet);
        }
        let shape = Shape::new(doc.shape.clone())?;
        for key in doc.rule.keys() {
            if alphabet.index_of(key).is_none() {
                return Err(Error::UnknownLetter(key.clone()));
            }
        }
        let n = alphabet.len();
        let volume = shape.volume();
        let mut table = vec![vec![0usize; n]; volume];
        for (a, letter) in alphabet.letters().iter().enumerate() {
            let word = doc.rule.get(letter).ok_or_else(|| Error::MissingRule(letter.clone()))?;
            if word.len() != volume {
                return Err(Error::ShapeMismatch { letter: letter.clone(), found: word.len(), expected: volume });
            }
            for (j, token) in word.iter().enumerate() {
                table[j][a] = alphabet.index_of(token).ok_or_else(|| Error::UnknownLetter(token.clone()))?;
            }
        }
        let mut columns = Vec::with_capacity(volume);
        for (j, image) in table.into_iter().enumerate() {
            let column = Permutation::from_images(image)
                .map_err(|_| Error::NotBijectiveColumn(unflatten(j, shape.lengths())))?;
            columns.push(column);
        }
        Substitution::new(alphabet, shape, columns)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SubstitutionDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Substitution::from_document(&doc)
    }

    pub fn to_document(&self) -> SubstitutionDocument {
        let rule = (0..self.n())
            .map(|a| {
                let word = self.columns.iter().map(|c| self.alphabet.letter(c.apply(a)).to_string()).collect();
                (self.alphabet.letter(a).to_string(), word)
            })
            .collect();
        SubstitutionDocument {
            alphabet: self.alphabet.letters().to_vec(),
            shape: self.shape.lengths().to_vec(),
            rule,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents always serialize")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.alphabet.len()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn columns(&self) -> &[Permutation] {
        &self.columns
    }

    pub fn column_at(&self, coords: &[usize]) -> Result<&Permutation> {
        self.shape.check_inside(coords, 1)?;
        Ok(&self.columns[flatten(coords, self.shape.lengths())])
    }

    /// Column of `ϱ^k` at a level-`k` position, composed digit by digit.
    pub fn power_column(&self, k: usize, coords: &[usize]) -> Result<Permutation> {
        let digits = self.shape.digits(coords, k)?;
        let mut acc = Permutation::identity(self.n());
        for digit in digits.iter().rev() {
            acc = self.columns[flatten(digit, self.shape.lengths())].compose(&acc);
        }
        Ok(acc)
    }

    /// One application of the substitution to a patch.
    pub fn apply(&self, patch: &Patch) -> Patch {
        let lengths = self.shape.lengths();
        let dims: Vec<usize> = patch.dims.iter().zip(lengths).map(|(a, b)| a * b).collect();
        let mut cells = vec![0; box_volume(&dims)];
        for (x, &letter) in box_points(&patch.dims).zip(&patch.cells) {
            for (r, column) in box_points(lengths).zip(&self.columns) {
                let target: Vec<usize> = x.iter().zip(&r).zip(lengths).map(|((xi, ri), l)| xi * l + ri).collect();
                cells[flatten(&target, &dims)] = column.apply(letter);
            }
        }
        Patch { dims, cells }
    }

    /// `ϱ^k(a)` by explicit rewriting.
    pub fn supertile(&self, letter: usize, k: usize, cell_limit: u128) -> Result<Patch> {
        let cells = self.shape.level_volume(k).unwrap_or(u128::MAX);
        if cells > cell_limit {
            return Err(Error::LevelTooLarge { level: k, cells, limit: cell_limit });
        }
        let mut patch = Patch { dims: vec![1; self.dim()], cells: vec![letter] };
        for _ in 0..k {
            patch = self.apply(&patch);
        }
        Ok(patch)
    }

    /// Distinct columns of `ϱ^k`, sorted.
    pub fn distinct_power_columns(&self, k: usize) -> Vec<Permutation> {
        let base: BTreeSet<Permutation> = self.columns.iter().cloned().collect();
        let mut level: BTreeSet<Permutation> = BTreeSet::from([Permutation::identity(self.n())]);
        for _ in 0..k {
            level = base.iter().flat_map(|s| level.iter().map(move |t| s.compose(t))).collect();
        }
        level.into_iter().collect()
    }

    pub fn substitution_matrix(&self) -> SubstitutionMatrix {
        let n = self.n();
        let mut entries = vec![vec![0u64; n]; n];
        for column in &self.columns {
            for (a, row) in entries.iter_mut().enumerate() {
                row[column.apply(a)] += 1;
            }
        }
        SubstitutionMatrix { entries }
    }

    /// Legal patches of the given box shape.
    ///
    /// Boxes of side at most 2 are found by iterating "boxes of level `k`
    /// supertiles" until two consecutive levels agree. Larger boxes are cut
    /// from the images of smaller legal boxes that cover them.
    pub fn legal_blocks(&self, size: &[usize], kmax: usize) -> Result<LegalBlocks> {
        if size.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: size.len() });
        }
        if size.contains(&0) {
            return Err(Error::BadShape("empty box".into()));
        }
        let cover: Vec<usize> = size.iter().zip(self.shape.lengths()).map(|(&b, &l)| (b + l - 2) / l + 1).collect();
        if cover != size {
            let inner = self.legal_blocks(&cover, kmax)?;
            let patches = self.windows(&inner.patches, size);
            return Ok(LegalBlocks { size: size.to_vec(), level: inner.level + 1, patches });
        }
        let letters: BTreeSet<Patch> = (0..self.n()).map(|a| Patch { dims: vec![1; self.dim()], cells: vec![a] }).collect();
        let mut current = self.windows(&letters, size);
        let mut k = 1;
        loop {
            let next = self.windows(&current, size);
            if next == current {
                return Ok(LegalBlocks { size: size.to_vec(), level: k, patches: current });
            }
            k += 1;
            if k > kmax {
                return Err(Error::NotStabilized(kmax));
            }
            current = next;
        }
    }

    /// All `size`-boxes inside `ϱ(P)` for `P` in `source`. A box with
    /// offset `r` inside its first supertile only sees a sub-block of `P`,
    /// so distinct sub-blocks are expanded once per offset.
    fn windows(&self, source: &BTreeSet<Patch>, size: &[usize]) -> BTreeSet<Patch> {
        let lengths = self.shape.lengths();
        let Some(src_dims) = source.iter().next().map(|p| p.dims.clone()) else {
            return BTreeSet::new();
        };
        let mut sub_blocks: HashMap<Vec<usize>, BTreeSet<Patch>> = HashMap::new();
        let mut out = BTreeSet::new();
        for r in box_points(lengths) {
            let span: Vec<usize> = r.iter().zip(size).zip(lengths).map(|((&ri, &b), &l)| (ri + b - 1) / l + 1).collect();
            if span.iter().zip(&src_dims).any(|(s, d)| s > d) {
                continue;
            }
            let blocks = sub_blocks
                .entry(span.clone())
                .or_insert_with(|| source.iter().flat_map(|p| p.sub_patches(&span).collect::<Vec<_>>()).collect());
            for block in blocks.iter() {
                let cells = box_points(size)
                    .map(|w| {
                        let mut cell = Vec::with_capacity(w.len());
                        let mut digit = Vec::with_capacity(w.len());
                        for ((&wi, &ri), &l) in w.iter().zip(&r).zip(lengths) {
                            cell.push((wi + ri) / l);
                            digit.push((wi + ri) % l);
                        }
                        self.columns[flatten(&digit, lengths)].apply(block.get(&cell))
                    })
                    .collect();
                out.insert(Patch { dims: size.to_vec(), cells });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalBlocks {
    pub size: Vec<usize>,
    /// Level at which the set stopped changing.
    pub level: usize,
    pub patches: BTreeSet<Patch>,
}

impl LegalBlocks {
    pub fn contains(&self, p: &Patch) -> bool {
        self.patches.contains(p)
    }

    /// A pair of distinct legal blocks that differ in exactly one cell.
    pub fn one_cell_pair(&self) -> Option<(Patch, Patch)> {
        (0..box_volume(&self.size)).find_map(|masked| self.pair_agreeing_on(|cell| cell != masked))
    }

    /// A pair of distinct legal blocks that agree on every cell whose
    /// `axis` coordinate equals `side`.
    pub fn half_space_pair(&self, axis: usize, side: usize) -> Option<(Patch, Patch)> {
        let size = &self.size;
        self.pair_agreeing_on(|cell| unflatten(cell, size)[axis] == side)
    }

    fn pair_agreeing_on(&self, keep: impl Fn(usize) -> bool) -> Option<(Patch, Patch)> {
        let kept: Vec<usize> = (0..box_volume(&self.size)).filter(|&c| keep(c)).collect();
        let mut keyed: HashMap<Vec<usize>, &Patch> = HashMap::new();
        for p in &self.patches {
            let key: Vec<usize> = kept.iter().map(|&c| p.cells[c]).collect();
            if let Some(q) = keyed.get(&key) {
                return Some(((*q).clone(), p.clone()));
            }
            keyed.insert(key, p);
        }
        None
    }
}
