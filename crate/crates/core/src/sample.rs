//! Random bijective substitutions for property testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::perm::{Alphabet, Permutation};
use crate::subst::{Shape, Substitution};

/// Uniform columns over a uniformly chosen `n ∈ [2, max_n]` and
/// `L ∈ [2, max_length]`.
pub fn random_bijective_1d<R: Rng>(rng: &mut R, max_n: usize, max_length: usize) -> Substitution {
    let n = rng.gen_range(2..=max_n.max(2));
    let l = rng.gen_range(2..=max_length.max(2));
    let columns = (0..l)
        .map(|_| {
            let mut image: Vec<usize> = (0..n).collect();
            image.shuffle(rng);
            Permutation::from_images(image).expect("shuffled identity")
        })
        .collect();
    Substitution::new(Alphabet::standard(n), Shape::new(vec![l]).expect("l ≥ 2"), columns).expect("bijective columns")
}
