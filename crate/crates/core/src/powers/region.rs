//! Prefix-described subsets of a tree of reduced words.
//!
//! In a free product of copies of `ℤ` and `ℤ/2` the reduced words in the
//! letters `g^{±1}` form a tree, and the boolean algebra generated by
//! cylinders `Cyl(p) = {p·x reduced}` and finite sets has a canonical form:
//! pick a depth `d`, list the members shorter than `d` explicitly, and decide
//! longer words by their length-`d` prefix.

use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub factor: u16,
    pub inverse: bool,
}

/// Conversion between a family's labels and reduced letter words.
pub trait LetterCodec<L>: Send + Sync {
    fn alphabet(&self) -> &[Letter];
    fn inverse_letter(&self, l: Letter) -> Letter;
    fn to_letters(&self, label: &L) -> Vec<Letter>;
    fn from_letters(&self, word: &[Letter]) -> L;
}

pub type LetterWord = Vec<Letter>;

#[derive(Clone, Debug)]
pub struct WordTree {
    alphabet: Vec<Letter>,
    inverse: HashMap<Letter, Letter>,
}

impl WordTree {
    pub fn from_codec<L>(codec: &dyn LetterCodec<L>) -> Self {
        let alphabet = codec.alphabet().to_vec();
        let inverse = alphabet.iter().map(|&l| (l, codec.inverse_letter(l))).collect();
        WordTree { alphabet, inverse }
    }

    pub fn inv(&self, l: Letter) -> Letter {
        self.inverse[&l]
    }

    pub fn inverse_word(&self, w: &[Letter]) -> LetterWord {
        w.iter().rev().map(|&l| self.inv(l)).collect()
    }

    pub fn mul(&self, a: &[Letter], b: &[Letter]) -> LetterWord {
        let mut out = a.to_vec();
        for &l in b {
            if out.last().is_some_and(|&last| self.inv(last) == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    /// Reduced one-letter extensions of `w`.
    pub fn children<'a>(&'a self, w: &'a [Letter]) -> impl Iterator<Item = LetterWord> + 'a {
        self.alphabet.iter().filter(move |&&l| w.last().map_or(true, |&last| self.inv(last) != l)).map(move |&l| {
            let mut c = w.to_vec();
            c.push(l);
            c
        })
    }

    /// All reduced words of length exactly `n`, in shortlex order.
    pub fn words_of_length(&self, n: usize) -> Vec<LetterWord> {
        let mut level = vec![Vec::new()];
        for _ in 0..n {
            level = level.iter().flat_map(|w| self.children(w).collect::<Vec<_>>()).collect();
        }
        level
    }

    /// All reduced words of length at most `n`, in shortlex order.
    pub fn words_up_to(&self, n: usize) -> Vec<LetterWord> {
        let mut all = vec![Vec::new()];
        let mut level = vec![Vec::new()];
        for _ in 0..n {
            level = level.iter().flat_map(|w| self.children(w).collect::<Vec<_>>()).collect();
            all.extend(level.iter().cloned());
        }
        all
    }
}

/// `inner ∪ ⋃_{p ∈ outer} Cyl(p)` with `|w| < depth` for `w ∈ inner` and
/// `|p| = depth` for `p ∈ outer`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Region {
    depth: usize,
    inner: BTreeSet<LetterWord>,
    outer: BTreeSet<LetterWord>,
}

impl Region {
    pub fn empty() -> Self {
        Region { depth: 0, inner: BTreeSet::new(), outer: BTreeSet::new() }
    }

    pub fn all() -> Self {
        Region { depth: 0, inner: BTreeSet::new(), outer: BTreeSet::from([Vec::new()]) }
    }

    pub fn from_parts(depth: usize, inner: BTreeSet<LetterWord>, outer: BTreeSet<LetterWord>) -> Self {
        debug_assert!(inner.iter().all(|w| w.len() < depth));
        debug_assert!(outer.iter().all(|w| w.len() == depth));
        Region { depth, inner, outer }
    }

    pub fn finite(words: impl IntoIterator<Item = LetterWord>) -> Self {
        let inner: BTreeSet<LetterWord> = words.into_iter().collect();
        let depth = inner.iter().map(|w| w.len() + 1).max().unwrap_or(0);
        Region { depth, inner, outer: BTreeSet::new() }
    }

    pub fn cylinder(prefix: LetterWord) -> Self {
        Region { depth: prefix.len(), inner: BTreeSet::new(), outer: BTreeSet::from([prefix]) }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn inner(&self) -> &BTreeSet<LetterWord> {
        &self.inner
    }

    pub fn outer(&self) -> &BTreeSet<LetterWord> {
        &self.outer
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        if w.len() < self.depth {
            self.inner.contains(w)
        } else {
            self.outer.contains(&w[..self.depth])
        }
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty() && self.outer.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.outer.is_empty()
    }

    /// Same set described at a larger depth.
    pub fn lift(&self, tree: &WordTree, depth: usize) -> Region {
        if depth <= self.depth {
            return self.clone();
        }
        let mut inner = self.inner.clone();
        let mut outer = BTreeSet::new();
        let mut frontier: Vec<LetterWord> = self.outer.iter().cloned().collect();
        for _ in self.depth..depth {
            inner.extend(frontier.iter().cloned());
            frontier = frontier.iter().flat_map(|w| tree.children(w).collect::<Vec<_>>()).collect();
        }
        outer.extend(frontier);
        Region { depth, inner, outer }
    }

    /// Minimal-depth form; two regions describe the same set iff their
    /// normal forms are equal.
    pub fn normalize(mut self, tree: &WordTree) -> Region {
        while self.depth > 0 {
            let shorter = tree.words_of_length(self.depth - 1);
            let collapsible = shorter.iter().all(|p| {
                let member = self.inner.contains(p);
                tree.children(p).all(|c| self.outer.contains(&c) == member)
            });
            if !collapsible {
                break;
            }
            let d = self.depth - 1;
            let outer: BTreeSet<LetterWord> = self.inner.iter().filter(|w| w.len() == d).cloned().collect();
            self.inner.retain(|w| w.len() < d);
            self.outer = outer;
            self.depth = d;
        }
        self
    }

    fn pair(&self, other: &Region, tree: &WordTree) -> (Region, Region) {
        let d = self.depth.max(other.depth);
        (self.lift(tree, d), other.lift(tree, d))
    }

    pub fn union(&self, other: &Region, tree: &WordTree) -> Region {
        let (a, b) = self.pair(other, tree);
        Region { depth: a.depth, inner: &a.inner | &b.inner, outer: &a.outer | &b.outer }.normalize(tree)
    }

    pub fn intersection(&self, other: &Region, tree: &WordTree) -> Region {
        let (a, b) = self.pair(other, tree);
        Region { depth: a.depth, inner: &a.inner & &b.inner, outer: &a.outer & &b.outer }.normalize(tree)
    }

    pub fn complement(&self, tree: &WordTree) -> Region {
        let words = tree.words_up_to(self.depth);
        let inner = words.iter().filter(|w| w.len() < self.depth && !self.inner.contains(*w)).cloned().collect();
        let outer = words.iter().filter(|w| w.len() == self.depth && !self.outer.contains(*w)).cloned().collect();
        Region { depth: self.depth, inner, outer }.normalize(tree)
    }

    pub fn same_set(&self, other: &Region, tree: &WordTree) -> bool {
        self.clone().normalize(tree) == other.clone().normalize(tree)
    }

    /// Region whose membership at every word `y` is `test(y)`, given that
    /// `test` depends only on the length-`depth` prefix for longer words.
    fn tabulate(tree: &WordTree, depth: usize, test: impl Fn(&[Letter]) -> bool) -> Region {
        let mut inner = BTreeSet::new();
        let mut outer = BTreeSet::new();
        for y in tree.words_up_to(depth) {
            if test(&y) {
                if y.len() < depth {
                    inner.insert(y);
                } else {
                    outer.insert(y);
                }
            }
        }
        Region { depth, inner, outer }.normalize(tree)
    }

    /// `g · R`. Left multiplication cancels at most `|g|` leading letters, so
    /// membership of long words is fixed by prefixes of length `depth + |g|`.
    pub fn left_mul(&self, g: &[Letter], tree: &WordTree) -> Region {
        let g_inv = tree.inverse_word(g);
        Region::tabulate(tree, self.depth + g.len(), |y| self.contains(&tree.mul(&g_inv, y)))
    }

    /// `R · g`. Right multiplication only touches the last `|g|` letters.
    pub fn right_mul(&self, g: &[Letter], tree: &WordTree) -> Region {
        let g_inv = tree.inverse_word(g);
        Region::tabulate(tree, self.depth + g.len(), |y| self.contains(&tree.mul(y, &g_inv)))
    }

    /// Members when the region is finite.
    pub fn elements(&self) -> Option<Vec<LetterWord>> {
        self.is_finite().then(|| self.inner.iter().cloned().collect())
    }
}
