//! Letters, words and cyclic words over a finite alphabet of generators.
//!
//! A [`Letter`] is a generator index together with a sign. The same type is
//! reused for boundary steps of polygonal complexes, where the "generator"
//! is an edge id and the sign records the traversal direction.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

/// A generator (or edge) together with an orientation.
///
/// The derived order is the canonical letter order: ascending index, and
/// the positive letter before its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    pub const fn new(index: u32, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub const fn pos(index: u32) -> Self {
        Letter { index, inverse: false }
    }

    pub const fn neg(index: u32) -> Self {
        Letter { index, inverse: true }
    }

    /// Zero-based generator (or edge) index.
    #[inline]
    pub const fn index(self) -> usize {
        self.index as usize
    }

    #[inline]
    pub const fn is_inverse(self) -> bool {
        self.inverse
    }

    #[inline]
    pub const fn inverse(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    #[inline]
    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// A finite string of letters. Reduction status is not enforced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// The inverse word: reversed, with every letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Rotation starting at position `k` (taken modulo the length).
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        let mut letters = Vec::with_capacity(self.0.len());
        letters.extend_from_slice(&self.0[k..]);
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    pub fn pow(&self, exponent: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * exponent);
        for _ in 0..exponent {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && !matches!((self.0.first(), self.0.last()), (Some(&a), Some(&b)) if self.0.len() > 1 && a.cancels(b))
    }

    /// Number of occurrences of generator `index`, either sign.
    pub fn occurrences(&self, index: usize) -> usize {
        self.0.iter().filter(|l| l.index() == index).count()
    }

    /// Signed exponent sum of generator `index`.
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.index() == index)
            .map(|l| if l.is_inverse() { -1 } else { 1 })
            .sum()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Free reduction: repeatedly cancel adjacent inverse pairs.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

/// Free reduction followed by stripping conjugating letter pairs from the ends.
pub fn cyclic_reduce(w: &Word) -> Word {
    let reduced = free_reduce(w);
    let letters = reduced.letters();
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    Word(letters[lo..hi].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("word is empty")]
    EmptyWord,
    #[error("word is trivial after cyclic reduction")]
    EmptyAfterReduction,
}

/// Writes `w = root^exponent` with the exponent maximal.
///
/// `w` should be cyclically reduced; periodicity is tested on `w` as given.
pub fn proper_power_root(w: &Word) -> Result<(Word, usize), WordError> {
    let len = w.len();
    if len == 0 {
        return Err(WordError::EmptyWord);
    }
    let period = smallest_period(w.letters());
    Ok((Word(w[..period].to_vec()), len / period))
}

/// Smallest divisor `d` of `s.len()` such that `s` equals its rotation by `d`.
pub(crate) fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    let len = s.len();
    (1..len)
        .filter(|&d| len.is_multiple_of(d))
        .find(|&d| (0..len).all(|i| s[i] == s[(i + d) % len]))
        .unwrap_or(len)
}

/// Start index of the lexicographically least rotation of `s`.
///
/// Two-pointer minimum-expression scan, linear time.
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        match a.cmp(b) {
            core::cmp::Ordering::Equal => k += 1,
            core::cmp::Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            core::cmp::Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// Canonical representative of a conjugacy class in the free group.
///
/// Holds the cyclically reduced word rotated to its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord {
    canonical: Word,
}

impl CyclicWord {
    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
}

pub fn canonical_cyclic(w: &Word) -> Result<CyclicWord, WordError> {
    let reduced = cyclic_reduce(w);
    if reduced.is_empty() {
        return Err(WordError::EmptyAfterReduction);
    }
    let start = least_rotation(reduced.letters());
    Ok(CyclicWord { canonical: reduced.rotated(start) })
}

/// Formats words with a caller-supplied name for each generator index.
pub struct DisplayWord<'a, F> {
    word: &'a [Letter],
    name: F,
    compress: bool,
}

impl<'a, F, S> DisplayWord<'a, F>
where
    F: Fn(usize) -> S,
    S: fmt::Display,
{
    /// One token per letter, inverses as `name^-1`.
    pub fn plain(word: &'a [Letter], name: F) -> Self {
        DisplayWord { word, name, compress: false }
    }

    /// Runs of equal letters collapsed to `name^k`.
    pub fn compressed(word: &'a [Letter], name: F) -> Self {
        DisplayWord { word, name, compress: true }
    }
}

impl<F, S> fmt::Display for DisplayWord<'_, F>
where
    F: Fn(usize) -> S,
    S: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.word.len() {
            let l = self.word[i];
            let mut run = 1;
            if self.compress {
                while i + run < self.word.len() && self.word[i + run] == l {
                    run += 1;
                }
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", (self.name)(l.index()))?;
            match (run, l.is_inverse()) {
                (1, false) => {}
                (1, true) => f.write_str("^-1")?,
                (k, false) => write!(f, "^{k}")?,
                (k, true) => write!(f, "^-{k}")?,
            }
            i += run;
        }
        Ok(())
    }
}
