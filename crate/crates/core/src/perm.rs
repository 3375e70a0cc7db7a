//! Permutations of `{1..n}`, tuples of them, and the word map.
//!
//! Points are 1-based in the public API. Internally images are stored
//! 0-based; the `*0` accessors expose that form for hot loops.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsu::DisjointSets;
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("cannot parse permutation: {message}")]
    Syntax { message: String },
    #[error("generator {index} has no permutation (tuple length {len})")]
    GeneratorOutOfRange { index: usize, len: usize },
    #[error("expected {expected} permutations, got {got}")]
    TupleLength { expected: usize, got: usize },
    #[error("permutation tuple is empty")]
    EmptyTuple,
    #[error("degree must be positive")]
    ZeroDegree,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// From 1-based images: `images[j-1]` is the image of `j`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &p in images {
            if p == 0 || p > n {
                return Err(PermError::PointOutOfRange { point: p, degree: n });
            }
            if core::mem::replace(&mut seen[p - 1], true) {
                return Err(PermError::RepeatedPoint { point: p });
            }
            out.push((p - 1) as u32);
        }
        Ok(Permutation { images: out })
    }

    /// From 0-based images; the caller guarantees a bijection.
    pub(crate) fn from_images0(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| x as usize == i)
        });
        Permutation { images }
    }

    /// Build from cycles of 1-based points; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = alloc::vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(PermError::PointOutOfRange { point: p, degree: n });
                }
                if core::mem::replace(&mut seen[p - 1], true) {
                    return Err(PermError::RepeatedPoint { point: p });
                }
            }
            for (k, &p) in cycle.iter().enumerate() {
                images[p - 1] = (cycle[(k + 1) % cycle.len()] - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, j: usize) -> Result<usize, PermError> {
        if j == 0 || j > self.degree() {
            return Err(PermError::PointOutOfRange { point: j, degree: self.degree() });
        }
        Ok(self.images[j - 1] as usize + 1)
    }

    #[inline]
    pub fn apply0(&self, j: usize) -> usize {
        self.images[j] as usize
    }

    pub fn images0(&self) -> &[u32] {
        &self.images
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    /// `p` first, then `q`: `j ↦ q(p(j))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != q.degree() {
            return Err(PermError::DegreeMismatch { left: self.degree(), right: q.degree() });
        }
        Ok(Permutation { images: self.images.iter().map(|&x| q.images[x as usize]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0u32; self.degree()];
        for (j, &x) in self.images.iter().enumerate() {
            inv[x as usize] = j as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &x)| x as usize == j)
    }

    /// Cycles as 0-based points, each starting at its minimum, sorted by
    /// minimum.
    pub fn cycles0(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j as u32);
                j = self.images[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Canonical cycle decomposition over 1-based points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles0().into_iter().map(|c| c.into_iter().map(|x| x as usize + 1).collect()).collect()
    }

    /// Cycle lengths in the order of [`cycles`](Self::cycles).
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles0().iter().map(Vec::len).collect()
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = alloc::vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j] as usize;
            }
        }
        count
    }

    /// Parses disjoint-cycle notation such as `(12)(3)` or `(1 10)(2,3)`,
    /// or one-line image notation `[2,1,3]`. Inside a cycle without
    /// separators every digit is its own point when `n < 10`; from degree 10
    /// on such a cycle is a single point.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        let s = text.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| PermError::Syntax { message: "unterminated '['".into() })?;
            let images = split_points(inner)?;
            if images.len() != n {
                return Err(PermError::Syntax {
                    message: alloc::format!("image list has {} entries, expected {}", images.len(), n),
                });
            }
            return Permutation::from_images(&images);
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax { message: alloc::format!("expected '(' at {:?}", rest) })?;
            let close = body.find(')').ok_or_else(|| PermError::Syntax { message: "unterminated '('".into() })?;
            let inner = &body[..close];
            let points = if inner.contains(|c: char| c == ',' || c.is_whitespace()) || n >= 10 {
                split_points(inner)?
            } else {
                inner
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| PermError::Syntax { message: alloc::format!("unexpected {:?}", c) })
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            cycles.push(points);
            rest = &body[close + 1..];
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// Uniform sample by Fisher–Yates.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            images.swap(i, j);
        }
        Permutation { images }
    }
}

fn split_points(inner: &str) -> Result<Vec<usize>, PermError> {
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| PermError::Syntax { message: alloc::format!("bad point {:?}", t) }))
        .collect()
}

/// Cycle notation with fixed points as singletons. Points are concatenated
/// when the degree is below 10 and space-separated otherwise.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.degree() < 10 { "" } else { " " };
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{}", p)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

/// One permutation per generator, all of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTuple {
    perms: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl SigmaTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<Self, PermError> {
        let first = perms.first().ok_or(PermError::EmptyTuple)?;
        let n = first.degree();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        if let Some(p) = perms.iter().find(|p| p.degree() != n) {
            return Err(PermError::DegreeMismatch { left: n, right: p.degree() });
        }
        let inverses = perms.iter().map(Permutation::inverse).collect();
        Ok(SigmaTuple { perms, inverses })
    }

    pub fn identity(t: usize, n: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        SigmaTuple::new(alloc::vec![Permutation::identity(n); t])
    }

    /// Semicolon-separated permutations, e.g. `(123);(12)`.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let perms = text.split(';').map(|part| Permutation::parse(part, n)).collect::<Result<Vec<_>, _>>()?;
        SigmaTuple::new(perms)
    }

    pub fn sample_uniform<R: Rng + ?Sized>(t: usize, n: usize, rng: &mut R) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        SigmaTuple::new((0..t).map(|_| Permutation::sample_uniform(n, rng)).collect())
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.perms[i]
    }

    pub fn inverse_of(&self, i: usize) -> &Permutation {
        &self.inverses[i]
    }

    /// Where the step labelled `letter` leads from 0-based vertex `j`.
    #[inline]
    pub fn step0(&self, letter: Letter, j: usize) -> usize {
        if letter.is_inverse() {
            self.inverses[letter.index()].apply0(j)
        } else {
            self.perms[letter.index()].apply0(j)
        }
    }

    /// Orbits of the generated subgroup as sorted 1-based point lists.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits0().into_iter().map(|o| o.into_iter().map(|x| x + 1).collect()).collect()
    }

    pub fn orbits0(&self) -> Vec<Vec<usize>> {
        let mut dsu = DisjointSets::new(self.degree());
        for p in &self.perms {
            for (j, &x) in p.images0().iter().enumerate() {
                dsu.union(j, x as usize);
            }
        }
        dsu.classes()
    }

    pub fn is_transitive(&self) -> bool {
        let mut dsu = DisjointSets::new(self.degree());
        for p in &self.perms {
            for (j, &x) in p.images0().iter().enumerate() {
                dsu.union(j, x as usize);
            }
        }
        dsu.class_count() == 1
    }
}

impl fmt::Display for SigmaTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perms.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Independent stream for one sample. The ChaCha key is the block
/// `(seed, n, index, 0)`, so streams do not depend on scheduling.
pub fn sample_stream(seed: u64, n: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&n.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// The permutation of `{1..n}` obtained by reading `r` left to right: `u_i`
/// moves `j ↦ σ_i(j)` and `u_i⁻¹` moves `j ↦ σ_i⁻¹(j)`.
pub fn word_map(r: &[Letter], sigma: &SigmaTuple) -> Result<Permutation, PermError> {
    if let Some(l) = r.iter().find(|l| l.index() >= sigma.len()) {
        return Err(PermError::GeneratorOutOfRange { index: l.index(), len: sigma.len() });
    }
    let mut cur: Vec<u32> = (0..sigma.degree() as u32).collect();
    for &l in r {
        let step = if l.is_inverse() { sigma.inverse_of(l.index()) } else { sigma.get(l.index()) };
        let imgs = step.images0();
        for x in cur.iter_mut() {
            *x = imgs[*x as usize];
        }
    }
    Ok(Permutation::from_images0(cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use alloc::vec;

    #[test]
    fn parse_and_apply() {
        let a = Permutation::parse("(123)", 3).unwrap();
        assert_eq!(a.apply(3).unwrap(), 1);
        let b = Permutation::parse("(12)(3)", 3).unwrap();
        assert_eq!(b.images(), vec![2, 1, 3]);
        assert!(Permutation::parse("", 4).unwrap().is_identity());
        assert_eq!(Permutation::parse("[2,1,3]", 3).unwrap(), b);
        assert_eq!(Permutation::parse("(1 10)(2,3)", 10).unwrap().apply(10).unwrap(), 1);
        assert_eq!(Permutation::parse("(121)", 3), Err(PermError::RepeatedPoint { point: 1 }));
        assert_eq!(Permutation::parse("(14)", 3), Err(PermError::PointOutOfRange { point: 4, degree: 3 }));
    }

    #[test]
    fn format_round_trip() {
        let b = Permutation::parse("(12)", 3).unwrap();
        assert_eq!(b.to_string(), "(12)(3)");
        let p = Permutation::parse("(1 10)(2 3)", 11).unwrap();
        assert_eq!(p.to_string(), "(1 10)(2 3)(4)(5)(6)(7)(8)(9)(11)");
        assert_eq!(Permutation::parse(&p.to_string(), 11).unwrap(), p);
    }

    #[test]
    fn compose_order() {
        let p = Permutation::parse("(12)", 3).unwrap();
        let q = Permutation::parse("(123)", 3).unwrap();
        assert_eq!(p.compose(&q).unwrap().apply(1).unwrap(), 3);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.compose(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn cycles_canonical() {
        assert_eq!(Permutation::parse("(12)(3)", 3).unwrap().cycles(), vec![vec![1, 2], vec![3]]);
        assert_eq!(Permutation::parse("(132)", 3).unwrap().cycles(), vec![vec![1, 3, 2]]);
        assert_eq!(Permutation::identity(4).cycles().len(), 4);
    }

    #[test]
    fn word_map_examples() {
        let p = Presentation::parse("gens: a b\nrel: a^-1 b^2 a b^-1\nrel: a b a^-1 b^-1").unwrap();
        let s = SigmaTuple::parse("(123);(12)", 3).unwrap();
        let mut lens = word_map(&p.relators()[0], &s).unwrap().cycle_lengths();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 2]);
        assert_eq!(word_map(&p.relators()[1], &s).unwrap().cycle_lengths(), vec![3]);
        let id = SigmaTuple::identity(2, 3).unwrap();
        assert!(word_map(&p.relators()[0], &id).unwrap().is_identity());
    }

    #[test]
    fn streams_are_reproducible() {
        let a = Permutation::sample_uniform(20, &mut sample_stream(7, 20, 3));
        let b = Permutation::sample_uniform(20, &mut sample_stream(7, 20, 3));
        let c = Permutation::sample_uniform(20, &mut sample_stream(7, 20, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(Permutation::sample_uniform(1, &mut sample_stream(0, 1, 0)).is_identity());
    }

    #[test]
    fn orbits_examples() {
        let s = SigmaTuple::parse("(123);(12)", 3).unwrap();
        assert!(s.is_transitive());
        assert_eq!(SigmaTuple::identity(2, 3).unwrap().orbits().len(), 3);
    }
}
