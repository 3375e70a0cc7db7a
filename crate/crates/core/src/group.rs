//! Presentations of fundamental groups: spanning-tree collapse, Tietze
//! eliminations and abelian invariants.

use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{ComplexError, PolygonalComplex};
use crate::presentation::Presentation;
use crate::word::{cyclic_reduce, free_reduce, Letter, Word};

/// One step of [`tietze_simplify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    /// A relator reduced to the empty word and was dropped.
    DropEmptyRelator { relator: usize },
    /// `generator` occurred once in `relator`; it was replaced everywhere by
    /// `replacement` and both were deleted.
    Eliminate { generator: String, relator: usize, replacement: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutPresentation {
    pub presentation: Presentation,
    pub moves: Vec<TietzeMove>,
}

/// Generators are the non-tree edges in id order, named after them; each
/// relator is a disk boundary with tree steps deleted, freely reduced.
pub fn pi1_presentation(c: &PolygonalComplex, tree: Option<&[usize]>) -> Result<OutPresentation, ComplexError> {
    let (p, _) = c.collapse_spanning_tree(tree)?;
    let relators = p.relators().iter().map(free_reduce).collect();
    let presentation = Presentation::new(p.generator_names().to_vec(), relators)
        .expect("generator set unchanged by reduction");
    Ok(OutPresentation { presentation, moves: Vec::new() })
}

fn substitute(w: &Word, g: usize, replacement: &Word) -> Word {
    let inv = replacement.inverse();
    let mut out = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if l.index() == g {
            out.extend_from_slice(if l.is_inverse() { inv.letters() } else { replacement.letters() });
        } else {
            let idx = if l.index() > g { l.index() - 1 } else { l.index() };
            out.push(Letter::new(idx as u32, l.is_inverse()));
        }
    }
    free_reduce(&Word::from_letters(out))
}

/// Repeats, to a fixpoint: cyclically reduce every relator and drop empty
/// ones; then pick the highest-index generator that occurs exactly once in
/// some relator, take the shortest such relator (lowest index on ties),
/// solve it for the generator and substitute.
pub fn tietze_simplify(p: &OutPresentation) -> OutPresentation {
    let mut names: Vec<String> = p.presentation.generator_names().to_vec();
    let mut rels: Vec<Word> = p.presentation.relators().to_vec();
    let mut moves = p.moves.clone();
    loop {
        let mut kept = Vec::with_capacity(rels.len());
        for (i, r) in rels.iter().enumerate() {
            let r = cyclic_reduce(r);
            if r.is_empty() {
                moves.push(TietzeMove::DropEmptyRelator { relator: i });
            } else {
                kept.push(r);
            }
        }
        rels = kept;
        let t = names.len();
        let mut counts = alloc::vec![0u32; t * rels.len()];
        for (i, r) in rels.iter().enumerate() {
            for l in r.iter() {
                counts[l.index() * rels.len() + i] += 1;
            }
        }
        let choice = (0..t).rev().find_map(|g| {
            (0..rels.len())
                .filter(|&i| counts[g * rels.len() + i] == 1)
                .min_by_key(|&i| (rels[i].len(), i))
                .map(|i| (g, i))
        });
        let Some((g, ri)) = choice else { break };
        let r = &rels[ri];
        let pos = r.iter().position(|l| l.index() == g).expect("counted above");
        let rot = r.rotated(pos);
        let rest = Word::from_letters(rot.letters()[1..].to_vec());
        // g W = 1 gives g = W⁻¹; g⁻¹ W = 1 gives g = W
        let value = if rot[0].is_inverse() { rest } else { rest.inverse() };
        let replacement = {
            let shown = Presentation::new(names.clone(), Vec::new()).expect("names nonempty");
            shown.format_word(&value)
        };
        moves.push(TietzeMove::Eliminate { generator: names[g].clone(), relator: ri, replacement });
        // reindex the replacement for the shrunken generator list
        let value = Word::from_letters(
            value
                .iter()
                .map(|l| Letter::new(if l.index() > g { l.index() as u32 - 1 } else { l.index() as u32 }, l.is_inverse()))
                .collect(),
        );
        rels = rels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ri)
            .map(|(_, w)| substitute(w, g, &value))
            .collect();
        names.remove(g);
        if names.is_empty() {
            break;
        }
    }
    if names.is_empty() {
        // the trivial group; keep a presentation object with no generators
        return OutPresentation { presentation: Presentation::trivial(), moves };
    }
    let presentation = Presentation::new(names, rels).expect("indices reindexed");
    OutPresentation { presentation, moves }
}

/// Free rank and torsion coefficients (each ≥ 2, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u128>,
}

/// Exponent-sum matrix, relators by generators.
pub fn exponent_matrix(p: &Presentation) -> Vec<Vec<i128>> {
    p.relators()
        .iter()
        .map(|r| (0..p.generator_count()).map(|g| r.exponent_sum(g) as i128).collect())
        .collect()
}

/// Diagonal of the Smith normal form, as absolute values, in divisibility
/// order. Zero entries are omitted.
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Vec<u128> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block as pivot
        let mut pivot = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && pivot.is_none_or(|(_, _, a): (usize, usize, u128)| x.unsigned_abs() < a) {
                    pivot = Some((i, j, x.unsigned_abs()));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                // a remainder smaller than the pivot is left in row or column t
                let (mut bi, mut bj, mut best) = (t, t, m[t][t].unsigned_abs());
                for i in t + 1..rows {
                    if m[i][t] != 0 && m[i][t].unsigned_abs() < best {
                        (bi, bj, best) = (i, t, m[i][t].unsigned_abs());
                    }
                }
                for j in t + 1..cols {
                    if m[t][j] != 0 && m[t][j].unsigned_abs() < best {
                        (bi, bj, best) = (t, j, m[t][j].unsigned_abs());
                    }
                }
                m.swap(t, bi);
                for row in m.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].unsigned_abs());
        t += 1;
    }
    diag
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let diag = smith_diagonal(exponent_matrix(p), p.generator_count());
    AbelianInvariants {
        free_rank: p.generator_count() - diag.len(),
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    }
}

impl OutPresentation {
    pub fn abelian_invariants(&self) -> AbelianInvariants {
        abelian_invariants(&self.presentation)
    }
}
