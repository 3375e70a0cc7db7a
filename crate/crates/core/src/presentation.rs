//! Finite presentations, the text format and acceptability checks.
//!
//! Text format:
//!
//! ```text
//! # comment
//! gens: a b
//! rel: a^-1 b^2 a b^-1
//! ```
//!
//! Tokens are `name`, `name^-1` or `name^k` for a nonzero integer `k`,
//! expanded at parse time to `|k|` letters with the sign of `k`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::word::{canonical_cyclic, cyclic_reduce, proper_power_root, DisplayWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: relator has no letters")]
    EmptyRelator { line: usize },
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("relator {relator} is trivial in the free group")]
    EmptyRelatorAfterReduction { relator: usize },
    #[error("presentation has no generators")]
    NoGenerators,
}

/// A finite presentation `<u_1..u_t | r_1..r_s>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation, checking that every letter names a generator.
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if generator_names.is_empty() {
            return Err(PresentationError::NoGenerators);
        }
        let t = generator_names.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(l) = r.iter().find(|l| l.index() >= t) {
                return Err(PresentationError::UnknownGenerator {
                    line: i + 1,
                    name: alloc::format!("#{}", l.index()),
                });
            }
        }
        Ok(Presentation { generator_names, relators })
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| PresentationError::SyntaxError {
                line: line_no,
                message: "expected `gens:` or `rel:`".into(),
            })?;
            match key.trim() {
                "gens" => {
                    if names.is_some() {
                        return Err(PresentationError::SyntaxError {
                            line: line_no,
                            message: "duplicate `gens:` line".into(),
                        });
                    }
                    let mut list: Vec<String> = Vec::new();
                    for tok in rest.split_whitespace() {
                        if !is_identifier(tok) {
                            return Err(PresentationError::SyntaxError {
                                line: line_no,
                                message: alloc::format!("invalid generator name `{tok}`"),
                            });
                        }
                        if !list.iter().any(|n| n == tok) {
                            list.push(tok.to_string());
                        }
                    }
                    if list.is_empty() {
                        return Err(PresentationError::NoGenerators);
                    }
                    names = Some(list);
                }
                "rel" => {
                    let gens = names.as_ref().ok_or_else(|| PresentationError::SyntaxError {
                        line: line_no,
                        message: "`rel:` before `gens:`".into(),
                    })?;
                    let word = parse_word(rest, gens, line_no)?;
                    if word.is_empty() {
                        return Err(PresentationError::EmptyRelator { line: line_no });
                    }
                    relators.push(word);
                }
                other => {
                    return Err(PresentationError::SyntaxError {
                        line: line_no,
                        message: alloc::format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let generator_names = names.ok_or(PresentationError::NoGenerators)?;
        Ok(Presentation { generator_names, relators })
    }

    /// The presentation of the trivial group with no generators.
    pub fn trivial() -> Self {
        Presentation { generator_names: Vec::new(), relators: Vec::new() }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_name(&self, index: usize) -> &str {
        &self.generator_names[index]
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Same presentation with every relator cyclically reduced.
    pub fn cyclically_reduced(&self) -> Result<Presentation, PresentationError> {
        let relators = self
            .relators
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let c = cyclic_reduce(r);
                if c.is_empty() {
                    Err(PresentationError::EmptyRelatorAfterReduction { relator: i })
                } else {
                    Ok(c)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { generator_names: self.generator_names.clone(), relators })
    }

    /// Relator formatted with generator names, powers compressed.
    pub fn format_word(&self, w: &Word) -> String {
        DisplayWord::compressed(w, |i| self.generator_name(i)).to_string()
    }

    /// Parses a single word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        parse_word(text, &self.generator_names, 1)
    }

    /// Longest and shortest relator lengths `(R_L, R_S)`.
    pub fn relator_length_bounds(&self) -> Option<(usize, usize)> {
        let max = self.relators.iter().map(|r| r.len()).max()?;
        let min = self.relators.iter().map(|r| r.len()).min()?;
        Some((max, min))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("gens:")?;
        for n in &self.generator_names {
            write!(f, " {n}")?;
        }
        f.write_str("\n")?;
        for r in &self.relators {
            writeln!(f, "rel: {}", DisplayWord::compressed(r, |i| self.generator_name(i)))?;
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_word(text: &str, gens: &[String], line: usize) -> Result<Word, PresentationError> {
    let mut word = Word::empty();
    for tok in text.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((name, e)) => {
                let k: i64 = e.parse().map_err(|_| PresentationError::SyntaxError {
                    line,
                    message: alloc::format!("bad exponent in `{tok}`"),
                })?;
                if k == 0 {
                    return Err(PresentationError::SyntaxError { line, message: alloc::format!("zero exponent in `{tok}`") });
                }
                (name, k)
            }
            None => (tok, 1),
        };
        if !is_identifier(name) {
            return Err(PresentationError::SyntaxError { line, message: alloc::format!("invalid token `{tok}`") });
        }
        let index = gens
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| PresentationError::UnknownGenerator { line, name: name.to_string() })?;
        let letter = Letter::new(index as u32, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            word.push(letter);
        }
    }
    Ok(word)
}

/// Verdict for a single relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperPowerVerdict {
    pub relator: usize,
    pub root: Word,
    pub exponent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptabilityReport {
    /// Free rank of the 1-skeleton is at least two.
    pub rank_ok: bool,
    pub proper_powers: Vec<ProperPowerVerdict>,
    /// Relator pairs in the same conjugacy class (same orientation).
    pub duplicate_pairs: Vec<(usize, usize)>,
    /// Relator pairs where one is conjugate to the inverse of the other.
    /// Reported as a warning only.
    pub inverse_pairs: Vec<(usize, usize)>,
    pub acceptable: bool,
}

impl AcceptabilityReport {
    pub fn proper_power_relators(&self) -> impl Iterator<Item = &ProperPowerVerdict> {
        self.proper_powers.iter().filter(|v| v.exponent > 1)
    }
}

pub fn validate_acceptable(p: &Presentation) -> Result<AcceptabilityReport, PresentationError> {
    let reduced = p.cyclically_reduced()?;
    let rank_ok = p.generator_count() >= 2;
    let proper_powers: Vec<ProperPowerVerdict> = reduced
        .relators()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (root, exponent) = proper_power_root(r).expect("reduced relators are nonempty");
            ProperPowerVerdict { relator: i, root, exponent }
        })
        .collect();
    let classes: Vec<_> = reduced
        .relators()
        .iter()
        .map(|r| canonical_cyclic(r).expect("reduced relators are nonempty"))
        .collect();
    let inverse_classes: Vec<_> = reduced
        .relators()
        .iter()
        .map(|r| canonical_cyclic(&r.inverse()).expect("reduced relators are nonempty"))
        .collect();
    let mut duplicate_pairs = Vec::new();
    let mut inverse_pairs = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i] == classes[j] {
                duplicate_pairs.push((i, j));
            } else if classes[i] == inverse_classes[j] {
                inverse_pairs.push((i, j));
            }
        }
    }
    let acceptable = rank_ok && proper_powers.iter().all(|v| v.exponent == 1) && duplicate_pairs.is_empty();
    Ok(AcceptabilityReport { rank_ok, proper_powers, duplicate_pairs, inverse_pairs, acceptable })
}
