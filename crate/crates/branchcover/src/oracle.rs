//! Exact statistics by enumerating every tuple in `Sym(n)^t`.

use branchcover_core::{word_map, CollapseRule, CoverModel, Permutation, Presentation, Rational, SigmaTuple};
use serde::Serialize;

use crate::experiment::{default_k_max, ExperimentError};
use crate::format::fmt_rational;

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("(n!)^t = {tuples} exceeds the budget {budget}")]
    BudgetExceeded { tuples: u128, budget: u128 },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

/// Exact probabilities and expectations over all `(n!)^t` tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactStats {
    pub n: usize,
    pub tuples: u128,
    pub k_max: usize,
    pub transitive: Rational,
    /// `cycle_means[i][k-1]`: expected number of `k`-cycles of `r_i(σ)`.
    pub cycle_means: Vec<Vec<Rational>>,
    /// Expected `L_n(k)` for `k = 1..=k_max`.
    pub l_n_means: Vec<Rational>,
    pub embedded: Rational,
    pub disjoint: Rational,
    pub collapse_valid: Rational,
    pub y_c_prime: Rational,
    pub success: Rational,
}

/// Every permutation of `{1..n}` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![Permutation::from_images(&cur).expect("identity")];
    while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation::from_images(&cur).expect("bijection"));
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |a, b| a.checked_mul(b)).unwrap_or(u128::MAX)
}

pub fn exhaustive_oracle(
    p: &Presentation,
    n: usize,
    lambda: Rational,
    k_max: Option<usize>,
    budget: u128,
) -> Result<ExactStats, OracleError> {
    if n == 0 {
        return Err(ExperimentError::Config("degree must be positive".into()).into());
    }
    let t = p.generator_count();
    let tuples = (0..t).try_fold(1u128, |a, _| a.checked_mul(factorial(n))).unwrap_or(u128::MAX);
    if tuples > budget {
        return Err(OracleError::BudgetExceeded { tuples, budget });
    }
    let model = CoverModel::new(p, lambda, CollapseRule::Worrisome, false).map_err(ExperimentError::from)?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(&model));
    let perms = all_permutations(n);
    let rels = model.presentation().relators();
    let mut cycle_sums = vec![vec![0u128; k_max]; rels.len()];
    let mut l_sums = vec![0u128; k_max];
    let (mut transitive, mut embedded, mut disjoint, mut valid, mut yc, mut success) = (0u128, 0, 0, 0, 0, 0);
    let mut idx = vec![0usize; t];
    loop {
        let sigma = SigmaTuple::new(idx.iter().map(|&i| perms[i].clone()).collect()).expect("common degree");
        let mut per_k = vec![0u128; k_max];
        for (i, r) in rels.iter().enumerate() {
            for len in word_map(r, &sigma).expect("tuple matches").cycle_lengths() {
                if len <= k_max {
                    cycle_sums[i][len - 1] += 1;
                    per_k[len - 1] += 1;
                }
            }
        }
        let mut running = 0;
        for (k, c) in per_k.iter().enumerate() {
            running += c;
            l_sums[k] += running;
        }
        transitive += sigma.is_transitive() as u128;
        let o = model.outcome(&sigma).expect("tuple matches");
        embedded += o.all_embedded as u128;
        disjoint += o.pairwise_disjoint as u128;
        valid += o.collapse_valid as u128;
        yc += (o.y_satisfies_c_prime == Some(true)) as u128;
        success += o.success as u128;
        // odometer over the tuple
        let mut g = 0;
        while g < t {
            idx[g] += 1;
            if idx[g] < perms.len() {
                break;
            }
            idx[g] = 0;
            g += 1;
        }
        if g == t {
            break;
        }
    }
    let frac = |x: u128| Rational::new(x as i128, tuples as i128);
    Ok(ExactStats {
        n,
        tuples,
        k_max,
        transitive: frac(transitive),
        cycle_means: cycle_sums.iter().map(|row| row.iter().map(|&x| frac(x)).collect()).collect(),
        l_n_means: l_sums.iter().map(|&x| frac(x)).collect(),
        embedded: frac(embedded),
        disjoint: frac(disjoint),
        collapse_valid: frac(valid),
        y_c_prime: frac(yc),
        success: frac(success),
    })
}

#[derive(Debug, Serialize)]
pub struct ExactStatsJson {
    pub n: usize,
    pub tuples: String,
    pub k_max: usize,
    pub transitive: String,
    pub cycle_means: Vec<Vec<String>>,
    pub l_n_means: Vec<String>,
    pub embedded: String,
    pub disjoint: String,
    pub collapse_valid: String,
    pub y_c_prime: String,
    pub success: String,
}

impl From<&ExactStats> for ExactStatsJson {
    fn from(s: &ExactStats) -> Self {
        let f = fmt_rational;
        ExactStatsJson {
            n: s.n,
            tuples: s.tuples.to_string(),
            k_max: s.k_max,
            transitive: f(&s.transitive),
            cycle_means: s.cycle_means.iter().map(|r| r.iter().map(f).collect()).collect(),
            l_n_means: s.l_n_means.iter().map(f).collect(),
            embedded: f(&s.embedded),
            disjoint: f(&s.disjoint),
            collapse_valid: f(&s.collapse_valid),
            y_c_prime: f(&s.y_c_prime),
            success: f(&s.success),
        }
    }
}
