//! Enumeration of matrix products `𝒜^n` and of the semigroup `𝒜_p = 𝒜^0 ∪ … ∪ 𝒜^p`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{mul_into, Matrix, MatrixSet};

/// Default cap on the number of enumerated words.
pub const DEFAULT_WORD_BUDGET: usize = 1_000_000;

/// Member indices of a product, written left to right: `[i, j]` is `A_i · A_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Evaluates the product over `s`; the empty word is the identity.
    pub fn evaluate(&self, s: &MatrixSet) -> Matrix {
        let mut acc = Matrix::identity(s.dim());
        let mut tmp = Matrix::zeros(s.dim());
        for &i in &self.0 {
            mul_into(&acc, &s.members()[i], &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
        }
        acc
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for &i in &self.0 {
            if i < 26 {
                write!(f, "{}", (b'A' + i as u8) as char)?;
            } else {
                write!(f, "[{i}]")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// `m^n`, saturating.
fn power_count(m: usize, n: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..n {
        c = c.saturating_mul(m as u128);
    }
    c
}

/// `Σ_{k=from}^{to} m^k`, saturating.
pub fn word_count(m: usize, from: usize, to: usize) -> u128 {
    (from..=to).fold(0u128, |acc, k| acc.saturating_add(power_count(m, k)))
}

fn check_budget(requested: u128, budget: usize) -> Result<()> {
    if requested > budget as u128 {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    Ok(())
}

/// Visits every word of length `1..=max_len` in depth-first preorder
/// (`A, AA, AB, B, BA, BB` for two members and `max_len = 2`) together with its product.
///
/// The callback receives the word letters and the product matrix.
pub fn visit_words<F>(s: &MatrixSet, max_len: usize, budget: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[usize], &Matrix),
{
    check_budget(word_count(s.len(), 1, max_len), budget)?;
    if max_len == 0 {
        return Ok(());
    }
    let d = s.dim();
    let mut stack: Vec<Matrix> = (0..max_len).map(|_| Matrix::zeros(d)).collect();
    let mut letters = Vec::with_capacity(max_len);
    descend(s, max_len, &mut stack, &mut letters, &mut f);
    Ok(())
}

fn descend<F>(s: &MatrixSet, max_len: usize, stack: &mut [Matrix], letters: &mut Vec<usize>, f: &mut F)
where
    F: FnMut(&[usize], &Matrix),
{
    let depth = letters.len();
    for (i, member) in s.iter().enumerate() {
        if depth == 0 {
            stack[0].clone_from(member);
        } else {
            let (head, tail) = stack.split_at_mut(depth);
            mul_into(&head[depth - 1], member, &mut tail[0]);
        }
        letters.push(i);
        f(letters, &stack[depth]);
        if depth + 1 < max_len {
            descend(s, max_len, stack, letters, f);
        }
        letters.pop();
    }
}

/// All `m^n` ordered products of length `n`, in lexicographic word order. Duplicates are kept.
pub fn products(s: &MatrixSet, n: usize) -> Result<Vec<Matrix>> {
    products_with_budget(s, n, DEFAULT_WORD_BUDGET)
}

pub fn products_with_budget(s: &MatrixSet, n: usize, budget: usize) -> Result<Vec<Matrix>> {
    if n == 0 {
        return Err(Error::InvalidParameter("product length must be at least 1".into()));
    }
    check_budget(power_count(s.len(), n), budget)?;
    Ok(words_of_length(s, n).into_iter().map(|w| w.evaluate(s)).collect())
}

fn words_of_length(s: &MatrixSet, n: usize) -> Vec<Word> {
    let m = s.len();
    let total = power_count(m, n) as usize;
    let mut out = Vec::with_capacity(total);
    let mut letters = vec![0usize; n];
    for _ in 0..total {
        out.push(Word(letters.clone()));
        // odometer increment, last letter fastest
        for pos in (0..n).rev() {
            letters[pos] += 1;
            if letters[pos] < m {
                break;
            }
            letters[pos] = 0;
        }
    }
    out
}

/// One element of `𝒜_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupWord {
    pub word: Word,
    pub product: Matrix,
}

impl SemigroupWord {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// The products of at most `depth` factors from `base`, including the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSemigroup {
    pub base: MatrixSet,
    pub depth: usize,
    pub words: Vec<SemigroupWord>,
}

impl ProductSemigroup {
    pub fn products(&self) -> impl Iterator<Item = &Matrix> {
        self.words.iter().map(|w| &w.product)
    }

    /// Products of one exact length, in enumeration order.
    pub fn of_length(&self, k: usize) -> impl Iterator<Item = &Matrix> {
        self.words.iter().filter(move |w| w.length() == k).map(|w| &w.product)
    }

    /// Drops products lying within `tol` (max-entry distance) of an earlier one.
    pub fn deduplicated(&self, tol: f64) -> ProductSemigroup {
        let mut kept: Vec<SemigroupWord> = Vec::new();
        for w in &self.words {
            let dup = kept.iter().any(|k| (&k.product - &w.product).max_abs() <= tol);
            if !dup {
                kept.push(w.clone());
            }
        }
        ProductSemigroup { base: self.base.clone(), depth: self.depth, words: kept }
    }
}

/// `{I} ∪ 𝒜^1 ∪ … ∪ 𝒜^p`, ordered by length then lexicographically.
pub fn semigroup_up_to(s: &MatrixSet, p: usize) -> Result<ProductSemigroup> {
    semigroup_up_to_with_budget(s, p, DEFAULT_WORD_BUDGET)
}

pub fn semigroup_up_to_with_budget(s: &MatrixSet, p: usize, budget: usize) -> Result<ProductSemigroup> {
    check_budget(word_count(s.len(), 0, p), budget)?;
    let mut words = vec![SemigroupWord { word: Word::default(), product: Matrix::identity(s.dim()) }];
    let mut level: Vec<SemigroupWord> = words.clone();
    for _ in 1..=p {
        let mut next = Vec::with_capacity(level.len() * s.len());
        for w in &level {
            for (i, member) in s.iter().enumerate() {
                let mut letters = w.word.0.clone();
                letters.push(i);
                next.push(SemigroupWord { word: Word(letters), product: w.product.mul(member) });
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    Ok(ProductSemigroup { base: s.clone(), depth: p, words })
}
