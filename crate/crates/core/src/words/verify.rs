//! Bounded exhaustive certificates for the generating-set constructions.
//!
//! These are not proofs of freeness: every admissible product of at most
//! `n_max` generators is multiplied out and checked against the suffix
//! invariants that drive the inductive argument.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::generators::palindromes;
use super::{GeneratingSet, Letter, Signature, Word};
use crate::error::{Error, Result};

pub const DEFAULT_SEQUENCE_BUDGET: u64 = 10_000_000;

/// Outcome of a bounded verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: &'static str,
    /// `n_max` for free-claim runs, the length cap `L` for factorization runs.
    pub bound: usize,
    /// Largest bound actually covered; smaller than `bound` when the budget ran out.
    pub covered: usize,
    pub checked: u64,
    pub complete: bool,
    /// Minimum reduced product length seen for each `n = 1..=covered`.
    pub min_length_by_n: Vec<usize>,
    pub witness: Option<Vec<String>>,
    pub failure: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.complete && self.failure.is_none()
    }

    pub fn status(&self) -> &'static str {
        match (self.failure.is_some(), self.complete) {
            (true, _) => "FAIL",
            (false, true) => "PASS",
            (false, false) => "INCOMPLETE",
        }
    }
}

#[derive(Clone, Copy)]
struct Gen<'a> {
    letters: &'a [Letter],
    id: usize,
    inverse: bool,
}

struct Partial {
    checked: u64,
    min_len: Vec<usize>,
    failure: Option<(Vec<usize>, String)>,
}

pub fn verify_free_claim(set: &GeneratingSet, n_max: usize) -> Result<VerificationReport> {
    verify_free_claim_with_budget(set, n_max, DEFAULT_SEQUENCE_BUDGET)
}

/// Multiplies out every admissible sequence `s_1 ... s_n` (`n <= n_max`,
/// `s_i` in `S_0 ∪ S_0^{-1}`, `s_{i+1} != s_i^{-1}`) and checks that the
/// product is not the identity and that its suffix agrees with `s_n` as the
/// construction predicts.
pub fn verify_free_claim_with_budget(
    set: &GeneratingSet,
    n_max: usize,
    budget: u64,
) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let sig = set.signature();
    let inverses: Vec<Word> = set.elements().iter().map(Word::inverse).collect();
    let mut gens = Vec::with_capacity(2 * set.elements().len());
    for (id, (w, wi)) in set.elements().iter().zip(&inverses).enumerate() {
        gens.push(Gen {
            letters: w.letters(),
            id,
            inverse: false,
        });
        gens.push(Gen {
            letters: wi.letters(),
            id,
            inverse: true,
        });
    }

    let size = gens.len() as u128;
    let mut covered = 0;
    let mut total: u128 = 0;
    let mut level = size;
    for n in 1..=n_max {
        if total + level > budget as u128 {
            break;
        }
        total += level;
        covered = n;
        level = level.saturating_mul(size.saturating_sub(1));
    }

    let k = set.k();
    let l = set.half_length();
    let partials: Vec<Partial> = (0..gens.len())
        .into_par_iter()
        .map(|first| {
            let mut part = Partial {
                checked: 0,
                min_len: vec![usize::MAX; covered],
                failure: None,
            };
            if covered > 0 {
                let mut product: Vec<Letter> = Vec::with_capacity(k * covered);
                let mut path = vec![first];
                push_gen(&mut product, gens[first].letters, sig);
                descend(&gens, sig, k, l, covered, &mut product, &mut path, &mut part);
            }
            part
        })
        .collect();

    let mut checked = 0;
    let mut min_length_by_n = vec![usize::MAX; covered];
    let mut failure = None;
    for part in partials {
        checked += part.checked;
        for (m, v) in min_length_by_n.iter_mut().zip(part.min_len) {
            *m = (*m).min(v);
        }
        if failure.is_none() {
            failure = part.failure;
        }
    }
    let (witness, failure) = match failure {
        Some((path, reason)) => (
            Some(
                path.iter()
                    .map(|&i| {
                        let g = gens[i];
                        let word = Word::from_reduced(g.letters.to_vec(), sig);
                        let tag = if g.inverse { "^-1" } else { "" };
                        format!("s{}{tag}={word}", g.id)
                    })
                    .collect(),
            ),
            Some(reason),
        ),
        None => (None, None),
    };
    Ok(VerificationReport {
        check: "free-claim",
        bound: n_max,
        covered,
        checked,
        complete: covered == n_max,
        min_length_by_n,
        witness,
        failure,
    })
}

/// Appends `word` to a reduced product; returns the number of cancelled letters.
fn push_gen(product: &mut Vec<Letter>, word: &[Letter], sig: Signature) -> usize {
    let mut c = 0;
    while c < word.len() && product.last().is_some_and(|&p| sig.invert(p) == word[c]) {
        product.pop();
        c += 1;
    }
    product.extend_from_slice(&word[c..]);
    c
}

fn pop_gen(product: &mut Vec<Letter>, word: &[Letter], cancelled: usize, sig: Signature) {
    product.truncate(product.len() - (word.len() - cancelled));
    for i in (0..cancelled).rev() {
        product.push(sig.invert(word[i]));
    }
}

#[allow(clippy::too_many_arguments)]
fn descend(
    gens: &[Gen<'_>],
    sig: Signature,
    k: usize,
    l: usize,
    n_max: usize,
    product: &mut Vec<Letter>,
    path: &mut Vec<usize>,
    part: &mut Partial,
) {
    let n = path.len();
    let last = gens[*path.last().unwrap()];
    part.checked += 1;
    part.min_len[n - 1] = part.min_len[n - 1].min(product.len());
    if part.failure.is_none() {
        if let Some(reason) = check_product(product, last, k, l, n) {
            part.failure = Some((path.clone(), reason));
        }
    }
    if n == n_max {
        return;
    }
    for (i, g) in gens.iter().enumerate() {
        if g.id == last.id && g.inverse != last.inverse {
            continue;
        }
        let before = product.len();
        let c = push_gen(product, g.letters, sig);
        if k % 2 == 0 && product.len() < before && part.failure.is_none() {
            path.push(i);
            part.failure = Some((path.clone(), "product length decreased".into()));
            path.pop();
        }
        path.push(i);
        descend(gens, sig, k, l, n_max, product, path, part);
        path.pop();
        pop_gen(product, g.letters, c, sig);
    }
}

fn check_product(product: &[Letter], last: Gen<'_>, k: usize, l: usize, n: usize) -> Option<String> {
    if product.is_empty() {
        return Some(format!("product of {n} generators reduces to e"));
    }
    let suffix_matches = |m: usize| {
        product.len() >= m && product[product.len() - m..] == last.letters[last.letters.len() - m..]
    };
    if k % 2 == 1 {
        if product.len() < 2 * l + n {
            return Some(format!(
                "product length {} < 2l + n = {}",
                product.len(),
                2 * l + n
            ));
        }
        if !suffix_matches(l + 1) {
            return Some(format!("last {} letters differ from those of s_n", l + 1));
        }
    } else {
        let m = if last.inverse { l } else { l + 1 };
        if !suffix_matches(m) {
            return Some(format!("last {m} letters differ from those of s_n"));
        }
    }
    None
}

/// Checks that every element of length `<= max_len` in `F_{d/2}` factors
/// uniquely as `s_1 ... s_n t` with `s_i` reduced palindromes of length `k`,
/// `s_{i+1} != s_i^{-1}` and `|t| <= l`.
///
/// A greedy decoder (strip the palindrome determined by the first `l + 1`
/// letters) is compared with an exhaustive enumeration of all products.
pub fn verify_coset_factorization(
    d: u32,
    k: usize,
    max_len: usize,
    budget: u64,
) -> Result<VerificationReport> {
    if d % 2 != 0 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "coset factorization needs even d and odd k (got d={d}, k={k})"
        )));
    }
    let sig = Signature::for_odd_lengths(d)?;
    let l = k / 2;
    let pals = palindromes(sig, l);
    let transversal = sig.elements_up_to(l, usize::MAX)?;

    // Products of n admissible palindromes have length at least n, so
    // n <= max_len exhausts every factorization landing in the ball.
    let size = pals.len() as u128;
    let mut sequences: u128 = 1;
    let mut level: u128 = 1;
    for n in 1..=max_len {
        level = level.saturating_mul(if n == 1 { size } else { size - 1 });
        sequences = sequences.saturating_add(level);
    }
    let needed = sequences.saturating_mul(transversal.len() as u128);
    if needed > budget as u128 {
        return Ok(VerificationReport {
            check: "coset-factorization",
            bound: max_len,
            covered: 0,
            checked: 0,
            complete: false,
            min_length_by_n: Vec::new(),
            witness: None,
            failure: None,
        });
    }
    let elements = sig.elements_up_to(max_len, usize::MAX)?;

    let mut found: HashMap<Word, Vec<(Vec<usize>, usize)>> = HashMap::new();
    let mut stack: Vec<(Word, Vec<usize>)> = vec![(Word::identity(sig), Vec::new())];
    while let Some((prefix, seq)) = stack.pop() {
        for (ti, t) in transversal.iter().enumerate() {
            let g = prefix.multiply(t)?;
            if g.len() <= max_len {
                found.entry(g).or_default().push((seq.clone(), ti));
            }
        }
        if seq.len() == max_len {
            continue;
        }
        for (i, p) in pals.iter().enumerate() {
            if let Some(&prev) = seq.last() {
                if pals[prev].inverse() == *p {
                    continue;
                }
            }
            let mut next = seq.clone();
            next.push(i);
            stack.push((prefix.multiply(p)?, next));
        }
    }

    let index: HashMap<&Word, usize> = pals.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut failure = None;
    let mut witness = None;
    for g in &elements {
        let all = found.get(g).map(Vec::as_slice).unwrap_or(&[]);
        if all.len() != 1 {
            failure = Some(format!("{g} has {} factorizations", all.len()));
            witness = Some(vec![g.to_string()]);
            break;
        }
        let (seq, t) = greedy_decode(g, l, sig)?;
        let seq_ix: Option<Vec<usize>> = seq.iter().map(|s| index.get(s).copied()).collect();
        let t_ix = transversal.iter().position(|x| *x == t);
        if seq_ix.as_ref() != Some(&all[0].0) || t_ix != Some(all[0].1) {
            failure = Some(format!("greedy decoding of {g} disagrees with enumeration"));
            witness = Some(vec![g.to_string()]);
            break;
        }
    }
    if failure.is_none() && found.len() != elements.len() {
        failure = Some(format!(
            "{} products in the ball but {} elements",
            found.len(),
            elements.len()
        ));
    }
    Ok(VerificationReport {
        check: "coset-factorization",
        bound: max_len,
        covered: max_len,
        checked: elements.len() as u64,
        complete: true,
        min_length_by_n: Vec::new(),
        witness,
        failure,
    })
}

/// Peels palindromes off the front of `g` until at most `l` letters remain.
pub(crate) fn greedy_decode(g: &Word, l: usize, sig: Signature) -> Result<(Vec<Word>, Word)> {
    let mut rest = g.clone();
    let mut out: Vec<Word> = Vec::new();
    while rest.len() > l {
        let head = rest.prefix(l + 1);
        let mut letters = head.to_vec();
        letters.extend(head[..l].iter().rev());
        let p = Word::from_reduced(letters, sig);
        if out.last().is_some_and(|prev| prev.inverse() == p) {
            return Err(Error::InvalidInput(format!("non-admissible decoding of {g}")));
        }
        rest = p.inverse().multiply(&rest)?;
        out.push(p);
    }
    Ok((out, rest))
}
