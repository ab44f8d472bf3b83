//! Words in free products of copies of `Z` and `Z_2`.
//!
//! The group `Z^{*r} * Z_2^{*t}` is presented by letters `a_1, ..., a_{r+t}`
//! where the last `t` letters are involutions. Its Cayley graph with respect
//! to `{a_i^{±1}}` is the `(2r + t)`-regular tree, so every [`Word`] doubles as
//! a vertex address of that tree and the reduced length is the graph distance
//! from the identity.

mod generators;
mod verify;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generators::{build_generators, rank_formula, Construction, GeneratingSet};
pub use verify::{
    verify_coset_factorization, verify_free_claim, verify_free_claim_with_budget,
    VerificationReport, DEFAULT_SEQUENCE_BUDGET,
};

/// Shape of the free product: `r` infinite cyclic factors, `t` of order two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    r: u32,
    t: u32,
}

impl Signature {
    pub fn new(r: u32, t: u32) -> Result<Self> {
        if 2 * r + t < 3 {
            return Err(Error::InvalidSignature { r, t });
        }
        Ok(Self { r, t })
    }

    /// `Z_2 * ... * Z_2` with `d` factors; works for every degree.
    pub fn involutions(d: u32) -> Result<Self> {
        Self::new(0, d)
    }

    /// The group used for odd lengths: `F_{d/2}` for even `d`, `F_{(d-1)/2} * Z_2` for odd `d`.
    pub fn for_odd_lengths(d: u32) -> Result<Self> {
        if d % 2 == 0 {
            Self::new(d / 2, 0)
        } else {
            Self::new(d / 2, 1)
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Degree of the Cayley graph.
    pub fn degree(&self) -> u32 {
        2 * self.r + self.t
    }

    pub fn generator_count(&self) -> u32 {
        self.r + self.t
    }

    pub fn is_involution(&self, index: u32) -> bool {
        index > self.r
    }

    /// All `2r + t` letters in the fixed order `a1 < A1 < a2 < ...`.
    pub fn alphabet(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for index in 1..=self.generator_count() {
            out.push(Letter { index, inverse: false });
            if !self.is_involution(index) {
                out.push(Letter { index, inverse: true });
            }
        }
        out
    }

    pub fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.index == 0 || letter.index > self.generator_count() {
            return Err(Error::InvalidLetter {
                index: letter.index,
                inverse: letter.inverse,
                reason: "index out of range",
            });
        }
        if letter.inverse && self.is_involution(letter.index) {
            return Err(Error::InvalidLetter {
                index: letter.index,
                inverse: true,
                reason: "involution letters carry no exponent",
            });
        }
        Ok(())
    }

    /// Inverse of a letter; involutions are their own inverse.
    pub fn invert(&self, letter: Letter) -> Letter {
        if self.is_involution(letter.index) {
            letter
        } else {
            Letter {
                index: letter.index,
                inverse: !letter.inverse,
            }
        }
    }

    /// Every group element of length at most `max_len`, ordered by length
    /// and then lexicographically.
    pub fn elements_up_to(&self, max_len: usize, budget: usize) -> Result<Vec<Word>> {
        let needed = ball_count(self.degree() as u128, max_len);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "ball enumeration",
                needed,
                budget: budget as u128,
            });
        }
        let alphabet = self.alphabet();
        let mut out = vec![Word::identity(*self)];
        let mut start = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in start..end {
                for &letter in &alphabet {
                    let w = &out[i];
                    if w.letters.last().is_some_and(|&l| self.invert(l) == letter) {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(letter);
                    out.push(Word { letters, sig: *self });
                }
            }
            start = end;
        }
        Ok(out)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^*{} * Z2^*{}", self.r, self.t)
    }
}

pub(crate) fn ball_count(d: u128, radius: usize) -> u128 {
    let mut total = 1u128;
    let mut sphere = d;
    for _ in 0..radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(d - 1);
    }
    total
}

/// A generator or its inverse. Ordering is `a1 < A1 < a2 < A2 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: u32) -> Self {
        Self { index, inverse: false }
    }

    pub fn inv(index: u32) -> Self {
        Self { index, inverse: true }
    }

    pub fn sign(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inverse { 'A' } else { 'a' };
        write!(f, "{c}{}", self.index)
    }
}

/// A reduced word over a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    sig: Signature,
}

impl Word {
    pub fn identity(sig: Signature) -> Self {
        Self {
            letters: Vec::new(),
            sig,
        }
    }

    pub fn letter(sig: Signature, letter: Letter) -> Result<Self> {
        reduce(&[letter], sig)
    }

    /// Builds a word from letters that are already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>, sig: Signature) -> Self {
        debug_assert!(is_reduced(&letters, sig));
        Self { letters, sig }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// Word-metric length.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.same_signature(other)?;
        let mut letters = self.letters.clone();
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some(&first)) = (letters.last(), rest.first()) {
            if self.sig.invert(last) != first {
                break;
            }
            letters.pop();
            rest = &rest[1..];
        }
        letters.extend_from_slice(rest);
        Ok(Word {
            letters,
            sig: self.sig,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| self.sig.invert(l)).collect(),
            sig: self.sig,
        }
    }

    /// True iff the letter sequence reads the same in both directions.
    pub fn is_palindrome(&self) -> bool {
        self.letters.iter().eq(self.letters.iter().rev())
    }

    /// The last `n` letters (or the whole word when shorter).
    pub fn suffix(&self, n: usize) -> &[Letter] {
        &self.letters[self.letters.len().saturating_sub(n)..]
    }

    pub fn prefix(&self, n: usize) -> &[Letter] {
        &self.letters[..n.min(self.letters.len())]
    }

    /// Parses `"e"` or a string such as `"a1A2a3"`; uppercase marks inverses.
    pub fn parse(input: &str, sig: Signature) -> Result<Word> {
        let parse_err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s = input.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::identity(sig));
        }
        let mut letters = Vec::new();
        let mut chars = s.char_indices().peekable();
        while let Some((_, c)) = chars.next() {
            let inverse = match c {
                'a' => false,
                'A' => true,
                _ => return Err(parse_err("expected 'a' or 'A'")),
            };
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
            }
            let index: u32 = digits.parse().map_err(|_| parse_err("missing letter index"))?;
            letters.push(Letter { index, inverse });
        }
        reduce(&letters, sig)
    }

    fn same_signature(&self, other: &Word) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on letters; generator selection relies on this order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .cmp(&other.letters)
            .then_with(|| (self.sig.r, self.sig.t).cmp(&(other.sig.r, other.sig.t)))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cancels adjacent inverse pairs with a single stack pass.
pub fn reduce(seq: &[Letter], sig: Signature) -> Result<Word> {
    let mut stack: Vec<Letter> = Vec::with_capacity(seq.len());
    for &letter in seq {
        sig.check_letter(letter)?;
        if stack.last().is_some_and(|&top| sig.invert(top) == letter) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    Ok(Word {
        letters: stack,
        sig,
    })
}

pub(crate) fn is_reduced(letters: &[Letter], sig: Signature) -> bool {
    letters.windows(2).all(|w| sig.invert(w[0]) != w[1])
}
