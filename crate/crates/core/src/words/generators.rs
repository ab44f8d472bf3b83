use std::collections::BTreeSet;

use serde::Serialize;

use super::{Letter, Signature, Word};
use crate::error::{Error, Result};

/// Which construction produced a [`GeneratingSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Half of the length-`k` palindromes in the free group `F_{d/2}`.
    OddKEvenD,
    /// Half of the length-`k` palindromes in `F_{(d-1)/2} * Z_2`.
    OddKOddD,
    /// Shifted nested words in `Z_2^{*d}`.
    EvenK,
    /// Supplied by the caller; no rank formula applies.
    Custom,
}

impl Construction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Construction::OddKEvenD => "odd-k-even-d",
            Construction::OddKOddD => "odd-k-odd-d",
            Construction::EvenK => "even-k",
            Construction::Custom => "custom",
        }
    }
}

/// A family of words of common length `k` meant to generate a free subgroup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratingSet {
    d: u32,
    k: usize,
    rank: usize,
    construction: Construction,
    elements: Vec<Word>,
    #[serde(skip)]
    sig: Signature,
}

impl GeneratingSet {
    /// Wraps caller-supplied words. Only the common length is checked, so a
    /// set that is not free (even one containing inverse pairs) can be fed to
    /// the verifier as a negative control.
    pub fn custom(elements: Vec<Word>, k: usize) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidInput("empty generating set".into()))?;
        let sig = first.signature();
        for w in &elements {
            if w.signature() != sig {
                return Err(Error::SignatureMismatch(
                    sig.to_string(),
                    w.signature().to_string(),
                ));
            }
            if w.len() != k {
                return Err(Error::InvalidInput(format!(
                    "element {w} has length {} instead of {k}",
                    w.len()
                )));
            }
        }
        Ok(Self {
            d: sig.degree(),
            k,
            rank: elements.len(),
            construction: Construction::Custom,
            elements,
            sig,
        })
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The rank the construction promises.
    pub fn claimed_rank(&self) -> usize {
        self.rank
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// `l` with `k = 2l + 1` or `k = 2l`.
    pub fn half_length(&self) -> usize {
        self.k / 2
    }

    /// Checks the structural invariants: common length, reducedness,
    /// disjointness from the inverse set, and the advertised rank.
    pub fn check_invariants(&self) -> Result<()> {
        let set: BTreeSet<&Word> = self.elements.iter().collect();
        if set.len() != self.elements.len() {
            return Err(Error::InvalidInput("duplicate generators".into()));
        }
        for w in &self.elements {
            if w.len() != self.k || !super::is_reduced(w.letters(), self.sig) {
                return Err(Error::InvalidInput(format!("{w} is not reduced of length {}", self.k)));
            }
            if set.contains(&w.inverse()) {
                return Err(Error::InvalidInput(format!("{w} and its inverse both present")));
            }
        }
        if self.elements.len() != self.rank {
            return Err(Error::InvalidInput(format!(
                "{} elements but rank {}",
                self.elements.len(),
                self.rank
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("generating sets always serialize")
    }
}

/// Rank promised for length `k` words in degree `d`: `d(d-1)^l / 2` for odd
/// `k = 2l + 1` and `(d-1)^l` for even `k = 2l`.
pub fn rank_formula(d: u32, k: usize) -> u128 {
    let l = (k / 2) as u32;
    let base = (d as u128 - 1).pow(l);
    if k % 2 == 1 {
        d as u128 * base / 2
    } else {
        base
    }
}

/// Builds the free generating set of length-`k` words for the `d`-regular tree.
pub fn build_generators(d: u32, k: usize) -> Result<GeneratingSet> {
    if d < 3 {
        return Err(Error::NoConstruction {
            d,
            k: k as u32,
            reason: "degree must be at least 3".into(),
        });
    }
    if k == 0 {
        return Err(Error::NoConstruction {
            d,
            k: 0,
            reason: "length must be positive".into(),
        });
    }
    if k % 2 == 1 {
        odd_palindromes(d, k)
    } else {
        even_nested(d, k)
    }
}

fn odd_palindromes(d: u32, k: usize) -> Result<GeneratingSet> {
    let l = k / 2;
    if d % 2 == 1 && l == 0 {
        return Err(Error::NoConstruction {
            d,
            k: k as u32,
            reason: "k=1 with odd d has no palindrome construction; use the edge-vertex bound".into(),
        });
    }
    let sig = Signature::for_odd_lengths(d)?;
    let all = palindromes(sig, l);
    let mut chosen: Vec<Word> = all.into_iter().filter(|p| *p < p.inverse()).collect();
    chosen.sort();
    Ok(GeneratingSet {
        d,
        k,
        rank: rank_formula(d, k) as usize,
        construction: if d % 2 == 0 {
            Construction::OddKEvenD
        } else {
            Construction::OddKOddD
        },
        elements: chosen,
        sig,
    })
}

/// All reduced palindromes `b_1 ... b_l b_{l+1} b_l ... b_1` of length `2l + 1`.
pub(crate) fn palindromes(sig: Signature, l: usize) -> Vec<Word> {
    let alphabet = sig.alphabet();
    let mut out = Vec::new();
    let mut half: Vec<Letter> = Vec::with_capacity(l + 1);
    fn rec(
        sig: Signature,
        alphabet: &[Letter],
        half: &mut Vec<Letter>,
        target: usize,
        out: &mut Vec<Word>,
    ) {
        if half.len() == target {
            let mut letters = half.clone();
            letters.extend(half[..target - 1].iter().rev());
            out.push(Word::from_reduced(letters, sig));
            return;
        }
        for &b in alphabet {
            if half.last().is_some_and(|&prev| sig.invert(prev) == b) {
                continue;
            }
            half.push(b);
            rec(sig, alphabet, half, target, out);
            half.pop();
        }
    }
    rec(sig, &alphabet, &mut half, l + 1, &mut out);
    out
}

fn even_nested(d: u32, k: usize) -> Result<GeneratingSet> {
    let l = k / 2;
    let sig = Signature::involutions(d)?;
    let shift = |letter: Letter, j: u32| Letter::new((letter.index - 1 + j) % d + 1);
    let mut tails: Vec<Vec<Letter>> = vec![vec![Letter::new(1)]];
    for _ in 1..l {
        tails = tails
            .into_iter()
            .flat_map(|tail| {
                let last = *tail.last().unwrap();
                (1..=d).filter(move |&i| i != last.index).map(move |i| {
                    let mut t = tail.clone();
                    t.push(Letter::new(i));
                    t
                })
            })
            .collect();
    }
    let mut elements = Vec::with_capacity(rank_formula(d, k) as usize);
    for j in 1..d {
        for tail in &tails {
            let mut letters: Vec<Letter> = tail.iter().rev().map(|&b| shift(b, j)).collect();
            letters.extend_from_slice(tail);
            elements.push(Word::from_reduced(letters, sig));
        }
    }
    elements.sort();
    Ok(GeneratingSet {
        d,
        k,
        rank: rank_formula(d, k) as usize,
        construction: Construction::EvenK,
        elements,
        sig,
    })
}
