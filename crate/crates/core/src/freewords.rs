//! Exact word algebra in the free group `F_k`.
//!
//! Words are flat sequences of signed letters kept freely reduced at all
//! times. Letters print as `a..z` for generators and `A..Z` for their
//! inverses, so `"bAb"` is `b·a⁻¹·b` and the empty string is the identity.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::Rational;

/// Largest rank expressible in the text format.
pub const MAX_RANK: u8 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator {index} is outside 1..={rank}")]
    InvalidGenerator { index: u8, rank: u8 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u8, u8),
    #[error("rank {0} unsupported; free groups of rank 2..=26 only")]
    UnsupportedRank(u8),
    #[error("invalid character {0:?} in word")]
    InvalidChar(char),
}

/// A generator or its inverse: `+i` stands for the i-th generator, `-i` for
/// its inverse, with `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    pub fn new(index: u8, inverse: bool) -> Letter {
        assert!((1..=MAX_RANK).contains(&index), "generator index {index}");
        let i = index as i8;
        Letter(if inverse { -i } else { i })
    }

    pub fn generator(index: u8) -> Letter {
        Letter::new(index, false)
    }

    pub fn index(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn signed(self) -> i8 {
        self.0
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new(c as u8 - b'a' + 1, false)),
            'A'..='Z' => Some(Letter::new(c as u8 - b'A' + 1, true)),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.index() - 1) as char
    }

    /// Position in the fixed letter order `a < A < b < B < ...`.
    fn key(self) -> u16 {
        2 * self.index() as u16 + self.is_inverse() as u16
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `2k` letters of rank `k` in enumeration order.
pub fn alphabet(rank: u8) -> Vec<Letter> {
    (1..=rank).flat_map(|i| [Letter::new(i, false), Letter::new(i, true)]).collect()
}

fn check_rank(rank: u8) -> Result<(), FreeGroupError> {
    if (2..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(FreeGroupError::UnsupportedRank(rank))
    }
}

/// A freely reduced word; its length is the word norm `||g||`.
///
/// Words order by `(length, letters)` lexicographically, which is the ball
/// enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    rank: u8,
}

impl Word {
    pub fn identity(rank: u8) -> Result<Word, FreeGroupError> {
        check_rank(rank)?;
        Ok(Word { letters: Vec::new(), rank })
    }

    /// Single-letter word for generator `index`.
    pub fn generator(index: u8, rank: u8) -> Result<Word, FreeGroupError> {
        reduce(&[Letter::new(index, false)], rank)
    }

    pub fn parse(text: &str, rank: u8) -> Result<Word, FreeGroupError> {
        let letters = text
            .chars()
            .map(|c| Letter::from_char(c).ok_or(FreeGroupError::InvalidChar(c)))
            .collect::<Result<Vec<_>, _>>()?;
        reduce(&letters, rank)
    }

    /// Assumes `letters` is already reduced and in range.
    fn from_reduced(letters: Vec<Letter>, rank: u8) -> Word {
        debug_assert!(is_reduced(&letters));
        Word { letters, rank }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    #[allow(clippy::len_without_is_empty)] // the empty word is `is_identity`
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, FreeGroupError> {
        multiply(self, other)
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    /// `g^n` for any integer `n`; negative powers invert.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let n = n.unsigned_abs();
        if n == 0 || base.is_identity() {
            return Word { letters: Vec::new(), rank: self.rank };
        }
        // g = c·core·c⁻¹ gives g^n = c·core^n·c⁻¹ with no cancellation inside.
        let dec = cyclic_reduce(&base);
        let mut letters = Vec::with_capacity(2 * dec.conjugator.len() + n as usize * dec.core.len());
        letters.extend_from_slice(&dec.conjugator.letters);
        for _ in 0..n {
            letters.extend_from_slice(&dec.core.letters);
        }
        letters.extend(dec.conjugator.letters.iter().rev().map(|l| l.inverse()));
        Word::from_reduced(letters, self.rank)
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Word) -> Result<Word, FreeGroupError> {
        self.multiply(other)?.multiply(&self.inverse())
    }

    /// Word distance `d(self, other) = ||self⁻¹ · other||`.
    pub fn distance(&self, other: &Word) -> Result<usize, FreeGroupError> {
        Ok(self.inverse().multiply(other)?.len())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

/// Freely reduces a letter sequence with a single stack pass.
pub fn reduce(letters: &[Letter], rank: u8) -> Result<Word, FreeGroupError> {
    check_rank(rank)?;
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l.index() > rank {
            return Err(FreeGroupError::InvalidGenerator { index: l.index(), rank });
        }
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(Word { letters: out, rank })
}

pub fn multiply(g: &Word, h: &Word) -> Result<Word, FreeGroupError> {
    if g.rank != h.rank {
        return Err(FreeGroupError::RankMismatch(g.rank, h.rank));
    }
    let mut cancel = 0;
    while cancel < g.len().min(h.len()) && g.letters[g.len() - 1 - cancel] == h.letters[cancel].inverse() {
        cancel += 1;
    }
    let mut letters = Vec::with_capacity(g.len() + h.len() - 2 * cancel);
    letters.extend_from_slice(&g.letters[..g.len() - cancel]);
    letters.extend_from_slice(&h.letters[cancel..]);
    Ok(Word::from_reduced(letters, g.rank))
}

pub fn invert(g: &Word) -> Word {
    let letters = g.letters.iter().rev().map(|l| l.inverse()).collect();
    Word::from_reduced(letters, g.rank)
}

pub fn word_length(g: &Word) -> usize {
    g.len()
}

/// A Gromov product stored doubled so that it stays an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GromovProduct {
    doubled: u64,
}

impl GromovProduct {
    pub fn from_doubled(doubled: u64) -> GromovProduct {
        GromovProduct { doubled }
    }

    pub fn doubled(self) -> u64 {
        self.doubled
    }

    pub fn value(self) -> Rational {
        Rational::new(self.doubled as i64, 2)
    }
}

impl fmt::Display for GromovProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `⟨g, h⟩_base = ½(d(g, base) + d(h, base) − d(g, h))`.
pub fn gromov_product(g: &Word, h: &Word, base: &Word) -> Result<GromovProduct, FreeGroupError> {
    let dgb = g.distance(base)?;
    let dhb = h.distance(base)?;
    let dgh = g.distance(h)?;
    Ok(GromovProduct { doubled: (dgb + dhb - dgh) as u64 })
}

/// Gromov product based at the identity.
pub fn gromov_product_e(g: &Word, h: &Word) -> Result<GromovProduct, FreeGroupError> {
    let dgh = g.distance(h)?;
    Ok(GromovProduct { doubled: (g.len() + h.len() - dgh) as u64 })
}

/// `original = conjugator · core · conjugator⁻¹` with `core` cyclically
/// reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub core: Word,
    pub conjugator: Word,
    pub original: Word,
}

pub fn cyclic_reduce(g: &Word) -> CyclicDecomposition {
    let l = &g.letters;
    let mut peel = 0;
    while 2 * peel + 1 < l.len() && l[peel] == l[l.len() - 1 - peel].inverse() {
        peel += 1;
    }
    CyclicDecomposition {
        core: Word::from_reduced(l[peel..l.len() - peel].to_vec(), g.rank),
        conjugator: Word::from_reduced(l[..peel].to_vec(), g.rank),
        original: g.clone(),
    }
}

/// Length of the cyclically reduced core, without allocating.
pub fn cyclic_length(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut peel = 0;
    while 2 * peel + 1 < n && letters[peel] == letters[n - 1 - peel].inverse() {
        peel += 1;
    }
    n - 2 * peel
}

/// Minimal length over the conjugacy class, which in a free group is the
/// cyclically reduced length.
pub fn translation_length_free(g: &Word) -> usize {
    cyclic_length(&g.letters)
}

/// `lim ||gⁿ||/n`; free groups are 0-hyperbolic so this equals the
/// translation length exactly.
pub fn stable_norm_free(g: &Word) -> usize {
    cyclic_length(&g.letters)
}

/// `||gⁿ|| / n` for a fixed `n ≥ 1`, evaluated by actual multiplication.
pub fn power_length_ratio(g: &Word, n: u32) -> Rational {
    assert!(n >= 1);
    let mut acc = g.clone();
    for _ in 1..n {
        acc = multiply(&acc, g).expect("same rank");
    }
    Rational::new(acc.len() as i64, n as i64)
}

/// Four-point condition `⟨g, k⟩ ≥ min(⟨g, h⟩, ⟨h, k⟩) − δ` at base `e`.
pub fn check_hyperbolic_inequality(g: &Word, h: &Word, k: &Word, delta: Rational) -> Result<bool, FreeGroupError> {
    let gk = gromov_product_e(g, k)?.value();
    let gh = gromov_product_e(g, h)?.value();
    let hk = gromov_product_e(h, k)?.value();
    Ok(gk >= gh.min(hk) - delta)
}

/// Reduced words of one length in lexicographic letter order, optionally
/// restricted to a fixed prefix.
pub struct WordsOfLength {
    rank: u8,
    len: usize,
    fixed: usize,
    alphabet: Vec<Letter>,
    current: Option<Vec<Letter>>,
}

impl WordsOfLength {
    pub fn new(rank: u8, len: usize) -> WordsOfLength {
        Self::with_prefix(&[], rank, len)
    }

    /// Words of length `len` starting with `prefix` (which must be reduced
    /// and no longer than `len`).
    pub fn with_prefix(prefix: &[Letter], rank: u8, len: usize) -> WordsOfLength {
        let alphabet = alphabet(rank);
        let current = if prefix.len() <= len && is_reduced(prefix) {
            let mut w = prefix.to_vec();
            while w.len() < len {
                let next = smallest_after(&alphabet, w.last().copied());
                w.push(next);
            }
            Some(w)
        } else {
            None
        };
        WordsOfLength { rank, len, fixed: prefix.len(), alphabet, current }
    }

    fn advance(&mut self) {
        let Some(w) = self.current.as_mut() else { return };
        let mut pos = self.len;
        loop {
            if pos == self.fixed {
                self.current = None;
                return;
            }
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(w[pos - 1]) };
            let cur = self.alphabet.iter().position(|&l| l == w[pos]).unwrap();
            if let Some(next) = self.alphabet[cur + 1..].iter().copied().find(|&l| Some(l.inverse()) != prev) {
                w[pos] = next;
                for i in pos + 1..self.len {
                    w[i] = smallest_after(&self.alphabet, Some(w[i - 1]));
                }
                return;
            }
        }
    }
}

fn smallest_after(alphabet: &[Letter], prev: Option<Letter>) -> Letter {
    alphabet.iter().copied().find(|&l| Some(l.inverse()) != prev).expect("rank >= 2")
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let w = self.current.clone()?;
        self.advance();
        Some(Word::from_reduced(w, self.rank))
    }
}

/// Every element of the ball of the given radius, ordered by
/// `(length, letters)`.
pub fn ball(rank: u8, radius: usize) -> Result<impl Iterator<Item = Word>, FreeGroupError> {
    check_rank(rank)?;
    Ok((0..=radius).flat_map(move |len| WordsOfLength::new(rank, len)))
}

/// Number of reduced words of length exactly `len` in rank `k`.
pub fn sphere_size(rank: u8, len: usize) -> u64 {
    if len == 0 {
        1
    } else {
        let k = rank as u64;
        2 * k * (2 * k - 1).pow(len as u32 - 1)
    }
}
