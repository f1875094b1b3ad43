//! Bounded brute-force search over byte strings.

use rayon::prelude::*;

const BATCH: usize = 1 << 14;

/// A search space: byte strings of length at most `max_len` over `alphabet`, a total decoder
/// and a deterministic predicate.
pub struct SearchSpace<D, P> {
    pub decoder: D,
    pub predicate: P,
    pub max_len: usize,
    /// Bytes to draw from; all 256 bytes when `None`.
    pub alphabet: Option<Vec<u8>>,
}

impl<D, P> SearchSpace<D, P> {
    pub fn new(decoder: D, predicate: P, max_len: usize) -> Self {
        SearchSpace {
            decoder,
            predicate,
            max_len,
            alphabet: None,
        }
    }

    pub fn with_alphabet(mut self, alphabet: &[u8]) -> Self {
        let mut a = alphabet.to_vec();
        a.sort_unstable();
        a.dedup();
        self.alphabet = Some(a);
        self
    }
}

/// Iterates strings in length-then-lexicographic order.
struct Strings {
    alphabet: Vec<u8>,
    digits: Vec<usize>,
    max_len: usize,
    done: bool,
}

impl Iterator for Strings {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out: Vec<u8> = self.digits.iter().map(|&d| self.alphabet[d]).collect();
        // Advance like an odometer; on overflow grow the length.
        let k = self.alphabet.len();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                if self.digits.len() == self.max_len || k == 0 {
                    self.done = true;
                } else {
                    let n = self.digits.len() + 1;
                    self.digits = vec![0; n];
                }
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < k {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// All decoded candidates passing the predicate, in string order. Predicate evaluation runs
/// in parallel batches; the order is restored before returning.
pub fn enumerate_bounded<T, D, P>(space: &SearchSpace<D, P>) -> Vec<T>
where
    T: Send,
    D: Fn(&[u8]) -> Option<T> + Sync,
    P: Fn(&T) -> bool + Sync,
{
    let alphabet = space
        .alphabet
        .clone()
        .unwrap_or_else(|| (0..=255u8).collect());
    let mut it = Strings {
        alphabet,
        digits: vec![],
        max_len: space.max_len,
        done: false,
    };
    let mut out = Vec::new();
    loop {
        let batch: Vec<Vec<u8>> = it.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let found: Vec<Option<T>> = batch
            .par_iter()
            .map(|s| (space.decoder)(s).filter(|c| (space.predicate)(c)))
            .collect();
        out.extend(found.into_iter().flatten());
    }
    out
}

/// Decoder for canonical ASCII decimal integers (`"0"`, `"-12"`; no leading zeros, no `"-0"`).
pub fn decimal_codec(s: &[u8]) -> Option<i64> {
    let (neg, digits) = match s.split_first() {
        Some((b'-', rest)) => (true, rest),
        _ => (false, s),
    };
    if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    if digits.len() > 1 && digits[0] == b'0' {
        return None;
    }
    if neg && digits == b"0" {
        return None;
    }
    let v: i64 = std::str::from_utf8(digits).ok()?.parse().ok()?;
    Some(if neg { -v } else { v })
}

/// Alphabet of [`decimal_codec`].
pub const DECIMAL_ALPHABET: &[u8] = b"-0123456789";
