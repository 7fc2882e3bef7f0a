//! Fixed-length bit windows over `[0, len)` used by the bounded checks.

use crate::setexpr::NatSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bits({} of {})", self.count(), self.len)
    }
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits { len, words: vec![u64::MAX; len.div_ceil(64)] };
        b.clear_excess();
        b
    }

    /// Bit `i` is set iff `start + i ∈ set`.
    pub fn from_set(set: &NatSet, start: u64, len: usize) -> Self {
        let mut b = Bits::zeros(len);
        match set {
            NatSet::Tail(k) => {
                let from = k.saturating_sub(start).min(len as u64) as usize;
                for i in from..len {
                    b.set(i);
                }
            }
            NatSet::Explicit(_) | NatSet::FiniteSums(_) => {
                for x in set.enumerate(start + len as u64) {
                    if x >= start {
                        b.set((x - start) as usize);
                    }
                }
            }
            _ => {
                for i in 0..len {
                    if set.member(start + i as u64) {
                        b.set(i);
                    }
                }
            }
        }
        b
    }

    fn clear_excess(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Window of length `len` whose bit `i` is bit `i + n` of `self`
    /// (zero past the end of `self`).
    pub fn shifted(&self, n: usize, len: usize) -> Bits {
        let mut out = Bits::zeros(len);
        let (ws, bs) = (n / 64, n % 64);
        for (k, w) in out.words.iter_mut().enumerate() {
            let lo = self.words.get(k + ws).copied().unwrap_or(0);
            *w = if bs == 0 {
                lo
            } else {
                let hi = self.words.get(k + ws + 1).copied().unwrap_or(0);
                (lo >> bs) | (hi << (64 - bs))
            };
        }
        // Bits of `self` beyond its length are already zero.
        out.clear_excess();
        out
    }

    pub fn and_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn and(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.and_with(other);
        out
    }

    pub fn not(&self) -> Bits {
        let mut out = Bits { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        out.clear_excess();
        out
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Least `i` set here but not in `other`.
    pub fn first_outside(&self, other: &Bits) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| **a & !**b != 0)
            .map(|(k, (a, b))| k * 64 + (a & !b).trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}
