//! Word-packed bit sets and square bit matrices.
//!
//! Seed subgraphs are dense, so adjacency and co-occurrence tables are stored
//! as rows of `u64` words and queried with popcounts.

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(WORD_BITS)
}

/// A fixed-capacity set of small integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(nbits: usize) -> Self {
        BitSet {
            nbits,
            words: vec![0; words_for(nbits)],
        }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = Self::new(nbits);
        for i in 0..nbits {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.nbits
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> SetBits<'_> {
        SetBits {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        self.intersect_with_words(&other.words);
    }

    pub fn intersect_with_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= b;
        }
    }

    /// `|self ∩ other|` where `other` is a raw word slice of the same width.
    #[inline]
    pub fn intersection_len(&self, other: &[u64]) -> usize {
        count_and(&self.words, other)
    }

    /// True when every member of `self` is also set in `other`.
    #[inline]
    pub fn is_subset_of(&self, other: &[u64]) -> bool {
        self.words.iter().zip(other).all(|(a, b)| a & !b == 0)
    }
}

/// Iterator over set bit positions, lowest first.
pub struct SetBits<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for SetBits<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

/// Iterator over the positions set in both word slices, lowest first.
pub fn iter_and<'a>(a: &'a [u64], b: &'a [u64]) -> AndBits<'a> {
    let current = match (a.first(), b.first()) {
        (Some(&x), Some(&y)) => x & y,
        _ => 0,
    };
    AndBits {
        a,
        b,
        word_idx: 0,
        current,
    }
}

pub struct AndBits<'a> {
    a: &'a [u64],
    b: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for AndBits<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.a.len() {
                return None;
            }
            self.current = self.a[self.word_idx] & self.b[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

#[inline]
pub fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

#[inline]
pub fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

#[inline]
pub fn count_and3(a: &[u64], b: &[u64], c: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

/// Square symmetric boolean matrix backed by one word row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    row_words: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let row_words = words_for(n);
        BitMatrix {
            n,
            row_words,
            words: vec![0; n * row_words],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.row_words..(i + 1) * self.row_words]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.words[i * self.row_words + j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
    }

    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize) {
        self.set(i, j);
        self.set(j, i);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.row_words + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    /// Popcount of row `i`.
    #[inline]
    pub fn row_len(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_row(&self, i: usize) -> SetBits<'_> {
        let row = self.row(i);
        SetBits {
            words: row,
            word_idx: 0,
            current: row.first().copied().unwrap_or(0),
        }
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", if self.get(i, j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
