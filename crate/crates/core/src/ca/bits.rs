//! Packed one-bit-per-cell rows.
//!
//! Bit `i` of the row lives in word `i / 64` at bit position `i % 64`.
//! Bits past `len` in the last word are always zero.

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn filled(len: usize, value: bool) -> Self {
        let mut row = BitRow {
            words: vec![if value { !0 } else { 0 }; words_for(len)],
            len,
        };
        row.clear_tail();
        row
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut row = BitRow::default();
        for b in bits {
            row.push(b);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// The 64 bits starting at `pos`; positions at or past `len` read as zero.
    #[inline]
    pub fn extract(&self, pos: usize) -> u64 {
        let w = pos / 64;
        let s = pos % 64;
        let lo = self.words.get(w).copied().unwrap_or(0);
        if s == 0 {
            lo
        } else {
            let hi = self.words.get(w + 1).copied().unwrap_or(0);
            (lo >> s) | (hi << (64 - s))
        }
    }

    /// Appends `count` bits of `src` starting at `from`.
    pub fn append_range(&mut self, src: &BitRow, from: usize, count: usize) {
        debug_assert!(from + count <= src.len);
        let mut done = 0;
        while done < count {
            let take = (count - done).min(64);
            let chunk = src.extract(from + done);
            self.append_word(chunk, take);
            done += take;
        }
    }

    /// Appends `count` copies of `value`.
    pub fn append_fill(&mut self, value: bool, count: usize) {
        let word = if value { !0 } else { 0 };
        let mut done = 0;
        while done < count {
            let take = (count - done).min(64);
            self.append_word(word, take);
            done += take;
        }
    }

    /// Appends the low `count` bits of `chunk` (`count <= 64`).
    fn append_word(&mut self, chunk: u64, count: usize) {
        debug_assert!(count <= 64);
        if count == 0 {
            return;
        }
        let chunk = if count == 64 {
            chunk
        } else {
            chunk & ((1u64 << count) - 1)
        };
        let s = self.len % 64;
        if s == 0 {
            self.words.push(chunk);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= chunk << s;
            if s + count > 64 {
                self.words.push(chunk >> (64 - s));
            }
        }
        self.len += count;
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn all(&self, value: bool) -> bool {
        if value {
            self.count_ones() == self.len
        } else {
            self.words.iter().all(|&w| w == 0)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Builds a row of `len` bits word by word from `f(word_index)`.
    pub(crate) fn from_word_fn(len: usize, mut f: impl FnMut(usize) -> u64) -> Self {
        let mut row = BitRow {
            words: (0..words_for(len)).map(&mut f).collect(),
            len,
        };
        row.clear_tail();
        row
    }

    fn clear_tail(&mut self) {
        let s = self.len % 64;
        if s != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << s) - 1;
            }
        }
    }
}

impl std::fmt::Debug for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        write!(f, "BitRow({s})")
    }
}
