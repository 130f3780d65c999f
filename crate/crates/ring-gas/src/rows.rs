//! Packed bit storage: `rows` rows of `width` bits each, row-major in u64
//! words. Bits above `width` in the last word of a row are kept zero.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRows {
    rows: usize,
    width: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitRows {
    pub fn new(rows: usize, width: usize) -> Self {
        let words_per_row = width.div_ceil(64).max(1);
        Self {
            rows,
            width,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn row(&self, row: usize) -> &[u64] {
        let start = row * self.words_per_row;
        &self.words[start..start + self.words_per_row]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [u64] {
        let start = row * self.words_per_row;
        &mut self.words[start..start + self.words_per_row]
    }

    pub fn get(&self, row: usize, bit: usize) -> bool {
        debug_assert!(bit < self.width);
        (self.row(row)[bit / 64] >> (bit % 64)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, bit: usize, value: bool) {
        debug_assert!(bit < self.width);
        let word = &mut self.row_mut(row)[bit / 64];
        let mask = 1u64 << (bit % 64);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn fill_ones(&mut self) {
        if self.width == 0 {
            return;
        }
        let last = (self.width - 1) / 64;
        let tail_mask = tail_mask(self.width);
        for r in 0..self.rows {
            let row = self.row_mut(r);
            for (w, word) in row.iter_mut().enumerate() {
                *word = if w < last {
                    u64::MAX
                } else if w == last {
                    tail_mask
                } else {
                    0
                };
            }
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Per-bit-position counts across all rows (`width` entries).
    pub fn per_bit_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.width];
        for r in 0..self.rows {
            for (w, &word) in self.row(r).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    counts[w * 64 + b] += 1;
                    bits &= bits - 1;
                }
            }
        }
        counts
    }

    /// Moves the content of row `k` to row `k + 1 (mod rows)`.
    pub fn rotate_rows_forward(&mut self) {
        self.words.rotate_right(self.words_per_row);
    }

    /// Moves the content of row `k` to row `k - 1 (mod rows)`.
    pub fn rotate_rows_backward(&mut self) {
        self.words.rotate_left(self.words_per_row);
    }
}

/// Mask selecting the valid bits of the last word of a `width`-bit row.
pub(crate) fn tail_mask(width: usize) -> u64 {
    match width % 64 {
        0 => u64::MAX,
        rem => (1u64 << rem) - 1,
    }
}

/// Swaps bit pairs `(q, q+1)` of `row` for every bit `q` set in `lo`.
/// `hi` must equal `lo << 1` (within the row). Active bits of `lo` are
/// required to be pairwise non-adjacent, which makes the swaps disjoint.
pub(crate) fn apply_swap(row: &mut [u64], lo: &[u64], hi: &[u64]) {
    let n = row.len();
    let mut prev_orig = 0u64;
    let mut prev_lo = 0u64;
    for w in 0..n {
        let orig = row[w];
        let (next_orig, next_hi) = if w + 1 < n {
            (row[w + 1], hi[w + 1])
        } else {
            (0, 0)
        };
        let up = ((orig & lo[w]) << 1) | ((prev_orig & prev_lo) >> 63);
        let down = ((orig & hi[w]) >> 1) | ((next_orig & next_hi & 1) << 63);
        let stay = orig & !(lo[w] | hi[w]);
        row[w] = stay | up | down;
        prev_orig = orig;
        prev_lo = lo[w];
    }
}

/// `dst = src << 1` within a row, zero fill, bits above `width` cleared.
pub(crate) fn shifted_left_one(src: &[u64], width: usize) -> Vec<u64> {
    let mut dst = vec![0u64; src.len()];
    let mut carry = 0u64;
    for (d, &s) in dst.iter_mut().zip(src.iter()) {
        *d = (s << 1) | carry;
        carry = s >> 63;
    }
    clear_above(&mut dst, width);
    dst
}

/// `dst = src >> 1` within a row, zero fill.
pub(crate) fn shifted_right_one(src: &[u64], width: usize) -> Vec<u64> {
    let mut dst = vec![0u64; src.len()];
    for w in 0..src.len() {
        let next = if w + 1 < src.len() { src[w + 1] } else { 0 };
        dst[w] = (src[w] >> 1) | ((next & 1) << 63);
    }
    clear_above(&mut dst, width);
    dst
}

pub(crate) fn clear_above(row: &mut [u64], width: usize) {
    if width == 0 {
        for w in row.iter_mut() {
            *w = 0;
        }
        return;
    }
    let last = (width - 1) / 64;
    for (w, word) in row.iter_mut().enumerate() {
        if w == last {
            *word &= tail_mask(width);
        } else if w > last {
            *word = 0;
        }
    }
}
