//! Word-level helpers over `[u64]` bitsets.

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub fn test(set: &[u64], i: usize) -> bool {
    (set[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub fn set(set: &mut [u64], i: usize) {
    set[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub fn clear(set: &mut [u64], i: usize) {
    set[i >> 6] &= !(1u64 << (i & 63));
}

#[inline]
pub fn toggle(set: &mut [u64], i: usize) {
    set[i >> 6] ^= 1u64 << (i & 63);
}

pub fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> usize {
    a.iter().zip(b).zip(c).map(|((x, y), z)| (x & y & z).count_ones() as usize).sum()
}

/// Bits of `a & b` at positions strictly greater than `from`.
pub fn and_count_above(a: &[u64], b: &[u64], from: usize) -> usize {
    let start = (from + 1) >> 6;
    let mut total = 0;
    for w in start..a.len() {
        let mut x = a[w] & b[w];
        if w == start {
            let shift = (from + 1) & 63;
            x &= u64::MAX.checked_shl(shift as u32).unwrap_or(0);
        }
        total += x.count_ones() as usize;
    }
    total
}

/// Mask with the first `n` bits set.
pub fn full(n: usize) -> Vec<u64> {
    let mut v = vec![u64::MAX; words_for(n)];
    if n % 64 != 0 {
        if let Some(last) = v.last_mut() {
            *last = (1u64 << (n % 64)) - 1;
        }
    }
    v
}

pub fn from_indices(n: usize, idx: &[usize]) -> Vec<u64> {
    let mut v = vec![0u64; words_for(n)];
    for &i in idx {
        set(&mut v, i);
    }
    v
}

pub fn ones(set: &[u64]) -> Ones<'_> {
    Ones {
        set,
        word: 0,
        cur: set.first().copied().unwrap_or(0),
    }
}

pub fn first(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub struct Ones<'a> {
    set: &'a [u64],
    word: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * 64 + tz);
            }
            self.word += 1;
            if self.word >= self.set.len() {
                return None;
            }
            self.cur = self.set[self.word];
        }
    }
}
