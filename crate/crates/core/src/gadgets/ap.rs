//! Sets of positive integers without three-term arithmetic progressions.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Exact (maximum) construction is refused above this ground size.
pub const EXACT_AP_BOUND: usize = 40;
/// Behrend parameter scan is refused above this ground size.
pub const BEHREND_BOUND: usize = 100_000_000;
/// Greedy augmentation after the sphere construction runs up to this size.
const AUGMENT_BOUND: usize = 50_000;
/// Largest number of digit vectors enumerated for one (digits, length) choice.
const SPHERE_ENUM_LIMIT: usize = 4_000_000;

/// Subset of `1..=ground` with no `a < b < c` such that `a + c = 2b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApFreeSet {
    ground: usize,
    elements: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApMode {
    Exact,
    Behrend,
}

/// First progression `(a, b, c)` in the sorted set, if any.
pub fn find_progression(sorted: &[usize]) -> Option<(usize, usize, usize)> {
    let set: std::collections::HashSet<usize> = sorted.iter().copied().collect();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            let c = 2 * b - a;
            if set.contains(&c) {
                return Some((a, b, c));
            }
        }
    }
    None
}

impl ApFreeSet {
    pub fn new(ground: usize, mut elements: Vec<usize>) -> Result<ApFreeSet> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&e| e == 0 || e > ground) {
            return invalid(format!("element {bad} outside 1..={ground}"));
        }
        if let Some((a, b, c)) = find_progression(&elements) {
            return Err(Error::Precondition(format!("{a}, {b}, {c} is an arithmetic progression")));
        }
        Ok(ApFreeSet { ground, elements })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Maximum 3-AP-free subsets of `1..=m` for every `m <= n`.
///
/// Uses `r(m) ∈ {r(m-1), r(m-1)+1}`; a set reaching `r(m-1)+1` must contain
/// both 1 and `m` (otherwise it fits in a shorter interval), so only those
/// sets are searched, pruned by `r` of the remaining interval.
fn exact_table(n: usize) -> Vec<Vec<usize>> {
    let mut best: Vec<Vec<usize>> = vec![vec![]];
    let mut r = vec![0usize];
    for m in 1..=n {
        let target = r[m - 1] + 1;
        let found = if m == 1 {
            Some(vec![1])
        } else {
            let mut chosen = vec![1];
            search(m, 2, target, &r, &mut chosen).then_some(chosen)
        };
        match found {
            Some(s) => {
                r.push(target);
                best.push(s);
            }
            None => {
                r.push(r[m - 1]);
                best.push(best[m - 1].clone());
            }
        }
    }
    best
}

fn creates_ap(chosen: &[usize], x: usize) -> bool {
    // x is larger than everything chosen, so it can only end a progression
    chosen.iter().rev().any(|&b| {
        let a = 2 * b as isize - x as isize;
        a >= 1 && chosen.binary_search(&(a as usize)).is_ok() && (a as usize) < b
    })
}

fn search(m: usize, next: usize, target: usize, r: &[usize], chosen: &mut Vec<usize>) -> bool {
    if next == m {
        if chosen.len() + 1 == target && !creates_ap(chosen, m) {
            chosen.push(m);
            return true;
        }
        return false;
    }
    // remaining candidates next..m-1 contribute at most r(m - next), plus m itself
    if chosen.len() + r[m - next] + 1 < target {
        return false;
    }
    if !creates_ap(chosen, next) {
        chosen.push(next);
        if search(m, next + 1, target, r, chosen) {
            return true;
        }
        chosen.pop();
    }
    search(m, next + 1, target, r, chosen)
}

/// Sphere construction: numbers `Σ a_i (2q-1)^i` with digits `a_i < q`
/// whose digit vectors share the most popular squared norm. Digit-wise
/// addition never carries, so `x + z = 2y` forces `a + c = 2b` per digit,
/// and strict convexity of the sphere forces `a = b = c`.
fn behrend(n: usize) -> Vec<usize> {
    let mut best: Vec<usize> = if n >= 1 { vec![1] } else { vec![] };
    // for each length only digit bounds with (2q-1)^len near n are useful:
    // smaller q wastes the range, larger q leaves most vectors above n
    for len in 2usize.. {
        if 3usize.checked_pow(len as u32 - 1).is_none_or(|t| t >= n) {
            break;
        }
        let root = (n as f64).powf(1.0 / len as f64);
        let q0 = ((root + 1.0) / 2.0).floor().max(2.0) as usize;
        for q in q0.saturating_sub(1).max(2)..=q0 + 2 {
            let base = 2 * q - 1;
            if base.checked_pow(len as u32 - 1).is_none_or(|t| t >= n) {
                continue;
            }
            if q.checked_pow(len as u32).is_none_or(|c| c > SPHERE_ENUM_LIMIT) {
                continue;
            }
            let class = sphere_class(n, q, len);
            if class.len() > best.len() {
                best = class;
            }
        }
    }
    best.sort_unstable();
    if n <= AUGMENT_BOUND {
        augment(n, &mut best);
    }
    best
}

/// Largest class of same-norm digit vectors (digits `< q`, `len` digits)
/// whose values lie below `n`, as 1-based integers.
fn sphere_class(n: usize, q: usize, len: usize) -> Vec<usize> {
    let base = 2 * q - 1;
    let mut by_norm: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut digits = vec![0usize; len];
    loop {
        let mut value = 0usize;
        let mut norm = 0usize;
        for &d in digits.iter().rev() {
            value = value * base + d;
            norm += d * d;
        }
        if value < n {
            by_norm.entry(norm).or_default().push(value + 1);
        }
        let mut i = 0;
        while i < len && digits[i] == q - 1 {
            digits[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
        digits[i] += 1;
    }
    by_norm
        .into_values()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c.clone())))
        .unwrap_or_default()
}

/// Adds, in increasing order, every number that keeps the set progression-free.
fn augment(n: usize, set: &mut Vec<usize>) {
    let mut member = vec![false; 2 * n + 2];
    for &s in set.iter() {
        member[s] = true;
    }
    for x in 1..=n {
        if member[x] {
            continue;
        }
        let blocked = set.iter().any(|&s| {
            let (lo, hi) = (s.min(x), s.max(x));
            // x and s as the two ends, or as an end and the middle
            ((lo + hi) % 2 == 0 && member[(lo + hi) / 2]) || (2 * hi - lo <= n && member[2 * hi - lo]) || (2 * lo > hi && member[2 * lo - hi])
        });
        if !blocked {
            member[x] = true;
            set.push(x);
        }
    }
    set.sort_unstable();
}

pub fn ap3_free_set(n: usize, mode: ApMode) -> Result<ApFreeSet> {
    let elements = match mode {
        ApMode::Exact => {
            if n > EXACT_AP_BOUND {
                return Err(Error::ExactBoundExceeded {
                    what: "exact 3-AP-free set search",
                    n,
                    bound: EXACT_AP_BOUND,
                });
            }
            exact_table(n).pop().unwrap_or_default()
        }
        ApMode::Behrend => {
            if n > BEHREND_BOUND {
                return Err(Error::ExactBoundExceeded {
                    what: "Behrend construction",
                    n,
                    bound: BEHREND_BOUND,
                });
            }
            behrend(n)
        }
    };
    ApFreeSet::new(n, elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: largest progression-free subset of 1..=n by full subset scan.
    fn brute_r3(n: usize) -> usize {
        (0u32..(1 << n))
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect();
                find_progression(&s).is_none()
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn examples() {
        let s = ap3_free_set(9, ApMode::Exact).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(brute_r3(9), 5);
        assert_eq!(ap3_free_set(2, ApMode::Exact).unwrap().elements(), &[1, 2]);
        assert_eq!(ap3_free_set(1, ApMode::Exact).unwrap().elements(), &[1]);
        assert!(ap3_free_set(0, ApMode::Exact).unwrap().is_empty());
        assert!(ap3_free_set(41, ApMode::Exact).is_err());
        assert!(ApFreeSet::new(5, vec![1, 2, 3]).is_err());
        assert!(ApFreeSet::new(9, vec![1, 2, 4, 8, 9]).is_ok());
    }

    #[test]
    fn exact_matches_subset_scan() {
        for n in 1..=20 {
            assert_eq!(ap3_free_set(n, ApMode::Exact).unwrap().len(), brute_r3(n), "n = {n}");
        }
    }

    #[test]
    fn exact_is_monotone_and_valid_up_to_bound() {
        let mut prev = 0;
        for n in 1..=EXACT_AP_BOUND {
            let s = ap3_free_set(n, ApMode::Exact).unwrap();
            assert!(s.len() == prev || s.len() == prev + 1, "n = {n}");
            prev = s.len();
        }
    }

    #[test]
    fn behrend_sets_are_progression_free() {
        for n in [1, 2, 10, 100, 1000, 20_000] {
            let s = ap3_free_set(n, ApMode::Behrend).unwrap();
            assert!(find_progression(s.elements()).is_none());
            assert!(s.elements().iter().all(|&e| (1..=n).contains(&e)));
        }
        assert!(ap3_free_set(1000, ApMode::Behrend).unwrap().len() >= 60);
        assert!(ap3_free_set(BEHREND_BOUND + 1, ApMode::Behrend).is_err());
    }

    #[test]
    fn large_behrend_without_augmentation() {
        let s = ap3_free_set(1_000_000, ApMode::Behrend).unwrap();
        assert!(s.len() > 1000);
        assert!(find_progression(s.elements()).is_none());
    }
}
