//! Longest-common-extension queries over a fixed word.
//!
//! Built from a suffix array (SA-IS), its LCP array (Kasai) and a
//! block-decomposed range-minimum structure: a sparse table over the minima
//! of fixed-size blocks, with in-block scans at the ends. Construction is
//! `O(n)`, queries are `O(1)`. Positions are 0-based.

use std::collections::BTreeSet;

use crate::Symbol;

pub struct LceIndex {
    n: usize,
    rank: Vec<u32>,
    lcp: Vec<u32>,
    /// `levels[k][b]` = min of the block minima `b .. b + 2^k`.
    levels: Vec<Vec<u32>>,
}

const BLOCK: usize = 32;

impl LceIndex {
    pub fn new(w: &[Symbol]) -> Self {
        let n = w.len();
        let ids: Vec<u32> = w.iter().map(|s| s.id()).collect::<BTreeSet<u32>>().into_iter().collect();
        let s: Vec<u32> = w.iter().map(|c| ids.binary_search(&c.id()).unwrap() as u32).collect();
        let sa = suffix_array(&s, ids.len().saturating_sub(1));
        let mut rank = vec![0u32; n];
        for (i, &p) in sa.iter().enumerate() {
            rank[p as usize] = i as u32;
        }
        let lcp = kasai(&s, &sa, &rank);
        let minima: Vec<u32> = lcp.chunks(BLOCK).map(|c| c.iter().copied().min().unwrap()).collect();
        let mut levels = vec![minima];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width).map(|i| prev[i].min(prev[i + width])).collect();
            levels.push(next);
            width *= 2;
        }
        LceIndex { n, rank, lcp, levels }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Length of the longest common prefix of the suffixes starting at `i`
    /// and `j`; suffixes starting at or beyond the end are empty.
    pub fn lce(&self, i: usize, j: usize) -> usize {
        if i >= self.n || j >= self.n {
            return 0;
        }
        if i == j {
            return self.n - i;
        }
        let (a, b) = (self.rank[i] as usize, self.rank[j] as usize);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.range_min(lo, hi) as usize
    }

    /// Minimum of `lcp[lo..hi]`, `lo < hi`.
    fn range_min(&self, lo: usize, hi: usize) -> u32 {
        let (first, last) = (lo / BLOCK + 1, hi / BLOCK);
        if first >= last {
            return self.lcp[lo..hi].iter().copied().min().unwrap();
        }
        let head = self.lcp[lo..first * BLOCK].iter().copied().min().unwrap();
        let tail = self.lcp[last * BLOCK..hi].iter().copied().min().unwrap_or(u32::MAX);
        let k = (usize::BITS - 1 - (last - first).leading_zeros()) as usize;
        let level = &self.levels[k];
        head.min(tail).min(level[first]).min(level[last - (1 << k)])
    }

    /// Whether the factor `w[start..end]` occurs at position `at`.
    pub fn is_prefix(&self, start: usize, end: usize, at: usize) -> bool {
        let len = end - start;
        len == 0 || (at + len <= self.n && self.lce(start, at) >= len)
    }
}

fn kasai(s: &[u32], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n.saturating_sub(1)];
    let mut h = 0usize;
    for i in 0..n {
        h = h.saturating_sub(1);
        let r = rank[i] as usize;
        if r == 0 {
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r - 1] = h as u32;
    }
    lcp
}

/// Suffix array of `s` over the integer alphabet `0..=upper` (SA-IS).
fn suffix_array(s: &[u32], upper: usize) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return vec![],
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ if n < 10 => {
            let mut sa: Vec<u32> = (0..n as u32).collect();
            sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
            return sa;
        }
        _ => {}
    }
    const NONE: u32 = u32::MAX;
    let at = |i: u32| s[i as usize] as usize;
    let mut sa = vec![NONE; n];
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] { ls[i + 1] } else { s[i] < s[i + 1] };
    }
    let mut sum_l = vec![0u32; upper + 2];
    let mut sum_s = vec![0u32; upper + 2];
    for i in 0..n {
        if !ls[i] {
            sum_s[s[i] as usize] += 1;
        } else {
            sum_l[s[i] as usize + 1] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        if i < upper {
            sum_l[i + 1] += sum_s[i];
        }
    }

    let induce = |sa: &mut Vec<u32>, lms: &[u32]| {
        sa.iter_mut().for_each(|v| *v = NONE);
        let mut buf = sum_s.clone();
        for &d in lms {
            if d as usize == n {
                continue;
            }
            sa[buf[at(d)] as usize] = d;
            buf[at(d)] += 1;
        }
        buf.copy_from_slice(&sum_l);
        let last = (n - 1) as u32;
        sa[buf[at(last)] as usize] = last;
        buf[at(last)] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != NONE && v >= 1 && !ls[v as usize - 1] {
                sa[buf[at(v - 1)] as usize] = v - 1;
                buf[at(v - 1)] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != NONE && v >= 1 && ls[v as usize - 1] {
                buf[at(v - 1) + 1] -= 1;
                sa[buf[at(v - 1) + 1] as usize] = v - 1;
            }
        }
    };

    let mut lms_map = vec![NONE; n + 1];
    let mut lms: Vec<u32> = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();
    induce(&mut sa, &lms);

    if m > 0 {
        let mut sorted_lms: Vec<u32> =
            sa.iter().copied().filter(|&v| v != NONE && lms_map[v as usize] != NONE).collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        let end_of = |v: u32| {
            let next = lms_map[v as usize] as usize + 1;
            if next < m {
                lms[next] as usize
            } else {
                n
            }
        };
        for i in 1..m {
            let (mut l, mut r) = (sorted_lms[i - 1] as usize, sorted_lms[i] as usize);
            let (end_l, end_r) = (end_of(l as u32), end_of(r as u32));
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l && s[l] == s[r] {
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper as u32;
        }
        let rec_sa = suffix_array(&rec_s, rec_upper);
        for i in 0..m {
            sorted_lms[i] = lms[rec_sa[i] as usize];
        }
        induce(&mut sa, &sorted_lms);
    }
    sa
}
