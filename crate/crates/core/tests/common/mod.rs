//! Independent oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

/// `position -> distance` for every window within Hamming distance `k`.
/// `wildcard` (and any larger code) mismatches everything; windows with a
/// text wildcard are skipped since the index never matches one.
pub fn naive_hamming(text: &[u8], read: &[u8], k: u32, wildcard: u8) -> BTreeMap<usize, u32> {
    let mut out = BTreeMap::new();
    if read.len() > text.len() {
        return out;
    }
    'windows: for p in 0..=text.len() - read.len() {
        let mut d = 0;
        for (i, &r) in read.iter().enumerate() {
            let t = text[p + i];
            if t >= wildcard {
                continue 'windows;
            }
            if r != t || r >= wildcard {
                d += 1;
                if d > k {
                    continue 'windows;
                }
            }
        }
        out.insert(p, d);
    }
    out
}

/// Minimal edit distance between `read` and any substring starting at each
/// text position, by a full dynamic program over the reversed strings
/// (free start in the reversed text = free end in the text).
pub fn dp_edit_starts(text: &[u8], read: &[u8], k: u32) -> BTreeMap<usize, u32> {
    let m = read.len();
    let rr: Vec<u8> = read.iter().rev().copied().collect();
    let mut col: Vec<u32> = (0..=m as u32).collect();
    let mut out = BTreeMap::new();
    for (j, &t) in text.iter().rev().enumerate() {
        let mut diag = col[0];
        col[0] = 0;
        for i in 1..=m {
            let sub = diag + u32::from(rr[i - 1] != t);
            diag = col[i];
            col[i] = sub.min(col[i] + 1).min(col[i - 1] + 1);
        }
        if col[m] <= k {
            out.insert(text.len() - 1 - j, col[m]);
        }
    }
    out
}

/// [`dp_edit_starts`] restricted to the band of rows that can still be within
/// `k`: rows below the last active one are never computed (Ukkonen's cut-off).
pub fn banded_edit_starts(text: &[u8], read: &[u8], k: u32) -> BTreeMap<usize, u32> {
    let m = read.len();
    let rr: Vec<u8> = read.iter().rev().copied().collect();
    let mut col: Vec<u32> = (0..=m as u32).collect();
    let mut last = (k as usize).min(m);
    let mut out = BTreeMap::new();
    for (j, &t) in text.iter().rev().enumerate() {
        let end = (last + 1).min(m);
        let mut diag = 0;
        for i in 1..=end {
            // rows past the band hold stale values; anything above k will do
            let old = if i > last { k + 1 } else { col[i] };
            col[i] = (diag + u32::from(rr[i - 1] != t)).min(old + 1).min(col[i - 1] + 1);
            diag = old;
        }
        last = end;
        while last > 0 && col[last] > k {
            last -= 1;
        }
        if last == m {
            out.insert(text.len() - 1 - j, col[m]);
        }
    }
    out
}

/// Same as [`dp_edit_starts`] with a bit-parallel column (reads up to 64).
pub fn myers_edit_starts(text: &[u8], read: &[u8], k: u32, codes: usize) -> BTreeMap<usize, u32> {
    let m = read.len();
    assert!(m > 0 && m <= 64);
    let mut peq = vec![0u64; codes.max(256)];
    for (i, &c) in read.iter().rev().enumerate() {
        peq[c as usize] |= 1 << i;
    }
    let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let top = 1u64 << (m - 1);
    let (mut pv, mut mv, mut score) = (mask, 0u64, m as u32);
    let mut out = BTreeMap::new();
    for (j, &t) in text.iter().rev().enumerate() {
        let eq = peq[t as usize];
        let xv = eq | mv;
        let xh = (((eq & pv).wrapping_add(pv)) ^ pv) | eq;
        let mut ph = mv | !(xh | pv);
        let mut mh = pv & xh;
        if ph & top != 0 {
            score += 1;
        } else if mh & top != 0 {
            score -= 1;
        }
        ph <<= 1;
        mh <<= 1;
        pv = (mh | !(xv | ph)) & mask;
        mv = ph & xv & mask;
        if score <= k {
            out.insert(text.len() - 1 - j, score);
        }
    }
    out
}

pub fn random_text(rng: &mut impl Rng, len: usize, sigma: u8) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..sigma)).collect()
}

/// A text substring with up to `k` substitutions at random positions.
pub fn substituted_read(rng: &mut impl Rng, text: &[u8], len: usize, k: u32, sigma: u8) -> Vec<u8> {
    let p = rng.gen_range(0..=text.len() - len);
    let mut read = text[p..p + len].to_vec();
    for _ in 0..rng.gen_range(0..=k) {
        let i = rng.gen_range(0..len);
        read[i] = (read[i] + rng.gen_range(1..sigma)) % sigma;
    }
    read
}

/// A read of length `len` derived from the text with up to `k` mixed
/// substitutions, insertions and deletions.
pub fn edited_read(rng: &mut impl Rng, text: &[u8], len: usize, k: u32, sigma: u8) -> Vec<u8> {
    let p = rng.gen_range(0..=text.len() - len - k as usize);
    let mut read = text[p..p + len + k as usize].to_vec();
    for _ in 0..rng.gen_range(0..=k) {
        let i = rng.gen_range(0..len);
        match rng.gen_range(0..3) {
            0 => read[i] = (read[i] + rng.gen_range(1..sigma)) % sigma,
            1 => read.insert(i, rng.gen_range(0..sigma)),
            _ => {
                read.remove(i);
            }
        }
    }
    read.truncate(len);
    read
}
