//! Suffix array construction by induced sorting (SA-IS), linear time.

const EMPTY: u32 = u32::MAX;

/// Suffix array of `text` followed by a sentinel smaller than every symbol.
///
/// `text` holds codes in `0..code_space`. The result has `text.len() + 1`
/// entries and starts with `text.len()` (the sentinel suffix).
pub fn suffix_array(text: &[u8], code_space: usize) -> Vec<u32> {
    assert!(text.len() < EMPTY as usize - 1, "text too long for 32-bit suffix array");
    let mut s: Vec<u32> = text.iter().map(|&c| u32::from(c) + 1).collect();
    s.push(0);
    sais(&s, code_space + 1)
}

fn bucket_heads(s: &[u32], k: usize) -> Vec<u32> {
    let mut counts = vec![0u32; k];
    for &c in s {
        counts[c as usize] += 1;
    }
    let mut sum = 0;
    counts
        .into_iter()
        .map(|c| {
            let start = sum;
            sum += c;
            start
        })
        .collect()
}

fn bucket_tails(s: &[u32], k: usize) -> Vec<u32> {
    let mut counts = vec![0u32; k];
    for &c in s {
        counts[c as usize] += 1;
    }
    let mut sum = 0;
    counts
        .into_iter()
        .map(|c| {
            sum += c;
            sum
        })
        .collect()
}

fn induce(s: &[u32], k: usize, stype: &[bool], sa: &mut [u32]) {
    let n = s.len();
    let mut heads = bucket_heads(s, k);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[heads[c] as usize] = j - 1;
            heads[c] += 1;
        }
    }
    let mut tails = bucket_tails(s, k);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = j - 1;
        }
    }
}

/// `s` must end with a unique 0.
fn sais(s: &[u32], k: usize) -> Vec<u32> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    // Sort LMS substrings.
    let mut sa = vec![EMPTY; n];
    let mut tails = bucket_tails(s, k);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = i as u32;
        }
    }
    induce(s, k, &stype, &mut sa);

    let sorted_lms: Vec<u32> = sa.iter().copied().filter(|&j| is_lms(j as usize)).collect();

    // Name LMS substrings; equal substrings share a name.
    let same = |a: usize, b: usize| -> bool {
        let mut d = 0;
        loop {
            if a + d == n || b + d == n {
                return false;
            }
            if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
                return false;
            }
            if d > 0 {
                let (ea, eb) = (is_lms(a + d), is_lms(b + d));
                if ea || eb {
                    return ea && eb;
                }
            }
            d += 1;
        }
    };
    let mut names = vec![EMPTY; n];
    let mut name = 0u32;
    let mut prev: Option<usize> = None;
    for &p in &sorted_lms {
        let p = p as usize;
        if let Some(q) = prev {
            if !same(q, p) {
                name += 1;
            }
        }
        names[p] = name;
        prev = Some(p);
    }
    let distinct = name as usize + 1;

    let lms_positions: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let reduced: Vec<u32> = lms_positions.iter().map(|&p| names[p as usize]).collect();

    let reduced_sa = if distinct < reduced.len() {
        sais(&reduced, distinct)
    } else {
        let mut r = vec![0u32; reduced.len()];
        for (i, &c) in reduced.iter().enumerate() {
            r[c as usize] = i as u32;
        }
        r
    };

    // Place LMS suffixes in their final order, then induce the rest.
    sa.iter_mut().for_each(|v| *v = EMPTY);
    let mut tails = bucket_tails(s, k);
    for &r in reduced_sa.iter().rev() {
        let j = lms_positions[r as usize];
        let c = s[j as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = j;
    }
    induce(s, k, &stype, &mut sa);
    sa
}
