//! Permutations of `{0, …, n−1}` stored as `Vec<u8>`, with lexicographic
//! ranking.

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of size `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(factorial(n));
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographic rank (Lehmer code).
pub fn rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut r = 0;
    let mut used = 0u32;
    for (i, &v) in p.iter().enumerate() {
        let smaller_unused = (0..v).filter(|&w| used >> w & 1 == 0).count();
        r += smaller_unused * factorial(n - 1 - i);
        used |= 1 << v;
    }
    r
}

pub fn is_permutation(p: &[u8]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    for &v in p {
        let v = v as usize;
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub fn inverse(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

/// Sign of the permutation: `true` when odd.
pub fn is_odd(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}
