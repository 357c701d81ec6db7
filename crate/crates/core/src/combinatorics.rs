//! Binomials and lexicographic ranking of index combinations.

use alloc::vec::Vec;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Rank of the strictly increasing combination `comb` among all
/// `comb.len()`-subsets of `0..n` in lexicographic order.
pub fn lex_rank(comb: &[usize], n: usize) -> u64 {
    let m = comb.len();
    let mut tail = 0u64;
    for (i, &c) in comb.iter().enumerate() {
        tail += binomial(n - 1 - c, m - i);
    }
    binomial(n, m) - 1 - tail
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(mut rank: u64, n: usize, m: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(m);
    let mut next = 0;
    for i in 0..m {
        let mut c = next;
        loop {
            // combinations starting with `c` at position i
            let block = binomial(n - 1 - c, m - 1 - i);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

/// Calls `f` on every `m`-subset of `0..n`, in lexicographic order.
pub fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m > n {
        return;
    }
    let mut comb: Vec<usize> = (0..m).collect();
    loop {
        f(&comb);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if comb[i] < n - m + i {
                break;
            }
        }
        comb[i] += 1;
        for j in i + 1..m {
            comb[j] = comb[j - 1] + 1;
        }
    }
}
