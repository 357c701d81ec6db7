//! Bit layout of the per-top-simplex gradient encoding.
//!
//! A top `k`-simplex reserves one bit for every pair `(rho, sigma)` of its
//! closed faces with `dim(sigma) = dim(rho) + 1`. Pairs are grouped in blocks
//! by `l = dim(sigma)`, from `l = k` (first `k + 1` bits) down to `l = 1`.
//! Inside a block, `sigma` contributes `l + 1` consecutive bits at the
//! lexicographic rank of its local vertex positions, and the bit within that
//! run is the position in `sigma` of the vertex missing from `rho`.

use alloc::vec::Vec;

use crate::combinatorics::{binomial, lex_rank, lex_unrank};
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// Largest top-simplex dimension the encoding accepts.
pub const MAX_TOP_DIM: usize = 24;

/// Bits reserved for a top `k`-simplex: `sum_{i=1..k} C(k+1, i+1) (i+1)`.
pub fn bitvector_length(k: usize) -> usize {
    block_offset(0, k)
}

/// First bit of the block holding pairs whose upper simplex has dimension `l`.
pub fn block_offset(l: usize, k: usize) -> usize {
    (l + 1..=k)
        .map(|i| binomial(k + 1, i + 1) as usize * (i + 1))
        .sum()
}

/// Bit index inside a `k`-dimensional top for the pair whose upper simplex
/// sits at local vertex positions `sigma_local` and whose lower simplex
/// lacks `sigma_local[missing]`.
pub fn local_bit_index(k: usize, sigma_local: &[usize], missing: usize) -> usize {
    let l = sigma_local.len() - 1;
    debug_assert!(l >= 1 && l <= k && missing <= l);
    block_offset(l, k) + lex_rank(sigma_local, k + 1) as usize * (l + 1) + missing
}

/// Inverse of [`local_bit_index`]: `(sigma_local, missing)`.
pub fn decode_bit(k: usize, mut index: usize) -> (Vec<usize>, usize) {
    debug_assert!(index < bitvector_length(k));
    for l in (1..=k).rev() {
        let block = binomial(k + 1, l + 1) as usize * (l + 1);
        if index < block {
            let rank = index / (l + 1);
            return (lex_unrank(rank as u64, k + 1, l + 1), index % (l + 1));
        }
        index -= block;
    }
    unreachable!("bit index beyond the layout")
}

/// Bit index of the pair `(rho, sigma)` in the bit-vector of `top`.
pub fn pair_bit_index(top: &Simplex, sigma: &Simplex, rho: &Simplex) -> Result<usize> {
    if sigma.dim() != rho.dim() + 1 {
        return Err(Error::NotContained(alloc::format!(
            "{rho} is not a facet of {sigma} (dimension mismatch)"
        )));
    }
    let sigma_local = sigma
        .local_positions_in(top)
        .ok_or_else(|| Error::NotContained(alloc::format!("{sigma} is not a face of {top}")))?;
    let missing = missing_position(sigma, rho)
        .ok_or_else(|| Error::NotContained(alloc::format!("{rho} is not a facet of {sigma}")))?;
    Ok(local_bit_index(top.dim(), &sigma_local, missing))
}

/// Position in `sigma` of the single vertex absent from `rho`, when `rho` is a facet of `sigma`.
pub fn missing_position(sigma: &Simplex, rho: &Simplex) -> Option<usize> {
    let (s, r) = (sigma.vertices(), rho.vertices());
    if s.len() != r.len() + 1 {
        return None;
    }
    let pos = s.iter().zip(r).position(|(a, b)| a != b).unwrap_or(r.len());
    (s[..pos] == r[..pos] && s[pos + 1..] == r[pos..]).then_some(pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::for_each_combination;
    use alloc::vec;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    /// Counts consecutive-dimension pairs of a closed k-simplex directly.
    fn enumerate_pairs(k: usize) -> usize {
        let mut count = 0;
        for l in 1..=k {
            for_each_combination(k + 1, l + 1, |_| count += l + 1);
        }
        count
    }

    #[test]
    fn lengths() {
        assert_eq!(bitvector_length(0), 0);
        assert_eq!(bitvector_length(1), 2);
        assert_eq!(bitvector_length(2), 9);
        assert_eq!(bitvector_length(3), 28);
        for k in 0..=12 {
            assert_eq!(bitvector_length(k), enumerate_pairs(k));
        }
    }

    #[test]
    fn triangle_indices() {
        let top = s(&[0, 1, 2]);
        assert_eq!(pair_bit_index(&top, &s(&[0, 2]), &s(&[0])).unwrap(), 6);
        assert_eq!(pair_bit_index(&top, &s(&[0, 2]), &s(&[2])).unwrap(), 5);
        // top block: the bit is the position of the vertex the facet lacks
        assert_eq!(pair_bit_index(&top, &top, &s(&[1, 2])).unwrap(), 0);
        assert_eq!(pair_bit_index(&top, &top, &s(&[0, 2])).unwrap(), 1);
        assert_eq!(pair_bit_index(&top, &top, &s(&[0, 1])).unwrap(), 2);
        assert_eq!(block_offset(1, 2), 3);
    }

    #[test]
    fn containment_errors() {
        let top = s(&[0, 1, 2]);
        assert!(pair_bit_index(&top, &s(&[0, 3]), &s(&[0])).is_err());
        assert!(pair_bit_index(&top, &s(&[0, 2]), &s(&[1])).is_err());
        assert!(pair_bit_index(&top, &top, &s(&[0])).is_err());
    }

    #[test]
    fn decode_inverts() {
        for k in 1..=6 {
            for idx in 0..bitvector_length(k) {
                let (sigma, missing) = decode_bit(k, idx);
                assert_eq!(local_bit_index(k, &sigma, missing), idx);
            }
        }
        assert_eq!(decode_bit(2, 6), (vec![0, 2], 1));
    }

    #[test]
    fn missing_positions() {
        assert_eq!(missing_position(&s(&[0, 2]), &s(&[0])), Some(1));
        assert_eq!(missing_position(&s(&[0, 2]), &s(&[2])), Some(0));
        assert_eq!(missing_position(&s(&[0, 1, 2]), &s(&[0, 2])), Some(1));
        assert_eq!(missing_position(&s(&[0, 1, 2]), &s(&[0, 3])), None);
    }
}
