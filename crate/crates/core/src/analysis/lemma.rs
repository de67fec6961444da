//! Exact-integer search for collisions among the squared eigenvalues
//! `mu_k = (2k+1) pi / (2L)`.
//!
//! `mu_{n_1}^2 + ... + mu_{n_k}^2 = mu_n^2` is equivalent, after clearing the
//! common factor `(pi / 2L)^2`, to `sum_i (2 n_i + 1)^2 = (2n + 1)^2`, that is
//! `k + 4 sum_i phi(n_i) = 1 + 4 phi(n)` with `phi(n) = n^2 + n`. The length
//! `L` drops out.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest multiset size accepted by [`lemma9_scan`].
pub const MAX_K: usize = 8;

/// `phi(n) = n^2 + n`, always even.
pub fn phi_int(n: u64) -> u64 {
    n * n + n
}

/// One solution of `k + 4 sum phi(n_i) = 1 + 4 phi(n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Collision {
    /// `n_1 <= ... <= n_k`.
    pub parts: Vec<u32>,
    pub n: u32,
}

/// Residues modulo 8 of both sides. `phi` is even, so the left side is
/// `k mod 8` and the right side is `1`; a mismatch rules out every solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub k: usize,
    pub lhs_residue: u32,
    pub rhs_residue: u32,
}

impl Certificate {
    pub fn excludes_solutions(&self) -> bool {
        self.lhs_residue != self.rhs_residue
    }
}

pub fn certificate(k: usize) -> Certificate {
    Certificate {
        k,
        lhs_residue: (k % 8) as u32,
        rhs_residue: 1,
    }
}

/// All multisets `{n_1, ..., n_k}` of `[0, n_max]` and targets `n` with
/// `k + 4 sum phi(n_i) = 1 + 4 phi(n)`, sorted. Every target satisfies
/// `2n + 1 <= isqrt(sum (2 n_i + 1)^2)`, so the search is finite and exact.
pub fn lemma9_scan(k: usize, n_max: u32) -> Result<Vec<Collision>> {
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidArgument {
            name: "k",
            reason: "multiset size must lie in 1..=8",
        });
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument {
            name: "n_max",
            reason: "n_max must be at least 1",
        });
    }
    let odd = |n: u32| 2 * u64::from(n) + 1;
    let max_sum = k as u64 * odd(n_max) * odd(n_max);
    // root[s] = Some(n) when s = (2n+1)^2.
    let mut root: Vec<Option<u32>> = vec![None; max_sum as usize + 1];
    let mut n = 0u32;
    while odd(n) * odd(n) <= max_sum {
        root[(odd(n) * odd(n)) as usize] = Some(n);
        n += 1;
    }
    let squares: Vec<u64> = (0..=n_max).map(|n| odd(n) * odd(n)).collect();

    let mut found = Vec::new();
    let mut parts = vec![0u32; k];
    scan(0, 0, 0, &squares, &root, &mut parts, &mut found);
    found.sort();
    Ok(found)
}

fn scan(
    depth: usize,
    start: u32,
    sum: u64,
    squares: &[u64],
    root: &[Option<u32>],
    parts: &mut [u32],
    found: &mut Vec<Collision>,
) {
    if depth == parts.len() {
        if let Some(n) = root[sum as usize] {
            found.push(Collision {
                parts: parts.to_vec(),
                n,
            });
        }
        return;
    }
    for i in start..squares.len() as u32 {
        parts[depth] = i;
        scan(depth + 1, i, sum + squares[i as usize], squares, root, parts, found);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_part_collides_with_itself() {
        let c = lemma9_scan(1, 10).unwrap();
        assert_eq!(c.len(), 11);
        for (i, col) in c.iter().enumerate() {
            assert_eq!(col.parts, vec![i as u32]);
            assert_eq!(col.n, i as u32);
        }
        assert!(!certificate(1).excludes_solutions());
    }

    #[test]
    fn identity_in_phi_form() {
        for col in lemma9_scan(1, 5).unwrap() {
            let lhs = 1 + 4 * phi_int(u64::from(col.parts[0]));
            assert_eq!(lhs, 1 + 4 * phi_int(u64::from(col.n)));
        }
    }

    #[test]
    fn small_sizes_have_no_collisions() {
        for k in 2..=4 {
            assert!(lemma9_scan(k, 30).unwrap().is_empty());
            assert!(certificate(k).excludes_solutions());
        }
    }

    #[test]
    fn nine_parts_would_be_allowed() {
        // 9 ones: 9 * 1 = 9 = 3^2, the smallest k = 1 mod 8 collision.
        assert!(!certificate(9).excludes_solutions());
        assert!(lemma9_scan(9, 1).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(lemma9_scan(0, 3).is_err());
        assert!(lemma9_scan(2, 0).is_err());
    }
}
