//! Deterministic binary constructions over the prime field Z_q.

use super::{is_prime, BinaryMatrix};
use crate::{Error, Result};

fn check_prime(q: usize) -> Result<()> {
    if is_prime(q as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(q as u64))
    }
}

fn check_left_degree(q: usize, l: usize) -> Result<()> {
    if l == 0 || l >= q {
        return Err(Error::DegreeOutOfRange { l, max: q - 1 });
    }
    Ok(())
}

/// Array-code parity check matrix `H(q, l)` of shape `lq x q^2`.
///
/// Block `(i, j)` is `P^(i j)` where `P` is the cyclic shift with
/// `P[a][a-1] = 1`, so column `j q + b` has its block-`i` one at row
/// `i q + (b + i j) mod q`.
pub fn construct_array_matrix(q: usize, l: usize) -> Result<BinaryMatrix> {
    check_prime(q)?;
    check_left_degree(q, l)?;
    let mut cols = Vec::with_capacity(q * q);
    for j in 0..q {
        for b in 0..q {
            cols.push((0..l).map(|i| i * q + (b + i * j) % q).collect());
        }
    }
    BinaryMatrix::from_columns(l * q, cols)
}

/// DeVore's polynomial matrix of shape `q^2 x q^(r+1)`.
///
/// Column `sum_t a_t q^t` belongs to `p(x) = sum_t a_t x^t` and has ones at
/// rows `x q + p(x)`, `x` in Z_q.
pub fn construct_devore_matrix(q: usize, r: usize) -> Result<BinaryMatrix> {
    check_prime(q)?;
    if r < 1 {
        return Err(Error::InvalidDegree(r));
    }
    let n = q
        .checked_pow(r as u32 + 1)
        .ok_or_else(|| Error::InvalidParameter(format!("q^(r+1) overflows for q={q}, r={r}")))?;
    let mut coeffs = vec![0usize; r + 1];
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let col = (0..q)
            .map(|x| {
                // Horner, highest coefficient first.
                let value = coeffs.iter().rev().fold(0, |acc, &a| (acc * x + a) % q);
                x * q + value
            })
            .collect();
        cols.push(col);
        for a in coeffs.iter_mut() {
            *a += 1;
            if *a < q {
                break;
            }
            *a = 0;
        }
    }
    BinaryMatrix::from_columns(q * q, cols)
}

/// Smallest `r >= 1` with `q^(r+1) >= n`: the DeVore degree needed for `n`
/// columns.
pub fn devore_degree_for(q: usize, n: usize) -> usize {
    let mut r = 1;
    let mut cols = q * q;
    while cols < n {
        cols *= q;
        r += 1;
    }
    r
}

/// Euler-square matrix of shape `lq x q^2` for prime `q`.
///
/// Cells `(i, j)` of a `q x q` grid are the columns (index `i q + j`). The
/// first block encodes the row-index square `R(i, j) = i`; block `s` for
/// `1 <= s < l` encodes the Latin square `L_s(i, j) = (i + s j) mod q`. The
/// squares are mutually orthogonal, so two cells share at most one symbol.
pub fn construct_euler_matrix(q: usize, l: usize) -> Result<BinaryMatrix> {
    check_prime(q)?;
    check_left_degree(q, l)?;
    let mut cols = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            let mut col = Vec::with_capacity(l);
            col.push(i);
            for s in 1..l {
                col.push(s * q + (i + s * j) % q);
            }
            cols.push(col);
        }
    }
    BinaryMatrix::from_columns(l * q, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_overlap(m: &BinaryMatrix) -> usize {
        let mut best = 0;
        for a in 0..m.cols() {
            for b in a + 1..m.cols() {
                let ca = m.column(a);
                let overlap = m.column(b).iter().filter(|r| ca.contains(r)).count();
                best = best.max(overlap);
            }
        }
        best
    }

    #[test]
    fn array_shapes_and_regularity() {
        let h = construct_array_matrix(5, 4).unwrap();
        assert_eq!((h.rows(), h.cols()), (20, 25));
        assert!(h.columns().iter().all(|c| c.len() == 4));
        assert!(h.row_supports().iter().all(|r| r.len() == 5));
        assert_eq!(construct_array_matrix(149, 15).unwrap().rows(), 2235);
    }

    #[test]
    fn array_first_block_row_is_identity() {
        let h = construct_array_matrix(7, 3).unwrap();
        for j in 0..7 {
            for b in 0..7 {
                assert_eq!(h.column(j * 7 + b)[0], b);
            }
        }
        // Block (1, 1) is P itself: column b maps to row b + 1.
        assert_eq!(h.column(7 + 6)[1], 7);
    }

    #[test]
    fn array_rejects_bad_parameters() {
        assert!(matches!(construct_array_matrix(6, 2), Err(Error::NotPrime(6))));
        assert!(matches!(
            construct_array_matrix(5, 5),
            Err(Error::DegreeOutOfRange { .. })
        ));
        assert!(matches!(
            construct_array_matrix(5, 0),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn devore_shapes() {
        let d = construct_devore_matrix(3, 1).unwrap();
        assert_eq!((d.rows(), d.cols()), (9, 9));
        assert!(d.columns().iter().all(|c| c.len() == 3));
        let d = construct_devore_matrix(29, 2).unwrap();
        assert_eq!((d.rows(), d.cols()), (841, 24389));
        assert!(matches!(construct_devore_matrix(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(construct_devore_matrix(5, 0), Err(Error::InvalidDegree(0))));
    }

    #[test]
    fn devore_overlap_at_most_r() {
        assert_eq!(max_overlap(&construct_devore_matrix(5, 2).unwrap()), 2);
        for q in [2, 3, 5, 7] {
            for r in 1..=2 {
                let d = construct_devore_matrix(q, r).unwrap();
                assert!(d.columns().iter().all(|c| c.len() == q));
                assert!(max_overlap(&d) <= r);
            }
        }
    }

    #[test]
    fn devore_degree_selection() {
        assert_eq!(devore_degree_for(11, 256), 2);
        assert_eq!(devore_degree_for(31, 961), 1);
        assert_eq!(devore_degree_for(31, 1024), 2);
        assert_eq!(devore_degree_for(2, 1000), 9);
    }

    #[test]
    fn euler_matches_array_up_to_permutation() {
        for (q, l) in [(5, 4), (7, 3), (11, 5)] {
            let e = construct_euler_matrix(q, l).unwrap();
            let h = construct_array_matrix(q, l).unwrap();
            assert_eq!((e.rows(), e.cols()), (l * q, q * q));
            let mut ec = e.columns().to_vec();
            let mut hc = h.columns().to_vec();
            ec.sort();
            hc.sort();
            assert_eq!(ec, hc);
        }
        assert_eq!(max_overlap(&construct_euler_matrix(5, 4).unwrap()), 1);
    }
}
