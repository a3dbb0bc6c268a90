use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::elem::mod_inverse;
use super::valuation;

/// Solve `A x = b` over `Z/p^N`, where `a` is given row-major. Returns one
/// solution (free unknowns set to zero) or `None` when the system is
/// inconsistent.
///
/// Elimination uses full pivoting on minimal p-adic valuation, so every
/// entry to the right of a pivot is a multiple of it; solvability then
/// reduces to divisibility of the transformed right-hand side.
pub fn solve_mod_prime_power(a: &[Vec<BigInt>], b: &[BigInt], p: u64, digits: u32) -> Option<Vec<BigInt>> {
    let m = BigInt::from(p).pow(digits);
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut mat: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|x| x.mod_floor(&m)).collect()).collect();
    let mut rhs: Vec<BigInt> = b.iter().map(|x| x.mod_floor(&m)).collect();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<u32> = Vec::new();

    for r in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in mat.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                if let Some(v) = valuation(x, p) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        mat.swap(r, pi);
        rhs.swap(r, pi);
        for row in mat.iter_mut() {
            row.swap(r, pj);
        }
        perm.swap(r, pj);
        // normalise the pivot to p^v
        let pv = BigInt::from(p).pow(v);
        let unit = &mat[r][r] / &pv;
        let inv = mod_inverse(&unit, &m).expect("unit part is invertible");
        for x in mat[r].iter_mut() {
            *x = (&*x * &inv).mod_floor(&m);
        }
        rhs[r] = (&rhs[r] * &inv).mod_floor(&m);
        for i in r + 1..rows {
            if mat[i][r].is_zero() {
                continue;
            }
            let factor = &mat[i][r] / &pv;
            let pivot_row = mat[r].clone();
            for (x, y) in mat[i].iter_mut().zip(&pivot_row) {
                *x = (&*x - &factor * y).mod_floor(&m);
            }
            rhs[i] = (&rhs[i] - &factor * &rhs[r]).mod_floor(&m);
        }
        pivots.push(v);
    }

    let rank = pivots.len();
    if rhs.iter().skip(rank).any(|x| !x.is_zero()) {
        return None;
    }
    // back substitution on the upper-triangular pivot block; free unknowns
    // are zero
    let mut x = vec![BigInt::zero(); cols];
    for r in (0..rank).rev() {
        let pv = BigInt::from(p).pow(pivots[r]);
        let mut num = rhs[r].clone();
        for j in r + 1..rank {
            num -= &mat[r][j] * &x[perm[j]];
        }
        let (q, rem) = num.mod_floor(&m).div_rem(&pv);
        if !rem.is_zero() {
            return None;
        }
        x[perm[r]] = q.mod_floor(&m);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &[Vec<i64>], b: &[i64], p: u64, n: u32) -> Option<Vec<BigInt>> {
        let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let b: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
        let sol = solve_mod_prime_power(&a, &b, p, n)?;
        let m = BigInt::from(p).pow(n);
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: BigInt = row.iter().zip(&sol).map(|(x, y)| x * y).sum();
            assert_eq!(lhs.mod_floor(&m), rhs.mod_floor(&m));
        }
        Some(sol)
    }

    #[test]
    fn solvable_and_unsolvable() {
        // 2x = 2 mod 8
        assert!(check(&[vec![2]], &[2], 2, 3).is_some());
        // 4x = 2 mod 8
        assert!(check(&[vec![4]], &[2], 2, 3).is_none());
        // 2x + 3y = 1, 4x + 6y = 2 mod 9 (dependent rows)
        assert!(check(&[vec![2, 3], vec![4, 6]], &[1, 2], 3, 2).is_some());
        // 3x = 1 mod 9 is not solvable
        assert!(check(&[vec![3, 6]], &[1], 3, 2).is_none());
    }

    #[test]
    fn brute_force_agreement_small() {
        // all 2x2 systems over Z/4 with rhs (2, 0): compare with brute force
        let vals = [0i64, 1, 2, 3];
        for a in vals {
            for bb in vals {
                for c in vals {
                    for d in vals {
                        let mat = vec![vec![a, bb], vec![c, d]];
                        let rhs = [2, 0];
                        let brute = vals
                            .iter()
                            .any(|&x| vals.iter().any(|&y| (a * x + bb * y) % 4 == 2 && (c * x + d * y) % 4 == 0));
                        assert_eq!(check(&mat, &rhs, 2, 2).is_some(), brute, "{mat:?}");
                    }
                }
            }
        }
    }
}
