//! Small dense exact linear algebra over Q.

use num_traits::{One, Zero};

use crate::rational::Q;

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    echelon(&mut rows.to_vec()).len()
}

/// The unique solution of `A x = b` for square nonsingular `A`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, y)| r.iter().cloned().chain([y.clone()]).collect()).collect();
    let pivots = echelon(&mut m);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// A nonzero kernel vector when the kernel is one-dimensional.
pub fn kernel_line(a: &[Vec<Q>], cols: usize) -> Option<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = echelon(&mut m);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Q::zero(); cols];
    v[free] = Q::one();
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = -m[r][free].clone();
    }
    Some(v)
}

/// Some nonzero kernel vector, if the kernel is nontrivial.
pub fn kernel_vector(a: &[Vec<Q>], cols: usize) -> Option<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = echelon(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Q::zero(); cols];
    v[free] = Q::one();
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = -m[r][free].clone();
    }
    Some(v)
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Q::zero() };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        d *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let x = &f * &m[col][c];
                m[r][c] -= x;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn solves_and_ranks() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let x = solve(&a, &[qi(3), qi(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        assert_eq!(det(&a), qi(5));
        assert_eq!(rank(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]]), 1);
        assert!(solve(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]], &[qi(1), qi(1)]).is_none());
        let k = kernel_line(&[vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]], 3).unwrap();
        assert_eq!(k, vec![qi(1), qi(-1), qi(1)]);
    }
}
