//! Dense linear algebra over an exact field. Matrices are row-major `Vec`s.

use super::field::{Field, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

pub fn identity(field: Field, n: usize) -> Matrix {
    let mut m = zeros(field, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

pub fn mat_mul(field: Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zeros(field, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn nullspace(field: Field, m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&work[row][f];
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(field: Field, m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve_over_f3() {
        let f = Field::prime(3).unwrap();
        let s = |v: i64| f.from_i64(v);
        let m = vec![vec![s(1), s(2), s(0)], vec![s(2), s(1), s(0)]];
        assert_eq!(rank(&m), 1);
        let ker = nullspace(f, &m, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let prod = mat_mul(f, &m, &v.iter().map(|x| vec![x.clone()]).collect());
            assert!(prod.iter().all(|r| r[0].is_zero()));
        }
        assert!(solve(f, &m, &[s(1), s(2)]).is_some());
        assert!(solve(f, &m, &[s(1), s(0)]).is_none());
    }
}
