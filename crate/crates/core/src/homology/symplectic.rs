//! Integer symplectic reduction of skew-symmetric forms.

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// `S^T M S`.
pub fn congruence(m: &IntMatrix, s: &IntMatrix) -> IntMatrix {
    mul(&mul(&transpose(s), m), s)
}

/// `J ⊕ 0`: the standard symplectic form `[[0, I_g], [-I_g, 0]]` padded with
/// zeros to size `n`.
pub fn standard_form(n: usize, genus: usize) -> IntMatrix {
    let mut j = vec![vec![0; n]; n];
    for i in 0..genus {
        j[i][genus + i] = 1;
        j[genus + i][i] = -1;
    }
    j
}

/// Chain-cycle intersection matrix: `e_i . e_{i+1} = 1`.
pub fn chain_form(n: usize) -> IntMatrix {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n.saturating_sub(1) {
        m[i][i + 1] = 1;
        m[i + 1][i] = -1;
    }
    m
}

pub fn is_skew(m: &IntMatrix) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..n).all(|j| m[i][j] == -m[j][i]))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// Columns are the new basis vectors in old coordinates:
    /// `a_1..a_g, b_1..b_g`, then a basis of the radical.
    pub basis: IntMatrix,
    pub genus: usize,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        2 * self.genus
    }
}

fn column_axpy(b: &mut IntMatrix, dst: usize, k: i64, src: usize) {
    for row in b.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// Finds a unimodular `S` with `S^T M S = J ⊕ 0`.
///
/// Fails with [`Error::NotUnimodular`] when the form has an elementary
/// divisor other than 1, since no such `S` exists then.
pub fn symplectic_reduce(m: &IntMatrix) -> Result<Reduction> {
    assert!(is_skew(m), "symplectic_reduce needs a skew-symmetric matrix");
    let n = m.len();
    let mut b = identity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut a_side = Vec::new();
    let mut b_side = Vec::new();

    'search: loop {
        let g = congruence(m, &b);
        let mut best: Option<(i64, usize, usize)> = None;
        for (x, &u) in remaining.iter().enumerate() {
            for &v in &remaining[x + 1..] {
                let val = g[u][v];
                if val != 0 && best.is_none_or(|(bv, _, _)| val.abs() < bv.abs()) {
                    best = Some((val, u, v));
                }
            }
        }
        let Some((val, mut u, mut v)) = best else {
            break;
        };
        if val < 0 {
            std::mem::swap(&mut u, &mut v);
        }
        let d = val.abs();
        let others: Vec<usize> = remaining.iter().copied().filter(|&w| w != u && w != v).collect();
        for &w in &others {
            let g = congruence(m, &b);
            // <u, w - q v> = <u, w> - q d
            let q = g[u][w].div_euclid(d);
            column_axpy(&mut b, w, -q, v);
            // <v, w + p u> = <v, w> - p d
            let p = g[v][w].div_euclid(d);
            column_axpy(&mut b, w, p, u);
            let g = congruence(m, &b);
            if g[u][w] != 0 || g[v][w] != 0 {
                // a smaller nonzero pairing appeared; restart around it
                continue 'search;
            }
        }
        if d != 1 {
            return Err(Error::NotUnimodular(d));
        }
        a_side.push(u);
        b_side.push(v);
        remaining.retain(|&w| w != u && w != v);
    }

    let order: Vec<usize> = a_side
        .iter()
        .chain(&b_side)
        .chain(&remaining)
        .copied()
        .collect();
    let basis = (0..n)
        .map(|i| order.iter().map(|&c| b[i][c]).collect())
        .collect();
    Ok(Reduction {
        basis,
        genus: a_side.len(),
    })
}
