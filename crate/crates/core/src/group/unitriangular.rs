//! T_N: upper unitriangular (N+2)×(N+2) integer matrices.

pub(super) fn dim(n: u32) -> usize {
    n as usize + 2
}

pub(super) fn entry_count(n: u32) -> usize {
    let d = dim(n);
    d * (d - 1) / 2
}

/// Row-major index of entry (i, j), 0-based with i < j.
pub(super) fn index(n: u32, i: usize, j: usize) -> usize {
    let d = dim(n);
    // rows before i contribute (d-1) + (d-2) + ... + (d-i)
    i * d - i * (i + 1) / 2 + (j - i - 1)
}

fn to_matrix(n: u32, v: &[i64]) -> Vec<Vec<i64>> {
    let d = dim(n);
    let mut m = vec![vec![0; d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
        for j in i + 1..d {
            row[j] = v[index(n, i, j)];
        }
    }
    m
}

fn from_matrix(n: u32, m: &[Vec<i64>]) -> Vec<i64> {
    let d = dim(n);
    let mut v = Vec::with_capacity(entry_count(n));
    for (i, row) in m.iter().enumerate().take(d) {
        v.extend_from_slice(&row[i + 1..d]);
    }
    v
}

pub(super) fn mul(n: u32, a: &[i64], b: &[i64]) -> Vec<i64> {
    let d = dim(n);
    let (ma, mb) = (to_matrix(n, a), to_matrix(n, b));
    let mut v = Vec::with_capacity(entry_count(n));
    for i in 0..d {
        for j in i + 1..d {
            v.push((i..=j).map(|k| ma[i][k] * mb[k][j]).sum());
        }
    }
    v
}

pub(super) fn inv(n: u32, a: &[i64]) -> Vec<i64> {
    // back substitution on M X = I, column by column
    let d = dim(n);
    let m = to_matrix(n, a);
    let mut x = vec![vec![0i64; d]; d];
    for (i, row) in x.iter_mut().enumerate() {
        row[i] = 1;
    }
    for j in 0..d {
        for i in (0..j).rev() {
            let s: i64 = (i + 1..=j).map(|k| m[i][k] * x[k][j]).sum();
            x[i][j] = -s;
        }
    }
    from_matrix(n, &x)
}

pub(super) fn superdiagonal(n: u32, v: &[i64]) -> Vec<i64> {
    (0..dim(n) - 1).map(|i| v[index(n, i, i + 1)]).collect()
}

/// Entry positions in the order used by the lexicographic order: the first
/// superdiagonal top to bottom, then the second, and so on.
pub(super) fn lex_positions(n: u32) -> Vec<usize> {
    let d = dim(n);
    let mut out = Vec::with_capacity(entry_count(n));
    for gap in 1..d {
        for i in 0..d - gap {
            out.push(index(n, i, i + gap));
        }
    }
    out
}

/// Writes `v` as a product of elementary matrices a_{ij}^{t}; returns the
/// factors (i, j, t) left to right, 0-based indices.
pub(super) fn elementary_factors(n: u32, v: &[i64]) -> Vec<(usize, usize, i64)> {
    let d = dim(n);
    let mut m = to_matrix(n, v);
    let mut ops = Vec::new();
    // Right-multiplying by (I - t E_ij) subtracts t·col_i from col_j. Clearing
    // columns from the right leaves the earlier columns untouched.
    for j in (1..d).rev() {
        for i in (0..j).rev() {
            let t = m[i][j];
            if t != 0 {
                for r in 0..=i {
                    let ci = m[r][i];
                    m[r][j] -= t * ci;
                }
                ops.push((i, j, t));
            }
        }
    }
    // M · Π (I - t E_ij) = I, so M is the reversed product of (I + t E_ij).
    ops.reverse();
    ops
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_row_major() {
        let n = 2; // 4x4
        let mut expected = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(index(n, i, j), expected);
                expected += 1;
            }
        }
    }

    #[test]
    fn inverse_and_factorization() {
        let n = 2;
        let v = vec![1, -2, 3, 4, 0, -1];
        let id = vec![0; 6];
        assert_eq!(mul(n, &v, &inv(n, &v)), id);
        assert_eq!(mul(n, &inv(n, &v), &v), id);
        let mut acc = id.clone();
        for (i, j, t) in elementary_factors(n, &v) {
            let mut e = id.clone();
            e[index(n, i, j)] = t;
            acc = mul(n, &acc, &e);
        }
        assert_eq!(acc, v);
    }
}
