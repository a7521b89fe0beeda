//! H_N in normal-form exponents.
//!
//! Internally a product is computed in matrix coordinates (x, y, z): the
//! first-row entries x, the last-column entries y and the corner z. The
//! normal form a₁^{n₁} b₁^{n₂} ⋯ a_N^{n_{2N-1}} b_N^{n_{2N}} c^{k} has
//! x_i = n_{2i-1}, y_i = n_{2i} and z = k + Σ x_i y_i.

fn corner_correction(v: &[i64]) -> i64 {
    v[..v.len() - 1].chunks(2).map(|p| p[0] * p[1]).sum()
}

pub(super) fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let last = a.len() - 1;
    let za = a[last] + corner_correction(a);
    let zb = b[last] + corner_correction(b);
    // corner of the product picks up Σ x_i(a) y_i(b)
    let cross: i64 = a[..last]
        .chunks(2)
        .zip(b[..last].chunks(2))
        .map(|(pa, pb)| pa[0] * pb[1])
        .sum();
    let mut out: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let z = za + zb + cross;
    out[last] = 0;
    out[last] = z - corner_correction(&out);
    out
}

pub(super) fn inv(a: &[i64]) -> Vec<i64> {
    let last = a.len() - 1;
    let z = a[last] + corner_correction(a);
    // (x, y, z)^{-1} = (-x, -y, -z + x·y)
    let xy = corner_correction(a);
    let mut out: Vec<i64> = a.iter().map(|v| -v).collect();
    out[last] = 0;
    out[last] = (-z + xy) - corner_correction(&out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_coordinates_agree_with_explicit_matrices() {
        // 3x3 matrices: [[1, x, z], [0, 1, y], [0, 0, 1]]
        let to_mat = |v: &[i64]| (v[0], v[1], v[2] + v[0] * v[1]);
        let a = [2, -1, 3];
        let b = [-1, 4, 0];
        let (x1, y1, z1) = to_mat(&a);
        let (x2, y2, z2) = to_mat(&b);
        let expected = (x1 + x2, y1 + y2, z1 + z2 + x1 * y2);
        assert_eq!(to_mat(&mul(&a, &b)), expected);
        assert_eq!(mul(&a, &inv(&a)), vec![0, 0, 0]);
    }
}
