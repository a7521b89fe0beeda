//! Reduced words over a₁^{±1}, …, a_r^{±1}. Letter `i > 0` is a_i, `-i` its inverse.

pub(super) fn is_reduced(w: &[i32], r: u32) -> bool {
    w.iter().all(|&l| l != 0 && l.unsigned_abs() <= r) && w.windows(2).all(|p| p[0] != -p[1])
}

pub(super) fn mul(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut cancel = 0;
    while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
        cancel += 1;
    }
    let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
    out.extend_from_slice(&a[..a.len() - cancel]);
    out.extend_from_slice(&b[cancel..]);
    out
}

pub(super) fn inv(a: &[i32]) -> Vec<i32> {
    a.iter().rev().map(|l| -l).collect()
}

/// Applies the generator rotation a_j ↦ a_{j+shift mod k}.
pub(super) fn rotate(w: &[i32], shift: u32, k: u32) -> Vec<i32> {
    if shift.is_multiple_of(k) {
        return w.to_vec();
    }
    w.iter()
        .map(|&l| {
            let idx = (l.unsigned_abs() - 1 + shift) % k + 1;
            l.signum() * idx as i32
        })
        .collect()
}

pub(super) fn exponent_sums(w: &[i32], r: u32) -> Vec<i64> {
    let mut out = vec![0; r as usize];
    for &l in w {
        out[l.unsigned_abs() as usize - 1] += l.signum() as i64;
    }
    out
}

/// Nonempty word using only positive letters.
pub(super) fn is_positive_word(w: &[i32]) -> bool {
    !w.is_empty() && w.iter().all(|&l| l > 0)
}
