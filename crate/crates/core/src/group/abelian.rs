pub(super) fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(super) fn inv(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}
