//! ℤ/kℤ ∗ ℤ/kℤ as alternating syllable lists; factor 0 is x, factor 1 is y.

pub(super) fn is_canonical(s: &[(u8, u32)], k: u32) -> bool {
    s.iter().all(|&(f, e)| f <= 1 && e >= 1 && e < k) && s.windows(2).all(|p| p[0].0 != p[1].0)
}

pub(super) fn mul(k: u32, a: &[(u8, u32)], b: &[(u8, u32)]) -> Vec<(u8, u32)> {
    let mut out = a.to_vec();
    let mut rest = b.iter().copied().peekable();
    while let Some(&(f, e)) = rest.peek() {
        match out.last_mut() {
            Some(last) if last.0 == f => {
                let merged = (last.1 + e) % k;
                if merged == 0 {
                    out.pop();
                } else {
                    last.1 = merged;
                }
                rest.next();
                if merged != 0 {
                    break;
                }
            }
            _ => break,
        }
    }
    out.extend(rest);
    out
}

pub(super) fn inv(k: u32, s: &[(u8, u32)]) -> Vec<(u8, u32)> {
    s.iter().rev().map(|&(f, e)| (f, k - e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_cascades() {
        // (x y^2) * (y x^2) = x y^3 x^2 = x^3 = 1 when k = 3
        let a = vec![(0, 1), (1, 2)];
        let b = vec![(1, 1), (0, 2)];
        assert_eq!(mul(3, &a, &b), vec![]);
        // (x y) * (y x) = x y^2 x when k = 3
        assert_eq!(mul(3, &[(0, 1), (1, 1)], &[(1, 1), (0, 1)]), vec![(0, 1), (1, 2), (0, 1)]);
        assert_eq!(mul(3, &a, &inv(3, &a)), vec![]);
    }
}
