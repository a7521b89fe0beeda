//! Lamplighter-type groups ℤ ≀ ℤ/kℤ and ℤ ≀ ℤ.
//!
//! (h, r)(h', r') = (h + σ_r(h'), r + r') where σ_r moves the lamp at
//! position i to position i + r.

pub(super) fn mul_mod(k: u32, (l1, r1): (&[i64], u32), (l2, r2): (&[i64], u32)) -> (Vec<i64>, u32) {
    let k = k as usize;
    let mut lamps = l1.to_vec();
    for (i, v) in l2.iter().enumerate() {
        lamps[(i + r1 as usize) % k] += v;
    }
    (lamps, ((r1 + r2) as usize % k) as u32)
}

pub(super) fn inv_mod(k: u32, (l, r): (&[i64], u32)) -> (Vec<i64>, u32) {
    let ku = k as usize;
    let back = (ku - r as usize) % ku;
    let mut lamps = vec![0; ku];
    for (i, v) in l.iter().enumerate() {
        lamps[(i + back) % ku] = -v;
    }
    (lamps, back as u32)
}

pub(super) fn mul_z(
    (l1, r1): (&[(i64, i64)], i64),
    (l2, r2): (&[(i64, i64)], i64),
) -> (Vec<(i64, i64)>, i64) {
    let mut out = Vec::with_capacity(l1.len() + l2.len());
    let (mut i, mut j) = (0, 0);
    while i < l1.len() || j < l2.len() {
        let next_shifted = l2.get(j).map(|&(p, v)| (p + r1, v));
        match (l1.get(i), next_shifted) {
            (Some(&(p, v)), Some((q, w))) if p == q => {
                if v + w != 0 {
                    out.push((p, v + w));
                }
                i += 1;
                j += 1;
            }
            (Some(&(p, v)), Some((q, _))) if p < q => {
                out.push((p, v));
                i += 1;
            }
            (Some(&(p, v)), None) => {
                out.push((p, v));
                i += 1;
            }
            (_, Some((q, w))) => {
                out.push((q, w));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (out, r1 + r2)
}

pub(super) fn inv_z((l, r): (&[(i64, i64)], i64)) -> (Vec<(i64, i64)>, i64) {
    (l.iter().map(|&(p, v)| (p - r, -v)).collect(), -r)
}
