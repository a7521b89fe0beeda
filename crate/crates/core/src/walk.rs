//! Return probabilities τ(xᵏ) of random walks and growth of balls.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_log_log, LineFit};
use crate::group::{sphere_sizes, OrderedGroup};
use crate::ring::{QElement, ZElement};

/// Default bound on the support of a single convolution power.
pub const DEFAULT_SUPPORT_CAP: usize = 4_000_000;

/// x = y / D with y integral and D > 0 minimal.
pub fn integer_scaling(x: &QElement) -> (ZElement, BigInt) {
    let d = x.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let dq = BigRational::from_integer(d.clone());
    let y = x.map(|c| (c * &dq).to_integer());
    (y, d)
}

/// τ(xᵏ) for k = 0..=k_max, exactly.
///
/// Uses τ(x^{i+j}) = Σ_g xⁱ(g) xʲ(g⁻¹), so only powers up to ⌈k_max/2⌉ are
/// formed and only two are held at a time.
pub fn trace_powers(x: &QElement, k_max: usize, cap: usize) -> Result<Vec<BigRational>> {
    let spec = x.group();
    let (y, d) = integer_scaling(x);
    let mut raw = vec![BigInt::zero(); k_max + 1];
    raw[0] = BigInt::one();
    let mut prev = ZElement::one(spec);
    for j in 1..=k_max.div_ceil(2) {
        let cur = prev.convolve_unchecked(&y);
        if cur.support_len() > cap {
            return Err(Error::CapExceeded {
                cap,
                context: format!("forming x^{j} over {spec} for k up to {k_max}"),
            });
        }
        if 2 * j - 1 <= k_max {
            raw[2 * j - 1] = prev.trace_of_product(&cur);
        }
        if 2 * j <= k_max {
            raw[2 * j] = cur.trace_of_product(&cur);
        }
        prev = cur;
    }
    let mut scale = BigInt::one();
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            if k > 0 {
                scale *= &d;
            }
            BigRational::new(t, scale.clone())
        })
        .collect())
}

/// Exact return probabilities of a symmetric probability walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub values: Vec<BigRational>,
    /// Every odd-k value vanishes.
    pub bipartite: bool,
}

impl ReturnSeries {
    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `k,numerator,denominator,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,numerator,denominator,value\n");
        for (k, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{k},{},{},{:e}", v.numer(), v.denom(), v.to_f64().unwrap_or(f64::NAN));
        }
        out
    }
}

/// Checks that x is self-adjoint with x ≥ 0 and ‖x‖₁ = 1.
pub fn check_symmetric_probability(x: &QElement) -> Result<()> {
    if x.iter().any(|(_, c)| c.is_negative()) {
        return Err(Error::hypothesis("walk has a negative coefficient"));
    }
    if !x.norms().l1.is_one() {
        return Err(Error::hypothesis(format!("walk `{x}` does not have total mass 1")));
    }
    if !x.is_self_adjoint() {
        return Err(Error::hypothesis(format!("walk `{x}` is not self-adjoint")));
    }
    Ok(())
}

pub fn return_probability(x: &QElement, k_max: usize, cap: usize) -> Result<ReturnSeries> {
    check_symmetric_probability(x)?;
    let values = trace_powers(x, k_max, cap)?;
    let bipartite = values.iter().skip(1).step_by(2).all(|v| v.is_zero());
    Ok(ReturnSeries { values, bipartite })
}

/// |B_0|, …, |B_R| for the generators of `og`.
pub fn growth_profile(og: &OrderedGroup, r_max: usize, cap: usize) -> Result<Vec<usize>> {
    let spheres = sphere_sizes(og.spec(), og.generators(), r_max, cap)?;
    Ok(spheres
        .into_iter()
        .scan(0, |acc, s| {
            *acc += s;
            Some(*acc)
        })
        .collect())
}

pub fn growth_csv(sizes: &[usize]) -> String {
    let mut out = String::from("R,size\n");
    for (r, s) in sizes.iter().enumerate() {
        let _ = writeln!(out, "{r},{s}");
    }
    out
}

/// Log-log slope of |B_R| over radii `r_min..=r_max`.
pub fn growth_exponent(sizes: &[usize], r_min: usize, r_max: usize) -> Result<LineFit> {
    fit_log_log((r_min..=r_max.min(sizes.len() - 1)).map(|r| (r as f64, sizes[r] as f64)))
}

/// Log-log slope of τ(xᵏ) against k over `window`; zero values are skipped.
pub fn decay_fit(series: &ReturnSeries, window: (usize, usize)) -> Result<LineFit> {
    let (lo, hi) = window;
    if hi > series.k_max() {
        return Err(Error::InsufficientData(format!(
            "window ends at {hi} but the series stops at {}",
            series.k_max()
        )));
    }
    fit_log_log((lo..=hi).map(|k| (k as f64, series.values[k].to_f64().unwrap_or(f64::NAN))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Slope at or below this passes: k·τ(xᵏ) is then summable with margin.
pub const VAROPOULOS_PASS_SLOPE: f64 = -2.2;
/// Slope at or above this fails.
pub const VAROPOULOS_FAIL_SLOPE: f64 = -1.8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VaropoulosReport {
    pub group: String,
    pub decay: LineFit,
    pub window: (usize, usize),
    /// Fitted exponent of |B_R| near the largest radius reached.
    pub growth: Option<LineFit>,
    pub verdict: Verdict,
}

/// Whether Σ k τ(xᵏ) looks finite, judged from the decay slope.
pub fn varopoulos_check(og: &OrderedGroup, x: &QElement, k_max: usize, cap: usize) -> Result<VaropoulosReport> {
    if x.group() != og.spec() {
        return Err(Error::GroupMismatch(format!("walk over {} but order on {}", x.group(), og.spec())));
    }
    let series = return_probability(x, k_max, cap)?;
    let window = (10.min(k_max / 2), k_max);
    let decay = decay_fit(&series, window)?;
    let verdict = if decay.slope <= VAROPOULOS_PASS_SLOPE {
        Verdict::Pass
    } else if decay.slope >= VAROPOULOS_FAIL_SLOPE {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let growth = growth_profile(og, 8, 2_000_000)
        .ok()
        .and_then(|sizes| growth_exponent(&sizes, 4, 8).ok());
    Ok(VaropoulosReport { group: og.spec().to_string(), decay, window, growth, verdict })
}

/// Σ_{k≤K} values[k] as exact partial sums.
#[allow(dead_code)]
pub(crate) fn partial_sums(values: impl IntoIterator<Item = BigRational>) -> Vec<BigRational> {
    values
        .into_iter()
        .scan(BigRational::zero(), |acc, v| {
            *acc += v;
            Some(acc.clone())
        })
        .collect()
}

/// Checks τ(x^{2k}) is nonincreasing, which holds for symmetric walks.
pub fn even_values_nonincreasing(series: &ReturnSeries) -> bool {
    let evens: Vec<&BigRational> = series.values.iter().step_by(2).collect();
    evens.windows(2).all(|w| w[1] <= w[0]) && series.values.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::ring::parse_expression;

    fn srw(spec: GroupSpec) -> QElement {
        let gens = spec.default_generators();
        let w = BigRational::new(1.into(), (2 * gens.len()).into());
        QElement::from_terms(spec, gens.iter().flat_map(|g| [(g.clone(), w.clone()), (spec.inverse(g), w.clone())]))
    }

    fn binomial_central(k: u64) -> BigRational {
        // C(2k, k) 4^{-k}
        let mut c = BigInt::one();
        for i in 0..k {
            c = c * (2 * k - i) / (i + 1);
        }
        BigRational::new(c, BigInt::from(4).pow(k as u32))
    }

    #[test]
    fn integer_line() {
        let s = return_probability(&srw(GroupSpec::FreeAbelian(1)), 12, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(s.bipartite);
        assert_eq!(s.values[2], BigRational::new(1.into(), 2.into()));
        assert_eq!(s.values[4], BigRational::new(3.into(), 8.into()));
        for k in 0..=6 {
            assert_eq!(s.values[2 * k], binomial_central(k as u64));
            if k > 0 {
                assert!(s.values[2 * k - 1].is_zero());
            }
        }
        assert!(even_values_nonincreasing(&s));
    }

    #[test]
    fn plane() {
        let s = return_probability(&srw(GroupSpec::FreeAbelian(2)), 4, DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(s.values[2], BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn lazy_walk_is_not_bipartite() {
        let x = parse_expression(GroupSpec::FreeAbelian(1), "1/2 + 1/4 a + 1/4 a^-1").unwrap();
        let s = return_probability(&x, 5, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(!s.bipartite);
        assert_eq!(s.values[1], BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn preconditions() {
        let g = GroupSpec::FreeAbelian(1);
        for bad in ["1/2 a + 1/2 a^-2", "a", "1/2 a + 1/4 a^-1", "-1/2 a + 3/2 a^-1"] {
            let x = parse_expression(g, bad).unwrap();
            assert!(matches!(return_probability(&x, 4, DEFAULT_SUPPORT_CAP), Err(Error::Hypothesis(_))), "{bad}");
        }
    }

    #[test]
    fn trace_powers_agree_with_direct_powers() {
        let h = GroupSpec::Heisenberg(1);
        let x = parse_expression(h, "1/3 a + 1/6 b - 1/4 a^-1 b + 1/5").unwrap();
        let fast = trace_powers(&x, 7, DEFAULT_SUPPORT_CAP).unwrap();
        for (k, v) in fast.iter().enumerate() {
            assert_eq!(*v, x.pow(k as u32).trace(), "k = {k}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let x = srw(GroupSpec::FreeGroup(2));
        assert!(matches!(trace_powers(&x, 20, 50), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn growth_of_line_and_free_group() {
        let z = OrderedGroup::natural(GroupSpec::FreeAbelian(1)).unwrap();
        assert_eq!(growth_profile(&z, 5, 1000).unwrap(), vec![1, 3, 5, 7, 9, 11]);
        let f = OrderedGroup::natural(GroupSpec::FreeGroup(2)).unwrap();
        let sizes = growth_profile(&f, 6, 1_000_000).unwrap();
        for (r, s) in sizes.iter().enumerate() {
            assert_eq!(*s, 2 * 3usize.pow(r as u32) - 1);
        }
        let csv = growth_csv(&sizes);
        assert!(csv.starts_with("R,size\n0,1\n1,5\n"));
    }

    #[test]
    fn heisenberg_growth_is_superquadratic() {
        let h = OrderedGroup::natural(GroupSpec::Heisenberg(1)).unwrap();
        let sizes = growth_profile(&h, 10, 1_000_000).unwrap();
        assert!(sizes.windows(2).all(|w| w[1] > w[0]));
        assert!(sizes[10] > 2 * 10 * 10 * 10);
        for r in 1..5 {
            for t in 1..5 {
                assert!(sizes[r + t] <= sizes[r] * sizes[t]);
            }
        }
    }

    #[test]
    fn csv_rows() {
        let s = return_probability(&srw(GroupSpec::FreeAbelian(1)), 2, DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(s.to_csv(), "k,numerator,denominator,value\n0,1,1,1e0\n1,0,1,0e0\n2,1,2,5e-1\n");
    }
}
