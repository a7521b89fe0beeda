//! Finitely supported mean-zero probability measures ν on ℤ and their
//! Fourier transforms ν̂(t) = Σ_j ν(j) e^{2πijt}.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "parameter")]
pub enum Recipe {
    /// Uniform on {−k..k}, m = 2k + 1.
    UniformOdd(u32),
    /// Weights (m − |j|)/m² on {−(m−1)..m−1}.
    TriangularEven(u32),
    /// Convolution of the per-k recipes for k = 1..=M.
    Composite(u32),
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseDistribution {
    pub weights: BTreeMap<i64, BigRational>,
    pub recipe: Recipe,
}

impl BaseDistribution {
    /// Validates a user table: nonnegative weights summing to 1.
    pub fn custom(weights: impl IntoIterator<Item = (i64, BigRational)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (j, w) in weights {
            if w.is_negative() {
                return Err(Error::hypothesis(format!("negative weight {w} at {j}")));
            }
            *table.entry(j).or_insert_with(BigRational::zero) += w;
        }
        table.retain(|_, w| !w.is_zero());
        let nu = BaseDistribution { weights: table, recipe: Recipe::Custom };
        if !nu.total().is_one() {
            return Err(Error::hypothesis(format!("weights sum to {}", nu.total())));
        }
        Ok(nu)
    }

    pub fn total(&self) -> BigRational {
        self.weights.values().fold(BigRational::zero(), |a, w| a + w)
    }

    pub fn mean(&self) -> BigRational {
        self.weights
            .iter()
            .fold(BigRational::zero(), |a, (j, w)| a + w * BigRational::from_integer((*j).into()))
    }

    pub fn mean_zero(&self) -> bool {
        self.mean().is_zero()
    }

    /// Σ j² ν(j).
    pub fn second_moment(&self) -> BigRational {
        self.weights
            .iter()
            .fold(BigRational::zero(), |a, (j, w)| a + w * BigRational::from_integer((j * j).into()))
    }

    /// Σ |j| ν(j).
    pub fn first_absolute_moment(&self) -> BigRational {
        self.weights
            .iter()
            .fold(BigRational::zero(), |a, (j, w)| a + w * BigRational::from_integer(j.abs().into()))
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (i, a) in &self.weights {
            for (j, b) in &other.weights {
                *out.entry(i + j).or_insert_with(BigRational::zero) += a * b;
            }
        }
        out.retain(|_, w| !w.is_zero());
        BaseDistribution { weights: out, recipe: Recipe::Custom }
    }

    /// Moduli q such that ν̂(t) = 0 whenever t ∉ ℤ has denominator q.
    fn vanishing_moduli(&self) -> Vec<u32> {
        match self.recipe {
            Recipe::UniformOdd(m) | Recipe::TriangularEven(m) => vec![m],
            Recipe::Composite(big_m) => (2..=big_m).collect(),
            Recipe::Custom => Vec::new(),
        }
    }

    /// The closed form of ν̂ at a real t, when the recipe has one.
    pub fn closed_form(&self, t: f64) -> Option<f64> {
        match self.recipe {
            Recipe::UniformOdd(m) => Some(dirichlet(m, t)),
            Recipe::TriangularEven(m) => Some(dirichlet(m, t).powi(2)),
            Recipe::Composite(big_m) => Some(
                (1..=big_m)
                    .map(|k| if k % 2 == 1 { dirichlet(k, t) } else { dirichlet(k, t).powi(2) })
                    .product(),
            ),
            Recipe::Custom => None,
        }
    }

    /// `{"weights": [[j, "num/den"], ...], ...}` as JSON-ready records.
    pub fn weight_records(&self) -> Vec<(i64, String)> {
        self.weights.iter().map(|(j, w)| (*j, w.to_string())).collect()
    }
}

/// sin(mπt) / (m sin(πt)), with value ±1 at integers.
fn dirichlet(m: u32, t: f64) -> f64 {
    let s = (PI * t).sin();
    if s.abs() < 1e-300 || (t - t.round()).abs() < 1e-15 {
        let n = t.round() as i64;
        return if (n * (m as i64 - 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    }
    (m as f64 * PI * t).sin() / (m as f64 * s)
}

fn uniform(lo: i64, hi: i64) -> BaseDistribution {
    let n = hi - lo + 1;
    let w = BigRational::new(BigInt::one(), BigInt::from(n));
    BaseDistribution { weights: (lo..=hi).map(|j| (j, w.clone())).collect(), recipe: Recipe::Custom }
}

/// The recipe for one m: uniform on {−k..k} for m = 2k + 1, and η*∗η with
/// η uniform on {0..m−1} for even m.
pub fn build_nu(m: i64) -> Result<BaseDistribution> {
    if m < 1 {
        return Err(Error::hypothesis(format!("m = {m} must be at least 1")));
    }
    let m32 = u32::try_from(m).map_err(|_| Error::hypothesis(format!("m = {m} is too large")))?;
    if m % 2 == 1 {
        let k = (m - 1) / 2;
        let mut nu = uniform(-k, k);
        nu.recipe = Recipe::UniformOdd(m32);
        Ok(nu)
    } else {
        let eta = uniform(0, m - 1);
        let reflected = uniform(-(m - 1), 0);
        let mut nu = reflected.convolve(&eta);
        nu.recipe = Recipe::TriangularEven(m32);
        Ok(nu)
    }
}

/// ν₁ ∗ ⋯ ∗ ν_M, with ν_k uniform on {−j..j} for k = 2j + 1 and
/// u_{−k..−1} ∗ u_{1..k} for even k.
pub fn build_nu_composite(big_m: i64) -> Result<BaseDistribution> {
    if big_m < 1 {
        return Err(Error::hypothesis(format!("M = {big_m} must be at least 1")));
    }
    let mut nu = uniform(0, 0);
    for k in 1..=big_m {
        let part = if k % 2 == 1 {
            uniform(-(k - 1) / 2, (k - 1) / 2)
        } else {
            uniform(-k, -1).convolve(&uniform(1, k))
        };
        nu = nu.convolve(&part);
    }
    nu.recipe = Recipe::Composite(big_m as u32);
    Ok(nu)
}

/// ν̂(t) with a bound on its floating error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    /// t ∉ ℤ and the recipe's closed form vanishes at t.
    pub certified_zero: bool,
}

impl FourierValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Σ_j ν(j) e^{2πijt} for rational t.
///
/// Weights are first collected by the exact residue of j·t mod 1, so each
/// distinct angle is evaluated once.
pub fn nu_fourier(nu: &BaseDistribution, t: &BigRational) -> FourierValue {
    let q = t.denom().clone();
    let p = t.numer().mod_floor(&q);
    if q.is_one() {
        let total = nu.total().to_f64().unwrap_or(f64::NAN);
        return FourierValue { re: total, im: 0.0, error: 0.0, certified_zero: false };
    }
    let mut by_residue: BTreeMap<BigInt, BigRational> = BTreeMap::new();
    for (j, w) in &nu.weights {
        let r = (BigInt::from(*j) * &p).mod_floor(&q);
        *by_residue.entry(r).or_insert_with(BigRational::zero) += w;
    }
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let (mut re, mut im, mut error) = (0.0f64, 0.0f64, 0.0f64);
    for (r, w) in &by_residue {
        let w = w.to_f64().unwrap_or(f64::NAN);
        // r/q reduced to [−1/2, 1/2] keeps the angle small
        let mut frac = r.to_f64().unwrap_or(f64::NAN) / qf;
        if frac > 0.5 {
            frac -= 1.0;
        }
        let angle = 2.0 * PI * frac;
        re += w * angle.cos();
        im += w * angle.sin();
        error += w * 8.0 * f64::EPSILON;
    }
    error += by_residue.len() as f64 * 2.0 * f64::EPSILON;
    let certified_zero = nu
        .vanishing_moduli()
        .iter()
        .any(|&k| (BigInt::from(k)).is_multiple_of(&q));
    FourierValue { re, im, error, certified_zero }
}

/// `t,re,im` rows over the given points.
pub fn fourier_csv(nu: &BaseDistribution, points: &[BigRational]) -> String {
    let mut out = String::from("t,re,im\n");
    for t in points {
        let v = nu_fourier(nu, t);
        let _ = writeln!(out, "{},{:e},{:e}", t, v.re, v.im);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_recipes() {
        let nu = build_nu(3).unwrap();
        assert_eq!(nu.weight_records(), vec![(-1, "1/3".into()), (0, "1/3".into()), (1, "1/3".into())]);
        let nu = build_nu(2).unwrap();
        assert_eq!(nu.weight_records(), vec![(-1, "1/4".into()), (0, "1/2".into()), (1, "1/4".into())]);
        assert_eq!(build_nu(1).unwrap().weight_records(), vec![(0, "1".into())]);
        assert!(build_nu(0).is_err());
        let tri = build_nu(4).unwrap();
        for (j, w) in &tri.weights {
            assert_eq!(*w, rat(4 - j.abs(), 16));
        }
    }

    #[test]
    fn even_recipe_is_a_shifted_block_convolution() {
        for m in [2i64, 4, 6, 8] {
            let blocks = uniform(-m, -1).convolve(&uniform(1, m));
            assert_eq!(build_nu(m).unwrap().weights, blocks.weights, "m = {m}");
        }
    }

    #[test]
    fn composite_recipes() {
        assert_eq!(build_nu_composite(1).unwrap().weight_records(), vec![(0, "1".into())]);
        let two = build_nu_composite(2).unwrap();
        assert_eq!(two.weights, build_nu(2).unwrap().weights);
        let three = build_nu_composite(3).unwrap();
        assert!(nu_fourier(&three, &rat(1, 3)).abs() < 1e-15);
        assert!(nu_fourier(&three, &rat(1, 2)).abs() < 1e-15);
        assert!(three.mean_zero());
        assert!(nu_fourier(&three, &rat(1, 2)).certified_zero);
        assert!(!nu_fourier(&three, &rat(1, 5)).certified_zero);
    }

    #[test]
    fn fourier_examples() {
        let nu = build_nu(3).unwrap();
        let v = nu_fourier(&nu, &rat(0, 1));
        assert_eq!((v.re, v.im), (1.0, 0.0));
        let v = nu_fourier(&nu, &rat(1, 3));
        assert!(v.abs() < 1e-15 && v.certified_zero);
        let v = nu_fourier(&build_nu(2).unwrap(), &rat(1, 2));
        assert!(v.abs() < 1e-15 && v.certified_zero);
        assert_eq!(nu_fourier(&nu, &rat(7, 1)).re, 1.0);
    }

    #[test]
    fn closed_forms_agree_on_a_grid() {
        for m in 1..=8 {
            let nu = build_nu(m).unwrap();
            for j in -500..500 {
                let t = rat(j, 997);
                let direct = nu_fourier(&nu, &t);
                let closed = nu.closed_form(j as f64 / 997.0).unwrap();
                assert!((direct.re - closed).abs() < 1e-12, "m={m} t={t}");
                assert!(direct.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn custom_tables_are_validated() {
        assert!(BaseDistribution::custom([(0, rat(1, 2)), (1, rat(1, 3))]).is_err());
        assert!(BaseDistribution::custom([(0, rat(3, 2)), (1, rat(-1, 2))]).is_err());
        let nu = BaseDistribution::custom([(-2, rat(1, 2)), (2, rat(1, 2))]).unwrap();
        assert!(nu.mean_zero());
        assert_eq!(nu.second_moment(), rat(4, 1));
        assert!(!nu_fourier(&nu, &rat(1, 4)).certified_zero);
    }
}
