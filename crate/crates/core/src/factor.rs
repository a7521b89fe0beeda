//! Finite-window checks that Θ_ξ pushes ν^{⊗G} to Haar measure on X_f, and
//! Fuglede–Kadison determinants of harmonic-model elements.
//!
//! For α ∈ ℤ(G), ⟨Θ_ξ(x), α⟩ = Σ_h x(h) (αξ)(h) mod 1, so both the Monte
//! Carlo estimate and the product formula only need γ = αξ. The estimator
//! samples x on supp γ directly; [`theta_window`] and [`char_pairing`]
//! realise the same quantity through the map itself.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::fit_log_log;
use crate::group::{GroupElement, OrderedGroup, Positivity};
use crate::inverse::{InverseImage, InversePartial};
use crate::measure::{nu_fourier, BaseDistribution};
use crate::ring::{harmonic_parts, QElement, ZElement};
use crate::walk::{trace_powers, DEFAULT_SUPPORT_CAP};

/// Sampling and tolerance settings for one estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub seed: u64,
    pub samples: usize,
    /// Independent streams; fixed so results do not depend on thread count.
    pub shards: usize,
    /// Largest bias the estimator may accept from dropping small phases.
    pub prune_bias: f64,
    /// Slack added to every verdict threshold.
    pub tolerance: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { seed: 0, samples: 200_000, shards: 16, prune_bias: 2e-3, tolerance: 0.01 }
    }
}

/// A seed for one (module, shard) pair, mixed from the run seed.
pub fn derive_seed(seed: u64, module: &str, shard: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in module.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h.rotate_left(17) ^ shard.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fractional part in [0, 1).
fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Representative of q mod 1 in [−1/2, 1/2).
fn centered(q: &BigRational) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let r = frac(&(q + &half));
    r - half
}

/// θ(g) = (x ξ*)(g) mod 1 = Σ_k x(gk) ξ(k) mod 1 for g ∈ V.
///
/// Fails unless g·supp ξ ⊆ W for every g ∈ V, so no sampled coordinate
/// outside W is ever needed.
pub fn theta_window(
    xi: &QElement,
    x: &FxHashMap<GroupElement, i64>,
    w: &FxHashSet<GroupElement>,
    v: &[GroupElement],
) -> Result<Vec<(GroupElement, BigRational)>> {
    let spec = xi.group();
    let mut out = Vec::with_capacity(v.len());
    for g in v {
        let mut acc = BigRational::zero();
        for (k, c) in xi.iter() {
            let h = spec.mul(g, k);
            if !w.contains(&h) {
                return Err(Error::Window(format!(
                    "θ({}) needs x at {}, outside the sample window",
                    spec.format_element(g),
                    spec.format_element(&h)
                )));
            }
            if let Some(&xv) = x.get(&h) {
                acc += c * BigRational::from_integer(xv.into());
            }
        }
        out.push((g.clone(), frac(&acc)));
    }
    Ok(out)
}

/// exp(2πi Σ_g α(g) θ(g)).
pub fn char_pairing(theta: &[(GroupElement, BigRational)], alpha: &ZElement) -> Result<Complex64> {
    let lookup: FxHashMap<&GroupElement, &BigRational> = theta.iter().map(|(g, t)| (g, t)).collect();
    let mut phase = BigRational::zero();
    for (g, a) in alpha.iter() {
        let t = lookup.get(g).ok_or_else(|| {
            Error::Window(format!("α is supported at {} outside the output window", alpha.word(g)))
        })?;
        phase += BigRational::from_integer(a.clone()) * *t;
    }
    let angle = 2.0 * PI * frac(&phase).to_f64().unwrap_or(f64::NAN);
    Ok(Complex64::from_polar(1.0, angle))
}

/// γ = αξ where it is known exactly, with bounds on what was left out.
#[derive(Clone, Debug)]
pub struct PhaseVector {
    /// Nonzero values of γ on the region used.
    pub entries: Vec<(GroupElement, BigRational)>,
    /// Bound on Σ_h |γ(h) − γ_used(h)|.
    pub tail_l1: Option<f64>,
    /// Bound on Σ_h γ(h)² over the unused region, when γ_used vanishes there.
    pub tail_l2_squared: Option<f64>,
    pub certified: bool,
    pub order: usize,
}

impl PhaseVector {
    /// γ = αξ for a finitely supported ξ, with nothing left out.
    pub fn literal(alpha: &ZElement, xi: &QElement) -> Result<PhaseVector> {
        let gamma = alpha.to_rational().convolve(xi)?;
        Ok(PhaseVector {
            entries: gamma.sorted_terms().into_iter().map(|(g, c)| (g.clone(), c.clone())).collect(),
            tail_l1: Some(0.0),
            tail_l2_squared: Some(0.0),
            certified: true,
            order: 0,
        })
    }

    /// γ = αξ_N restricted to where it equals αξ when a grading exists,
    /// otherwise all of αξ_N.
    pub fn truncated(alpha: &ZElement, inv: &InversePartial) -> Result<PhaseVector> {
        let spec = alpha.group();
        let image = InverseImage::compute(alpha, inv)?;
        let alpha_l1 = alpha.norms().l1.to_f64().unwrap_or(f64::INFINITY);
        let m = inv.m.to_f64().unwrap_or(f64::INFINITY);
        let rho = inv.rho().to_f64().unwrap_or(f64::INFINITY);
        let all = |keep: &dyn Fn(&GroupElement) -> bool| {
            let mut v: Vec<(GroupElement, BigRational)> = image
                .numerators
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), BigRational::new(c.clone(), image.denominator.clone())))
                .collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        if let Some(grading) = &inv.grading {
            let degrees: Vec<BigRational> = alpha.iter().map(|(g, _)| grading.degree(spec, g)).collect();
            let spread = match (degrees.iter().min(), degrees.iter().max()) {
                (Some(lo), Some(hi)) => (hi - lo).ceil().to_integer().to_i64().unwrap_or(i64::MAX),
                _ => 0,
            };
            let levels = inv.order as i64 - spread;
            if levels < 0 {
                return Err(Error::hypothesis(format!(
                    "truncation order {} is below the degree spread {spread} of α",
                    inv.order
                )));
            }
            let entries = all(&|g| image.is_exact_at(spec, g));
            // levels beyond `levels` are all that reach the remainder
            let (tail_l1, tail_l2_squared, certified) = if rho < 1.0 {
                let l1 = alpha_l1 * rho.powi(levels as i32 + 1) / (m * (1.0 - rho));
                (Some(l1), Some(l1 * l1), true)
            } else {
                let l2 = fitted_l2_tail(inv, levels as usize);
                (None, Some(alpha_l1 * alpha_l1 * l2 / (m * m)), false)
            };
            return Ok(PhaseVector { entries, tail_l1, tail_l2_squared, certified, order: inv.order });
        }
        let entries = all(&|_| true);
        let tail_l1 = inv.l1_tail_bound.map(|b| alpha_l1 * b);
        Ok(PhaseVector { entries, tail_l1, tail_l2_squared: None, certified: tail_l1.is_some(), order: inv.order })
    }

    /// Bound on |∏ ν̂(γ) − ∏ ν̂(γ_used)|.
    pub fn product_tail(&self, nu: &BaseDistribution) -> f64 {
        let first = nu.first_absolute_moment().to_f64().unwrap_or(f64::INFINITY);
        let second = nu.second_moment().to_f64().unwrap_or(f64::INFINITY);
        // |ν̂(s) − ν̂(t)| ≤ 2π E|X| |s − t| and |1 − ν̂(t)| ≤ 2π² E X² t²
        let linear = self.tail_l1.map_or(f64::INFINITY, |t| 2.0 * PI * first * t);
        let quadratic = self.tail_l2_squared.map_or(f64::INFINITY, |t| 2.0 * PI * PI * second * t);
        linear.min(quadratic).min(2.0)
    }
}

/// Σ_{n>levels} ‖xⁿ‖₂² extrapolated from the computed powers.
fn fitted_l2_tail(inv: &InversePartial, levels: usize) -> f64 {
    let top = inv.order + 1;
    let lo = (top / 2).max(1);
    let fit = fit_log_log((lo..=top).map(|k| (k as f64, inv.powers[k].l2_squared.to_f64().unwrap_or(f64::NAN))));
    let exact: f64 = ((levels + 1)..=top)
        .map(|k| inv.powers[k].l2_squared.to_f64().unwrap_or(f64::NAN))
        .sum();
    match fit {
        Ok(fit) if fit.slope < -1.0 => {
            let n = top as f64;
            exact + fit.eval(n.ln()).exp() * n / (-fit.slope - 1.0)
        }
        _ => f64::INFINITY,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaarVerdict {
    #[serde(rename = "haar_consistent_1")]
    HaarConsistentOne,
    #[serde(rename = "haar_consistent_0")]
    HaarConsistentZero,
    #[serde(rename = "inconsistent")]
    Inconsistent,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierEstimate {
    pub alpha: String,
    pub mc_mean: Complex64,
    pub mc_stderr: f64,
    pub samples: usize,
    pub product_value: Complex64,
    pub product_tail: f64,
    /// Bias from phases dropped before sampling.
    pub prune_bias: f64,
    pub certified_tail: bool,
    /// Coordinates sampled.
    pub sample_window: usize,
    /// |supp γ| before pruning.
    pub phase_support: usize,
    pub order: usize,
    pub verdict: HaarVerdict,
}

impl FourierEstimate {
    /// Distance the Monte Carlo mean may sit from the product value.
    pub fn agreement_threshold(&self) -> f64 {
        3.0 * self.mc_stderr + self.product_tail + self.prune_bias
    }

    pub fn agrees(&self) -> bool {
        (self.mc_mean - self.product_value).norm() <= self.agreement_threshold() + 1e-12
    }
}

/// Inverse-CDF sampler over exact integer cumulative weights.
struct Sampler {
    values: Vec<i64>,
    cumulative: Vec<u64>,
    total: u64,
}

impl Sampler {
    fn new(nu: &BaseDistribution) -> Result<Sampler> {
        let den = nu.weights.values().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let mut values = Vec::new();
        let mut cumulative = Vec::new();
        let mut run = BigInt::zero();
        for (j, w) in &nu.weights {
            run += (w * BigRational::from_integer(den.clone())).to_integer();
            values.push(*j);
            cumulative.push(
                run.to_u64()
                    .ok_or_else(|| Error::hypothesis("weight denominators too large to sample exactly"))?,
            );
        }
        let total = *cumulative.last().ok_or_else(|| Error::hypothesis("empty distribution"))?;
        Ok(Sampler { values, cumulative, total })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> i64 {
        let u = rng.gen_range(0..self.total);
        self.values[self.cumulative.partition_point(|&c| c <= u)]
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: usize,
    re: f64,
    im: f64,
    sq: f64,
}

fn run_shard(phases: &[f64], sampler: &Sampler, seed: u64, count: usize) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Moments { n: count, ..Moments::default() };
    for _ in 0..count {
        let mut phase = 0.0f64;
        for &v in phases {
            let x = sampler.draw(&mut rng);
            if x != 0 {
                phase += x as f64 * v;
            }
        }
        let (s, c) = (2.0 * PI * (phase - phase.round())).sin_cos();
        m.re += c;
        m.im += s;
        m.sq += c * c + s * s;
    }
    m
}

fn monte_carlo(phases: &[f64], nu: &BaseDistribution, cfg: &WindowConfig, label: &str) -> Result<(Complex64, f64)> {
    if phases.is_empty() || cfg.samples == 0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let sampler = Sampler::new(nu)?;
    let shards = cfg.shards.max(1);
    let jobs: Vec<(u64, usize)> = (0..shards)
        .map(|s| {
            let count = cfg.samples / shards + usize::from(s < cfg.samples % shards);
            (derive_seed(cfg.seed, label, s as u64), count)
        })
        .collect();
    #[cfg(feature = "parallel")]
    let parts: Vec<Moments> = {
        use rayon::prelude::*;
        jobs.par_iter().map(|&(seed, n)| run_shard(phases, &sampler, seed, n)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Moments> = jobs.iter().map(|&(seed, n)| run_shard(phases, &sampler, seed, n)).collect();
    let total = parts.iter().fold(Moments::default(), |a, b| Moments {
        n: a.n + b.n,
        re: a.re + b.re,
        im: a.im + b.im,
        sq: a.sq + b.sq,
    });
    let n = total.n as f64;
    let mean = Complex64::new(total.re / n, total.im / n);
    let var = ((total.sq - n * mean.norm_sqr()) / (n - 1.0).max(1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Monte Carlo and product-formula estimates of μ̂_ξ(α) from a phase vector.
pub fn estimate_from_phase(
    alpha: &ZElement,
    phase: &PhaseVector,
    nu: &BaseDistribution,
    cfg: &WindowConfig,
) -> Result<FourierEstimate> {
    let sigma = nu.second_moment().to_f64().unwrap_or(f64::INFINITY).sqrt();
    let mut product = Complex64::new(1.0, 0.0);
    let mut reduced: Vec<(f64, f64)> = Vec::new();
    for (_, g) in &phase.entries {
        let r = centered(g);
        if r.is_zero() {
            continue;
        }
        let v = nu_fourier(nu, g);
        product *= if v.certified_zero { Complex64::new(0.0, 0.0) } else { Complex64::new(v.re, v.im) };
        let rf = r.to_f64().unwrap_or(f64::NAN);
        reduced.push((rf * rf, rf));
    }
    // drop the smallest phases while E|Σ x_h γ_h| over them stays in budget
    reduced.sort_by(|a, b| a.0.total_cmp(&b.0));
    let budget = if sigma > 0.0 { (cfg.prune_bias / (2.0 * PI * sigma)).powi(2) } else { f64::INFINITY };
    let mut dropped = 0.0;
    let mut cut = 0;
    while cut < reduced.len() && dropped + reduced[cut].0 <= budget {
        dropped += reduced[cut].0;
        cut += 1;
    }
    let kept: Vec<f64> = reduced[cut..].iter().map(|p| p.1).collect();
    let prune_bias = 2.0 * PI * sigma * dropped.sqrt();
    let label = format!("factor/{alpha}");
    let (mc_mean, mc_stderr) = monte_carlo(&kept, nu, cfg, &label)?;
    let product_tail = phase.product_tail(nu);
    let threshold = cfg.tolerance + 3.0 * mc_stderr + product_tail + prune_bias;
    let near_one = (mc_mean - 1.0).norm() <= threshold;
    let near_zero = mc_mean.norm() <= threshold;
    let verdict = match (near_one, near_zero) {
        (true, true) => HaarVerdict::Inconclusive,
        (true, false) => HaarVerdict::HaarConsistentOne,
        (false, true) => HaarVerdict::HaarConsistentZero,
        (false, false) => HaarVerdict::Inconsistent,
    };
    Ok(FourierEstimate {
        alpha: alpha.to_string(),
        mc_mean,
        mc_stderr,
        samples: if kept.is_empty() { 0 } else { cfg.samples },
        product_value: product,
        product_tail,
        prune_bias,
        certified_tail: phase.certified,
        sample_window: kept.len(),
        phase_support: phase.entries.len(),
        order: phase.order,
        verdict,
    })
}

/// μ̂_ξ(α) for the truncated inverse of f.
pub fn estimate_fourier(
    inv: &InversePartial,
    alpha: &ZElement,
    nu: &BaseDistribution,
    cfg: &WindowConfig,
) -> Result<FourierEstimate> {
    let phase = PhaseVector::truncated(alpha, inv)?;
    estimate_from_phase(alpha, &phase, nu, cfg)
}

/// One row of a Haar-verdict table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub alpha: String,
    /// Expected membership in ℤ(G)f.
    pub member: bool,
    pub estimate: FourierEstimate,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarReport {
    pub rows: Vec<PanelRow>,
    pub pass: bool,
}

/// Compares estimates with μ̂ = 1 on ℤ(G)f and 0 off it.
pub fn haar_verdict(panel: &[(ZElement, bool)], estimates: &[FourierEstimate]) -> Result<HaarReport> {
    if panel.len() != estimates.len() {
        return Err(Error::InsufficientData(format!(
            "{} panel entries but {} estimates",
            panel.len(),
            estimates.len()
        )));
    }
    let rows: Vec<PanelRow> = panel
        .iter()
        .zip(estimates)
        .map(|((alpha, member), est)| {
            let want = if *member { HaarVerdict::HaarConsistentOne } else { HaarVerdict::HaarConsistentZero };
            PanelRow { alpha: alpha.to_string(), member: *member, estimate: est.clone(), pass: est.verdict == want && est.agrees() }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(HaarReport { rows, pass })
}

/// exp(−Σ_{k≤K} τ(xᵏ)/k) with a fitted correction for k > K.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkDeterminant {
    pub k_max: usize,
    /// −Σ_{k≤K} τ(xᵏ)/k.
    pub log_partial: f64,
    pub partial: f64,
    /// Estimated −Σ_{k>K} τ(xᵏ)/k; zero when every trace vanishes.
    pub log_tail: Option<f64>,
    pub corrected: Option<f64>,
    /// Every τ(xᵏ), 1 ≤ k ≤ K, is exactly zero.
    pub traces_vanish: bool,
}

pub fn fk_determinant_series(x: &QElement, k_max: usize) -> Result<FkDeterminant> {
    if x.norms().l1 > BigRational::one() {
        return Err(Error::hypothesis(format!("‖x‖₁ of `{x}` exceeds 1")));
    }
    let traces = trace_powers(x, k_max, DEFAULT_SUPPORT_CAP)?;
    let traces_vanish = traces.iter().skip(1).all(|t| t.is_zero());
    if traces_vanish {
        return Ok(FkDeterminant {
            k_max,
            log_partial: 0.0,
            partial: 1.0,
            log_tail: Some(0.0),
            corrected: Some(1.0),
            traces_vanish,
        });
    }
    let mut sum = BigRational::zero();
    for (k, t) in traces.iter().enumerate().skip(1) {
        sum += t / BigRational::from_integer(k.into());
    }
    let log_partial = -sum.to_f64().unwrap_or(f64::NAN);
    let log_tail = fitted_trace_tail(&traces).map(|t| -t);
    Ok(FkDeterminant {
        k_max,
        log_partial,
        partial: log_partial.exp(),
        log_tail,
        corrected: log_tail.map(|t| (log_partial + t).exp()),
        traces_vanish,
    })
}

/// Σ_{k>K} τ(xᵏ)/k from a power law fitted to the last half of the series,
/// summed over the parity class that carries the mass.
fn fitted_trace_tail(traces: &[BigRational]) -> Option<f64> {
    let k_max = traces.len() - 1;
    let odd_vanish = traces.iter().skip(1).step_by(2).all(|t| t.is_zero());
    let step = if odd_vanish { 2 } else { 1 };
    let points: Vec<(f64, f64)> = (k_max / 2..=k_max)
        .filter(|k| *k > 0 && (step == 1 || k % 2 == 0))
        .map(|k| (k as f64, traces[k].to_f64().unwrap_or(f64::NAN)))
        .collect();
    if points.iter().any(|p| p.1 < 0.0) {
        return None;
    }
    let fit = fit_log_log(points.iter().copied()).ok()?;
    if fit.slope >= 0.0 {
        return None;
    }
    let last = if step == 2 { k_max - k_max % 2 } else { k_max } as f64;
    let c = fit.intercept.exp();
    let s = fit.slope;
    let h = step as f64;
    // Euler–Maclaurin for Σ_{j≥1} g(last + jh) with g(t) = c t^{s−1}
    let g = |t: f64| c * t.powf(s - 1.0);
    let dg = |t: f64| c * (s - 1.0) * t.powf(s - 2.0);
    let integral = c * last.powf(s) / (-s);
    Some(integral / h - g(last) / 2.0 - h * dg(last) / 12.0)
}

/// log m with the hypotheses that make it the entropy of G ↷ X_f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub f: String,
    pub m: String,
    pub entropy: f64,
    /// Each support element of f other than 1, with its positivity.
    pub support_positivity: Vec<(String, bool)>,
    /// τ(xᵏ) = 0 was checked exactly for 1 ≤ k ≤ this.
    pub traces_checked: usize,
}

/// Orders through which τ(xᵏ) = 0 is verified.
pub const ENTROPY_TRACE_CHECKS: usize = 30;

pub fn entropy_report(f: &ZElement, og: &OrderedGroup) -> Result<EntropyReport> {
    let spec = f.group();
    if spec != og.spec() {
        return Err(Error::GroupMismatch(format!("f over {spec} but order on {}", og.spec())));
    }
    let profile = f.classify()?;
    if !profile.semi_lopsided {
        return Err(Error::hypothesis(format!("`{f}` is not semi-lopsided")));
    }
    let mut support_positivity = Vec::new();
    for s in &profile.support {
        let positive = og.is_positive(s) == Positivity::Positive;
        support_positivity.push((spec.format_element(s), positive));
        if !positive {
            return Err(Error::hypothesis(format!(
                "support element {} of `{f}` is not in the positive cone",
                spec.format_element(s)
            )));
        }
    }
    let x = harmonic_parts(f)?.x();
    let traces = trace_powers(&x, ENTROPY_TRACE_CHECKS, DEFAULT_SUPPORT_CAP)?;
    if let Some(k) = (1..traces.len()).find(|&k| !traces[k].is_zero()) {
        return Err(Error::hypothesis(format!("τ(x^{k}) = {} although supp x is positive", traces[k])));
    }
    Ok(EntropyReport {
        f: f.to_string(),
        m: profile.m.to_string(),
        entropy: profile.m.to_f64().unwrap_or(f64::NAN).ln(),
        support_positivity,
        traces_checked: ENTROPY_TRACE_CHECKS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_ball, GroupSpec};
    use crate::inverse::geometric_l2_partial;
    use crate::measure::build_nu;
    use crate::oracle::log_det_symmetric_line;
    use crate::ring::{parse_expression, parse_integer_expression};

    fn z(spec: &str, text: &str) -> ZElement {
        parse_integer_expression(spec.parse().unwrap(), text).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn small_cfg() -> WindowConfig {
        WindowConfig { samples: 20_000, ..WindowConfig::default() }
    }

    #[test]
    fn theta_of_a_single_site() {
        let f = z("z(1)", "3 - a");
        let inv = geometric_l2_partial(&f, 6).unwrap();
        let spec = f.group();
        let ball: Vec<GroupElement> = enumerate_ball(spec, &spec.default_generators(), 10).unwrap();
        let w: FxHashSet<GroupElement> = ball.iter().cloned().collect();
        let v: Vec<GroupElement> = (-3..=0).map(|n| spec.pow(&spec.parse_word("a").unwrap(), n)).collect();
        let x: FxHashMap<GroupElement, i64> = [(spec.identity(), 1)].into_iter().collect();
        let theta = theta_window(&inv.xi, &x, &w, &v).unwrap();
        for (g, t) in &theta {
            let n = -spec.abelianization(g)[0];
            assert_eq!(*t, rat(1, 3i64.pow(n as u32 + 1)));
        }
        let zero = theta_window(&inv.xi, &FxHashMap::default(), &w, &v).unwrap();
        assert!(zero.iter().all(|(_, t)| t.is_zero()));
        let narrow: FxHashSet<GroupElement> = v.iter().cloned().collect();
        assert!(matches!(theta_window(&inv.xi, &x, &narrow, &v), Err(Error::Window(_))));
    }

    #[test]
    fn theta_is_additive_mod_one() {
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 3).unwrap();
        let spec = f.group();
        let ball = enumerate_ball(spec, &spec.default_generators(), 5).unwrap();
        let w: FxHashSet<GroupElement> = ball.iter().cloned().collect();
        let v = enumerate_ball(spec, &spec.default_generators(), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut draw = || -> FxHashMap<GroupElement, i64> { ball.iter().map(|g| (g.clone(), rng.gen_range(-2..=2))).collect() };
        let (x1, x2) = (draw(), draw());
        let sum: FxHashMap<GroupElement, i64> = ball.iter().map(|g| (g.clone(), x1[g] + x2[g])).collect();
        let t1 = theta_window(&inv.xi, &x1, &w, &v).unwrap();
        let t2 = theta_window(&inv.xi, &x2, &w, &v).unwrap();
        let ts = theta_window(&inv.xi, &sum, &w, &v).unwrap();
        for i in 0..v.len() {
            assert_eq!(ts[i].1, frac(&(&t1[i].1 + &t2[i].1)));
        }
    }

    #[test]
    fn pairing_examples() {
        let spec: GroupSpec = "z(1)".parse().unwrap();
        let g = spec.parse_word("a").unwrap();
        let theta = vec![(g.clone(), rat(1, 4))];
        let i = char_pairing(&theta, &ZElement::delta(spec, g.clone())).unwrap();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(char_pairing(&theta, &ZElement::zero(spec)).unwrap(), Complex64::new(1.0, 0.0));
        let flat = vec![(g.clone(), rat(0, 1))];
        assert_eq!(char_pairing(&flat, &z("z(1)", "5 a")).unwrap(), Complex64::new(1.0, 0.0));
        assert!(char_pairing(&theta, &z("z(1)", "a^2")).is_err());
    }

    #[test]
    fn pulled_back_phase_matches_theta() {
        // ⟨Θ(x), α⟩ computed through θ equals Σ_h x(h)(αξ)(h)
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 3).unwrap();
        let spec = f.group();
        let alpha = z("heisenberg(1)", "2 - a b^-1 + 3 b");
        let ball = enumerate_ball(spec, &spec.default_generators(), 6).unwrap();
        let w: FxHashSet<GroupElement> = ball.iter().cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: FxHashMap<GroupElement, i64> = ball.iter().map(|g| (g.clone(), rng.gen_range(-1..=1))).collect();
        let theta = theta_window(&inv.xi, &x, &w, &alpha.support()).unwrap();
        let via_theta = char_pairing(&theta, &alpha).unwrap();
        let gamma = alpha.to_rational().convolve(&inv.xi).unwrap();
        let mut phase = BigRational::zero();
        for (h, c) in gamma.iter() {
            phase += c * BigRational::from_integer(x.get(h).copied().unwrap_or(0).into());
        }
        let direct = Complex64::from_polar(1.0, 2.0 * PI * frac(&phase).to_f64().unwrap());
        assert!((via_theta - direct).norm() < 1e-12);
    }

    #[test]
    fn members_and_witnessed_non_members() {
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 14).unwrap();
        let nu = build_nu(3).unwrap();
        let est = estimate_fourier(&inv, &f, &nu, &small_cfg()).unwrap();
        assert_eq!(est.product_value, Complex64::new(1.0, 0.0));
        assert_eq!((est.mc_mean, est.mc_stderr), (Complex64::new(1.0, 0.0), 0.0));
        assert_eq!(est.verdict, HaarVerdict::HaarConsistentOne);
        let one = ZElement::one(f.group());
        let est = estimate_fourier(&inv, &one, &nu, &small_cfg()).unwrap();
        assert_eq!(est.product_value, Complex64::new(0.0, 0.0));
        assert_eq!(est.verdict, HaarVerdict::HaarConsistentZero);
        assert!(est.agrees());
        let zero = estimate_fourier(&inv, &ZElement::zero(f.group()), &nu, &small_cfg()).unwrap();
        assert_eq!((zero.mc_mean, zero.mc_stderr), (Complex64::new(1.0, 0.0), 0.0));
    }

    #[test]
    fn corrupted_inverse_is_caught() {
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 10).unwrap();
        let spec = f.group();
        let bad = inv.xi.add(&QElement::monomial(spec, spec.identity(), rat(1, 10))).unwrap();
        let phase = PhaseVector::literal(&f, &bad).unwrap();
        let est = estimate_from_phase(&f, &phase, &build_nu(3).unwrap(), &small_cfg()).unwrap();
        assert_eq!(est.verdict, HaarVerdict::Inconsistent);
        // ν̂(3/10) ν̂(1/10)² from the extra f/10
        assert!((est.product_value.norm() - 0.0968).abs() < 2e-3, "{}", est.product_value);
        let panel = vec![(f.clone(), true)];
        assert!(!haar_verdict(&panel, &[est]).unwrap().pass);
    }

    #[test]
    fn estimates_are_deterministic() {
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 10).unwrap();
        let alpha = z("heisenberg(1)", "1 + a");
        let nu = build_nu(3).unwrap();
        let a = estimate_fourier(&inv, &alpha, &nu, &small_cfg()).unwrap();
        let b = estimate_fourier(&inv, &alpha, &nu, &small_cfg()).unwrap();
        assert_eq!(a.mc_mean, b.mc_mean);
        let other = estimate_fourier(&inv, &alpha, &nu, &WindowConfig { seed: 1, ..small_cfg() }).unwrap();
        assert_ne!(a.mc_mean, other.mc_mean);
        assert!(a.mc_mean.norm() <= 1.0);
    }

    #[test]
    fn stderr_halves_with_four_times_the_samples() {
        let f = z("heisenberg(1)", "3 - a - b");
        let inv = geometric_l2_partial(&f, 10).unwrap();
        let alpha = z("heisenberg(1)", "1 - b");
        let nu = build_nu(3).unwrap();
        let a = estimate_fourier(&inv, &alpha, &nu, &WindowConfig { samples: 10_000, ..small_cfg() }).unwrap();
        let b = estimate_fourier(&inv, &alpha, &nu, &WindowConfig { samples: 40_000, ..small_cfg() }).unwrap();
        let ratio = a.mc_stderr / b.mc_stderr;
        assert!((ratio / 2.0 - 1.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn seeds_differ_by_module_and_shard() {
        let a = derive_seed(0, "factor", 0);
        assert_ne!(a, derive_seed(0, "factor", 1));
        assert_ne!(a, derive_seed(0, "walk", 0));
        assert_ne!(a, derive_seed(1, "factor", 0));
        assert_eq!(a, derive_seed(0, "factor", 0));
    }

    #[test]
    fn fk_on_the_line() {
        let x = parse_expression("z(1)".parse().unwrap(), "1/2 a + 1/2 a^-1").unwrap();
        let det = fk_determinant_series(&x, 400).unwrap();
        let (oracle, _) = log_det_symmetric_line();
        let corrected = det.corrected.unwrap();
        assert!((corrected.ln() - oracle).abs() < 2e-3, "{corrected}");
        assert!((det.partial - 0.5).abs() > (corrected - 0.5).abs());
        let zero = fk_determinant_series(&QElement::zero(x.group()), 10).unwrap();
        assert_eq!(zero.partial, 1.0);
        let positive = parse_expression("heisenberg(1)".parse().unwrap(), "1/3 a + 1/3 b").unwrap();
        let det = fk_determinant_series(&positive, 12).unwrap();
        assert!(det.traces_vanish && det.partial == 1.0);
    }

    #[test]
    fn entropy_examples() {
        let f = z("heisenberg(1)", "3 - a - b");
        let og = OrderedGroup::natural(f.group()).unwrap();
        let r = entropy_report(&f, &og).unwrap();
        assert_eq!(r.entropy, 3f64.ln());
        assert_eq!(r.traces_checked, 30);
        let bad = z("heisenberg(1)", "3 - a - b^-1");
        assert!(matches!(entropy_report(&bad, &og), Err(Error::Hypothesis(_))));
    }
}
