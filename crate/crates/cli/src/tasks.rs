//! One pipeline per task. Each returns a JSON result, CSV artifacts and,
//! for checking tasks, an overall verdict.

use std::fmt::Write as _;

use harmonics::factor::{
    derive_seed, entropy_report, fk_determinant_series, haar_verdict, PanelRow, WindowConfig,
};
use harmonics::group::{check_order_axioms, enumerate_ball, GroupSpec, OrderedGroup, Sampling};
use harmonics::inverse::{geometric_l2_auto, geometric_l2_partial, InverseLimits, InversePartial};
use harmonics::measure::{build_nu, build_nu_composite, fourier_csv, BaseDistribution};
use harmonics::reduction::{ideal_membership, reduction_record, Membership, WitnessRecord};
use harmonics::ring::{harmonic_parts, parse_expression, parse_integer_expression};
use harmonics::suite::{haar_estimates, haar_panel, run_criterion, simple_random_walk, SuiteOptions, CRITERIA};
use harmonics::walk::{decay_fit, growth_csv, growth_exponent, growth_profile, return_probability, varopoulos_check};
use harmonics::{Error, Result, ZElement};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Task};

pub struct Outcome {
    pub result: Value,
    pub csv: Vec<(&'static str, String)>,
    /// `Some(false)` when a checking task ran but its check failed.
    pub pass: Option<bool>,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome { result, csv: Vec::new(), pass: None }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

struct Setting {
    spec: GroupSpec,
    og: Option<OrderedGroup>,
}

fn setting(cfg: &ExperimentConfig) -> Result<Setting> {
    let text = cfg.group.as_deref().ok_or_else(|| Error::Parse("config needs `group`".into()))?;
    let spec: GroupSpec = text.parse()?;
    let og = match &cfg.generators {
        Some(words) => {
            let gens = words.iter().map(|w| spec.parse_word(w)).collect::<Result<Vec<_>>>()?;
            Some(OrderedGroup::with_generators(spec, gens)?)
        }
        None => OrderedGroup::natural(spec).ok(),
    };
    Ok(Setting { spec, og })
}

fn ordered(s: &Setting) -> Result<&OrderedGroup> {
    s.og.as_ref().ok_or_else(|| Error::Hypothesis(format!("{} carries no catalog order", s.spec)))
}

fn f_of(cfg: &ExperimentConfig, spec: GroupSpec) -> Result<ZElement> {
    let text = cfg.f.as_deref().ok_or_else(|| Error::Parse("config needs `f`".into()))?;
    parse_integer_expression(spec, text)
}

fn inverse_of(cfg: &ExperimentConfig, f: &ZElement, default_order: Option<usize>) -> Result<InversePartial> {
    match cfg.inverse.order.or(default_order) {
        Some(n) => geometric_l2_partial(f, n),
        None => geometric_l2_auto(f, InverseLimits { max_order: cfg.caps.max_order, support_cap: cfg.caps.support_cap }),
    }
}

fn alphas(list: &[String], spec: GroupSpec) -> Result<Vec<ZElement>> {
    list.iter().map(|a| parse_integer_expression(spec, a)).collect()
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn run(task: Task, cfg: &ExperimentConfig) -> Result<Outcome> {
    match task {
        Task::Inverse => inverse(cfg),
        Task::Walk => walk(cfg),
        Task::Reduce => reduce(cfg),
        Task::Membership => membership(cfg),
        Task::FactorCheck => factor_check(cfg),
        Task::Entropy => entropy(cfg),
        Task::OrdersTest => orders_test(cfg),
        Task::Reproduce => reproduce(cfg),
    }
}

fn inverse(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let f = f_of(cfg, s.spec)?;
    let inv = inverse_of(cfg, &f, None)?;
    let window = enumerate_ball(s.spec, &s.spec.default_generators(), cfg.inverse.window_radius)?;
    let verify = inv.verify(&window)?;
    let mut increments = String::from("n,increment\n");
    for (i, v) in inv.increments.iter().enumerate() {
        let _ = writeln!(increments, "{},{v:e}", i + 1);
    }
    let mut powers = String::from("n,l1,l2,linf,support\n");
    for (n, p) in inv.powers.iter().enumerate() {
        let f64_of = |q: &harmonics::ring::Rational| q.to_f64().unwrap_or(f64::NAN);
        let _ = writeln!(
            powers,
            "{n},{:e},{:e},{:e},{}",
            f64_of(&p.l1),
            f64_of(&p.l2_squared).sqrt(),
            f64_of(&p.linf),
            p.support
        );
    }
    Ok(Outcome {
        result: json!({ "inverse": to_value(&inv.report()), "verify": to_value(&verify) }),
        csv: vec![("increments.csv", increments), ("powers.csv", powers)],
        pass: None,
    })
}

fn walk(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let x = match &cfg.walk.x {
        Some(text) => parse_expression(s.spec, text)?,
        None => simple_random_walk(s.spec),
    };
    let series = return_probability(&x, cfg.walk.k_max, cfg.caps.support_cap)?;
    let [lo, hi] = cfg.walk.fit_window;
    let decay = decay_fit(&series, (lo, hi))?;
    let og = ordered(&s)?;
    let varopoulos = varopoulos_check(og, &x, cfg.walk.k_max, cfg.caps.support_cap)?;
    let sizes = growth_profile(og, cfg.walk.r_max, cfg.caps.support_cap)?;
    let growth = growth_exponent(&sizes, cfg.walk.r_max / 2, cfg.walk.r_max).ok();
    Ok(Outcome {
        result: json!({
            "x": x.to_string(),
            "bipartite": series.bipartite,
            "decay": to_value(&decay),
            "fit_window": [lo, hi],
            "varopoulos": to_value(&varopoulos),
            "growth_sizes": sizes,
            "growth": growth.map(|g| to_value(&g)),
        }),
        csv: vec![("return_probability.csv", series.to_csv()), ("growth.csv", growth_csv(&sizes))],
        pass: None,
    })
}

fn reduce(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let f = f_of(cfg, s.spec)?;
    let og = ordered(&s)?;
    let inv = inverse_of(cfg, &f, Some(8))?;
    let mut records = Vec::new();
    let mut csv = String::from("alpha,beta,c,case,order,certified\n");
    for alpha in alphas(&cfg.reduce.alpha, s.spec)? {
        let r = reduction_record(&alpha, &inv, og)?;
        let _ = writeln!(
            csv,
            "{},{},{},{:?},{},{}",
            csv_field(&r.alpha),
            csv_field(&r.beta),
            csv_field(&r.c),
            r.case,
            r.order,
            r.certified
        );
        records.push(to_value(&r));
    }
    Ok(Outcome { result: json!({ "f": f.to_string(), "reductions": records }), csv: vec![("reduce.csv", csv)], pass: None })
}

fn membership(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let f = f_of(cfg, s.spec)?;
    let og = ordered(&s)?;
    let inv = inverse_of(cfg, &f, Some(8))?;
    let mut rows = Vec::new();
    let mut csv = String::from("alpha,verdict,g0,value\n");
    for alpha in alphas(&cfg.membership.alpha, s.spec)? {
        let verdict = ideal_membership(&alpha, &inv, og)?;
        let row = match &verdict {
            Membership::Member { c } => json!({ "alpha": alpha.to_string(), "verdict": verdict.label(), "c": c.to_string() }),
            Membership::NonMember(w) => {
                let record = WitnessRecord {
                    g0: s.spec.format_element(&w.g0),
                    value_num: w.value.numer().to_string(),
                    value_den: w.value.denom().to_string(),
                };
                json!({
                    "alpha": alpha.to_string(),
                    "verdict": verdict.label(),
                    "witness": to_value(&record),
                    "tail_bound": w.tail_bound,
                    "order": w.order,
                })
            }
            Membership::Inconclusive { reason } => {
                json!({ "alpha": alpha.to_string(), "verdict": verdict.label(), "reason": reason })
            }
        };
        let witness = row.get("witness");
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            csv_field(&alpha.to_string()),
            verdict.label(),
            witness.and_then(|w| w["g0"].as_str()).map(csv_field).unwrap_or_default(),
            witness
                .map(|w| format!("{}/{}", w["value_num"].as_str().unwrap_or(""), w["value_den"].as_str().unwrap_or("")))
                .unwrap_or_default()
        );
        rows.push(row);
    }
    Ok(Outcome { result: json!({ "f": f.to_string(), "membership": rows }), csv: vec![("membership.csv", csv)], pass: None })
}

fn nu_for(cfg: &ExperimentConfig, f: &ZElement) -> Result<BaseDistribution> {
    match (cfg.factor.nu_composite, cfg.factor.nu_m) {
        (Some(big_m), _) => build_nu_composite(big_m),
        (None, Some(m)) => build_nu(m),
        (None, None) => {
            let m = f.trace();
            let m = m.to_i64().ok_or_else(|| Error::Hypothesis(format!("f(1) = {m} is too large for ν")))?;
            build_nu(m)
        }
    }
}

fn factor_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let f = f_of(cfg, s.spec)?;
    let og = ordered(&s)?;
    harmonic_parts(&f)?;
    let nu = nu_for(cfg, &f)?;
    let panel: Vec<(ZElement, bool)> = if cfg.factor.alpha.is_empty() {
        haar_panel(&f, og, cfg.seed)?
    } else {
        let inv = geometric_l2_partial(&f, 8)?;
        let mut panel = Vec::new();
        for alpha in alphas(&cfg.factor.alpha, s.spec)? {
            let member = match ideal_membership(&alpha, &inv, og)? {
                Membership::Member { .. } => true,
                Membership::NonMember(_) => false,
                Membership::Inconclusive { reason } => {
                    return Err(Error::AdaptiveDepthExceeded { max_order: inv.order, detail: reason })
                }
            };
            panel.push((alpha, member));
        }
        panel
    };
    let window = WindowConfig {
        seed: cfg.seed,
        samples: cfg.factor.samples,
        shards: cfg.factor.shards,
        prune_bias: cfg.factor.prune_bias,
        tolerance: cfg.factor.tolerance,
    };
    let estimates = haar_estimates(&f, &panel, &nu, cfg.factor.order, &window)?;
    let report = haar_verdict(&panel, &estimates)?;
    let mut csv = String::from("alpha,member,mc_re,mc_im,stderr,product_re,product_im,tail,prune_bias,sites,verdict,pass\n");
    for PanelRow { alpha, member, estimate: e, pass } in &report.rows {
        let _ = writeln!(
            csv,
            "{},{member},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{pass}",
            csv_field(alpha),
            e.mc_mean.re,
            e.mc_mean.im,
            e.mc_stderr,
            e.product_value.re,
            e.product_value.im,
            e.product_tail,
            e.prune_bias,
            e.sample_window,
            to_value(&e.verdict).as_str().unwrap_or("")
        );
    }
    let n = cfg.factor.fourier_points.max(1) as i64;
    let points: Vec<_> = (0..=n).map(|i| harmonics::ring::Rational::new(i.into(), n.into())).collect();
    Ok(Outcome {
        result: json!({ "f": f.to_string(), "nu": to_value(&nu), "haar": to_value(&report) }),
        csv: vec![("estimates.csv", csv), ("nu_fourier.csv", fourier_csv(&nu, &points))],
        pass: Some(report.pass),
    })
}

fn entropy(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let f = f_of(cfg, s.spec)?;
    let og = ordered(&s)?;
    let report = entropy_report(&f, og)?;
    let mut result = to_value(&report);
    result["exact"] = json!(format!("log {}", report.m));
    if cfg.entropy.fk_terms > 0 {
        let x = harmonic_parts(&f)?.x();
        result["fk"] = to_value(&fk_determinant_series(&x, cfg.entropy.fk_terms)?);
    }
    Ok(Outcome::plain(result))
}

fn orders_test(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setting(cfg)?;
    let og = ordered(&s)?;
    let sample = enumerate_ball(s.spec, og.generators(), cfg.orders.radius)?;
    let report = check_order_axioms(
        og,
        &sample,
        Sampling::Random { count: cfg.orders.triples, seed: derive_seed(cfg.seed, "orders", 0) },
    );
    let pass = report.passed();
    let mut result = to_value(&report);
    result["pass"] = json!(pass);
    Ok(Outcome { result, csv: Vec::new(), pass: Some(pass) })
}

fn reproduce(cfg: &ExperimentConfig) -> Result<Outcome> {
    let opts = SuiteOptions { seed: cfg.seed, samples: cfg.reproduce.samples, corrupt_nu: cfg.reproduce.corrupt_nu };
    let ids: Vec<u8> = if cfg.reproduce.only.is_empty() { (1..=CRITERIA).collect() } else { cfg.reproduce.only.clone() };
    let mut criteria = Vec::new();
    let mut csv = String::from("criterion,name,pass\n");
    for id in ids {
        let r = run_criterion(id, &opts);
        eprintln!("{}", r.line());
        let _ = writeln!(csv, "A{},{},{}", r.id, csv_field(&r.name), r.pass);
        criteria.push(r);
    }
    let failed: Vec<u8> = criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    let pass = failed.is_empty();
    Ok(Outcome {
        result: json!({ "criteria": to_value(&criteria), "failed": failed, "pass": pass }),
        csv: vec![("criteria.csv", csv)],
        pass: Some(pass),
    })
}
