//! One experiment per config: build what it needs, compute, emit a report.

use std::path::{Path, PathBuf};

use kloosterlab::bounds::{
    best_omega, katz_bound, lemma5_bound, lemma6_bound, lemma7_bound, lemma8_bound, lemma9_bound, omega_r,
    short_interval_bound, weil_bound, MAX_R,
};
use kloosterlab::chebyshev::moment_constant;
use kloosterlab::kloosterman::{build_angles, kloosterman_naive};
use kloosterlab::stats::{
    d_k_sum_table, dyadic_partition, empirical_cdf_discrepancy, extreme_counts, gm_reports, horizontal_scan,
    moment_v, moment_v_abs, multi_sum, sample_shifts, sign_count, vst_full_sum, w_k_sum, W_EXHAUSTIVE_LIMIT,
};
use kloosterlab::{AngleTable, GmMomentSpec, IntervalSpec, KloostermanTable, MultiSumSpec, PrimeModulus};

use crate::config::{parse_kv, ExperimentConfig, Kind};
use crate::error::{CliError, CliResult};
use crate::report::Report;

/// Environment variable naming the table cache directory.
pub const CACHE_ENV: &str = "KLOOSTERLAB_CACHE";

fn cache_dir(cfg: &ExperimentConfig) -> Option<PathBuf> {
    cfg.text("cache")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

fn load_table(cfg: &ExperimentConfig, p: PrimeModulus, b: i64) -> CliResult<KloostermanTable> {
    let method = cfg.method()?;
    Ok(match cache_dir(cfg) {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| CliError::io(dir.display(), e))?;
            KloostermanTable::cached(&dir, b, p, method)?
        }
        None => KloostermanTable::build(b, p, method)?,
    })
}

/// `(h, M, N)` with defaults `h = 1` and the units interval `(0, p-1]`.
fn window(cfg: &ExperimentConfig, p: PrimeModulus) -> CliResult<(i64, IntervalSpec)> {
    let h = cfg.int("h", 1)?;
    let m = cfg.int("M", 0)?;
    let n = cfg.uint("N", p.get() - 1)?;
    Ok((h, IntervalSpec::new(m, n)))
}

fn angles(cfg: &ExperimentConfig, p: PrimeModulus, h: i64) -> CliResult<AngleTable> {
    Ok(build_angles(&load_table(cfg, p, 1)?, h)?)
}

fn k_of(cfg: &ExperimentConfig) -> CliResult<usize> {
    Ok(cfg.uint("k", 1)? as usize)
}

/// Validate, then compute the report for one config.
pub fn execute(cfg: &ExperimentConfig) -> CliResult<Report> {
    cfg.validate()?;
    match cfg.kind {
        Kind::Compute => compute(cfg),
        Kind::Table => table(cfg),
        Kind::Vst => vst(cfg),
        Kind::Interval => interval(cfg),
        Kind::Moments => moments(cfg),
        Kind::Signs => signs(cfg),
        Kind::Extremes => extremes(cfg),
        Kind::Cdf => cdf(cfg),
        Kind::Multisum => multisum(cfg),
        Kind::Gm => gm(cfg),
        Kind::Horizontal => horizontal(cfg),
        Kind::Bounds => bounds(cfg),
    }
}

/// Write `text` to `path`, or to stdout when there is none.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e)),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("stdout", e))
        }
    }
}

/// Execute one config and write its report where the config says.
pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    let report = execute(cfg)?;
    emit(&report.render(cfg.format), cfg.output.as_deref())
}

fn compute(cfg: &ExperimentConfig) -> CliResult<Report> {
    let (a, b, p) = (cfg.int("a", 0)?, cfg.int("b", 0)?, cfg.prime("p")?);
    let mut r = Report::new("compute", &["kind", "a", "b", "p", "value"]);
    r.push(vec!["compute".into(), a.into(), b.into(), p.get().into(), kloosterman_naive(a, b, p).into()]);
    Ok(r)
}

fn table(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let b = cfg.int("b", 1)?;
    let t = load_table(cfg, p, b)?;
    let mut r = Report::new("table", &["kind", "p", "b", "method", "a", "value"]);
    for (a, v) in t.values().iter().enumerate() {
        r.push(vec![
            "table".into(),
            p.get().into(),
            t.twist().into(),
            t.method().as_str().into(),
            a.into(),
            (*v).into(),
        ]);
    }
    Ok(r)
}

fn vst(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let k = k_of(cfg)?;
    let rep = vst_full_sum(&load_table(cfg, p, 1)?, k)?;
    let mut r = Report::new("vst", &["kind", "p", "k", "observed", "bound", "ratio"]);
    r.push(vec!["vst".into(), p.get().into(), k.into(), rep.observed.into(), rep.bound.into(), rep.ratio.into()]);
    Ok(r)
}

const INTERVAL_COLUMNS: [&str; 10] = ["kind", "p", "h", "k", "M", "N", "observed", "bound_omega_r", "r_star", "ratio"];

fn interval(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let k = k_of(cfg)?;
    let (h, iv) = window(cfg, p)?;
    let samples = cfg.uint("samples", 0)? as usize;
    let t = load_table(cfg, p, 1)?;
    let (r_star, bound) = short_interval_bound(p.get() as f64, iv.len.max(1) as f64, k);
    let mut r = Report::new("interval", &INTERVAL_COLUMNS);
    let mut row = |h: i64, m: i64| -> CliResult<()> {
        let iv = IntervalSpec::new(m, iv.len);
        let observed = d_k_sum_table(&t, iv, h, k)?.value.abs();
        r.push(vec![
            "interval".into(),
            p.get().into(),
            h.into(),
            k.into(),
            m.into(),
            iv.len.into(),
            observed.into(),
            bound.into(),
            r_star.into(),
            kloosterlab::bounds::ratio(observed, bound).into(),
        ]);
        Ok(())
    };
    if samples == 0 {
        row(h, iv.start)?;
        Ok(r)
    } else {
        let seed = cfg.uint("seed", 0)?;
        for (m, h) in sample_shifts(p, samples, seed) {
            row(h, m)?;
        }
        Ok(r.with_seed(seed))
    }
}

fn moments(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let alpha = cfg.float("alpha")?;
    let signed = cfg.flag("signed")?;
    let (h, iv) = window(cfg, p)?;
    let ang = angles(cfg, p, h)?;
    let m = if signed { moment_v(&ang, iv, alpha)? } else { moment_v_abs(&ang, iv, alpha)? };
    let mut r = Report::new(
        "moments",
        &[
            "kind", "p", "h", "alpha", "signed", "M", "N", "observed", "main_term", "normalized", "constant",
            "error_scale", "ratio",
        ],
    );
    r.push(vec![
        "moments".into(),
        p.get().into(),
        h.into(),
        alpha.into(),
        signed.into(),
        iv.start.into(),
        iv.len.into(),
        m.observed.into(),
        m.main_term.into(),
        m.normalized.into(),
        moment_constant(alpha)?.into(),
        m.error_scale.into(),
        m.ratio.into(),
    ]);
    Ok(r)
}

fn signs(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let (h, iv) = window(cfg, p)?;
    let s = sign_count(&angles(cfg, p, h)?, iv);
    let n = iv.len as f64;
    let deviation = if n > 0.0 { (s.positive.observed as f64 - n / 2.0).abs() / n } else { 0.0 };
    let mut r = Report::new(
        "signs",
        &["kind", "p", "h", "M", "N", "positive", "negative", "zero_bucket", "main_term", "deviation"],
    );
    r.push(vec![
        "signs".into(),
        p.get().into(),
        h.into(),
        iv.start.into(),
        iv.len.into(),
        s.positive.observed.into(),
        s.negative.observed.into(),
        s.positive.zero_bucket.into(),
        s.positive.main_term.into(),
        deviation.into(),
    ]);
    Ok(r)
}

fn extremes(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let delta = cfg.float("delta")?;
    let (h, iv) = window(cfg, p)?;
    let e = extreme_counts(&angles(cfg, p, h)?, iv, delta)?;
    let n = iv.len as f64;
    let frac = |c: u64| if n > 0.0 { c as f64 / n } else { 0.0 };
    let main = |m: f64| if n > 0.0 { m / n } else { 0.0 };
    let mut r = Report::new(
        "extremes",
        &[
            "kind",
            "p",
            "h",
            "delta",
            "M",
            "N",
            "small",
            "large",
            "boundary",
            "small_fraction",
            "small_main_fraction",
            "large_fraction",
            "large_main_fraction",
        ],
    );
    r.push(vec![
        "extremes".into(),
        p.get().into(),
        h.into(),
        delta.into(),
        iv.start.into(),
        iv.len.into(),
        e.small.observed.into(),
        e.large.observed.into(),
        e.boundary.into(),
        frac(e.small.observed).into(),
        main(e.small.main_term).into(),
        frac(e.large.observed).into(),
        main(e.large.main_term).into(),
    ]);
    Ok(r)
}

fn cdf(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let (h, iv) = window(cfg, p)?;
    let d = empirical_cdf_discrepancy(&angles(cfg, p, h)?, iv)?;
    let mut r = Report::new("cdf", &["kind", "p", "h", "M", "N", "discrepancy", "p_pow_neg_quarter"]);
    r.push(vec![
        "cdf".into(),
        p.get().into(),
        h.into(),
        iv.start.into(),
        iv.len.into(),
        d.into(),
        (p.get() as f64).powf(-0.25).into(),
    ]);
    Ok(r)
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split([',', ';']).map(str::trim).filter(|t| !t.is_empty())
}

/// Multi-sum spec file: `p`, `polys = a1:b1, a2:b2, ...`, `orders = k1, k2, ...`, `h`.
pub fn parse_multisum_spec(text: &str) -> CliResult<(Option<u64>, MultiSumSpec)> {
    let map = parse_kv(text)?;
    for key in map.keys() {
        if !["p", "polys", "orders", "h"].contains(&key.as_str()) {
            return Err(CliError::usage(format!("unknown multisum spec key {key}")));
        }
    }
    let bad = |what: &str| CliError::usage(format!("multisum spec: bad {what}"));
    let p = map.get("p").map(|v| v.parse::<u64>().map_err(|_| bad("p"))).transpose()?;
    let polys = split_list(map.get("polys").ok_or_else(|| bad("polys (missing)"))?)
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| bad("polys entry"))?;
            Ok((a.trim().parse().map_err(|_| bad("polys entry"))?, b.trim().parse().map_err(|_| bad("polys entry"))?))
        })
        .collect::<CliResult<Vec<(i64, i64)>>>()?;
    let orders = split_list(map.get("orders").ok_or_else(|| bad("orders (missing)"))?)
        .map(|t| t.parse::<usize>().map_err(|_| bad("orders entry")))
        .collect::<CliResult<Vec<_>>>()?;
    let h = map.get("h").map(|v| v.parse::<i64>().map_err(|_| bad("h"))).transpose()?.unwrap_or(0);
    Ok((p, MultiSumSpec::new(polys, orders, h)?))
}

fn multisum(cfg: &ExperimentConfig) -> CliResult<Report> {
    let path = cfg.text("spec").unwrap_or_default();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let (file_p, spec) = parse_multisum_spec(&text)?;
    let p = match (cfg.opt_prime("p")?, file_p) {
        (Some(p), _) => p,
        (None, Some(n)) => PrimeModulus::new(n).map_err(|e| CliError::usage(format!("multisum spec: {e}")))?,
        (None, None) => return Err(CliError::usage("multisum needs p (flag or spec file)")),
    };
    let rep = multi_sum(&spec, &load_table(cfg, p, 1)?)?;
    let polys = spec.polys.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(";");
    let orders = spec.orders.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";");
    let mut r = Report::new(
        "multisum",
        &[
            "kind",
            "p",
            "s",
            "h",
            "polys",
            "orders",
            "re",
            "im",
            "abs",
            "excluded",
            "lemma5_bound",
            "lemma5_ratio",
            "lemma5_applies",
            "lemma6_bound",
            "lemma6_ratio",
            "lemma6_applies",
        ],
    );
    r.push(vec![
        "multisum".into(),
        p.get().into(),
        spec.s().into(),
        spec.h.into(),
        polys.into(),
        orders.into(),
        rep.value.re.into(),
        rep.value.im.into(),
        rep.value.norm().into(),
        rep.excluded.into(),
        rep.lemma5.bound.into(),
        rep.lemma5.ratio.into(),
        rep.lemma5_applies.into(),
        rep.lemma6.bound.into(),
        rep.lemma6.ratio.into(),
        rep.lemma6_applies.into(),
    ]);
    Ok(r)
}

fn param(report: &kloosterlab::BoundReport, key: &str) -> f64 {
    report
        .params
        .iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or(f64::NAN)
}

fn gm(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let spec = GmMomentSpec {
        h: cfg.req_uint("h")?,
        r: cfg.uint("r", 1)? as u32,
        m: cfg.int("m", 1)?,
        k: k_of(cfg)?,
    };
    let seed = cfg.uint("seed", 0)?;
    let t = load_table(cfg, p, 1)?;
    let (l7, l8) = gm_reports(&spec, &t)?;
    let l9 = w_k_sum(&dyadic_partition(p, spec.h), &t, spec.r, spec.k, spec.h, seed)?;
    let mut r = Report::new(
        "gm",
        &[
            "kind",
            "p",
            "h",
            "r",
            "k",
            "m",
            "moment",
            "lemma7_bound",
            "lemma7_ratio",
            "max_moment",
            "lemma8_bound",
            "lemma8_ratio",
            "w_sum",
            "lemma9_bound",
            "lemma9_ratio",
            "min_constant_7",
            "min_constant_8",
            "min_constant_9",
        ],
    );
    r.push(vec![
        "gm".into(),
        p.get().into(),
        spec.h.into(),
        spec.r.into(),
        spec.k.into(),
        spec.m.into(),
        l7.observed.into(),
        l7.bound.into(),
        l7.ratio.into(),
        l8.observed.into(),
        l8.bound.into(),
        l8.ratio.into(),
        l9.observed.into(),
        l9.bound.into(),
        l9.ratio.into(),
        param(&l7, "min_constant").into(),
        param(&l8, "min_constant").into(),
        param(&l9, "min_constant").into(),
    ]);
    Ok(if p.get() > W_EXHAUSTIVE_LIMIT { r.with_seed(seed) } else { r })
}

fn horizontal(cfg: &ExperimentConfig) -> CliResult<Report> {
    let x = cfg.req_uint("x")?;
    let h = cfg.int("h", 1)?;
    let k = k_of(cfg)?;
    let iv = IntervalSpec::new(cfg.int("M", 0)?, cfg.req_uint("N")?);
    let s = horizontal_scan(iv, x, h, k)?;
    let mut r = Report::new(
        "horizontal",
        &[
            "kind",
            "x",
            "h",
            "k",
            "M",
            "N",
            "primes",
            "pairs",
            "sum",
            "positive",
            "negative",
            "zero",
            "main_term",
            "positive_fraction",
        ],
    );
    let fraction = if s.pairs > 0 { s.positive as f64 / s.pairs as f64 } else { 0.0 };
    r.push(vec![
        "horizontal".into(),
        x.into(),
        h.into(),
        k.into(),
        iv.start.into(),
        iv.len.into(),
        s.primes.into(),
        s.pairs.into(),
        s.sum.into(),
        s.positive.into(),
        s.negative.into(),
        s.zero.into(),
        s.main_term.into(),
        fraction.into(),
    ]);
    Ok(r)
}

fn bounds(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = cfg.prime("p")?;
    let pf = p.get() as f64;
    let n = cfg.uint("N", p.get() - 1)?;
    let h = cfg.uint("h", 10)?;
    let r_cfg = cfg.uint("r", 2)? as u32;
    let k = k_of(cfg)?;
    let (nf, hf) = (n as f64, h as f64);
    let mut rep = Report::new("bounds", &["kind", "bound", "p", "N", "h", "r", "k", "value"]);
    let mut row = |name: &str, r: u32, value: f64| {
        rep.push(vec![
            "bounds".into(),
            name.into(),
            p.get().into(),
            n.into(),
            h.into(),
            r.into(),
            k.into(),
            value.into(),
        ]);
    };
    row("weil", 0, weil_bound(pf));
    row("katz", 0, katz_bound(pf, k));
    for r in 1..=MAX_R {
        row("omega_r", r, omega_r(pf, nf, r));
    }
    let (r_star, w) = best_omega(pf, nf);
    row("omega_best", r_star, w);
    row("lemma5", 0, lemma5_bound(pf, &[k, k]));
    row("lemma6", 0, lemma6_bound(pf, &[k, k]));
    row("lemma7", r_cfg, lemma7_bound(pf, hf, r_cfg, k));
    row("lemma8", r_cfg, lemma8_bound(pf, hf, r_cfg, k));
    row("lemma9", r_cfg, lemma9_bound(pf, hf, r_cfg, k));
    Ok(rep)
}
