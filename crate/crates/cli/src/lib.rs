//! Command implementations behind the `lcagabor` binary. Each command turns
//! a config into the text written to stdout (or `--out`).

pub mod config;

use serde::Serialize;
use serde_json::{json, Value};

use lcagabor::density::{
    automorphism_invariance_check, density_profile, finite_density_check, format_ratio, is_uniformly_separated,
    separated_decomposition, union_profile,
};
use lcagabor::gabor::{frame_bounds, GaborReport, GaborSystem};
use lcagabor::model::{modulation_norm, stft, wiener_norm, wiener_norm_amalgam};
use lcagabor::verify::{run_suite, Sizes, VerifyOptions};
use lcagabor::{Error, Result};

pub use config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// 0 ok, 1 failed check or broken invariant, 2 usage or config error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_invariant_violation() {
        1
    } else {
        2
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn seed_of(cfg: &ExperimentConfig, seed: Option<u64>) -> u64 {
    seed.or(cfg.task.seed).unwrap_or(0)
}

pub fn cmd_density(cfg: &ExperimentConfig, format: Format) -> Result<String> {
    let lam = cfg.lambda()?;
    let region = cfg.task.region.ok_or_else(|| config::config_error("config: `task.region` is required"))?;
    let (lo, hi) = cfg.task.n_range.unwrap_or((0, region));
    let profile = match cfg.lambda_parts()? {
        Some(parts) => union_profile(&parts, (lo, hi), region)?,
        None => density_profile(&lam, (lo, hi), region)?,
    };
    let separated: Vec<Value> =
        (lo..=hi).map(|n| json!({"n": n, "separated": is_uniformly_separated(&lam, n)})).collect();
    let finite = finite_density_check(&lam, lo, region)?;
    let parts = separated_decomposition(&lam, lo, region)?;
    let power = cfg.task.power.unwrap_or(2);
    let invariance = automorphism_invariance_check(&lam, power, (lo, hi), region)?;
    if !finite.holds() {
        return Err(Error::Invariant(format!("scale propagation bound fails from scale {lo}")));
    }
    if !invariance.all_equal() {
        return Err(Error::Invariant("automorphism invariance rows differ".into()));
    }
    match format {
        Format::Json => Ok(to_json(&json!({
            "ambient": ExperimentConfig::ambient_of(&lam),
            "count": lam.len(),
            "profile": profile,
            "uniformly_separated": separated,
            "finite_density": finite,
            "decomposition": {"n": lo, "part_sizes": parts.iter().map(|p| p.len()).collect::<Vec<_>>()},
            "invariance": invariance,
        }))),
        Format::Table => {
            let mut out = profile.to_string();
            out.push_str(&format!("N_{lo} = {}, propagation bound holds\n", finite.n_n));
            out.push_str(&format!("separated decomposition at n={lo}: {} parts\n", parts.len()));
            for r in &invariance.rows {
                out.push_str(&format!(
                    "B=A^{power} n={} upper {} lower {} (A scale {})\n",
                    r.n,
                    format_ratio(&r.upper_b),
                    format_ratio(&r.lower_b),
                    r.a_scale
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct FrameOutput {
    #[serde(flatten)]
    report: GaborReport,
    window_m1_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame_operator: Option<Vec<[f64; 2]>>,
}

pub fn cmd_frame(cfg: &ExperimentConfig, seed: Option<u64>, format: Format) -> Result<String> {
    let window = cfg.window(seed_of(cfg, seed))?;
    let sys = GaborSystem::build(window.clone(), cfg.lambda()?)?;
    let report = frame_bounds(&sys)?;
    let m1 = modulation_norm(&stft(&window, &window)?, 1.0)?;
    let op = if cfg.task.export_operator { Some(sys.frame_operator()?.to_pairs()) } else { None };
    let out = FrameOutput { report, window_m1_norm: m1, frame_operator: op };
    match format {
        Format::Json => Ok(to_json(&out)),
        Format::Table => {
            let r = &out.report;
            let mut s = String::new();
            s.push_str(&format!("classification {}\n", r.classification.name()));
            if let Some(c) = r.c {
                s.push_str(&format!("c              {c}\n"));
            }
            s.push_str(&format!("dim            {}\ncount          {}\n", r.dim, r.count));
            s.push_str(&format!("lower          {}\nupper          {}\n", r.lower, r.upper));
            s.push_str(&format!("rank           {}\ntol            {:e}\n", r.rank, r.tol));
            s.push_str(&format!("window M1 norm  {}\n", out.window_m1_norm));
            Ok(s)
        }
    }
}

pub fn cmd_stft(cfg: &ExperimentConfig, seed: Option<u64>, format: Format) -> Result<String> {
    let seed = seed_of(cfg, seed);
    let grid = stft(&cfg.signal(seed)?, &cfg.window(seed)?)?;
    match format {
        Format::Json => Ok(to_json(&grid.to_record())),
        Format::Table => {
            let n = grid.space().dim();
            let mut s = String::from("|V_g f(x_a, xi_b)|, rows a, columns b\n");
            for a in 0..n {
                let row: Vec<String> = (0..n).map(|b| format!("{:.6}", grid.value(a, b).norm())).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

pub fn cmd_norms(cfg: &ExperimentConfig, seed: Option<u64>, format: Format) -> Result<String> {
    let seed = seed_of(cfg, seed);
    let f = cfg.signal(seed)?;
    let g = cfg.window(seed)?;
    let exp = cfg.task.p_exp.unwrap_or(config::Exponent::Finite(2.0));
    let p = exp.value();
    let grid = stft(&f, &g)?;
    let modulation = modulation_norm(&grid, p)?;
    let wiener = wiener_norm(&grid, p)?;
    let amalgam = wiener_norm_amalgam(&grid, p)?;
    if wiener.to_bits() != amalgam.to_bits() {
        return Err(Error::Invariant(format!("amalgam norms differ: {wiener} vs {amalgam}")));
    }
    let lhs = grid.l2_norm();
    let rhs = f.norm() * g.norm();
    let rel_err = if rhs > 0.0 { (lhs - rhs).abs() / rhs } else { lhs };
    let ratio = if modulation > 0.0 { wiener / modulation } else { 0.0 };
    let label = exp.label();
    let mut out = serde_json::Map::new();
    out.insert("p_exp".into(), json!(label));
    out.insert("l2".into(), json!(f.norm()));
    out.insert(format!("modulation_{label}"), json!(modulation));
    out.insert(format!("wiener_{label}"), json!(wiener));
    out.insert(format!("wiener_amalgam_{label}"), json!(amalgam));
    out.insert("m1_norm".into(), json!(modulation_norm(&grid, 1.0)?));
    out.insert("wiener_over_modulation".into(), json!(ratio));
    out.insert("orthogonality_check".into(), json!({"lhs": lhs, "rhs": rhs, "rel_err": rel_err}));
    match format {
        Format::Json => Ok(to_json(&out)),
        Format::Table => {
            let mut s = String::new();
            for (key, value) in out.iter().filter(|(k, _)| *k != "orthogonality_check") {
                s.push_str(&format!("{key:<24} {value}\n"));
            }
            let o = &out["orthogonality_check"];
            s.push_str(&format!("{:<24} {} vs {} (rel err {})\n", "orthogonality", o["lhs"], o["rhs"], o["rel_err"]));
            Ok(s)
        }
    }
}

/// Runs the suite; returns the report text and whether every check passed.
pub fn cmd_verify(
    suite: &str,
    primes: Vec<u32>,
    sizes: Sizes,
    seed: Option<u64>,
    format: Format,
) -> Result<(String, bool)> {
    if suite != "paper" {
        return Err(config::config_error(format!("unknown suite `{suite}` (available: paper)")));
    }
    if primes.is_empty() {
        return Err(config::config_error("--p needs at least one prime"));
    }
    for &p in &primes {
        lcagabor::GroupParams::carry(p)?;
    }
    let mut opts = VerifyOptions { primes, sizes, ..VerifyOptions::default() };
    if let Some(s) = seed {
        opts.seed = s;
    }
    let results = run_suite(&opts);
    let all = results.iter().all(|r| r.passed);
    let text = match format {
        Format::Json => to_json(&json!({"suite": suite, "passed": all, "checks": results})),
        Format::Table => {
            let mut s: String = results.iter().map(|r| format!("{r}\n")).collect();
            let n_pass = results.iter().filter(|r| r.passed).count();
            s.push_str(&format!("{n_pass}/{} checks passed\n", results.len()));
            s
        }
    };
    Ok((text, all))
}
