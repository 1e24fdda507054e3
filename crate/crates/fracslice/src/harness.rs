//! Suite runner: loads a run configuration, executes every registered
//! identity check, and renders deterministic reports.
//!
//! Determinism contract: for a fixed configuration (including the seed) the
//! JSON and CSV reports are byte-identical across runs and across thread
//! counts.  Every float is printed with 17 significant digits, each identity
//! draws from its own seeded generator, and outcomes are collected in
//! registry order.

use crate::fracnum::QuadratureConfig;
use crate::quat::ImaginaryUnit;
use crate::scalar::Real;
use crate::sliceops::{GridSpec, OrderPair, SliceDomain, SliceError, Variant};
use crate::theorems::{registry, IdentityOutcome, VerifyCtx};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "FRACSLICE_THREADS";

const GRID_SALT: u64 = 0xA5A5_5A5A_0F0F_F0F0;

fn default_seed() -> u64 {
    0
}

fn default_extra_units() -> usize {
    5
}

/// One run of the verification suite, fully described.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(
        serialize = "T: Serialize + Real",
        deserialize = "T: Deserialize<'de> + Real"
    )
)]
pub struct RunConfig<T: Real> {
    #[serde(default)]
    pub domain: SliceDomain<T>,
    #[serde(default)]
    pub orders: OrderPair<T>,
    #[serde(default)]
    pub quadrature: QuadratureConfig<T>,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Random slice units added to the three canonical ones when the
    /// evaluation grid is materialized.
    #[serde(default = "default_extra_units")]
    pub extra_units: usize,
    /// Per-identity tolerance overrides; keys must name registered
    /// identities.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl<T: Real> Default for RunConfig<T> {
    fn default() -> Self {
        Self {
            domain: SliceDomain::default(),
            orders: OrderPair::default(),
            quadrature: QuadratureConfig::default(),
            variant: Variant::default(),
            seed: default_seed(),
            extra_units: default_extra_units(),
            tolerances: BTreeMap::new(),
        }
    }
}

impl<T: Real> RunConfig<T> {
    pub fn from_json(text: &str) -> Result<Self, HarnessError>
    where
        T: serde::de::DeserializeOwned,
    {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.domain.validate()?;
        self.quadrature.validate().map_err(SliceError::from)?;
        let known: Vec<&str> = registry::<T>().iter().map(|s| s.name).collect();
        for (name, tol) in &self.tolerances {
            if !known.contains(&name.as_str()) {
                return Err(HarnessError::Config(format!(
                    "unknown identity `{name}` in tolerances (known: {})",
                    known.join(", ")
                )));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(HarnessError::Config(format!(
                    "tolerance for `{name}` must be finite and positive, got {tol}"
                )));
            }
        }
        Ok(())
    }

    /// The evaluation grid this configuration describes; depends only on the
    /// seed and `extra_units`.
    pub fn grid(&self) -> GridSpec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ GRID_SALT);
        GridSpec::standard(&mut rng, self.extra_units)
    }
}

/// Results of a whole suite run.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: Serialize + Real"))]
pub struct VerifyReport<T: Real> {
    pub seed: u64,
    pub variant: Variant,
    pub domain: SliceDomain<T>,
    pub orders: OrderPair<T>,
    pub quadrature: QuadratureConfig<T>,
    pub grid_units: Vec<ImaginaryUnit<T>>,
    pub passed: bool,
    pub outcomes: Vec<IdentityOutcome<T>>,
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var(THREADS_ENV).ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

/// Runs every registered identity under `cfg`.  Identities run in parallel;
/// a failing computation is reported as a failed outcome rather than
/// aborting the suite.
pub fn run_suite<T: Real>(cfg: &RunConfig<T>) -> Result<VerifyReport<T>, HarnessError> {
    cfg.validate()?;
    let grid = cfg.grid();
    let jobs: Vec<(VerifyCtx<T>, crate::theorems::IdentitySpec<T>)> = registry::<T>()
        .into_iter()
        .map(|spec| {
            let tol = cfg.tolerances.get(spec.name).copied().unwrap_or(spec.default_tol);
            let ctx = VerifyCtx {
                dom: cfg.domain,
                orders: cfg.orders,
                quad: cfg.quadrature,
                variant: cfg.variant,
                seed: cfg.seed,
                grid: grid.clone(),
                tol: T::of(tol),
            };
            (ctx, spec)
        })
        .collect();

    let run_all = || {
        jobs.par_iter()
            .map(|(ctx, spec)| match (spec.run)(ctx) {
                Ok(out) => out,
                Err(e) => IdentityOutcome {
                    name: spec.name,
                    variant: ctx.variant,
                    passed: false,
                    tolerance: ctx.tol,
                    max_abs_residual: T::infinity(),
                    max_rel_residual: T::infinity(),
                    checks: 0,
                    warnings: vec![format!("computation failed: {e}")],
                },
            })
            .collect::<Vec<_>>()
    };
    let outcomes = match thread_pool() {
        Some(pool) => pool.install(run_all),
        None => run_all(),
    };

    Ok(VerifyReport {
        seed: cfg.seed,
        variant: cfg.variant,
        domain: cfg.domain,
        orders: cfg.orders,
        quadrature: cfg.quadrature,
        grid_units: grid.units,
        passed: outcomes.iter().all(|o| o.passed),
        outcomes,
    })
}

// --- deterministic rendering -------------------------------------------------

/// JSON formatter printing every float with 17 significant digits, which
/// round-trips f64 exactly; non-finite values become `null`.
pub struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: std::io::Write + ?Sized,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: std::io::Write + ?Sized,
    {
        if value.is_finite() {
            write!(writer, "{value:.8e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes any value to JSON bytes with the deterministic float format.
pub fn to_json_bytes<S: Serialize>(value: &S) -> Result<Vec<u8>, serde_json::Error> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

fn fmt_float<T: Real>(v: T) -> String {
    let v = v.to_f64().unwrap_or(f64::NAN);
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "inf".into()
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// CSV rendering of the outcomes, one row per identity.
pub fn to_csv_bytes<T: Real>(report: &VerifyReport<T>) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("name,variant,passed,tolerance,max_abs_residual,max_rel_residual,checks,warnings\n");
    for o in &report.outcomes {
        let warnings = csv_quote(&o.warnings.join("; "));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            o.name,
            o.variant,
            o.passed,
            fmt_float(o.tolerance),
            fmt_float(o.max_abs_residual),
            fmt_float(o.max_rel_residual),
            o.checks,
            warnings
        );
    }
    out.into_bytes()
}

/// Aligned text table, one line per identity plus a verdict line.
pub fn summary_table<T: Real>(report: &VerifyReport<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:<10} {:<6} {:>12} {:>10} {:>7}",
        "identity", "variant", "status", "max_rel", "tol", "checks"
    );
    for o in &report.outcomes {
        let rel = o.max_rel_residual.to_f64().unwrap_or(f64::NAN);
        let tol = o.tolerance.to_f64().unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{:<20} {:<10} {:<6} {:>12.3e} {:>10.1e} {:>7}",
            o.name,
            o.variant.to_string(),
            if o.passed { "pass" } else { "FAIL" },
            rel,
            tol,
            o.checks
        );
        for w in &o.warnings {
            let _ = writeln!(out, "    warning: {w}");
        }
    }
    let _ = writeln!(
        out,
        "{}: {} of {} identities passed",
        if report.passed { "PASS" } else { "FAIL" },
        report.outcomes.iter().filter(|o| o.passed).count(),
        report.outcomes.len()
    );
    out
}

/// Writes `bytes` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| HarnessError::Io(e.error))?;
    Ok(())
}

/// Writes `report.json` and `report.csv` into `dir` and returns their paths.
pub fn write_reports<T: Real + Serialize>(
    report: &VerifyReport<T>,
    dir: &Path,
) -> Result<(PathBuf, PathBuf), HarnessError> {
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    write_atomic(&json_path, &to_json_bytes(report)?)?;
    write_atomic(&csv_path, &to_csv_bytes(report))?;
    Ok((json_path, csv_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_suite_passes_and_is_deterministic() {
        let cfg = RunConfig::<f64>::default();
        let r1 = run_suite(&cfg).unwrap();
        assert!(r1.passed, "{}", summary_table(&r1));
        let r2 = run_suite(&cfg).unwrap();
        assert_eq!(to_json_bytes(&r1).unwrap(), to_json_bytes(&r2).unwrap());
        assert_eq!(to_csv_bytes(&r1), to_csv_bytes(&r2));
    }

    #[test]
    fn alt_variant_fails_some_identities() {
        let cfg = RunConfig::<f64> { variant: Variant::Alt, ..Default::default() };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.passed);
        // identities that do not depend on the reading still pass
        for name in ["power_rule", "representation", "kernel_N", "cauchy"] {
            let o = r.outcomes.iter().find(|o| o.name == name).unwrap();
            assert!(o.passed, "{name} should not depend on the variant");
        }
    }

    #[test]
    fn unknown_tolerance_name_is_rejected() {
        let text = r#"{"tolerances": {"no_such_identity": 1e-6}}"#;
        let err = RunConfig::<f64>::from_json(text).unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)), "{err:?}");
    }

    #[test]
    fn unknown_config_field_is_rejected() {
        let text = r#"{"sede": 7}"#;
        assert!(RunConfig::<f64>::from_json(text).is_err());
    }

    #[test]
    fn tolerance_override_is_applied() {
        let mut cfg = RunConfig::<f64>::default();
        cfg.tolerances.insert("cauchy".into(), 1e-3);
        let r = run_suite(&cfg).unwrap();
        let o = r.outcomes.iter().find(|o| o.name == "cauchy").unwrap();
        assert_eq!(o.tolerance, 1e-3);
    }

    #[test]
    fn json_floats_use_full_precision() {
        let cfg = RunConfig::<f64>::default();
        let bytes = to_json_bytes(&cfg).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("3.4999999999999998e-1") || text.contains("3.5000000000000003e-1"),
            "expected 17-digit rendering of 0.35 in {text}");
        let back: RunConfig<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.orders.alpha.re(), cfg.orders.alpha.re());
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
    }
}
