use std::io::Write;
use std::path::Path;

use flagcy_core::geometry::DEFAULT_STEP;
use flagcy_core::lie::{delta_p, eigenvalue_template, label_of, ParabolicData, RootSystemData};
use flagcy_core::verify::{
    estimate_decay_rate, expected_gamma, run_suite, DecayFit, SuiteConfig, Tolerances,
};
use flagcy_core::{FlagFamily, RadialProfile};

use crate::config::{default_rho_grid, JobConfig};
use crate::error::{CliError, EXIT_BREACH, EXIT_PASS};
use crate::report::{to_json, ReportFile};

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn csv_bytes(header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Config(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.serialize(row).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Config(format!("csv: {e}")))
}

/// Rows `(ρ, V, V')`.
pub fn solve_table(job: &JobConfig) -> Result<Vec<[f64; 3]>, CliError> {
    job.validate()?;
    let model = job.model()?;
    let grid = job.rho.clone().unwrap_or_else(default_rho_grid);
    grid.iter()
        .map(|&rho| {
            let (v, dv) = model.eval(rho)?;
            Ok([rho, v, dv])
        })
        .collect()
}

pub fn cmd_solve(job: &JobConfig) -> Result<u8, CliError> {
    let rows: Vec<Vec<f64>> = solve_table(job)?.iter().map(|r| r.to_vec()).collect();
    emit(
        job.output.as_deref(),
        &csv_bytes(&["rho", "V", "dV"], &rows)?,
    )?;
    Ok(EXIT_PASS)
}

pub fn suite_config(job: &JobConfig, tolerance_scale: f64) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(job.family, job.b.clone());
    cfg.c = job.c;
    cfg.anchor = job.anchor();
    cfg.method = job.method.as_option();
    cfg.samples = job.samples;
    cfg.seed = job.seed;
    cfg.ray = job.ray.clone();
    cfg.perturb_v = job.perturb_v;
    cfg.tolerances = Tolerances::default().scaled(tolerance_scale);
    cfg
}

pub fn verify_report(job: &JobConfig, tolerance_scale: f64) -> Result<ReportFile, CliError> {
    job.validate()?;
    let report = run_suite(&suite_config(job, tolerance_scale))?;
    Ok(ReportFile::new(job.clone(), tolerance_scale, report))
}

pub fn cmd_verify(job: &JobConfig, tolerance_scale: f64) -> Result<u8, CliError> {
    let file = verify_report(job, tolerance_scale)?;
    let json = to_json(&file).map_err(|e| CliError::Config(format!("json: {e}")))?;
    emit(job.output.as_deref(), json.as_bytes())?;
    let failed = file.report.failed_checks();
    for c in &failed {
        eprintln!(
            "tolerance breach: {} = {:e} (bounds {:?}..{:e})",
            c.name, c.value, c.lower, c.upper
        );
    }
    Ok(if file.report.passed {
        EXIT_PASS
    } else {
        EXIT_BREACH
    })
}

pub fn decay_fit(job: &JobConfig) -> Result<DecayFit, CliError> {
    job.validate()?;
    let spec = job.spec()?;
    Ok(estimate_decay_rate(
        job.family,
        &job.b,
        &spec,
        &job.ray_or_default(),
        DEFAULT_STEP,
    )?)
}

pub fn cmd_decay(job: &JobConfig) -> Result<u8, CliError> {
    let fit = decay_fit(job)?;
    let class = job.class()?;
    let expected = expected_gamma(job.family.dim(), class.is_compact_type());
    let rows: Vec<Vec<f64>> = fit.samples.iter().map(|s| s.to_vec()).collect();
    let mut bytes = csv_bytes(&["rtilde", "deviation"], &rows)?;
    writeln!(
        bytes,
        "# gamma={},std_error={:e},expected={}",
        fit.gamma, fit.std_error, expected
    )
    .expect("writing to a Vec");
    emit(job.output.as_deref(), &bytes)?;
    if job.output.is_some() {
        println!(
            "gamma = {:.4} ± {:.4} (expected {expected})",
            fit.gamma, fit.std_error
        );
    }
    Ok(EXIT_PASS)
}

fn weight_string(coeffs: &[i64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| format!("{c}ϖ{}", i + 1))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn lie_text(family: FlagFamily) -> String {
    let roots = RootSystemData::for_family(family);
    let parabolic = ParabolicData::borel(&roots);
    let delta = delta_p(&roots, &parabolic).expect("Borel parabolic");
    let pos: Vec<String> = roots
        .positive_roots
        .iter()
        .map(|r| {
            let parts: Vec<String> = r
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| {
                    if c == 1 {
                        format!("α{}", i + 1)
                    } else {
                        format!("{c}α{}", i + 1)
                    }
                })
                .collect();
            parts.join("+")
        })
        .collect();
    let cone: Vec<String> = (1..=family.rank()).map(|i| format!("b{i} > 0")).collect();
    format!(
        "family: {} ({})\nroot system: {}\ncomplex dimension m: {}\npositive roots: {}\nδ_P = {}\n\
         eigenvalue template: {}\nKähler cone: {} (semi-positive classes: b_i >= 0)\n",
        family.name(),
        family.pretty(),
        label_of(family).as_str(),
        family.dim(),
        pos.join(", "),
        weight_string(&delta),
        eigenvalue_template(family),
        cone.join(", "),
    )
}

pub fn cmd_lie(family: FlagFamily) -> Result<u8, CliError> {
    emit(None, lie_text(family).as_bytes())?;
    Ok(EXIT_PASS)
}

pub fn load_report(path: &Path) -> Result<ReportFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == crate::report::SCHEMA_VERSION as u64 => {}
        other => {
            return Err(CliError::Config(format!(
                "{}: unsupported schema_version {other:?}",
                path.display()
            )))
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Summarizes a saved report; the exit code re-applies its verdict.
pub fn cmd_report(path: &Path) -> Result<u8, CliError> {
    let file = load_report(path)?;
    let r = &file.report;
    let mut out = format!(
        "{} {} report, schema {}\nfamily {} b={:?} C={} method={} samples={}\n",
        file.tool, file.version, file.schema_version, r.family, r.b, r.c, r.method, r.sample_count
    );
    for c in &r.checks {
        let lo = c.lower.map(|l| format!("{l:e} <= ")).unwrap_or_default();
        out.push_str(&format!(
            "  [{}] {}: {lo}{:e} <= {:e}\n",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.upper
        ));
    }
    for e in &r.errata {
        out.push_str(&format!(
            "  erratum {} ({}): residual {:e}{}\n",
            e.id,
            e.description,
            e.residual,
            if e.raised { ", raised" } else { "" }
        ));
    }
    out.push_str(if r.passed { "PASS\n" } else { "FAIL\n" });
    emit(None, out.as_bytes())?;
    Ok(if r.passed { EXIT_PASS } else { EXIT_BREACH })
}
