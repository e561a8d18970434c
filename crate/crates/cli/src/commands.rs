use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use l1stab::cases::{
    cournot_verify, ricker_condition_i, ricker_condition_ii, ricker_quadratic, ricker_verdict, CournotParams,
    RickerParams, RickerVerdict,
};
use l1stab::jury::jury_table;
use l1stab::region::{scan_region, scan_region_with_workers, Axis, GridSpec, Mapping, RegionGrid};
use l1stab::roots::{classify_modulus, find_roots_with, RootConfig};
use l1stab::{run_algorithm, AlgoConfig, AnyMonic, Backend, CertificateJson, Coeff, MonicPolynomial};
use serde_json::json;

use crate::args::{
    CheckArgs, Command, CournotArgs, Format, GridArgs, OutArgs, PolyOut, RegionArgs, RickerArgs, RootsArgs,
};
use crate::input::{literal, polynomials, rational};
use crate::Failure;

pub fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check(a) => check(a),
        Command::Trace(a) => trace(a),
        Command::Jury(a) => jury(a),
        Command::Roots(a) => roots(a),
        Command::Region(a) => region(a),
        Command::Cournot(a) => cournot(a),
        Command::Ricker(a) => ricker(a),
    }
}

fn emit(out: &OutArgs, bytes: &[u8]) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

/// Explicit `--format`, else the `--out` extension, else `default`.
fn resolve_format(out: &OutArgs, default: Format) -> Format {
    if let Some(f) = out.format {
        return f;
    }
    let ext = out
        .out
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        Some("txt") => Format::Table,
        Some("pgm") => Format::Pgm,
        Some("ppm") => Format::Ppm,
        _ => default,
    }
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Usage(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    let polys = polynomials(&a.input)?;
    let cfg = AlgoConfig::with_max_stages(a.max_stages);
    let format = resolve_format(&a.output, Format::Json);
    let certs: Vec<CertificateJson> = polys.iter().map(|p| l1stab::engine::check_any(p, &cfg)).collect();
    let mut text = String::new();
    match format {
        Format::Json if certs.len() == 1 => {
            text.push_str(&serde_json::to_string_pretty(&certs[0]).expect("serializes"));
            text.push('\n');
        }
        Format::Json => {
            for c in &certs {
                text.push_str(&c.to_json());
                text.push('\n');
            }
        }
        Format::Table => {
            for (p, c) in polys.iter().zip(&certs) {
                let stage = c.stage.map_or("-".to_string(), |s| s.to_string());
                let _ = writeln!(text, "{p}\t{}\tstage {stage}", c.verdict.name());
            }
        }
        Format::Csv => {
            text.push_str("polynomial,verdict,stage,last_tail_sum\n");
            for (p, c) in polys.iter().zip(&certs) {
                let stage = c.stage.map_or(String::new(), |s| s.to_string());
                let last = c.tail_sums.last().cloned().unwrap_or_default();
                let _ = writeln!(text, "{p},{},{stage},{last}", c.verdict.name());
            }
        }
        f => return Err(unsupported("check", f)),
    }
    emit(&a.output, text.as_bytes())?;
    Ok(certs.iter().map(|c| c.verdict.exit_code() as u8).max().unwrap_or(0))
}

struct TraceRow {
    step: usize,
    polynomial: String,
    tail_sum: String,
}

fn trace_rows<T: Coeff>(p: &MonicPolynomial<T>, cfg: &AlgoConfig) -> (Vec<TraceRow>, l1stab::Verdict, Option<usize>) {
    let cert = run_algorithm(p, cfg);
    let rows = cert
        .trace
        .iter()
        .map(|t| TraceRow {
            step: t.stage + 1,
            polynomial: t.polynomial_string(),
            tail_sum: t.tail_sum.render(),
        })
        .collect();
    (rows, cert.verdict, cert.deciding_stage)
}

fn trace(a: CheckArgs) -> Result<u8, Failure> {
    let polys = polynomials(&a.input)?;
    let cfg = AlgoConfig::with_max_stages(a.max_stages);
    let format = resolve_format(&a.output, Format::Table);
    let mut text = String::new();
    let mut code = 0u8;
    for (idx, p) in polys.iter().enumerate() {
        let (rows, verdict, stage) = match p {
            AnyMonic::Exact(p) => trace_rows(p, &cfg),
            AnyMonic::Float(p) => trace_rows(p, &cfg),
        };
        code = code.max(verdict.exit_code() as u8);
        match format {
            Format::Table => {
                if idx > 0 {
                    text.push('\n');
                }
                let norms: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        let certifying = stage == Some(r.step - 1) && verdict == l1stab::Verdict::Certified;
                        format!("1 + {}{}", r.tail_sum, if certifying { " < 2" } else { "" })
                    })
                    .collect();
                let w_poly = rows.iter().map(|r| r.polynomial.len()).max().unwrap_or(0).max(4);
                let _ = writeln!(text, "Step | {:<w_poly$} | ||p||_1", "p(x)");
                for (r, norm) in rows.iter().zip(&norms) {
                    let _ = writeln!(text, "{:>4} | {:<w_poly$} | {norm}", r.step, r.polynomial);
                }
                let _ = writeln!(
                    text,
                    "verdict: {}{}",
                    verdict.name(),
                    stage.map_or(String::new(), |s| format!(" at stage {s}"))
                );
            }
            Format::Csv => {
                if idx == 0 {
                    text.push_str("polynomial_index,step,polynomial,tail_sum\n");
                }
                for r in &rows {
                    let _ = writeln!(text, "{idx},{},{},{}", r.step, r.polynomial, r.tail_sum);
                }
            }
            Format::Json => {
                let value = json!({
                    "verdict": verdict,
                    "stage": stage,
                    "rows": rows.iter().map(|r| json!({
                        "step": r.step,
                        "polynomial": r.polynomial,
                        "tail_sum": r.tail_sum,
                    })).collect::<Vec<_>>(),
                });
                text.push_str(&serde_json::to_string(&value).expect("serializes"));
                text.push('\n');
            }
            f => return Err(unsupported("trace", f)),
        }
    }
    emit(&a.output, text.as_bytes())?;
    Ok(code)
}

fn jury_text<T: Coeff>(p: &MonicPolynomial<T>, format: Format) -> Result<String, Failure> {
    let table = jury_table(p);
    Ok(match format {
        Format::Table => {
            let verdict = serde_json::to_value(table.verdict).expect("serializes");
            format!(
                "{}verdict: {}\n",
                table.to_text_table(),
                verdict.as_str().unwrap_or_default()
            )
        }
        Format::Csv => table.to_csv(),
        Format::Json => {
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(Coeff::render).collect())
                .collect();
            let value = json!({ "rows": rows, "verdict": table.verdict });
            format!("{}\n", serde_json::to_string(&value).expect("serializes"))
        }
        f => return Err(unsupported("jury", f)),
    })
}

fn jury(a: PolyOut) -> Result<u8, Failure> {
    let polys = polynomials(&a.input)?;
    let format = resolve_format(&a.output, Format::Table);
    let mut text = String::new();
    for (idx, p) in polys.iter().enumerate() {
        if idx > 0 && format == Format::Table {
            text.push('\n');
        }
        text.push_str(&match p {
            AnyMonic::Exact(p) => jury_text(p, format)?,
            AnyMonic::Float(p) => jury_text(p, format)?,
        });
    }
    emit(&a.output, text.as_bytes())?;
    Ok(0)
}

fn roots(a: RootsArgs) -> Result<u8, Failure> {
    if a.margin.is_nan() || a.margin <= 0.0 {
        return Err(Failure::Usage("--margin must be positive".into()));
    }
    let polys = polynomials(&a.input)?;
    let format = resolve_format(&a.output, Format::Json);
    let cfg = RootConfig {
        seed: a.seed,
        ..RootConfig::default()
    };
    let mut text = String::new();
    for (idx, p) in polys.iter().enumerate() {
        let set = find_roots_with(&p.to_f64(), &cfg)?;
        match format {
            Format::Json => {
                let s = if polys.len() == 1 {
                    set.to_json()
                } else {
                    serde_json::to_string(&set.to_json_values()).expect("serializes")
                };
                text.push_str(&s);
                text.push('\n');
            }
            Format::Csv => {
                if idx == 0 {
                    text.push_str("polynomial_index,re,im,modulus\n");
                }
                for z in &set.roots {
                    let _ = writeln!(text, "{idx},{},{},{}", z.re, z.im, z.norm());
                }
            }
            Format::Table => {
                let _ = writeln!(text, "{p}");
                for z in &set.roots {
                    let _ = writeln!(text, "  {:>22} {:>22}  |z| = {}", z.re, z.im, z.norm());
                }
                let class = serde_json::to_value(classify_modulus(set.max_modulus, a.margin)).expect("serializes");
                let _ = writeln!(
                    text,
                    "  max modulus {} ({}), residual {:e}",
                    set.max_modulus,
                    class.as_str().unwrap_or_default(),
                    set.residual
                );
            }
            f => return Err(unsupported("roots", f)),
        }
    }
    emit(&a.output, text.as_bytes())?;
    Ok(0)
}

fn grid_spec(mapping: Mapping, grid: &GridArgs) -> Result<GridSpec, Failure> {
    let mut spec = GridSpec::new(mapping, grid.backend.into(), grid.stages);
    let override_axis = |axis: &Axis, min: &Option<String>, max: &Option<String>, steps: Option<usize>| {
        let min = min
            .as_deref()
            .map(rational)
            .transpose()?
            .unwrap_or_else(|| axis.min.clone());
        let max = max
            .as_deref()
            .map(rational)
            .transpose()?
            .unwrap_or_else(|| axis.max.clone());
        Axis::new(axis.name.clone(), min, max, steps.unwrap_or(axis.steps)).map_err(Failure::from)
    };
    spec.x_axis = override_axis(&spec.x_axis, &grid.x_min, &grid.x_max, grid.x_steps)?;
    spec.y_axis = override_axis(&spec.y_axis, &grid.y_min, &grid.y_max, grid.y_steps)?;
    Ok(spec)
}

fn scan(spec: &GridSpec, workers: Option<usize>) -> Result<RegionGrid, Failure> {
    match workers {
        Some(0) => Err(Failure::Usage("--workers must be at least 1".into())),
        Some(n) => Ok(scan_region_with_workers(spec, n)?),
        None => Ok(scan_region(spec)),
    }
}

fn emit_grid(grid: &RegionGrid, out: &OutArgs) -> Result<u8, Failure> {
    let bytes = match resolve_format(out, Format::Json) {
        Format::Json => grid.to_json_summary().into_bytes().into_iter().chain(*b"\n").collect(),
        Format::Csv => grid.to_csv().into_bytes(),
        Format::Pgm => grid.to_pgm(),
        Format::Ppm => grid.to_ppm(),
        Format::Table => return Err(unsupported("region", Format::Table)),
    };
    emit(out, &bytes)?;
    Ok(0)
}

fn region(a: RegionArgs) -> Result<u8, Failure> {
    let param = a.param.as_deref().map(rational).transpose()?;
    let mapping = Mapping::from_name(&a.mapping, param)?;
    let spec = grid_spec(mapping, &a.grid)?;
    let grid = scan(&spec, a.grid.workers)?;
    emit_grid(&grid, &a.output)
}

fn cournot(a: CournotArgs) -> Result<u8, Failure> {
    let lambda = rational(&a.lambda)?;
    let params = CournotParams::new(lambda, a.k, a.competitors)?;
    let report = cournot_verify(&params, &AlgoConfig::with_max_stages(a.max_stages))?;
    match resolve_format(&a.output, Format::Json) {
        Format::Json => emit(&a.output, format!("{}\n", report.to_json()).as_bytes())?,
        f => return Err(unsupported("cournot", f)),
    }
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn ricker_point<T: Coeff>(r: T, a: T, b: T, stages: usize) -> Result<(serde_json::Value, RickerVerdict), Failure> {
    let params = RickerParams::new(r.clone(), a.clone(), b.clone())?;
    let quad = ricker_quadratic(&params)?;
    let verdict = ricker_verdict(&params, &AlgoConfig::with_max_stages(stages))?;
    let value = json!({
        "r": r.render(),
        "a": a.render(),
        "b": b.render(),
        "t": params.t()?.render(),
        "quadratic": quad.to_string(),
        "condition_i": ricker_condition_i(&r, &a, &b),
        "condition_ii": ricker_condition_ii(&r, &a, &b),
        "verdict": verdict,
    });
    Ok((value, verdict))
}

fn ricker(a: RickerArgs) -> Result<u8, Failure> {
    let r = rational(&a.r)?;
    if a.scan_ba {
        if a.a.is_some() || a.b.is_some() {
            return Err(Failure::Usage("--scan-ba scans a and b; do not pass --a/--b".into()));
        }
        let spec = grid_spec(Mapping::RickerBa { r }, &a.grid)?;
        let grid = scan(&spec, a.grid.workers)?;
        return emit_grid(&grid, &a.output);
    }
    let (Some(av), Some(bv)) = (&a.a, &a.b) else {
        return Err(Failure::Usage("give --a and --b, or --scan-ba".into()));
    };
    let (value, verdict) = match Backend::from(a.grid.backend) {
        Backend::Exact => ricker_point(r, rational(av)?, rational(bv)?, a.grid.stages)?,
        Backend::Float => {
            let f = |s: &str| l1stab::scalar::parse_float(&literal(s)).map_err(Failure::from);
            ricker_point(f(&a.r)?, f(av)?, f(bv)?, a.grid.stages)?
        }
    };
    match resolve_format(&a.output, Format::Json) {
        Format::Json => emit(
            &a.output,
            format!("{}\n", serde_json::to_string_pretty(&value).expect("serializes")).as_bytes(),
        )?,
        f => return Err(unsupported("ricker", f)),
    }
    Ok(match verdict {
        RickerVerdict::StableSufficient(_) => 0,
        RickerVerdict::UnstableNecessary => 1,
        RickerVerdict::Unknown => 2,
    })
}
