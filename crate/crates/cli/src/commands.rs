//! One function per subcommand.

use std::fs::File;
use std::io::{self, LineWriter, Write};
use std::path::Path;

use paley_core::bounds::{
    case1_sufficient, case2_sufficient, char_sum_report, eq_omega_check, DEFAULT_CHARSUM_CAP,
};
use paley_core::construction::DEFAULT_ORACLE_CAP;
use paley_core::construction::{construct_1mod8, construct_with_cap, Method, OneFactor};
use paley_core::paley::{
    build_factorization, build_h, hadamard_check, partition_check, verify_compatibility,
};
use paley_core::scan::{check_range, scan as run_scan, ScanConfig, DEFAULT_SCAN_CAP};
use paley_core::verification::verify_factor;
use paley_core::{GaussianInt, PrimeContext};
use serde::Serialize;

use crate::format::{edge_list, edges_by_length, FactorFile, JsonVertex};
use crate::{CliError, Outcome, ORACLE_CAP_ENV};

/// `--cap` if given, else the environment variable, else the library default.
pub fn oracle_cap(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(cap), _) => Ok(cap),
        (None, Some(raw)) => raw.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{ORACLE_CAP_ENV}={raw:?} is not a non-negative integer"
            ))
        }),
        (None, None) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn oracle_cap_from_env(flag: Option<u64>) -> Result<u64, CliError> {
    let env = std::env::var(ORACLE_CAP_ENV).ok();
    oracle_cap(flag, env.as_deref())
}

fn build(
    ctx: &PrimeContext,
    root: Option<u64>,
    cap: Option<u64>,
) -> Result<(OneFactor, Method), CliError> {
    match root {
        None => Ok(construct_with_cap(ctx, oracle_cap_from_env(cap)?)?),
        Some(_) if ctx.residue_class() != 1 => Err(CliError::Usage(format!(
            "--root applies only to p = 1 (mod 8), got p = {}",
            ctx.p()
        ))),
        Some(a) => Ok((
            construct_1mod8(ctx, a)?,
            Method::Quartic { root: a % ctx.p() },
        )),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn construct(out: &mut dyn Write, p: u64, root: Option<u64>, cap: Option<u64>) -> Outcome {
    let ctx = PrimeContext::new(p)?;
    let (f, method) = build(&ctx, root, cap)?;
    write_json(out, &FactorFile::from_factor(&f, &ctx, method))?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyJson {
    p: u64,
    matching: bool,
    residue: bool,
    lengths: bool,
    passed: bool,
    first_violation: Option<String>,
}

pub fn verify(out: &mut dyn Write, file: &Path, expect_p: Option<u64>, json: bool) -> Outcome {
    let text = std::fs::read_to_string(file)?;
    let parsed: FactorFile = serde_json::from_str(&text)?;
    if let Some(p) = expect_p {
        if p != parsed.p {
            return Err(CliError::Usage(format!(
                "--p {p} does not match p = {} in {}",
                parsed.p,
                file.display()
            )));
        }
    }
    let ctx = PrimeContext::new(parsed.p)?;
    let f = parsed.to_factor()?;
    let report = verify_factor(&f, &ctx);
    let first = report.first_violation();
    if json {
        write_json(
            out,
            &VerifyJson {
                p: report.p,
                matching: report.matching_ok(),
                residue: report.residue_ok(),
                lengths: report.lengths_ok(),
                passed: report.passed(),
                first_violation: first.clone(),
            },
        )?;
    } else {
        writeln!(out, "p = {}", report.p)?;
        writeln!(out, "matching: {}", verdict(report.matching_ok()))?;
        writeln!(out, "residue: {}", verdict(report.residue_ok()))?;
        writeln!(out, "lengths: {}", verdict(report.lengths_ok()))?;
        match &first {
            None => writeln!(out, "verified")?,
            Some(why) => writeln!(out, "first violation: {why}")?,
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

#[derive(Serialize)]
struct FactorJson {
    k: usize,
    edges: Vec<[JsonVertex; 2]>,
}

#[derive(Serialize)]
struct FactorizationJson {
    p: u64,
    method: &'static str,
    root: Option<u64>,
    factors: Vec<FactorJson>,
    partition: bool,
    compatible: bool,
}

pub fn factorization(out: &mut dyn Write, p: u64, cap: Option<u64>, json: bool) -> Outcome {
    let ctx = PrimeContext::new(p)?;
    let (f, method) = build(&ctx, None, cap)?;
    let fz = build_factorization(&f, &ctx)?;
    let partition = partition_check(&fz).is_partition();
    let (compatible, bad) = verify_compatibility(&fz, &build_h(&ctx));
    if json {
        let factors = fz
            .rows()
            .map(|(k, f)| FactorJson {
                k,
                edges: edge_list(f, &ctx),
            })
            .collect();
        write_json(
            out,
            &FactorizationJson {
                p,
                method: method.name(),
                root: method.root(),
                factors,
                partition,
                compatible,
            },
        )?;
    } else {
        for (k, f) in fz.rows() {
            let edges: Vec<String> = edges_by_length(f, &ctx)
                .iter()
                .map(ToString::to_string)
                .collect();
            writeln!(out, "F{k}: {}", edges.join(" "))?;
        }
        writeln!(out, "partition: {}", verdict(partition))?;
        writeln!(out, "compatible: {}", verdict(compatible))?;
        if let Some((k, e)) = bad.first() {
            writeln!(
                out,
                "first violation: edge {e} of F{k} has equal signs in row {k}"
            )?;
        }
    }
    Ok(if partition && compatible { 0 } else { 1 })
}

#[derive(Serialize)]
struct ScanLine {
    p: u64,
    a: Option<u64>,
    mu_s: u64,
}

pub fn scan(
    out: &mut dyn Write,
    min: u64,
    max: u64,
    jobs: Option<usize>,
    path: Option<&Path>,
    cap: Option<u64>,
) -> Outcome {
    check_range(min, max, cap.unwrap_or(DEFAULT_SCAN_CAP))?;
    let jobs = match jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let mut file;
    let mut stdout;
    let sink: &mut dyn Write = match path {
        Some(path) => {
            file = LineWriter::new(File::create(path)?);
            &mut file
        }
        None => {
            stdout = LineWriter::new(out);
            &mut stdout
        }
    };
    let summary = run_scan(&ScanConfig::new(min, max, jobs), |r| {
        write_json(
            sink,
            &ScanLine {
                p: r.p,
                a: r.a,
                mu_s: r.micros,
            },
        )
    })?;
    let (a, at) = match summary.max_a {
        Some((a, p)) => (a.to_string(), p.to_string()),
        None => ("none".to_string(), "none".to_string()),
    };
    writeln!(sink, "scanned={} max_a={a} at_p={at}", summary.scanned)?;
    sink.flush()?;
    Ok(if summary.not_found.is_empty() { 0 } else { 1 })
}

#[derive(Serialize)]
struct BoundsJson {
    p: u64,
    phi_p_minus_1: u64,
    omega_p_minus_1: u32,
    rhs: f64,
    eq_omega_holds: bool,
    case: &'static str,
    case1_sufficient: bool,
    case2_sufficient: bool,
}

pub fn bounds(out: &mut dyn Write, p: u64, json: bool) -> Outcome {
    let ctx = PrimeContext::new(p)?;
    let r = eq_omega_check(&ctx)?;
    let doc = BoundsJson {
        p,
        phi_p_minus_1: r.phi_p_minus_1,
        omega_p_minus_1: r.omega_p_minus_1,
        rhs: r.rhs,
        eq_omega_holds: r.eq_omega_holds,
        case: r.case.name(),
        case1_sufficient: case1_sufficient(p),
        case2_sufficient: case2_sufficient(p),
    };
    if json {
        write_json(out, &doc)?;
    } else {
        writeln!(out, "p = {p} ({})", doc.case)?;
        writeln!(out, "phi(p-1) = {}", doc.phi_p_minus_1)?;
        writeln!(out, "omega(p-1) = {}", doc.omega_p_minus_1)?;
        writeln!(out, "2^omega (6 sqrt p + 3) = {:.3}", doc.rhs)?;
        writeln!(
            out,
            "phi(p-1) > 2^omega (6 sqrt p + 3): {}",
            doc.eq_omega_holds
        )?;
        writeln!(out, "large-p inequality: {}", doc.case1_sufficient)?;
        writeln!(out, "mid-range inequality: {}", doc.case2_sufficient)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct SumJson {
    j: u32,
    direct: [i64; 2],
    mobius: [i64; 2],
    identity: bool,
    magnitude: f64,
    bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct WeilJson {
    d: u64,
    j: u32,
    sum: [i64; 2],
    magnitude: f64,
    bound: f64,
    ok: bool,
    tight_bound: f64,
    tight_ok: bool,
}

#[derive(Serialize)]
struct CharSumJson {
    p: u64,
    g0: u64,
    sums: Vec<SumJson>,
    weil: Vec<WeilJson>,
    total: [i64; 2],
    qualifying_roots: u64,
    identity_ok: bool,
    bound_ok: bool,
    weil_ok: bool,
    count_ok: bool,
    all_ok: bool,
}

fn pair(z: GaussianInt) -> [i64; 2] {
    [z.re, z.im]
}

pub fn charsum(out: &mut dyn Write, p: u64, cap: Option<u64>, json: bool) -> Outcome {
    let ctx = PrimeContext::new(p)?;
    let r = char_sum_report(&ctx, cap.unwrap_or(DEFAULT_CHARSUM_CAP))?;
    let scale = (1u64 << ctx.p_minus_1().omega()) as f64;
    let bound = scale * (2.0 * (p as f64).sqrt() + 1.0);
    let doc = CharSumJson {
        p,
        g0: r.g0,
        sums: r
            .sums
            .iter()
            .map(|&(j, direct, mobius, ok)| SumJson {
                j,
                direct: pair(direct),
                mobius: pair(mobius),
                identity: direct == mobius,
                magnitude: direct.abs(),
                bound,
                within_bound: ok,
            })
            .collect(),
        weil: r
            .weil_terms
            .iter()
            .map(|t| WeilJson {
                d: t.d,
                j: t.j,
                sum: pair(t.sum),
                magnitude: t.magnitude,
                bound: t.bound,
                ok: t.ok,
                tight_bound: t.tight_bound,
                tight_ok: t.tight_ok,
            })
            .collect(),
        total: pair(r.orthogonality_total),
        qualifying_roots: r.qualifying_roots,
        identity_ok: r.identity_ok(),
        bound_ok: r.bound_ok(),
        weil_ok: r.weil_ok(),
        count_ok: r.count_ok(),
        all_ok: r.all_ok(),
    };
    if json {
        write_json(out, &doc)?;
    } else {
        writeln!(out, "p = {p}, generator {}", doc.g0)?;
        for s in &doc.sums {
            writeln!(
                out,
                "S_{} = {} (Mobius {}), |S_{}| = {:.3} <= {:.3}: {}",
                s.j,
                GaussianInt::new(s.direct[0], s.direct[1]),
                GaussianInt::new(s.mobius[0], s.mobius[1]),
                s.j,
                s.magnitude,
                s.bound,
                s.within_bound
            )?;
        }
        let tight = r.weil_terms.iter().filter(|t| t.tight_ok).count();
        writeln!(
            out,
            "inner sums within 2d sqrt p + 1: {}/{} ({} within 2d sqrt p)",
            r.weil_terms.iter().filter(|t| t.ok).count(),
            r.weil_terms.len(),
            tight
        )?;
        writeln!(
            out,
            "qualifying roots: {} (sum over j: {})",
            doc.qualifying_roots, r.orthogonality_total
        )?;
        writeln!(out, "identity: {}", verdict(doc.identity_ok))?;
        writeln!(out, "bound: {}", verdict(doc.bound_ok))?;
        writeln!(out, "inner bounds: {}", verdict(doc.weil_ok))?;
        writeln!(out, "count: {}", verdict(doc.count_ok))?;
    }
    Ok(if doc.all_ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct HadamardJson {
    p: u64,
    order: usize,
    hadamard: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<i8>>>,
}

pub fn hadamard(out: &mut dyn Write, p: u64, json: bool, matrix: bool) -> Outcome {
    let ctx = PrimeContext::new(p)?;
    let h = build_h(&ctx);
    let is_hadamard = hadamard_check(&h);
    if json {
        write_json(
            out,
            &HadamardJson {
                p,
                order: h.order(),
                hadamard: is_hadamard,
                matrix: matrix.then(|| h.rows().map(<[i8]>::to_vec).collect()),
            },
        )?;
    } else {
        writeln!(out, "p = {p}, order {}, hadamard: {is_hadamard}", h.order())?;
        if matrix {
            for row in h.rows() {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:+}")).collect();
                writeln!(out, "{}", cells.join(" "))?;
            }
        }
    }
    Ok(0)
}
