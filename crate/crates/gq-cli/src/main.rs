//! Command line front end: construct the corpus quadrangles, validate
//! structures, compute automorphism groups, hunt Singer groups, verify
//! multiplier arithmetic, run parameter sweeps, and replay the whole battery
//! of paper-anchored checks.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gq_core::bounds::{cor34_inequality_sweep, feasible_parameters, hs_filter, hs_final_sweep};
use gq_core::centralizers::{
    alt_group, brute_max_centralizer, centralizer_formula, exceeds_threshold, m11_group,
    order_of_simple, psl_group, psp4_group, Epsilon, SimpleGroupSpec, Threshold,
};
use gq_core::constructions::{
    construct_dual_grid, construct_elliptic_q5, construct_grid, construct_w, payne_derive,
};
use gq_core::geoaut::automorphism_group;
use gq_core::incidence::{validate_gq, IncidenceStructure};
use gq_core::perm::{PermError, PermGroup, DEFAULT_CAP};
use gq_core::singer::{
    check_cor34, check_prop31, check_prop32, classify_theorem33, find_singer_groups,
    make_context, multipliers_geometry_side, multipliers_group_side, MultiplierRecord,
    SingerContext, SingerSearchOptions,
};

mod verify;

#[derive(Parser)]
#[command(name = "gq", version, about = "generalized quadrangle workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a named structure and emit the JSON interchange form
    Construct {
        /// one of: w2, w3, w4, q5m2, q5m3, payne-w4, grid:a,b, dualgrid:a,b
        name: String,
    },
    /// Validate a structure file against the quadrangle axioms
    Validate { file: String },
    /// Compute the full automorphism group of a structure
    Aut { file: String },
    /// Find point-regular subgroups of the automorphism group
    Singer {
        file: String,
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute and verify the multiplier group of a Singer context
    Multipliers {
        file: String,
        /// which regular subgroup class to use, by index into the singer output
        #[arg(long, default_value_t = 0)]
        group_index: usize,
        /// base point of the identification
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact-arithmetic parameter sweeps
    SweepParams {
        #[arg(long, value_enum)]
        check: SweepKind,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 4)]
        min: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orders, centralizer formulas and thresholds for simple groups
    Centralizers {
        #[arg(long)]
        family: String,
        /// family parameters, comma separated (e.g. "3,2" for PSL(3,2))
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum)]
        threshold: Option<ThresholdArg>,
        /// add a brute-force cross-check where a permutation representation exists
        #[arg(long)]
        brute: bool,
    },
    /// Run every paper-anchored check and report pass/fail per check
    VerifyPaper {
        /// restrict to the fast subset (skips the large automorphism groups)
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Auto,
    Group,
    Geometry,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Feasible,
    Hs,
    HsFinal,
    Cor34,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Quarter,
    Half,
    ThreeQuarters,
}

impl From<ThresholdArg> for Threshold {
    fn from(t: ThresholdArg) -> Threshold {
        match t {
            ThresholdArg::Quarter => Threshold::Quarter,
            ThresholdArg::Half => Threshold::Half,
            ThresholdArg::ThreeQuarters => Threshold::ThreeQuarters,
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}

#[derive(Serialize)]
struct Manifest {
    tool_version: &'static str,
    subcommand: String,
    args: Vec<String>,
    seed: u64,
    inputs: Vec<InputDigest>,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    digest: String,
}

impl Manifest {
    fn new(subcommand: &str, args: Vec<String>, seed: u64) -> Manifest {
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            args,
            seed,
            inputs: Vec::new(),
        }
    }
}

fn read_input(path: &str) -> Result<(String, Vec<u8>)> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(("<stdin>".to_string(), buf))
    } else {
        let bytes = fs::read(path).with_context(|| format!("reading {path}"))?;
        Ok((path.to_string(), bytes))
    }
}

fn load_structure(path: &str, manifest: &mut Manifest) -> Result<IncidenceStructure> {
    let (name, bytes) = read_input(path)?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    let structure = IncidenceStructure::from_json(&text)?;
    manifest.inputs.push(InputDigest { path: name, digest: fnv1a64(&bytes) });
    Ok(structure)
}

fn emit(out: &Option<String>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn construct_by_name(name: &str) -> Result<IncidenceStructure> {
    let parse_pair = |spec: &str| -> Result<(usize, usize)> {
        let (a, b) = spec
            .split_once(',')
            .ok_or_else(|| anyhow!("expected two comma-separated parameters, got {spec:?}"))?;
        Ok((a.trim().parse()?, b.trim().parse()?))
    };
    if let Some(spec) = name.strip_prefix("grid:") {
        let (a, b) = parse_pair(spec)?;
        return Ok(construct_grid(a, b));
    }
    if let Some(spec) = name.strip_prefix("dualgrid:") {
        let (a, b) = parse_pair(spec)?;
        return Ok(construct_dual_grid(a, b));
    }
    match name {
        "w2" => Ok(construct_w(2)?),
        "w3" => Ok(construct_w(3)?),
        "w4" => Ok(construct_w(4)?),
        "q5m2" => Ok(construct_elliptic_q5(2)?),
        "q5m3" => Ok(construct_elliptic_q5(3)?),
        "payne-w4" => {
            let w4 = validate_gq(&construct_w(4)?)?;
            Ok(payne_derive(&w4, 0)?.structure().clone())
        }
        other => bail!(
            "unknown construction {other:?}; expected w2, w3, w4, q5m2, q5m3, payne-w4, \
             grid:a,b or dualgrid:a,b"
        ),
    }
}

fn multiplier_json(ctx: &SingerContext, rec: &MultiplierRecord) -> serde_json::Value {
    let prop31 = check_prop31(ctx, rec);
    let prop32 = check_prop32(ctx, rec);
    let case = classify_theorem33(ctx, rec);
    let cor34 = check_cor34(ctx, rec);
    json!({
        "order": rec.order,
        "h_order": rec.h.len(),
        "x_cap_delta": rec.x_cap_delta,
        "c": rec.c,
        "thm33_case": case.as_ref().map(|c| c.tag()).unwrap_or("unverified"),
        "prop31": prop31.is_ok(),
        "prop32": match &prop32 {
            Ok(outcome) => serde_json::to_value(outcome).unwrap_or_default(),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "cor34": match &cor34 {
            Ok(outcome) => serde_json::to_value(outcome).unwrap_or_default(),
            Err(e) => json!({ "error": e.to_string() }),
        },
    })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Construct { name } => {
            let structure = construct_by_name(&name)?;
            emit(&cli.out, &structure.to_json())?;
            Ok(0)
        }
        Command::Validate { file } => {
            let mut manifest = Manifest::new("validate", vec![file.clone()], 0);
            let structure = load_structure(&file, &mut manifest)?;
            let payload = match validate_gq(&structure) {
                Ok(gq) => json!({
                    "schema": 1,
                    "manifest": manifest,
                    "valid": true,
                    "order": { "s": gq.order().s, "t": gq.order().t },
                    "thick": gq.order().is_thick(),
                    "points": gq.point_count(),
                    "lines": gq.line_count(),
                }),
                Err(e) => json!({
                    "schema": 1,
                    "manifest": manifest,
                    "valid": false,
                    "error": e.to_string(),
                }),
            };
            let ok = payload["valid"].as_bool().unwrap_or(false);
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Aut { file } => {
            let mut manifest = Manifest::new("aut", vec![file.clone()], 0);
            let structure = load_structure(&file, &mut manifest)?;
            let aut = automorphism_group(&structure)?;
            let order = aut.order(DEFAULT_CAP)?;
            let gens: Vec<&[usize]> = aut.generators().iter().map(|g| g.images()).collect();
            let payload = json!({
                "schema": 1,
                "manifest": manifest,
                "order": order,
                "generators": gens,
            });
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(0)
        }
        Command::Singer { file, budget, seed } => {
            let mut manifest =
                Manifest::new("singer", vec![file.clone(), format!("--budget={budget}")], seed);
            let structure = load_structure(&file, &mut manifest)?;
            let gq = validate_gq(&structure)?;
            let aut = automorphism_group(&structure)?;
            let options = SingerSearchOptions { budget, cap: DEFAULT_CAP, seed };
            let classes = find_singer_groups(&gq, &aut, options)?;
            let entries: Vec<serde_json::Value> = classes
                .iter()
                .map(|g| {
                    json!({
                        "order": g.order(DEFAULT_CAP).unwrap_or(0),
                        "generators": g
                            .generators()
                            .iter()
                            .map(|p| p.images().to_vec())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let payload = json!({
                "schema": 1,
                "manifest": manifest,
                "aut_order": aut.order(DEFAULT_CAP)?,
                "regular_subgroup_classes": entries,
            });
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(0)
        }
        Command::Multipliers { file, group_index, base, strategy, seed } => {
            let mut manifest = Manifest::new(
                "multipliers",
                vec![file.clone(), format!("--group-index={group_index}"), format!("--base={base}")],
                seed,
            );
            let structure = load_structure(&file, &mut manifest)?;
            let gq = validate_gq(&structure)?;
            let aut = automorphism_group(&structure)?;
            let options = SingerSearchOptions { seed, ..SingerSearchOptions::default() };
            let classes = find_singer_groups(&gq, &aut, options)?;
            let group = classes.get(group_index).ok_or_else(|| {
                anyhow!("group index {group_index} out of range ({} classes found)", classes.len())
            })?;
            let ctx = make_context(&gq, group, base)?;
            let (records, used) = match strategy {
                Strategy::Group => (multipliers_group_side(&ctx, 1_000_000)?, "group"),
                Strategy::Geometry => {
                    (multipliers_geometry_side(&ctx, &aut, DEFAULT_CAP)?, "geometry")
                }
                Strategy::Auto => match multipliers_group_side(&ctx, 1_000_000) {
                    Ok(records) => (records, "group"),
                    Err(gq_core::singer::SingerError::Perm(PermError::CapExceeded { .. })) => {
                        (multipliers_geometry_side(&ctx, &aut, DEFAULT_CAP)?, "geometry")
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            let reports: Vec<serde_json::Value> =
                records.iter().map(|rec| multiplier_json(&ctx, rec)).collect();
            let all_verified = reports.iter().all(|r| {
                r["prop31"].as_bool() == Some(true)
                    && r["thm33_case"].as_str() != Some("unverified")
                    && r["prop32"].get("error").is_none()
                    && r["cor34"].get("error").is_none()
            });
            let payload = json!({
                "schema": 1,
                "manifest": manifest,
                "base_point": base,
                "group_order": ctx.group_order(),
                "delta_size": ctx.delta().len(),
                "strategy": used,
                "multiplier_count": records.len(),
                "multipliers": reports,
                "all_verified": all_verified,
            });
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(if all_verified { 0 } else { 1 })
        }
        Command::SweepParams { check, max, min, format } => {
            let manifest = Manifest::new(
                "sweep-params",
                vec![format!("--max={max}"), format!("--min={min}")],
                0,
            );
            let (payload, csv, pass) = run_sweep(check, min, max)?;
            match format {
                Format::Json => {
                    let wrapped = json!({ "schema": 1, "manifest": manifest, "result": payload });
                    emit(&cli.out, &serde_json::to_string(&wrapped)?)?;
                }
                Format::Csv => emit(&cli.out, csv.trim_end())?,
            }
            Ok(if pass { 0 } else { 1 })
        }
        Command::Centralizers { family, params, threshold, brute } => {
            let manifest = Manifest::new(
                "centralizers",
                vec![format!("--family={family}"), format!("--params={params}")],
                0,
            );
            let spec = parse_spec(&family, &params)?;
            spec.validate()?;
            let order = order_of_simple(&spec)?;
            let formula = centralizer_formula(&spec);
            let mut payload = json!({
                "schema": 1,
                "manifest": manifest,
                "spec": spec.to_string(),
                "order": order.to_string(),
            });
            match &formula {
                Ok(est) => {
                    payload["centralizer"] = serde_json::to_value(est)?;
                    if let Some(t) = threshold {
                        let thr: Threshold = t.into();
                        payload["exceeds_threshold"] =
                            json!(exceeds_threshold(&est.big_value, &order, thr));
                    }
                }
                Err(e) => payload["centralizer_error"] = json!(e.to_string()),
            }
            if brute {
                let group = brute_representation(&spec)?;
                let (max, witness) = brute_max_centralizer(&group, DEFAULT_CAP)?;
                payload["brute_max_centralizer"] = json!(max);
                payload["brute_witness_order"] = json!(witness.order());
            }
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(0)
        }
        Command::VerifyPaper { quick } => {
            let manifest = Manifest::new(
                "verify-paper",
                if quick { vec!["--quick".into()] } else { vec![] },
                0,
            );
            let checks = verify::run_checks(quick);
            let pass = checks.iter().all(|c| c.pass);
            let payload = json!({
                "schema": 1,
                "manifest": manifest,
                "quick": quick,
                "checks": checks,
                "pass": pass,
            });
            emit(&cli.out, &serde_json::to_string(&payload)?)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

type SweepOutput = (serde_json::Value, String, bool);

fn run_sweep(check: SweepKind, min: u64, max: u64) -> Result<SweepOutput> {
    Ok(match check {
        SweepKind::Feasible => {
            let reports: Vec<_> = (1..=max)
                .flat_map(|s| (1..=max).map(move |t| (s, t)))
                .map(|(s, t)| feasible_parameters(s, t))
                .collect();
            let mut csv = String::from("s,t,points,lines,higman,divisibility\n");
            for r in &reports {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.s, r.t, r.point_count, r.line_count, r.higman_ok, r.divisibility_ok
                ));
            }
            (json!({ "reports": reports }), csv, true)
        }
        SweepKind::Hs => {
            let reports: Vec<_> = (2..=max)
                .flat_map(|s| (2..=max).map(move |t| (s, t)))
                .map(|(s, t)| hs_filter(s, t))
                .collect();
            let passing: Vec<_> =
                reports.iter().filter(|r| r.passes()).map(|r| (r.s, r.t)).collect();
            let mut csv = String::from("s,t,divisibility,range,coprime,passes\n");
            for r in &reports {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.s,
                    r.t,
                    r.divisibility_ok,
                    r.range_ok,
                    r.coprime_ok,
                    r.passes()
                ));
            }
            (json!({ "passing": passing, "reports_total": reports.len() }), csv, true)
        }
        SweepKind::HsFinal => {
            let report = hs_final_sweep(max, &[2, 3]);
            let pass = report.passes();
            let csv = format!(
                "max,solutions,identity_ok\n{},{},{}\n",
                report.max,
                report.solutions.len(),
                report.identity_ok
            );
            (serde_json::to_value(&report)?, csv, pass)
        }
        SweepKind::Cor34 => {
            let report = cor34_inequality_sweep(min.max(4), max);
            let pass = report.passes();
            let csv = format!(
                "min,max,pairs_checked,failures\n{},{},{},{}\n",
                report.min,
                report.max,
                report.pairs_checked,
                report.failures.len()
            );
            (serde_json::to_value(&report)?, csv, pass)
        }
    })
}

fn parse_spec(family: &str, params: &str) -> Result<SimpleGroupSpec> {
    let nums: Vec<u64> = if params.trim().is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|p| p.trim().parse::<u64>().map_err(Into::into))
            .collect::<Result<_>>()?
    };
    let one = || -> Result<u64> {
        nums.first().copied().ok_or_else(|| anyhow!("family {family} needs one parameter"))
    };
    let two = || -> Result<(u64, u64)> {
        if nums.len() == 2 {
            Ok((nums[0], nums[1]))
        } else {
            bail!("family {family} needs two parameters n,q")
        }
    };
    Ok(match family.to_ascii_lowercase().as_str() {
        "alt" => SimpleGroupSpec::Alt { n: one()? as usize },
        "psl" => {
            let (n, q) = two()?;
            SimpleGroupSpec::Psl { n: n as usize, q }
        }
        "psu" => {
            let (n, q) = two()?;
            SimpleGroupSpec::Psu { n: n as usize, q }
        }
        "psp" => {
            let (n, q) = two()?;
            SimpleGroupSpec::Psp { n: n as usize, q }
        }
        "omega" => {
            let (n, q) = two()?;
            SimpleGroupSpec::OmegaOdd { n: n as usize, q }
        }
        "pomega+" => {
            let (n, q) = two()?;
            SimpleGroupSpec::POmega { eps: Epsilon::Plus, n: n as usize, q }
        }
        "pomega-" => {
            let (n, q) = two()?;
            SimpleGroupSpec::POmega { eps: Epsilon::Minus, n: n as usize, q }
        }
        "sz" => SimpleGroupSpec::Sz { q: one()? },
        "g2" => SimpleGroupSpec::G2 { q: one()? },
        "2f4" => SimpleGroupSpec::TwoF4 { q: one()? },
        "e8" => SimpleGroupSpec::E8 { q: one()? },
        "m11" => SimpleGroupSpec::M11,
        other => bail!("unknown family {other}"),
    })
}

fn brute_representation(spec: &SimpleGroupSpec) -> Result<PermGroup> {
    Ok(match spec {
        SimpleGroupSpec::Alt { n } if *n <= 9 => alt_group(*n)?,
        SimpleGroupSpec::Psl { n, q } if *n <= 3 && *q <= 11 => psl_group(*n, *q)?,
        SimpleGroupSpec::Psp { n: 2, q: 3 } => psp4_group(3)?,
        SimpleGroupSpec::M11 => m11_group()?,
        other => bail!("no enumerable permutation representation for {other}"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
