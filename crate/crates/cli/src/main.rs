use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hbf_cli::acceptance::{run_all, run_criterion, CRITERIA};
use hbf_cli::config::{resolve, Resolved};
use hbf_cli::manifest::RunManifest;
use hbf_core::dickson;
use hbf_core::expsums::{curve_points, kloosterman, kloosterman_all, weil_pair_resolve, weil_q, weil_q_all};
use hbf_core::family::{FamilyParams, LambdaMethod};
use hbf_core::field::FieldElement;
use hbf_core::poly::quintic_pattern;
use hbf_core::rnagell;

#[derive(Parser)]
#[command(name = "hbf", version, about = "Hyper-bent binomial family toolkit over GF(2^n)")]
struct Cli {
    /// key=value config file (keys: moduli, workers)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// modulus table file overriding the built-in one (also: HBF_MODULI)
    #[arg(long, global = true)]
    moduli: Option<PathBuf>,
    /// worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// seed for the randomized invariance samplers
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// write the result body to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// write the run manifest to a file instead of stderr
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// CSV output for tabular commands
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field contexts and the modulus table
    #[command(subcommand)]
    Field(FieldCmd),
    /// Kloosterman and Weil sums with curve counts
    #[command(subcommand)]
    Sums(SumsCmd),
    /// Quintic factor patterns
    #[command(subcommand)]
    Factor(FactorCmd),
    /// Dickson polynomials and their identity suites
    #[command(subcommand)]
    Dickson(DicksonCmd),
    /// The binomial family: search, checks, identities, spectra
    #[command(subcommand)]
    Hyperbent(HyperbentCmd),
    /// Generalized Ramanujan-Nagell equations
    #[command(subcommand)]
    Rnagell(RnagellCmd),
    /// Run the acceptance criteria and print the pass table
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Summarize a context: modulus, generator, group order factors
    Inspect {
        #[arg(long)]
        k: u32,
        /// hex modulus overriding the table entry
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Print the resolved modulus table
    Table,
}

#[derive(Args)]
struct DomainArgs {
    /// subfield degree the sum runs over
    #[arg(long)]
    m: u32,
    /// single element (hex), or --all for the whole subfield
    #[arg(long, conflicts_with = "all")]
    a: Option<String>,
    #[arg(long)]
    all: bool,
    /// host context degree (default: m)
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum SumsCmd {
    /// K_m(a)
    Kloosterman(DomainArgs),
    /// Q_m(a), a != 0
    Weil(DomainArgs),
    /// Full record {a_hex, K, Q, pattern, r, s, n1, n2} over GF(2^(2m))
    Record {
        #[arg(long)]
        m: u32,
        #[arg(long, conflicts_with = "all")]
        a: Option<String>,
        #[arg(long)]
        all: bool,
        /// force the 2^(2m)-point count even at 2m = 28
        #[arg(long)]
        full_n2: bool,
    },
}

#[derive(Subcommand)]
enum FactorCmd {
    /// Factor-degree pattern of x^5 + x + a^{-1} over GF(2^m)
    Quintic(DomainArgs),
}

#[derive(Subcommand)]
enum DicksonCmd {
    /// Coefficients of D_r over GF(2)
    Coeffs {
        #[arg(long)]
        r: u32,
    },
    /// Run the identity suites over GF(2^m)
    Verify {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum HyperbentCmd {
    /// Search (a, b) domains and emit cross-checked records
    Search {
        #[arg(long)]
        n: u32,
        /// restrict a to the half-degree subfield GF(2^(m/2))
        #[arg(long)]
        subfield_a: bool,
        /// b domain: "all", coordinates "c0c1c2c3", or a name like beta^2
        #[arg(long, default_value = "all")]
        b: String,
    },
    /// One (a, b) verdict under a chosen method
    Check {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// direct | s-sums | closed | definitional
        #[arg(long, default_value = "direct")]
        method: String,
    },
    /// Run the family identity suite
    VerifyIdentities {
        #[arg(long)]
        n: u32,
    },
    /// Export the Walsh spectrum: binary i32 little-endian plus a JSON sidecar
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        out_bin: PathBuf,
    },
}

#[derive(Subcommand)]
enum RnagellCmd {
    /// Solve D1 x^2 + D2 = eta^2 p^k for k <= kmax
    Solve {
        #[arg(long)]
        d1: u64,
        #[arg(long)]
        d2: u64,
        #[arg(long)]
        eta2: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 64)]
        kmax: u32,
    },
    /// Admissible Kloosterman values on the half-degree subfield
    Link {
        #[arg(long)]
        m1: u32,
        #[arg(long, default_value_t = 64)]
        kmax: u32,
    },
}

#[derive(Args)]
struct ReproduceArgs {
    /// run every criterion
    #[arg(long, conflicts_with = "criterion")]
    all: bool,
    /// run one criterion by number
    #[arg(long)]
    criterion: Option<u32>,
    /// list criteria without running
    #[arg(long)]
    list: bool,
}

struct Output {
    lines: Vec<String>,
    stages: Vec<(String, Duration, bool)>,
}

impl Output {
    fn new() -> Output {
        Output {
            lines: Vec::new(),
            stages: Vec::new(),
        }
    }

    fn push_json(&mut self, v: serde_json::Value) {
        self.lines.push(v.to_string());
    }

    fn stage(&mut self, name: impl Into<String>, wall: Duration, pass: bool) {
        self.stages.push((name.into(), wall, pass));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match run(cli, argv.join(" ")) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, command_line: String) -> Result<bool> {
    let res = resolve(
        cli.config.as_deref(),
        cli.moduli.as_deref(),
        cli.workers,
        cli.seed,
    )?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(res.workers)
        .build_global();

    let t0 = Instant::now();
    let mut out = Output::new();
    let body_pass = dispatch(&cli.cmd, &res, cli.csv, &mut out)?;
    if out.stages.is_empty() {
        out.stage("run", t0.elapsed(), body_pass);
    }

    let mut manifest = RunManifest::new(command_line, &res.moduli_text, res.seed, res.workers);
    for (name, wall, pass) in &out.stages {
        manifest.push_stage(name.clone(), *wall, *pass);
    }

    let body = if out.lines.is_empty() {
        String::new()
    } else {
        out.lines.join("\n") + "\n"
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
        }
    }
    match &cli.manifest {
        Some(path) => std::fs::write(path, manifest.to_json() + "\n")?,
        None => eprintln!("{}", manifest.to_json()),
    }
    Ok(manifest.all_pass())
}

fn parse_a_domain(res: &Resolved, args: &DomainArgs) -> Result<(std::sync::Arc<hbf_core::FieldCtx>, Vec<FieldElement>)> {
    let n = args.n.unwrap_or(args.m);
    if n % args.m != 0 {
        bail!("--m {} must divide the context degree {}", args.m, n);
    }
    let ctx = res.ctx(n)?;
    let domain = if args.all {
        ctx.subfield_elements(args.m)?.collect()
    } else {
        let hex = args.a.as_deref().ok_or_else(|| anyhow!("need --a HEX or --all"))?;
        vec![ctx.parse_element(hex)?]
    };
    Ok((ctx, domain))
}

fn dispatch(cmd: &Cmd, res: &Resolved, csv: bool, out: &mut Output) -> Result<bool> {
    match cmd {
        Cmd::Field(FieldCmd::Inspect { k, modulus }) => {
            let modulus = match modulus {
                Some(h) => Some(u64::from_str_radix(h.trim_start_matches("0x"), 16)?),
                None => res.moduli.get(k).copied(),
            };
            let ctx = hbf_core::FieldCtx::new(*k, modulus)?;
            out.push_json(json!({
                "schema": 1,
                "k": k,
                "modulus_hex": format!("{:x}", ctx.modulus()),
                "generator_hex": ctx.generator().to_hex(),
                "order": ctx.order(),
                "order_factors": ctx.group_order_factors(),
            }));
            Ok(true)
        }
        Cmd::Field(FieldCmd::Table) => {
            for (k, v) in &res.moduli {
                out.lines.push(format!("{k}: {v:x}"));
            }
            Ok(true)
        }
        Cmd::Sums(SumsCmd::Kloosterman(args)) => {
            let (ctx, domain) = parse_a_domain(res, args)?;
            if csv {
                out.lines.push("a_hex,K".into());
            }
            if args.all {
                for (a, k) in kloosterman_all(&ctx, args.m)? {
                    push_row(out, csv, &[("a_hex", json!(a.to_hex())), ("K", json!(k))]);
                }
            } else {
                for a in domain {
                    let k = kloosterman(&ctx, args.m, a)?;
                    push_row(out, csv, &[("a_hex", json!(a.to_hex())), ("K", json!(k))]);
                }
            }
            Ok(true)
        }
        Cmd::Sums(SumsCmd::Weil(args)) => {
            let (ctx, domain) = parse_a_domain(res, args)?;
            if csv {
                out.lines.push("a_hex,Q".into());
            }
            if args.all {
                for (a, q) in weil_q_all(&ctx, args.m)? {
                    push_row(out, csv, &[("a_hex", json!(a.to_hex())), ("Q", json!(q))]);
                }
            } else {
                for a in domain {
                    let q = weil_q(&ctx, args.m, a)?;
                    push_row(out, csv, &[("a_hex", json!(a.to_hex())), ("Q", json!(q))]);
                }
            }
            Ok(true)
        }
        Cmd::Sums(SumsCmd::Record { m, a, all, full_n2 }) => {
            let big = 2 * m;
            let ctx = res.ctx(big)?;
            let domain: Vec<FieldElement> = if *all {
                ctx.subfield_elements(*m)?.skip(1).collect()
            } else {
                let hex = a.as_deref().ok_or_else(|| anyhow!("need --a HEX or --all"))?;
                vec![ctx.parse_element(hex)?]
            };
            let with_n2 = big <= 24 || *full_n2;
            if csv {
                out.lines.push("a_hex,K,Q,pattern,r,s,n1,n2".into());
            }
            for a in domain {
                if a.is_zero() {
                    bail!("records need a != 0");
                }
                let k = kloosterman(&ctx, *m, a)?;
                let q = weil_q(&ctx, *m, a)?;
                let pat = quintic_pattern(&ctx, *m, a)?;
                let pair = weil_pair_resolve(&pat, *m, q)?;
                let n1 = curve_points(&ctx, *m, a)?;
                if n1 != (1i64 << m) + 1 + pair.r {
                    bail!("cross-check failure: n1 vs r at a={}", a.to_hex());
                }
                let n2 = if with_n2 {
                    let v = curve_points(&ctx, big, a)?;
                    if v != (1i64 << big) + 1 + 2 * pair.s - pair.r * pair.r {
                        bail!("cross-check failure: n2 vs (r, s) at a={}", a.to_hex());
                    }
                    Some(v)
                } else {
                    None
                };
                push_row(
                    out,
                    csv,
                    &[
                        ("a_hex", json!(a.to_hex())),
                        ("K", json!(k)),
                        ("Q", json!(q)),
                        ("pattern", json!(pat.to_string())),
                        ("r", json!(pair.r)),
                        ("s", json!(pair.s)),
                        ("n1", json!(n1)),
                        ("n2", json!(n2)),
                    ],
                );
            }
            Ok(true)
        }
        Cmd::Factor(FactorCmd::Quintic(args)) => {
            let (ctx, domain) = parse_a_domain(res, args)?;
            if csv {
                out.lines.push("a_hex,pattern".into());
            }
            for a in domain {
                if a.is_zero() {
                    continue;
                }
                let pat = quintic_pattern(&ctx, args.m, a)?;
                push_row(
                    out,
                    csv,
                    &[("a_hex", json!(a.to_hex())), ("pattern", json!(pat.to_string()))],
                );
            }
            Ok(true)
        }
        Cmd::Dickson(DicksonCmd::Coeffs { r }) => {
            let d = dickson::dickson(*r);
            let mut terms = Vec::new();
            for j in 0..=d.degree() {
                if (d.coeff_bits() >> j) & 1 == 1 {
                    terms.push(if j == 1 { "x".to_string() } else { format!("x^{j}") });
                }
            }
            out.push_json(json!({
                "schema": 1,
                "r": r,
                "degree": d.degree(),
                "coeffs_hex": format!("{:x}", d.coeff_bits()),
                "poly": if terms.is_empty() { "0".to_string() } else { terms.join(" + ") },
            }));
            Ok(true)
        }
        Cmd::Dickson(DicksonCmd::Verify { m }) => {
            let ctx = res.ctx(*m)?;
            let t0 = Instant::now();
            let report = dickson::identity_report(&ctx)?;
            let mut all = true;
            for (name, pass) in &report {
                all &= pass;
                out.push_json(json!({"schema": 1, "check": name, "pass": pass}));
            }
            out.stage("dickson verify", t0.elapsed(), all);
            Ok(all)
        }
        Cmd::Hyperbent(cmd) => hyperbent_cmd(cmd, res, csv, out),
        Cmd::Rnagell(RnagellCmd::Solve { d1, d2, eta2, p, kmax }) => {
            let eq = rnagell::RnEquation::new(*d1, *d2, *eta2, *p, *kmax)?;
            let sols = rnagell::solve(&eq);
            out.push_json(json!({
                "schema": 1,
                "equation": eq,
                "solutions": sols,
                "complete_up_to_kmax": true,
            }));
            Ok(true)
        }
        Cmd::Rnagell(RnagellCmd::Link { m1, kmax }) => {
            let report = rnagell::kloosterman_admissible(*m1, *kmax)?;
            out.push_json(json!({"schema": 1, "report": report}));
            Ok(true)
        }
        Cmd::Reproduce(args) => reproduce_cmd(args, res, out),
    }
}

fn hyperbent_cmd(cmd: &HyperbentCmd, res: &Resolved, csv: bool, out: &mut Output) -> Result<bool> {
    match cmd {
        HyperbentCmd::Search { n, subfield_a, b } => {
            let fam = FamilyParams::with_ctx(res.ctx(*n)?)?;
            let d = if *subfield_a { fam.m1() } else { fam.m() };
            let a_dom: Vec<FieldElement> = fam.ctx().subfield_elements(d)?.collect();
            let b_dom: Vec<FieldElement> = if b == "all" {
                fam.all_b().to_vec()
            } else {
                vec![fam.parse_b(b)?]
            };
            let t0 = Instant::now();
            let recs = fam.search(&a_dom, &b_dom)?;
            out.stage("search", t0.elapsed(), true);
            if csv {
                out.lines.push(
                    "n,a_hex,b_coords,b_name,K,Q,pattern,lambda_direct,lambda_s_sums,lambda_closed,hyperbent,ps_ap"
                        .into(),
                );
                for r in &recs {
                    out.lines.push(format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        r.n,
                        r.a_hex,
                        r.b_coords,
                        r.b_name,
                        r.k,
                        r.q.map_or(String::new(), |v| v.to_string()),
                        r.pattern.clone().unwrap_or_default(),
                        r.lambda_direct,
                        r.lambda_s_sums,
                        r.lambda_closed.map_or(String::new(), |v| v.to_string()),
                        r.hyperbent,
                        r.ps_ap
                    ));
                }
            } else {
                for r in &recs {
                    out.lines.push(serde_json::to_string(r)?);
                }
            }
            Ok(true)
        }
        HyperbentCmd::Check { n, a, b, method } => {
            let fam = FamilyParams::with_ctx(res.ctx(*n)?)?;
            let a = fam.ctx().parse_element(a)?;
            let b = fam.parse_b(b)?;
            let meth = LambdaMethod::parse(method)?;
            let verdict = fam.is_hyperbent(a, b, meth)?;
            let lambda = match meth {
                LambdaMethod::Direct => Some(fam.lambda_direct(a, b)?),
                LambdaMethod::SSums => Some(fam.lambda_from_s_sums(a, b)?),
                LambdaMethod::Closed => Some(fam.lambda_from_kq(a, b)?),
                LambdaMethod::Definitional => None,
            };
            out.push_json(json!({
                "schema": 1,
                "n": n,
                "a_hex": a.to_hex(),
                "b_coords": fam.format_b_coords(b)?,
                "b_name": fam.format_b_name(b)?,
                "method": method,
                "lambda": lambda,
                "hyperbent": verdict,
                "ps_ap": hbf_core::boolfn::ps_ap_flag(fam.ctx(), b)?,
            }));
            Ok(true)
        }
        HyperbentCmd::VerifyIdentities { n } => {
            let fam = FamilyParams::with_ctx(res.ctx(*n)?)?;
            let t0 = Instant::now();
            let report = fam.verify_identities()?;
            let mut all = true;
            for (name, pass) in &report {
                all &= pass;
                out.push_json(json!({"schema": 1, "check": name, "pass": pass}));
            }
            out.stage("verify-identities", t0.elapsed(), all);
            Ok(all)
        }
        HyperbentCmd::Spectrum { n, a, b, out_bin } => {
            let fam = FamilyParams::with_ctx(res.ctx(*n)?)?;
            let a = fam.ctx().parse_element(a)?;
            let b = fam.parse_b(b)?;
            let f = fam.member(a, b)?;
            let sp = f.walsh_spectrum()?;
            let mut bytes = Vec::with_capacity(sp.values.len() * 4);
            for v in &sp.values {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            std::fs::write(out_bin, &bytes)
                .with_context(|| format!("writing {}", out_bin.display()))?;
            let sidecar = json!({
                "schema": 1,
                "n": n,
                "modulus_hex": format!("{:x}", fam.ctx().modulus()),
                "a_hex": a.to_hex(),
                "b_coords": fam.format_b_coords(b)?,
                "epsilon": f.epsilon(),
                "terms": f.terms().iter().map(|t| json!({
                    "exponent": t.exponent(),
                    "coefficient_hex": t.coefficient().to_hex(),
                    "coset_size": t.coset_size(),
                })).collect::<Vec<_>>(),
                "max_abs": sp.max_abs,
            });
            let sidecar_path = out_bin.with_extension("json");
            std::fs::write(&sidecar_path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
            out.push_json(json!({
                "schema": 1,
                "written": out_bin.display().to_string(),
                "sidecar": sidecar_path.display().to_string(),
                "values": sp.values.len(),
                "max_abs": sp.max_abs,
            }));
            Ok(true)
        }
    }
}

fn reproduce_cmd(args: &ReproduceArgs, res: &Resolved, out: &mut Output) -> Result<bool> {
    if args.list {
        for (id, name, limit) in CRITERIA {
            out.lines.push(format!(
                "{id:>2}  {}  {name}",
                limit.map_or("   -".to_string(), |l| format!("{l:>3}s"))
            ));
        }
        return Ok(true);
    }
    let outcomes = if let Some(id) = args.criterion {
        vec![run_criterion(id, res)?]
    } else {
        run_all(res)?
    };
    let mut all = true;
    for o in &outcomes {
        all &= o.pass;
        out.lines.push(format!(
            "criterion {:>2}  {}  {:>8.2?}{}  {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.wall,
            o.limit
                .map_or("          ".to_string(), |l| format!(" (limit {l:>4.0?})")),
            o.name
        ));
        out.lines.push(format!("              {}", o.detail));
        out.stage(format!("criterion {}", o.id), o.wall, o.pass);
    }
    out.lines.push(if all {
        "all criteria passed".to_string()
    } else {
        "CRITERIA FAILED".to_string()
    });
    Ok(all)
}

fn push_row(out: &mut Output, csv: bool, fields: &[(&str, serde_json::Value)]) {
    if csv {
        let row: Vec<String> = fields
            .iter()
            .map(|(_, v)| match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            })
            .collect();
        out.lines.push(row.join(","));
    } else {
        let mut obj = serde_json::Map::new();
        obj.insert("schema".into(), json!(1));
        for (k, v) in fields {
            obj.insert((*k).into(), v.clone());
        }
        out.push_json(serde_json::Value::Object(obj));
    }
}
