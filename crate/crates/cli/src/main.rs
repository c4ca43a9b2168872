//! Command-line front end for `liftcert`.
//!
//! Exit codes: 0 certified or success, 2 not a lifting, 3 valid lifting whose
//! residue is reducible or excluded, 4 input or configuration error,
//! 5 resource guard exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use liftcert::exactnum::format_rational;
use liftcert::finitefield::{ResiduePolyJson, DEFAULT_CANDIDATE_LIMIT};
use liftcert::lifting::Verdict;
use liftcert::{
    brute_factor, certify_irreducible, check_lifting, generate_lifting, parse_polynomial, suggest_pairs, CertifyOptions,
    GenerateError, LiftingCertificate, OracleError, OracleLimits, PairConfig, PairFile, Prime, QPoly, ResiduePoly,
};

const OK: u8 = 0;
const NOT_A_LIFTING: u8 = 2;
const EXCLUDED: u8 = 3;
const INPUT_ERROR: u8 = 4;
const GUARD: u8 = 5;

#[derive(Parser)]
#[command(name = "liftcert", version, about = "Irreducibility certificates for polynomials over Q via residue liftings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Prime p; required without --pairs, must agree with the pair file otherwise.
    #[arg(long)]
    prime: Option<u64>,
    /// Pair file (JSON); defaults to Gauss pairs in every variable.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Comma-separated variable names, in coordinate order.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Candidate budget for exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_LIMIT)]
    limit: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the lifting conditions and certify irreducibility.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Also run the brute-force factorization oracle and record the outcome.
        #[arg(long)]
        oracle: bool,
        /// File with one polynomial per line; entries are certified in parallel.
        #[arg(long, conflicts_with = "polynomial")]
        each: Option<PathBuf>,
        polynomial: Option<String>,
    },
    /// Print the phi-adic expansion table.
    Expand {
        #[command(flatten)]
        common: Common,
        polynomial: String,
    },
    /// Print w(f), the marginal values and the contributing indices.
    Value {
        #[command(flatten)]
        common: Common,
        polynomial: String,
    },
    /// Print the normalized residue polynomial T.
    Residue {
        #[command(flatten)]
        common: Common,
        /// Degree vector t; derived from the degrees of f when omitted.
        #[arg(long, value_delimiter = ',')]
        t: Vec<u32>,
        polynomial: String,
    },
    /// Build a lifting of the residue polynomial stored in a JSON file.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Seed for higher-value noise terms; 0 disables noise.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        residue: PathBuf,
    },
    /// Factor over Q by Kronecker's method.
    FactorOracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = OracleLimits::default().max_degree)]
        max_degree: u32,
        polynomial: String,
    },
    /// Print candidate pair files, one JSON document per line.
    Suggest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 16)]
        max: usize,
        polynomial: String,
    },
}

/// An error with its exit code, printed on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: INPUT_ERROR, message: message.to_string() }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn checked_vars(common: &Common) -> Result<Vec<String>, Failure> {
    let vars: Vec<String> = common.vars.iter().map(|v| v.trim().to_string()).collect();
    if vars.is_empty() {
        return Err(Failure::input("--vars is required (e.g. --vars x,y)"));
    }
    for (i, v) in vars.iter().enumerate() {
        let identifier = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !identifier {
            return Err(Failure::input(format!("invalid variable name {v:?}")));
        }
        if vars[..i].contains(v) {
            return Err(Failure::input(format!("variable {v:?} listed twice")));
        }
    }
    Ok(vars)
}

fn parse(text: &str, vars: &[String]) -> Result<QPoly, Failure> {
    parse_polynomial(text, vars).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.pos));
        Failure::input(format!("{e}\n  {text}\n  {caret}"))
    })
}

fn config(common: &Common, nvars: usize) -> Result<PairConfig, Failure> {
    let file = match &common.pairs {
        Some(path) => {
            let file: PairFile =
                serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            if let Some(p) = common.prime {
                if p != file.prime.get() {
                    return Err(Failure::input(format!("--prime {p} disagrees with the pair file prime {}", file.prime)));
                }
            }
            file
        }
        None => {
            let p = common.prime.ok_or_else(|| Failure::input("--prime is required without --pairs"))?;
            let prime = Prime::new(p).map_err(Failure::input)?;
            PairFile { prime, pairs: vec![liftcert::MinimalPairSpec::gauss(); nvars] }
        }
    };
    if file.pairs.len() != nvars {
        return Err(Failure::input(format!("{} pairs for {nvars} variables", file.pairs.len())));
    }
    PairConfig::from_file(&file, common.limit).map_err(|e| match e {
        liftcert::ConfigError::Guard(g) => Failure { code: GUARD, message: g.to_string() },
        other => Failure::input(other),
    })
}

fn verdict_code(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::Certified => OK,
        Verdict::NotALifting(_) => NOT_A_LIFTING,
        _ => EXCLUDED,
    }
}

fn certificate_text(cert: &LiftingCertificate) -> String {
    let mut out = vec![format!("input: {}", cert.input), format!("prime: {}", cert.prime)];
    for row in &cert.table {
        out.push(format!(
            "  {}: phi = {}, m = {}, lambda = {}, e = {}, N = {}, h = {}",
            row.var, row.phi, row.m, row.lambda, row.e, row.n_exp, row.h
        ));
    }
    if let Some(t) = &cert.t {
        out.push(format!("t: {t:?}"));
    }
    if let Some(r) = &cert.residue_text {
        out.push(format!("T: {r}"));
    }
    for c in &cert.checks {
        out.push(format!("  [{}] {}: {} vs {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.lhs, c.rhs));
    }
    match &cert.verdict {
        Verdict::NotALifting(d) => out.push(format!("verdict: NotALifting ({d})")),
        v => out.push(format!("verdict: {}", v.name())),
    }
    if let Some(o) = &cert.oracle {
        out.push(format!("oracle: {o}"));
    }
    out.join("\n")
}

fn oracle_note(f: &QPoly, cert: &LiftingCertificate, limit: u64) -> String {
    let limits = OracleLimits { candidates: limit, ..OracleLimits::default() };
    match brute_factor(f, &limits) {
        Ok(r) if cert.verdict.is_certified() && !r.is_irreducible() => {
            format!("DISAGREES: factors as {} (bounds: {})", r.to_text(&cert.variables), limits.describe())
        }
        Ok(_) => format!("agreed (bounds: {})", limits.describe()),
        Err(e) => format!("skipped: {e}"),
    }
}

fn certify_one(text: &str, vars: &[String], cfg: &PairConfig, common: &Common, oracle: bool, compact: bool) -> Outcome {
    let f = parse(text, vars)?;
    let options = CertifyOptions { names: Some(vars.to_vec()), limit: common.limit };
    let mut cert =
        certify_irreducible(&f, cfg, &options).map_err(|g| Failure { code: GUARD, message: g.to_string() })?;
    if oracle {
        cert.oracle = Some(oracle_note(&f, &cert, common.limit));
    }
    let code = verdict_code(&cert.verdict);
    let out = match (common.json, compact) {
        (true, true) => serde_json::to_string(&cert).expect("serializable"),
        (true, false) => cert.to_json(),
        (false, _) => certificate_text(&cert),
    };
    Ok((out, code))
}

fn certify(common: &Common, oracle: bool, each: Option<&Path>, polynomial: Option<&str>) -> Outcome {
    let vars = checked_vars(common)?;
    let cfg = config(common, vars.len())?;
    let Some(path) = each else {
        let text = polynomial.ok_or_else(|| Failure::input("missing polynomial (or --each FILE)"))?;
        return certify_one(text, &vars, &cfg, common, oracle, false);
    };
    let content = read(path)?;
    let lines: Vec<&str> = content.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let results: Vec<Outcome> =
        lines.par_iter().map(|line| certify_one(line, &vars, &cfg, common, oracle, true)).collect();
    let mut out = Vec::new();
    let mut code = OK;
    for (line, r) in lines.iter().zip(results) {
        match r {
            Ok((text, c)) => {
                out.push(if common.json { text } else { format!("{text}\n") });
                code = code.max(c);
            }
            Err(f) => {
                eprintln!("{line}: {}", f.message);
                code = code.max(f.code);
            }
        }
    }
    Ok((out.join("\n"), code))
}

fn expand(common: &Common, text: &str) -> Outcome {
    let vars = checked_vars(common)?;
    let cfg = config(common, vars.len())?;
    let f = parse(text, &vars)?;
    let expansion = cfg.expand(&f).map_err(Failure::input)?;
    let wv = cfg.w_from_expansion(&expansion);
    let phis: Vec<String> =
        cfg.pairs().iter().zip(&vars).map(|(p, v)| p.phi.to_multi(1, 0).to_text(std::slice::from_ref(v))).collect();
    let rows: Vec<_> = wv
        .table
        .iter()
        .map(|row| (row.index.clone(), expansion.terms[&row.index].to_text(&vars), row.coefficient_value.clone(), row.value.clone()))
        .collect();
    if common.json {
        let terms: Vec<_> = rows
            .iter()
            .map(|(i, a, cv, v)| json!({"index": i, "coefficient": a, "coefficient_value": cv, "value": v}))
            .collect();
        return Ok((serde_json::to_string_pretty(&json!({"phis": phis, "terms": terms})).expect("json"), OK));
    }
    let mut out = vec![format!("phi: {}", phis.join(", "))];
    for (i, a, cv, v) in rows {
        out.push(format!("{i:?}: a = {a}, v(a) = {cv}, value = {v}"));
    }
    Ok((out.join("\n"), OK))
}

fn value(common: &Common, text: &str) -> Outcome {
    let vars = checked_vars(common)?;
    let cfg = config(common, vars.len())?;
    let f = parse(text, &vars)?;
    let expansion = cfg.expand(&f).map_err(Failure::input)?;
    let wv = cfg.w_from_expansion(&expansion);
    let marginals: Vec<_> = (0..vars.len()).map(|i| cfg.marginal_from_expansion(&expansion, i)).collect();
    if common.json {
        let m: serde_json::Map<_, _> =
            vars.iter().zip(&marginals).map(|(v, m)| (v.clone(), json!(m.to_string()))).collect();
        let doc = json!({"w": wv.value, "marginals": m, "contributing": wv.contributing});
        return Ok((serde_json::to_string_pretty(&doc).expect("json"), OK));
    }
    let mut out = vec![format!("w: {}", wv.value)];
    for (v, m) in vars.iter().zip(&marginals) {
        out.push(format!("w_{v}: {m}"));
    }
    out.push(format!("contributing: {:?}", wv.contributing));
    Ok((out.join("\n"), OK))
}

fn residue(common: &Common, t: &[u32], text: &str) -> Outcome {
    let vars = checked_vars(common)?;
    let cfg = config(common, vars.len())?;
    let f = parse(text, &vars)?;
    let t = if t.is_empty() {
        let report = check_lifting(&f, &cfg, &vars);
        match report.t {
            Some(t) => t,
            None => {
                let d = report.outcome.expect_err("t is derived before any residue");
                return Err(Failure { code: NOT_A_LIFTING, message: format!("cannot derive t: {d}") });
            }
        }
    } else {
        t.to_vec()
    };
    let r = cfg
        .residue_normalized(&f, &t)
        .map_err(|e| Failure { code: NOT_A_LIFTING, message: e.to_string() })?;
    if common.json {
        return Ok((serde_json::to_string(&r.to_json(cfg.field())).expect("json"), OK));
    }
    Ok((format!("t: {t:?}\nT: {}", r.to_text(cfg.field())), OK))
}

fn generate(common: &Common, seed: u64, path: &Path) -> Outcome {
    let json: ResiduePolyJson =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let nvars = json.coeffs.first().map(|t| t.exp.len()).ok_or_else(|| Failure::input("empty residue polynomial"))?;
    let mut common = common.clone();
    if common.prime.is_none() && common.pairs.is_none() {
        common.prime = Some(json.p);
    }
    let vars = if common.vars.is_empty() { liftcert::multipoly::default_names(nvars) } else { checked_vars(&common)? };
    let cfg = config(&common, vars.len())?;
    let residue = ResiduePoly::from_json(&json, cfg.field()).map_err(Failure::input)?;
    let f = generate_lifting(&residue, &cfg, seed).map_err(|e| match e {
        GenerateError::ResidueIsVariable(_) => Failure { code: EXCLUDED, message: e.to_string() },
        other => Failure::input(other),
    })?;
    let text = f.to_text(&vars);
    if common.json {
        return Ok((serde_json::to_string(&json!({"polynomial": text, "variables": vars})).expect("json"), OK));
    }
    Ok((text, OK))
}

fn factor_oracle(common: &Common, max_degree: u32, text: &str) -> Outcome {
    let vars = checked_vars(common)?;
    let f = parse(text, &vars)?;
    let limits = OracleLimits { max_degree, candidates: common.limit, ..OracleLimits::default() };
    let r = brute_factor(&f, &limits).map_err(|e: OracleError| Failure { code: GUARD, message: e.to_string() })?;
    if common.json {
        let factors: Vec<_> =
            r.factors.iter().map(|(g, k)| json!({"factor": g.to_text(&vars), "multiplicity": k})).collect();
        let doc = json!({"scalar": format_rational(&r.scalar), "factors": factors, "irreducible": r.is_irreducible()});
        return Ok((serde_json::to_string_pretty(&doc).expect("json"), OK));
    }
    Ok((r.to_text(&vars), OK))
}

fn suggest(common: &Common, max: usize, text: &str) -> Outcome {
    let vars = checked_vars(common)?;
    let p = common.prime.ok_or_else(|| Failure::input("--prime is required"))?;
    let prime = Prime::new(p).map_err(Failure::input)?;
    let f = parse(text, &vars)?;
    let lines: Vec<String> = suggest_pairs(&f, prime, max)
        .into_iter()
        .map(|pairs| serde_json::to_string(&PairFile { prime, pairs }).expect("json"))
        .collect();
    Ok((lines.join("\n"), OK))
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Certify { common, oracle, each, polynomial } => {
            certify(common, *oracle, each.as_deref(), polynomial.as_deref())
        }
        Command::Expand { common, polynomial } => expand(common, polynomial),
        Command::Value { common, polynomial } => value(common, polynomial),
        Command::Residue { common, t, polynomial } => residue(common, t, polynomial),
        Command::Generate { common, seed, residue } => generate(common, *seed, residue),
        Command::FactorOracle { common, max_degree, polynomial } => factor_oracle(common, *max_degree, polynomial),
        Command::Suggest { common, max, polynomial } => suggest(common, *max, polynomial),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
