//! Command-line front end and the invariant suite behind `verify-all`.
//!
//! Every command writes `{manifest, result}` as JSON to `--out` (or to
//! standard output with `--out -`) and a short human summary to standard
//! output. Exit codes: 0 success, 1 failed verification or runtime error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::characters::{self, FormalCharacter};
use crate::chevalley::{LieAlgebra, StructConstants};
use crate::corealg::{BasisIndex, CoreAlgebra};
use crate::decomp::{self, Sampling};
use crate::e8axial::{Branch, E8Family, ParamContext};
use crate::exactla::{RatDoc, SparseVec, Q};
use crate::rootsys::{CartanType, RootSystem};
use crate::zerosub::{mu_system_solve, ZeroSub};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug, Serialize)]
#[command(name = "chevalgebra", version, about = "Frobenius algebras of simply laced Chevalley groups", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Path for the JSON document; `-` writes it to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON file whose keys mirror the long flags. Explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TypeArgs {
    /// Cartan type: A, D or E.
    #[arg(long = "type")]
    pub kind: CartanType,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Root system as JSON, optionally with the structure-constant signs.
    Roots {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long)]
        signs: bool,
    },
    /// Formal characters of S²(𝓛), 𝒱 and 𝒜.
    Character {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Structure constants of ∗ on the flat basis.
    MultTable {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gram matrix of ℬ.
    Gram {
        #[command(flatten)]
        t: TypeArgs,
    },
    /// Projection data of the zero weight algebra.
    Zerosub {
        #[command(flatten)]
        t: TypeArgs,
        /// Also write the π(j_α) vectors to this file.
        #[arg(long)]
        dump_pi: Option<PathBuf>,
    },
    /// Checks a fusion law on a decomposition.
    VerifyFusion {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum)]
        which: Scope,
        /// `zero` for the zero weight subalgebra, `full` for the whole algebra.
        #[arg(long, value_enum, default_value_t = Level::Full)]
        algebra: Level,
        /// Positive root index for local laws; defaults to the highest root.
        #[arg(long)]
        root: Option<usize>,
        /// Sample this many vector pairs per part pair instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// The E_8 one-parameter family.
    E8 {
        /// Nonzero rational parameter, e.g. 2/9.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value = "plus")]
        branch: String,
        #[arg(long, value_enum, default_value_t = E8Check::Spectrum)]
        check: E8Check,
        /// Vector pairs per part pair for the fusion check.
        #[arg(long, default_value_t = 50)]
        sample: usize,
    },
    /// Runs the invariant suite on one type.
    VerifyAll {
        #[command(flatten)]
        t: TypeArgs,
        /// Random triples and pairs for sampled checks.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum Which {
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "S2", alias = "s2")]
    S2,
    #[value(name = "A", alias = "a")]
    A,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Local,
    Global,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Zero,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum E8Check {
    Spectrum,
    Idempotent,
    Fusion,
    Nilpotent,
    Probe,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_FAIL,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// What a command produced.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub ok: bool,
    /// Sampling mode recorded in the manifest.
    pub sampling: Option<Sampling>,
    /// Replaces the JSON document, for `--format csv`.
    pub raw: Option<String>,
}

impl Outcome {
    fn new(result: Value, summary: String, ok: bool) -> Self {
        Outcome { result, summary, ok, sampling: None, raw: None }
    }
}

const SUBCOMMANDS: [&str; 8] = ["roots", "character", "mult-table", "gram", "zerosub", "verify-fusion", "e8", "verify-all"];

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stdout, "error: {e}");
            return e.code();
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(stdout, "{}", e.render());
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(out) => match emit(&cli, &out, stdout) {
            Ok(()) => {
                if out.ok {
                    EXIT_OK
                } else {
                    EXIT_FAIL
                }
            }
            Err(e) => {
                let _ = writeln!(stdout, "error: {e}");
                e.code()
            }
        },
        Err(e) => {
            let _ = writeln!(stdout, "error: {e}");
            e.code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("CHEVALGEBRA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Expands `--config FILE` into flags placed right after the subcommand, so
/// flags given on the command line override them.
fn merge_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = Some(args.get(i + 1).ok_or_else(|| usage("--config needs a path"))?.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let cfg: serde_json::Map<String, Value> = serde_json::from_str(&text).map_err(|e| usage(format!("config {path}: {e}")))?;
    let mut flags = Vec::new();
    let mut command = None;
    for (k, v) in &cfg {
        if k == "command" {
            command = v.as_str().map(str::to_string);
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => flags.extend([flag, s.clone()]),
            Value::Number(n) => flags.extend([flag, n.to_string()]),
            _ => return Err(usage(format!("config key {k}: expected a scalar"))),
        }
    }
    let pos = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    let mut out = vec![args[0].clone()];
    match pos {
        Some(p) => {
            out.extend(args[1..=p].iter().cloned());
            out.extend(flags);
            out.extend(args[p + 1..].iter().cloned());
        }
        None => {
            let cmd = command.ok_or_else(|| usage("no subcommand given on the command line or in the config"))?;
            out.push(cmd);
            out.extend(flags);
            out.extend(args[1..].iter().cloned());
        }
    }
    Ok(out)
}

fn emit(cli: &Cli, out: &Outcome, stdout: &mut dyn Write) -> Result<(), CliError> {
    let manifest = json!({
        "tool": "chevalgebra",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command,
        "seed": cli.seed,
        "sampling": out.sampling,
    });
    let to_stdout = cli.out.as_deref().is_some_and(|p| p.as_os_str() == "-");
    let body = match &out.raw {
        Some(raw) => format!("# {}\n{raw}", serde_json::to_string(&manifest).map_err(runtime)?),
        None => {
            let mut s = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": out.result })).map_err(runtime)?;
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(_) if to_stdout => stdout.write_all(body.as_bytes()).map_err(runtime)?,
        Some(path) => {
            std::fs::write(path, body).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
            writeln!(stdout, "{}", out.summary).map_err(runtime)?;
        }
        None => writeln!(stdout, "{}", out.summary).map_err(runtime)?,
    }
    Ok(())
}

fn root_system(t: &TypeArgs) -> Result<RootSystem, CliError> {
    RootSystem::new(t.kind, t.rank).map_err(usage)
}

fn algebra(t: &TypeArgs) -> Result<CoreAlgebra, CliError> {
    CoreAlgebra::new(root_system(t)?).map_err(runtime)
}

fn parse_rational(s: &str) -> Result<Q, CliError> {
    s.trim().parse::<Q>().map_err(|_| usage(format!("{s:?} is not a rational number")))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Roots { t, signs } => cmd_roots(t, *signs),
        Command::Character { t, which } => cmd_character(t, *which),
        Command::MultTable { t, format } => cmd_mult_table(t, *format),
        Command::Gram { t } => cmd_gram(t),
        Command::Zerosub { t, dump_pi } => cmd_zerosub(t, dump_pi.as_ref()),
        Command::VerifyFusion { t, which, algebra, root, sample } => cmd_verify_fusion(t, *which, *algebra, *root, *sample, cli.seed),
        Command::E8 { s, branch, check, sample } => cmd_e8(s, branch, *check, *sample, cli.seed),
        Command::VerifyAll { t, samples } => cmd_verify_all(t, *samples, cli.seed),
    }
}

fn cmd_roots(t: &TypeArgs, signs: bool) -> Result<Outcome, CliError> {
    let rs = root_system(t)?;
    let doc = rs.to_doc();
    let signs = if signs { Some(StructConstants::new(&rs).map_err(runtime)?.to_doc()) } else { None };
    let summary = format!(
        "{}: {} roots, {} positive, highest root {} = {:?}/{}",
        rs.label(),
        rs.nroots(),
        rs.npos(),
        rs.highest_root(),
        rs.root(rs.highest_root()),
        rs.den
    );
    Ok(Outcome::new(json!({ "root_system": doc, "signs": signs }), summary, true))
}

fn character_doc(ch: &FormalCharacter) -> Value {
    json!({ "dim": ch.dim(), "terms": ch.to_doc() })
}

fn cmd_character(t: &TypeArgs, which: Which) -> Result<Outcome, CliError> {
    let rs = root_system(t)?;
    let (ch, check, what) = match which {
        Which::V => {
            let closed = characters::char_v_closed(&rs);
            let fr = characters::freudenthal_char(&rs, &characters::two_omega(&rs)).map_err(runtime)?;
            let ok = fr == closed;
            (closed, ok, "closed form equals Freudenthal V(2ω)")
        }
        Which::S2 => {
            let s2 = characters::char_s2(&rs);
            let n = (rs.nroots() + rs.rank) as u64;
            let ok = s2.dim() == n * (n + 1) / 2;
            (s2, ok, "dimension equals dim S²(𝓛)")
        }
        Which::A => {
            let a = characters::char_a(&rs);
            let diff = characters::char_s2(&rs).checked_sub(&characters::char_v_closed(&rs));
            let ok = diff.as_ref() == Some(&a);
            (a, ok, "equals S²(𝓛) − 𝒱")
        }
    };
    let summary = format!("{} character {:?}: dim {}, {}: {}", rs.label(), which, ch.dim(), what, if check { "yes" } else { "NO" });
    Ok(Outcome::new(json!({ "which": which, "character": character_doc(&ch), "check": { "statement": what, "ok": check } }), summary, check))
}

/// Human-readable name of a flat basis index.
pub fn basis_name(alg: &CoreAlgebra, idx: usize) -> String {
    match alg.decode(idx) {
        BasisIndex::J(i, j) => format!("h{}h{}", i + 1, j + 1),
        BasisIndex::H { root, t } => format!("[h_{t}]_{root}"),
        BasisIndex::X(l) => format!("x_{l}"),
    }
}

fn cmd_mult_table(t: &TypeArgs, format: Format) -> Result<Outcome, CliError> {
    let alg = algebra(t)?;
    let d = alg.dim();
    let mut rows = Vec::new();
    let mut csv = String::from("i,j,k,num,den\n");
    for i in 0..d {
        for j in i..d {
            let p = alg.mul_basis(i, j);
            if p.is_zero() {
                continue;
            }
            match format {
                Format::Json => {
                    let coeffs: Vec<Value> = p
                        .iter()
                        .map(|(k, c)| {
                            let r = RatDoc::from(c);
                            json!({ "k": k, "num": serde_json::to_value(&r).unwrap()["num"], "den": serde_json::to_value(&r).unwrap()["den"] })
                        })
                        .collect();
                    rows.push(json!({ "i": i, "j": j, "coeffs": coeffs }));
                }
                Format::Csv => {
                    for (k, c) in p.iter() {
                        csv.push_str(&format!("{i},{j},{k},{},{}\n", c.numer(), c.denom()));
                    }
                }
            }
        }
    }
    let basis: Vec<String> = (0..d).map(|i| basis_name(&alg, i)).collect();
    let summary = format!("{}: multiplication table of dimension {d}", alg.rs.label());
    let mut out = Outcome::new(json!({ "dim": d, "basis": basis, "rows": rows }), summary, true);
    if let Format::Csv = format {
        out.raw = Some(csv);
    }
    Ok(out)
}

/// Rank of ℬ restricted to 𝔄_μ × 𝔄_{−μ}, checked for every μ.
pub fn form_nondegenerate(alg: &CoreAlgebra) -> bool {
    let mut by_w: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for i in 0..alg.dim() {
        by_w.entry(alg.weight(i).to_vec()).or_default().push(i);
    }
    by_w.iter().all(|(w, idx)| {
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        let Some(other) = by_w.get(&neg) else { return false };
        if other.len() != idx.len() {
            return false;
        }
        let mut m = crate::exactla::Matrix::zeros(idx.len(), other.len());
        for (a, &x) in idx.iter().enumerate() {
            for (b, &y) in other.iter().enumerate() {
                m.set(a, b, alg.form_basis(x, y));
            }
        }
        m.rank() == idx.len()
    })
}

fn cmd_gram(t: &TypeArgs) -> Result<Outcome, CliError> {
    let alg = algebra(t)?;
    let d = alg.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        let w: Vec<i64> = alg.weight(i).iter().map(|x| -x).collect();
        for j in alg.weight_space(&w).into_iter().filter(|&j| j >= i) {
            let f = alg.form_basis(i, j);
            if !f.is_zero() {
                let r = serde_json::to_value(RatDoc::from(&f)).map_err(runtime)?;
                entries.push(json!({ "i": i, "j": j, "num": r["num"], "den": r["den"] }));
            }
        }
    }
    let nondeg = form_nondegenerate(&alg);
    let summary = format!("{}: Gram matrix of dimension {d}, {} nonzero entries (i ≤ j), nondegenerate: {nondeg}", alg.rs.label(), entries.len());
    Ok(Outcome::new(json!({ "dim": d, "entries": entries, "nondegenerate": nondeg }), summary, nondeg))
}

fn rats(v: &[Q]) -> Vec<RatDoc> {
    v.iter().map(RatDoc::from).collect()
}

fn cmd_zerosub(t: &TypeArgs, dump: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let rs = root_system(t)?;
    let zs = ZeroSub::new(&rs).map_err(runtime)?;
    let ms = mu_system_solve(&rs).map_err(runtime)?;
    let mut pi = Vec::new();
    let mut idempotent = true;
    let mut mu_ok = true;
    for r in 0..rs.npos() {
        let x = zs.s0_from_j(&zs.j_root(&rs, r));
        let p = zs.project(&x);
        idempotent &= zs.project(&p) == p;
        let mu = zs.mu_of_root(&rs, r);
        mu_ok &= (0..rs.npos()).all(|b| mu[b] == ms.mu[ms.orbit(r, b)]);
        pi.push(json!({ "root": r, "j": rats(&p.j), "z": rats(&p.z) }));
    }
    let kills_v = (0..rs.npos()).all(|b| {
        let p = zs.project(&zs.v_elem(&rs, b));
        p.j.iter().chain(&p.z).all(Zero::is_zero)
    });
    if let Some(path) = dump {
        let text = serde_json::to_string_pretty(&pi).map_err(runtime)?;
        std::fs::write(path, text + "\n").map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    let ok = idempotent && mu_ok && kills_v;
    let summary = format!(
        "{}: dim J = {}, {} W-orbits on root pairs, π idempotent {idempotent}, π(v) = 0 {kills_v}, μ system agrees {mu_ok}",
        rs.label(),
        zs.jdim(),
        ms.b.len()
    );
    let result = json!({
        "jdim": zs.jdim(),
        "pi": pi,
        "mu": rats(&ms.mu),
        "b": rats(&ms.b),
        "checks": { "idempotent": idempotent, "kills_v": kills_v, "mu_matches_projection": mu_ok },
    });
    Ok(Outcome::new(result, summary, ok))
}

fn cmd_verify_fusion(t: &TypeArgs, which: Scope, level: Level, root: Option<usize>, sample: Option<usize>, seed: u64) -> Result<Outcome, CliError> {
    let alg = algebra(t)?;
    let rs = &alg.rs;
    let alpha = root.unwrap_or(rs.highest_root());
    if alpha >= rs.npos() {
        return Err(usage(format!("--root must be a positive root index below {}", rs.npos())));
    }
    let (dec, law) = match (which, level) {
        (Scope::Global, Level::Zero) => (decomp::j_global(&alg), decomp::j_global_law(rs)),
        (Scope::Local, Level::Zero) => (decomp::j_local_law(rs).and_then(|_| decomp::j_local(&alg, alpha)), decomp::j_local_law(rs)),
        (Scope::Global, Level::Full) => (decomp::a_global(&alg), decomp::a_global_law(rs)),
        (Scope::Local, Level::Full) => (decomp::a_local(&alg, alpha), decomp::a_local_law(rs)),
    };
    let (dec, law) = (dec.map_err(usage)?, law.map_err(usage)?);
    let sampling = match sample {
        Some(per_pair) => Sampling::Sample { per_pair, seed },
        None => Sampling::Full,
    };
    let report = decomp::verify_fusion(&alg, &dec, &law, &decomp::star(&alg), sampling).map_err(runtime)?;
    let mismatches = dec.dim_mismatches();
    let ok = report.ok && mismatches.is_empty();
    let failed = report.checks.iter().filter(|c| !c.ok).count();
    let summary = format!(
        "{} ({}): {} parts {:?}, {} part pairs checked, {} violations, dimensions match tables: {}",
        dec.name,
        law.name,
        dec.parts.len(),
        dec.dims().iter().map(|d| d.1).collect::<Vec<_>>(),
        report.checks.len(),
        failed,
        mismatches.is_empty()
    );
    let result = json!({
        "decomposition": dec.name,
        "root": dec.root,
        "parts": dec.to_doc(),
        "law": law.to_doc(),
        "report": report,
    });
    let mut out = Outcome::new(result, summary, ok);
    out.sampling = Some(sampling);
    Ok(out)
}

fn cmd_e8(s: &str, branch: &str, check: E8Check, sample: usize, seed: u64) -> Result<Outcome, CliError> {
    let s = parse_rational(s)?;
    let branch: Branch = branch.parse().map_err(usage)?;
    let ctx = ParamContext::new(s, branch).map_err(usage)?;
    let fam = E8Family::new().map_err(runtime)?;
    let params = ctx.to_doc();
    let (result, ok, what) = match check {
        E8Check::Idempotent => {
            let c = fam.idempotent_check(&ctx);
            let sq = fam.axis_square_check(&ctx.p);
            let ok = c.ok() && sq.ok;
            (json!({ "idempotent": c, "axis_square": sq }), ok, "e ⊙ e = e")
        }
        E8Check::Spectrum => {
            let ad = fam.ad_scalar_checks(&ctx.p);
            let sp = fam.spectrum_check(&ctx);
            let bridge = fam.bridge_check(&ctx);
            let ok = ad.iter().all(|c| c.ok) && sp.iter().all(|c| c.ok) && bridge.iter().all(|b| b.ok);
            (json!({ "ad_scalars": ad, "evaluation": sp, "bridge": bridge }), ok, "eigenvalues of e and a_α")
        }
        E8Check::Fusion => {
            let rep = fam.fusion_check(&ctx, Sampling::Sample { per_pair: sample, seed }).map_err(runtime)?;
            let ok = rep.ok;
            (json!({ "report": rep }), ok, "fusion law F'")
        }
        E8Check::Nilpotent => {
            let ok = fam.nilpotent_check();
            (json!({ "p": RatDoc::from(&crate::e8axial::nilpotent_p()), "nilpotent_squares_to_zero": ok }), ok, "(𝟏 − (196/9)a_α)² = 0 at p = −614/74431")
        }
        E8Check::Probe => {
            let probe = fam.c1_zero_probe();
            let ok = !probe.consistent.is_empty();
            (json!({ "c1_zero": probe }), ok, "p at c₁ = 0")
        }
    };
    let summary = format!(
        "E8 s = {} ({:?}): p = {}, c1 = {}, c2 = {}; {what}: {}",
        ctx.s,
        ctx.branch,
        ctx.p,
        ctx.c1,
        ctx.c2,
        if ok { "ok" } else { "FAILED" }
    );
    let mut out = Outcome::new(json!({ "params": params, "check": check, "verdict": result, "ok": ok }), summary, ok);
    if check == E8Check::Fusion {
        out.sampling = Some(Sampling::Sample { per_pair: sample, seed });
    }
    Ok(out)
}

// ---------------------------------------------------------------- invariant suite

/// One named check with a pass flag and a short detail.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.to_string(), ok, detail: detail.into() }
    }
}

pub fn check_struct_constants(rs: &RootSystem, sc: &StructConstants) -> CheckResult {
    let ids = sc.identity_violations(rs, 10);
    let jac = LieAlgebra::new(rs, sc).jacobi_violations(10);
    CheckResult::new("structure constants", ids.is_empty() && jac.is_empty(), format!("{} identity and {} Jacobi violations", ids.len(), jac.len()))
}

/// Commutativity and ℬ(a∗b, c) = ℬ(a, b∗c) on basis triples, either all of
/// them or `samples` random ones.
pub fn check_frobenius(alg: &CoreAlgebra, samples: Option<usize>, seed: u64) -> CheckResult {
    let d = alg.dim();
    let triple_ok = |x: usize, y: usize, z: usize| {
        let xy = alg.mul_basis(x, y);
        let yz = alg.mul_basis(y, z);
        xy == alg.mul_basis(y, x) && alg.form(&xy, &SparseVec::unit(z)) == alg.form(&SparseVec::unit(x), &yz)
    };
    let (count, bad) = match samples {
        None => {
            let mut count = 0usize;
            let mut bad = 0usize;
            for x in 0..d {
                for y in x..d {
                    let w: Vec<i64> = alg.weight(x).iter().zip(alg.weight(y)).map(|(a, b)| -(a + b)).collect();
                    if !alg.has_weight(&w) {
                        count += 1;
                        bad += usize::from(alg.mul_basis(x, y) != alg.mul_basis(y, x));
                        continue;
                    }
                    for z in alg.weight_space(&w) {
                        count += 1;
                        bad += usize::from(!triple_ok(x, y, z));
                    }
                }
            }
            (count, bad)
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = 0;
            for _ in 0..n {
                // Aim at the weight where ℬ can be nonzero half of the time.
                let x = rng.gen_range(0..d);
                let y = rng.gen_range(0..d);
                let w: Vec<i64> = alg.weight(x).iter().zip(alg.weight(y)).map(|(a, b)| -(a + b)).collect();
                let z = match (rng.gen_bool(0.5), alg.has_weight(&w)) {
                    (true, true) => {
                        let ws = alg.weight_space(&w);
                        ws[rng.gen_range(0..ws.len())]
                    }
                    _ => rng.gen_range(0..d),
                };
                bad += usize::from(!triple_ok(x, y, z));
            }
            (n, bad)
        }
    };
    let mode = if samples.is_some() { "sampled" } else { "all" };
    CheckResult::new("Frobenius", bad == 0, format!("{bad} failures on {count} {mode} triples"))
}

/// Commutator consistency of the 𝓛-action, the derivation rule for ∗ and
/// invariance of ℬ, on random basis vectors and roots.
pub fn check_equivariance(alg: &CoreAlgebra, samples: usize, seed: u64) -> CheckResult {
    let lie = LieAlgebra::new(&alg.rs, &alg.sc);
    let nr = alg.rs.nroots();
    let d = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut comm, mut der, mut inv) = (0, 0, 0);
    for _ in 0..samples {
        let (a, b) = (rng.gen_range(0..nr), rng.gen_range(0..nr));
        let (x, y) = (SparseVec::unit(rng.gen_range(0..d)), SparseVec::unit(rng.gen_range(0..d)));
        let lhs = alg.act(a, &alg.act(b, &x)).sub(&alg.act(b, &alg.act(a, &x)));
        comm += usize::from(lhs != alg.act_lie(&lie.bracket_basis(lie.e(a), lie.e(b)), &x));
        let l = alg.act(a, &alg.mul(&x, &y));
        let r = alg.mul(&alg.act(a, &x), &y).add(&alg.mul(&x, &alg.act(a, &y)));
        der += usize::from(l != r);
        let f = alg.form(&alg.act(a, &x), &y) + alg.form(&x, &alg.act(a, &y));
        inv += usize::from(!f.is_zero());
    }
    CheckResult::new(
        "equivariance",
        comm + der + inv == 0,
        format!("{samples} samples: {comm} commutator, {der} derivation, {inv} invariance failures"),
    )
}

/// 𝟏 ∗ x = x on the basis and 𝟏 = ((6 + r)/2)·id.
pub fn check_unit(alg: &CoreAlgebra) -> CheckResult {
    let one = alg.unit();
    let bad = (0..alg.dim()).filter(|&x| alg.mul(&one, &SparseVec::unit(x)) != SparseVec::unit(x)).count();
    let r = alg.rs.r();
    let want = alg.j_elem(&alg.zs.identity()).scale(&crate::exactla::q(6 + r, 2));
    let closed = one == want;
    let norm = alg.form(&one, &one) == crate::exactla::qi((alg.rs.nroots() + alg.rs.rank) as i64);
    CheckResult::new(
        "unit",
        bad == 0 && closed && norm,
        format!("{bad} basis failures, 𝟏 = ((6+r)/2)·id: {closed}, ℬ(𝟏,𝟏) = dim 𝓛: {norm}"),
    )
}

pub fn check_characters(alg: &CoreAlgebra) -> CheckResult {
    let rs = &alg.rs;
    let v = characters::char_v_closed(rs);
    let fr = characters::freudenthal_char(rs, &characters::two_omega(rs));
    let fr_ok = fr.as_ref().is_ok_and(|f| *f == v);
    let a = characters::char_a(rs);
    let diff_ok = characters::char_s2(rs).checked_sub(&v).as_ref() == Some(&a);
    let spaces_ok = a.terms.iter().all(|(w, &m)| alg.weight_space(w).len() as u64 == m) && a.dim() as usize == alg.dim();
    CheckResult::new(
        "characters",
        fr_ok && diff_ok && spaces_ok,
        format!("V(2ω) closed form: {fr_ok}, S² − 𝒱 = 𝒜: {diff_ok}, weight spaces match: {spaces_ok}, dim {}", a.dim()),
    )
}

pub fn check_zero_weight_global(alg: &CoreAlgebra) -> CheckResult {
    let res = decomp::j_global(alg).and_then(|dec| {
        let law = decomp::j_global_law(&alg.rs)?;
        let rep = decomp::verify_fusion(alg, &dec, &law, &decomp::star(alg), Sampling::Full)?;
        Ok((dec.dim_mismatches().is_empty(), rep.ok, dec.dims()))
    });
    match res {
        Ok((dims, fus, d)) => CheckResult::new("zero weight global fusion", dims && fus, format!("parts {d:?}, dims {dims}, fusion {fus}")),
        Err(e) => CheckResult::new("zero weight global fusion", false, e.to_string()),
    }
}

/// τ_α from the local grading of 𝔍 equals s_α for every positive root.
pub fn check_miyamoto_zero(alg: &CoreAlgebra) -> CheckResult {
    let rs = &alg.rs;
    let odd = decomp::j_local_odd_labels(rs.kind);
    let d = alg.jdim();
    let mut bad = 0;
    let mut gens = Vec::new();
    for r in 0..rs.npos() {
        let ok = decomp::j_local(alg, r).ok().and_then(|dec| {
            let g: Vec<u8> = dec.parts.iter().map(|p| u8::from(odd.contains(&p.label.as_str()))).collect();
            decomp::miyamoto(alg, &dec, &g).ok()
        });
        let Some(tau) = ok else {
            bad += 1;
            continue;
        };
        let m = tau.j_matrix(alg);
        let refl = decomp::reflection_matrix(alg, r);
        let same = (0..d).all(|c| {
            let mut e = vec![Q::zero(); d];
            e[c] = num_traits::One::one();
            alg.zs.weyl_act_j(&refl, &e) == m.col(c)
        });
        bad += usize::from(!same);
        gens.push(m);
    }
    let mut detail = format!("{bad} of {} roots differ from s_α", rs.npos());
    if rs.kind == CartanType::A && rs.rank == 3 {
        let order = decomp::generated_group_order(&gens, 10_000);
        detail.push_str(&format!(", group order {order:?}"));
        if order != Some(24) {
            bad += 1;
        }
    }
    CheckResult::new("Miyamoto on J", bad == 0, detail)
}

/// The whole suite for one algebra. Frobenius runs over all triples up to
/// dimension 150 and on `samples` random triples above.
pub fn invariant_suite(alg: &CoreAlgebra, samples: usize, seed: u64) -> Vec<CheckResult> {
    let frob = if alg.dim() <= 150 { None } else { Some(samples) };
    let mut out = vec![
        check_struct_constants(&alg.rs, &alg.sc),
        check_frobenius(alg, frob, seed),
        check_equivariance(alg, samples.min(300), seed.wrapping_add(1)),
        check_unit(alg),
        check_characters(alg),
        check_zero_weight_global(alg),
        CheckResult::new("form nondegenerate", form_nondegenerate(alg), "rank on each pair of opposite weight spaces"),
    ];
    if alg.rs.kind != CartanType::D || alg.rs.rank <= 6 {
        out.push(check_miyamoto_zero(alg));
    }
    out
}

fn cmd_verify_all(t: &TypeArgs, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let alg = algebra(t)?;
    let checks = invariant_suite(&alg, samples, seed);
    let ok = checks.iter().all(|c| c.ok);
    let mut summary = format!("{} (dim {}): {}\n", alg.rs.label(), alg.dim(), if ok { "all checks pass" } else { "FAILURES" });
    for c in &checks {
        summary.push_str(&format!("  [{}] {}: {}\n", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail));
    }
    let mut out = Outcome::new(json!({ "dim": alg.dim(), "checks": checks, "ok": ok }), summary.trim_end().to_string(), ok);
    out.sampling = (alg.dim() > 150).then_some(Sampling::Sample { per_pair: samples, seed });
    Ok(out)
}

/// Seeded random basis indices, used by callers that sample pairs.
pub fn sample_pairs(d: usize, n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d))).collect()
}
