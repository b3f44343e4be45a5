//! Command-line front end. Every command yields a [`CommandResult`]: one JSON
//! document for stdout, a short summary for stderr and an exit status.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bruteforce::{self, BruteError, FoundMap, SearchBudget};
use crate::cayley::{self, CayleyMap, MapJson, SkewMorphism};
use crate::classify::{self, VerifyLevel};
use crate::metacyclic::{GroupDescriptor, QuotientSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: u8,
    pub payload: Value,
    pub summary: String,
}

impl CommandResult {
    fn new(status: u8, payload: Value, summary: impl Into<String>) -> Self {
        CommandResult { status, payload, summary: summary.into() }
    }

    fn input_error(command: &str, msg: impl ToString) -> Self {
        let msg = msg.to_string();
        CommandResult::new(EXIT_INPUT, json!({ "command": command, "error": msg }), format!("error: {msg}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "rbcm", version, about = "Regular t-balanced Cayley maps on split metacyclic 2-groups")]
pub struct Cli {
    /// Worker threads; defaults to RBCM_WORKERS, then the number of cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve and verify the classification for D(a,b,c).
    Classify(ClassifyArgs),
    /// Enumerate regular t-balanced maps on a small group by search.
    Bruteforce(BruteArgs),
    /// Check a map file: skew identity, regularity, balance, genus.
    Verify(VerifyArgs),
    /// Quotient a map file by a normal subgroup <a^i, b^j>.
    Quotient(QuotientArgs),
    /// Genus of a map file.
    Genus(FileArg),
    /// Basic facts about a group descriptor.
    Info(InfoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

impl From<LevelArg> for VerifyLevel {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Fast => VerifyLevel::Fast,
            LevelArg::Full => VerifyLevel::Full,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub c: u32,
    #[arg(long, value_enum, default_value = "fast")]
    pub verify_level: LevelArg,
    /// Also write each realized map as `<dir>/D(a,b,c)-z1-<z1>.json`.
    #[arg(long)]
    pub write_maps: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    /// `Zn`, `Zn x Zm`, `L(n,m,r)` or `D(a,b,c)`.
    #[arg(long)]
    pub group: String,
    /// Guided search on D(a,b,c) instead of the generic enumeration.
    #[arg(long)]
    pub guided: bool,
    /// Slow tier: the naive oracle alongside the generic search, or the full
    /// orbit sweep for the guided search.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 64)]
    pub max_order: u64,
    #[arg(long)]
    pub max_candidates: Option<u64>,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Also quotient by this subgroup and profile the abelian quotient map.
    #[arg(long)]
    pub quotient: Option<String>,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub by: String,
}

#[derive(Debug, Args)]
pub struct FileArg {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub group: String,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.or_else(|| std::env::var("RBCM_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = workers.filter(|&n| n > 0) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let res = run(cli.command);
    // A closed pipe downstream is not our failure; the status still stands.
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&res.payload).expect("JSON values serialize"));
    let _ = writeln!(std::io::stderr().lock(), "{}", res.summary);
    ExitCode::from(res.status)
}

pub fn run(cmd: Command) -> CommandResult {
    match cmd {
        Command::Classify(a) => cmd_classify(&a),
        Command::Bruteforce(a) => cmd_bruteforce(&a),
        Command::Verify(a) => cmd_verify(&a.file, a.quotient.as_deref()),
        Command::Quotient(a) => cmd_quotient(&a.file, &a.by),
        Command::Genus(a) => cmd_genus(&a.file),
        Command::Info(a) => cmd_info(&a.group),
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> CommandResult {
    let (a, b, c) = (args.a, args.b, args.c);
    let level: VerifyLevel = args.verify_level.into();
    let (report, realized) = match classify::classify(a, b, c, level) {
        Ok(x) => x,
        Err(e) => return CommandResult::input_error("classify", e),
    };
    if let Some(dir) = &args.write_maps {
        if let Err(e) = write_maps(dir, &realized) {
            return CommandResult::input_error("classify", e);
        }
    }
    let ok = report.ok();
    let summary = if report.necessary.exists {
        format!(
            "D({a},{b},{c}): {} solutions (expected {}), verify-level {}: {}",
            report.solutions.len(),
            report.necessary.expected_count,
            level_name(level),
            if ok { "all checks passed" } else { "VERIFICATION FAILED" }
        )
    } else {
        format!("D({a},{b},{c}): 0 solutions; {}", report.necessary.reason)
    };
    let mut payload = serde_json::to_value(&report).expect("report serializes");
    payload["command"] = json!("classify");
    payload["verify_level"] = json!(level_name(level));
    payload["ok"] = json!(ok);
    CommandResult::new(if ok { EXIT_OK } else { EXIT_VERIFICATION }, payload, summary)
}

fn level_name(l: VerifyLevel) -> &'static str {
    match l {
        VerifyLevel::Fast => "fast",
        VerifyLevel::Full => "full",
    }
}

fn write_maps(dir: &Path, realized: &[classify::RealizedRbcm]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in realized {
        let s = &r.solution;
        let name = format!("D({},{},{})-z1-{}.json", s.a, s.b, s.c, s.z1);
        std::fs::write(dir.join(name), MapJson::from_map(&r.map, Some(&r.skew)).to_string_pretty() + "\n")?;
    }
    Ok(())
}

fn found_json(f: &FoundMap) -> Value {
    let regular = cayley::is_regular(&f.map);
    let balance = cayley::balance_data(&f.map);
    let skew_ok = cayley::verify_with_pi(f.map.group(), &f.skew).is_ok();
    let verified = regular.as_ref() == Some(&f.skew) && balance.as_ref() == Some(&f.balance) && skew_ok;
    json!({
        "map": MapJson::from_map(&f.map, Some(&f.skew)),
        "t": f.balance.t,
        "d": f.balance.d,
        "ell": f.balance.ell,
        "type": f.balance.kind.to_string(),
        "genus": cayley::genus(&f.map).genus,
        "checks": { "regular": regular.is_some(), "balanced": balance.is_some(), "skew_identity": skew_ok },
        "verified": verified,
    })
}

pub fn cmd_bruteforce(args: &BruteArgs) -> CommandResult {
    let descriptor: GroupDescriptor = match args.group.parse() {
        Ok(d) => d,
        Err(e) => return CommandResult::input_error("bruteforce", e),
    };
    let mut budget = SearchBudget { max_order: args.max_order, ..SearchBudget::default() };
    if let Some(n) = args.max_candidates {
        budget.max_candidates = n;
    }
    if let Some(s) = args.time_limit {
        match Duration::try_from_secs_f64(s) {
            Ok(d) => budget.time_limit = Some(d),
            Err(e) => return CommandResult::input_error("bruteforce", format!("--time-limit: {e}")),
        }
    }
    let g = descriptor.group();
    let mut payload = json!({ "command": "bruteforce", "group": descriptor.to_string(), "order": g.order() });

    if args.guided {
        let Some(delta) = descriptor.delta() else {
            return CommandResult::input_error("bruteforce", "--guided needs a D(a,b,c) group");
        };
        return match bruteforce::guided_search_delta(&delta, budget, args.exhaustive) {
            Ok(res) => {
                let maps: Vec<Value> = res.maps.iter().map(found_json).collect();
                let all_ok = maps.iter().all(|m| m["verified"] == json!(true));
                let complete = res.stop_reason.is_none();
                payload["mode"] = json!(if args.exhaustive { "guided-exhaustive" } else { "guided" });
                payload["complete"] = json!(complete);
                payload["exhaustive"] = json!(res.exhaustive);
                payload["candidates"] = json!(res.candidates);
                payload["stop_reason"] = json!(res.stop_reason);
                payload["maps"] = Value::Array(maps);
                let status = if !all_ok {
                    EXIT_VERIFICATION
                } else if complete {
                    EXIT_OK
                } else {
                    EXIT_BUDGET
                };
                let summary = format!(
                    "{}: guided search {} after {} candidates, {} maps",
                    descriptor,
                    if complete { "finished" } else { "stopped early" },
                    res.candidates,
                    res.maps.len()
                );
                CommandResult::new(status, payload, summary)
            }
            Err(e) => brute_error(payload, &descriptor, e),
        };
    }

    let found = match bruteforce::enumerate_rbcm(&g, budget) {
        Ok(f) => f,
        Err(e) => return brute_error(payload, &descriptor, e),
    };
    let maps: Vec<Value> = found.iter().map(found_json).collect();
    let mut ok = maps.iter().all(|m| m["verified"] == json!(true));
    payload["mode"] = json!(if args.exhaustive { "structured+naive" } else { "structured" });
    payload["complete"] = json!(true);
    payload["maps"] = Value::Array(maps);
    let mut summary = format!("{}: {} isomorphism classes", descriptor, found.len());
    if args.exhaustive {
        match bruteforce::enumerate_rbcm_naive(&g, budget) {
            Ok(naive) => {
                let agree = bruteforce::same_classes(&found, &naive);
                ok &= agree;
                payload["naive_count"] = json!(naive.len());
                payload["oracle_agreement"] = json!(agree);
                summary += &format!("; naive oracle {} ({})", naive.len(), if agree { "agrees" } else { "DISAGREES" });
            }
            Err(e) => return brute_error(payload, &descriptor, e),
        }
    }
    CommandResult::new(if ok { EXIT_OK } else { EXIT_VERIFICATION }, payload, summary)
}

fn brute_error(mut payload: Value, descriptor: &GroupDescriptor, e: BruteError) -> CommandResult {
    match e {
        BruteError::BudgetExceeded { reason, partial } => {
            payload["complete"] = json!(false);
            payload["stop_reason"] = json!(reason);
            payload["maps"] = Value::Array(partial.iter().map(found_json).collect());
            let summary = format!("{descriptor}: budget exceeded ({reason}); {} partial maps", partial.len());
            CommandResult::new(EXIT_BUDGET, payload, summary)
        }
        BruteError::OrderTooLarge { .. } => {
            payload["complete"] = json!(false);
            payload["error"] = json!(e.to_string());
            CommandResult::new(EXIT_BUDGET, payload, format!("{descriptor}: {e}"))
        }
        BruteError::Group(e) => CommandResult::input_error("bruteforce", e),
    }
}

fn load_file(path: &Path) -> Result<MapJson, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    MapJson::parse(&text).map_err(|e| e.to_string())
}

pub fn cmd_verify(path: &Path, quotient: Option<&str>) -> CommandResult {
    let doc = match load_file(path) {
        Ok(d) => d,
        Err(e) => return CommandResult::input_error("verify", e),
    };
    let spec = match quotient.map(str::parse::<QuotientSpec>).transpose() {
        Ok(s) => s,
        Err(e) => return CommandResult::input_error("verify", e),
    };
    let (map, skew) = match doc.load() {
        Ok(x) => x,
        Err(cayley::JsonError::Skew(w)) => {
            let payload = json!({ "command": "verify", "ok": false, "skew_identity": false, "witness": w });
            return CommandResult::new(EXIT_VERIFICATION, payload, format!("{}: {w}", path.display()));
        }
        Err(e) => return CommandResult::input_error("verify", e),
    };
    verify_loaded(path, &map, skew, spec)
}

fn verify_loaded(path: &Path, map: &CayleyMap, given: Option<SkewMorphism>, spec: Option<QuotientSpec>) -> CommandResult {
    let regular = cayley::is_regular(map);
    let balance = cayley::balance_data(map);
    let genus = cayley::genus(map);
    let mut failures = Vec::new();
    if regular.is_none() {
        failures.push("map is not regular".to_string());
    }
    if balance.is_none() {
        failures.push("map is not t-balanced".to_string());
    }
    // A file may carry a valid skew-morphism that is not the one of this map.
    let matches = match (&given, &regular) {
        (Some(s), Some(r)) => Some(s == r),
        (Some(_), None) => Some(false),
        (None, _) => None,
    };
    if matches == Some(false) {
        failures.push("stored skew-morphism is not the rotation skew-morphism of the map".into());
    }
    let mut payload = json!({
        "command": "verify",
        "group": map.descriptor().to_string(),
        "valency": map.valency(),
        "skew_identity": given.as_ref().map(|_| true),
        "skew_matches_map": matches,
        "regular": regular.is_some(),
        "balance": balance,
        "genus": genus,
    });
    if let (Some(spec), Some(skew)) = (spec, regular.as_ref()) {
        match cayley::quotient_map(map, skew, spec) {
            Ok(q) => {
                let profile = cayley::abelian_profile_check(&q.map, &q.skew);
                let qbal = cayley::balance_data(&q.map);
                let t_kept = match (&balance, &qbal) {
                    (Some(b), Some(qb)) => (b.t % qb.d) == qb.t % qb.d,
                    _ => false,
                };
                if !t_kept {
                    failures.push("quotient does not keep t".into());
                }
                if let Err(e) = &profile {
                    failures.push(format!("quotient profile: {e}"));
                }
                payload["quotient"] = json!({
                    "map": MapJson::from_map(&q.map, Some(&q.skew)),
                    "balance": qbal,
                    "t_preserved": t_kept,
                    "profile": profile.as_ref().ok(),
                    "profile_error": profile.as_ref().err(),
                });
            }
            Err(e) => failures.push(format!("quotient: {e}")),
        }
    }
    let ok = failures.is_empty();
    payload["ok"] = json!(ok);
    payload["failures"] = json!(failures);
    let summary = match &balance {
        Some(b) if ok => format!("{}: regular, t = {}, type {}, genus {}", path.display(), b.t, b.kind, genus.genus),
        _ => format!("{}: {}", path.display(), failures.join("; ")),
    };
    CommandResult::new(if ok { EXIT_OK } else { EXIT_VERIFICATION }, payload, summary)
}

pub fn cmd_quotient(path: &Path, by: &str) -> CommandResult {
    let spec: QuotientSpec = match by.parse() {
        Ok(s) => s,
        Err(e) => return CommandResult::input_error("quotient", e),
    };
    let (map, _) = match load_file(path).and_then(|d| d.load().map_err(|e| e.to_string())) {
        Ok(x) => x,
        Err(e) => return CommandResult::input_error("quotient", e),
    };
    let Some(skew) = cayley::is_regular(&map) else {
        return CommandResult::new(
            EXIT_VERIFICATION,
            json!({ "command": "quotient", "ok": false, "error": "map is not regular" }),
            format!("{}: map is not regular", path.display()),
        );
    };
    match cayley::quotient_map(&map, &skew, spec) {
        Ok(q) => {
            let bal = cayley::balance_data(&q.map);
            let summary = format!("{} -> {}, valency {}", q.quotient.source, q.quotient.target, q.map.valency());
            let payload = json!({
                "command": "quotient",
                "ok": true,
                "source": q.quotient.source.to_string(),
                "target": q.quotient.target.to_string(),
                "map": MapJson::from_map(&q.map, Some(&q.skew)),
                "balance": bal,
            });
            CommandResult::new(EXIT_OK, payload, summary)
        }
        Err(e) => CommandResult::new(
            EXIT_VERIFICATION,
            json!({ "command": "quotient", "ok": false, "error": e.to_string() }),
            format!("{}: {e}", path.display()),
        ),
    }
}

pub fn cmd_genus(path: &Path) -> CommandResult {
    let (map, _) = match load_file(path).and_then(|d| d.load().map_err(|e| e.to_string())) {
        Ok(x) => x,
        Err(e) => return CommandResult::input_error("genus", e),
    };
    let g = cayley::genus(&map);
    let summary = format!("V = {}, E = {}, F = {}, genus {}", g.vertices, g.edges, g.faces, g.genus);
    CommandResult::new(EXIT_OK, json!({ "command": "genus", "genus": g }), summary)
}

pub fn cmd_info(spec: &str) -> CommandResult {
    let descriptor: GroupDescriptor = match spec.parse() {
        Ok(d) => d,
        Err(e) => return CommandResult::input_error("info", e),
    };
    let g = descriptor.group();
    let mut payload = json!({
        "command": "info",
        "group": descriptor.to_string(),
        "n": g.n(),
        "m": g.m(),
        "r": g.r(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "two_group": g.is_two_group(),
    });
    if let Ok(subs) = g.index2_subgroups() {
        payload["index2_subgroups"] =
            json!(subs.iter().map(|s| s.generators.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    if let Some(d) = descriptor.delta() {
        if let Ok(rep) = classify::check_necessary(d.a, d.b, d.c) {
            payload["classification"] = json!(rep);
        }
    }
    let summary = format!("{descriptor}: order {}", g.order());
    CommandResult::new(EXIT_OK, payload, summary)
}
