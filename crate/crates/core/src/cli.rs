//! Command-line front end.
//!
//! Precedence for every setting: flag, then config file, then (format only)
//! `K3SERIES_FORMAT`, then the built-in default.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acceptance;
use crate::algebra::rational::display;
use crate::algebra::Series;
use crate::kkv::{gv_table_cached, KkvError};
use crate::ray_series::{pretty_table, records_to_csv, series_records, RayComputation, RayContext, RayError, SeriesRecord};
use crate::sheaf_count::{hilb_euler, JsRecord, MukaiVector};
use crate::vafa_witten::{theorem_check, VwRay, VwRecord};

pub const FORMAT_ENV: &str = "K3SERIES_FORMAT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Gopakumar-Vafa table n[g][h] from the KKV product
    Kkv,
    /// Ray series F, z_chi, z_naive, z_twistor and the BPS display difference
    Pairs,
    /// Euler characteristics of Hilbert schemes of points
    Hilb,
    /// Joyce-Song invariants of Mukai vectors
    Js,
    /// Vafa-Witten extraction on a ray with seeded random vw values
    Vw,
    /// Run the acceptance suite
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "k3series", version, about = "Exact series computations for K3 x E")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub h_max: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h0: Option<i64>,
    #[arg(long, global = true)]
    pub d_max: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q_min: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q_max: Option<i64>,
    #[arg(long, global = true)]
    pub m_max: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub chi0: Option<i64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Mukai vector `r,m,h0,s`; repeatable
    #[arg(long = "vector", global = true, allow_negative_numbers = true)]
    pub vectors: Vec<String>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// File of `key=value` lines mirroring the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub h_max: usize,
    pub h0: i64,
    pub d_max: i64,
    pub q_min: i64,
    pub q_max: i64,
    pub m_max: usize,
    pub chi0: i64,
    pub seed: u64,
    pub vectors: Vec<MukaiVector>,
    pub n_max: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// An internal invariant failed: exit 1.
    Invariant(String),
    /// The command ran but reported a failure (e.g. `verify`): exit 1, no diagnostic.
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) | CliError::Failed => 1,
        }
    }
}

impl From<RayError> for CliError {
    fn from(e: RayError) -> Self {
        match e {
            RayError::InvalidContext(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<KkvError> for CliError {
    fn from(e: KkvError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `key=value` lines; `#` starts a comment. `vector` may repeat.
pub fn parse_config(text: &str) -> Result<HashMap<String, Vec<String>>, CliError> {
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        const KNOWN: [&str; 12] =
            ["h-max", "h0", "d-max", "q-min", "q-max", "m-max", "chi0", "seed", "vector", "n-max", "format", "output"];
        if !KNOWN.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        out.entry(key).or_default().push(v.trim().to_string());
    }
    Ok(out)
}

fn from_file<T: std::str::FromStr>(file: &HashMap<String, Vec<String>>, key: &str) -> Result<Option<T>, CliError> {
    match file.get(key).and_then(|v| v.last()) {
        None => Ok(None),
        Some(s) => s.parse().map(Some).map_err(|_| usage(format!("config: invalid value {s:?} for {key}"))),
    }
}

fn parse_format(s: &str, origin: &str) -> Result<Format, CliError> {
    Format::from_str(s, true).map_err(|_| usage(format!("{origin}: unknown format {s:?} (json, csv, table)")))
}

impl RunConfig {
    /// Merges flags over the config file, the environment and the defaults.
    pub fn resolve(cli: Cli, env_format: Option<String>) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => HashMap::new(),
        };

        macro_rules! pick {
            ($field:ident, $key:literal, $default:expr) => {
                match cli.$field {
                    Some(v) => v,
                    None => from_file(&file, $key)?.unwrap_or($default),
                }
            };
        }

        let (q_min_default, q_max_default) = (-5, 5);
        let format = match cli.format {
            Some(f) => f,
            None => match file.get("format").and_then(|v| v.last()) {
                Some(s) => parse_format(s, "config")?,
                None => match env_format.filter(|s| !s.is_empty()) {
                    Some(s) => parse_format(&s, FORMAT_ENV)?,
                    None => Format::Table,
                },
            },
        };
        let vector_strings = if cli.vectors.is_empty() {
            file.get("vector").cloned().unwrap_or_default()
        } else {
            cli.vectors.clone()
        };
        let vectors = vector_strings
            .iter()
            .map(|s| s.parse::<MukaiVector>().map_err(|e| usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;

        let cfg = RunConfig {
            command: cli.command,
            h_max: pick!(h_max, "h-max", 10),
            h0: pick!(h0, "h0", 1),
            d_max: pick!(d_max, "d-max", 2),
            q_min: pick!(q_min, "q-min", q_min_default),
            q_max: pick!(q_max, "q-max", q_max_default),
            m_max: pick!(m_max, "m-max", 6),
            chi0: pick!(chi0, "chi0", 1),
            seed: pick!(seed, "seed", 0),
            vectors,
            n_max: pick!(n_max, "n-max", 10),
            format,
            output: cli.output.clone().or(from_file::<PathBuf>(&file, "output")?),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.q_min > self.q_max {
            return Err(usage(format!("--q-min {} exceeds --q-max {}", self.q_min, self.q_max)));
        }
        match self.command {
            Command::Pairs if self.h0 < 0 => Err(usage("--h0 must be >= 0")),
            Command::Pairs if self.d_max < 1 => Err(usage("--d-max must be >= 1")),
            Command::Vw if self.m_max < 1 => Err(usage("--m-max must be >= 1")),
            Command::Vw if self.chi0 == 0 => Err(usage("--chi0 must be nonzero (degenerate twist)")),
            Command::Js if self.vectors.is_empty() => Err(usage("js needs at least one --vector r,m,h0,s")),
            _ => Ok(()),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header).expect("in-memory write");
    for row in rows {
        wtr.write_record(row).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn run_kkv(cfg: &RunConfig) -> Result<String, CliError> {
    let table = crate::kkv::compute_gv_table(cfg.h_max)?;
    Ok(match cfg.format {
        Format::Json => table.to_json() + "\n",
        Format::Csv => table.to_csv(),
        Format::Table => table.to_pretty(),
    })
}

#[derive(Serialize)]
struct PairsOutput {
    h0: i64,
    d_max: i64,
    q_min: i64,
    q_max: i64,
    f_gw_red: Vec<SeriesRecord>,
    z_chi: Vec<SeriesRecord>,
    z_naive: Vec<SeriesRecord>,
    z_twistor: Vec<SeriesRecord>,
    bps_display_minus_z_chi: Vec<SeriesRecord>,
}

fn run_pairs(cfg: &RunConfig) -> Result<String, CliError> {
    let ctx = RayContext::new(cfg.h0, cfg.d_max, cfg.q_min, cfg.q_max)?;
    let gv = gv_table_cached(ctx.required_h_max().max(0) as usize)?;
    let comp = RayComputation::new(ctx, &gv)?;
    let z_chi = comp.z_chi();
    let series: [(&str, Series); 5] = [
        ("f_gw_red", comp.f_gw_red()),
        ("z_chi", z_chi.clone()),
        ("z_naive", comp.z_naive()),
        ("z_twistor", comp.z_twistor()),
        ("bps_display_minus_z_chi", &comp.bps_display_series() - &z_chi),
    ];
    let recs = |s: &Series| series_records(s, cfg.q_min, cfg.q_max);
    Ok(match cfg.format {
        Format::Json => to_json(&PairsOutput {
            h0: cfg.h0,
            d_max: cfg.d_max,
            q_min: cfg.q_min,
            q_max: cfg.q_max,
            f_gw_red: recs(&series[0].1),
            z_chi: recs(&series[1].1),
            z_naive: recs(&series[2].1),
            z_twistor: recs(&series[3].1),
            bps_display_minus_z_chi: recs(&series[4].1),
        }),
        Format::Csv => {
            let mut out = String::new();
            for (name, s) in &series {
                for line in records_to_csv(&recs(s)).lines().skip(1) {
                    let _ = writeln!(out, "{name},{line}");
                }
            }
            format!("series,d,n,num,den\n{out}")
        }
        Format::Table => {
            let mut out = String::new();
            for (name, s) in &series {
                let _ = writeln!(out, "{name} (h0={}, rows q^n, columns v^d)", cfg.h0);
                out += &pretty_table(s, cfg.q_min, cfg.q_max, cfg.d_max);
                out.push('\n');
            }
            out
        }
    })
}

fn run_hilb(cfg: &RunConfig) -> Result<String, CliError> {
    let vals: Vec<String> = (0..=cfg.n_max).map(|n| hilb_euler(n).to_string()).collect();
    Ok(match cfg.format {
        Format::Json => to_json(&vals),
        Format::Csv => csv_rows(&["n", "euler"], vals.iter().enumerate().map(|(n, v)| [n.to_string(), v.clone()])),
        Format::Table => vals.join("\n") + "\n",
    })
}

const JS_HEADER: [&str; 8] = ["r", "m", "h0", "s", "pairing", "divisibility", "J_numerator", "J_denominator"];

fn run_js(cfg: &RunConfig) -> Result<String, CliError> {
    let records: Vec<JsRecord> = cfg.vectors.iter().map(JsRecord::new).collect();
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.r.to_string(),
                r.m.to_string(),
                r.h0.to_string(),
                r.s.to_string(),
                r.pairing.to_string(),
                r.divisibility.to_string(),
                r.j_numerator.clone(),
                r.j_denominator.clone(),
            ]
        })
        .collect();
    Ok(match cfg.format {
        Format::Json => to_json(&records),
        Format::Csv => csv_rows(&JS_HEADER, rows),
        Format::Table => aligned(&JS_HEADER, &rows),
    })
}

fn run_vw(cfg: &RunConfig) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vw = (0..cfg.m_max).map(|_| acceptance::random_rational(&mut rng)).collect();
    let ray = VwRay::new(cfg.chi0, vw).map_err(|e| usage(e.to_string()))?;
    let report = theorem_check(&ray).map_err(|e| CliError::Invariant(e.to_string()))?;
    let records: Vec<VwRecord> = report.records();
    const HEADER: [&str; 7] = ["M", "vw", "P", "P_tilde", "P_perp", "VW", "pass"];
    let rat = |r: &crate::algebra::RationalRepr| {
        if r.den == "1" {
            r.num.clone()
        } else {
            format!("{}/{}", r.num, r.den)
        }
    };
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                rat(&r.vw),
                rat(&r.p),
                rat(&r.p_tilde),
                rat(&r.p_perp),
                rat(&r.big_vw),
                r.pass.to_string(),
            ]
        })
        .collect();
    Ok(match cfg.format {
        Format::Json => to_json(&records),
        Format::Csv => csv_rows(&HEADER, rows),
        Format::Table => {
            let mut out = format!(
                "chi0 = {}, seed = {}, exp identity: {}\n",
                cfg.chi0,
                cfg.seed,
                if report.exp_identity { "holds" } else { "FAILS" }
            );
            out += &aligned(&HEADER, &rows);
            for (m, d) in crate::vafa_witten::discrepancies(&report) {
                let _ = writeln!(out, "VW_{m} - vw_{m} = {}", display(&d));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CriterionJson {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    seconds: f64,
}

fn run_verify(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    // the multiple cover sweep deliberately visits empty Hilbert schemes
    let level = log::max_level();
    log::set_max_level(level.min(log::LevelFilter::Error));
    let results = acceptance::run_all(cfg.seed);
    log::set_max_level(level);
    let all = results.iter().all(|r| r.pass);
    let out = match cfg.format {
        Format::Json => to_json(
            &results
                .iter()
                .map(|r| CriterionJson {
                    id: r.id,
                    name: r.name,
                    pass: r.pass,
                    detail: r.detail.clone(),
                    seconds: r.elapsed.as_secs_f64(),
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_rows(
            &["id", "name", "pass", "detail", "seconds"],
            results.iter().map(|r| {
                [
                    r.id.to_string(),
                    r.name.to_string(),
                    r.pass.to_string(),
                    r.detail.clone(),
                    format!("{:.3}", r.elapsed.as_secs_f64()),
                ]
            }),
        ),
        Format::Table => results.iter().map(|r| format!("{r}\n")).collect(),
    };
    Ok((out, all))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a resolved configuration, writing the artifact.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let (text, ok) = match cfg.command {
        Command::Kkv => (run_kkv(cfg)?, true),
        Command::Pairs => (run_pairs(cfg)?, true),
        Command::Hilb => (run_hilb(cfg)?, true),
        Command::Js => (run_js(cfg)?, true),
        Command::Vw => (run_vw(cfg)?, true),
        Command::Verify => run_verify(cfg)?,
    };
    emit(&text, cfg.output.as_deref())?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let result = RunConfig::resolve(cli, std::env::var(FORMAT_ENV).ok()).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}\n\nFor more information, try '--help'."),
                CliError::Invariant(msg) => eprintln!("internal invariant violated: {msg}"),
                CliError::Failed => eprintln!("verification failed"),
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str], env: Option<&str>) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("k3series").chain(args.iter().copied())).unwrap();
        RunConfig::resolve(cli, env.map(String::from))
    }

    #[test]
    fn defaults() {
        let cfg = resolve(&["kkv"], None).unwrap();
        assert_eq!((cfg.h_max, cfg.seed, cfg.format), (10, 0, Format::Table));
    }

    #[test]
    fn env_format_is_a_default_only() {
        assert_eq!(resolve(&["kkv"], Some("csv")).unwrap().format, Format::Csv);
        assert_eq!(resolve(&["kkv", "--format", "json"], Some("csv")).unwrap().format, Format::Json);
        assert!(matches!(resolve(&["kkv"], Some("xml")), Err(CliError::Usage(_))));
    }

    #[test]
    fn config_file_below_flags() {
        let dir = std::env::temp_dir().join(format!("k3series-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# ray\nh0 = 2\nd_max=3\nformat=csv\nvector=0,1,2,1\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = resolve(&["pairs", "--config", p, "--d-max", "1"], Some("json")).unwrap();
        assert_eq!((cfg.h0, cfg.d_max, cfg.format), (2, 1, Format::Csv));
        assert_eq!(cfg.vectors.len(), 1);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(matches!(parse_config("color=red"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config("h0"), Err(CliError::Usage(_))));
    }

    #[test]
    fn validation() {
        assert!(matches!(resolve(&["pairs", "--q-min", "3", "--q-max", "1"], None), Err(CliError::Usage(_))));
        assert!(matches!(resolve(&["vw", "--chi0", "0"], None), Err(CliError::Usage(_))));
        assert!(matches!(resolve(&["js"], None), Err(CliError::Usage(_))));
        assert!(matches!(resolve(&["js", "--vector", "1,2"], None), Err(CliError::Usage(_))));
    }

    #[test]
    fn invariant_violations_exit_1_and_name_the_coefficient() {
        let e = CliError::from(RayError::Integrality { series: "z_chi", monomial: "q^3*v^2".into(), value: "1/2".into() });
        assert_eq!(e.exit_code(), 1);
        assert!(matches!(&e, CliError::Invariant(msg) if msg.contains("q^3*v^2")));
        let e = CliError::from(KkvError::Integrality { g: 1, h: 2, value: "1/3".into() });
        assert!(matches!(&e, CliError::Invariant(msg) if msg.contains("n[1][2]")));
        assert_eq!(CliError::from(RayError::InvalidContext("d_max".into())).exit_code(), 2);
    }

    #[test]
    fn hilb_single_value() {
        let cfg = resolve(&["hilb", "--n-max", "0"], None).unwrap();
        assert_eq!(run_hilb(&cfg).unwrap(), "1\n");
    }
}
