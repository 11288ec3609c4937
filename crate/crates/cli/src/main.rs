//! Batch front end: eigenvalue tables, polynomial coefficients, collision
//! classes, Gram blocks and the verification suite, as JSON or CSV.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvop::hyper::{collision_classes, PolyFamily};
use mvop::model::eigen_table;
use mvop::verify::checks::gram_block;
use mvop::verify::{run_suite, Report};
use mvop::{parse_rational, Params};
use serde::Serialize;

const DEFAULT_GRID: [(&str, &str, &str, i64); 4] = [
    ("0", "1", "1", 1),
    ("1/2", "3/2", "1", 2),
    ("1", "1", "1/2", 2),
    ("0", "1", "3/2", 2),
];

#[derive(Parser)]
#[command(name = "mvop", version, about = "Exact matrix-valued orthogonal polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues lambda_j(w) of D and mu_j(w) of E
    Table(Common),
    /// Coefficients of every column P_w^j, ascending powers
    Polys(Common),
    /// Run the verification suite; without parameters, runs the default grid
    Verify(Common),
    /// Classes of (w, j) sharing an eigenvalue of D
    Collisions(Common),
    /// Gram blocks (P_w, P_w') in units of B(beta+1, alpha+1)
    Gram(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Rational "p/q" with optional sign
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<i64>,
    #[arg(long = "max-w", default_value_t = 6, allow_hyphen_values = true)]
    max_w: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; output does not depend on it
    #[arg(long, allow_hyphen_values = true)]
    jobs: Option<i64>,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

struct Config {
    params: Option<Params>,
    max_w: usize,
    format: Format,
    jobs: Option<usize>,
    out: Option<std::path::PathBuf>,
}

fn parse_params(alpha: &str, beta: &str, k: &str, ell: i64) -> Result<Params, String> {
    let alpha = parse_rational(alpha).map_err(|e| e.to_string())?;
    let beta = parse_rational(beta).map_err(|e| e.to_string())?;
    let k = parse_rational(k).map_err(|e| e.to_string())?;
    if ell < 1 {
        return Err(format!("invalid parameters: ell >= 1 violated (ell = {ell})"));
    }
    Params::new(alpha, beta, k, ell as usize).map_err(|e| e.to_string())
}

impl Common {
    fn into_config(self) -> Result<Config, String> {
        if self.max_w < 0 {
            return Err(format!("max_w >= 0 violated (max_w = {})", self.max_w));
        }
        let jobs = match self.jobs {
            Some(j) if j < 1 => return Err(format!("jobs >= 1 violated (jobs = {j})")),
            Some(j) => Some(j as usize),
            None => None,
        };
        let params = match (self.alpha, self.beta, self.k, self.ell) {
            (None, None, None, None) => None,
            (Some(a), Some(b), Some(k), Some(l)) => Some(parse_params(&a, &b, &k, l)?),
            _ => return Err("--alpha, --beta, --k and --ell must be given together".into()),
        };
        Ok(Config {
            params,
            max_w: self.max_w as usize,
            format: self.format,
            jobs,
            out: self.out,
        })
    }
}

impl Config {
    fn require_params(&self) -> Result<&Params, String> {
        self.params
            .as_ref()
            .ok_or_else(|| "--alpha, --beta, --k and --ell are required".to_string())
    }
}

/// Output plus whether everything checked passed.
struct Rendered {
    body: Vec<u8>,
    passed: bool,
}

type Handler = fn(&Config) -> Result<Rendered, String>;

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, String> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|e| e.to_string())?;
    body.push(b'\n');
    Ok(body)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

fn cmd_table(cfg: &Config) -> Result<Rendered, String> {
    let rows = eigen_table(cfg.require_params()?, cfg.max_w);
    let body = match cfg.format {
        Format::Json => json(&rows)?,
        Format::Csv => csv_rows(
            &["w", "j", "lambda", "mu"],
            rows.iter()
                .map(|r| vec![r.w.to_string(), r.j.to_string(), r.lambda.to_string(), r.mu.to_string()]),
        )?,
    };
    Ok(Rendered { body, passed: true })
}

fn build_family(p: &Params, max_w: usize) -> Result<PolyFamily, String> {
    PolyFamily::build(p, max_w).map_err(|e| e.to_string())
}

fn cmd_polys(cfg: &Config) -> Result<Rendered, String> {
    let p = cfg.require_params()?;
    let records = build_family(p, cfg.max_w)?.records();
    let body = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a, T> {
                params: &'a Params,
                columns: T,
            }
            json(&Out {
                params: p,
                columns: &records,
            })?
        }
        Format::Csv => {
            let mut header = vec![
                "w".to_string(),
                "j".into(),
                "lambda".into(),
                "mu".into(),
                "power".into(),
            ];
            header.extend((0..p.dim()).map(|i| format!("c{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = records.iter().flat_map(|r| {
                r.coeffs.iter().enumerate().map(move |(power, c)| {
                    let mut row = vec![r.w.to_string(), r.j.to_string(), r.lambda.clone(), r.mu.clone()];
                    row.push(power.to_string());
                    row.extend(c.iter().cloned());
                    row
                })
            });
            csv_rows(&header, rows)?
        }
    };
    Ok(Rendered { body, passed: true })
}

fn cmd_verify(cfg: &Config) -> Result<Rendered, String> {
    let grid = match &cfg.params {
        Some(p) => vec![p.clone()],
        None => DEFAULT_GRID
            .iter()
            .map(|(a, b, k, l)| parse_params(a, b, k, *l))
            .collect::<Result<_, _>>()?,
    };
    let reports: Vec<Report> = grid
        .iter()
        .map(|p| run_suite(p, cfg.max_w).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let passed = reports.iter().all(Report::passed);
    let body = match cfg.format {
        Format::Json => json(&reports)?,
        Format::Csv => csv_rows(
            &["alpha", "beta", "k", "ell", "check", "status", "witness"],
            reports.iter().flat_map(|r| {
                let p = &r.params;
                r.checks.iter().map(move |c| {
                    let status = if c.status == mvop::verify::Status::Pass {
                        "pass"
                    } else {
                        "fail"
                    };
                    vec![
                        p.alpha().to_string(),
                        p.beta().to_string(),
                        p.k().to_string(),
                        p.ell().to_string(),
                        c.name.clone(),
                        status.to_string(),
                        c.witness.clone().unwrap_or_default(),
                    ]
                })
            }),
        )?,
    };
    Ok(Rendered { body, passed })
}

#[derive(Serialize)]
struct ClassOut {
    lambda: String,
    members: Vec<(usize, usize)>,
    gap_property: bool,
}

fn cmd_collisions(cfg: &Config) -> Result<Rendered, String> {
    let classes: Vec<ClassOut> = collision_classes(cfg.require_params()?, cfg.max_w)
        .into_iter()
        .map(|c| ClassOut {
            gap_property: c.satisfies_gap_property(),
            lambda: c.lambda.to_string(),
            members: c.members,
        })
        .collect();
    let passed = classes.iter().all(|c| c.gap_property);
    let body = match cfg.format {
        Format::Json => json(&classes)?,
        Format::Csv => csv_rows(
            &["lambda", "w", "j"],
            classes.iter().flat_map(|c| {
                c.members
                    .iter()
                    .map(move |(w, j)| vec![c.lambda.clone(), w.to_string(), j.to_string()])
            }),
        )?,
    };
    Ok(Rendered { body, passed })
}

#[derive(Serialize)]
struct GramOut {
    w: usize,
    w2: usize,
    block: Vec<Vec<String>>,
}

fn cmd_gram(cfg: &Config) -> Result<Rendered, String> {
    use rayon::prelude::*;
    let p = cfg.require_params()?;
    let fam = build_family(p, cfg.max_w)?;
    let pairs: Vec<(usize, usize)> = (0..=cfg.max_w)
        .flat_map(|w| (0..=cfg.max_w).map(move |w2| (w, w2)))
        .collect();
    let blocks = pairs
        .par_iter()
        .map(|&(w, w2)| gram_block(&fam, w, w2).map(|g| (w, w2, g)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let passed = blocks.iter().all(|(w, w2, g)| {
        if w == w2 {
            g.is_diagonal() && (0..g.rows()).all(|i| g[(i, i)] > mvop::Rational::from_integer(0.into()))
        } else {
            g.is_zero()
        }
    });
    let out: Vec<GramOut> = blocks
        .iter()
        .map(|(w, w2, g)| GramOut {
            w: *w,
            w2: *w2,
            block: (0..g.rows())
                .map(|i| g.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        })
        .collect();
    let body = match cfg.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(
            &["w", "w2", "row", "col", "value"],
            out.iter().flat_map(|b| {
                b.block.iter().enumerate().flat_map(move |(r, row)| {
                    row.iter().enumerate().map(move |(c, v)| {
                        vec![
                            b.w.to_string(),
                            b.w2.to_string(),
                            r.to_string(),
                            c.to_string(),
                            v.clone(),
                        ]
                    })
                })
            }),
        )?,
    };
    Ok(Rendered { body, passed })
}

fn run(command: Command) -> Result<Rendered, String> {
    let (common, f): (Common, Handler) = match command {
        Command::Table(c) => (c, cmd_table),
        Command::Polys(c) => (c, cmd_polys),
        Command::Verify(c) => (c, cmd_verify),
        Command::Collisions(c) => (c, cmd_collisions),
        Command::Gram(c) => (c, cmd_gram),
    };
    let cfg = common.into_config()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| e.to_string())?;
    let rendered = pool.install(|| f(&cfg))?;
    match &cfg.out {
        Some(path) => fs::write(path, &rendered.body).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => io::stdout()
            .write_all(&rendered.body)
            .map_err(|e| format!("cannot write output: {e}"))?,
    }
    Ok(rendered)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) if r.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
