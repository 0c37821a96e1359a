use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use liouville_core::verify::batch::{self, BatchParams};
use liouville_core::verify::{compute_l1, fourier_spectrum, interval_census, LemmaId};
use liouville_core::witness::{
    least_witness, scan_range, witness_cap, ScanConfig, Sign, WitnessRecord, CSV_HEADER,
    DEFAULT_SEGMENT_SIZE, MIN_SEGMENT_SIZE,
};
use liouville_core::{Error, PrimeModulus};

const EXIT_USAGE: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "liouville", version, about = "Liouville sign witnesses modulo a prime and numerical checks of the supporting character-sum estimates")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RunConfig {
    /// Absolute tolerance for identity checks.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_f64)]
    tolerance: f64,
    /// Sieve block size in integers.
    #[arg(long, global = true, default_value_t = DEFAULT_SEGMENT_SIZE, value_parser = segment_size)]
    segment_size: u64,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "LP_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Seed for randomized trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Least n = a (mod q) of each Liouville sign.
    Witness {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        /// The search cap is ceil(q^(5/2 + epsilon)).
        #[arg(long, default_value_t = 0.0, value_parser = non_negative_f64)]
        epsilon: f64,
    },
    /// Witnesses for every class of every prime in a range.
    Scan {
        #[arg(long)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 0.0, value_parser = non_negative_f64)]
        epsilon: f64,
    },
    /// Run one verifier, or all of them.
    Verify {
        /// A lemma name, or `all`.
        #[arg(long, default_value = "all")]
        lemma: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0.01, value_parser = non_negative_f64)]
        epsilon: f64,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p_cap: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        set_a: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        set_b: Option<Vec<u64>>,
        #[arg(long)]
        x: Option<u64>,
    },
    /// Fourier coefficients of lambda on (Z/qZ)^* against every character.
    Spectrum {
        #[arg(long)]
        q: u64,
    },
    /// L(1, chi_q) with a certified error bound.
    Lfunction {
        #[arg(long)]
        q: u64,
    },
    /// Sign counts over the intervals [M, M + q).
    Census {
        #[arg(long)]
        q: u64,
        /// Upper end of the sieved range; defaults to 10q.
        #[arg(long)]
        x: Option<u64>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

fn non_negative_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is negative")),
        Err(e) => Err(e.to_string()),
    }
}

fn segment_size(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
    if v < MIN_SEGMENT_SIZE {
        return Err(format!("must be at least {MIN_SEGMENT_SIZE}"));
    }
    Ok(v)
}

struct Outcome {
    text: String,
    summary: Option<String>,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            summary: None,
            code: 0,
        }
    }
}

fn json_line(out: &mut String, value: &serde_json::Value) {
    out.push_str(&value.to_string());
    out.push('\n');
}

fn witness(run: &RunConfig, q: u64, a: u64, eps: f64) -> liouville_core::Result<Outcome> {
    let modulus = PrimeModulus::new(q)?;
    let cap = witness_cap(q, eps);
    let find = |sign: Sign| -> liouville_core::Result<u64> {
        least_witness(&modulus, a, sign, cap, run.segment_size)?.ok_or(Error::CapExceeded {
            q,
            a,
            sign: sign.value(),
            cap,
        })
    };
    let record = WitnessRecord {
        q,
        a,
        least_plus: find(Sign::Plus)?,
        least_minus: find(Sign::Minus)?,
        cap,
    };
    let text = match run.format {
        Format::Json => format!("{}\n", serde_json::to_string(&record).expect("plain struct")),
        Format::Csv => format!(
            "q,a,least_plus,least_minus,cap\n{},{},{},{},{}\n",
            record.q, record.a, record.least_plus, record.least_minus, record.cap
        ),
    };
    Ok(Outcome::ok(text))
}

fn scan(run: &RunConfig, q_min: u64, q_max: u64, eps: f64) -> liouville_core::Result<Outcome> {
    let config = ScanConfig::new(run.segment_size)?;
    let reports = scan_range(q_min, q_max, eps, &config)?;
    let mut text = String::new();
    match run.format {
        Format::Json => {
            for r in &reports {
                text.push_str(&serde_json::to_string(r).expect("plain struct"));
                text.push('\n');
            }
        }
        Format::Csv => {
            if !reports.is_empty() {
                text.push_str(CSV_HEADER);
                text.push('\n');
            }
            for r in &reports {
                text.push_str(&r.csv_rows());
            }
        }
    }
    let summary = reports
        .iter()
        .max_by(|x, y| x.exponent.total_cmp(&y.exponent))
        .map(|worst| {
            format!(
                "scanned {} primes; max exponent {:.6} at q = {} (N(q) = {})",
                reports.len(),
                worst.exponent,
                worst.q,
                worst.n_of_q
            )
        })
        .unwrap_or_else(|| "scanned 0 primes".to_string());
    Ok(Outcome {
        text,
        summary: Some(summary),
        code: 0,
    })
}

fn verify(run: &RunConfig, lemma: &str, params: BatchParams) -> liouville_core::Result<Outcome> {
    let selector = match lemma {
        "all" => None,
        name => Some(name.parse::<LemmaId>()?),
    };
    let reports = batch::run(selector, &params)?;
    let mut text = String::new();
    if run.format == Format::Csv {
        text.push_str("lemma,pass,lhs,rhs,residual,tolerance,runtime_ms\n");
    }
    for r in &reports {
        match run.format {
            Format::Json => {
                text.push_str(&r.to_json());
                text.push('\n');
            }
            Format::Csv => {
                let lhs = r.lhs.as_complex();
                let rhs = r.rhs.as_complex();
                text.push_str(&format!(
                    "{},{},{},{},{:e},{:e},{}\n",
                    r.lemma,
                    r.pass,
                    format_complex(lhs.re, lhs.im),
                    format_complex(rhs.re, rhs.im),
                    r.residual,
                    r.tolerance,
                    r.runtime_ms
                ));
            }
        }
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.lemma.to_string()).collect();
    let summary = if failed.is_empty() {
        format!("{} of {} checks passed", reports.len(), reports.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Ok(Outcome {
        text,
        summary: Some(summary),
        code: if failed.is_empty() { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn format_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{im:+}i")
    }
}

fn spectrum(run: &RunConfig, q: u64) -> liouville_core::Result<Outcome> {
    let modulus = PrimeModulus::new(q)?;
    let spectrum = fourier_spectrum(&modulus)?;
    let mut text = String::new();
    if run.format == Format::Csv {
        text.push_str("q,k,order,re,im,abs\n");
    }
    for (k, c) in spectrum.coefficients.iter().enumerate() {
        let order = modulus.character(k as u64).order();
        match run.format {
            Format::Json => json_line(
                &mut text,
                &json!({"q": q, "k": k, "order": order, "re": c.re, "im": c.im, "abs": c.norm()}),
            ),
            Format::Csv => text.push_str(&format!("{q},{k},{order},{},{},{}\n", c.re, c.im, c.norm())),
        }
    }
    Ok(Outcome::ok(text))
}

fn lfunction(run: &RunConfig, q: u64) -> liouville_core::Result<Outcome> {
    let l1 = compute_l1(&PrimeModulus::new(q)?, run.tolerance)?;
    let text = match run.format {
        Format::Json => format!("{}\n", serde_json::to_string(&l1).expect("plain struct")),
        Format::Csv => format!(
            "q,value,error_bound,terms\n{},{},{:e},{}\n",
            l1.q, l1.value, l1.error_bound, l1.terms
        ),
    };
    Ok(Outcome::ok(text))
}

fn census(run: &RunConfig, q: u64, x: Option<u64>) -> liouville_core::Result<Outcome> {
    let table = interval_census(&PrimeModulus::new(q)?, x.unwrap_or(10 * q))?;
    let mut text = String::new();
    match run.format {
        Format::Json => {
            for row in &table.rows {
                json_line(
                    &mut text,
                    &json!({"q": q, "start": row.start, "count_minus": row.count_minus, "count_plus": row.count_plus}),
                );
            }
        }
        Format::Csv => {
            text.push_str("q,start,count_minus,count_plus\n");
            for row in &table.rows {
                text.push_str(&format!("{q},{},{},{}\n", row.start, row.count_minus, row.count_plus));
            }
        }
    }
    Ok(Outcome {
        text,
        summary: Some(format!("max deviation from phi(q)/2: {}", table.max_deviation)),
        code: 0,
    })
}

fn execute(cli: &Cli) -> liouville_core::Result<Outcome> {
    let run = &cli.run;
    match &cli.command {
        Command::Witness { q, a, epsilon } => witness(run, *q, *a, *epsilon),
        Command::Scan { q_min, q_max, epsilon } => scan(run, *q_min, *q_max, *epsilon),
        Command::Verify {
            lemma,
            q,
            epsilon,
            n,
            p_cap,
            set_a,
            set_b,
            x,
        } => {
            let mut params = BatchParams::new(*q);
            params.n = *n;
            params.p_cap = *p_cap;
            params.x = *x;
            params.set_a = set_a.clone();
            params.set_b = set_b.clone();
            params.tolerance = run.tolerance;
            params.epsilon = *epsilon;
            params.seed = run.seed;
            verify(run, lemma, params)
        }
        Command::Spectrum { q } => spectrum(run, *q),
        Command::Lfunction { q } => lfunction(run, *q),
        Command::Census { q, x } => census(run, *q, *x),
    }
}

fn emit(run: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &run.output {
        Some(path) => {
            let mut file = BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            );
            file.write_all(text.as_bytes())?;
            file.flush()?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(workers) = cli.run.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build_global()
        {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.run, &outcome.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_USAGE);
            }
            if let Some(summary) = outcome.summary {
                eprintln!("{summary}");
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_USAGE,
            })
        }
    }
}
