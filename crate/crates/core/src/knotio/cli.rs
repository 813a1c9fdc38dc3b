use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use super::{parse_braid, BasisCache, BraidWord};
use crate::complex::{crossing_complex, tensor};
use crate::error::Result;
use crate::hecke::{colored_homfly, complex_class, HeckeElement};
use crate::hochschild::{e2_invariant, euler_prediction, normalization_shift, Normalization, TriGradedSeries};

#[derive(Parser, Debug)]
#[command(name = "chromo", about = "Colored triply graded link homology from braid closures")]
struct Cli {
    /// Largest q-degree computed, in powers of q^{1/2}
    #[arg(long, default_value_t = 20, global = true)]
    trunc: i64,
    /// Directory for cached bimodule bases
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Colored HOMFLYPT data of the closure
    Polynomial { braid: String },
    /// Triply graded invariant of the closure
    Homology { braid: String },
    /// Compare the Euler characteristic with the colored HOMFLYPT polynomial
    Verify { braid: String },
    /// Calibration and invariance checks
    Selftest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub q: i64,
    pub hh: i64,
    pub hom: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub q_units: String,
    pub kappa: String,
    pub delta: String,
    pub normalization: Normalization,
    pub ranks: String,
}

/// The JSON document written by `homology` and `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub braid: String,
    pub truncation: i64,
    pub series: Vec<Cell>,
    pub euler: String,
    pub calibration: Calibration,
}

pub fn report(w: &BraidWord, s: &TriGradedSeries) -> Report {
    Report {
        braid: w.to_string(),
        truncation: s.bound,
        series: s.cells().map(|((q, hh, hom), dim)| Cell { q, hh, hom, dim }).collect(),
        euler: s.euler_characteristic().to_string(),
        calibration: Calibration {
            q_units: "q^(1/2)".into(),
            kappa: "q^(-1/2)".into(),
            delta: "(1 + a q)/(1 - q)".into(),
            normalization: normalization_shift(w),
            ranks: "mod 2^61-1".into(),
        },
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the exit status together with the text to print.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(r) => r,
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn warm_cache(cli: &Cli, w: &BraidWord) -> Result<()> {
    let Some(dir) = &cli.cache else { return Ok(()) };
    let cache = BasisCache::new(dir)?;
    let colorings = w.colorings();
    for (step, &g) in w.word().iter().enumerate() {
        let p = g.unsigned_abs() as usize - 1;
        let (m, n) = (colorings[step][p], colorings[step][p + 1]);
        for i in 0..=m.min(n) {
            cache.warm(m, n, i, cli.trunc)?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(i32, String)> {
    let mut out = String::new();
    match &cli.command {
        Command::Polynomial { braid } => {
            let w = parse_braid(braid)?;
            let hf = colored_homfly(&w)?;
            let euler = euler_prediction(&w, cli.trunc)?;
            match cli.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "braid": w.to_string(),
                        "trace": hf.numerator.to_string(),
                        "denominator": hf.denominator.to_string(),
                        "euler": euler.to_string(),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?).unwrap();
                }
                Format::Text => {
                    writeln!(out, "braid: {w}").unwrap();
                    writeln!(out, "trace: {}", hf.numerator).unwrap();
                    writeln!(out, "denominator: {}", hf.denominator).unwrap();
                    writeln!(out, "euler: {euler}").unwrap();
                }
            }
            Ok((0, out))
        }
        Command::Homology { braid } => {
            let w = parse_braid(braid)?;
            w.check_closable()?;
            warm_cache(cli, &w)?;
            let s = e2_invariant(&w, cli.trunc)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report(&w, &s))?).unwrap(),
                Format::Text => {
                    writeln!(out, "braid: {w}").unwrap();
                    write!(out, "{s}").unwrap();
                    writeln!(out, "euler: {}", s.euler_characteristic()).unwrap();
                }
            }
            Ok((0, out))
        }
        Command::Verify { braid } => {
            let w = parse_braid(braid)?;
            w.check_closable()?;
            warm_cache(cli, &w)?;
            let s = e2_invariant(&w, cli.trunc)?;
            let chi = s.euler_characteristic();
            let expected = euler_prediction(&w, cli.trunc)?;
            let ok = chi == expected;
            let verdict = if ok { "PASS" } else { "FAIL" };
            match cli.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "result": verdict,
                        "report": report(&w, &s),
                        "expected_euler": expected.to_string(),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?).unwrap();
                }
                Format::Text => {
                    writeln!(out, "homology euler: {chi}").unwrap();
                    writeln!(out, "polynomial:     {expected}").unwrap();
                    writeln!(out, "{verdict}").unwrap();
                }
            }
            Ok((if ok { 0 } else { 1 }, out))
        }
        Command::Selftest => {
            let d = cli.trunc.min(8);
            let mut all = true;
            for (name, r) in selftest(d) {
                let ok = r.as_ref().is_ok_and(|b| *b);
                all &= ok;
                let extra = match r {
                    Err(e) => format!(" ({e})"),
                    _ => String::new(),
                };
                writeln!(out, "{} {name}{extra}", if ok { "PASS" } else { "FAIL" }).unwrap();
            }
            Ok((if all { 0 } else { 1 }, out))
        }
    }
}

type Check = (&'static str, Result<bool>);

fn selftest(d: i64) -> Vec<Check> {
    let b = |s: &str| parse_braid(s).expect("fixed braid");
    let same = |x: &str, y: &str| -> Result<bool> { Ok(e2_invariant(&b(x), d)? == e2_invariant(&b(y), d)?) };
    let anchor = || -> Result<bool> {
        let c = crossing_complex(1, 1, true, d)?;
        let expected = HeckeElement::generator(2, 1).scale(&crate::exactalg::LaurentQ::q_half(1));
        Ok(complex_class(&c)? == expected)
    };
    let r2 = || -> Result<bool> {
        let p = crossing_complex(1, 1, true, d)?;
        let n = crossing_complex(1, 1, false, d)?;
        Ok(complex_class(&tensor(&p, &n)?)? == HeckeElement::one(2))
    };
    let euler = |s: &str| -> Result<bool> {
        let w = b(s);
        Ok(e2_invariant(&w, d)?.euler_characteristic() == euler_prediction(&w, d)?)
    };
    vec![
        ("positive crossing class is q^(1/2) sigma", anchor()),
        ("crossing classes multiply to the identity", r2()),
        ("positive stabilization", same("colors: 1 ; word:", "colors: 1 1 ; word: 1")),
        ("negative stabilization", same("colors: 1 ; word:", "colors: 1 1 ; word: -1")),
        ("Reidemeister II", same("colors: 1 1 ; word:", "colors: 1 1 ; word: 1 -1")),
        ("unknot Euler characteristic", euler("colors: 1 ; word:")),
        ("color 2 unknot Euler characteristic", euler("colors: 2 ; word:")),
        ("trefoil Euler characteristic", euler("colors: 1 1 ; word: 1 1 1")),
    ]
}
