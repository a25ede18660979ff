use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use trigal_core::analysis::{analyze, AnalysisOptions};
use trigal_core::catalog::{derived_spectra, PresetSet, Provenance};
use trigal_core::certify::{certify_image, congruence_check, parse_coefficients};
use trigal_core::family::parse_table;
use trigal_core::sieves::{
    cubic_cm_sieve, duality_sieve, enumerate_characters, lemma83_verify, reducibility_sieve, selfdual_sieve,
    Lemma83Mode, Probe, SieveReport,
};
use trigal_core::surfaces::count_affine;
use trigal_core::{EigenTable, Error};

/// `writeln!` into the output buffer; formatting into a `String` cannot fail.
macro_rules! outln {
    ($o:expr) => {{
        $o.push('\n');
    }};
    ($o:expr, $($t:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($o, $($t)*);
    }};
}

const EXIT_PARSE: u8 = 1;
const EXIT_UNVERIFIABLE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "trigal", version, about = "Residual image sieves for 3-dimensional Galois representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct PresetArgs {
    /// Spectrum preset for every l (default: per-l defaults for D)
    #[arg(long)]
    preset: Option<String>,
    /// Alternative spectra.cfg
    #[arg(long)]
    spectra: Option<PathBuf>,
}

impl PresetArgs {
    fn load(&self) -> anyhow::Result<PresetSet> {
        match &self.spectra {
            Some(p) => Ok(PresetSet::parse(&read(p)?).with_context(|| p.display().to_string())?),
            None => Ok(PresetSet::builtin()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: sieves, exceptional candidates, per-l verdicts
    Analyze {
        table: PathBuf,
        #[arg(long, default_value_t = 200)]
        lmax: u64,
        #[command(flatten)]
        presets: PresetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one family-level sieve
    Sieve {
        #[command(subcommand)]
        kind: SieveKind,
    },
    /// Verdict for a single prime l
    Certify {
        table: PathBuf,
        ell: u64,
        #[command(flatten)]
        presets: PresetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Order check of roots of twisted cubics over F_{l^2}
    Lemma83 {
        ell: u64,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Affine point counts on S_a
    CountPoints {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Single prime; prints the affine count
        #[arg(long, required_unless_present = "pmax")]
        p: Option<u64>,
        /// CSV rows for every odd prime up to this bound
        #[arg(long, conflicts_with = "p")]
        pmax: Option<u64>,
        /// CSV output for a single prime
        #[arg(long)]
        csv: bool,
    },
    /// Recompute element-order spectra and print a spectra.cfg draft
    Orders {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a_p = c(p) + b_p mod l against a second coefficient table
    Congruence {
        table: PathBuf,
        coefficients: PathBuf,
        #[arg(long)]
        ell: u64,
        /// Coefficients of c, constant term first
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        offset: Vec<i128>,
    },
}

#[derive(Subcommand)]
enum SieveKind {
    /// Intersection over groups of the union of probe norms
    Reducible {
        table: PathBuf,
        /// p:+1, p:-1 or p:+-1
        #[arg(long = "probe", required = true)]
        probes: Vec<String>,
        /// Group of each probe, in order (default: all in one group)
        #[arg(long = "group", num_args = 1..)]
        groups: Vec<u32>,
    },
    /// N(a_p) = p^2 at gamma(p) = -1, for every quadratic gamma
    Duality { table: PathBuf },
    /// a_p^3 = conj(a_p)^3
    Selfdual {
        table: PathBuf,
        /// Witness primes (default: every nonreal a_p)
        #[arg(long = "witness")]
        witnesses: Vec<u64>,
    },
    /// a_p = 0 at psi(p) != 1, for every cubic psi
    Cubic { table: PathBuf },
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_table(path: &Path) -> anyhow::Result<EigenTable> {
    Ok(parse_table(&read(path)?).with_context(|| path.display().to_string())?)
}

fn print_sieve(out: &mut String, r: &SieveReport) {
    outln!(out, "{}: raw {}; candidates {}", r.sieve_id, r.raw, r.candidates);
    for w in &r.witnesses {
        let i = w.exponent.map(|i| format!(" i={i}")).unwrap_or_default();
        outln!(out, "  p={} sign={:+}{i} value={} norm={}", w.p, w.sign, w.value, w.norm);
    }
    if r.inconclusive {
        outln!(out, "  inconclusive: no witness");
    }
}

fn run(cli: Cli, out: &mut String) -> anyhow::Result<()> {
    match cli.command {
        Command::Analyze { table, lmax, presets, format } => {
            let t = load_table(&table)?;
            let opts = AnalysisOptions { lmax, preset: presets.preset.clone(), presets: presets.load()? };
            let report = analyze(&t, &opts)?;
            match format {
                Format::Text => out.push_str(&report.to_text()),
                Format::Json => outln!(out, "{}", report.to_json()),
            }
        }
        Command::Sieve { kind } => run_sieve(kind, out)?,
        Command::Certify { table, ell, presets, format } => {
            let t = load_table(&table)?;
            let set = presets.load()?;
            let name = presets.preset.clone().unwrap_or_else(|| {
                let ds = set.defaults_for(t.d());
                let s = trigal_core::splitting(t.d(), ell).ok();
                ds.iter()
                    .find(|p| s.is_some_and(|s| p.applies.matches(s)))
                    .or(ds.first())
                    .map(|p| p.name.clone())
                    .unwrap_or_else(|| "derived".into())
            });
            let preset = set.get(&name).with_context(|| format!("unknown preset {name:?}"))?;
            let v = certify_image(ell, &t, preset)?;
            match format {
                Format::Json => {
                    let value = serde_json::to_value(&v)?;
                    outln!(out, "{}", serde_json::to_string_pretty(&value)?);
                }
                Format::Text => {
                    outln!(out, "l = {} ({:?}, preset {name}): {}", v.ell, v.splitting, v.status);
                    for (case, w) in &v.witnesses {
                        let p = w.p.map(|p| format!("p = {p}: ")).unwrap_or_default();
                        outln!(out, "  {case:<9} excluded  {p}{}", w.detail);
                    }
                    for (case, e) in &v.evidence {
                        outln!(out, "  {case:<9} open      {e}");
                    }
                }
            }
        }
        Command::Lemma83 { ell, exhaustive, samples } => {
            let mode = match (exhaustive, samples) {
                (_, Some(n)) => Lemma83Mode::Sampled { samples: n },
                _ => Lemma83Mode::Exhaustive,
            };
            let r = lemma83_verify(ell, mode)?;
            outln!(out, "{r}");
            for v in &r.violations {
                outln!(out, "  a={:?} p={} order={}: {}", v.a, v.p, v.order, v.reason);
            }
        }
        Command::CountPoints { a, p, pmax, csv } => match (p, pmax) {
            (Some(p), _) if !csv => outln!(out, "{}", count_affine(a, p)?.affine_count),
            (p, pmax) => {
                outln!(out, "a,p,affine_count,character_sum");
                let ps = match (p, pmax) {
                    (Some(p), _) => vec![p],
                    (None, Some(m)) => trigal_core::arith::int::primes_between(3, m),
                    (None, None) => unreachable!("clap requires --p or --pmax"),
                };
                for p in ps {
                    let c = count_affine(a, p)?;
                    outln!(out, "{},{},{},{}", c.a, c.p, c.affine_count, c.character_sum);
                }
            }
        },
        Command::Orders { out: dest } => {
            let derived = derived_spectra()?;
            let set = PresetSet::builtin();
            let mut preset = set.get("derived").context("built-in derived preset")?.clone();
            for s in preset.spectra.iter_mut().filter(|s| s.provenance == Provenance::Derived) {
                if let Some(o) = derived.get(&s.case_id) {
                    s.orders = o.clone();
                }
            }
            let text = format!("# draft generated by the group-closure oracle\n\n{}", preset.to_text());
            match dest {
                Some(path) => std::fs::write(&path, text).with_context(|| path.display().to_string())?,
                None => out.push_str(&text),
            }
        }
        Command::Congruence { table, coefficients, ell, offset } => {
            let t = load_table(&table)?;
            let b = parse_coefficients(&read(&coefficients)?).with_context(|| coefficients.display().to_string())?;
            let r = congruence_check(&t, &b, &offset, ell)?;
            outln!(out, "{} primes checked, {} violations", r.checked.len(), r.violations.len());
            for p in &r.violations {
                outln!(out, "  violation at p = {p}");
            }
        }
    }
    Ok(())
}

fn run_sieve(kind: SieveKind, out: &mut String) -> anyhow::Result<()> {
    match kind {
        SieveKind::Reducible { table, probes, groups } => {
            let t = load_table(&table)?;
            if !groups.is_empty() && groups.len() != probes.len() {
                bail!(Usage(format!("{} --group values for {} probes", groups.len(), probes.len())));
            }
            let probes = probes
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let p: Probe = s.parse().map_err(|e: Error| Usage(e.to_string()))?;
                    Ok(Probe::new(p.p, &p.signs, groups.get(k).copied().unwrap_or(0))?)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            print_sieve(out, &reducibility_sieve(&t, &probes)?);
        }
        SieveKind::Duality { table } => {
            let t = load_table(&table)?;
            for gamma in enumerate_characters(t.descriptor.quadratic_character_modulus(), 2)? {
                outln!(out, "{gamma}");
                print_sieve(out, &duality_sieve(&t, &gamma)?);
            }
        }
        SieveKind::Cubic { table } => {
            let t = load_table(&table)?;
            let psis = enumerate_characters(t.descriptor.cubic_character_modulus(), 3)?;
            if psis.is_empty() {
                outln!(out, "no cubic characters mod {}: case d cannot occur", t.descriptor.cubic_character_modulus());
            }
            for psi in psis {
                outln!(out, "{psi}");
                print_sieve(out, &cubic_cm_sieve(&t, &psi)?);
            }
        }
        SieveKind::Selfdual { table, witnesses } => {
            let t = load_table(&table)?;
            let ws = if witnesses.is_empty() {
                t.iter().filter(|(_, a)| !a.is_real()).map(|e| e.0).collect()
            } else {
                witnesses
            };
            print_sieve(out, &selfdual_sieve(&t, &ws)?);
        }
    }
    Ok(())
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Unverifiable(_)) => EXIT_UNVERIFIABLE,
        _ => EXIT_PARSE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let res = run(cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error for a report writer
    let _ = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush());
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
