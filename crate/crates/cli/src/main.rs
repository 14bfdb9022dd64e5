//! `fuglede`: decide spectrality and tiling in `Z_p^2 x Z_q` from the shell.
//!
//! Exit codes: 0 on success, 1 when a subset is spectral but not a tile (or
//! the reverse) or a lemma check fails, 2 on usage or input errors.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};
use fuglede_core::formats::{parse_set_file, CertificateRecord, SetContents, SetFile};
use fuglede_core::verifier::{lemma_suite, verify_conjecture, VerifyOptions};
use fuglede_core::{
    find_complement, find_spectrum, lam_leung, project, zero_set, CoefficientMatrix, Group,
    GroupSpec, SubsetMask,
};

/// Directory that receives `certificates.jsonl` when `--certs` is absent.
const CERT_DIR_ENV: &str = "FUGLEDE_CERT_DIR";
const CERT_FILE_NAME: &str = "certificates.jsonl";

#[derive(Parser)]
#[command(
    name = "fuglede",
    version,
    about = "Spectral sets and tiles in Z_p^2 x Z_q"
)]
struct Cli {
    /// Append certificates to this JSON-lines file.
    #[arg(long, global = true, value_name = "PATH")]
    certs: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a set is spectral and whether it tiles.
    Check { file: PathBuf },
    /// Search for a spectrum.
    Spectrum { file: PathBuf },
    /// Search for a tiling complement.
    Complement { file: PathBuf },
    /// List the nonzero characters vanishing on a set.
    Zeroset { file: PathBuf },
    /// Project a set or multiset onto the Z_p x Z_q grid.
    Project {
        file: PathBuf,
        /// Direction in Z_p^2, as `u1,u2`.
        #[arg(long, value_parser = parse_direction)]
        a: [u32; 2],
        /// Nonzero multiplier in Z_q.
        #[arg(long)]
        b: u32,
    },
    /// Split a vanishing p x q matrix into Z_p- and Z_q-cosets.
    Decompose { matrix_file: PathBuf },
    /// Check that spectral sets and tiles coincide across a group.
    Verify(VerifyArgs),
    /// Run the randomized lemma checks.
    Lemmas {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "samples"])))]
struct VerifyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Scan every subset, or every affine orbit for larger groups.
    #[arg(long)]
    exhaustive: bool,
    /// Number of random subsets to test.
    #[arg(long, value_name = "N")]
    samples: Option<u64>,
    #[arg(long, value_name = "S", requires = "samples", default_value_t = 0)]
    seed: u64,
    /// Only examine subsets of this size.
    #[arg(long, value_name = "K")]
    size: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_direction(s: &str) -> Result<[u32; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.parse().map_err(|e| format!("bad u1 {a:?}: {e}"))?,
            b.parse().map_err(|e| format!("bad u2 {b:?}: {e}"))?,
        ]),
        _ => Err(format!("expected u1,u2, got {s:?}")),
    }
}

/// Error reported as a one-line diagnostic with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

struct Certs {
    path: Option<PathBuf>,
    records: Vec<CertificateRecord>,
}

impl Certs {
    fn new(flag: Option<PathBuf>) -> Self {
        let path = flag.or_else(|| {
            std::env::var_os(CERT_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| Path::new(&d).join(CERT_FILE_NAME))
        });
        Certs {
            path,
            records: Vec::new(),
        }
    }

    fn push(&mut self, record: CertificateRecord) {
        if self.path.is_some() {
            self.records.push(record);
        }
    }

    fn flush(&self) -> Result<(), Failure> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if self.records.is_empty() {
            return Ok(());
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let text: String = self
            .records
            .iter()
            .map(CertificateRecord::to_json_line)
            .collect();
        file.write_all(text.as_bytes())
            .map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn read_set_file(path: &Path) -> Result<SetFile, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_set_file(&bytes).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_set(path: &Path) -> Result<(Group, SubsetMask), Failure> {
    let file = read_set_file(path)?;
    match file.contents {
        SetContents::Set(s) => Ok((Group::new(file.group), s)),
        SetContents::Multiset(_) => Err(Failure(format!(
            "{}: this command needs a set, not a multiset",
            path.display()
        ))),
    }
}

fn show_set(spec: &GroupSpec, s: &SubsetMask) -> String {
    let items: Vec<String> = s.iter().map(|i| spec.element(i).to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn header(out: &mut String, spec: &GroupSpec, s: &SubsetMask) {
    out.push_str(&format!("group: {spec}\n"));
    out.push_str(&format!("set: {} (size {})\n", show_set(spec, s), s.len()));
}

fn cmd_check(path: &Path, certs: &mut Certs, out: &mut String) -> Outcome {
    let (g, s) = read_set(path)?;
    let spec = *g.spec();
    header(out, &spec, &s);
    let spectrum = find_spectrum(&g, &s);
    let complement = find_complement(&g, &s);
    let (spectral, tile) = (spectrum.is_found(), complement.is_found());
    out.push_str(&format!(
        "spectral: {}, tile: {}\n",
        yes_no(spectral),
        yes_no(tile)
    ));
    match spectrum.witness() {
        Some(c) => out.push_str(&format!("spectrum: {}\n", show_set(&spec, &c.spectrum))),
        None => out.push_str(&format!(
            "no spectrum ({} nodes explored)\n",
            spectrum.explored()
        )),
    }
    match complement.witness() {
        Some(c) => out.push_str(&format!("complement: {}\n", show_set(&spec, &c.complement))),
        None => out.push_str(&format!(
            "no complement ({} nodes explored)\n",
            complement.explored()
        )),
    }
    certs.push(CertificateRecord::from_spectrum(&spec, &s, &spectrum));
    certs.push(CertificateRecord::from_complement(&spec, &s, &complement));
    if spectral != tile {
        certs.push(CertificateRecord::violation(
            &spec,
            &s,
            &spectrum,
            &complement,
        ));
        out.push_str("violation: spectral and tile disagree\n");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_spectrum(path: &Path, certs: &mut Certs, out: &mut String) -> Outcome {
    let (g, s) = read_set(path)?;
    let spec = *g.spec();
    header(out, &spec, &s);
    let result = find_spectrum(&g, &s);
    match result.witness() {
        Some(c) => out.push_str(&format!("spectrum: {}\n", show_set(&spec, &c.spectrum))),
        None => out.push_str(&format!(
            "no spectrum ({} nodes explored)\n",
            result.explored()
        )),
    }
    certs.push(CertificateRecord::from_spectrum(&spec, &s, &result));
    Ok(0)
}

fn cmd_complement(path: &Path, certs: &mut Certs, out: &mut String) -> Outcome {
    let (g, s) = read_set(path)?;
    let spec = *g.spec();
    header(out, &spec, &s);
    let result = find_complement(&g, &s);
    match result.witness() {
        Some(c) => out.push_str(&format!("complement: {}\n", show_set(&spec, &c.complement))),
        None => out.push_str(&format!(
            "no complement ({} nodes explored)\n",
            result.explored()
        )),
    }
    certs.push(CertificateRecord::from_complement(&spec, &s, &result));
    Ok(0)
}

fn cmd_zeroset(path: &Path, out: &mut String) -> Outcome {
    let (g, s) = read_set(path)?;
    let spec = *g.spec();
    header(out, &spec, &s);
    let z = zero_set(&g, &s);
    out.push_str(&format!(
        "zero set: {} (size {})\n",
        show_set(&spec, &z),
        z.len()
    ));
    Ok(0)
}

fn cmd_project(path: &Path, a: [u32; 2], b: u32, out: &mut String) -> Outcome {
    let file = read_set_file(path)?;
    let spec = file.group;
    if a.iter().any(|&x| x as usize >= spec.p()) {
        return Err(Failure(format!(
            "--a {},{} is out of range for p = {}",
            a[0],
            a[1],
            spec.p()
        )));
    }
    if b as usize >= spec.q() {
        return Err(Failure(format!(
            "--b {b} is out of range for q = {}",
            spec.q()
        )));
    }
    let m = file.contents.to_multiset();
    let c = project(&spec, &m, a, b)?;
    out.push_str(&format!("group: {spec}\n"));
    out.push_str(&format!("direction: a = ({},{}), b = {b}\n", a[0], a[1]));
    out.push_str(&format!("projection ({} x {}):\n{c}", c.rows(), c.cols()));
    out.push_str(&format!("vanishes: {}\n", yes_no(c.vanishes())));
    Ok(0)
}

fn cmd_decompose(path: &Path, out: &mut String) -> Outcome {
    let text = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<i64>> =
        serde_json::from_slice(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let c = CoefficientMatrix::from_rows_checked(rows)?;
    let d = lam_leung(&c)?;
    let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    out.push_str(&format!("matrix ({} x {}):\n{c}", c.rows(), c.cols()));
    out.push_str(&format!("y (Z_q-cosets per row): {}\n", list(&d.y)));
    out.push_str(&format!("x (Z_p-cosets per column): {}\n", list(&d.x)));
    out.push_str(&format!(
        "total {} = {} * {} + {} * {}\n",
        c.total(),
        c.rows(),
        d.p_cosets(),
        c.cols(),
        d.q_cosets()
    ));
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, certs: &mut Certs, out: &mut String) -> Outcome {
    let g = Group::from_primes(args.p, args.q)?;
    let options = match args.samples {
        Some(n) => VerifyOptions::sampled(args.seed, n),
        None => VerifyOptions::exhaustive(),
    }
    .with_size(args.size)
    .with_threads(args.threads);
    if args.threads == Some(0) {
        return Err(Failure("--threads must be positive".into()));
    }
    let report = verify_conjecture(&g, &options)?;
    out.push_str(&report.render());
    for v in &report.violations {
        certs.push(CertificateRecord::violation(
            g.spec(),
            &v.subset,
            &v.spectrum,
            &v.complement,
        ));
    }
    Ok(if report.violation_count() > 0 { 1 } else { 0 })
}

fn cmd_lemmas(p: u64, q: u64, seed: u64, trials: u64, out: &mut String) -> Outcome {
    let g = Group::from_primes(p, q)?;
    let report = lemma_suite(&g, seed, trials);
    out.push_str(&report.render());
    Ok(if report.passed() { 0 } else { 1 })
}

fn run(cli: Cli, out: &mut String) -> Outcome {
    let mut certs = Certs::new(cli.certs);
    let code = match &cli.command {
        Command::Check { file } => cmd_check(file, &mut certs, out)?,
        Command::Spectrum { file } => cmd_spectrum(file, &mut certs, out)?,
        Command::Complement { file } => cmd_complement(file, &mut certs, out)?,
        Command::Zeroset { file } => cmd_zeroset(file, out)?,
        Command::Project { file, a, b } => cmd_project(file, *a, *b, out)?,
        Command::Decompose { matrix_file } => cmd_decompose(matrix_file, out)?,
        Command::Verify(args) => cmd_verify(args, &mut certs, out)?,
        Command::Lemmas { p, q, seed, trials } => cmd_lemmas(*p, *q, *seed, *trials, out)?,
    };
    certs.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprintln!("error: no command given (try --help)");
            return ExitCode::from(2);
        }
        Err(e) => {
            // clap spreads one diagnostic over several lines; keep the paragraph
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    let mut out = String::new();
    match run(cli, &mut out) {
        Ok(code) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or(""));
            ExitCode::from(2)
        }
    }
}
