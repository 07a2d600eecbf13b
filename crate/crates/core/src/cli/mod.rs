//! Command-line front end. [`run`] does all the work and returns the output
//! and exit status; the binary only prints them.
//!
//! Exit codes: 0 success (verified), 1 mismatch, 2 parse error, 3 violated
//! precondition.

pub mod expr;
pub mod format;

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use crate::connection::{Connection, Mobius, PointClass};
use crate::error::Error;
use crate::gaussmanin::gm_determinant_lhs;
use crate::localformula::{gm_determinant_rhs, verify, RhsBreakdown, SectionMultiplier};
use crate::oracle::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gmdet", version, about = "Determinant of the Gauss-Manin connection on P^1, computed two ways")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the singular points and test verticality.
    Check { file: String },
    /// Connection form on det H_DR from cohomology.
    Lhs { file: String },
    /// The same form from the local formula, term by term.
    Rhs { file: String },
    /// Compare both sides modulo dlog K^x.
    Verify { file: String },
    /// Run the built-in oracle suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Pull back along t = (p tau + q)/(r tau + w) and print the result.
    Mobius {
        #[arg(long, value_name = "p,q,r,w")]
        map: String,
        file: String,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { stdout: String::new(), stderr, code }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

fn fail_with(e: &Error) -> Outcome {
    Outcome::fail(error_code(e), format!("error: {e}\n"))
}

/// Reads `file` (`-` for stdin) with the given input reader.
fn load(file: &str, read: &dyn Fn(&str) -> std::io::Result<String>) -> Result<format::Parsed, Error> {
    let text = read(file).map_err(|e| Error::Parse { line: 0, column: 0, message: format!("{file}: {e}") })?;
    format::parse_connection(&text)
}

/// Verticality and admissibility; names the first offending point.
pub fn check_preconditions(c: &Connection, names: &[String]) -> Result<(), Error> {
    for i in 0..c.npoints() {
        match c.classify_point(i) {
            PointClass::Admissible | PointClass::LogarithmicDeligne => {}
            PointClass::Invalid(why) => {
                return Err(Error::InvalidConnection(format!("point {i} (t = {}): {why}", c.point(i).render(names))))
            }
            other => {
                return Err(Error::InvalidConnection(format!(
                    "point {i} (t = {}) is {}, neither admissible nor Deligne",
                    c.point(i).render(names),
                    other.tag()
                )))
            }
        }
    }
    if !c.is_vertical() {
        return Err(Error::InvalidConnection("curvature has a dt ^ ds component".into()));
    }
    Ok(())
}

fn render_rhs(out: &mut String, rhs: &RhsBreakdown, c: &Connection, names: &[String]) {
    let _ = writeln!(out, "global: {}", rhs.global.render(names));
    for (i, w) in &rhs.residues {
        let _ = writeln!(out, "residue[{i}] (t = {}): {}", c.point(*i).render(names), w.render(names));
    }
    let _ = writeln!(out, "torsion: {}", rhs.torsion.render(names));
    let _ = writeln!(out, "total: {}", rhs.total.render(names));
}

fn cmd_check(p: &format::Parsed) -> Outcome {
    let c = &p.conn;
    let mut out = String::new();
    let _ = writeln!(out, "rank {}, {} points, total multiplicity {}", c.rank(), c.npoints(), c.total_mult());
    for i in 0..c.npoints() {
        let cls = c.classify_point(i);
        let diag = cls.diagnostics();
        let _ = write!(out, "point {i}: t = {}, m = {}, {}", c.point(i).render(&p.names), c.mult(i), cls.tag());
        if !diag.is_empty() {
            let _ = write!(out, " ({diag})");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "vertical: {}", c.is_vertical());
    match check_preconditions(c, &p.names) {
        Ok(()) => Outcome::ok(out),
        Err(e) => Outcome { stdout: out, stderr: format!("error: {e}\n"), code: EXIT_PRECONDITION },
    }
}

fn cmd_lhs(p: &format::Parsed) -> Result<Outcome, Error> {
    check_preconditions(&p.conn, &p.names)?;
    Ok(Outcome::ok(format!("{}\n", gm_determinant_lhs(&p.conn)?.render(&p.names))))
}

fn cmd_rhs(p: &format::Parsed) -> Result<Outcome, Error> {
    check_preconditions(&p.conn, &p.names)?;
    let rhs = gm_determinant_rhs(&p.conn, &SectionMultiplier::one())?;
    let mut out = String::new();
    render_rhs(&mut out, &rhs, &p.conn, &p.names);
    Ok(Outcome::ok(out))
}

fn cmd_verify(p: &format::Parsed) -> Result<Outcome, Error> {
    check_preconditions(&p.conn, &p.names)?;
    let rep = verify(&p.conn)?;
    let names = &p.names;
    let mut out = String::new();
    let _ = writeln!(out, "lhs: {}", rep.lhs.render(names));
    render_rhs(&mut out, &rep.rhs, &p.conn, names);
    let _ = writeln!(out, "difference: {}", rep.lhs.sub(&rep.rhs.total).render(names));
    match &rep.difference_certificate {
        Some(cert) => {
            let _ = writeln!(out, "certificate: {}", cert.render(names));
        }
        None => out.push_str("certificate: none\n"),
    }
    let _ = writeln!(out, "verdict: {}", if rep.verdict { "verified" } else { "mismatch" });
    Ok(Outcome { stdout: out, stderr: String::new(), code: if rep.verdict { EXIT_OK } else { EXIT_MISMATCH } })
}

fn cmd_selftest(seed: u64, count: usize) -> Outcome {
    let (a4, a5) = suites::vertical_suite(seed, count);
    let reports = [
        suites::euler_residue_suite(seed, count),
        suites::lemma62_suite(seed),
        suites::commutator_suite(seed, count),
        suites::bridge_suite(),
        a4,
        a5,
    ];
    let mut out = String::new();
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    let code = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_MISMATCH };
    Outcome { stdout: out, stderr: String::new(), code }
}

fn parse_map(s: &str) -> Result<Mobius, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse { line: 1, column: 1, message: "--map expects p,q,r,w".into() });
    }
    let mut v = Vec::with_capacity(4);
    let mut col = 1;
    for part in &parts {
        let q = BigRational::from_str(part).map_err(|_| Error::Parse {
            line: 1,
            column: col,
            message: format!("'{part}' is not a rational number"),
        })?;
        v.push(q);
        col += part.len() + 1;
    }
    let [p, q, r, w]: [BigRational; 4] = v.try_into().expect("four entries");
    Mobius::new(p, q, r, w)
}

fn cmd_mobius(map: &str, p: &format::Parsed) -> Result<Outcome, Error> {
    let m = parse_map(map)?;
    let c = p.conn.transport_mobius(&m)?;
    Ok(Outcome::ok(format!("{}\n", format::to_json(&c, &p.names))))
}

/// Runs one invocation; `args[0]` is the program name. `read` loads input
/// files.
pub fn run_with<I, S>(args: I, read: &dyn Fn(&str) -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(text) } else { Outcome::fail(code, text) };
        }
    };
    let result = match &cli.command {
        Command::Selftest { seed, count } => return cmd_selftest(*seed, *count),
        Command::Check { file } => load(file, read).map(|p| cmd_check(&p)),
        Command::Lhs { file } => load(file, read).and_then(|p| cmd_lhs(&p)),
        Command::Rhs { file } => load(file, read).and_then(|p| cmd_rhs(&p)),
        Command::Verify { file } => load(file, read).and_then(|p| cmd_verify(&p)),
        Command::Mobius { map, file } => {
            parse_map(map).and_then(|_| load(file, read)).and_then(|p| cmd_mobius(map, &p))
        }
    };
    result.unwrap_or_else(|e| fail_with(&e))
}

fn read_input(file: &str) -> std::io::Result<String> {
    if file == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(file)
    }
}

/// [`run_with`] reading from the file system (`-` is stdin).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &read_input)
}
