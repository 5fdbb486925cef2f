//! `gridmagic`: command-line front end.
//!
//! Exit status is 0 on success, 1 when the computation fails or a check does
//! not pass, and 2 for usage errors.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use gridmagic_core::acceptance::{self, Hooks};
use gridmagic_core::counting::{self, CountResult, Mode, DEFAULT_ENUMERATE_LIMIT};
use gridmagic_core::decompose::decompose;
use gridmagic_core::ehrhart::{
    self, dimension_formula, edmonds_dimension, gorenstein_check, gorenstein_cross_check, is_palindromic,
    is_unimodal, EhrhartData, GorensteinMode, GorensteinReport,
};
use gridmagic_core::graph::{Graph, Topology};
use gridmagic_core::labelling::{gorenstein_witness, LabellingFile, MagicLabelling, WitnessCase};
use gridmagic_core::recurrence::{
    berlekamp_massey, char_poly_recurrence, kasteleyn_with_ceiling, power_recurrence_with,
    verify_reciprocity, Direction, Recurrence, TransferMatrix, DEFAULT_PRECISION_CEILING,
    DEFAULT_STATE_CAP,
};
use gridmagic_core::Error;

#[derive(Parser)]
#[command(
    name = "gridmagic",
    version,
    about = "Magic labellings, Ehrhart data and tiling recurrences for grid and torus graphs",
    after_help = "Defaults: --state-cap 100000 profiles, --limit 1000000 labellings, \
                  --precision-cap 4096 bits. All numbers are printed exactly."
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "GRIDMAGIC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Grid,
    Torus,
}

impl From<TopologyArg> for Topology {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Grid => Topology::Grid,
            TopologyArg::Torus => Topology::Torus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    All,
    Interior,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => Mode::All,
            ModeArg::Interior => Mode::Interior,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GorensteinMethod {
    /// h-vector where feasible, functional otherwise
    Auto,
    Hvector,
    Functional,
    /// Run both and require agreement
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecurrenceMethod {
    /// Shortest recurrence (Berlekamp-Massey)
    Minimal,
    /// Characteristic polynomial of the transfer matrix
    Charpoly,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Args)]
struct Board {
    /// Number of rows (m)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    rows: u32,
    /// Number of columns (n)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    cols: u32,
    #[arg(long, value_enum, default_value_t = TopologyArg::Grid)]
    topology: TopologyArg,
}

impl Board {
    fn dims(&self) -> (usize, usize, Topology) {
        (self.rows as usize, self.cols as usize, self.topology.into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Number of magic labellings of sum t (with --nmax: the sequence over n)
    Count {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        sum: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        /// Print T(rows, n, sum) for n = 0..=nmax instead (grids only)
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// List magic labellings in lexicographic order
    Enumerate {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        sum: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        /// Stop with an error after this many labellings
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        limit: usize,
    },
    /// Ehrhart polynomial, h-vector and series of the perfect matching polytope
    Ehrhart {
        #[command(flatten)]
        board: Board,
    },
    /// Ehrhart h-vector with palindromic and unimodal flags
    Hvector {
        #[command(flatten)]
        board: Board,
    },
    /// Gorenstein verdict and index
    Gorenstein {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_enum, default_value_t = GorensteinMethod::Auto)]
        method: GorensteinMethod,
        /// Last dilate compared in functional mode (default: first interior + 2)
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Dimension of the perfect matching polytope
    Dimension {
        #[command(flatten)]
        board: Board,
    },
    /// Domino tilings of the rows x cols board from the closed form
    Kasteleyn {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cols: u32,
        /// Give up above this many bits of working precision
        #[arg(long, default_value_t = DEFAULT_PRECISION_CEILING)]
        precision_cap: usize,
    },
    /// Linear recurrence of T(rows, n, sum) in n
    Recurrence {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
        #[arg(long, default_value_t = 1)]
        sum: u32,
        #[arg(long, value_enum, default_value_t = RecurrenceMethod::Minimal)]
        method: RecurrenceMethod,
        /// Also print this many values past (or before) the seed
        #[arg(long)]
        extend: Option<usize>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Backward)]
        direction: DirectionArg,
        /// Refuse transfer matrices with more profiles than this
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Check T(m,n,1) = (-1)^(ceil(m/2) n) T(m,-n-2,1) for n = 0..=nmax
    Reciprocity {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
    },
    /// Recurrence and reciprocity for the powers T(m,n,1)^sum
    Power {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
        /// The power t
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        sum: u32,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        /// Fit on this many leading terms instead of the default
        #[arg(long)]
        fit: Option<usize>,
    },
    /// Split a labelling file into perfect matchings
    Decompose {
        /// Labelling JSON file ("-" for stdin)
        #[arg(long)]
        input: PathBuf,
    },
    /// Interior point used in the Gorenstein classification
    Witness {
        /// One of 2xn-t3, 3xn-t5, 4x4-t4, even-even-t4, even-even-t5, even-odd-t5, even-odd-t5-flipped
        #[arg(long = "case")]
        case: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cols: u32,
    },
    /// Run the acceptance suite
    Selftest {
        /// Comma-separated criterion numbers (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Leave out the timings
        #[arg(long)]
        no_timings: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    /// Output was produced but a check did not pass.
    Check(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (text, code) = match dispatch(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Check(text, msg)) => {
            eprintln!("error: {msg}");
            (text, 1)
        }
    };
    if let Err(e) = emit(&cli.output, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

fn emit(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn csv_rows<T: ToString>(values: impl IntoIterator<Item = (i64, T)>) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in values {
        let _ = writeln!(out, "{i},{}", v.to_string());
    }
    out
}

fn no_csv(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("{what} has no CSV form; use text or json")));
    }
    Ok(())
}

fn tuple<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Count { board, sum, mode, nmax } => count(f, board, *sum, (*mode).into(), *nmax),
        Command::Enumerate { board, sum, mode, limit } => enumerate(f, board, *sum, (*mode).into(), *limit),
        Command::Ehrhart { board } => ehrhart_cmd(f, board),
        Command::Hvector { board } => hvector(f, board),
        Command::Gorenstein { board, method, tmax } => gorenstein(f, board, *method, *tmax),
        Command::Dimension { board } => dimension(f, board),
        Command::Kasteleyn { rows, cols, precision_cap } => {
            no_csv(f, "kasteleyn")?;
            let v = kasteleyn_with_ceiling(*rows as usize, *cols as usize, *precision_cap)?;
            Ok(match f {
                Format::Json => json_number_object(&[("rows", rows.to_string()), ("cols", cols.to_string()), ("value", v.to_string())]),
                _ => v.to_string(),
            })
        }
        Command::Recurrence { rows, sum, method, extend, direction, state_cap } => {
            recurrence(f, *rows as usize, *sum, *method, *extend, *direction, *state_cap)
        }
        Command::Reciprocity { rows, nmax } => reciprocity(f, *rows as usize, *nmax),
        Command::Power { rows, sum, nmax, fit } => power(f, *rows as usize, *sum, *nmax, *fit),
        Command::Decompose { input } => decompose_cmd(f, input),
        Command::Witness { case, rows, cols } => witness(f, case, *rows as usize, *cols as usize),
        Command::Selftest { only, no_timings } => selftest(f, only, !*no_timings),
    }
}

/// A flat JSON object whose values are exact integers.
fn json_number_object(fields: &[(&str, String)]) -> String {
    let mut map = serde_json::Map::new();
    for (k, v) in fields {
        let n: serde_json::Number = v.parse().expect("integer text");
        map.insert((*k).to_string(), serde_json::Value::Number(n));
    }
    to_json(&map)
}

#[derive(Serialize)]
struct SequenceOutput {
    rows: usize,
    sum: u32,
    mode: Mode,
    #[serde(with = "gridmagic_core::json::integer_vec")]
    values: Vec<BigUint>,
}

fn count(f: Format, board: &Board, sum: u32, mode: Mode, nmax: Option<u32>) -> Outcome {
    let (rows, cols, topology) = board.dims();
    if let Some(nmax) = nmax {
        if topology != Topology::Grid {
            return Err(Failure::Usage("--nmax sequences are only available for grids".into()));
        }
        let values = counting::grid_sequence(rows, sum, mode, nmax as usize)?;
        return Ok(match f {
            Format::Text => values.iter().enumerate().map(|(n, v)| format!("{n} {v}")).collect::<Vec<_>>().join("\n"),
            Format::Json => to_json(&SequenceOutput { rows, sum, mode, values }),
            Format::Csv => csv_rows(values.iter().enumerate().map(|(n, v)| (n as i64, v))),
        });
    }
    let g = Graph::build(rows, cols, topology)?;
    let value = counting::count(&g, sum, mode)?;
    let result = CountResult { value, mode, rows, cols, sum, topology };
    Ok(match f {
        Format::Text => result.to_string(),
        Format::Json => to_json(&result),
        Format::Csv => csv_rows([(cols as i64, &result.value)]),
    })
}

fn enumerate(f: Format, board: &Board, sum: u32, mode: Mode, limit: usize) -> Outcome {
    no_csv(f, "enumerate")?;
    let (rows, cols, topology) = board.dims();
    let g = Arc::new(Graph::build(rows, cols, topology)?);
    let found = counting::enumerate(&g, sum, mode, limit)?;
    Ok(match f {
        Format::Json => to_json(&found.iter().map(MagicLabelling::to_file).collect::<Vec<_>>()),
        _ => found
            .iter()
            .map(|l| l.labels().iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn ehrhart_text(e: &EhrhartData) -> String {
    let coeffs: Vec<String> = e.polynomial.coeffs().iter().map(ToString::to_string).collect();
    let mut s = String::new();
    let _ = writeln!(s, "dimension: {}", e.dimension);
    let _ = writeln!(s, "counts L(0..{}): {}", e.counts.len() - 1, tuple(&e.counts));
    let _ = writeln!(s, "coefficients (constant first): {}", coeffs.join(", "));
    let _ = writeln!(s, "polynomial: {}", e.polynomial);
    let _ = writeln!(s, "h-vector: {}", tuple(&e.h_vector));
    let _ = writeln!(s, "series: {}", e.series());
    let _ = write!(s, "gorenstein: {} (mode hvector)", e.gorenstein.summary());
    s
}

fn ehrhart_cmd(f: Format, board: &Board) -> Outcome {
    let (rows, cols, topology) = board.dims();
    let e = ehrhart::ehrhart_polynomial(rows, cols, topology)?;
    Ok(match f {
        Format::Text => ehrhart_text(&e),
        Format::Json => to_json(&e),
        Format::Csv => csv_rows(e.counts.iter().enumerate().map(|(t, v)| (t as i64, v))),
    })
}

fn hvector(f: Format, board: &Board) -> Outcome {
    let (rows, cols, topology) = board.dims();
    let e = ehrhart::ehrhart_polynomial(rows, cols, topology)?;
    let (pal, uni) = (is_palindromic(&e.h_vector), is_unimodal(&e.h_vector));
    Ok(match f {
        Format::Text => format!(
            "h-vector: {}\ndimension: {}\npalindromic: {}\nunimodal: {}",
            tuple(&e.h_vector),
            e.dimension,
            yes_no(pal),
            yes_no(uni)
        ),
        Format::Json => {
            let h: Vec<serde_json::Value> = e
                .h_vector
                .iter()
                .map(|x| serde_json::Value::Number(x.to_string().parse().expect("integer")))
                .collect();
            to_json(&json!({ "d": e.dimension, "h": h, "palindromic": pal, "unimodal": uni }))
        }
        Format::Csv => csv_rows(e.h_vector.iter().enumerate().map(|(j, v)| (j as i64, v))),
    })
}

/// Functional check with the window grown until it covers `k + 2`.
fn functional_auto(rows: usize, cols: usize, topology: Topology, tmax: Option<u32>) -> Result<GorensteinReport, Error> {
    if let Some(t) = tmax {
        return gorenstein_check(rows, cols, topology, GorensteinMode::Functional, t);
    }
    let mut t = 2;
    loop {
        match gorenstein_check(rows, cols, topology, GorensteinMode::Functional, t) {
            Err(Error::EvidenceWindow { needed, .. }) if needed > t => t = needed,
            other => return other,
        }
    }
}

fn gorenstein_text(r: &GorensteinReport) -> String {
    let mut s = format!("verdict: {}\nmode: {}", r.summary(), r.mode);
    if let Some(k) = r.first_interior {
        let _ = write!(s, "\nfirst interior point at t = {k}");
    }
    if !r.checks.is_empty() {
        s.push_str("\nt interior shifted equal");
        for c in &r.checks {
            let _ = write!(s, "\n{} {} {} {}", c.t, c.interior, c.shifted, yes_no(c.holds()));
        }
    }
    s
}

fn gorenstein(f: Format, board: &Board, method: GorensteinMethod, tmax: Option<u32>) -> Outcome {
    no_csv(f, "gorenstein")?;
    let (rows, cols, topology) = board.dims();
    let use_h = match method {
        GorensteinMethod::Hvector => true,
        GorensteinMethod::Functional => false,
        GorensteinMethod::Both => {
            let t = match tmax {
                Some(t) => t,
                None => functional_auto(rows, cols, topology, None)?.first_interior.map_or(2, |k| k + 2),
            };
            let (by_h, by_f) = gorenstein_cross_check(rows, cols, topology, t)?;
            return Ok(match f {
                Format::Json => to_json(&json!({ "hvector": by_h, "functional": by_f })),
                _ => format!("{}\n{}", gorenstein_text(&by_h), gorenstein_text(&by_f)),
            });
        }
        GorensteinMethod::Auto => {
            topology == Topology::Grid
                || Graph::build(rows, cols, topology)
                    .ok()
                    .and_then(|g| ehrhart::dimension(&g).ok())
                    .is_some_and(|d| d <= ehrhart::TORUS_HVECTOR_MAX_DIM)
        }
    };
    if use_h {
        let e = ehrhart::ehrhart_polynomial(rows, cols, topology)?;
        return Ok(match f {
            Format::Json => to_json(&json!({ "gorenstein": e.gorenstein, "h": e.h_vector.iter().map(ToString::to_string).collect::<Vec<_>>(), "d": e.dimension })),
            _ => format!("{}\nh-vector: {}", gorenstein_text(&e.gorenstein), tuple(&e.h_vector)),
        });
    }
    let r = functional_auto(rows, cols, topology, tmax)?;
    Ok(match f {
        Format::Json => to_json(&r),
        _ => gorenstein_text(&r),
    })
}

fn dimension(f: Format, board: &Board) -> Outcome {
    no_csv(f, "dimension")?;
    let (rows, cols, topology) = board.dims();
    let g = Graph::build(rows, cols, topology)?;
    let d = ehrhart::dimension(&g)?;
    let formula = dimension_formula(rows, cols, topology);
    let edmonds = edmonds_dimension(&g);
    Ok(match f {
        Format::Json => to_json(&json!({ "graph": g.name(), "dimension": d, "formula": formula, "edmonds": edmonds })),
        _ => d.to_string(),
    })
}

#[derive(Serialize)]
struct ExtensionValue {
    index: i64,
    #[serde(with = "gridmagic_core::json::string")]
    value: BigRational,
}

fn recurrence(
    f: Format,
    rows: usize,
    t: u32,
    method: RecurrenceMethod,
    extend: Option<usize>,
    direction: DirectionArg,
    state_cap: usize,
) -> Outcome {
    let rec = match method {
        RecurrenceMethod::Charpoly => char_poly_recurrence(&TransferMatrix::with_cap(rows, t, state_cap)?)?,
        RecurrenceMethod::Minimal => {
            let states = (t as u128 + 1).checked_pow(rows as u32).unwrap_or(u128::MAX);
            if states > state_cap as u128 {
                return Err(Error::StateCap { states, cap: state_cap }.into());
            }
            let len = 4 * states as usize + 4;
            let seq = counting::grid_sequence(rows, t, Mode::All, len - 1)?;
            let seq: Vec<_> = seq
                .into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect();
            berlekamp_massey(&seq, 0)?
        }
    };
    let Some(count) = extend else {
        no_csv(f, "a recurrence without --extend")?;
        return Ok(match f {
            Format::Json => rec.to_json(),
            _ => recurrence_text(&rec),
        });
    };
    let dir = match direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    };
    let values = rec.extend(dir, count)?;
    let indexed: Vec<ExtensionValue> = values
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let index = match dir {
                Direction::Forward => rec.seed_index() + (rec.order() + i) as i64,
                Direction::Backward => rec.seed_index() - 1 - i as i64,
            };
            ExtensionValue { index, value }
        })
        .collect();
    Ok(match f {
        Format::Text => {
            let mut s = recurrence_text(&rec);
            for v in &indexed {
                let _ = write!(s, "\na({}) = {}", v.index, v.value);
            }
            s
        }
        Format::Json => to_json(&json!({ "recurrence": rec, "extension": indexed })),
        Format::Csv => csv_rows(indexed.iter().map(|v| (v.index, &v.value))),
    })
}

fn recurrence_text(rec: &Recurrence) -> String {
    format!(
        "{rec}\norder: {}\nseed from a({}): {}",
        rec.order(),
        rec.seed_index(),
        tuple(rec.seed())
    )
}

fn sign(s: i8) -> &'static str {
    if s < 0 {
        "-1"
    } else {
        "+1"
    }
}

fn reciprocity(f: Format, rows: usize, nmax: u32) -> Outcome {
    no_csv(f, "reciprocity")?;
    let report = verify_reciprocity(rows, nmax)?;
    let text = match f {
        Format::Json => to_json(&report),
        _ => {
            let mut s = format!("recurrence: {}\nn forward backward sign pass", report.recurrence);
            for r in &report.rows {
                let _ = write!(s, "\n{} {} {} {} {}", r.n, r.forward, r.backward, sign(r.sign), yes_no(r.pass));
            }
            if let Some(z) = report.odd_zero {
                let _ = write!(s, "\nzero at odd n: {}", yes_no(z));
            }
            let _ = write!(s, "\ncharacteristic polynomial backward values: {}", to_json(&report.char_poly).trim_matches('"'));
            s
        }
    };
    if report.all_pass() {
        Ok(text)
    } else {
        Err(Failure::Check(text, "reciprocity check failed".into()))
    }
}

fn power(f: Format, rows: usize, t: u32, nmax: u32, fit: Option<usize>) -> Outcome {
    no_csv(f, "power")?;
    let report = power_recurrence_with(rows, t, nmax, fit)?;
    let text = match f {
        Format::Json => to_json(&report),
        _ => {
            let mut s = format!(
                "recurrence: {}\nfitted on n = 0..{}\nheld out: n predicted actual",
                report.recurrence,
                report.fit_len - 1
            );
            for h in &report.held_out {
                let _ = write!(s, "\n{} {} {}", h.n, h.predicted, h.actual);
            }
            s.push_str("\nn forward backward sign pass base-power");
            for r in &report.rows {
                let _ = write!(
                    s,
                    "\n{} {} {} {} {} {}",
                    r.n,
                    r.forward,
                    r.backward,
                    sign(r.sign),
                    yes_no(r.pass),
                    yes_no(r.matches_base)
                );
            }
            s
        }
    };
    if report.all_pass() {
        Ok(text)
    } else {
        Err(Failure::Check(text, "power reciprocity check failed".into()))
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn decompose_cmd(f: Format, input: &PathBuf) -> Outcome {
    no_csv(f, "decompose")?;
    let text = read_input(input)?;
    let file: LabellingFile = serde_json::from_str(&text).map_err(Error::from)?;
    let l = file.into_labelling()?;
    let d = decompose(&l)?;
    Ok(match f {
        Format::Json => d.to_json(),
        _ => {
            let layers: Vec<String> = d.layers().iter().map(|m| tuple(m)).collect();
            let mut s = format!("sum {}: {} layers\n", d.sum(), d.layers().len());
            if l.graph().topology() == Topology::Grid {
                s.push_str(&d.render());
            }
            s.push_str(&layers.join("\n"));
            s
        }
    })
}

fn witness(f: Format, case: &str, rows: usize, cols: usize) -> Outcome {
    no_csv(f, "witness")?;
    let case: WitnessCase = case.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let l = gorenstein_witness(case, rows, cols)?;
    Ok(match f {
        Format::Json => to_json(&l.to_file()),
        _ => format!("{case} on grid({rows},{cols}), sum {}\n{}", l.sum(), l.render().trim_end()),
    })
}

fn selftest(f: Format, only: &[u32], timings: bool) -> Outcome {
    no_csv(f, "selftest")?;
    let known: Vec<u32> = acceptance::criteria().iter().map(|c| c.id).collect();
    if let Some(bad) = only.iter().find(|id| !known.contains(id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let outcomes = acceptance::run(&Hooks::default(), only);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let text = match f {
        Format::Json => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    let mut v = json!({ "id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail });
                    if timings {
                        v["seconds"] = json!(o.elapsed.as_secs_f64());
                        v["budget_seconds"] = json!(o.budget.as_secs());
                    }
                    v
                })
                .collect();
            to_json(&rows)
        }
        _ => {
            let mut lines: Vec<String> = outcomes.iter().map(|o| o.line(timings)).collect();
            lines.push(format!("{} passed, {failed} failed", outcomes.len() - failed));
            lines.join("\n")
        }
    };
    if failed == 0 {
        Ok(text)
    } else {
        Err(Failure::Check(text, format!("{failed} acceptance criteria failed")))
    }
}
