//! Command-line frontend: constructs the graph of a tile, verifies its
//! combinatorial properties, computes K-theory, reproduces the bundled
//! reference table, samples shift-space windows and runs the dual-graph
//! reduction.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use report::*;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use twograph::dynamics::{self, ApeVerdict};
use twograph::graph::DEFAULT_VERTEX_LIMIT;
use twograph::ktheory::{self, KError};
use twograph::subshift::{self, SubshiftError, Window};
use twograph::table::{self, TableCell, REFERENCE_TABLE};
use twograph::tiles::ORIGIN;
use twograph::{BasicData, GraphError, Lambda, Pt, Tile, TileError};

#[derive(Parser)]
#[command(name = "twograph", version, about = "Tile 2-graphs and their K-theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one set of basic data: flags, skeleton checks,
    /// K-theory, reduction chain and observations.
    Report(ReportArgs),
    /// Compute K-group orders for a preset or explicit list of cells.
    Table(TableArgs),
    /// Sample (or enumerate) valid windows of the shift space.
    Sample(SampleArgs),
    /// Reduction chain of dual graphs, with constructive verification.
    Reduce(ReduceArgs),
    /// Search for an aperiodicity witness at a vertex.
    Aperiodicity(ApeArgs),
    /// Construct a diagonal path connecting two vertices.
    Connect(ConnectArgs),
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Tile as comma-separated row lengths, longest first (e.g. "3,1").
    #[arg(long)]
    tile: String,
    /// Alphabet size (at least 2).
    #[arg(long)]
    q: u64,
    /// Trace residue.
    #[arg(long, default_value_t = 0)]
    t: u64,
    /// Rule as "(i,j):v;..." covering every cell; defaults to the constant
    /// rule 1.
    #[arg(long)]
    rule: Option<String>,
    /// Vertex enumeration limit.
    #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
    limit: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    /// Named preset; `paper` runs every filled cell of the bundled table.
    #[arg(long, default_value = "paper")]
    preset: String,
    /// Explicit cell "rows:q" (e.g. "4,3,1,1:2"); repeatable, overrides the
    /// preset.
    #[arg(long = "cell")]
    cells: Vec<String>,
    /// Restrict to one alphabet size.
    #[arg(long)]
    q: Option<u64>,
    /// Exit non-zero if any computed cell disagrees with its expected value.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
    limit: u128,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Window extent "n1,n2".
    #[arg(long)]
    extent: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate all valid windows of the extent instead of sampling.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ApeArgs {
    #[command(flatten)]
    data: DataArgs,
    /// First offset "m1,m2".
    #[arg(long)]
    m: String,
    /// Second offset "n1,n2".
    #[arg(long)]
    n: String,
    /// Vertex: digit string in canonical cell order, "#index", or "all".
    #[arg(long, default_value = "all")]
    vertex: String,
    /// Search bound "b1,b2"; defaults to (m v n) + (3,3).
    #[arg(long)]
    bound: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ConnectArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Source vertex (digit string or "#index").
    #[arg(long)]
    from: String,
    /// Range vertex (digit string or "#index").
    #[arg(long)]
    to: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum CliError {
    Domain(String),
    Theorem(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Theorem(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Theorem(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<TileError> for CliError {
    fn from(e: TileError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::EnumerationTooLarge { .. } | GraphError::WorkLimitExceeded { .. } => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        match e {
            KError::TheoremViolation(_) | KError::Zlin(_) => CliError::Theorem(e.to_string()),
            KError::Graph(g) => g.into(),
            KError::Tile(t) => t.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<SubshiftError> for CliError {
    fn from(e: SubshiftError) -> Self {
        match e {
            SubshiftError::Graph(g) => g.into(),
            SubshiftError::CountMismatch { .. } => CliError::Theorem(e.to_string()),
            SubshiftError::TraceNonZero => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(cli.command)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
        Err(_) => {
            // A failed internal assertion (theorem-grade postcondition).
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Report(a) => cmd_report(a),
        Command::Table(a) => cmd_table(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Aperiodicity(a) => cmd_aperiodicity(a),
        Command::Connect(a) => cmd_connect(a),
    }
}

fn parse_rows(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Domain(format!("bad row length {p:?}")))
        })
        .collect()
}

fn parse_point(text: &str) -> Result<Pt, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Domain(format!(
            "expected a point \"a,b\", got {text:?}"
        )));
    }
    let x = parts[0]
        .trim()
        .parse::<i64>()
        .map_err(|_| CliError::Domain(format!("bad coordinate {:?}", parts[0])))?;
    let y = parts[1]
        .trim()
        .parse::<i64>()
        .map_err(|_| CliError::Domain(format!("bad coordinate {:?}", parts[1])))?;
    Ok(Pt::new(x, y))
}

fn parse_rule(text: &str) -> Result<Vec<(Pt, u64)>, CliError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (cell, value) = part.rsplit_once(':').ok_or_else(|| {
            CliError::Domain(format!("bad rule entry {part:?}, expected \"(i,j):v\""))
        })?;
        let cell = cell
            .trim()
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .ok_or_else(|| CliError::Domain(format!("bad rule cell in {part:?}")))?;
        let p = parse_point(cell)?;
        let v = value
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Domain(format!("bad rule value in {part:?}")))?;
        out.push((p, v));
    }
    Ok(out)
}

fn build_data(args: &DataArgs) -> Result<BasicData, CliError> {
    let tile = Tile::from_rows(&parse_rows(&args.tile)?)?;
    match &args.rule {
        Some(rule) => Ok(BasicData::with_rule(tile, args.q, args.t, &parse_rule(rule)?)?),
        None => Ok(BasicData::new(tile, args.q, args.t)?),
    }
}

fn parse_vertex(g: &Lambda, text: &str) -> Result<usize, CliError> {
    if let Some(idx) = text.strip_prefix('#') {
        let i: usize = idx
            .parse()
            .map_err(|_| CliError::Domain(format!("bad vertex index {text:?}")))?;
        if i >= g.vertex_count() {
            return Err(CliError::Domain(format!(
                "vertex index {i} out of range (0..{})",
                g.vertex_count()
            )));
        }
        return Ok(i);
    }
    let values: Vec<u64> = if g.data().q() <= 10 && !text.contains(',') {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(u64::from)
                    .ok_or_else(|| CliError::Domain(format!("bad vertex digit {c:?}")))
            })
            .collect::<Result<_, _>>()?
    } else {
        text.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Domain(format!("bad vertex value {p:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    if values.len() != g.data().tile().len() {
        return Err(CliError::Domain(format!(
            "vertex needs {} values (one per tile cell, canonical order)",
            g.data().tile().len()
        )));
    }
    g.vertex_id(&values)
        .ok_or_else(|| CliError::Domain(GraphError::UnknownVertex.to_string()))
}

fn render_path(p: &twograph::Path) -> String {
    subshift::render_window(&Window::new(ORIGIN, p.clone()))
}

fn vertex_string(g: &Lambda, id: usize) -> String {
    g.vertex_values(id)
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(if g.data().q() <= 10 { "" } else { "," })
}

fn cmd_report(a: ReportArgs) -> Result<(), CliError> {
    let data = build_data(&a.data)?;
    let g = Lambda::new(data.clone(), a.data.limit)?;
    let metrics = g.metrics().clone();
    // Building the matrices runs their structural checks (0/1 entries,
    // degree sums, commutation).
    g.matrices();
    let q = data.q();
    let square = dynamics::square_bijection_report(&data, 1 << 22).ok();
    let simplicity = dynamics::simplicity_hypotheses(&data, a.data.limit)?;
    let kreport = ktheory::compute_k_theory(&g)?;
    let (kernel_check, kernel_check_note) =
        match ktheory::kernel_triviality_check(&g, a.data.limit) {
            Ok(r) => (Some(KernelCheckDto::from_report(&r)), None),
            Err(KError::HypothesisFailed(msg)) => (None, Some(msg)),
            Err(e) => return Err(e.into()),
        };
    let k0_equals_k1 = match ktheory::k0_equals_k1_check(&kreport, &data) {
        Ok(v) => Some(v),
        Err(KError::HypothesisFailed(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (reduction, reduction_note) = match ktheory::reduction_chain(&data) {
        Ok(chain) => {
            let checks = ktheory::verify_reduction_chain(&data, a.data.limit)?;
            (Some(ReductionDto::from_chain(&chain, &checks)), None)
        }
        Err(KError::HypothesisFailed(msg)) => (None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let gcd = ktheory::gcd_formula_scan(&data, &kreport);
    let flags = data.flags();
    let rep = CliReport {
        tile: data.tile().rows().to_vec(),
        q,
        trace: data.trace(),
        rule: rule_entries(&data),
        flags: FlagsDto {
            invertible_corners: flags.invertible_corners,
            three_invertible_corners: flags.three_invertible_corners,
            trace_shift_constant: flags.trace_shift_constant,
        },
        vertex_count: g.vertex_count(),
        matrices: MatrixChecksDto {
            blue_degree: q.pow(metrics.extent.y as u32),
            red_degree: q.pow(metrics.extent.x as u32),
            commute: true,
        },
        square_bijection: square.as_ref().map(SquareDto::from_report),
        simplicity: SimplicityDto::from_report(&simplicity),
        ktheory: KTheoryDto::from_report(&kreport),
        kernel_check,
        kernel_check_note,
        k0_equals_k1,
        reduction,
        reduction_note,
        gcd_observation: GcdDto::from_observation(&gcd),
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
        Format::Text => print_report_text(&rep),
    }
    Ok(())
}

fn print_report_text(r: &CliReport) {
    println!("tile {:?}  q={}  t={}", r.tile, r.q, r.trace);
    println!(
        "flags: invertible corners {}, three invertible corners {}, trace shift constant {}",
        r.flags.invertible_corners,
        r.flags.three_invertible_corners,
        r.flags
            .trace_shift_constant
            .map_or("none".to_string(), |c| c.to_string())
    );
    println!(
        "vertices: {}   blue degree {}   red degree {}   matrices commute: {}",
        r.vertex_count, r.matrices.blue_degree, r.matrices.red_degree, r.matrices.commute
    );
    match &r.square_bijection {
        Some(s) => println!(
            "squares: {} (blue-red pairs {}, red-blue pairs {}) bijection holds: {}",
            s.squares, s.blue_red_pairs, s.red_blue_pairs, s.holds
        ),
        None => println!("squares: skipped (too large)"),
    }
    println!(
        "simplicity hypotheses: {}{}",
        if r.simplicity.all_hold { "hold" } else { "fail" },
        r.simplicity
            .loop_vertex
            .map_or(String::new(), |v| format!(
                " (loop with entrance at vertex #{v}, degree {:?})",
                r.simplicity.loop_degree.unwrap()
            ))
    );
    for n in &r.simplicity.notes {
        println!("  note: {n}");
    }
    let fmt_group = |g: &GroupDto, order: &Option<String>| -> String {
        let mut parts = Vec::new();
        if g.free_rank == 1 {
            parts.push("Z".to_string());
        } else if g.free_rank > 1 {
            parts.push(format!("Z^{}", g.free_rank));
        }
        for f in &g.invariant_factors {
            parts.push(format!("Z/{f}"));
        }
        let name = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        match order {
            Some(o) => format!("{name} (order {o})"),
            None => format!("{name} (infinite)"),
        }
    };
    println!("K0 = {}", fmt_group(&r.ktheory.k0, &r.ktheory.k0_order));
    println!("K1 = {}", fmt_group(&r.ktheory.k1, &r.ktheory.k1_order));
    println!(
        "ker d2 rank: {}   unit class order: {}   generates coker d1: {}",
        r.ktheory.ker_d2_rank,
        r.ktheory
            .unit_class
            .order
            .as_deref()
            .unwrap_or("infinite"),
        r.ktheory
            .unit_class
            .generates_coker
            .map_or("n/a".to_string(), |b| b.to_string())
    );
    match (&r.kernel_check, &r.kernel_check_note) {
        (Some(k), _) => println!(
            "kernel ranks: blue {}, red {}, d2 {}",
            k.ker_blue_rank, k.ker_red_rank, k.ker_d2_rank
        ),
        (None, Some(note)) => println!("kernel check skipped: {note}"),
        _ => {}
    }
    if let Some(eq) = r.k0_equals_k1 {
        println!("|K0| = |K1|: {eq}");
    }
    match (&r.reduction, &r.reduction_note) {
        (Some(red), _) => {
            println!(
                "reduction chain: tiles {:?} multipliers {:?} ({} steps verified)",
                red.tiles,
                red.multipliers,
                red.verified_steps.len()
            );
        }
        (None, Some(note)) => println!("reduction chain inapplicable: {note}"),
        _ => {}
    }
    println!(
        "gcd observation: gcd(q^c2 - 1, q^c1 - 1) = {} matches |K0|: {}",
        r.gcd_observation.gcd,
        r.gcd_observation
            .matches
            .map_or("n/a".to_string(), |b| b.to_string())
    );
}

fn cmd_table(a: TableArgs) -> Result<(), CliError> {
    let cells: Vec<(Vec<u32>, u64, Option<&TableCell>)> = if !a.cells.is_empty() {
        let mut out = Vec::new();
        for spec in &a.cells {
            let (rows, q) = spec.rsplit_once(':').ok_or_else(|| {
                CliError::Domain(format!("bad cell {spec:?}, expected \"rows:q\""))
            })?;
            let rows = parse_rows(rows)?;
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| CliError::Domain(format!("bad alphabet in {spec:?}")))?;
            let expected = REFERENCE_TABLE
                .iter()
                .find(|c| c.rows == rows.as_slice() && c.q == q);
            out.push((rows, q, expected));
        }
        out
    } else if a.preset == "paper" {
        REFERENCE_TABLE
            .iter()
            .map(|c| (c.rows.to_vec(), c.q, Some(c)))
            .collect()
    } else {
        return Err(CliError::Domain(format!(
            "unknown preset {:?} (available: paper)",
            a.preset
        )));
    };
    let cells: Vec<_> = cells
        .into_iter()
        .filter(|(_, q, _)| a.q.is_none_or(|want| *q == want))
        .collect();

    let limit = a.limit;
    let rows: Vec<TableRowDto> = cells
        .par_iter()
        .map(|(rows, q, expected)| {
            match table::compute_cell(rows, *q, limit) {
                Ok(rep) => {
                    let matches = expected.map(|e| table::cell_matches(e, &rep));
                    TableRowDto {
                        tile: rows.clone(),
                        q: *q,
                        k0: rep.k0_order().map(|b| b.to_string()),
                        k1: rep.k1_order().map(|b| b.to_string()),
                        expected_k0: expected.map(|e| e.k0),
                        expected_k1: expected.map(|e| e.k1),
                        matches,
                        error: None,
                    }
                }
                Err(e) => TableRowDto {
                    tile: rows.clone(),
                    q: *q,
                    k0: None,
                    k1: None,
                    expected_k0: expected.map(|e| e.k0),
                    expected_k1: expected.map(|e| e.k1),
                    matches: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Text => {
            println!("{:<14} {:>3} {:>10} {:>10}  status", "tile", "q", "|K0|", "|K1|");
            for r in &rows {
                let tile = format!(
                    "[{}]",
                    r.tile
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                let status = match (&r.error, r.matches) {
                    (Some(e), _) => format!("error: {e}"),
                    (None, Some(true)) => "ok".to_string(),
                    (None, Some(false)) => format!(
                        "MISMATCH (expected {}, {})",
                        r.expected_k0.unwrap(),
                        r.expected_k1.unwrap()
                    ),
                    (None, None) => String::new(),
                };
                println!(
                    "{:<14} {:>3} {:>10} {:>10}  {}",
                    tile,
                    r.q,
                    r.k0.as_deref().unwrap_or("-"),
                    r.k1.as_deref().unwrap_or("-"),
                    status
                );
            }
        }
    }
    if rows.iter().any(|r| r.error.is_some()) {
        return Err(CliError::Domain("some cells failed to compute".to_string()));
    }
    if a.check && rows.iter().any(|r| r.matches == Some(false)) {
        return Err(CliError::Theorem(
            "computed K-groups disagree with the reference table".to_string(),
        ));
    }
    Ok(())
}

fn cmd_sample(a: SampleArgs) -> Result<(), CliError> {
    let data = build_data(&a.data)?;
    let extent = parse_point(&a.extent)?;
    if !extent.is_nonnegative() {
        return Err(CliError::Domain("extent must be non-negative".to_string()));
    }
    let g = Lambda::new(data.clone(), a.data.limit)?;
    let grids: Vec<Window> = if a.enumerate {
        subshift::enumerate_windows(&data, extent, 1 << 24)?
    } else {
        vec![subshift::sample_window(&data, extent, a.seed, a.data.limit)?]
    };
    let constraints = (extent.x + 1) * (extent.y + 1);
    match a.format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct WindowDto {
                extent: [i64; 2],
                seed: Option<u64>,
                count: usize,
                grids: Vec<Vec<Vec<Option<u64>>>>,
                valid: bool,
            }
            let to_rows = |w: &Window| -> Vec<Vec<Option<u64>>> {
                let grid = w.grid();
                let height = g.metrics().extent.y + 1 + extent.y;
                let width = g.metrics().extent.x + 1 + extent.x;
                (0..height)
                    .rev()
                    .map(|y| (0..width).map(|x| grid.try_value(Pt::new(x, y))).collect())
                    .collect()
            };
            let valid = grids.iter().all(|w| g.validate_path(w.grid()));
            let dto = WindowDto {
                extent: [extent.x, extent.y],
                seed: (!a.enumerate).then_some(a.seed),
                count: grids.len(),
                grids: grids.iter().map(to_rows).collect(),
                valid,
            };
            println!("{}", serde_json::to_string_pretty(&dto).unwrap());
        }
        Format::Text => {
            for w in &grids {
                print!("{}", subshift::render_window(w));
                assert!(g.validate_path(w.grid()), "sampled window failed validation");
                println!("valid: all {constraints} tile placements satisfy the congruence");
                println!();
            }
            if a.enumerate {
                println!("{} windows of extent ({}, {})", grids.len(), extent.x, extent.y);
            }
        }
    }
    Ok(())
}

fn cmd_reduce(a: ReduceArgs) -> Result<(), CliError> {
    let data = build_data(&a.data)?;
    let chain = ktheory::reduction_chain(&data)?;
    let checks = ktheory::verify_reduction_chain(&data, a.data.limit)?;
    let dto = ReductionDto::from_chain(&chain, &checks);
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&dto).unwrap()),
        Format::Text => {
            println!("reduction chain for tile {:?}, q = {}:", data.tile().rows(), data.q());
            for (i, (tile, mult)) in dto.tiles.iter().zip(&dto.multipliers).enumerate() {
                println!("  step {}: tile {:?}  multiplier {}", i + 1, tile, mult);
            }
            for (i, c) in dto.verified_steps.iter().enumerate() {
                println!(
                    "  verified step {}: {} vertices = {} classes x {} extensions, {} blue edges checked",
                    i + 1,
                    c.base_vertices,
                    c.class_count,
                    c.multiplier,
                    c.blue_edges_checked
                );
            }
            if dto.verified_steps.is_empty() {
                println!("  (no step small enough to verify under the vertex limit)");
            }
        }
    }
    Ok(())
}

fn cmd_aperiodicity(a: ApeArgs) -> Result<(), CliError> {
    let data = build_data(&a.data)?;
    let g = Lambda::new(data, a.data.limit)?;
    let m = parse_point(&a.m)?;
    let n = parse_point(&a.n)?;
    let bound = match &a.bound {
        Some(b) => parse_point(b)?,
        None => m.join(n) + Pt::new(3, 3),
    };
    let vertices: Vec<usize> = if a.vertex == "all" {
        (0..g.vertex_count()).collect()
    } else {
        vec![parse_vertex(&g, &a.vertex)?]
    };
    #[derive(serde::Serialize)]
    struct ApeDto {
        vertex: usize,
        verdict: String,
        witness_degree: Option<[i64; 2]>,
        detail: String,
    }
    let mut results = Vec::new();
    let mut all_conclusive = true;
    for v in vertices {
        let rep = dynamics::aperiodicity_witness(&g, v, m, n, bound, 1 << 24)?;
        let verdict = match rep.verdict {
            ApeVerdict::WitnessFound => "witness".to_string(),
            ApeVerdict::PeriodicityProved => "periodic".to_string(),
            ApeVerdict::Inconclusive => {
                all_conclusive = false;
                "inconclusive".to_string()
            }
        };
        if a.format == Format::Text {
            println!(
                "vertex #{v} ({}): {verdict}{}",
                vertex_string(&g, v),
                rep.witness
                    .as_ref()
                    .map_or(String::new(), |w| format!(
                        " of degree ({}, {})",
                        w.degree().x,
                        w.degree().y
                    ))
            );
            if let Some(w) = &rep.witness {
                print!("{}", render_path(w));
            }
            if !rep.detail.is_empty() {
                println!("  {}", rep.detail);
            }
        }
        results.push(ApeDto {
            vertex: v,
            verdict,
            witness_degree: rep.witness.as_ref().map(|w| [w.degree().x, w.degree().y]),
            detail: rep.detail,
        });
    }
    if a.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&results).unwrap());
    }
    if !all_conclusive {
        return Err(CliError::Domain(
            "no witness found below the bound for at least one vertex".to_string(),
        ));
    }
    Ok(())
}

fn cmd_connect(a: ConnectArgs) -> Result<(), CliError> {
    let data = build_data(&a.data)?;
    let g = Lambda::new(data, a.data.limit)?;
    let from = parse_vertex(&g, &a.from)?;
    let to = parse_vertex(&g, &a.to)?;
    // The produced path runs from `from` (source) to `to` (range).
    let p = g.connect(to, from);
    match a.format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct ConnectDto {
                from: usize,
                to: usize,
                degree: [i64; 2],
                grid: Vec<Vec<Option<u64>>>,
            }
            let height = g.metrics().extent.y + 1 + p.degree().y;
            let width = g.metrics().extent.x + 1 + p.degree().x;
            let grid = (0..height)
                .rev()
                .map(|y| (0..width).map(|x| p.try_value(Pt::new(x, y))).collect())
                .collect();
            let dto = ConnectDto {
                from,
                to,
                degree: [p.degree().x, p.degree().y],
                grid,
            };
            println!("{}", serde_json::to_string_pretty(&dto).unwrap());
        }
        Format::Text => {
            println!(
                "path of degree ({}, {}) from #{from} ({}) to #{to} ({}):",
                p.degree().x,
                p.degree().y,
                vertex_string(&g, from),
                vertex_string(&g, to)
            );
            print!("{}", render_path(&p));
        }
    }
    Ok(())
}
