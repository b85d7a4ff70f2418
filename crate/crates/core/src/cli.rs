//! Command-line front end.
//!
//! Every subcommand produces a report that is rendered as JSON (default) or
//! as aligned text. Exit status: `0` success, `1` computation-level failure
//! (a check that does not hold, an unsatisfiable system), `2` input error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::clifford::{
    clifford_mul, pin_from_vectors, pin_to_orthogonal, signed_basis_subgroup, twisted_adjoint_matrix,
    CliffordElement, Scalar,
};
use crate::grading::{betti_numbers, gr_hf, grading_signs, GeneratorLocalData, SurfaceHomologyData, SymplecticSpace};
use crate::grid::{
    apply_move, tilde_homology, Corner, Flavor, GridComplex, GridDiagram, GridError, GridMove, DEFAULT_MAX_SIZE,
};
use crate::homology::{Bigrading, HomologySummary};
use crate::linalg::Q;
use crate::signs::{
    construct_sign_assignment_with, sign_assignment_for, spin_sign_assignment, verify_sign_assignment,
    FreeVariableRule, SignAssignment, SignError, ELIMINATION_MAX,
};
use crate::torus_triangles::{
    bigon_differential, enumerate_bigons, enumerate_triangles, pair_reports, AnnulusConfig, GenusOneTriple,
};

#[derive(Parser, Debug)]
#[command(name = "pinfloer", version, about = "Pin/Spin algebra, Z/2 gradings and signed grid homology")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pin and coupled Spin group demonstrations.
    #[command(subcommand)]
    Pin(PinCommand),
    /// Absolute Z/2 gradings of Heegaard diagram generators.
    #[command(subcommand)]
    Grading(GradingCommand),
    /// Sign assignments on grid rectangles.
    #[command(subcommand)]
    Signs(SignsCommand),
    /// Grid diagrams and their homology.
    #[command(subcommand)]
    Grid(GridCommand),
    /// Genus-one triangle counts.
    #[command(subcommand)]
    Triangle(TriangleCommand),
}

#[derive(Subcommand, Debug)]
pub enum PinCommand {
    /// Pin(1) table, double cover and coupled parity checks.
    Demo,
}

#[derive(Subcommand, Debug)]
pub enum GradingCommand {
    /// Grade the generators of a diagram given as JSON.
    Compute {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignMethod {
    /// Elimination up to size 6, closed form beyond.
    Auto,
    Elimination,
    Spin,
}

#[derive(Subcommand, Debug)]
pub enum SignsCommand {
    /// Construct a sign assignment.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SignMethod::Auto)]
        method: SignMethod,
        /// Gauge seed for the free unknowns (elimination only).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the assignment here and print a summary; without it the
        /// assignment itself goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every square and annulus rule.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GridCommand {
    /// Tilde homology, or the certified minus complex.
    Hom {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "tilde")]
        flavor: Flavor,
        /// Sign assignment file; constructed when omitted.
        #[arg(long)]
        signs: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
    /// Check homology invariance under the applicable grid moves.
    MovesCheck {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TriangleCommand {
    /// Pair sums for k = 1..maxk and the annulus bigon count.
    Check {
        #[arg(long, default_value_t = 6)]
        maxk: usize,
        /// Expect twisted sums to vanish instead of untwisted sums of ±2.
        #[arg(long)]
        twisted: bool,
    },
}

/// Exit status and rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Computation(String),
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        match e {
            GridError::InvalidSigns { .. } | GridError::NotAComplex(_) | GridError::Homology(_) => {
                Failure::Computation(e.to_string())
            }
            GridError::Sign(s) => s.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SignError> for Failure {
    fn from(e: SignError) -> Self {
        match e {
            SignError::Inconsistent { .. } | SignError::UnexpectedComposite { .. } => {
                Failure::Computation(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A rendered report and whether its checks all held.
struct Report {
    json: serde_json::Value,
    text: String,
    ok: bool,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String, ok: bool) -> Self {
        Report { json: serde_json::to_value(value).expect("reports serialize"), text, ok }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Pin(PinCommand::Demo) => Ok(pin_demo()),
        Command::Grading(GradingCommand::Compute { file }) => grading_compute(file),
        Command::Signs(SignsCommand::Build { n, method, seed, out }) => {
            return signs_build(*n, *method, *seed, out.as_deref(), cli.format);
        }
        Command::Signs(SignsCommand::Verify { file }) => signs_verify(file),
        Command::Grid(GridCommand::Hom { file, flavor, signs, max_size }) => {
            grid_hom(file, *flavor, signs.as_deref(), *max_size)
        }
        Command::Grid(GridCommand::MovesCheck { file, max_size }) => moves_check(file, *max_size),
        Command::Triangle(TriangleCommand::Check { maxk, twisted }) => triangle_check(*maxk, *twisted),
    };
    match result {
        Ok(report) => Outcome { code: if report.ok { 0 } else { 1 }, stdout: render(&report, cli.format), stderr: String::new() },
        Err(Failure::Input(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Computation(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&r.json).expect("json") + "\n",
        Format::Text => r.text.clone(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

/// Left-aligned table with a header row.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

// ---------------------------------------------------------------- pin demo

#[derive(Serialize)]
struct PinDemo {
    pin1_elements: Vec<String>,
    pin1_table: Vec<Vec<usize>>,
    pin1_is_klein_four: bool,
    double_cover: DoubleCover,
    coupled_parity: Vec<ParityRow>,
    coupled_parity_holds: bool,
}

#[derive(Serialize)]
struct DoubleCover {
    vectors: Vec<Vec<String>>,
    element: String,
    matrix: Vec<Vec<String>>,
    negation_same_matrix: bool,
    twisted_adjoint_agrees: bool,
}

#[derive(Serialize)]
struct ParityRow {
    k: u8,
    l: u8,
    k2: u8,
    l2: u8,
    lhs: i32,
    rhs: i32,
}

fn pin_demo() -> Report {
    let elements = signed_basis_subgroup(1);
    let position = |x: &CliffordElement| elements.iter().position(|e| e == x).expect("closed under products");
    let table_idx: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| position(&clifford_mul(a, b).expect("same dimension"))).collect())
        .collect();
    let one = position(&CliffordElement::one(1));
    // Z/2 × Z/2: abelian and every element squares to 1
    let klein = (0..4).all(|i| table_idx[i][i] == one && (0..4).all(|j| table_idx[i][j] == table_idx[j][i]));

    let s = |n: i64, d: i64| Scalar::from_ratio(n, d);
    let vectors = vec![
        vec![s(3, 5), s(4, 5), s(0, 1)],
        vec![s(0, 1), s(5, 13), s(12, 13)],
        vec![Scalar::inv_sqrt2(), s(0, 1), Scalar::inv_sqrt2()],
    ];
    let p = pin_from_vectors(3, &vectors).expect("unit vectors");
    let m = pin_to_orthogonal(&p);
    let minus = pin_to_orthogonal(&p.negate());
    let adjoint = twisted_adjoint_matrix(&p).expect("pin element");
    let double_cover = DoubleCover {
        vectors: vectors.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
        element: p.value().to_string(),
        matrix: m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        negation_same_matrix: minus == m && p.negate() != p,
        twisted_adjoint_agrees: adjoint == m,
    };

    let sign = |a: u8, b: u8| if (a * b).is_multiple_of(2) { 1 } else { -1 };
    let mut parity = Vec::new();
    for bits in 0..16u8 {
        let (k, l, k2, l2) = (bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1);
        if (k + l) % 2 == 0 && (k2 + l2) % 2 == 0 {
            parity.push(ParityRow { k, l, k2, l2, lhs: sign(k, k2), rhs: sign(l, l2) });
        }
    }
    let parity_holds = parity.iter().all(|r| r.lhs == r.rhs);

    let names: Vec<String> = elements.iter().map(ToString::to_string).collect();
    let mut text = String::from("Pin(1) multiplication table\n");
    let rows: Vec<Vec<String>> = names
        .iter()
        .zip(&table_idx)
        .map(|(n, r)| std::iter::once(n.clone()).chain(r.iter().map(|&j| names[j].clone())).collect())
        .collect();
    let mut header = vec!["·"];
    header.extend(names.iter().map(String::as_str));
    text.push_str(&table(&header, &rows));
    let _ = writeln!(text, "Z/2 x Z/2: {}", verdict(klein));
    let _ = writeln!(text, "\nproduct of three reflections in R^3: {}", double_cover.element);
    for r in &double_cover.matrix {
        let _ = writeln!(text, "  [{}]", r.join(", "));
    }
    let _ = writeln!(text, "p and -p cover the same matrix: {}", verdict(double_cover.negation_same_matrix));
    let _ = writeln!(text, "twisted adjoint action agrees: {}", verdict(double_cover.twisted_adjoint_agrees));
    let _ = writeln!(text, "\ncoupled parity (-1)^(kk') = (-1)^(ll'): {}", verdict(parity_holds));
    let ok = klein && double_cover.negation_same_matrix && double_cover.twisted_adjoint_agrees && parity_holds;
    let demo = PinDemo {
        pin1_elements: names,
        pin1_table: table_idx,
        pin1_is_klein_four: klein,
        double_cover,
        coupled_parity: parity,
        coupled_parity_holds: parity_holds,
    };
    Report::new(&demo, text, ok)
}

// --------------------------------------------------------- grading compute

/// Diagram description read by `grading compute`.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub version: u32,
    pub genus: usize,
    /// Classes of `α_1, …, α_g` in `H_1(Σ)`.
    pub alpha: Vec<Vec<i64>>,
    pub beta: Vec<Vec<i64>>,
    /// Intersection form; the standard symplectic form when omitted.
    #[serde(default)]
    pub form: Option<Vec<Vec<i64>>>,
    /// Integer inner product; the standard one when omitted.
    #[serde(default)]
    pub inner: Option<Vec<Vec<i64>>>,
    pub generators: Vec<GeneratorEntry>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    #[serde(default)]
    pub name: Option<String>,
    /// 1-based: `sigma[i]` is the beta curve met on `α_i`.
    pub sigma: Vec<usize>,
    pub signs: Vec<i64>,
}

#[derive(Serialize)]
struct GradingReport {
    genus: usize,
    b1: usize,
    h2: usize,
    generators: Vec<GradedGenerator>,
    grading_counts: [usize; 2],
}

#[derive(Serialize)]
struct GradedGenerator {
    name: String,
    sigma: Vec<usize>,
    signs: Vec<i64>,
    s1: i32,
    s2: i32,
    gr_hf: u8,
}

fn grading_compute(file: &Path) -> Result<Report, Failure> {
    let d: DiagramFile =
        serde_json::from_str(&read(file)?).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    if d.version != 1 {
        return Err(Failure::Input(format!("unsupported diagram version {}", d.version)));
    }
    let bad = |e: crate::grading::GradingError| Failure::Input(e.to_string());
    let space = match &d.form {
        Some(f) => SymplecticSpace::from_form(f).map_err(bad)?,
        None => SymplecticSpace::standard(d.genus),
    };
    if space.genus() != d.genus {
        return Err(Failure::Input(format!("form has genus {}, file says {}", space.genus(), d.genus)));
    }
    let space = match &d.inner {
        Some(m) => space.with_inner_product(m.iter().map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect()).collect()).map_err(bad)?,
        None => space,
    };
    let data = SurfaceHomologyData::new(space, &d.alpha, &d.beta).map_err(bad)?;
    let (b1, h2) = betti_numbers(&data);
    let mut generators = Vec::new();
    for (i, g) in d.generators.iter().enumerate() {
        if g.sigma.contains(&0) {
            return Err(Failure::Input(format!("generator {}: sigma entries are 1-based", i + 1)));
        }
        let local = GeneratorLocalData { sigma: g.sigma.iter().map(|s| s - 1).collect(), signs: g.signs.clone() };
        let (s1, s2) = grading_signs(&data, &local).map_err(bad)?;
        let gr = gr_hf(&data, &local).map_err(bad)?;
        generators.push(GradedGenerator {
            name: g.name.clone().unwrap_or_else(|| format!("x{}", i + 1)),
            sigma: g.sigma.clone(),
            signs: g.signs.clone(),
            s1,
            s2,
            gr_hf: gr,
        });
    }
    let mut counts = [0usize; 2];
    for g in &generators {
        counts[g.gr_hf as usize] += 1;
    }
    let mut text = format!("genus {}  b1 {}  h2 {}\n", d.genus, b1, h2);
    let rows: Vec<Vec<String>> = generators
        .iter()
        .map(|g| {
            let join = |v: Vec<String>| v.join(" ");
            vec![
                g.name.clone(),
                join(g.sigma.iter().map(ToString::to_string).collect()),
                join(g.signs.iter().map(ToString::to_string).collect()),
                g.s1.to_string(),
                g.s2.to_string(),
                g.gr_hf.to_string(),
            ]
        })
        .collect();
    text.push_str(&table(&["generator", "sigma", "signs", "s1", "s2", "gr_hf"], &rows));
    let report = GradingReport { genus: d.genus, b1, h2, generators, grading_counts: counts };
    Ok(Report::new(&report, text, true))
}

// ------------------------------------------------------------------- signs

#[derive(Serialize)]
struct BuildSummary {
    n: usize,
    method: &'static str,
    seed: Option<u64>,
    unknowns: usize,
    negative: usize,
    equations_checked: usize,
    violations: usize,
    out: String,
}

fn signs_build(n: usize, method: SignMethod, seed: Option<u64>, out: Option<&Path>, format: Format) -> Outcome {
    let fail = |f: Failure| match f {
        Failure::Input(m) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Failure::Computation(m) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    };
    let rule = seed.map_or(FreeVariableRule::Zeros, FreeVariableRule::Seeded);
    let (s, name) = match method {
        SignMethod::Elimination => (construct_sign_assignment_with(n, rule), "elimination"),
        SignMethod::Spin => (spin_sign_assignment(n), "spin"),
        SignMethod::Auto if seed.is_some() => (construct_sign_assignment_with(n, rule), "elimination"),
        SignMethod::Auto => (sign_assignment_for(n), if n <= ELIMINATION_MAX { "elimination" } else { "spin" }),
    };
    if seed.is_some() && method == SignMethod::Spin {
        return fail(Failure::Input("--seed applies to elimination only".into()));
    }
    let s = match s {
        Ok(s) => s,
        Err(e) => return fail(e.into()),
    };
    let Some(path) = out else {
        return Outcome { code: 0, stdout: s.to_text(), stderr: String::new() };
    };
    if let Err(e) = std::fs::write(path, s.to_text()) {
        return fail(Failure::Input(format!("cannot write {}: {e}", path.display())));
    }
    let report = match verify_sign_assignment(&s) {
        Ok(r) => r,
        Err(e) => return fail(e.into()),
    };
    let summary = BuildSummary {
        n,
        method: name,
        seed,
        unknowns: s.num_unknowns(),
        negative: s.raw().iter().filter(|&&b| b).count(),
        equations_checked: report.equations_checked,
        violations: report.violations.len(),
        out: path.display().to_string(),
    };
    let text = format!(
        "n {}  method {}  unknowns {}  negative {}  violations {}\nwritten to {}\n",
        summary.n, summary.method, summary.unknowns, summary.negative, summary.violations, summary.out
    );
    let r = Report::new(&summary, text, report.is_valid());
    Outcome { code: if r.ok { 0 } else { 1 }, stdout: render(&r, format), stderr: String::new() }
}

fn signs_verify(file: &Path) -> Result<Report, Failure> {
    let s = SignAssignment::from_text(&read(file)?)?;
    let report = verify_sign_assignment(&s)?;
    let mut text = format!(
        "n {}  equations {}  violations {}\n",
        report.n,
        report.equations_checked,
        report.violations.len()
    );
    for v in &report.violations {
        let _ = writeln!(text, "  {}", v.description);
    }
    Ok(Report::new(&report, text, report.is_valid()))
}

// -------------------------------------------------------------------- grid

fn load_grid(file: &Path, max_size: usize) -> Result<GridDiagram, Failure> {
    let g = GridDiagram::parse(&read(file)?)?;
    g.check_size(max_size)?;
    Ok(g)
}

fn load_signs(path: Option<&Path>, n: usize) -> Result<SignAssignment, Failure> {
    match path {
        Some(p) => {
            let s = SignAssignment::from_text(&read(p)?)?;
            if s.n() != n {
                return Err(GridError::SignSizeMismatch { expected: n, found: s.n() }.into());
            }
            Ok(s)
        }
        None => Ok(sign_assignment_for(n)?),
    }
}

#[derive(Serialize)]
struct GridInfo {
    n: usize,
    components: usize,
    o: Vec<u8>,
    x: Vec<u8>,
}

impl GridInfo {
    fn of(g: &GridDiagram) -> Self {
        let one_based = |v: &[u8]| v.iter().map(|r| r + 1).collect();
        GridInfo { n: g.n(), components: g.num_components(), o: one_based(g.o()), x: one_based(g.x()) }
    }
}

#[derive(Serialize)]
struct HomReport {
    grid: GridInfo,
    flavor: Flavor,
    signs: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    homology: Option<HomologySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<crate::grid::SquareCertificate>,
    /// The same check with `X` ignored, exposing the annulus pairing.
    #[serde(skip_serializing_if = "Option::is_none")]
    annulus_certificate: Option<crate::grid::SquareCertificate>,
}

fn homology_text(h: &HomologySummary) -> String {
    let rows: Vec<Vec<String>> = h
        .groups
        .iter()
        .map(|(b, g)| {
            let torsion: Vec<String> = g.torsion.iter().map(ToString::to_string).collect();
            vec![
                b.maslov.to_string(),
                crate::homology::half_integer_json(b.alexander_twice).to_string(),
                g.free_rank.to_string(),
                if torsion.is_empty() { "-".into() } else { torsion.join(" ") },
            ]
        })
        .collect();
    let mut out = table(&["maslov", "alexander", "free", "torsion"], &rows);
    let _ = writeln!(out, "total free rank {}  torsion {}", h.total_free_rank(), if h.has_torsion() { "yes" } else { "no" });
    out
}

fn grid_hom(file: &Path, flavor: Flavor, signs: Option<&Path>, max_size: usize) -> Result<Report, Failure> {
    let g = load_grid(file, max_size)?;
    let s = load_signs(signs, g.n())?;
    let source = if signs.is_some() { "file" } else { "constructed" };
    let mut text = format!("{g}n {}  components {}  flavor {}\n", g.n(), g.num_components(), flavor);
    let report = match flavor {
        Flavor::Tilde => {
            let h = tilde_homology(&g, &s)?;
            text.push_str(&homology_text(&h));
            HomReport {
                grid: GridInfo::of(&g),
                flavor,
                signs: source,
                homology: Some(h),
                certificate: None,
                annulus_certificate: None,
            }
        }
        Flavor::Minus | Flavor::Unblocked => {
            let certify = |f: Flavor, text: &mut String| -> Result<_, Failure> {
                let c = GridComplex::build(&g, &s, f)?.certify()?;
                let _ = writeln!(
                    text,
                    "{f}: d^2 = 0 certified over {} generators; {} square terms, {} horizontal and {} vertical annuli, {} annulus pairs",
                    c.generators, c.square_terms, c.horizontal_annuli, c.vertical_annuli, c.annulus_pairs
                );
                Ok(c)
            };
            let c = certify(flavor, &mut text)?;
            let annuli = if flavor == Flavor::Minus { Some(certify(Flavor::Unblocked, &mut text)?) } else { None };
            HomReport {
                grid: GridInfo::of(&g),
                flavor,
                signs: source,
                homology: None,
                certificate: Some(c),
                annulus_certificate: annuli,
            }
        }
    };
    Ok(Report::new(&report, text, true))
}

/// Free ranks tensored with the rank-two piece supported in bigradings
/// `(0, 0)` and `(−1, −1)`.
pub fn tensor_two_step(ranks: &BTreeMap<Bigrading, usize>) -> BTreeMap<Bigrading, usize> {
    let mut out = BTreeMap::new();
    for (b, &r) in ranks {
        for shift in [(0, 0), (-1, -2)] {
            *out.entry(b.shifted(shift.0, shift.1)).or_insert(0) += r;
        }
    }
    out
}

#[derive(Serialize)]
struct MoveCheck {
    kind: String,
    ok: bool,
    detail: String,
}

#[derive(Serialize)]
struct MovesReport {
    grid: GridInfo,
    total_free_rank: usize,
    normalized_rank: usize,
    checks: Vec<MoveCheck>,
    all_ok: bool,
}

fn describe_move(m: &GridMove) -> String {
    match *m {
        GridMove::CommuteColumns { index } => format!("commute columns {} {}", index + 1, index + 2),
        GridMove::CommuteRows { index } => format!("commute rows {} {}", index + 1, index + 2),
        GridMove::RotateColumns => "rotate columns".into(),
        GridMove::RotateRows => "rotate rows".into(),
        GridMove::Stabilize { column, row, empty } => format!("stabilize at ({}, {}) {:?}", column + 1, row + 1, empty),
        GridMove::Destabilize { column, row } => format!("destabilize at ({}, {})", column + 1, row + 1),
    }
}

/// Every applicable commutation plus both torus rotations of `g`, each
/// compared against `h`.
fn invariance_checks(
    g: &GridDiagram,
    s: &SignAssignment,
    h: &HomologySummary,
    label: &str,
) -> Result<Vec<MoveCheck>, Failure> {
    let n = g.n();
    let commutations = (0..n - 1).flat_map(|i| [GridMove::CommuteColumns { index: i }, GridMove::CommuteRows { index: i }]);
    let mut checks = Vec::new();
    for m in commutations.chain([GridMove::RotateColumns, GridMove::RotateRows]) {
        let Ok(g2) = apply_move(g, m) else { continue };
        let h2 = tilde_homology(&g2, s)?;
        let ok = &h2 == h;
        checks.push(MoveCheck {
            kind: format!("{label}{}", describe_move(&m)),
            ok,
            detail: if ok { "bigraded homology identical".into() } else { format!("free ranks {:?}", h2.free_ranks()) },
        });
    }
    Ok(checks)
}

fn moves_check(file: &Path, max_size: usize) -> Result<Report, Failure> {
    let g = load_grid(file, max_size)?;
    let n = g.n();
    let s = sign_assignment_for(n)?;
    let h = tilde_homology(&g, &s)?;
    let mut checks = invariance_checks(&g, &s, &h, "")?;
    if n < max_size.min(DEFAULT_MAX_SIZE) {
        let row = g.o()[0] as usize;
        let m = GridMove::Stabilize { column: 0, row, empty: Corner::SW };
        let g2 = apply_move(&g, m)?;
        let s2 = sign_assignment_for(n + 1)?;
        let h2 = tilde_homology(&g2, &s2)?;
        let ok = h2.free_ranks() == tensor_two_step(&h.free_ranks()) && !h2.has_torsion();
        checks.push(MoveCheck {
            kind: describe_move(&m),
            ok,
            detail: format!("free rank {} -> {}", h.total_free_rank(), h2.total_free_rank()),
        });
        let back = apply_move(&g2, GridMove::Destabilize { column: 0, row })?;
        checks.push(MoveCheck {
            kind: "destabilize after stabilize".into(),
            ok: back == g,
            detail: if back == g { "original diagram recovered".into() } else { back.to_text() },
        });
        checks.extend(invariance_checks(&g2, &s2, &h2, "stabilized: ")?);
    }
    let all_ok = checks.iter().all(|c| c.ok);
    let total = h.total_free_rank();
    let normalized = total >> (n - g.num_components());
    let mut text = format!("free rank {total}  normalized {normalized}\n");
    let rows: Vec<Vec<String>> =
        checks.iter().map(|c| vec![c.kind.clone(), verdict(c.ok).into(), c.detail.clone()]).collect();
    text.push_str(&table(&["move", "result", "detail"], &rows));
    let report = MovesReport { grid: GridInfo::of(&g), total_free_rank: total, normalized_rank: normalized, checks, all_ok };
    Ok(Report::new(&report, text, all_ok))
}

// ---------------------------------------------------------------- triangle

#[derive(Serialize)]
struct TriangleReport {
    maxk: usize,
    twisted: bool,
    pairs: Vec<crate::torus_triangles::PairReport>,
    bigon_signs: Vec<i32>,
    bigon_differential: [i64; 2],
    all_ok: bool,
}

fn triangle_check(maxk: usize, twisted: bool) -> Result<Report, Failure> {
    if maxk == 0 {
        return Err(Failure::Input("--maxk must be at least 1".into()));
    }
    let t = GenusOneTriple::standard();
    let classes = enumerate_triangles(&t, maxk).map_err(|e| Failure::Computation(e.to_string()))?;
    let pairs = pair_reports(&classes, maxk);
    let bigons = enumerate_bigons(&AnnulusConfig::standard()).map_err(|e| Failure::Computation(e.to_string()))?;
    let bigon_signs: Vec<i32> = bigons.iter().map(|b| b.sign).collect();
    let diff = bigon_differential(&bigons);
    let pair_ok = |p: &crate::torus_triangles::PairReport| {
        let sum_ok = if twisted { p.twisted_sum == 0 } else { p.untwisted_sum.abs() == 2 };
        p.n_z.len() == 2 && p.n_z.iter().all(|&z| z == p.expected_n_z) && p.rotation_pairs_ok && sum_ok
    };
    let all_ok = pairs.iter().all(pair_ok) && bigon_signs == [1, -1] && diff == [0, 0];
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|p| {
            let list = |v: Vec<String>| v.join(",");
            vec![
                p.k.to_string(),
                list(p.n_z.iter().map(ToString::to_string).collect()),
                p.expected_n_z.to_string(),
                list(p.delta_p_parities.iter().map(ToString::to_string).collect()),
                p.untwisted_sum.to_string(),
                p.twisted_sum.to_string(),
                verdict(pair_ok(p)).into(),
            ]
        })
        .collect();
    let mut text = table(&["k", "n_z", "expected", "parities", "untwisted", "twisted", "result"], &rows);
    let _ = writeln!(text, "bigon signs {:?}  differential {:?}", bigon_signs, diff);
    let report = TriangleReport { maxk, twisted, pairs, bigon_signs, bigon_differential: diff, all_ok };
    Ok(Report::new(&report, text, all_ok))
}

/// Caps the global thread pool from `PINFLOER_THREADS`, if set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("PINFLOER_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("PINFLOER_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("pinfloer").chain(args.iter().copied()))
    }

    #[test]
    fn unknown_subcommand_is_input_error() {
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["grid", "hom"]).code, 2);
    }

    #[test]
    fn pin_demo_passes() {
        let out = run_args(&["pin", "demo"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["pin1_is_klein_four"], true);
        assert_eq!(v["double_cover"]["negation_same_matrix"], true);
    }

    #[test]
    fn triangle_check_exit_codes() {
        assert_eq!(run_args(&["triangle", "check", "--maxk", "3", "--twisted"]).code, 0);
        assert_eq!(run_args(&["triangle", "check", "--maxk", "3"]).code, 0);
        assert_eq!(run_args(&["triangle", "check", "--maxk", "0"]).code, 2);
    }

    #[test]
    fn two_step_tensor() {
        let mut r = BTreeMap::new();
        r.insert(Bigrading::new(0, 0), 1);
        r.insert(Bigrading::new(-1, -2), 1);
        let t = tensor_two_step(&r);
        assert_eq!(t.values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
    }
}
