//! `ckm`: continuum Kac-Moody computations from the shell.
//!
//! Exit codes: 0 success or all checks pass, 1 a check failed and a
//! counterexample was printed, 2 usage or parse error, 3 resource
//! limit. All output is deterministic for fixed inputs and seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use continuum_km::axioms::{
    check_cancellation_lemma, check_good_cartan, check_positive_semigroup, AxiomReport,
};
use continuum_km::bkm::{
    cartan_matrix, degree_map_collision, dot_export, embed, greek_labels, is_irreducible,
    verify_presentation, IrreducibleSet,
};
use continuum_km::enumerate::enumerate_intervals;
use continuum_km::expr::{eval_expr, ExprError};
use continuum_km::graded::{build_graded, gabber_kac_mult, CartanMatrix};
use continuum_km::interval::{parse_interval, Interval};
use continuum_km::lie::{bracket, jacobi_defect, LieElement};
use continuum_km::rat::{fmt_rat, parse_rat, rat};
use continuum_km::shape::{parse_graph, ShapeGraph};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

/// Sizes past the exact-arithmetic guard rails of the model builder.
const MAX_RANK: usize = 6;
const MAX_HEIGHT: usize = 8;

#[derive(Parser)]
#[command(name = "ckm", version, about = "Continuum Kac-Moody toolbox")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the semigroup and Cartan-datum axiom suites on a grid sample.
    CheckAxioms {
        /// Shape-graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Grid spacing for interval endpoints, e.g. 1 or 1/2.
        #[arg(long, default_value = "1")]
        grid: String,
        /// Window clipping infinite arcs.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, required = true)]
        window: Vec<String>,
        /// Most runs per enumerated interval.
        #[arg(long, default_value_t = 3)]
        max_runs: usize,
        /// Random bracket identities checked on top of the exhaustive suites.
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Seed for the randomized suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cartan matrix and irreducibility verdict of an interval configuration.
    Cartan {
        /// Shape-graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Configuration file: one interval literal per line, `#` comments.
        #[arg(long)]
        set: PathBuf,
        /// Also write the Borcherds-Cartan diagram to this DOT file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate a bracket expression to canonical form.
    Bracket {
        /// Shape-graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Expression, e.g. "[e(a:0,2), f(a:0,1)]".
        #[arg(long)]
        expr: String,
    },
    /// Root multiplicity table of a Borcherds-Cartan matrix.
    Mult {
        /// Matrix file: first line the rank, then the rows.
        #[arg(long)]
        matrix: PathBuf,
        /// Largest root height listed.
        #[arg(long)]
        max_height: usize,
        #[arg(long, value_enum, default_value_t = Oracle::Both)]
        oracle: Oracle,
    },
    /// Check the presentation relations over a configuration's graded model.
    Verify {
        /// Shape-graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Configuration file.
        #[arg(long)]
        set: PathBuf,
        /// Largest number of joins per decomposed interval.
        #[arg(long)]
        depth: usize,
        /// Model height; defaults to 2*depth - 1, clamped to the guard rails.
        #[arg(long)]
        height: Option<usize>,
    },
    /// Map a coarser configuration's generators into a finer one's model.
    Embed {
        /// Shape-graph file.
        #[arg(long)]
        graph: PathBuf,
        /// The coarse configuration.
        #[arg(long)]
        set: PathBuf,
        /// The fine configuration whose model receives the images.
        #[arg(long)]
        into: PathBuf,
        /// Height of the receiving model.
        #[arg(long, default_value_t = 5)]
        height: usize,
    },
    /// Write a Borcherds-Cartan diagram in DOT format.
    Dot {
        /// Matrix file: first line the rank, then the rows.
        #[arg(long)]
        matrix: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Serre,
    GabberKac,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::CheckAxioms {
            graph,
            grid,
            window,
            max_runs,
            samples,
            seed,
        } => cmd_check_axioms(&graph, &grid, &window, max_runs, samples, seed),
        Cmd::Cartan { graph, set, dot } => cmd_cartan(&graph, &set, dot.as_deref()),
        Cmd::Bracket { graph, expr } => cmd_bracket(&graph, &expr),
        Cmd::Mult {
            matrix,
            max_height,
            oracle,
        } => cmd_mult(&matrix, max_height, oracle),
        Cmd::Verify {
            graph,
            set,
            depth,
            height,
        } => cmd_verify(&graph, &set, depth, height),
        Cmd::Embed {
            graph,
            set,
            into,
            height,
        } => cmd_embed(&graph, &set, &into, height),
        Cmd::Dot { matrix, out } => cmd_dot(&matrix, out.as_deref()),
    };
    ExitCode::from(code)
}

fn usage(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

fn limit(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: resource limit: {e}");
    EXIT_LIMIT
}

fn load_graph(path: &Path) -> Result<ShapeGraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_set(g: &ShapeGraph, path: &Path) -> Result<IrreducibleSet, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut members = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let iv = parse_interval(g, line)
            .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        members.push(iv);
    }
    IrreducibleSet::new(members).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_matrix(path: &Path) -> Result<CartanMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    CartanMatrix::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_check_axioms(
    graph: &Path,
    grid: &str,
    window: &[String],
    max_runs: usize,
    samples: u64,
    seed: u64,
) -> u8 {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    let q = match parse_rat(grid) {
        Ok(q) => q,
        Err(e) => return usage(e),
    };
    let (a, b) = match (parse_rat(&window[0]), parse_rat(&window[1])) {
        (Ok(a), Ok(b)) if a < b => (a, b),
        (Ok(_), Ok(_)) => return usage("window must satisfy A < B"),
        (Err(e), _) | (_, Err(e)) => return usage(e),
    };
    let sample = enumerate_intervals(&g, q, max_runs, (a, b));
    if sample.is_empty() {
        return usage("no intervals in the window; widen it or refine the grid");
    }
    if sample.len() > 2_000 {
        return limit(format!("{} intervals in the sample", sample.len()));
    }
    // Witness pools need finer grids and one extra run so that interior
    // splittings of sample intervals are present.
    let pool = enumerate_intervals(&g, q * rat(1, 4), max_runs + 1, (a, b));
    println!(
        "SAMPLE n={} pool={} grid={} window=[{},{}] max-runs={}",
        sample.len(),
        pool.len(),
        fmt_rat(q),
        fmt_rat(a),
        fmt_rat(b),
        max_runs
    );
    let reports = [
        check_positive_semigroup(&g, &sample),
        check_cancellation_lemma(&g, &sample),
        check_good_cartan(&g, &sample, &pool),
        random_bracket_report(&g, &sample, samples, seed),
    ];
    let mut ok = true;
    for r in &reports {
        println!("{}", r.line());
        for w in &r.warnings {
            println!("WARN {w}");
        }
        ok &= r.passed();
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Seeded random antisymmetry and Jacobi checks over the sample;
/// triples that the engine cannot resolve are skipped.
fn random_bracket_report(
    g: &ShapeGraph,
    sample: &[Interval],
    samples: u64,
    seed: u64,
) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0;
    let mut counterexample = None;
    let pick = |rng: &mut ChaCha8Rng| {
        let iv = sample[rng.gen_range(0..sample.len())].clone();
        match rng.gen_range(0..3) {
            0 => LieElement::e(iv),
            1 => LieElement::f(iv),
            _ => LieElement::h(g, &iv),
        }
    };
    for _ in 0..samples {
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if let (Ok(xy), Ok(yx)) = (bracket(g, &x, &y), bracket(g, &y, &x)) {
            if xy.add(&yx).is_zero() {
                passes += 1;
            } else {
                counterexample = Some(format!(
                    "[x,y] + [y,x] = {} for x = {}; y = {}",
                    xy.add(&yx).render(g),
                    x.render(g),
                    y.render(g)
                ));
                break;
            }
        }
        match jacobi_defect(g, &x, &y, &z) {
            Ok(d) if d.is_zero() => passes += 1,
            Ok(d) => {
                counterexample = Some(format!(
                    "jacobi defect {} for x = {}; y = {}; z = {}",
                    d.render(g),
                    x.render(g),
                    y.render(g),
                    z.render(g)
                ));
                break;
            }
            Err(_) => {}
        }
    }
    AxiomReport {
        id: "bracket-identities",
        sample: format!("{samples} random triples, seed {seed}"),
        passes,
        counterexample,
        warnings: Vec::new(),
    }
}

fn cmd_cartan(graph: &Path, set: &Path, dot: Option<&Path>) -> u8 {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    let s = match load_set(&g, set) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let a = match cartan_matrix(&g, &s) {
        Ok(a) => a,
        Err(e) => {
            println!("CARTAN ERROR {e}");
            return EXIT_FAIL;
        }
    };
    print!("{}", a.render());
    let verdict = is_irreducible(&g, &s);
    match &verdict {
        Ok(()) => println!("IRREDUCIBLE"),
        Err(w) => println!("NOT IRREDUCIBLE: {w}"),
    }
    if let Some(f) = degree_map_collision(&g, &s) {
        println!("FINDING {f}");
    }
    if let Some(path) = dot {
        let labels: Vec<String> = s.members().iter().map(|j| j.display(&g)).collect();
        if let Err(e) = fs::write(path, dot_export(&a, &labels)) {
            return usage(format!("{}: {e}", path.display()));
        }
        println!("DOT {}", path.display());
    }
    if verdict.is_ok() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_bracket(graph: &Path, expr: &str) -> u8 {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    match eval_expr(&g, expr) {
        Ok(x) => {
            print!("{}", render_lie(&g, &x));
            EXIT_OK
        }
        Err(ExprError::Unresolvable(u)) => {
            println!(
                "UNRESOLVABLE [{}({}), {}({})]",
                u.sign, u.left, u.sign, u.right
            );
            EXIT_FAIL
        }
        Err(e) => usage(e),
    }
}

/// Canonical form, one term per line: the Cartan part first, then
/// raising and lowering terms in interval order.
fn render_lie(g: &ShapeGraph, x: &LieElement) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    if !x.cartan.is_zero() {
        out.push_str(&format!("h: {}\n", x.cartan.render(g)));
    }
    for (iv, c) in &x.plus {
        out.push_str(&format!("{} * e({})\n", fmt_rat(*c), iv.display(g)));
    }
    for (iv, c) in &x.minus {
        out.push_str(&format!("{} * f({})\n", fmt_rat(*c), iv.display(g)));
    }
    out
}

fn cmd_mult(matrix: &Path, max_height: usize, oracle: Oracle) -> u8 {
    let a = match load_matrix(matrix) {
        Ok(a) => a,
        Err(e) => return usage(e),
    };
    if a.n() > MAX_RANK || max_height > MAX_HEIGHT {
        return limit(format!(
            "supported sizes are rank <= {MAX_RANK} and height <= {MAX_HEIGHT}"
        ));
    }
    let degs = degrees_up_to(a.n(), max_height);
    let model = match oracle {
        Oracle::GabberKac => None,
        _ => match build_graded(&a, max_height) {
            Ok(m) => Some(m),
            Err(e) => return limit(e),
        },
    };
    for d in &degs {
        let serre = model
            .as_ref()
            .map(|m| m.mult(d).expect("degree within the built height"));
        let gk = match oracle {
            Oracle::Serre => None,
            _ => Some(gabber_kac_mult(&a, d).expect("sizes checked against the guard rails")),
        };
        if let (Some(ms), Some(mg)) = (serre, gk) {
            if ms != mg {
                println!("DISCORDANT {} serre={ms} gabber-kac={mg}", fmt_deg(d));
                return EXIT_FAIL;
            }
        }
        let m = serre.or(gk).expect("at least one oracle ran");
        if m > 0 {
            println!("MULT {} {m}", fmt_deg(d));
        }
    }
    if matches!(oracle, Oracle::Both) {
        println!("CONCORDANT");
    }
    EXIT_OK
}

/// Degrees of height 1..=height in (height, lexicographic) order.
fn degrees_up_to(n: usize, height: usize) -> Vec<Vec<usize>> {
    fn fill(left: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            fill(left - v, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    for h in 1..=height {
        fill(h, 0, &mut cur, &mut out);
    }
    out
}

fn fmt_deg(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_verify(graph: &Path, set: &Path, depth: usize, height: Option<usize>) -> u8 {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    let s = match load_set(&g, set) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let a = match cartan_matrix(&g, &s) {
        Ok(a) => a,
        Err(e) => {
            println!("CARTAN ERROR {e}");
            return EXIT_FAIL;
        }
    };
    let h = height.unwrap_or_else(|| (2 * depth).saturating_sub(1).clamp(2, MAX_HEIGHT));
    let model = match build_graded(&a, h) {
        Ok(m) => m,
        Err(e) => return limit(e),
    };
    let report = verify_presentation(&g, &s, &model, depth);
    println!("{}", report.line());
    for w in &report.warnings {
        println!("WARN {w}");
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_embed(graph: &Path, set: &Path, into: &Path, height: usize) -> u8 {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    let small = match load_set(&g, set) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let big = match load_set(&g, into) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let a_big = match cartan_matrix(&g, &big) {
        Ok(a) => a,
        Err(e) => {
            println!("CARTAN ERROR {e}");
            return EXIT_FAIL;
        }
    };
    let model = match build_graded(&a_big, height) {
        Ok(m) => m,
        Err(e) => return limit(e),
    };
    match embed(&g, &small, &big, &model) {
        Ok(emb) => {
            for i in 0..small.len() {
                println!("EMBED e{} -> {}", i + 1, emb.e_images[i].render());
                println!("EMBED f{} -> {}", i + 1, emb.f_images[i].render());
                println!("EMBED h{} -> {}", i + 1, emb.h_images[i].render());
            }
            println!("HOMOMORPHISM verified on all generator pairs");
            EXIT_OK
        }
        Err(e) => {
            println!("EMBED ERROR {e}");
            EXIT_FAIL
        }
    }
}

fn cmd_dot(matrix: &Path, out: Option<&Path>) -> u8 {
    let a = match load_matrix(matrix) {
        Ok(a) => a,
        Err(e) => return usage(e),
    };
    let text = dot_export(&a, &greek_labels(a.n()));
    match out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                return usage(format!("{}: {e}", p.display()));
            }
            println!("DOT {}", p.display());
        }
        None => print!("{text}"),
    }
    EXIT_OK
}
