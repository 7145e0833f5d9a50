//! Command-line front end: witness verification, class-table dumps, the
//! three structure-constant routes, generating-pair counts, the correction
//! and inequality layers, character-table building, and the acceptance
//! suites. Reports stream as one JSON object per line; `--out` collects them
//! into a JSON array. Exit code is zero iff no check FAILed.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use regugen_core::chartab::{theta, CharacterTable, ThetaInput};
use regugen_core::classes::{
    delta_brute, delta_star, dump_classes, enumerate_classes, ClassTable, EngineError,
    DEFAULT_ENUM_BUDGET,
};
use regugen_core::dixon::dixon_build;
use regugen_core::element::GroupSpec;
use regugen_core::formulas::{formula_eval, order_of, verify_union_bound, OrderFamily, Params};
use regugen_core::report::{exit_code, sort_reports, Report, Status, PROV_CATALOG, PROV_FORMULA};
use regugen_core::suite::{suite_desk, suite_extended};
use regugen_core::witness::{catalog, parse_witness_file, verify, witness_by_id};

#[derive(Parser)]
#[command(
    name = "regugen",
    about = "Exact verification toolkit for generation of finite groups of Lie type by regular unipotent elements",
    version
)]
struct Cli {
    /// Write the report array to this file in addition to streaming lines.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay generation witnesses from the built-in catalog or a file.
    Witness {
        #[command(subcommand)]
        action: WitnessAction,
    },
    /// Enumerate a group and dump its conjugacy-class table.
    Classes(ClassesArgs),
    /// Structure constants by brute counting, character table, or formula.
    Delta {
        #[command(subcommand)]
        route: DeltaRoute,
    },
    /// Generating-pair counts (pairs that generate the whole group).
    Genpairs(GenpairsArgs),
    /// The lower-bound correction delta - sum h * sigma.
    Theta(ThetaArgs),
    /// Subfield union bounds and power-of-two sandwiches.
    Inequality(InequalityArgs),
    /// Exact group orders by the product formulas.
    Order(OrderArgs),
    /// Build or validate character-table files.
    Chartab {
        #[command(subcommand)]
        action: ChartabAction,
    },
    /// Run an acceptance suite (`desk` or `extended`).
    Suite { tier: String },
}

#[derive(Subcommand)]
enum WitnessAction {
    /// Verify one witness by id, every witness with --all, or a file.
    Verify {
        id: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// List the catalog ids.
    List,
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(long)]
    group: String,
    /// Enumeration budget (number of elements).
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
    budget: u64,
}

#[derive(Args, Clone)]
struct ClassSelector {
    /// Three class labels, e.g. `4a 4b 4c`.
    #[arg(long, num_args = 3)]
    classes: Vec<String>,
    /// Explicit class indices `i,j,k`, required when labels are ambiguous.
    #[arg(long, value_delimiter = ',')]
    class_index: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum DeltaRoute {
    /// Count pairs directly in the enumerated group.
    Brute {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        sel: ClassSelector,
    },
    /// Evaluate the character sum on a table file.
    Table {
        #[arg(long)]
        table: std::path::PathBuf,
        #[command(flatten)]
        sel: ClassSelector,
    },
    /// Evaluate a catalog formula.
    Formula {
        #[arg(long)]
        id: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// +1 for the linear case, -1 for the unitary case.
        #[arg(long, allow_hyphen_values = true)]
        delta_sign: Option<i32>,
        #[arg(long)]
        i: Option<u32>,
        #[arg(long)]
        j: Option<u32>,
    },
}

#[derive(Args)]
struct GenpairsArgs {
    #[arg(long)]
    group: String,
    #[command(flatten)]
    sel: ClassSelector,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    delta: BigInt,
    /// Corrections `h:sigma`, repeatable.
    #[arg(long = "correction")]
    corrections: Vec<String>,
}

#[derive(Args)]
struct InequalityArgs {
    /// `f4` or `2e6`.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 60)]
    max_m: u64,
}

#[derive(Args)]
struct OrderArgs {
    /// Family tag: SL, SU, Sp, O+, O-, O, G2, F4, E6, 2E6, 3D4, Sz, 2G2, 2F4.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum ChartabAction {
    /// Build the exact table of an enumerable group and write it out.
    Build {
        #[arg(long)]
        group: String,
        #[arg(long)]
        file: std::path::PathBuf,
    },
    /// Validate a table file against the orthogonality relations.
    Check { file: std::path::PathBuf },
}

fn main() {
    if let Ok(threads) = std::env::var("REGUGEN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let reports = match run(&cli.command) {
        Ok(reports) => reports,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    for r in &reports {
        println!("{}", r.to_json_line());
    }
    if let Some(path) = &cli.out {
        let arr: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| serde_json::to_value(r).unwrap())
            .collect();
        let mut f = std::fs::File::create(path).expect("create output file");
        writeln!(f, "{}", serde_json::to_string_pretty(&arr).unwrap()).expect("write output");
    }
    std::process::exit(exit_code(&reports));
}

fn run(cmd: &Command) -> Result<Vec<Report>, String> {
    match cmd {
        Command::Witness { action } => run_witness(action),
        Command::Classes(args) => run_classes(args),
        Command::Delta { route } => run_delta(route),
        Command::Genpairs(args) => run_genpairs(args),
        Command::Theta(args) => run_theta(args),
        Command::Inequality(args) => run_inequality(args),
        Command::Order(args) => run_order(args),
        Command::Chartab { action } => run_chartab(action),
        Command::Suite { tier } => match tier.as_str() {
            "desk" => Ok(suite_desk()),
            "extended" => Ok(suite_extended()),
            other => Err(format!("unknown suite tier `{other}` (use desk or extended)")),
        },
    }
}

fn run_witness(action: &WitnessAction) -> Result<Vec<Report>, String> {
    match action {
        WitnessAction::List => {
            for w in catalog() {
                println!("{}", w.id);
            }
            Ok(Vec::new())
        }
        WitnessAction::Verify { id, all, file } => {
            let mut out = Vec::new();
            if let Some(path) = file {
                let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                let w = parse_witness_file(&text).map_err(|e| e.to_string())?;
                out.extend(verify(&w));
            } else if *all {
                for w in catalog() {
                    out.extend(verify(&w));
                }
                sort_reports(&mut out);
            } else {
                let id = id.as_deref().ok_or("pass a witness id, --all, or --file")?;
                let w = witness_by_id(id).ok_or_else(|| format!("unknown witness `{id}`"))?;
                out.extend(verify(&w));
            }
            Ok(out)
        }
    }
}

fn run_classes(args: &ClassesArgs) -> Result<Vec<Report>, String> {
    let spec = GroupSpec::parse(&args.group).map_err(|e| e.to_string())?;
    let ct = enumerate_classes(&spec, args.budget).map_err(|e| e.to_string())?;
    let rows = dump_classes(&ct);
    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
    Ok(Vec::new())
}

/// Resolves three class labels with the ambiguity guard: labels whose
/// (order, size) pair is shared by a twin class require `--class-index`.
fn resolve_classes(ct: &ClassTable, sel: &ClassSelector) -> Result<(usize, usize, usize), String> {
    if let Some(idx) = &sel.class_index {
        if idx.len() != 3 {
            return Err("--class-index needs exactly three indices".into());
        }
        for &i in idx {
            if i >= ct.class_count() {
                return Err(format!("class index {i} out of range"));
            }
        }
        return Ok((idx[0], idx[1], idx[2]));
    }
    if sel.classes.len() != 3 {
        return Err("--classes needs exactly three labels".into());
    }
    let mut ids = Vec::new();
    for label in &sel.classes {
        match ct.resolve_label(label) {
            Ok(i) => ids.push(i),
            Err(EngineError::AmbiguousLabel { label, candidates }) => {
                let listing: Vec<String> = candidates
                    .iter()
                    .map(|&c| {
                        format!(
                            "{} (index {c}, size {})",
                            ct.classes[c].label, ct.classes[c].size
                        )
                    })
                    .collect();
                return Err(format!(
                    "label `{label}` is ambiguous between {}; rerun with --class-index i,j,k",
                    listing.join(", ")
                ));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok((ids[0], ids[1], ids[2]))
}

fn run_delta(route: &DeltaRoute) -> Result<Vec<Report>, String> {
    match route {
        DeltaRoute::Brute { group, sel } => {
            let t0 = Instant::now();
            let spec = GroupSpec::parse(group).map_err(|e| e.to_string())?;
            let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).map_err(|e| e.to_string())?;
            let (c1, c2, c3) = resolve_classes(&ct, sel)?;
            let v = delta_brute(&ct, c1, c2, c3).map_err(|e| e.to_string())?;
            Ok(vec![Report::new(
                format!(
                    "delta-brute/{}/{},{},{}",
                    spec.name, ct.classes[c1].label, ct.classes[c2].label, ct.classes[c3].label
                ),
                Status::Pass,
                "exact count",
                v.to_string(),
                PROV_CATALOG,
                t0.elapsed().as_millis(),
            )])
        }
        DeltaRoute::Table { table, sel } => {
            let t0 = Instant::now();
            let text = std::fs::read_to_string(table).map_err(|e| e.to_string())?;
            let tab = CharacterTable::from_json_str(&text).map_err(|e| e.to_string())?;
            tab.validate().map_err(|e| e.to_string())?;
            let find = |label: &str| -> Result<usize, String> {
                let idx = tab
                    .classes
                    .iter()
                    .position(|c| c.label == label)
                    .ok_or_else(|| format!("label `{label}` not in table"))?;
                let me = &tab.classes[idx];
                let twins: Vec<usize> = (0..tab.classes.len())
                    .filter(|&i| {
                        tab.classes[i].element_order == me.element_order
                            && tab.classes[i].size == me.size
                    })
                    .collect();
                if twins.len() > 1 {
                    return Err(format!(
                        "label `{label}` is ambiguous between indices {twins:?}; rerun with --class-index"
                    ));
                }
                Ok(idx)
            };
            let (c1, c2, c3) = if let Some(idx) = &sel.class_index {
                if idx.len() != 3 {
                    return Err("--class-index needs exactly three indices".into());
                }
                (idx[0], idx[1], idx[2])
            } else {
                if sel.classes.len() != 3 {
                    return Err("--classes needs exactly three labels".into());
                }
                (
                    find(&sel.classes[0])?,
                    find(&sel.classes[1])?,
                    find(&sel.classes[2])?,
                )
            };
            let v = tab.delta_from_table(c1, c2, c3).map_err(|e| e.to_string())?;
            Ok(vec![Report::new(
                format!("delta-table/{}/{c1},{c2},{c3}", tab.name),
                Status::Pass,
                "exact character sum",
                v.to_string(),
                PROV_FORMULA,
                t0.elapsed().as_millis(),
            )])
        }
        DeltaRoute::Formula {
            id,
            q,
            m,
            delta_sign,
            i,
            j,
        } => {
            let t0 = Instant::now();
            let params = Params {
                q: *q,
                m: *m,
                delta: *delta_sign,
                i: *i,
                j: *j,
            };
            let v = formula_eval(id, &params).map_err(|e| e.to_string())?;
            Ok(vec![Report::new(
                format!("delta-formula/{id}"),
                Status::Pass,
                "exact formula value",
                v.to_string(),
                PROV_FORMULA,
                t0.elapsed().as_millis(),
            )])
        }
    }
}

fn run_genpairs(args: &GenpairsArgs) -> Result<Vec<Report>, String> {
    let t0 = Instant::now();
    let spec = GroupSpec::parse(&args.group).map_err(|e| e.to_string())?;
    let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).map_err(|e| e.to_string())?;
    let (c1, c2, c3) = resolve_classes(&ct, &args.sel)?;
    let full = u128::from(ct.order);
    let v = delta_star(&ct, c1, c2, c3, full).map_err(|e| e.to_string())?;
    Ok(vec![Report::new(
        format!(
            "genpairs/{}/{},{},{}",
            spec.name, ct.classes[c1].label, ct.classes[c2].label, ct.classes[c3].label
        ),
        Status::Pass,
        "exact generating-pair count",
        v.to_string(),
        PROV_CATALOG,
        t0.elapsed().as_millis(),
    )])
}

fn run_theta(args: &ThetaArgs) -> Result<Vec<Report>, String> {
    let t0 = Instant::now();
    let mut corrections = Vec::new();
    for c in &args.corrections {
        let (h, sigma) = c
            .split_once(':')
            .ok_or_else(|| format!("correction `{c}` is not h:sigma"))?;
        let h: BigUint = h.parse().map_err(|_| format!("bad h in `{c}`"))?;
        let sigma: BigUint = sigma.parse().map_err(|_| format!("bad sigma in `{c}`"))?;
        corrections.push((h, sigma));
    }
    let out = theta(&ThetaInput {
        delta: args.delta.clone(),
        corrections,
    });
    Ok(vec![Report::new(
        "theta",
        if out.nonnegative { Status::Pass } else { Status::Fail },
        "nonnegative lower bound",
        out.value.to_string(),
        PROV_CATALOG,
        t0.elapsed().as_millis(),
    )])
}

fn run_inequality(args: &InequalityArgs) -> Result<Vec<Report>, String> {
    let family = match args.family.as_str() {
        "f4" | "F4" => OrderFamily::F4,
        "2e6" | "2E6" => OrderFamily::TwistedE6,
        other => return Err(format!("unknown family `{other}` (use f4 or 2e6)")),
    };
    let mut out = Vec::new();
    for m in 1..=args.max_m {
        let t0 = Instant::now();
        let r = verify_union_bound(family, m).map_err(|e| e.to_string())?;
        let ok = r.union_holds && r.sandwich_lower_holds && r.sandwich_upper_holds;
        out.push(Report::new(
            format!("inequality/{}/m={m}", r.family),
            if ok { Status::Pass } else { Status::Fail },
            "union bound and sandwich hold",
            format!(
                "union={} sandwich=({},{}) lhs={} rhs={}",
                r.union_holds, r.sandwich_lower_holds, r.sandwich_upper_holds, r.lhs, r.rhs
            ),
            PROV_FORMULA,
            t0.elapsed().as_millis(),
        ));
    }
    Ok(out)
}

fn run_order(args: &OrderArgs) -> Result<Vec<Report>, String> {
    let t0 = Instant::now();
    let family = OrderFamily::parse(&args.family)
        .ok_or_else(|| format!("unknown family `{}`", args.family))?;
    let v = order_of(family, args.n, args.q).map_err(|e| e.to_string())?;
    Ok(vec![Report::new(
        format!("order/{}({},{})", args.family, args.n, args.q),
        Status::Pass,
        "exact order",
        v.to_string(),
        PROV_FORMULA,
        t0.elapsed().as_millis(),
    )])
}

fn run_chartab(action: &ChartabAction) -> Result<Vec<Report>, String> {
    match action {
        ChartabAction::Build { group, file } => {
            let t0 = Instant::now();
            let spec = GroupSpec::parse(group).map_err(|e| e.to_string())?;
            let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).map_err(|e| e.to_string())?;
            let tab = dixon_build(&ct).map_err(|e| e.to_string())?;
            std::fs::write(file, tab.to_json_string()).map_err(|e| e.to_string())?;
            Ok(vec![Report::new(
                format!("chartab-build/{}", spec.name),
                Status::Pass,
                "validated table written",
                format!(
                    "{} irreducibles, conductor {}",
                    tab.class_count(),
                    tab.conductor
                ),
                PROV_FORMULA,
                t0.elapsed().as_millis(),
            )])
        }
        ChartabAction::Check { file } => {
            let t0 = Instant::now();
            let text = std::fs::read_to_string(file).map_err(|e| e.to_string())?;
            let tab = CharacterTable::from_json_str(&text).map_err(|e| e.to_string())?;
            let result = tab.validate();
            let ok = result.is_ok();
            Ok(vec![Report::new(
                format!("chartab-check/{}", tab.name),
                if ok { Status::Pass } else { Status::Fail },
                "orthogonality and degree relations hold",
                match result {
                    Ok(()) => "valid".to_string(),
                    Err(e) => e.to_string(),
                },
                PROV_FORMULA,
                t0.elapsed().as_millis(),
            )])
        }
    }
}
