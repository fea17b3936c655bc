//! `tropehrhart`: batch front-end for tropical vector bundle computations.

mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropehrhart::hrr::hrr_verify;
use tropehrhart::lattice::LatticeBox;
use tropehrhart::taut::{flag_alternating_sum, TautologicalBundle};
use tropehrhart::tropvb::{BundleError, TropicalVectorBundle};

use error::CliError;
use input::{check_len, load_bundle, load_chain, load_matroid, parse_box, parse_ints};
use report::{alternating, elements, fmt_ints, fmt_one_based, int, ints, lattice, lattice_box, one_based, rational, Table};

/// Largest `m` accepted by `flag-sum`; the subset recursion costs `3^m`.
const MAX_FLAG_SUM_M: usize = 16;

#[derive(Parser)]
#[command(name = "tropehrhart", version, about = "Exact Ehrhart theory for tropical vector bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,
    /// Same as `--output table`.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct BundleArg {
    /// Bundle JSON file.
    #[arg(long)]
    bundle: PathBuf,
}

#[derive(Args)]
struct Weight {
    /// Character `u`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Summation box `LO:HI`, for example `-3,-3:3,3`.
    #[arg(long = "box", allow_hyphen_values = true)]
    bx: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a bundle and report its adapted bases.
    Validate(BundleArg),
    /// Global sections at a character, or summed over a box.
    H0 {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        weight: Weight,
    },
    /// Equivariant Euler characteristic.
    Chi {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        weight: Weight,
    },
    /// Evaluate a chain file, or the chain of a bundle's support function.
    AlphaEval {
        /// Bundle JSON file.
        #[arg(long, conflicts_with = "chain", required_unless_present = "chain")]
        bundle: Option<PathBuf>,
        /// Chain JSON file.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[command(flatten)]
        weight: Weight,
    },
    /// Riemann-Roch check: Todd operator on the interpolated integral.
    Hrr(BundleArg),
    /// Split resolution and its K-class identity.
    Resolve {
        #[command(flatten)]
        bundle: BundleArg,
        /// Bound per ray, comma separated; defaults to the row maxima.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Vanishing check for the tautological bundle of a matroid.
    TautCheck {
        /// Matroid JSON file.
        #[arg(long)]
        matroid: PathBuf,
        /// Coordinate bound of the verified slice box; defaults to `m`.
        #[arg(long)]
        max_coord: Option<i64>,
        /// Character whose codimension split is reported; defaults to `e_1`.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Signed count of flags of subsets of `[m]`.
    FlagSum {
        #[arg(long)]
        m: usize,
    },
}

struct Report {
    json: Value,
    table: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.table { Format::Table } else { cli.output };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(r) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
                Format::Table => println!("{}", r.table),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("TROPEHRHART_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::validation("environment", format!("TROPEHRHART_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::internal("environment", e.to_string()))
}

fn run(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Validate(b) => validate(&load_bundle(&b.bundle)?),
        Command::H0 { bundle, weight } => h0(&load_bundle(&bundle.bundle)?, &weight),
        Command::Chi { bundle, weight } => chi(&load_bundle(&bundle.bundle)?, &weight),
        Command::AlphaEval { bundle: Some(b), weight, .. } => alpha_bundle(&load_bundle(&b)?, &weight),
        Command::AlphaEval { chain: Some(c), weight, .. } => alpha_chain(&c, &weight),
        Command::AlphaEval { .. } => Err(CliError::validation("argument", "alpha-eval needs --bundle or --chain".into())),
        Command::Hrr(b) => hrr(&load_bundle(&b.bundle)?),
        Command::Resolve { bundle, f } => resolve(&load_bundle(&bundle.bundle)?, f.as_deref()),
        Command::TautCheck { matroid, max_coord, u } => taut_check(&matroid, max_coord, u.as_deref()),
        Command::FlagSum { m } => flag_sum(m),
    }
}

fn weight_u(w: &Weight, dim: usize) -> Result<Option<Vec<i64>>, CliError> {
    match &w.u {
        Some(s) => {
            let u = parse_ints(s, "--u")?;
            check_len(&u, dim, "--u")?;
            Ok(Some(u))
        }
        None => Ok(None),
    }
}

fn weight_box(w: &Weight, dim: usize, default: impl FnOnce() -> Result<LatticeBox, CliError>) -> Result<LatticeBox, CliError> {
    match &w.bx {
        Some(s) => parse_box(s, dim),
        None => default(),
    }
}

fn bundle_box(e: &TropicalVectorBundle, w: &Weight) -> Result<LatticeBox, CliError> {
    weight_box(w, e.fan().ambient_dim(), || Ok(e.default_box()?))
}

fn validate(e: &TropicalVectorBundle) -> Result<Report, CliError> {
    let mut t = Table::new(&["cone", "adapted basis"]);
    let bases: Vec<Value> = e
        .fan()
        .maximal_cones()
        .iter()
        .map(|&c| {
            let rays = &e.fan().cone(c).rays;
            let b = e.adapted_basis(c);
            t.row(vec![fmt_one_based(rays), b.to_string()]);
            json!({ "cone": one_based(rays), "basis": elements(b) })
        })
        .collect();
    let json = json!({
        "valid": true,
        "rank": e.rank(),
        "ground_size": e.matroid().ground_size(),
        "rays": e.fan().rays().len(),
        "maximal_cones": e.fan().maximal_cones().len(),
        "split": e.is_split(),
        "adapted_bases": bases,
    });
    let table = format!("valid bundle of rank {} on {} rays\n{}", e.rank(), e.fan().rays().len(), t.render());
    Ok(Report { json, table })
}

fn h0(e: &TropicalVectorBundle, w: &Weight) -> Result<Report, CliError> {
    let dim = e.fan().ambient_dim();
    if let Some(u) = weight_u(w, dim)? {
        let mut t = Table::new(&["cone", "h0"]);
        let local: Vec<Value> = (0..e.fan().cones().len())
            .map(|c| {
                let rays = &e.fan().cone(c).rays;
                let h = e.h0_local(c, &u);
                t.row(vec![fmt_one_based(rays), h.to_string()]);
                json!({ "cone": one_based(rays), "h0": h })
            })
            .collect();
        let g = e.h0_global(&u);
        let json = json!({
            "u": ints(&u),
            "h0_global": g,
            "sections": elements(e.global_section_flat(&u)),
            "local": local,
        });
        let table = format!("h0 at {} = {g}\n{}", fmt_ints(&u), t.render());
        return Ok(Report { json, table });
    }
    let bx = bundle_box(e, w)?;
    let mut t = Table::new(&["u", "h0"]);
    let mut total = 0i64;
    let mut weights = Vec::new();
    for u in bx.points() {
        let h = e.h0_global(&u) as i64;
        if h != 0 {
            total += h;
            t.row(vec![fmt_ints(&u), h.to_string()]);
            weights.push(json!({ "u": ints(&u), "h0": h }));
        }
    }
    let json = json!({ "box": lattice_box(&bx), "h0_total": int(total), "weights": weights });
    let table = format!("{}\ntotal h0 = {total}", t.render());
    Ok(Report { json, table })
}

fn chi(e: &TropicalVectorBundle, w: &Weight) -> Result<Report, CliError> {
    let dim = e.fan().ambient_dim();
    if let Some(u) = weight_u(w, dim)? {
        let parts = e.euler_char_by_codim(&u);
        let c = e.euler_char_u(&u);
        let mut t = Table::new(&["codim", "rank sum"]);
        for (k, x) in parts.iter().enumerate() {
            t.row(vec![k.to_string(), x.to_string()]);
        }
        let json = json!({ "u": ints(&u), "chi": int(c), "by_codim": ints(&parts) });
        let table = format!("{}\nchi at {} = {} = {c}", t.render(), fmt_ints(&u), alternating(&parts));
        return Ok(Report { json, table });
    }
    let bx = bundle_box(e, w)?;
    let total = e.euler_char_total_on(&bx)?;
    let mut t = Table::new(&["u", "chi"]);
    let mut weights = Vec::new();
    let mut by_codim = vec![0i64; dim + 1];
    for u in bx.points() {
        for (acc, x) in by_codim.iter_mut().zip(e.euler_char_by_codim(&u)) {
            *acc += x;
        }
        let c = e.euler_char_u(&u);
        if c != 0 {
            t.row(vec![fmt_ints(&u), c.to_string()]);
            weights.push(json!({ "u": ints(&u), "chi": int(c) }));
        }
    }
    let json = json!({
        "box": lattice_box(&bx),
        "chi_total": int(total),
        "by_codim_total": ints(&by_codim),
        "weights": weights,
    });
    let table = format!("{}\nchi_total = {} = {total}", t.render(), alternating(&by_codim));
    Ok(Report { json, table })
}

fn alpha_bundle(e: &TropicalVectorBundle, w: &Weight) -> Result<Report, CliError> {
    let dim = e.fan().ambient_dim();
    let alpha = e.chain_alpha()?;
    if let Some(u) = weight_u(w, dim)? {
        let (a, c) = (alpha.evaluate_lattice(&u), e.euler_char_u(&u));
        let json = json!({ "u": ints(&u), "alpha": int(a), "chi": int(c), "agree": a == c });
        let table = format!("alpha at {} = {a}\nchi at {} = {c}", fmt_ints(&u), fmt_ints(&u));
        return Ok(Report { json, table });
    }
    let bx = bundle_box(e, w)?;
    let sum = alpha.lattice_sum(&bx)?;
    let total = e.euler_char_total_on(&bx)?;
    let mismatch = match e.verify_alpha_on(&alpha, &bx) {
        Ok(()) => Value::Null,
        Err(BundleError::MainTheoremViolation { u, chi, alpha }) => json!({ "u": ints(&u), "chi": int(chi), "alpha": int(alpha) }),
        Err(other) => return Err(other.into()),
    };
    let agree = mismatch.is_null() && sum == total;
    let json = json!({
        "box": lattice_box(&bx),
        "alpha_lattice_sum": int(sum),
        "chi_total": int(total),
        "agree": agree,
        "first_mismatch": mismatch,
    });
    let table = format!("alpha lattice sum = {sum}\nchi_total = {total}\nagree = {agree}");
    Ok(Report { json, table })
}

fn alpha_chain(path: &std::path::Path, w: &Weight) -> Result<Report, CliError> {
    let c = load_chain(path)?;
    let dim = c.ambient_dim();
    if let Some(u) = weight_u(w, dim)? {
        let v = c.evaluate_lattice(&u);
        let json = json!({ "u": ints(&u), "value": int(v) });
        return Ok(Report { json, table: format!("value at {} = {v}", fmt_ints(&u)) });
    }
    let bx = weight_box(w, dim, || Ok(c.default_box()))?;
    let sum = c.lattice_sum(&bx)?;
    let json = json!({ "box": lattice_box(&bx), "lattice_sum": int(sum), "degree": int(c.degree()) });
    Ok(Report { json, table: format!("lattice sum = {sum}\ndegree = {}", c.degree()) })
}

fn hrr(e: &TropicalVectorBundle) -> Result<Report, CliError> {
    let r = hrr_verify(e)?;
    let json = json!({ "lhs": rational(&r.lhs), "rhs": int(r.rhs), "equal": r.equal });
    let mut t = Table::new(&["side", "value"]);
    t.row(vec!["Todd(I)(0)".into(), tropehrhart::lattice::arith::format_pq(&r.lhs)]);
    t.row(vec!["chi_total".into(), r.rhs.to_string()]);
    let table = format!("{}\nI(z) = {}\nequal = {}", t.render(), r.polynomial, r.equal);
    Ok(Report { json, table })
}

fn resolve(e: &TropicalVectorBundle, f: Option<&str>) -> Result<Report, CliError> {
    let res = match f {
        Some(s) => e.split_resolution(&parse_ints(s, "--f")?)?,
        None => e.split_resolution_default()?,
    };
    let identity = e.k_class_identity(&res)?;
    let maxes = e.fan().maximal_cones();
    let mut t = Table::new(&["part", "cone", "characters"]);
    let parts: Vec<Value> = res
        .parts()
        .iter()
        .map(|p| {
            let chars: Vec<Value> = maxes
                .iter()
                .enumerate()
                .map(|(pos, &m)| {
                    let rays = &e.fan().cone(m).rays;
                    let ms = p.characters_at(pos);
                    let text: Vec<String> = ms.iter().map(|v| fmt_ints(&v.0)).collect();
                    t.row(vec![format!("F{}", p.codim()), fmt_one_based(rays), text.join(" ")]);
                    json!({ "cone": one_based(rays), "multiset": ms.iter().map(lattice).collect::<Vec<_>>() })
                })
                .collect();
            json!({ "codim": p.codim(), "rank": p.rank(), "characters": chars })
        })
        .collect();
    let json = json!({ "bound": ints(res.bound()), "parts": parts, "k_class_identity": identity });
    let table = format!("bound = {}\n{}\nK-class identity = {identity}", fmt_ints(res.bound()), t.render());
    Ok(Report { json, table })
}

fn taut_check(path: &std::path::Path, max_coord: Option<i64>, u: Option<&str>) -> Result<Report, CliError> {
    let m = load_matroid(path)?;
    let u = match u {
        Some(s) => {
            let u = parse_ints(s, "--u")?;
            check_len(&u, m.ground_size(), "--u")?;
            u
        }
        None => (0..m.ground_size()).map(|i| i64::from(i == 0)).collect(),
    };
    let k = max_coord.unwrap_or(m.ground_size() as i64);
    if k < 0 {
        return Err(CliError::validation("argument", format!("--max-coord {k} is negative")));
    }
    let t = TautologicalBundle::new(&m)?;
    let rep = t.vanishing_check(k);
    let parts = t.chi_by_codim(&u);
    let (chi_u, h0_u) = (t.chi_flag_sum(&u), t.h0_global_closed(&u));
    let failures: Vec<Value> = rep
        .failures
        .iter()
        .map(|f| {
            json!({
                "u": ints(&f.u),
                "chi_flag_sum": int(f.chi_flag_sum),
                "chi_generic": int(f.chi_generic),
                "h0_closed_form": int(f.h0_closed_form),
                "h0_generic": int(f.h0_generic),
            })
        })
        .collect();
    let bases: Vec<Value> = m.bases().iter().map(|&b| elements(b)).collect();
    let json = json!({
        "matroid": { "m": m.ground_size(), "bases": bases },
        "verified_box": lattice_box(&rep.verified_box),
        "checked": rep.checked,
        "all_equal": rep.all_equal,
        "failures": failures,
        "at_u": { "u": ints(&u), "by_codim": ints(&parts), "chi": int(chi_u), "h0": int(h0_u) },
    });
    let mut tab = Table::new(&["u", "chi (flags)", "chi (cones)", "h0 (closed)", "h0 (cones)"]);
    for f in &rep.failures {
        tab.row(vec![
            fmt_ints(&f.u),
            f.chi_flag_sum.to_string(),
            f.chi_generic.to_string(),
            f.h0_closed_form.to_string(),
            f.h0_generic.to_string(),
        ]);
    }
    let mut table = format!(
        "matroid of rank {} on {} elements\nslice characters checked: {}\nall equal: {}\nchi at {} = {} = {chi_u}, h0 = {h0_u}",
        m.rank(),
        m.ground_size(),
        rep.checked,
        rep.all_equal,
        fmt_ints(&u),
        alternating(&parts)
    );
    if !rep.failures.is_empty() {
        table.push('\n');
        table.push_str(&tab.render());
    }
    Ok(Report { json, table })
}

fn flag_sum(m: usize) -> Result<Report, CliError> {
    if m == 0 || m > MAX_FLAG_SUM_M {
        return Err(CliError::validation("argument", format!("--m must be in 1..={MAX_FLAG_SUM_M}")));
    }
    let s = flag_alternating_sum(m);
    let expected = if m.is_multiple_of(2) { 1 } else { -1 };
    let json = json!({ "m": m, "sum": int(s), "expected": expected, "equal": s == expected });
    Ok(Report { json, table: format!("sum over flags of subsets of [{m}] = {s} (expected {expected})") })
}
