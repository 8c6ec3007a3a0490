//! Command-line front end. Everything is exhaustive and deterministic; JSON and CSV output
//! is stable, text output is for people.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::equivalence::{census, equivalent_bruteforce, equivalent_by_theorem, CensusTable};
use crate::gabidulin::{
    is_mrd, middle_nucleus_bruteforce, middle_nucleus_formula, min_distance,
    right_nucleus_bruteforce, right_nucleus_formula, GabidulinSpec, Nucleus,
};
use crate::gf::{prime_power, FieldSpec, FieldTower};
use crate::subspace::Subspace;
use crate::{Error, Limits, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOUND_VIOLATED: i32 = 2;
pub const EXIT_ORACLE_DISAGREEMENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gabidulin", version, about = "Projected Gabidulin codes: census, equivalence, nuclei")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Cap on enumerated set sizes (overrides GABIDULIN_MAX_CARD).
    #[arg(long, global = true)]
    max_card: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the field tower and print its parameters.
    Tower(FieldArgs),
    /// Exact orbit counts against the counting bound.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        /// Subspace dimensions, e.g. `2..3`.
        #[arg(long)]
        m: String,
        /// Code dimensions, e.g. `1` or `1..2`.
        #[arg(long)]
        k: String,
    },
    /// Decide equivalence of two projected codes by both oracles.
    Equiv {
        #[command(flatten)]
        code: CodeArgs,
        /// `k` of the second code (defaults to --k).
        #[arg(long)]
        k2: Option<usize>,
        /// `s` of the second code (defaults to --s).
        #[arg(long)]
        s2: Option<usize>,
    },
    /// Middle and right nuclei by formula and by exhaustive search.
    Nuclei(CodeArgs),
    /// Size, minimum distance, MRD property and root bound of a code.
    Verify(CodeArgs),
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Order of the base field K (a prime power).
    #[arg(long)]
    q: Option<u64>,
    /// Degree of K over its prime field; checked against --q.
    #[arg(long)]
    e: Option<u32>,
    /// Degree of F over K.
    #[arg(long)]
    n: Option<u32>,
    /// JSON field description `{p, e, n, modulus}` instead of --q/--n.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Code dimension over F.
    #[arg(long)]
    k: usize,
    /// Frobenius exponent, coprime to n.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Dimension of the default subspace span{1, x, ..., x^(m-1)}.
    #[arg(long)]
    m: Option<usize>,
    /// Subspace as inline JSON rows or a path to such a file; repeatable.
    #[arg(long)]
    subspace: Vec<String>,
}

/// Runs the command line `args` (including the program name), writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut limits = Limits::from_env();
    if let Some(card) = cli.max_card {
        limits.max_card = card;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(&cli, &limits));
    match result {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            if !report.text.ends_with('\n') {
                let _ = writeln!(out);
            }
            for note in &report.warnings {
                let _ = writeln!(err, "{note}");
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Report {
    text: String,
    code: i32,
    warnings: Vec<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report {
            text,
            code: EXIT_OK,
            warnings: Vec::new(),
        }
    }
}

fn dispatch(cli: &Cli, limits: &Limits) -> Result<Report> {
    match &cli.command {
        Command::Tower(field) => cmd_tower(field, cli.format, limits),
        Command::Census { field, m, k } => cmd_census(field, m, k, cli.format, limits),
        Command::Equiv { code, k2, s2 } => cmd_equiv(code, *k2, *s2, cli.format, limits),
        Command::Nuclei(code) => cmd_nuclei(code, cli.format, limits),
        Command::Verify(code) => cmd_verify(code, cli.format, limits),
    }
}

fn no_csv(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::InvalidParameters(format!(
            "csv output is only available for census, not {what}"
        )));
    }
    Ok(())
}

fn render(format: Format, value: &Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Text => text(),
        _ => serde_json::to_string_pretty(value).expect("report serializes"),
    }
}

fn read_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with(['[', '{']) {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Malformed(format!("{arg}: {e}")))
    }
}

fn build_tower(args: &FieldArgs, limits: &Limits) -> Result<FieldTower> {
    if let Some(path) = &args.field {
        if args.q.is_some() || args.n.is_some() {
            return Err(Error::InvalidParameters(
                "--field cannot be combined with --q/--n".into(),
            ));
        }
        let spec: FieldSpec = serde_json::from_str(&read_arg(path)?)
            .map_err(|e| Error::Malformed(e.to_string()))?;
        return FieldTower::from_spec(&spec, limits);
    }
    let (Some(q), Some(n)) = (args.q, args.n) else {
        return Err(Error::InvalidParameters(
            "need --q and --n (or --field)".into(),
        ));
    };
    let (_, e) = prime_power(q)?;
    if let Some(given) = args.e {
        if given != e {
            return Err(Error::InvalidParameters(format!(
                "--e {given} does not match q = {q} (degree {e})"
            )));
        }
    }
    FieldTower::from_q(q, n, limits)
}

fn parse_range(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::InvalidParameters(format!("bad range {s:?}, expected N, A..B or A,B,..."));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn default_subspace(tower: &FieldTower, m: usize) -> Result<Subspace> {
    if m == 0 || m > tower.n() {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= m <= n = {}, got m = {m}",
            tower.n()
        )));
    }
    let x = tower.generator();
    let gens: Vec<_> = (0..m as u64).map(|i| tower.pow(x, i)).collect();
    Ok(Subspace::span(tower, &gens))
}

fn subspaces(args: &CodeArgs, tower: &FieldTower, wanted: usize) -> Result<Vec<Subspace>> {
    let mut subs = args
        .subspace
        .iter()
        .map(|s| {
            let u = Subspace::from_json(tower, &read_arg(s)?)?;
            if u.dim() == 0 {
                return Err(Error::InvalidParameters("subspace must be nonzero".into()));
            }
            Ok(u)
        })
        .collect::<Result<Vec<_>>>()?;
    if subs.is_empty() {
        let m = args.m.ok_or_else(|| {
            Error::InvalidParameters("give --subspace or --m".into())
        })?;
        subs.push(default_subspace(tower, m)?);
    }
    if let Some(m) = args.m {
        if let Some(u) = subs.iter().find(|u| u.dim() != m) {
            return Err(Error::InvalidParameters(format!(
                "--m {m} disagrees with a subspace of dimension {}",
                u.dim()
            )));
        }
    }
    if subs.len() != wanted {
        return Err(Error::InvalidParameters(format!(
            "expected {wanted} subspace(s), got {}",
            subs.len()
        )));
    }
    Ok(subs)
}

fn cmd_tower(args: &FieldArgs, format: Format, limits: &Limits) -> Result<Report> {
    no_csv(format, "tower")?;
    let t = build_tower(args, limits)?;
    let spec = t.spec();
    let value = json!({
        "p": spec.p,
        "e": spec.e,
        "n": spec.n,
        "modulus": spec.modulus,
        "q": t.q(),
        "order": t.order(),
        "primitive": t.primitive().repr(),
    });
    Ok(Report::ok(render(format, &value, || {
        format!(
            "GF({}) over GF({}), modulus {:?} (low degree first), primitive element {}\n",
            t.order(),
            t.q(),
            spec.modulus,
            t.primitive().repr()
        )
    })))
}

fn cmd_census(args: &FieldArgs, m: &str, k: &str, format: Format, limits: &Limits) -> Result<Report> {
    if args.field.is_some() {
        return Err(Error::InvalidParameters("census takes --q and --n".into()));
    }
    let (Some(q), Some(n)) = (args.q, args.n) else {
        return Err(Error::InvalidParameters("census needs --q and --n".into()));
    };
    let (_, e) = prime_power(q)?;
    if args.e.is_some_and(|given| given != e) {
        return Err(Error::InvalidParameters(format!("--e does not match q = {q}")));
    }
    let ms = parse_range(m)?;
    let ks = parse_range(k)?;
    let table = census(q, n, &ks, &ms, limits)?;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Text => census_text(&table),
    };
    let mut report = Report::ok(text);
    for row in &table.rows {
        if let Some(note) = &row.note {
            report
                .warnings
                .push(format!("note: m = {}, k = {}: {note}", row.m, row.k));
        }
    }
    if !table.violations().is_empty() {
        report.code = EXIT_BOUND_VIOLATED;
        report
            .warnings
            .push("error: a feasible cell has fewer orbits than the bound".into());
    }
    Ok(report)
}

fn census_text(table: &CensusTable) -> String {
    let mut s = format!(
        "{:>4} {:>3} {:>3} {:>3} {:>3} {:>12} {:>8} {:>14} {}\n",
        "q", "n", "m", "k", "d", "subspaces", "orbits", "bound", "ok"
    );
    for r in &table.rows {
        let dash = || "-".to_string();
        s.push_str(&format!(
            "{:>4} {:>3} {:>3} {:>3} {:>3} {:>12} {:>8} {:>14} {}\n",
            r.q,
            r.n,
            r.m,
            r.k,
            r.d,
            r.subspaces,
            r.orbits.map_or_else(dash, |o| o.to_string()),
            r.bound.as_ref().map_or_else(dash, |b| b.to_string()),
            r.bound_satisfied.map_or_else(dash, |b| b.to_string()),
        ));
    }
    s
}

fn cmd_equiv(
    args: &CodeArgs,
    k2: Option<usize>,
    s2: Option<usize>,
    format: Format,
    limits: &Limits,
) -> Result<Report> {
    no_csv(format, "equiv")?;
    let t = build_tower(&args.field, limits)?;
    let subs = subspaces(args, &t, 2)?;
    if subs[0].dim() != subs[1].dim() {
        return Err(Error::ParameterMismatch(format!(
            "subspace dimensions differ: {} vs {}",
            subs[0].dim(),
            subs[1].dim()
        )));
    }
    let a = GabidulinSpec::new(&t, args.k, args.s, subs[0].clone())?;
    let b = GabidulinSpec::new(&t, k2.unwrap_or(args.k), s2.unwrap_or(args.s), subs[1].clone())?;
    let mut notes = Vec::new();

    let theorem = if (a.k(), a.s()) != (b.k(), b.s()) {
        notes.push("(k, s) differ: the orbit criterion does not apply, brute-force result only".to_string());
        None
    } else if a.k() >= a.m() {
        notes.push("k = m: the orbit criterion needs k < m, brute-force result only".to_string());
        None
    } else {
        Some(equivalent_by_theorem(&a, &b)?)
    };

    let brute = match (a.to_matrix_code(limits), b.to_matrix_code(limits)) {
        (Ok(c1), Ok(c2)) => match equivalent_bruteforce(&t, &c1, &c2, limits) {
            Ok(w) => Some(w),
            Err(Error::LimitExceeded { what, size, cap }) => {
                notes.push(format!("brute force skipped: {what} {size} exceeds {cap}"));
                None
            }
            Err(e) => return Err(e),
        },
        (Err(Error::LimitExceeded { what, size, cap }), _)
        | (_, Err(Error::LimitExceeded { what, size, cap })) => {
            notes.push(format!("brute force skipped: {what} {size} exceeds {cap}"));
            None
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let brute_verdict = brute.as_ref().map(|w| w.is_some());

    let mut value = Map::new();
    value.insert(
        "theorem".into(),
        theorem.map_or(Value::from("skipped"), Value::from),
    );
    value.insert(
        "bruteforce".into(),
        brute_verdict.map_or(Value::from("skipped"), Value::from),
    );
    if let Some(Some(w)) = &brute {
        value.insert("witness".into(), serde_json::to_value(w).expect("witness serializes"));
    }
    if !notes.is_empty() {
        value.insert("notes".into(), Value::from(notes.clone()));
    }
    let value = Value::Object(value);
    let mut report = Report::ok(render(format, &value, || {
        let show = |v: Option<bool>| v.map_or("skipped".to_string(), |b| b.to_string());
        let mut s = format!(
            "theorem: {}\nbruteforce: {}\n",
            show(theorem),
            show(brute_verdict)
        );
        for n in &notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }));
    if let (Some(th), Some(bf)) = (theorem, brute_verdict) {
        if th != bf {
            report.code = EXIT_ORACLE_DISAGREEMENT;
            report
                .warnings
                .push("error: orbit criterion and exhaustive search disagree".into());
        }
    }
    Ok(report)
}

fn nucleus_value(n: &Nucleus) -> Value {
    let mut v = json!({
        "order": n.len(),
        "t": n.t,
        "r": n.r,
    });
    if n.len() <= 64 {
        v["elements"] = serde_json::to_value(&n.elements).expect("nucleus serializes");
    }
    v
}

fn cmd_nuclei(args: &CodeArgs, format: Format, limits: &Limits) -> Result<Report> {
    no_csv(format, "nuclei")?;
    let t = build_tower(&args.field, limits)?;
    let u = subspaces(args, &t, 1)?.remove(0);
    let spec = GabidulinSpec::new(&t, args.k, args.s, u.clone())?;
    let middle_f = middle_nucleus_formula(&spec)?;
    let mut notes = Vec::new();
    // a scalar multiple of U gives an equivalent code with the same right nucleus
    let right_spec = if u.contains(&t, crate::gf::Elem::ONE) {
        spec.clone()
    } else {
        notes.push("1 is not in U: right-nucleus formula evaluated on a scalar multiple of U containing 1".to_string());
        spec.with_subspace(u.normalized(&t))?
    };
    let right_f = right_nucleus_formula(&right_spec, limits)?;

    let skip = |r: Result<Nucleus>, notes: &mut Vec<String>| -> Result<Option<Nucleus>> {
        match r {
            Ok(n) => Ok(Some(n)),
            Err(Error::LimitExceeded { what, size, cap }) => {
                notes.push(format!("brute force skipped: {what} {size} exceeds {cap}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let middle_b = skip(middle_nucleus_bruteforce(&spec, limits), &mut notes)?;
    let right_b = skip(right_nucleus_bruteforce(&spec, limits), &mut notes)?;
    let agree_m = middle_b.as_ref().map(|b| b.same_elements(&middle_f));
    let agree_r = right_b.as_ref().map(|b| b.same_elements(&right_f));
    let agree = match (agree_m, agree_r) {
        (Some(a), Some(b)) => Some(a && b),
        _ => None,
    };

    let opt = |n: &Option<Nucleus>| n.as_ref().map_or(Value::from("skipped"), nucleus_value);
    let mut value = json!({
        "formula": { "middle": nucleus_value(&middle_f), "right": nucleus_value(&right_f) },
        "bruteforce": { "middle": opt(&middle_b), "right": opt(&right_b) },
        "agree": agree,
    });
    if !notes.is_empty() {
        value["notes"] = Value::from(notes.clone());
    }
    let mut report = Report::ok(render(format, &value, || {
        let len = |n: &Option<Nucleus>| n.as_ref().map_or("skipped".to_string(), |n| n.len().to_string());
        let mut s = format!(
            "middle nucleus: formula {} (t = {}), brute force {}\nright nucleus: formula {} (t = {}), brute force {}\nagree: {}\n",
            middle_f.len(),
            middle_f.t.unwrap_or(0),
            len(&middle_b),
            right_f.len(),
            right_f.t.unwrap_or(0),
            len(&right_b),
            agree.map_or("skipped".to_string(), |a| a.to_string()),
        );
        for n in &notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }));
    if agree == Some(false) {
        report.code = EXIT_ORACLE_DISAGREEMENT;
        report
            .warnings
            .push("error: nucleus formula and exhaustive search disagree".into());
    }
    Ok(report)
}

fn cmd_verify(args: &CodeArgs, format: Format, limits: &Limits) -> Result<Report> {
    no_csv(format, "verify")?;
    let t = build_tower(&args.field, limits)?;
    let u = subspaces(args, &t, 1)?.remove(0);
    let spec = GabidulinSpec::new(&t, args.k, args.s, u)?;
    let code = spec.to_matrix_code(limits)?;
    let d = min_distance(&t, &code)?;
    let mrd = is_mrd(&t, &code);
    let roots = spec.root_bound_holds(limits)?;
    let full = spec.k() == spec.m();
    let mut value = json!({
        "q": t.q(),
        "n": spec.n(),
        "m": spec.m(),
        "k": spec.k(),
        "s": spec.s(),
        "size": code.len(),
        "d": d,
        "designed_distance": spec.designed_distance(),
        "mrd": mrd,
        "root_bound": roots,
        "full_space": full,
    });
    if full {
        value["notes"] = json!(["k = m: the projected code is all of K^(m x n)"]);
    }
    Ok(Report::ok(render(format, &value, || {
        let mut s = format!(
            "size {}, minimum distance {} (designed {}), MRD {}, root bound {}\n",
            code.len(),
            d,
            spec.designed_distance(),
            mrd,
            roots
        );
        if full {
            s.push_str("note: k = m, the code is the full matrix space\n");
        }
        s
    })))
}
