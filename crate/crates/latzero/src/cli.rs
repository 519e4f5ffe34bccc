//! Command-line front end: instance files, command dispatch, the seeded
//! verification suite and the bench CSV report.
//!
//! Exit codes: 0 = success with a result, 1 = no result (absence is not an
//! error), 2 = usage, parse or validation errors. Timing goes to stderr so
//! stdout is byte-identical across runs and thread counts.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::angles::{
    angle_form, angle_form_det, angle_form_det_formula, find_angle_vector,
    find_angle_vector_avoiding, right_angle_vector, AngleSpec, Orientation,
};
use crate::bounds::{
    cassels_bound, dietmann_radius, format_rational_fixed, henk_thiel_bound, kornhauser_radius,
    outside_point_bound, restricted_height_bound, avoiding_zero_bound, BoundReport, BoundValue,
};
use crate::intmat::{det_exact, hnf_lower, IntMatrix, Rounding};
use crate::lattice::{
    ambient_to_coeff, coset_representatives, first_minimum_sup, Lattice,
    SublatticeSystem,
};
use crate::quadratic::QuadraticPolynomial;
use crate::solver::{
    bruteforce_avoiding_zero, bruteforce_outside_point, find_avoiding_zero, intersection_data,
    minimal_zero_in_box, point_outside_union, Instance as SolverInstance, SearchResult, SolveError,
};

const EXIT_OK: i32 = 0;
const EXIT_NO_RESULT: i32 = 1;
const EXIT_ERROR: i32 = 2;

/// Cosets beyond this are refused at the CLI boundary.
const CLI_MAX_COSETS: u64 = 1 << 22;

// ---------------------------------------------------------------------------
// errors

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation { path: String, message: String },
    Io(String),
    Search(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation { path, message } => write!(f, "invalid instance at `{path}`: {message}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Search(m) => write!(f, "{m}"),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Search(e.to_string())
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Validation { path: path.into(), message: message.into() }
}

// ---------------------------------------------------------------------------
// instance files

/// Angle block of an instance file.
#[derive(Debug, Clone)]
pub struct AngleSection {
    pub base: Vec<BigInt>,
    pub spec: AngleSpec,
}

/// Parsed and validated instance file.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: SolverInstance,
    pub angle: Option<AngleSection>,
    pub r_max: Option<BigInt>,
    pub constant: Option<BigRational>,
}

fn obj<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| invalid(path, "expected an object"))
}

fn key<'v>(m: &'v Map<String, Value>, k: &str, path: &str) -> Result<&'v Value, CliError> {
    m.get(k).ok_or_else(|| invalid(format!("{path}{k}"), "missing key"))
}

fn as_bigint(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(invalid(path, "expected an exact integer (use a decimal string for huge values)"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| invalid(path, format!("not a decimal integer: {s:?}"))),
        _ => Err(invalid(path, "expected an integer")),
    }
}

fn as_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    as_bigint(v, path)?
        .to_usize()
        .ok_or_else(|| invalid(path, "expected a small nonnegative integer"))
}

fn as_bigint_vec(v: &Value, path: &str) -> Result<Vec<BigInt>, CliError> {
    let arr = v.as_array().ok_or_else(|| invalid(path, "expected an array of integers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_bigint(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_int_matrix(v: &Value, path: &str) -> Result<IntMatrix, CliError> {
    let arr = v.as_array().ok_or_else(|| invalid(path, "expected an array of rows"))?;
    if arr.is_empty() {
        return Err(invalid(path, "matrix must have at least one row"));
    }
    let rows: Vec<Vec<BigInt>> = arr
        .iter()
        .enumerate()
        .map(|(i, row)| as_bigint_vec(row, &format!("{path}[{i}]")))
        .collect::<Result<_, _>>()?;
    let width = rows[0].len();
    if width == 0 {
        return Err(invalid(format!("{path}[0]"), "rows must be nonempty"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(invalid(format!("{path}[{i}]"), format!("ragged row: {} entries, expected {width}", r.len())));
        }
    }
    Ok(IntMatrix::from_rows(rows))
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let n = num.trim().parse::<BigInt>().map_err(|_| invalid(path, "bad numerator"))?;
                let d = den.trim().parse::<BigInt>().map_err(|_| invalid(path, "bad denominator"))?;
                if d.is_zero() {
                    return Err(invalid(path, "zero denominator"));
                }
                Ok(BigRational::new(n, d))
            } else {
                let n = s.parse::<BigInt>().map_err(|_| invalid(path, "not an integer or p/q"))?;
                Ok(BigRational::from_integer(n))
            }
        }
        _ => Ok(BigRational::from_integer(as_bigint(v, path)?)),
    }
}

/// Parse and validate an instance document.
pub fn parse_instance_str(text: &str) -> Result<LoadedInstance, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let root = obj(&root, "$")?;
    for k in root.keys() {
        if !matches!(k.as_str(), "ambient_dim" | "lattice_basis" | "sublattices" | "quadratic" | "angle" | "search") {
            return Err(invalid(k, "unknown key"));
        }
    }

    let n = as_usize(key(root, "ambient_dim", "")?, "ambient_dim")?;
    if n < 2 {
        return Err(invalid("ambient_dim", "ambient dimension must be at least 2"));
    }

    let basis = as_int_matrix(key(root, "lattice_basis", "")?, "lattice_basis")?;
    if basis.rows() != n {
        return Err(invalid("lattice_basis", format!("expected {n} rows (ambient_dim), got {}", basis.rows())));
    }
    let lattice = Lattice::new(basis).map_err(|e| invalid("lattice_basis", e.to_string()))?;
    let k = lattice.rank();

    let subs_val = key(root, "sublattices", "")?;
    let subs_arr = subs_val.as_array().ok_or_else(|| invalid("sublattices", "expected an array"))?;
    let mut coeffs = Vec::with_capacity(subs_arr.len());
    for (i, entry) in subs_arr.iter().enumerate() {
        let path = format!("sublattices[{i}]");
        let m = match entry {
            Value::Array(_) => as_int_matrix(entry, &path)?,
            Value::Object(o) => {
                if let Some(c) = o.get("coeffs") {
                    as_int_matrix(c, &format!("{path}.coeffs"))?
                } else if let Some(a) = o.get("ambient") {
                    let amb = as_int_matrix(a, &format!("{path}.ambient"))?;
                    if amb.rows() != n || amb.cols() != k {
                        return Err(invalid(
                            format!("{path}.ambient"),
                            format!("expected {n}x{k} ambient basis, got {}x{}", amb.rows(), amb.cols()),
                        ));
                    }
                    ambient_to_coeff(&lattice, &amb).map_err(|_| {
                        invalid(format!("{path}.ambient"), "columns are not points of the lattice")
                    })?
                } else {
                    return Err(invalid(path, "expected `coeffs` or `ambient`"));
                }
            }
            _ => return Err(invalid(path, "expected a matrix or an object")),
        };
        if m.rows() != k || m.cols() != k {
            return Err(invalid(&path, format!("expected a {k}x{k} matrix, got {}x{}", m.rows(), m.cols())));
        }
        if det_exact(&m).expect("square").is_zero() {
            return Err(invalid(&path, "SingularSublattice: determinant is zero"));
        }
        coeffs.push(m);
    }
    let system = SublatticeSystem::new(lattice, coeffs)
        .map_err(|e| invalid("sublattices", e.to_string()))?;

    let quad = obj(key(root, "quadratic", "")?, "quadratic")?;
    let f = as_int_matrix(key(quad, "F", "quadratic.")?, "quadratic.F")?;
    if f.rows() != n || f.cols() != n {
        return Err(invalid("quadratic.F", format!("expected {n}x{n}, got {}x{}", f.rows(), f.cols())));
    }
    for i in 0..n {
        for j in 0..i {
            if f.get(i, j) != f.get(j, i) {
                return Err(invalid(
                    format!("quadratic.F[{i}][{j}]"),
                    format!("not symmetric: F[{i}][{j}] = {} but F[{j}][{i}] = {}", f.get(i, j), f.get(j, i)),
                ));
            }
        }
    }
    let l = as_bigint_vec(key(quad, "L", "quadratic.")?, "quadratic.L")?;
    if l.len() != n {
        return Err(invalid("quadratic.L", format!("expected {n} entries, got {}", l.len())));
    }
    let t = as_bigint(key(quad, "t", "quadratic.")?, "quadratic.t")?;
    let poly = QuadraticPolynomial::new(f, l, t).map_err(|e| invalid("quadratic", e.to_string()))?;

    let angle = match root.get("angle") {
        None => None,
        Some(v) => {
            let o = obj(v, "angle")?;
            let a = as_bigint_vec(key(o, "a", "angle.")?, "angle.a")?;
            if a.len() != n {
                return Err(invalid("angle.a", format!("expected {n} entries, got {}", a.len())));
            }
            if a.iter().all(|x| x.is_zero()) {
                return Err(invalid("angle.a", "base vector must be nonzero"));
            }
            let spec = if o.get("right").and_then(Value::as_bool).unwrap_or(false) {
                AngleSpec::Right
            } else {
                let p = as_bigint(key(o, "p", "angle.")?, "angle.p")?;
                let q = as_bigint(key(o, "q", "angle.")?, "angle.q")?;
                AngleSpec::oblique(p, q).map_err(|e| invalid("angle", e.to_string()))?
            };
            Some(AngleSection { base: a, spec })
        }
    };

    let (r_max, constant) = match root.get("search") {
        None => (None, None),
        Some(v) => {
            let o = obj(v, "search")?;
            let r = o.get("r_max").map(|x| as_bigint(x, "search.r_max")).transpose()?;
            if let Some(r) = &r {
                if r.is_negative() {
                    return Err(invalid("search.r_max", "radius must be nonnegative"));
                }
            }
            let c = o.get("constant_c").map(|x| parse_rational(x, "search.constant_c")).transpose()?;
            if let Some(c) = &c {
                if !c.is_positive() {
                    return Err(invalid("search.constant_c", "constant must be positive"));
                }
            }
            (r, c)
        }
    };

    let instance =
        SolverInstance::new(system, poly).map_err(|e| invalid("quadratic", e.to_string()))?;
    Ok(LoadedInstance { instance, angle, r_max, constant })
}

pub fn parse_instance(path: &std::path::Path) -> Result<LoadedInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_instance_str(&text)
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

/// Serialize a loaded instance back into the document format; parsing the
/// result reproduces the instance exactly.
pub fn serialize_instance(li: &LoadedInstance) -> String {
    let lat = li.instance.lattice();
    let mut root = Map::new();
    root.insert("ambient_dim".into(), json!(lat.ambient_dim()));
    root.insert("lattice_basis".into(), matrix_json(lat.basis()));
    root.insert(
        "sublattices".into(),
        Value::Array(li.instance.system().coeffs().iter().map(matrix_json).collect()),
    );
    let q = li.instance.poly();
    let mut quad = Map::new();
    quad.insert("F".into(), matrix_json(q.form()));
    quad.insert("L".into(), vec_json(q.linear()));
    quad.insert("t".into(), Value::String(q.constant().to_string()));
    root.insert("quadratic".into(), Value::Object(quad));
    if let Some(angle) = &li.angle {
        let mut a = Map::new();
        a.insert("a".into(), vec_json(&angle.base));
        match &angle.spec {
            AngleSpec::Right => {
                a.insert("right".into(), Value::Bool(true));
            }
            AngleSpec::Oblique { p, q } => {
                a.insert("p".into(), Value::String(p.to_string()));
                a.insert("q".into(), Value::String(q.to_string()));
            }
        }
        root.insert("angle".into(), Value::Object(a));
    }
    if li.r_max.is_some() || li.constant.is_some() {
        let mut s = Map::new();
        if let Some(r) = &li.r_max {
            s.insert("r_max".into(), Value::String(r.to_string()));
        }
        if let Some(c) = &li.constant {
            s.insert("constant_c".into(), Value::String(format!("{}/{}", c.numer(), c.denom())));
        }
        root.insert("search".into(), Value::Object(s));
    }
    serde_json::to_string_pretty(&Value::Object(root)).expect("valid json tree")
}

// ---------------------------------------------------------------------------
// output documents

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

struct Doc {
    command: &'static str,
    fields: Vec<(String, Value)>,
}

impl Doc {
    fn new(command: &'static str) -> Self {
        Doc { command, fields: Vec::new() }
    }

    fn push(&mut self, k: impl Into<String>, v: Value) {
        self.fields.push((k.into(), v));
    }

    fn emit(&self, format: Format) {
        match format {
            Format::Machine => {
                let mut m = Map::new();
                m.insert("command".into(), Value::String(self.command.into()));
                for (k, v) in &self.fields {
                    m.insert(k.clone(), v.clone());
                }
                println!("{}", serde_json::to_string(&Value::Object(m)).expect("valid json"));
            }
            Format::Human => {
                println!("command: {}", self.command);
                for (k, v) in &self.fields {
                    println!("{k}: {}", human_value(v));
                }
            }
        }
    }
}

fn human_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(human_value).collect();
            format!("[{}]", inner.join(", "))
        }
        Value::Object(m) => {
            let inner: Vec<String> = m.iter().map(|(k, x)| format!("{k}={}", human_value(x))).collect();
            format!("{{{}}}", inner.join(", "))
        }
        other => other.to_string(),
    }
}

fn bound_json(b: &BoundValue) -> Value {
    let mut m = Map::new();
    match &b.exact {
        Some(e) if e.is_integer() => {
            m.insert("exact".into(), Value::String(e.numer().to_string()));
        }
        Some(e) => {
            m.insert("exact".into(), Value::String(format!("{}/{}", e.numer(), e.denom())));
        }
        None => {
            m.insert("exact".into(), Value::Null);
        }
    }
    m.insert(
        "log10".into(),
        Value::String(format_rational_fixed(&b.log10.value, 4, Rounding::Up)),
    );
    m.insert("rounding".into(), Value::String("up".into()));
    Value::Object(m)
}

fn search_result_json(res: &SearchResult) -> Vec<(String, Value)> {
    let mut fields = vec![
        ("status".to_string(), Value::String("found".into())),
        ("point".to_string(), vec_json(&res.point)),
        ("sup_norm".to_string(), Value::String(res.sup_norm.to_string())),
    ];
    if let Some(i) = res.coset_index {
        fields.push(("coset_index".into(), json!(i)));
    }
    if !res.certificates.is_empty() {
        let certs: Vec<Value> = res
            .certificates
            .iter()
            .map(|c| json!({"bound": c.kind.to_string(), "holds": c.holds}))
            .collect();
        fields.push(("certificates".into(), Value::Array(certs)));
    }
    fields
}

// ---------------------------------------------------------------------------
// argument parsing

#[derive(Parser)]
#[command(
    name = "latzero",
    version,
    about = "Exact searches for small integer zeros of quadratic polynomials avoiding finite-index sublattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// Search radius (sup-norm); overrides the instance file.
    #[arg(long)]
    radius: Option<u64>,
    /// Implied-constant parameter C (integer or p/q); overrides the file.
    #[arg(long)]
    constant: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Worker threads; results are identical at any width.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Triangular normal form (V, U) of each sublattice coefficient matrix
    Hnf { instance: PathBuf, #[command(flatten)] common: Common },
    /// Relation matrix and index of the intersection of all sublattices
    Intersect { instance: PathBuf, #[command(flatten)] common: Common },
    /// Coset representatives of the intersection sublattice
    Cosets { instance: PathBuf, #[command(flatten)] common: Common },
    /// Minimal coset representative outside the union of sublattices
    OutsidePoint { instance: PathBuf, #[command(flatten)] common: Common },
    /// Minimal nontrivial zero of Q in a sup-norm box
    FindZero { instance: PathBuf, #[command(flatten)] common: Common },
    /// Minimal zero of Q on the lattice avoiding every sublattice
    AvoidZero { instance: PathBuf, #[command(flatten)] common: Common },
    /// Evaluate all applicable bounds, with the brute-force truth if found
    Bounds { instance: PathBuf, #[command(flatten)] common: Common },
    /// The angle quadratic form of the instance's angle block
    AngleForm { instance: PathBuf, #[command(flatten)] common: Common },
    /// Minimal vector at the prescribed angle (optionally avoiding)
    AngleFind {
        instance: PathBuf,
        /// Avoid the instance's sublattices (requires the standard lattice).
        #[arg(long)]
        avoid: bool,
        /// Require a positive inner product with the base vector.
        #[arg(long)]
        acute_side: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the seeded property suite
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Emit a CSV report of bounds versus brute-force truth
    Bench {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// avoid: random avoiding-zero instances; angles: angle sweep
        #[arg(long, default_value = "avoid")]
        mode: String,
        #[arg(long, default_value_t = 4)]
        max_index: i64,
        #[arg(long, default_value_t = 5)]
        max_height: i64,
        #[arg(long, default_value_t = 12)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// Entry point: parse arguments, dispatch, map outcomes to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own usage/error text; usage errors exit 2,
            // --help and --version exit 0
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    eprintln!("elapsed: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    code
}

fn effective_radius(common: &Common, li: &LoadedInstance) -> BigInt {
    match common.radius {
        Some(r) => BigInt::from(r),
        None => li.r_max.clone().unwrap_or_else(|| BigInt::from(10)),
    }
}

fn effective_constant(common: &Common, li: &LoadedInstance) -> Result<BigRational, CliError> {
    match &common.constant {
        Some(s) => {
            let c = parse_rational(&Value::String(s.clone()), "--constant")?;
            if !c.is_positive() {
                return Err(CliError::Parse("--constant must be positive".into()));
            }
            Ok(c)
        }
        None => Ok(li.constant.clone().unwrap_or_else(BigRational::one)),
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Hnf { instance, common } => cmd_hnf(&instance, &common),
        Command::Intersect { instance, common } => cmd_intersect(&instance, &common),
        Command::Cosets { instance, common } => cmd_cosets(&instance, &common),
        Command::OutsidePoint { instance, common } => cmd_outside_point(&instance, &common),
        Command::FindZero { instance, common } => cmd_find_zero(&instance, &common),
        Command::AvoidZero { instance, common } => cmd_avoid_zero(&instance, &common),
        Command::Bounds { instance, common } => cmd_bounds(&instance, &common),
        Command::AngleForm { instance, common } => cmd_angle_form(&instance, &common),
        Command::AngleFind { instance, avoid, acute_side, common } => {
            cmd_angle_find(&instance, avoid, acute_side, &common)
        }
        Command::Verify { seed, threads } => Ok(cmd_verify(seed, threads)),
        Command::Bench { samples, seed, mode, max_index, max_height, radius, threads } => {
            cmd_bench(samples, seed, &mode, max_index, max_height, radius, threads)
        }
    }
}

// ---------------------------------------------------------------------------
// commands

fn cmd_hnf(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let mut doc = Doc::new("hnf");
    let mut out = Vec::new();
    for (i, m) in li.instance.system().coeffs().iter().enumerate() {
        let (v, u) = hnf_lower(m)
            .map_err(|e| invalid(format!("sublattices[{i}]"), e.to_string()))?;
        out.push(json!({"v": matrix_json(&v), "u": matrix_json(&u)}));
    }
    doc.push("sublattices", Value::Array(out));
    doc.emit(common.format);
    Ok(EXIT_OK)
}

fn cmd_intersect(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    if li.instance.system().is_empty() {
        return Err(CliError::Search("intersect requires at least one sublattice".into()));
    }
    let (relation, index, det_sq) = intersection_data(li.instance.system())?;
    let mut doc = Doc::new("intersect");
    doc.push("relation", matrix_json(&relation));
    doc.push("index", Value::String(index.to_string()));
    doc.push("det_omega_sq", Value::String(det_sq.to_string()));
    doc.emit(common.format);
    Ok(EXIT_OK)
}

fn cmd_cosets(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    if li.instance.system().is_empty() {
        return Err(CliError::Search("cosets requires at least one sublattice".into()));
    }
    let (relation, index, _) = intersection_data(li.instance.system())?;
    if index.to_u64().is_none_or(|d| d > CLI_MAX_COSETS) {
        return Err(CliError::Search(format!("index {index} is too large to enumerate cosets")));
    }
    let dec = coset_representatives(&relation);
    let mut doc = Doc::new("cosets");
    doc.push("relation", matrix_json(&relation));
    doc.push("index", Value::String(dec.index.to_string()));
    doc.push("reps", Value::Array(dec.reps.iter().map(|r| vec_json(r)).collect()));
    doc.emit(common.format);
    Ok(EXIT_OK)
}

fn cmd_outside_point(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    match point_outside_union(li.instance.system()) {
        Ok(res) => {
            let mut doc = Doc::new("outside-point");
            for (k, v) in search_result_json(&res) {
                doc.push(k, v);
            }
            doc.emit(common.format);
            Ok(EXIT_OK)
        }
        Err(SolveError::CoveredByUnion) => {
            let mut doc = Doc::new("outside-point");
            doc.push("status", Value::String("covered".into()));
            doc.push("message", Value::String("the union of sublattices covers the lattice".into()));
            doc.emit(common.format);
            Ok(EXIT_NO_RESULT)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_find_zero(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let radius = effective_radius(common, &li);
    let found = minimal_zero_in_box(li.instance.poly(), &radius, true, common.threads)?;
    let mut doc = Doc::new("find-zero");
    doc.push("radius", Value::String(radius.to_string()));
    match found {
        Some(z) => {
            let sup = z.iter().map(|v| v.abs()).max().expect("nonempty point");
            doc.push("status", Value::String("found".into()));
            doc.push("point", vec_json(&z));
            doc.push("sup_norm", Value::String(sup.to_string()));
            doc.emit(common.format);
            Ok(EXIT_OK)
        }
        None => {
            doc.push("status", Value::String("none".into()));
            doc.push("message", Value::String(format!("no nontrivial zero with |z| <= {radius}")));
            doc.emit(common.format);
            Ok(EXIT_NO_RESULT)
        }
    }
}

fn cmd_avoid_zero(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let radius = effective_radius(common, &li);
    let report = find_avoiding_zero(&li.instance, &radius, common.threads)?;
    let mut doc = Doc::new("avoid-zero");
    doc.push("radius", Value::String(radius.to_string()));
    doc.push("index", Value::String(report.index.to_string()));
    doc.push("admissible_cosets", json!(report.admissible_cosets));
    if !report.singular_cosets.is_empty() {
        doc.push(
            "warnings",
            Value::Array(
                report
                    .singular_cosets
                    .iter()
                    .map(|i| Value::String(format!("restricted polynomial on coset {i} is singular; searched by direct ambient enumeration")))
                    .collect(),
            ),
        );
    }
    match report.result {
        Some(res) => {
            for (k, v) in search_result_json(&res) {
                doc.push(k, v);
            }
            doc.emit(common.format);
            Ok(EXIT_OK)
        }
        None => {
            doc.push("status", Value::String("none".into()));
            let msg = if report.union_covers {
                "no avoiding zero exists: the union covers the lattice".to_string()
            } else {
                format!("no avoiding zero with |z| <= {radius} (unresolved below the theoretical bound; see `bounds`)")
            };
            doc.push("message", Value::String(msg));
            doc.emit(common.format);
            Ok(EXIT_NO_RESULT)
        }
    }
}

/// Assemble the full bound report for an instance.
pub fn build_bound_report(
    li: &LoadedInstance,
    radius: &BigInt,
    constant: &BigRational,
    threads: usize,
) -> Result<BoundReport, CliError> {
    let inst = &li.instance;
    let lat = inst.lattice();
    let (k, n) = (lat.rank(), lat.ambient_dim());
    let height_q = inst.poly().height().max(BigInt::one());
    let with_system = !inst.system().is_empty();
    let (det_omega_sq, outside_point, ht) = if with_system {
        let (relation, index, det_sq) = intersection_data(inst.system())?;
        let omega = Lattice::new(lat.sublattice_basis(&relation))
            .map_err(|e| CliError::Search(e.to_string()))?;
        let lambda1 = first_minimum_sup(&omega);
        let ht = henk_thiel_bound(&det_sq, &lambda1, k, inst.system().indices(), &index);
        let oo = outside_point_bound(&det_sq, k);
        (det_sq, Some(oo), Some(ht))
    } else {
        (lat.gram_determinant().clone(), None, None)
    };
    let cassels = inst
        .poly()
        .is_homogeneous()
        .then(|| cassels_bound(&height_q, n, constant));
    let kornhauser = (n == 2).then(|| kornhauser_radius(&height_q));
    let dietmann = (n >= 3).then(|| dietmann_radius(&height_q, n, constant)).transpose().ok().flatten();
    let avoiding_zero = (with_system && inst.system().all_proper())
        .then(|| avoiding_zero_bound(&det_omega_sq, &height_q, k, n, constant))
        .transpose()
        .ok()
        .flatten();
    let restricted_height = Some(restricted_height_bound(k, n, &det_omega_sq, &height_q));
    let true_min = if with_system || inst.poly().is_regular() {
        bruteforce_avoiding_zero(inst, radius, threads)?.map(|r| r.sup_norm)
    } else {
        None
    };
    let true_outside_min = if with_system {
        bruteforce_outside_point(inst.system(), radius, threads)?.map(|r| r.sup_norm)
    } else {
        None
    };
    Ok(BoundReport {
        k,
        n,
        det_omega_sq,
        height_q,
        cassels,
        kornhauser,
        dietmann,
        avoiding_zero,
        outside_point,
        henk_thiel: ht,
        restricted_height,
        true_min,
        true_outside_min,
        search_radius: radius.clone(),
    })
}

fn cmd_bounds(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let radius = effective_radius(common, &li);
    let constant = effective_constant(common, &li)?;
    let report = build_bound_report(&li, &radius, &constant, common.threads)?;
    let mut doc = Doc::new("bounds");
    doc.push("k", json!(report.k));
    doc.push("n", json!(report.n));
    doc.push("det_omega_sq", Value::String(report.det_omega_sq.to_string()));
    doc.push("height_q", Value::String(report.height_q.to_string()));
    doc.push("search_radius", Value::String(report.search_radius.to_string()));
    let pairs: [(&str, &Option<BoundValue>); 7] = [
        ("cassels", &report.cassels),
        ("kornhauser", &report.kornhauser),
        ("dietmann", &report.dietmann),
        ("avoiding_zero", &report.avoiding_zero),
        ("outside_point", &report.outside_point),
        ("henk_thiel", &report.henk_thiel),
        ("restricted_height", &report.restricted_height),
    ];
    for (name, value) in pairs {
        if let Some(v) = value {
            doc.push(name, bound_json(v));
        }
    }
    doc.push(
        "true_min",
        report.true_min.as_ref().map_or(Value::String("unresolved".into()), |v| Value::String(v.to_string())),
    );
    doc.push(
        "true_outside_min",
        report
            .true_outside_min
            .as_ref()
            .map_or(Value::String("unresolved".into()), |v| Value::String(v.to_string())),
    );
    doc.emit(common.format);
    Ok(EXIT_OK)
}

fn angle_section(li: &LoadedInstance) -> Result<&AngleSection, CliError> {
    li.angle.as_ref().ok_or_else(|| invalid("angle", "this command needs an `angle` block"))
}

fn cmd_angle_form(path: &std::path::Path, common: &Common) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let angle = angle_section(&li)?;
    let spec = match &angle.spec {
        AngleSpec::Right => {
            return Err(CliError::Search(
                "right angles have no quadratic form; use angle-find for the linear path".into(),
            ))
        }
        s => s.clone(),
    };
    let af = angle_form(&angle.base, &spec).map_err(|e| CliError::Search(e.to_string()))?;
    let det = angle_form_det(&angle.base, &spec).map_err(|e| CliError::Search(e.to_string()))?;
    let formula = angle_form_det_formula(&angle.base, &spec).map_err(|e| CliError::Search(e.to_string()))?;
    let mut doc = Doc::new("angle-form");
    doc.push("matrix", matrix_json(af.form.form()));
    doc.push("height", Value::String(af.form.height().to_string()));
    doc.push(
        "height_bound",
        Value::String((BigInt::from(2) * (&af.p + &af.q) * &af.norm_sq).to_string()),
    );
    doc.push("det", Value::String(det.to_string()));
    doc.push("det_formula", Value::String(formula.to_string()));
    if af.below_guarantee_dim {
        doc.push(
            "warnings",
            json!(["existence guarantees need dimension >= 5; the form itself is valid"]),
        );
    }
    doc.emit(common.format);
    Ok(EXIT_OK)
}

fn cmd_angle_find(
    path: &std::path::Path,
    avoid: bool,
    acute_side: bool,
    common: &Common,
) -> Result<i32, CliError> {
    let li = parse_instance(path)?;
    let angle = angle_section(&li)?;
    let radius = effective_radius(common, &li);
    let mut doc = Doc::new("angle-find");
    doc.push("radius", Value::String(radius.to_string()));
    let found: Option<Vec<BigInt>> = match (&angle.spec, avoid) {
        (AngleSpec::Right, false) => {
            right_angle_vector(&angle.base, None, &radius, common.threads)
                .map_err(|e| CliError::Search(e.to_string()))?
        }
        (AngleSpec::Right, true) => {
            right_angle_vector(&angle.base, Some(li.instance.system()), &radius, common.threads)
                .map_err(|e| CliError::Search(e.to_string()))?
        }
        (spec, false) => {
            let orientation = if acute_side { Orientation::AcuteSide } else { Orientation::Any };
            find_angle_vector(&angle.base, spec, &radius, orientation, common.threads)
                .map_err(|e| CliError::Search(e.to_string()))?
        }
        (spec, true) => {
            if acute_side {
                return Err(CliError::Search("--acute-side is not supported with --avoid".into()));
            }
            find_angle_vector_avoiding(&angle.base, spec, li.instance.system(), &radius, common.threads)
                .map_err(|e| CliError::Search(e.to_string()))?
                .map(|r| r.point)
        }
    };
    match found {
        Some(b) => {
            let sup = b.iter().map(|v| v.abs()).max().expect("nonempty");
            doc.push("status", Value::String("found".into()));
            doc.push("point", vec_json(&b));
            doc.push("sup_norm", Value::String(sup.to_string()));
            if let AngleSpec::Oblique { p, q } = &angle.spec {
                doc.push("tan_sq", Value::String(format!("{q}/{p}")));
            }
            doc.emit(common.format);
            Ok(EXIT_OK)
        }
        None => {
            doc.push("status", Value::String("none".into()));
            doc.push("message", Value::String(format!("no vector at the prescribed angle with |b| <= {radius}")));
            doc.emit(common.format);
            Ok(EXIT_NO_RESULT)
        }
    }
}

fn cmd_verify(seed: u64, threads: usize) -> i32 {
    let failures = crate::verify::run_suite(seed, threads, &mut |line| println!("{line}"));
    if failures == 0 {
        println!("all checks passed (seed {seed})");
        EXIT_OK
    } else {
        println!("{failures} check(s) FAILED (seed {seed})");
        EXIT_ERROR
    }
}

fn cmd_bench(
    samples: usize,
    seed: u64,
    mode: &str,
    max_index: i64,
    max_height: i64,
    radius: u64,
    threads: usize,
) -> Result<i32, CliError> {
    let csv = match mode {
        "avoid" => crate::bench::avoid_csv(samples, seed, max_index, max_height, radius, threads)
            .map_err(|e| CliError::Search(e.to_string()))?,
        "angles" => crate::bench::angle_csv(2, 3, threads).map_err(|e| CliError::Search(e.to_string()))?,
        other => return Err(CliError::Parse(format!("unknown bench mode {other:?} (use avoid|angles)"))),
    };
    print!("{csv}");
    Ok(EXIT_OK)
}
