//! `modamen`: decide and certify module super-amenability of finite inverse
//! semigroup algebras from the command line.
//!
//! Output is a versioned JSON envelope by default (`--format text` for a
//! human-readable rendering). Exit codes: 0 success, 1 invalid input, 2 size
//! guard, 3 internal consistency finding.

use clap::{Parser, Subcommand, ValueEnum};
use modamen_core::battery::{run_battery, BatteryError, BatteryRow};
use modamen_core::cohomology::cross_check;
use modamen_core::diagonal::{
    matrix_explicit_diagonal, matrix_instance, solve_and_certify, tensor_setup_for_module,
    tensor_setup_for_semigroup, verify_and_certify, verify_module_diagonal, DiagonalError,
    DiagonalSolution, MATRIX_DIM_SOFT_CAP,
};
use modamen_core::linalg::{rat, sparse_axpy};
use modamen_core::module_algebra::{analyze, module_report, DirectednessJson, ModuleError, Route};
use modamen_core::report::Envelope;
use modamen_core::semigroup::corpus::{by_name, truncated_add_monoid};
use modamen_core::semigroup::munn::{parse_word, MunnError, MunnTree};
use modamen_core::semigroup::partial_perm::from_generator_json;
use modamen_core::semigroup::{
    idempotents, is_upward_directed, CayleyJson, Directedness, FiniteSemigroup, GeneratorJson,
    ValidationError,
};
use modamen_core::algebra::StructureAlgebra;
use modamen_core::{Guards, InternalFinding, SizeGuard};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Guard(#[from] SizeGuard),
    #[error(transparent)]
    Finding(#[from] InternalFinding),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Guard(_) => 2,
            CliError::Finding(_) => 3,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::Guard(g) => CliError::Guard(g),
            other => input_err(other),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Guard(g) => CliError::Guard(g),
            ModuleError::Finding(f) => CliError::Finding(f),
        }
    }
}

impl From<DiagonalError> for CliError {
    fn from(e: DiagonalError) -> Self {
        match e {
            DiagonalError::Guard(g) => CliError::Guard(g),
            DiagonalError::Finding(f) => CliError::Finding(f),
            DiagonalError::Algebra(a) => input_err(a),
        }
    }
}

impl From<BatteryError> for CliError {
    fn from(e: BatteryError) -> Self {
        match e {
            BatteryError::Module(m) => m.into(),
            BatteryError::Diagonal(d) => d.into(),
        }
    }
}

impl From<MunnError> for CliError {
    fn from(e: MunnError) -> Self {
        input_err(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "modamen", version, about = "Module super-amenability workbench for finite inverse semigroup algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Cayley-table JSON ({name, elements, table, star?}) or partial-injection
    /// generator JSON ({degree, generators})
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Built-in example, e.g. brandt:2 or symmetric_inverse_monoid:2
    #[arg(long, global = true, value_name = "NAME")]
    corpus: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled re-verification of solution families
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Raise the analysis size guards up to this element count
    #[arg(long, global = true, value_name = "N")]
    max_size: Option<usize>,
    /// Lift soft guards (tensor-square work) to the full analysis cap
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a Cayley table: associativity, inverse axioms, star consistency
    Validate,
    /// List idempotents, their natural order, and upward directedness
    Idempotents,
    /// Decide upward directedness of the idempotents
    Directed,
    /// Compute J, the collapse congruence, and the quotient group check
    Quotient,
    /// Solve for a module diagonal and emit a verified certificate
    Diagonal,
    /// Derivation spaces into the standard test bimodules vs. the diagonal
    Cohomology,
    /// Matrix algebra over a commutative coefficient algebra, with its
    /// explicit diagonal verified
    MatrixExample {
        /// Matrix size
        #[arg(short = 'n', value_name = "N")]
        n: usize,
        /// Coefficients: "scalars" or "truncated:K"
        #[arg(long, default_value = "scalars")]
        coeff: String,
    },
    /// Operate on free-inverse-semigroup elements over two generators, given
    /// as words in a, b (A, B or a postfix * for inverses, parentheses group)
    Munn {
        /// Multiply two words
        #[arg(long, num_args = 2, value_names = ["WORD", "WORD"])]
        multiply: Option<Vec<String>>,
        /// Invert a word
        #[arg(long, value_name = "WORD")]
        inverse: Option<String>,
        /// Test whether a word is idempotent
        #[arg(long, value_name = "WORD")]
        idempotent: Option<String>,
        /// Test the natural order between two words
        #[arg(long, num_args = 2, value_names = ["WORD", "WORD"])]
        leq: Option<Vec<String>>,
        /// Least upper bound of two idempotents, if any
        #[arg(long, num_args = 2, value_names = ["WORD", "WORD"])]
        check_upper_bound: Option<Vec<String>>,
    },
    /// Run the whole pipeline over the built-in corpus
    Corpus,
}

fn main() {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((envelope, code)) => {
            match format {
                Format::Json => println!("{}", envelope.to_json()),
                Format::Text => print!("{}", render_text(&envelope)),
            }
            if code != 0 {
                std::process::exit(code);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(Envelope, i32), CliError> {
    let guards = Guards::with_override(cli.max_size, cli.force);
    let mut env = Envelope::new();
    let mut exit_code = 0;
    let t0 = Instant::now();
    match &cli.command {
        Cmd::Validate => {
            let body = validate_input(&cli, &guards)?;
            env.push("validate", t0, &body);
        }
        Cmd::Idempotents => {
            let s = load_semigroup(&cli, &guards)?;
            let e = idempotents(&s);
            let labels: Vec<&str> = e.indices.iter().map(|&i| s.label(i)).collect();
            let mut order = Vec::new();
            for (a, &ia) in e.indices.iter().enumerate() {
                for (b, &ib) in e.indices.iter().enumerate() {
                    if a != b && e.leq[a][b] {
                        order.push([s.label(ia), s.label(ib)]);
                    }
                }
            }
            let body = json!({
                "semigroup": s.name(),
                "idempotents": labels,
                "natural_order": order,
                "upward_directed": directedness_json(&s, is_upward_directed(&s, &e)),
            });
            env.push("idempotents", t0, &body);
        }
        Cmd::Directed => {
            let s = load_semigroup(&cli, &guards)?;
            let e = idempotents(&s);
            let body = json!({
                "semigroup": s.name(),
                "upward_directed": directedness_json(&s, is_upward_directed(&s, &e)),
            });
            env.push("directed", t0, &body);
        }
        Cmd::Quotient => {
            let s = load_semigroup(&cli, &guards)?;
            let analysis = analyze(&s, &guards)?;
            env.push("quotient", t0, &module_report(&s, &analysis));
        }
        Cmd::Diagonal => {
            let s = load_semigroup(&cli, &guards)?;
            let setup = tensor_setup_for_semigroup(&s, &guards)?;
            let (cert, solution) = solve_and_certify(&setup);
            env.push("diagonal", t0, &cert);
            // Sampling draws other members of the solution family (ideal
            // shifts included) and re-verifies them.
            if let Some(sol) = solution.filter(|s| s.nullspace.dim() > 0) {
                let t1 = Instant::now();
                let body = sampled_check(&setup, &sol, cli.seed);
                env.push("sampled_check", t1, &body);
            }
        }
        Cmd::Cohomology => {
            let s = load_semigroup(&cli, &guards)?;
            env.push("cohomology", t0, &cross_check(&s, &guards)?);
        }
        Cmd::MatrixExample { n, coeff } => {
            let g = coefficient_algebra(coeff)?;
            let cap = cli.max_size.unwrap_or(MATRIX_DIM_SOFT_CAP);
            let inst = matrix_instance(*n, g, cap)?;
            let setup = tensor_setup_for_module(inst.module.clone());
            let explicit = matrix_explicit_diagonal(&inst);
            let cert = verify_and_certify(&setup, &explicit);
            let body = json!({
                "n": n,
                "coeff": coeff,
                "dim": setup.algebra_dim(),
                "tensor_dim": setup.tensor_dim(),
                "certificate": cert,
            });
            env.push("matrix_example", t0, &body);
        }
        Cmd::Munn { multiply, inverse, idempotent, leq, check_upper_bound } => {
            let body = munn_op(multiply, inverse, idempotent, leq, check_upper_bound)?;
            env.push("munn", t0, &body);
        }
        Cmd::Corpus => {
            let rows = run_battery(&guards)?;
            let failures = battery_failures(&rows);
            env.push("corpus", t0, &json!({ "members": rows }));
            if !failures.is_empty() {
                env.push("failures", t0, &failures);
                // Same exit class as internal findings: the corpus is the
                // one input where a failed check indicts the tool itself.
                exit_code = 3;
            }
        }
    }
    Ok((env, exit_code))
}

/// The per-member checks behind the corpus exit code: a certified route must
/// carry a true verdict and (where the tensor stage ran) a feasible diagonal,
/// and the derivation oracle must agree with the solver wherever both ran.
fn battery_failures(rows: &[BatteryRow]) -> Vec<Value> {
    let mut out = Vec::new();
    for r in rows {
        let mut fail = |check: &str| {
            out.push(json!({ "member": r.module.semigroup, "check": check }));
        };
        if r.module.route == Route::QuotientGroup {
            if r.module.verdict != Some(true) {
                fail("certified route must carry a true verdict");
            }
            if r.diagonal_feasible == Some(false) {
                fail("certified group quotient but no module diagonal found");
            }
        }
        if r.cohomology_consistent == Some(false) {
            fail("derivation oracle disagrees with the diagonal solver");
        }
    }
    out
}

fn read_input_json(path: &PathBuf) -> Result<Value, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::Input(format!("{} is not valid JSON: {e}", path.display())))
}

enum ParsedInput {
    Cayley(CayleyJson),
    Generators(GeneratorJson),
}

fn parse_input(cli: &Cli) -> Result<Option<ParsedInput>, CliError> {
    if cli.input.is_some() && cli.corpus.is_some() {
        return Err(CliError::Input("give either --input or --corpus, not both".into()));
    }
    let Some(path) = &cli.input else { return Ok(None) };
    let value = read_input_json(path)?;
    let parsed = if value.get("generators").is_some() {
        ParsedInput::Generators(
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("bad generator file: {e}")))?,
        )
    } else {
        ParsedInput::Cayley(
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("bad Cayley file: {e}")))?,
        )
    };
    Ok(Some(parsed))
}

/// Loads the working semigroup. Tables failing only the inverse axioms are
/// admitted without a star so that analysis commands can still report on them.
fn load_semigroup(cli: &Cli, guards: &Guards) -> Result<FiniteSemigroup, CliError> {
    match parse_input(cli)? {
        Some(ParsedInput::Generators(g)) => Ok(from_generator_json(g, guards.validation_max)?),
        Some(ParsedInput::Cayley(c)) => match c.clone().into_semigroup(guards.validation_max) {
            Ok(s) => Ok(s),
            Err(ValidationError::NotInverse { .. } | ValidationError::InverseNotUnique { .. }) => {
                Ok(c.into_plain_semigroup(guards.validation_max)?)
            }
            Err(e) => Err(e.into()),
        },
        None => match &cli.corpus {
            Some(name) => Ok(by_name(name, guards.validation_max)?),
            None => Err(CliError::Input("no input: give --input PATH or --corpus NAME".into())),
        },
    }
}

fn validate_input(cli: &Cli, guards: &Guards) -> Result<Value, CliError> {
    let attempt = match parse_input(cli)? {
        Some(ParsedInput::Generators(g)) => from_generator_json(g, guards.validation_max).map_err(Into::into),
        Some(ParsedInput::Cayley(c)) => match c.clone().into_semigroup(guards.validation_max) {
            Ok(s) => Ok(s),
            Err(e @ (ValidationError::NotInverse { .. } | ValidationError::InverseNotUnique { .. })) => {
                // Still a semigroup: report it as valid but not inverse.
                let s = c.into_plain_semigroup(guards.validation_max)?;
                return Ok(validation_body(&s, Some(e.to_string())));
            }
            Err(e) => Err(e.into()),
        },
        None => match &cli.corpus {
            Some(name) => by_name(name, guards.validation_max).map_err(Into::into),
            None => Err(CliError::Input("no input: give --input PATH or --corpus NAME".into())),
        },
    };
    Ok(validation_body(&attempt?, None))
}

fn validation_body(s: &FiniteSemigroup, not_inverse_reason: Option<String>) -> Value {
    let star: Option<Vec<&str>> =
        s.star_map().map(|st| st.iter().map(|&i| s.label(i)).collect());
    json!({
        "semigroup": s.name(),
        "size": s.len(),
        "associative": true,
        "inverse": s.is_inverse(),
        "idempotent_count": idempotents(s).count(),
        "star": star,
        "not_inverse_reason": not_inverse_reason,
    })
}

fn directedness_json(s: &FiniteSemigroup, d: Directedness) -> DirectednessJson {
    match d {
        Directedness::Directed => DirectednessJson::Flag(true),
        Directedness::NotDirected { witness: (a, b) } => DirectednessJson::Witness {
            witness: [s.label(a).to_string(), s.label(b).to_string()],
        },
    }
}

fn coefficient_algebra(spec: &str) -> Result<StructureAlgebra, CliError> {
    match spec.split_once(':') {
        None if spec == "scalars" => Ok(StructureAlgebra::new(
            "Q",
            vec!["1".into()],
            vec![vec![vec![(0, rat(1))]]],
        )
        .expect("the scalar algebra is associative")),
        Some(("truncated", k)) => {
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Input(format!("bad truncation level {k:?}")))?;
            Ok(StructureAlgebra::semigroup_algebra(&truncated_add_monoid(k)?))
        }
        _ => Err(CliError::Input(format!(
            "unknown coefficient algebra {spec:?}: use scalars or truncated:K"
        ))),
    }
}

/// Draws a few random members of the affine solution family and re-verifies
/// each one; exactness means every draw must pass.
fn sampled_check(
    setup: &modamen_core::diagonal::TensorSetup,
    sol: &DiagonalSolution,
    seed: u64,
) -> Value {
    const SAMPLES: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_ok = true;
    for _ in 0..SAMPLES {
        let mut m = sol.particular.clone();
        for row in sol.nullspace.basis_sparse() {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                m = sparse_axpy(&m, &rat(c), row);
            }
        }
        let (ok, _) = verify_module_diagonal(setup, &m, Some(&setup.ideal));
        all_ok &= ok;
    }
    json!({ "seed": seed, "samples": SAMPLES, "ok": all_ok })
}

fn munn_word(raw: &str) -> Result<MunnTree, CliError> {
    Ok(parse_word(raw)?)
}

fn munn_op(
    multiply: &Option<Vec<String>>,
    inverse: &Option<String>,
    idempotent: &Option<String>,
    leq: &Option<Vec<String>>,
    check_upper_bound: &Option<Vec<String>>,
) -> Result<Value, CliError> {
    let given = [
        multiply.is_some(),
        inverse.is_some(),
        idempotent.is_some(),
        leq.is_some(),
        check_upper_bound.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return Err(CliError::Input(
            "give exactly one of --multiply, --inverse, --idempotent, --leq, --check-upper-bound"
                .into(),
        ));
    }
    if let Some(ws) = multiply {
        let out = munn_word(&ws[0])?.multiply(&munn_word(&ws[1])?);
        return Ok(json!({"op": "multiply", "operands": ws, "result": out.to_word()}));
    }
    if let Some(w) = inverse {
        return Ok(json!({"op": "inverse", "operand": w, "result": munn_word(w)?.inverse().to_word()}));
    }
    if let Some(w) = idempotent {
        return Ok(json!({"op": "idempotent", "operand": w, "result": munn_word(w)?.is_idempotent()}));
    }
    if let Some(ws) = leq {
        let result = munn_word(&ws[0])?.leq(&munn_word(&ws[1])?);
        return Ok(json!({"op": "leq", "operands": ws, "result": result}));
    }
    let ws = check_upper_bound.as_ref().expect("one flag is set");
    let bound = munn_word(&ws[0])?.upper_bound(&munn_word(&ws[1])?)?;
    Ok(json!({
        "op": "check_upper_bound",
        "operands": ws,
        "result": bound.map(|b| b.to_word()),
    }))
}

fn render_text(env: &Envelope) -> String {
    let mut out = format!("schema {}\n", env.schema_version);
    for sec in &env.sections {
        out.push_str(&format!("[{}] ({} ms)\n", sec.kind, sec.elapsed_ms));
        text_value(&sec.body, 1, &mut out);
    }
    out
}

fn text_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(val) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar_array(item) || !matches!(item, Value::Object(_) | Value::Array(_)) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_value(item, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn is_scalar_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}
