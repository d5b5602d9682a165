//! The `tsvs` command-line tool. [`run`] takes the argument list and two
//! writers so the binary and the golden tests share one code path.
//!
//! Exit codes: 0 on success, 1 on a domain error (stderr `Name: message`),
//! 2 on bad input (unreadable file, parse error, bad arguments).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bimod::{classify_with, endomorphism_basis, hom_similar, simple_from_orbit, MatrixHom, OrbitTable};
use crate::canonical::{
    homogeneous_structure, jordan_order_conjugate, triangularize_commuting, triangularize_with, CanonicalField,
};
use crate::config::{Config, OutputFormat, DEFAULT_SEED};
use crate::error::Error;
use crate::field::Field;
use crate::files::{check_size, read_basis, read_field, read_hom, read_hs, read_matrix, write_hom, write_hs, AnyHom, AnyMatrix};
use crate::hs::{hs_product, hs_product_truncated, toeplitz_hom};
use crate::linalg::{jcf, Matrix};
use crate::numfield::NumberField;
use crate::parse::{parse_elem, FieldSpec};
use crate::tensor::{decompose, k0_presentation_for, kronecker_compose};

#[derive(Parser, Debug)]
#[command(name = "tsvs", version, about = "Two-sided vector spaces over number fields and Q(t)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// RNG seed for randomized checks (overrides TSVS_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for cached factorizations.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest accepted degree of a number field.
    #[arg(long, global = true, default_value_t = crate::numfield::MAX_FIELD_DEGREE)]
    max_degree: usize,
    /// Largest degree of a norm polynomial during factorization.
    #[arg(long, global = true, default_value_t = crate::numfield::MAX_NORM_DEGREE)]
    max_norm_degree: usize,
    /// Largest accepted matrix size.
    #[arg(long, global = true, default_value_t = crate::config::MAX_MATRIX_SIZE)]
    max_size: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Orbits of Gal on the roots of the defining polynomial.
    Classify { field: PathBuf },
    /// Hom file of the simple bimodule of an orbit.
    Simple {
        field: PathBuf,
        #[arg(long)]
        orbit: usize,
        /// Basis of K[X]/(g), e.g. `[1, 1/2*g^2*x]`.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Basis of the endomorphisms of a simple bimodule.
    End {
        field: PathBuf,
        #[arg(long)]
        orbit: usize,
    },
    /// Tensor product of two homs.
    Tensor { left: PathBuf, right: PathBuf },
    /// Multiplicities of simples in a semisimple hom.
    Decompose { hom: PathBuf },
    /// Presentation of the Grothendieck ring.
    K0 { field: PathBuf },
    /// Decide whether two homs are conjugate.
    Similar { left: PathBuf, right: PathBuf },
    /// Jordan form of a matrix.
    Jcf {
        matrix: PathBuf,
        /// Comma-separated eigenvalues (needed over Q(t) unless triangular).
        #[arg(long)]
        eigenvalues: Option<String>,
    },
    /// Upper triangular conjugation of a Jordan-ordered matrix to Jordan form.
    JordanOrder { matrix: PathBuf },
    /// Product of two higher derivations.
    HsCompose {
        left: PathBuf,
        right: PathBuf,
        /// Keep only the first min(m, n) + 1 terms.
        #[arg(long)]
        truncate: bool,
    },
    /// Toeplitz hom of a higher derivation.
    HsHom { hs: PathBuf },
    /// Simultaneous triangularization of a hom.
    Triangularize {
        hom: PathBuf,
        #[arg(long)]
        eigenvalues: Option<String>,
    },
    /// Block structure of a homogeneous hom.
    Homogeneous {
        hom: PathBuf,
        /// 1-dimensional hom giving the eigenvalue.
        #[arg(long)]
        diag: PathBuf,
    },
}

/// Outcome of a failed command: exit code and the stderr line.
struct Failure {
    code: i32,
    line: String,
}

impl Failure {
    fn domain(e: Error) -> Self {
        if e.is_parse() {
            return Failure { code: 2, line: format!("{}: {e}", e.name()) };
        }
        Failure { code: 1, line: format!("{}: {e}", e.name()) }
    }

    fn input(path: &Path, e: Error) -> Self {
        if e.is_parse() {
            return Failure { code: 2, line: format!("{}: {}: {e}", e.name(), path.display()) };
        }
        Failure::domain(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Text lines and the JSON object carrying the same fields.
struct Report {
    lines: Vec<String>,
    json: Value,
}

/// Run the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{shown}");
                return 0;
            }
            let _ = write!(err, "{shown}");
            return 2;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = match cli.format {
                OutputFormat::Text => report.lines.iter().map(|l| format!("{l}\n")).collect::<String>(),
                OutputFormat::Json => {
                    format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json values serialize"))
                }
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            0
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.line);
            f.code
        }
    }
}

fn config(cli: &Cli) -> Outcome<Config> {
    let seed = match (cli.seed, std::env::var("TSVS_SEED")) {
        (Some(s), _) => s,
        (None, Ok(v)) => Config::parse_seed(&v)?,
        (None, Err(_)) => DEFAULT_SEED,
    };
    let cfg = Config {
        max_field_degree: cli.max_degree,
        max_norm_degree: cli.max_norm_degree,
        max_matrix_size: cli.max_size,
        seed,
        cache_dir: cli.cache_dir.clone(),
        format: cli.format,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_text(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, line: format!("IoError: {}: {e}", path.display()) })
}

fn load_number_field(path: &Path, cfg: &Config) -> Outcome<NumberField> {
    match read_field(&read_text(path)?, cfg.max_field_degree).map_err(|e| Failure::input(path, e))? {
        FieldSpec::Number(k) => Ok(k),
        FieldSpec::Function(_) => Err(Failure::domain(Error::FieldMismatch)),
    }
}

fn load_hom(path: &Path, cfg: &Config) -> Outcome<AnyHom> {
    let h = read_hom(&read_text(path)?, cfg.max_field_degree).map_err(|e| Failure::input(path, e))?;
    check_size(h.n(), cfg.max_matrix_size)?;
    Ok(h)
}

fn load_table(path: &Path, cfg: &Config) -> Outcome<OrbitTable> {
    let k = load_number_field(path, cfg)?;
    Ok(classify_with(&k, cfg.factor_caps(), &cfg.factor_cache())?)
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| Value::String(f.format_elem(m.get(r, c)))).collect()))
            .collect(),
    )
}

fn elems_text<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let items: Vec<String> = v.iter().map(|e| f.format_elem(e)).collect();
    format!("[{}]", items.join(", "))
}

fn elems_json<F: Field>(f: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|e| Value::String(f.format_elem(e))).collect())
}

fn hom_report(h: &AnyHom) -> Report {
    let text = write_hom(h);
    let matrix = match h {
        AnyHom::Number(h) => matrix_json(h.gen_image()),
        AnyHom::Function(h) => matrix_json(h.gen_image()),
    };
    Report { lines: text.lines().map(String::from).collect(), json: json!({ "field": h.header(), "matrix": matrix }) }
}

fn parse_eigenvalues<F: Field>(f: &F, list: &str) -> Outcome<Vec<F::Elem>> {
    list.split(',')
        .map(|s| {
            parse_elem(f, s.trim()).map_err(|e| Failure { code: 2, line: format!("{}: --eigenvalues: {e}", e.name()) })
        })
        .collect()
}

fn execute(cli: &Cli) -> Outcome<Report> {
    let cfg = config(cli)?;
    match &cli.cmd {
        Cmd::Classify { field } => {
            let table = load_table(field, &cfg)?;
            let orbits: Vec<Value> = table
                .orbits
                .iter()
                .map(|o| json!({ "id": o.id, "size": o.size, "trivial": o.trivial, "factor": o.factor.to_string() }))
                .collect();
            Ok(Report {
                lines: table.to_string().lines().map(String::from).collect(),
                json: json!({ "orbits": orbits }),
            })
        }
        Cmd::Simple { field, orbit, basis } => {
            let table = load_table(field, &cfg)?;
            let basis = match basis {
                Some(p) => Some(read_basis(&table.field, &read_text(p)?).map_err(|e| Failure::input(p, e))?),
                None => None,
            };
            let s = simple_from_orbit(&table, *orbit, basis)?;
            Ok(hom_report(&AnyHom::Number(s.hom)))
        }
        Cmd::End { field, orbit } => {
            let table = load_table(field, &cfg)?;
            let s = simple_from_orbit(&table, *orbit, None)?;
            let basis = endomorphism_basis(&s);
            Ok(Report {
                lines: basis.iter().enumerate().map(|(i, m)| format!("E{}: {m}", i + 1)).collect(),
                json: json!({ "orbit": orbit, "basis": basis.iter().map(matrix_json).collect::<Vec<_>>() }),
            })
        }
        Cmd::Tensor { left, right } => {
            let (a, b) = (load_hom(left, &cfg)?, load_hom(right, &cfg)?);
            check_size(a.n() * b.n(), cfg.max_matrix_size)?;
            let t = match (a, b) {
                (AnyHom::Number(a), AnyHom::Number(b)) => AnyHom::Number(kronecker_compose(&a, &b)?),
                (AnyHom::Function(a), AnyHom::Function(b)) => AnyHom::Function(kronecker_compose(&a, &b)?),
                _ => return Err(Error::FieldMismatch.into()),
            };
            Ok(hom_report(&t))
        }
        Cmd::Decompose { hom } => {
            let AnyHom::Number(h) = load_hom(hom, &cfg)? else {
                return Err(Error::FieldMismatch.into());
            };
            let table = classify_with(h.field(), cfg.factor_caps(), &cfg.factor_cache())?;
            let d = decompose(&h, &table)?;
            let parts: Vec<Value> = d.parts.iter().map(|(o, m)| json!({ "orbit": o, "multiplicity": m })).collect();
            Ok(Report { lines: vec![d.to_string()], json: json!({ "parts": parts }) })
        }
        Cmd::K0 { field } => {
            let table = load_table(field, &cfg)?;
            let k0 = k0_presentation_for(&table)?;
            let mut lines = vec![k0.ring_text()];
            lines.extend(k0.relation_lines());
            if let Some(g) = k0.group_ring_text() {
                lines.push(format!("group ring: {g}"));
            }
            let commutative = k0.is_commutative();
            lines.push(format!("commutative: {}", if commutative { "yes" } else { "no" }));
            Ok(Report {
                lines,
                json: json!({
                    "ring": k0.ring_text(),
                    "relations": k0.relation_lines(),
                    "group_ring": k0.group_ring_text(),
                    "commutative": commutative,
                }),
            })
        }
        Cmd::Similar { left, right } => {
            let (a, b) = (load_hom(left, &cfg)?, load_hom(right, &cfg)?);
            let same = match (a, b) {
                (AnyHom::Number(a), AnyHom::Number(b)) => hom_similar(&a, &b, cfg.seed)?,
                (AnyHom::Function(a), AnyHom::Function(b)) => hom_similar(&a, &b, cfg.seed)?,
                _ => return Err(Error::FieldMismatch.into()),
            };
            Ok(Report {
                lines: vec![format!("similar: {}", if same { "yes" } else { "no" })],
                json: json!({ "similar": same }),
            })
        }
        Cmd::Jcf { matrix, eigenvalues } => {
            let m = read_matrix(&read_text(matrix)?, cfg.max_field_degree).map_err(|e| Failure::input(matrix, e))?;
            match m {
                AnyMatrix::Rational(m) => jcf_report(&m, eigenvalues.as_deref(), &cfg),
                AnyMatrix::Number(m) => jcf_report(&m, eigenvalues.as_deref(), &cfg),
                AnyMatrix::Function(m) => jcf_report(&m, eigenvalues.as_deref(), &cfg),
            }
        }
        Cmd::JordanOrder { matrix } => {
            let m = read_matrix(&read_text(matrix)?, cfg.max_field_degree).map_err(|e| Failure::input(matrix, e))?;
            match m {
                AnyMatrix::Rational(m) => jordan_order_report(&m, &cfg),
                AnyMatrix::Number(m) => jordan_order_report(&m, &cfg),
                AnyMatrix::Function(m) => jordan_order_report(&m, &cfg),
            }
        }
        Cmd::HsCompose { left, right, truncate } => {
            let d = read_hs(&read_text(left)?).map_err(|e| Failure::input(left, e))?;
            let e = read_hs(&read_text(right)?).map_err(|e| Failure::input(right, e))?;
            let p = if *truncate { hs_product_truncated(&d, &e)? } else { hs_product(&d, &e)? };
            let text = write_hs(&p);
            Ok(Report {
                lines: vec![text.trim_end().to_string()],
                json: json!({ "order": p.order(), "maps": p.maps().iter().map(|m| m.format_with(p.field().name())).collect::<Vec<_>>() }),
            })
        }
        Cmd::HsHom { hs } => {
            let d = read_hs(&read_text(hs)?).map_err(|e| Failure::input(hs, e))?;
            check_size(d.order() + 1, cfg.max_matrix_size)?;
            Ok(hom_report(&AnyHom::Function(toeplitz_hom(&d)?)))
        }
        Cmd::Triangularize { hom, eigenvalues } => match load_hom(hom, &cfg)? {
            AnyHom::Number(h) => triangularize_report(&h, eigenvalues.as_deref()),
            AnyHom::Function(h) => triangularize_report(&h, eigenvalues.as_deref()),
        },
        Cmd::Homogeneous { hom, diag } => match (load_hom(hom, &cfg)?, load_hom(diag, &cfg)?) {
            (AnyHom::Number(h), AnyHom::Number(a)) => homogeneous_report(&h, &a),
            (AnyHom::Function(h), AnyHom::Function(a)) => homogeneous_report(&h, &a),
            _ => Err(Error::FieldMismatch.into()),
        },
    }
}

fn jcf_report<F: CanonicalField>(m: &Matrix<F>, eigenvalues: Option<&str>, cfg: &Config) -> Outcome<Report> {
    check_size(m.rows().max(m.cols()), cfg.max_matrix_size)?;
    let f = m.field();
    let eigs = match eigenvalues {
        Some(list) => parse_eigenvalues(f, list)?,
        None => f.split_eigenvalues(m)?,
    };
    let j = jcf(m, Some(&eigs))?;
    Ok(Report {
        lines: vec![
            format!("eigenvalues: {}", elems_text(f, &j.eigenvalues)),
            format!("blocks: {:?}", j.blocks),
            format!("conjugator: {}", j.conjugator),
            format!("jcf: {}", j.jcf),
        ],
        json: json!({
            "eigenvalues": elems_json(f, &j.eigenvalues),
            "blocks": j.blocks,
            "conjugator": matrix_json(&j.conjugator),
            "jcf": matrix_json(&j.jcf),
        }),
    })
}

fn jordan_order_report<F: Field>(m: &Matrix<F>, cfg: &Config) -> Outcome<Report> {
    check_size(m.rows().max(m.cols()), cfg.max_matrix_size)?;
    let o = jordan_order_conjugate(m)?;
    Ok(Report {
        lines: vec![
            format!("blocks: {:?}", o.blocks),
            format!("conjugator: {}", o.conjugator),
            format!("jcf: {}", o.jcf),
        ],
        json: json!({ "blocks": o.blocks, "conjugator": matrix_json(&o.conjugator), "jcf": matrix_json(&o.jcf) }),
    })
}

fn triangularize_report<F: CanonicalField>(h: &MatrixHom<F>, eigenvalues: Option<&str>) -> Outcome<Report> {
    let f = h.field();
    let t = match eigenvalues {
        Some(list) => triangularize_with(h, &parse_eigenvalues(f, list)?)?,
        None => triangularize_commuting(h)?,
    };
    Ok(Report {
        lines: vec![
            format!("diagonal: {}", elems_text(f, &t.diagonal)),
            format!("conjugator: {}", t.conjugator),
            format!("triangular: {}", t.triangular.gen_image()),
        ],
        json: json!({
            "diagonal": elems_json(f, &t.diagonal),
            "conjugator": matrix_json(&t.conjugator),
            "triangular": matrix_json(t.triangular.gen_image()),
        }),
    })
}

fn homogeneous_report<F: CanonicalField>(h: &MatrixHom<F>, a: &MatrixHom<F>) -> Outcome<Report> {
    let form = homogeneous_structure(h, a)?;
    let f = h.field();
    let derivations: Vec<Value> = form
        .derivations
        .iter()
        .zip(form.representations())
        .map(|(d, reps)| json!({ "maps": d.as_ref().map(|d| d.to_string()), "representation": reps }))
        .collect();
    Ok(Report {
        lines: form.to_string().lines().map(String::from).collect(),
        json: json!({
            "eigenvalue": f.format_elem(&form.mu),
            "blocks": form.blocks,
            "conjugator": matrix_json(&form.conjugator),
            "form": matrix_json(form.form.gen_image()),
            "derivations": derivations,
        }),
    })
}
