//! Command-line front end. [`run`] does all the work and returns the exit code
//! with the text to print, so commands can be exercised in-process.

pub mod syntax;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohomology::{compare_readings, Reading};
use crate::dirac::{check_dirac, coordinate_blade, induced_htla, search_coordinate_dirac, Subbundle};
use crate::error::{Error, Result};
use crate::exterior::indices;
use crate::kerforms::KerForm;
use crate::linfty::{build_classical, build_twisted, verify_linfty, LInftyOptions, Packaging};
use crate::section::Section;
use crate::structure::{check_axioms, load_spec_file, spec_to_json, spec_to_value, CheckOptions, Suite};
use crate::twist::{c_twist, make_standard, so3, split_point, twist_bracket};
use crate::{AlgebroidSpec, Kind};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "courant", version, about = "Exact checks for twisted Courant algebroids")]
struct Cli {
    /// Seed for every randomized section and function.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximal polynomial degree of random coefficients.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Plain text output.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a structure file against an axiom suite.
    Verify {
        file: PathBuf,
        /// Defaults to the suite matching the declared kind.
        #[arg(long)]
        suite: Option<String>,
        /// Number of random sections drawn.
        #[arg(long, default_value_t = 4)]
        sections: usize,
    },
    /// Write a structure file.
    Make {
        #[command(subcommand)]
        what: Make,
    },
    /// Naive cohomology of a point structure.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = ReadingArg::Slotwise)]
        reading: ReadingArg,
    },
    /// Dirac checks and the induced twisted Lie algebroid.
    Dirac {
        file: PathBuf,
        /// A generator file, or inline generators separated by `;`.
        #[arg(long, required_unless_present = "search", conflicts_with = "search")]
        subspace: Option<String>,
        /// List the coordinate Dirac structures.
        #[arg(long)]
        search: bool,
        /// Where to write the induced algebroid.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The two-term L∞ equations.
    Linfty {
        file: PathBuf,
        /// Functions in degree one, even when a twist is present.
        #[arg(long)]
        classical: bool,
        /// Random tuples per equation on top of the basis tuples.
        #[arg(long, default_value_t = 3)]
        tuples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Make {
    /// `TM ⊕ T*M` over n variables.
    Standard {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// The standard algebroid twisted by a base three-form in `dx1..dxn`.
    Ctwist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: String,
        #[command(flatten)]
        out: Out,
    },
    /// Twist a structure by a ker-ρ three-form in its basis names.
    Twist {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        out: Out,
    },
    /// The so(3) point algebra.
    So3 {
        #[command(flatten)]
        out: Out,
    },
    /// Abelian point structure with a split diagonal pairing.
    Split {
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args, Debug)]
struct Out {
    /// Write the structure here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReadingArg {
    Slotwise,
    InsH,
}

impl From<ReadingArg> for Reading {
    fn from(r: ReadingArg) -> Reading {
        match r {
            ReadingArg::Slotwise => Reading::Slotwise,
            ReadingArg::InsH => Reading::InsH,
        }
    }
}

struct Ctx {
    seed: u64,
    degree: Option<u32>,
    text: bool,
}

struct Outcome {
    code: i32,
    json: Value,
    text: String,
    /// Printed as is in both modes.
    document: Option<String>,
}

fn envelope(command: &str, mut body: Value) -> Value {
    body["schema_version"] = json!(SCHEMA_VERSION);
    body["command"] = json!(command);
    body
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Invariant { .. } => "invariant",
        Error::Inapplicable { .. } => "inapplicable",
        Error::NotInKernel(_) => "not-in-kernel",
        Error::Degree(_) => "degree",
        Error::MissingTwist => "missing-twist",
        Error::Undecidable(_) => "undecidable",
        Error::CochainEscape(_) => "cochain-escape",
        Error::Io(_) => "io",
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            return (code, e.render().to_string());
        }
    };
    let ctx = Ctx {
        seed: cli.seed,
        degree: cli.degree,
        text: cli.text,
    };
    let (name, result) = match cli.command {
        Command::Verify { file, suite, sections } => ("verify", verify(&ctx, &file, suite.as_deref(), sections)),
        Command::Make { what } => ("make", make(what)),
        Command::Cohomology {
            file,
            max_degree,
            reading,
        } => ("cohomology", cohomology(&file, max_degree, reading.into())),
        Command::Dirac {
            file,
            subspace,
            search,
            out,
        } => ("dirac", dirac(&ctx, &file, subspace.as_deref(), search, out.as_deref())),
        Command::Linfty {
            file,
            classical,
            tuples,
        } => ("linfty", linfty(&ctx, &file, classical, tuples)),
    };
    match result {
        Ok(Outcome {
            code,
            document: Some(d),
            ..
        }) => (code, d),
        Ok(o) if ctx.text => (o.code, o.text),
        Ok(o) => (o.code, pretty(&o.json)),
        Err(e) if ctx.text => (EXIT_ERROR, format!("{name}: {e}\n")),
        Err(e) => {
            let body = json!({ "error": { "module": name, "kind": error_kind(&e), "message": e.to_string() } });
            (EXIT_ERROR, pretty(&envelope(name, body)))
        }
    }
}

fn default_suite(kind: Kind) -> Suite {
    match kind {
        Kind::Almost => Suite::AlmostCourantDorfman,
        Kind::StronglyAnchored => Suite::StronglyAnchored,
        Kind::Courant => Suite::Courant,
        Kind::HTwisted => Suite::HTwisted,
        Kind::LieAlgebroid | Kind::HTwistedLieAlgebroid => Suite::LieRinehart,
    }
}

fn verdict(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn verify(ctx: &Ctx, file: &Path, suite: Option<&str>, sections: usize) -> Result<Outcome> {
    let spec = load_spec_file(file)?;
    let suite = match suite {
        Some(s) => s.parse()?,
        None => default_suite(spec.kind()),
    };
    let opts = CheckOptions {
        seed: ctx.seed,
        degree: ctx.degree.unwrap_or(CheckOptions::default().degree),
        random_sections: sections,
        extra_sections: Vec::new(),
    };
    let report = check_axioms(&spec, suite, &opts)?;
    let passed = report.passed();
    let json = envelope(
        "verify",
        json!({ "suite": suite.as_str(), "passed": passed, "report": report.to_value() }),
    );
    Ok(Outcome {
        code: verdict(passed),
        json,
        text: report.to_text(),
        document: None,
    })
}

fn make(what: Make) -> Result<Outcome> {
    let (spec, out) = match what {
        Make::Standard { n, out } => (make_standard(n)?, out),
        Make::Ctwist { n, c, out } => {
            let names: Vec<String> = (1..=n).map(|i| format!("dx{i}")).collect();
            let form = syntax::parse_form(&c, &names, n)?;
            (c_twist(n, &form)?, out)
        }
        Make::Twist { base, b, out } => {
            let spec0 = load_spec_file(&base)?;
            let form = syntax::parse_form(&b, &syntax::basis_names(&spec0), spec0.nvars())?;
            let b = KerForm::certify(&spec0, 3, form)?;
            (twist_bracket(&spec0, &b)?, out)
        }
        Make::So3 { out } => (so3(), out),
        Make::Split { rank, out } => {
            if rank == 0 {
                return Err(Error::invariant("split rank", "rank must be at least 1"));
            }
            (split_point(rank), out)
        }
    };
    let mut document = spec_to_json(&spec);
    document.push('\n');
    match out.out {
        Some(path) => {
            write_file(&path, &document)?;
            let json = envelope(
                "make",
                json!({ "written": path.display().to_string(), "kind": spec.kind().as_str(), "rank": spec.rank() }),
            );
            let text = format!("wrote {} ({}, rank {})\n", path.display(), spec.kind(), spec.rank());
            Ok(Outcome {
                code: EXIT_PASS,
                json,
                text,
                document: None,
            })
        }
        None => Ok(Outcome {
            code: EXIT_PASS,
            json: Value::Null,
            text: String::new(),
            document: Some(document),
        }),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cohomology(file: &Path, max_degree: usize, reading: Reading) -> Result<Outcome> {
    let spec = load_spec_file(file)?;
    let both = compare_readings(&spec, max_degree)?;
    let chosen = match reading {
        Reading::Slotwise => &both.slotwise,
        Reading::InsH => &both.ins_h,
    };
    let agree = both.agree();
    let reading_name = serde_json::to_value(reading).expect("readings serialize");
    match chosen {
        Ok(c) => {
            let (chi_dims, chi_betti) = c.euler_characteristic();
            let json = envelope(
                "cohomology",
                json!({
                    "reading": reading_name,
                    "dims": c.dims,
                    "betti": c.betti,
                    "d_squared_zero": c.d_squared_zero,
                    "euler_characteristic": { "dims": chi_dims, "betti": chi_betti },
                    "readings_agree": agree,
                }),
            );
            let text = format!(
                "dims {:?}\nbetti {:?}\nd^2 = 0: {}\nreadings agree: {agree}\n",
                c.dims, c.betti, c.d_squared_zero
            );
            Ok(Outcome {
                code: verdict(c.d_squared_zero),
                json,
                text,
                document: None,
            })
        }
        Err(msg) => {
            let json = envelope(
                "cohomology",
                json!({ "reading": reading_name, "escape": msg, "readings_agree": agree }),
            );
            Ok(Outcome {
                code: EXIT_FAIL,
                json,
                text: format!("cochain escape: {msg}\n"),
                document: None,
            })
        }
    }
}

/// Generators from a file holding `{"generators": [...]}` or from inline text.
fn parse_subspace(spec: &AlgebroidSpec, arg: &str) -> Result<Vec<Section>> {
    let path = Path::new(arg);
    let lines: Vec<String> = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{} line {} column {}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })?;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse {
                location: path.display().to_string(),
                message: "expected an object with a `generators` array".into(),
            })?;
        gens.iter()
            .enumerate()
            .map(|(i, g)| {
                g.as_str().map(str::to_owned).ok_or_else(|| Error::Parse {
                    location: format!("{} generators[{i}]", path.display()),
                    message: "generators are strings".into(),
                })
            })
            .collect::<Result<_>>()?
    } else {
        arg.split(';').map(str::to_owned).collect()
    };
    lines.iter().map(|l| syntax::parse_section(l, spec)).collect()
}

fn dirac(ctx: &Ctx, file: &Path, subspace: Option<&str>, search: bool, out: Option<&Path>) -> Result<Outcome> {
    let spec = load_spec_file(file)?;
    let names = syntax::basis_names(&spec);
    if search {
        let found: Vec<Vec<String>> = search_coordinate_dirac(&spec)?
            .iter()
            .filter_map(coordinate_blade)
            .map(|b| indices(b).into_iter().map(|i| names[i].clone()).collect())
            .collect();
        let text = found.iter().map(|f| format!("{}\n", f.join(" "))).collect();
        return Ok(Outcome {
            code: EXIT_PASS,
            json: envelope("dirac", json!({ "coordinate_dirac": found })),
            text,
            document: None,
        });
    }
    let arg = subspace.expect("clap requires --subspace without --search");
    let l = Subbundle::new(&spec, parse_subspace(&spec, arg)?)?;
    let report = check_dirac(&spec, &l)?;
    if !report.passed() {
        let json = envelope(
            "dirac",
            json!({ "passed": false, "dirac": report.to_value(), "induced": null }),
        );
        return Ok(Outcome {
            code: EXIT_FAIL,
            json,
            text: report.to_text(),
            document: None,
        });
    }
    let opts = CheckOptions {
        seed: ctx.seed,
        degree: ctx.degree.unwrap_or(CheckOptions::default().degree),
        ..CheckOptions::default()
    };
    let induced = induced_htla(&spec, &l, &opts)?;
    let passed = induced.report.passed();
    if let (Some(path), Some(s)) = (out, &induced.spec) {
        let mut document = spec_to_json(s);
        document.push('\n');
        write_file(path, &document)?;
    }
    let json = envelope(
        "dirac",
        json!({
            "passed": passed,
            "dirac": report.to_value(),
            "induced_report": induced.report.to_value(),
            "induced": induced.spec.as_ref().map(spec_to_value),
        }),
    );
    let text = format!("{}{}", report.to_text(), induced.report.to_text());
    Ok(Outcome {
        code: verdict(passed),
        json,
        text,
        document: None,
    })
}

fn linfty(ctx: &Ctx, file: &Path, classical: bool, tuples: usize) -> Result<Outcome> {
    let spec = load_spec_file(file)?;
    let data = if classical || spec.twist().is_none() {
        build_classical(&spec)?
    } else {
        build_twisted(&spec)?
    };
    let opts = LInftyOptions {
        seed: ctx.seed,
        degree: ctx.degree.unwrap_or(LInftyOptions::default().degree),
        tuples,
    };
    let report = verify_linfty(&data, &opts);
    let passed = report.passed();
    let packaging = match data.packaging() {
        Packaging::Classical => "classical",
        Packaging::Twisted => "twisted",
    };
    let json = envelope(
        "linfty",
        json!({ "packaging": packaging, "passed": passed, "report": report.to_value() }),
    );
    Ok(Outcome {
        code: verdict(passed),
        json,
        text: format!("packaging {packaging}\n{}", report.to_text()),
        document: None,
    })
}
