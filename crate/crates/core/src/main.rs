use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use grrs::catalog::{self, CatalogEntry, CatalogSystem};
use grrs::classify::{self, ClassDescriptor};
use grrs::io::{self, Payload};
use grrs::iso::isomorphic_finite;
use grrs::{Error, FiniteRootSystem, Rational, RationalVector, SymbolicRootSystem, Verdict};

const EXIT_NOT_ISOMORPHIC: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_WGRS_ONLY: u8 = 3;
const EXIT_AXIOM_FAILURE: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "grrs", version, about = "Generalized reflection root systems")]
struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog system, e.g. `B3`, `Ann_x(n=1,p=1,q=3)` or `family(B3,k=1,S=0b01)`.
    Catalog {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the axioms.
    Check { path: PathBuf },
    /// List the isomorphism classes with a given finite part.
    Classify {
        #[arg(long)]
        cl: String,
        #[arg(long)]
        k: usize,
    },
    /// Decide whether two systems are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Orbits of the Weyl or extended Weyl group.
    Orbits {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Group::Weyl)]
        group: Group,
    },
    /// Append `n` kernel directions.
    Affinize {
        path: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Quotient by kernel vectors given as comma-separated rationals.
    Quotient {
        path: PathBuf,
        #[arg(long = "vector", required = true)]
        vectors: Vec<String>,
        /// Allow distinct roots to be identified.
        #[arg(long)]
        allow_collisions: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gap of each finite root.
    Gaps { path: PathBuf },
    /// Subsystem generated by seed roots.
    Subsystem {
        path: PathBuf,
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Real roots of a symmetric matrix given as rows separated by `;`.
    Realroots {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Indices `j` for which `2α_j` is also a root.
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        height: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Weyl,
    Gw,
}

enum Failure {
    Code(u8, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<grrs::ParseError> for Failure {
    fn from(e: grrs::ParseError) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome = Result<u8, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Code(EXIT_BAD_INPUT, msg.into())
}

fn read(path: &PathBuf) -> Result<Payload, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok(io::from_str(&text)?)
}

enum System {
    Finite(FiniteRootSystem),
    Symbolic(SymbolicRootSystem),
}

fn read_system(path: &PathBuf) -> Result<System, Failure> {
    match read(path)? {
        Payload::Finite(r) => Ok(System::Finite(r)),
        Payload::Symbolic(s) => Ok(System::Symbolic(s)),
        p => Err(bad(format!("{}: expected a root system, found a {} document", path.display(), p.kind()))),
    }
}

fn emit(payload: &Payload, output: &Option<PathBuf>) -> Outcome {
    let text = io::to_string(payload);
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Code(EXIT_INTERNAL, format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn parse_vector(s: &str) -> Result<RationalVector, Failure> {
    let xs = s.split(',').map(str::parse::<Rational>).collect::<Result<Vec<_>, _>>()?;
    Ok(RationalVector(xs))
}

fn system_payload(s: System) -> Payload {
    match s {
        System::Finite(r) => Payload::Finite(r),
        System::Symbolic(s) => Payload::Symbolic(s),
    }
}

fn cmd_check(path: &PathBuf, json: bool) -> Outcome {
    let report = match read_system(path)? {
        System::Finite(r) => r.check_axioms(),
        System::Symbolic(s) => s.check_axioms(),
    };
    let verdict = report.verdict();
    if json {
        print!("{}", io::to_string(&Payload::Report(report)));
    } else {
        for (name, c) in [
            ("GR0", &report.gr0),
            ("GR1", &report.gr1),
            ("GR2", &report.gr2),
            ("GR3", &report.gr3),
            ("WGR3", &report.wgr3),
        ] {
            let status = if c.pass { "pass" } else { "FAIL" };
            let mut line = format!("{name:5} {status}");
            if let Some(d) = &c.detail {
                line.push_str(&format!("  {d}"));
            }
            if !c.witness.is_empty() {
                let w: Vec<String> = c.witness.iter().map(ToString::to_string).collect();
                line.push_str(&format!("  witness {}", w.join(" ")));
            }
            println!("{line}");
        }
        println!("verdict: {verdict:?}");
    }
    Ok(match verdict {
        Verdict::Grrs => 0,
        Verdict::Wgrs => EXIT_WGRS_ONLY,
        Verdict::Neither => EXIT_AXIOM_FAILURE,
    })
}

fn describe(d: &ClassDescriptor) -> String {
    d.data.iter().map(|(k, v)| format!("{k}={}", v.as_str().map_or(v.to_string(), str::to_string))).collect::<Vec<_>>().join(", ")
}

fn cmd_classify(cl: &str, k: usize, json: bool) -> Outcome {
    let name: catalog::CatalogName = cl.parse()?;
    let e = classify::enumerate_classes(&name, k)?;
    if json {
        print!("{}", io::to_string(&Payload::Classes(e.classes)));
        return Ok(0);
    }
    let cl = e.classes.first().map_or(cl.to_string(), |d| d.cl.clone());
    println!("{} classes for cl = {cl}, k = {k}{}", e.classes.len(), if e.partial { " (partial list)" } else { "" });
    for (i, d) in e.classes.iter().enumerate() {
        let name = classify::kac_moody_name(d).unwrap_or_else(|_| "-".into());
        println!("{:>3}  {:<28} {name}", i + 1, describe(d));
    }
    Ok(0)
}

fn cmd_iso(a: &PathBuf, b: &PathBuf, json: bool) -> Outcome {
    let (same, detail) = match (read_system(a)?, read_system(b)?) {
        (System::Finite(x), System::Finite(y)) => {
            let h = isomorphic_finite(&x, &y);
            let d = h.as_ref().map(|h| json!({ "scalar": h.scalar, "columns": h.columns }));
            (h.is_some(), d.unwrap_or(serde_json::Value::Null))
        }
        (System::Symbolic(x), System::Symbolic(y)) => {
            let (dx, dy) = (classify::identify(&x)?, classify::identify(&y)?);
            (dx == dy, json!({ "a": dx, "b": dy }))
        }
        _ => (false, serde_json::Value::Null),
    };
    if json {
        print_json(&json!({ "isomorphic": same, "detail": detail }));
    } else {
        println!("{}", if same { "isomorphic" } else { "not isomorphic" });
    }
    Ok(if same { 0 } else { EXIT_NOT_ISOMORPHIC })
}

fn cmd_orbits(path: &PathBuf, group: Group, json: bool) -> Outcome {
    let r = match read_system(path)? {
        System::Finite(r) => r,
        System::Symbolic(_) => return Err(bad("orbits needs a finite system")),
    };
    let orbits = match group {
        Group::Weyl => r.weyl_orbits(),
        Group::Gw => r.gw_orbits()?,
    };
    if json {
        print_json(&json!({ "orbits": orbits }));
    } else {
        for (i, o) in orbits.iter().enumerate() {
            let norm = r.form(&o[0], &o[0]);
            let roots: Vec<String> = o.iter().map(ToString::to_string).collect();
            println!("orbit {} ({} roots, norm {norm}): {}", i + 1, o.len(), roots.join(" "));
        }
    }
    Ok(0)
}

fn cmd_gaps(path: &PathBuf, json: bool) -> Outcome {
    let s = match read_system(path)? {
        System::Symbolic(s) => s,
        System::Finite(_) => return Err(bad("gaps needs a symbolic system")),
    };
    let table = s.gaps()?;
    if json {
        print_json(&serde_json::to_value(&table).expect("values serialize"));
    } else {
        for e in &table.entries {
            let g = e.gap.map_or("undefined".to_string(), |g| g.to_string());
            println!("{}: {g}{}", e.root, if e.isotropic { " (isotropic)" } else { "" });
        }
    }
    Ok(0)
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<Rational>>, Failure> {
    s.split(';').map(|row| parse_vector(row.trim()).map(|v| v.0)).collect()
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Catalog { name, output } => {
            let entry: CatalogEntry = name.parse()?;
            let payload = match catalog::construct(&entry)? {
                CatalogSystem::Finite(r) => Payload::Finite(r),
                CatalogSystem::Symbolic(s) => Payload::Symbolic(s),
            };
            emit(&payload, &output)
        }
        Command::Check { path } => cmd_check(&path, json),
        Command::Classify { cl, k } => cmd_classify(&cl, k, json),
        Command::Iso { a, b } => cmd_iso(&a, &b, json),
        Command::Orbits { path, group } => cmd_orbits(&path, group, json),
        Command::Affinize { path, n, output } => {
            let s = match read_system(&path)? {
                System::Finite(r) => grrs::symbolic::affinize_finite(&r, n)?,
                System::Symbolic(s) => s.affinize(n),
            };
            emit(&Payload::Symbolic(s), &output)
        }
        Command::Quotient { path, vectors, allow_collisions, output } => {
            let s = match read_system(&path)? {
                System::Symbolic(s) => s,
                System::Finite(_) => return Err(bad("quotient needs a symbolic system")),
            };
            let vs = vectors.iter().map(|v| parse_vector(v)).collect::<Result<Vec<_>, _>>()?;
            emit(&Payload::Symbolic(s.quotient(&vs, !allow_collisions)?), &output)
        }
        Command::Gaps { path } => cmd_gaps(&path, json),
        Command::Subsystem { path, seeds, output } => {
            let r = match read_system(&path)? {
                System::Finite(r) => r,
                System::Symbolic(_) => return Err(bad("subsystem needs a finite system")),
            };
            let vs = seeds.iter().map(|v| parse_vector(v)).collect::<Result<Vec<_>, _>>()?;
            emit(&system_payload(System::Finite(r.generate_subsystem(&vs)?)), &output)
        }
        Command::Realroots { matrix, j, height, output } => {
            let rr = catalog::real_roots_from_matrix(&parse_matrix(&matrix)?, &j, height)?;
            if rr.truncated {
                eprintln!("truncated at height {height}");
            }
            emit(&Payload::Finite(rr.system), &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Code(code, msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
        Ok(Err(Failure::Lib(e))) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
