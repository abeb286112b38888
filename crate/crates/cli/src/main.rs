//! `hopfforge`: build, verify, classify and recognize pointed triangular
//! Hopf algebras from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopfforge::abgroup::{enumerate_forms, enumerate_phi, orbit_representatives, FiniteAbelianGroup};
use hopfforge::error::Error;
use hopfforge::hd::{build_hd, validate_datum_with_bound, Datum, Generators};
use hopfforge::hopf::HopfStructure;
use hopfforge::report::VerdictMap;
use hopfforge::triangular::{
    analyze, build_f_t, default_pool, extract_datum, rmatrix_from_f, rmatrix_from_json, rmatrix_to_json,
    sample_choice, sample_sk, sk_parameter_count, SkSample,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hopfforge", version, about = "Exact constructions of minimal triangular pointed Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every sampled choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest group order searched or accepted.
    #[arg(long, global = true, default_value_t = 64)]
    max_order: usize,

    /// Largest algebra dimension built.
    #[arg(long, global = true, env = "HOPFFORGE_MAX_DIM", default_value_t = 64)]
    max_dim: usize,

    /// Largest dimension for triple-tensor (hexagon) checks.
    #[arg(long, global = true, default_value_t = 32)]
    hexagon_bound: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Output directory for `build` and `recognize`; report file otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Build H(D) from a datum file.
    Build {
        datum: PathBuf,
        /// Also sample T with `--seed` and write `choice.json` and `rmatrix.json`.
        #[arg(long)]
        with_r: bool,
    },
    /// Check the Hopf axioms, and with `--r` the triangular structure.
    Verify {
        structure: PathBuf,
        #[arg(long)]
        r: Option<PathBuf>,
    },
    /// List skew forms on a group, or Φ and S(k) for a datum.
    Classify {
        /// Cyclic factors, e.g. `2,2`.
        #[arg(long, value_delimiter = ',', conflicts_with = "datum", required_unless_present = "datum")]
        group: Option<Vec<u32>>,
        #[arg(long)]
        datum: Option<PathBuf>,
        /// Keep one form per Aut(G)-orbit.
        #[arg(long)]
        orbits: bool,
        /// Number of T instances to sample, with seeds `seed..seed+samples`.
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// Recover (D, T) from a structure file, an R-matrix and generators.
    Recognize {
        structure: PathBuf,
        r: PathBuf,
        generators: PathBuf,
    },
}

enum Failure {
    Verification(String),
    Input(String),
    Bound(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Bound(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Bound(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundExceeded { .. } => Failure::Bound(e.to_string()),
            Error::Hypothesis(_) | Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// A finished command: its machine form, its human form, and whether every
/// check passed.
struct Report {
    machine: Value,
    human: String,
    pass: bool,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, v.to_string()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn read_datum(path: &Path) -> Result<Datum, Failure> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_build(cli: &Cli, datum: &Path, with_r: bool) -> Outcome {
    let d = read_datum(datum)?;
    d.group().check_order(cli.max_order)?;
    let report = validate_datum_with_bound(&d, cli.max_order);
    if !report.is_valid() {
        let failed: Vec<String> = report
            .verdicts
            .failures()
            .map(|(k, v)| format!("{k}: {}", v.witness.clone().unwrap_or_default()))
            .collect();
        return Err(Failure::Input(format!("invalid datum: {}", failed.join("; "))));
    }
    let hd = build_hd(&d, cli.max_dim)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut files = vec![
        write_json(&dir, "structure.json", &hd.hopf().to_json())?,
        write_json(&dir, "labels.json", &hd.label_map_json())?,
        write_json(&dir, "generators.json", &hd.generators().to_json())?,
    ];
    let mut machine = json!({
        "command": "build",
        "dimension": hd.dim(),
        "feasible": report.feasible,
        "verdicts": report.verdicts,
    });
    if with_r {
        let t = sample_choice(&d, cli.seed, &default_pool(), cli.max_order)?
            .ok_or_else(|| Failure::Verification("no minimal triangular structure: S(k) is empty".into()))?;
        let r = rmatrix_from_f(&build_f_t(&hd, &t)?)?;
        files.push(write_json(&dir, "choice.json", &serde_json::to_value(&t).expect("choice serializes"))?);
        files.push(write_json(&dir, "rmatrix.json", &rmatrix_to_json(&r))?);
        machine["seed"] = json!(cli.seed);
    }
    let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    machine["files"] = json!(names);
    let human = format!(
        "built H(D) of dimension {} on {}\n{}wrote {}\n",
        hd.dim(),
        d.group(),
        report.verdicts,
        names.join(", ")
    );
    Ok(Report { machine, human, pass: true })
}

fn cmd_verify(cli: &Cli, structure: &Path, r: Option<&Path>) -> Outcome {
    let h = HopfStructure::from_json(&read_json(structure)?)?;
    let mut verdicts = VerdictMap::new();
    verdicts.extend_prefixed("axioms", &h.verify_axioms());
    verdicts.extend_prefixed("antipode", &h.verify_antipode_consequences());
    let mut machine = json!({"command": "verify", "dimension": h.dim()});
    if let Some(path) = r {
        let r = rmatrix_from_json(&read_json(path)?, h.dim())?;
        let a = analyze(&h, &r, cli.hexagon_bound)?;
        verdicts.extend_prefixed("r", &a.verdicts);
        verdicts.record(
            "r.minimality.full_rank",
            (!a.minimal).then(|| format!("rank {} < {}", a.rank, h.dim())),
        );
        machine["analysis"] = json!({
            "rank": a.rank,
            "minimal": a.minimal,
            "drinfeld_element": hopfforge::hd::element_to_json(&a.u),
            "s2_is_identity": a.s2_is_identity,
            "trace_s2": a.trace_s2,
        });
    }
    let pass = verdicts.all_pass();
    machine["verdicts"] = json!(verdicts);
    machine["all_pass"] = json!(pass);
    let human = format!(
        "{}-dimensional structure: {}\n{}",
        h.dim(),
        if pass { "all checks pass" } else { "verification FAILED" },
        verdicts
    );
    Ok(Report { machine, human, pass })
}

fn classify_group(cli: &Cli, factors: &[u32], orbits: bool) -> Outcome {
    let g = FiniteAbelianGroup::new(factors.to_vec())?;
    let mut forms = enumerate_forms(&g, cli.max_order)?;
    if orbits {
        forms = orbit_representatives(&forms, cli.max_order)?;
    }
    let mut human = format!("{g}: {} non-degenerate skew form(s)\n", forms.len());
    let mut listed = Vec::new();
    for f in &forms {
        let i_f = f.u_f_and_i_f()?.i_f;
        human.push_str(&format!(
            "  E = {:?}, N = {}, |I_F| = {}\n",
            f.exponent_matrix(),
            f.conductor(),
            i_f.len()
        ));
        listed.push(json!({"form": f, "i_f": i_f}));
    }
    let machine = json!({
        "command": "classify",
        "cyclic_factors": factors,
        "orbits": orbits,
        "count": forms.len(),
        "forms": listed,
    });
    Ok(Report { machine, human, pass: true })
}

fn classify_datum(cli: &Cli, path: &Path, samples: u64) -> Outcome {
    let d = read_datum(path)?;
    d.group().check_order(cli.max_order)?;
    let report = validate_datum_with_bound(&d, cli.max_order);
    if !report.is_valid() {
        return Err(Failure::Input(format!("invalid datum:\n{}", report.verdicts)));
    }
    let phis = enumerate_phi(d.form(), &d.support(), cli.max_order)?;
    let mut human = format!("|Φ| = {}\n", phis.len());
    let sk = match sample_sk(&d, cli.seed, &default_pool())? {
        SkSample::Empty { element } => {
            human.push_str(&format!(
                "S(k) is empty: n differs at {element} and its inverse\nno minimal triangular structure\n"
            ));
            json!({"status": "empty", "witness": element})
        }
        SkSample::Maps(_) => {
            let k = sk_parameter_count(&d).unwrap_or(0);
            human.push_str(&format!("S(k) is parametric with {k} free scalar(s)\n"));
            json!({"status": "parametric", "free_parameters": k})
        }
    };
    let mut instances = Vec::new();
    for seed in cli.seed..cli.seed.saturating_add(samples) {
        if let Some(t) = sample_choice(&d, seed, &default_pool(), cli.max_order)? {
            human.push_str(&format!("  seed {seed}: {}\n", serde_json::to_value(&t).expect("choice serializes")));
            instances.push(json!({"seed": seed, "choice": t}));
        }
    }
    let machine = json!({
        "command": "classify",
        "phi": phis,
        "phi_count": phis.len(),
        "sk": sk,
        "minimal_triangular": !phis.is_empty() && report.feasible,
        "samples": instances,
    });
    Ok(Report { machine, human, pass: true })
}

fn cmd_recognize(cli: &Cli, structure: &Path, r: &Path, generators: &Path) -> Outcome {
    let h = HopfStructure::from_json(&read_json(structure)?)?;
    let r = rmatrix_from_json(&read_json(r)?, h.dim())?;
    let gens = Generators::from_json(&read_json(generators)?)?;
    let e = extract_datum(&h, &r, &gens, cli.max_dim)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let datum_path = write_json(&dir, "datum.json", &serde_json::to_value(&e.datum).expect("datum serializes"))?;
    let choice_path = write_json(&dir, "choice.json", &serde_json::to_value(&e.choice).expect("choice serializes"))?;
    let pass = e.verdicts.all_pass();
    let machine = json!({
        "command": "recognize",
        "datum": e.datum,
        "choice": e.choice,
        "verdicts": e.verdicts,
        "all_pass": pass,
    });
    let human = format!(
        "recovered datum on {} with Σn = {}\n{}wrote {}, {}\n",
        e.datum.group(),
        e.datum.total_generators(),
        e.verdicts,
        datum_path.display(),
        choice_path.display()
    );
    Ok(Report { machine, human, pass })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Build { datum, with_r } => cmd_build(cli, datum, *with_r),
        Command::Verify { structure, r } => cmd_verify(cli, structure, r.as_deref()),
        Command::Classify { group: Some(g), orbits, .. } => classify_group(cli, g, *orbits),
        Command::Classify { datum: Some(d), samples, .. } => classify_datum(cli, d, *samples),
        Command::Classify { .. } => Err(Failure::Input("classify needs --group or --datum".into())),
        Command::Recognize { structure, r, generators } => cmd_recognize(cli, structure, r, generators),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report_to_file = matches!(cli.command, Command::Verify { .. } | Command::Classify { .. });
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Human => report.human,
                Format::Machine => format!("{}\n", report.machine),
            };
            match (&cli.out, report_to_file) {
                (Some(path), true) => {
                    if let Err(e) = fs::write(path, text.trim_end()) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                _ => print!("{text}"),
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(f) => {
            match cli.format {
                Format::Human => eprintln!("error: {}", f.message()),
                Format::Machine => println!("{}", json!({"error": f.message(), "exit_code": f.code()})),
            }
            ExitCode::from(f.code())
        }
    }
}
