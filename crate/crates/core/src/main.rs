use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use toric_vortex::error::Error;
use toric_vortex::input::{
    int_strings, parse_mode, parse_rat_str, presentation_report, rat_string, rat_strings,
    render_linear_relation, render_quantum_relation, Problem, ProblemFile,
};
use toric_vortex::invariants::{
    invariant, rank1_genus_invariant, wallcross_check, ClassCombo, EvalOptions, Mode,
};
use toric_vortex::lattice::{Int, Rat};
use toric_vortex::rings::{
    batyrev_presentation, betti_numbers, classical_presentation, gw_invariant,
    relation_effective_data, verify_quantum_relation,
};
use toric_vortex::toric::{
    acts_freely, chamber_fingerprint, enumerate_walls, is_regular, lambda_tau_sublattice,
    minimal_chern_number, moment_polytope, WeightSystem,
};

/// Exact computation of genus-zero vortex invariants of toric quotients
/// and quantum cohomology presentations of monotone toric manifolds.
#[derive(Parser)]
#[command(name = "toric-vortex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry report: regularity, chamber, freeness, polytope, Chern data.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the genus-zero invariant; prints an exact rational.
    Invariant {
        file: PathBuf,
        /// Comma-separated lattice class, overrides the file.
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated exponent vector, overrides the file.
        #[arg(long)]
        ell: Option<String>,
        /// Inline class as JSON, e.g. '[["1/2",[3,0,0]],[2,[0,1,2]]]'.
        #[arg(long)]
        alpha: Option<String>,
        /// direct | wallcross | checked.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Rewriting-cache budget (entries).
        #[arg(long)]
        memo_cap: Option<usize>,
    },
    /// Verify the crossing identity at one wall of the system.
    Wallcross {
        file: PathBuf,
        /// Wall index as listed by `analyze`.
        #[arg(long)]
        wall: usize,
        /// Transverse direction, comma-separated rationals; defaults to a
        /// weight off the wall.
        #[arg(long)]
        tau1: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        ell: Option<String>,
        /// Inline class as JSON, e.g. '[["1/2",[3,0,0]],[2,[0,1,2]]]'.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Classical cohomology presentation and Betti numbers.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Quantum presentation at the monotone parameter.
    Quantum {
        file: PathBuf,
        /// Verify every quantum relation on this many random instances.
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Degree-two Gromov-Witten number of the monotone quotient.
    Gw {
        file: PathBuf,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        ell: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank-one closed form for arbitrary genus.
    Rank1 {
        /// Positive weights, comma separated.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        g: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::DimensionMismatch(_) => 2,
        Error::AlgorithmMismatch { .. } => 4,
        Error::DegeneratePath => 5,
        _ => 3,
    }
}

fn load(file: &PathBuf) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    ProblemFile::parse(&text)?.build()
}

fn parse_int_list(s: &str, expect: usize, what: &str) -> Result<Vec<Int>, Error> {
    let v: Result<Vec<Int>, _> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map(Int::from))
        .collect();
    let v = v.map_err(|_| Error::Parse(format!("bad {what} '{s}'")))?;
    if v.len() != expect {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {expect}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_u32_list(s: &str, expect: usize, what: &str) -> Result<Vec<u32>, Error> {
    let v: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let v = v.map_err(|_| Error::Parse(format!("bad {what} '{s}'")))?;
    if v.len() != expect {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {expect}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_rat_list(s: &str, expect: usize, what: &str) -> Result<Vec<Rat>, Error> {
    let v: Result<Vec<Rat>, _> = s.split(',').map(parse_rat_str).collect();
    let v = v.map_err(|_| Error::Parse(format!("bad {what} '{s}'")))?;
    if v.len() != expect {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {expect}",
            v.len()
        )));
    }
    Ok(v)
}

fn require_tau(p: &Problem) -> Result<Vec<Rat>, Error> {
    p.tau
        .clone()
        .ok_or_else(|| Error::Parse("problem file must provide tau".into()))
}

fn require_lambda(p: &Problem, flag: &Option<String>) -> Result<Vec<Int>, Error> {
    if let Some(s) = flag {
        return parse_int_list(s, p.ws.k(), "lambda");
    }
    p.lambda
        .clone()
        .ok_or_else(|| Error::Parse("lambda required (flag or file)".into()))
}

fn require_class(
    p: &Problem,
    ell_flag: &Option<String>,
    alpha_flag: &Option<String>,
) -> Result<ClassCombo, Error> {
    if let Some(s) = alpha_flag {
        type Raw = Vec<(toric_vortex::input::NumOrStr, Vec<u32>)>;
        let raw: Raw =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad alpha: {e}")))?;
        let mut terms = Vec::with_capacity(raw.len());
        for (c, ell) in &raw {
            if ell.len() != p.ws.n() {
                return Err(Error::Parse(format!(
                    "alpha exponent vector has {} entries, expected {}",
                    ell.len(),
                    p.ws.n()
                )));
            }
            terms.push((toric_vortex::input::parse_rat(c)?, ell.clone()));
        }
        return Ok(ClassCombo::new(terms));
    }
    if let Some(s) = ell_flag {
        return Ok(ClassCombo::monomial(parse_u32_list(s, p.ws.n(), "ell")?));
    }
    if let Some(alpha) = &p.alpha {
        return Ok(alpha.clone());
    }
    if let Some(ell) = &p.ell {
        return Ok(ClassCombo::monomial(ell.clone()));
    }
    Err(Error::Parse(
        "class required: --alpha, --ell, or ell/alpha in the file".into(),
    ))
}

#[derive(Serialize)]
struct WallInfo {
    index: usize,
    members: Vec<usize>,
    normal: Vec<String>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    k: usize,
    n: usize,
    proper_witness: Vec<String>,
    tau: Vec<String>,
    regular: bool,
    fingerprint: Option<Vec<Vec<usize>>>,
    free: Option<bool>,
    f_vector: Option<Vec<usize>>,
    betti: Option<Vec<String>>,
    euler_characteristic: Option<String>,
    monotone: bool,
    minimal_chern_number: String,
    class_lattice_basis: Option<Vec<Vec<String>>>,
    effective_generators: Option<Vec<Vec<String>>>,
    walls: Vec<WallInfo>,
}

fn analyze_report(ws: &WeightSystem, tau: &[Rat]) -> Result<AnalyzeReport, Error> {
    let regular = is_regular(ws, tau);
    let walls = enumerate_walls(ws)
        .iter()
        .enumerate()
        .map(|(i, w)| WallInfo {
            index: i,
            members: w.indices.iter().map(|x| x + 1).collect(),
            normal: int_strings(&w.normal),
        })
        .collect();
    let mut report = AnalyzeReport {
        k: ws.k(),
        n: ws.n(),
        proper_witness: int_strings(ws.witness()),
        tau: rat_strings(tau),
        regular,
        fingerprint: None,
        free: None,
        f_vector: None,
        betti: None,
        euler_characteristic: None,
        monotone: toric_vortex::rings::monotone_check(ws, tau),
        minimal_chern_number: minimal_chern_number(ws).to_string(),
        class_lattice_basis: None,
        effective_generators: None,
        walls,
    };
    if !regular {
        return Ok(report);
    }
    let fp = chamber_fingerprint(ws, tau)?;
    report.fingerprint = Some(
        fp.iter()
            .map(|s| s.iter().map(|x| x + 1).collect())
            .collect(),
    );
    let free = acts_freely(ws, tau)?;
    report.free = Some(free);
    if let Ok(p) = moment_polytope(ws, tau) {
        report.f_vector = Some(p.f_vector());
    }
    if free {
        if let Ok(b) = betti_numbers(ws, tau) {
            let euler: Int = b.iter().sum();
            report.betti = Some(b.iter().map(|x| x.to_string()).collect());
            report.euler_characteristic = Some(euler.to_string());
        }
        report.class_lattice_basis = Some(
            lambda_tau_sublattice(ws, tau)?
                .iter()
                .map(|v| int_strings(v))
                .collect(),
        );
    }
    let eff = toric_vortex::toric::effective_cone(ws, tau)?;
    report.effective_generators =
        Some(eff.eff_generators.iter().map(|v| int_strings(v)).collect());
    Ok(report)
}

fn print_analyze_text(r: &AnalyzeReport) {
    println!("torus rank k = {}, coordinates n = {}", r.k, r.n);
    println!("properness witness: ({})", r.proper_witness.join(", "));
    println!("tau = ({})", r.tau.join(", "));
    println!("regular: {}", r.regular);
    if let Some(fp) = &r.fingerprint {
        let sets: Vec<String> = fp
            .iter()
            .map(|s| {
                format!(
                    "{{{}}}",
                    s.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        println!("chamber fingerprint: {}", sets.join(" "));
    }
    if let Some(free) = r.free {
        println!("free action: {free}");
    }
    if let Some(f) = &r.f_vector {
        println!("f-vector (by dimension): {:?}", f);
    }
    if let Some(b) = &r.betti {
        println!("even Betti numbers: ({})", b.join(", "));
    }
    if let Some(e) = &r.euler_characteristic {
        println!("Euler characteristic: {e}");
    }
    println!("monotone (tau equals the weight sum): {}", r.monotone);
    println!("minimal Chern number: {}", r.minimal_chern_number);
    if let Some(basis) = &r.class_lattice_basis {
        let rows: Vec<String> = basis.iter().map(|v| format!("({})", v.join(","))).collect();
        println!("class lattice basis: {}", rows.join(" "));
    }
    if let Some(gens) = &r.effective_generators {
        let rows: Vec<String> = gens.iter().map(|v| format!("({})", v.join(","))).collect();
        println!("effective cone generators: {}", rows.join(" "));
    }
    for w in &r.walls {
        println!(
            "wall {}: members {{{}}} normal ({})",
            w.index,
            w.members
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            w.normal.join(",")
        );
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Analyze { file, json } => {
            let p = load(&file)?;
            let tau = require_tau(&p)?;
            let report = analyze_report(&p.ws, &tau)?;
            let regular = report.regular;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print_analyze_text(&report);
            }
            if !regular {
                // the chamber-dependent fields are undefined here
                return Err(Error::SingularParameter);
            }
            Ok(())
        }
        Command::Invariant {
            file,
            lambda,
            ell,
            alpha,
            mode,
            seed,
            memo_cap,
        } => {
            let p = load(&file)?;
            let tau = require_tau(&p)?;
            let lambda = require_lambda(&p, &lambda)?;
            let alpha = require_class(&p, &ell, &alpha)?;
            let mode = match mode {
                Some(s) => parse_mode(&s)?,
                None => p.mode.unwrap_or(Mode::Checked),
            };
            let opts = EvalOptions {
                seed: seed.unwrap_or(p.seed),
                memo_cap: memo_cap.unwrap_or(EvalOptions::default().memo_cap),
            };
            let value = invariant(&p.ws, &tau, &lambda, &alpha, mode, &opts)?;
            println!("{}", rat_string(&value));
            Ok(())
        }
        Command::Wallcross {
            file,
            wall,
            tau1,
            lambda,
            ell,
            alpha,
            seed,
            json,
        } => {
            let p = load(&file)?;
            let lambda = require_lambda(&p, &lambda)?;
            let alpha = require_class(&p, &ell, &alpha)?;
            let walls = enumerate_walls(&p.ws);
            let Some(wall_obj) = walls.get(wall) else {
                return Err(Error::Parse(format!(
                    "wall index {wall} out of range ({} walls)",
                    walls.len()
                )));
            };
            let tau1 = match tau1 {
                Some(s) => parse_rat_list(&s, p.ws.k(), "tau1")?,
                None => {
                    let mu = (0..p.ws.n())
                        .find(|nu| !wall_obj.indices.contains(nu))
                        .expect("weights span, some weight is off the wall");
                    p.ws.weight(mu)
                        .iter()
                        .map(|x| Rat::from_integer(x.clone()))
                        .collect()
                }
            };
            let opts = EvalOptions {
                seed: seed.unwrap_or(p.seed),
                ..EvalOptions::default()
            };
            let report = wallcross_check(&p.ws, wall_obj, &tau1, &lambda, &alpha, &opts)?;
            #[derive(Serialize)]
            struct WallcrossOut {
                wall: usize,
                tau0: Vec<String>,
                tau1: Vec<String>,
                epsilon: String,
                e1: Vec<String>,
                orientation_flipped: bool,
                value_plus: String,
                value_minus: String,
                value_reduced: String,
                pass: bool,
            }
            let out = WallcrossOut {
                wall,
                tau0: rat_strings(&report.tau0),
                tau1: rat_strings(&report.tau1),
                epsilon: rat_string(&report.epsilon),
                e1: int_strings(&report.e1),
                orientation_flipped: report.orientation_flipped,
                value_plus: rat_string(&report.value_plus),
                value_minus: rat_string(&report.value_minus),
                value_reduced: rat_string(&report.value_reduced),
                pass: report.pass,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "wall {}: tau0 = ({}), epsilon = {}, e1 = ({}){}",
                    wall,
                    out.tau0.join(", "),
                    out.epsilon,
                    out.e1.join(","),
                    if out.orientation_flipped {
                        " [direction flipped the stored normal]"
                    } else {
                        ""
                    }
                );
                println!(
                    "phi(tau0 + eps) = {}, phi(tau0 - eps) = {}, reduced = {}",
                    out.value_plus, out.value_minus, out.value_reduced
                );
                println!("identity: {}", if out.pass { "PASS" } else { "FAIL" });
            }
            if !report.pass {
                return Err(Error::AlgorithmMismatch {
                    direct: Box::new(&report.value_plus - &report.value_minus),
                    wallcross: Box::new(report.value_reduced),
                });
            }
            Ok(())
        }
        Command::Cohomology { file, json } => {
            let p = load(&file)?;
            let tau = require_tau(&p)?;
            let pres = classical_presentation(&p.ws, &tau)?;
            let betti = betti_numbers(&p.ws, &tau)?;
            #[derive(Serialize)]
            struct CohomologyOut {
                presentation: toric_vortex::input::PresentationReport,
                betti: Vec<String>,
                euler_characteristic: String,
            }
            let euler: Int = betti.iter().sum();
            let out = CohomologyOut {
                presentation: presentation_report(&pres),
                betti: betti.iter().map(|x| x.to_string()).collect(),
                euler_characteristic: euler.to_string(),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("generators: u1..u{}", pres.n);
                for eta in &pres.linear {
                    println!("linear: {}", render_linear_relation(eta));
                }
                for m in &pres.monomial {
                    let vars: Vec<String> = m.iter().map(|i| format!("u{}", i + 1)).collect();
                    println!("monomial: {} = 0", vars.join("*"));
                }
                println!("even Betti numbers: ({})", out.betti.join(", "));
                println!("Euler characteristic: {}", out.euler_characteristic);
            }
            Ok(())
        }
        Command::Quantum {
            file,
            verify,
            seed,
            json,
        } => {
            let p = load(&file)?;
            let pres = batyrev_presentation(&p.ws)?;
            let opts = EvalOptions {
                seed: seed.unwrap_or(p.seed),
                ..EvalOptions::default()
            };
            let mut verified: Vec<(usize, usize)> = Vec::new();
            let mut failures = 0usize;
            if let Some(trials) = verify {
                for rel in &pres.quantum {
                    let report = verify_quantum_relation(&p.ws, rel, trials, &opts)?;
                    failures += report.failures.len();
                    verified.push((report.passed, report.trials));
                }
            }
            #[derive(Serialize)]
            struct QuantumOut {
                presentation: toric_vortex::input::PresentationReport,
                effective_generators: Vec<Vec<String>>,
                verified: Option<Vec<String>>,
            }
            let eff = relation_effective_data(&p.ws)?;
            let out = QuantumOut {
                presentation: presentation_report(&pres),
                effective_generators: eff
                    .eff_generators
                    .iter()
                    .map(|v| int_strings(v))
                    .collect(),
                verified: if verify.is_some() {
                    Some(verified.iter().map(|(p, t)| format!("{p}/{t}")).collect())
                } else {
                    None
                },
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("generators: u1..u{}", pres.n);
                for eta in &pres.linear {
                    println!("linear: {}", render_linear_relation(eta));
                }
                for m in &pres.monomial {
                    let vars: Vec<String> = m.iter().map(|i| format!("u{}", i + 1)).collect();
                    println!("vanishing: {} = 0", vars.join("*"));
                }
                for rel in &pres.quantum {
                    println!("quantum: {}", render_quantum_relation(rel));
                }
                let gens: Vec<String> = eff
                    .eff_generators
                    .iter()
                    .map(|v| format!("({})", int_strings(v).join(",")))
                    .collect();
                println!("effective cone generators: {}", gens.join(" "));
                for (i, (pass, total)) in verified.iter().enumerate() {
                    println!("verified relation {}: {}/{}", i + 1, pass, total);
                }
            }
            if failures > 0 {
                return Err(Error::ConstructionFailure(format!(
                    "{failures} verification counterexamples"
                )));
            }
            Ok(())
        }
        Command::Gw {
            file,
            lambda,
            ell,
            seed,
        } => {
            let p = load(&file)?;
            let lambda = require_lambda(&p, &lambda)?;
            let ell = match &ell {
                Some(s) => parse_u32_list(s, p.ws.n(), "ell")?,
                None => p
                    .ell
                    .clone()
                    .ok_or_else(|| Error::Parse("ell required (flag or file)".into()))?,
            };
            let opts = EvalOptions {
                seed: seed.unwrap_or(p.seed),
                ..EvalOptions::default()
            };
            let value = gw_invariant(&p.ws, &lambda, &ell, &opts)?;
            println!("{}", rat_string(&value));
            Ok(())
        }
        Command::Rank1 { weights, d, g } => {
            let parsed: Result<Vec<u32>, _> =
                weights.split(',').map(|t| t.trim().parse::<u32>()).collect();
            let parsed = parsed.map_err(|_| Error::Parse(format!("bad weights '{weights}'")))?;
            let value = rank1_genus_invariant(&parsed, d, g)?;
            println!("{}", rat_string(&value));
            Ok(())
        }
    }
}
