//! `slater`: exact Slater winners and minimum feedback arc sets of
//! tournaments, plus the reduction chain that manufactures hard Slater
//! instances from graphs via CNF formulas and realizes them with seven
//! voters.
//!
//! Output is one `key: value` line per fact. Exit codes: 0 success,
//! 1 verification found a counterexample, 2 usage or file-format error,
//! 3 instance exceeds a solver cap.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use slater_core::formulas::{MaxModelInstance, PartitionedCnf};
use slater_core::gadget::{
    check_params, cnf_to_tournament, find_min_params, GadgetError, GadgetPlan, ReductionParams,
};
use slater_core::io;
use slater_core::pipeline::{
    graph_to_maxmodel, maxmodel_to_restricted, reindex_dvar_last, reindex_pcnf_dvar_last,
};
use slater_core::solver::{self, SolveError};
use slater_core::verify;
use slater_core::voters::build_seven_voters;

#[derive(Parser)]
#[command(
    name = "slater",
    version,
    about = "Slater winners, feedback arc sets, and the gadget pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Slater scores and winners of a tournament file.
    Slater {
        /// Tournament file.
        tournament: PathBuf,
        /// Report whether this candidate is a Slater winner.
        #[arg(long)]
        vertex: Option<u32>,
        /// Module partition file; enables the quotient solver.
        #[arg(long)]
        modules: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Run one stage of the reduction chain.
    Reduce {
        #[command(subcommand)]
        stage: Stage,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        suite: Suite,
        /// Trial count for the seeded suites.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest instance size for the seeded suites.
        #[arg(long)]
        max_n: Option<usize>,
        /// Run on this instance instead of the bundled suite.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Where counterexample files are written on failure.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum Stage {
    /// Graph file -> Max Model DIMACS (is some maximum independent set odd?).
    GraphToMaxmodel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Max Model DIMACS -> left/right-restricted DIMACS (`c lr` tags).
    Restrict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Max Model DIMACS -> gadget layout metadata.
    CnfToTournament {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        s1: Option<u128>,
        #[arg(long)]
        s2: Option<u128>,
        /// Search for the smallest feasible parameters instead.
        #[arg(long)]
        minimize_params: bool,
    },
    /// Restricted DIMACS -> seven-voter profile realizing the gadget.
    ToVoters {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        s1: Option<u128>,
        #[arg(long)]
        s2: Option<u128>,
        #[arg(long)]
        minimize_params: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Dp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Solver,
    Lemma1,
    Lemma2,
    Lemma4,
    Theorem1,
    Theorem2,
}

enum Failure {
    /// Exit 1: a verification suite found a counterexample.
    Property,
    /// Exit 2: bad usage, unreadable or malformed input.
    Usage(String),
    /// Exit 3: the instance exceeds a solver cap.
    Cap(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn from_solve(e: SolveError) -> Failure {
    match e {
        SolveError::CapExceeded { .. } => Failure::Cap(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn from_gadget(e: GadgetError) -> Failure {
    match e {
        GadgetError::TooLarge { .. } | GadgetError::WeightOverflow => Failure::Cap(e.to_string()),
        GadgetError::Solve(inner) => from_solve(inner),
        _ => Failure::Usage(e.to_string()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Slater {
            tournament,
            vertex,
            modules,
            method,
        } => cmd_slater(&tournament, vertex, modules.as_deref(), method),
        Command::Reduce { stage } => cmd_reduce(stage),
        Command::Verify {
            suite,
            trials,
            seed,
            max_n,
            instance,
            out_dir,
        } => cmd_verify(suite, trials, seed, max_n, instance.as_deref(), &out_dir),
    }
}

fn join_ids<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_slater(
    tournament: &Path,
    vertex: Option<u32>,
    modules: Option<&Path>,
    method: Method,
) -> Result<(), Failure> {
    let t = io::parse_tournament(&read(tournament)?).map_err(usage)?;
    let mp = match modules {
        None => None,
        Some(path) => Some(io::parse_modules(&read(path)?).map_err(usage)?),
    };
    if let Some(v) = vertex {
        if v as usize >= t.n() {
            return Err(Failure::Usage(format!(
                "vertex {v} out of range for {}",
                t.n()
            )));
        }
    }

    println!("n: {}", t.n());
    let (scores, min_fas, order, method_name) = match (method, &mp) {
        (Method::Brute, Some(_)) => {
            return Err(Failure::Usage(
                "--method brute does not apply to the quotient solver; use auto or dp".into(),
            ));
        }
        (Method::Brute, None) => {
            let g = slater_core::WeightedDigraph::from_tournament(&t);
            let opt = solver::min_fas_bruteforce(&g).map_err(from_solve)?;
            let mut scores = Vec::with_capacity(t.n());
            for v in 0..t.n() {
                scores.push(
                    solver::min_fas_bruteforce_forced(&g, v)
                        .map_err(from_solve)?
                        .value,
                );
            }
            (scores, opt.value, opt.order, "brute")
        }
        (Method::Auto | Method::Dp, _) => {
            let analysis = solver::slater_analyze(&t, mp.as_ref()).map_err(from_solve)?;
            let order = match &mp {
                None => {
                    solver::min_fas_dp(&slater_core::WeightedDigraph::from_tournament(&t), None)
                        .map_err(from_solve)?
                        .order
                }
                Some(mp) => {
                    // Report the optimal module-contiguous ordering expanded
                    // to vertices.
                    let q = slater_core::modules::quotient(&t, mp)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    let module_order = solver::min_fas_dp(&q.digraph, None)
                        .map_err(from_solve)?
                        .order;
                    let mut seq = Vec::with_capacity(t.n());
                    for &ci in module_order.as_slice() {
                        let class = mp.class(ci as usize);
                        let internal = t
                            .induced(class)
                            .transitive_order()
                            .expect("the analysis already required transitive classes");
                        seq.extend(internal.as_slice().iter().map(|&l| class[l as usize]));
                    }
                    slater_core::LinearOrder::new(seq, t.n()).expect("classes tile the vertices")
                }
            };
            let min_fas = analysis.min_fas;
            (analysis.scores, min_fas, order, "dp")
        }
    };
    println!("method: {method_name}");
    println!("minfas: {min_fas}");
    println!("scores: {}", join_ids(&scores));
    let winners: Vec<u32> = (0..t.n() as u32)
        .filter(|&v| scores[v as usize] == min_fas)
        .collect();
    println!("winners: {}", join_ids(&winners));
    println!("order: {}", join_ids(order.as_slice()));
    if let Some(v) = vertex {
        println!("vertex: {v}");
        println!("score: {}", scores[v as usize]);
        println!(
            "winner: {}",
            if scores[v as usize] == min_fas {
                "yes"
            } else {
                "no"
            }
        );
    }
    Ok(())
}

fn params_from_flags(
    n: usize,
    m: usize,
    s1: Option<u128>,
    s2: Option<u128>,
    minimize: bool,
) -> Result<ReductionParams, Failure> {
    match (s1, s2, minimize) {
        (None, None, true) => Ok(find_min_params(n, m)),
        (Some(s1), Some(s2), false) => {
            let params = ReductionParams { n, m, s1, s2 };
            let check = check_params(&params);
            if !check.ok {
                return Err(Failure::Usage(format!(
                    "parameters fail the size inequalities; slacks {:?}",
                    check.slack
                )));
            }
            Ok(params)
        }
        _ => Err(Failure::Usage(
            "provide either --s1 and --s2, or --minimize-params".into(),
        )),
    }
}

fn instance_from_dimacs(file: &io::DimacsFile) -> Result<MaxModelInstance, Failure> {
    let dvar = file
        .dvar
        .ok_or_else(|| Failure::Usage("input lacks a `c dvar` line".into()))?;
    MaxModelInstance::new(file.cnf.clone(), dvar).map_err(usage)
}

fn restricted_from_dimacs(file: &io::DimacsFile) -> Result<PartitionedCnf, Failure> {
    let inst = instance_from_dimacs(file)?;
    let sides = file
        .sides
        .clone()
        .ok_or_else(|| Failure::Usage("input lacks a `c lr` line".into()))?;
    PartitionedCnf::new(inst, sides).map_err(usage)
}

fn cmd_reduce(stage: Stage) -> Result<(), Failure> {
    match stage {
        Stage::GraphToMaxmodel { input, output } => {
            let g = io::parse_graph(&read(&input)?).map_err(usage)?;
            let enc = graph_to_maxmodel(&g).map_err(usage)?;
            let cnf = enc.instance.cnf();
            write(
                &output,
                &io::serialize_dimacs(cnf, Some(enc.instance.dvar()), None),
            )?;
            println!("vars: {}", cnf.num_vars());
            println!("clauses: {}", cnf.num_clauses());
            println!("dvar: {}", enc.instance.dvar());
            println!("output: {}", output.display());
        }
        Stage::Restrict { input, output } => {
            let file = io::parse_dimacs(&read(&input)?).map_err(usage)?;
            let inst = instance_from_dimacs(&file)?;
            let enc = maxmodel_to_restricted(&inst).map_err(usage)?;
            let out_inst = enc.pcnf.instance();
            write(
                &output,
                &io::serialize_dimacs(
                    out_inst.cnf(),
                    Some(out_inst.dvar()),
                    Some(enc.pcnf.sides()),
                ),
            )?;
            println!("vars: {}", out_inst.cnf().num_vars());
            println!("clauses: {}", out_inst.cnf().num_clauses());
            println!("dvar: {}", out_inst.dvar());
            println!("output: {}", output.display());
        }
        Stage::CnfToTournament {
            input,
            output,
            s1,
            s2,
            minimize_params,
        } => {
            let file = io::parse_dimacs(&read(&input)?).map_err(usage)?;
            let inst = instance_from_dimacs(&file)?;
            let reindexed = inst.dvar() != inst.cnf().num_vars();
            let (inst, _) = reindex_dvar_last(&inst);
            let params = params_from_flags(
                inst.cnf().num_vars(),
                inst.cnf().num_clauses(),
                s1,
                s2,
                minimize_params,
            )?;
            let plan = GadgetPlan::new(&inst, params).map_err(from_gadget)?;
            write(
                &output,
                &io::serialize_layout(&io::LayoutFile::of_plan(&plan)),
            )?;
            println!("reindexed: {}", if reindexed { "yes" } else { "no" });
            println!("modules: {}", plan.module_count());
            println!("vertices: {}", plan.total_vertices());
            println!("designated: {}", plan.designated());
            println!("s1: {}", params.s1);
            println!("s2: {}", params.s2);
            println!("output: {}", output.display());
        }
        Stage::ToVoters {
            input,
            output,
            s1,
            s2,
            minimize_params,
        } => {
            let file = io::parse_dimacs(&read(&input)?).map_err(usage)?;
            let pcnf = restricted_from_dimacs(&file)?;
            let reindexed = pcnf.instance().dvar() != pcnf.instance().cnf().num_vars();
            let (pcnf, _) = reindex_pcnf_dvar_last(&pcnf);
            let inst = pcnf.instance().clone();
            let params = params_from_flags(
                inst.cnf().num_vars(),
                inst.cnf().num_clauses(),
                s1,
                s2,
                minimize_params,
            )?;
            let layout = cnf_to_tournament(&inst, &params).map_err(from_gadget)?;
            let (profile, _) = build_seven_voters(&layout, &pcnf).map_err(usage)?;
            write(&output, &io::serialize_profile(&profile))?;
            println!("reindexed: {}", if reindexed { "yes" } else { "no" });
            println!("candidates: {}", profile.n());
            println!("voters: {}", profile.voters().len());
            println!("designated: {}", layout.designated());
            println!("output: {}", output.display());
        }
    }
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    trials: Option<usize>,
    seed: u64,
    max_n: Option<usize>,
    instance: Option<&Path>,
    out_dir: &Path,
) -> Result<(), Failure> {
    let report = match suite {
        Suite::Solver => {
            reject_instance(instance, "solver")?;
            verify::solver_suite(trials.unwrap_or(500), seed, max_n.unwrap_or(8).clamp(2, 8))
        }
        Suite::Lemma1 => {
            reject_instance(instance, "lemma1")?;
            verify::lemma1_suite(trials.unwrap_or(200), seed, max_n.unwrap_or(9).clamp(3, 10))
        }
        Suite::Lemma2 => match instance {
            None => verify::lemma2_suite(seed, trials.unwrap_or(20)),
            Some(path) => {
                let g = io::parse_graph(&read(path)?).map_err(usage)?;
                verify::lemma2_single(&g)
            }
        },
        Suite::Lemma4 => match instance {
            None => verify::lemma4_suite(trials.unwrap_or(50), seed),
            Some(path) => {
                let file = io::parse_dimacs(&read(path)?).map_err(usage)?;
                let inst = instance_from_dimacs(&file)?;
                verify::lemma4_single(&inst)
            }
        },
        Suite::Theorem1 => match instance {
            None => verify::theorem1_suite(None),
            Some(path) => {
                let file = io::parse_dimacs(&read(path)?).map_err(usage)?;
                let inst = instance_from_dimacs(&file)?;
                verify::theorem1_suite(Some(&inst))
            }
        },
        Suite::Theorem2 => match instance {
            None => verify::theorem2_suite(None),
            Some(path) => {
                let file = io::parse_dimacs(&read(path)?).map_err(usage)?;
                let pcnf = restricted_from_dimacs(&file)?;
                verify::theorem2_suite(Some(&pcnf))
            }
        },
    };

    println!("suite: {}", report.suite);
    let mut failed = false;
    for check in &report.checks {
        let verdict = if check.passed { "pass" } else { "FAIL" };
        println!("check {}: {verdict} ({})", check.name, check.detail);
        if !check.passed {
            failed = true;
            if let Some((name, content)) = &check.counterexample {
                let path = out_dir.join(name);
                write(&path, content)?;
                println!("counterexample: {}", path.display());
            }
        }
    }
    println!("result: {}", if failed { "FAIL" } else { "pass" });
    if failed {
        return Err(Failure::Property);
    }
    Ok(())
}

fn reject_instance(instance: Option<&Path>, suite: &str) -> Result<(), Failure> {
    if instance.is_some() {
        return Err(Failure::Usage(format!(
            "the {suite} suite does not take --instance"
        )));
    }
    Ok(())
}
