//! The `popmatch` command line.
//!
//! Exit codes: 0 when the answer is found or the property holds, 1 when it
//! is not found or fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gale_shapley;
use crate::instance::{
    generate_random, parse_instance, parse_matching, serialize_instance, serialize_matching,
};
use crate::instance::{Edge, Instance, Matching};
use crate::level_graph;
use crate::min_cost;
use crate::oracles;
use crate::popular_edge::{self, Branch};
use crate::unstable_popular;
use crate::verify::{self, Certificate, Verdict};

#[derive(Parser, Debug)]
#[command(
    name = "popmatch",
    version,
    about = "Stable, popular and dominant matchings"
)]
pub struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel probes and oracles
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a stable or dominant matching
    Solve {
        #[arg(long, value_enum)]
        property: SolveProperty,
        #[arg(long, value_enum)]
        algo: Option<Algo>,
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Check a matching for stability, popularity or dominance
    Verify {
        #[arg(long, value_enum)]
        property: VerifyProperty,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        matching: PathBuf,
    },
    /// Find a popular matching containing an edge
    PopularEdge {
        #[arg(short, long)]
        input: PathBuf,
        /// The edge as `man,woman`
        #[arg(long)]
        edge: String,
    },
    /// Decide whether every popular matching is stable
    PopularVsStable {
        #[arg(short, long)]
        input: PathBuf,
        /// Probe edge pairs instead of single edges
        #[arg(long)]
        cubic: bool,
    },
    /// Cheapest dominant matching under exact edge costs
    MinCostDominant {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        costs: PathBuf,
    },
    /// Brute-force listing (small instances only)
    Enumerate {
        #[arg(long, value_enum)]
        what: What,
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Write a random instance
    Gen {
        #[arg(long)]
        men: usize,
        #[arg(long)]
        women: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveProperty {
    Stable,
    Dominant,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Gs,
    LevelGraph,
    TwoLevel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyProperty {
    Stable,
    Popular,
    Dominant,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum What {
    Matchings,
    Stable,
    Popular,
    Dominant,
    PopularEdges,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

type Pairs = Vec<[String; 2]>;

fn pairs(inst: &Instance, m: &Matching) -> Pairs {
    m.id_pairs(inst)
        .into_iter()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .collect()
}

fn edge_ids(inst: &Instance, (a, b): Edge) -> [String; 2] {
    [inst.man_id(a).to_string(), inst.woman_id(b).to_string()]
}

#[derive(Serialize)]
struct CertificateJson {
    kind: String,
    witness: Vec<String>,
}

impl CertificateJson {
    fn new(inst: &Instance, c: &Certificate) -> Self {
        CertificateJson {
            kind: c.kind.to_string(),
            witness: c.witness_ids(inst).into_iter().map(String::from).collect(),
        }
    }
}

struct Io<'a> {
    out: &'a mut Vec<u8>,
    json: bool,
}

impl Io<'_> {
    fn emit(&mut self, text: &str, value: impl Serialize) -> Result<()> {
        let r = if self.json {
            let s = serde_json::to_string(&value).expect("serialisable");
            writeln!(self.out, "{s}")
        } else {
            write!(self.out, "{text}")
        };
        r.map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?)
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Diagnostics go to `err`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let json = cli.json;
    let mut buf = Vec::new();
    let work = || {
        execute(
            cli.command,
            &mut Io {
                out: &mut buf,
                json,
            },
        )
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "popmatch: {e}");
            2
        }
    }
}

fn verdict_code(holds: bool) -> i32 {
    if holds {
        0
    } else {
        1
    }
}

fn execute(cmd: Command, io: &mut Io<'_>) -> Result<i32> {
    match cmd {
        Command::Solve {
            property,
            algo,
            input,
        } => {
            let inst = load(&input)?;
            let (m, algo_name) = match (property, algo) {
                (SolveProperty::Stable, None | Some(Algo::Gs)) => {
                    (gale_shapley::men_optimal(&inst), "gs")
                }
                (SolveProperty::Dominant, None | Some(Algo::LevelGraph)) => {
                    (level_graph::dominant_via_level_graph(&inst), "level-graph")
                }
                (SolveProperty::Dominant, Some(Algo::TwoLevel)) => {
                    (level_graph::dominant_two_level(&inst), "two-level")
                }
                (p, Some(a)) => {
                    return Err(Error::InvalidArgument(format!(
                        "--algo {} cannot compute {} matchings",
                        value_name(&a),
                        value_name(&p)
                    )));
                }
            };
            #[derive(Serialize)]
            struct Out<'a> {
                property: &'a str,
                algo: &'a str,
                size: usize,
                matching: Pairs,
            }
            io.emit(
                &serialize_matching(&inst, &m),
                Out {
                    property: &value_name(&property),
                    algo: algo_name,
                    size: m.len(),
                    matching: pairs(&inst, &m),
                },
            )?;
            Ok(0)
        }
        Command::Verify {
            property,
            input,
            matching,
        } => {
            let inst = load(&input)?;
            let m = parse_matching(&read(&matching)?, &inst)?;
            let v: Verdict = match property {
                VerifyProperty::Stable => gale_shapley::is_stable(&inst, &m),
                VerifyProperty::Popular => verify::is_popular(&inst, &m),
                VerifyProperty::Dominant => verify::is_dominant(&inst, &m),
            };
            #[derive(Serialize)]
            struct Out {
                property: VerifyProperty,
                holds: bool,
                certificate: Option<CertificateJson>,
            }
            let mut text = format!("{}: {}\n", value_name(&property), v.holds);
            if let Some(c) = &v.certificate {
                text.push_str(&format!("certificate: {}\n", c.describe(&inst)));
            }
            let cert = v
                .certificate
                .as_ref()
                .map(|c| CertificateJson::new(&inst, c));
            io.emit(
                &text,
                Out {
                    property,
                    holds: v.holds,
                    certificate: cert,
                },
            )?;
            Ok(verdict_code(v.holds))
        }
        Command::PopularEdge { input, edge } => {
            let inst = load(&input)?;
            let (u, v) = edge.split_once(',').ok_or_else(|| {
                Error::InvalidArgument(format!("--edge expects `man,woman`, got `{edge}`"))
            })?;
            let e = inst
                .edge_by_ids(u.trim(), v.trim())
                .ok_or_else(|| Error::NotAnEdge(format!("({u},{v})")))?;
            let found = popular_edge::popular_edge(&inst, e)?;
            #[derive(Serialize)]
            struct Out {
                edge: [String; 2],
                found: bool,
                branch: Option<&'static str>,
                matching: Option<Pairs>,
            }
            let label = inst.edge_label(e);
            match found {
                Some((m, branch)) => {
                    let b = match branch {
                        Branch::Stable => "stable",
                        Branch::Dominant => "dominant",
                    };
                    io.emit(
                        &serialize_matching(&inst, &m),
                        Out {
                            edge: edge_ids(&inst, e),
                            found: true,
                            branch: Some(b),
                            matching: Some(pairs(&inst, &m)),
                        },
                    )?;
                    Ok(0)
                }
                None => {
                    io.emit(
                        &format!("no popular matching contains {label}\n"),
                        Out {
                            edge: edge_ids(&inst, e),
                            found: false,
                            branch: None,
                            matching: None,
                        },
                    )?;
                    Ok(1)
                }
            }
        }
        Command::PopularVsStable { input, cubic } => {
            let inst = load(&input)?;
            let found = if cubic {
                unstable_popular::exists_unstable_popular_cubic(&inst)
            } else {
                unstable_popular::exists_unstable_popular(&inst)
            };
            #[derive(Serialize)]
            struct Out {
                all_popular_stable: bool,
                matching: Option<Pairs>,
                blocking_pair: Option<[String; 2]>,
            }
            match found {
                None => {
                    io.emit(
                        "all popular matchings are stable\n",
                        Out {
                            all_popular_stable: true,
                            matching: None,
                            blocking_pair: None,
                        },
                    )?;
                    Ok(0)
                }
                Some((m, e)) => {
                    let text = format!(
                        "unstable popular matching\n{}blocking pair: {} {}\n",
                        serialize_matching(&inst, &m),
                        inst.man_id(e.0),
                        inst.woman_id(e.1)
                    );
                    io.emit(
                        &text,
                        Out {
                            all_popular_stable: false,
                            matching: Some(pairs(&inst, &m)),
                            blocking_pair: Some(edge_ids(&inst, e)),
                        },
                    )?;
                    Ok(1)
                }
            }
        }
        Command::MinCostDominant { input, costs } => {
            let inst = load(&input)?;
            let c = min_cost::parse_costs(&read(&costs)?, &inst)?;
            let (m, cost) = min_cost::min_cost_dominant(&inst, &c)?;
            let (frac, dec) = min_cost::format_rational(&cost);
            #[derive(Serialize)]
            struct Out {
                matching: Pairs,
                cost: String,
                cost_decimal: String,
            }
            let text = format!("{}cost: {frac} ({dec})\n", serialize_matching(&inst, &m));
            io.emit(
                &text,
                Out {
                    matching: pairs(&inst, &m),
                    cost: frac,
                    cost_decimal: dec,
                },
            )?;
            Ok(0)
        }
        Command::Enumerate { what, input } => {
            let inst = load(&input)?;
            #[derive(Serialize)]
            struct Out {
                what: What,
                count: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                matchings: Option<Vec<Pairs>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                edges: Option<Vec<[String; 2]>>,
            }
            if what == What::PopularEdges {
                let edges = oracles::popular_edges(&inst)?;
                let text: String = edges
                    .iter()
                    .map(|&e| format!("{} {}\n", inst.man_id(e.0), inst.woman_id(e.1)))
                    .collect();
                let ids: Vec<[String; 2]> = edges.iter().map(|&e| edge_ids(&inst, e)).collect();
                io.emit(
                    &text,
                    Out {
                        what,
                        count: ids.len(),
                        matchings: None,
                        edges: Some(ids),
                    },
                )?;
                return Ok(0);
            }
            let fam = match what {
                What::Matchings => oracles::enumerate_matchings(&inst)?,
                What::Stable => oracles::stable_set(&inst)?,
                What::Popular => oracles::popular_set(&inst)?,
                What::Dominant => oracles::dominant_set(&inst)?,
                What::PopularEdges => unreachable!(),
            };
            let text: String = fam
                .iter()
                .map(|m| format!("{}\n", m.display(&inst)))
                .collect();
            let ms: Vec<Pairs> = fam.iter().map(|m| pairs(&inst, m)).collect();
            io.emit(
                &text,
                Out {
                    what,
                    count: ms.len(),
                    matchings: Some(ms),
                    edges: None,
                },
            )?;
            Ok(0)
        }
        Command::Gen {
            men,
            women,
            density,
            seed,
            output,
        } => {
            let inst = generate_random(men, women, density, seed)?;
            let text = serialize_instance(&inst);
            #[derive(Serialize)]
            struct Out {
                men: usize,
                women: usize,
                edges: usize,
                output: Option<String>,
            }
            let summary = Out {
                men,
                women,
                edges: inst.num_edges(),
                output: output.as_ref().map(|p| p.display().to_string()),
            };
            match &output {
                Some(p) => {
                    std::fs::write(p, &text).map_err(|e| {
                        Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))
                    })?;
                    let msg = format!("wrote {} edges to {}\n", inst.num_edges(), p.display());
                    io.emit(&msg, summary)?;
                }
                None if io.json => io.emit("", summary)?,
                None => io.emit(&text, summary)?,
            }
            Ok(0)
        }
    }
}
