use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grafrepair::acsynth::{basic_increasing_rule, increasing_ac_at_layer, maintaining_ac, maintaining_ac_at_layer, union_increasing_ac};
use grafrepair::condition::{satisfies, Constraint};
use grafrepair::conflicts::{conflict_graph, conflict_graph_of_set, conflicts, topological_ordering};
use grafrepair::consistency::{classify_transformation, nv_vector, Notion};
use grafrepair::graph::{monomorphisms, to_dot, Graph, Morphism, TypeGraph};
use grafrepair::io::{self, Document, Kind, RuleSetDoc};
use grafrepair::repair::{construct_repairing_set, repair_one, repair_set, validate_for_set, RepairOptions, RepairingSet};
use grafrepair::rewrite::Rule;
use serde_json::json;

const SEARCH_DEPTH: usize = 4;

#[derive(Parser)]
#[command(name = "grafrepair", version, about = "Rule-based repair of typed graphs against nested graph constraints")]
struct Cli {
    /// Type graph used for files that do not embed one.
    #[arg(long, global = true)]
    types: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Typegraph,
    Graph,
    Rule,
    Constraint,
    ConstraintSet,
    RuleSet,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Typegraph => Kind::TypeGraph,
            KindArg::Graph => Kind::Graph,
            KindArg::Rule => Kind::Rule,
            KindArg::Constraint => Kind::Constraint,
            KindArg::ConstraintSet => Kind::ConstraintSet,
            KindArg::RuleSet => Kind::RuleSet,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AcKind {
    Main,
    Incr,
    Basic,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and print it in canonical form.
    Validate {
        kind: KindArg,
        file: PathBuf,
        /// Check a rule set as repairing set for these constraints.
        #[arg(short, long)]
        constraint: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List the injective matches of a pattern graph in a host graph.
    Match {
        #[arg(short, long)]
        pattern: PathBuf,
        #[arg(short, long)]
        graph: PathBuf,
    },
    /// Apply a rule at a given match or at the first applicable one.
    Apply {
        #[arg(short, long)]
        rule: PathBuf,
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        r#match: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check whether a graph satisfies a constraint, or satisfies it up to a layer.
    Check {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        constraint: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        layer: Option<i32>,
    },
    /// Largest satisfied layer.
    Kmax {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        constraint: PathBuf,
    },
    /// Number of violations per layer, or at one layer.
    Nv {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        constraint: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        layer: Option<i32>,
    },
    /// Consistency verdicts of one transformation.
    Classify {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        constraint: PathBuf,
        #[arg(short, long)]
        rule: PathBuf,
        #[arg(short, long)]
        r#match: Option<PathBuf>,
    },
    /// Equip a rule with a synthesized application condition.
    SynthAc {
        kind: AcKind,
        #[arg(short, long)]
        rule: PathBuf,
        #[arg(short, long)]
        constraint: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        layer: Option<i32>,
        /// Intermediate graph for the increasing condition.
        #[arg(short, long)]
        intermediate: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Conflicts within a constraint or between the constraints of a set.
    Conflicts {
        #[arg(short, long, conflicts_with = "set", required_unless_present = "set")]
        constraint: Option<PathBuf>,
        #[arg(short, long)]
        set: Option<PathBuf>,
        /// Rule set providing the repairing sequences; constructed sets are used otherwise.
        #[arg(short, long)]
        rules: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Repair a graph for one constraint or a set of constraints.
    Repair {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long, required_unless_present = "set")]
        constraint: Vec<PathBuf>,
        #[arg(short, long)]
        set: Option<PathBuf>,
        /// Rule set providing the repairing sequences; constructed sets are used otherwise.
        #[arg(short, long)]
        rules: Option<PathBuf>,
        /// Falls back to GRAFREPAIR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

enum Failure {
    Verdict(String),
    Usage(String),
}

impl From<grafrepair::error::Error> for Failure {
    fn from(e: grafrepair::error::Error) -> Self {
        match e {
            grafrepair::error::Error::Parse { .. } | grafrepair::error::Error::Io(_) => Failure::Usage(e.to_string()),
            e => Failure::Verdict(e.to_string()),
        }
    }
}

type Res = Result<bool, Failure>;

struct Ctx {
    types: Option<TypeGraph>,
}

impl Ctx {
    fn load(&self, path: &Path, kind: Kind) -> Result<(TypeGraph, Document), Failure> {
        io::load_file(path, kind, self.types.as_ref()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn graph(&self, path: &Path) -> Result<(TypeGraph, Graph), Failure> {
        match self.load(path, Kind::Graph)? {
            (tg, Document::Graph(g)) => Ok((tg, g)),
            _ => unreachable!(),
        }
    }

    fn constraint(&self, path: &Path) -> Result<Constraint, Failure> {
        match self.load(path, Kind::Constraint)? {
            (_, Document::Constraint(c)) => Ok(c),
            _ => unreachable!(),
        }
    }

    fn constraint_set(&self, path: &Path) -> Result<Vec<Constraint>, Failure> {
        match self.load(path, Kind::ConstraintSet)? {
            (_, Document::ConstraintSet(c)) => Ok(c),
            _ => unreachable!(),
        }
    }

    fn rule(&self, path: &Path) -> Result<Rule, Failure> {
        match self.load(path, Kind::Rule)? {
            (_, Document::Rule(r)) => Ok(r),
            _ => unreachable!(),
        }
    }

    fn rule_set(&self, path: &Path) -> Result<RuleSetDoc, Failure> {
        match self.load(path, Kind::RuleSet)? {
            (_, Document::RuleSet(r)) => Ok(r),
            _ => unreachable!(),
        }
    }

    fn morphism(&self, path: &Path) -> Result<Morphism, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))?;
        io::parse_morphism(&v, "").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn sets(&self, rules: Option<&Path>, cs: &[Constraint]) -> Result<Vec<RepairingSet>, Failure> {
        match rules {
            Some(p) => Ok(io::repairing_sets(&self.rule_set(p)?, cs, SEARCH_DEPTH)?),
            None => Ok(cs.iter().map(construct_repairing_set).collect::<Result<Vec<_>, _>>()?),
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_graph(g: &Graph, tg: &TypeGraph, format: Format) -> String {
    match format {
        Format::Json => io::save_document(&Document::Graph(g.clone()), tg),
        Format::Dot => to_dot(g, Some(tg), "G"),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn first_match(rule: &Rule, g: &Graph, given: Option<Morphism>) -> Result<Morphism, Failure> {
    match given {
        Some(m) if rule.is_applicable(g, &m) => Ok(m),
        Some(_) => Err(Failure::Verdict("rule is not applicable at the given match".into())),
        None => rule.applicable_matches(g).into_iter().next().ok_or_else(|| Failure::Verdict("rule has no applicable match".into())),
    }
}

fn seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("GRAFREPAIR_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("GRAFREPAIR_SEED is not an integer: `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Res {
    let types = match &cli.types {
        Some(p) => match io::load_file(p, Kind::TypeGraph, None) {
            Ok((tg, _)) => Some(tg),
            Err(e) => return Err(Failure::Usage(format!("{}: {e}", p.display()))),
        },
        None => None,
    };
    let ctx = Ctx { types };
    match cli.command {
        Command::Validate { kind, file, constraint, format } => {
            let (tg, doc) = ctx.load(&file, kind.into())?;
            if let (Document::Graph(g), Format::Dot) = (&doc, format) {
                print!("{}", to_dot(g, Some(&tg), "G"));
            } else {
                print!("{}", io::save_document(&doc, &tg));
            }
            if constraint.is_empty() {
                return Ok(true);
            }
            let Document::RuleSet(rs) = doc else {
                return Err(Failure::Usage("--constraint only applies to rule sets".into()));
            };
            let cs = constraint.iter().map(|p| ctx.constraint(p)).collect::<Result<Vec<_>, _>>()?;
            let sets = io::repairing_sets(&rs, &cs, SEARCH_DEPTH)?;
            let v = validate_for_set(&sets, &cs)?;
            for r in &v.reasons {
                eprintln!("{r}");
            }
            Ok(v.is_valid())
        }
        Command::Match { pattern, graph } => {
            let (_, p) = ctx.graph(&pattern)?;
            let (_, g) = ctx.graph(&graph)?;
            let ms = monomorphisms(&p, &g);
            let v: Vec<_> = ms.iter().map(io::morphism_value).collect();
            print!("{}", pretty(&json!(v)));
            Ok(!ms.is_empty())
        }
        Command::Apply { rule, graph, r#match, output, format } => {
            let r = ctx.rule(&rule)?;
            let (tg, g) = ctx.graph(&graph)?;
            let given = r#match.map(|p| ctx.morphism(&p)).transpose()?;
            let m = first_match(&r, &g, given)?;
            let t = r.apply(&g, &m)?;
            emit(&render_graph(&t.h, &tg, format), output.as_deref())?;
            Ok(true)
        }
        Command::Check { graph, constraint, layer } => {
            let (_, g) = ctx.graph(&graph)?;
            let c = ctx.constraint(&constraint)?;
            let ok = match layer {
                Some(k) if k < -1 => return Err(Failure::Usage(format!("layer {k} is below -1"))),
                Some(k) => c.satisfied_up_to(&g, k),
                None => satisfies(&g, &Morphism::new(), &c.to_condition()),
            };
            println!("{ok}");
            Ok(ok)
        }
        Command::Kmax { graph, constraint } => {
            let (_, g) = ctx.graph(&graph)?;
            let c = ctx.constraint(&constraint)?;
            println!("{}", c.kmax(&g));
            Ok(true)
        }
        Command::Nv { graph, constraint, layer } => {
            let (_, g) = ctx.graph(&graph)?;
            let c = ctx.constraint(&constraint)?;
            match layer {
                Some(j) => println!("{}", c.nv(&g, j)?),
                None => {
                    let v: Vec<String> = nv_vector(&c, &g).iter().map(|n| n.to_string()).collect();
                    print!("{}", pretty(&json!(v)));
                }
            }
            Ok(true)
        }
        Command::Classify { graph, constraint, rule, r#match } => {
            let (_, g) = ctx.graph(&graph)?;
            let c = ctx.constraint(&constraint)?;
            let r = ctx.rule(&rule)?;
            let given = r#match.map(|p| ctx.morphism(&p)).transpose()?;
            let m = first_match(&r, &g, given)?;
            let t = r.apply(&g, &m)?;
            let cl = classify_transformation(&t, &c);
            let verdicts: serde_json::Map<String, serde_json::Value> =
                Notion::ALL.iter().map(|n| (n.name().to_string(), json!(cl.get(*n)))).collect();
            print!("{}", pretty(&serde_json::Value::Object(verdicts)));
            Ok(true)
        }
        Command::SynthAc { kind, rule, constraint, layer, intermediate, output } => {
            let (tg, doc) = ctx.load(&rule, Kind::Rule)?;
            let Document::Rule(r) = doc else { unreachable!() };
            let c = ctx.constraint(&constraint)?;
            let guarded = match (kind, layer) {
                (AcKind::Main, None) => maintaining_ac(&r, &c),
                (AcKind::Main, Some(k)) => maintaining_ac_at_layer(&r, &c, k)?,
                (AcKind::Incr | AcKind::Basic, None) => return Err(Failure::Usage("--layer is required".into())),
                (AcKind::Incr, Some(k)) => match intermediate {
                    Some(p) => increasing_ac_at_layer(&r, &c, k, &ctx.graph(&p)?.1)?,
                    None => union_increasing_ac(&r, &c, k)?,
                },
                (AcKind::Basic, Some(k)) => basic_increasing_rule(&r, &c, k)?,
            };
            emit(&io::save_document(&Document::Rule(guarded), &tg), output.as_deref())?;
            Ok(true)
        }
        Command::Conflicts { constraint, set, rules, format } => {
            if let Some(p) = constraint {
                let c = ctx.constraint(&p)?;
                let g = conflict_graph(&c);
                let cycle = g.find_cycle();
                match format {
                    Format::Dot => print!("{}", g.to_dot("conflicts", |n| format!("C{n}"))),
                    Format::Json => {
                        let v = json!({
                            "conflicts": conflicts(&c).iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                            "edges": g.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                            "acyclic": cycle.is_none(),
                            "cycle": cycle,
                        });
                        print!("{}", pretty(&v));
                    }
                }
                return Ok(cycle.is_none());
            }
            let cs = ctx.constraint_set(set.as_deref().expect("clap requires one of the two"))?;
            let sets = ctx.sets(rules.as_deref(), &cs)?;
            let concurrent: Vec<_> = sets.iter().map(|s| s.concurrent_rules()).collect();
            let g = conflict_graph_of_set(&cs, &concurrent);
            let order = topological_ordering(&g);
            let cycle = g.find_cycle();
            match format {
                Format::Dot => print!("{}", g.to_dot("constraints", |n| format!("c{n}"))),
                Format::Json => {
                    let v = json!({
                        "edges": g.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                        "acyclic": cycle.is_none(),
                        "cycle": cycle,
                        "order": order.as_ref().ok(),
                    });
                    print!("{}", pretty(&v));
                }
            }
            if let Some(cyc) = &cycle {
                eprintln!("cycle: {}", cyc.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" -> "));
            }
            Ok(cycle.is_none())
        }
        Command::Repair { graph, constraint, set, rules, seed: seed_flag, max_iterations, trace, output, format } => {
            let (tg, g) = ctx.graph(&graph)?;
            let mut cs = constraint.iter().map(|p| ctx.constraint(p)).collect::<Result<Vec<_>, _>>()?;
            if let Some(p) = set {
                cs.extend(ctx.constraint_set(&p)?);
            }
            let sets = ctx.sets(rules.as_deref(), &cs)?;
            let opts = RepairOptions { seed: seed(seed_flag)?, max_iterations };
            let (h, tr) = if cs.len() == 1 { repair_one(&g, &cs[0], &sets[0], opts)? } else { repair_set(&g, &cs, &sets, opts)? };
            if let Some(p) = trace {
                std::fs::write(&p, tr.to_jsonl()).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            }
            emit(&render_graph(&h, &tg, format), output.as_deref())?;
            Ok(cs.iter().all(|c| c.satisfied_by(&h)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verdict(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
