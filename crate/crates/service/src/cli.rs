//! The `fairdoc` command line. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fairdoc::boolpoly::TermOrder;
use fairdoc::modelkg::{export_json, export_triples, import_json, DedupPolicy, EntityKind, EntityQuery, NewEntity};
use fairdoc::rulemine::{export_rules_json, mine_rules, Dataset, RuleSet};
use fairdoc::workflowdoc::{
    default_template, export_to_kg, load_session, render_wiki, save_session, AnswerType, AnswerValue,
    DocumentationSession,
};

use crate::config::ServiceConfig;
use crate::routes::DEFAULT_BASE_IRI;
use crate::state::{load_store, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "fairdoc", version, about = "Document research workflows and mine logical rules from binary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine logical rules from a binary CSV (first column `object_id`).
    Rulemine {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Degrevlex)]
        order: OrderArg,
        /// Also write the canonical rules JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Knowledge graph files.
    #[command(subcommand)]
    Kg(KgCommand),
    /// Documentation sessions stored as JSON files.
    #[command(subcommand)]
    Doc(DocCommand),
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Deglex,
    Degrevlex,
}

impl From<OrderArg> for TermOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => TermOrder::Lex,
            OrderArg::Deglex => TermOrder::DegLex,
            OrderArg::Degrevlex => TermOrder::DegRevLex,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Reuse,
    Strict,
    Force,
}

impl From<PolicyArg> for DedupPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Reuse => DedupPolicy::Reuse,
            PolicyArg::Strict => DedupPolicy::Strict,
            PolicyArg::Force => DedupPolicy::Force,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Triples,
}

#[derive(Debug, Subcommand)]
enum KgCommand {
    /// Check a graph file and copy it into the store.
    Import {
        file: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    /// Write the store as canonical JSON or N-Triples.
    Export {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long, default_value = DEFAULT_BASE_IRI)]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the integrity report; exit 1 when it has errors.
    Validate { file: PathBuf },
    /// List matching entities as `id<TAB>kind<TAB>label`.
    Find {
        file: PathBuf,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        label: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum DocCommand {
    /// Create an empty session file.
    New { session: PathBuf },
    /// Answer a question. The value is read according to the question type
    /// (comma-separated ids for lists, yes/no for flags) unless `--json`.
    Answer {
        session: PathBuf,
        question: String,
        value: String,
        /// Graph used to resolve entity ids.
        #[arg(long)]
        kg: Option<PathBuf>,
        /// Read the value as a tagged JSON answer.
        #[arg(long)]
        json: bool,
    },
    /// Stage a new entity inside the session; prints its staged id.
    Stage {
        session: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "")]
        description: String,
    },
    /// Stage a relation between staged or graph entities.
    Relate {
        session: PathBuf,
        src: String,
        relation: String,
        dst: String,
        #[arg(long)]
        kg: Option<PathBuf>,
    },
    /// Print the wiki page.
    Render {
        session: PathBuf,
        /// Render a draft session too.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the session into a graph store; prints the export report.
    Export {
        session: PathBuf,
        #[arg(long)]
        kg: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Reuse)]
        dedup: PolicyArg,
    },
}

type CliResult = Result<(), String>;

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> CliResult {
    write_atomic(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path) -> Result<fairdoc::modelkg::KnowledgeGraph, String> {
    import_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_session(path: &Path) -> Result<DocumentationSession, String> {
    load_session(&read(path)?, &default_template()).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> CliResult {
    out.write_all(bytes).map_err(|e| e.to_string())
}

pub fn rules_table(rs: &RuleSet) -> String {
    let mut s = String::new();
    let form_w = rs.rules.iter().map(|r| r.form.tag().as_str().len()).max().unwrap_or(4).max(4);
    s.push_str(&format!("{:>4}  {:<form_w$}  {:>7}  rule\n", "#", "form", "support"));
    for (i, r) in rs.rules.iter().enumerate() {
        s.push_str(&format!("{:>4}  {:<form_w$}  {:>7}  {}\n", i + 1, r.form.tag().as_str(), r.support, r.text));
    }
    s.push_str(&format!(
        "{} rules from {} objects ({} distinct) over {} properties, order {}\n",
        rs.rules.len(),
        rs.row_count,
        rs.distinct_point_count,
        rs.context.len(),
        rs.order.name()
    ));
    s
}

fn answer_value(t: &AnswerType, text: &str) -> Result<AnswerValue, String> {
    Ok(match t {
        AnswerType::FreeText => AnswerValue::Text(text.to_string()),
        AnswerType::ControlledTerm { .. } => AnswerValue::Term(text.to_string()),
        AnswerType::EntityRef { .. } => AnswerValue::Ref(text.trim().to_string()),
        AnswerType::EntityRefList { .. } => AnswerValue::RefList(
            text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect(),
        ),
        AnswerType::BooleanFlag => match text.trim().to_ascii_lowercase().as_str() {
            "yes" | "true" | "1" => AnswerValue::Flag(true),
            "no" | "false" | "0" => AnswerValue::Flag(false),
            other => return Err(format!("`{other}` is not yes or no")),
        },
        AnswerType::DoiString => AnswerValue::Doi(text.to_string()),
    })
}

fn run_kg(cmd: KgCommand, out: &mut dyn Write) -> CliResult {
    match cmd {
        KgCommand::Import { file, store } => {
            let kg = read_graph(&file)?;
            let report = kg.validate();
            if report.has_errors() {
                return Err(format!("{} has integrity errors: {:?}", file.display(), report.errors));
            }
            write(&store, &export_json(&kg))?;
            emit(out, format!("imported {} entities and {} relations\n", kg.len(), kg.relation_count()).as_bytes())
        }
        KgCommand::Export { store, format, base, out: dest } => {
            let kg = load_store(&store)?;
            let bytes = match format {
                FormatArg::Json => export_json(&kg),
                FormatArg::Triples => export_triples(&kg, &base).map_err(|e| e.to_string())?,
            };
            match dest {
                Some(p) => write(&p, &bytes),
                None => emit(out, &bytes),
            }
        }
        KgCommand::Validate { file } => {
            let report = read_graph(&file)?.validate();
            let mut text = serde_json::to_vec_pretty(&report).expect("report serializes");
            text.push(b'\n');
            emit(out, &text)?;
            if report.has_errors() {
                return Err(format!("{} integrity errors", report.errors.len()));
            }
            Ok(())
        }
        KgCommand::Find { file, kind, label } => {
            let kg = read_graph(&file)?;
            let kind = kind.map(|k| k.parse::<EntityKind>()).transpose().map_err(|e| e.to_string())?;
            let q = EntityQuery { kind, label, external_id: None };
            let mut s = String::new();
            for e in kg.find_entities(&q) {
                s.push_str(&format!("{}\t{}\t{}\n", e.id, e.kind, e.label));
            }
            emit(out, s.as_bytes())
        }
    }
}

fn run_doc(cmd: DocCommand, out: &mut dyn Write) -> CliResult {
    let t = default_template();
    match cmd {
        DocCommand::New { session } => {
            if session.exists() {
                return Err(format!("{} already exists", session.display()));
            }
            let s = DocumentationSession::new(&t);
            write(&session, &save_session(&s))?;
            emit(out, format!("{}\n", s.id()).as_bytes())
        }
        DocCommand::Answer { session, question, value, kg, json } => {
            let mut s = read_session(&session)?;
            let kg = match kg {
                Some(p) => load_store(&p)?,
                None => Default::default(),
            };
            let q = t.question(&question).ok_or_else(|| format!("unknown question `{question}`"))?;
            let v = if json {
                serde_json::from_str(&value).map_err(|e| format!("answer JSON: {e}"))?
            } else {
                answer_value(&q.answer_type, &value)?
            };
            s.set_answer(&t, &kg, &question, v).map_err(|e| e.to_string())?;
            write(&session, &save_session(&s))?;
            let missing = s.completeness(&t);
            emit(out, format!("{} mandatory questions open\n", missing.len()).as_bytes())
        }
        DocCommand::Stage { session, kind, label, description } => {
            let mut s = read_session(&session)?;
            let kind: EntityKind = kind.parse().map_err(|e: fairdoc::modelkg::KgError| e.to_string())?;
            let id = s
                .stage_entity(NewEntity::new(kind, label).description(description))
                .map_err(|e| e.to_string())?;
            write(&session, &save_session(&s))?;
            emit(out, format!("{id}\n").as_bytes())
        }
        DocCommand::Relate { session, src, relation, dst, kg } => {
            let mut s = read_session(&session)?;
            let kg = match kg {
                Some(p) => load_store(&p)?,
                None => Default::default(),
            };
            let rel = relation.parse().map_err(|e: fairdoc::modelkg::KgError| e.to_string())?;
            let added = s.stage_relation(&kg, &src, rel, &dst).map_err(|e| e.to_string())?;
            write(&session, &save_session(&s))?;
            emit(out, if added { b"added\n" } else { b"already staged\n" })
        }
        DocCommand::Render { session, force, out: dest } => {
            let s = read_session(&session)?;
            let page = render_wiki(&t, &s, force).map_err(|e| e.to_string())?;
            match dest {
                Some(p) => write(&p, page.markdown.as_bytes()),
                None => emit(out, page.markdown.as_bytes()),
            }
        }
        DocCommand::Export { session, kg, dedup } => {
            let mut s = read_session(&session)?;
            let mut graph = load_store(&kg)?;
            let report = export_to_kg(&t, &mut s, &mut graph, dedup.into()).map_err(|e| e.to_string())?;
            write(&kg, &export_json(&graph))?;
            write(&session, &save_session(&s))?;
            let mut text = serde_json::to_vec_pretty(&report).expect("report serializes");
            text.push(b'\n');
            emit(out, &text)
        }
    }
}

fn run_serve(config: Option<PathBuf>) -> CliResult {
    let cfg = match config {
        Some(p) => ServiceConfig::load(&p),
        None => Ok(ServiceConfig::default()),
    }
    .and_then(ServiceConfig::from_process_env)
    .map_err(|e| e.to_string())?;
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .try_init();
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(crate::serve(cfg)).map_err(|e| e.to_string())
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Rulemine { csv, order, json } => {
            let ds = Dataset::load_csv(&read(&csv)?).map_err(|e| format!("{}: {e}", csv.display()))?;
            let rs = mine_rules(&ds, order.into()).map_err(|e| e.to_string())?;
            if let Some(p) = json {
                write(&p, &export_rules_json(&rs))?;
            }
            emit(out, rules_table(&rs).as_bytes())
        }
        Command::Kg(cmd) => run_kg(cmd, out),
        Command::Doc(cmd) => run_doc(cmd, out),
        Command::Serve { config } => run_serve(config),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

pub fn main() -> i32 {
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let code = run_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    code
}
