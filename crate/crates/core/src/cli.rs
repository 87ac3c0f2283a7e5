//! The `lpa-ibn` command-line front end.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 3 when
//! well-formed input fails a precondition, 4 if an emitted certificate
//! does not verify.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::constructions::{
    cayley_graph, cyclic_cayley, family, hopf_graph, Family, Group, RamificationData,
};
use crate::deciders::{
    bounded_certificate_search, decide_gribn, decide_ibn, verify_certificate, Certificate,
    GrIbnReason, GrIbnVerdict, IbnVerdict,
};
use crate::error::Error;
use crate::graph::{Graph, VertexSet, HS_ENUMERATE_BOUND};
use crate::monoid::{self, TalentedElement};

#[derive(Debug, Parser)]
#[command(
    name = "lpa-ibn",
    version,
    about = "IBN and graded IBN for Leavitt path algebras of finite graphs"
)]
struct Cli {
    /// Output format. Reports default to JSON, constructed graphs to the
    /// graph text format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Suppress standard output; the exit code still reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: classification, IBN, graded IBN, hereditary saturated count.
    Analyze { graph: PathBuf },
    /// Decide IBN by the rank criterion.
    Ibn { graph: PathBuf },
    /// Decide graded IBN, with a certificate when it fails.
    Gribn {
        graph: PathBuf,
        /// Cross-check with the exhaustive bounded search.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 6)]
        max_exp: u32,
        #[arg(long, default_value_t = 8)]
        max_terms: u32,
    },
    /// Decide equality of two talented monoid elements.
    MonoidEq {
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Build a graph and print it.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// List hereditary saturated vertex sets.
    Hsets {
        graph: PathBuf,
        #[arg(long, default_value_t = HS_ENUMERATE_BOUND)]
        max_vertices: usize,
    },
    /// Print levels `from..=to` of the covering graph.
    Cover {
        graph: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        /// Emit Graphviz DOT instead of the graph format.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Cayley graph of a group for a generating set.
    Cayley {
        #[arg(long)]
        group: PathBuf,
        /// Comma-separated element names.
        #[arg(long)]
        gens: String,
    },
    /// The graph C_n^j.
    CyclicCayley {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
    },
    /// Hopf graph of a group for ramification data `name:count,...`.
    Hopf {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value = "")]
        ram: String,
    },
    /// Cartesian product of two graphs.
    Product { g1: PathBuf, g2: PathBuf },
    /// Quotient by a hereditary saturated set.
    Quotient {
        graph: PathBuf,
        /// Comma-separated vertex names.
        #[arg(long = "h", default_value = "")]
        h: String,
    },
    /// The n-line v1 -> ... -> vn.
    Line { n: usize },
    /// The m-cycle u1 -> ... -> um -> u1.
    Cycle { m: usize },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, io::Error),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(e) if e.is_format_error() => 2,
            Failure::Lib(_) => 3,
            Failure::Io(..) => 2,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Invariant(m) => format!("internal invariant violated: {m}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if !cli.quiet {
                let _ = out.write_all(text.as_bytes());
            }
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Outcome<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(path.to_path_buf(), e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_graph(path: &Path) -> Outcome<Graph> {
    Ok(Graph::parse(&read_file(path)?)?)
}

fn load_group(path: &Path) -> Outcome<Group> {
    Ok(Group::from_json(&read_file(path)?)?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serialises");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Outcome<String> {
    let text = cli.format == Some(Format::Text);
    match &cli.command {
        Command::Analyze { graph } => analyze(&load_graph(graph)?, text),
        Command::Ibn { graph } => {
            let v = decide_ibn(&load_graph(graph)?);
            Ok(if text { ibn_text(&v) } else { json(&v) })
        }
        Command::Gribn {
            graph,
            oracle,
            max_exp,
            max_terms,
        } => gribn(
            &load_graph(graph)?,
            oracle.then_some((*max_exp, *max_terms)),
            text,
        ),
        Command::MonoidEq { graph, left, right } => {
            let g = load_graph(graph)?;
            let a = TalentedElement::parse(left, &g)?;
            let b = TalentedElement::parse(right, &g)?;
            let equal = monoid::equal(&g, &a, &b)?;
            Ok(if text {
                let rel = if equal { "=" } else { "!=" };
                format!("{} {rel} {}\n", a.render(&g), b.render(&g))
            } else {
                json(&serde_json::json!({ "equal": equal }))
            })
        }
        Command::Construct { what } => {
            let g = construct(what)?;
            Ok(graph_output(&g, cli.format))
        }
        Command::Hsets {
            graph,
            max_vertices,
        } => {
            let g = load_graph(graph)?;
            let sets = g.hs_enumerate_bounded(*max_vertices)?;
            let named: Vec<Vec<&str>> = sets.iter().map(|s| s.names(&g)).collect();
            Ok(if text {
                named
                    .iter()
                    .map(|s| format!("{{{}}}\n", s.join(", ")))
                    .collect()
            } else {
                json(&serde_json::json!({ "count": named.len(), "sets": named }))
            })
        }
        Command::Cover {
            graph,
            from,
            to,
            dot,
        } => {
            let g = load_graph(graph)?.covering_window(*from, *to)?;
            Ok(if *dot {
                g.to_dot("cover")
            } else {
                graph_output(&g, cli.format)
            })
        }
    }
}

fn graph_output(g: &Graph, format: Option<Format>) -> String {
    match format {
        Some(Format::Json) => {
            let mut s = g.to_json();
            s.push('\n');
            s
        }
        _ => g.to_text(),
    }
}

fn construct(what: &Construct) -> Outcome<Graph> {
    Ok(match what {
        Construct::Cayley { group, gens } => {
            let grp = load_group(group)?;
            cayley_graph(&grp, &grp.parse_elements(gens)?)?
        }
        Construct::CyclicCayley { n, j } => cyclic_cayley(*n, *j)?,
        Construct::Hopf { group, ram } => {
            let grp = load_group(group)?;
            hopf_graph(&grp, &RamificationData::parse(&grp, ram)?)?
        }
        Construct::Product { g1, g2 } => load_graph(g1)?.cartesian_product(&load_graph(g2)?),
        Construct::Quotient { graph, h } => {
            let g = load_graph(graph)?;
            let set = VertexSet::from_names(&g, &split_vertex_list(&g, h)?)?;
            g.quotient(&set)?
        }
        Construct::Line { n } => family(Family::Line(*n))?,
        Construct::Cycle { m } => family(Family::Cycle(*m))?,
    })
}

/// Splits a comma-separated vertex list. Vertex names may themselves
/// contain commas (product vertices are `u,v`), so at each position the
/// longest run of pieces naming a vertex wins.
fn split_vertex_list(g: &Graph, list: &str) -> Outcome<Vec<String>> {
    let pieces: Vec<&str> = list.split(',').map(str::trim).collect();
    if pieces.iter().all(|p| p.is_empty()) {
        return Ok(Vec::new());
    }
    let mut names = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        let hit = (i + 1..=pieces.len())
            .rev()
            .map(|j| (j, pieces[i..j].join(",")))
            .find(|(_, name)| g.index_of(name).is_ok());
        match hit {
            Some((j, name)) => {
                names.push(name);
                i = j;
            }
            None => return Err(Error::UnknownVertex(pieces[i].to_string()).into()),
        }
    }
    Ok(names)
}

/// Nonnegative integer that falls back to a decimal string when it is not
/// exactly representable as an IEEE double.
struct Exact(u64);

const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 > MAX_SAFE_INTEGER {
            s.serialize_str(&self.0.to_string())
        } else {
            s.serialize_u64(self.0)
        }
    }
}

#[derive(Serialize)]
struct InputEcho<'a> {
    vertices: &'a [String],
    adjacency: Vec<Vec<Exact>>,
}

#[derive(Serialize)]
struct ClassificationEcho<'a> {
    sinks: Vec<&'a str>,
    sources: Vec<&'a str>,
    regular: Vec<&'a str>,
    isolated: Vec<&'a str>,
}

#[derive(Serialize)]
struct Timing {
    #[serde(rename = "elapsedMicros")]
    elapsed_micros: u128,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report<'a> {
    input: InputEcho<'a>,
    vertex_classification: ClassificationEcho<'a>,
    ibn: IbnVerdict,
    gribn: GrIbnVerdict,
    hereditary_saturated_count: Option<usize>,
    timing: Timing,
}

fn checked_gribn(g: &Graph) -> Outcome<GrIbnVerdict> {
    let v = decide_gribn(g);
    if let Some(c) = &v.certificate {
        if !verify_certificate(g, c)? {
            return Err(Failure::Invariant(format!(
                "certificate {c} does not verify"
            )));
        }
    }
    Ok(v)
}

fn analyze(g: &Graph, text: bool) -> Outcome<String> {
    let start = Instant::now();
    let ibn = decide_ibn(g);
    let gribn = checked_gribn(g)?;
    let hs_count = g.hs_enumerate().ok().map(|s| s.len());
    let cls = g.classify_vertices();
    let report = Report {
        input: InputEcho {
            vertices: g.names(),
            adjacency: g
                .adjacency()
                .into_iter()
                .map(|r| r.into_iter().map(Exact).collect())
                .collect(),
        },
        vertex_classification: ClassificationEcho {
            sinks: cls.sinks.names(g),
            sources: cls.sources.names(g),
            regular: cls.regular.names(g),
            isolated: cls.isolated.names(g),
        },
        ibn,
        gribn,
        hereditary_saturated_count: hs_count,
        timing: Timing {
            elapsed_micros: start.elapsed().as_micros(),
        },
    };
    if !text {
        return Ok(json(&report));
    }
    let mut s = String::new();
    let c = &report.vertex_classification;
    let _ = writeln!(s, "vertices: {}", g.names().join(" "));
    let _ = writeln!(s, "sinks: {}", list_or_none(&c.sinks));
    let _ = writeln!(s, "sources: {}", list_or_none(&c.sources));
    let _ = writeln!(s, "regular: {}", list_or_none(&c.regular));
    let _ = writeln!(s, "isolated: {}", list_or_none(&c.isolated));
    s.push_str(&ibn_text(&report.ibn));
    s.push_str(&gribn_text(&report.gribn));
    match hs_count {
        Some(n) => {
            let _ = writeln!(s, "hereditary saturated subsets: {n}");
        }
        None => {
            let _ = writeln!(s, "hereditary saturated subsets: not enumerated (more than {HS_ENUMERATE_BOUND} vertices)");
        }
    }
    Ok(s)
}

fn list_or_none(xs: &[&str]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.join(" ")
    }
}

fn ibn_text(v: &IbnVerdict) -> String {
    let mut s = if v.has_ibn {
        format!(
            "L_K(E) has IBN: rank(A^t - J) = {} < rank([A^t - J | b]) = {}\n",
            v.rank_left, v.rank_right
        )
    } else {
        format!(
            "L_K(E) does not have IBN: rank(A^t - J) = rank([A^t - J | b]) = {}\n",
            v.rank_right
        )
    };
    if v.shortcut.is_some() {
        s.push_str("  (E has a maximal sink or cycle)\n");
    }
    s
}

fn gribn_text(v: &GrIbnVerdict) -> String {
    let cert = v.certificate.as_ref();
    match v.reason {
        GrIbnReason::SinkPresent => "L_K(E) has gr-IBN (E has a sink)\n".into(),
        GrIbnReason::NoRelationExists => {
            "L_K(E) has gr-IBN (no relation 1^t(A^p1 + ... + A^pm) = 1^t(A^q1 + ... + A^qn) with m != n)\n".into()
        }
        GrIbnReason::ColumnSumUniform(c) => format!(
            "L_K(E) does not have gr-IBN (every column of A sums to {c}); certificate {}\n",
            cert.map(ToString::to_string).unwrap_or_default()
        ),
        GrIbnReason::SpanCertificate => format!(
            "L_K(E) does not have gr-IBN; certificate {}\n",
            cert.map(ToString::to_string).unwrap_or_default()
        ),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OracleReport {
    max_exp: u32,
    max_terms: u32,
    /// False when the graph has a sink and the search does not apply.
    ran: bool,
    certificate: Option<Certificate>,
    agrees: bool,
}

#[derive(Serialize)]
struct GrIbnWithOracle<'a> {
    #[serde(flatten)]
    verdict: &'a GrIbnVerdict,
    oracle: OracleReport,
}

fn gribn(g: &Graph, oracle: Option<(u32, u32)>, text: bool) -> Outcome<String> {
    let verdict = checked_gribn(g)?;
    let Some((max_exp, max_terms)) = oracle else {
        return Ok(if text {
            gribn_text(&verdict)
        } else {
            json(&verdict)
        });
    };
    let (ran, found) = if g.has_sink() {
        (false, None)
    } else {
        (true, bounded_certificate_search(g, max_exp, max_terms)?)
    };
    if let Some(c) = &found {
        if !verify_certificate(g, c)? {
            return Err(Failure::Invariant(format!(
                "search certificate {c} does not verify"
            )));
        }
    }
    // the search is bounded, so only a hit the exact test missed is a conflict
    let agrees = !(found.is_some() && verdict.has_gr_ibn);
    let report = OracleReport {
        max_exp,
        max_terms,
        ran,
        certificate: found,
        agrees,
    };
    let out = if text {
        let mut s = gribn_text(&verdict);
        let line = match (&report.certificate, ran) {
            (_, false) => "oracle: not applicable (E has a sink)".to_string(),
            (Some(c), _) => format!("oracle: bounded search found {c}"),
            (None, _) => {
                format!("oracle: no relation with exponents <= {max_exp} and <= {max_terms} terms")
            }
        };
        let _ = writeln!(s, "{line}");
        s
    } else {
        json(&GrIbnWithOracle {
            verdict: &verdict,
            oracle: report,
        })
    };
    if !agrees {
        return Err(Failure::Invariant(format!(
            "exact test and bounded search disagree\n{}",
            out.trim_end()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(names: &[&str], adj: &[&[u64]]) -> Graph {
        Graph::new(
            names.iter().map(|s| s.to_string()).collect(),
            adj.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn vertex_list_prefers_longest_name() {
        let g = graph(&["a", "b", "a,b"], &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(split_vertex_list(&g, "a,b").unwrap(), vec!["a,b"]);
        assert_eq!(split_vertex_list(&g, "b,a").unwrap(), vec!["b", "a"]);
        assert_eq!(split_vertex_list(&g, "").unwrap(), Vec::<String>::new());
        assert!(split_vertex_list(&g, "a,c").is_err());
    }

    #[test]
    fn exact_switches_to_strings() {
        let s =
            serde_json::to_string(&[Exact(MAX_SAFE_INTEGER), Exact(MAX_SAFE_INTEGER + 1)]).unwrap();
        assert_eq!(s, "[9007199254740991,\"9007199254740992\"]");
    }
}
