//! Finite directed multigraphs stored as adjacency matrices.
//!
//! Vertex order is the declaration order and is preserved by every
//! operation that does not explicitly build a new vertex set; matrices,
//! reports and enumerations all follow it.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::IntMatrix;

/// Default vertex bound for [`Graph::hs_enumerate`].
pub const HS_ENUMERATE_BOUND: usize = 16;

/// A finite directed multigraph. Entry `(i, j)` of the adjacency matrix
/// counts the edges from vertex `i` to vertex `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<u64>,
}

/// A subset of the vertices of some graph, as sorted indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClassification {
    pub sinks: VertexSet,
    pub sources: VertexSet,
    pub regular: VertexSet,
    pub isolated: VertexSet,
}

/// Strongly connected components and the DAG between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Components ordered by their smallest vertex; members sorted.
    pub components: Vec<Vec<usize>>,
    /// Component index of every vertex.
    pub component_of: Vec<usize>,
    /// Distinct edges between different components.
    pub dag_edges: Vec<(usize, usize)>,
    /// The component's induced subgraph has at least one edge.
    pub cyclic: Vec<bool>,
    /// Cyclic, and every member has exactly one edge staying inside.
    pub simple_cycle: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSinksAndCycles {
    pub sinks: VertexSet,
    /// Indices into [`Condensation::components`].
    pub cycle_components: Vec<usize>,
}

impl MaximalSinksAndCycles {
    pub fn is_empty(&self) -> bool {
        self.sinks.is_empty() && self.cycle_components.is_empty()
    }
}

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn full(g: &Graph) -> Self {
        VertexSet((0..g.order()).collect())
    }

    pub fn from_indices(g: &Graph, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for i in indices {
            if i >= g.order() {
                return Err(Error::VertexOutOfRange(i));
            }
            set.insert(i);
        }
        Ok(VertexSet(set))
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| g.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexSet(idx.into_iter().collect()))
    }

    fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn names<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.iter().map(|i| g.name(i)).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidGraph("empty vertex name".into()));
    }
    if name.chars().any(char::is_whitespace) {
        return Err(Error::InvalidGraph(format!(
            "vertex name `{name}` contains whitespace"
        )));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonEdge {
    Weighted(String, String, u64),
    Single(String, String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraphIn {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<JsonEdge>,
}

#[derive(Serialize)]
struct JsonGraphOut<'a> {
    vertices: &'a [String],
    edges: Vec<(&'a str, &'a str, u64)>,
}

impl Graph {
    /// Builds a graph from vertex names and a square adjacency matrix.
    pub fn new(names: Vec<String>, adjacency: Vec<Vec<u64>>) -> Result<Self> {
        let h = names.len();
        if adjacency.len() != h || adjacency.iter().any(|r| r.len() != h) {
            return Err(Error::InvalidGraph(format!(
                "adjacency must be {h}x{h} to match the vertex list"
            )));
        }
        let adj = adjacency.into_iter().flatten().collect();
        Self::from_flat(names, adj)
    }

    /// Builds a graph from `(source, range, multiplicity)` index triples;
    /// repeated pairs accumulate.
    pub fn from_edges(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let h = names.len();
        let mut adj = vec![0u64; h * h];
        for (s, r, m) in edges {
            if s >= h || r >= h {
                return Err(Error::VertexOutOfRange(s.max(r)));
            }
            adj[s * h + r] = adj[s * h + r]
                .checked_add(m)
                .ok_or_else(|| Error::InvalidGraph("edge multiplicity overflow".into()))?;
        }
        Self::from_flat(names, adj)
    }

    fn from_flat(names: Vec<String>, adj: Vec<u64>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidGraph(
                "a graph needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            check_name(n)?;
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate vertex name `{n}`")));
            }
        }
        debug_assert_eq!(adj.len(), names.len() * names.len());
        Ok(Graph { names, adj })
    }

    /// Parses either the line-based text format or the JSON format,
    /// sniffing the first non-blank character.
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # comment
    /// vertices u v
    /// edge u u 2
    /// edge u v
    /// ```
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("vertices") => {
                    if names.is_some() {
                        return Err(Error::parse(line_no, "second `vertices` line"));
                    }
                    let list: Vec<String> = tokens.map(str::to_owned).collect();
                    if list.is_empty() {
                        return Err(Error::parse(line_no, "a graph needs at least one vertex"));
                    }
                    names = Some(list);
                }
                Some("edge") => {
                    let Some(ns) = names.as_ref() else {
                        return Err(Error::parse(line_no, "`edge` before `vertices`"));
                    };
                    let toks: Vec<&str> = tokens.collect();
                    if toks.len() < 2 || toks.len() > 3 {
                        return Err(Error::parse(line_no, "expected `edge <src> <dst> [mult]`"));
                    }
                    let find = |n: &str| {
                        ns.iter()
                            .position(|x| x == n)
                            .ok_or_else(|| Error::parse(line_no, format!("unknown vertex `{n}`")))
                    };
                    let s = find(toks[0])?;
                    let r = find(toks[1])?;
                    let m = match toks.get(2) {
                        None => 1,
                        Some(t) => match t.parse::<u64>() {
                            Ok(m) if m > 0 => m,
                            _ => {
                                return Err(Error::parse(
                                    line_no,
                                    format!("multiplicity `{t}` is not a positive integer"),
                                ))
                            }
                        },
                    };
                    edges.push((s, r, m));
                }
                Some(other) => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown directive `{other}`"),
                    ));
                }
                None => unreachable!(),
            }
        }
        let names = names.ok_or_else(|| Error::parse(0, "missing `vertices` line"))?;
        Self::from_edges(names, edges)
    }

    /// Parses `{"vertices": [...], "edges": [[src, dst, mult], ...]}`.
    pub fn parse_json(input: &str) -> Result<Self> {
        let raw: JsonGraphIn = serde_json::from_str(input)?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in raw.edges {
            let (s, r, m) = match e {
                JsonEdge::Weighted(s, r, m) => (s, r, m),
                JsonEdge::Single(s, r) => (s, r, 1),
            };
            if m == 0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {s}->{r} has multiplicity 0"
                )));
            }
            let find = |n: &str| {
                raw.vertices
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| Error::UnknownVertex(n.to_owned()))
            };
            edges.push((find(&s)?, find(&r)?, m));
        }
        Self::from_edges(raw.vertices, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("vertices");
        for n in &self.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for (s, r, m) in self.edges() {
            if m == 1 {
                let _ = writeln!(out, "edge {} {}", self.names[s], self.names[r]);
            } else {
                let _ = writeln!(out, "edge {} {} {m}", self.names[s], self.names[r]);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let out = JsonGraphOut {
            vertices: &self.names,
            edges: self
                .edges()
                .map(|(s, r, m)| (self.names[s].as_str(), self.names[r].as_str(), m))
                .collect(),
        };
        serde_json::to_string(&out).expect("graph serializes")
    }

    /// Graphviz rendering; every edge carries its multiplicity as label.
    pub fn to_dot(&self, graph_name: &str) -> String {
        fn quote(s: &str) -> String {
            format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
        }
        let mut out = format!("digraph {} {{\n", quote(graph_name));
        for n in &self.names {
            let _ = writeln!(out, "  {} [label={}];", quote(n), quote(n));
        }
        for (s, r, m) in self.edges() {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{m}\"];",
                quote(&self.names[s]),
                quote(&self.names[r])
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u64 {
        self.adj[from * self.order() + to]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        let h = self.order();
        &self.adj[i * h..(i + 1) * h]
    }

    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        (0..self.order()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let h = self.order();
        IntMatrix::from_fn(h, h, |i, j| self.multiplicity(i, j).into())
    }

    /// Nonzero entries as `(source, range, multiplicity)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let h = self.order();
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(move |(k, &m)| (k / h, k % h, m))
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().sum()
    }

    pub fn out_degree(&self, i: usize) -> u64 {
        self.row(i).iter().sum()
    }

    pub fn in_degree(&self, j: usize) -> u64 {
        (0..self.order()).map(|i| self.multiplicity(i, j)).sum()
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.row(i).iter().all(|&m| m == 0)
    }

    pub fn has_sink(&self) -> bool {
        (0..self.order()).any(|i| self.is_sink(i))
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(j, _)| j)
    }

    pub fn classify_vertices(&self) -> VertexClassification {
        let h = self.order();
        let sinks: VertexSet = (0..h).filter(|&i| self.is_sink(i)).collect();
        let sources: VertexSet = (0..h).filter(|&j| self.in_degree(j) == 0).collect();
        let regular = (0..h).filter(|i| !sinks.contains(*i)).collect();
        let isolated = sinks.iter().filter(|&i| sources.contains(i)).collect();
        VertexClassification {
            sinks,
            sources,
            regular,
            isolated,
        }
    }

    /// Whether a path (possibly of length zero) leads from `v` to `w`.
    pub fn reaches(&self, v: &str, w: &str) -> Result<bool> {
        Ok(self.reaches_index(self.index_of(v)?, self.index_of(w)?))
    }

    pub fn reaches_index(&self, v: usize, w: usize) -> bool {
        self.reachable_from(v)[w]
    }

    fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            for y in self.successors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Tarjan's algorithm, iterative.
    pub fn condensation(&self) -> Condensation {
        let h = self.order();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; h];
        let mut low = vec![0; h];
        let mut on_stack = vec![false; h];
        let mut stack = Vec::new();
        let mut raw_components: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        let succ: Vec<Vec<usize>> = (0..h).map(|i| self.successors(i).collect()).collect();

        for root in 0..h {
            if index[root] != UNSEEN {
                continue;
            }
            // (vertex, position in its successor list)
            let mut work = vec![(root, 0usize)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = work.last_mut() {
                if let Some(&w) = succ[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some(&(parent, _)) = work.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        raw_components.push(comp);
                    }
                }
            }
        }

        raw_components.sort_by_key(|c| c[0]);
        let mut component_of = vec![0; h];
        for (ci, comp) in raw_components.iter().enumerate() {
            for &v in comp {
                component_of[v] = ci;
            }
        }
        let mut dag: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut inner_out = vec![0u64; h];
        for (s, r, m) in self.edges() {
            let (cs, cr) = (component_of[s], component_of[r]);
            if cs == cr {
                inner_out[s] += m;
            } else {
                dag.insert((cs, cr));
            }
        }
        let cyclic: Vec<bool> = raw_components
            .iter()
            .map(|c| c.iter().any(|&v| inner_out[v] > 0))
            .collect();
        let simple_cycle = raw_components
            .iter()
            .zip(&cyclic)
            .map(|(c, &cyc)| cyc && c.iter().all(|&v| inner_out[v] == 1))
            .collect();
        Condensation {
            components: raw_components,
            component_of,
            dag_edges: dag.into_iter().collect(),
            cyclic,
            simple_cycle,
        }
    }

    /// Sinks reached by no cycle, and simple-cycle components reached by no
    /// other cyclic component. Every predecessor set of a finite graph is
    /// finite, so only maximality is checked.
    pub fn maximal_sinks_and_cycles(&self) -> MaximalSinksAndCycles {
        let cond = self.condensation();
        let k = cond.components.len();
        let mut dag_succ = vec![Vec::new(); k];
        for &(a, b) in &cond.dag_edges {
            dag_succ[a].push(b);
        }
        // reached_by_cycle[c]: some cyclic component other than c reaches c
        let mut reached_by_cycle = vec![false; k];
        for start in (0..k).filter(|&c| cond.cyclic[c]) {
            let mut seen = vec![false; k];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(c) = queue.pop_front() {
                for &d in &dag_succ[c] {
                    if !seen[d] {
                        seen[d] = true;
                        reached_by_cycle[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        let sinks = (0..self.order())
            .filter(|&v| self.is_sink(v) && !reached_by_cycle[cond.component_of[v]])
            .collect();
        let cycle_components = (0..k)
            .filter(|&c| cond.simple_cycle[c] && !reached_by_cycle[c])
            .collect();
        MaximalSinksAndCycles {
            sinks,
            cycle_components,
        }
    }

    /// The part of the covering graph on levels `lo..=hi`. Vertex `(v, a)`
    /// is named `v@a`; levels are laid out consecutively.
    pub fn covering_window(&self, lo: i64, hi: i64) -> Result<Graph> {
        if lo > hi {
            return Err(Error::Window { lo, hi });
        }
        let h = self.order();
        let levels = usize::try_from(hi - lo + 1)
            .map_err(|_| Error::OutOfRange("window too wide".into()))?;
        let names = (0..levels)
            .flat_map(|l| {
                let level = lo + l as i64;
                self.names.iter().map(move |n| format!("{n}@{level}"))
            })
            .collect();
        let edges = (0..levels.saturating_sub(1)).flat_map(|l| {
            self.edges()
                .map(move |(s, r, m)| (l * h + s, (l + 1) * h + r, m))
        });
        Graph::from_edges(names, edges)
    }

    /// Cartesian product; vertex `(u, v)` is named `u,v` and sits at index
    /// `u * |F| + v`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let (he, hf) = (self.order(), other.order());
        let names = self
            .names
            .iter()
            .flat_map(|u| other.names.iter().map(move |v| format!("{u},{v}")))
            .collect();
        let along_e = self
            .edges()
            .flat_map(|(s, r, m)| (0..hf).map(move |v| (s * hf + v, r * hf + v, m)));
        let along_f = other
            .edges()
            .flat_map(|(s, r, m)| (0..he).map(move |u| (u * hf + s, u * hf + r, m)));
        Graph::from_edges(names, along_e.chain(along_f)).expect("product of valid graphs is valid")
    }

    /// `(hereditary, saturated)` for the given vertex set.
    pub fn hs_check(&self, set: &VertexSet) -> (bool, bool) {
        let hereditary = self
            .edges()
            .all(|(s, r, _)| !set.contains(s) || set.contains(r));
        let saturated = (0..self.order()).all(|v| {
            self.is_sink(v) || set.contains(v) || self.successors(v).any(|w| !set.contains(w))
        });
        (hereditary, saturated)
    }

    /// All hereditary saturated subsets, ordered by size then
    /// lexicographically, for graphs up to [`HS_ENUMERATE_BOUND`] vertices.
    pub fn hs_enumerate(&self) -> Result<Vec<VertexSet>> {
        self.hs_enumerate_bounded(HS_ENUMERATE_BOUND)
    }

    pub fn hs_enumerate_bounded(&self, bound: usize) -> Result<Vec<VertexSet>> {
        let h = self.order();
        if h > bound || h >= 64 {
            return Err(Error::BoundExceeded(h, bound.min(63)));
        }
        let succ_mask: Vec<u64> = (0..h)
            .map(|v| self.successors(v).fold(0u64, |m, w| m | 1 << w))
            .collect();
        let mut found: Vec<VertexSet> = (0u64..1 << h)
            .filter(|&mask| {
                (0..h).all(|v| {
                    let inside = mask >> v & 1 == 1;
                    let succ = succ_mask[v];
                    if inside {
                        succ & !mask == 0
                    } else {
                        // saturation: a regular vertex outside must have an exit
                        succ == 0 || succ & !mask != 0
                    }
                })
            })
            .map(VertexSet::from_mask)
            .collect();
        found.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.0.iter().cmp(b.0.iter()))
        });
        Ok(found)
    }

    /// The quotient graph: drops the vertices of `set` and every edge whose
    /// range lies in `set`.
    pub fn quotient(&self, set: &VertexSet) -> Result<Graph> {
        if let Some(bad) = set.iter().find(|&i| i >= self.order()) {
            return Err(Error::VertexOutOfRange(bad));
        }
        match self.hs_check(set) {
            (false, _) => return Err(Error::NotHereditary),
            (true, false) => return Err(Error::NotSaturated),
            _ => {}
        }
        if set.len() == self.order() {
            return Err(Error::QuotientByAll);
        }
        let keep: Vec<usize> = (0..self.order()).filter(|&v| !set.contains(v)).collect();
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let adjacency = keep
            .iter()
            .map(|&s| keep.iter().map(|&r| self.multiplicity(s, r)).collect())
            .collect();
        Graph::new(names, adjacency)
    }
}
