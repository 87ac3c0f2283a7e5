//! Graph families built from finite groups, plus lines and cycles.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, GroupAxiom, Result};
use crate::graph::Graph;

pub const MAX_GROUP_ORDER: usize = 64;

/// A finite group given by its Cayley table, `table[i][j] = i·j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
}

fn violation(axiom: GroupAxiom, detail: impl Into<String>) -> Error {
    Error::InvalidGroup {
        axiom,
        detail: detail.into(),
    }
}

/// Validates a Cayley table. Checks run in the order shape, Latin square,
/// identity, inverses, associativity, and the first failure is reported.
pub fn group_from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Group> {
    use GroupAxiom::*;
    let n = names.len();
    if n == 0 || n > MAX_GROUP_ORDER {
        return Err(violation(
            Shape,
            format!("order {n} outside 1..={MAX_GROUP_ORDER}"),
        ));
    }
    let mut seen = HashSet::new();
    for name in &names {
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',') {
            return Err(violation(Shape, format!("bad element name `{name}`")));
        }
        if !seen.insert(name.as_str()) {
            return Err(violation(Shape, format!("duplicate element name `{name}`")));
        }
    }
    if table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(violation(Shape, format!("table must be {n}x{n}")));
    }
    if let Some(&x) = table.iter().flatten().find(|&&x| x >= n) {
        return Err(violation(
            Shape,
            format!("entry {x} is not an element index"),
        ));
    }

    for i in 0..n {
        let row: BTreeSet<usize> = table[i].iter().copied().collect();
        if row.len() != n {
            return Err(violation(
                LatinSquare,
                format!("row {} repeats an entry", names[i]),
            ));
        }
        let col: BTreeSet<usize> = (0..n).map(|r| table[r][i]).collect();
        if col.len() != n {
            return Err(violation(
                LatinSquare,
                format!("column {} repeats an entry", names[i]),
            ));
        }
    }

    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| violation(Identity, "no two-sided identity"))?;

    let mut inverse = Vec::with_capacity(n);
    for x in 0..n {
        let y = (0..n)
            .find(|&y| table[x][y] == identity && table[y][x] == identity)
            .ok_or_else(|| violation(Inverse, format!("{} has no two-sided inverse", names[x])))?;
        inverse.push(y);
    }

    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for c in 0..n {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(violation(
                        Associativity,
                        format!(
                            "({}{}){} differs from {}({}{})",
                            names[a], names[b], names[c], names[a], names[b], names[c]
                        ),
                    ));
                }
            }
        }
    }

    Ok(Group {
        names,
        table,
        identity,
        inverse,
    })
}

impl Group {
    pub fn from_json(input: &str) -> Result<Self> {
        let raw: GroupJson = serde_json::from_str(input)?;
        group_from_table(raw.elements, raw.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GroupJson {
            elements: self.names.clone(),
            table: self.table.clone(),
        })
        .expect("group serialises")
    }

    /// The integers mod `n` under addition, elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        group_from_table(names, table)
    }

    /// The symmetric group on `1..=n` for `n <= 4`, elements named in cycle
    /// notation (`id`, `(12)`, `(123)`, ...) and ordered by the number of
    /// points moved, then by name. The product `στ` applies `τ` first.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::OutOfRange(format!(
                "symmetric degree {n} outside 1..=4"
            )));
        }
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        let moved = |p: &Vec<usize>| p.iter().enumerate().filter(|(i, x)| i != *x).count();
        perms.sort_by_cached_key(|p| (moved(p), cycle_name(p)));
        let index: BTreeMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&t.iter().map(|&x| s[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        group_from_table(perms.iter().map(|p| cycle_name(p)).collect(), table)
    }

    /// `a × b` with componentwise product, elements named `x.y`.
    pub fn direct_product(a: &Group, b: &Group) -> Result<Self> {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb)
            .map(|i| format!("{}.{}", a.names[i / nb], b.names[i % nb]))
            .collect();
        let table = (0..na * nb)
            .map(|i| {
                (0..na * nb)
                    .map(|j| a.table[i / nb][j / nb] * nb + b.table[i % nb][j % nb])
                    .collect()
            })
            .collect();
        group_from_table(names, table)
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

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Parses a comma-separated list of element names.
    pub fn parse_elements(&self, list: &str) -> Result<Vec<usize>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.index_of(s))
            .collect()
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, x), self.inverse[g]))
                .collect();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// The subgroup generated by `gens`, as a sorted index list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

/// The Cayley graph: a vertex per element and an edge `g -> g·s` for every
/// `s` in `gens`. Vertices carry the element names. Repeated generators are
/// ignored; the identity is allowed and yields loops.
pub fn cayley_graph(group: &Group, gens: &[usize]) -> Result<Graph> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(&s) = gens.iter().find(|&&s| s >= group.order()) {
        return Err(Error::OutOfRange(format!("element index {s}")));
    }
    let gens: BTreeSet<usize> = gens.iter().copied().collect();
    let gens: Vec<usize> = gens.into_iter().collect();
    if group.generated_subgroup(&gens).len() != group.order() {
        return Err(Error::NotGenerating);
    }
    let edges = (0..group.order()).flat_map(|g| gens.iter().map(move |&s| (g, group.mul(g, s), 1)));
    Graph::from_edges(group.names.clone(), edges)
}

/// `C_n^j`: vertices `v1..vn`, and from each `v_i` one edge to `v_{i+1}`
/// and one to `v_{i+j}`, indices mod `n`.
pub fn cyclic_cayley(n: usize, j: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n}, need n >= 3")));
    }
    if j >= n {
        return Err(Error::OutOfRange(format!("j = {j}, need 0 <= j < {n}")));
    }
    let edges = (0..n).flat_map(|i| [(i, (i + 1) % n, 1), (i, (i + j) % n, 1)]);
    Graph::from_edges(numbered("v", n), edges)
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Multiplicity `r_C` attached to each conjugacy class, addressed by the
/// class's position in [`Group::conjugacy_classes`]. Missing classes are 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RamificationData {
    counts: BTreeMap<usize, u64>,
}

impl RamificationData {
    pub fn new(counts: impl IntoIterator<Item = (usize, u64)>) -> Self {
        RamificationData {
            counts: counts.into_iter().filter(|&(_, k)| k > 0).collect(),
        }
    }

    pub fn get(&self, class: usize) -> u64 {
        self.counts.get(&class).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Parses `name:count,...`, where `name` is any member of the class.
    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        let classes = group.conjugacy_classes();
        let class_of = |x: usize| {
            classes
                .iter()
                .position(|c| c.contains(&x))
                .expect("x is classified")
        };
        let mut counts = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, k) = item.rsplit_once(':').ok_or_else(|| {
                Error::Ramification(format!("expected `name:count`, got `{item}`"))
            })?;
            let k: u64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Ramification(format!("bad count in `{item}`")))?;
            let c = class_of(group.index_of(name.trim())?);
            if counts.insert(c, k).is_some() {
                return Err(Error::Ramification(format!(
                    "class of {} given twice",
                    group.name(classes[c][0])
                )));
            }
        }
        Ok(Self::new(counts))
    }

    /// `rep:count` for every class with a nonzero count, comma-separated.
    pub fn render(&self, group: &Group) -> String {
        let classes = group.conjugacy_classes();
        self.counts
            .iter()
            .map(|(&c, k)| format!("{}:{k}", group.name(classes[c][0])))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `Σ r_C |C|`, the common in- and out-degree of the Hopf graph.
    pub fn degree(&self, group: &Group) -> u64 {
        let classes = group.conjugacy_classes();
        self.counts
            .iter()
            .map(|(&c, &k)| k * classes.get(c).map_or(0, |c| c.len() as u64))
            .sum()
    }
}

/// The Hopf graph: a vertex per element and `r_C` edges `x -> x·c` for each
/// class `C` and each `c` in `C`.
pub fn hopf_graph(group: &Group, ram: &RamificationData) -> Result<Graph> {
    let classes = group.conjugacy_classes();
    if let Some(&c) = ram.counts.keys().find(|&&c| c >= classes.len()) {
        return Err(Error::Ramification(format!("class index {c} out of range")));
    }
    let edges = (0..group.order()).flat_map(|x| {
        ram.counts.iter().flat_map({
            let classes = &classes;
            move |(&c, &k)| classes[c].iter().map(move |&y| (x, group.mul(x, y), k))
        })
    });
    Graph::from_edges(group.names.clone(), edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `v1 -> v2 -> ... -> vn`.
    Line(usize),
    /// `u1 -> u2 -> ... -> um -> u1`.
    Cycle(usize),
}

pub fn family(kind: Family) -> Result<Graph> {
    match kind {
        Family::Line(n) => {
            if n == 0 {
                return Err(Error::OutOfRange("line length must be at least 1".into()));
            }
            Graph::from_edges(numbered("v", n), (1..n).map(|i| (i - 1, i, 1)))
        }
        Family::Cycle(m) => {
            if m == 0 {
                return Err(Error::OutOfRange("cycle length must be at least 1".into()));
            }
            Graph::from_edges(numbered("u", m), (0..m).map(|i| (i, (i + 1) % m, 1)))
        }
    }
}
