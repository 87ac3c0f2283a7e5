//! The talented monoid of a graph.
//!
//! Elements are finite sums of generators `v(a)` with `v` a vertex and `a`
//! an integer level, subject to `v(a) = sum over edges e from v of r(e)(a+1)`
//! for every regular `v`. Elements always live over the base graph; the
//! covering graph is never materialised.
//!
//! Equality is decided by expanding both sides to a common level. Every
//! generator has at most one defining relation, so full expansion to a
//! level is a normal form: sinks freeze where they appear, and whatever is
//! left sits on the frontier level. Two elements are equal exactly when
//! some further expansion makes these normal forms agree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::deciders::Certificate;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// An element of the talented monoid: generator `(level, vertex)` with a
/// positive multiplicity. The empty sum is the zero element.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TalentedElement {
    terms: BTreeMap<(i64, usize), BigUint>,
}

/// Result of expanding an element to a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Frozen sink multiplicities by level, indexed like the graph's sink
    /// list (sinks in vertex order). Only levels below `frontier_level`
    /// with some nonzero entry are present.
    pub frozen_sinks: BTreeMap<i64, Vec<BigUint>>,
    pub frontier_level: i64,
    /// Multiplicity of every vertex at `frontier_level`.
    pub frontier: Vec<BigUint>,
}

/// Outcome of the bounded-depth comparison in [`equal_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Equal,
    /// Frozen sinks disagree, so no further expansion can help.
    Unequal,
    Inconclusive,
}

impl TalentedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(vertex: usize, level: i64) -> Self {
        Self::from_terms([(vertex, level, BigUint::one())])
    }

    /// Builds an element from `(vertex, level, multiplicity)` triples,
    /// merging repeats and dropping zero multiplicities.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, i64, BigUint)>) -> Self {
        let mut e = Self::zero();
        for (v, level, k) in terms {
            e.add_term(v, level, k);
        }
        e
    }

    fn add_term(&mut self, vertex: usize, level: i64, k: BigUint) {
        if !k.is_zero() {
            *self.terms.entry((level, vertex)).or_default() += k;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(vertex, level, multiplicity)` sorted by level, then vertex.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &BigUint)> + '_ {
        self.terms.iter().map(|(&(level, v), k)| (v, level, k))
    }

    pub fn max_level(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|&(l, _)| l)
    }

    pub fn min_level(&self) -> Option<i64> {
        self.terms.keys().next().map(|&(l, _)| l)
    }

    /// The integer action: every level moves by `n`.
    pub fn shift(&self, n: i64) -> Self {
        TalentedElement {
            terms: self
                .terms
                .iter()
                .map(|(&(l, v), k)| ((l + n, v), k.clone()))
                .collect(),
        }
    }

    /// Parses `[k*]name(level) + ...`, or `0` for the zero element.
    pub fn parse(text: &str, g: &Graph) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Element("empty expression".into()));
        }
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut e = Self::zero();
        for raw in text.split('+') {
            let term = raw.trim();
            let (k, gen) = match term.split_once('*') {
                Some((k, rest)) => {
                    let k: BigUint = k
                        .trim()
                        .parse()
                        .map_err(|_| Error::Element(format!("bad multiplicity in `{term}`")))?;
                    if k.is_zero() {
                        return Err(Error::Element(format!("zero multiplicity in `{term}`")));
                    }
                    (k, rest.trim())
                }
                None => (BigUint::one(), term),
            };
            let (name, level) = gen
                .strip_suffix(')')
                .and_then(|s| s.rsplit_once('('))
                .ok_or_else(|| Error::Element(format!("expected `name(level)`, got `{term}`")))?;
            let level: i64 = level
                .trim()
                .parse()
                .map_err(|_| Error::Element(format!("bad level in `{term}`")))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Element(format!("missing vertex in `{term}`")));
            }
            e.add_term(g.index_of(name)?, level, k);
        }
        Ok(e)
    }

    /// Renders in the grammar accepted by [`TalentedElement::parse`].
    pub fn render(&self, g: &Graph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(v, level, k)| {
                if k.is_one() {
                    format!("{}({level})", g.name(v))
                } else {
                    format!("{k}*{}({level})", g.name(v))
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl Add for TalentedElement {
    type Output = TalentedElement;

    fn add(mut self, rhs: TalentedElement) -> TalentedElement {
        for ((level, v), k) in rhs.terms {
            self.add_term(v, level, k);
        }
        self
    }
}

impl<'a> Add<&'a TalentedElement> for &'a TalentedElement {
    type Output = TalentedElement;

    fn add(self, rhs: &'a TalentedElement) -> TalentedElement {
        self.clone() + rhs.clone()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "frozen {:?}, level {} frontier [",
            self.frozen_sinks, self.frontier_level
        )?;
        for (i, k) in self.frontier.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

impl NormalForm {
    /// The element this normal form stands for.
    pub fn to_element(&self, g: &Graph) -> TalentedElement {
        let sinks = sink_list(g);
        let frozen = self.frozen_sinks.iter().flat_map(|(&level, ks)| {
            sinks
                .iter()
                .zip(ks)
                .map(move |(&v, k)| (v, level, k.clone()))
        });
        let frontier = self
            .frontier
            .iter()
            .enumerate()
            .map(|(v, k)| (v, self.frontier_level, k.clone()));
        TalentedElement::from_terms(frozen.chain(frontier))
    }
}

fn sink_list(g: &Graph) -> Vec<usize> {
    (0..g.order()).filter(|&v| g.is_sink(v)).collect()
}

/// Expands every regular generator below `level` by its defining relation
/// until everything is either a frozen sink or sits on `level`.
pub fn expand_to_level(g: &Graph, e: &TalentedElement, level: i64) -> Result<NormalForm> {
    let h = g.order();
    if let Some(&(_, v)) = e.terms.keys().find(|&&(_, v)| v >= h) {
        return Err(Error::VertexOutOfRange(v));
    }
    if let Some(max) = e.max_level() {
        if level < max {
            return Err(Error::LevelBelow {
                target: level,
                existing: max,
            });
        }
    }
    let sinks = sink_list(g);
    let mut frozen_sinks = BTreeMap::new();
    let mut current = vec![BigUint::zero(); h];
    let mut pending = e.terms.iter().peekable();
    let mut at = e.min_level().unwrap_or(level);
    while at < level {
        while let Some(((_, v), k)) = pending.next_if(|((l, _), _)| *l == at) {
            current[*v] += k;
        }
        if current.iter().all(Zero::is_zero) {
            // nothing in flight; jump to the next populated level
            at = pending.peek().map_or(level, |((l, _), _)| *l);
            continue;
        }
        let mut next = vec![BigUint::zero(); h];
        let mut frozen_here = vec![BigUint::zero(); sinks.len()];
        for (v, k) in current.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            if g.is_sink(v) {
                let pos = sinks.binary_search(&v).expect("sink listed");
                frozen_here[pos] += k;
            } else {
                for (w, &m) in g.row(v).iter().enumerate() {
                    if m > 0 {
                        next[w] += k * m;
                    }
                }
            }
        }
        if frozen_here.iter().any(|k| !k.is_zero()) {
            frozen_sinks.insert(at, frozen_here);
        }
        current = next;
        at += 1;
    }
    for ((_, v), k) in pending {
        current[*v] += k;
    }
    Ok(NormalForm {
        frozen_sinks,
        frontier_level: level,
        frontier: current,
    })
}

/// One expansion step on a signed frontier vector: sinks drop out,
/// regular vertices are replaced by their adjacency rows.
fn step_signed(g: &Graph, d: &[BigInt]) -> Vec<BigInt> {
    let mut next = vec![BigInt::zero(); d.len()];
    for (v, x) in d.iter().enumerate() {
        if x.is_zero() || g.is_sink(v) {
            continue;
        }
        for (w, &m) in g.row(v).iter().enumerate() {
            if m > 0 {
                next[w] += x * m;
            }
        }
    }
    next
}

fn common_level(a: &TalentedElement, b: &TalentedElement) -> Option<i64> {
    match (a.max_level(), b.max_level()) {
        (None, None) => None,
        (x, y) => x.max(y),
    }
}

/// Decides `a = b` in the talented monoid of `g`.
///
/// After expanding both sides to the highest level present, frozen sinks
/// must agree. The remaining question is whether the frontier difference
/// `d` is eventually annihilated by the expansion map `M` (the adjacency
/// matrix with sink rows zeroed), without ever disagreeing on a sink. The
/// kernels of `M^k` form an ascending chain in a space of dimension `h`,
/// so if `d M^h` is nonzero no later power kills it either.
pub fn equal(g: &Graph, a: &TalentedElement, b: &TalentedElement) -> Result<bool> {
    let Some(level) = common_level(a, b) else {
        return Ok(true);
    };
    let na = expand_to_level(g, a, level)?;
    let nb = expand_to_level(g, b, level)?;
    if na.frozen_sinks != nb.frozen_sinks {
        return Ok(false);
    }
    let mut d: Vec<BigInt> = na
        .frontier
        .iter()
        .zip(&nb.frontier)
        .map(|(x, y)| BigInt::from(x.clone()) - BigInt::from(y.clone()))
        .collect();
    for _ in 0..=g.order() {
        if d.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        if (0..g.order()).any(|v| g.is_sink(v) && !d[v].is_zero()) {
            return Ok(false);
        }
        d = step_signed(g, &d);
    }
    Ok(false)
}

/// Naive comparison of full normal forms on levels `top..=top + depth`,
/// where `top` is the highest level present. Used to cross-check
/// [`equal`].
pub fn equal_oracle(
    g: &Graph,
    a: &TalentedElement,
    b: &TalentedElement,
    depth: u32,
) -> Result<OracleVerdict> {
    let Some(top) = common_level(a, b) else {
        return Ok(OracleVerdict::Equal);
    };
    for level in top..=top + i64::from(depth) {
        let na = expand_to_level(g, a, level)?;
        let nb = expand_to_level(g, b, level)?;
        if na.frozen_sinks != nb.frozen_sinks {
            return Ok(OracleVerdict::Unequal);
        }
        if na == nb {
            return Ok(OracleVerdict::Equal);
        }
    }
    Ok(OracleVerdict::Inconclusive)
}

/// The pair of elements whose equality a certificate asserts: with `top`
/// the largest exponent, each exponent `p` contributes the sum of all
/// vertices at level `top - p`.
pub fn certificate_to_equation(
    g: &Graph,
    cert: &Certificate,
) -> Result<(TalentedElement, TalentedElement)> {
    if g.has_sink() {
        return Err(Error::SinksPresent);
    }
    if cert.p_counts().is_empty() || cert.q_counts().is_empty() {
        return Err(Error::InvalidCertificate(
            "both sides must be nonempty".into(),
        ));
    }
    let top = i64::from(cert.max_exponent());
    let side =
        |exps: &BTreeMap<u32, BigUint>| {
            TalentedElement::from_terms(exps.iter().flat_map(|(&p, k)| {
                (0..g.order()).map(move |v| (v, top - i64::from(p), k.clone()))
            }))
        };
    Ok((side(cert.p_counts()), side(cert.q_counts())))
}
