//! IBN and graded IBN deciders.
//!
//! IBN is a rank comparison over the rationals. Graded IBN fails exactly
//! when some relation `1ᵀ(A^p1 + ... + A^pm) = 1ᵀ(A^q1 + ... + A^qn)` with
//! `m != n` holds. Relations of that form are integer vectors `c` with
//! `Σ c_p 1ᵀA^p = 0` and `Σ c_p != 0`, so it suffices to ask whether
//! `(0, ..., 0, 1)` lies in the rational span of the augmented rows
//! `(1ᵀA^p | 1)`. Exponents `0..=h` are enough: the differences
//! `(1ᵀA^p (A - I) | 0)` obey the recurrence given by the characteristic
//! polynomial of `A`, so later rows add nothing to the span.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmat::{gcd_all, rank_q, solve_in_rowspan, IntMatrix, RationalVector};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IbnVerdict {
    pub has_ibn: bool,
    pub rank_left: usize,
    pub rank_right: usize,
    /// Set when a maximal sink or cycle already guarantees IBN. The rank
    /// comparison stays authoritative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<IbnShortcut>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IbnShortcut {
    #[serde(rename = "maximal-sink-or-cycle")]
    MaximalSinkOrCycle,
}

/// Two multisets of exponents, stored as exponent → multiplicity.
///
/// Serialises as `{"P": [...], "Q": [...]}` with each exponent repeated
/// according to its multiplicity. A side with more than
/// [`CERTIFICATE_LIST_LIMIT`] exponents is written instead as an object
/// from exponent to multiplicity, the multiplicity as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Certificate {
    p: BTreeMap<u32, BigUint>,
    q: BTreeMap<u32, BigUint>,
}

fn counts(exps: impl IntoIterator<Item = u32>) -> BTreeMap<u32, BigUint> {
    let mut m: BTreeMap<u32, BigUint> = BTreeMap::new();
    for e in exps {
        *m.entry(e).or_default() += 1u32;
    }
    m
}

fn size(side: &BTreeMap<u32, BigUint>) -> BigUint {
    side.values().sum()
}

fn expand(side: &BTreeMap<u32, BigUint>) -> impl Iterator<Item = u32> + '_ {
    side.iter().flat_map(|(&e, k)| {
        let k = k.to_usize().expect("multiplicity too large to list");
        std::iter::repeat_n(e, k)
    })
}

impl Certificate {
    pub fn new(p: Vec<u32>, q: Vec<u32>) -> Self {
        Certificate {
            p: counts(p),
            q: counts(q),
        }
    }

    pub fn from_counts(
        p: impl IntoIterator<Item = (u32, BigUint)>,
        q: impl IntoIterator<Item = (u32, BigUint)>,
    ) -> Self {
        let collect = |it: &mut dyn Iterator<Item = (u32, BigUint)>| {
            let mut m: BTreeMap<u32, BigUint> = BTreeMap::new();
            for (e, k) in it.filter(|(_, k)| !k.is_zero()) {
                *m.entry(e).or_default() += k;
            }
            m
        };
        Certificate {
            p: collect(&mut p.into_iter()),
            q: collect(&mut q.into_iter()),
        }
    }

    pub fn p_counts(&self) -> &BTreeMap<u32, BigUint> {
        &self.p
    }

    pub fn q_counts(&self) -> &BTreeMap<u32, BigUint> {
        &self.q
    }

    /// Sorted exponents of `P`, with repetition.
    pub fn p(&self) -> Vec<u32> {
        expand(&self.p).collect()
    }

    /// Sorted exponents of `Q`, with repetition.
    pub fn q(&self) -> Vec<u32> {
        expand(&self.q).collect()
    }

    /// `|P|`.
    pub fn m(&self) -> BigUint {
        size(&self.p)
    }

    /// `|Q|`.
    pub fn n(&self) -> BigUint {
        size(&self.q)
    }

    pub fn max_exponent(&self) -> u32 {
        self.p
            .keys()
            .chain(self.q.keys())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Cancels exponents common to both sides.
    pub fn canonical(&self) -> Certificate {
        let mut p = self.p.clone();
        let mut q = self.q.clone();
        for (e, kq) in q.iter_mut() {
            if let Some(kp) = p.get_mut(e) {
                let common = kp.clone().min(kq.clone());
                *kp -= &common;
                *kq -= &common;
            }
        }
        p.retain(|_, k| !k.is_zero());
        q.retain(|_, k| !k.is_zero());
        Certificate { p, q }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |m: &BTreeMap<u32, BigUint>| {
            m.iter()
                .map(|(e, k)| {
                    if k.is_one() {
                        e.to_string()
                    } else {
                        format!("{e}^{k}")
                    }
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "P = {{{}}}, Q = {{{}}}", side(&self.p), side(&self.q))
    }
}

pub const CERTIFICATE_LIST_LIMIT: u64 = 1 << 20;

struct Listed<'a>(&'a BTreeMap<u32, BigUint>);

impl Serialize for Listed<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if size(self.0) <= BigUint::from(CERTIFICATE_LIST_LIMIT) {
            s.collect_seq(expand(self.0))
        } else {
            s.collect_map(self.0.iter().map(|(e, k)| (e.to_string(), k.to_string())))
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Certificate", 2)?;
        st.serialize_field("P", &Listed(&self.p))?;
        st.serialize_field("Q", &Listed(&self.q))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Side {
            Listed(Vec<u32>),
            Counted(BTreeMap<String, String>),
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(rename = "P")]
            p: Side,
            #[serde(rename = "Q")]
            q: Side,
        }
        fn side<E: serde::de::Error>(side: Side) -> std::result::Result<BTreeMap<u32, BigUint>, E> {
            match side {
                Side::Listed(v) => Ok(counts(v)),
                Side::Counted(m) => {
                    let mut out = BTreeMap::new();
                    for (e, k) in m {
                        let e: u32 = e.parse().map_err(E::custom)?;
                        let k: BigUint = k.parse().map_err(E::custom)?;
                        if !k.is_zero() {
                            out.insert(e, k);
                        }
                    }
                    Ok(out)
                }
            }
        }
        let raw = Raw::deserialize(d)?;
        Ok(Certificate {
            p: side(raw.p)?,
            q: side(raw.q)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrIbnReason {
    SinkPresent,
    NoRelationExists,
    /// Every column of the adjacency matrix sums to this value.
    ColumnSumUniform(u64),
    SpanCertificate,
}

impl GrIbnReason {
    pub fn tag(&self) -> &'static str {
        match self {
            GrIbnReason::SinkPresent => "sink-present",
            GrIbnReason::NoRelationExists => "no-relation-exists",
            GrIbnReason::ColumnSumUniform(_) => "column-sum-uniform",
            GrIbnReason::SpanCertificate => "span-certificate",
        }
    }
}

impl Serialize for GrIbnReason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrIbnVerdict {
    pub has_gr_ibn: bool,
    pub reason: GrIbnReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// Vertex order with regular vertices first, each group in original order.
fn regular_first(g: &Graph) -> Vec<usize> {
    let (regular, sinks): (Vec<usize>, Vec<usize>) = (0..g.order()).partition(|&v| !g.is_sink(v));
    regular.into_iter().chain(sinks).collect()
}

/// Compares `rank(Aᵀ - J)` with the rank after appending the all-ones
/// column, where `J` is the identity on regular vertices and zero on sinks.
/// Ranks are taken after listing regular vertices first.
pub fn decide_ibn(g: &Graph) -> IbnVerdict {
    let order = regular_first(g);
    let h = g.order();
    let left = IntMatrix::from_fn(h, h, |i, j| {
        let (vi, vj) = (order[i], order[j]);
        let mut x = BigInt::from(g.multiplicity(vj, vi));
        if i == j && !g.is_sink(vi) {
            x -= 1;
        }
        x
    });
    let right = left
        .with_column(&vec![BigInt::one(); h])
        .expect("column length matches");
    let rank_left = rank_q(&left);
    let rank_right = rank_q(&right);
    IbnVerdict {
        has_ibn: rank_left < rank_right,
        rank_left,
        rank_right,
        shortcut: sufficient_ibn_maximal(g).then_some(IbnShortcut::MaximalSinkOrCycle),
    }
}

/// True when the graph has a maximal sink or a maximal simple cycle, which
/// is sufficient (not necessary) for IBN.
pub fn sufficient_ibn_maximal(g: &Graph) -> bool {
    !g.maximal_sinks_and_cycles().is_empty()
}

fn require_sink_free(g: &Graph) -> Result<()> {
    if g.has_sink() {
        Err(Error::SinksPresent)
    } else {
        Ok(())
    }
}

/// The common column sum of the adjacency matrix, when there is one and it
/// is at least 2.
pub fn column_sum_shortcut(g: &Graph) -> Result<Option<u64>> {
    require_sink_free(g)?;
    let c = g.in_degree(0);
    let uniform = (1..g.order()).all(|j| g.in_degree(j) == c);
    Ok((uniform && c >= 2).then_some(c))
}

/// `1ᵀA^p` for `p = 0..=max`.
fn ones_powers(g: &Graph, max: u32) -> Vec<Vec<BigInt>> {
    let a = g.adjacency_matrix();
    let mut rows = Vec::with_capacity(max as usize + 1);
    let mut u = vec![BigInt::one(); g.order()];
    for _ in 0..max {
        let next = a.left_mul_vec(&u);
        rows.push(std::mem::replace(&mut u, next));
    }
    rows.push(u);
    rows
}

/// Certificate derived from the span test described in the module docs,
/// or `None` when graded IBN holds.
pub fn exact_certificate(g: &Graph) -> Result<Option<Certificate>> {
    require_sink_free(g)?;
    let h = g.order();
    let rows: Vec<Vec<BigInt>> = ones_powers(g, h as u32)
        .into_iter()
        .map(|mut r| {
            r.push(BigInt::one());
            r
        })
        .collect();
    let m = IntMatrix::from_rows(&rows)?;
    let mut target = vec![0i64; h + 1];
    target[h] = 1;
    let Some(lambda) = solve_in_rowspan(&m, &RationalVector::from_integers(target))? else {
        return Ok(None);
    };
    let (ints, _) = lambda.clear_denominators();
    let gcd = gcd_all(&ints);
    let mut p = Vec::new();
    let mut q = Vec::new();
    for (e, c) in ints.iter().enumerate() {
        let c = c / &gcd;
        let k = c.magnitude().clone();
        match c.sign() {
            Sign::Plus => p.push((e as u32, k)),
            Sign::Minus => q.push((e as u32, k)),
            Sign::NoSign => {}
        }
    }
    // the coefficients sum to a positive number, so P is the larger side
    Ok(Some(Certificate::from_counts(p, q)))
}

fn side_sum(powers: &[Vec<BigInt>], side: &BTreeMap<u32, BigUint>, h: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); h];
    for (&e, k) in side {
        let k = BigInt::from(k.clone());
        for (o, x) in out.iter_mut().zip(&powers[e as usize]) {
            *o += &k * x;
        }
    }
    out
}

/// Recomputes both sides of the relation a certificate asserts.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> Result<bool> {
    require_sink_free(g)?;
    if cert.p.is_empty() || cert.q.is_empty() {
        return Err(Error::InvalidCertificate(
            "both sides must be nonempty".into(),
        ));
    }
    if cert.m() == cert.n() {
        return Ok(false);
    }
    let powers = ones_powers(g, cert.max_exponent());
    let h = g.order();
    Ok(side_sum(&powers, &cert.p, h) == side_sum(&powers, &cert.q, h))
}

/// Exhaustive search for a relation with exponents at most `max_exp` and
/// at most `max_terms` exponents in total.
///
/// Among all hits, returns the one with the fewest terms, then the
/// lexicographically smallest sorted `P`, then `Q`. This is what a scan
/// in that order would find first; the implementation meets in the
/// middle by bucketing every one-sided multiset by its vector sum.
pub fn bounded_certificate_search(
    g: &Graph,
    max_exp: u32,
    max_terms: u32,
) -> Result<Option<Certificate>> {
    require_sink_free(g)?;
    if max_exp < 1 {
        return Err(Error::SearchBounds("maxExp must be at least 1".into()));
    }
    if max_terms < 2 {
        return Err(Error::SearchBounds("maxTerms must be at least 2".into()));
    }
    let powers = ones_powers(g, max_exp);
    let side_max = (max_terms - 1) as usize;

    // bucket: vector sum -> size -> multisets in lexicographic order
    let mut buckets: HashMap<Vec<BigInt>, BTreeMap<usize, Vec<Vec<u32>>>> = HashMap::new();
    let mut stack: Vec<(Vec<u32>, Vec<BigInt>)> =
        vec![(Vec::new(), vec![BigInt::zero(); g.order()])];
    // depth-first with children pushed in reverse keeps each size in lex order
    while let Some((ms, sum)) = stack.pop() {
        if !ms.is_empty() {
            buckets
                .entry(sum.clone())
                .or_default()
                .entry(ms.len())
                .or_default()
                .push(ms.clone());
        }
        if ms.len() == side_max {
            continue;
        }
        let start = ms.last().copied().unwrap_or(0);
        for e in (start..=max_exp).rev() {
            let mut next = ms.clone();
            next.push(e);
            let s = sum
                .iter()
                .zip(&powers[e as usize])
                .map(|(a, b)| a + b)
                .collect();
            stack.push((next, s));
        }
    }

    let disjoint = |a: &[u32], b: &[u32]| a.iter().all(|x| b.binary_search(x).is_err());
    for total in 3..=max_terms as usize {
        let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
        for by_size in buckets.values() {
            for a in 1..total {
                let b = total - a;
                if a == b {
                    continue;
                }
                let (Some(ps), Some(qs)) = (by_size.get(&a), by_size.get(&b)) else {
                    continue;
                };
                let hit = ps.iter().find_map(|p| {
                    qs.iter()
                        .find(|q| disjoint(p, q))
                        .map(|q| (p.clone(), q.clone()))
                });
                if let Some(hit) = hit {
                    if best.as_ref().is_none_or(|b| hit < *b) {
                        best = Some(hit);
                    }
                }
            }
        }
        if let Some((p, q)) = best {
            return Ok(Some(Certificate::new(p, q)));
        }
    }
    Ok(None)
}

/// Full graded IBN pipeline. A sink settles the question immediately;
/// otherwise the span test decides. When all column sums agree the
/// reported certificate is the canonical `P = {1}`, `Q = {0 × c}`.
pub fn decide_gribn(g: &Graph) -> GrIbnVerdict {
    if g.has_sink() {
        return GrIbnVerdict {
            has_gr_ibn: true,
            reason: GrIbnReason::SinkPresent,
            certificate: None,
        };
    }
    let exact = exact_certificate(g).expect("graph is sink-free");
    let Some(cert) = exact else {
        return GrIbnVerdict {
            has_gr_ibn: true,
            reason: GrIbnReason::NoRelationExists,
            certificate: None,
        };
    };
    let column_sum = column_sum_shortcut(g).expect("graph is sink-free");
    let (reason, cert) = match column_sum {
        Some(c) => (
            GrIbnReason::ColumnSumUniform(c),
            Certificate::from_counts([(1, BigUint::one())], [(0, BigUint::from(c))]),
        ),
        None => (GrIbnReason::SpanCertificate, cert),
    };
    GrIbnVerdict {
        has_gr_ibn: false,
        reason,
        certificate: Some(cert),
    }
}

impl IbnVerdict {
    pub fn rank_gap(&self) -> usize {
        self.rank_right - self.rank_left
    }
}

/// Signed coefficient vector `c` with `c_p = mult_P(p) - mult_Q(p)`.
pub fn certificate_coefficients(cert: &Certificate) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); cert.max_exponent() as usize + 1];
    for (&e, k) in &cert.p {
        c[e as usize] += BigInt::from(k.clone());
    }
    for (&e, k) in &cert.q {
        c[e as usize] -= BigInt::from(k.clone());
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(adj: &[&[u64]]) -> Graph {
        let h = adj.len();
        Graph::new(
            (0..h).map(|i| format!("x{i}")).collect(),
            adj.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    fn ex34() -> Graph {
        graph(&[&[2, 1], &[0, 0]])
    }
    fn ex38() -> Graph {
        graph(&[&[3, 2], &[1, 2]])
    }
    fn fib() -> Graph {
        graph(&[&[1, 1], &[1, 0]])
    }
    fn c4() -> Graph {
        graph(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]])
    }

    #[test]
    fn ibn_examples() {
        let v = decide_ibn(&ex34());
        assert_eq!(
            (v.has_ibn, v.rank_left, v.rank_right, v.shortcut),
            (false, 1, 1, None)
        );
        let v = decide_ibn(&graph(&[&[1]]));
        assert_eq!((v.has_ibn, v.rank_left, v.rank_right), (true, 0, 1));
        assert_eq!(v.shortcut, Some(IbnShortcut::MaximalSinkOrCycle));
        let v = decide_ibn(&fib());
        assert_eq!((v.has_ibn, v.rank_left, v.rank_right), (false, 2, 2));
        let v = decide_ibn(&graph(&[&[0]]));
        assert_eq!((v.has_ibn, v.rank_left, v.rank_right), (true, 0, 1));
    }

    #[test]
    fn ibn_reorders_regular_first() {
        // sink listed first; the rank block shape must not depend on it
        let a = graph(&[&[0, 0], &[1, 2]]);
        let b = ex34();
        let (va, vb) = (decide_ibn(&a), decide_ibn(&b));
        assert_eq!((va.rank_left, va.rank_right), (vb.rank_left, vb.rank_right));
    }

    #[test]
    fn ibn_json_shape() {
        let json = serde_json::to_string(&decide_ibn(&ex34())).unwrap();
        assert_eq!(json, r#"{"hasIbn":false,"rankLeft":1,"rankRight":1}"#);
        let json = serde_json::to_string(&decide_ibn(&c4())).unwrap();
        assert_eq!(
            json,
            r#"{"hasIbn":true,"rankLeft":3,"rankRight":4,"shortcut":"maximal-sink-or-cycle"}"#
        );
    }

    #[test]
    fn column_sum_examples() {
        assert_eq!(column_sum_shortcut(&ex38()).unwrap(), Some(4));
        assert_eq!(column_sum_shortcut(&c4()).unwrap(), None);
        assert_eq!(column_sum_shortcut(&fib()).unwrap(), None);
        let c4_sq = graph(&[&[0, 1, 0, 1], &[1, 0, 1, 0], &[0, 1, 0, 1], &[1, 0, 1, 0]]);
        assert_eq!(column_sum_shortcut(&c4_sq).unwrap(), Some(2));
        assert!(matches!(
            column_sum_shortcut(&ex34()),
            Err(Error::SinksPresent)
        ));
    }

    #[test]
    fn exact_examples() {
        let c = exact_certificate(&fib()).unwrap().unwrap();
        assert_eq!((c.p(), c.q()), (vec![0, 1], vec![2]));
        let c = exact_certificate(&ex38()).unwrap().unwrap();
        assert_eq!((c.p(), c.q()), (vec![0, 0, 0, 0], vec![1]));
        assert!(verify_certificate(&ex38(), &c).unwrap());
        assert_eq!(exact_certificate(&c4()).unwrap(), None);
        assert!(matches!(
            exact_certificate(&ex34()),
            Err(Error::SinksPresent)
        ));
    }

    #[test]
    fn search_examples() {
        let c = bounded_certificate_search(&fib(), 3, 4).unwrap().unwrap();
        assert!(verify_certificate(&fib(), &c).unwrap());
        assert_eq!((c.p(), c.q()), (vec![0, 1], vec![2]));
        let c = bounded_certificate_search(&ex38(), 2, 6).unwrap().unwrap();
        assert_eq!((c.p(), c.q()), (vec![0, 0, 0, 0], vec![1]));
        assert_eq!(bounded_certificate_search(&c4(), 6, 8).unwrap(), None);
        assert!(matches!(
            bounded_certificate_search(&fib(), 0, 4),
            Err(Error::SearchBounds(_))
        ));
        assert!(matches!(
            bounded_certificate_search(&fib(), 2, 1),
            Err(Error::SearchBounds(_))
        ));
        assert!(matches!(
            bounded_certificate_search(&ex34(), 2, 4),
            Err(Error::SinksPresent)
        ));
        // a 4-term relation is out of reach with three terms
        assert_eq!(bounded_certificate_search(&ex38(), 2, 4).unwrap(), None);
    }

    #[test]
    fn verify_examples() {
        assert!(verify_certificate(&fib(), &Certificate::new(vec![0, 1], vec![2])).unwrap());
        assert!(!verify_certificate(&fib(), &Certificate::new(vec![0], vec![1])).unwrap());
        assert!(verify_certificate(&ex38(), &Certificate::new(vec![1], vec![0, 0, 0, 0])).unwrap());
        assert!(!verify_certificate(&ex38(), &Certificate::new(vec![1], vec![1])).unwrap());
        assert!(matches!(
            verify_certificate(&fib(), &Certificate::new(vec![], vec![1])),
            Err(Error::InvalidCertificate(_))
        ));
        assert!(matches!(
            verify_certificate(&ex34(), &Certificate::new(vec![0], vec![1])),
            Err(Error::SinksPresent)
        ));
    }

    #[test]
    fn gribn_examples() {
        let v = decide_gribn(&ex34());
        assert_eq!(
            (v.has_gr_ibn, v.reason, v.certificate),
            (true, GrIbnReason::SinkPresent, None)
        );
        let v = decide_gribn(&ex38());
        assert!(!v.has_gr_ibn);
        assert_eq!(v.reason, GrIbnReason::ColumnSumUniform(4));
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"hasGrIbn":false,"reason":"column-sum-uniform","certificate":{"P":[1],"Q":[0,0,0,0]}}"#
        );
        let v = decide_gribn(&c4());
        assert_eq!(
            (v.has_gr_ibn, v.reason),
            (true, GrIbnReason::NoRelationExists)
        );
        let v = decide_gribn(&fib());
        assert_eq!(v.reason, GrIbnReason::SpanCertificate);
        assert!(verify_certificate(&fib(), v.certificate.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn maximal_examples() {
        assert!(sufficient_ibn_maximal(&c4()));
        assert!(!sufficient_ibn_maximal(&ex34()));
        let line = graph(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let cycle = graph(&[&[0, 1], &[1, 0]]);
        assert!(sufficient_ibn_maximal(&cycle.cartesian_product(&line)));
    }

    #[test]
    fn certificate_canonical_and_json() {
        let c = Certificate::new(vec![2, 0, 1, 1], vec![1, 3]);
        let k = c.canonical();
        assert_eq!((k.p(), k.q()), (vec![0, 1, 2], vec![3]));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"P":[0,1,1,2],"Q":[1,3]}"#);
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);

        let huge = Certificate::from_counts([(1, BigUint::one())], [(0, BigUint::from(u64::MAX))]);
        let json = serde_json::to_string(&huge).unwrap();
        assert_eq!(json, r#"{"P":[1],"Q":{"0":"18446744073709551615"}}"#);
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, huge);
        assert_eq!(c.to_string(), "P = {0, 1^2, 2}, Q = {1, 3}");
        assert_eq!(
            certificate_coefficients(&c),
            [1, 1, 1, -1].map(BigInt::from).to_vec()
        );
    }

    fn arb_graph(max_h: usize, max_entry: u64) -> impl Strategy<Value = Graph> {
        (1..=max_h).prop_flat_map(move |h| {
            proptest::collection::vec(0..=max_entry, h * h).prop_map(move |flat| {
                Graph::new(
                    (0..h).map(|i| format!("x{i}")).collect(),
                    flat.chunks(h).map(|r| r.to_vec()).collect(),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_gap_is_zero_or_one(g in arb_graph(5, 3)) {
            let v = decide_ibn(&g);
            prop_assert!(v.rank_gap() <= 1);
            prop_assert_eq!(v.has_ibn, v.rank_gap() == 1);
        }

        #[test]
        fn shortcut_implies_ibn(g in arb_graph(5, 2)) {
            if sufficient_ibn_maximal(&g) {
                prop_assert!(decide_ibn(&g).has_ibn);
            }
        }

        #[test]
        fn ibn_implies_gribn(g in arb_graph(4, 3)) {
            if decide_ibn(&g).has_ibn {
                prop_assert!(decide_gribn(&g).has_gr_ibn);
            }
        }

        #[test]
        fn negative_verdicts_verify(g in arb_graph(4, 3)) {
            let v = decide_gribn(&g);
            prop_assert_eq!(v.has_gr_ibn, v.certificate.is_none());
            if let Some(c) = &v.certificate {
                prop_assert!(verify_certificate(&g, c).unwrap());
                prop_assert!(c.m() != c.n());
                prop_assert_eq!(c, &c.canonical());
            }
            if g.has_sink() {
                prop_assert_eq!(v.reason, GrIbnReason::SinkPresent);
            } else if let Some(k) = column_sum_shortcut(&g).unwrap() {
                prop_assert_eq!(v.reason, GrIbnReason::ColumnSumUniform(k));
                let canon = Certificate::new(vec![1], vec![0; k as usize]);
                prop_assert!(verify_certificate(&g, &canon).unwrap());
            }
        }

        #[test]
        fn exact_exponents_bounded_by_order(g in arb_graph(4, 3)) {
            prop_assume!(!g.has_sink());
            if let Some(c) = exact_certificate(&g).unwrap() {
                prop_assert!(c.max_exponent() as usize <= g.order());
            }
        }

        #[test]
        fn search_hit_implies_exact_hit(g in arb_graph(3, 2)) {
            prop_assume!(!g.has_sink());
            let search = bounded_certificate_search(&g, 4, 6).unwrap();
            let exact = exact_certificate(&g).unwrap();
            if let Some(c) = &search {
                prop_assert!(verify_certificate(&g, c).unwrap());
                prop_assert!(exact.is_some());
            }
        }
    }
}
