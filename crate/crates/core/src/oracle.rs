//! Countable first-countable spaces described by oracles, the
//! hedgehog, and the construction that finds a copy of the hedgehog at a
//! point where a Hausdorff first-countable space fails to be regular.
//!
//! Nothing here quantifies over infinity: every verdict is checked up to a
//! truncation depth and says so.
//!
//! The hedgehog lives on `ℕ^{≤2}`: a root `∅`, stalk points `(n)` and tip
//! points `(n,m)` with `n, m ≥ 1`. Its base consists of the singletons of
//! tips, the sets `U(n) = {∅} ∪ {(i,j) : i ≥ n}` and the sets
//! `U(n,m) = {(n)} ∪ {(n,j) : j ≥ m}`.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::space::{FinSpace, PointSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("malformed token {0}")]
    MalformedToken(String),
    #[error("no disjoint basic neighborhoods found for {x} and {y}")]
    NotHausdorffWitnessed { x: String, y: String },
    #[error("space is regular at the point: closure of base element {index} lies inside U0")]
    RegularAtPoint { index: u64 },
    #[error("oracle refused at step: {step}")]
    OracleRefusal { step: String },
    #[error("verification failed ({clause}): {detail}")]
    VerificationFailure { clause: &'static str, detail: String },
}

/// A point of the hedgehog, or of a finite space summed onto it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OraclePoint {
    Root,
    Stalk(u64),
    Tip(u64, u64),
    /// Point of an auxiliary finite summand, by index.
    Aux(u32),
}

impl fmt::Display for OraclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OraclePoint::Root => write!(f, "∅"),
            OraclePoint::Stalk(n) => write!(f, "({n})"),
            OraclePoint::Tip(n, m) => write!(f, "({n},{m})"),
            OraclePoint::Aux(i) => write!(f, "aux{i}"),
        }
    }
}

impl std::str::FromStr for OraclePoint {
    type Err = OracleError;

    /// Accepts `∅` (or `root`), `(n)`, `(n,m)` and `auxI`.
    fn from_str(s: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::MalformedToken(s.to_string());
        let t = s.trim();
        if t == "∅" || t == "root" || t == "()" {
            return Ok(OraclePoint::Root);
        }
        if let Some(i) = t.strip_prefix("aux") {
            return i.parse().map(OraclePoint::Aux).map_err(|_| bad());
        }
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let nums: Vec<u64> = inner
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let p = match nums[..] {
            [n] if n >= 1 => OraclePoint::Stalk(n),
            [n, m] if n >= 1 && m >= 1 => OraclePoint::Tip(n, m),
            _ => return Err(bad()),
        };
        Ok(p)
    }
}

/// Symbolic basic open set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasicSet {
    /// `{p}`.
    Point(OraclePoint),
    /// `U(n) = {∅} ∪ {(i,j) : i ≥ n}`.
    Root(u64),
    /// `U(n,m) = {(n)} ∪ {(n,j) : j ≥ m}`.
    Stalk(u64, u64),
    /// Open subset of the auxiliary summand.
    Aux(PointSet),
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicSet::Point(p) => write!(f, "{{{p}}}"),
            BasicSet::Root(n) => write!(f, "U({n})"),
            BasicSet::Stalk(n, m) => write!(f, "U({n},{m})"),
            BasicSet::Aux(s) => {
                let inner: Vec<String> = s.iter().map(|i| format!("aux{i}")).collect();
                write!(f, "{{{}}}", inner.join(","))
            }
        }
    }
}

/// The decidable interface of a countable first-countable space.
pub trait OracleSpace {
    type Point: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display;
    type Set: Clone + fmt::Debug + fmt::Display;

    fn validate(&self, p: &Self::Point) -> Result<(), OracleError>;
    /// `k`-th element (`k ≥ 1`) of a decreasing neighborhood base at `x`.
    fn nbhd_base(&self, x: &Self::Point, k: u64) -> Self::Set;
    fn contains(&self, b: &Self::Set, p: &Self::Point) -> bool;
    fn closure_contains(&self, b: &Self::Set, p: &Self::Point) -> bool;
    /// Base indices `(i, j)` with `nbhd_base(x, i) ∩ nbhd_base(y, j) = ∅`.
    fn separate(&self, x: &Self::Point, y: &Self::Point) -> Option<(u64, u64)>;
    /// First `count` terms of a sequence of distinct points lying in every
    /// set of `within` and converging to `x`.
    fn approach_within(&self, x: &Self::Point, within: &[Self::Set], count: usize) -> Option<Vec<Self::Point>>;
    /// Least point of `cl(a) ∖ b`.
    fn pick_in_closure_minus(&self, a: &Self::Set, b: &Self::Set) -> Option<Self::Point>;
}

/// The hedgehog.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hedgehog;

pub fn hedgehog() -> Hedgehog {
    Hedgehog
}

impl Hedgehog {
    /// Exact inclusion between basic sets.
    pub fn subset(&self, a: &BasicSet, b: &BasicSet) -> bool {
        match (a, b) {
            (BasicSet::Point(p), _) => self.contains(b, p),
            (BasicSet::Root(n), BasicSet::Root(k)) => n >= k,
            (BasicSet::Stalk(n, m), BasicSet::Stalk(k, l)) => n == k && m >= l,
            (BasicSet::Aux(s), BasicSet::Aux(t)) => s.is_subset(*t),
            (BasicSet::Aux(s), _) => s.is_empty(),
            _ => false,
        }
    }

    /// Exact disjointness of basic sets.
    pub fn disjoint(&self, a: &BasicSet, b: &BasicSet) -> bool {
        match (a, b) {
            (BasicSet::Point(p), _) => !self.contains(b, p),
            (_, BasicSet::Point(p)) => !self.contains(a, p),
            (BasicSet::Root(_), BasicSet::Root(_)) => false,
            (BasicSet::Root(n), BasicSet::Stalk(k, _)) | (BasicSet::Stalk(k, _), BasicSet::Root(n)) => k < n,
            (BasicSet::Stalk(n, _), BasicSet::Stalk(k, _)) => n != k,
            (BasicSet::Aux(s), BasicSet::Aux(t)) => (*s & *t).is_empty(),
            (BasicSet::Aux(_), _) | (_, BasicSet::Aux(_)) => true,
        }
    }

    /// Least `j ≥ from` with `(row, j) ∉ b`.
    fn least_column_outside(b: &BasicSet, row: u64, from: u64) -> Option<u64> {
        match *b {
            BasicSet::Point(OraclePoint::Tip(r, c)) if r == row && c == from => Some(from + 1),
            BasicSet::Stalk(r, m) if r == row => (from < m).then_some(from),
            BasicSet::Root(k) if row >= k => None,
            _ => Some(from),
        }
    }
}

impl OracleSpace for Hedgehog {
    type Point = OraclePoint;
    type Set = BasicSet;

    fn validate(&self, p: &OraclePoint) -> Result<(), OracleError> {
        match *p {
            OraclePoint::Root => Ok(()),
            OraclePoint::Stalk(n) if n >= 1 => Ok(()),
            OraclePoint::Tip(n, m) if n >= 1 && m >= 1 => Ok(()),
            _ => Err(OracleError::MalformedToken(p.to_string())),
        }
    }

    fn nbhd_base(&self, x: &OraclePoint, k: u64) -> BasicSet {
        let k = k.max(1);
        match *x {
            OraclePoint::Root => BasicSet::Root(k),
            OraclePoint::Stalk(n) => BasicSet::Stalk(n, k),
            p => BasicSet::Point(p),
        }
    }

    fn contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        match (*b, *p) {
            (BasicSet::Point(q), p) => p == q,
            (BasicSet::Root(_), OraclePoint::Root) => true,
            (BasicSet::Root(n), OraclePoint::Tip(i, _)) => i >= n,
            (BasicSet::Stalk(n, _), OraclePoint::Stalk(i)) => i == n,
            (BasicSet::Stalk(n, m), OraclePoint::Tip(i, j)) => i == n && j >= m,
            (BasicSet::Aux(s), OraclePoint::Aux(i)) => s.contains(i as usize),
            _ => false,
        }
    }

    fn closure_contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        match (*b, *p) {
            // stalk points are limits of their tip sequences
            (BasicSet::Root(n), OraclePoint::Stalk(i)) => i >= n,
            // every other basic set is closed: U(n,m) is clopen, points are closed
            _ => self.contains(b, p),
        }
    }

    fn separate(&self, x: &OraclePoint, y: &OraclePoint) -> Option<(u64, u64)> {
        use OraclePoint::*;
        let pair = match (*x, *y) {
            _ if x == y => return None,
            (Aux(_), _) | (_, Aux(_)) => return None,
            (Root, Stalk(n)) | (Root, Tip(n, _)) => (n + 1, 1),
            (Stalk(n), Root) | (Tip(n, _), Root) => (1, n + 1),
            (Stalk(n), Tip(i, m)) if n == i => (m + 1, 1),
            (Tip(i, m), Stalk(n)) if n == i => (1, m + 1),
            _ => (1, 1),
        };
        Some(pair)
    }

    fn approach_within(&self, x: &OraclePoint, within: &[BasicSet], count: usize) -> Option<Vec<OraclePoint>> {
        match *x {
            OraclePoint::Stalk(n) => {
                let mut from = 1;
                for b in within {
                    match *b {
                        BasicSet::Stalk(r, m) if r == n => from = from.max(m),
                        BasicSet::Root(k) if n >= k => {}
                        _ => return None,
                    }
                }
                Some((0..count as u64).map(|i| OraclePoint::Tip(n, from + i)).collect())
            }
            OraclePoint::Root => {
                let mut from = 1;
                for b in within {
                    match *b {
                        BasicSet::Root(k) => from = from.max(k),
                        _ => return None,
                    }
                }
                Some((0..count as u64).map(|i| OraclePoint::Tip(from + i, 1)).collect())
            }
            // tips are isolated
            _ => None,
        }
    }

    fn pick_in_closure_minus(&self, a: &BasicSet, b: &BasicSet) -> Option<OraclePoint> {
        match *a {
            BasicSet::Point(p) => (!self.contains(b, &p)).then_some(p),
            BasicSet::Aux(_) => None,
            BasicSet::Stalk(n, m) => {
                if !self.contains(b, &OraclePoint::Stalk(n)) {
                    return Some(OraclePoint::Stalk(n));
                }
                Self::least_column_outside(b, n, m).map(|j| OraclePoint::Tip(n, j))
            }
            BasicSet::Root(n) => {
                if !self.contains(b, &OraclePoint::Root) {
                    return Some(OraclePoint::Root);
                }
                // b holds at most one stalk point
                for i in n..n + 2 {
                    if !self.contains(b, &OraclePoint::Stalk(i)) {
                        return Some(OraclePoint::Stalk(i));
                    }
                }
                // b removes at most one row, or every row from some index on
                for row in n..n + 2 {
                    if let Some(j) = Self::least_column_outside(b, row, 1) {
                        return Some(OraclePoint::Tip(row, j));
                    }
                }
                None
            }
        }
    }
}

/// The hedgehog summed with a finite space; the finite points are
/// `OraclePoint::Aux(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HedgehogSum {
    pub aux: FinSpace,
}

impl HedgehogSum {
    pub fn new(aux: FinSpace) -> Self {
        HedgehogSum { aux }
    }
}

impl OracleSpace for HedgehogSum {
    type Point = OraclePoint;
    type Set = BasicSet;

    fn validate(&self, p: &OraclePoint) -> Result<(), OracleError> {
        match *p {
            OraclePoint::Aux(i) if (i as usize) < self.aux.len() => Ok(()),
            OraclePoint::Aux(_) => Err(OracleError::MalformedToken(p.to_string())),
            _ => Hedgehog.validate(p),
        }
    }

    fn nbhd_base(&self, x: &OraclePoint, k: u64) -> BasicSet {
        match *x {
            OraclePoint::Aux(i) => BasicSet::Aux(self.aux.nbhd(i as usize)),
            _ => Hedgehog.nbhd_base(x, k),
        }
    }

    fn contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        Hedgehog.contains(b, p)
    }

    fn closure_contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        match (*b, *p) {
            (BasicSet::Aux(s), OraclePoint::Aux(i)) => self.aux.closure_within(self.aux.full(), s).contains(i as usize),
            _ => Hedgehog.closure_contains(b, p),
        }
    }

    fn separate(&self, x: &OraclePoint, y: &OraclePoint) -> Option<(u64, u64)> {
        match (*x, *y) {
            _ if x == y => None,
            (OraclePoint::Aux(i), OraclePoint::Aux(j)) => {
                (self.aux.nbhd(i as usize) & self.aux.nbhd(j as usize)).is_empty().then_some((1, 1))
            }
            (OraclePoint::Aux(_), _) | (_, OraclePoint::Aux(_)) => Some((1, 1)),
            _ => Hedgehog.separate(x, y),
        }
    }

    fn approach_within(&self, x: &OraclePoint, within: &[BasicSet], count: usize) -> Option<Vec<OraclePoint>> {
        // no sequence of distinct points converges inside a finite summand
        if matches!(x, OraclePoint::Aux(_)) || within.iter().any(|b| matches!(b, BasicSet::Aux(_))) {
            return None;
        }
        Hedgehog.approach_within(x, within, count)
    }

    fn pick_in_closure_minus(&self, a: &BasicSet, b: &BasicSet) -> Option<OraclePoint> {
        match *a {
            BasicSet::Aux(s) => {
                let cl = self.aux.closure_within(self.aux.full(), s);
                cl.iter()
                    .map(|i| OraclePoint::Aux(i as u32))
                    .find(|p| !self.contains(b, p))
            }
            _ => Hedgehog.pick_in_closure_minus(a, b),
        }
    }
}

/// The hedgehog with stalk indices relabeled by the involution swapping
/// `2i-1` and `2i`. Points are presented in relabeled form; basic sets are
/// kept in the underlying coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PermutedHedgehog;

impl PermutedHedgehog {
    fn swap(n: u64) -> u64 {
        if n % 2 == 1 {
            n + 1
        } else {
            n - 1
        }
    }

    fn hide(p: &OraclePoint) -> OraclePoint {
        match *p {
            OraclePoint::Stalk(n) if n >= 1 => OraclePoint::Stalk(Self::swap(n)),
            OraclePoint::Tip(n, m) if n >= 1 => OraclePoint::Tip(Self::swap(n), m),
            p => p,
        }
    }

    // the relabeling is an involution
    fn show(p: &OraclePoint) -> OraclePoint {
        Self::hide(p)
    }
}

impl OracleSpace for PermutedHedgehog {
    type Point = OraclePoint;
    type Set = BasicSet;

    fn validate(&self, p: &OraclePoint) -> Result<(), OracleError> {
        Hedgehog.validate(p)
    }

    fn nbhd_base(&self, x: &OraclePoint, k: u64) -> BasicSet {
        Hedgehog.nbhd_base(&Self::hide(x), k)
    }

    fn contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        Hedgehog.contains(b, &Self::hide(p))
    }

    fn closure_contains(&self, b: &BasicSet, p: &OraclePoint) -> bool {
        Hedgehog.closure_contains(b, &Self::hide(p))
    }

    fn separate(&self, x: &OraclePoint, y: &OraclePoint) -> Option<(u64, u64)> {
        Hedgehog.separate(&Self::hide(x), &Self::hide(y))
    }

    fn approach_within(&self, x: &OraclePoint, within: &[BasicSet], count: usize) -> Option<Vec<OraclePoint>> {
        Hedgehog
            .approach_within(&Self::hide(x), within, count)
            .map(|v| v.iter().map(Self::show).collect())
    }

    fn pick_in_closure_minus(&self, a: &BasicSet, b: &BasicSet) -> Option<OraclePoint> {
        Hedgehog.pick_in_closure_minus(a, b).map(|p| Self::show(&p))
    }
}

/// Bound on the base indices tried when shrinking `V_n`.
pub const SHRINK_RETRIES: u64 = 64;

/// A map from the hedgehog into an oracle space, truncated at `depth`:
/// `h(∅) = root`, `h(n) = stalks[n-1]`, `h(n,m) = tips[n-1][m-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding<P, S> {
    pub depth: usize,
    pub root: P,
    pub u0_index: u64,
    /// Base index `k_n` at the root used for stalk `n`.
    pub k: Vec<u64>,
    pub stalks: Vec<P>,
    /// Neighborhood `V_n` of `h(n)`, disjoint from the root's base element
    /// `k_{n+1}`.
    pub v: Vec<S>,
    pub tips: Vec<Vec<P>>,
}

impl<P: Clone + fmt::Display, S: fmt::Display> Embedding<P, S> {
    pub fn image(&self, token: &OraclePoint) -> Option<P> {
        match *token {
            OraclePoint::Root => Some(self.root.clone()),
            OraclePoint::Stalk(n) => self.stalks.get((n as usize).checked_sub(1)?).cloned(),
            OraclePoint::Tip(n, m) => self
                .tips
                .get((n as usize).checked_sub(1)?)?
                .get((m as usize).checked_sub(1)?)
                .cloned(),
            OraclePoint::Aux(_) => None,
        }
    }

    /// Keeps only stalks and tips with index at most `depth`.
    pub fn truncated(&self, depth: usize) -> Self
    where
        S: Clone,
    {
        let d = depth.min(self.depth);
        Embedding {
            depth: d,
            root: self.root.clone(),
            u0_index: self.u0_index,
            k: self.k[..d].to_vec(),
            stalks: self.stalks[..d].to_vec(),
            v: self.v[..d].to_vec(),
            tips: self.tips[..d].iter().map(|t| t[..d].to_vec()).collect(),
        }
    }

    /// One `h(token) = point` line per hedgehog token up to the depth.
    pub fn render_table(&self) -> String {
        let mut out = format!("h(∅) = {}\n", self.root);
        for (i, s) in self.stalks.iter().enumerate() {
            let n = i + 1;
            out.push_str(&format!("h({n}) = {s}    [k_{n} = {}, V_{n} = {}]\n", self.k[i], self.v[i]));
            for (j, t) in self.tips[i].iter().enumerate() {
                out.push_str(&format!("h({n},{}) = {t}\n", j + 1));
            }
        }
        out
    }
}

/// Runs the construction at the point `x`, where the base element
/// `U0 = nbhd_base(x, u0_index)` contains the closure of no basic
/// neighborhood of `x`, for stalks and tips up to `depth`.
pub fn embed_hedgehog<O: OracleSpace>(
    o: &O,
    x: &O::Point,
    u0_index: u64,
    depth: usize,
) -> Result<Embedding<O::Point, O::Set>, OracleError> {
    o.validate(x)?;
    let u0 = o.nbhd_base(x, u0_index);
    for j in u0_index..=u0_index + depth as u64 {
        if o.pick_in_closure_minus(&o.nbhd_base(x, j), &u0).is_none() {
            return Err(OracleError::RegularAtPoint { index: j });
        }
    }
    let mut emb = Embedding {
        depth,
        root: x.clone(),
        u0_index,
        k: Vec::with_capacity(depth),
        stalks: Vec::with_capacity(depth),
        v: Vec::with_capacity(depth),
        tips: Vec::with_capacity(depth),
    };
    let mut k = u0_index;
    for n in 1..=depth {
        let base_k = o.nbhd_base(x, k);
        let xn = o
            .pick_in_closure_minus(&base_k, &u0)
            .ok_or_else(|| OracleError::OracleRefusal {
                step: format!("pick x_{n} in cl(U_{k}) minus U0"),
            })?;
        let (ix, jn) = o
            .separate(x, &xn)
            .ok_or_else(|| OracleError::NotHausdorffWitnessed {
                x: x.to_string(),
                y: xn.to_string(),
            })?;
        let next_k = ix.max(k + 1);
        // shrink V_n until its closure misses x_1 .. x_{n-1}
        let vn = (jn..jn + SHRINK_RETRIES)
            .map(|j| o.nbhd_base(&xn, j))
            .find(|v| emb.stalks.iter().all(|p| !o.closure_contains(v, p)))
            .ok_or_else(|| OracleError::OracleRefusal {
                step: format!("shrink V_{n} away from earlier stalk points"),
            })?;
        let tips = o
            .approach_within(&xn, &[vn.clone(), base_k], depth)
            .ok_or_else(|| OracleError::OracleRefusal {
                step: format!("sequence converging to x_{n} inside V_{n} ∩ U_{k}"),
            })?;
        emb.k.push(k);
        emb.stalks.push(xn);
        emb.v.push(vn);
        emb.tips.push(tips);
        k = next_k;
    }
    Ok(emb)
}

/// Clauses checked by [`verify_embedding`], all up to its depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub depth: usize,
    pub clauses: Vec<(&'static str, String)>,
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verified to depth {}", self.depth)?;
        for (name, detail) in &self.clauses {
            writeln!(f, "{name}: ok ({detail})")?;
        }
        Ok(())
    }
}

fn fail(clause: &'static str, detail: String) -> OracleError {
    OracleError::VerificationFailure { clause, detail }
}

/// Checks distinctness, the two convergence patterns, isolation of the
/// stalk groups and tips, and that stalk images avoid `U0` while lying in
/// the closures `cl(U_{k_n})`.
pub fn verify_embedding<O: OracleSpace>(
    o: &O,
    e: &Embedding<O::Point, O::Set>,
    depth: usize,
) -> Result<EmbeddingReport, OracleError> {
    if depth > e.depth {
        return Err(fail(
            "depth",
            format!("embedding only reaches depth {}, asked for {depth}", e.depth),
        ));
    }
    let d = depth;
    let root = &e.root;
    let stalk = |n: usize| &e.stalks[n - 1];
    let tip = |n: usize, m: usize| &e.tips[n - 1][m - 1];
    let mut clauses = Vec::new();

    let mut seen = HashSet::new();
    seen.insert(root.clone());
    for n in 1..=d {
        if !seen.insert(stalk(n).clone()) {
            return Err(fail("distinctness", format!("h({n}) = {} repeats", stalk(n))));
        }
        for m in 1..=d {
            if !seen.insert(tip(n, m).clone()) {
                return Err(fail("distinctness", format!("h({n},{m}) = {} repeats", tip(n, m))));
            }
        }
    }
    clauses.push(("distinctness", format!("{} image points", seen.len())));

    for n in 1..=d {
        for k in 1..=d as u64 {
            let b = o.nbhd_base(stalk(n), k);
            let tail = (1..=d).rev().take_while(|&m| o.contains(&b, tip(n, m))).count();
            if tail == 0 {
                return Err(fail(
                    "stalk convergence",
                    format!("h({n},m) never enters base element {k} at h({n})"),
                ));
            }
        }
    }
    clauses.push(("stalk convergence", format!("h(n,m) → h(n) for n ≤ {d}")));

    for k in 1..=d as u64 {
        let b = o.nbhd_base(root, k);
        let inside = |i: usize| (1..=d).all(|j| o.contains(&b, tip(i, j)));
        let rows = (1..=d).rev().take_while(|&i| inside(i)).count();
        if rows == 0 {
            return Err(fail(
                "root convergence",
                format!("rows of tips never enter base element {k} at the root"),
            ));
        }
    }
    clauses.push(("root convergence", format!("h(i,j) → h(∅) as i grows, i ≤ {d}")));

    for n in 1..=d {
        let v = &e.v[n - 1];
        if !o.contains(v, stalk(n)) || !(1..=d).all(|m| o.contains(v, tip(n, m))) {
            return Err(fail("stalk isolation", format!("V_{n} misses part of stalk {n}")));
        }
        let intruder = std::iter::once(root)
            .chain((1..=d).filter(|&i| i != n).flat_map(|i| {
                std::iter::once(stalk(i)).chain((1..=d).map(move |j| tip(i, j)))
            }))
            .find(|p| o.contains(v, p));
        if let Some(p) = intruder {
            return Err(fail("stalk isolation", format!("V_{n} = {v} contains {p}")));
        }
        for m in 1..=d {
            let t = tip(n, m);
            let isolated = (1..=SHRINK_RETRIES).any(|k| {
                let b = o.nbhd_base(t, k);
                seen.iter().all(|p| p == t || !o.contains(&b, p))
            });
            if !isolated {
                return Err(fail("tip isolation", format!("h({n},{m}) = {t} is not isolated")));
            }
        }
    }
    clauses.push(("isolation", "stalk groups separated by V_n, tips isolated".to_string()));

    let u0 = o.nbhd_base(root, e.u0_index);
    for n in 1..=d {
        if o.contains(&u0, stalk(n)) {
            return Err(fail("non-regularity", format!("h({n}) lies in U0 = {u0}")));
        }
        let base = o.nbhd_base(root, e.k[n - 1]);
        if !o.closure_contains(&base, stalk(n)) {
            return Err(fail("non-regularity", format!("h({n}) is not in cl({base})")));
        }
    }
    clauses.push(("non-regularity", format!("h(n) ∈ cl(U_k_n) ∖ U0 for n ≤ {d}")));

    Ok(EmbeddingReport { depth: d, clauses })
}

/// One removal step of the scattered-layer check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteredLayer {
    pub kind: &'static str,
    pub points: usize,
}

/// Hedgehog properties, each checked up to `depth`; `None` when the depth
/// is zero and nothing was checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HedgehogProfile {
    pub depth: usize,
    pub first_countable: Option<bool>,
    pub scattered: Option<bool>,
    pub layers: Vec<ScatteredLayer>,
    pub locally_regular: Option<bool>,
    pub regular: Option<bool>,
    /// `(k, p)` with `p ∈ cl(U(k)) ∖ U(1)`.
    pub root_witnesses: Vec<(u64, OraclePoint)>,
}

impl fmt::Display for HedgehogProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth: {}", self.depth)?;
        let show = |v: Option<bool>| v.map_or("unchecked".to_string(), |b| b.to_string());
        writeln!(f, "first_countable: {} (verified to depth {})", show(self.first_countable), self.depth)?;
        writeln!(f, "scattered: {} (verified to depth {})", show(self.scattered), self.depth)?;
        for (i, l) in self.layers.iter().enumerate() {
            let unit = if l.points == 1 { "point" } else { "points" };
            writeln!(f, "  layer {i}: {} isolated ({} {unit})", l.kind, l.points)?;
        }
        writeln!(f, "locally_regular: {} (verified to depth {})", show(self.locally_regular), self.depth)?;
        writeln!(f, "regular: {}", show(self.regular))?;
        for (k, p) in &self.root_witnesses {
            writeln!(f, "  root witness: {p} ∈ cl(U({k})) ∖ U(1)")?;
        }
        Ok(())
    }
}

fn tokens(depth: u64) -> Vec<OraclePoint> {
    let mut out = vec![OraclePoint::Root];
    out.extend((1..=depth).map(OraclePoint::Stalk));
    for n in 1..=depth {
        out.extend((1..=depth).map(|m| OraclePoint::Tip(n, m)));
    }
    out
}

fn kind(p: &OraclePoint) -> usize {
    match p {
        OraclePoint::Tip(..) => 0,
        OraclePoint::Stalk(_) => 1,
        OraclePoint::Root => 2,
        OraclePoint::Aux(_) => 3,
    }
}

/// Whether `b` meets a point other than `x` among the kinds still present
/// (`present[kind]`). Exact, since every basic set other than a singleton
/// holds infinitely many tips.
fn meets_other(b: &BasicSet, x: &OraclePoint, present: &[bool; 3]) -> bool {
    match *b {
        BasicSet::Point(p) => p != *x && present[kind(&p)],
        BasicSet::Root(_) => present[0] || (present[2] && *x != OraclePoint::Root),
        BasicSet::Stalk(n, _) => present[0] || (present[1] && *x != OraclePoint::Stalk(n)),
        BasicSet::Aux(_) => false,
    }
}

/// Checks first countability, scatteredness by layer removal, local
/// regularity and non-regularity at the root, up to `depth`.
pub fn certify_hedgehog_profile(depth: usize) -> HedgehogProfile {
    let mut profile = HedgehogProfile {
        depth,
        first_countable: None,
        scattered: None,
        layers: Vec::new(),
        locally_regular: None,
        regular: None,
        root_witnesses: Vec::new(),
    };
    if depth == 0 {
        return profile;
    }
    let h = Hedgehog;
    let d = depth as u64;
    let pts = tokens(d);

    // each base is decreasing and cofinal among the generating sets
    let generators: Vec<BasicSet> = (1..=d)
        .map(BasicSet::Root)
        .chain((1..=d).flat_map(|n| (1..=d).map(move |m| BasicSet::Stalk(n, m))))
        .chain(pts.iter().filter(|p| kind(p) == 0).map(|&p| BasicSet::Point(p)))
        .collect();
    let first_countable = pts.iter().all(|x| {
        (1..=d).all(|k| {
            let b = h.nbhd_base(x, k);
            h.contains(&b, x) && h.subset(&h.nbhd_base(x, k + 1), &b)
        }) && generators
            .iter()
            .filter(|g| h.contains(g, x))
            .all(|g| (1..=d + 1).any(|k| h.subset(&h.nbhd_base(x, k), g)))
    });
    profile.first_countable = Some(first_countable);

    // remove tips, then stalks, then the root, each kind isolated in what remains
    let mut present = [true; 3];
    let mut remaining: Vec<OraclePoint> = pts.clone();
    for k in 0..3 {
        let layer: Vec<OraclePoint> = remaining.iter().copied().filter(|p| kind(p) == k).collect();
        let isolated = layer
            .iter()
            .all(|x| (1..=d).any(|j| !meets_other(&h.nbhd_base(x, j), x, &present)));
        if !isolated {
            break;
        }
        profile.layers.push(ScatteredLayer {
            kind: ["tips", "stalks", "root"][k],
            points: layer.len(),
        });
        present[k] = false;
        remaining.retain(|p| kind(p) != k);
    }
    profile.scattered = Some(remaining.is_empty());

    // open cover: tip singletons, U(n,1) at stalks, U(1) at the root; each
    // member is regular: basic neighborhoods inside it are relatively closed
    let cover: Vec<BasicSet> = std::iter::once(BasicSet::Root(1))
        .chain((1..=d).map(|n| BasicSet::Stalk(n, 1)))
        .chain(pts.iter().filter(|p| kind(p) == 0).map(|&p| BasicSet::Point(p)))
        .collect();
    let probe = tokens(d + 1);
    let locally_regular = pts.iter().all(|x| cover.iter().any(|w| h.contains(w, x)))
        && cover.iter().all(|w| {
            let inside: Vec<&OraclePoint> = probe.iter().filter(|p| h.contains(w, p)).collect();
            let bases: HashSet<BasicSet> = pts
                .iter()
                .filter(|y| h.contains(w, y))
                .flat_map(|y| (1..=d).map(move |k| h.nbhd_base(y, k)))
                .collect();
            bases
                .iter()
                .all(|b| inside.iter().all(|p| !h.closure_contains(b, p) || h.contains(b, p)))
        });
    profile.locally_regular = Some(locally_regular);

    let u1 = BasicSet::Root(1);
    for k in 1..=d {
        let uk = BasicSet::Root(k);
        if let Some(p) = h.pick_in_closure_minus(&uk, &u1) {
            if h.closure_contains(&uk, &p) && !h.contains(&u1, &p) {
                profile.root_witnesses.push((k, p));
            }
        }
    }
    profile.regular = Some(profile.root_witnesses.len() != depth);
    profile
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let h = hedgehog();
        // U(1,1) is clopen: U(2) ∋ ∅ misses it
        assert!(!h.closure_contains(&BasicSet::Stalk(1, 1), &OraclePoint::Root));
        assert!(!h.closure_contains(&BasicSet::Root(2), &OraclePoint::Stalk(1)));
        assert!(!h.contains(&BasicSet::Root(3), &OraclePoint::Tip(2, 5)));
        assert!(h.closure_contains(&BasicSet::Root(2), &OraclePoint::Stalk(2)));
        assert!(matches!(h.validate(&OraclePoint::Tip(0, 3)), Err(OracleError::MalformedToken(_))));
    }

    #[test]
    fn tokens_parse_and_print() {
        for p in [OraclePoint::Root, OraclePoint::Stalk(4), OraclePoint::Tip(2, 9), OraclePoint::Aux(1)] {
            assert_eq!(p.to_string().parse::<OraclePoint>(), Ok(p));
        }
        for bad in ["(0)", "(1,0)", "(1,2,3)", "x", "(a)", "aux-1"] {
            assert!(bad.parse::<OraclePoint>().is_err(), "{bad}");
        }
    }

    #[test]
    fn picks_least_token() {
        let h = hedgehog();
        assert_eq!(
            h.pick_in_closure_minus(&BasicSet::Root(3), &BasicSet::Root(1)),
            Some(OraclePoint::Stalk(3))
        );
        assert_eq!(
            h.pick_in_closure_minus(&BasicSet::Root(3), &BasicSet::Stalk(3, 1)),
            Some(OraclePoint::Root)
        );
        assert_eq!(
            h.pick_in_closure_minus(&BasicSet::Stalk(2, 4), &BasicSet::Stalk(2, 6)),
            Some(OraclePoint::Tip(2, 4))
        );
        assert_eq!(h.pick_in_closure_minus(&BasicSet::Stalk(2, 4), &BasicSet::Stalk(2, 1)), None);
    }

    #[test]
    fn separation_is_disjoint() {
        let h = hedgehog();
        let pts = tokens(4);
        for x in &pts {
            for y in &pts {
                match h.separate(x, y) {
                    None => assert_eq!(x, y),
                    Some((i, j)) => assert!(h.disjoint(&h.nbhd_base(x, i), &h.nbhd_base(y, j)), "{x} {y}"),
                }
            }
        }
    }

    #[test]
    fn profile_depth_zero_and_one() {
        let p = certify_hedgehog_profile(0);
        assert!(p.layers.is_empty() && p.root_witnesses.is_empty() && p.regular.is_none());
        let p = certify_hedgehog_profile(1);
        let kinds: Vec<&str> = p.layers.iter().map(|l| l.kind).collect();
        assert_eq!(kinds, vec!["tips", "stalks", "root"]);
        assert_eq!(p.scattered, Some(true));
    }

    #[test]
    fn embedding_identity_on_hedgehog() {
        let h = hedgehog();
        let e = embed_hedgehog(&h, &OraclePoint::Root, 1, 5).unwrap();
        for n in 1..=5u64 {
            assert_eq!(e.image(&OraclePoint::Stalk(n)), Some(OraclePoint::Stalk(n)));
            for m in 1..=5u64 {
                assert_eq!(e.image(&OraclePoint::Tip(n, m)), Some(OraclePoint::Tip(n, m)));
            }
        }
        verify_embedding(&h, &e, 5).unwrap();
    }

    #[test]
    fn regular_point_is_rejected() {
        let h = hedgehog();
        assert!(matches!(
            embed_hedgehog(&h, &OraclePoint::Stalk(3), 1, 4),
            Err(OracleError::RegularAtPoint { .. })
        ));
    }
}
