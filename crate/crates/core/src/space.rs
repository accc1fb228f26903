//! Finite topological spaces in minimal-neighborhood form.
//!
//! Every finite topology is determined by the smallest open set `N(x)`
//! containing each point `x`. A [`FinSpace`] stores exactly these sets as bit
//! masks over the declaration order of its points, so closure, interior and
//! θ-interior all reduce to a handful of word operations per point.
//!
//! Most operations come in two flavours: a checked one over [`PointSet`]s of
//! the whole space, and a `*_within` variant that works relative to a
//! subspace `A` given as a mask of the ambient space. The relative variants
//! never re-index points, which is what the exhaustive deciders rely on.

use std::collections::HashSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TopoError};

/// Largest number of points a [`FinSpace`] may carry.
pub const MAX_POINTS: usize = 24;

/// A subset of the points of some [`FinSpace`], as a bit mask over
/// declaration order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }

    /// The set `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 32 {
            PointSet(u32::MAX)
        } else {
            PointSet((1u32 << n) - 1)
        }
    }

    pub const fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self` in increasing mask order, starting with ∅.
    pub fn subsets(self) -> impl Iterator<Item = PointSet> {
        let a = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            // standard submask walk, run upwards
            next = if cur == a { None } else { Some((cur.wrapping_sub(a)) & a) };
            Some(PointSet(cur))
        })
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & !rhs.0)
    }
}

impl Not for PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        PointSet(!self.0)
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// A finite topological space stored as one minimal open neighborhood per
/// point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSpace {
    names: Vec<String>,
    nbhd: Vec<PointSet>,
}

impl FinSpace {
    /// Validates and builds a space from point names and their minimal
    /// neighborhoods (given as masks over the same order).
    pub fn from_masks(names: Vec<String>, nbhd: Vec<PointSet>) -> Result<Self> {
        let n = names.len();
        if n > MAX_POINTS {
            return Err(TopoError::TooManyPoints { n, cap: MAX_POINTS });
        }
        if nbhd.len() != n {
            return Err(TopoError::Input(format!(
                "{} points but {} neighborhoods",
                n,
                nbhd.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(TopoError::DuplicatePoint(name.clone()));
            }
        }
        let full = PointSet::full(n);
        for (x, &u) in nbhd.iter().enumerate() {
            if !u.is_subset(full) {
                return Err(TopoError::ForeignSet);
            }
            if !u.contains(x) {
                return Err(TopoError::MissingSelf(names[x].clone()));
            }
        }
        for (x, &u) in nbhd.iter().enumerate() {
            for y in u.iter() {
                if !nbhd[y].is_subset(u) {
                    return Err(TopoError::CoherenceViolation {
                        outer: names[x].clone(),
                        inner: names[y].clone(),
                    });
                }
            }
        }
        Ok(FinSpace { names, nbhd })
    }

    /// Builds a space on points named `0, 1, ..` from raw masks.
    pub fn from_index_masks(nbhd: &[u32]) -> Result<Self> {
        let names = (0..nbhd.len()).map(|i| i.to_string()).collect();
        Self::from_masks(names, nbhd.iter().map(|&b| PointSet(b)).collect())
    }

    /// Trusted constructor for masks already known to be coherent.
    pub(crate) fn from_index_masks_unchecked(nbhd: &[u32]) -> Self {
        FinSpace {
            names: (0..nbhd.len()).map(|i| i.to_string()).collect(),
            nbhd: nbhd.iter().map(|&b| PointSet(b)).collect(),
        }
    }

    /// Builds a space from `(point, minimal neighborhood)` pairs, in order.
    ///
    /// ```
    /// use topo_core::FinSpace;
    /// let s = FinSpace::from_lists(&[("a", &["a"]), ("b", &["a", "b"])]).unwrap();
    /// assert_eq!(s.len(), 2);
    /// ```
    pub fn from_lists(spec: &[(&str, &[&str])]) -> Result<Self> {
        let points: Vec<String> = spec.iter().map(|(p, _)| p.to_string()).collect();
        let mut map = IndexMap::new();
        for (p, u) in spec {
            map.insert(p.to_string(), u.iter().map(|s| s.to_string()).collect());
        }
        Self::build(points, &map)
    }

    /// Validates a space given by named points and a name-keyed neighborhood
    /// map.
    pub fn build(points: Vec<String>, min_nbhd: &IndexMap<String, Vec<String>>) -> Result<Self> {
        if points.len() > MAX_POINTS {
            return Err(TopoError::TooManyPoints {
                n: points.len(),
                cap: MAX_POINTS,
            });
        }
        let index = |name: &str| {
            points
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| TopoError::UnknownPoint(name.to_string()))
        };
        for key in min_nbhd.keys() {
            index(key)?;
        }
        let mut masks = Vec::with_capacity(points.len());
        for p in &points {
            let list = min_nbhd
                .get(p)
                .ok_or_else(|| TopoError::MissingNeighborhood(p.clone()))?;
            let mut u = PointSet::EMPTY;
            for q in list {
                u.insert(index(q)?);
            }
            masks.push(u);
        }
        Self::from_masks(points, masks)
    }

    /// Builds a space from an explicit family of open sets. The family must
    /// be closed under pairwise union and intersection; ∅ and the whole set
    /// are added if absent.
    pub fn from_opens(points: Vec<String>, opens: &[Vec<String>]) -> Result<Self> {
        let n = points.len();
        if n > MAX_POINTS {
            return Err(TopoError::TooManyPoints { n, cap: MAX_POINTS });
        }
        let mut family: HashSet<PointSet> = HashSet::new();
        family.insert(PointSet::EMPTY);
        family.insert(PointSet::full(n));
        for open in opens {
            let mut u = PointSet::EMPTY;
            for q in open {
                let i = points
                    .iter()
                    .position(|p| p == q)
                    .ok_or_else(|| TopoError::UnknownPoint(q.clone()))?;
                u.insert(i);
            }
            family.insert(u);
        }
        let list: Vec<PointSet> = family.iter().copied().collect();
        for &u in &list {
            for &v in &list {
                if !family.contains(&(u | v)) || !family.contains(&(u & v)) {
                    return Err(TopoError::NotATopology(format!(
                        "family is not closed under union and intersection (check {} and {})",
                        fmt_set(&points, u),
                        fmt_set(&points, v)
                    )));
                }
            }
        }
        let nbhd = (0..n)
            .map(|x| {
                list.iter()
                    .filter(|u| u.contains(x))
                    .fold(PointSet::full(n), |acc, &u| acc & u)
            })
            .collect();
        Self::from_masks(points, nbhd)
    }

    pub fn empty() -> Self {
        FinSpace {
            names: Vec::new(),
            nbhd: Vec::new(),
        }
    }

    /// The one-point space `{0}`.
    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// Discrete space on points `0..n`.
    pub fn discrete(n: usize) -> Self {
        let masks: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        Self::from_index_masks(&masks).expect("discrete masks are coherent")
    }

    /// Indiscrete space on points `0..n`.
    pub fn indiscrete(n: usize) -> Self {
        let full = PointSet::full(n).bits();
        Self::from_index_masks(&vec![full; n]).expect("indiscrete masks are coherent")
    }

    /// The Sierpiński space (connected doubleton) on `{0, 1}` with `{0}` open.
    pub fn sierpinski() -> Self {
        Self::from_index_masks(&[0b01, 0b11]).expect("sierpinski masks are coherent")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
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
            .position(|p| p == name)
            .ok_or_else(|| TopoError::UnknownPoint(name.to_string()))
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// Minimal open neighborhood of point `x`.
    #[inline]
    pub fn nbhd(&self, x: usize) -> PointSet {
        self.nbhd[x]
    }

    pub fn nbhds(&self) -> &[PointSet] {
        &self.nbhd
    }

    /// Named subset of this space.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<PointSet>>()
    }

    pub fn check(&self, s: PointSet) -> Result<()> {
        if s.is_subset(self.full()) {
            Ok(())
        } else {
            Err(TopoError::ForeignSet)
        }
    }

    pub fn closure(&self, s: PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.closure_within(self.full(), s))
    }

    pub fn interior(&self, s: PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.interior_within(self.full(), s))
    }

    /// Points of `s` having a neighborhood whose closure stays inside `s`.
    ///
    /// The minimal neighborhood has the smallest closure, so it is the only
    /// witness that needs testing. The result is not idempotent in general;
    /// see [`FinSpace::largest_theta_open`].
    pub fn theta_interior(&self, s: PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.theta_interior_within(self.full(), s))
    }

    /// The largest θ-open subset of `s` (union of all θ-open subsets).
    pub fn largest_theta_open(&self, s: PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.largest_theta_open_within(self.full(), s))
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.interior_within(self.full(), s) == s
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(self.full() - s)
    }

    pub fn is_theta_open(&self, s: PointSet) -> bool {
        self.is_theta_open_within(self.full(), s)
    }

    /// Closure of `s` relative to the subspace `a` (`s ⊆ a`).
    #[inline]
    pub fn closure_within(&self, a: PointSet, s: PointSet) -> PointSet {
        a.iter()
            .filter(|&x| !(self.nbhd[x] & s).is_empty())
            .collect()
    }

    /// Interior of `s` relative to the subspace `a` (`s ⊆ a`).
    #[inline]
    pub fn interior_within(&self, a: PointSet, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| (self.nbhd[x] & a).is_subset(s))
            .collect()
    }

    /// θ-interior of `s` relative to the subspace `a` (`s ⊆ a`).
    #[inline]
    pub fn theta_interior_within(&self, a: PointSet, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.closure_within(a, self.nbhd[x] & a).is_subset(s))
            .collect()
    }

    pub fn is_theta_open_within(&self, a: PointSet, s: PointSet) -> bool {
        self.theta_interior_within(a, s) == s
    }

    /// Greatest fixpoint of the θ-interior below `s`, relative to `a`.
    pub fn largest_theta_open_within(&self, a: PointSet, s: PointSet) -> PointSet {
        let mut cur = s;
        loop {
            let next = self.theta_interior_within(a, cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Whether `a`, as a subspace, has all minimal neighborhoods closed.
    #[inline]
    pub fn is_regular_within(&self, a: PointSet) -> bool {
        a.iter().all(|x| {
            let u = self.nbhd[x] & a;
            self.closure_within(a, u).is_subset(u)
        })
    }

    /// The subspace on `a`, keeping declaration order and names.
    pub fn subspace(&self, a: PointSet) -> Result<FinSpace> {
        self.check(a)?;
        let idx: Vec<usize> = a.iter().collect();
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let nbhd = idx
            .iter()
            .map(|&x| {
                idx.iter()
                    .enumerate()
                    .filter(|&(_, &y)| self.nbhd[x].contains(y))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(FinSpace { names, nbhd })
    }

    /// Positions, inside `subspace(a)`, of the members of `s ⊆ a`.
    pub fn restrict_set(&self, a: PointSet, s: PointSet) -> PointSet {
        a.iter()
            .enumerate()
            .filter(|&(_, x)| s.contains(x))
            .map(|(j, _)| j)
            .collect()
    }

    /// Disjoint union; point `p` of summand `i` becomes `i:p`.
    pub fn topological_sum(spaces: &[FinSpace]) -> Result<FinSpace> {
        let total: usize = spaces.iter().map(FinSpace::len).sum();
        if total > MAX_POINTS {
            return Err(TopoError::TooManyPoints {
                n: total,
                cap: MAX_POINTS,
            });
        }
        let mut names = Vec::with_capacity(total);
        let mut nbhd = Vec::with_capacity(total);
        let mut offset = 0;
        for (i, s) in spaces.iter().enumerate() {
            for (x, name) in s.names.iter().enumerate() {
                names.push(format!("{i}:{name}"));
                nbhd.push(PointSet(s.nbhd[x].bits() << offset));
            }
            offset += s.len();
        }
        Ok(FinSpace { names, nbhd })
    }

    /// Same points, but every neighborhood cut down to its block of
    /// `blocks` (which must partition the space). This is the sum of the
    /// block subspaces with the original point names kept.
    pub fn partition_sum(&self, blocks: &[PointSet]) -> Result<FinSpace> {
        let mut seen = PointSet::EMPTY;
        for &b in blocks {
            self.check(b)?;
            if !(seen & b).is_empty() {
                return Err(TopoError::Input("blocks overlap".into()));
            }
            seen = seen | b;
        }
        if seen != self.full() {
            return Err(TopoError::Input("blocks do not cover the space".into()));
        }
        let nbhd = (0..self.len())
            .map(|x| {
                let b = blocks.iter().find(|b| b.contains(x)).copied().unwrap();
                self.nbhd[x] & b
            })
            .collect();
        Ok(FinSpace {
            names: self.names.clone(),
            nbhd,
        })
    }

    /// Every singleton closed; on a finite space this means discrete.
    pub fn is_t1(&self) -> bool {
        (0..self.len()).all(|x| self.nbhd[x] == PointSet::singleton(x))
    }

    /// All open sets, in increasing mask order.
    pub fn open_sets(&self) -> Vec<PointSet> {
        let mut family: HashSet<PointSet> = HashSet::new();
        family.insert(PointSet::EMPTY);
        let mut frontier = vec![PointSet::EMPTY];
        while let Some(u) = frontier.pop() {
            for &v in &self.nbhd {
                let w = u | v;
                if family.insert(w) {
                    frontier.push(w);
                }
            }
        }
        let mut out: Vec<PointSet> = family.into_iter().collect();
        out.sort();
        out
    }

    /// Renames points; the names must stay distinct.
    pub fn with_names(&self, names: Vec<String>) -> Result<FinSpace> {
        Self::from_masks(names, self.nbhd.clone())
    }

    /// `{a,b}` rendering of a set, using point names.
    pub fn fmt_set(&self, s: PointSet) -> String {
        fmt_set(&self.names, s)
    }

    pub fn to_file(&self) -> SpaceFile {
        let min_nbhds = self
            .names
            .iter()
            .enumerate()
            .map(|(x, name)| {
                (
                    name.clone(),
                    self.nbhd[x].iter().map(|y| self.names[y].clone()).collect(),
                )
            })
            .collect();
        SpaceFile::MinNbhds {
            points: self.names.clone(),
            min_nbhds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("space serializes")
    }

    pub fn from_json(text: &str) -> Result<FinSpace> {
        let file: SpaceFile = serde_json::from_str(text)?;
        file.into_space()
    }
}

pub(crate) fn fmt_set(names: &[String], s: PointSet) -> String {
    let inner: Vec<&str> = s.iter().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for FinSpace {
    /// `(a:{a}, b:{a,b})`: each point followed by its minimal neighborhood.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (x, name) in self.names.iter().enumerate() {
            if x > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", name, self.fmt_set(self.nbhd[x]))?;
        }
        write!(f, ")")
    }
}

/// On-disk form of a space: minimal neighborhoods, or an explicit open
/// family.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum SpaceFile {
    MinNbhds {
        points: Vec<String>,
        min_nbhds: IndexMap<String, Vec<String>>,
    },
    Opens {
        points: Vec<String>,
        opens: Vec<Vec<String>>,
    },
}

impl SpaceFile {
    pub fn into_space(self) -> Result<FinSpace> {
        match self {
            SpaceFile::MinNbhds { points, min_nbhds } => FinSpace::build(points, &min_nbhds),
            SpaceFile::Opens { points, opens } => FinSpace::from_opens(points, &opens),
        }
    }
}
