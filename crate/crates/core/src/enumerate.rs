//! Exhaustive generation of finite topologies.
//!
//! Labeled topologies on `{0, .., n-1}` are produced two independent ways:
//! by backtracking over coherent minimal-neighborhood vectors, and by
//! building open-set families closed under union and intersection. Classes
//! up to homeomorphism are represented by their canonical form, the
//! lexicographically least neighborhood vector over all relabelings.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Result, TopoError};
use crate::space::{FinSpace, PointSet};

pub const LABELED_CAP: usize = 6;
pub const HOMEO_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Labeled,
    UpToHomeomorphism,
}

/// Spaces of one point count, in canonical order.
#[derive(Clone, Debug)]
pub struct SpaceStream {
    pub n: usize,
    pub mode: Mode,
    spaces: std::vec::IntoIter<FinSpace>,
}

impl Iterator for SpaceStream {
    type Item = FinSpace;
    fn next(&mut self) -> Option<FinSpace> {
        self.spaces.next()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.spaces.size_hint()
    }
}

impl ExactSizeIterator for SpaceStream {}

pub fn enumerate_spaces(n: usize, mode: Mode) -> Result<SpaceStream> {
    let (cap, what) = match mode {
        Mode::Labeled => (LABELED_CAP, "labeled enumeration size"),
        Mode::UpToHomeomorphism => (HOMEO_CAP, "homeomorphism enumeration size"),
    };
    if n > cap {
        return Err(TopoError::CapExceeded { what, value: n, cap });
    }
    let spaces = match mode {
        Mode::Labeled => labeled_spaces(n),
        Mode::UpToHomeomorphism => homeomorphism_classes(n),
    };
    Ok(SpaceStream {
        n,
        mode,
        spaces: spaces.into_iter(),
    })
}

/// All labeled topologies on `n` points, ordered lexicographically by their
/// neighborhood vectors.
pub fn labeled_spaces(n: usize) -> Vec<FinSpace> {
    labeled_masks(n)
        .iter()
        .map(|m| FinSpace::from_index_masks_unchecked(m))
        .collect()
}

/// Neighborhood vectors of all labeled topologies, by backtracking over
/// points: each new neighborhood must contain its point and be coherent
/// with every neighborhood chosen so far.
pub fn labeled_masks(n: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let x = cur.len();
        if x == n {
            out.push(cur.clone());
            return;
        }
        let bit = 1u32 << x;
        for u in 0..(1u32 << n) {
            if u & bit == 0 {
                continue;
            }
            let ok = cur.iter().enumerate().all(|(y, &v)| {
                let yb = 1u32 << y;
                (u & yb == 0 || v & !u == 0) && (v & bit == 0 || u & !v == 0)
            });
            if ok {
                cur.push(u);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Neighborhood vectors of all labeled topologies, built as open-set
/// families: subsets are decided in increasing order, with unions of
/// accepted sets forced in and intersections required to be present.
pub fn labeled_masks_via_open_families(n: usize) -> Vec<Vec<u32>> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Open,
        Forced,
        Rejected,
        Undecided,
    }
    struct Search {
        n: usize,
        full: u32,
        state: Vec<State>,
        opens: Vec<u32>,
        out: Vec<Vec<u32>>,
    }
    impl Search {
        fn go(&mut self, s: u32) {
            if s == self.full {
                let nbhd = (0..self.n)
                    .map(|x| {
                        self.opens
                            .iter()
                            .filter(|&&u| u & (1 << x) != 0)
                            .fold(self.full, |acc, &u| acc & u)
                    })
                    .collect();
                self.out.push(nbhd);
                return;
            }
            let i = s as usize;
            if self.state[i] != State::Forced {
                self.state[i] = State::Rejected;
                self.go(s + 1);
                self.state[i] = State::Undecided;
            }
            // try accepting s
            let was = self.state[i];
            let mut forced = Vec::new();
            let mut ok = true;
            for k in 0..self.opens.len() {
                let t = self.opens[k];
                let meet = (s & t) as usize;
                if meet != i && self.state[meet] != State::Open {
                    ok = false;
                    break;
                }
                let join = (s | t) as usize;
                if join != i {
                    match self.state[join] {
                        State::Rejected => {
                            ok = false;
                            break;
                        }
                        State::Undecided => {
                            self.state[join] = State::Forced;
                            forced.push(join);
                        }
                        _ => {}
                    }
                }
            }
            if ok {
                self.state[i] = State::Open;
                self.opens.push(s);
                self.go(s + 1);
                self.opens.pop();
            }
            self.state[i] = was;
            for j in forced {
                self.state[j] = State::Undecided;
            }
        }
    }
    let full = PointSet::full(n).bits();
    let size = 1usize << n;
    let mut state = vec![State::Undecided; size];
    state[0] = State::Open;
    state[full as usize] = State::Open;
    let mut search = Search {
        n,
        full,
        state,
        opens: vec![0, full],
        out: Vec::new(),
    };
    if n == 0 {
        return vec![Vec::new()];
    }
    search.go(1);
    search.out.sort();
    search.out
}

/// `perm[x]` is the new index of old point `x`.
pub fn relabel_masks(nbhd: &[PointSet], perm: &[usize]) -> Vec<u32> {
    let mut out = vec![0u32; nbhd.len()];
    for (x, &u) in nbhd.iter().enumerate() {
        out[perm[x]] = u.iter().fold(0u32, |acc, y| acc | (1 << perm[y]));
    }
    out
}

/// Lexicographically least neighborhood vector over all relabelings.
pub fn canonical_masks(space: &FinSpace) -> Vec<u32> {
    let n = space.len();
    let nbhd = space.nbhds();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = relabel_masks(nbhd, &perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let cand = relabel_masks(nbhd, &perm);
            if cand < best {
                best = cand;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// The canonical representative, with points named `0..n`.
pub fn canonicalize(space: &FinSpace) -> FinSpace {
    FinSpace::from_index_masks_unchecked(&canonical_masks(space))
}

fn invariant(space: &FinSpace) -> Vec<(usize, usize)> {
    let n = space.len();
    let mut inv: Vec<(usize, usize)> = (0..n)
        .map(|x| {
            let up = (0..n).filter(|&y| space.nbhd(y).contains(x)).count();
            (space.nbhd(x).len(), up)
        })
        .collect();
    inv.sort();
    inv
}

/// Searches for a bijection carrying minimal neighborhoods onto minimal
/// neighborhoods.
pub fn are_homeomorphic(a: &FinSpace, b: &FinSpace) -> bool {
    if a.len() != b.len() || invariant(a) != invariant(b) {
        return false;
    }
    let n = a.len();
    let sig = |s: &FinSpace, x: usize| {
        let up = (0..n).filter(|&y| s.nbhd(y).contains(x)).count();
        (s.nbhd(x).len(), up)
    };
    let sa: Vec<_> = (0..n).map(|x| sig(a, x)).collect();
    let sb: Vec<_> = (0..n).map(|x| sig(b, x)).collect();
    fn go(a: &FinSpace, b: &FinSpace, sa: &[(usize, usize)], sb: &[(usize, usize)], img: &mut Vec<usize>, used: u32) -> bool {
        let x = img.len();
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used & (1 << y) != 0 || sa[x] != sb[y] {
                continue;
            }
            let ok = img.iter().enumerate().all(|(w, &z)| {
                a.nbhd(x).contains(w) == b.nbhd(y).contains(z) && a.nbhd(w).contains(x) == b.nbhd(z).contains(y)
            }) && a.nbhd(x).contains(x) == b.nbhd(y).contains(y);
            if ok {
                img.push(y);
                if go(a, b, sa, sb, img, used | (1 << y)) {
                    return true;
                }
                img.pop();
            }
        }
        false
    }
    go(a, b, &sa, &sb, &mut Vec::with_capacity(n), 0)
}

/// One canonical representative per homeomorphism class, sorted by
/// canonical vector. Classes on `n` points are grown from those on `n - 1`
/// by adding a point in every coherent way and keeping one space per class.
pub fn homeomorphism_classes(n: usize) -> Vec<FinSpace> {
    homeomorphism_class_masks(n)
        .iter()
        .map(|m| FinSpace::from_index_masks_unchecked(m))
        .collect()
}

pub fn homeomorphism_class_masks(n: usize) -> Vec<Vec<u32>> {
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for k in 1..=n {
        let old = k - 1;
        let p = old;
        let pbit = 1u32 << p;
        let mut buckets: HashMap<Vec<(usize, usize)>, Vec<FinSpace>> = HashMap::new();
        let mut reps: Vec<FinSpace> = Vec::new();
        for base in &layer {
            for row in 0..(1u32 << old) {
                for col in 0..(1u32 << old) {
                    let mut masks: Vec<u32> = base
                        .iter()
                        .enumerate()
                        .map(|(x, &u)| if col & (1 << x) != 0 { u | pbit } else { u })
                        .collect();
                    masks.push(row | pbit);
                    if !coherent(&masks) {
                        continue;
                    }
                    let space = FinSpace::from_index_masks_unchecked(&masks);
                    let bucket = buckets.entry(invariant(&space)).or_default();
                    if bucket.iter().any(|r| are_homeomorphic(r, &space)) {
                        continue;
                    }
                    bucket.push(space.clone());
                    reps.push(space);
                }
            }
        }
        let canon: BTreeSet<Vec<u32>> = {
            use rayon::prelude::*;
            reps.par_iter().map(canonical_masks).collect::<Vec<_>>().into_iter().collect()
        };
        layer = canon.into_iter().collect();
    }
    layer
}

fn coherent(masks: &[u32]) -> bool {
    masks.iter().enumerate().all(|(x, &u)| {
        u & (1 << x) != 0
            && PointSet::from_bits(u)
                .iter()
                .all(|y| masks[y] & !u == 0)
    })
}

/// Classes obtained by canonicalizing every labeled topology.
pub fn homeomorphism_classes_by_canonical_dedup(labeled: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    use rayon::prelude::*;
    labeled
        .par_iter()
        .map(|m| canonical_masks(&FinSpace::from_index_masks_unchecked(m)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Number of classes found by pairwise homeomorphism tests alone.
pub fn homeomorphism_class_count_pairwise(labeled: &[Vec<u32>]) -> usize {
    let mut reps: Vec<FinSpace> = Vec::new();
    for m in labeled {
        let s = FinSpace::from_index_masks_unchecked(m);
        if !reps.iter().any(|r| are_homeomorphic(r, &s)) {
            reps.push(s);
        }
    }
    reps.len()
}
