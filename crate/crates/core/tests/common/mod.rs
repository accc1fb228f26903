//! Reference implementations straight from the definitions, sharing no
//! code with the library beyond the neighborhood table of a space.

#![allow(dead_code)]

use proptest::prelude::*;
use topo_core::{FinSpace, PointSet};

pub fn bits(n: usize) -> u32 {
    (1u32 << n) - 1
}

pub fn submasks(a: u32) -> Vec<u32> {
    (0..=a).filter(|s| s & !a == 0).collect()
}

/// A set is open when it contains the minimal neighborhood of each member.
pub fn opens(s: &FinSpace) -> Vec<u32> {
    submasks(bits(s.len()))
        .into_iter()
        .filter(|&u| (0..s.len()).filter(|x| u >> x & 1 == 1).all(|x| s.nbhd(x).bits() & !u == 0))
        .collect()
}

pub fn rel_opens(s: &FinSpace, a: u32) -> Vec<u32> {
    let mut out: Vec<u32> = opens(s).into_iter().map(|o| o & a).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Intersection of the relatively closed subsets of `a` containing `t`.
pub fn cl_within(s: &FinSpace, a: u32, t: u32) -> u32 {
    rel_opens(s, a)
        .into_iter()
        .map(|o| a & !o)
        .filter(|c| t & !c == 0)
        .fold(a, |acc, c| acc & c)
}

pub fn int_within(s: &FinSpace, a: u32, t: u32) -> u32 {
    rel_opens(s, a).into_iter().filter(|o| o & !t == 0).fold(0, |acc, o| acc | o)
}

/// `v` is θ-open in the subspace `a`: every point has a relatively open
/// neighborhood whose relative closure stays in `v`.
pub fn theta_open_def(s: &FinSpace, a: u32, v: u32) -> bool {
    let ros = rel_opens(s, a);
    ros.contains(&v)
        && (0..s.len()).filter(|x| v >> x & 1 == 1).all(|x| {
            ros.iter()
                .any(|&o| o >> x & 1 == 1 && cl_within(s, a, o) & !v == 0)
        })
}

/// Regular: every open set is θ-open.
pub fn regular_def(s: &FinSpace, a: u32) -> bool {
    rel_opens(s, a).into_iter().all(|o| theta_open_def(s, a, o))
}

pub fn continuity_points_def(x: &FinSpace, y: &FinSpace, f: &[usize], a: u32) -> u32 {
    let ros = rel_opens(x, a);
    let yo = opens(y);
    let image = |o: u32| (0..x.len()).filter(|p| o >> p & 1 == 1).fold(0u32, |acc, p| acc | 1 << f[p]);
    (0..x.len())
        .filter(|p| a >> p & 1 == 1)
        .filter(|&p| {
            yo.iter().filter(|w| *w >> f[p] & 1 == 1).all(|&w| {
                ros.iter().any(|&o| o >> p & 1 == 1 && image(o) & !w == 0)
            })
        })
        .fold(0, |acc, p| acc | 1 << p)
}

/// `[continuous, θ-weak, weak, scattered]` from the definitions.
pub fn ladder_def(x: &FinSpace, y: &FinSpace, f: &[usize]) -> [bool; 4] {
    let full = bits(x.len());
    let mut scattered = true;
    let mut weak = true;
    let mut theta = true;
    for a in 1..=full {
        let c = continuity_points_def(x, y, f, a);
        scattered &= c != 0;
        weak &= int_within(x, a, c) != 0;
        theta &= submasks(c).into_iter().any(|v| v != 0 && theta_open_def(x, a, v));
    }
    let continuous = continuity_points_def(x, y, f, full) == full;
    [continuous, theta, weak, scattered]
}

/// Reflexive-transitive closure of a relation; `rel[i*n+j]` relates `i`
/// below `j`, and `N(j)` collects everything below `j`.
pub fn space_from_relation(n: usize, rel: &[bool]) -> FinSpace {
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = i == j || rel[i * n + j];
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    let masks: Vec<u32> = (0..n)
        .map(|j| (0..n).filter(|&i| m[i][j]).fold(0, |acc, i| acc | 1 << i))
        .collect();
    FinSpace::from_index_masks(&masks).unwrap()
}

pub fn arb_space(max_n: usize) -> impl Strategy<Value = FinSpace> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(proptest::bool::weighted(0.3), n * n)))
        .prop_map(|(n, rel)| space_from_relation(n, &rel))
}

pub fn arb_space_and_set(max_n: usize) -> impl Strategy<Value = (FinSpace, PointSet)> {
    arb_space(max_n).prop_flat_map(|s| {
        let full = bits(s.len());
        (Just(s), 0..=full).prop_map(|(s, b)| (s, PointSet::from_bits(b)))
    })
}

pub fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b] |= 1 << i;
            go(i + 1, n, cur, out);
            cur[b] &= !(1 << i);
        }
        cur.push(1 << i);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// The partition topology on `n` points with the given blocks.
pub fn partition_space(n: usize, blocks: &[u32]) -> FinSpace {
    let masks: Vec<u32> = (0..n).map(|x| *blocks.iter().find(|b| *b >> x & 1 == 1).unwrap()).collect();
    FinSpace::from_index_masks(&masks).unwrap()
}
