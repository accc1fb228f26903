//! Exhaustive check of the proved implications between regularity
//! properties over every labeled topology up to a size, together with the
//! empirical matrix of which implications happen to hold on finite spaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{labeled_spaces, LABELED_CAP};
use crate::error::{Result, TopoError};
use crate::map::{classify_raw, Tier};
use crate::regularity::{
    sw_witness_search, theta_weakly_regular_witness, theta_weakly_regular_witness_by_definition,
    w_theta_regular_by_sum_maps, weakly_regular_witness, weakly_regular_witness_by_definition,
    Property, SwWitness, DIAGRAM_ARROWS,
};
use crate::space::FinSpace;

/// Largest size at which transfer theorems are checked over all bijections.
pub const TRANSFER_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Spaces (or bijections) where the premise held.
    pub instances: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixEntry {
    pub premise: Property,
    pub conclusion: Property,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub n_max: usize,
    pub sw_bound: usize,
    pub spaces_per_size: Vec<usize>,
    pub checks: Vec<CheckOutcome>,
    pub matrix: Vec<MatrixEntry>,
}

impl DiagramReport {
    pub fn violations(&self) -> u64 {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn spaces(&self) -> usize {
        self.spaces_per_size.iter().sum()
    }

    pub fn entry(&self, premise: Property, conclusion: Property) -> Option<&MatrixEntry> {
        self.matrix
            .iter()
            .find(|e| e.premise == premise && e.conclusion == conclusion)
    }

    /// Pairs of distinct properties that agree on every enumerated space.
    pub fn coinciding(&self) -> Vec<(Property, Property)> {
        let mut out = Vec::new();
        for (i, &p) in Property::ALL.iter().enumerate() {
            for &q in &Property::ALL[i + 1..] {
                let fwd = self.entry(p, q).is_some_and(|e| e.holds);
                let back = self.entry(q, p).is_some_and(|e| e.holds);
                if fwd && back {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("max points: {}\n", self.n_max));
        out.push_str(&format!(
            "labeled spaces: {} ({})\n",
            self.spaces(),
            self.spaces_per_size
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("+")
        ));
        out.push_str(&format!("sw bound: {}\n", self.sw_bound));
        out.push_str(&format!("violations: {}\n", self.violations()));
        for c in &self.checks {
            let status = if c.violations == 0 { "ok" } else { "VIOLATED" };
            out.push_str(&format!(
                "check {}: {} ({} instances, {} violations)",
                c.name, status, c.instances, c.violations
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" [witness: {w}]"));
            }
            out.push('\n');
        }
        for e in &self.matrix {
            out.push_str(&format!("matrix {} => {}: ", e.premise, e.conclusion));
            match &e.counterexample {
                None => out.push_str("holds\n"),
                Some(w) => out.push_str(&format!("fails [witness: {w}]\n")),
            }
        }
        for (p, q) in self.coinciding() {
            out.push_str(&format!("coincide {p} <=> {q}\n"));
        }
        out
    }
}

struct SpaceFacts {
    props: Vec<bool>,
    sw: Option<SwWitness>,
    closed_vs_all_weak: bool,
    closed_vs_all_theta: bool,
    sum_maps_weak: bool,
    sum_maps_agree: bool,
}

fn facts(space: &FinSpace, sw_bound: usize) -> Result<SpaceFacts> {
    let props: Vec<bool> = Property::ALL.iter().map(|p| p.holds(space)).collect();
    let sw = sw_witness_search(space, sw_bound)?;
    let sums = w_theta_regular_by_sum_maps(space);
    let wt = props[index(Property::WThetaRegular)];
    Ok(SpaceFacts {
        closed_vs_all_weak: weakly_regular_witness(space).is_none()
            == weakly_regular_witness_by_definition(space).is_none(),
        closed_vs_all_theta: theta_weakly_regular_witness(space).is_none()
            == theta_weakly_regular_witness_by_definition(space).is_none(),
        sum_maps_weak: sums.all_weak,
        sum_maps_agree: sums.all_theta_weak == wt,
        props,
        sw,
    })
}

fn index(p: Property) -> usize {
    Property::ALL.iter().position(|&q| q == p).unwrap()
}

struct Tally {
    outcome: CheckOutcome,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            outcome: CheckOutcome {
                name: name.into(),
                instances: 0,
                violations: 0,
                witness: None,
            },
        }
    }

    fn observe(&mut self, premise: bool, ok: bool, witness: impl FnOnce() -> String) {
        if !premise {
            return;
        }
        self.outcome.instances += 1;
        if !ok {
            self.outcome.violations += 1;
            if self.outcome.witness.is_none() {
                self.outcome.witness = Some(witness());
            }
        }
    }
}

/// Checks every proved implication over all labeled spaces with
/// `1..=n_max` points.
pub fn verify_diagram(n_max: usize, sw_bound: usize) -> Result<DiagramReport> {
    if n_max > LABELED_CAP {
        return Err(TopoError::CapExceeded {
            what: "diagram size",
            value: n_max,
            cap: LABELED_CAP,
        });
    }
    let by_size: Vec<Vec<FinSpace>> = (1..=n_max).map(labeled_spaces).collect();
    let all: Vec<&FinSpace> = by_size.iter().flatten().collect();
    let facts: Vec<SpaceFacts> = all
        .par_iter()
        .map(|s| facts(s, sw_bound))
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    for (p, q) in DIAGRAM_ARROWS {
        let mut t = Tally::new(format!("{p} => {q}"));
        for (s, f) in all.iter().zip(&facts) {
            t.observe(f.props[index(p)], f.props[index(q)], || s.to_string());
        }
        checks.push(t.outcome);
    }
    let mut t = Tally::new("scattered && t1 => theta_weakly_regular");
    for (s, f) in all.iter().zip(&facts) {
        let premise = f.props[index(Property::Scattered)] && f.props[index(Property::T1)];
        t.observe(premise, f.props[index(Property::ThetaWeaklyRegular)], || s.to_string());
    }
    checks.push(t.outcome);
    for p in [Property::Regular, Property::ThetaWeaklyRegular, Property::LocallyRegular] {
        let mut t = Tally::new(format!("{p} => sw_regular (no witness up to bound)"));
        for (s, f) in all.iter().zip(&facts) {
            t.observe(f.props[index(p)], f.sw.is_none(), || s.to_string());
        }
        checks.push(t.outcome);
    }
    let mut cw = Tally::new("weakly_regular: closed-subspace criterion = all-subspace criterion");
    let mut ct = Tally::new("theta_weakly_regular: closed-subspace criterion = all-subspace criterion");
    let mut sw_ = Tally::new("w_theta_regular: characterization sum maps are weakly discontinuous");
    let mut sa = Tally::new("w_theta_regular: sum-map test = subspace criterion");
    for (s, f) in all.iter().zip(&facts) {
        cw.observe(true, f.closed_vs_all_weak, || s.to_string());
        ct.observe(true, f.closed_vs_all_theta, || s.to_string());
        sw_.observe(true, f.sum_maps_weak, || s.to_string());
        sa.observe(true, f.sum_maps_agree, || s.to_string());
    }
    checks.extend([cw.outcome, ct.outcome, sw_.outcome, sa.outcome]);
    checks.extend(transfer_checks(&by_size, &facts, n_max.min(TRANSFER_CAP)));

    let mut matrix = Vec::new();
    for &p in &Property::ALL {
        for &q in &Property::ALL {
            if p == q {
                continue;
            }
            let counterexample = all
                .iter()
                .zip(&facts)
                .find(|(_, f)| f.props[index(p)] && !f.props[index(q)])
                .map(|(s, _)| s.to_string());
            matrix.push(MatrixEntry {
                premise: p,
                conclusion: q,
                holds: counterexample.is_none(),
                counterexample,
            });
        }
    }
    Ok(DiagramReport {
        n_max,
        sw_bound,
        spaces_per_size: by_size.iter().map(Vec::len).collect(),
        checks,
        matrix,
    })
}

/// Transfer of wθ- and sw-regularity backwards along bijections `h: X → Y`
/// that are θ-weakly discontinuous with weakly discontinuous inverse.
fn transfer_checks(by_size: &[Vec<FinSpace>], facts: &[SpaceFacts], max: usize) -> Vec<CheckOutcome> {
    let mut wt = Tally::new("transfer: w_theta_regular(Y) => w_theta_regular(X)");
    let mut sw = Tally::new("transfer: sw witness into X composes to sw witness into Y");
    let mut offset = 0;
    for (k, spaces) in by_size.iter().enumerate() {
        let n = k + 1;
        if n > max {
            break;
        }
        let perms = permutations(n);
        let local = &facts[offset..offset + spaces.len()];
        let results: Vec<(Tally, Tally)> = spaces
            .par_iter()
            .enumerate()
            .map(|(ix, x)| {
                let mut wt = Tally::new("");
                let mut sw = Tally::new("");
                for (iy, y) in spaces.iter().enumerate() {
                    for h in &perms {
                        let mut inv = vec![0; n];
                        for (a, &b) in h.iter().enumerate() {
                            inv[b] = a;
                        }
                        if !classify_raw(x, y, h).reaches(Tier::ThetaWeaklyDiscontinuous)
                            || !classify_raw(y, x, &inv).reaches(Tier::WeaklyDiscontinuous)
                        {
                            continue;
                        }
                        let wt_ix = index(Property::WThetaRegular);
                        wt.observe(local[iy].props[wt_ix], local[ix].props[wt_ix], || {
                            format!("X = {x}, Y = {y}, h = {h:?}")
                        });
                        if let Some(w) = &local[ix].sw {
                            let composed: Vec<usize> = w.assign.iter().map(|&v| h[v]).collect();
                            let c = classify_raw(&w.domain, y, &composed);
                            let ok = c.reaches(Tier::ScatteredlyContinuous) && !c.reaches(Tier::WeaklyDiscontinuous);
                            sw.observe(true, ok, || format!("X = {x}, Y = {y}, h = {h:?}"));
                        }
                    }
                }
                (wt, sw)
            })
            .collect();
        for (a, b) in results {
            merge(&mut wt, a);
            merge(&mut sw, b);
        }
        offset += spaces.len();
    }
    vec![wt.outcome, sw.outcome]
}

fn merge(into: &mut Tally, from: Tally) {
    into.outcome.instances += from.outcome.instances;
    into.outcome.violations += from.outcome.violations;
    if into.outcome.witness.is_none() {
        into.outcome.witness = from.outcome.witness;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: u32, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if used & (1 << i) == 0 {
                cur.push(i);
                go(cur, used | (1 << i), n, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_only() {
        let r = verify_diagram(1, 2).unwrap();
        assert_eq!(r.spaces(), 1);
        assert_eq!(r.violations(), 0);
        assert!(r.matrix.iter().all(|e| e.holds));
    }

    #[test]
    fn doubletons_separate_weak_from_regular() {
        let r = verify_diagram(2, 2).unwrap();
        assert_eq!(r.violations(), 0);
        let e = r.entry(Property::WeaklyRegular, Property::Regular).unwrap();
        assert!(!e.holds);
        assert_eq!(e.counterexample.as_deref(), Some(FinSpace::sierpinski().to_string().as_str()));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
