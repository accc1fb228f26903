//! Deciders for the regularity variants of a finite space.
//!
//! Each decider returns the least certificate of failure (in mask or point
//! order), or `None` when the property holds. Several properties also have
//! a slower, definition-level implementation used to cross-check the fast
//! reduction; those live next to the fast ones and carry a `_by_definition`
//! suffix.

use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::decomposition::{open_kernel_within, theta_kernel_within};
use crate::error::{Result, TopoError};
use crate::map::{classify_raw, for_each_assignment, Tier};
use crate::space::{FinSpace, PointSet};

/// The boolean properties a finite space is tested for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    T1,
    Regular,
    QuasiRegular,
    HereditarilyQuasiRegular,
    LocallyRegular,
    WeaklyRegular,
    ThetaWeaklyRegular,
    WThetaRegular,
    Scattered,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::T1,
        Property::Regular,
        Property::QuasiRegular,
        Property::HereditarilyQuasiRegular,
        Property::LocallyRegular,
        Property::WeaklyRegular,
        Property::ThetaWeaklyRegular,
        Property::WThetaRegular,
        Property::Scattered,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::T1 => "t1",
            Property::Regular => "regular",
            Property::QuasiRegular => "quasi_regular",
            Property::HereditarilyQuasiRegular => "hereditarily_quasi_regular",
            Property::LocallyRegular => "locally_regular",
            Property::WeaklyRegular => "weakly_regular",
            Property::ThetaWeaklyRegular => "theta_weakly_regular",
            Property::WThetaRegular => "w_theta_regular",
            Property::Scattered => "scattered",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.as_str() == name)
    }

    pub fn holds(self, space: &FinSpace) -> bool {
        match self {
            Property::T1 => space.is_t1(),
            Property::Regular => is_regular(space),
            Property::QuasiRegular => quasi_regular_witness(space).is_none(),
            Property::HereditarilyQuasiRegular => hereditarily_quasi_regular_witness(space).is_none(),
            Property::LocallyRegular => locally_regular_witness(space).is_none(),
            Property::WeaklyRegular => weakly_regular_witness(space).is_none(),
            Property::ThetaWeaklyRegular => theta_weakly_regular_witness(space).is_none(),
            Property::WThetaRegular => w_theta_regular_witness(space).is_none(),
            Property::Scattered => scattered_witness(space).is_none(),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Regular at `x`: the minimal neighborhood of `x` is closed.
pub fn is_regular_at(space: &FinSpace, x: usize) -> Result<bool> {
    if x >= space.len() {
        return Err(TopoError::UnknownPoint(x.to_string()));
    }
    Ok(regular_at(space, space.full(), x))
}

#[inline]
fn regular_at(space: &FinSpace, a: PointSet, x: usize) -> bool {
    let u = space.nbhd(x) & a;
    space.closure_within(a, u).is_subset(u)
}

/// First point at which the space is not regular.
pub fn irregular_point(space: &FinSpace) -> Option<usize> {
    (0..space.len()).find(|&x| !regular_at(space, space.full(), x))
}

pub fn is_regular(space: &FinSpace) -> bool {
    irregular_point(space).is_none()
}

/// Every open set is θ-open, quantified over the whole open family.
pub fn is_regular_by_definition(space: &FinSpace) -> bool {
    space.open_sets().into_iter().all(|u| is_theta_open_by_definition(space, space.full(), u))
}

/// θ-openness of `v` in the subspace `a`, quantifying over every relatively
/// open neighborhood instead of the minimal one.
pub fn is_theta_open_by_definition(space: &FinSpace, a: PointSet, v: PointSet) -> bool {
    v.iter().all(|x| {
        a.subsets().any(|o| {
            o.contains(x)
                && space.interior_within(a, o) == o
                && space.closure_within(a, o).is_subset(v)
        })
    })
}

/// A regular point, if any; `None` means nowhere regular.
pub fn regular_point(space: &FinSpace) -> Option<usize> {
    (0..space.len()).find(|&x| regular_at(space, space.full(), x))
}

pub fn is_nowhere_regular(space: &FinSpace) -> bool {
    regular_point(space).is_none()
}

fn quasi_regular_within(space: &FinSpace, a: PointSet) -> Option<usize> {
    // every non-empty relatively open set contains some N_A(x), and N_A(x)
    // holds a closure of a non-empty open set iff it holds cl_A(N_A(y))
    a.iter().find(|&x| {
        let u = space.nbhd(x) & a;
        !u.iter().any(|y| space.closure_within(a, space.nbhd(y) & a).is_subset(u))
    })
}

/// A point `x` whose minimal neighborhood contains no closure of a
/// non-empty open set.
pub fn quasi_regular_witness(space: &FinSpace) -> Option<usize> {
    quasi_regular_within(space, space.full())
}

/// Least subspace (in mask order) that is not quasi-regular.
pub fn hereditarily_quasi_regular_witness(space: &FinSpace) -> Option<PointSet> {
    space
        .full()
        .subsets()
        .find(|&a| quasi_regular_within(space, a).is_some())
}

/// A point with no regular open neighborhood.
pub fn locally_regular_witness(space: &FinSpace) -> Option<usize> {
    (0..space.len()).find(|&x| !space.is_regular_within(space.nbhd(x)))
}

pub fn is_locally_regular_by_definition(space: &FinSpace) -> bool {
    let opens = space.open_sets();
    (0..space.len()).all(|x| {
        opens
            .iter()
            .any(|&u| u.contains(x) && space.is_regular_within(u))
    })
}

fn closed_subspaces(space: &FinSpace) -> impl Iterator<Item = PointSet> + '_ {
    let full = space.full();
    full.subsets()
        .skip(1)
        .filter(move |&a| space.is_open(full - a))
}

/// Least non-empty closed subspace without a non-empty relatively open
/// regular subspace.
pub fn weakly_regular_witness(space: &FinSpace) -> Option<PointSet> {
    closed_subspaces(space).find(|&a| open_kernel_within(space, a).is_empty())
}

/// Same criterion over every non-empty subspace, searching every relatively
/// open subset directly.
pub fn weakly_regular_witness_by_definition(space: &FinSpace) -> Option<PointSet> {
    space.full().subsets().skip(1).find(|&a| {
        !a.subsets()
            .skip(1)
            .any(|u| space.interior_within(a, u) == u && space.is_regular_within(u))
    })
}

/// Least non-empty closed subspace without a non-empty θ-open regular
/// subspace.
pub fn theta_weakly_regular_witness(space: &FinSpace) -> Option<PointSet> {
    closed_subspaces(space).find(|&a| theta_kernel_within(space, a).is_empty())
}

pub fn theta_weakly_regular_witness_by_definition(space: &FinSpace) -> Option<PointSet> {
    space.full().subsets().skip(1).find(|&a| {
        !a.subsets().skip(1).any(|w| {
            is_theta_open_by_definition(space, a, w) && space.is_regular_within(w)
        })
    })
}

/// A subspace `A` and a non-empty relatively open `U ⊆ A` containing no
/// non-empty θ-open subset of `A`; least `A` first, then least `U`.
pub fn w_theta_regular_witness(space: &FinSpace) -> Option<(PointSet, PointSet)> {
    for a in space.full().subsets().skip(1) {
        // minimal relatively open sets suffice: any non-empty open U ⊆ A
        // contains one
        let mut candidates: Vec<PointSet> = a.iter().map(|x| space.nbhd(x) & a).collect();
        candidates.sort();
        candidates.dedup();
        if let Some(u) = candidates
            .into_iter()
            .find(|&u| space.largest_theta_open_within(a, u).is_empty())
        {
            return Some((a, u));
        }
    }
    None
}

/// Full search: every subspace, every relatively open subset, every
/// candidate θ-open subset checked by definition.
pub fn w_theta_regular_witness_by_definition(space: &FinSpace) -> Option<(PointSet, PointSet)> {
    for a in space.full().subsets().skip(1) {
        for u in a.subsets().skip(1) {
            if space.interior_within(a, u) != u {
                continue;
            }
            if !u.subsets().skip(1).any(|v| is_theta_open_by_definition(space, a, v)) {
                return Some((a, u));
            }
        }
    }
    None
}

/// Outcome of testing wθ-regularity through the maps used in its
/// characterization: for each subspace `A` and open `U ⊆ A`, the identity
/// from `X` onto the sum `Ũ ⊕ (X∖Ũ)`, where `Ũ = cl(A) ∖ cl(A∖U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumMapCheck {
    /// Every such identity is weakly discontinuous.
    pub all_weak: bool,
    /// Every such identity that is weakly discontinuous is also θ-weakly
    /// discontinuous.
    pub all_theta_weak: bool,
}

pub fn w_theta_regular_by_sum_maps(space: &FinSpace) -> SumMapCheck {
    let full = space.full();
    let identity: Vec<usize> = (0..space.len()).collect();
    let mut check = SumMapCheck {
        all_weak: true,
        all_theta_weak: true,
    };
    for a in full.subsets().skip(1) {
        for u in a.subsets().skip(1) {
            if space.interior_within(a, u) != u {
                continue;
            }
            let cl_a = space.closure_within(full, a);
            let tilde = cl_a - space.closure_within(full, a - u);
            let target = space
                .partition_sum(&[tilde, full - tilde].into_iter().filter(|b| !b.is_empty()).collect::<Vec<_>>())
                .expect("complementary blocks partition the space");
            let class = classify_raw(space, &target, &identity);
            if class.reaches(Tier::WeaklyDiscontinuous) {
                check.all_theta_weak &= class.reaches(Tier::ThetaWeaklyDiscontinuous);
            } else {
                check.all_weak = false;
            }
        }
    }
    check
}

/// A non-empty subspace with no isolated point, found by deleting isolated
/// points until nothing changes.
pub fn scattered_witness(space: &FinSpace) -> Option<PointSet> {
    let mut rest = space.full();
    loop {
        let isolated: PointSet = rest
            .iter()
            .filter(|&x| space.nbhd(x) & rest == PointSet::singleton(x))
            .collect();
        if isolated.is_empty() {
            return (!rest.is_empty()).then_some(rest);
        }
        rest = rest - isolated;
    }
}

pub fn is_scattered_by_definition(space: &FinSpace) -> bool {
    space.full().subsets().skip(1).all(|a| {
        a.iter()
            .any(|x| space.nbhd(x) & a == PointSet::singleton(x))
    })
}

/// A scatteredly continuous map into the tested space that is not weakly
/// discontinuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwWitness {
    pub domain: FinSpace,
    pub assign: Vec<usize>,
}

/// Largest domain size accepted by [`sw_witness_search`].
pub const SW_BOUND_CAP: usize = 4;

/// Searches every space `Z` with at most `max_domain_size` points (one per
/// homeomorphism class, in canonical order) and every map `Z → X` in
/// lexicographic order. A witness disproves sw-regularity; `None` proves
/// nothing beyond the bound.
pub fn sw_witness_search(space: &FinSpace, max_domain_size: usize) -> Result<Option<SwWitness>> {
    use rayon::prelude::*;
    if max_domain_size > SW_BOUND_CAP {
        return Err(TopoError::CapExceeded {
            what: "sw bound",
            value: max_domain_size,
            cap: SW_BOUND_CAP,
        });
    }
    for n in 1..=max_domain_size {
        let domains = crate::enumerate::homeomorphism_classes(n);
        let found = domains
            .par_iter()
            .map(|z| {
                let mut hit = None;
                for_each_assignment(z.len(), space.len(), |f| {
                    let class = classify_raw(z, space, f);
                    if class.reaches(Tier::ScatteredlyContinuous)
                        && !class.reaches(Tier::WeaklyDiscontinuous)
                    {
                        hit = Some(f.to_vec());
                        return false;
                    }
                    true
                });
                hit.map(|assign| SwWitness {
                    domain: z.clone(),
                    assign,
                })
            })
            .find_map_first(|w| w);
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Three-valued sw-regularity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwVerdict {
    /// A concrete map disproves sw-regularity.
    Witnessed(SwWitness),
    /// A proved sufficient condition holds.
    Implied(Property),
    /// Nothing found among domains up to this size.
    NoneUpToBound(usize),
}

pub fn sw_verdict(space: &FinSpace, bound: usize) -> Result<SwVerdict> {
    for p in [Property::Regular, Property::ThetaWeaklyRegular, Property::LocallyRegular] {
        if p.holds(space) {
            return Ok(SwVerdict::Implied(p));
        }
    }
    Ok(match sw_witness_search(space, bound)? {
        Some(w) => SwVerdict::Witnessed(w),
        None => SwVerdict::NoneUpToBound(bound),
    })
}

/// Verdict and optional failure certificate for one property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn no(witness: String) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Every decider's verdict on one space, in a fixed key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub points: usize,
    pub verdicts: IndexMap<Property, Verdict>,
    pub nowhere_regular: Verdict,
    pub sw: SwVerdict,
    sw_text: String,
}

impl PropertyReport {
    pub fn holds(&self, p: Property) -> bool {
        self.verdicts[&p].holds
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("points".into(), self.points.into());
        for (p, v) in &self.verdicts {
            map.insert(p.as_str().into(), serde_json::to_value(v).expect("verdict serializes"));
        }
        map.insert(
            "nowhere_regular".into(),
            serde_json::to_value(&self.nowhere_regular).expect("verdict serializes"),
        );
        let (value, detail) = match &self.sw {
            SwVerdict::Witnessed(_) => ("false", self.sw_text.clone()),
            SwVerdict::Implied(_) => ("true", self.sw_text.clone()),
            SwVerdict::NoneUpToBound(_) => ("unknown", self.sw_text.clone()),
        };
        map.insert(
            "sw_regular".into(),
            serde_json::json!({ "verdict": value, "detail": detail }),
        );
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points: {}", self.points)?;
        let line = |f: &mut fmt::Formatter<'_>, key: &str, v: &Verdict| match &v.witness {
            Some(w) => writeln!(f, "{key}: {} [witness: {w}]", v.holds),
            None => writeln!(f, "{key}: {}", v.holds),
        };
        for (p, v) in &self.verdicts {
            line(f, p.as_str(), v)?;
        }
        line(f, "nowhere_regular", &self.nowhere_regular)?;
        match &self.sw {
            SwVerdict::Witnessed(_) => writeln!(f, "sw_regular: false [witness: {}]", self.sw_text),
            SwVerdict::Implied(_) => writeln!(f, "sw_regular: true [{}]", self.sw_text),
            SwVerdict::NoneUpToBound(_) => writeln!(f, "sw_regular: unknown [{}]", self.sw_text),
        }
    }
}

/// Runs every decider and the sw search, then checks the result against
/// the proved implications.
pub fn classify_report(space: &FinSpace, sw_bound: usize) -> Result<PropertyReport> {
    let set = |s: PointSet| space.fmt_set(s);
    let pt = |x: usize| space.name(x).to_string();
    let mut verdicts = IndexMap::new();

    let t1 = match (0..space.len()).find(|&x| space.nbhd(x) != PointSet::singleton(x)) {
        None => Verdict::yes(),
        Some(x) => {
            // some other point of N(x) has x in its closure
            let y = (space.nbhd(x) - PointSet::singleton(x)).first().unwrap();
            Verdict::no(format!("{{{}}} is not closed", pt(y)))
        }
    };
    verdicts.insert(Property::T1, t1);

    verdicts.insert(
        Property::Regular,
        match irregular_point(space) {
            None => Verdict::yes(),
            Some(x) => Verdict::no(format!(
                "open set {} is not θ-open (not regular at {})",
                set(space.nbhd(x)),
                pt(x)
            )),
        },
    );
    verdicts.insert(
        Property::QuasiRegular,
        match quasi_regular_witness(space) {
            None => Verdict::yes(),
            Some(x) => Verdict::no(format!(
                "open set {} contains the closure of no non-empty open set",
                set(space.nbhd(x))
            )),
        },
    );
    verdicts.insert(
        Property::HereditarilyQuasiRegular,
        match hereditarily_quasi_regular_witness(space) {
            None => Verdict::yes(),
            Some(a) => Verdict::no(format!("subspace {} is not quasi-regular", set(a))),
        },
    );
    verdicts.insert(
        Property::LocallyRegular,
        match locally_regular_witness(space) {
            None => Verdict::yes(),
            Some(x) => Verdict::no(format!("no regular open neighborhood of {}", pt(x))),
        },
    );
    verdicts.insert(
        Property::WeaklyRegular,
        match weakly_regular_witness(space) {
            None => Verdict::yes(),
            Some(a) => Verdict::no(format!(
                "closed subspace {} has no non-empty open regular subspace",
                set(a)
            )),
        },
    );
    verdicts.insert(
        Property::ThetaWeaklyRegular,
        match theta_weakly_regular_witness(space) {
            None => Verdict::yes(),
            Some(a) => Verdict::no(format!(
                "closed subspace {} has no non-empty θ-open regular subspace",
                set(a)
            )),
        },
    );
    verdicts.insert(
        Property::WThetaRegular,
        match w_theta_regular_witness(space) {
            None => Verdict::yes(),
            Some((a, u)) => Verdict::no(format!(
                "open set {} of subspace {} contains no non-empty θ-open subset",
                set(u),
                set(a)
            )),
        },
    );
    verdicts.insert(
        Property::Scattered,
        match scattered_witness(space) {
            None => Verdict::yes(),
            Some(a) => Verdict::no(format!("subspace {} has no isolated point", set(a))),
        },
    );
    let nowhere_regular = match regular_point(space) {
        None => Verdict::yes(),
        Some(x) => Verdict::no(format!("regular at {}", pt(x))),
    };
    let sw = sw_verdict(space, sw_bound)?;
    let sw_text = match &sw {
        SwVerdict::Witnessed(w) => format!("Z = {}, f = {}", w.domain, fmt_assignment(&w.domain, space, &w.assign)),
        SwVerdict::Implied(p) => format!("implied by {p}"),
        SwVerdict::NoneUpToBound(b) => format!("no witness with domain up to {b} points"),
    };
    let report = PropertyReport {
        points: space.len(),
        verdicts,
        nowhere_regular,
        sw,
        sw_text,
    };
    let violations = diagram_violations(&report);
    if let Some(v) = violations.first() {
        return Err(TopoError::Inconsistent(format!("{space}: {v}")));
    }
    Ok(report)
}

/// `0↦a, 1↦b` rendering of a map.
pub fn fmt_assignment(domain: &FinSpace, codomain: &FinSpace, assign: &[usize]) -> String {
    assign
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{}↦{}", domain.name(x), codomain.name(y)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Proved implications between properties, as `(premise, conclusion)`.
pub const DIAGRAM_ARROWS: [(Property, Property); 6] = [
    (Property::Regular, Property::ThetaWeaklyRegular),
    (Property::ThetaWeaklyRegular, Property::WThetaRegular),
    (Property::ThetaWeaklyRegular, Property::WeaklyRegular),
    (Property::LocallyRegular, Property::WeaklyRegular),
    (Property::WThetaRegular, Property::HereditarilyQuasiRegular),
    (Property::Regular, Property::LocallyRegular),
];

/// Names of every proved implication violated by a report.
pub fn diagram_violations(report: &PropertyReport) -> Vec<String> {
    let mut out = Vec::new();
    for (p, q) in DIAGRAM_ARROWS {
        if report.holds(p) && !report.holds(q) {
            out.push(format!("{p} ⇒ {q} fails"));
        }
    }
    if report.holds(Property::Scattered) && report.holds(Property::T1) && !report.holds(Property::ThetaWeaklyRegular) {
        out.push("scattered ∧ t1 ⇒ theta_weakly_regular fails".into());
    }
    if let SwVerdict::Witnessed(_) = report.sw {
        for p in [Property::Regular, Property::ThetaWeaklyRegular, Property::LocallyRegular] {
            if report.holds(p) {
                out.push(format!("{p} ⇒ sw_regular fails"));
            }
        }
    }
    out
}
