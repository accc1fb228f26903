//! Point maps between finite spaces and their place on the continuity
//! ladder: continuous ⇒ θ-weakly discontinuous ⇒ weakly discontinuous ⇒
//! scatteredly continuous.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TopoError};
use crate::space::{FinSpace, PointSet};

/// A total function between the points of two finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMap {
    domain: FinSpace,
    codomain: FinSpace,
    assign: Vec<usize>,
}

impl FinMap {
    pub fn new(domain: FinSpace, codomain: FinSpace, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != domain.len() || assign.iter().any(|&y| y >= codomain.len()) {
            return Err(TopoError::DomainMismatch);
        }
        Ok(FinMap {
            domain,
            codomain,
            assign,
        })
    }

    /// Builds a map from `(domain point, codomain point)` name pairs.
    pub fn from_names(domain: FinSpace, codomain: FinSpace, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut assign = vec![None; domain.len()];
        for (x, y) in pairs {
            let i = domain.index_of(x)?;
            assign[i] = Some(codomain.index_of(y)?);
        }
        let assign = assign
            .into_iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| TopoError::Input(format!("map is undefined at `{}`", domain.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, assign)
    }

    pub fn identity(space: FinSpace) -> Self {
        let assign = (0..space.len()).collect();
        FinMap {
            domain: space.clone(),
            codomain: space,
            assign,
        }
    }

    pub fn domain(&self) -> &FinSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSpace {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub fn image(&self, s: PointSet) -> PointSet {
        s.iter().map(|x| self.assign[x]).collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.len() == self.codomain.len()
            && self.image(self.domain.full()) == self.codomain.full()
    }

    pub fn inverse(&self) -> Result<FinMap> {
        if !self.is_bijective() {
            return Err(TopoError::BijectivityError);
        }
        let mut inv = vec![0; self.assign.len()];
        for (x, &y) in self.assign.iter().enumerate() {
            inv[y] = x;
        }
        FinMap::new(self.codomain.clone(), self.domain.clone(), inv)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap> {
        if self.codomain != g.domain {
            return Err(TopoError::DomainMismatch);
        }
        let assign = self.assign.iter().map(|&y| g.assign[y]).collect();
        FinMap::new(self.domain.clone(), g.codomain.clone(), assign)
    }

    /// Continuity points of the restriction `self|A`.
    pub fn continuity_points(&self, a: PointSet) -> Result<PointSet> {
        self.domain.check(a)?;
        Ok(Ladder::new(&self.domain, &self.codomain, &self.assign).continuity_points(a))
    }

    pub fn classify(&self) -> MapClass {
        classify_raw(&self.domain, &self.codomain, &self.assign)
    }

    /// Whether `self` and its inverse both reach the weakly discontinuous
    /// tier (or the θ-weakly discontinuous one when `theta` is set).
    pub fn is_weak_homeomorphism(&self, theta: bool) -> Result<bool> {
        let inv = self.inverse()?;
        let need = if theta {
            Tier::ThetaWeaklyDiscontinuous
        } else {
            Tier::WeaklyDiscontinuous
        };
        Ok(self.classify().reaches(need) && inv.classify().reaches(need))
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            domain: SpaceRef::Inline(self.domain.to_file()),
            codomain: SpaceRef::Inline(self.codomain.to_file()),
            map: self
                .assign
                .iter()
                .enumerate()
                .map(|(x, &y)| (self.domain.name(x).to_string(), self.codomain.name(y).to_string()))
                .collect(),
        }
    }
}

/// Precomputed continuity data of a map: `bad[x]` holds the domain points
/// whose image leaves `N(f(x))`, so `x` is a continuity point of `f|A`
/// exactly when `N(x) ∩ A` avoids `bad[x]`.
pub(crate) struct Ladder<'a> {
    domain: &'a FinSpace,
    bad: Vec<PointSet>,
}

impl<'a> Ladder<'a> {
    pub(crate) fn new(domain: &'a FinSpace, codomain: &FinSpace, assign: &[usize]) -> Self {
        let bad = assign
            .iter()
            .map(|&fx| {
                let target = codomain.nbhd(fx);
                assign
                    .iter()
                    .enumerate()
                    .filter(|&(_, &fy)| !target.contains(fy))
                    .map(|(y, _)| y)
                    .collect()
            })
            .collect();
        Ladder { domain, bad }
    }

    #[inline]
    pub(crate) fn continuity_points(&self, a: PointSet) -> PointSet {
        a.iter()
            .filter(|&x| (self.domain.nbhd(x) & a & self.bad[x]).is_empty())
            .collect()
    }
}

/// Rungs of the ladder, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Continuous,
    ThetaWeaklyDiscontinuous,
    WeaklyDiscontinuous,
    ScatteredlyContinuous,
    None,
}

impl Tier {
    pub const LADDER: [Tier; 4] = [
        Tier::Continuous,
        Tier::ThetaWeaklyDiscontinuous,
        Tier::WeaklyDiscontinuous,
        Tier::ScatteredlyContinuous,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Continuous => "continuous",
            Tier::ThetaWeaklyDiscontinuous => "theta_weakly_discontinuous",
            Tier::WeaklyDiscontinuous => "weakly_discontinuous",
            Tier::ScatteredlyContinuous => "scatteredly_continuous",
            Tier::None => "none",
        }
    }

    /// Human phrase used in reports.
    pub fn phrase(self) -> &'static str {
        match self {
            Tier::Continuous => "continuous",
            Tier::ThetaWeaklyDiscontinuous => "θ-weakly discontinuous",
            Tier::WeaklyDiscontinuous => "weakly discontinuous",
            Tier::ScatteredlyContinuous => "scatteredly continuous",
            Tier::None => "unclassified",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict for every rung plus, for each failed rung, the least subset `A`
/// (in mask order) certifying the failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub continuous: Option<PointSet>,
    pub theta_weak: Option<PointSet>,
    pub weak: Option<PointSet>,
    pub scattered: Option<PointSet>,
}

impl MapClass {
    /// Failure witness for a rung; `None` means the rung holds.
    pub fn witness(&self, tier: Tier) -> Option<PointSet> {
        match tier {
            Tier::Continuous => self.continuous,
            Tier::ThetaWeaklyDiscontinuous => self.theta_weak,
            Tier::WeaklyDiscontinuous => self.weak,
            Tier::ScatteredlyContinuous => self.scattered,
            Tier::None => None,
        }
    }

    pub fn reaches(&self, tier: Tier) -> bool {
        self.witness(tier).is_none()
    }

    /// The strongest rung reached.
    pub fn tier(&self) -> Tier {
        Tier::LADDER
            .into_iter()
            .find(|&t| self.reaches(t))
            .unwrap_or(Tier::None)
    }

    pub fn is_consistent(&self) -> bool {
        Tier::LADDER
            .windows(2)
            .all(|w| !self.reaches(w[0]) || self.reaches(w[1]))
    }
}

pub(crate) fn classify_raw(domain: &FinSpace, codomain: &FinSpace, assign: &[usize]) -> MapClass {
    let ladder = Ladder::new(domain, codomain, assign);
    let mut class = MapClass {
        continuous: None,
        theta_weak: None,
        weak: None,
        scattered: None,
    };
    let full = domain.full().bits();
    // increasing mask order, so the first failure of each rung is the least
    for bits in 1..=full {
        let a = PointSet::from_bits(bits);
        let c = ladder.continuity_points(a);
        if class.continuous.is_none() && c != a {
            class.continuous = Some(a);
        }
        if c == a {
            continue;
        }
        if class.scattered.is_none() && c.is_empty() {
            class.scattered = Some(a);
        }
        if class.weak.is_none() && domain.interior_within(a, c).is_empty() {
            class.weak = Some(a);
        }
        if class.theta_weak.is_none() && domain.largest_theta_open_within(a, c).is_empty() {
            class.theta_weak = Some(a);
        }
        if class.scattered.is_some() {
            break;
        }
    }
    class
}

/// Calls `visit` with every map `0..n → 0..m`, first point most
/// significant, i.e. in lexicographic order of the assignment vector.
pub fn for_each_assignment(n: usize, m: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if m == 0 {
        if n == 0 {
            visit(&[]);
        }
        return;
    }
    let mut assign = vec![0usize; n];
    loop {
        if !visit(&assign) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < m {
                break;
            }
            assign[i] = 0;
        }
    }
}

/// One line of the composition law table: premises on `f` and `g`, and the
/// rung expected of `g ∘ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Law {
    pub name: &'static str,
    pub f: Tier,
    pub g: Tier,
    pub composite: Tier,
    /// Whether the law is a proved theorem (violations are bugs) or only
    /// probed empirically.
    pub proved: bool,
}

pub const COMPOSITION_LAWS: [Law; 6] = [
    Law {
        name: "weak∘weak ⇒ weak",
        f: Tier::WeaklyDiscontinuous,
        g: Tier::WeaklyDiscontinuous,
        composite: Tier::WeaklyDiscontinuous,
        proved: true,
    },
    Law {
        name: "θ-weak∘θ-weak ⇒ θ-weak",
        f: Tier::ThetaWeaklyDiscontinuous,
        g: Tier::ThetaWeaklyDiscontinuous,
        composite: Tier::ThetaWeaklyDiscontinuous,
        proved: true,
    },
    Law {
        name: "scattered∘weak ⇒ scattered",
        f: Tier::WeaklyDiscontinuous,
        g: Tier::ScatteredlyContinuous,
        composite: Tier::ScatteredlyContinuous,
        proved: true,
    },
    Law {
        name: "θ-weak∘scattered ⇒ scattered",
        f: Tier::ScatteredlyContinuous,
        g: Tier::ThetaWeaklyDiscontinuous,
        composite: Tier::ScatteredlyContinuous,
        proved: true,
    },
    Law {
        name: "scattered∘scattered ⇒ scattered",
        f: Tier::ScatteredlyContinuous,
        g: Tier::ScatteredlyContinuous,
        composite: Tier::ScatteredlyContinuous,
        proved: false,
    },
    Law {
        name: "weak∘scattered ⇒ scattered",
        f: Tier::ScatteredlyContinuous,
        g: Tier::WeaklyDiscontinuous,
        composite: Tier::ScatteredlyContinuous,
        proved: false,
    },
];

/// A counterexample to a composition law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionWitness {
    pub x: String,
    pub y: String,
    pub z: String,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: Law,
    /// Triples where both premises held.
    pub instances: u64,
    pub violations: u64,
    pub witness: Option<CompositionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub triples: u64,
    pub outcomes: Vec<LawOutcome>,
}

impl CompositionReport {
    fn new() -> Self {
        CompositionReport {
            triples: 0,
            outcomes: COMPOSITION_LAWS
                .iter()
                .map(|&law| LawOutcome {
                    law,
                    instances: 0,
                    violations: 0,
                    witness: None,
                })
                .collect(),
        }
    }

    /// Violations of the proved laws only.
    pub fn proved_violations(&self) -> u64 {
        self.outcomes
            .iter()
            .filter(|o| o.law.proved)
            .map(|o| o.violations)
            .sum()
    }

    fn record(&mut self, x: &FinSpace, y: &FinSpace, z: &FinSpace, f: &[usize], g: &[usize]) {
        self.triples += 1;
        let cf = classify_raw(x, y, f);
        let cg = classify_raw(y, z, g);
        let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
        let cgf = classify_raw(x, z, &gf);
        for o in &mut self.outcomes {
            if cf.reaches(o.law.f) && cg.reaches(o.law.g) {
                o.instances += 1;
                if !cgf.reaches(o.law.composite) {
                    o.violations += 1;
                    if o.witness.is_none() {
                        o.witness = Some(CompositionWitness {
                            x: x.to_string(),
                            y: y.to_string(),
                            z: z.to_string(),
                            f: f.to_vec(),
                            g: g.to_vec(),
                        });
                    }
                }
            }
        }
    }

    fn merge(&mut self, other: CompositionReport) {
        self.triples += other.triples;
        for (a, b) in self.outcomes.iter_mut().zip(other.outcomes) {
            a.instances += b.instances;
            a.violations += b.violations;
            if a.witness.is_none() {
                a.witness = b.witness;
            }
        }
    }
}

/// Largest point count accepted by the exhaustive composition sweep.
pub const COMPOSITION_CAP: usize = 3;

/// Exhaustively checks the law table over every labeled topology on the
/// given point counts and every pair of maps `f: X → Y`, `g: Y → Z`.
pub fn check_composition_laws(nx: usize, ny: usize, nz: usize) -> Result<CompositionReport> {
    for n in [nx, ny, nz] {
        if n > COMPOSITION_CAP {
            return Err(TopoError::CapExceeded {
                what: "composition size",
                value: n,
                cap: COMPOSITION_CAP,
            });
        }
    }
    use rayon::prelude::*;
    let xs = crate::enumerate::labeled_spaces(nx);
    let ys = crate::enumerate::labeled_spaces(ny);
    let zs = crate::enumerate::labeled_spaces(nz);
    let parts: Vec<CompositionReport> = xs
        .par_iter()
        .map(|x| {
            let mut rep = CompositionReport::new();
            for y in &ys {
                for z in &zs {
                    for_each_assignment(nx, ny, |f| {
                        for_each_assignment(ny, nz, |g| {
                            rep.record(x, y, z, f, g);
                            true
                        });
                        true
                    });
                }
            }
            rep
        })
        .collect();
    let mut rep = CompositionReport::new();
    for p in parts {
        rep.merge(p);
    }
    Ok(rep)
}

/// Checks the law table on `samples` random triples drawn with a fixed
/// seed; point counts are drawn uniformly from `sizes`.
pub fn check_composition_laws_random(
    samples: usize,
    sizes: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<CompositionReport> {
    use rand::{Rng, SeedableRng};
    if *sizes.end() > 5 {
        return Err(TopoError::CapExceeded {
            what: "random composition size",
            value: *sizes.end(),
            cap: 5,
        });
    }
    let pools: Vec<Vec<FinSpace>> = (0..=*sizes.end())
        .map(|n| {
            if sizes.contains(&n) {
                crate::enumerate::labeled_spaces(n)
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CompositionReport::new();
    for _ in 0..samples {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let n = rng.gen_range(sizes.clone());
            let pool = &pools[n];
            &pool[rng.gen_range(0..pool.len())]
        };
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        let z = pick(&mut rng);
        let f: Vec<usize> = (0..x.len()).map(|_| rng.gen_range(0..y.len())).collect();
        let g: Vec<usize> = (0..y.len()).map(|_| rng.gen_range(0..z.len())).collect();
        rep.record(x, y, z, &f, &g);
    }
    Ok(rep)
}

/// Reference to a space inside a map file: inline, or a path.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(crate::space::SpaceFile),
}

/// On-disk form of a map.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    pub map: IndexMap<String, String>,
}

impl MapFile {
    /// Resolves the file; path references go through `load`.
    pub fn into_map(self, mut load: impl FnMut(&str) -> Result<FinSpace>) -> Result<FinMap> {
        let mut resolve = |r: SpaceRef| match r {
            SpaceRef::Path(p) => load(&p),
            SpaceRef::Inline(f) => f.into_space(),
        };
        let domain = resolve(self.domain)?;
        let codomain = resolve(self.codomain)?;
        let pairs: Vec<(&str, &str)> = self.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        FinMap::from_names(domain, codomain, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d_to_discrete() -> FinMap {
        FinMap::identity(FinSpace::sierpinski())
            .with_codomain(FinSpace::discrete(2))
    }

    impl FinMap {
        fn with_codomain(self, codomain: FinSpace) -> FinMap {
            FinMap::new(self.domain, codomain, self.assign).unwrap()
        }
    }

    #[test]
    fn continuity_points_examples() {
        let i = d_to_discrete();
        assert_eq!(i.continuity_points(PointSet::full(2)).unwrap(), PointSet::singleton(0));
        let x = FinSpace::from_index_masks(&[0b001, 0b011, 0b100]).unwrap();
        let id = FinMap::identity(x.clone());
        for a in x.full().subsets() {
            assert_eq!(id.continuity_points(a).unwrap(), a);
        }
        let c = FinMap::new(x.clone(), FinSpace::point(), vec![0; 3]).unwrap();
        for a in x.full().subsets() {
            assert_eq!(c.continuity_points(a).unwrap(), a);
        }
        assert_eq!(c.continuity_points(PointSet::from_bits(0b1000)), Err(TopoError::ForeignSet));
    }

    #[test]
    fn classify_examples() {
        let class = d_to_discrete().classify();
        assert_eq!(class.tier(), Tier::WeaklyDiscontinuous);
        assert_eq!(class.theta_weak, Some(PointSet::full(2)));
        assert_eq!(FinMap::identity(FinSpace::sierpinski()).classify().tier(), Tier::Continuous);
        let swap = FinMap::new(FinSpace::indiscrete(2), FinSpace::indiscrete(2), vec![1, 0]).unwrap();
        assert_eq!(swap.classify().tier(), Tier::Continuous);
    }

    #[test]
    fn weak_homeomorphism_examples() {
        let i = d_to_discrete();
        assert!(i.is_weak_homeomorphism(false).unwrap());
        assert!(!i.is_weak_homeomorphism(true).unwrap());
        let id = FinMap::identity(FinSpace::sierpinski());
        assert!(id.is_weak_homeomorphism(false).unwrap());
        assert!(id.is_weak_homeomorphism(true).unwrap());
        let c = FinMap::new(FinSpace::discrete(2), FinSpace::discrete(2), vec![0, 0]).unwrap();
        assert_eq!(c.is_weak_homeomorphism(false), Err(TopoError::BijectivityError));
    }

    #[test]
    fn assignment_order() {
        let mut seen = Vec::new();
        for_each_assignment(2, 2, |a| {
            seen.push(a.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_assignment(0, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn composition_small() {
        let rep = check_composition_laws(1, 1, 1).unwrap();
        assert_eq!(rep.triples, 1);
        assert_eq!(rep.proved_violations(), 0);
        assert!(rep.outcomes.iter().all(|o| o.violations == 0));
        assert!(matches!(
            check_composition_laws(4, 1, 1),
            Err(TopoError::CapExceeded { .. })
        ));
    }

    #[test]
    fn map_file_resolves_paths() {
        let text = r#"{"domain": "d", "codomain": {"points": ["0","1"], "min_nbhds": {"0": ["0"], "1": ["1"]}},
                       "map": {"0": "0", "1": "1"}}"#;
        let file: MapFile = serde_json::from_str(text).unwrap();
        let f = file
            .into_map(|p| {
                assert_eq!(p, "d");
                Ok(FinSpace::sierpinski())
            })
            .unwrap();
        assert_eq!(f, d_to_discrete());
    }
}
