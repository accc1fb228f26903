//! Kernel iteration: peel off the largest (θ-)open regular part of what is
//! left, until nothing is left or the kernel comes back empty.
//!
//! With θ-open kernels the residue empties exactly on θ-weakly regular
//! spaces; with open kernels, exactly on weakly regular ones. A finished
//! decomposition also yields the weak homeomorphism onto the sum of its
//! layers.

use serde::Serialize;

use crate::error::{Result, TopoError};
use crate::map::{FinMap, Tier};
use crate::space::{FinSpace, PointSet};

/// Which kernel the iteration removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMode {
    Theta,
    Open,
}

/// Union of all subsets of `a` that are θ-open in the subspace `a` and
/// regular as spaces.
pub fn theta_kernel(space: &FinSpace, a: PointSet) -> Result<PointSet> {
    space.check(a)?;
    let k = theta_kernel_within(space, a);
    if !space.is_theta_open_within(a, k) || !space.is_regular_within(k) {
        return Err(TopoError::Inconsistent(format!(
            "θ-kernel {} of {} is not a θ-open regular subspace",
            space.fmt_set(k),
            space.fmt_set(a)
        )));
    }
    Ok(k)
}

pub(crate) fn theta_kernel_within(space: &FinSpace, a: PointSet) -> PointSet {
    let mut kernel = PointSet::EMPTY;
    for w in a.subsets().skip(1) {
        if w.is_subset(kernel) {
            continue;
        }
        // the θ-openness test is cheap and rejects most candidates
        if space.is_theta_open_within(a, w) && space.is_regular_within(w) {
            kernel = kernel | w;
        }
    }
    kernel
}

/// Union of all regular subsets of `a` that are open in the subspace `a`.
/// Regularity is hereditary, so the relative minimal neighborhoods that are
/// regular already cover it.
pub(crate) fn open_kernel_within(space: &FinSpace, a: PointSet) -> PointSet {
    a.iter()
        .map(|x| space.nbhd(x) & a)
        .filter(|&u| space.is_regular_within(u))
        .fold(PointSet::EMPTY, |acc, u| acc | u)
}

/// Ordered layers of a kernel iteration, plus whatever it could not remove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub mode: KernelMode,
    pub layers: Vec<PointSet>,
    pub residue: PointSet,
}

impl Decomposition {
    pub fn is_complete(&self) -> bool {
        self.residue.is_empty()
    }

    pub fn to_json(&self, space: &FinSpace) -> serde_json::Value {
        let names = |s: PointSet| -> Vec<String> { s.iter().map(|i| space.name(i).to_string()).collect() };
        serde_json::json!({
            "mode": self.mode,
            "layers": self.layers.iter().map(|&l| names(l)).collect::<Vec<_>>(),
            "residue": names(self.residue),
            "complete": self.is_complete(),
        })
    }

    pub fn render(&self, space: &FinSpace) -> String {
        let mut out = String::new();
        let label = match self.mode {
            KernelMode::Theta => "theta",
            KernelMode::Open => "open",
        };
        out.push_str(&format!("mode: {label}\n"));
        for (i, &l) in self.layers.iter().enumerate() {
            out.push_str(&format!("layer {i}: {}\n", space.fmt_set(l)));
        }
        out.push_str(&format!("residue: {}\n", space.fmt_set(self.residue)));
        let verdict = match (self.mode, self.is_complete()) {
            (KernelMode::Theta, true) => "theta_weakly_regular: true",
            (KernelMode::Theta, false) => "theta_weakly_regular: false",
            (KernelMode::Open, true) => "weakly_regular: true",
            (KernelMode::Open, false) => "weakly_regular: false",
        };
        out.push_str(verdict);
        out.push('\n');
        out
    }
}

fn decompose(space: &FinSpace, mode: KernelMode) -> Decomposition {
    let mut layers = Vec::new();
    let mut residue = space.full();
    while !residue.is_empty() {
        let kernel = match mode {
            KernelMode::Theta => theta_kernel_within(space, residue),
            KernelMode::Open => open_kernel_within(space, residue),
        };
        if kernel.is_empty() {
            break;
        }
        layers.push(kernel);
        residue = residue - kernel;
    }
    Decomposition {
        mode,
        layers,
        residue,
    }
}

pub fn theta_decomposition(space: &FinSpace) -> Decomposition {
    decompose(space, KernelMode::Theta)
}

pub fn open_decomposition(space: &FinSpace) -> Decomposition {
    decompose(space, KernelMode::Open)
}

/// The sum `Y` of the layer subspaces together with the identity map
/// `X → Y`, checked to be a (θ-)weak homeomorphism onto a regular space.
pub fn weak_homeo_witness(space: &FinSpace, theta: bool) -> Result<(FinSpace, FinMap)> {
    let dec = if theta {
        theta_decomposition(space)
    } else {
        open_decomposition(space)
    };
    if !dec.is_complete() {
        return Err(TopoError::ResidueNonEmpty(space.fmt_set(dec.residue)));
    }
    let sum = space.partition_sum(&dec.layers)?;
    let to_sum = FinMap::new(space.clone(), sum.clone(), (0..space.len()).collect())?;
    let from_sum = to_sum.inverse()?;
    let need = if theta {
        Tier::ThetaWeaklyDiscontinuous
    } else {
        Tier::WeaklyDiscontinuous
    };
    if !crate::regularity::is_regular(&sum) {
        return Err(TopoError::Inconsistent(format!("layer sum {sum} is not regular")));
    }
    if !from_sum.classify().reaches(Tier::Continuous) {
        return Err(TopoError::Inconsistent(format!("identity {sum} → {space} is not continuous")));
    }
    if !to_sum.classify().reaches(need) {
        return Err(TopoError::Inconsistent(format!(
            "identity {space} → {sum} is not {}",
            need.phrase()
        )));
    }
    Ok((sum, to_sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x3() -> FinSpace {
        FinSpace::from_index_masks(&[0b001, 0b011, 0b100]).unwrap()
    }

    #[test]
    fn kernels() {
        let s = FinSpace::sierpinski();
        assert_eq!(theta_kernel(&s, s.full()).unwrap(), PointSet::EMPTY);
        let d = FinSpace::discrete(3);
        assert_eq!(theta_kernel(&d, d.full()).unwrap(), d.full());
        let x = x3();
        assert_eq!(theta_kernel(&x, x.full()).unwrap(), PointSet::singleton(2));
        assert_eq!(theta_kernel(&x, PointSet::from_bits(0b1000)), Err(TopoError::ForeignSet));
    }

    #[test]
    fn theta_layers() {
        let s = FinSpace::sierpinski();
        let dec = theta_decomposition(&s);
        assert!(dec.layers.is_empty());
        assert_eq!(dec.residue, s.full());
        let d = FinSpace::discrete(3);
        assert_eq!(theta_decomposition(&d).layers, vec![d.full()]);
        let dec = theta_decomposition(&x3());
        assert_eq!(dec.layers, vec![PointSet::singleton(2)]);
        assert_eq!(dec.residue, PointSet::from_bits(0b011));
    }

    #[test]
    fn open_layers() {
        let s = FinSpace::sierpinski();
        let dec = open_decomposition(&s);
        assert_eq!(dec.layers, vec![PointSet::singleton(0), PointSet::singleton(1)]);
        assert!(dec.is_complete());
        let d = FinSpace::discrete(2);
        assert_eq!(open_decomposition(&d).layers, vec![d.full()]);
        let i = FinSpace::indiscrete(2);
        assert_eq!(open_decomposition(&i).layers, vec![i.full()]);
    }

    #[test]
    fn witnesses() {
        let s = FinSpace::sierpinski();
        let (y, f) = weak_homeo_witness(&s, false).unwrap();
        assert!(y.is_t1());
        assert_eq!(f.classify().tier(), Tier::WeaklyDiscontinuous);
        assert!(matches!(weak_homeo_witness(&s, true), Err(TopoError::ResidueNonEmpty(_))));
        let d = FinSpace::discrete(3);
        for theta in [false, true] {
            let (y, f) = weak_homeo_witness(&d, theta).unwrap();
            assert_eq!(y, d);
            assert_eq!(f.classify().tier(), Tier::Continuous);
        }
    }
}
