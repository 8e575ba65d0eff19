//! Symmetric properties `F(p) = Σ_i f(p_i)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dist::DiscreteDistribution;
use crate::packing::{PackingInstance, SignVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lipschitz {
    Finite(f64),
    Unbounded,
}

/// The per-symbol function `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyKind {
    /// `f(x) = |x − 1/k|`.
    DistanceToUniformity { k: usize },
    /// `f(x) = 1(x > 0)`.
    SupportSize,
    /// `f(x) = x^α`.
    PowerSum { alpha: f64 },
    /// `f(x) = −x ln x`, `f(0) = 0`.
    Entropy,
    /// `f(x) = min_j |x − c_j|` over ascending centers.
    NearestCenter { centers: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProperty {
    kind: PropertyKind,
    name: String,
    lipschitz: Lipschitz,
}

impl SymmetricProperty {
    pub fn distance_to_uniformity(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid_argument("distance to uniformity needs k ≥ 1"));
        }
        Ok(SymmetricProperty {
            kind: PropertyKind::DistanceToUniformity { k },
            name: format!("distance_to_uniformity({k})"),
            lipschitz: Lipschitz::Finite(1.0),
        })
    }

    pub fn support_size() -> Self {
        SymmetricProperty { kind: PropertyKind::SupportSize, name: "support_size".into(), lipschitz: Lipschitz::Unbounded }
    }

    pub fn power_sum(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid_argument(format!("power sum exponent must be positive, got {alpha}")));
        }
        // |d/dx x^α| ≤ α on [0, 1] iff α ≥ 1
        let lipschitz = if alpha >= 1.0 { Lipschitz::Finite(alpha) } else { Lipschitz::Unbounded };
        Ok(SymmetricProperty { kind: PropertyKind::PowerSum { alpha }, name: format!("power_sum({alpha})"), lipschitz })
    }

    pub fn entropy() -> Self {
        SymmetricProperty { kind: PropertyKind::Entropy, name: "entropy".into(), lipschitz: Lipschitz::Unbounded }
    }

    /// `f(x) = min_j |x − c_j|`; 1-Lipschitz as a minimum of 1-Lipschitz maps.
    pub fn nearest_center(mut centers: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        if centers.is_empty() || centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid_argument("nearest-center property needs finite centers"));
        }
        centers.sort_by(f64::total_cmp);
        Ok(SymmetricProperty {
            kind: PropertyKind::NearestCenter { centers },
            name: name.into(),
            lipschitz: Lipschitz::Finite(1.0),
        })
    }

    pub fn kind(&self) -> &PropertyKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lipschitz(&self) -> Lipschitz {
        self.lipschitz
    }

    /// True for members of the 1-Lipschitz class.
    pub fn is_one_lipschitz(&self) -> bool {
        matches!(self.lipschitz, Lipschitz::Finite(l) if l <= 1.0)
    }

    /// The per-symbol function.
    pub fn f(&self, x: f64) -> f64 {
        match &self.kind {
            PropertyKind::DistanceToUniformity { k } => (x - 1.0 / *k as f64).abs(),
            PropertyKind::SupportSize => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            PropertyKind::PowerSum { alpha } => libm::pow(x, *alpha),
            PropertyKind::Entropy => {
                if x > 0.0 {
                    -x * libm::log(x)
                } else {
                    0.0
                }
            }
            PropertyKind::NearestCenter { centers } => nearest_center_distance(centers, x),
        }
    }

    /// `F(p) = Σ_i f(p_i)`.
    pub fn evaluate(&self, p: &DiscreteDistribution) -> Result<f64> {
        let v: f64 = p.probs().iter().map(|&x| self.f(x)).sum();
        if !v.is_finite() {
            return Err(Error::NonFinite("property evaluation"));
        }
        Ok(v)
    }
}

/// Distance from `x` to the nearest of the ascending `centers`, by binary
/// search.
fn nearest_center_distance(centers: &[f64], x: f64) -> f64 {
    let idx = centers.partition_point(|&c| c < x);
    let above = centers.get(idx).map_or(f64::INFINITY, |c| c - x);
    let below = if idx > 0 { x - centers[idx - 1] } else { f64::INFINITY };
    above.min(below)
}

/// Looks a built-in property up by name: `distance_to_uniformity(k)`,
/// `support_size`, `power_sum(α)` or `entropy`.
pub fn builtin(name: &str) -> Result<SymmetricProperty> {
    let name = name.trim();
    let (head, arg) = match name.find('(') {
        Some(open) if name.ends_with(')') => (&name[..open], Some(name[open + 1..name.len() - 1].trim())),
        Some(_) => return Err(Error::UnknownProperty(name.to_string())),
        None => (name, None),
    };
    let unknown = || Error::UnknownProperty(name.to_string());
    match (head.trim(), arg) {
        ("distance_to_uniformity", Some(a)) => {
            SymmetricProperty::distance_to_uniformity(a.parse().map_err(|_| unknown())?)
        }
        ("support_size", None) => Ok(SymmetricProperty::support_size()),
        ("power_sum", Some(a)) => SymmetricProperty::power_sum(a.parse().map_err(|_| unknown())?),
        ("entropy", None) => Ok(SymmetricProperty::entropy()),
        _ => Err(unknown()),
    }
}

/// The loss `|F(p̂) − F(p)|` of one plug-in estimate.
pub fn plugin_error(f: &SymmetricProperty, p: &DiscreteDistribution, p_hat: &DiscreteDistribution) -> Result<f64> {
    if p.k() != p_hat.k() {
        return Err(Error::DimensionMismatch { left: p.k(), right: p_hat.k() });
    }
    Ok((f.evaluate(p_hat)? - f.evaluate(p)?).abs())
}

/// `F_u(p) = Σ_i min_j |p_i − p_{u,j}|` for a packing member `u`.
pub fn adversarial_property(u: &SignVector, packing: &PackingInstance) -> Result<SymmetricProperty> {
    if !packing.codewords().contains(u) {
        return Err(Error::NotInPacking(u.to_bit_string()));
    }
    let centers = packing.perturb(u)?.into_probs();
    SymmetricProperty::nearest_center(centers, format!("F_u[{}]", u.to_bit_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;
    use std::vec;

    fn dist(v: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(v.to_vec()).unwrap()
    }

    fn linear_nearest(centers: &[f64], x: f64) -> f64 {
        centers.iter().map(|c| (x - c).abs()).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn evaluate_examples() {
        let d4 = SymmetricProperty::distance_to_uniformity(4).unwrap();
        assert_eq!(d4.evaluate(&DiscreteDistribution::uniform(4).unwrap()).unwrap(), 0.0);
        let d2 = SymmetricProperty::distance_to_uniformity(2).unwrap();
        assert_eq!(d2.evaluate(&dist(&[1.0, 0.0])).unwrap(), 1.0);
        let s = SymmetricProperty::support_size();
        assert_eq!(s.evaluate(&dist(&[0.3, 0.7, 0.0])).unwrap(), 2.0);
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(builtin("distance_to_uniformity(4)").unwrap().f(0.25), 0.0);
        assert_eq!(builtin("power_sum(2)").unwrap().f(0.5), 0.25);
        assert_eq!(builtin("entropy").unwrap().f(0.0), 0.0);
        assert_eq!(builtin("distance_to_uniformity(4)").unwrap().lipschitz(), Lipschitz::Finite(1.0));
        assert_eq!(builtin("support_size").unwrap().lipschitz(), Lipschitz::Unbounded);
        assert_eq!(builtin("entropy").unwrap().lipschitz(), Lipschitz::Unbounded);
        assert_eq!(builtin("power_sum(3)").unwrap().lipschitz(), Lipschitz::Finite(3.0));
        assert_eq!(builtin("power_sum(0.5)").unwrap().lipschitz(), Lipschitz::Unbounded);
        for bad in ["nope", "entropy(2)", "power_sum", "power_sum(x)", "power_sum(-1)", "support_size(", "distance_to_uniformity(0)"] {
            assert!(builtin(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn plugin_error_examples() {
        let f = builtin("entropy").unwrap();
        let p = dist(&[0.2, 0.8]);
        assert_eq!(plugin_error(&f, &p, &p).unwrap(), 0.0);
        assert!(plugin_error(&f, &p, &dist(&[1.0])).is_err());
    }

    #[test]
    fn declared_lipschitz_constants_hold() {
        let props = [
            builtin("distance_to_uniformity(5)").unwrap(),
            builtin("power_sum(1)").unwrap(),
            builtin("power_sum(2.5)").unwrap(),
            SymmetricProperty::nearest_center(vec![0.1, 0.35, 0.4, 0.9], "c").unwrap(),
        ];
        let mut rng = stream_rng(3, 0);
        for prop in &props {
            let Lipschitz::Finite(l) = prop.lipschitz() else { unreachable!() };
            for _ in 0..10_000 {
                let x: f64 = rng.random();
                let y: f64 = rng.random();
                assert!((prop.f(x) - prop.f(y)).abs() <= l * (x - y).abs() + 1e-9);
            }
        }
    }

    #[test]
    fn one_lipschitz_bounded_by_coordinatewise_l1() {
        let f = builtin("distance_to_uniformity(4)").unwrap();
        let mut rng = stream_rng(8, 0);
        for _ in 0..500 {
            let p = DiscreteDistribution::normalized((0..4).map(|_| rng.random::<f64>()).collect()).unwrap();
            let q = DiscreteDistribution::normalized((0..4).map(|_| rng.random::<f64>()).collect()).unwrap();
            let l1: f64 = p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum();
            assert!(plugin_error(&f, &p, &q).unwrap() <= l1 + 1e-15);
        }
    }

    #[test]
    fn evaluation_is_symmetric() {
        let p = dist(&[0.1, 0.2, 0.3, 0.4]);
        let q = dist(&[0.4, 0.1, 0.3, 0.2]);
        for name in ["entropy", "support_size", "power_sum(2)", "distance_to_uniformity(4)"] {
            let f = builtin(name).unwrap();
            assert!((f.evaluate(&p).unwrap() - f.evaluate(&q).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn binary_search_matches_linear_scan() {
        let centers = [0.05, 0.1, 0.4, 0.41, 0.77];
        let prop = SymmetricProperty::nearest_center(centers.to_vec(), "c").unwrap();
        let mut rng = stream_rng(4, 0);
        for _ in 0..10_000 {
            let x: f64 = rng.random::<f64>() * 1.2 - 0.1;
            assert_eq!(prop.f(x), linear_nearest(&centers, x));
        }
        for &c in &centers {
            assert_eq!(prop.f(c), 0.0);
        }
    }
}
