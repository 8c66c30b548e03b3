//! The nowhere-convex, nowhere-C1 quasiconvex Lipschitz profile.
//!
//! The profile is `phi_K(x) = int_0^x f_K(t) dt - x^2` where
//! `f_K(t) = sum_{k<=K} 2^{-k} 1{q_k < t}` and `q_1, q_2, ...` enumerates the
//! rationals strictly between 0 and 1. The representation is exact: a sorted
//! breakpoint list with per-breakpoint jump masses and prefix integrals, so
//! evaluation and second-derivative bookkeeping are closed-form per piece.

use serde::{Deserialize, Serialize};

use super::domain::{DomainKind, GraphPatch, ModulusSpec, PhiKind, PlanarDomain};
use super::primitives::{pt, Frame2};
use crate::error::{Error, Result};

/// Deterministic enumeration of the rationals in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RationalEnumeration {
    /// Breadth-first mediant (Stern-Brocot) traversal between 0/1 and 1/1:
    /// 1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, ...
    SternBrocot,
    /// Diagonal by denominator, then numerator, in lowest terms:
    /// 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, 2/5, ...
    CantorDiagonal,
}

impl std::str::FromStr for RationalEnumeration {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stern-brocot" => Ok(RationalEnumeration::SternBrocot),
            "cantor-diagonal" => Ok(RationalEnumeration::CantorDiagonal),
            _ => Err(Error::UnknownPreset(format!("enumeration '{s}'"))),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// First `k` rationals of the chosen enumeration, as (numerator, denominator).
pub fn enumerate_rationals(order: RationalEnumeration, k: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(k);
    match order {
        RationalEnumeration::SternBrocot => {
            // BFS over the mediant tree with bounds (0/1, 1/1)
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(((0u64, 1u64), (1u64, 1u64)));
            while out.len() < k {
                let ((a, b), (c, d)) = queue.pop_front().expect("mediant queue never empties");
                let med = (a + c, b + d);
                out.push(med);
                queue.push_back(((a, b), med));
                queue.push_back((med, (c, d)));
            }
        }
        RationalEnumeration::CantorDiagonal => {
            let mut q = 2u64;
            while out.len() < k {
                for p in 1..q {
                    if gcd(p, q) == 1 {
                        out.push((p, q));
                        if out.len() == k {
                            break;
                        }
                    }
                }
                q += 1;
            }
        }
    }
    out
}

/// Exact piecewise-quadratic profile with breakpoints at the enumerated
/// rationals. Domain of definition is `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathologicalCurve {
    /// Sorted breakpoints in (0, 1).
    pub breaks: Vec<f64>,
    /// Jump mass `2^{-k}` of `f_K` at each breakpoint.
    pub masses: Vec<f64>,
    /// Truncation level K.
    pub level: usize,
    #[serde(skip)]
    prefix_mass: Vec<f64>,
    #[serde(skip)]
    prefix_integral: Vec<f64>,
}

impl PathologicalCurve {
    pub fn new(level: usize, order: RationalEnumeration) -> Result<Self> {
        if level < 1 {
            return Err(Error::invalid("truncation level K must be >= 1"));
        }
        let rationals = enumerate_rationals(order, level);
        let mut pairs: Vec<(f64, f64)> = rationals
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| (p as f64 / q as f64, (0.5_f64).powi(i as i32 + 1)))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let breaks = pairs.iter().map(|p| p.0).collect();
        let masses = pairs.iter().map(|p| p.1).collect();
        let mut c = PathologicalCurve {
            breaks,
            masses,
            level,
            prefix_mass: Vec::new(),
            prefix_integral: Vec::new(),
        };
        c.rebuild_prefixes();
        Ok(c)
    }

    pub fn from_parts(breaks: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if breaks.len() != masses.len() || breaks.is_empty() {
            return Err(Error::invalid("breakpoint/mass lists must match"));
        }
        if !breaks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        let level = masses.len();
        let mut c = PathologicalCurve {
            breaks,
            masses,
            level,
            prefix_mass: Vec::new(),
            prefix_integral: Vec::new(),
        };
        c.rebuild_prefixes();
        Ok(c)
    }

    fn rebuild_prefixes(&mut self) {
        let n = self.breaks.len();
        // prefix_mass[i] = f value on the piece (breaks[i-1], breaks[i]),
        // prefix_mass[0] = 0 on (0, breaks[0])
        let mut pm = Vec::with_capacity(n + 1);
        pm.push(0.0);
        for i in 0..n {
            pm.push(pm[i] + self.masses[i]);
        }
        // prefix_integral[i] = int_0^{breaks[i]} f
        let mut pi = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        let mut prev = 0.0;
        for i in 0..n {
            acc += pm[i] * (self.breaks[i] - prev);
            pi.push(acc);
            prev = self.breaks[i];
        }
        // integral up to 1.0
        acc += pm[n] * (1.0 - prev);
        pi.push(acc);
        self.prefix_mass = pm;
        self.prefix_integral = pi;
    }

    /// Step function `f_K(t) = sum 2^{-k} 1{q_k < t}`.
    pub fn eval_f(&self, t: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b < t);
        self.prefix_mass[i]
    }

    /// `phi_K(x) = int_0^x f_K - x^2`, exact per quadratic piece.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let i = self.breaks.partition_point(|&b| b < x);
        let (b_prev, int_prev) = if i == 0 {
            (0.0, 0.0)
        } else {
            (self.breaks[i - 1], self.prefix_integral[i - 1])
        };
        int_prev + self.prefix_mass[i] * (x - b_prev) - x * x
    }

    /// One-sided derivative from the right: `f_K(x+) - 2x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b <= x);
        self.prefix_mass[i] - 2.0 * x
    }

    /// Tail of the truncated series, reported as an error budget.
    pub fn truncation_tail(&self) -> f64 {
        (0.5_f64).powi(self.level as i32)
    }
}

/// Builds the truncated pathological profile as a graph patch on `[0, 1]`.
///
/// The profile satisfies `phi(0) = 0` and `|phi'| <= 2`.
pub fn pathological_curve(level: usize, order: RationalEnumeration) -> Result<GraphPatch> {
    let curve = PathologicalCurve::new(level, order)?;
    GraphPatch::new(
        pt(0.0, 0.0),
        Frame2::default(),
        (0.0, 1.0),
        PhiKind::PiecewiseQuad(curve),
        2.0,
    )
}

/// Per-interval second-derivative masses of the pathological profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondDerivativeReport {
    pub level_j: usize,
    /// Mass `phi''(I) = -2|I| + sum of jump masses in I` for each of the
    /// `2^j` dyadic intervals, indexed left to right.
    pub interval_masses: Vec<f64>,
    pub nonnegative_count: usize,
    pub total_mass: f64,
}

/// Computes `phi''(I)` exactly on the `2^j` dyadic subintervals of (0, 1).
///
/// Endpoint convention: a jump at a dyadic endpoint is assigned to the
/// left-closed interval `[m 2^-j, (m+1) 2^-j)` that starts there.
pub fn second_derivative_measure(patch: &GraphPatch, level_j: usize) -> Result<SecondDerivativeReport> {
    let curve = match &patch.phi {
        PhiKind::PiecewiseQuad(c) => c,
        _ => {
            return Err(Error::invalid(
                "second_derivative_measure expects a pathological profile patch",
            ))
        }
    };
    if level_j < 1 || level_j > 40 {
        return Err(Error::invalid("dyadic level j must be in 1..=40"));
    }
    let m = 1usize << level_j;
    let width = 1.0 / m as f64;
    let mut masses = vec![-2.0 * width; m];
    for (b, w) in curve.breaks.iter().zip(curve.masses.iter()) {
        let idx = ((b / width).floor() as usize).min(m - 1);
        masses[idx] += w;
    }
    let nonnegative_count = masses.iter().filter(|&&v| v >= 0.0).count();
    let total_mass = -2.0 + curve.masses.iter().sum::<f64>();
    Ok(SecondDerivativeReport {
        level_j,
        interval_masses: masses,
        nonnegative_count,
        total_mass,
    })
}

/// Closes the truncated pathological profile into a bounded quasiconvex
/// domain: the graph on [0, 1] is the bottom boundary, walls and a flat top
/// complete the polyline.
pub fn pathological_domain(level: usize, spacing: f64) -> Result<PlanarDomain> {
    let order = RationalEnumeration::SternBrocot;
    let curve = PathologicalCurve::new(level, order)?;
    let top = 0.55;
    let m = ((1.0 / spacing).ceil() as usize).clamp(64, 8192);
    let mut boundary = Vec::with_capacity(m + 3);
    for i in 0..=m {
        let x = i as f64 / m as f64;
        boundary.push(pt(x, curve.eval(x)));
    }
    boundary.push(pt(1.0, top));
    boundary.push(pt(0.0, top));
    let patch = GraphPatch::new(
        pt(0.0, 0.0),
        Frame2::default(),
        (0.0, 1.0),
        PhiKind::PiecewiseQuad(curve),
        2.0,
    )?;
    Ok(
        PlanarDomain::new(boundary, vec![patch], 2.0, 0.2, DomainKind::Quasiconvex)?
            .with_modulus(ModulusSpec::Linear { rate: 2.0 })
            .with_name(format!("pathological:{level}")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerations_are_lowest_terms_and_distinct() {
        for order in [
            RationalEnumeration::SternBrocot,
            RationalEnumeration::CantorDiagonal,
        ] {
            let qs = enumerate_rationals(order, 500);
            let mut seen = std::collections::BTreeSet::new();
            for &(p, q) in &qs {
                assert!(p > 0 && p < q, "rational {p}/{q} outside (0,1)");
                assert_eq!(gcd(p, q), 1, "{p}/{q} not in lowest terms");
                assert!(seen.insert((p, q)), "duplicate {p}/{q}");
            }
        }
    }

    #[test]
    fn stern_brocot_prefix() {
        let qs = enumerate_rationals(RationalEnumeration::SternBrocot, 7);
        assert_eq!(
            qs,
            vec![(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 5), (3, 4)]
        );
    }

    #[test]
    fn k1_single_kink() {
        // K = 1: f = 2^{-1} 1{1/2 < t}; phi = -x^2 on [0,1/2], then slope
        // jumps by 1/2 at the kink.
        let c = PathologicalCurve::new(1, RationalEnumeration::SternBrocot).unwrap();
        assert_eq!(c.breaks, vec![0.5]);
        assert!((c.eval(0.25) - (-0.0625)).abs() < 1e-15);
        assert!((c.eval(0.75) - (0.5 * 0.25 - 0.5625)).abs() < 1e-15);
        // second-derivative measure: -2 dx everywhere plus delta of 1/2 at q1
        let patch = pathological_curve(1, RationalEnumeration::SternBrocot).unwrap();
        let rep = second_derivative_measure(&patch, 1).unwrap();
        assert_eq!(rep.interval_masses.len(), 2);
        // jump at 0.5 assigned to the right (left-closed) interval
        assert!((rep.interval_masses[0] - (-1.0)).abs() < 1e-15);
        assert!((rep.interval_masses[1] - (-1.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_bound_two() {
        let c = PathologicalCurve::new(4096, RationalEnumeration::SternBrocot).unwrap();
        for i in 0..=2000 {
            let x = i as f64 / 2000.0;
            assert!(c.derivative(x).abs() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn total_mass_formula() {
        // direct summation oracle: -2 + sum_{k<=K} 2^{-k}
        let k = 20;
        let c = PathologicalCurve::new(k, RationalEnumeration::CantorDiagonal).unwrap();
        let expected = -2.0 + (1.0 - (0.5_f64).powi(k as i32));
        let patch = GraphPatch::new(
            pt(0.0, 0.0),
            Frame2::default(),
            (0.0, 1.0),
            PhiKind::PiecewiseQuad(c),
            2.0,
        )
        .unwrap();
        let rep = second_derivative_measure(&patch, 6).unwrap();
        assert!((rep.total_mass - expected).abs() < 1e-14);
        let sum: f64 = rep.interval_masses.iter().sum();
        assert!((sum - expected).abs() < 1e-12);
    }

    #[test]
    fn nonnegative_interval_count_bounded_by_j() {
        let patch = pathological_curve(4096, RationalEnumeration::SternBrocot).unwrap();
        for j in 1..=12 {
            let rep = second_derivative_measure(&patch, j).unwrap();
            assert!(
                rep.nonnegative_count <= j,
                "j = {j}: {} nonnegative intervals",
                rep.nonnegative_count
            );
        }
    }

    #[test]
    fn interval_without_low_index_rational_is_negative() {
        // an interval containing no q_k with k <= j has mass <= -2^{-j}
        let patch = pathological_curve(4096, RationalEnumeration::SternBrocot).unwrap();
        let curve = match &patch.phi {
            PhiKind::PiecewiseQuad(c) => c.clone(),
            _ => unreachable!(),
        };
        let qs = enumerate_rationals(RationalEnumeration::SternBrocot, 4096);
        for j in [3usize, 5, 8] {
            let rep = second_derivative_measure(&patch, j).unwrap();
            let width = 1.0 / (1 << j) as f64;
            for (idx, &mass) in rep.interval_masses.iter().enumerate() {
                let lo = idx as f64 * width;
                let hi = lo + width;
                let has_low = qs.iter().take(j).any(|&(p, q)| {
                    let v = p as f64 / q as f64;
                    v >= lo && v < hi
                });
                if !has_low {
                    assert!(
                        mass <= -width + curve.truncation_tail() + 1e-15,
                        "j={j} idx={idx} mass={mass}"
                    );
                }
            }
        }
    }

    #[test]
    fn domain_closes_into_simple_polygon() {
        let d = pathological_domain(512, 0.01).unwrap();
        assert!(d.area() > 0.4);
        assert_eq!(d.kind, DomainKind::Quasiconvex);
    }
}
