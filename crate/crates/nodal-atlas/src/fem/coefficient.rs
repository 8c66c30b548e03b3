//! Variable coefficient matrices `A(x)` with ellipticity and Lipschitz data.

use crate::error::{Error, Result};
use crate::geometry::primitives::{Mat2, Pt2};

/// Coefficient matrix map with its ellipticity bound `Lambda >= 1` and
/// Lipschitz bound `gamma >= 0`; `Lambda^-1 I <= A(x) <= Lambda I` and
/// `|A(x) - A(y)| <= gamma |x - y|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    pub kind: CoeffKind,
    pub lambda: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffKind {
    Identity,
    /// Constant symmetric positive definite matrix.
    ConstantSpd(Mat2),
    /// Scalar field `a(x,y) = 1 + (amp/sqrt(2)) (sin x + cos y)` times I;
    /// Lipschitz constant `amp`, ellipticity `1 / (1 - amp sqrt(2))`.
    ScalarBump { amp: f64 },
    /// Anisotropic polynomial field
    /// `A = I + c [[y^2, -x y], [-x y, x^2]]`, positive definite for any
    /// `c >= 0` (rank-one update by c (y,-x)(y,-x)^T).
    Rotor { c: f64 },
}

impl CoefficientField {
    pub fn identity() -> Self {
        CoefficientField {
            kind: CoeffKind::Identity,
            lambda: 1.0,
            gamma: 0.0,
        }
    }

    pub fn constant(m: Mat2) -> Result<Self> {
        if (m.m12 - m.m21).abs() > 1e-12 {
            return Err(Error::invalid("constant coefficient must be symmetric"));
        }
        let (lo, hi) = sym_eigenvalues(&m);
        if lo <= 0.0 {
            return Err(Error::invalid("constant coefficient must be positive definite"));
        }
        Ok(CoefficientField {
            kind: CoeffKind::ConstantSpd(m),
            lambda: hi.max(1.0 / lo).max(1.0),
            gamma: 0.0,
        })
    }

    /// Scalar bump preset with Lipschitz bound `amp` (requires `amp < 0.7`).
    pub fn scalar_bump(amp: f64) -> Result<Self> {
        if !(0.0..0.7).contains(&amp) {
            return Err(Error::invalid("scalar-bump amplitude must be in [0, 0.7)"));
        }
        // |grad a| = (amp/sqrt2) |(cos x, -sin y)| <= amp, |a - 1| <= amp*sqrt2
        let dev = amp * (2.0_f64).sqrt();
        Ok(CoefficientField {
            kind: CoeffKind::ScalarBump { amp },
            lambda: ((1.0 + dev).max(1.0 / (1.0 - dev))).max(1.0),
            gamma: amp,
        })
    }

    /// Anisotropic rotor preset on the unit-scale box (|x|,|y| <= b).
    pub fn rotor(c: f64, b: f64) -> Result<Self> {
        if c < 0.0 {
            return Err(Error::invalid("rotor coefficient must be nonnegative"));
        }
        let r2 = 2.0 * b * b;
        Ok(CoefficientField {
            kind: CoeffKind::Rotor { c },
            lambda: (1.0 + c * r2).max(1.0),
            // |dA| <= 2 c (|x| + |y|) <= 4 c b entrywise scale
            gamma: 4.0 * c * b,
        })
    }

    /// Parses `"identity"`, `"const:a11,a12,a22"`, `"scalar-bump:amp"`,
    /// `"rotor:c"`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(Self::identity());
        }
        if let Some(rest) = s.strip_prefix("const:") {
            let vals: Vec<f64> = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::UnknownPreset(s.into()))?;
            if vals.len() != 3 {
                return Err(Error::UnknownPreset(s.into()));
            }
            return Self::constant(Mat2::new(vals[0], vals[1], vals[1], vals[2]));
        }
        if let Some(rest) = s.strip_prefix("scalar-bump:") {
            let amp = rest.parse().map_err(|_| Error::UnknownPreset(s.into()))?;
            return Self::scalar_bump(amp);
        }
        if let Some(rest) = s.strip_prefix("rotor:") {
            let c = rest.parse().map_err(|_| Error::UnknownPreset(s.into()))?;
            return Self::rotor(c, 1.0);
        }
        Err(Error::UnknownPreset(s.into()))
    }

    pub fn preset_name(&self) -> String {
        match &self.kind {
            CoeffKind::Identity => "identity".into(),
            CoeffKind::ConstantSpd(m) => format!("const:{},{},{}", m.m11, m.m12, m.m22),
            CoeffKind::ScalarBump { amp } => format!("scalar-bump:{amp}"),
            CoeffKind::Rotor { c } => format!("rotor:{c}"),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, CoeffKind::Identity)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, CoeffKind::Identity | CoeffKind::ConstantSpd(_))
    }

    #[inline]
    pub fn eval(&self, p: Pt2) -> Mat2 {
        match &self.kind {
            CoeffKind::Identity => Mat2::identity(),
            CoeffKind::ConstantSpd(m) => *m,
            CoeffKind::ScalarBump { amp } => {
                let a = 1.0 + amp / (2.0_f64).sqrt() * (p.x.sin() + p.y.cos());
                Mat2::new(a, 0.0, 0.0, a)
            }
            CoeffKind::Rotor { c } => Mat2::new(
                1.0 + c * p.y * p.y,
                -c * p.x * p.y,
                -c * p.x * p.y,
                1.0 + c * p.x * p.x,
            ),
        }
    }

    /// Spot-checks symmetry, ellipticity and the Lipschitz bound on sample
    /// points; rejects with the offending location.
    pub fn verify_on_samples(&self, pts: &[Pt2]) -> Result<()> {
        for &p in pts {
            let a = self.eval(p);
            if (a.m12 - a.m21).abs() > 1e-12 {
                return Err(Error::NonSpdCoefficient { x: p.x, y: p.y });
            }
            let (lo, hi) = sym_eigenvalues(&a);
            if lo < 1.0 / self.lambda - 1e-9 || hi > self.lambda + 1e-9 || lo <= 0.0 {
                return Err(Error::NonSpdCoefficient { x: p.x, y: p.y });
            }
        }
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            let d = self.eval(p) - self.eval(q);
            let dist = (p - q).norm();
            if dist > 1e-12 {
                let norm = sym_eigenvalues(&Mat2::new(
                    d.m11.abs(),
                    d.m12.abs(),
                    d.m21.abs(),
                    d.m22.abs(),
                ))
                .1
                .abs();
                if norm > self.gamma * dist + 1e-9 {
                    return Err(Error::invalid(format!(
                        "Lipschitz bound gamma = {} violated between samples",
                        self.gamma
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Eigenvalues (min, max) of a symmetric 2x2 matrix.
pub fn sym_eigenvalues(m: &Mat2) -> (f64, f64) {
    let tr = m.m11 + m.m22;
    let det = m.m11 * m.m22 - m.m12 * m.m21;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 - disc, tr / 2.0 + disc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::primitives::pt;

    #[test]
    fn presets_parse_and_verify() {
        let pts: Vec<Pt2> = (0..50)
            .map(|i| pt((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        for s in ["identity", "const:2,0,1", "scalar-bump:0.1", "rotor:0.05"] {
            let a = CoefficientField::parse(s).unwrap();
            a.verify_on_samples(&pts).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert!(a.lambda >= 1.0);
        }
    }

    #[test]
    fn rejects_indefinite_constant() {
        assert!(CoefficientField::constant(Mat2::new(1.0, 2.0, 2.0, 1.0)).is_err());
        assert!(CoefficientField::constant(Mat2::new(1.0, 0.5, 0.2, 1.0)).is_err());
    }

    #[test]
    fn rotor_is_spd() {
        let a = CoefficientField::rotor(0.3, 1.0).unwrap();
        for &p in &[pt(1.0, 1.0), pt(-0.5, 0.8), pt(0.0, 0.0)] {
            let (lo, _) = sym_eigenvalues(&a.eval(p));
            assert!(lo >= 1.0 - 1e-12);
        }
    }
}
