//! Pinching the boundary of the one-holed torus to a cusp: the coordinate map
//! that forgets the boundary length, sweeps comparing the arc metric on
//! bordered surfaces with the Thurston metric on the cusped limit, and the
//! asymptotic checks used along the way.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyptrig::{pants_arc_two_cuffs, quad_side};
use crate::metrics::{dhat, farey_family};
use crate::scalar::Real;
use crate::torus::FnTorus;

/// The cusped point with the same interior coordinates.
pub fn psi<T: Real>(x: &FnTorus<T>) -> FnTorus<T> {
    FnTorus {
        boundary: T::zero(),
        ..*x
    }
}

/// The point with boundary length `l` and the interior coordinates of `x0`.
pub fn psi_inv<T: Real>(x0: &FnTorus<T>, l: T) -> Result<FnTorus<T>> {
    if x0.boundary != T::zero() {
        return Err(Error::Domain {
            what: "boundary of a cusped point",
            value: x0.boundary.as_f64(),
        });
    }
    if !(l > T::zero()) {
        return Err(Error::Domain {
            what: "boundary length",
            value: l.as_f64(),
        });
    }
    FnTorus::new(x0.ell, x0.twist, l)
}

/// One boundary level of a pinch sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<T> {
    #[serde(rename = "L")]
    pub l: T,
    pub d_arc: T,
    pub d_th: T,
    pub gap: T,
    /// `d_arc − d_th`.
    pub diff: T,
    pub witness_arc: String,
    pub witness_th: String,
}

pub const DEFAULT_LEVELS: [f64; 6] = [1.0, 0.5, 0.25, 0.1, 0.05, 0.01];
pub const DEFAULT_FAREY: u32 = 8;

/// Arc-metric estimates between the bordered points over `levels`, against
/// the Thurston-metric estimate between the cusped points.
pub fn pinch_sweep<T: Real>(x0: &FnTorus<T>, y0: &FnTorus<T>, levels: &[T], n: u32) -> Result<Vec<SweepRow<T>>> {
    let curves = farey_family(n)?;
    let with_arcs = curves.with_dual_arcs();
    let th = dhat(x0, y0, &curves)?;
    levels
        .par_iter()
        .map(|&l| {
            let arc = dhat(&psi_inv(x0, l)?, &psi_inv(y0, l)?, &with_arcs)?;
            Ok(SweepRow {
                l,
                d_arc: arc.value,
                d_th: th.value,
                gap: (arc.value - th.value).abs(),
                diff: arc.value - th.value,
                witness_arc: arc.witness.to_string(),
                witness_th: th.witness.to_string(),
            })
        })
        .collect()
}

/// Error of the small-boundary expansion of the perpendicular between two
/// cuffs of length `l` across a cuff of length `lgamma`:
/// `d − |log sinh²(l/2)| − (log 2 + log(cosh(lgamma/2) + 1))`.
pub fn arc_residual<T: Real>(lgamma: T, l: T) -> Result<T> {
    for (what, v) in [("curve length", lgamma), ("boundary length", l)] {
        if !(v > T::zero()) {
            return Err(Error::Domain {
                what,
                value: v.as_f64(),
            });
        }
    }
    let two = T::lit(2.0);
    let d = pants_arc_two_cuffs(lgamma, l, l)?;
    let s = (l / two).sinh();
    let limit = T::LN_2() + ((lgamma / two).cosh() + T::one()).ln();
    Ok(d - (s * s).ln().abs() - limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadCheck<T> {
    pub ratio: T,
    pub bound: T,
    pub pass: bool,
}

/// Compares the far sides of two quadrilaterals against
/// `1.05 · max(1, ell'/ell)`.
pub fn quad_ratio_check<T: Real>(a: T, b: T, ell: T, a2: T, b2: T, ell2: T) -> Result<QuadCheck<T>> {
    let ratio = quad_side(a2, b2, ell2)? / quad_side(a, b, ell)?;
    let bound = T::lit(1.05) * T::one().max(ell2 / ell);
    Ok(QuadCheck {
        ratio,
        bound,
        pass: ratio <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_round_trip() {
        let x = FnTorus::<f64>::new(1.0, 0.3, 0.7).unwrap();
        let x0 = psi(&x);
        assert_eq!(x0, FnTorus::cusped(1.0, 0.3).unwrap());
        assert_eq!(psi_inv(&x0, 0.7).unwrap(), x);
        assert_eq!(psi(&psi_inv(&x0, 0.2).unwrap()), x0);
        assert!(psi_inv(&x, 0.2).is_err());
        assert!(psi_inv(&x0, 0.0).is_err());
    }

    #[test]
    fn residual_values() {
        let r = arc_residual(1.0_f64, 0.01).unwrap();
        assert!((r - 1.1751e-5).abs() < 1e-8, "{r}");
        let r = arc_residual(1.0_f64, 0.5).unwrap();
        assert!((r - 0.02933954).abs() < 1e-7, "{r}");
        assert!(arc_residual(1.0_f64, 0.0).is_err());
        assert!(arc_residual(-1.0_f64, 0.1).is_err());
    }

    #[test]
    fn quad_checks() {
        let c = quad_ratio_check(3.0_f64, 3.0, 10.0, 3.5, 2.5, 12.0).unwrap();
        assert!(c.pass);
        let c = quad_ratio_check(2.0_f64, 1.0, 11.0, 2.0, 1.0, 11.0).unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-15 && c.pass);
        let c = quad_ratio_check(0.0_f64, 0.0, 20.0, 0.0, 0.0, 40.0).unwrap();
        assert!((c.ratio - 2.0).abs() < 1e-12 && c.pass);
    }

    #[test]
    fn identical_points_have_no_gap() {
        let x = FnTorus::<f64>::cusped(1.2, 0.1).unwrap();
        let rows = pinch_sweep(&x, &x, &[1.0, 0.1], 4).unwrap();
        assert!(rows.iter().all(|r| r.gap == 0.0 && r.d_th == 0.0));
    }
}
