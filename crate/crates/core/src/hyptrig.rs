//! Hyperbolic-plane kernel: unit-determinant matrices acting on the upper
//! half-plane, their axes, distances between geodesics, and the closed
//! trigonometric formulas for pants, collars and quadrilaterals.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{acosh_stable, Real};

/// A 2×2 real matrix of determinant 1, standing for the projective class
/// `±M` in `PSL(2, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: Real> Mat2<T> {
    /// Builds `[[a, b], [c, d]]`, rescaling by `1/sqrt(det)`.
    ///
    /// Inputs whose determinant is further than `T::det_tol()` from 1 are
    /// rejected.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - T::one()).abs() > T::det_tol() {
            return Err(Error::Domain {
                what: "matrix determinant",
                value: det.as_f64(),
            });
        }
        Ok(Self::raw(a, b, c, d).renormalized())
    }

    /// Trusted constructor for products of unit-determinant matrices.
    #[inline]
    pub(crate) fn raw(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `diag(x, 1/x)`.
    pub fn diag(x: T) -> Self {
        Self::raw(x, T::zero(), T::zero(), x.recip())
    }

    /// Translation by `len` along the imaginary axis, towards infinity.
    pub fn translation(len: T) -> Self {
        Self::diag((len / T::lit(2.0)).exp())
    }

    /// `z ↦ -1/z`: the half-turn about `i`, reversing the imaginary axis.
    pub fn flip() -> Self {
        Self::raw(T::zero(), -T::one(), T::one(), T::zero())
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d, -self.b, -self.c, self.a)
    }

    /// `n · self · n⁻¹`.
    pub fn conjugate_by(&self, n: &Self) -> Self {
        *n * *self * n.inverse()
    }

    /// Rescales by `1/sqrt(det)`; a no-op for an exact unit determinant.
    pub fn renormalized(&self) -> Self {
        let s = self.det().sqrt().recip();
        Self::raw(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Möbius action on the boundary line of the upper half-plane.
    pub fn apply(&self, z: ExtReal<T>) -> ExtReal<T> {
        match z {
            ExtReal::Infinity => {
                if self.c == T::zero() {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite(self.a / self.c)
                }
            }
            ExtReal::Finite(x) => {
                let den = self.c * x + self.d;
                if den == T::zero() {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// The two fixed points on the boundary, repelling first and attracting
    /// second. A parabolic element returns its fixed point twice.
    pub(crate) fn oriented_fixed_points(&self) -> (ExtReal<T>, ExtReal<T>) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let tr = self.trace();
        let disc = (tr * tr - T::lit(4.0)).max(T::zero()).sqrt();
        let (z1, z2) = if c == T::zero() {
            if a == d {
                (ExtReal::Infinity, ExtReal::Infinity)
            } else {
                (ExtReal::Infinity, ExtReal::Finite(b / (d - a)))
            }
        } else {
            let s = a - d;
            let r1 = if s >= T::zero() {
                (s + disc) / (c + c)
            } else {
                (s - disc) / (c + c)
            };
            let e1 = if r1.is_finite() {
                ExtReal::Finite(r1)
            } else {
                ExtReal::Infinity
            };
            let e2 = match e1 {
                ExtReal::Finite(r) if r != T::zero() => ExtReal::Finite(-b / (c * r)),
                _ => ExtReal::Finite((s - disc.copysign(s)) / (c + c)),
            };
            (e1, e2)
        };
        // |M'(z)| = 1/|cz + d|² at a finite fixed point; infinity attracts
        // when |a/d| > 1.
        let attracting = |z: ExtReal<T>| match z {
            ExtReal::Infinity => a.abs() > d.abs(),
            ExtReal::Finite(x) => (c * x + d).abs() > T::one(),
        };
        if attracting(z1) {
            (z2, z1)
        } else {
            (z1, z2)
        }
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;

    fn mul(self, o: Mat2<T>) -> Mat2<T> {
        Mat2::raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// A unit-determinant matrix stored as `exp(log_scale) · m`.
///
/// Holonomy of long words (iterated mapping classes) has entries far beyond
/// the floating-point range; only the logarithm of the overall scale is
/// kept once entries grow large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2<T> {
    m: [T; 4],
    log_scale: T,
}

impl<T: Real> From<Mat2<T>> for ScaledMat2<T> {
    fn from(m: Mat2<T>) -> Self {
        Self {
            m: m.entries(),
            log_scale: T::zero(),
        }
    }
}

impl<T: Real> ScaledMat2<T> {
    pub fn identity() -> Self {
        Mat2::identity().into()
    }

    /// `Some` while no rescaling has happened.
    pub fn as_mat2(&self) -> Option<Mat2<T>> {
        (self.log_scale == T::zero()).then(|| Mat2::raw(self.m[0], self.m[1], self.m[2], self.m[3]))
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self {
            m: [d, -b, -c, a],
            log_scale: self.log_scale,
        }
    }

    fn rescale(&mut self) {
        // Two factors below max^(1/4) multiply without overflow.
        let limit = T::max_value().sqrt().sqrt();
        let big = self.m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        if big > limit {
            for x in self.m.iter_mut() {
                *x = *x / big;
            }
            self.log_scale = self.log_scale + big.ln();
        }
    }

    /// `log |trace|` of the represented matrix.
    pub fn log_abs_trace(&self) -> T {
        (self.m[0] + self.m[3]).abs().ln() + self.log_scale
    }

    /// Translation length `2 arccosh(|tr|/2)`, valid for any scale.
    pub fn translation_length(&self) -> Result<T> {
        if let Some(m) = self.as_mat2() {
            return translation_length(&m);
        }
        let lt = self.log_abs_trace();
        if lt < T::lit(30.0) {
            return length_from_abs_trace(lt.exp());
        }
        // arccosh(x) = log x + log(1 + sqrt(1 - 1/x²)), x = |tr|/2.
        let log_x = lt - T::LN_2();
        let inv_x2 = (-(log_x + log_x)).exp();
        Ok(T::lit(2.0) * (log_x + (T::one() + (T::one() - inv_x2).sqrt()).ln()))
    }
}

impl<T: Real> Mul for ScaledMat2<T> {
    type Output = ScaledMat2<T>;

    fn mul(self, o: ScaledMat2<T>) -> ScaledMat2<T> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        let mut out = ScaledMat2 {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            log_scale: self.log_scale + o.log_scale,
        };
        out.rescale();
        out
    }
}

/// A point of the boundary circle `R ∪ {∞}` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> ExtReal<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinity => None,
        }
    }
}

/// An unoriented complete geodesic, given by its two distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic<T> {
    pub p: ExtReal<T>,
    pub q: ExtReal<T>,
}

impl<T: Real> Geodesic<T> {
    pub fn new(p: ExtReal<T>, q: ExtReal<T>) -> Result<Self> {
        if p == q {
            return Err(Error::Degenerate("geodesic endpoints coincide".into()));
        }
        Ok(Self { p, q })
    }

    fn shares_endpoint(&self, o: &Self) -> bool {
        self.p == o.p || self.p == o.q || self.q == o.p || self.q == o.q
    }

    fn same_as(&self, o: &Self) -> bool {
        (self.p == o.p && self.q == o.q) || (self.p == o.q && self.q == o.p)
    }

    /// Image under a Möbius transformation.
    pub fn mapped(&self, m: &Mat2<T>) -> Self {
        Self {
            p: m.apply(self.p),
            q: m.apply(self.q),
        }
    }
}

/// Side lengths of a geodesic quadrilateral with two right angles at the far
/// side: `a`, `b` the two legs, `ell` the far side, `big_l` the side opposite
/// to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig<T> {
    pub a: T,
    pub b: T,
    pub ell: T,
    pub big_l: T,
}

impl<T: Real> QuadConfig<T> {
    /// Solves for the remaining side.
    pub fn solve(a: T, b: T, ell: T) -> Result<Self> {
        let big_l = quad_side(a, b, ell)?;
        Ok(Self { a, b, ell, big_l })
    }
}

fn length_from_abs_trace<T: Real>(tr: T) -> Result<T> {
    let two = T::lit(2.0);
    if (tr - two).abs() <= T::trace_tol() {
        Ok(T::zero())
    } else if tr < two {
        Err(Error::Elliptic { trace: tr.as_f64() })
    } else {
        Ok(two * acosh_stable(tr / two))
    }
}

/// Translation length `2 arccosh(|tr M| / 2)`; zero on the parabolic band.
pub fn translation_length<T: Real>(m: &Mat2<T>) -> Result<T> {
    length_from_abs_trace(m.trace().abs())
}

/// Fixed points of a hyperbolic element on the boundary line.
pub fn axis_endpoints<T: Real>(m: &Mat2<T>) -> Result<Geodesic<T>> {
    let tr = m.trace().abs();
    let two = T::lit(2.0);
    if tr < two - T::trace_tol() {
        return Err(Error::Elliptic { trace: tr.as_f64() });
    }
    if tr <= two + T::trace_tol() {
        return Err(Error::Parabolic { trace: tr.as_f64() });
    }
    let (p, q) = m.oriented_fixed_points();
    Geodesic::new(p, q)
}

/// Length of the common perpendicular of two geodesics; zero when they meet
/// or are asymptotic.
pub fn geodesic_distance<T: Real>(g1: &Geodesic<T>, g2: &Geodesic<T>) -> Result<T> {
    if g1.same_as(g2) {
        return Err(Error::Degenerate("distance from a geodesic to itself".into()));
    }
    if g1.shares_endpoint(g2) {
        return Ok(T::zero());
    }
    let pts = [g1.p, g1.q, g2.p, g2.q];
    let [p1, q1, p2, q2] = if pts.contains(&ExtReal::Infinity) {
        // z ↦ -1/(z - c) with c beyond every finite endpoint moves all four
        // points into the finite positive reals.
        let c = pts.iter().filter_map(|z| z.finite()).fold(T::neg_infinity(), T::max) + T::one();
        let m = Mat2::raw(T::zero(), -T::one(), T::one(), -c);
        pts.map(|z| m.apply(z).finite().expect("finite after moving infinity"))
    } else {
        pts.map(|z| z.finite().expect("no infinite endpoint"))
    };

    let (lo, hi) = if p1 < q1 { (p1, q1) } else { (q1, p1) };
    let inside = |x: T| x > lo && x < hi;
    if inside(p2) != inside(q2) {
        return Ok(T::zero());
    }
    // cosh d = |(1 + R)/(1 - R)| with R the cross-ratio, written with the
    // factored denominator (p1 - q1)(q2 - p2).
    let num = (p1 - q2) * (q1 - p2) + (p1 - p2) * (q1 - q2);
    let den = (p1 - q1) * (q2 - p2);
    Ok(acosh_stable((num / den).abs()))
}

fn require_positive<T: Real>(what: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x.as_f64(),
        })
    }
}

/// Width `w` of the standard collar about a geodesic of length `ell`:
/// `sinh(ell/2) · sinh(w) = 1`.
pub fn collar_width<T: Real>(ell: T) -> Result<T> {
    require_positive("collar core length", ell)?;
    Ok((ell / T::lit(2.0)).sinh().recip().asinh())
}

/// Length of the orthogeodesic between cuffs `β₁` and `β₂` of a pair of
/// pants whose third cuff is `γ`.
pub fn pants_arc_two_cuffs<T: Real>(lgamma: T, lbeta1: T, lbeta2: T) -> Result<T> {
    require_positive("cuff length", lgamma)?;
    require_positive("cuff length", lbeta1)?;
    require_positive("cuff length", lbeta2)?;
    let half = T::lit(0.5);
    let (h1, h2) = (lbeta1 * half, lbeta2 * half);
    let num = (lgamma * half).cosh() + h1.cosh() * h2.cosh();
    let den = h1.sinh() * h2.sinh();
    Ok(acosh_stable(num / den))
}

/// Length of the orthogeodesic from cuff `β` back to itself, separating the
/// other two cuffs `γ₁`, `γ₂`.
pub fn pants_arc_one_cuff<T: Real>(lbeta: T, lgamma1: T, lgamma2: T) -> Result<T> {
    require_positive("cuff length", lbeta)?;
    require_positive("cuff length", lgamma1)?;
    require_positive("cuff length", lgamma2)?;
    let half = T::lit(0.5);
    let cb = (lbeta * half).cosh();
    let c1 = (lgamma1 * half).cosh();
    let c2 = (lgamma2 * half).cosh();
    let sb = (lbeta * half).sinh();
    let num = -T::one() + cb * cb + c1 * c1 + c2 * c2 + T::lit(2.0) * cb * c1 * c2;
    Ok(T::lit(2.0) * acosh_stable((num / (sb * sb)).sqrt()))
}

/// Side opposite the far side `ell` of a quadrilateral with legs `a`, `b`:
/// `cosh L = -sinh a sinh b + cosh a cosh b cosh ell`.
pub fn quad_side<T: Real>(a: T, b: T, ell: T) -> Result<T> {
    if !(a >= T::zero()) {
        return Err(Error::Domain {
            what: "quadrilateral leg",
            value: a.as_f64(),
        });
    }
    if !(b >= T::zero()) {
        return Err(Error::Domain {
            what: "quadrilateral leg",
            value: b.as_f64(),
        });
    }
    require_positive("quadrilateral far side", ell)?;
    let big = a.cosh() * b.cosh() * ell.cosh();
    let arg = big - a.sinh() * b.sinh();
    if arg < T::one() - T::lit(4.0) * T::epsilon() * big {
        return Err(Error::Domain {
            what: "quadrilateral cosh(L)",
            value: arg.as_f64(),
        });
    }
    Ok(acosh_stable(arg.max(T::one())))
}
