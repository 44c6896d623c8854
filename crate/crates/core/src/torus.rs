//! Fenchel–Nielsen holonomy of the one-holed torus (boundary length `L > 0`)
//! and of the once-punctured torus (`L = 0`), with slope curves and the
//! boundary arcs dual to them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyptrig::{pants_arc_one_cuff, Mat2, ScaledMat2};
use crate::scalar::Real;
use crate::word::{Letter, Word};

pub const GEN_A: Letter = Letter::new(0);
pub const GEN_B: Letter = Letter::new(1);

/// A marked hyperbolic one-holed torus in Fenchel–Nielsen coordinates.
///
/// `ell` and `twist` belong to the slope-`(1,0)` curve; `boundary = 0` means
/// the boundary is a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnTorus<T> {
    pub ell: T,
    pub twist: T,
    pub boundary: T,
}

impl<T: Real> FnTorus<T> {
    pub fn new(ell: T, twist: T, boundary: T) -> Result<Self> {
        let x = Self { ell, twist, boundary };
        x.validate()?;
        Ok(x)
    }

    pub fn cusped(ell: T, twist: T) -> Result<Self> {
        Self::new(ell, twist, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell > T::zero() && self.ell.is_finite()) {
            return Err(Error::Domain {
                what: "FN length",
                value: self.ell.as_f64(),
            });
        }
        if !self.twist.is_finite() {
            return Err(Error::Domain {
                what: "FN twist",
                value: self.twist.as_f64(),
            });
        }
        if !(self.boundary >= T::zero() && self.boundary.is_finite()) {
            return Err(Error::Domain {
                what: "boundary length",
                value: self.boundary.as_f64(),
            });
        }
        Ok(())
    }

    pub fn is_cusped(&self) -> bool {
        self.boundary == T::zero()
    }

    /// The point `2·arccosh(√2), 0, 0` with the most symmetric cusped
    /// structure (trace triple `(2√2, 2√2, 4)`).
    pub fn square() -> Self {
        Self {
            ell: T::lit(2.0) * T::SQRT_2().acosh(),
            twist: T::zero(),
            boundary: T::zero(),
        }
    }
}

impl<T: Real> FromStr for FnTorus<T> {
    type Err = Error;

    /// Parses `ell,twist,boundary`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Invalid(format!("{t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [l, t, b] => Self::new(T::lit(*l), T::lit(*t), T::lit(*b)),
            _ => Err(Error::Invalid(format!("expected ell,twist,boundary; got {s:?}"))),
        }
    }
}

/// Isotopy class of an unoriented simple closed curve on the torus, by its
/// homology direction `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Slope {
    /// Normalizes `(p, q) ~ (-p, -q)` so that `q > 0`, or `q = 0, p = 1`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::Invalid("slope (0,0)".into()));
        }
        if gcd(p, q) != 1 {
            return Err(Error::Invalid(format!("slope ({p},{q}) is not primitive")));
        }
        Ok(if q < 0 || (q == 0 && p < 0) {
            Self { p: -p, q: -q }
        } else {
            Self { p, q }
        })
    }

    /// Normalized primitive direction of a nonzero integer vector.
    pub fn from_vector(p: i64, q: i64) -> Result<Self> {
        let g = gcd(p, q);
        if g == 0 {
            return Err(Error::Invalid("slope (0,0)".into()));
        }
        Self::new(p / g, q / g)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn horizontal() -> Self {
        Self { p: 1, q: 0 }
    }

    pub fn vertical() -> Self {
        Self { p: 0, q: 1 }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `p/q` or `p,q`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .or_else(|| s.split_once(','))
            .ok_or_else(|| Error::Invalid(format!("slope {s:?}: expected p/q")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Invalid(format!("slope {s:?}: {e}")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

/// The essential boundary-to-boundary arc disjoint from `slope`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualArc {
    pub slope: Slope,
}

/// A curve or arc class on the torus whose length can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TorusClass {
    Curve(Slope),
    Arc(DualArc),
}

impl TorusClass {
    pub fn is_arc(&self) -> bool {
        matches!(self, TorusClass::Arc(_))
    }
}

impl fmt::Display for TorusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusClass::Curve(s) => write!(f, "curve({},{})", s.p, s.q),
            TorusClass::Arc(a) => write!(f, "arc({},{})", a.slope.p, a.slope.q),
        }
    }
}

/// Christoffel word of a slope: `p` letters `A` (or `a` when `p < 0`) and
/// `q` letters `B`, following the cutting sequence of the line of slope
/// `q/|p|`.
pub fn slope_word(s: Slope) -> Word {
    let (p, q) = (s.p.unsigned_abs() as u128, s.q as u128);
    let n = p + q;
    let a = if s.p < 0 { GEN_A.inverse() } else { GEN_A };
    let letters = (1..=n)
        .map(|i| if (i * q) / n > ((i - 1) * q) / n { GEN_B } else { a })
        .collect();
    Word::new(letters)
}

fn power<T: Real>(m: ScaledMat2<T>, mut k: u64) -> ScaledMat2<T> {
    let mut acc = ScaledMat2::identity();
    let mut base = m;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// Holonomy images of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Holonomy<T> {
    pub a: ScaledMat2<T>,
    pub b: ScaledMat2<T>,
}

impl<T: Real> Holonomy<T> {
    pub fn word_image(&self, w: &Word) -> Result<ScaledMat2<T>> {
        w.eval(&[self.a, self.b])
    }

    pub fn word_length(&self, w: &Word) -> Result<T> {
        self.word_image(w)?.translation_length()
    }

    /// Image of a word conjugate to [`slope_word`], built by Euclid's
    /// algorithm on `(|p|, q)` with powers by squaring. Only products of the
    /// generators (never their inverses, apart from `a` for `p < 0`) occur,
    /// so a holonomy with positive entries is evaluated without cancellation,
    /// and the cost is logarithmic in the word length.
    pub fn slope_image(&self, s: Slope) -> ScaledMat2<T> {
        let mut x = if s.p < 0 { self.a.inverse() } else { self.a };
        let mut y = self.b;
        let (mut p, mut q) = (s.p.unsigned_abs(), s.q.unsigned_abs());
        // Invariant: the answer is the Christoffel word of (p, q) in the
        // letters x, y.
        loop {
            if q == 0 {
                return x;
            }
            if p == 0 {
                return y;
            }
            if p >= q {
                // w(p, q) = w(p - kq, q) under y ↦ x^k y.
                let k = p / q;
                y = power(x, k) * y;
                p -= k * q;
            } else {
                // w(p, q) = w(p, q - kp) under x ↦ x y^k.
                let k = q / p;
                x = x * power(y, k);
                q -= k * p;
            }
        }
    }

    pub fn slope_length(&self, s: Slope) -> Result<T> {
        self.slope_image(s).translation_length()
    }

    /// Precomposes with the free-group endomorphism sending `A ↦ images[0]`,
    /// `B ↦ images[1]`.
    pub fn precompose(&self, images: &[Word; 2]) -> Result<Self> {
        Ok(Self {
            a: self.word_image(&images[0])?,
            b: self.word_image(&images[1])?,
        })
    }
}

/// Holonomy representation of a Fenchel–Nielsen point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rep<T> {
    pub gen_a: Mat2<T>,
    pub gen_b: Mat2<T>,
    pub point: FnTorus<T>,
}

/// Deviations of a [`Rep`] from its defining trace conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepResiduals<T> {
    /// `|tr A| - 2 cosh(ell/2)`
    pub trace_a: T,
    /// `|tr [A,B]| - 2 cosh(L/2)`
    pub commutator: T,
    /// `x² + y² + z² - xyz - (2 - 2 cosh(L/2))`
    pub markov: T,
}

impl<T: Real> RepResiduals<T> {
    pub fn max_abs(&self) -> T {
        self.trace_a.abs().max(self.commutator.abs()).max(self.markov.abs())
    }
}

/// Realizes `X` as `A = diag(a, 1/a)`, `B = diag(e^{τ/2}, e^{-τ/2}) [[p, w], [w, p]]`
/// with `a = e^{ell/2}`, `w = cosh(L/4)/sinh(ell/2)`, `p = sqrt(1 + w²)`.
pub fn build_rep<T: Real>(x: &FnTorus<T>) -> Result<Rep<T>> {
    x.validate()?;
    let half = T::lit(0.5);
    let w = (x.boundary * T::lit(0.25)).cosh() / (x.ell * half).sinh();
    let p = (T::one() + w * w).sqrt();
    let e = (x.twist * half).exp();
    Ok(Rep {
        gen_a: Mat2::translation(x.ell),
        gen_b: Mat2::raw(e * p, e * w, w / e, p / e),
        point: *x,
    })
}

impl<T: Real> Rep<T> {
    pub fn holonomy(&self) -> Holonomy<T> {
        Holonomy {
            a: self.gen_a.into(),
            b: self.gen_b.into(),
        }
    }

    /// `(tr A, tr B, tr AB)`.
    pub fn trace_triple(&self) -> (T, T, T) {
        (
            self.gen_a.trace(),
            self.gen_b.trace(),
            (self.gen_a * self.gen_b).trace(),
        )
    }

    pub fn commutator(&self) -> Mat2<T> {
        self.gen_a * self.gen_b * self.gen_a.inverse() * self.gen_b.inverse()
    }

    /// The same representation conjugated by `n`.
    pub fn conjugated(&self, n: &Mat2<T>) -> Self {
        Self {
            gen_a: self.gen_a.conjugate_by(n),
            gen_b: self.gen_b.conjugate_by(n),
            point: self.point,
        }
    }

    pub fn residuals(&self) -> RepResiduals<T> {
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let (x, y, z) = self.trace_triple();
        let cb = (self.point.boundary * half).cosh();
        RepResiduals {
            trace_a: x.abs() - two * (self.point.ell * half).cosh(),
            commutator: self.commutator().trace().abs() - two * cb,
            markov: x * x + y * y + z * z - x * y * z - (two - two * cb),
        }
    }
}

/// Geodesic length of the slope curve on `X`.
pub fn curve_length<T: Real>(x: &FnTorus<T>, s: Slope) -> Result<T> {
    build_rep(x)?.holonomy().slope_length(s)
}

/// Length of the orthogeodesic boundary arc dual to `arc.slope`.
///
/// A regular neighbourhood of the arc and the boundary is a pair of pants
/// whose other two cuffs are both the slope curve.
pub fn dual_arc_length<T: Real>(x: &FnTorus<T>, arc: DualArc) -> Result<T> {
    if x.is_cusped() {
        return Err(Error::CuspArc);
    }
    let c = curve_length(x, arc.slope)?;
    pants_arc_one_cuff(x.boundary, c, c)
}

impl<T: Real> FnTorus<T> {
    pub fn class_length(&self, class: &TorusClass) -> Result<T> {
        match class {
            TorusClass::Curve(s) => curve_length(self, *s),
            TorusClass::Arc(a) => dual_arc_length(self, *a),
        }
    }
}
