//! Mapping classes of the one-holed torus as matrices in `SL(2, Z)`, their
//! action on slopes and on the Teichmüller space, and translation-length
//! experiments.
//!
//! A class `f` acts on points by changing the marking, so that
//! `ℓ_c(f·X) = ℓ_{f(c)}(X)`. Lengths on `f^n·X` are computed from the exact
//! integer slope `f^n(c)` on the holonomy of `X`, which stays well
//! conditioned however long the word of `f^n(c)` is. The free-group
//! automorphism of a class is also available, for acting on arbitrary words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{dhat, farey_family, iterate_family, MarkedHolonomy, MetricEstimate, TorusFamily};
use crate::optim::{multistart, Interval, MultistartConfig};
use crate::scalar::Real;
use crate::torus::{FnTorus, Slope, TorusClass, GEN_A, GEN_B};
use crate::word::Word;

/// `[[a, b], [c, d]]` with `ad − bc = 1`, acting on column vectors `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MappingClass {
    m: [i64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// Finite order; `order` is the least `k` with `f^k = I`.
    Periodic {
        order: u32,
    },
    Reducible,
    PseudoAnosov,
}

fn overflow() -> Error {
    Error::Invalid("mapping class entries overflow".into())
}

impl MappingClass {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y));
        if det != Some(1) {
            return Err(Error::Invalid(format!(
                "[[{a},{b}],[{c},{d}]] does not have determinant 1"
            )));
        }
        Ok(Self { m: [a, b, c, d] })
    }

    pub fn identity() -> Self {
        Self { m: [1, 0, 0, 1] }
    }

    /// The Dehn twist along the slope `(1, 0)`: `(p, q) ↦ (p + q, q)`.
    pub fn twist() -> Self {
        Self { m: [1, 1, 0, 1] }
    }

    /// The quarter turn `[[0, −1], [1, 0]]`.
    pub fn rotation() -> Self {
        Self { m: [0, -1, 1, 0] }
    }

    /// A class taking `(1, 0)` to `s`.
    pub fn taking_horizontal_to(s: Slope) -> Self {
        let (p, q) = (s.p(), s.q());
        // Extended Euclid: x p + y q = 1, then [[p, -y], [q, x]].
        let (mut r0, mut r1, mut x0, mut x1, mut y0, mut y1) = (p, q, 1i64, 0i64, 0i64, 1i64);
        while r1 != 0 {
            let k = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - k * r1);
            (x0, x1) = (x1, x0 - k * x1);
            (y0, y1) = (y1, y0 - k * y1);
        }
        let (x, y) = if r0 < 0 { (-x0, -y0) } else { (x0, y0) };
        Self { m: [p, -y, q, x] }
    }

    pub fn entries(&self) -> [i64; 4] {
        self.m
    }

    pub fn trace(&self) -> i64 {
        self.m[0] + self.m[3]
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self { m: [d, -b, -c, a] }
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        let dot = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(u, v)| u.checked_add(v))
                .ok_or_else(overflow)
        };
        Ok(Self {
            m: [dot(a, e, b, g)?, dot(a, f, b, h)?, dot(c, e, d, g)?, dot(c, f, d, h)?],
        })
    }

    /// `f^n`; negative powers use the inverse.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    /// `g f g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        g.compose(self)?.compose(&g.inverse())
    }

    pub fn act_slope(&self, s: Slope) -> Result<Slope> {
        let [a, b, c, d] = self.m;
        let (p, q) = (i128::from(s.p()), i128::from(s.q()));
        let np = i128::from(a) * p + i128::from(b) * q;
        let nq = i128::from(c) * p + i128::from(d) * q;
        let np = i64::try_from(np).map_err(|_| overflow())?;
        let nq = i64::try_from(nq).map_err(|_| overflow())?;
        Slope::from_vector(np, nq)
    }

    pub fn kind(&self) -> Kind {
        let tr = self.trace().abs();
        if *self == Self::identity() {
            return Kind::Periodic { order: 1 };
        }
        match (tr, self.trace()) {
            (2, -2) if self.m[1] == 0 && self.m[2] == 0 => Kind::Periodic { order: 2 },
            (2, _) => Kind::Reducible,
            (0, _) => Kind::Periodic { order: 4 },
            (1, 1) => Kind::Periodic { order: 6 },
            (1, _) => Kind::Periodic { order: 3 },
            _ => Kind::PseudoAnosov,
        }
    }

    /// Spectral radius for pseudo-Anosov classes, 1 otherwise.
    pub fn dilatation<T: Real>(&self) -> T {
        match self.kind() {
            Kind::PseudoAnosov => {
                let t = T::from_i64(self.trace().abs()).expect("trace fits the scalar type");
                (t + (t * t - T::lit(4.0)).sqrt()) / T::lit(2.0)
            }
            _ => T::one(),
        }
    }

    /// Images of `A` and `B` under a free-group automorphism whose
    /// abelianization is this matrix.
    pub fn automorphism(&self) -> [Word; 2] {
        // Elementary factors, leftmost first.
        enum Step {
            T(i64),
            U(i64),
            S,
            Neg,
        }
        let [mut a, mut b, mut c, mut d] = self.m;
        let mut steps = Vec::new();
        while a != 0 && c != 0 {
            if a.abs() >= c.abs() {
                let k = a / c;
                a -= k * c;
                b -= k * d;
                steps.push(Step::T(k));
            } else {
                let k = c / a;
                c -= k * a;
                d -= k * b;
                steps.push(Step::U(k));
            }
        }
        if a == 0 {
            // [[0, b], [c, d]] = S · [[c, d], [0, −b]].
            steps.push(Step::S);
            (a, b, c) = (c, d, 0);
        }
        debug_assert_eq!(c, 0);
        if a < 0 {
            steps.push(Step::Neg);
            b = -b;
        }
        steps.push(Step::T(b));

        let power = |l: crate::word::Letter, k: i64| {
            let l = if k < 0 { l.inverse() } else { l };
            Word::new(vec![l; k.unsigned_abs() as usize])
        };
        let (ga, gb) = (Word::new(vec![GEN_A]), Word::new(vec![GEN_B]));
        let mut images = [ga.clone(), gb.clone()];
        for step in steps {
            let next = match step {
                Step::T(k) => [ga.clone(), power(GEN_A, k).concat(&gb)],
                Step::U(k) => [power(GEN_B, k).concat(&ga), gb.clone()],
                Step::S => [gb.clone(), ga.inverse()],
                Step::Neg => [ga.inverse(), gb.inverse()],
            };
            images = [
                next[0].substitute(&images).reduced(),
                next[1].substitute(&images).reduced(),
            ];
        }
        images
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl FromStr for MappingClass {
    type Err = Error;

    /// Accepts `a,b,c,d` or `[[a,b],[c,d]]`.
    fn from_str(s: &str) -> Result<Self> {
        let nums = s
            .split(|c: char| c == ',' || c == '[' || c == ']' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad matrix entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match nums[..] {
            [a, b, c, d] => Self::new(a, b, c, d),
            _ => Err(Error::Invalid(format!("expected four matrix entries in {s:?}"))),
        }
    }
}

impl Serialize for MappingClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MappingClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn require_pseudo_anosov(f: &MappingClass) -> Result<()> {
    match f.kind() {
        Kind::PseudoAnosov => Ok(()),
        _ => Err(Error::PeriodicOrReducible),
    }
}

/// `max_{c ∈ F} log(ℓ_{f(c)}(X) / ℓ_c(X))`, an estimate of the distance from
/// `X` to `f·X`.
pub fn displacement<T: Real>(
    x: &FnTorus<T>,
    f: &MappingClass,
    family: &TorusFamily,
) -> Result<MetricEstimate<T, TorusClass>> {
    displacement_pow(x, f, 1, family)
}

/// Displacement of `f^n`.
pub fn displacement_pow<T: Real>(
    x: &FnTorus<T>,
    f: &MappingClass,
    n: i64,
    family: &TorusFamily,
) -> Result<MetricEstimate<T, TorusClass>> {
    let base = MarkedHolonomy::of(x)?;
    let image = base.pushed_pow(f, n)?;
    dhat(&base, &image, family)
}

/// `r_k = ℓ_{f^{k+1}(base)}(X) / ℓ_{f^k(base)}(X)` for `k = 0, …, K`.
pub fn dilatation_by_iteration<T: Real>(f: &MappingClass, base: Slope, x: &FnTorus<T>, k: u32) -> Result<Vec<T>> {
    require_pseudo_anosov(f)?;
    if k == 0 {
        return Err(Error::Invalid("iteration count must be at least 1".into()));
    }
    let h = MarkedHolonomy::of(x)?;
    let mut s = base;
    let mut prev = h.slope_length(s)?;
    let mut out = Vec::with_capacity(k as usize + 1);
    for _ in 0..=k {
        s = f.act_slope(s)?;
        let next = h.slope_length(s)?;
        out.push(next / prev);
        prev = next;
    }
    Ok(out)
}

/// Search domain and refinement settings for [`translation_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Bounds for `ell`; the grid is uniform in `log ell`.
    pub ell: (f64, f64),
    pub twist: (f64, f64),
    pub farey: u32,
    pub iterates: u32,
    pub multistart: MultistartConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            ell: (0.2, 6.0),
            twist: (-3.0, 3.0),
            farey: 8,
            iterates: 10,
            multistart: MultistartConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry<T> {
    pub start: usize,
    pub ell: T,
    pub twist: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationEstimate<T> {
    pub map: MappingClass,
    pub power: u32,
    pub min_value: T,
    pub argmin: FnTorus<T>,
    pub log_dilatation: T,
    pub boundary_hit: bool,
    pub n_evals: usize,
    #[serde(skip)]
    pub optimizer_trace: Vec<TraceEntry<T>>,
}

/// The family used for translation runs: Farey slopes and the orbit of
/// `(1, 0)` under `f`.
pub fn translation_family(f: &MappingClass, farey: u32, iterates: u32) -> Result<TorusFamily> {
    Ok(farey_family(farey)?.union(&iterate_family(f, Slope::horizontal(), iterates)?))
}

/// Minimizes the displacement of `f^n` over cusped points.
pub fn translation_estimate<T: Real>(
    f: &MappingClass,
    n: u32,
    search: &SearchConfig,
) -> Result<TranslationEstimate<T>> {
    require_pseudo_anosov(f)?;
    if n == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    let (e0, e1) = search.ell;
    if !(e0 > 0.0) {
        return Err(Error::SearchDomain(format!("ell bounds ({e0}, {e1})")));
    }
    let bounds = [
        Interval::new(T::lit(e0.ln()), T::lit(e1.ln()))?,
        Interval::new(T::lit(search.twist.0), T::lit(search.twist.1))?,
    ];
    let family = translation_family(f, search.farey, search.iterates)?;
    let n = i64::from(n);
    let objective = |v: &[T]| -> Result<T> {
        let x = FnTorus::cusped(v[0].exp(), v[1])?;
        Ok(displacement_pow(&x, f, n, &family)?.value)
    };
    let run = multistart(&objective, &bounds, &search.multistart)?;
    let at = &run.best.x;
    let edge = |v: T, b: &Interval<T>| {
        let eps = b.width() * T::lit(1e-6);
        (v - b.lo).abs() <= eps || (b.hi - v).abs() <= eps
    };
    let optimizer_trace = run
        .runs
        .iter()
        .enumerate()
        .flat_map(|(start, r)| {
            r.trace.iter().map(move |(x, value)| TraceEntry {
                start,
                ell: x[0].exp(),
                twist: x[1],
                value: *value,
            })
        })
        .collect();
    Ok(TranslationEstimate {
        map: *f,
        power: n as u32,
        min_value: run.best.value,
        argmin: FnTorus::cusped(at[0].exp(), at[1])?,
        log_dilatation: T::from_i64(n).expect("power fits") * f.dilatation::<T>().ln(),
        boundary_hit: edge(at[0], &bounds[0]) || edge(at[1], &bounds[1]),
        n_evals: run.n_evals,
        optimizer_trace,
    })
}

/// `dhat(X0, f^n·X0) / n` over Farey slopes of level `farey` and the orbit
/// of `(1, 0)` of length `iterates`.
pub fn tau_estimate<T: Real>(f: &MappingClass, x0: &FnTorus<T>, n: u32, farey: u32, iterates: u32) -> Result<T> {
    if n == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    let family = translation_family(f, farey, iterates)?;
    let d = displacement_pow(x0, f, i64::from(n), &family)?;
    Ok(d.value / T::from_u32(n).expect("power fits"))
}

/// Displacement of the `power`-th twist along `slope` at the points where
/// `slope` has length `ε`, for each `ε` in `levels`.
///
/// Coordinates are changed by a class `g` with `g(1, 0) = slope`, which
/// turns the problem into the twist along `(1, 0)` at `(ε, 0, 0)` measured on
/// the family `g⁻¹(F)`.
pub fn twist_pinch<T: Real>(slope: Slope, power: i64, levels: &[T], farey: u32) -> Result<Vec<(T, T)>> {
    let g_inv = MappingClass::taking_horizontal_to(slope).inverse();
    let base = farey_family(farey)?;
    let pulled = base
        .curves()
        .map(|s| g_inv.act_slope(s).map(TorusClass::Curve))
        .collect::<Result<Vec<_>>>()?;
    let family = crate::metrics::Family::new(pulled, base.label().to_string());
    let twist = MappingClass::twist();
    levels
        .iter()
        .map(|&eps| {
            let x = FnTorus::cusped(eps, T::zero())?;
            Ok((eps, displacement_pow(&x, &twist, power, &family)?.value))
        })
        .collect()
}

/// [`twist_pinch`] for a single twist.
pub fn twist_pinch_experiment<T: Real>(slope: Slope, levels: &[T], farey: u32) -> Result<Vec<(T, T)>> {
    twist_pinch(slope, 1, levels, farey)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> MappingClass {
        MappingClass::new(2, 1, 1, 1).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(MappingClass::twist().kind(), Kind::Reducible);
        assert_eq!(MappingClass::rotation().kind(), Kind::Periodic { order: 4 });
        assert_eq!(cat().kind(), Kind::PseudoAnosov);
        assert!((cat().dilatation::<f64>() - 2.618033988749895).abs() < 1e-12);
        assert_eq!(MappingClass::twist().dilatation::<f64>(), 1.0);
        assert_eq!(
            MappingClass::new(-1, 0, 0, -1).unwrap().kind(),
            Kind::Periodic { order: 2 }
        );
        assert_eq!(
            MappingClass::new(0, -1, 1, 1).unwrap().kind(),
            Kind::Periodic { order: 6 }
        );
        assert_eq!(
            MappingClass::new(-1, 1, -1, 0).unwrap().kind(),
            Kind::Periodic { order: 3 }
        );
        for f in [MappingClass::rotation(), MappingClass::new(0, -1, 1, 1).unwrap()] {
            if let Kind::Periodic { order } = f.kind() {
                assert_eq!(f.pow(i64::from(order)).unwrap(), MappingClass::identity());
            }
        }
        assert!(MappingClass::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn slope_action() {
        let f = cat();
        assert_eq!(f.act_slope(Slope::horizontal()).unwrap(), Slope::new(2, 1).unwrap());
        let s = Slope::new(-3, 7).unwrap();
        assert_eq!(f.inverse().act_slope(f.act_slope(s).unwrap()).unwrap(), s);
        assert_eq!(MappingClass::identity().act_slope(s).unwrap(), s);
        let g = MappingClass::taking_horizontal_to(Slope::new(5, 3).unwrap());
        assert_eq!(g.act_slope(Slope::horizontal()).unwrap(), Slope::new(5, 3).unwrap());
        let g = MappingClass::taking_horizontal_to(Slope::new(-4, 7).unwrap());
        assert_eq!(g.act_slope(Slope::horizontal()).unwrap(), Slope::new(-4, 7).unwrap());
    }

    #[test]
    fn automorphism_abelianizes_to_matrix() {
        for m in [
            [2, 1, 1, 1],
            [1, 1, 0, 1],
            [0, -1, 1, 0],
            [-1, 0, 0, -1],
            [5, 3, 3, 2],
            [-7, 3, 2, -1],
            [3, -5, -4, 7],
            [1, 0, -6, 1],
        ] {
            let f = MappingClass::new(m[0], m[1], m[2], m[3]).unwrap();
            let [ia, ib] = f.automorphism();
            assert_eq!(ia.exponent_sums(2), vec![m[0], m[2]], "{f}");
            assert_eq!(ib.exponent_sums(2), vec![m[1], m[3]], "{f}");
        }
    }

    #[test]
    fn pushed_lengths_follow_slopes() {
        let x = FnTorus::<f64>::new(1.3, 0.4, 0.3).unwrap();
        let h = MarkedHolonomy::of(&x).unwrap();
        for f in [
            cat(),
            MappingClass::new(-7, 3, 2, -1).unwrap(),
            MappingClass::rotation(),
        ] {
            let g = h.pushed(&f).unwrap();
            let precomposed = h.holonomy.precompose(&f.automorphism()).unwrap();
            for s in [Slope::horizontal(), Slope::vertical(), Slope::new(-2, 3).unwrap()] {
                let want = g.slope_length(s).unwrap();
                let got = precomposed.word_length(&crate::torus::slope_word(s)).unwrap();
                assert!((got - want).abs() < 1e-9 * want.max(1.0), "{f} {s}");
            }
        }
    }

    #[test]
    fn parses_matrices() {
        assert_eq!("[[2,1],[1,1]]".parse::<MappingClass>().unwrap(), cat());
        assert_eq!("2,1,1,1".parse::<MappingClass>().unwrap(), cat());
        assert_eq!(cat().to_string(), "[[2,1],[1,1]]");
        assert!("2,1,1".parse::<MappingClass>().is_err());
    }

    #[test]
    fn non_pseudo_anosov_is_rejected() {
        let x = FnTorus::<f64>::cusped(1.0, 0.0).unwrap();
        assert_eq!(
            dilatation_by_iteration(&MappingClass::twist(), Slope::horizontal(), &x, 5),
            Err(Error::PeriodicOrReducible)
        );
        assert!(translation_estimate::<f64>(&MappingClass::rotation(), 1, &SearchConfig::default()).is_err());
    }
}
