//! Finite-family estimates of the Thurston and arc metrics.
//!
//! `dhat(X, Y, F)` is the largest log length-ratio `log(ℓ_c(Y) / ℓ_c(X))`
//! over the classes `c` of a finite family. It is a lower bound for the
//! metric whenever the family is a subset of the classes the metric ranges
//! over.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyptrig::pants_arc_one_cuff;
use crate::mcg::MappingClass;
use crate::pantsnet::GluedRep;
use crate::scalar::Real;
use crate::torus::{self, DualArc, FnTorus, Holonomy, Slope, TorusClass};
use crate::word::Word;

/// A class whose length can be measured: a closed curve or, for surfaces
/// with boundary, an orthogeodesic arc.
pub trait Class: Clone + fmt::Display + Send + Sync {
    fn is_arc(&self) -> bool;
}

impl Class for TorusClass {
    fn is_arc(&self) -> bool {
        TorusClass::is_arc(self)
    }
}

impl Class for Word {
    fn is_arc(&self) -> bool {
        false
    }
}

/// A marked hyperbolic structure, seen through the lengths it assigns.
pub trait LengthSpectrum<T: Real>: Sync {
    type Class: Class;

    fn length(&self, c: &Self::Class) -> Result<T>;

    /// Boundary lengths; arcs are only compared between structures that
    /// agree here.
    fn boundary(&self) -> Vec<T>;
}

fn torus_arc_length<T: Real>(boundary: T, curve: T) -> Result<T> {
    if boundary <= T::zero() {
        return Err(Error::CuspArc);
    }
    pants_arc_one_cuff(boundary, curve, curve)
}

impl<T: Real> LengthSpectrum<T> for FnTorus<T> {
    type Class = TorusClass;

    fn length(&self, c: &TorusClass) -> Result<T> {
        self.class_length(c)
    }

    fn boundary(&self) -> Vec<T> {
        vec![self.boundary]
    }
}

/// A one-holed torus `g·X` kept as the holonomy of `X` together with the
/// mapping class `g`, so that `ℓ_c(g·X) = ℓ_{g(c)}(X)` is evaluated on the
/// original, well-conditioned generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkedHolonomy<T> {
    pub holonomy: Holonomy<T>,
    pub boundary: T,
    pub marking: MappingClass,
}

impl<T: Real> MarkedHolonomy<T> {
    pub fn of(x: &FnTorus<T>) -> Result<Self> {
        Ok(Self {
            holonomy: torus::build_rep(x)?.holonomy(),
            boundary: x.boundary,
            marking: MappingClass::identity(),
        })
    }

    /// The structure `f·Y` for this structure `Y`.
    pub fn pushed(&self, f: &MappingClass) -> Result<Self> {
        Ok(Self {
            marking: self.marking.compose(f)?,
            ..*self
        })
    }

    /// The structure `f^n·Y`.
    pub fn pushed_pow(&self, f: &MappingClass, n: i64) -> Result<Self> {
        self.pushed(&f.pow(n)?)
    }

    pub fn slope_length(&self, s: Slope) -> Result<T> {
        self.holonomy.slope_length(self.marking.act_slope(s)?)
    }
}

impl<T: Real> LengthSpectrum<T> for MarkedHolonomy<T> {
    type Class = TorusClass;

    fn length(&self, c: &TorusClass) -> Result<T> {
        match c {
            TorusClass::Curve(s) => self.slope_length(*s),
            TorusClass::Arc(a) => torus_arc_length(self.boundary, self.slope_length(a.slope)?),
        }
    }

    fn boundary(&self) -> Vec<T> {
        vec![self.boundary]
    }
}

impl<T: Real> LengthSpectrum<T> for GluedRep<T> {
    type Class = Word;

    fn length(&self, w: &Word) -> Result<T> {
        self.word_length(w)
    }

    fn boundary(&self) -> Vec<T> {
        Vec::new()
    }
}

/// A finite, duplicate-free list of classes in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family<C> {
    classes: Vec<C>,
    label: String,
}

impl<C: Class + Eq + Hash> Family<C> {
    /// Drops repeated classes, keeping first occurrences.
    pub fn new(classes: Vec<C>, label: impl Into<String>) -> Self {
        let mut seen = HashSet::new();
        let classes = classes.into_iter().filter(|c| seen.insert(c.clone())).collect();
        Self {
            classes,
            label: label.into(),
        }
    }

    pub fn classes(&self) -> &[C] {
        &self.classes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn has_arcs(&self) -> bool {
        self.classes.iter().any(Class::is_arc)
    }

    pub fn contains(&self, c: &C) -> bool {
        self.classes.contains(c)
    }

    /// Members of `self`, then the new members of `other`.
    pub fn union(&self, other: &Self) -> Self {
        let label = format!("{}+{}", self.label, other.label);
        Self::new(self.classes.iter().chain(&other.classes).cloned().collect(), label)
    }
}

pub type TorusFamily = Family<TorusClass>;

impl Family<TorusClass> {
    pub fn curves(&self) -> impl Iterator<Item = Slope> + '_ {
        self.classes.iter().filter_map(|c| match c {
            TorusClass::Curve(s) => Some(*s),
            TorusClass::Arc(_) => None,
        })
    }

    /// Only the closed curves.
    pub fn without_arcs(&self) -> Self {
        Self::new(self.curves().map(TorusClass::Curve).collect(), self.label.clone())
    }

    /// Adds the dual arc of every slope in the family.
    pub fn with_dual_arcs(&self) -> Self {
        let arcs: Vec<TorusClass> = self.curves().map(|slope| TorusClass::Arc(DualArc { slope })).collect();
        let label = format!("{}+arcs", self.label);
        Self::new(self.classes.iter().cloned().chain(arcs).collect(), label)
    }
}

/// Largest log-ratio over a family and a class attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricEstimate<T, C> {
    pub value: T,
    pub witness: C,
    pub family_label: String,
    /// Set when the value is negative, which means the family does not see
    /// the whole surface.
    pub negative: bool,
}

fn check_pair<T: Real, S: LengthSpectrum<T>>(x: &S, y: &S) -> Result<()> {
    let (bx, by) = (x.boundary(), y.boundary());
    if bx.iter().chain(&by).any(|&b| b <= T::zero()) {
        return Err(Error::CuspArc);
    }
    if bx != by {
        return Err(Error::BoundaryMismatch);
    }
    Ok(())
}

/// `log ℓ_c(Y) − log ℓ_c(X)`.
pub fn ratio<T: Real, S: LengthSpectrum<T>>(c: &S::Class, x: &S, y: &S) -> Result<T> {
    if c.is_arc() {
        check_pair(x, y)?;
    }
    let (lx, ly) = (x.length(c)?, y.length(c)?);
    if !(lx > T::zero() && ly > T::zero()) {
        return Err(Error::Degenerate(format!("class {c} has zero length")));
    }
    Ok(ly.ln() - lx.ln())
}

/// Maximizes `score` over a family; ties go to the earliest member.
pub(crate) fn max_over<T, C, F>(family: &Family<C>, score: F) -> Result<MetricEstimate<T, C>>
where
    T: Real,
    C: Class + Eq + Hash,
    F: Fn(&C) -> Result<T> + Sync,
{
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let values = family.classes.par_iter().map(&score).collect::<Result<Vec<T>>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    Ok(MetricEstimate {
        value: values[best],
        witness: family.classes[best].clone(),
        family_label: family.label.clone(),
        negative: values[best] < T::zero(),
    })
}

/// `max_{c ∈ F} log(ℓ_c(Y) / ℓ_c(X))`.
pub fn dhat<T, S>(x: &S, y: &S, family: &Family<S::Class>) -> Result<MetricEstimate<T, S::Class>>
where
    T: Real,
    S: LengthSpectrum<T>,
    S::Class: Eq + Hash,
{
    if family.has_arcs() {
        check_pair(x, y)?;
    }
    max_over(family, |c| ratio(c, x, y))
}

/// Primitive slopes with `max(|p|, q) ≤ n`, level by level, so that each
/// family extends the previous one.
pub fn farey_family(n: u32) -> Result<TorusFamily> {
    if n == 0 {
        return Err(Error::Invalid("Farey level must be at least 1".into()));
    }
    let n = i64::from(n);
    let mut slopes = vec![Slope::horizontal(), Slope::vertical()];
    for level in 1..=n {
        for q in 1..=level {
            let ps: Vec<i64> = if q < level {
                vec![level]
            } else {
                (1..level.max(2)).collect()
            };
            for p in ps {
                for p in [p, -p] {
                    if let Ok(s) = Slope::new(p, q) {
                        slopes.push(s);
                    }
                }
            }
        }
    }
    Ok(Family::new(
        slopes.into_iter().map(TorusClass::Curve).collect(),
        format!("farey:{n}"),
    ))
}

/// `f^k(base)` for `k = −K, …, K`.
pub fn iterate_family(f: &MappingClass, base: Slope, k: u32) -> Result<TorusFamily> {
    if k == 0 {
        return Err(Error::Invalid("iterate count must be at least 1".into()));
    }
    let k = i64::from(k);
    let back = f.inverse();
    let mut neg = Vec::new();
    let mut s = base;
    for _ in 0..k {
        s = back.act_slope(s)?;
        neg.push(s);
    }
    neg.reverse();
    let mut pos = vec![base];
    let mut s = base;
    for _ in 0..k {
        s = f.act_slope(s)?;
        pos.push(s);
    }
    Ok(Family::new(
        neg.into_iter().chain(pos).map(TorusClass::Curve).collect(),
        format!("iter:{base}:{k}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_sizes_and_order() {
        let f1 = farey_family(1).unwrap();
        let got: Vec<String> = f1.classes().iter().map(|c| c.to_string()).collect();
        assert_eq!(got, ["curve(1,0)", "curve(0,1)", "curve(1,1)", "curve(-1,1)"]);
        assert_eq!(farey_family(2).unwrap().len(), 8);
        for n in 1..8 {
            let a = farey_family(n).unwrap();
            let b = farey_family(n + 1).unwrap();
            assert_eq!(&b.classes()[..a.len()], a.classes());
        }
        assert!(farey_family(0).is_err());
    }

    #[test]
    fn farey_matches_gcd_enumeration() {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        for n in 1..=8i64 {
            let mut count = 1; // (1, 0)
            for q in 1..=n {
                for p in -n..=n {
                    if gcd(p, q) == 1 {
                        count += 1;
                    }
                }
            }
            assert_eq!(farey_family(n as u32).unwrap().len(), count);
        }
    }

    #[test]
    fn single_ratio() {
        let x = FnTorus::<f64>::cusped(1.0, 0.0).unwrap();
        let y = FnTorus::cusped(2.0, 0.0).unwrap();
        let c = TorusClass::Curve(Slope::horizontal());
        assert!((ratio(&c, &x, &y).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((ratio(&c, &y, &x).unwrap() + 2f64.ln()).abs() < 1e-12);
        let fam = Family::new(vec![c], "one");
        let e = dhat(&x, &y, &fam).unwrap();
        assert!((e.value - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(e.witness, c);
        assert!(!e.negative);
        let arc = TorusClass::Arc(DualArc {
            slope: Slope::horizontal(),
        });
        assert_eq!(ratio(&arc, &x, &y), Err(Error::CuspArc));
    }

    #[test]
    fn arcs_need_equal_boundary() {
        let x = FnTorus::<f64>::new(1.0, 0.0, 0.5).unwrap();
        let y = FnTorus::new(1.0, 0.0, 0.6).unwrap();
        let fam = farey_family(2).unwrap().with_dual_arcs();
        assert_eq!(dhat(&x, &y, &fam), Err(Error::BoundaryMismatch));
        assert!(dhat(&x, &y, &fam.without_arcs()).is_ok());
        let empty: TorusFamily = Family::new(vec![], "empty");
        assert_eq!(dhat(&x, &x, &empty), Err(Error::EmptyFamily));
    }

    #[test]
    fn iterates_of_cat_map() {
        let f = MappingClass::new(2, 1, 1, 1).unwrap();
        let fam = iterate_family(&f, Slope::horizontal(), 2).unwrap();
        let got: Vec<String> = fam.classes().iter().map(|c| c.to_string()).collect();
        assert_eq!(
            got,
            ["curve(-2,3)", "curve(-1,1)", "curve(1,0)", "curve(2,1)", "curve(5,3)"]
        );
        let id = MappingClass::identity();
        assert_eq!(iterate_family(&id, Slope::horizontal(), 3).unwrap().len(), 1);
    }

    #[test]
    fn negative_estimates_are_flagged() {
        let x = FnTorus::<f64>::cusped(1.0, 0.0).unwrap();
        let y = FnTorus::cusped(0.5, 0.0).unwrap();
        let fam = Family::new(vec![TorusClass::Curve(Slope::horizontal())], "short");
        let e = dhat(&x, &y, &fam).unwrap();
        assert!(e.value < 0.0 && e.negative);
    }
}
