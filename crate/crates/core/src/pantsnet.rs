//! Surfaces glued from pairs of pants, with holonomy assembled from
//! Fenchel–Nielsen coordinates.
//!
//! Each pair of pants `i` contributes two free generators `X_{i,0}`,
//! `X_{i,1}`; its third cuff is `X_{i,2} = (X_{i,0} X_{i,1})⁻¹`. Gluings
//! along a spanning tree of the pants graph are realized by conjugating the
//! blocks into place; every other gluing adds a stable letter. Generators are
//! numbered pants by pants, then stable letters in gluing order, and words use
//! the letters `A`, `B`, `C`, … in that order.
//!
//! # JSON schema
//!
//! ```json
//! {
//!   "pants": [{}, {}],
//!   "gluings": [{"a": {"pants": 0, "cuff": 0}, "b": {"pants": 1, "cuff": 0}, "curve": 0}],
//!   "boundary": [{"slot": {"pants": 0, "cuff": 2}, "index": 0}]
//! }
//! ```
//!
//! Cuff indices are `0..3`, curve and boundary indices are `0..n` without
//! gaps. A point is `{"lengths": [...], "twists": [...], "boundary": [...]}`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyptrig::{ExtReal, Mat2, ScaledMat2};
use crate::scalar::Real;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub pants: usize,
    pub cuff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: Slot,
    pub b: Slot,
    pub curve: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySlot {
    pub slot: Slot,
    pub index: usize,
}

/// A pants record. Only its position in the list matters; the label is for
/// people reading the file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pants {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsDecomp {
    pub pants: Vec<Pants>,
    #[serde(default)]
    pub gluings: Vec<Gluing>,
    #[serde(default)]
    pub boundary: Vec<BoundarySlot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FnPoint<T> {
    pub lengths: Vec<T>,
    pub twists: Vec<T>,
    #[serde(default)]
    pub boundary: Vec<T>,
}

fn contiguous(mut idx: Vec<usize>, what: &str) -> Result<()> {
    idx.sort_unstable();
    for (i, &k) in idx.iter().enumerate() {
        if k != i {
            return Err(Error::Invalid(format!(
                "{what} indices must be 0..{} without repeats",
                idx.len()
            )));
        }
    }
    Ok(())
}

impl PantsDecomp {
    /// One pair of pants with two cuffs glued: the one-holed torus.
    pub fn one_holed_torus() -> Self {
        Self {
            pants: vec![Pants::default()],
            gluings: vec![Gluing {
                a: Slot { pants: 0, cuff: 0 },
                b: Slot { pants: 0, cuff: 1 },
                curve: 0,
            }],
            boundary: vec![BoundarySlot {
                slot: Slot { pants: 0, cuff: 2 },
                index: 0,
            }],
        }
    }

    /// Two pairs of pants glued cuff to cuff: the closed genus-two surface.
    pub fn genus_two() -> Self {
        Self {
            pants: vec![Pants::default(), Pants::default()],
            gluings: (0..3)
                .map(|k| Gluing {
                    a: Slot { pants: 0, cuff: k },
                    b: Slot { pants: 1, cuff: k },
                    curve: k,
                })
                .collect(),
            boundary: Vec::new(),
        }
    }

    /// A single pair of pants with three boundary slots.
    pub fn single_pants() -> Self {
        Self {
            pants: vec![Pants::default()],
            gluings: Vec::new(),
            boundary: (0..3)
                .map(|k| BoundarySlot {
                    slot: Slot { pants: 0, cuff: k },
                    index: k,
                })
                .collect(),
        }
    }

    pub fn n_curves(&self) -> usize {
        self.gluings.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.pants.len();
        if n == 0 {
            return Err(Error::Invalid("no pants".into()));
        }
        let mut used = vec![[0usize; 3]; n];
        let mut mark = |s: Slot| -> Result<()> {
            if s.pants >= n || s.cuff >= 3 {
                return Err(Error::Invalid(format!("slot ({}, {}) does not exist", s.pants, s.cuff)));
            }
            used[s.pants][s.cuff] += 1;
            Ok(())
        };
        for g in &self.gluings {
            mark(g.a)?;
            mark(g.b)?;
        }
        for b in &self.boundary {
            mark(b.slot)?;
        }
        for (p, u) in used.iter().enumerate() {
            for (k, &c) in u.iter().enumerate() {
                if c != 1 {
                    return Err(Error::Invalid(format!("slot ({p}, {k}) is used {c} times")));
                }
            }
        }
        contiguous(self.gluings.iter().map(|g| g.curve).collect(), "curve")?;
        contiguous(self.boundary.iter().map(|b| b.index).collect(), "boundary")?;
        let (_, tree) = self.spanning_tree();
        if tree.iter().filter(|&&t| t).count() + 1 != n {
            return Err(Error::Invalid("gluing graph is not connected".into()));
        }
        Ok(())
    }

    pub fn validate_point<T: Real>(&self, x: &FnPoint<T>) -> Result<()> {
        if x.lengths.len() != self.n_curves() || x.twists.len() != self.n_curves() {
            return Err(Error::Invalid(format!(
                "expected {} lengths and twists, got {} and {}",
                self.n_curves(),
                x.lengths.len(),
                x.twists.len()
            )));
        }
        if x.boundary.len() != self.n_boundary() {
            return Err(Error::Invalid(format!(
                "expected {} boundary lengths, got {}",
                self.n_boundary(),
                x.boundary.len()
            )));
        }
        for &l in &x.lengths {
            if !(l > T::zero() && l.is_finite()) {
                return Err(Error::Domain {
                    what: "curve length",
                    value: l.as_f64(),
                });
            }
        }
        for &t in &x.twists {
            if !t.is_finite() {
                return Err(Error::Domain {
                    what: "twist",
                    value: t.as_f64(),
                });
            }
        }
        for &l in &x.boundary {
            if !(l >= T::zero() && l.is_finite()) {
                return Err(Error::Domain {
                    what: "boundary length",
                    value: l.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Breadth-first order from pants 0 and a tree flag per gluing.
    fn spanning_tree(&self) -> (Vec<usize>, Vec<bool>) {
        let n = self.pants.len();
        let mut seen = vec![false; n];
        let mut tree = vec![false; self.gluings.len()];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for (i, g) in self.gluings.iter().enumerate() {
                let other = if g.a.pants == p {
                    g.b.pants
                } else if g.b.pants == p {
                    g.a.pants
                } else {
                    continue;
                };
                if other < n && !seen[other] {
                    seen[other] = true;
                    tree[i] = true;
                    queue.push_back(other);
                }
            }
        }
        (order, tree)
    }
}

/// Holonomy of a glued surface, with the word of every pants curve and
/// boundary curve.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedRep<T> {
    gens: Vec<Mat2<T>>,
    curve_words: Vec<Word>,
    curve_lengths: Vec<T>,
    boundary_words: Vec<Word>,
    boundary_lengths: Vec<T>,
}

impl<T: Real> GluedRep<T> {
    pub fn generators(&self) -> &[Mat2<T>] {
        &self.gens
    }

    pub fn curve_words(&self) -> &[Word] {
        &self.curve_words
    }

    pub fn boundary_words(&self) -> &[Word] {
        &self.boundary_words
    }

    pub fn word_image(&self, w: &Word) -> Result<ScaledMat2<T>> {
        w.eval_plain(&self.gens)
    }

    pub fn word_length(&self, w: &Word) -> Result<T> {
        if w.is_empty() {
            return Err(Error::Invalid("empty word".into()));
        }
        self.word_image(w)?.translation_length()
    }

    pub fn conjugated(&self, n: &Mat2<T>) -> Self {
        Self {
            gens: self.gens.iter().map(|g| g.conjugate_by(n)).collect(),
            ..self.clone()
        }
    }

    /// `|tr ρ(w)| − 2cosh(l/2)` for each interior curve, then each boundary
    /// curve.
    pub fn residuals(&self) -> Result<Vec<T>> {
        let two = T::lit(2.0);
        self.curve_words
            .iter()
            .zip(&self.curve_lengths)
            .chain(self.boundary_words.iter().zip(&self.boundary_lengths))
            .map(|(w, &l)| {
                let m = self
                    .word_image(w)?
                    .as_mat2()
                    .ok_or_else(|| Error::Degenerate("curve word overflowed".into()))?;
                Ok(m.trace().abs() - two * (l / two).cosh())
            })
            .collect()
    }

    /// Largest residual, relative to the expected trace when that exceeds 1.
    pub fn max_residual(&self) -> Result<T> {
        let two = T::lit(2.0);
        let lens = self.curve_lengths.iter().chain(&self.boundary_lengths);
        Ok(self
            .residuals()?
            .into_iter()
            .zip(lens)
            .map(|(r, &l)| r.abs() / (two * (l / two).cosh()).max(T::one()))
            .fold(T::zero(), T::max))
    }
}

/// Cuff matrices `[X0, X1, X2]` of one pair of pants, `X0 X1 X2 = I`.
fn pants_block<T: Real>(l: [T; 3]) -> Result<[Mat2<T>; 3]> {
    let zero = T::zero();
    match l.iter().position(|&x| x > zero) {
        None => {
            let two = T::lit(2.0);
            let x0 = Mat2::raw(T::one(), two, zero, T::one());
            let x1 = Mat2::raw(T::one(), zero, -two, T::one());
            Ok([x0, x1, (x0 * x1).inverse()])
        }
        Some(0) => hexagon_block(l[0], l[1], l[2]),
        Some(r) => {
            // Rotate the labels so a hyperbolic cuff comes first; cyclic
            // rotation keeps the product relation.
            let y = hexagon_block(l[r], l[(r + 1) % 3], l[(r + 2) % 3])?;
            let mut x = y;
            for (k, m) in y.into_iter().enumerate() {
                x[(k + r) % 3] = m;
            }
            Ok(x)
        }
    }
}

/// `X1 = diag(u, 1/u)` and the `X2` whose axis is symmetric under inversion
/// in the unit circle, with `tr X2 = 2cosh(l2/2)` and
/// `tr X1X2 = −2cosh(l3/2)`. Requires `l1 > 0`.
fn hexagon_block<T: Real>(l1: T, l2: T, l3: T) -> Result<[Mat2<T>; 3]> {
    let two = T::lit(2.0);
    let u = (l1 / two).exp();
    let t2 = two * (l2 / two).cosh();
    let t3 = two * (l3 / two).cosh();
    let p = -(t3 + t2 / u) / (u - u.recip());
    let s = t2 - p;
    let disc = T::one() - p * s;
    if !(disc >= T::zero()) || !disc.is_finite() {
        return Err(Error::Degenerate(format!(
            "no pants with cuff lengths ({l1}, {l2}, {l3})"
        )));
    }
    let q = disc.sqrt();
    let x1 = Mat2::diag(u);
    let x2 = Mat2::raw(p, q, -q, s);
    Ok([x1, x2, (x1 * x2).inverse()])
}

fn check_lengths<T: Real>(l: &[T]) -> Result<()> {
    for &x in l {
        if !(x > T::zero() && x.is_finite()) {
            return Err(Error::Domain {
                what: "cuff length",
                value: x.as_f64(),
            });
        }
    }
    Ok(())
}

/// Standalone pair of pants with cuff lengths `l1`, `l2`, `l3` on the words
/// `A`, `B` and `ba`.
pub fn build_pants_rep<T: Real>(l1: T, l2: T, l3: T) -> Result<GluedRep<T>> {
    check_lengths(&[l1, l2, l3])?;
    let [x1, x2, _] = hexagon_block(l1, l2, l3)?;
    let rep = GluedRep {
        gens: vec![x1, x2],
        curve_words: Vec::new(),
        curve_lengths: Vec::new(),
        boundary_words: cuff_words(0).to_vec(),
        boundary_lengths: vec![l1, l2, l3],
    };
    Ok(rep)
}

fn cuff_words(p: usize) -> [Word; 3] {
    let x0 = Letter::new((2 * p) as u8);
    let x1 = Letter::new((2 * p + 1) as u8);
    [
        Word::new(vec![x0]),
        Word::new(vec![x1]),
        Word::new(vec![x1.inverse(), x0.inverse()]),
    ]
}

/// Normalizing frame of a hyperbolic cuff: `F⁻¹ X F` translates along the
/// imaginary axis towards infinity and the perpendicular from the axis to the
/// reference cuff lands at `i`, on the side `Re z > 0`. The cuff element is
/// inverted when needed so that the pants lies on that side; the returned
/// flag says whether it was.
fn cuff_frame<T: Real>(x: &Mat2<T>, reference: &Mat2<T>, slot: Slot) -> Result<(Mat2<T>, bool)> {
    let err = |reason: &str| Error::Assembly {
        pants: slot.pants,
        cuff: slot.cuff,
        reason: reason.into(),
    };
    let (rep, att) = x.oriented_fixed_points();
    let m = match (rep, att) {
        (ExtReal::Finite(r), ExtReal::Finite(a)) => {
            let det = a - r;
            let sign = if det < T::zero() { -T::one() } else { T::one() };
            let k = det.abs().sqrt().recip();
            Mat2::raw(sign * a * k, r * k, sign * k, k)
        }
        (ExtReal::Finite(r), ExtReal::Infinity) => Mat2::raw(T::one(), r, T::zero(), T::one()),
        (ExtReal::Infinity, ExtReal::Finite(a)) => Mat2::raw(-a, T::one(), -T::one(), T::zero()),
        _ => return Err(err("cuff is not hyperbolic")),
    };
    let minv = m.inverse();
    let (f1, f2) = reference.oriented_fixed_points();
    let (s1, s2) = match (minv.apply(f1), minv.apply(f2)) {
        (ExtReal::Finite(s1), ExtReal::Finite(s2)) => (s1, s2),
        _ => return Err(err("reference cuff meets the cuff axis")),
    };
    let prod = s1 * s2;
    if !(prod > T::zero()) {
        return Err(err("reference cuff crosses the cuff axis"));
    }
    let y = prod.sqrt();
    let root = y.sqrt();
    let f = m * Mat2::raw(root, T::zero(), T::zero(), root.recip());
    if s1 > T::zero() {
        Ok((f, false))
    } else {
        // Reversing the axis swaps the half-planes; the perpendicular foot
        // stays at i.
        Ok((f * Mat2::flip(), true))
    }
}

/// Projective closeness of two unit-determinant matrices.
fn same_element<T: Real>(m: &Mat2<T>, n: &Mat2<T>, tol: T) -> bool {
    let (a, b) = (m.entries(), n.entries());
    let scale = a.iter().chain(&b).fold(T::one(), |s, x| s.max(x.abs()));
    let dist = |sign: T| {
        a.iter()
            .zip(&b)
            .fold(T::zero(), |s, (x, y)| s.max((*x - sign * *y).abs()))
    };
    dist(T::one()).min(dist(-T::one())) <= tol * scale
}

/// Assembles the holonomy of `x` on the surface `d`.
pub fn build_glued_rep<T: Real>(d: &PantsDecomp, x: &FnPoint<T>) -> Result<GluedRep<T>> {
    d.validate()?;
    d.validate_point(x)?;
    let n = d.pants.len();

    // Cuff lengths per slot.
    let mut lens = vec![[T::zero(); 3]; n];
    for g in &d.gluings {
        lens[g.a.pants][g.a.cuff] = x.lengths[g.curve];
        lens[g.b.pants][g.b.cuff] = x.lengths[g.curve];
    }
    for b in &d.boundary {
        lens[b.slot.pants][b.slot.cuff] = x.boundary[b.index];
    }
    let blocks = lens.iter().map(|&l| pants_block(l)).collect::<Result<Vec<_>>>()?;

    let frame = |s: Slot| -> Result<(Mat2<T>, bool)> {
        let r = if s.cuff == 0 { 1 } else { 0 };
        cuff_frame(&blocks[s.pants][s.cuff], &blocks[s.pants][r], s)
    };

    // Place every pants by conjugation along the spanning tree.
    let (order, tree) = d.spanning_tree();
    let mut place: Vec<Option<Mat2<T>>> = vec![None; n];
    place[0] = Some(Mat2::identity());
    let glue = |from: Slot, to: Slot, tau: T| -> Result<Mat2<T>> {
        let (fa, _) = frame(from)?;
        let (fb, _) = frame(to)?;
        Ok(fa * Mat2::translation(tau) * Mat2::flip() * fb.inverse())
    };
    for &p in &order {
        let cp = place[p].expect("spanning tree visits placed pants");
        for (i, g) in d.gluings.iter().enumerate() {
            if !tree[i] {
                continue;
            }
            let (from, to) = if g.a.pants == p {
                (g.a, g.b)
            } else if g.b.pants == p {
                (g.b, g.a)
            } else {
                continue;
            };
            if place[to.pants].is_none() {
                place[to.pants] = Some(cp * glue(from, to, x.twists[g.curve])?);
            }
        }
    }
    let place: Vec<Mat2<T>> = place.into_iter().map(|c| c.expect("graph is connected")).collect();

    let mut gens = Vec::with_capacity(2 * n + d.gluings.len());
    for (p, c) in place.iter().enumerate() {
        gens.push(blocks[p][0].conjugate_by(c));
        gens.push(blocks[p][1].conjugate_by(c));
    }
    // Stable letter per non-tree gluing, mapping the frame of `b` onto that
    // of `a`.
    let mut stable = vec![None; d.gluings.len()];
    for (i, g) in d.gluings.iter().enumerate() {
        if !tree[i] {
            let t = place[g.a.pants] * glue(g.a, g.b, x.twists[g.curve])? * place[g.b.pants].inverse();
            stable[i] = Some((gens.len(), t));
            gens.push(t);
        }
    }
    if gens.len() > 26 {
        return Err(Error::Invalid(format!(
            "{} generators exceed the 26 word letters",
            gens.len()
        )));
    }

    // The glued cuffs must coincide with opposite orientations.
    let global = |s: Slot| -> Result<Mat2<T>> {
        let (_, flipped) = frame(s)?;
        let m = blocks[s.pants][s.cuff].conjugate_by(&place[s.pants]);
        Ok(if flipped { m.inverse() } else { m })
    };
    let tol = T::lit(1e-9).max(T::det_tol());
    for (i, g) in d.gluings.iter().enumerate() {
        let xa = global(g.a)?;
        let mut xb = global(g.b)?;
        if let Some((_, t)) = stable[i] {
            xb = xb.conjugate_by(&t);
        }
        if !same_element(&xb, &xa.inverse(), tol) {
            return Err(Error::Assembly {
                pants: g.b.pants,
                cuff: g.b.cuff,
                reason: "glued cuff does not match its partner".into(),
            });
        }
    }

    let words: Vec<[Word; 3]> = (0..n).map(cuff_words).collect();
    let mut curve_words = vec![Word::default(); d.n_curves()];
    for g in &d.gluings {
        curve_words[g.curve] = words[g.a.pants][g.a.cuff].clone();
    }
    let mut boundary_words = vec![Word::default(); d.n_boundary()];
    for b in &d.boundary {
        boundary_words[b.index] = words[b.slot.pants][b.slot.cuff].clone();
    }
    let rep = GluedRep {
        gens,
        curve_words,
        curve_lengths: x.lengths.clone(),
        boundary_words,
        boundary_lengths: x.boundary.clone(),
    };

    let two = T::lit(2.0);
    let slot_of_curve = |i: usize| d.gluings.iter().find(|g| g.curve == i).map(|g| g.a);
    let slot_of_boundary = |j: usize| d.boundary.iter().find(|b| b.index == j).map(|b| b.slot);
    let all_lengths = x.lengths.iter().chain(&x.boundary);
    for (i, (r, &l)) in rep.residuals()?.into_iter().zip(all_lengths).enumerate() {
        if r.abs() > tol * (two * (l / two).cosh()).max(T::one()) {
            let s = if i < d.n_curves() {
                slot_of_curve(i)
            } else {
                slot_of_boundary(i - d.n_curves())
            }
            .expect("validated index");
            return Err(Error::Assembly {
                pants: s.pants,
                cuff: s.cuff,
                reason: format!("trace residual {r}"),
            });
        }
    }
    Ok(rep)
}

/// Stable-letter index of each non-tree gluing, by curve.
pub fn stable_letters(d: &PantsDecomp) -> Vec<Option<Letter>> {
    let (_, tree) = d.spanning_tree();
    let mut next = 2 * d.pants.len();
    let mut out = vec![None; d.n_curves()];
    for (i, g) in d.gluings.iter().enumerate() {
        if !tree[i] {
            out[g.curve] = Some(Letter::new(next as u8));
            next += 1;
        }
    }
    out
}

/// Geodesic length of the class of `w`.
pub fn word_length<T: Real>(r: &GluedRep<T>, w: &Word) -> Result<T> {
    r.word_length(w)
}
