//! Words in a finitely generated group and their holonomy.
//!
//! Generators are written as capital letters `A`, `B`, `C`, … and their
//! inverses as the matching lowercase letter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyptrig::{Mat2, ScaledMat2};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u8,
    pub inv: bool,
}

impl Letter {
    pub const fn new(gen: u8) -> Self {
        Self { gen, inv: false }
    }

    pub const fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    /// Rotates the word left by `k` letters.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Self(v)
    }

    /// Cancels adjacent inverse pairs.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// Free reduction, then cyclic reduction.
    pub fn cyclically_reduced(&self) -> Self {
        let out = self.reduced().0;
        let (mut lo, mut hi) = (0, out.len());
        while hi - lo >= 2 && out[lo] == out[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Self(out[lo..hi].to_vec())
    }

    /// Replaces every letter by its image word, inverting where needed.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut v = Vec::new();
        for l in &self.0 {
            let img = &images[l.gen as usize];
            if l.inv {
                v.extend(img.0.iter().rev().map(|x| x.inverse()));
            } else {
                v.extend_from_slice(&img.0);
            }
        }
        Self(v)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, n_gens: usize) -> Vec<i64> {
        let mut sums = vec![0; n_gens];
        for l in &self.0 {
            sums[l.gen as usize] += if l.inv { -1 } else { 1 };
        }
        sums
    }

    /// Evaluates the word by left-to-right multiplication.
    ///
    /// The determinant is not renormalized along the way: recomputing
    /// `ad - bc` on large entries cancels badly, while the drift of an exact
    /// product stays at a few ulps per letter.
    pub fn eval<T: Real>(&self, images: &[ScaledMat2<T>]) -> Result<ScaledMat2<T>> {
        let inverses: Vec<ScaledMat2<T>> = images.iter().map(|m| m.inverse()).collect();
        let mut acc = ScaledMat2::identity();
        for l in &self.0 {
            let g = l.gen as usize;
            let m = if l.inv { inverses.get(g) } else { images.get(g) }.ok_or_else(|| {
                Error::Invalid(format!("generator {} not in a rep with {} generators", l, images.len()))
            })?;
            acc = acc * *m;
        }
        Ok(acc)
    }

    /// Evaluates with plain unit-determinant matrices.
    pub fn eval_plain<T: Real>(&self, images: &[Mat2<T>]) -> Result<ScaledMat2<T>> {
        let scaled: Vec<ScaledMat2<T>> = images.iter().map(|&m| m.into()).collect();
        self.eval(&scaled)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.inv { b'a' } else { b'A' };
        write!(f, "{}", (base + self.gen) as char)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'A'..='Z' => Ok(Letter::new(c as u8 - b'A')),
                'a'..='z' => Ok(Letter::new(c as u8 - b'a').inverse()),
                _ => Err(Error::Invalid(format!("unexpected character {c:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
