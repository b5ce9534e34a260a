//! Permutations of a finite domain, with cycle-notation parsing and display.

use crate::{Error, Result};
use std::fmt;

/// A permutation of `{0, .., degree-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Build from an image table; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        if images.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let im = im as usize;
            if im >= n {
                return Err(Error::PointOutOfRange {
                    point: im + 1,
                    degree: n,
                });
            }
            if seen[im] {
                return Err(Error::RepeatedPoint(im + 1));
            }
            seen[im] = true;
        }
        Ok(Perm { images })
    }

    /// Parse cycle notation with 1-based points, e.g. `"(1 2 3 4)(5 6)"`.
    /// `"()"`, `"e"`, and the empty string denote the identity.
    pub fn parse(s: &str, degree: usize) -> Result<Perm> {
        if degree == 0 {
            return Err(Error::EmptyDomain);
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "()" || s == "id" {
            return Ok(Perm { images });
        }
        if !s.starts_with('(') || !s.ends_with(')') {
            return Err(Error::BadCycle(s.to_string()));
        }
        let mut touched = vec![false; degree];
        for cycle in s[1..s.len() - 1].split(")(") {
            let mut pts = Vec::new();
            for tok in cycle.split([' ', ',']) {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::BadCycle(s.to_string()))?;
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange {
                        point: p,
                        degree,
                    });
                }
                if touched[p - 1] {
                    return Err(Error::RepeatedPoint(p));
                }
                touched[p - 1] = true;
                pts.push(p - 1);
            }
            if pts.is_empty() {
                continue;
            }
            for i in 0..pts.len() {
                images[pts[i]] = pts[(i + 1) % pts.len()] as u32;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `self * other` applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Perm { images }
    }

    /// Whether the permutation is even (product of an even number of transpositions).
    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// Disjoint union: `self` on the first block of points, `other` shifted after it.
    pub fn juxtapose(&self, other: &Perm) -> Perm {
        let shift = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + shift));
        Perm { images }
    }
}

impl fmt::Display for Perm {
    /// Cycle notation with 1-based points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            write!(f, "({}", start + 1)?;
            seen[start] = true;
            let mut i = self.images[start] as usize;
            while i != start {
                write!(f, " {}", i + 1)?;
                seen[i] = true;
                i = self.images[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
