use std::fmt;

use crate::error::{Error, Result};

/// A point id. Internally points are numbered from 0; the text formats add 1.
pub type Point = u16;

/// Largest degree representable with [`Point`] ids.
pub const MAX_DEGREE: usize = Point::MAX as usize + 1;

/// A permutation of `{0, .., degree-1}` stored as its image array.
///
/// Products are read left to right: `p.then(&q)` applies `p` first, so
/// `x^(pq) = (x^p)^q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[Point]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} too large");
        Permutation {
            images: (0..degree).map(|x| x as Point).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        if n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        for &y in images {
            if y >= n {
                return Err(Error::InvalidPermutation(format!("image {y} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidPermutation(format!("image {y} repeated")));
            }
        }
        Ok(Permutation {
            images: images.iter().map(|&y| y as Point).collect(),
        })
    }

    /// Builds a permutation from a function on 0-based points.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let images: Vec<usize> = (0..degree).map(f).collect();
        Self::from_images(&images)
    }

    /// Parses cycle notation over 1-based points, e.g. `(1,2,3)(4,5)`.
    /// Whitespace may separate entries instead of commas; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {text:?}")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {text:?}")))?;
            let body = &body_start[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&x| x >= 1 && x <= degree)
                        .map(|x| x - 1)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad point {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, &x) in cycle.iter().enumerate() {
                if std::mem::replace(&mut moved[x], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears twice",
                        x + 1
                    )));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
            rest = body_start[close + 1..].trim_start();
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    /// `self` followed by `other`, failing on a degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// `self` followed by `other`. Degrees must agree.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&y| other.images[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0 as Point; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as Point;
        }
        Permutation { images: inv.into() }
    }

    /// `h^-1 self h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.inverse().then(self).then(h)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Lengths of the disjoint cycles, including fixed points.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    /// Image of a point set, sorted.
    pub fn image_of_set(&self, set: &[Point]) -> Vec<Point> {
        let mut out: Vec<Point> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Cycle notation over 1-based points; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}
