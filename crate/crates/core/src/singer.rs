//! Desarguesian projective planes PG(2,p), p prime, with the Singer cycle.
//!
//! `GF(p^3) = Z_p[X]/(f)` for a primitive cubic `f` is a 3-dimensional vector
//! space over `Z_p`. Points are its 1-dimensional subspaces, lines the
//! 2-dimensional ones, and multiplication by `X` permutes the points in a
//! single cycle of length `p^2 + p + 1`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{enumerate_group, is_prime, PermGroup, Permutation, Point, DEFAULT_ENUMERATION_CAP};

/// Largest `p` accepted by [`build_plane`].
pub const MAX_PLANE_ORDER: u64 = 31;

/// A polynomial over `Z_p`, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimeFieldPoly {
    coefficients: Vec<u64>,
    p: u64,
}

impl PrimeFieldPoly {
    pub fn new(coefficients: Vec<u64>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut coefficients: Vec<u64> = coefficients.into_iter().map(|c| c % p).collect();
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        Ok(PrimeFieldPoly { coefficients, p })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| (acc * x + c) % self.p)
    }

    /// For a cubic, irreducible over `Z_p` iff it has no root.
    pub fn has_root(&self) -> bool {
        (0..self.p).any(|x| self.eval(x) == 0)
    }

    fn cubic_tail(&self) -> [u64; 3] {
        [self.coefficients[0], self.coefficients[1], self.coefficients[2]]
    }
}

impl fmt::Display for PrimeFieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}X"),
                _ => format!("{coef}X^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

impl fmt::Debug for PrimeFieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeFieldPoly({self})")
    }
}

/// Arithmetic in `Z_p[X]/(f)` for a monic cubic `f`; elements are
/// coefficient triples, constant term first.
#[derive(Clone, Copy, Debug)]
struct CubicRing {
    p: u64,
    /// `f = X^3 + tail[2] X^2 + tail[1] X + tail[0]`
    tail: [u64; 3],
}

type Element = [u64; 3];

impl CubicRing {
    fn times_x(&self, a: Element) -> Element {
        let p = self.p;
        let top = a[2];
        // X * a = a0 X + a1 X^2 + a2 X^3, and X^3 = -(tail)
        [
            (p - top * self.tail[0] % p) % p,
            (a[0] + p - top * self.tail[1] % p) % p,
            (a[1] + p - top * self.tail[2] % p) % p,
        ]
    }

    fn mul(&self, a: Element, b: Element) -> Element {
        // Horner on b's coefficients from the top
        let mut acc = [0u64; 3];
        for i in (0..3).rev() {
            acc = self.times_x(acc);
            for j in 0..3 {
                acc[j] = (acc[j] + a[j] * b[i]) % self.p;
            }
        }
        acc
    }

    fn pow(&self, base: Element, mut e: u64) -> Element {
        let mut acc = [1, 0, 0];
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `X` modulo the monic cubic `f`, if `X` is a unit.
pub fn order_of_x(f: &PrimeFieldPoly) -> Option<u64> {
    if f.degree() != 3 || f.coefficients[3] != 1 || f.coefficients[0] == 0 {
        return None;
    }
    let ring = CubicRing {
        p: f.p,
        tail: f.cubic_tail(),
    };
    // X is a unit, so its order divides |units| <= p^3 - 1; step it directly
    let x = [0, 1, 0];
    let mut cur = x;
    for n in 1..=f.p.pow(3) {
        if cur == [1, 0, 0] {
            return Some(n);
        }
        cur = ring.mul(cur, x);
    }
    None
}

/// Whether `X` generates the multiplicative group of `Z_p[X]/(f)`.
pub fn is_primitive(f: &PrimeFieldPoly) -> bool {
    if f.degree() != 3 || f.coefficients[3] != 1 || f.coefficients[0] == 0 {
        return false;
    }
    let ring = CubicRing {
        p: f.p,
        tail: f.cubic_tail(),
    };
    let n = f.p.pow(3) - 1;
    let x = [0, 1, 0];
    ring.pow(x, n) == [1, 0, 0] && prime_factors(n).into_iter().all(|q| ring.pow(x, n / q) != [1, 0, 0])
}

/// The smallest monic primitive cubic over `Z_p`, scanning `X^3 + c2 X^2 + c1 X + c0`
/// in increasing order of `c2 p^2 + c1 p + c0`.
pub fn find_primitive_cubic(p: u64) -> Result<PrimeFieldPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    for code in 0..p.pow(3) {
        let tail = [code % p, code / p % p, code / (p * p)];
        let f = PrimeFieldPoly::new(vec![tail[0], tail[1], tail[2], 1], p)?;
        if is_primitive(&f) {
            debug_assert!(!f.has_root());
            return Ok(f);
        }
    }
    unreachable!("a primitive cubic exists over every prime field")
}

#[derive(Clone, Debug)]
pub struct PlaneModel {
    pub p: u64,
    pub polynomial: PrimeFieldPoly,
    /// Canonical representatives: first nonzero coordinate is 1, listed in
    /// lexicographic order. Point ids index this list.
    pub points: Vec<[u64; 3]>,
    /// Each line as ascending point ids; line `i` is the kernel of the
    /// functional whose coefficients are `points[i]`.
    pub lines: Vec<Vec<Point>>,
    /// Multiplication by `X`, acting on point ids.
    pub singer: Permutation,
}

fn canonical(v: [u64; 3], p: u64) -> Option<[u64; 3]> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = crate::group::pow_mod(lead, p - 2, p);
    Some(v.map(|c| c * inv % p))
}

pub fn build_plane(p: u64) -> Result<PlaneModel> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_PLANE_ORDER {
        return Err(Error::ScaleGuard {
            p,
            max: MAX_PLANE_ORDER,
        });
    }
    let polynomial = find_primitive_cubic(p)?;
    let mut points = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let v = [a, b, c];
                if canonical(v, p) == Some(v) {
                    points.push(v);
                }
            }
        }
    }
    let id: HashMap<[u64; 3], usize> = points.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let lines = points
        .iter()
        .map(|n| {
            points
                .iter()
                .enumerate()
                .filter(|(_, x)| (n[0] * x[0] + n[1] * x[1] + n[2] * x[2]) % p == 0)
                .map(|(i, _)| i as Point)
                .collect()
        })
        .collect();
    let ring = CubicRing {
        p,
        tail: polynomial.cubic_tail(),
    };
    let singer = Permutation::from_fn(points.len(), |i| {
        let image = canonical(ring.times_x(points[i]), p).expect("X is invertible");
        id[&image]
    })?;
    Ok(PlaneModel {
        p,
        polynomial,
        points,
        lines,
        singer,
    })
}

impl PlaneModel {
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn singer_group(&self) -> Result<PermGroup> {
        enumerate_group(std::slice::from_ref(&self.singer), DEFAULT_ENUMERATION_CAP)
    }

    /// Positions along the Singer cycle through point 0: `index[x] = i` when
    /// `x` is the image of point 0 under the `i`-th power.
    pub fn singer_index(&self) -> Vec<usize> {
        let mut index = vec![usize::MAX; self.num_points()];
        let mut x: Point = 0;
        for i in 0..self.num_points() {
            index[x as usize] = i;
            x = self.singer.apply(x);
        }
        index
    }
}

/// The `a` classes of points whose Singer index is congruent mod `a`.
pub fn singer_partition(plane: &PlaneModel, a: usize) -> Result<Vec<Vec<Point>>> {
    let n = plane.num_points();
    if a <= 1 || a >= n || n % a != 0 {
        return Err(Error::InvalidArgument(format!(
            "{a} is not a proper divisor of {n}"
        )));
    }
    if plane.singer.cycle_lengths() != [n] {
        return Err(Error::InvalidArgument("Singer action is not regular".into()));
    }
    let index = plane.singer_index();
    let mut classes = vec![Vec::with_capacity(n / a); a];
    for (x, &i) in index.iter().enumerate() {
        classes[i % a].push(x as Point);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_cubic_mod_two() {
        let f = find_primitive_cubic(2).unwrap();
        assert_eq!(f.coefficients(), &[1, 1, 0, 1]);
        assert_eq!(order_of_x(&f), Some(7));
        let g = PrimeFieldPoly::new(vec![1, 0, 1, 1], 2).unwrap();
        assert_eq!(order_of_x(&g), Some(7));
        let reducible = PrimeFieldPoly::new(vec![1, 1, 1, 1], 2).unwrap();
        assert!(reducible.has_root());
        assert_eq!(reducible.eval(1), 0);
        assert!(!is_primitive(&reducible));
    }

    #[test]
    fn primitive_cubic_mod_seven() {
        // regression constant from an exhaustive scan
        let f = find_primitive_cubic(7).unwrap();
        assert_eq!(f.coefficients(), &[2, 3, 0, 1]);
        assert_eq!(order_of_x(&f), Some(342));
        assert!(!f.has_root());
        // every earlier candidate fails the order check
        for code in 0..(2 + 3 * 7) {
            let c = PrimeFieldPoly::new(vec![code % 7, code / 7 % 7, code / 49, 1], 7).unwrap();
            assert_ne!(order_of_x(&c), Some(342));
        }
    }

    #[test]
    fn fano_plane() {
        let plane = build_plane(2).unwrap();
        assert_eq!(plane.num_points(), 7);
        assert_eq!(plane.lines.len(), 7);
        assert!(plane.lines.iter().all(|l| l.len() == 3));
        assert_eq!(plane.singer.cycle_lengths(), vec![7]);
    }

    #[test]
    fn guards() {
        assert!(matches!(build_plane(4), Err(Error::NotPrime(4))));
        assert!(matches!(build_plane(37), Err(Error::ScaleGuard { .. })));
        let fano = build_plane(2).unwrap();
        assert!(singer_partition(&fano, 7).is_err());
        assert!(singer_partition(&fano, 1).is_err());
        assert!(singer_partition(&fano, 3).is_err());
    }

    #[test]
    fn partitions_of_pg27() {
        let plane = build_plane(7).unwrap();
        let g = plane.singer_group().unwrap();
        for (a, size) in [(3, 19), (19, 3)] {
            let part = singer_partition(&plane, a).unwrap();
            assert_eq!(part.len(), a);
            assert!(part.iter().all(|c| c.len() == size));
            assert!(g.partition_is_invariant(&part).unwrap());
        }
    }
}
