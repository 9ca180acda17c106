//! The row/column grid on `Z_rows x Z_cols` and the affine groups acting on it.
//!
//! Point `(e, f)` (row `e`, column `f`) has id `f * n_rows + e`, which orders
//! points column first, then row. Text formats print `id + 1`.

use super::perm::{Permutation, Point, MAX_DEGREE};
use super::permgroup::{enumerate_group, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridGeometry {
    pub n_rows: usize,
    pub n_cols: usize,
}

impl GridGeometry {
    pub fn new(n_rows: usize, n_cols: usize) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidArgument("grid dimensions must be positive".into()));
        }
        if n_rows * n_cols > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "grid {n_rows}x{n_cols} has more than {MAX_DEGREE} points"
            )));
        }
        Ok(GridGeometry { n_rows, n_cols })
    }

    /// The 41 x 11 grid of both 451-point parameter sets.
    pub fn grid_451() -> Self {
        GridGeometry { n_rows: 41, n_cols: 11 }
    }

    pub fn degree(&self) -> usize {
        self.n_rows * self.n_cols
    }

    #[inline]
    pub fn point(&self, row: usize, col: usize) -> Point {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        (col * self.n_rows + row) as Point
    }

    #[inline]
    pub fn row(&self, p: Point) -> usize {
        p as usize % self.n_rows
    }

    #[inline]
    pub fn col(&self, p: Point) -> usize {
        p as usize / self.n_rows
    }

    /// The `n_cols` columns, each a class of `n_rows` points.
    pub fn columns(&self) -> Vec<Vec<Point>> {
        (0..self.n_cols)
            .map(|f| (0..self.n_rows).map(|e| self.point(e, f)).collect())
            .collect()
    }

    /// The `n_rows` rows, each a class of `n_cols` points.
    pub fn rows(&self) -> Vec<Vec<Point>> {
        (0..self.n_rows)
            .map(|e| (0..self.n_cols).map(|f| self.point(e, f)).collect())
            .collect()
    }

    fn map(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> Result<Permutation> {
        Permutation::from_fn(self.degree(), |p| {
            let (e, c) = f(p % self.n_rows, p / self.n_rows);
            c * self.n_rows + e
        })
    }
}

/// Affine maps on the grid coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMap {
    /// `(e, f) -> (e + 1, f)`
    RowAdd,
    /// `(e, f) -> (e, f + 1)`
    ColAdd,
    /// `(e, f) -> (a e, f)`
    RowMul(u64),
    /// `(e, f) -> (e, b f)`
    ColMul(u64),
    /// `(e, f) -> (a e, b f)`
    JointMul(u64, u64),
}

pub fn grid_generator(geom: &GridGeometry, which: GridMap) -> Result<Permutation> {
    let (rows, cols) = (geom.n_rows, geom.n_cols);
    match which {
        GridMap::RowAdd => geom.map(|e, f| ((e + 1) % rows, f)),
        GridMap::ColAdd => geom.map(|e, f| (e, (f + 1) % cols)),
        GridMap::RowMul(a) => {
            let a = check_multiplier(a, rows)?;
            geom.map(|e, f| (e * a % rows, f))
        }
        GridMap::ColMul(b) => {
            let b = check_multiplier(b, cols)?;
            geom.map(|e, f| (e, f * b % cols))
        }
        GridMap::JointMul(a, b) => {
            let a = check_multiplier(a, rows)?;
            let b = check_multiplier(b, cols)?;
            geom.map(|e, f| (e * a % rows, f * b % cols))
        }
    }
}

fn check_multiplier(m: u64, modulus: usize) -> Result<usize> {
    if !is_prime(modulus as u64) {
        return Err(Error::NotPrime(modulus as u64));
    }
    let r = m % modulus as u64;
    if r == 0 {
        return Err(Error::BadMultiplier {
            multiplier: m,
            modulus: modulus as u64,
        });
    }
    Ok(r as usize)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `p`, by repeated multiplication.
pub fn multiplicative_order(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let mut x = a;
    let mut n = 1;
    while x != 1 {
        x = x * a % p;
        n += 1;
        if n > p {
            return None;
        }
    }
    Some(n)
}

/// All primitive roots modulo the prime `p`, ascending.
pub fn primitive_roots(p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok((1..p)
        .filter(|&a| multiplicative_order(a, p) == Some(p - 1))
        .collect())
}

pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    Ok(primitive_roots(p)?[0])
}

/// The primitive roots `a` (rows) and `b` (columns) used to build the groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimitiveRoots {
    pub row: u64,
    pub col: u64,
}

impl PrimitiveRoots {
    /// The smallest primitive root for each side.
    pub fn canonical(geom: &GridGeometry) -> Result<Self> {
        Ok(PrimitiveRoots {
            row: smallest_primitive_root(geom.n_rows as u64)?,
            col: smallest_primitive_root(geom.n_cols as u64)?,
        })
    }

    pub fn checked(geom: &GridGeometry, row: u64, col: u64) -> Result<Self> {
        for (root, modulus) in [(row, geom.n_rows as u64), (col, geom.n_cols as u64)] {
            if !primitive_roots(modulus)?.contains(&(root % modulus)) {
                return Err(Error::InvalidArgument(format!(
                    "{root} is not a primitive root modulo {modulus}"
                )));
            }
        }
        Ok(PrimitiveRoots { row, col })
    }
}

/// The two 451-point parameter sets: the kernel on a column is dihedral
/// (`One`) or cyclic (`Two`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParameterSet {
    One,
    Two,
}

impl ParameterSet {
    pub fn number(self) -> u8 {
        match self {
            ParameterSet::One => 1,
            ParameterSet::Two => 2,
        }
    }
}

/// Generators of `G_i`: row and column translations, the order-5 joint
/// multiplication `(a^((rows-1)/5), b^(i (cols-1)/5))`, and for set 1 the row
/// involution `e -> -e`.
pub fn parameter_set_generators(
    geom: &GridGeometry,
    set: ParameterSet,
    i: u64,
    roots: PrimitiveRoots,
) -> Result<Vec<Permutation>> {
    if !(1..=4).contains(&i) {
        return Err(Error::InvalidArgument(format!("group index {i} not in 1..=4")));
    }
    let (rows, cols) = (geom.n_rows as u64, geom.n_cols as u64);
    if (rows - 1) % 5 != 0 || (cols - 1) % 5 != 0 {
        return Err(Error::InvalidArgument(format!(
            "grid {rows}x{cols} has no order-5 multipliers on both sides"
        )));
    }
    let row_five = pow_mod(roots.row, (rows - 1) / 5, rows);
    let col_five = pow_mod(roots.col, i * (cols - 1) / 5, cols);
    let mut gens = vec![
        grid_generator(geom, GridMap::RowAdd)?,
        grid_generator(geom, GridMap::ColAdd)?,
    ];
    if set == ParameterSet::One {
        let minus_one = pow_mod(roots.row, (rows - 1) / 2, rows);
        gens.push(grid_generator(geom, GridMap::RowMul(minus_one))?);
    }
    gens.push(grid_generator(geom, GridMap::JointMul(row_five, col_five))?);
    Ok(gens)
}

pub fn parameter_set_group(
    geom: &GridGeometry,
    set: ParameterSet,
    i: u64,
    roots: PrimitiveRoots,
) -> Result<PermGroup> {
    enumerate_group(
        &parameter_set_generators(geom, set, i, roots)?,
        DEFAULT_ENUMERATION_CAP,
    )
}

/// `G_i` on the 41 x 11 grid with the canonical primitive roots.
pub fn build_parameter_set_group(set: ParameterSet, i: u64) -> Result<PermGroup> {
    let geom = GridGeometry::grid_451();
    parameter_set_group(&geom, set, i, PrimitiveRoots::canonical(&geom)?)
}

/// `AGL(1, rows) x AGL(1, cols)` acting on the grid.
pub fn normalizer(geom: &GridGeometry, roots: PrimitiveRoots) -> Result<PermGroup> {
    let gens = [
        grid_generator(geom, GridMap::RowAdd)?,
        grid_generator(geom, GridMap::ColAdd)?,
        grid_generator(geom, GridMap::RowMul(roots.row))?,
        grid_generator(geom, GridMap::ColMul(roots.col))?,
    ];
    enumerate_group(&gens, DEFAULT_ENUMERATION_CAP)
}

pub fn build_normalizer() -> Result<PermGroup> {
    let geom = GridGeometry::grid_451();
    normalizer(&geom, PrimitiveRoots::canonical(&geom)?)
}

/// The regular group `Z_rows x Z_cols` of translations.
pub fn translation_group(geom: &GridGeometry) -> Result<PermGroup> {
    enumerate_group(
        &[
            grid_generator(geom, GridMap::RowAdd)?,
            grid_generator(geom, GridMap::ColAdd)?,
        ],
        DEFAULT_ENUMERATION_CAP,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbering_is_column_major() {
        let g = GridGeometry::grid_451();
        assert_eq!(g.point(0, 0), 0);
        assert_eq!(g.point(0, 1), 41);
        assert_eq!(g.point(40, 10), 450);
        for p in 0..451u16 {
            assert_eq!(g.point(g.row(p), g.col(p)), p);
        }
    }

    #[test]
    fn smallest_primitive_roots_by_order_check() {
        let orders: Vec<_> = (1..=6).map(|a| multiplicative_order(a, 41).unwrap()).collect();
        assert_eq!(orders, vec![1, 20, 8, 10, 20, 40]);
        assert_eq!(smallest_primitive_root(41).unwrap(), 6);
        assert_eq!(multiplicative_order(2, 11), Some(10));
        assert_eq!(smallest_primitive_root(11).unwrap(), 2);
        assert_eq!(smallest_primitive_root(19).unwrap(), 2);
        assert_eq!(smallest_primitive_root(3).unwrap(), 2);
    }

    #[test]
    fn generator_orders() {
        let g = GridGeometry::grid_451();
        let alpha = grid_generator(&g, GridMap::RowAdd).unwrap();
        assert_eq!(alpha.order(), 41);
        assert!(alpha.pow(41).is_identity());
        let beta = grid_generator(&g, GridMap::ColAdd).unwrap();
        assert_eq!(beta.order(), 11);
        assert_eq!(grid_generator(&g, GridMap::RowMul(6)).unwrap().order(), 40);
        assert_eq!(grid_generator(&g, GridMap::ColMul(4)).unwrap().order(), 5);
        assert_eq!(grid_generator(&g, GridMap::RowMul(pow_mod(6, 8, 41))).unwrap().order(), 5);
        assert_eq!(grid_generator(&g, GridMap::RowMul(40)).unwrap().order(), 2);
    }

    #[test]
    fn multiplier_errors() {
        let g = GridGeometry::new(4, 3).unwrap();
        assert!(matches!(grid_generator(&g, GridMap::RowMul(3)), Err(Error::NotPrime(4))));
        assert!(matches!(
            grid_generator(&g, GridMap::ColMul(3)),
            Err(Error::BadMultiplier { .. })
        ));
        assert!(grid_generator(&g, GridMap::RowAdd).is_ok());
    }

    #[test]
    fn translations_orbits() {
        let g = GridGeometry::grid_451();
        let rows_only = enumerate_group(&[grid_generator(&g, GridMap::RowAdd).unwrap()], 100).unwrap();
        let orbits = rows_only.orbits_on_points();
        assert_eq!(orbits, g.columns());
        let n = translation_group(&g).unwrap();
        assert_eq!(n.order(), 451);
        assert!(n.is_transitive());
    }

    #[test]
    fn second_root_choice_checked() {
        let g = GridGeometry::grid_451();
        assert!(PrimitiveRoots::checked(&g, 7, 6).is_ok());
        assert!(PrimitiveRoots::checked(&g, 2, 2).is_err());
    }
}
