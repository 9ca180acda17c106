//! Permutations, fully enumerated permutation groups, and the grid groups
//! acting on `Z_rows x Z_cols`.

mod grid;
mod pairs;
mod perm;
mod permgroup;

pub use grid::{
    build_normalizer, build_parameter_set_group, grid_generator, is_prime, multiplicative_order,
    normalizer, parameter_set_generators, parameter_set_group, pow_mod, primitive_roots,
    smallest_primitive_root, translation_group, GridGeometry, GridMap, ParameterSet,
    PrimitiveRoots,
};
pub use pairs::{orbits_on_pairs, PairOrbitTable};
pub use perm::{Permutation, Point, MAX_DEGREE};
pub use permgroup::{class_index, enumerate_group, PermGroup, DEFAULT_ENUMERATION_CAP};
