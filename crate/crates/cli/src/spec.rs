//! The run description: a plain `key = value` file, `#` starts a comment.
//!
//! ```text
//! name = set2
//! n_rows = 41
//! n_cols = 11
//! group = set2            # set1 | set2 | pg_test(p) | generators
//! k = 10
//! column_vector = 4,5,1,1 # repeatable; derived from k and the grid if absent
//! symmetry = fixed_initial_block, first_extension_in_row_1
//! census_depth = 6
//! ```

use std::path::{Path, PathBuf};

use ltsearch_core::search::SymmetryRules;
use ltsearch_core::group::ParameterSet;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{path}:{line}: {message}")]
pub struct SpecError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// `G_1..G_4` of a 451-point parameter set.
    ParameterSet(ParameterSet),
    /// Translations of the grid, a regular cyclic group when the sides are
    /// coprime; the known-positive control for the plane of order `p`.
    PgTest(u64),
    /// Explicit generators in 1-based cycle notation.
    Generators(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub name: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub group: GroupSpec,
    pub group_index: Option<u64>,
    pub k: usize,
    pub column_vectors: Vec<Vec<u32>>,
    pub row_vector: Option<Vec<u32>>,
    pub symmetry: SymmetryRules,
    /// `(row, col)` pairs, 0-based.
    pub initial_block: Vec<(usize, usize)>,
    pub census_depth: Option<usize>,
    pub census_orbit_condition: bool,
    pub census_stream: bool,
    pub out_dir: PathBuf,
    pub primitive_roots: Option<(u64, u64)>,
}

impl RunSpec {
    pub fn load(path: &Path) -> anyhow::Result<RunSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        Ok(RunSpec::parse(&text, &path.display().to_string())?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<RunSpec, SpecError> {
        let err = |line: usize, message: String| SpecError {
            path: origin.to_string(),
            line,
            message,
        };
        let mut name = None;
        let mut n_rows = None;
        let mut n_cols = None;
        let mut group = None;
        let mut generators = Vec::new();
        let mut group_index = None;
        let mut k = None;
        let mut column_vectors = Vec::new();
        let mut row_vector = None;
        let mut symmetry = None;
        let mut initial_block = None;
        let mut census_depth = None;
        let mut census_orbit_condition = false;
        let mut census_stream = false;
        let mut out_dir = None;
        let mut primitive_roots = None;

        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| -> Result<u64, SpecError> {
                v.parse().map_err(|_| err(line_no, format!("{key}: {v:?} is not a non-negative integer")))
            };
            let list = |v: &str| -> Result<Vec<u32>, SpecError> {
                v.split(',')
                    .map(|t| t.trim().parse().map_err(|_| err(line_no, format!("{key}: bad entry {t:?}"))))
                    .collect()
            };
            let flag = |v: &str| -> Result<bool, SpecError> {
                match v {
                    "true" | "yes" | "on" => Ok(true),
                    "false" | "no" | "off" => Ok(false),
                    _ => Err(err(line_no, format!("{key}: expected true or false, got {v:?}"))),
                }
            };
            match key {
                "name" => name = Some(value.to_string()),
                "n_rows" => n_rows = Some(number(value)? as usize),
                "n_cols" => n_cols = Some(number(value)? as usize),
                "group" => group = Some(parse_group(value).map_err(|m| err(line_no, m))?),
                "generator" => generators.push(value.to_string()),
                "group_index" => {
                    let i = number(value)?;
                    if !(1..=4).contains(&i) {
                        return Err(err(line_no, format!("group_index {i} not in 1..=4")));
                    }
                    group_index = Some(i);
                }
                "k" => k = Some(number(value)? as usize),
                "column_vector" => column_vectors.push(list(value)?),
                "row_vector" => row_vector = Some(list(value)?),
                "symmetry" => {
                    let tags: Vec<&str> = value.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
                    symmetry = Some(SymmetryRules::from_tags(&tags).map_err(|e| err(line_no, e.to_string()))?);
                }
                "initial_block" => initial_block = Some(parse_points(value).map_err(|m| err(line_no, m))?),
                "census_depth" => census_depth = Some(number(value)? as usize),
                "census_orbit_condition" => census_orbit_condition = flag(value)?,
                "census_stream" => census_stream = flag(value)?,
                "out_dir" => out_dir = Some(PathBuf::from(value)),
                "primitive_roots" => {
                    let r = list(value)?;
                    if r.len() != 2 {
                        return Err(err(line_no, "primitive_roots needs two values: rows, columns".into()));
                    }
                    primitive_roots = Some((r[0] as u64, r[1] as u64));
                }
                other => return Err(err(line_no, format!("unknown key {other:?}"))),
            }
        }

        let end = text.lines().count() + 1;
        let mut group = group.ok_or_else(|| err(end, "missing key: group".into()))?;
        if let GroupSpec::Generators(g) = &mut group {
            if generators.is_empty() {
                return Err(err(end, "group = generators needs at least one generator line".into()));
            }
            *g = generators;
        } else if !generators.is_empty() {
            return Err(err(end, "generator lines are only allowed with group = generators".into()));
        }
        let (default_rows, default_cols, default_k) = match &group {
            GroupSpec::ParameterSet(_) => (Some(41), Some(11), Some(10)),
            GroupSpec::PgTest(p) => {
                let (r, c) = pg_grid(*p).ok_or_else(|| {
                    err(end, format!("p^2+p+1 for p = {p} has no coprime split into rows x columns"))
                })?;
                (Some(r), Some(c), Some(*p as usize + 1))
            }
            GroupSpec::Generators(_) => (None, None, None),
        };
        let n_rows = n_rows.or(default_rows).ok_or_else(|| err(end, "missing key: n_rows".into()))?;
        let n_cols = n_cols.or(default_cols).ok_or_else(|| err(end, "missing key: n_cols".into()))?;
        let k = k.or(default_k).ok_or_else(|| err(end, "missing key: k".into()))?;
        let name = name.unwrap_or_else(|| "run".into());
        Ok(RunSpec {
            out_dir: out_dir.unwrap_or_else(|| PathBuf::from("out").join(&name)),
            name,
            n_rows,
            n_cols,
            group,
            group_index,
            k,
            column_vectors,
            row_vector,
            symmetry: symmetry.unwrap_or_else(SymmetryRules::standard),
            initial_block: initial_block.unwrap_or_else(|| vec![(0, 0), (0, 1)]),
            census_depth,
            census_orbit_condition,
            census_stream,
            primitive_roots,
        })
    }
}

fn parse_group(value: &str) -> Result<GroupSpec, String> {
    match value {
        "set1" => Ok(GroupSpec::ParameterSet(ParameterSet::One)),
        "set2" => Ok(GroupSpec::ParameterSet(ParameterSet::Two)),
        "generators" => Ok(GroupSpec::Generators(Vec::new())),
        v => {
            let p = v
                .strip_prefix("pg_test(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("unknown group {v:?}; expected set1, set2, pg_test(p) or generators"))?;
            p.trim()
                .parse()
                .map(GroupSpec::PgTest)
                .map_err(|_| format!("pg_test needs a prime, got {p:?}"))
        }
    }
}

/// `(r,c) (r,c) ...`
fn parse_points(value: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    let mut rest = value.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("expected (row,col) pairs, got {rest:?}"))?;
        let (pair, tail) = inner;
        let (r, c) = pair.split_once(',').ok_or_else(|| format!("expected (row,col), got ({pair})"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad coordinate {s:?}"));
        out.push((parse(r)?, parse(c)?));
        rest = tail.trim_start();
    }
    Ok(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Splits `p^2+p+1` as rows x columns with the fewest columns > 1 such that
/// the translation group is cyclic.
pub fn pg_grid(p: u64) -> Option<(usize, usize)> {
    let v = (p * p + p + 1) as usize;
    (2..v).find(|&c| v % c == 0 && gcd(c, v / c) == 1).map(|c| (v / c, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_spec() {
        let text = "\
# comment
name = set2
group = set2
group_index = 3
column_vector = 4,5,1,1,0,0,0,0,0,0,0
symmetry = fixed_initial_block, first_extension_in_row_1
initial_block = (0,0) (0,1)
census_depth = 6   # trailing comment
census_orbit_condition = true
";
        let s = RunSpec::parse(text, "t").unwrap();
        assert_eq!((s.n_rows, s.n_cols, s.k), (41, 11, 10));
        assert_eq!(s.group, GroupSpec::ParameterSet(ParameterSet::Two));
        assert_eq!(s.group_index, Some(3));
        assert_eq!(s.column_vectors.len(), 1);
        assert_eq!(s.initial_block, vec![(0, 0), (0, 1)]);
        assert_eq!(s.census_depth, Some(6));
        assert!(s.census_orbit_condition && !s.census_stream);
        assert_eq!(s.out_dir, PathBuf::from("out/set2"));
    }

    #[test]
    fn pg_defaults() {
        let s = RunSpec::parse("group = pg_test(7)\n", "t").unwrap();
        assert_eq!((s.n_rows, s.n_cols, s.k), (19, 3, 8));
        assert_eq!(pg_grid(2), None);
        assert_eq!(pg_grid(4), Some((7, 3)));
    }

    #[test]
    fn generators() {
        let s = RunSpec::parse("group = generators\nn_rows = 3\nn_cols = 1\nk = 2\ngenerator = (1,2,3)\n", "t").unwrap();
        assert_eq!(s.group, GroupSpec::Generators(vec!["(1,2,3)".into()]));
        assert!(RunSpec::parse("group = generators\nn_rows = 3\nn_cols = 1\nk = 2\n", "t").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = RunSpec::parse("group = set2\n\nk = ten\n", "f.spec").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.to_string().starts_with("f.spec:3: "));
        assert_eq!(RunSpec::parse("group = set3\n", "f").unwrap_err().line, 1);
        assert_eq!(RunSpec::parse("bogus = 1\n", "f").unwrap_err().line, 1);
        assert_eq!(RunSpec::parse("group = set1\nsymmetry = sideways\n", "f").unwrap_err().line, 2);
        assert_eq!(RunSpec::parse("initial_block = (0,0\ngroup = set1\n", "f").unwrap_err().line, 1);
        assert!(RunSpec::parse("k = 3\n", "f").is_err());
    }
}
