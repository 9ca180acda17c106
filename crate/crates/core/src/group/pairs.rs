use std::io::{BufRead, Write};

use super::perm::Point;
use super::permgroup::PermGroup;
use crate::error::{Error, Result};

const UNKNOWN: u32 = u32::MAX;

/// Orbit number of every unordered point pair under a group.
///
/// Orbits are numbered from 0 in the order in which their lexicographically
/// smallest pair appears; the text format numbers them from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbitTable {
    degree: usize,
    index: Vec<u32>,
    sizes: Vec<usize>,
}

#[inline]
fn triangular_index(degree: usize, r: usize, s: usize) -> usize {
    debug_assert!(r < s && s < degree);
    r * (2 * degree - r - 1) / 2 + (s - r - 1)
}

/// Scans pairs lexicographically; each pair whose orbit is still unknown gets
/// its whole orbit labelled by applying every group element.
pub fn orbits_on_pairs(group: &PermGroup) -> PairOrbitTable {
    let n = group.degree();
    let mut index = vec![UNKNOWN; n * n.saturating_sub(1) / 2];
    let mut sizes = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            if index[triangular_index(n, r, s)] != UNKNOWN {
                continue;
            }
            let label = sizes.len() as u32;
            let mut size = 0;
            for g in group.elements() {
                let (x, y) = (g.apply(r as Point) as usize, g.apply(s as Point) as usize);
                let slot = &mut index[triangular_index(n, x.min(y), x.max(y))];
                if *slot == UNKNOWN {
                    *slot = label;
                    size += 1;
                }
            }
            sizes.push(size);
        }
    }
    PairOrbitTable { degree: n, index, sizes }
}

impl PairOrbitTable {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_orbits(&self) -> usize {
        self.sizes.len()
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// 0-based orbit of the pair `{a, b}`, `a != b`.
    #[inline]
    pub fn orbit_of(&self, a: Point, b: Point) -> usize {
        let (r, s) = if a < b { (a, b) } else { (b, a) };
        debug_assert!(r != s);
        self.index[triangular_index(self.degree, r as usize, s as usize)] as usize
    }

    /// Dense `degree x degree` lookup (diagonal unused), for hot loops.
    pub fn dense(&self) -> Vec<u32> {
        let n = self.degree;
        let mut out = vec![UNKNOWN; n * n];
        for r in 0..n {
            for s in r + 1..n {
                let o = self.index[triangular_index(n, r, s)];
                out[r * n + s] = o;
                out[s * n + r] = o;
            }
        }
        out
    }

    /// Writes the header `# degree=<n> orbits=<m>` followed by one line per
    /// `r = 1..n-1` listing the 1-based orbits of `{r, r+1}, .., {r, n}`.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# degree={} orbits={}", self.degree, self.num_orbits())?;
        let mut line = String::new();
        for r in 0..self.degree.saturating_sub(1) {
            line.clear();
            for s in r + 1..self.degree {
                if s > r + 1 {
                    line.push(' ');
                }
                let o = self.index[triangular_index(self.degree, r, s)] + 1;
                line.push_str(&o.to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<PairOrbitTable> {
        let mut lines = input.lines().enumerate();
        let (degree, declared) = loop {
            let (no, line) = lines.next().ok_or(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })?;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            break parse_header(no + 1, &line)?;
        };
        let mut index = Vec::with_capacity(degree * degree.saturating_sub(1) / 2);
        let mut rows_read = 0;
        for (no, line) in lines {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            rows_read += 1;
            let expected = degree.checked_sub(rows_read).unwrap_or(0);
            let before = index.len();
            for tok in line.split_whitespace() {
                let o: u32 = tok.parse().map_err(|_| Error::Parse {
                    line: no + 1,
                    message: format!("bad orbit number {tok:?}"),
                })?;
                if o == 0 || o as usize > declared {
                    return Err(Error::Parse {
                        line: no + 1,
                        message: format!("orbit {o} outside 1..={declared}"),
                    });
                }
                index.push(o - 1);
            }
            if index.len() - before != expected {
                return Err(Error::Parse {
                    line: no + 1,
                    message: format!("expected {expected} entries, found {}", index.len() - before),
                });
            }
        }
        if rows_read != degree.saturating_sub(1) {
            return Err(Error::Parse {
                line: rows_read + 1,
                message: format!("expected {} data lines, found {rows_read}", degree - 1),
            });
        }
        let mut sizes = vec![0usize; declared];
        for &o in &index {
            sizes[o as usize] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::Parse {
                line: 1,
                message: "header declares orbits that never occur".into(),
            });
        }
        Ok(PairOrbitTable { degree, index, sizes })
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let bad = |message: String| Error::Parse { line: line_no, message };
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| bad("header must start with '#'".into()))?;
    let mut degree = None;
    let mut orbits = None;
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("degree", v)) => degree = v.parse().ok(),
            Some(("orbits", v)) => orbits = v.parse().ok(),
            _ => return Err(bad(format!("unexpected header field {field:?}"))),
        }
    }
    match (degree, orbits) {
        (Some(d), Some(o)) if d >= 2 => Ok((d, o)),
        _ => Err(bad("header needs degree=<n> and orbits=<m>".into())),
    }
}
