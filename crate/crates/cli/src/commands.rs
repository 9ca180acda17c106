use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ltsearch_core::dd::{dd_analyze, enumerate_masks, intercept_vectors, InterceptVector};
use ltsearch_core::design::{develop, read_blocks, verify, write_blocks, VerificationReport};
use ltsearch_core::group::{
    enumerate_group, normalizer, orbits_on_pairs, parameter_set_group, translation_group, GridGeometry,
    PairOrbitTable, ParameterSet, PermGroup, Permutation, Point, PrimitiveRoots, DEFAULT_ENUMERATION_CAP,
};
use ltsearch_core::orbit_condition::{make_targets, Feasibility, OrbitTargets};
use ltsearch_core::search::{
    census, census_count, search, search_par, search_set1, SearchConfig, SearchStats, StarterBlock,
};
use ltsearch_core::singer::{build_plane, singer_partition};

use crate::spec::{GroupSpec, RunSpec};

/// Knobs that come from the command line rather than the spec file.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub out_dir: Option<PathBuf>,
    pub group_index: Option<u64>,
    /// 1-based index into the column vectors.
    pub vector: Option<usize>,
    pub jobs: Option<usize>,
    pub depth: Option<usize>,
    pub with_orbit_condition: bool,
}

pub struct Prepared {
    pub spec: RunSpec,
    pub geom: GridGeometry,
    pub row_vector: InterceptVector,
    /// `(1-based index, vector)` after any `--vector` selection.
    pub column_vectors: Vec<(usize, InterceptVector)>,
    pub initial_block: Vec<Point>,
    pub groups: Vec<GroupData>,
}

pub struct GroupData {
    pub index: u64,
    pub group: PermGroup,
    pub table: PairOrbitTable,
    pub feasibility: Feasibility,
}

impl GroupData {
    pub fn targets(&self) -> Option<&OrbitTargets> {
        match &self.feasibility {
            Feasibility::Feasible(t) => Some(t),
            Feasibility::Infeasible(_) => None,
        }
    }
}

fn padded(entries: &[u32], k: usize, class_size: usize) -> Result<InterceptVector> {
    if entries.len() > k + 1 {
        bail!("intercept vector {entries:?} is longer than k + 1 = {}", k + 1);
    }
    let mut e = entries.to_vec();
    e.resize(k + 1, 0);
    Ok(InterceptVector::new(e, class_size as u32)?)
}

fn roots(spec: &RunSpec, geom: &GridGeometry) -> Result<PrimitiveRoots> {
    Ok(match spec.primitive_roots {
        Some((a, b)) => PrimitiveRoots::checked(geom, a, b)?,
        None => PrimitiveRoots::canonical(geom)?,
    })
}

/// The groups the spec names, as `(index, group)`.
pub fn build_groups(spec: &RunSpec, geom: &GridGeometry, group_index: Option<u64>) -> Result<Vec<(u64, PermGroup)>> {
    Ok(match &spec.group {
        GroupSpec::ParameterSet(set) => {
            let roots = roots(spec, geom)?;
            let indices: Vec<u64> = match group_index.or(spec.group_index) {
                Some(i) => vec![i],
                None => (1..=4).collect(),
            };
            indices
                .into_iter()
                .map(|i| Ok((i, parameter_set_group(geom, *set, i, roots)?)))
                .collect::<Result<_>>()?
        }
        GroupSpec::PgTest(_) => vec![(1, translation_group(geom)?)],
        GroupSpec::Generators(gens) => {
            let perms = gens
                .iter()
                .map(|g| Permutation::parse_cycles(geom.degree(), g))
                .collect::<ltsearch_core::Result<Vec<_>>>()?;
            vec![(1, enumerate_group(&perms, DEFAULT_ENUMERATION_CAP)?)]
        }
    })
}

pub fn prepare(spec: &RunSpec, opts: &Options) -> Result<Prepared> {
    let geom = GridGeometry::new(spec.n_rows, spec.n_cols)?;
    let k = spec.k;
    let analysis = dd_analyze(k as u64, geom.n_rows as u64, geom.n_cols as u64)?;

    let row_vector = match &spec.row_vector {
        Some(e) => padded(e, k, geom.n_cols)?,
        None => {
            let mut all: Vec<InterceptVector> = analysis
                .solutions
                .iter()
                .flat_map(|s| intercept_vectors(k as u64, s.y, geom.n_rows as u64, geom.n_cols as u64))
                .collect();
            all.dedup();
            match all.len() {
                1 => all.remove(0),
                0 => bail!("no row intercept vector exists for k = {k} on a {}x{} grid", geom.n_rows, geom.n_cols),
                n => bail!("{n} row intercept vectors fit; set row_vector in the spec"),
            }
        }
    };
    let mut column_vectors: Vec<InterceptVector> = if spec.column_vectors.is_empty() {
        analysis
            .solutions
            .iter()
            .flat_map(|s| intercept_vectors(k as u64, s.x, geom.n_cols as u64, geom.n_rows as u64))
            .collect()
    } else {
        spec.column_vectors.iter().map(|e| padded(e, k, geom.n_rows)).collect::<Result<_>>()?
    };
    column_vectors.dedup();
    if column_vectors.is_empty() {
        bail!("no column intercept vector exists for k = {k} on a {}x{} grid", geom.n_rows, geom.n_cols);
    }
    let mut column_vectors: Vec<(usize, InterceptVector)> =
        column_vectors.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect();
    if let Some(j) = opts.vector {
        if j == 0 || j > column_vectors.len() {
            bail!("--vector {j} out of range 1..={}", column_vectors.len());
        }
        column_vectors = vec![column_vectors.swap_remove(j - 1)];
    }

    let mut initial_block = Vec::new();
    for &(r, c) in &spec.initial_block {
        if r >= geom.n_rows || c >= geom.n_cols {
            bail!("initial block point ({r},{c}) is outside the {}x{} grid", geom.n_rows, geom.n_cols);
        }
        initial_block.push(geom.point(r, c));
    }

    let groups = build_groups(spec, &geom, opts.group_index)?
        .into_iter()
        .map(|(index, group)| {
            let table = orbits_on_pairs(&group);
            let feasibility = make_targets(geom.degree() as u64, k as u64, &table, group.order() as u64)?;
            Ok(GroupData {
                index,
                group,
                table,
                feasibility,
            })
        })
        .collect::<Result<_>>()?;

    Ok(Prepared {
        spec: spec.clone(),
        geom,
        row_vector,
        column_vectors,
        initial_block,
        groups,
    })
}

impl Prepared {
    fn config<'a>(&self, g: &'a GroupData, targets: &'a OrbitTargets, vector: &InterceptVector) -> SearchConfig<'a> {
        SearchConfig {
            name: format!("{} G{} {}", self.spec.name, g.index, vector),
            geometry: self.geom,
            group: &g.group,
            table: &g.table,
            targets,
            row_vector: self.row_vector.clone(),
            col_vector: vector.clone(),
            initial_block: self.initial_block.clone(),
            symmetry: self.spec.symmetry,
            census_depth: None,
            census_with_orbit_condition: false,
        }
    }

    fn out_dir(&self, opts: &Options) -> Result<PathBuf> {
        let dir = opts.out_dir.clone().unwrap_or_else(|| self.spec.out_dir.clone());
        fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(dir)
    }

    fn stem(&self, g: &GroupData, j: usize) -> String {
        format!("{}_g{}_v{}", self.spec.name, g.index, j)
    }
}

pub fn cmd_params(spec: &RunSpec, opts: &Options, out: &mut dyn Write) -> Result<()> {
    let prep = prepare(spec, opts)?;
    let geom = prep.geom;
    let k = spec.k as u64;
    writeln!(out, "name: {}", spec.name)?;
    writeln!(out, "grid: {}x{} (v = {})", geom.n_rows, geom.n_cols, geom.degree())?;
    writeln!(out, "k: {k}")?;
    let analysis = dd_analyze(k, geom.n_rows as u64, geom.n_cols as u64)?;
    for s in &analysis.solutions {
        writeln!(
            out,
            "dd: x = {} inner pairs per line on the columns, y = {} on the rows",
            s.x, s.y
        )?;
    }
    if analysis.solutions.is_empty() {
        writeln!(out, "dd: no solution")?;
    }
    writeln!(
        out,
        "dd.bound: v = {} {} (C(k,2)-1)^2 = {}",
        analysis.v,
        if analysis.bound_holds { "<=" } else { ">" },
        analysis.bound
    )?;
    writeln!(out, "row_vector: {}", prep.row_vector)?;
    for (j, v) in &prep.column_vectors {
        writeln!(out, "column_vector.{j}: {v}")?;
    }
    let mut total_masks = 0;
    for (j, v) in &prep.column_vectors {
        match enumerate_masks(&prep.row_vector, v) {
            Ok(masks) => {
                for (m, mask) in masks.iter().enumerate() {
                    let label = format!("{j}{}", (b'A' + m as u8) as char);
                    writeln!(
                        out,
                        "mask {label}: column vector {v}, the 2-row meets columns holding {} and {} points",
                        mask.anchors.0, mask.anchors.1
                    )?;
                }
                total_masks += masks.len();
            }
            Err(e) => writeln!(out, "masks for {v}: {e}")?,
        }
    }
    writeln!(out, "masks: {total_masks}")?;

    for g in &prep.groups {
        let mut by_size = std::collections::BTreeMap::new();
        for &s in g.table.orbit_sizes() {
            *by_size.entry(s).or_insert(0usize) += 1;
        }
        let shape: Vec<String> = by_size.iter().map(|(s, n)| format!("{n} x {s}")).collect();
        writeln!(
            out,
            "G{}: order {}, {}transitive, {} pair orbits ({})",
            g.index,
            g.group.order(),
            if g.group.is_transitive() { "" } else { "not " },
            g.table.num_orbits(),
            shape.join(", ")
        )?;
        match &g.feasibility {
            Feasibility::Feasible(t) => {
                let mut tb = std::collections::BTreeMap::new();
                for &x in &t.targets {
                    *tb.entry(x).or_insert(0usize) += 1;
                }
                let tb: Vec<String> = tb.iter().map(|(x, n)| format!("{n} orbits x {x}")).collect();
                writeln!(
                    out,
                    "G{} targets: b = {}, {}, stabilizer order {}",
                    g.index,
                    t.b_hat,
                    tb.join(", "),
                    t.required_stabilizer_order
                )?;
            }
            Feasibility::Infeasible(why) => writeln!(out, "G{} targets: INFEASIBLE ({why})", g.index)?,
        }
    }
    if let GroupSpec::ParameterSet(_) = spec.group {
        let h = normalizer(&geom, roots(spec, &geom)?)?;
        writeln!(out, "normalizer: order {}", h.order())?;
        for g in &prep.groups {
            writeln!(
                out,
                "G{}: subgroup {}, normal {}",
                g.index,
                g.group.is_subgroup_of(&h),
                g.group.is_normalized_by(&h)
            )?;
        }
    }
    Ok(())
}

pub fn cmd_orbits(spec: &RunSpec, opts: &Options, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let geom = GridGeometry::new(spec.n_rows, spec.n_cols)?;
    let dir = {
        let dir = opts.out_dir.clone().unwrap_or_else(|| spec.out_dir.clone());
        fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        dir
    };
    let mut written = Vec::new();
    for (i, g) in build_groups(spec, &geom, opts.group_index)? {
        let table = orbits_on_pairs(&g);
        let path = dir.join(format!("{}_g{i}.orbits", spec.name));
        table.write_text(BufWriter::new(File::create(&path)?))?;
        writeln!(out, "G{i}: {} pair orbits -> {}", table.num_orbits(), path.display())?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Searched {
        blocks: Vec<StarterBlock>,
        stats: Option<SearchStats>,
        /// Set for the normalized set-1 enumeration.
        candidates: Option<u64>,
    },
    Infeasible(String),
}

#[derive(Clone, Debug)]
pub struct Combination {
    pub group_index: u64,
    pub vector_index: usize,
    pub vector: InterceptVector,
    pub outcome: Outcome,
}

impl Combination {
    pub fn found(&self) -> usize {
        match &self.outcome {
            Outcome::Searched { blocks, .. } => blocks.len(),
            Outcome::Infeasible(_) => 0,
        }
    }
}

/// Whether a column vector has the normalized set-1 shape: two singly
/// occupied columns and `(k-2)/2` doubly occupied ones.
fn is_set1_shape(v: &InterceptVector) -> bool {
    let k = v.k();
    k % 2 == 0 && v.get(1) == 2 && v.get(2) as usize == (k - 2) / 2
}

pub fn cmd_search(spec: &RunSpec, opts: &Options, out: &mut dyn Write) -> Result<Vec<Combination>> {
    let prep = prepare(spec, opts)?;
    let dir = prep.out_dir(opts)?;
    let mut results = Vec::new();
    for g in &prep.groups {
        for (j, vector) in &prep.column_vectors {
            let label = format!("G{} {}", g.index, vector);
            let Some(targets) = g.targets() else {
                let Feasibility::Infeasible(why) = &g.feasibility else { unreachable!() };
                writeln!(out, "{label}: INFEASIBLE ({why})")?;
                results.push(Combination {
                    group_index: g.index,
                    vector_index: *j,
                    vector: vector.clone(),
                    outcome: Outcome::Infeasible(why.to_string()),
                });
                continue;
            };
            let cfg = prep.config(g, targets, vector);
            let set1 = matches!(spec.group, GroupSpec::ParameterSet(ParameterSet::One)) && is_set1_shape(vector);
            let outcome = if set1 {
                let r = search_set1(&cfg)?;
                Outcome::Searched {
                    blocks: r.blocks,
                    stats: None,
                    candidates: Some(r.candidates),
                }
            } else {
                let r = if opts.jobs == Some(1) { search(&cfg)? } else { search_par(&cfg)? };
                Outcome::Searched {
                    blocks: r.blocks,
                    stats: Some(r.stats),
                    candidates: None,
                }
            };
            let Outcome::Searched { blocks, stats, candidates } = &outcome else { unreachable!() };
            let stem = prep.stem(g, *j);
            let points: Vec<Vec<Point>> = blocks.iter().map(|b| b.points.clone()).collect();
            write_blocks(BufWriter::new(File::create(dir.join(format!("{stem}.blocks")))?), &points)?;
            let mut report = String::new();
            report.push_str(&format!("config: {}\n", cfg.name));
            report.push_str(&format!("symmetry: {}\n", cfg.symmetry));
            if let Some(c) = candidates {
                report.push_str(&format!("candidates: {c}\n"));
                report.push_str(&format!("found: {}\n", blocks.len()));
            }
            if let Some(s) = stats {
                report.push_str(&s.to_string());
            }
            fs::write(dir.join(format!("{stem}.stats")), &report)?;
            match candidates {
                Some(c) => writeln!(out, "{label}: {c} candidates, FOUND {}", blocks.len())?,
                None => writeln!(out, "{label}: FOUND {}", blocks.len())?,
            }
            results.push(Combination {
                group_index: g.index,
                vector_index: *j,
                vector: vector.clone(),
                outcome,
            });
        }
    }
    let total: usize = results.iter().map(Combination::found).sum();
    if results.iter().all(|r| matches!(r.outcome, Outcome::Infeasible(_))) {
        writeln!(out, "INFEASIBLE")?;
    } else {
        writeln!(out, "FOUND {total}")?;
    }
    Ok(results)
}

#[derive(Clone, Debug)]
pub struct CensusResult {
    pub group_index: u64,
    pub vector: InterceptVector,
    pub depth: usize,
    pub count: u64,
    pub stats: SearchStats,
    pub stream: Option<PathBuf>,
}

pub fn cmd_census(spec: &RunSpec, opts: &Options, out: &mut dyn Write) -> Result<Vec<CensusResult>> {
    let prep = prepare(spec, opts)?;
    let depth = opts
        .depth
        .or(spec.census_depth)
        .context("census needs --depth or census_depth in the spec")?;
    let orbit = opts.with_orbit_condition || spec.census_orbit_condition;
    let dir = if spec.census_stream { Some(prep.out_dir(opts)?) } else { None };
    let mut results = Vec::new();
    for g in &prep.groups {
        let Some(targets) = g.targets() else {
            writeln!(out, "G{}: INFEASIBLE", g.index)?;
            continue;
        };
        for (j, vector) in &prep.column_vectors {
            let mut cfg = prep.config(g, targets, vector);
            cfg.census_depth = Some(depth);
            cfg.census_with_orbit_condition = orbit;
            let (stats, stream) = match &dir {
                Some(dir) => {
                    let path = dir.join(format!("{}_census{depth}.blocks", prep.stem(g, *j)));
                    let mut w = BufWriter::new(File::create(&path)?);
                    let mut failure = None;
                    let stats = census(&cfg, &mut |b: &[Point]| {
                        if failure.is_none() {
                            if let Err(e) = write_blocks(&mut w, &[b.to_vec()]) {
                                failure = Some(e);
                            }
                        }
                    })?;
                    if let Some(e) = failure {
                        return Err(e).with_context(|| format!("writing {}", path.display()));
                    }
                    w.flush()?;
                    (stats, Some(path))
                }
                None => (census_count(&cfg)?, None),
            };
            let count = stats.nodes_at(depth);
            writeln!(
                out,
                "G{} {}: census q={depth} orbit_condition={}: COUNT {count}",
                g.index,
                vector,
                if orbit { "on" } else { "off" }
            )?;
            results.push(CensusResult {
                group_index: g.index,
                vector: vector.clone(),
                depth,
                count,
                stats,
                stream,
            });
        }
    }
    Ok(results)
}

/// Develops every block of `blocks_path` under the spec's group and verifies
/// the result against both grid partitions.
pub fn cmd_verify(spec: &RunSpec, blocks_path: &Path, opts: &Options, out: &mut dyn Write) -> Result<Vec<VerificationReport>> {
    let geom = GridGeometry::new(spec.n_rows, spec.n_cols)?;
    let groups = build_groups(spec, &geom, opts.group_index)?;
    if groups.len() != 1 {
        bail!("the spec names {} groups; pick one with --group-index", groups.len());
    }
    let group = &groups[0].1;
    let file = File::open(blocks_path).with_context(|| format!("cannot open {}", blocks_path.display()))?;
    let blocks = read_blocks(BufReader::new(file), geom.degree())?;
    let partitions = vec![geom.columns(), geom.rows()];
    let mut reports = Vec::new();
    for (n, block) in blocks.iter().enumerate() {
        let design = develop(group, block);
        let report = verify(&design, Some(group), &partitions)?;
        let ids: Vec<String> = block.iter().map(|p| (p + 1).to_string()).collect();
        writeln!(out, "block.{}: {}", n + 1, ids.join(" "))?;
        write!(out, "{report}")?;
        reports.push(report);
    }
    let ok = reports.iter().filter(|r| r.all_ok()).count();
    writeln!(out, "VERIFIED {ok}/{}", reports.len())?;
    Ok(reports)
}

/// Builds the plane of prime order `p`, writes its lines, and verifies it
/// under the Singer group with every Singer-invariant partition.
pub fn cmd_pg(p: u64, out_dir: &Path, out: &mut dyn Write) -> Result<VerificationReport> {
    let plane = build_plane(p)?;
    let n = plane.num_points();
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let path = out_dir.join(format!("pg2_{p}.lines"));
    write_blocks(BufWriter::new(File::create(&path)?), &plane.lines)?;
    let group = plane.singer_group()?;
    let divisors: Vec<usize> = (2..n).filter(|a| n % a == 0).collect();
    let partitions = divisors
        .iter()
        .map(|&a| singer_partition(&plane, a))
        .collect::<ltsearch_core::Result<Vec<_>>>()?;
    let design = ltsearch_core::design::Design::new(n, plane.lines.clone())?;
    let report = verify(&design, Some(&group), &partitions)?;
    writeln!(out, "polynomial: {}", plane.polynomial)?;
    writeln!(out, "points: {n}")?;
    writeln!(out, "singer_order: {}", group.order())?;
    writeln!(out, "lines_file: {}", path.display())?;
    write!(out, "{report}")?;
    Ok(report)
}
