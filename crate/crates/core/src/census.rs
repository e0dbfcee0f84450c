//! Exhaustive enumeration of admissible colorings up to renaming.
//!
//! Colors are assigned to edges in canonical order as restricted-growth
//! words, so each coloring appears once. Faces are checked as soon as their
//! last edge is colored; leaves get the full vertex-pair check. The search is
//! cut into fixed-depth prefix shards, run on a worker pool and merged in
//! shard order, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{edge_permutations, ColorId, EdgeColoring};
use crate::constructors::{cone, generalized_bdf_default};
use crate::cube::{Hypercube, Subcube};
use crate::error::{Error, Result};
use crate::forest::extract_forest;
use crate::locc::is_locc_distinguishable;
use crate::refine::find_refinement;

pub const CHECKPOINT_VERSION: u32 = 1;
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Largest dimension with a full census.
pub const FULL_CENSUS_MAX_DIM: usize = 3;
/// Largest dimension with the experimental filtered census.
pub const EXPERIMENTAL_MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    #[default]
    All,
    Maximal,
    /// Only colorings with `2^n - 1` colors; enables a color-count branch cut.
    MaxColors,
}

impl std::str::FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "maximal" => Ok(Filter::Maximal),
            "max-colors" | "max_colors" => Ok(Filter::MaxColors),
            _ => Err(Error::Document(format!("unknown filter `{s}` (expected all, maximal, max-colors)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pruning {
    /// Faces only; leaves are filtered by the full pair check.
    TwoFace,
    /// Every vertex pair is checked as soon as its edges are colored.
    Pairs,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub n: usize,
    pub up_to_symmetry: bool,
    pub filter: Filter,
    pub workers: usize,
    /// Return the colorings passing the filter, not only counts.
    pub collect: bool,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
    pub record_wall_time: bool,
}

impl CensusConfig {
    pub fn new(n: usize) -> Self {
        CensusConfig {
            n,
            up_to_symmetry: false,
            filter: Filter::All,
            workers: 1,
            collect: false,
            node_budget: None,
            time_budget: None,
            checkpoint: None,
            record_wall_time: false,
        }
    }

    fn pruning(&self) -> Pruning {
        if self.n <= FULL_CENSUS_MAX_DIM {
            Pruning::TwoFace
        } else {
            Pruning::Pairs
        }
    }

    fn shard_depth(&self, edges: usize) -> usize {
        edges.min(match self.n {
            0..=2 => 2,
            3 => 6,
            _ => 8,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardCounts {
    pub leaves: u64,
    pub admissible: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub maximal_by_colors: BTreeMap<usize, u64>,
    pub canonical: u64,
    pub maximal_canonical_by_colors: BTreeMap<usize, u64>,
    pub orbit_sum: u64,
    pub nodes: u64,
    /// Colorings passing the filter (representatives only when up to symmetry).
    #[serde(default)]
    pub selected: u64,
    /// Restricted-growth words of the selected colorings, when collecting.
    pub kept: Vec<Vec<ColorId>>,
}

impl ShardCounts {
    fn absorb(&mut self, other: &ShardCounts, collect: bool) {
        self.leaves += other.leaves;
        self.admissible += other.admissible;
        for (k, v) in &other.histogram {
            *self.histogram.entry(*k).or_default() += v;
        }
        for (k, v) in &other.maximal_by_colors {
            *self.maximal_by_colors.entry(*k).or_default() += v;
        }
        self.canonical += other.canonical;
        for (k, v) in &other.maximal_canonical_by_colors {
            *self.maximal_canonical_by_colors.entry(*k).or_default() += v;
        }
        self.orbit_sum += other.orbit_sum;
        self.nodes += other.nodes;
        self.selected += other.selected;
        if collect {
            self.kept.extend(other.kept.iter().cloned());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub n: usize,
    pub up_to_symmetry: bool,
    pub filter: Filter,
    pub shard_depth: usize,
    /// Completed shards keyed by their prefix, in shard order.
    pub completed: Vec<(Vec<ColorId>, ShardCounts)>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text)?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Document(format!("checkpoint version {} (expected {CHECKPOINT_VERSION})", cp.version)));
        }
        Ok(cp)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub n: usize,
    pub up_to_symmetry: bool,
    pub filter: Filter,
    pub pruning: Pruning,
    pub experimental: bool,
    /// Leaves passing every face check (reported with face-only pruning).
    pub two_face_admissible: Option<u64>,
    pub total_admissible: u64,
    pub total_up_to_symmetry: Option<u64>,
    /// Sum of orbit sizes over symmetry representatives.
    pub orbit_sum: Option<u64>,
    pub colors_histogram: BTreeMap<usize, u64>,
    pub max_colors_seen: usize,
    pub maximal_by_colors: BTreeMap<usize, u64>,
    pub maximal_up_to_symmetry_by_colors: Option<BTreeMap<usize, u64>>,
    /// Fewest colors among maximal colorings.
    pub c_n: Option<usize>,
    /// Colorings passing the filter, counted once per symmetry class when up to symmetry.
    pub kept: u64,
    pub nodes: u64,
    pub wall_time_ms: Option<u64>,
}

struct Search {
    n: usize,
    cube: Hypercube,
    edges: usize,
    target: usize,
    faces_at: Vec<Vec<[usize; 4]>>,
    pairs_at: Vec<Vec<Vec<(usize, usize)>>>,
    all_pairs: Vec<Vec<(usize, usize)>>,
    pruning: Pruning,
    filter: Filter,
    up_to_symmetry: bool,
    group_order: u64,
    collect: bool,
}

struct Limits<'a> {
    nodes: &'a AtomicU64,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
}

struct Aborted;

impl Limits<'_> {
    /// Add finished nodes to the shared count; fail once any budget is spent.
    fn charge(&self, nodes: u64) -> std::result::Result<(), Aborted> {
        let total = self.nodes.fetch_add(nodes, Ordering::Relaxed) + nodes;
        let over_nodes = self.node_budget.is_some_and(|b| total > b);
        let over_time = self.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.abort.store(true, Ordering::Relaxed);
        }
        if self.abort.load(Ordering::Relaxed) {
            Err(Aborted)
        } else {
            Ok(())
        }
    }
}

const NODE_FLUSH: u64 = 1 << 12;

impl Search {
    fn new(cfg: &CensusConfig) -> Result<Search> {
        let cube = Hypercube::new(cfg.n)?;
        let edges = cube.edge_count();
        let mut faces_at = vec![Vec::new(); edges];
        for f in if cfg.n >= 2 { cube.two_faces()? } else { Vec::new() } {
            let idx = f.edges().map(|e| cube.edge_index(e));
            let last = *idx.iter().max().expect("four edges");
            faces_at[last].push(idx);
        }
        let mut pairs_at = vec![Vec::new(); edges];
        let mut all_pairs = Vec::new();
        let nv = cube.vertex_count() as u32;
        for a in 0..nv {
            for b in (a + 1)..nv {
                let diff = a ^ b;
                if diff.count_ones() < 2 {
                    continue;
                }
                let pairs: Vec<(usize, usize)> = (0..cfg.n)
                    .filter(|d| diff >> d & 1 == 1)
                    .map(|d| (cube.incident_index(a, d), cube.incident_index(b, d)))
                    .collect();
                let last = pairs.iter().map(|&(x, y)| x.max(y)).max().expect("two directions");
                pairs_at[last].push(pairs.clone());
                all_pairs.push(pairs);
            }
        }
        let group_order =
            if cfg.n <= crate::cube::MAX_SYMMETRY_DIM { edge_permutations(cfg.n)?.len() as u64 } else { 0 };
        Ok(Search {
            n: cfg.n,
            cube,
            edges,
            target: cube.vertex_count() - 1,
            faces_at,
            pairs_at,
            all_pairs,
            pruning: cfg.pruning(),
            filter: cfg.filter,
            up_to_symmetry: cfg.up_to_symmetry,
            group_order,
            collect: cfg.collect,
        })
    }

    fn local_ok(&self, word: &[ColorId]) -> bool {
        let i = word.len() - 1;
        let faces_ok = self.faces_at[i].iter().all(|f| word[f[0]] == word[f[1]] || word[f[2]] == word[f[3]]);
        faces_ok
            && (self.pruning == Pruning::TwoFace
                || self.pairs_at[i].iter().all(|p| p.iter().any(|&(x, y)| word[x] == word[y])))
    }

    fn cut(&self, word: &[ColorId], used: usize) -> bool {
        self.filter == Filter::MaxColors && used + (self.edges - word.len()) < self.target
    }

    /// Prefixes of length `depth` in search order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<ColorId>> {
        fn go(s: &Search, depth: usize, word: &mut Vec<ColorId>, used: usize, out: &mut Vec<Vec<ColorId>>) {
            if word.len() == depth {
                out.push(word.clone());
                return;
            }
            for k in 0..=used as ColorId {
                word.push(k);
                let u = used.max(k as usize + 1);
                if s.local_ok(word) && !s.cut(word, u) {
                    go(s, depth, word, u, out);
                }
                word.pop();
            }
        }
        let mut out = Vec::new();
        go(self, depth, &mut Vec::new(), 0, &mut out);
        out
    }

    fn run_shard(&self, prefix: &[ColorId], limits: &Limits<'_>) -> std::result::Result<ShardCounts, Aborted> {
        if limits.abort.load(Ordering::Relaxed) {
            return Err(Aborted);
        }
        let mut acc = ShardCounts::default();
        let mut word = prefix.to_vec();
        let used = prefix.iter().map(|&k| k as usize + 1).max().unwrap_or(0);
        let mut pending = 0u64;
        self.dfs(&mut word, used, &mut acc, limits, &mut pending)?;
        acc.nodes += pending;
        // The shard is complete; a budget hit here only stops later shards.
        let _ = limits.charge(pending);
        Ok(acc)
    }

    fn dfs(
        &self,
        word: &mut Vec<ColorId>,
        used: usize,
        acc: &mut ShardCounts,
        limits: &Limits<'_>,
        pending: &mut u64,
    ) -> std::result::Result<(), Aborted> {
        *pending += 1;
        if *pending >= NODE_FLUSH {
            acc.nodes += *pending;
            limits.charge(std::mem::take(pending))?;
        }
        if word.len() == self.edges {
            self.leaf(word, used, acc);
            return Ok(());
        }
        for k in 0..=used as ColorId {
            word.push(k);
            let u = used.max(k as usize + 1);
            if self.local_ok(word) && !self.cut(word, u) {
                self.dfs(word, u, acc, limits, pending)?;
            }
            word.pop();
        }
        Ok(())
    }

    fn leaf(&self, word: &[ColorId], used: usize, acc: &mut ShardCounts) {
        acc.leaves += 1;
        if self.pruning == Pruning::TwoFace
            && !self.all_pairs.iter().all(|p| p.iter().any(|&(x, y)| word[x] == word[y]))
        {
            return;
        }
        acc.admissible += 1;
        *acc.histogram.entry(used).or_default() += 1;
        let c = EdgeColoring::from_normalized(self.cube, word.to_vec());
        let maximal = used == self.target || find_refinement(&c).expect("admissible leaf").is_maximal();
        if maximal {
            *acc.maximal_by_colors.entry(used).or_default() += 1;
        }
        let mut canonical = true;
        if self.up_to_symmetry {
            canonical = is_symmetry_minimal(word, self.n);
            if canonical {
                acc.canonical += 1;
                let stab = c.stabilizer_order().expect("symmetry table") as u64;
                acc.orbit_sum += self.group_order / stab;
                if maximal {
                    *acc.maximal_canonical_by_colors.entry(used).or_default() += 1;
                }
            }
        }
        let passes = match self.filter {
            Filter::All => true,
            Filter::Maximal => maximal,
            Filter::MaxColors => used == self.target,
        };
        if passes && canonical {
            acc.selected += 1;
            if self.collect {
                acc.kept.push(word.to_vec());
            }
        }
    }
}

/// Whether a restricted-growth word is the least over all cube symmetries,
/// stopping each image as soon as it compares larger.
fn is_symmetry_minimal(word: &[ColorId], n: usize) -> bool {
    let table = edge_permutations(n).expect("n within symmetry range");
    let mut image = vec![0; word.len()];
    let mut rename = vec![ColorId::MAX; word.len()];
    'perm: for perm in table {
        for (i, &c) in word.iter().enumerate() {
            image[perm[i] as usize] = c;
        }
        rename.iter_mut().for_each(|r| *r = ColorId::MAX);
        let mut next = 0;
        for (i, &c) in image.iter().enumerate() {
            let r = &mut rename[c as usize];
            if *r == ColorId::MAX {
                *r = next;
                next += 1;
            }
            match (*r).cmp(&word[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => continue 'perm,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

fn validate(cfg: &CensusConfig) -> Result<()> {
    if cfg.n < 1 || cfg.n > EXPERIMENTAL_MAX_DIM {
        return Err(Error::DimensionOutOfRange { n: cfg.n, min: 1, max: EXPERIMENTAL_MAX_DIM });
    }
    if cfg.n > FULL_CENSUS_MAX_DIM && (!cfg.up_to_symmetry || cfg.filter == Filter::All) {
        return Err(Error::ResourceGuard(format!(
            "n = {} needs --up-to-symmetry and a maximal or max-colors filter",
            cfg.n
        )));
    }
    if cfg.workers == 0 {
        return Err(Error::ResourceGuard("worker count must be at least 1".into()));
    }
    Ok(())
}

/// Run the census. Colorings passing the filter (and, with symmetry, only
/// the least of each orbit) come back in search order when `cfg.collect`.
pub fn run_census(cfg: &CensusConfig) -> Result<(CensusReport, Vec<EdgeColoring>)> {
    validate(cfg)?;
    let started = Instant::now();
    let search = Search::new(cfg)?;
    let depth = cfg.shard_depth(search.edges);
    let prefixes = search.prefixes(depth);

    let mut done: BTreeMap<Vec<ColorId>, ShardCounts> = BTreeMap::new();
    if let Some(path) = cfg.checkpoint.as_deref().filter(|p| p.exists()) {
        let cp = Checkpoint::load(path)?;
        if cp.n != cfg.n
            || cp.up_to_symmetry != cfg.up_to_symmetry
            || cp.filter != cfg.filter
            || cp.shard_depth != depth
        {
            return Err(Error::Document(format!("checkpoint {} was written for a different census", path.display())));
        }
        done.extend(cp.completed);
    }

    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let limits = Limits {
        nodes: &nodes,
        node_budget: cfg.node_budget,
        deadline: cfg.time_budget.map(|d| started + d),
        abort: &abort,
    };
    let sink = Mutex::new((done, Instant::now()));
    let save = |completed: &BTreeMap<Vec<ColorId>, ShardCounts>| -> Result<()> {
        if let Some(path) = &cfg.checkpoint {
            let completed = prefixes.iter().filter_map(|p| completed.get(p).map(|c| (p.clone(), c.clone()))).collect();
            Checkpoint {
                version: CHECKPOINT_VERSION,
                n: cfg.n,
                up_to_symmetry: cfg.up_to_symmetry,
                filter: cfg.filter,
                shard_depth: depth,
                completed,
            }
            .save(path)?;
        }
        Ok(())
    };

    let work = |prefix: &Vec<ColorId>| -> Result<()> {
        if sink.lock().expect("sink").0.contains_key(prefix) {
            return Ok(());
        }
        if let Ok(counts) = search.run_shard(prefix, &limits) {
            let mut guard = sink.lock().expect("sink");
            guard.0.insert(prefix.clone(), counts);
            if guard.1.elapsed() > Duration::from_secs(1) {
                guard.1 = Instant::now();
                save(&guard.0)?;
            }
        }
        Ok(())
    };
    if cfg.workers == 1 {
        prefixes.iter().try_for_each(work)?;
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::ResourceGuard(format!("thread pool: {e}")))?;
        pool.install(|| prefixes.par_iter().try_for_each(work))?;
    }

    let done = sink.into_inner().expect("sink").0;
    save(&done)?;
    let missing = prefixes.iter().filter(|p| !done.contains_key(*p)).count();
    if missing > 0 {
        return Err(Error::ResourceGuard(format!(
            "budget exhausted with {missing} of {} shards unfinished ({} nodes)",
            prefixes.len(),
            nodes.load(Ordering::Relaxed)
        )));
    }

    let mut total = ShardCounts::default();
    for p in &prefixes {
        total.absorb(&done[p], cfg.collect);
    }
    let max_colors_seen = total.histogram.keys().next_back().copied().unwrap_or(0);
    if max_colors_seen > search.target {
        return Err(Error::TheoremViolation(format!(
            "an admissible coloring of Q{} has {max_colors_seen} > {} colors",
            cfg.n, search.target
        )));
    }
    let c_n = total.maximal_by_colors.keys().next().copied();
    let report = CensusReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n: cfg.n,
        up_to_symmetry: cfg.up_to_symmetry,
        filter: cfg.filter,
        pruning: search.pruning,
        experimental: cfg.n > FULL_CENSUS_MAX_DIM,
        two_face_admissible: (search.pruning == Pruning::TwoFace).then_some(total.leaves),
        total_admissible: total.admissible,
        total_up_to_symmetry: cfg.up_to_symmetry.then_some(total.canonical),
        orbit_sum: cfg.up_to_symmetry.then_some(total.orbit_sum),
        colors_histogram: total.histogram,
        max_colors_seen,
        maximal_by_colors: total.maximal_by_colors,
        maximal_up_to_symmetry_by_colors: cfg.up_to_symmetry.then_some(total.maximal_canonical_by_colors),
        c_n,
        kept: total.selected,
        nodes: total.nodes,
        wall_time_ms: cfg.record_wall_time.then(|| started.elapsed().as_millis() as u64),
    };
    let colorings = total.kept.into_iter().map(|w| EdgeColoring::from_normalized(search.cube, w)).collect();
    Ok((report, colorings))
}

/// Every admissible coloring of `Q_n` (n <= 3) once up to renaming, or once
/// per symmetry orbit, in search order.
pub fn enumerate_admissible(n: usize, up_to_symmetry: bool) -> Result<Vec<EdgeColoring>> {
    if n > FULL_CENSUS_MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: FULL_CENSUS_MAX_DIM });
    }
    let cfg = CensusConfig { up_to_symmetry, collect: true, ..CensusConfig::new(n) };
    run_census(&cfg).map(|(_, cs)| cs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiveBound {
    pub colors: usize,
    pub construction: String,
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinColors {
    Exact { n: usize, exact: usize },
    Bounds { n: usize, lower: usize, upper: usize, constructive: Option<ConstructiveBound> },
}

/// The fewest colors of a maximal coloring: exact from the census for
/// `n <= 3`, otherwise the interval `[2n, 13 * 2^(n-4) - 1]` with the best
/// verified construction.
pub fn min_colors(n: usize, workers: usize) -> Result<MinColors> {
    if !(2..=crate::cube::MAX_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: crate::cube::MAX_DIM });
    }
    if n <= FULL_CENSUS_MAX_DIM {
        let cfg = CensusConfig { workers, ..CensusConfig::new(n) };
        let (report, _) = run_census(&cfg)?;
        let exact = report.c_n.ok_or_else(|| Error::TheoremViolation(format!("no maximal coloring of Q{n}")))?;
        return Ok(MinColors::Exact { n, exact });
    }
    let upper = 13 * (1 << (n - 4)) - 1;
    let constructive = best_construction(n)?
        .map(|(c, construction)| -> Result<ConstructiveBound> {
            let maximal = find_refinement(&c)?.is_maximal();
            Ok(ConstructiveBound { colors: c.color_count(), construction, maximal })
        })
        .transpose()?;
    Ok(MinColors::Bounds { n, lower: 2 * n, upper, constructive })
}

/// The smallest-count maximal coloring among the known constructions.
pub fn best_construction(n: usize) -> Result<Option<(EdgeColoring, String)>> {
    if n < 3 {
        return Ok(None);
    }
    let mut best: Option<(EdgeColoring, String)> =
        generalized_bdf_default(n).ok().map(|c| (c, format!("generalized_bdf({n})")));
    if n >= 5 {
        if let Some((half, name)) = best_construction(n - 1)? {
            let c = cone(&half, &half)?;
            if find_refinement(&c)?.is_maximal() && best.as_ref().is_none_or(|(b, _)| c.color_count() < b.color_count())
            {
                best = Some((c, format!("cone({name}, {name})")));
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub passed: bool,
    pub examined: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n: usize,
    pub admissible: u64,
    pub max_colorings: u64,
    pub max_colorings_up_to_symmetry: u64,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check the extremal statements against every admissible coloring of
/// `Q_n` (n <= 3).
pub fn verify_extremal_theorems(n: usize, workers: usize) -> Result<TheoremReport> {
    if n > FULL_CENSUS_MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: FULL_CENSUS_MAX_DIM });
    }
    let cfg = CensusConfig { workers, collect: true, ..CensusConfig::new(n) };
    let (_, all) = run_census(&cfg)?;
    let cube = Hypercube::new(n)?;
    let target = cube.vertex_count() - 1;
    let max: Vec<&EdgeColoring> = all.iter().filter(|c| c.color_count() == target).collect();

    fn check<'a>(
        name: &str,
        items: impl IntoIterator<Item = &'a EdgeColoring>,
        mut ok: impl FnMut(&EdgeColoring) -> Result<bool>,
    ) -> Result<TheoremCheck> {
        let mut examined = 0;
        for c in items {
            examined += 1;
            if !ok(c)? {
                return Ok(TheoremCheck {
                    name: name.into(),
                    passed: false,
                    examined,
                    counterexample: Some(c.to_string()),
                });
            }
        }
        Ok(TheoremCheck { name: name.into(), passed: true, examined, counterexample: None })
    }

    let mut checks = Vec::new();
    let mut bound = check("color_bound", all.iter(), |c| Ok(c.color_count() <= target))?;
    if bound.passed && max.is_empty() {
        bound.passed = false;
        bound.counterexample = Some(format!("no coloring reaches {target} colors"));
    }
    checks.push(bound);
    checks.push(check("uniform_direction", max.iter().copied(), |c| Ok(c.uniform_direction().is_some()))?);
    checks.push(check("forest_has_each_color_once", all.iter(), |c| {
        let f = extract_forest(c)?;
        Ok(f.is_acyclic(cube) && f.has_each_color_once(c))
    })?);
    checks.push(check("spanning_tree_iff_max_colors", all.iter(), |c| {
        Ok(extract_forest(c)?.is_spanning_tree(cube) == (c.color_count() == target))
    })?);
    checks.push(check("subcube_restrictions", max.iter().copied(), |c| {
        for mask in 1u32..(1 << n) {
            let free: Vec<usize> = (0..n).filter(|d| mask >> d & 1 == 1).collect();
            let m = free.len();
            if m == n {
                continue;
            }
            for anchor in cube.vertices().filter(|v| v & mask == 0) {
                let r = c.restrict(&Subcube::new(n, free.clone(), anchor)?)?;
                if !r.is_admissible() || r.color_count() != (1 << m) - 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })?);
    checks.push(check("recognizer_equivalence", all.iter(), |c| {
        let count = c.color_count() == target;
        Ok(c.is_max_family()? == count && is_locc_distinguishable(c)? == count)
    })?);

    let sym = if n <= crate::cube::MAX_SYMMETRY_DIM {
        max.iter().filter(|c| is_symmetry_minimal(c.colors(), n)).count() as u64
    } else {
        0
    };
    Ok(TheoremReport {
        n,
        admissible: all.len() as u64,
        max_colorings: max.len() as u64,
        max_colorings_up_to_symmetry: sym,
        checks,
    })
}
