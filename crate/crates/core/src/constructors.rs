//! Explicit colorings: the one-color coloring, the recursive maximum-color
//! construction, the dominant/non-dominant family, the cone and doubling
//! combinators, and the reference fixtures.

use std::collections::VecDeque;

use rand::Rng;

use crate::coloring::{ColorId, EdgeColoring};
use crate::cube::{Edge, Hypercube, Vertex};
use crate::error::{Error, Result};

pub fn minimal_coloring(n: usize) -> Result<EdgeColoring> {
    EdgeColoring::from_fn(n, |_| 0)
}

/// Drop bit `dir` from a vertex of `Q_n`, giving a vertex of `Q_{n-1}`.
fn squeeze(v: Vertex, dir: usize) -> Vertex {
    (v & ((1 << dir) - 1)) | ((v >> (dir + 1)) << dir)
}

fn squeeze_edge(e: Edge, dir: usize) -> Edge {
    Edge { base: squeeze(e.base, dir), dir: if e.dir < dir { e.dir } else { e.dir - 1 } }
}

fn check_halves(c0: &EdgeColoring, c1: &EdgeColoring) -> Result<()> {
    if c0.n() != c1.n() {
        return Err(Error::DimensionMismatch { expected: c0.n(), found: c1.n() });
    }
    c0.require_admissible()?;
    c1.require_admissible()
}

/// Glue `c0` (bit `dir` clear) and `c1` (bit `dir` set) with disjoint
/// palettes and give every edge in direction `dir` one fresh color.
pub fn construct_max_from(c0: &EdgeColoring, c1: &EdgeColoring, dir: usize) -> Result<EdgeColoring> {
    check_halves(c0, c1)?;
    let n = c0.n() + 1;
    if dir >= n {
        return Err(Error::IndexOutOfRange { what: "direction", index: dir, limit: n });
    }
    let offset = c0.color_count() as ColorId;
    let fresh = offset + c1.color_count() as ColorId;
    EdgeColoring::from_fn(n, |e| {
        if e.dir == dir {
            fresh
        } else if e.base >> dir & 1 == 0 {
            c0.color(squeeze_edge(e, dir))
        } else {
            offset + c1.color(squeeze_edge(e, dir))
        }
    })
}

/// The recursive coloring with `2^n - 1` colors, splitting along the
/// highest direction at every level.
pub fn construct_max(n: usize) -> Result<EdgeColoring> {
    Hypercube::new(n)?;
    let mut c = minimal_coloring(1)?;
    for k in 2..=n {
        c = construct_max_from(&c, &c, k - 1)?;
    }
    Ok(c)
}

/// New highest direction with a single fresh color over `c0` and `c1`.
pub fn cone(c0: &EdgeColoring, c1: &EdgeColoring) -> Result<EdgeColoring> {
    construct_max_from(c0, c1, c0.n())
}

/// Both halves colored by `c` with the same palette; each of the
/// `2^{n-1}` new vertical edges gets its own color.
pub fn doubling(c: &EdgeColoring) -> Result<EdgeColoring> {
    c.require_admissible()?;
    let dir = c.n();
    let fresh = c.color_count() as ColorId;
    EdgeColoring::from_fn(dir + 1, |e| if e.dir == dir { fresh + e.base } else { c.color(squeeze_edge(e, dir)) })
}

/// A two-class labeling of the edges with exactly one non-dominant edge on
/// every 2-face.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DominantPattern {
    pub n: usize,
    /// Non-dominant edges in canonical edge order.
    pub nondominant: Vec<Edge>,
}

impl DominantPattern {
    pub fn validate(&self) -> Result<()> {
        let cube = Hypercube::new(self.n)?;
        if self.n < 3 {
            return Err(Error::PatternInvalid(format!("n = {} < 3", self.n)));
        }
        let mut marked = vec![false; cube.edge_count()];
        for &e in &self.nondominant {
            if !cube.contains_edge(e) {
                return Err(Error::PatternInvalid(format!("edge {e} not in Q{}", self.n)));
            }
            marked[cube.edge_index(e)] = true;
        }
        for f in cube.two_faces()? {
            let k = f.edges().iter().filter(|&&e| marked[cube.edge_index(e)]).count();
            if k != 1 {
                return Err(Error::PatternInvalid(format!(
                    "face at {} in directions {:?} has {k} non-dominant edges",
                    f.base, f.dirs
                )));
            }
        }
        Ok(())
    }

    pub fn per_direction(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for e in &self.nondominant {
            counts[e.dir] += 1;
        }
        counts
    }
}

/// Every completion of the one-non-dominant-edge-per-face rule with `seed`
/// non-dominant, found by propagation and branching, sorted.
pub fn dominant_pattern(n: usize, seed: Edge) -> Result<Vec<DominantPattern>> {
    let cube = Hypercube::new(n)?;
    if n < 3 {
        return Err(Error::DimensionOutOfRange { n, min: 3, max: crate::cube::MAX_DIM });
    }
    if !cube.contains_edge(seed) {
        return Err(Error::IndexOutOfRange {
            what: "seed edge",
            index: seed.base as usize,
            limit: cube.vertex_count(),
        });
    }
    let faces: Vec<[usize; 4]> = cube.two_faces()?.iter().map(|f| f.edges().map(|e| cube.edge_index(e))).collect();
    let mut faces_of: Vec<Vec<usize>> = vec![Vec::new(); cube.edge_count()];
    for (fi, f) in faces.iter().enumerate() {
        for &e in f {
            faces_of[e].push(fi);
        }
    }
    let solver = PatternSolver { faces, faces_of };
    let mut state = vec![None; cube.edge_count()];
    let mut out = Vec::new();
    if solver.set(&mut state, cube.edge_index(seed), true) {
        solver.search(&state, &mut out);
    }
    if out.is_empty() {
        return Err(Error::NoCompletion(seed));
    }
    let mut patterns: Vec<DominantPattern> = out
        .into_iter()
        .map(|marks| DominantPattern {
            n,
            nondominant: marks.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| cube.edge_at(i)).collect(),
        })
        .collect();
    patterns.sort();
    Ok(patterns)
}

struct PatternSolver {
    faces: Vec<[usize; 4]>,
    faces_of: Vec<Vec<usize>>,
}

impl PatternSolver {
    /// Assign and propagate. `false` on contradiction.
    fn set(&self, state: &mut [Option<bool>], edge: usize, value: bool) -> bool {
        let mut queue = VecDeque::from([(edge, value)]);
        while let Some((e, v)) = queue.pop_front() {
            match state[e] {
                Some(cur) if cur != v => return false,
                Some(_) => continue,
                None => state[e] = Some(v),
            }
            for &fi in &self.faces_of[e] {
                let face = self.faces[fi];
                let nd = face.iter().filter(|&&x| state[x] == Some(true)).count();
                let open: Vec<usize> = face.iter().copied().filter(|&x| state[x].is_none()).collect();
                match (nd, open.len()) {
                    (k, _) if k > 1 => return false,
                    (0, 0) => return false,
                    (1, _) => queue.extend(open.into_iter().map(|x| (x, false))),
                    (0, 1) => queue.push_back((open[0], true)),
                    _ => {}
                }
            }
        }
        true
    }

    fn search(&self, state: &[Option<bool>], out: &mut Vec<Vec<bool>>) {
        let Some(next) = state.iter().position(|s| s.is_none()) else {
            out.push(state.iter().map(|s| s.expect("complete")).collect());
            return;
        };
        for value in [true, false] {
            let mut trial = state.to_vec();
            if self.set(&mut trial, next, value) {
                self.search(&trial, out);
            }
        }
    }
}

/// The default seed: the direction-`(n-1)` edge at vertex 1.
pub fn default_seed(n: usize) -> Edge {
    Edge { base: 1, dir: n - 1 }
}

/// One color per direction for dominant edges (in direction order), then a
/// distinct color per non-dominant edge (in edge order).
pub fn generalized_bdf(pattern: &DominantPattern) -> Result<EdgeColoring> {
    pattern.validate()?;
    let cube = Hypercube::new(pattern.n)?;
    let mut raw: Vec<ColorId> = cube.edges().iter().map(|e| e.dir as ColorId).collect();
    for (k, &e) in pattern.nondominant.iter().enumerate() {
        raw[cube.edge_index(e)] = (pattern.n + k) as ColorId;
    }
    EdgeColoring::from_raw(pattern.n, &raw)
}

/// [`generalized_bdf`] on the first completion from [`default_seed`].
pub fn generalized_bdf_default(n: usize) -> Result<EdgeColoring> {
    let patterns = dominant_pattern(n, default_seed(n))?;
    generalized_bdf(&patterns[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    Fig1,
    Fig2,
    Bdf4,
}

impl Fixture {
    pub const ALL: [Fixture; 3] = [Fixture::Fig1, Fixture::Fig2, Fixture::Bdf4];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Fig1 => "fig1",
            Fixture::Fig2 => "fig2",
            Fixture::Bdf4 => "bdf4",
        }
    }
}

impl std::str::FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct NamedColoring {
    pub name: String,
    pub coloring: EdgeColoring,
    /// Display name of each (normalized) color id.
    pub color_names: Vec<String>,
}

type NamedClass<'a> = (&'a str, &'a [(Vertex, Vertex)]);

const FIG1: [NamedClass<'static>; 7] = [
    ("red", &[(0, 4), (1, 5), (3, 7), (2, 6)]),
    ("blue", &[(0, 2), (1, 3)]),
    ("violet", &[(4, 6), (5, 7)]),
    ("green", &[(0, 1)]),
    ("purple", &[(4, 5)]),
    ("brown", &[(6, 7)]),
    ("orange", &[(2, 3)]),
];

const FIG2: [NamedClass<'static>; 6] = [
    ("orange", &[(0, 4), (3, 7), (2, 6)]),
    ("red", &[(0, 1), (4, 5), (2, 3)]),
    ("violet", &[(4, 6), (5, 7), (1, 3)]),
    ("purple", &[(1, 5)]),
    ("green", &[(0, 2)]),
    ("blue", &[(6, 7)]),
];

/// The reference 4-qubit basis, one row per vertex, factors left to right.
/// `^k` is the hat of `u_k`.
const BDF4_ROWS: [&str; 16] = [
    "4 3 2 1",
    "4 6 5 ^1",
    "4 3 ^2 1",
    "7 3 ^5 ^1",
    "8 ^3 5 1",
    "4 ^6 5 ^1",
    "4 ^3 ^5 9",
    "4 ^3 ^5 ^9",
    "^4 3 5 10",
    "^4 3 5 ^10",
    "^4 11 ^5 1",
    "^7 3 ^5 ^1",
    "^8 ^3 5 1",
    "^4 ^3 12 ^1",
    "^4 ^11 ^5 1",
    "^4 ^3 ^12 ^1",
];

/// Parsed [`BDF4_ROWS`]: per vertex, per tensor position, `(subscript, hatted)`.
pub fn bdf4_symbolic() -> Vec<Vec<(u32, bool)>> {
    BDF4_ROWS
        .iter()
        .map(|row| {
            row.split_whitespace()
                .map(|tok| match tok.strip_prefix('^') {
                    Some(k) => (k.parse().expect("subscript"), true),
                    None => (tok.parse().expect("subscript"), false),
                })
                .collect()
        })
        .collect()
}

fn from_named_classes(n: usize, classes: &[NamedClass<'_>]) -> Result<NamedColoring> {
    let cube = Hypercube::new(n)?;
    let mut raw: Vec<Option<ColorId>> = vec![None; cube.edge_count()];
    for (k, (_, edges)) in classes.iter().enumerate() {
        for &(a, b) in edges.iter() {
            let e = Edge::between(a, b).ok_or_else(|| Error::Document(format!("{a}-{b} is not an edge")))?;
            raw[cube.edge_index(e)] = Some(k as ColorId);
        }
    }
    let raw: Vec<ColorId> = raw
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::Document(format!("edge {} uncolored", cube.edge_at(i)))))
        .collect::<Result<_>>()?;
    let (coloring, origin) = EdgeColoring::from_raw_with_origin(n, &raw)?;
    let color_names = origin.iter().map(|&k| classes[k as usize].0.to_string()).collect();
    Ok(NamedColoring { name: String::new(), coloring, color_names })
}

fn bdf4() -> Result<NamedColoring> {
    let n = 4;
    let cube = Hypercube::new(n)?;
    let rows = bdf4_symbolic();
    let tuples: Vec<Vec<ColorId>> =
        rows.iter().map(|row| (0..n).map(|d| row[cube.position_of_dir(d)].0).collect()).collect();
    let coloring = EdgeColoring::from_vertex_tuples(n, &tuples)?;
    // recover subscripts in normalized color order
    let mut names = vec![String::new(); coloring.color_count()];
    for (v, t) in tuples.iter().enumerate() {
        for (d, &sub) in t.iter().enumerate() {
            names[coloring.color_at(v as Vertex, d) as usize] = format!("u{sub}");
        }
    }
    Ok(NamedColoring { name: String::new(), coloring, color_names: names })
}

pub fn fixture(which: Fixture) -> NamedColoring {
    let mut named = match which {
        Fixture::Fig1 => from_named_classes(3, &FIG1),
        Fixture::Fig2 => from_named_classes(3, &FIG2),
        Fixture::Bdf4 => bdf4(),
    }
    .expect("fixture data is well formed");
    named.name = which.name().to_string();
    named
}

pub fn fixture_by_name(name: &str) -> Result<NamedColoring> {
    Ok(fixture(name.parse()?))
}

/// A random output of the recursive maximum-color construction: each level
/// splits along a random direction.
pub fn random_max_family<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EdgeColoring> {
    Hypercube::new(n)?;
    if n == 1 {
        return minimal_coloring(1);
    }
    let c0 = random_max_family(n - 1, rng)?;
    let c1 = random_max_family(n - 1, rng)?;
    construct_max_from(&c0, &c1, rng.random_range(0..n))
}

/// Random walk over admissible colorings: propose splitting a class at
/// random (kept only if still admissible) or merging two classes.
pub fn random_admissible<R: Rng + ?Sized>(n: usize, steps: usize, rng: &mut R) -> Result<EdgeColoring> {
    let mut c = minimal_coloring(n)?;
    for _ in 0..steps {
        let k = c.color_count();
        if k >= 2 && rng.random_bool(0.2) {
            let a = rng.random_range(0..k) as ColorId;
            let b = rng.random_range(0..k) as ColorId;
            let raw: Vec<ColorId> = c.colors().iter().map(|&x| if x == b { a } else { x }).collect();
            c = EdgeColoring::from_raw(n, &raw)?;
            continue;
        }
        let color = rng.random_range(0..k) as ColorId;
        let fresh = k as ColorId;
        let raw: Vec<ColorId> =
            c.colors().iter().map(|&x| if x == color && rng.random_bool(0.5) { fresh } else { x }).collect();
        let candidate = EdgeColoring::from_raw(n, &raw)?;
        if candidate.is_admissible() {
            c = candidate;
        }
    }
    Ok(c)
}
