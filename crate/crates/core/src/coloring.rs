//! Edge colorings of `Q_n` and the predicates on them.
//!
//! An [`EdgeColoring`] is always stored in restricted-growth form: colors
//! are renamed by first occurrence along the canonical edge order, so two
//! colorings compare equal exactly when they agree up to renaming of
//! colors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::cube::{CubeAutomorphism, Edge, Hypercube, Subcube, Vertex, MAX_SYMMETRY_DIM};
use crate::error::{Error, Result};

pub type ColorId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeColoring {
    cube: Hypercube,
    colors: Vec<ColorId>,
}

/// The color of each edge through one vertex, indexed by direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTuple {
    pub vertex: Vertex,
    pub tuple: Vec<ColorId>,
}

/// Rename colors by first occurrence. Returns the renamed word and, for
/// each new id, the original id it came from.
pub(crate) fn normalize(raw: &[ColorId]) -> (Vec<ColorId>, Vec<ColorId>) {
    let mut map: HashMap<ColorId, ColorId> = HashMap::new();
    let mut origin = Vec::new();
    let word = raw
        .iter()
        .map(|&c| {
            *map.entry(c).or_insert_with(|| {
                origin.push(c);
                origin.len() as ColorId - 1
            })
        })
        .collect();
    (word, origin)
}

impl EdgeColoring {
    /// Build from one color per edge in canonical edge order.
    pub fn from_raw(n: usize, raw: &[ColorId]) -> Result<Self> {
        Self::from_raw_with_origin(n, raw).map(|(c, _)| c)
    }

    /// Like [`EdgeColoring::from_raw`], also returning the input id behind
    /// each normalized color.
    pub fn from_raw_with_origin(n: usize, raw: &[ColorId]) -> Result<(Self, Vec<ColorId>)> {
        let cube = Hypercube::new(n)?;
        if raw.len() != cube.edge_count() {
            return Err(Error::DimensionMismatch { expected: cube.edge_count(), found: raw.len() });
        }
        let (colors, origin) = normalize(raw);
        Ok((EdgeColoring { cube, colors }, origin))
    }

    pub fn from_fn(n: usize, f: impl Fn(Edge) -> ColorId) -> Result<Self> {
        let cube = Hypercube::new(n)?;
        let raw: Vec<ColorId> = cube.edges().into_iter().map(f).collect();
        Self::from_raw(n, &raw)
    }

    /// Build from per-vertex color tuples. Both endpoints of every edge must
    /// agree on its color.
    pub fn from_vertex_tuples(n: usize, tuples: &[Vec<ColorId>]) -> Result<Self> {
        let cube = Hypercube::new(n)?;
        if tuples.len() != cube.vertex_count() {
            return Err(Error::DimensionMismatch { expected: cube.vertex_count(), found: tuples.len() });
        }
        if let Some(bad) = tuples.iter().find(|t| t.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let mut raw = Vec::with_capacity(cube.edge_count());
        for e in cube.edges() {
            let (a, b) = e.endpoints();
            let (ca, cb) = (tuples[a as usize][e.dir], tuples[b as usize][e.dir]);
            if ca != cb {
                return Err(Error::InconsistentTuples { edge: e, first: ca, second: cb });
            }
            raw.push(ca);
        }
        Self::from_raw(n, &raw)
    }

    pub(crate) fn from_normalized(cube: Hypercube, colors: Vec<ColorId>) -> Self {
        debug_assert_eq!(normalize(&colors).0, colors);
        EdgeColoring { cube, colors }
    }

    pub fn n(&self) -> usize {
        self.cube.dim()
    }

    pub fn cube(&self) -> Hypercube {
        self.cube
    }

    /// The color word in canonical edge order.
    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn color(&self, e: Edge) -> ColorId {
        self.colors[self.cube.edge_index(e)]
    }

    #[inline]
    pub fn color_at(&self, vertex: Vertex, dir: usize) -> ColorId {
        self.colors[self.cube.incident_index(vertex, dir)]
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn vertex_tuple(&self, vertex: Vertex) -> Result<VertexTuple> {
        self.cube.incident_edge(vertex, 0)?;
        Ok(VertexTuple { vertex, tuple: (0..self.n()).map(|d| self.color_at(vertex, d)).collect() })
    }

    /// The color sets `C(i)`, one per direction.
    pub fn direction_classes(&self) -> Vec<BTreeSet<ColorId>> {
        let half = self.cube.edge_count() / self.n();
        self.colors.chunks(half).map(|chunk| chunk.iter().copied().collect()).collect()
    }

    pub fn class_edges(&self, color: ColorId) -> Vec<Edge> {
        self.colors.iter().enumerate().filter(|(_, &c)| c == color).map(|(i, _)| self.cube.edge_at(i)).collect()
    }

    /// First vertex pair (in lexicographic order) with no witnessing
    /// direction, if any.
    pub fn first_violation(&self) -> Option<(Vertex, Vertex)> {
        let n = self.n();
        let table: Vec<ColorId> =
            self.cube.vertices().flat_map(|v| (0..n).map(move |d| (v, d))).map(|(v, d)| self.color_at(v, d)).collect();
        let nv = self.cube.vertex_count() as Vertex;
        for a in 0..nv {
            let ta = &table[a as usize * n..(a as usize + 1) * n];
            for b in (a + 1)..nv {
                let diff = a ^ b;
                let tb = &table[b as usize * n..(b as usize + 1) * n];
                let witnessed = (0..n).any(|d| diff >> d & 1 == 1 && ta[d] == tb[d]);
                if !witnessed {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every pair of distinct vertices has a direction in which they
    /// differ and whose incident edges at both vertices share a color.
    pub fn is_admissible(&self) -> bool {
        self.first_violation().is_none()
    }

    pub(crate) fn require_admissible(&self) -> Result<()> {
        match self.first_violation() {
            Some((a, b)) => Err(Error::NotAdmissible { a, b }),
            None => Ok(()),
        }
    }

    /// On every 2-face at least one of the two parallel edge pairs is
    /// monochromatic. Necessary for admissibility, checked separately.
    pub fn is_two_face_admissible(&self) -> bool {
        if self.n() < 2 {
            return true;
        }
        self.cube.two_faces().expect("n >= 2").iter().all(|f| {
            let [a, b, c, d] = f.edges();
            self.color(a) == self.color(b) || self.color(c) == self.color(d)
        })
    }

    /// Recolor so that no color is shared between two directions.
    pub fn separate_directions(&self) -> Result<EdgeColoring> {
        self.require_admissible()?;
        let half = (self.cube.edge_count() / self.n()) as ColorId;
        let stride = self.color_count() as ColorId;
        let raw: Vec<ColorId> =
            self.colors.iter().enumerate().map(|(i, &c)| (i as ColorId / half) * stride + c).collect();
        Ok(EdgeColoring { cube: self.cube, colors: normalize(&raw).0 })
    }

    /// `self ≺ other`: `self` arises from `other` by merging color classes.
    pub fn precedes(&self, other: &EdgeColoring) -> bool {
        if self.cube != other.cube {
            return false;
        }
        let mut map: Vec<Option<ColorId>> = vec![None; other.color_count()];
        for (&mine, &theirs) in self.colors.iter().zip(&other.colors) {
            match map[theirs as usize] {
                None => map[theirs as usize] = Some(mine),
                Some(m) if m != mine => return false,
                _ => {}
            }
        }
        true
    }

    /// Directions whose `2^{n-1}` edges all carry one color, ascending.
    pub fn uniform_directions(&self) -> Vec<usize> {
        let half = self.cube.edge_count() / self.n();
        self.colors
            .chunks(half)
            .enumerate()
            .filter(|(_, chunk)| chunk.iter().all(|&c| c == chunk[0]))
            .map(|(d, _)| d)
            .collect()
    }

    pub fn uniform_direction(&self) -> Option<usize> {
        self.uniform_directions().first().copied()
    }

    /// Whether the coloring is an output of the recursive maximum-color
    /// construction, up to the order in which directions are split.
    pub fn is_max_family(&self) -> Result<bool> {
        self.require_admissible()?;
        let full = Subcube::new(self.n(), (0..self.n()).collect(), 0)?;
        Ok(self.max_family_on(&full))
    }

    fn max_family_on(&self, sub: &Subcube) -> bool {
        let m = sub.dim();
        if m == 1 {
            return true;
        }
        let sub_cube = Hypercube::new(m).expect("m in range");
        let sub_edges = sub_cube.edges();
        let color_of = |e: Edge| self.color(sub.map_edge(e));
        let half = sub_edges.len() / m;
        for (k, dir_edges) in sub_edges.chunks(half).enumerate() {
            let c = color_of(dir_edges[0]);
            if dir_edges.iter().any(|&e| color_of(e) != c) {
                continue;
            }
            let elsewhere = sub_edges.iter().filter(|e| e.dir != k).any(|&e| color_of(e) == c);
            if elsewhere {
                continue;
            }
            let dir = sub.free[k];
            let free: Vec<usize> = sub.free.iter().copied().filter(|&d| d != dir).collect();
            let bottom = Subcube { n: sub.n, free: free.clone(), anchor: sub.anchor };
            let top = Subcube { n: sub.n, free, anchor: sub.anchor | (1 << dir) };
            let palette = |s: &Subcube| -> BTreeSet<ColorId> {
                Hypercube::new(m - 1)
                    .expect("m - 1 >= 1")
                    .edges()
                    .into_iter()
                    .map(|e| self.color(s.map_edge(e)))
                    .collect()
            };
            if palette(&bottom).is_disjoint(&palette(&top)) && self.max_family_on(&bottom) && self.max_family_on(&top) {
                return true;
            }
        }
        false
    }

    /// The coloring a subcube inherits, relabeled as a coloring of `Q_m`.
    pub fn restrict(&self, sub: &Subcube) -> Result<EdgeColoring> {
        if sub.n != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: sub.n });
        }
        EdgeColoring::from_fn(sub.dim(), |e| self.color(sub.map_edge(e)))
    }

    /// The coloring transported along a cube symmetry.
    pub fn apply_automorphism(&self, g: &CubeAutomorphism) -> Result<EdgeColoring> {
        if g.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: g.dim() });
        }
        let mut raw = vec![0; self.colors.len()];
        for (i, &c) in self.colors.iter().enumerate() {
            raw[self.cube.edge_index(g.apply_edge_unchecked(self.cube.edge_at(i)))] = c;
        }
        Ok(EdgeColoring { cube: self.cube, colors: normalize(&raw).0 })
    }

    /// Renaming-normal form, or with `use_symmetry` the lexicographically
    /// least normal form over the automorphism group (n <= 5).
    pub fn canonical_form(&self, use_symmetry: bool) -> Result<EdgeColoring> {
        if !use_symmetry {
            return Ok(self.clone());
        }
        let table = edge_permutations(self.n())?;
        let mut best = self.colors.clone();
        let mut raw = vec![0; self.colors.len()];
        for perm in table {
            for (i, &c) in self.colors.iter().enumerate() {
                raw[perm[i] as usize] = c;
            }
            let (image, _) = normalize(&raw);
            if image < best {
                best = image;
            }
        }
        Ok(EdgeColoring { cube: self.cube, colors: best })
    }

    /// Number of cube symmetries fixing this coloring up to renaming.
    pub fn stabilizer_order(&self) -> Result<usize> {
        let table = edge_permutations(self.n())?;
        let mut raw = vec![0; self.colors.len()];
        let mut count = 0;
        for perm in table {
            for (i, &c) in self.colors.iter().enumerate() {
                raw[perm[i] as usize] = c;
            }
            if normalize(&raw).0 == self.colors {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// Edge permutations induced by the full automorphism group, cached per n.
pub(crate) fn edge_permutations(n: usize) -> Result<&'static [Vec<u32>]> {
    static TABLES: [OnceLock<Vec<Vec<u32>>>; MAX_SYMMETRY_DIM + 1] = [const { OnceLock::new() }; MAX_SYMMETRY_DIM + 1];
    if n > MAX_SYMMETRY_DIM {
        return Err(Error::SymmetryUnsupported(n));
    }
    let cube = Hypercube::new(n)?;
    Ok(TABLES[n].get_or_init(|| {
        cube.automorphisms()
            .expect("n checked")
            .iter()
            .map(|g| cube.edges().into_iter().map(|e| cube.edge_index(g.apply_edge_unchecked(e)) as u32).collect())
            .collect()
    }))
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}[", self.n())?;
        for (i, c) in self.colors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixture, minimal_coloring, Fixture};

    fn q2(word: [ColorId; 4]) -> EdgeColoring {
        EdgeColoring::from_raw(2, &word).unwrap()
    }

    #[test]
    fn normalization_renames_by_first_occurrence() {
        let c = EdgeColoring::from_raw(2, &[7, 7, 3, 9]).unwrap();
        assert_eq!(c.colors(), &[0, 0, 1, 2]);
        assert_eq!(c, EdgeColoring::from_raw(2, &[1, 1, 5, 0]).unwrap());
        assert!(EdgeColoring::from_raw(2, &[0, 0, 0]).is_err());
    }

    #[test]
    fn admissibility_examples() {
        for n in 1..=6 {
            assert!(minimal_coloring(n).unwrap().is_admissible());
        }
        assert!(fixture(Fixture::Fig1).coloring.is_admissible());
        let distinct = q2([0, 1, 2, 3]);
        assert!(!distinct.is_admissible());
        assert!(!distinct.is_two_face_admissible());
        assert!(fixture(Fixture::Fig2).coloring.is_two_face_admissible());
    }

    #[test]
    fn q2_admissible_iff_some_direction_monochromatic() {
        // Direction 0 holds edge indices 0 and 1, direction 1 holds 2 and 3.
        for word in [[0, 0, 1, 2], [0, 1, 2, 2], [0, 0, 1, 1], [0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 1, 0]] {
            let c = q2(word);
            let mono = word[0] == word[1] || word[2] == word[3];
            assert_eq!(c.is_admissible(), mono, "{word:?}");
        }
    }

    #[test]
    fn counts_and_classes() {
        let fig1 = fixture(Fixture::Fig1).coloring;
        let fig2 = fixture(Fixture::Fig2).coloring;
        assert_eq!(fig1.color_count(), 7);
        assert_eq!(fig2.color_count(), 6);
        assert_eq!(minimal_coloring(4).unwrap().color_count(), 1);
        let classes = fig1.direction_classes();
        assert_eq!(classes.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![4, 2, 1]);
        assert!(classes[0].is_disjoint(&classes[1]) && classes[1].is_disjoint(&classes[2]));
    }

    #[test]
    fn vertex_tuple_matches_incident_edges() {
        let fig1 = fixture(Fixture::Fig1);
        let t = fig1.coloring.vertex_tuple(2).unwrap();
        let names: Vec<&str> = t.tuple.iter().map(|&c| fig1.color_names[c as usize].as_str()).collect();
        assert_eq!(names, vec!["orange", "blue", "red"]);
        assert!(fig1.coloring.vertex_tuple(8).is_err());
    }

    #[test]
    fn separating_directions() {
        assert_eq!(minimal_coloring(2).unwrap().separate_directions().unwrap().color_count(), 2);
        assert_eq!(minimal_coloring(3).unwrap().separate_directions().unwrap().color_count(), 3);
        let fig1 = fixture(Fixture::Fig1).coloring;
        assert_eq!(fig1.separate_directions().unwrap(), fig1);
        let fig2 = fixture(Fixture::Fig2).coloring;
        let sep = fig2.separate_directions().unwrap();
        assert!(sep.is_admissible());
        assert!(q2([0, 1, 2, 3]).separate_directions().is_err());
    }

    #[test]
    fn precedence() {
        let fig1 = fixture(Fixture::Fig1).coloring;
        let fig2 = fixture(Fixture::Fig2).coloring;
        let one = minimal_coloring(3).unwrap();
        assert!(one.precedes(&fig1) && one.precedes(&fig2));
        assert!(fig1.precedes(&fig1));
        assert!(!fig2.precedes(&fig1));
        assert!(!fig1.precedes(&one));
        assert!(!one.precedes(&minimal_coloring(2).unwrap()));
    }

    #[test]
    fn uniform_directions() {
        let fig1 = fixture(Fixture::Fig1);
        let d = fig1.coloring.uniform_direction().unwrap();
        assert_eq!(d, 2);
        let red = fig1.color_names.iter().position(|s| s == "red").unwrap() as ColorId;
        assert!(fig1.coloring.class_edges(red).iter().all(|e| e.dir == 2));
        assert_eq!(fixture(Fixture::Fig2).coloring.uniform_direction(), None);
        assert_eq!(minimal_coloring(3).unwrap().uniform_direction(), Some(0));
    }

    #[test]
    fn max_family_examples() {
        assert!(fixture(Fixture::Fig1).coloring.is_max_family().unwrap());
        assert!(!fixture(Fixture::Fig2).coloring.is_max_family().unwrap());
        assert!(minimal_coloring(1).unwrap().is_max_family().unwrap());
        assert!(!minimal_coloring(2).unwrap().is_max_family().unwrap());
        assert!(q2([0, 1, 2, 3]).is_max_family().is_err());
    }

    #[test]
    fn restriction_to_faces() {
        let fig1 = fixture(Fixture::Fig1);
        let (bottom, top) = fig1.coloring.cube().split(2).unwrap();
        let names = |c: &EdgeColoring, sub: &Subcube| -> BTreeSet<String> {
            Hypercube::new(sub.dim())
                .unwrap()
                .edges()
                .into_iter()
                .map(|e| fig1.color_names[c.color(sub.map_edge(e)) as usize].clone())
                .collect()
        };
        assert_eq!(fig1.coloring.restrict(&bottom).unwrap().color_count(), 3);
        assert_eq!(names(&fig1.coloring, &bottom), ["blue", "green", "orange"].map(String::from).into());
        assert_eq!(fig1.coloring.restrict(&top).unwrap().color_count(), 3);
        assert_eq!(names(&fig1.coloring, &top), ["brown", "purple", "violet"].map(String::from).into());
        let edge = Subcube::new(3, vec![1], 0b101).unwrap();
        assert_eq!(fig1.coloring.restrict(&edge).unwrap().color_count(), 1);
        assert!(fig1.coloring.restrict(&Subcube::new(4, vec![1], 0).unwrap()).is_err());
    }

    #[test]
    fn canonical_forms() {
        let fig2 = fixture(Fixture::Fig2).coloring;
        let canon = fig2.canonical_form(true).unwrap();
        assert_eq!(canon.canonical_form(true).unwrap(), canon);
        let mirror = CubeAutomorphism::new(vec![0, 1, 2], 0b001).unwrap();
        let image = fig2.apply_automorphism(&mirror).unwrap();
        assert_ne!(image, fig2);
        assert_eq!(image.canonical_form(true).unwrap(), canon);
        assert_eq!(fig2.canonical_form(false).unwrap(), fig2);
        assert!(minimal_coloring(6).unwrap().canonical_form(true).is_err());
    }

    #[test]
    fn stabilizer_of_minimal_is_whole_group() {
        assert_eq!(minimal_coloring(3).unwrap().stabilizer_order().unwrap(), 48);
        let fig1 = fixture(Fixture::Fig1).coloring;
        let group = fig1.cube().automorphisms().unwrap();
        let mut orbit: Vec<EdgeColoring> = group.iter().map(|g| fig1.apply_automorphism(g).unwrap()).collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit.len() * fig1.stabilizer_order().unwrap(), 48);
    }

    #[test]
    fn from_vertex_tuples_detects_inconsistency() {
        let ok = vec![vec![0, 1], vec![0, 2], vec![3, 1], vec![3, 2]];
        let c = EdgeColoring::from_vertex_tuples(2, &ok).unwrap();
        assert_eq!(c.color_count(), 4);
        let bad = vec![vec![0, 1], vec![5, 2], vec![3, 1], vec![3, 2]];
        assert!(matches!(EdgeColoring::from_vertex_tuples(2, &bad), Err(Error::InconsistentTuples { .. })));
    }
}
