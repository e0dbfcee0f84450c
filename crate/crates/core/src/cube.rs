//! Combinatorics of the hypercube `Q_n`.
//!
//! Vertices are bit masks `0..2^n`; direction `i` flips bit `2^i`. The
//! leftmost tensor factor of a basis state corresponds to the highest
//! direction, so vertex `0b010` of `Q_3` reads as the bit string `010`
//! left to right.
//!
//! Edges are stored in canonical form (the `base` endpoint has a zero in
//! bit `dir`) and enumerated direction-major, base-minor. The same order
//! defines the dense edge index used by [`crate::coloring::EdgeColoring`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

pub const MAX_DIM: usize = 10;

/// Largest dimension for which the automorphism group is enumerated.
pub const MAX_SYMMETRY_DIM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub base: Vertex,
    pub dir: usize,
}

impl Edge {
    /// Edge between two vertices at Hamming distance one.
    pub fn between(a: Vertex, b: Vertex) -> Option<Edge> {
        let diff = a ^ b;
        if diff.count_ones() != 1 {
            return None;
        }
        Some(Edge { base: a.min(b), dir: diff.trailing_zeros() as usize })
    }

    pub fn top(&self) -> Vertex {
        self.base | (1 << self.dir)
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.base, self.top())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.base, self.top())
    }
}

/// A 2-dimensional subcube spanned by directions `dirs.0 < dirs.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoFace {
    pub base: Vertex,
    pub dirs: (usize, usize),
}

impl TwoFace {
    pub fn vertices(&self) -> [Vertex; 4] {
        let (i, j) = (1 << self.dirs.0, 1 << self.dirs.1);
        [self.base, self.base | i, self.base | j, self.base | i | j]
    }

    /// The two `dirs.0` edges followed by the two `dirs.1` edges.
    pub fn edges(&self) -> [Edge; 4] {
        let (i, j) = self.dirs;
        [
            Edge { base: self.base, dir: i },
            Edge { base: self.base | (1 << j), dir: i },
            Edge { base: self.base, dir: j },
            Edge { base: self.base | (1 << i), dir: j },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hypercube {
    n: usize,
}

impl Hypercube {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_DIM });
        }
        Ok(Hypercube { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn edge_count(&self) -> usize {
        self.n << (self.n - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..(1u32 << self.n)
    }

    /// All edges, direction-major and base-minor.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.edge_count()).map(|i| self.edge_at(i)).collect()
    }

    /// Dense index of a canonical edge.
    pub fn edge_index(&self, e: Edge) -> usize {
        let low = e.base & ((1 << e.dir) - 1);
        let high = e.base >> (e.dir + 1);
        (e.dir << (self.n - 1)) | ((high << e.dir) | low) as usize
    }

    pub fn edge_at(&self, index: usize) -> Edge {
        let dir = index >> (self.n - 1);
        let rest = (index & ((1 << (self.n - 1)) - 1)) as Vertex;
        let low = rest & ((1 << dir) - 1);
        let high = rest >> dir;
        Edge { base: (high << (dir + 1)) | low, dir }
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        e.dir < self.n && (e.base as usize) < self.vertex_count() && e.base & (1 << e.dir) == 0
    }

    pub fn incident_edge(&self, vertex: Vertex, dir: usize) -> Result<Edge> {
        if vertex as usize >= self.vertex_count() {
            return Err(Error::IndexOutOfRange { what: "vertex", index: vertex as usize, limit: self.vertex_count() });
        }
        if dir >= self.n {
            return Err(Error::IndexOutOfRange { what: "direction", index: dir, limit: self.n });
        }
        Ok(Edge { base: vertex & !(1 << dir), dir })
    }

    /// Index of the edge through `vertex` in direction `dir`, unchecked.
    #[inline]
    pub(crate) fn incident_index(&self, vertex: Vertex, dir: usize) -> usize {
        self.edge_index(Edge { base: vertex & !(1 << dir), dir })
    }

    pub fn two_faces(&self) -> Result<Vec<TwoFace>> {
        if self.n < 2 {
            return Err(Error::DimensionOutOfRange { n: self.n, min: 2, max: MAX_DIM });
        }
        let mut faces = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let mask = (1 << i) | (1 << j);
                faces.extend(self.vertices().filter(|v| v & mask == 0).map(|base| TwoFace { base, dirs: (i, j) }));
            }
        }
        Ok(faces)
    }

    /// The two codimension-one subcubes separated by direction `dir`:
    /// bottom (bit clear) and top (bit set).
    pub fn split(&self, dir: usize) -> Result<(Subcube, Subcube)> {
        if self.n < 2 {
            return Err(Error::DimensionOutOfRange { n: self.n, min: 2, max: MAX_DIM });
        }
        if dir >= self.n {
            return Err(Error::IndexOutOfRange { what: "direction", index: dir, limit: self.n });
        }
        let free: Vec<usize> = (0..self.n).filter(|&d| d != dir).collect();
        Ok((Subcube { n: self.n, free: free.clone(), anchor: 0 }, Subcube { n: self.n, free, anchor: 1 << dir }))
    }

    /// Tensor position (0 = leftmost factor) carrying direction `dir`.
    pub fn position_of_dir(&self, dir: usize) -> usize {
        self.n - 1 - dir
    }

    pub fn dir_of_position(&self, position: usize) -> usize {
        self.n - 1 - position
    }

    /// Every automorphism, ordered by permutation (lexicographic) then flips.
    pub fn automorphisms(&self) -> Result<Vec<CubeAutomorphism>> {
        if self.n > MAX_SYMMETRY_DIM {
            return Err(Error::SymmetryUnsupported(self.n));
        }
        let mut out = Vec::with_capacity(factorial(self.n) << self.n);
        for perm in permutations(self.n) {
            for flips in 0..(1u32 << self.n) {
                out.push(CubeAutomorphism { perm: perm.clone(), flips });
            }
        }
        Ok(out)
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// A subcube of `Q_n`: the directions in `free` vary, all other bits are
/// pinned to the bits of `anchor`.
///
/// Vertex `w` of the subcube (as a `Q_m`, `m = free.len()`) maps to the
/// vertex of `Q_n` whose bit `free[k]` is bit `k` of `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcube {
    pub n: usize,
    pub free: Vec<usize>,
    pub anchor: Vertex,
}

impl Subcube {
    pub fn new(n: usize, mut free: Vec<usize>, anchor: Vertex) -> Result<Self> {
        free.sort_unstable();
        free.dedup();
        if free.is_empty() {
            return Err(Error::InvalidSubcube("no free directions".into()));
        }
        if free.iter().any(|&d| d >= n) {
            return Err(Error::InvalidSubcube(format!("free direction out of range for n = {n}")));
        }
        if (anchor as usize) >= (1 << n) {
            return Err(Error::InvalidSubcube(format!("anchor {anchor} out of range")));
        }
        let free_mask: Vertex = free.iter().map(|&d| 1 << d).sum();
        Ok(Subcube { n, free, anchor: anchor & !free_mask })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn map_vertex(&self, w: Vertex) -> Vertex {
        let mut v = self.anchor;
        for (k, &d) in self.free.iter().enumerate() {
            if w >> k & 1 == 1 {
                v |= 1 << d;
            }
        }
        v
    }

    pub fn map_edge(&self, e: Edge) -> Edge {
        Edge { base: self.map_vertex(e.base), dir: self.free[e.dir] }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (0..(1u32 << self.dim())).map(|w| self.map_vertex(w)).collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let free_mask: Vertex = self.free.iter().map(|&d| 1 << d).sum();
        v & !free_mask == self.anchor
    }
}

/// Symmetry of `Q_n`: bit `i` of a vertex moves to bit `perm[i]`, then the
/// bits in `flips` are complemented.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeAutomorphism {
    pub perm: Vec<usize>,
    pub flips: Vertex,
}

impl CubeAutomorphism {
    pub fn identity(n: usize) -> Self {
        CubeAutomorphism { perm: (0..n).collect(), flips: 0 }
    }

    pub fn new(perm: Vec<usize>, flips: Vertex) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidSubcube(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if (flips as usize) >= (1 << n) {
            return Err(Error::IndexOutOfRange { what: "flip mask", index: flips as usize, limit: 1 << n });
        }
        Ok(CubeAutomorphism { perm, flips })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply_vertex(&self, v: Vertex) -> Vertex {
        let mut out = 0;
        for (i, &p) in self.perm.iter().enumerate() {
            out |= (v >> i & 1) << p;
        }
        out ^ self.flips
    }

    pub fn apply_edge(&self, e: Edge) -> Result<Edge> {
        if e.dir >= self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: e.dir + 1 });
        }
        Ok(self.apply_edge_unchecked(e))
    }

    pub(crate) fn apply_edge_unchecked(&self, e: Edge) -> Edge {
        let dir = self.perm[e.dir];
        Edge { base: self.apply_vertex(e.base) & !(1 << dir), dir }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CubeAutomorphism) -> CubeAutomorphism {
        let perm: Vec<usize> = other.perm.iter().map(|&p| self.perm[p]).collect();
        let flips = self.apply_vertex(other.flips) ^ self.apply_vertex(0) ^ self.flips;
        CubeAutomorphism { perm, flips }
    }

    pub fn inverse(&self) -> CubeAutomorphism {
        let n = self.dim();
        let mut perm = vec![0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        let unflip = CubeAutomorphism { perm: perm.clone(), flips: 0 };
        CubeAutomorphism { perm, flips: unflip.apply_vertex(self.flips) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        factorial(n) / (factorial(k) * factorial(n - k))
    }

    #[test]
    fn edge_counts() {
        assert_eq!(Hypercube::new(2).unwrap().edges().len(), 4);
        assert_eq!(Hypercube::new(5).unwrap().edges().len(), 80);
        let q3 = Hypercube::new(3).unwrap();
        let edges = q3.edges();
        assert_eq!(edges.len(), 12);
        assert!(edges.contains(&Edge { base: 0, dir: 2 }));
        assert_eq!(Edge { base: 0, dir: 2 }.endpoints(), (0, 4));
        assert!(Hypercube::new(0).is_err());
        assert!(Hypercube::new(11).is_err());
    }

    #[test]
    fn counts_by_direct_enumeration() {
        for n in 1..=6 {
            let q = Hypercube::new(n).unwrap();
            let direct = q
                .vertices()
                .flat_map(|a| q.vertices().map(move |b| (a, b)))
                .filter(|(a, b)| a < b && (a ^ b).count_ones() == 1)
                .count();
            assert_eq!(direct, n << (n - 1));
            assert_eq!(q.edges().len(), direct);
            if n >= 2 {
                assert_eq!(q.two_faces().unwrap().len(), binom(n, 2) << (n - 2));
            }
        }
    }

    #[test]
    fn edge_index_roundtrip() {
        for n in 1..=6 {
            let q = Hypercube::new(n).unwrap();
            for (i, e) in q.edges().into_iter().enumerate() {
                assert_eq!(q.edge_index(e), i);
                assert!(q.contains_edge(e));
                let (a, b) = e.endpoints();
                assert_eq!((a ^ b).count_ones(), 1);
            }
        }
    }

    #[test]
    fn incident_edges() {
        let q3 = Hypercube::new(3).unwrap();
        assert_eq!(q3.incident_edge(5, 0).unwrap().endpoints(), (4, 5));
        assert_eq!(q3.incident_edge(0, 2).unwrap().endpoints(), (0, 4));
        let q2 = Hypercube::new(2).unwrap();
        assert_eq!(q2.incident_edge(3, 1).unwrap().endpoints(), (1, 3));
        assert!(q2.incident_edge(4, 0).is_err());
        assert!(q2.incident_edge(0, 2).is_err());
    }

    #[test]
    fn faces() {
        assert_eq!(Hypercube::new(2).unwrap().two_faces().unwrap().len(), 1);
        assert_eq!(Hypercube::new(3).unwrap().two_faces().unwrap().len(), 6);
        assert_eq!(Hypercube::new(4).unwrap().two_faces().unwrap().len(), 24);
        assert!(Hypercube::new(1).unwrap().two_faces().is_err());
        for f in Hypercube::new(4).unwrap().two_faces().unwrap() {
            let vs = f.vertices();
            for e in f.edges() {
                let (a, b) = e.endpoints();
                assert!(vs.contains(&a) && vs.contains(&b));
            }
        }
    }

    #[test]
    fn split_partitions_vertices() {
        let q3 = Hypercube::new(3).unwrap();
        let (bottom, top) = q3.split(2).unwrap();
        assert_eq!(bottom.vertices(), vec![0, 1, 2, 3]);
        assert_eq!(top.vertices(), vec![4, 5, 6, 7]);
        let (bottom, top) = Hypercube::new(2).unwrap().split(0).unwrap();
        assert_eq!(bottom.vertices(), vec![0, 2]);
        assert_eq!(top.vertices(), vec![1, 3]);
        assert!(Hypercube::new(1).unwrap().split(0).is_err());
    }

    #[test]
    fn split_and_reglue_recovers_every_edge_once() {
        for n in 2..=6 {
            let q = Hypercube::new(n).unwrap();
            let sub = Hypercube::new(n - 1).unwrap();
            for dir in 0..n {
                let (bottom, top) = q.split(dir).unwrap();
                let mut seen = vec![0u32; q.edge_count()];
                for e in sub.edges() {
                    seen[q.edge_index(bottom.map_edge(e))] += 1;
                    seen[q.edge_index(top.map_edge(e))] += 1;
                }
                for base in q.vertices().filter(|v| v >> dir & 1 == 0) {
                    seen[q.edge_index(Edge { base, dir })] += 1;
                }
                assert!(seen.iter().all(|&c| c == 1), "n={n} dir={dir}");
            }
        }
    }

    #[test]
    fn automorphism_examples() {
        let id = CubeAutomorphism::identity(3);
        for e in Hypercube::new(3).unwrap().edges() {
            assert_eq!(id.apply_edge(e).unwrap(), e);
        }
        let swap = CubeAutomorphism::new(vec![1, 0], 0).unwrap();
        let e01 = Edge::between(0, 1).unwrap();
        assert_eq!(swap.apply_edge(e01).unwrap(), Edge::between(0, 2).unwrap());
        let flip = CubeAutomorphism::new(vec![0, 1], 0b01).unwrap();
        assert_eq!(flip.apply_edge(e01).unwrap(), e01);
        assert!(swap.apply_edge(Edge { base: 0, dir: 2 }).is_err());
    }

    #[test]
    fn group_action_laws() {
        for n in 1..=3 {
            let q = Hypercube::new(n).unwrap();
            let group = q.automorphisms().unwrap();
            assert_eq!(group.len(), factorial(n) << n);
            for g in &group {
                let mut image: Vec<usize> =
                    q.edges().into_iter().map(|e| q.edge_index(g.apply_edge(e).unwrap())).collect();
                image.sort_unstable();
                assert_eq!(image, (0..q.edge_count()).collect::<Vec<_>>());
                let inv = g.inverse();
                assert_eq!(g.compose(&inv), CubeAutomorphism::identity(n));
                for h in &group {
                    let gh = g.compose(h);
                    for v in q.vertices() {
                        assert_eq!(gh.apply_vertex(v), g.apply_vertex(h.apply_vertex(v)));
                    }
                }
            }
        }
        assert_eq!(Hypercube::new(4).unwrap().automorphisms().unwrap().len(), 384);
        assert_eq!(Hypercube::new(5).unwrap().automorphisms().unwrap().len(), 3840);
        assert!(Hypercube::new(6).unwrap().automorphisms().is_err());
    }

    #[test]
    fn orbit_sizes_sum_to_edge_count() {
        for n in 1..=3 {
            let q = Hypercube::new(n).unwrap();
            let group = q.automorphisms().unwrap();
            let mut remaining: Vec<Edge> = q.edges();
            let mut total = 0;
            while let Some(e) = remaining.first().copied() {
                let mut orbit: Vec<Edge> = group.iter().map(|g| g.apply_edge(e).unwrap()).collect();
                orbit.sort();
                orbit.dedup();
                total += orbit.len();
                remaining.retain(|x| !orbit.contains(x));
            }
            assert_eq!(total, q.edge_count());
        }
    }

    #[test]
    fn subcube_membership() {
        let s = Subcube::new(4, vec![2, 0], 0b1010).unwrap();
        assert_eq!(s.free, vec![0, 2]);
        assert_eq!(s.anchor, 0b1010);
        assert_eq!(s.vertices(), vec![0b1010, 0b1011, 0b1110, 0b1111]);
        assert!(s.vertices().iter().all(|&v| s.contains(v)));
        assert!(Subcube::new(3, vec![], 0).is_err());
        assert!(Subcube::new(3, vec![3], 0).is_err());
    }
}
