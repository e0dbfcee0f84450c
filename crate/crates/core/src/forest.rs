//! Acyclic edge sets carrying every color of an admissible coloring.

use std::collections::BTreeSet;

use crate::coloring::{ColorId, EdgeColoring};
use crate::cube::{Edge, Hypercube, Subcube};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorForest {
    pub edges: Vec<Edge>,
}

impl ColorForest {
    pub fn is_acyclic(&self, cube: Hypercube) -> bool {
        let mut parent: Vec<u32> = cube.vertices().collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = e.endpoints();
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
        true
    }

    pub fn colors(&self, c: &EdgeColoring) -> BTreeSet<ColorId> {
        self.edges.iter().map(|&e| c.color(e)).collect()
    }

    /// Every color of `c` appears on exactly one forest edge.
    pub fn has_each_color_once(&self, c: &EdgeColoring) -> bool {
        self.edges.len() == c.color_count() && self.colors(c).len() == c.color_count()
    }

    pub fn is_spanning_tree(&self, cube: Hypercube) -> bool {
        self.edges.len() + 1 == cube.vertex_count() && self.is_acyclic(cube)
    }
}

/// Build a forest containing every color by splitting along the highest
/// direction: forests `F` (bottom) and `G` (top) come from the halves, edges
/// of `G` whose colors already occur in `F` are dropped, and the smallest
/// vertical edge of each still missing color is added.
pub fn extract_forest(c: &EdgeColoring) -> Result<ColorForest> {
    c.require_admissible()?;
    let full = Subcube::new(c.n(), (0..c.n()).collect(), 0)?;
    let mut edges = forest_on(c, &full);
    let cube = c.cube();
    edges.sort_by_key(|&e| cube.edge_index(e));
    Ok(ColorForest { edges })
}

fn forest_on(c: &EdgeColoring, sub: &Subcube) -> Vec<Edge> {
    if sub.dim() == 1 {
        return vec![Edge { base: sub.anchor, dir: sub.free[0] }];
    }
    let top_dir = *sub.free.last().expect("nonempty");
    let free: Vec<usize> = sub.free[..sub.free.len() - 1].to_vec();
    let bottom = Subcube { n: sub.n, free: free.clone(), anchor: sub.anchor };
    let top = Subcube { n: sub.n, free, anchor: sub.anchor | (1 << top_dir) };

    let mut edges = forest_on(c, &bottom);
    let mut covered: BTreeSet<ColorId> = edges.iter().map(|&e| c.color(e)).collect();
    let below = covered.clone();
    for e in forest_on(c, &top) {
        if !below.contains(&c.color(e)) {
            covered.insert(c.color(e));
            edges.push(e);
        }
    }
    for base in bottom.vertices() {
        let v = Edge { base, dir: top_dir };
        if covered.insert(c.color(v)) {
            edges.push(v);
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixture, minimal_coloring, Fixture};

    #[test]
    fn fig1_gives_spanning_tree() {
        let c = fixture(Fixture::Fig1).coloring;
        let f = extract_forest(&c).unwrap();
        assert_eq!(f.edges.len(), 7);
        assert!(f.is_spanning_tree(c.cube()));
        assert!(f.has_each_color_once(&c));
    }

    #[test]
    fn minimal_gives_single_edge() {
        for n in 1..=5 {
            let c = minimal_coloring(n).unwrap();
            let f = extract_forest(&c).unwrap();
            assert_eq!(f.edges.len(), 1);
        }
    }

    #[test]
    fn fig2_forest_covers_all_colors() {
        let c = fixture(Fixture::Fig2).coloring;
        let f = extract_forest(&c).unwrap();
        assert!(f.edges.len() >= 6);
        assert!(f.is_acyclic(c.cube()));
        assert_eq!(f.colors(&c).len(), 6);
    }

    #[test]
    fn cycle_detection() {
        let q2 = Hypercube::new(2).unwrap();
        let square = ColorForest { edges: q2.edges() };
        assert!(!square.is_acyclic(q2));
        let path = ColorForest { edges: q2.edges()[..3].to_vec() };
        assert!(path.is_spanning_tree(q2));
    }
}
