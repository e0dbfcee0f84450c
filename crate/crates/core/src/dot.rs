//! GraphViz export of colored cubes.

use std::fmt::Write as _;

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};

pub const DOT_MAX_DIM: usize = 6;

/// Color names GraphViz understands and that may be used verbatim.
const NAMED: [&str; 12] =
    ["red", "blue", "green", "orange", "purple", "violet", "brown", "black", "cyan", "magenta", "gold", "gray"];

#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Display name per color id; GraphViz color names are used as the pen color.
    pub color_names: Option<Vec<String>>,
    /// Pin vertices to a projection of the cube (use with `neato -n`).
    pub positions: bool,
    pub title: Option<String>,
}

/// Evenly spaced hues as `#rrggbb`.
fn palette(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            let h = i as f64 / k.max(1) as f64 * 6.0;
            let x = 1.0 - (h % 2.0 - 1.0).abs();
            let (r, g, b) = match h as usize {
                0 => (1.0, x, 0.0),
                1 => (x, 1.0, 0.0),
                2 => (0.0, 1.0, x),
                3 => (0.0, x, 1.0),
                4 => (x, 0.0, 1.0),
                _ => (1.0, 0.0, x),
            };
            let v = 0.85;
            format!("#{:02x}{:02x}{:02x}", (r * v * 255.0) as u8, (g * v * 255.0) as u8, (b * v * 255.0) as u8)
        })
        .collect()
}

/// DOT text with vertices `0..2^n` and one pen color per color id.
pub fn export_dot(c: &EdgeColoring, opts: &DotOptions) -> Result<String> {
    let n = c.n();
    if n > DOT_MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: DOT_MAX_DIM });
    }
    let k = c.color_count();
    let names: Vec<String> = match &opts.color_names {
        Some(ns) if ns.len() >= k => ns[..k].to_vec(),
        _ => (0..k).map(|i| format!("c{i}")).collect(),
    };
    let fallback = palette(k);
    let mut taken: Vec<&str> = Vec::new();
    let pens: Vec<String> = names
        .iter()
        .zip(&fallback)
        .map(|(name, hex)| {
            let lower = name.to_ascii_lowercase();
            match NAMED.iter().find(|&&x| x == lower) {
                Some(&x) if !taken.contains(&x) => {
                    taken.push(x);
                    x.to_string()
                }
                _ => hex.clone(),
            }
        })
        .collect();

    let mut out = String::new();
    let title = opts.title.clone().unwrap_or_else(|| format!("Q{n}"));
    writeln!(out, "graph \"{title}\" {{").unwrap();
    writeln!(out, "  label=\"{title}: {k} colors\";").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    writeln!(out, "  edge [penwidth=2];").unwrap();
    let cube = c.cube();
    for v in cube.vertices() {
        if opts.positions {
            let (mut x, mut y) = (0.0f64, 0.0f64);
            for d in 0..n {
                if v >> d & 1 == 1 {
                    let angle = std::f64::consts::PI * (d as f64 + 0.5) / n as f64;
                    x += 100.0 * angle.cos();
                    y += 100.0 * angle.sin() * (1.0 + d as f64 / n as f64);
                }
            }
            writeln!(out, "  {v} [pos=\"{x:.1},{y:.1}!\"];").unwrap();
        } else {
            writeln!(out, "  {v};").unwrap();
        }
    }
    for e in cube.edges() {
        let (a, b) = e.endpoints();
        let id = c.color(e) as usize;
        writeln!(out, "  {a} -- {b} [color=\"{}\", tooltip=\"{}\"];", pens[id], names[id]).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{construct_max, fixture, Fixture};
    use std::collections::BTreeSet;

    fn styles(dot: &str) -> BTreeSet<String> {
        dot.lines()
            .filter(|l| l.contains(" -- "))
            .map(|l| l.split("color=\"").nth(1).unwrap().split('"').next().unwrap().to_string())
            .collect()
    }

    #[test]
    fn fig1_red_edges() {
        let f = fixture(Fixture::Fig1);
        let dot =
            export_dot(&f.coloring, &DotOptions { color_names: Some(f.color_names), ..Default::default() }).unwrap();
        let red: BTreeSet<&str> =
            dot.lines().filter(|l| l.contains("color=\"red\"")).map(|l| l.trim().split(" [").next().unwrap()).collect();
        assert_eq!(red, ["0 -- 4", "1 -- 5", "2 -- 6", "3 -- 7"].into_iter().collect());
    }

    #[test]
    fn distinct_styles() {
        let f2 = fixture(Fixture::Fig2);
        assert_eq!(styles(&export_dot(&f2.coloring, &DotOptions::default()).unwrap()).len(), 6);
        let m5 = construct_max(5).unwrap();
        let dot = export_dot(&m5, &DotOptions { positions: true, ..Default::default() }).unwrap();
        assert_eq!(styles(&dot).len(), 31);
        assert_eq!(dot, export_dot(&m5, &DotOptions { positions: true, ..Default::default() }).unwrap());
        assert!(export_dot(&construct_max(7).unwrap(), &DotOptions::default()).is_err());
    }
}
