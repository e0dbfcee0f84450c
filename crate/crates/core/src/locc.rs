//! Local distinguishability: the coloring classifier, the first-measurement
//! test on product bases, and adaptive measurement protocols.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::cube::{Hypercube, Subcube, Vertex};
use crate::error::{Error, Result};
use crate::uob::{ColorAssignment, QubitRay, Tolerances, Uob};

/// True iff the coloring has `2^n - 1` colors. The recursive recognizer
/// must agree; a disagreement is an error.
pub fn is_locc_distinguishable(c: &EdgeColoring) -> Result<bool> {
    c.require_admissible()?;
    let by_count = c.color_count() + 1 == c.cube().vertex_count();
    let by_shape = c.is_max_family()?;
    if by_count != by_shape {
        return Err(Error::ClassifierDisagreement(format!(
            "{c}: color count says {by_count}, recursive recognizer says {by_shape}"
        )));
    }
    Ok(by_count)
}

/// Positions where every state's factor is `a` or `hat(a)`, with `a` the
/// first state's factor.
pub fn wh_first_choices(u: &Uob, tol: &Tolerances) -> Vec<(usize, QubitRay)> {
    let Some(first) = u.states.first() else { return Vec::new() };
    (0..u.n)
        .filter_map(|p| {
            let a = first.factors[p];
            let ok = u.states.iter().all(|s| {
                let f = &s.factors[p];
                f.approx_eq(&a, tol.ray_equality) || f.overlap(&a) < tol.ray_equality
            });
            ok.then_some((p, a))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolTree {
    Leaf {
        vertex: Vertex,
    },
    Measure {
        position: usize,
        /// Outcome 0 projects on this ray, outcome 1 on its hat.
        ray: QubitRay,
        outcomes: Box<[ProtocolTree; 2]>,
    },
}

impl ProtocolTree {
    pub fn depth(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 0,
            ProtocolTree::Measure { outcomes, .. } => 1 + outcomes.iter().map(Self::depth).max().unwrap_or(0),
        }
    }

    /// Leaf vertices, outcome 0 first.
    pub fn leaves(&self) -> Vec<Vertex> {
        match self {
            ProtocolTree::Leaf { vertex } => vec![*vertex],
            ProtocolTree::Measure { outcomes, .. } => outcomes.iter().flat_map(Self::leaves).collect(),
        }
    }

    /// Every path measures each position at most once and the leaves are
    /// exactly the `2^n` vertices.
    pub fn validate(&self, n: usize) -> Result<()> {
        fn walk(t: &ProtocolTree, n: usize, used: &mut Vec<bool>) -> Result<()> {
            if let ProtocolTree::Measure { position, outcomes, .. } = t {
                let p = *position;
                if p >= n {
                    return Err(Error::MalformedTree(format!("position {p} out of range for n = {n}")));
                }
                if used[p] {
                    return Err(Error::MalformedTree(format!("position {p} measured twice on one path")));
                }
                used[p] = true;
                for child in outcomes.iter() {
                    walk(child, n, used)?;
                }
                used[p] = false;
            }
            Ok(())
        }
        walk(self, n, &mut vec![false; n])?;
        let mut leaves = self.leaves();
        leaves.sort_unstable();
        let cube = Hypercube::new(n)?;
        if !leaves.iter().copied().eq(cube.vertices()) {
            return Err(Error::MalformedTree(format!("leaves {leaves:?} are not the vertices of Q{n}")));
        }
        Ok(())
    }
}

/// The adaptive protocol: at each subcube, measure the uniform direction
/// with the smallest position in the basis of its color.
pub fn extract_protocol(c: &EdgeColoring, a: &ColorAssignment) -> Result<ProtocolTree> {
    if !is_locc_distinguishable(c)? {
        return Err(Error::ProtocolRefused(format!("{} colors, no uniform recursive structure", c.color_count())));
    }
    let full = Subcube::new(c.n(), (0..c.n()).collect(), 0)?;
    adaptive(c, a, &full)
}

fn adaptive(c: &EdgeColoring, a: &ColorAssignment, sub: &Subcube) -> Result<ProtocolTree> {
    if sub.dim() == 0 {
        return Ok(ProtocolTree::Leaf { vertex: sub.anchor });
    }
    // `free` is ascending, so the highest direction has the smallest position.
    let uniform = sub.free.iter().rev().copied().find(|&d| {
        let k = c.color_at(sub.anchor, d);
        sub.vertices().iter().all(|&v| c.color_at(v, d) == k)
    });
    let Some(d) = uniform else {
        return Err(Error::ProtocolRefused(format!("no uniform direction in subcube {sub:?}")));
    };
    branch(c, a, sub, d, adaptive)
}

fn branch(
    c: &EdgeColoring,
    a: &ColorAssignment,
    sub: &Subcube,
    d: usize,
    next: impl Fn(&EdgeColoring, &ColorAssignment, &Subcube) -> Result<ProtocolTree>,
) -> Result<ProtocolTree> {
    let ray = *a.ray(c.color_at(sub.anchor, d))?;
    let free: Vec<usize> = sub.free.iter().copied().filter(|&x| x != d).collect();
    let low = Subcube { n: sub.n, free: free.clone(), anchor: sub.anchor & !(1 << d) };
    let high = Subcube { n: sub.n, free, anchor: sub.anchor | (1 << d) };
    Ok(ProtocolTree::Measure {
        position: c.cube().position_of_dir(d),
        ray,
        outcomes: Box::new([next(c, a, &low)?, next(c, a, &high)?]),
    })
}

/// A non-adaptive protocol measuring positions in the given order, each in
/// the basis of the color found at the current subcube's anchor.
pub fn fixed_order_protocol(c: &EdgeColoring, a: &ColorAssignment, order: &[usize]) -> Result<ProtocolTree> {
    let cube = c.cube();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(0..c.n()) {
        return Err(Error::MalformedTree(format!("order {order:?} is not a permutation of positions")));
    }
    let dirs: Vec<usize> = order.iter().map(|&p| cube.dir_of_position(p)).collect();
    fn go(c: &EdgeColoring, a: &ColorAssignment, sub: &Subcube, dirs: &[usize]) -> Result<ProtocolTree> {
        match dirs.split_first() {
            None => Ok(ProtocolTree::Leaf { vertex: sub.anchor }),
            Some((&d, rest)) => branch(c, a, sub, d, |c, a, s| go(c, a, s, rest)),
        }
    }
    go(c, a, &Subcube::new(c.n(), (0..c.n()).collect(), 0)?, &dirs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationStep {
    pub position: usize,
    pub outcome: u8,
    /// Probability of the outcome taken.
    pub probability: f64,
    /// Both outcome probabilities.
    pub distribution: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub secret: Vertex,
    pub steps: Vec<SimulationStep>,
    pub identified: Vertex,
    pub certain: bool,
}

/// Run the protocol on state `secret`, sampling Born outcomes from `rng`.
pub fn simulate<R: Rng + ?Sized>(
    u: &Uob,
    t: &ProtocolTree,
    secret: Vertex,
    tol: &Tolerances,
    rng: &mut R,
) -> Result<SimulationResult> {
    let Some(state) = u.states.get(secret as usize) else {
        return Err(Error::IndexOutOfRange { what: "secret", index: secret as usize, limit: u.states.len() });
    };
    let mut factors = state.factors.clone();
    let mut used = vec![false; u.n];
    let mut steps = Vec::new();
    let mut node = t;
    loop {
        match node {
            ProtocolTree::Leaf { vertex } => {
                let certain =
                    *vertex == secret && steps.iter().all(|s: &SimulationStep| s.probability >= 1.0 - tol.certainty);
                return Ok(SimulationResult { secret, steps, identified: *vertex, certain });
            }
            ProtocolTree::Measure { position, ray, outcomes } => {
                let p = *position;
                if p >= u.n || used[p] {
                    return Err(Error::MalformedTree(format!("position {p} measured twice or out of range")));
                }
                used[p] = true;
                let f = factors[p];
                let p0 = ray.inner(&f).norm_sqr();
                let p1 = ray.hat().inner(&f).norm_sqr();
                let outcome = u8::from(rng.random::<f64>() * (p0 + p1) >= p0);
                let (prob, post) = if outcome == 0 { (p0, *ray) } else { (p1, ray.hat()) };
                factors[p] = post;
                steps.push(SimulationStep { position: p, outcome, probability: prob, distribution: [p0, p1] });
                node = &outcomes[outcome as usize];
            }
        }
    }
}

/// Simulate every secret, each with its own stream of a generator seeded by
/// `seed`. Output is identical for any worker count.
pub fn simulate_all(
    u: &Uob,
    t: &ProtocolTree,
    tol: &Tolerances,
    seed: u64,
    workers: usize,
) -> Result<Vec<SimulationResult>> {
    let run = |secret: Vertex| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(secret));
        simulate(u, t, secret, tol, &mut rng)
    };
    let secrets: Vec<Vertex> = (0..u.states.len() as Vertex).collect();
    if workers <= 1 {
        return secrets.into_iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ResourceGuard(format!("thread pool: {e}")))?;
    pool.install(|| secrets.into_par_iter().map(run).collect())
}

/// Simulate one secret deterministically from `seed`, matching the
/// corresponding entry of [`simulate_all`].
pub fn simulate_seeded(
    u: &Uob,
    t: &ProtocolTree,
    secret: Vertex,
    tol: &Tolerances,
    seed: u64,
) -> Result<SimulationResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(secret));
    simulate(u, t, secret, tol, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{construct_max, fixture, Fixture};
    use crate::uob::{sample_assignment, synthesize};

    fn fig1_setup() -> (EdgeColoring, ColorAssignment, Uob) {
        let c = fixture(Fixture::Fig1).coloring;
        let a = sample_assignment(&c, 0.1, 7).unwrap();
        let u = synthesize(&c, &a).unwrap();
        (c, a, u)
    }

    #[test]
    fn classifier_on_fixtures() {
        assert!(is_locc_distinguishable(&fixture(Fixture::Fig1).coloring).unwrap());
        assert!(!is_locc_distinguishable(&fixture(Fixture::Fig2).coloring).unwrap());
        assert!(!is_locc_distinguishable(&fixture(Fixture::Bdf4).coloring).unwrap());
    }

    #[test]
    fn first_choices() {
        let (c, a, u) = fig1_setup();
        let red = fixture(Fixture::Fig1).color_names.iter().position(|s| s == "red").unwrap();
        let choices = wh_first_choices(&u, &Tolerances::default());
        assert!(choices.iter().any(|(p, r)| *p == c.cube().position_of_dir(2) && r.approx_eq(&a.rays[red], 1e-12)));

        let f2 = fixture(Fixture::Fig2).coloring;
        let u2 = synthesize(&f2, &sample_assignment(&f2, 0.1, 7).unwrap()).unwrap();
        assert!(wh_first_choices(&u2, &Tolerances::default()).is_empty());

        let std3 = Uob::standard(3).unwrap();
        let ps: Vec<usize> = wh_first_choices(&std3, &Tolerances::default()).into_iter().map(|x| x.0).collect();
        assert_eq!(ps, vec![0, 1, 2]);
    }

    #[test]
    fn fig1_protocol_shape() {
        let (c, a, _) = fig1_setup();
        let names = fixture(Fixture::Fig1).color_names;
        let t = extract_protocol(&c, &a).unwrap();
        t.validate(3).unwrap();
        let ProtocolTree::Measure { position, outcomes, .. } = &t else { panic!("root is a leaf") };
        assert_eq!(*position, 0);
        let ray_name = |node: &ProtocolTree| match node {
            ProtocolTree::Measure { ray, .. } => {
                let k = a.rays.iter().position(|r| r == ray).unwrap();
                names[k].clone()
            }
            ProtocolTree::Leaf { .. } => panic!("leaf at depth 1"),
        };
        assert_eq!(ray_name(&outcomes[0]), "blue");
        assert_eq!(ray_name(&outcomes[1]), "violet");
    }

    #[test]
    fn fig2_protocol_refused() {
        let c = fixture(Fixture::Fig2).coloring;
        let a = sample_assignment(&c, 0.1, 1).unwrap();
        assert!(matches!(extract_protocol(&c, &a), Err(Error::ProtocolRefused(_))));
    }

    #[test]
    fn max5_tree() {
        let c = construct_max(5).unwrap();
        let a = sample_assignment(&c, 0.05, 2).unwrap();
        let t = extract_protocol(&c, &a).unwrap();
        assert_eq!(t.depth(), 5);
        assert_eq!(t.leaves().len(), 32);
        t.validate(5).unwrap();
    }

    #[test]
    fn fig1_all_secrets_certain() {
        let (c, a, u) = fig1_setup();
        let t = extract_protocol(&c, &a).unwrap();
        for r in simulate_all(&u, &t, &Tolerances::default(), 3, 1).unwrap() {
            assert!(r.certain, "secret {}", r.secret);
            assert_eq!(r.identified, r.secret);
            for s in &r.steps {
                assert!((s.probability - 1.0).abs() < 1e-12);
                assert!((s.distribution[0] + s.distribution[1] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn misordered_protocol_is_uncertain() {
        let (c, a, u) = fig1_setup();
        let t = fixed_order_protocol(&c, &a, &[2, 1, 0]).unwrap();
        let results = simulate_all(&u, &t, &Tolerances::default(), 3, 1).unwrap();
        assert!(results.iter().any(|r| !r.certain));
        assert!(results.iter().flat_map(|r| &r.steps).any(|s| s.probability > 1e-6 && s.probability < 1.0 - 1e-6));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let (c, a, u) = fig1_setup();
        let t = fixed_order_protocol(&c, &a, &[2, 1, 0]).unwrap();
        let one = simulate_all(&u, &t, &Tolerances::default(), 11, 1).unwrap();
        let four = simulate_all(&u, &t, &Tolerances::default(), 11, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one[5], simulate_seeded(&u, &t, 5, &Tolerances::default(), 11).unwrap());
    }

    #[test]
    fn repeated_position_is_malformed() {
        let leaf = |v| ProtocolTree::Leaf { vertex: v };
        let inner =
            ProtocolTree::Measure { position: 0, ray: QubitRay::zero(), outcomes: Box::new([leaf(0), leaf(1)]) };
        let t = ProtocolTree::Measure { position: 0, ray: QubitRay::zero(), outcomes: Box::new([inner, leaf(1)]) };
        assert!(t.validate(1).is_err());
        let u = Uob::standard(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(simulate(&u, &t, 0, &Tolerances::default(), &mut rng), Err(Error::MalformedTree(_))));
    }
}
