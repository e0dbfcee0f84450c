//! Qubit rays, product states, and the passage between admissible colorings
//! and unentangled orthonormal bases.
//!
//! Tensor position `p` of an `n`-qubit state corresponds to cube direction
//! `n - 1 - p`, so the leftmost factor belongs to the highest vertex bit.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColorId, EdgeColoring};
use crate::cube::{Hypercube, Vertex};
use crate::error::{Error, Result};

/// Amplitudes below this magnitude count as zero when fixing the phase.
const PHASE_ZERO: f64 = 1e-14;

/// Draw budget for [`sample_assignment`].
pub const REJECTION_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ray_equality: f64,
    pub gram: f64,
    pub hat_pair: f64,
    pub certainty: f64,
    /// Rays closer than this but not within `ray_equality` make clustering ambiguous.
    pub ambiguity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { ray_equality: 1e-9, gram: 1e-10, hat_pair: 1e-8, certainty: 1e-9, ambiguity: 1e-6 }
    }
}

/// A unit vector in `C^2` with its global phase fixed: the first component
/// that is not zero is real and positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitRay {
    alpha: Complex64,
    beta: Complex64,
}

impl QubitRay {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotABasis(format!("zero or non-finite amplitudes ({alpha}, {beta})")));
        }
        let (alpha, beta) = (alpha / norm, beta / norm);
        let lead_is_alpha = alpha.norm() > PHASE_ZERO;
        let lead = if lead_is_alpha { alpha } else { beta };
        let phase = lead.conj() / lead.norm();
        let (mut alpha, mut beta) = (alpha * phase, beta * phase);
        if lead_is_alpha {
            alpha = Complex64::new(alpha.norm(), 0.0);
        } else {
            beta = Complex64::new(beta.norm(), 0.0);
        }
        Ok(QubitRay { alpha, beta })
    }

    /// Keep amplitudes bit for bit when they are already unit norm and
    /// phase fixed; otherwise normalize as [`QubitRay::new`] does.
    pub fn from_stored(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let unit = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() < 1e-12;
        let phased =
            if alpha.norm() > PHASE_ZERO { alpha.im == 0.0 && alpha.re > 0.0 } else { beta.im == 0.0 && beta.re > 0.0 };
        if unit && phased {
            Ok(QubitRay { alpha, beta })
        } else {
            Self::new(alpha, beta)
        }
    }

    pub fn from_real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    pub fn zero() -> Self {
        QubitRay { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        QubitRay { alpha: Complex64::new(0.0, 0.0), beta: Complex64::new(1.0, 0.0) }
    }

    /// Haar-random ray.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(r) = Self::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])) {
                return r;
            }
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QubitRay) -> Complex64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    pub fn overlap(&self, other: &QubitRay) -> f64 {
        self.inner(other).norm()
    }

    /// Sine of the Fubini–Study angle, computed as `|<hat self|other>|` so
    /// it stays accurate near zero.
    pub fn distance(&self, other: &QubitRay) -> f64 {
        (self.alpha * other.beta - self.beta * other.alpha).norm()
    }

    /// Fubini–Study angle in `[0, pi/2]`.
    pub fn fubini_study(&self, other: &QubitRay) -> f64 {
        self.distance(other).atan2(self.overlap(other))
    }

    pub fn approx_eq(&self, other: &QubitRay, tol: f64) -> bool {
        self.distance(other) < tol
    }

    pub fn hat(&self) -> QubitRay {
        hat(self)
    }

    pub fn norm_deviation(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs()
    }

    fn lex_key(&self) -> [f64; 4] {
        [self.alpha.re, self.alpha.im, self.beta.re, self.beta.im]
    }
}

/// The orthogonal ray: `(a, b) -> (-conj b, conj a)`, phase fixed.
pub fn hat(r: &QubitRay) -> QubitRay {
    let alpha = -r.beta.conj();
    let beta = r.alpha.conj();
    QubitRay::new(alpha, beta).expect("unit input")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    pub factors: Vec<QubitRay>,
}

impl ProductState {
    /// Inner product as the product of factor inner products.
    pub fn inner(&self, other: &ProductState) -> Complex64 {
        self.factors.iter().zip(&other.factors).map(|(a, b)| a.inner(b)).product()
    }

    /// The full `2^n` amplitude vector, position 0 most significant.
    pub fn to_vector(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for f in &self.factors {
            v = v.iter().flat_map(|&x| [x * f.alpha, x * f.beta]).collect();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Uob {
    pub n: usize,
    pub states: Vec<ProductState>,
}

impl Uob {
    pub fn standard(n: usize) -> Result<Uob> {
        synthesize(&EdgeColoring::from_fn(n, |_| 0)?, &ColorAssignment { rays: vec![QubitRay::zero()] })
    }

    fn check_shape(&self) -> Result<()> {
        let cube = Hypercube::new(self.n)?;
        if self.states.len() != cube.vertex_count() {
            return Err(Error::NotABasis(format!("{} states for n = {}", self.states.len(), self.n)));
        }
        if let Some(i) = self.states.iter().position(|s| s.factors.len() != self.n) {
            return Err(Error::NotABasis(format!("state {i} has {} factors", self.states[i].factors.len())));
        }
        Ok(())
    }
}

/// One ray per color id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub rays: Vec<QubitRay>,
}

impl ColorAssignment {
    pub fn ray(&self, color: ColorId) -> Result<&QubitRay> {
        self.rays.get(color as usize).ok_or(Error::MissingColor(color))
    }

    /// Smallest Fubini–Study gap between rays (or a ray and a hat) of
    /// distinct colors sharing a direction. `None` if no such pair exists.
    pub fn min_separation(&self, c: &EdgeColoring) -> Option<f64> {
        let mut best: Option<f64> = None;
        for class in c.direction_classes() {
            let ids: Vec<ColorId> = class.into_iter().collect();
            for (i, &x) in ids.iter().enumerate() {
                for &y in &ids[i + 1..] {
                    let (Some(a), Some(b)) = (self.rays.get(x as usize), self.rays.get(y as usize)) else {
                        continue;
                    };
                    let fs = a.fubini_study(b);
                    let gap = fs.min(std::f64::consts::FRAC_PI_2 - fs);
                    best = Some(best.map_or(gap, |g| g.min(gap)));
                }
            }
        }
        best
    }

    pub fn is_separated(&self, c: &EdgeColoring, min_separation: f64) -> bool {
        self.rays.len() >= c.color_count() && self.min_separation(c).is_none_or(|g| g >= min_separation)
    }
}

/// Per vertex, per position: the color and whether the hat is taken.
pub fn symbolic_basis(c: &EdgeColoring) -> Vec<Vec<(ColorId, bool)>> {
    let cube = c.cube();
    let n = c.n();
    cube.vertices()
        .map(|v| {
            (0..n)
                .map(|p| {
                    let d = cube.dir_of_position(p);
                    (c.color_at(v, d), v >> d & 1 == 1)
                })
                .collect()
        })
        .collect()
}

pub fn synthesize(c: &EdgeColoring, a: &ColorAssignment) -> Result<Uob> {
    c.require_admissible()?;
    if a.rays.len() < c.color_count() {
        return Err(Error::MissingColor(a.rays.len() as ColorId));
    }
    let states = symbolic_basis(c)
        .into_iter()
        .map(|row| {
            let factors = row
                .into_iter()
                .map(|(k, hatted)| {
                    let r = a.rays[k as usize];
                    if hatted {
                        r.hat()
                    } else {
                        r
                    }
                })
                .collect();
            ProductState { factors }
        })
        .collect();
    Ok(Uob { n: c.n(), states })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub a: usize,
    pub b: usize,
    /// Modulus of the full tensor inner product.
    pub overlap: f64,
    /// Position with the smallest factor overlap, if that overlap is below
    /// the hat-pair tolerance.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UobReport {
    pub n: usize,
    pub passed: bool,
    pub tolerance: f64,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    /// Largest gap between the full tensor Gram entry and the product of
    /// factor overlaps.
    pub factorization_gap: f64,
    pub pairs: Vec<PairWitness>,
    /// Pairs whose overlap reaches the tolerance.
    pub failures: Vec<(usize, usize)>,
}

pub fn verify_uob(u: &Uob, tol: &Tolerances) -> Result<UobReport> {
    u.check_shape()?;
    let vectors: Vec<Vec<Complex64>> = u.states.iter().map(ProductState::to_vector).collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
    let mut report = UobReport {
        n: u.n,
        passed: true,
        tolerance: tol.gram,
        max_off_diagonal: 0.0,
        max_diagonal_deviation: 0.0,
        factorization_gap: 0.0,
        pairs: Vec::new(),
        failures: Vec::new(),
    };
    for i in 0..vectors.len() {
        let d = dot(&vectors[i], &vectors[i]);
        report.max_diagonal_deviation = report.max_diagonal_deviation.max((d - 1.0).norm());
        for j in (i + 1)..vectors.len() {
            let g = dot(&vectors[i], &vectors[j]);
            let factored = u.states[i].inner(&u.states[j]);
            report.factorization_gap = report.factorization_gap.max((g - factored).norm());
            report.max_off_diagonal = report.max_off_diagonal.max(g.norm());
            let (pos, best) = u.states[i]
                .factors
                .iter()
                .zip(&u.states[j].factors)
                .map(|(x, y)| x.overlap(y))
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap_or((0, 1.0));
            if g.norm() >= tol.gram {
                report.failures.push((i, j));
            }
            report.pairs.push(PairWitness {
                a: i,
                b: j,
                overlap: g.norm(),
                witness: (best < tol.hat_pair).then_some(pos),
            });
        }
    }
    report.passed = report.failures.is_empty() && report.max_diagonal_deviation < tol.gram;
    Ok(report)
}

/// How each hat-pair of rays is split between `T0` and `T1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T0Rule {
    /// The member seen first, scanning states in order and positions left to right.
    #[default]
    InputOrder,
    /// The member with the lexicographically smaller amplitude vector.
    Lexicographic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub coloring: EdgeColoring,
    /// Vertex of each input state.
    pub relabeling: Vec<Vertex>,
    /// The `T0` ray of each color of `coloring`.
    pub assignment: ColorAssignment,
    /// `T1` rays, index-aligned with `assignment`.
    pub t1: Vec<QubitRay>,
    pub rule: T0Rule,
}

impl Recovery {
    /// The input states reordered by vertex.
    pub fn state_of_vertex(&self) -> Vec<usize> {
        let mut out = vec![0; self.relabeling.len()];
        for (state, &v) in self.relabeling.iter().enumerate() {
            out[v as usize] = state;
        }
        out
    }
}

pub fn recover_coloring(u: &Uob, tol: &Tolerances) -> Result<Recovery> {
    recover_coloring_with(u, tol, T0Rule::default())
}

pub fn recover_coloring_with(u: &Uob, tol: &Tolerances, rule: T0Rule) -> Result<Recovery> {
    u.check_shape()?;
    let n = u.n;
    let cube = Hypercube::new(n)?;

    // Global ray clusters in order of first appearance.
    let mut reps: Vec<QubitRay> = Vec::new();
    let mut cluster = vec![vec![0usize; n]; u.states.len()];
    for (j, s) in u.states.iter().enumerate() {
        for (p, f) in s.factors.iter().enumerate() {
            let mut found = None;
            for (k, r) in reps.iter().enumerate() {
                let d = r.distance(f);
                if d < tol.ray_equality {
                    found = Some(k);
                    break;
                }
                if d < tol.ambiguity {
                    return Err(Error::AmbiguousClustering { distance: d });
                }
            }
            cluster[j][p] = found.unwrap_or_else(|| {
                reps.push(*f);
                reps.len() - 1
            });
        }
    }

    // Hat partners.
    let mut partner = vec![usize::MAX; reps.len()];
    for (i, r) in reps.iter().enumerate() {
        let found: Vec<usize> = (0..reps.len()).filter(|&k| r.overlap(&reps[k]) < tol.hat_pair).collect();
        match found[..] {
            [k] => partner[i] = k,
            [] => return Err(Error::NotABasis(format!("ray cluster {i} has no orthogonal partner"))),
            _ => return Err(Error::NotABasis(format!("ray cluster {i} has {} orthogonal partners", found.len()))),
        }
    }

    // Pair ids and sides.
    let mut pair_of = vec![usize::MAX; reps.len()];
    let mut is_t1 = vec![false; reps.len()];
    let mut t0: Vec<QubitRay> = Vec::new();
    let mut t1: Vec<QubitRay> = Vec::new();
    for i in 0..reps.len() {
        if pair_of[i] != usize::MAX {
            continue;
        }
        let k = partner[i];
        if partner[k] != i {
            return Err(Error::NotABasis(format!("hat pairing of clusters {i} and {k} is not symmetric")));
        }
        let first_is_t0 = match rule {
            T0Rule::InputOrder => true,
            T0Rule::Lexicographic => {
                let (a, b) = (reps[i].lex_key(), reps[k].lex_key());
                a.iter().zip(&b).map(|(x, y)| x.total_cmp(y)).find(|o| *o != Ordering::Equal) != Some(Ordering::Greater)
            }
        };
        let (lo, hi) = if first_is_t0 { (i, k) } else { (k, i) };
        pair_of[lo] = t0.len();
        pair_of[hi] = t0.len();
        is_t1[hi] = true;
        t0.push(reps[lo]);
        t1.push(reps[hi]);
    }

    // Bit vectors.
    let mut relabeling = Vec::with_capacity(u.states.len());
    let mut state_of_vertex = vec![usize::MAX; u.states.len()];
    for (j, row) in cluster.iter().enumerate() {
        let s: Vertex =
            row.iter().enumerate().filter(|(_, &k)| is_t1[k]).map(|(p, _)| 1 << cube.dir_of_position(p)).sum();
        if state_of_vertex[s as usize] != usize::MAX {
            return Err(Error::NotABasis(format!(
                "states {} and {j} share bit vector {s}",
                state_of_vertex[s as usize]
            )));
        }
        state_of_vertex[s as usize] = j;
        relabeling.push(s);
    }

    let mut raw = Vec::with_capacity(cube.edge_count());
    for e in cube.edges() {
        let (a, b) = e.endpoints();
        let p = cube.position_of_dir(e.dir);
        let ca = pair_of[cluster[state_of_vertex[a as usize]][p]] as ColorId;
        let cb = pair_of[cluster[state_of_vertex[b as usize]][p]] as ColorId;
        if ca != cb {
            return Err(Error::InconsistentTuples { edge: e, first: ca, second: cb });
        }
        raw.push(ca);
    }
    let (coloring, origin) = EdgeColoring::from_raw_with_origin(n, &raw)?;
    if let Some((a, b)) = coloring.first_violation() {
        return Err(Error::NotAdmissible { a, b });
    }
    let assignment = ColorAssignment { rays: origin.iter().map(|&k| t0[k as usize]).collect() };
    let t1 = origin.iter().map(|&k| t1[k as usize]).collect();
    Ok(Recovery { coloring, relabeling, assignment, t1, rule })
}

/// Sample one ray per color, rejecting draws that come within
/// `min_separation` (Fubini–Study) of another ray or its hat in a shared
/// direction. Reproducible for a given seed.
pub fn sample_assignment(c: &EdgeColoring, min_separation: f64, seed: u64) -> Result<ColorAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_assignment_counted(c, min_separation, &mut rng).map(|(a, _)| a)
}

/// Like [`sample_assignment`] on a caller-provided generator; also returns
/// the number of rejected draws.
pub fn sample_assignment_counted<R: Rng + ?Sized>(
    c: &EdgeColoring,
    min_separation: f64,
    rng: &mut R,
) -> Result<(ColorAssignment, usize)> {
    c.require_admissible()?;
    let classes = c.direction_classes();
    let mut rays: Vec<QubitRay> = Vec::with_capacity(c.color_count());
    let mut rejected = 0;
    for k in 0..c.color_count() as ColorId {
        let rivals: Vec<ColorId> =
            (0..k).filter(|&j| classes.iter().any(|cl| cl.contains(&j) && cl.contains(&k))).collect();
        loop {
            let r = QubitRay::random(rng);
            let ok = rivals.iter().all(|&j| {
                let fs = r.fubini_study(&rays[j as usize]);
                fs >= min_separation && std::f64::consts::FRAC_PI_2 - fs >= min_separation
            });
            if ok {
                rays.push(r);
                break;
            }
            rejected += 1;
            if rejected >= REJECTION_BUDGET {
                return Err(Error::RejectionBudget(REJECTION_BUDGET));
            }
        }
    }
    Ok((ColorAssignment { rays }, rejected))
}
