//! Spectral sets E = λ⁻¹(Q), λ-orbits, spectral functions φ∘λ, orbit
//! linear optimization, spectral projections, and normal-cone membership.
//!
//! The orbit-level operations are written against the abstract `FtvnSystem`
//! interface (inner product + norm-preserving λ map + orbit max with
//! argmax). The Euclidean Jordan algebra is the main instance; (ℝⁿ, sort
//! descending) is the trivial instance used for cross-checks.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::random::{gauss, random_frame, rng_for};
use crate::algebra::{dot, Algebra, AlgebraSpec, Element};
use crate::error::{EjaError, Result};

// ---------------------------------------------------------------------------
// FTvN system interface.
// ---------------------------------------------------------------------------

/// A Fan–Theobald–von Neumann system: an inner-product space with a
/// norm-preserving eigenvalue map λ such that max{⟨c,x⟩ : λ(x)=λ(u)} =
/// ⟨λ(c),λ(u)⟩, attained at a computable point.
pub trait FtvnSystem {
    type Point: Clone;

    fn rank(&self) -> usize;
    fn inner(&self, x: &Self::Point, y: &Self::Point) -> Result<f64>;
    /// λ(x), sorted decreasing.
    fn eigen_map(&self, x: &Self::Point) -> Result<Vec<f64>>;
    /// The maximizer of ⟨c,·⟩ over the orbit {x : λ(x) = base}; `base` is
    /// sorted decreasing.
    fn orbit_argmax(&self, c: &Self::Point, base: &[f64]) -> Result<Self::Point>;
}

/// The Euclidean Jordan algebra instance of an FTvN system.
pub struct JordanSystem {
    algebra: Algebra,
}

impl JordanSystem {
    pub fn new(algebra: Algebra) -> Self {
        JordanSystem { algebra }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }
}

impl FtvnSystem for JordanSystem {
    type Point = Element;

    fn rank(&self) -> usize {
        self.algebra.rank()
    }

    fn inner(&self, x: &Element, y: &Element) -> Result<f64> {
        x.inner(y)
    }

    fn eigen_map(&self, x: &Element) -> Result<Vec<f64>> {
        x.eigenvalues()
    }

    /// λ(a)*𝓔 with 𝓔 the ordered frame of c: the construction from the
    /// geometric commutation principle's proof.
    fn orbit_argmax(&self, c: &Element, base: &[f64]) -> Result<Element> {
        let dec = c.spectral_decomposition()?;
        dec.frame.recompose(base)
    }
}

/// The trivial (ℝⁿ, sort-descending) instance.
pub struct VectorSystem {
    pub n: usize,
}

impl FtvnSystem for VectorSystem {
    type Point = Vec<f64>;

    fn rank(&self) -> usize {
        self.n
    }

    fn inner(&self, x: &Vec<f64>, y: &Vec<f64>) -> Result<f64> {
        if x.len() != self.n || y.len() != self.n {
            return Err(EjaError::LengthMismatch { expected: self.n, got: x.len().max(y.len()) });
        }
        Ok(dot(x, y))
    }

    fn eigen_map(&self, x: &Vec<f64>) -> Result<Vec<f64>> {
        let mut v = x.clone();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(v)
    }

    /// Rearrangement: put the largest base entry at the index of the
    /// largest entry of c.
    fn orbit_argmax(&self, c: &Vec<f64>, base: &[f64]) -> Result<Vec<f64>> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by(|&i, &j| c[j].partial_cmp(&c[i]).unwrap());
        let mut out = vec![0.0; self.n];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = base[rank];
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Orbits and generic orbit operations.
// ---------------------------------------------------------------------------

/// A λ-orbit [a] = {x : λ(x) = λ(a)}, stored by its sorted representative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Orbit {
    algebra: AlgebraSpec,
    base_lambda: Vec<f64>,
}

impl Orbit {
    pub fn new(algebra: AlgebraSpec, mut base_lambda: Vec<f64>) -> Result<Self> {
        algebra.validate()?;
        if base_lambda.len() != algebra.rank() {
            return Err(EjaError::LengthMismatch {
                expected: algebra.rank(),
                got: base_lambda.len(),
            });
        }
        base_lambda.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Orbit { algebra, base_lambda })
    }

    pub fn of(a: &Element) -> Result<Self> {
        Ok(Orbit {
            algebra: a.algebra().clone(),
            base_lambda: a.eigenvalues()?,
        })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn base_lambda(&self) -> &[f64] {
        &self.base_lambda
    }

    /// A random orbit member: the sorted representative over a random frame.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<Element> {
        let alg = Algebra::new(self.algebra.clone())?;
        let frame = random_frame(&alg, rng)?;
        frame.recompose(&self.base_lambda)
    }
}

/// max{⟨c,x⟩ : x ∈ [u]} = ⟨λ(c), λ(u)⟩ with its attaining point.
pub fn orbit_linear_max_in<S: FtvnSystem>(
    sys: &S,
    c: &S::Point,
    base: &[f64],
) -> Result<(f64, S::Point)> {
    let lc = sys.eigen_map(c)?;
    let value = dot(&lc, base);
    let argmax = sys.orbit_argmax(c, base)?;
    Ok((value, argmax))
}

/// min{⟨c,x⟩ : x ∈ [u]} = ⟨λ̃(c), λ(u)⟩ where λ̃(c) := −λ(−c).
pub fn orbit_linear_min_in<S: FtvnSystem>(
    sys: &S,
    c: &S::Point,
    base: &[f64],
    neg: impl Fn(&S::Point) -> S::Point,
) -> Result<(f64, S::Point)> {
    let (v, p) = orbit_linear_max_in(sys, &neg(c), base)?;
    Ok((-v, p))
}

pub fn orbit_linear_max(c: &Element, orbit: &Orbit) -> Result<(f64, Element)> {
    if c.algebra() != orbit.algebra() {
        return Err(EjaError::AlgebraMismatch);
    }
    let sys = JordanSystem::new(Algebra::new(c.algebra().clone())?);
    orbit_linear_max_in(&sys, c, orbit.base_lambda())
}

pub fn orbit_linear_min(c: &Element, orbit: &Orbit) -> Result<(f64, Element)> {
    if c.algebra() != orbit.algebra() {
        return Err(EjaError::AlgebraMismatch);
    }
    let sys = JordanSystem::new(Algebra::new(c.algebra().clone())?);
    orbit_linear_min_in(&sys, c, orbit.base_lambda(), |x| x.neg())
}

/// λ̃(c) = −λ(−c): the eigenvalues of c in increasing order.
pub fn lambda_tilde(c: &Element) -> Result<Vec<f64>> {
    let mut l = c.eigenvalues()?;
    l.reverse();
    Ok(l)
}

/// The FTvN gap ⟨λ(x),λ(y)⟩ − ⟨x,y⟩; nonnegative, zero exactly on strongly
/// commuting pairs.
pub fn ftvn_gap(x: &Element, y: &Element) -> Result<f64> {
    let lx = x.eigenvalues()?;
    let ly = y.eigenvalues()?;
    Ok(dot(&lx, &ly) - x.inner(y)?)
}

/// Exact membership test d ∈ N_[a](a), via the equality case of the FTvN
/// inequality.
pub fn normal_cone_orbit_contains(a: &Element, d: &Element, tol: f64) -> Result<bool> {
    let scale = (a.norm() * d.norm()).max(1.0);
    Ok(ftvn_gap(a, d)? <= tol * scale)
}

// ---------------------------------------------------------------------------
// Permutation-invariant Q representations.
// ---------------------------------------------------------------------------

/// A permutation-invariant Q ⊂ ℝⁿ. Finite orbit unions store only sorted
/// representatives; each member vector denotes its full permutation orbit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum QRep {
    FiniteOrbits { lambdas: Vec<Vec<f64>> },
    Box { lo: f64, up: f64 },
    Simplex { level: f64 },
    NonnegCone,
    Ball { r: f64 },
}

impl QRep {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            QRep::FiniteOrbits { lambdas } => {
                if lambdas.is_empty() {
                    return Err(EjaError::BadConfig("empty orbit union".into()));
                }
                for l in lambdas {
                    if l.len() != n {
                        return Err(EjaError::LengthMismatch { expected: n, got: l.len() });
                    }
                }
            }
            QRep::Box { lo, up } => {
                if lo > up {
                    return Err(EjaError::BadConfig("box lower bound above upper".into()));
                }
            }
            QRep::Simplex { level } => {
                if *level < 0.0 {
                    return Err(EjaError::BadConfig("simplex level must be ≥ 0".into()));
                }
            }
            QRep::Ball { r } => {
                if *r < 0.0 {
                    return Err(EjaError::BadConfig("ball radius must be ≥ 0".into()));
                }
            }
            QRep::NonnegCone => {}
        }
        Ok(())
    }

    /// Sorted-representative normal form for finite orbit unions.
    fn normalized(mut self) -> Self {
        if let QRep::FiniteOrbits { lambdas } = &mut self {
            for l in lambdas {
                l.sort_by(|a, b| b.partial_cmp(a).unwrap());
            }
        }
        self
    }

    pub fn convex(&self) -> bool {
        !matches!(self, QRep::FiniteOrbits { .. })
    }

    /// Euclidean projection of a sorted-decreasing vector onto Q; the
    /// output is again sorted decreasing (asserted).
    pub fn project(&self, lam: &[f64]) -> Vec<f64> {
        let out = match self {
            QRep::FiniteOrbits { lambdas } => {
                let mut best: Option<(f64, &Vec<f64>)> = None;
                for q in lambdas {
                    let d2: f64 = lam.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                    if best.map_or(true, |(bd, _)| d2 < bd) {
                        best = Some((d2, q));
                    }
                }
                best.expect("non-empty union").1.clone()
            }
            QRep::Box { lo, up } => lam.iter().map(|&v| v.clamp(*lo, *up)).collect(),
            QRep::NonnegCone => lam.iter().map(|&v| v.max(0.0)).collect(),
            QRep::Ball { r } => {
                let nrm = dot(lam, lam).sqrt();
                if nrm <= *r {
                    lam.to_vec()
                } else {
                    lam.iter().map(|&v| v * r / nrm).collect()
                }
            }
            QRep::Simplex { level } => project_simplex(lam, *level),
        };
        debug_assert!(
            out.windows(2).all(|w| w[0] >= w[1] - 1e-12),
            "projector must preserve sorted order"
        );
        out
    }

    /// Distance from a sorted vector to Q (projectors are exact, so this is
    /// the true Euclidean distance).
    pub fn dist(&self, lam: &[f64]) -> f64 {
        let p = self.project(lam);
        lam.iter()
            .zip(&p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// sup{⟨w, q⟩ : q ∈ Q-orbit-union} for sorted-decreasing w; exact for
    /// finite unions (rearrangement over each stored representative).
    pub fn sup_linear_sorted(&self, w: &[f64]) -> Result<f64> {
        match self {
            QRep::FiniteOrbits { lambdas } => Ok(lambdas
                .iter()
                .map(|q| dot(w, q))
                .fold(f64::NEG_INFINITY, f64::max)),
            _ => Err(EjaError::UnsupportedVariant(
                "sup_linear_sorted needs a finite orbit union".into(),
            )),
        }
    }

    /// A random point of Q (used by sampling oracles and the sampled
    /// normal-cone mode). Always returns a member, in unsorted order.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            QRep::FiniteOrbits { lambdas } => {
                let q = &lambdas[rng.gen_range(0..lambdas.len())];
                let mut v = q.clone();
                for i in (1..v.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    v.swap(i, j);
                }
                v
            }
            QRep::Box { lo, up } => (0..n).map(|_| rng.gen_range(*lo..=*up)).collect(),
            QRep::NonnegCone => (0..n).map(|_| gauss(rng).abs()).collect(),
            QRep::Ball { r } => {
                let g: Vec<f64> = (0..n).map(|_| gauss(rng)).collect();
                let nrm = dot(&g, &g).sqrt().max(f64::MIN_POSITIVE);
                let u: f64 = rng.gen::<f64>();
                let rad = r * u.powf(1.0 / n as f64);
                g.iter().map(|x| x * rad / nrm).collect()
            }
            QRep::Simplex { level } => {
                // Uniform on the simplex via normalized exponentials.
                let e: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
                let s: f64 = e.iter().sum();
                e.iter().map(|x| x * level / s).collect()
            }
        }
    }
}

/// Sort-and-threshold projection onto {q ≥ 0, Σq = level}.
fn project_simplex(v: &[f64], level: f64) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    let mut rho = 0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - level) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
            rho = j + 1;
        }
    }
    debug_assert!(rho > 0);
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

// ---------------------------------------------------------------------------
// Spectral sets over an algebra.
// ---------------------------------------------------------------------------

/// Mode flag for normal-cone verdicts: exact certification or the sampled
/// necessary test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalConeVerdict {
    pub member: bool,
    pub mode: CertMode,
    /// Worst observed violation of ⟨d, x−a⟩ ≤ 0 (or the exact criterion gap).
    pub worst_violation: f64,
}

/// A spectral set E = λ⁻¹(Q) over a fixed algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralSet {
    algebra: AlgebraSpec,
    q_rep: QRep,
}

impl SpectralSet {
    pub fn new(algebra: AlgebraSpec, q_rep: QRep) -> Result<Self> {
        algebra.validate()?;
        q_rep.validate(algebra.rank())?;
        Ok(SpectralSet {
            algebra,
            q_rep: q_rep.normalized(),
        })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn q_rep(&self) -> &QRep {
        &self.q_rep
    }

    pub fn convex(&self) -> bool {
        self.q_rep.convex()
    }

    fn check_algebra(&self, x: &Element) -> Result<()> {
        if x.algebra() != &self.algebra {
            return Err(EjaError::AlgebraMismatch);
        }
        Ok(())
    }

    /// True iff dist(λ(x), Q) ≤ tol.
    pub fn contains(&self, x: &Element, tol: f64) -> Result<bool> {
        self.check_algebra(x)?;
        Ok(self.q_rep.dist(&x.eigenvalues()?) <= tol)
    }

    /// Spectral projection: recompose(proj_Q(λ(u)), frame(u)). Exact for
    /// every convex variant and for finite orbit unions.
    pub fn project(&self, u: &Element) -> Result<Element> {
        self.check_algebra(u)?;
        let dec = u.spectral_decomposition()?;
        let q = self.q_rep.project(&dec.lambda);
        dec.frame.recompose(&q)
    }

    /// A random element of E (random Q point over a random frame).
    pub fn sample(&self, rng: &mut impl Rng) -> Result<Element> {
        let alg = Algebra::new(self.algebra.clone())?;
        let frame = random_frame(&alg, rng)?;
        let mut q = self.q_rep.sample(alg.rank(), rng);
        q.sort_by(|a, b| b.partial_cmp(a).unwrap());
        frame.recompose(&q)
    }

    /// Membership test d ∈ N_E(a). Exact for finite orbit unions (orbit
    /// suprema via the FTvN property) and for the symmetric cone
    /// (self-duality + complementary slackness); sampled-necessary plus
    /// projector stationarity otherwise.
    pub fn normal_cone_contains(
        &self,
        a: &Element,
        d: &Element,
        tol: f64,
        seed: u64,
    ) -> Result<NormalConeVerdict> {
        self.check_algebra(a)?;
        self.check_algebra(d)?;
        let la = a.eigenvalues()?;
        let in_dist = self.q_rep.dist(&la);
        let a_scale = a.norm().max(1.0);
        if in_dist > tol.max(1e-10) * a_scale {
            return Err(EjaError::NotInSet(in_dist));
        }
        let scale = (a.norm() * d.norm()).max(1.0);
        match &self.q_rep {
            QRep::FiniteOrbits { .. } => {
                let ld = d.eigenvalues()?;
                let sup = self.q_rep.sup_linear_sorted(&ld)?;
                let gap = sup - d.inner(a)?;
                Ok(NormalConeVerdict {
                    member: gap <= tol * scale,
                    mode: CertMode::Exact,
                    worst_violation: gap,
                })
            }
            QRep::NonnegCone => {
                // N_K(a) = {d : −d ∈ K, ⟨d,a⟩ = 0} on the self-dual cone.
                // −d ∈ K needs all λ(−d) ≥ 0, i.e. λ_max(d) ≤ 0.
                let lmax_d = d.eigenvalues()?[0];
                let slack = d.inner(a)?.abs();
                let gap = lmax_d.max(slack);
                Ok(NormalConeVerdict {
                    member: lmax_d <= tol * scale && slack <= tol * scale,
                    mode: CertMode::Exact,
                    worst_violation: gap,
                })
            }
            _ => {
                // Sampled necessary test + projector stationarity.
                let mut worst = f64::NEG_INFINITY;
                let mut rng = rng_for(seed, "normal_cone_sample", 0);
                for _ in 0..1000 {
                    let x = self.sample(&mut rng)?;
                    let viol = d.inner(&x.sub(a)?)?;
                    worst = worst.max(viol);
                }
                let stat = a.sub(&self.project(&a.add(d)?)?)?.norm();
                worst = worst.max(stat);
                Ok(NormalConeVerdict {
                    member: worst <= tol * scale && stat <= tol * scale,
                    mode: CertMode::Sampled,
                    worst_violation: worst,
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Spectral functions Φ = φ∘λ.
// ---------------------------------------------------------------------------

/// Built-in permutation-invariant φ (symmetric by construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "phi", rename_all = "snake_case")]
pub enum PhiKind {
    Sum,
    SumSquares,
    Max,
    LogSumExp { t: f64 },
    TopK { k: usize },
}

type PhiCallback = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A spectral function Φ = φ∘λ over a fixed algebra.
#[derive(Clone)]
pub struct SpectralFunction {
    algebra: AlgebraSpec,
    phi: Phi,
}

#[derive(Clone)]
enum Phi {
    Builtin(PhiKind),
    Callback(PhiCallback),
}

impl std::fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.phi {
            Phi::Builtin(k) => write!(f, "SpectralFunction({k:?})"),
            Phi::Callback(_) => write!(f, "SpectralFunction(callback)"),
        }
    }
}

impl SpectralFunction {
    pub fn builtin(algebra: AlgebraSpec, kind: PhiKind) -> Result<Self> {
        algebra.validate()?;
        if let PhiKind::TopK { k } = kind {
            if k == 0 || k > algebra.rank() {
                return Err(EjaError::BadConfig(format!(
                    "top_k k={k} out of range 1..={}",
                    algebra.rank()
                )));
            }
        }
        if let PhiKind::LogSumExp { t } = kind {
            if t <= 0.0 {
                return Err(EjaError::BadConfig("log_sum_exp needs t > 0".into()));
            }
        }
        Ok(SpectralFunction {
            algebra,
            phi: Phi::Builtin(kind),
        })
    }

    /// Register a user φ; permutation invariance is validated on 20 random
    /// (q, permutation) pairs at relative tolerance 1e−9.
    pub fn from_callback(
        algebra: AlgebraSpec,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        seed: u64,
    ) -> Result<Self> {
        algebra.validate()?;
        let n = algebra.rank();
        let f: PhiCallback = Arc::new(f);
        let mut rng = rng_for(seed, "phi_registration", 0);
        for trial in 0..20 {
            let q: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let mut p = q.clone();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                p.swap(i, j);
            }
            let v1 = f(&q);
            let v2 = f(&p);
            let scale = v1.abs().max(v2.abs()).max(1.0);
            if !(v1.is_finite() && v2.is_finite()) || (v1 - v2).abs() > 1e-9 * scale {
                return Err(EjaError::NotSymmetric(format!(
                    "trial {trial}: φ(q) = {v1}, φ(permuted q) = {v2}"
                )));
            }
        }
        Ok(SpectralFunction {
            algebra,
            phi: Phi::Callback(f),
        })
    }

    /// The constant-zero spectral function (Φ ≡ 0 in the solver layer).
    pub fn zero(algebra: AlgebraSpec) -> Result<Self> {
        Self::from_callback(algebra, |_| 0.0, 0)
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    /// φ(q) for a raw vector in ℝⁿ.
    pub fn eval_q(&self, q: &[f64]) -> f64 {
        match &self.phi {
            Phi::Builtin(PhiKind::Sum) => q.iter().sum(),
            Phi::Builtin(PhiKind::SumSquares) => dot(q, q),
            Phi::Builtin(PhiKind::Max) => q.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            Phi::Builtin(PhiKind::LogSumExp { t }) => {
                let m = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = q.iter().map(|x| ((x - m) / t).exp()).sum();
                m + t * s.ln()
            }
            Phi::Builtin(PhiKind::TopK { k }) => {
                let mut v = q.to_vec();
                v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                v[..*k].iter().sum()
            }
            Phi::Callback(f) => f(q),
        }
    }

    /// Φ(x) = φ(λ(x)).
    pub fn eval(&self, x: &Element) -> Result<f64> {
        if x.algebra() != &self.algebra {
            return Err(EjaError::AlgebraMismatch);
        }
        Ok(self.eval_q(&x.eigenvalues()?))
    }

    /// A (sub)gradient of φ at a sorted-decreasing q. Built-ins in closed
    /// form; callbacks by central finite differences.
    pub fn grad_q(&self, q: &[f64]) -> Vec<f64> {
        match &self.phi {
            Phi::Builtin(PhiKind::Sum) => vec![1.0; q.len()],
            Phi::Builtin(PhiKind::SumSquares) => q.iter().map(|x| 2.0 * x).collect(),
            Phi::Builtin(PhiKind::Max) => {
                let mut g = vec![0.0; q.len()];
                let m = q
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                g[m] = 1.0;
                g
            }
            Phi::Builtin(PhiKind::LogSumExp { t }) => {
                let m = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let w: Vec<f64> = q.iter().map(|x| ((x - m) / t).exp()).collect();
                let s: f64 = w.iter().sum();
                w.iter().map(|x| x / s).collect()
            }
            Phi::Builtin(PhiKind::TopK { k }) => {
                let mut idx: Vec<usize> = (0..q.len()).collect();
                idx.sort_by(|&i, &j| q[j].partial_cmp(&q[i]).unwrap());
                let mut g = vec![0.0; q.len()];
                for &i in &idx[..*k] {
                    g[i] = 1.0;
                }
                g
            }
            Phi::Callback(f) => {
                let scale = dot(q, q).sqrt().max(1.0);
                let h = 1e-6 * scale;
                let mut g = vec![0.0; q.len()];
                let mut qq = q.to_vec();
                for i in 0..q.len() {
                    qq[i] = q[i] + h;
                    let fp = f(&qq);
                    qq[i] = q[i] - h;
                    let fm = f(&qq);
                    qq[i] = q[i];
                    g[i] = (fp - fm) / (2.0 * h);
                }
                g
            }
        }
    }

    pub fn negated(&self) -> SpectralFunction {
        match &self.phi {
            Phi::Builtin(k) => {
                let k = k.clone();
                SpectralFunction {
                    algebra: self.algebra.clone(),
                    phi: Phi::Callback(Arc::new(move |q: &[f64]| {
                        -SpectralFunction::builtin_eval(&k, q)
                    })),
                }
            }
            Phi::Callback(f) => {
                let f = f.clone();
                SpectralFunction {
                    algebra: self.algebra.clone(),
                    phi: Phi::Callback(Arc::new(move |q: &[f64]| -f(q))),
                }
            }
        }
    }

    fn builtin_eval(kind: &PhiKind, q: &[f64]) -> f64 {
        SpectralFunction {
            algebra: AlgebraSpec::RealVec { n: q.len() },
            phi: Phi::Builtin(kind.clone()),
        }
        .eval_q(q)
    }
}
