//! Euclidean Jordan algebras: elements, eigenvalue map, spectral
//! decompositions, Jordan frames, and the two commutativity tests.
//!
//! Coordinates are always stored in an orthonormal basis under the trace
//! inner product, so `inner` is the plain dot product of coordinates in
//! every kind. For the spin algebra this means natural coordinates are
//! rescaled by √2 (the spin trace form is twice the natural dot product);
//! conversion helpers are provided.

mod jacobi;
pub mod random;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EjaError, Result};

pub use jacobi::hermitian_eigen;

/// Default relative tolerance for commutativity verdicts.
pub const DEFAULT_TOL: f64 = 1e-8;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Descriptor of a Euclidean Jordan algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraSpec {
    /// ℝⁿ with componentwise product; rank n, dim n.
    RealVec { n: usize },
    /// n×n real symmetric matrices; rank n, dim n(n+1)/2.
    Sym { n: usize },
    /// n×n complex Hermitian matrices; rank n, dim n².
    Herm { n: usize },
    /// Jordan spin algebra on ℝᵈ (d ≥ 2); rank 2, dim d.
    Spin { d: usize },
    /// Direct product; rank and dim are sums.
    Product { factors: Vec<AlgebraSpec> },
}

impl AlgebraSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            AlgebraSpec::RealVec { n } | AlgebraSpec::Sym { n } | AlgebraSpec::Herm { n } => {
                if *n == 0 {
                    return Err(EjaError::InvalidDimension("n must be ≥ 1".into()));
                }
            }
            AlgebraSpec::Spin { d } => {
                if *d < 2 {
                    return Err(EjaError::InvalidDimension("spin algebra needs d ≥ 2".into()));
                }
            }
            AlgebraSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(EjaError::InvalidDimension("empty product".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Rank: length of the eigenvalue vector.
    pub fn rank(&self) -> usize {
        match self {
            AlgebraSpec::RealVec { n } | AlgebraSpec::Sym { n } | AlgebraSpec::Herm { n } => *n,
            AlgebraSpec::Spin { .. } => 2,
            AlgebraSpec::Product { factors } => factors.iter().map(|f| f.rank()).sum(),
        }
    }

    /// Real dimension of the coordinate space.
    pub fn dim(&self) -> usize {
        match self {
            AlgebraSpec::RealVec { n } => *n,
            AlgebraSpec::Sym { n } => n * (n + 1) / 2,
            AlgebraSpec::Herm { n } => n * n,
            AlgebraSpec::Spin { d } => *d,
            AlgebraSpec::Product { factors } => factors.iter().map(|f| f.dim()).sum(),
        }
    }
}

/// A validated algebra realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    spec: AlgebraSpec,
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Algebra { spec })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Unit element e: e∘x = x, λ(e) = (1,…,1), ⟨e,e⟩ = rank.
    pub fn unit(&self) -> Element {
        Element {
            algebra: self.spec.clone(),
            coords: unit_coords(&self.spec),
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.spec.clone(),
            coords: vec![0.0; self.dim()],
        }
    }

    pub fn element(&self, coords: Vec<f64>) -> Result<Element> {
        Element::new(self.spec.clone(), coords)
    }

    /// k-th orthonormal basis element.
    pub fn basis_element(&self, k: usize) -> Result<Element> {
        if k >= self.dim() {
            return Err(EjaError::OutOfRange(k));
        }
        let mut coords = vec![0.0; self.dim()];
        coords[k] = 1.0;
        self.element(coords)
    }

    /// Canonical ordered Jordan frame (diagonal/axis-aligned idempotents).
    pub fn canonical_frame(&self) -> OrderedJordanFrame {
        OrderedJordanFrame {
            idempotents: canonical_frame_coords(&self.spec)
                .into_iter()
                .map(|coords| Element {
                    algebra: self.spec.clone(),
                    coords,
                })
                .collect(),
        }
    }
}

/// An element of a Euclidean Jordan algebra, stored as coordinates in the
/// algebra's orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRaw")]
pub struct Element {
    algebra: AlgebraSpec,
    coords: Vec<f64>,
}

#[derive(Deserialize)]
struct ElementRaw {
    algebra: AlgebraSpec,
    coords: Vec<f64>,
}

impl TryFrom<ElementRaw> for Element {
    type Error = EjaError;
    fn try_from(raw: ElementRaw) -> Result<Element> {
        Element::new(raw.algebra, raw.coords)
    }
}

impl Element {
    pub fn new(algebra: AlgebraSpec, coords: Vec<f64>) -> Result<Element> {
        algebra.validate()?;
        if coords.len() != algebra.dim() {
            return Err(EjaError::LengthMismatch {
                expected: algebra.dim(),
                got: coords.len(),
            });
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(EjaError::NonFinite(i));
        }
        Ok(Element { algebra, coords })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn same_algebra(&self, other: &Element) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(EjaError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(self.map2(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(self.map2(other, |a, b| a - b))
    }

    pub fn scale(&self, t: f64) -> Element {
        Element {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }

    pub fn neg(&self) -> Element {
        self.scale(-1.0)
    }

    fn map2(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
        Element {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Trace inner product ⟨x,y⟩ = tr(x∘y) = dot product of coordinates.
    pub fn inner(&self, other: &Element) -> Result<f64> {
        self.same_algebra(other)?;
        Ok(dot(&self.coords, &other.coords))
    }

    pub fn norm(&self) -> f64 {
        dot(&self.coords, &self.coords).sqrt()
    }

    /// Trace: sum of eigenvalues, computed in closed form per kind.
    pub fn trace(&self) -> f64 {
        trace_of(&self.algebra, &self.coords)
    }

    /// Jordan product x∘y.
    pub fn prod(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(Element {
            algebra: self.algebra.clone(),
            coords: jordan_product(&self.algebra, &self.coords, &other.coords),
        })
    }

    /// Eigenvalues sorted decreasing.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigenvalues_of(&self.algebra, &self.coords)
    }

    /// Full spectral decomposition x = λ(x)*𝓔.
    pub fn spectral_decomposition(&self) -> Result<SpectralDecomposition> {
        let parts = decompose(&self.algebra, &self.coords)?;
        let lambda = parts.iter().map(|(l, _)| *l).collect();
        let idempotents = parts
            .into_iter()
            .map(|(_, coords)| Element {
                algebra: self.algebra.clone(),
                coords,
            })
            .collect();
        Ok(SpectralDecomposition {
            lambda,
            frame: OrderedJordanFrame { idempotents },
        })
    }

    /// Matrix of L_x : y ↦ x∘y in the orthonormal basis (d×d, row-major).
    pub fn lmul_matrix(&self) -> Vec<f64> {
        let d = self.coords.len();
        let mut m = vec![0.0; d * d];
        let mut basis = vec![0.0; d];
        for j in 0..d {
            basis[j] = 1.0;
            let col = jordan_product(&self.algebra, &self.coords, &basis);
            for i in 0..d {
                m[i * d + j] = col[i];
            }
            basis[j] = 0.0;
        }
        m
    }
}

/// An ordered list of n mutually orthogonal primitive idempotents summing
/// to the unit element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderedJordanFrame {
    idempotents: Vec<Element>,
}

impl OrderedJordanFrame {
    /// Validating constructor; rejects frames violating the axioms beyond
    /// `tol` (absolute on unit-scale quantities).
    pub fn new(idempotents: Vec<Element>, tol: f64) -> Result<Self> {
        let frame = OrderedJordanFrame { idempotents };
        let v = frame.max_violation()?;
        if v > tol {
            return Err(EjaError::InvalidFrame(format!(
                "axiom violation {v:.3e} exceeds tolerance {tol:.1e}"
            )));
        }
        Ok(frame)
    }

    pub(crate) fn from_parts(idempotents: Vec<Element>) -> Self {
        OrderedJordanFrame { idempotents }
    }

    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    pub fn idempotents(&self) -> &[Element] {
        &self.idempotents
    }

    /// Worst violation of the frame axioms: eᵢ∘eⱼ = δᵢⱼeᵢ, ⟨eᵢ,eᵢ⟩ = 1,
    /// Σeᵢ = e, and frame length = rank.
    pub fn max_violation(&self) -> Result<f64> {
        let first = self
            .idempotents
            .first()
            .ok_or_else(|| EjaError::InvalidFrame("empty frame".into()))?;
        let alg = Algebra::new(first.algebra.clone())?;
        if self.idempotents.len() != alg.rank() {
            return Err(EjaError::InvalidFrame(format!(
                "frame has {} idempotents, algebra rank is {}",
                self.idempotents.len(),
                alg.rank()
            )));
        }
        let mut worst: f64 = 0.0;
        let mut sum = alg.zero();
        for (i, ei) in self.idempotents.iter().enumerate() {
            first.same_algebra(ei)?;
            let sq = ei.prod(ei)?;
            worst = worst.max(sq.sub(ei)?.norm());
            worst = worst.max((ei.inner(ei)? - 1.0).abs());
            for ej in &self.idempotents[i + 1..] {
                worst = worst.max(ei.prod(ej)?.norm());
            }
            sum = sum.add(ei)?;
        }
        worst = worst.max(sum.sub(&alg.unit())?.norm());
        Ok(worst)
    }

    /// Σ qᵢeᵢ, the element q*𝓔.
    pub fn recompose(&self, q: &[f64]) -> Result<Element> {
        if q.len() != self.idempotents.len() {
            return Err(EjaError::LengthMismatch {
                expected: self.idempotents.len(),
                got: q.len(),
            });
        }
        let first = &self.idempotents[0];
        let mut out = Element {
            algebra: first.algebra.clone(),
            coords: vec![0.0; first.coords.len()],
        };
        for (qi, ei) in q.iter().zip(&self.idempotents) {
            out = out.add(&ei.scale(*qi))?;
        }
        Ok(out)
    }

    /// Frame coefficients ⟨x,eᵢ⟩ (exact when x is diagonal in this frame).
    pub fn coefficients_of(&self, x: &Element) -> Result<Vec<f64>> {
        self.idempotents.iter().map(|e| x.inner(e)).collect()
    }
}

/// Eigenvalues in decreasing order together with an ordered Jordan frame
/// realizing x = λ(x)*𝓔.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub lambda: Vec<f64>,
    pub frame: OrderedJordanFrame,
}

impl SpectralDecomposition {
    pub fn recompose(&self) -> Result<Element> {
        self.frame.recompose(&self.lambda)
    }
}

/// Numeric verdicts for the three equivalent strong-commutativity criteria
/// plus the plain operator-commutativity test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommutationReport {
    /// ⟨λ(a),λ(b)⟩ − ⟨a,b⟩; nonnegative up to rounding.
    pub inner_gap: f64,
    /// ‖λ(a+b) − λ(a) − λ(b)‖.
    pub additivity_gap: f64,
    /// ‖L_aL_b − L_bL_a‖_F.
    pub operator_commutator_norm: f64,
    /// max(1, ‖a‖‖b‖), the scale the gaps are judged against.
    pub scale: f64,
    pub strong: bool,
    pub operator: bool,
    /// A frame jointly diagonalizing a and b with both coefficient vectors
    /// decreasing, when the heuristic search finds one.
    pub certificate: Option<OrderedJordanFrame>,
}

/// True iff ‖L_aL_b − L_bL_a‖_F ≤ tol·max(1, ‖a‖‖b‖).
pub fn operator_commute(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    a.same_algebra(b)?;
    let scale = (a.norm() * b.norm()).max(1.0);
    Ok(commutator_norm(a, b) <= tol * scale)
}

fn commutator_norm(a: &Element, b: &Element) -> f64 {
    let d = a.coords.len();
    let la = a.lmul_matrix();
    let lb = b.lmul_matrix();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut ab = 0.0;
            let mut ba = 0.0;
            for k in 0..d {
                ab += la[i * d + k] * lb[k * d + j];
                ba += lb[i * d + k] * la[k * d + j];
            }
            s += (ab - ba) * (ab - ba);
        }
    }
    s.sqrt()
}

/// Evaluates all three strong-commutativity criteria and attempts a joint
/// certificate frame. The inner-product criterion is authoritative for the
/// verdict; the certificate is a heuristic and never flips it.
pub fn strong_commute(a: &Element, b: &Element, tol: f64) -> Result<CommutationReport> {
    a.same_algebra(b)?;
    let la = a.eigenvalues()?;
    let lb = b.eigenvalues()?;
    let lab = a.add(b)?.eigenvalues()?;
    let inner_gap = dot(&la, &lb) - a.inner(b)?;
    let additivity_gap = la
        .iter()
        .zip(&lb)
        .zip(&lab)
        .map(|((x, y), z)| (z - x - y) * (z - x - y))
        .sum::<f64>()
        .sqrt();
    let operator_commutator_norm = commutator_norm(a, b);
    let scale = (a.norm() * b.norm()).max(1.0);
    let strong = inner_gap <= tol * scale;
    // Strong commutativity implies operator commutativity exactly.
    let operator = strong || operator_commutator_norm <= tol * scale;
    let certificate = if strong {
        certificate_search(a, b, tol, scale)?
    } else {
        None
    };
    Ok(CommutationReport {
        inner_gap,
        additivity_gap,
        operator_commutator_norm,
        scale,
        strong,
        operator,
        certificate,
    })
}

/// Decompose a + t·b for a few generic t; accept a frame in which both a
/// and b are diagonal with decreasing coefficients.
fn certificate_search(
    a: &Element,
    b: &Element,
    tol: f64,
    scale: f64,
) -> Result<Option<OrderedJordanFrame>> {
    let bnorm = b.norm();
    let base = if bnorm > 0.0 {
        a.norm().max(1.0) / bnorm
    } else {
        1.0
    };
    // Generic multipliers; three retries per the frame-separation heuristic.
    for t in [0.137, 0.0412, 0.0091] {
        let m = a.add(&b.scale(t * base))?;
        let dec = match m.spectral_decomposition() {
            Ok(d) => d,
            Err(_) => continue,
        };
        let ok_a = diagonal_decreasing(a, &dec.frame, tol.sqrt() * scale.max(1.0))?;
        let ok_b = diagonal_decreasing(b, &dec.frame, tol.sqrt() * scale.max(1.0))?;
        if ok_a && ok_b {
            return Ok(Some(dec.frame));
        }
    }
    Ok(None)
}

fn diagonal_decreasing(x: &Element, frame: &OrderedJordanFrame, tol: f64) -> Result<bool> {
    let coeffs = frame.coefficients_of(x)?;
    let rebuilt = frame.recompose(&coeffs)?;
    if rebuilt.sub(x)?.norm() > tol {
        return Ok(false);
    }
    Ok(coeffs.windows(2).all(|w| w[0] >= w[1] - tol))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// Kind-specific internals.
// ---------------------------------------------------------------------------

fn unit_coords(spec: &AlgebraSpec) -> Vec<f64> {
    match spec {
        AlgebraSpec::RealVec { n } => vec![1.0; *n],
        AlgebraSpec::Sym { n } => {
            let mut c = vec![0.0; sym_dim(*n)];
            for i in 0..*n {
                c[sym_index(*n, i, i)] = 1.0;
            }
            c
        }
        AlgebraSpec::Herm { n } => {
            let mut c = vec![0.0; n * n];
            for i in 0..*n {
                c[herm_diag_index(*n, i)] = 1.0;
            }
            c
        }
        AlgebraSpec::Spin { d } => {
            let mut c = vec![0.0; *d];
            c[0] = SQRT2;
            c
        }
        AlgebraSpec::Product { factors } => {
            factors.iter().flat_map(unit_coords).collect()
        }
    }
}

fn trace_of(spec: &AlgebraSpec, coords: &[f64]) -> f64 {
    match spec {
        AlgebraSpec::RealVec { .. } => coords.iter().sum(),
        AlgebraSpec::Sym { n } => (0..*n).map(|i| coords[sym_index(*n, i, i)]).sum(),
        AlgebraSpec::Herm { n } => (0..*n).map(|i| coords[herm_diag_index(*n, i)]).sum(),
        AlgebraSpec::Spin { .. } => SQRT2 * coords[0],
        AlgebraSpec::Product { factors } => factor_slices(factors, coords)
            .map(|(f, s)| trace_of(f, s))
            .sum(),
    }
}

fn jordan_product(spec: &AlgebraSpec, x: &[f64], y: &[f64]) -> Vec<f64> {
    match spec {
        AlgebraSpec::RealVec { .. } => x.iter().zip(y).map(|(a, b)| a * b).collect(),
        AlgebraSpec::Sym { n } => {
            let mx = sym_coords_to_mat(*n, x);
            let my = sym_coords_to_mat(*n, y);
            let mut p = vec![0.0; n * n];
            for i in 0..*n {
                for j in 0..*n {
                    let mut s = 0.0;
                    for k in 0..*n {
                        s += mx[i * n + k] * my[k * n + j] + my[i * n + k] * mx[k * n + j];
                    }
                    p[i * n + j] = 0.5 * s;
                }
            }
            sym_mat_to_coords(*n, &p)
        }
        AlgebraSpec::Herm { n } => {
            let mx = herm_coords_to_mat(*n, x);
            let my = herm_coords_to_mat(*n, y);
            let mut p = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..*n {
                for j in 0..*n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..*n {
                        s += mx[i * n + k] * my[k * n + j] + my[i * n + k] * mx[k * n + j];
                    }
                    p[i * n + j] = 0.5 * s;
                }
            }
            herm_mat_to_coords(*n, &p)
        }
        AlgebraSpec::Spin { d } => {
            // (x₀,x̄)∘(y₀,ȳ) = (x₀y₀+x̄·ȳ, x₀ȳ+y₀x̄) in natural coordinates;
            // orthonormal coords are √2 × natural, giving a 1/√2 factor.
            let mut p = vec![0.0; *d];
            p[0] = dot(x, y) / SQRT2;
            for k in 1..*d {
                p[k] = (x[0] * y[k] + y[0] * x[k]) / SQRT2;
            }
            p
        }
        AlgebraSpec::Product { factors } => {
            let mut out = Vec::with_capacity(x.len());
            let mut off = 0;
            for f in factors {
                let d = f.dim();
                out.extend(jordan_product(f, &x[off..off + d], &y[off..off + d]));
                off += d;
            }
            out
        }
    }
}

fn eigenvalues_of(spec: &AlgebraSpec, coords: &[f64]) -> Result<Vec<f64>> {
    let mut lam = match spec {
        AlgebraSpec::RealVec { .. } => coords.to_vec(),
        AlgebraSpec::Sym { n } => {
            let m = sym_coords_to_mat(*n, coords);
            let cm: Vec<Complex64> = m.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            hermitian_eigen(*n, &cm)?.0
        }
        AlgebraSpec::Herm { n } => hermitian_eigen(*n, &herm_coords_to_mat(*n, coords))?.0,
        AlgebraSpec::Spin { .. } => {
            let (x0, r) = spin_parts(coords);
            vec![x0 + r, x0 - r]
        }
        AlgebraSpec::Product { factors } => {
            let mut all = Vec::new();
            for (f, s) in factor_slices(factors, coords) {
                all.extend(eigenvalues_of(f, s)?);
            }
            all
        }
    };
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(lam)
}

/// Natural spin parts (x₀, ‖x̄‖) from orthonormal coordinates.
fn spin_parts(coords: &[f64]) -> (f64, f64) {
    let x0 = coords[0] / SQRT2;
    let r = dot(&coords[1..], &coords[1..]).sqrt() / SQRT2;
    (x0, r)
}

/// (eigenvalue, idempotent-coords) pairs sorted by eigenvalue decreasing.
fn decompose(spec: &AlgebraSpec, coords: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut parts = match spec {
        AlgebraSpec::RealVec { n } => (0..*n)
            .map(|i| {
                let mut e = vec![0.0; *n];
                e[i] = 1.0;
                (coords[i], e)
            })
            .collect::<Vec<_>>(),
        AlgebraSpec::Sym { n } => {
            let m = sym_coords_to_mat(*n, coords);
            let cm: Vec<Complex64> = m.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let (lam, vecs) = hermitian_eigen(*n, &cm)?;
            lam.into_iter()
                .zip(vecs)
                .map(|(l, v)| {
                    let mut p = vec![0.0; n * n];
                    for i in 0..*n {
                        for j in 0..*n {
                            p[i * n + j] = (v[i] * v[j].conj()).re;
                        }
                    }
                    (l, sym_mat_to_coords(*n, &p))
                })
                .collect()
        }
        AlgebraSpec::Herm { n } => {
            let (lam, vecs) = hermitian_eigen(*n, &herm_coords_to_mat(*n, coords))?;
            lam.into_iter()
                .zip(vecs)
                .map(|(l, v)| {
                    let mut p = vec![Complex64::new(0.0, 0.0); n * n];
                    for i in 0..*n {
                        for j in 0..*n {
                            p[i * n + j] = v[i] * v[j].conj();
                        }
                    }
                    (l, herm_mat_to_coords(*n, &p))
                })
                .collect()
        }
        AlgebraSpec::Spin { d } => {
            let (x0, r) = spin_parts(coords);
            // Unit direction; degenerate x̄ = 0 falls back to the first axis.
            let u: Vec<f64> = if r > 0.0 {
                let nr = dot(&coords[1..], &coords[1..]).sqrt();
                coords[1..].iter().map(|c| c / nr).collect()
            } else {
                let mut u = vec![0.0; d - 1];
                u[0] = 1.0;
                u
            };
            let mut plus = vec![0.0; *d];
            let mut minus = vec![0.0; *d];
            plus[0] = 1.0 / SQRT2;
            minus[0] = 1.0 / SQRT2;
            for k in 1..*d {
                plus[k] = u[k - 1] / SQRT2;
                minus[k] = -u[k - 1] / SQRT2;
            }
            vec![(x0 + r, plus), (x0 - r, minus)]
        }
        AlgebraSpec::Product { factors } => {
            let dim = spec.dim();
            let mut all = Vec::new();
            let mut off = 0;
            for f in factors {
                let d = f.dim();
                for (l, sub) in decompose(f, &coords[off..off + d])? {
                    let mut emb = vec![0.0; dim];
                    emb[off..off + d].copy_from_slice(&sub);
                    all.push((l, emb));
                }
                off += d;
            }
            all
        }
    };
    parts.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(parts)
}

fn factor_slices<'a>(
    factors: &'a [AlgebraSpec],
    coords: &'a [f64],
) -> impl Iterator<Item = (&'a AlgebraSpec, &'a [f64])> {
    factors.iter().scan(0usize, move |off, f| {
        let d = f.dim();
        let s = &coords[*off..*off + d];
        *off += d;
        Some((f, s))
    })
}

fn canonical_frame_coords(spec: &AlgebraSpec) -> Vec<Vec<f64>> {
    match spec {
        AlgebraSpec::RealVec { n } => (0..*n)
            .map(|i| {
                let mut e = vec![0.0; *n];
                e[i] = 1.0;
                e
            })
            .collect(),
        AlgebraSpec::Sym { n } => (0..*n)
            .map(|i| {
                let mut c = vec![0.0; sym_dim(*n)];
                c[sym_index(*n, i, i)] = 1.0;
                c
            })
            .collect(),
        AlgebraSpec::Herm { n } => (0..*n)
            .map(|i| {
                let mut c = vec![0.0; n * n];
                c[herm_diag_index(*n, i)] = 1.0;
                c
            })
            .collect(),
        AlgebraSpec::Spin { d } => {
            let mut plus = vec![0.0; *d];
            let mut minus = vec![0.0; *d];
            plus[0] = 1.0 / SQRT2;
            plus[1] = 1.0 / SQRT2;
            minus[0] = 1.0 / SQRT2;
            minus[1] = -1.0 / SQRT2;
            vec![plus, minus]
        }
        AlgebraSpec::Product { factors } => {
            let dim = spec.dim();
            let mut out = Vec::new();
            let mut off = 0;
            for f in factors {
                let d = f.dim();
                for sub in canonical_frame_coords(f) {
                    let mut emb = vec![0.0; dim];
                    emb[off..off + d].copy_from_slice(&sub);
                    out.push(emb);
                }
                off += d;
            }
            out
        }
    }
}

// --- symmetric-matrix coordinate maps (basis: E_ii, (E_ij+E_ji)/√2, i<j) ---

fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Index of the basis element for the (i,j) entry, i ≤ j, in the ordering
/// (0,0),(0,1),…,(0,n−1),(1,1),…
fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    i * n - i * (i + 1) / 2 + j
}

pub(crate) fn sym_coords_to_mat(n: usize, coords: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = coords[sym_index(n, i, i)];
        for j in (i + 1)..n {
            let v = coords[sym_index(n, i, j)] / SQRT2;
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

pub(crate) fn sym_mat_to_coords(n: usize, m: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; sym_dim(n)];
    for i in 0..n {
        c[sym_index(n, i, i)] = m[i * n + i];
        for j in (i + 1)..n {
            c[sym_index(n, i, j)] = SQRT2 * 0.5 * (m[i * n + j] + m[j * n + i]);
        }
    }
    c
}

// --- Hermitian coordinate maps (basis: E_ii, (E_ij+E_ji)/√2, i(E_ij−E_ji)/√2) ---

/// Coordinate layout per row i: diagonal entry, then (re, im) pairs for j > i.
fn herm_diag_index(n: usize, i: usize) -> usize {
    // Row i starts after i earlier rows of sizes 1 + 2(n−1−k).
    (0..i).map(|k| 1 + 2 * (n - 1 - k)).sum()
}

fn herm_off_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    herm_diag_index(n, i) + 1 + 2 * (j - i - 1)
}

pub(crate) fn herm_coords_to_mat(n: usize, coords: &[f64]) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        m[i * n + i] = Complex64::new(coords[herm_diag_index(n, i)], 0.0);
        for j in (i + 1)..n {
            let k = herm_off_index(n, i, j);
            let v = Complex64::new(coords[k], coords[k + 1]) / SQRT2;
            m[i * n + j] = v;
            m[j * n + i] = v.conj();
        }
    }
    m
}

pub(crate) fn herm_mat_to_coords(n: usize, m: &[Complex64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        c[herm_diag_index(n, i)] = m[i * n + i].re;
        for j in (i + 1)..n {
            let k = herm_off_index(n, i, j);
            let avg = 0.5 * (m[i * n + j] + m[j * n + i].conj());
            c[k] = SQRT2 * avg.re;
            c[k + 1] = SQRT2 * avg.im;
        }
    }
    c
}

// --- natural-form constructors -------------------------------------------

impl Element {
    /// Symmetric matrix given as rows; symmetry validated to `sym_tol`.
    pub fn from_sym_matrix(rows: &[Vec<f64>], sym_tol: f64) -> Result<Element> {
        let n = rows.len();
        let spec = AlgebraSpec::Sym { n };
        spec.validate()?;
        let mut m = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(EjaError::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (m[i * n + j] - m[j * n + i]).abs() > sym_tol {
                    return Err(EjaError::InvalidDimension(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Element::new(spec, sym_mat_to_coords(n, &m))
    }

    /// Hermitian matrix given as real and imaginary parts; hermiticity
    /// validated to `tol`.
    pub fn from_herm_matrix(re: &[Vec<f64>], im: &[Vec<f64>], tol: f64) -> Result<Element> {
        let n = re.len();
        let spec = AlgebraSpec::Herm { n };
        spec.validate()?;
        if im.len() != n {
            return Err(EjaError::LengthMismatch { expected: n, got: im.len() });
        }
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            if re[i].len() != n || im[i].len() != n {
                return Err(EjaError::LengthMismatch { expected: n, got: re[i].len() });
            }
            for j in 0..n {
                m[i * n + j] = Complex64::new(re[i][j], im[i][j]);
            }
        }
        for i in 0..n {
            if m[i * n + i].im.abs() > tol {
                return Err(EjaError::InvalidDimension(format!("diagonal ({i},{i}) not real")));
            }
            for j in (i + 1)..n {
                if (m[i * n + j] - m[j * n + i].conj()).norm() > tol {
                    return Err(EjaError::InvalidDimension(format!(
                        "matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        Element::new(spec, herm_mat_to_coords(n, &m))
    }

    /// Spin element from natural (x₀, x̄) coordinates.
    pub fn from_spin_natural(natural: &[f64]) -> Result<Element> {
        let spec = AlgebraSpec::Spin { d: natural.len() };
        spec.validate()?;
        Element::new(spec, natural.iter().map(|c| c * SQRT2).collect())
    }

    /// Natural spin coordinates (x₀, x̄) of a spin-algebra element.
    pub fn to_spin_natural(&self) -> Result<Vec<f64>> {
        match self.algebra {
            AlgebraSpec::Spin { .. } => Ok(self.coords.iter().map(|c| c / SQRT2).collect()),
            _ => Err(EjaError::UnsupportedVariant("not a spin algebra".into())),
        }
    }

    /// Dense symmetric matrix form (row-major) of a Sym element.
    pub fn to_sym_matrix(&self) -> Result<Vec<Vec<f64>>> {
        match self.algebra {
            AlgebraSpec::Sym { n } => {
                let m = sym_coords_to_mat(n, &self.coords);
                Ok((0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect())
            }
            _ => Err(EjaError::UnsupportedVariant("not a symmetric-matrix algebra".into())),
        }
    }
}

#[cfg(test)]
mod tests;
