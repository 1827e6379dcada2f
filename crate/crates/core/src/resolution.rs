//! Candidate complete projective resolutions `⋯ → Ind(P^{k-1}) → Ind(P^k) → ⋯` over
//! `T_R(M)`, given by form-(∗) maps, and the checkers for conditions C1, C2 and C3.
//!
//! Every failing verdict carries a [`Witness`] that [`replay`] re-checks using only
//! assembled matrices and, for C3, the independently solved `Hom_T` spaces.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{free_module, hom_basis, LeftModule, Projective};
use crate::error::{dim_mismatch, Error, Result};
use crate::exactlin::{intersection_dim, Matrix};
use crate::scalar::Scalar;
use crate::tensor_ring::{StarMorphism, TModule, TensorRing};

/// `P^lo, …` and `α^lo, …` with `α^k : Ind(P^k) → Ind(P^{k+1})`. A periodic window stores
/// one period (`p` objects and `p` maps, `α^{lo+p-1}` landing in `P^lo`).
#[derive(Clone, Debug)]
pub struct ResolutionWindow<S: Scalar> {
    ring: Arc<TensorRing<S>>,
    lo: i64,
    objects: Vec<Projective<S>>,
    maps: Vec<StarMorphism<S>>,
    period: Option<usize>,
}

/// Which condition a position is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    C1,
    C2,
    C3,
}

/// A re-checkable certificate that a condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<S> {
    /// Block `j` (1-based) of the first column of `α^k ∘ α^{k-1}` is `residual ≠ 0`.
    C1 { j: usize, residual: Matrix<S> },
    /// `v ∈ ker α^k` that is not in `im α^{k-1}`.
    C2 { vector: Vec<S> },
    /// `(f_1, …, f_{N+1}) : Ind(P^k) → Ind(R)` killing `α^{k-1}` but not factoring through `α^k`.
    C3 { functional: Vec<Matrix<S>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<S> {
    Pass,
    Fail(Witness<S>),
}

impl<S> Verdict<S> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness<S>> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// Verdicts at one interior index `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionReport<S> {
    pub k: i64,
    pub c1: Verdict<S>,
    pub c2: Verdict<S>,
    pub c3: Verdict<S>,
}

impl<S> PositionReport<S> {
    pub fn passed(&self) -> bool {
        self.c1.passed() && self.c2.passed() && self.c3.passed()
    }

    pub fn verdict(&self, c: Condition) -> &Verdict<S> {
        match c {
            Condition::C1 => &self.c1,
            Condition::C2 => &self.c2,
            Condition::C3 => &self.c3,
        }
    }
}

/// Whether verdicts cover every `k ∈ ℤ` or only the supplied indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Periodic(usize),
    WindowLocal,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Periodic(p) => write!(f, "periodic({p})"),
            Scope::WindowLocal => f.write_str("window-local"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport<S> {
    pub scope: Scope,
    /// Report labels for the three conditions, `C1..C3` or `SC1..SC3`.
    pub labels: [&'static str; 3],
    pub positions: Vec<PositionReport<S>>,
}

impl<S> CheckReport<S> {
    pub fn passed(&self) -> bool {
        self.positions.iter().all(PositionReport::passed)
    }

    /// True only for a periodic window that passes everywhere; window-local passes never count.
    pub fn is_complete_resolution(&self) -> bool {
        matches!(self.scope, Scope::Periodic(_)) && self.passed()
    }

    pub fn failures(&self) -> impl Iterator<Item = (i64, &'static str, &Witness<S>)> + '_ {
        self.positions.iter().flat_map(move |p| {
            [(0, &p.c1), (1, &p.c2), (2, &p.c3)]
                .into_iter()
                .filter_map(move |(i, v)| v.witness().map(|w| (p.k, self.labels[i], w)))
        })
    }
}

impl<S: Scalar> ResolutionWindow<S> {
    /// Validates endpoints, and for a periodic window that the data repeats with period `p`
    /// wherever it overlaps; the stored window is cut down to one period.
    pub fn new(
        ring: Arc<TensorRing<S>>,
        lo: i64,
        mut objects: Vec<Projective<S>>,
        mut maps: Vec<StarMorphism<S>>,
        period: Option<usize>,
    ) -> Result<Self> {
        match period {
            Some(0) => return Err(Error::InvalidWindow("period must be positive".into())),
            Some(p) => {
                if objects.len() < p || maps.len() < p {
                    return Err(Error::InvalidWindow(format!(
                        "period {p} needs at least {p} objects and maps, got {} and {}",
                        objects.len(),
                        maps.len()
                    )));
                }
                if maps.len() + 1 < objects.len() || maps.len() > objects.len() {
                    return Err(Error::InvalidWindow("periodic window needs hi - lo maps or hi - lo + 1".into()));
                }
                for k in p..objects.len() {
                    if objects[k] != objects[k - p] {
                        return Err(Error::InvalidWindow(format!("P^{} differs from P^{}", lo + k as i64, lo + (k - p) as i64)));
                    }
                }
                for k in p..maps.len() {
                    if maps[k] != maps[k - p] {
                        return Err(Error::InvalidWindow(format!("α^{} differs from α^{}", lo + k as i64, lo + (k - p) as i64)));
                    }
                }
                objects.truncate(p);
                maps.truncate(p);
            }
            None => {
                if objects.is_empty() || maps.len() + 1 != objects.len() {
                    return Err(Error::InvalidWindow(format!(
                        "{} objects need {} maps, got {}",
                        objects.len(),
                        objects.len().saturating_sub(1),
                        maps.len()
                    )));
                }
            }
        }
        for o in &objects {
            if **o.module().algebra() != **ring.base() {
                return Err(Error::AlgebraMismatch("window object is not over the base algebra"));
            }
        }
        let n = objects.len();
        for (k, a) in maps.iter().enumerate() {
            let tgt = &objects[(k + 1) % n];
            if a.source != *objects[k].module() || a.target != *tgt.module() {
                return Err(Error::InvalidWindow(format!("endpoints of α^{} do not match the objects", lo + k as i64)));
            }
            // re-validate components against the ring
            ring.star(a.source.clone(), a.target.clone(), a.components.clone())?;
        }
        Ok(ResolutionWindow {
            ring,
            lo,
            objects,
            maps,
            period,
        })
    }

    /// The period-1 window `⋯ → Ind(P) → Ind(P) → ⋯` of a single map.
    pub fn periodic_one(ring: Arc<TensorRing<S>>, p: Projective<S>, s: StarMorphism<S>) -> Result<Self> {
        if s.source != s.target {
            return Err(dim_mismatch("period-1 window", s.source.dim(), s.target.dim()));
        }
        Self::new(ring, 0, vec![p], vec![s], Some(1))
    }

    pub fn ring(&self) -> &Arc<TensorRing<S>> {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last index with an object.
    pub fn hi(&self) -> i64 {
        self.lo + self.objects.len() as i64 - 1
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn objects(&self) -> &[Projective<S>] {
        &self.objects
    }

    pub fn maps(&self) -> &[StarMorphism<S>] {
        &self.maps
    }

    fn slot(&self, k: i64) -> Result<usize> {
        let off = k - self.lo;
        match self.period {
            Some(p) => Ok(off.rem_euclid(p as i64) as usize),
            None if off >= 0 && (off as usize) < self.objects.len() => Ok(off as usize),
            None => Err(Error::OutOfRange {
                index: off.max(0) as usize,
                max: self.objects.len() - 1,
            }),
        }
    }

    pub fn object(&self, k: i64) -> Result<&Projective<S>> {
        Ok(&self.objects[self.slot(k)?])
    }

    /// `α^k`.
    pub fn map(&self, k: i64) -> Result<&StarMorphism<S>> {
        let s = self.slot(k)?;
        if self.period.is_none() && s >= self.maps.len() {
            return Err(Error::OutOfRange {
                index: s,
                max: self.maps.len().saturating_sub(1),
            });
        }
        Ok(&self.maps[s])
    }

    /// Indices with both an incoming and an outgoing map; one full period when periodic.
    pub fn interior(&self) -> Vec<i64> {
        match self.period {
            Some(p) => (self.lo..self.lo + p as i64).collect(),
            None => (self.lo + 1..self.hi()).collect(),
        }
    }

    pub fn scope(&self) -> Scope {
        match self.period {
            Some(p) => Scope::Periodic(p),
            None => Scope::WindowLocal,
        }
    }

    /// The assembled big matrix of `α^k`.
    pub fn big(&self, k: i64) -> Result<Matrix<S>> {
        self.ring.assemble_matrix(self.map(k)?)
    }
}

/// First column of `b ∘ a` in form (∗): block `j` is `Σ_{i≤j} F^i(b_{j-i}) ∘ a_i`.
pub fn compose_star<S: Scalar>(ring: &TensorRing<S>, a: &StarMorphism<S>, b: &StarMorphism<S>) -> Result<StarMorphism<S>> {
    if a.target != b.source {
        return Err(dim_mismatch("compose_star", a.target.dim(), b.source.dim()));
    }
    let n = ring.nilpotency();
    let blocks = ring.star_blocks(b)?;
    let components = (0..=n)
        .map(|j| {
            let mut acc = Matrix::zeros(blocks.get(0, j).rows(), a.source.dim());
            for i in 0..=j {
                acc = &acc + &(blocks.get(i, j - i) * &a.components[i]);
            }
            acc
        })
        .collect();
    Ok(StarMorphism {
        source: a.source.clone(),
        target: b.target.clone(),
        components,
    })
}

/// C1 at `k`: every block equation of `α^k ∘ α^{k-1}` vanishes.
pub fn check_c1<S: Scalar>(ring: &TensorRing<S>, prev: &StarMorphism<S>, next: &StarMorphism<S>) -> Result<Verdict<S>> {
    let c = compose_star(ring, prev, next)?;
    Ok(match c.components.iter().position(|m| !m.is_zero()) {
        None => Verdict::Pass,
        Some(j) => Verdict::Fail(Witness::C1 {
            j: j + 1,
            residual: c.components[j].clone(),
        }),
    })
}

/// C2 at `k`: every kernel vector of `α^k` has a preimage under `α^{k-1}`. When C1 holds
/// the rank identity is recomputed and must agree.
pub fn check_c2<S: Scalar>(ring: &TensorRing<S>, prev: &StarMorphism<S>, next: &StarMorphism<S>) -> Result<Verdict<S>> {
    if prev.target != next.source {
        return Err(dim_mismatch("check_c2", prev.target.dim(), next.source.dim()));
    }
    let a = ring.assemble_matrix(prev)?;
    let b = ring.assemble_matrix(next)?;
    let kernel = b.kernel_basis();
    let mut verdict = Verdict::Pass;
    for c in 0..kernel.cols() {
        let v = kernel.column(c);
        if a.solve(&Matrix::column_vector(v.clone()))?.is_none() {
            verdict = Verdict::Fail(Witness::C2 { vector: v });
            break;
        }
    }
    if (&b * &a).is_zero() {
        let by_rank = a.rank() + b.rank() == b.cols();
        if by_rank != verdict.passed() {
            return Err(Error::Internal(format!(
                "preimage search and rank identity disagree on C2 (preimages: {}, ranks: {by_rank})",
                verdict.passed()
            )));
        }
    }
    Ok(verdict)
}

/// Tuples `(f_1, …, f_{N+1})` with `f_l ∈ Hom_R(P, F^{l-1}(R))`, as a flat basis.
struct TupleBasis<S: Scalar> {
    source: LeftModule<S>,
    target: LeftModule<S>,
    shapes: Vec<(usize, usize)>,
    members: Vec<StarMorphism<S>>,
}

impl<S: Scalar> TupleBasis<S> {
    fn new(ring: &TensorRing<S>, p: &LeftModule<S>) -> Result<Self> {
        let r = free_module(ring.base(), 1);
        let tower = ring.tower(&r)?;
        let n = ring.nilpotency();
        let shapes: Vec<(usize, usize)> = (0..=n).map(|l| (tower.dim(l), p.dim())).collect();
        let mut members = Vec::new();
        for l in 0..=n {
            for h in hom_basis(p, tower.module(l)) {
                let mut components: Vec<Matrix<S>> = shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
                components[l] = h;
                members.push(StarMorphism {
                    source: p.clone(),
                    target: r.clone(),
                    components,
                });
            }
        }
        Ok(TupleBasis {
            source: p.clone(),
            target: r,
            shapes,
            members,
        })
    }

    fn flat_len(&self) -> usize {
        self.shapes.iter().map(|&(r, c)| r * c).sum()
    }

    fn from_flat(&self, v: &[S]) -> StarMorphism<S> {
        let mut at = 0;
        let components = self
            .shapes
            .iter()
            .map(|&(r, c)| {
                let m = Matrix::unvectorize(r, c, &v[at..at + r * c]);
                at += r * c;
                m
            })
            .collect();
        StarMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
    }
}

fn flatten<S: Scalar>(s: &StarMorphism<S>) -> Vec<S> {
    s.components.iter().flat_map(Matrix::vectorize).collect()
}

/// C3 at `k`, tested against `P = R`: every `f : Ind(P^k) → Ind(R)` with `f ∘ α^{k-1} = 0`
/// factors as `g ∘ α^k`.
pub fn check_c3<S: Scalar>(ring: &TensorRing<S>, prev: &StarMorphism<S>, next: &StarMorphism<S>) -> Result<Verdict<S>> {
    if prev.target != next.source {
        return Err(dim_mismatch("check_c3", prev.target.dim(), next.source.dim()));
    }
    let fs = TupleBasis::new(ring, &prev.target)?;
    if fs.members.is_empty() {
        return Ok(Verdict::Pass);
    }
    let gs = TupleBasis::new(ring, &next.target)?;
    let pulled = TupleBasis::new(ring, &prev.source)?;
    // f ↦ f ∘ α^{k-1}, in coordinates of fs.members
    let constraint_cols: Vec<Vec<S>> = fs
        .members
        .iter()
        .map(|f| compose_star(ring, prev, f).map(|c| flatten(&c)))
        .collect::<Result<_>>()?;
    let constraint = Matrix::from_columns(pulled.flat_len(), &constraint_cols);
    let coeffs = constraint.kernel_basis();
    let ambient = Matrix::from_columns(fs.flat_len(), &fs.members.iter().map(flatten).collect::<Vec<_>>());
    let image_cols: Vec<Vec<S>> = gs
        .members
        .iter()
        .map(|g| compose_star(ring, next, g).map(|c| flatten(&c)))
        .collect::<Result<_>>()?;
    let image = Matrix::from_columns(fs.flat_len(), &image_cols);
    for c in 0..coeffs.cols() {
        let f = &ambient * &Matrix::column_vector(coeffs.column(c));
        if image.solve(&f)?.is_none() {
            return Ok(Verdict::Fail(Witness::C3 {
                functional: fs.from_flat(&f.column(0)).components,
            }));
        }
    }
    Ok(Verdict::Pass)
}

pub fn check_position<S: Scalar>(w: &ResolutionWindow<S>, k: i64) -> Result<PositionReport<S>> {
    let prev = w.map(k - 1)?;
    let next = w.map(k)?;
    let ring = &w.ring;
    Ok(PositionReport {
        k,
        c1: check_c1(ring, prev, next)?,
        c2: check_c2(ring, prev, next)?,
        c3: check_c3(ring, prev, next)?,
    })
}

/// C1–C3 at every interior index, in index order; positions are checked on separate threads.
pub fn check_complete<S: Scalar>(w: &ResolutionWindow<S>) -> Result<CheckReport<S>> {
    let ks = w.interior();
    let positions: Vec<Result<PositionReport<S>>> = if ks.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ks.iter().map(|&k| scope.spawn(move || check_position(w, k))).collect();
            handles.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
        })
    } else {
        ks.iter().map(|&k| check_position(w, k)).collect()
    };
    Ok(CheckReport {
        scope: w.scope(),
        labels: ["C1", "C2", "C3"],
        positions: positions.into_iter().collect::<Result<_>>()?,
    })
}

/// Re-verifies a witness from assembled matrices. True iff it is a genuine violation.
pub fn replay<S: Scalar>(ring: &TensorRing<S>, prev: &StarMorphism<S>, next: &StarMorphism<S>, w: &Witness<S>) -> Result<bool> {
    let a = ring.assemble_matrix(prev)?;
    let b = ring.assemble_matrix(next)?;
    let ip = ring.ind(&prev.source)?;
    let iq = ring.ind(&next.target)?;
    match w {
        Witness::C1 { j, residual } => {
            if *j == 0 || *j > ring.nilpotency() + 1 {
                return Ok(false);
            }
            let prod = &b * &a;
            let block = prod.block(iq.offsets[j - 1], 0, iq.block_dim(j - 1), ip.block_dim(0));
            Ok(!block.is_zero() && block == *residual)
        }
        Witness::C2 { vector } => {
            if vector.len() != b.cols() {
                return Ok(false);
            }
            let v = Matrix::column_vector(vector.clone());
            let in_kernel = (&b * &v).is_zero();
            let in_image = intersection_dim(b.cols(), std::slice::from_ref(vector), &columns(&a)) == 1;
            Ok(in_kernel && !in_image && vector.iter().any(|x| !x.is_zero()))
        }
        Witness::C3 { functional } => {
            let r = free_module(ring.base(), 1);
            let f = match ring.star(next.source.clone(), r.clone(), functional.clone()) {
                Ok(f) => f,
                Err(_) => return Ok(false),
            };
            let fb = ring.assemble_matrix(&f)?;
            if !(&fb * &a).is_zero() {
                return Ok(false);
            }
            // factorizations through α^k, from the independently solved Hom_T space
            let ir = ring.ind(&r)?;
            let factors: Vec<Vec<S>> = ring
                .tmorphism_space(&iq.tmodule, &ir.tmodule)
                .iter()
                .map(|g| (g * &b).vectorize())
                .collect();
            if fb.is_zero() {
                return Ok(false);
            }
            let target = fb.vectorize();
            Ok(intersection_dim(target.len(), &[target], &factors) == 0)
        }
    }
}

fn columns<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    (0..m.cols()).map(|c| m.column(c)).collect()
}

/// Replays every witness in a report against its window.
pub fn replay_report<S: Scalar>(w: &ResolutionWindow<S>, report: &CheckReport<S>) -> Result<bool> {
    for p in &report.positions {
        for v in [&p.c1, &p.c2, &p.c3] {
            if let Some(wit) = v.witness() {
                if !replay(&w.ring, w.map(p.k - 1)?, w.map(p.k)?, wit)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The Gorenstein projective `G = ker α^k ⊆ Ind(P^k)` with the inclusion.
#[derive(Clone, Debug)]
pub struct GpModule<S> {
    pub module: TModule<S>,
    /// Columns are a basis of `ker α^k` inside `Ind(P^k)`.
    pub inclusion: Matrix<S>,
}

/// `ker α^k` with the structure map restricted from `Ind(P^k)`.
pub fn extract_gp<S: Scalar>(w: &ResolutionWindow<S>, k: i64) -> Result<GpModule<S>> {
    let ring = &w.ring;
    let ind = ring.ind(w.object(k)?.module())?;
    let big = w.big(k)?;
    let inclusion = big.kernel_basis();
    let g = ind.tmodule.x.submodule(&inclusion)?;
    let fg = ring.functor(&g)?;
    let f_incl = ring.functor_matrix(&inclusion, &fg, &ind.tmodule.fx);
    let image = &ind.tmodule.u * &f_incl;
    let u = inclusion
        .solve(&image)?
        .ok_or_else(|| Error::Internal("structure map does not restrict to ker α^k".into()))?;
    let module = ring.tmodule(g, u)?;
    if !ring.is_tmorphism(&module, &ind.tmodule, &inclusion) {
        return Err(Error::Internal("kernel inclusion is not a T-map".into()));
    }
    Ok(GpModule { module, inclusion })
}

/// Period-1 check of `⋯ → Ind(P) --s--> Ind(P) --s--> ⋯`, reported with labels SC1–SC3.
pub fn check_strongly_gp<S: Scalar>(ring: Arc<TensorRing<S>>, p: Projective<S>, s: StarMorphism<S>) -> Result<CheckReport<S>> {
    if s.source.dim() != s.target.dim() {
        return Err(dim_mismatch("check_strongly_gp", s.source.dim(), s.target.dim()));
    }
    let w = ResolutionWindow::periodic_one(ring, p, s)?;
    let mut report = check_complete(&w)?;
    report.labels = ["SC1", "SC2", "SC3"];
    Ok(report)
}

/// A complex of projective `R`-modules, `maps[k] : objects[k] → objects[k+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RComplex<S> {
    pub lo: i64,
    pub objects: Vec<Projective<S>>,
    pub maps: Vec<Matrix<S>>,
    pub period: Option<usize>,
}

impl<S: Scalar> RComplex<S> {
    /// The same complex as an `N = 0` window over the trivial tensor ring `T_R(0) = R`.
    pub fn as_base_window(&self) -> Result<ResolutionWindow<S>> {
        let r = self
            .objects
            .first()
            .ok_or_else(|| Error::InvalidWindow("complex has no objects".into()))?
            .module()
            .algebra()
            .clone();
        let ring = Arc::new(TensorRing::trivial(r));
        self.window_over(ring, |_, f| vec![f.clone()])
    }

    fn window_over(
        &self,
        ring: Arc<TensorRing<S>>,
        components: impl Fn(&TensorRing<S>, &Matrix<S>) -> Vec<Matrix<S>>,
    ) -> Result<ResolutionWindow<S>> {
        let n = self.objects.len();
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let src = self.objects[k].module().clone();
                let tgt = self.objects[(k + 1) % n].module().clone();
                ring.star(src, tgt, components(&ring, f))
            })
            .collect::<Result<Vec<_>>>()?;
        ResolutionWindow::new(ring, self.lo, self.objects.clone(), maps, self.period)
    }
}

/// Which half of the compatibility hypothesis failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompatKind {
    /// `F^i(complex)` is not exact.
    Tensor,
    /// `Hom_R(complex, F^i(R))` is not exact.
    Hom,
}

impl fmt::Display for CompatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatKind::Tensor => "tensor",
            CompatKind::Hom => "hom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatFailure<S> {
    pub i: usize,
    pub k: i64,
    pub kind: CompatKind,
    /// Tensor: a vector of `F^i(P^k)` in the kernel but not the image (or, if the
    /// image of `F^i(f^{k-1})` is not killed, a vector of `F^i(P^{k-1})` witnessing that).
    /// Hom: a map `P^k → F^i(R)` killing `f^{k-1}` that does not factor through `f^k`.
    pub witness: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport<S> {
    /// The complex itself as an `N = 0` window.
    pub base: CheckReport<S>,
    pub levels: Vec<usize>,
    pub failures: Vec<CompatFailure<S>>,
}

impl<S> CompatibilityReport<S> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&CompatFailure<S>> {
        self.failures.first()
    }
}

/// Exactness of `F^i(complex)` and `Hom_R(complex, F^i(R))` for `1 ≤ i ≤ N`, after
/// certifying the complex as a complete resolution over `R`.
pub fn check_compatibility<S: Scalar>(ring: &TensorRing<S>, complex: &RComplex<S>) -> Result<CompatibilityReport<S>> {
    let base_window = complex.as_base_window()?;
    let base = check_complete(&base_window)?;
    if !base.passed() {
        let (k, label, _) = base.failures().next().expect("failing report has a witness");
        return Err(Error::NotComplete(format!("{label} fails at k = {k}")));
    }
    let n = ring.nilpotency();
    let r = free_module(ring.base(), 1);
    let rt = ring.tower(&r)?;
    let ks = base_window.interior();
    let mut failures = Vec::new();
    for i in 1..=n {
        for &k in &ks {
            let prev = base_window.map(k - 1)?;
            let next = base_window.map(k)?;
            let tp = ring.tower(&prev.source)?;
            let tm = ring.tower(&prev.target)?;
            let tn = ring.tower(&next.target)?;
            let fa = crate::bimodule::power_of_map(ring.bimodule(), i, &prev.components[0], &tp, 0, &tm, 0);
            let fb = crate::bimodule::power_of_map(ring.bimodule(), i, &next.components[0], &tm, 0, &tn, 0);
            if let Some(witness) = exactness_witness(&fa, &fb)? {
                failures.push(CompatFailure {
                    i,
                    k,
                    kind: CompatKind::Tensor,
                    witness,
                });
            }
            let target = rt.module(i);
            if let Some(h) = hom_exactness_witness(&prev.components[0], &next.components[0], &prev.source, &prev.target, &next.target, target)? {
                failures.push(CompatFailure {
                    i,
                    k,
                    kind: CompatKind::Hom,
                    witness: h,
                });
            }
        }
    }
    Ok(CompatibilityReport {
        base,
        levels: (1..=n).collect(),
        failures,
    })
}

/// A column vector witnessing that `X --a--> Y --b--> Z` is not exact at `Y`.
fn exactness_witness<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Option<Matrix<S>>> {
    let ba = b * a;
    if !ba.is_zero() {
        let c = (0..ba.cols()).find(|&c| ba.column(c).iter().any(|x| !x.is_zero())).expect("nonzero");
        let mut v = Matrix::zeros(a.cols(), 1);
        v[(c, 0)] = S::one();
        return Ok(Some(v));
    }
    let kernel = b.kernel_basis();
    for c in 0..kernel.cols() {
        let v = Matrix::column_vector(kernel.column(c));
        if a.solve(&v)?.is_none() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// A map `h : Y → T` with `h ∘ a = 0` that is not `g ∘ b` for any `g : Z → T`.
fn hom_exactness_witness<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    x: &LeftModule<S>,
    y: &LeftModule<S>,
    z: &LeftModule<S>,
    t: &LeftModule<S>,
) -> Result<Option<Matrix<S>>> {
    let hy = hom_basis(y, t);
    if hy.is_empty() {
        return Ok(None);
    }
    let rows = t.dim() * x.dim();
    let pulled: Vec<Vec<S>> = hy.iter().map(|h| (h * a).vectorize()).collect();
    let coeffs = Matrix::from_columns(rows, &pulled).kernel_basis();
    let ambient = Matrix::from_columns(t.dim() * y.dim(), &hy.iter().map(Matrix::vectorize).collect::<Vec<_>>());
    let image: Vec<Vec<S>> = hom_basis(z, t).iter().map(|g| (g * b).vectorize()).collect();
    let image = Matrix::from_columns(t.dim() * y.dim(), &image);
    for c in 0..coeffs.cols() {
        let h = &ambient * &Matrix::column_vector(coeffs.column(c));
        if image.solve(&h)?.is_none() {
            return Ok(Some(Matrix::unvectorize(t.dim(), y.dim(), &h.column(0))));
        }
    }
    Ok(None)
}

/// `α^k = (f^k, 0, …, 0)` on `Ind(P^k)`. Refused unless the compatibility conditions pass,
/// and the result is checked again before it is returned.
pub fn lift_resolution<S: Scalar>(ring: Arc<TensorRing<S>>, complex: &RComplex<S>) -> Result<ResolutionWindow<S>> {
    let compat = check_compatibility(&ring, complex)?;
    if let Some(f) = compat.first_failure() {
        return Err(Error::NotCompatible {
            i: f.i,
            kind: format!("{} at k = {}", f.kind, f.k),
        });
    }
    let w = lifted_window(&ring, complex)?;
    let report = check_complete(&w)?;
    if !report.passed() {
        return Err(Error::Internal("lifted window fails the completeness check".into()));
    }
    Ok(w)
}

fn lifted_window<S: Scalar>(ring: &Arc<TensorRing<S>>, complex: &RComplex<S>) -> Result<ResolutionWindow<S>> {
    let n = complex.objects.len();
    let maps = complex
        .maps
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let src = complex.objects[k].module();
            let tgt = complex.objects[(k + 1) % n].module();
            let mut s = ring.zero_star(src, tgt)?;
            s.components[0] = f.clone();
            ring.star(s.source, s.target, s.components)
        })
        .collect::<Result<Vec<_>>>()?;
    ResolutionWindow::new(ring.clone(), complex.lo, complex.objects.clone(), maps, complex.period)
}

/// Homology dimension of `Hom_T(window, Ind(R))` at each interior index, from `Hom_T`
/// spaces solved directly from the `T`-map equations.
pub fn hom_complex_oracle<S: Scalar>(w: &ResolutionWindow<S>) -> Result<Vec<(i64, usize)>> {
    let ring = &w.ring;
    let ir = ring.ind(&free_module(ring.base(), 1))?;
    let mut out = Vec::new();
    for k in w.interior() {
        let here = ring.ind(w.object(k)?.module())?;
        let after = ring.ind(w.object(k + 1)?.module())?;
        let a = w.big(k - 1)?;
        let b = w.big(k)?;
        let hk = ring.tmorphism_space(&here.tmodule, &ir.tmodule);
        let ambient_len = ir.dim() * here.dim();
        // ker of φ ↦ φ ∘ α^{k-1}
        let pulled: Vec<Vec<S>> = hk.iter().map(|phi| (phi * &a).vectorize()).collect();
        let kernel: Vec<Vec<S>> = if hk.is_empty() {
            Vec::new()
        } else {
            let coeffs = Matrix::from_columns(ir.dim() * a.cols(), &pulled).kernel_basis();
            let basis = Matrix::from_columns(ambient_len, &hk.iter().map(Matrix::vectorize).collect::<Vec<_>>());
            (0..coeffs.cols())
                .map(|c| (&basis * &Matrix::column_vector(coeffs.column(c))).column(0))
                .collect()
        };
        let image: Vec<Vec<S>> = ring
            .tmorphism_space(&after.tmodule, &ir.tmodule)
            .iter()
            .map(|psi| (psi * &b).vectorize())
            .collect();
        let homology = kernel.len() - intersection_dim(ambient_len, &kernel, &image);
        out.push((k, homology));
    }
    Ok(out)
}

/// Oracle verdicts at one interior index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OraclePosition {
    pub k: i64,
    /// `im α^{k-1} = ker α^k` for the assembled matrices.
    pub exact: bool,
    /// Homology of `Hom_T(window, T)` at `k`.
    pub homology: usize,
}

/// The checker-independent verdicts: assembled-matrix exactness and [`hom_complex_oracle`].
pub fn oracle_positions<S: Scalar>(w: &ResolutionWindow<S>) -> Result<Vec<OraclePosition>> {
    let homology = hom_complex_oracle(w)?;
    homology
        .into_iter()
        .map(|(k, h)| {
            Ok(OraclePosition {
                k,
                exact: Matrix::is_exact_pair(&w.big(k - 1)?, &w.big(k)?)?,
                homology: h,
            })
        })
        .collect()
}

/// First index where `C1 ∧ C2` differs from exactness or `C3` from vanishing homology.
pub fn first_disagreement<S>(report: &CheckReport<S>, oracle: &[OraclePosition]) -> Option<i64> {
    if report.positions.len() != oracle.len() {
        return Some(report.positions.first().map_or(0, |p| p.k));
    }
    report.positions.iter().zip(oracle).find_map(|(p, o)| {
        let exact = p.c1.passed() && p.c2.passed();
        (p.k != o.k || exact != o.exact || p.c3.passed() != (o.homology == 0)).then_some(p.k)
    })
}
