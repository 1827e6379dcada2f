//! Modules over the tensor ring `T = T_R(M)` as pairs `(X, u)` with
//! `u : M ⊗_R X → X`, the functors between `Mod R` and `Mod T`, and maps of
//! form (∗) between induced modules.
//!
//! [`TensorRing`] bundles `R`, an `N`-nilpotent bimodule `M` and a cache of
//! [`Tower`]s. Every `u` is stored against the canonical model of `F(X)`,
//! so all equalities below are plain matrix equalities.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{hom_basis, Algebra, LeftModule, ModuleMap, Projective};
use crate::bimodule::{tensor_matrix, tensor_module, Bimodule, TensorPowers, TensoredModule, Tower};
use crate::error::{dim_mismatch, Error, Result};
use crate::exactlin::Matrix;
use crate::scalar::Scalar;

/// `R`, an `N`-nilpotent `R`-bimodule `M`, and cached `F`-towers.
pub struct TensorRing<S: Scalar> {
    base: Arc<Algebra<S>>,
    bimodule: Bimodule<S>,
    nilpotency: usize,
    powers: TensorPowers<S>,
    towers: Mutex<HashMap<LeftModule<S>, Arc<Tower<S>>>>,
    algebra: OnceLock<Arc<Algebra<S>>>,
}

impl<S: Scalar> fmt::Debug for TensorRing<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorRing")
            .field("base_dim", &self.base.dim())
            .field("bimodule_dim", &self.bimodule.dim())
            .field("nilpotency", &self.nilpotency)
            .finish()
    }
}

/// A `T`-module `(X, u)`; `fx` is the canonical model of `M ⊗_R X` that `u` is written against.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TModule<S> {
    pub x: LeftModule<S>,
    pub fx: TensoredModule<S>,
    pub u: Matrix<S>,
}

impl<S: Scalar> TModule<S> {
    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

/// A map of `T`-modules: `f ∘ u = u' ∘ F(f)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TMorphism<S> {
    pub source: TModule<S>,
    pub target: TModule<S>,
    pub f: Matrix<S>,
}

/// `Ind(X) = (⊕_{i=0}^N F^i(X), c_X)` with its block decomposition.
#[derive(Clone, Debug)]
pub struct Induced<S> {
    pub tower: Arc<Tower<S>>,
    pub tmodule: TModule<S>,
    /// `offsets[i]` is where block `F^i(X)` starts; `offsets[N+1]` is the total dimension.
    pub offsets: Vec<usize>,
}

impl<S: Scalar> Induced<S> {
    pub fn block_dim(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("nonempty")
    }
}

/// The first block column `(α_1, …, α_{N+1})` of a map `Ind(P) → Ind(Q)`; `components[i]`
/// maps `P → F^i(Q)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarMorphism<S> {
    pub source: LeftModule<S>,
    pub target: LeftModule<S>,
    pub components: Vec<Matrix<S>>,
}

/// `F^t(α_{l+1})` for all `t + l ≤ N`, indexed `[t][l]`.
#[derive(Clone, Debug)]
pub struct StarBlocks<S> {
    pub table: Vec<Vec<Matrix<S>>>,
}

impl<S: Scalar> StarBlocks<S> {
    pub fn get(&self, t: usize, l: usize) -> &Matrix<S> {
        &self.table[t][l]
    }
}

impl<S: Scalar> TensorRing<S> {
    /// Fails unless `M^{⊗(N+1)} = 0`.
    pub fn new(base: Arc<Algebra<S>>, bimodule: Bimodule<S>, nilpotency: usize) -> Result<Self> {
        if **bimodule.left_algebra() != *base || **bimodule.right_algebra() != *base {
            return Err(Error::AlgebraMismatch("bimodule is not over the base algebra"));
        }
        let powers = TensorPowers::compute(&bimodule, nilpotency + 1)?;
        let top = powers.powers[nilpotency + 1].dim();
        if top != 0 {
            return Err(Error::NotNilpotent {
                power: nilpotency + 1,
                dim: top,
            });
        }
        Ok(TensorRing {
            base,
            bimodule,
            nilpotency,
            powers,
            towers: Mutex::new(HashMap::new()),
            algebra: OnceLock::new(),
        })
    }

    /// `T_R(0) = R`.
    pub fn trivial(base: Arc<Algebra<S>>) -> Self {
        let zero = Bimodule::zero(base.clone(), base.clone());
        Self::new(base, zero, 0).expect("zero bimodule is 0-nilpotent")
    }

    pub fn base(&self) -> &Arc<Algebra<S>> {
        &self.base
    }

    pub fn bimodule(&self) -> &Bimodule<S> {
        &self.bimodule
    }

    /// `N`.
    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    pub fn powers(&self) -> &TensorPowers<S> {
        &self.powers
    }

    /// `F^0(X), …, F^{N+1}(X)`; memoized per module.
    pub fn tower(&self, x: &LeftModule<S>) -> Result<Arc<Tower<S>>> {
        if !Arc::ptr_eq(x.algebra(), &self.base) && **x.algebra() != *self.base {
            return Err(Error::AlgebraMismatch("module is not over the base algebra"));
        }
        if let Some(t) = self.towers.lock().expect("tower cache poisoned").get(x) {
            return Ok(t.clone());
        }
        // Built outside the lock; concurrent builders produce identical towers.
        let t = Arc::new(Tower::build(&self.bimodule, x, self.nilpotency + 1)?);
        self.towers
            .lock()
            .expect("tower cache poisoned")
            .entry(x.clone())
            .or_insert_with(|| t.clone());
        Ok(t)
    }

    /// The canonical model of `F(X)`.
    pub fn functor(&self, x: &LeftModule<S>) -> Result<TensoredModule<S>> {
        Ok(self.tower(x)?.levels[1].clone())
    }

    /// `F(f)` for a matrix `f : X → Y` against the canonical models.
    pub fn functor_matrix(&self, f: &Matrix<S>, fx: &TensoredModule<S>, fy: &TensoredModule<S>) -> Matrix<S> {
        tensor_matrix(self.bimodule.dim(), f, fx, fy)
    }

    /// Validated `(X, u)`.
    pub fn tmodule(&self, x: LeftModule<S>, u: Matrix<S>) -> Result<TModule<S>> {
        let fx = self.functor(&x)?;
        if u.shape() != (x.dim(), fx.dim()) {
            return Err(dim_mismatch(
                "TModule structure map",
                format!("{}x{}", x.dim(), fx.dim()),
                format!("{:?}", u.shape()),
            ));
        }
        if !crate::algebra::is_linear(&fx.result, &x, &u) {
            return Err(Error::NotLinear("structure map u is not R-linear".into()));
        }
        let t = TModule { x, fx, u };
        self.check_nilpotent_action(&t)?;
        Ok(t)
    }

    /// The iterated action `F^{N+1}(X) → X` must vanish. Always true once `M` is
    /// `N`-nilpotent, because then `F^{N+1}(X) = 0`.
    fn check_nilpotent_action(&self, t: &TModule<S>) -> Result<()> {
        let top = self.iterated_action(t, self.nilpotency + 1)?;
        if !top.is_zero() {
            return Err(Error::InvalidModule("iterated structure map of length N+1 is nonzero".into()));
        }
        Ok(())
    }

    /// `u_i = u ∘ F(u) ∘ … ∘ F^{i-1}(u) : F^i(X) → X`.
    pub fn iterated_action(&self, t: &TModule<S>, i: usize) -> Result<Matrix<S>> {
        let tower = self.tower(&t.x)?;
        if i > tower.top() {
            return Err(Error::OutOfRange { index: i, max: tower.top() });
        }
        let mut acc = Matrix::identity(t.dim());
        for level in 1..=i {
            // acc : F^{level-1}(X) → X; F(acc) : F^{level}(X) → F(X)
            let lifted = self.functor_matrix(&acc, &tower.levels[level], &tower.levels[1]);
            acc = &t.u * &lifted;
        }
        Ok(acc)
    }

    pub fn is_tmorphism(&self, source: &TModule<S>, target: &TModule<S>, f: &Matrix<S>) -> bool {
        f.shape() == (target.dim(), source.dim())
            && crate::algebra::is_linear(&source.x, &target.x, f)
            && (f * &source.u) == (&target.u * &self.functor_matrix(f, &source.fx, &target.fx))
    }

    pub fn tmorphism(&self, source: TModule<S>, target: TModule<S>, f: Matrix<S>) -> Result<TMorphism<S>> {
        if !self.is_tmorphism(&source, &target, &f) {
            return Err(Error::NotTMorphism("f ∘ u != u' ∘ F(f)".into()));
        }
        Ok(TMorphism { source, target, f })
    }

    pub fn forget(t: &TModule<S>) -> &LeftModule<S> {
        &t.x
    }

    /// `S(X) = (X, 0)`.
    pub fn stalk(&self, x: &LeftModule<S>) -> Result<TModule<S>> {
        let fx = self.functor(x)?;
        let u = Matrix::zeros(x.dim(), fx.dim());
        Ok(TModule { x: x.clone(), fx, u })
    }

    /// `C((X, u)) = coker u` together with the quotient map `X → coker u`.
    pub fn coker_functor(&self, t: &TModule<S>) -> Result<(LeftModule<S>, Matrix<S>)> {
        t.x.quotient(&t.u)
    }

    pub fn ind(&self, x: &LeftModule<S>) -> Result<Induced<S>> {
        let n = self.nilpotency;
        let tower = self.tower(x)?;
        let blocks: Vec<LeftModule<S>> = (0..=n).map(|i| tower.module(i).clone()).collect();
        let mut offsets = vec![0];
        for b in &blocks {
            offsets.push(offsets.last().unwrap() + b.dim());
        }
        let total = offsets[n + 1];
        let sum = LeftModule::direct_sum_all(self.base.clone(), &blocks)?;
        let fsum = tensor_module(&self.bimodule, &sum)?;
        // c_X: F(⊕ F^i X) → ⊕_{i≥1} F^i X, block i+1 receiving F(π_i).
        let mut u = Matrix::zeros(total, fsum.dim());
        for i in 0..n {
            let pi = projection_onto(&offsets, i, total);
            let block = tensor_matrix(self.bimodule.dim(), &pi, &fsum, &tower.levels[i + 1]);
            u.set_block(offsets[i + 1], 0, &block);
        }
        let tmodule = TModule { x: sum, fx: fsum, u };
        debug_assert!(crate::algebra::is_linear(&tmodule.fx.result, &tmodule.x, &tmodule.u));
        Ok(Induced { tower, tmodule, offsets })
    }

    /// `Ind(f)`: block diagonal with blocks `F^i(f)`.
    pub fn ind_map(&self, f: &ModuleMap<S>) -> Result<(Induced<S>, Induced<S>, TMorphism<S>)> {
        let src = self.ind(&f.source)?;
        let tgt = self.ind(&f.target)?;
        let blocks: Vec<Matrix<S>> = (0..=self.nilpotency)
            .map(|i| crate::bimodule::power_of_map(&self.bimodule, i, &f.mat, &src.tower, 0, &tgt.tower, 0))
            .collect();
        let mat = Matrix::block_diag(&blocks);
        let m = self.tmorphism(src.tmodule.clone(), tgt.tmodule.clone(), mat)?;
        Ok((src, tgt, m))
    }

    /// Validated form-(∗) data: `components[i] : P → F^i(Q)` must be R-linear.
    pub fn star(&self, source: LeftModule<S>, target: LeftModule<S>, components: Vec<Matrix<S>>) -> Result<StarMorphism<S>> {
        let n = self.nilpotency;
        if components.len() != n + 1 {
            return Err(dim_mismatch("StarMorphism components", n + 1, components.len()));
        }
        let tq = self.tower(&target)?;
        for (i, c) in components.iter().enumerate() {
            if c.shape() != (tq.dim(i), source.dim()) {
                return Err(Error::InvalidWindow(format!(
                    "component α_{} has shape {:?}, expected {}x{}",
                    i + 1,
                    c.shape(),
                    tq.dim(i),
                    source.dim()
                )));
            }
            if !crate::algebra::is_linear(&source, tq.module(i), c) {
                return Err(Error::NotLinear(format!("component α_{} is not R-linear", i + 1)));
            }
        }
        Ok(StarMorphism { source, target, components })
    }

    pub fn zero_star(&self, source: &LeftModule<S>, target: &LeftModule<S>) -> Result<StarMorphism<S>> {
        let tq = self.tower(target)?;
        let components = (0..=self.nilpotency).map(|i| Matrix::zeros(tq.dim(i), source.dim())).collect();
        Ok(StarMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn star_blocks(&self, s: &StarMorphism<S>) -> Result<StarBlocks<S>> {
        let n = self.nilpotency;
        let tp = self.tower(&s.source)?;
        let tq = self.tower(&s.target)?;
        let mut table: Vec<Vec<Matrix<S>>> = vec![s.components.clone()];
        for t in 1..=n {
            let row = (0..=n - t)
                .map(|l| tensor_matrix(self.bimodule.dim(), &table[t - 1][l], &tp.levels[t], &tq.levels[t + l]))
                .collect();
            table.push(row);
        }
        Ok(StarBlocks { table })
    }

    /// The big matrix: block `(j, i)` is `F^{i}(α_{j-i+1})` for `j ≥ i` (0-based), zero above.
    pub fn assemble_matrix(&self, s: &StarMorphism<S>) -> Result<Matrix<S>> {
        let n = self.nilpotency;
        let tp = self.tower(&s.source)?;
        let tq = self.tower(&s.target)?;
        let blocks = self.star_blocks(s)?;
        let row_off = offsets_of(&tq, n);
        let col_off = offsets_of(&tp, n);
        let mut big = Matrix::zeros(row_off[n + 1], col_off[n + 1]);
        for i in 0..=n {
            for j in i..=n {
                big.set_block(row_off[j], col_off[i], blocks.get(i, j - i));
            }
        }
        Ok(big)
    }

    /// Assembles form (∗) and certifies the result is a map `Ind(P) → Ind(Q)` of `T`-modules.
    pub fn assemble_star(&self, s: &StarMorphism<S>) -> Result<TMorphism<S>> {
        let big = self.assemble_matrix(s)?;
        let src = self.ind(&s.source)?;
        let tgt = self.ind(&s.target)?;
        self.tmorphism(src.tmodule, tgt.tmodule, big)
    }

    /// Reads `(α_1, …, α_{N+1})` off the first block column and checks that form (∗)
    /// reproduces the whole matrix.
    pub fn decompose_star(&self, t: &TMorphism<S>, p: &LeftModule<S>, q: &LeftModule<S>) -> Result<StarMorphism<S>> {
        let n = self.nilpotency;
        let ip = self.ind(p)?;
        let iq = self.ind(q)?;
        if t.f.shape() != (iq.dim(), ip.dim()) {
            return Err(dim_mismatch(
                "decompose_star",
                format!("{}x{}", iq.dim(), ip.dim()),
                format!("{:?}", t.f.shape()),
            ));
        }
        let components = (0..=n)
            .map(|j| t.f.block(iq.offsets[j], 0, iq.block_dim(j), ip.block_dim(0)))
            .collect();
        let s = self.star(p.clone(), q.clone(), components)?;
        let rebuilt = self.assemble_matrix(&s)?;
        if rebuilt != t.f {
            for i in 0..=n {
                for j in 0..=n {
                    let a = rebuilt.block(iq.offsets[j], ip.offsets[i], iq.block_dim(j), ip.block_dim(i));
                    let b = t.f.block(iq.offsets[j], ip.offsets[i], iq.block_dim(j), ip.block_dim(i));
                    if a != b {
                        return Err(Error::NotTMorphism(format!("block ({}, {}) is not of form (∗)", j + 1, i + 1)));
                    }
                }
            }
        }
        Ok(s)
    }

    /// A basis of all `T`-module maps `source → target`, solved from the defining
    /// equations directly (no use of form (∗)).
    pub fn tmorphism_space(&self, source: &TModule<S>, target: &TModule<S>) -> Vec<Matrix<S>> {
        let (ds, dt) = (source.dim(), target.dim());
        if ds == 0 || dt == 0 {
            return Vec::new();
        }
        let mut columns = Vec::with_capacity(ds * dt);
        for b in 0..ds {
            for a in 0..dt {
                let mut e = Matrix::zeros(dt, ds);
                e[(a, b)] = S::one();
                let mut v = Vec::new();
                for (rs, rt) in source.x.action().iter().zip(target.x.action()) {
                    v.extend((&(&e * rs) - &(rt * &e)).vectorize());
                }
                let fe = self.functor_matrix(&e, &source.fx, &target.fx);
                v.extend((&(&e * &source.u) - &(&target.u * &fe)).vectorize());
                columns.push(v);
            }
        }
        let rows = columns[0].len();
        let kernel = Matrix::from_columns(rows, &columns).kernel_basis();
        (0..kernel.cols())
            .map(|c| Matrix::unvectorize(dt, ds, &kernel.column(c)))
            .collect()
    }

    /// Basis of `Hom_R(x, y)`.
    pub fn hom(&self, x: &LeftModule<S>, y: &LeftModule<S>) -> Vec<Matrix<S>> {
        hom_basis(x, y)
    }

    /// The ring `T_R(M) = ⊕_{i=0}^N M^{⊗i}` by structure constants, graded basis in order.
    pub fn tensor_ring_algebra(&self) -> Arc<Algebra<S>> {
        self.algebra
            .get_or_init(|| Arc::new(self.build_algebra().expect("tensor ring is an algebra")))
            .clone()
    }

    /// `grade_offsets()[i]` is where `M^{⊗i}` starts inside the basis of `T`.
    pub fn grade_offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for p in &self.powers.powers[..=self.nilpotency] {
            off.push(off.last().unwrap() + p.dim());
        }
        off
    }

    fn build_algebra(&self) -> Result<Algebra<S>> {
        let n = self.nilpotency;
        let off = self.grade_offsets();
        let dim = off[n + 1];
        let grade_of = |idx: usize| (0..=n).find(|&g| idx < off[g + 1]).expect("index in range");
        let p = &self.powers;
        let mut unit = vec![S::zero(); dim];
        unit[..self.base.dim()].clone_from_slice(self.base.unit());
        Algebra::from_table(dim, unit, |x, y| {
            let (a, b) = (grade_of(x), grade_of(y));
            let (s, t) = (x - off[a], y - off[b]);
            let mut out = vec![S::zero(); dim];
            if a + b > n {
                return out;
            }
            let v = if a == 0 {
                p.powers[b].left_action()[s].column(t)
            } else if b == 0 {
                p.powers[a].right_action()[t].column(s)
            } else {
                let xs = Matrix::column_vector(p.sections[a].column(s));
                let yt = Matrix::column_vector(p.sections[b].column(t));
                (&p.lifts[a + b] * &xs.kron(&yt)).column(0)
            };
            out[off[a + b]..off[a + b + 1]].clone_from_slice(&v);
            out
        })
    }

    /// The `T`-module structure on `X` given by `(X, u)`: grade-`i` elements act by `u_i`.
    pub fn tmodule_to_algebra_module(&self, t: &TModule<S>) -> Result<LeftModule<S>> {
        let n = self.nilpotency;
        let talg = self.tensor_ring_algebra();
        let tower = self.tower(&t.x)?;
        let dx = t.dim();
        let dm = self.bimodule.dim();
        let p = &self.powers;
        let mut action: Vec<Matrix<S>> = t.x.action().to_vec();
        // nested: field-level M^{⊗_k i} ⊗_k X → F^i(X)
        let mut nested = Matrix::identity(dx);
        for i in 1..=n {
            nested = &tower.levels[i].projection * &Matrix::identity(dm).kron(&nested);
            let ui = self.iterated_action(t, i)?;
            let act_i = &ui * &nested;
            let ix = Matrix::identity(dx);
            for s in 0..p.powers[i].dim() {
                let lift = Matrix::column_vector(p.sections[i].column(s)).kron(&ix);
                action.push(&act_i * &lift);
            }
        }
        LeftModule::new(talg, dx, action)
    }
}

fn offsets_of<S: Scalar>(t: &Tower<S>, n: usize) -> Vec<usize> {
    let mut off = vec![0];
    for i in 0..=n {
        off.push(off.last().unwrap() + t.dim(i));
    }
    off
}

/// The block projection `⊕ F^j X → F^i X`.
fn projection_onto<S: Scalar>(offsets: &[usize], i: usize, total: usize) -> Matrix<S> {
    let d = offsets[i + 1] - offsets[i];
    let mut m = Matrix::zeros(d, total);
    for k in 0..d {
        m[(k, offsets[i] + k)] = S::one();
    }
    m
}

/// Projectives are used through their underlying modules.
pub fn projective_module<S: Scalar>(p: &Projective<S>) -> &LeftModule<S> {
    p.module()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::free_module;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    fn m1(v: i64) -> Matrix<F2> {
        Matrix::from_i64_rows(&[&[v]])
    }

    fn triangular() -> TensorRing<F2> {
        let r = Arc::new(Algebra::split_semisimple(2));
        let m = Bimodule::over(&r, 1, vec![m1(1), m1(0)], vec![m1(0), m1(1)]).unwrap();
        TensorRing::new(r, m, 1).unwrap()
    }

    fn simple(r: &Arc<Algebra<F2>>, i: usize) -> LeftModule<F2> {
        LeftModule::new(r.clone(), 1, (0..2).map(|k| m1((k == i) as i64)).collect()).unwrap()
    }

    #[test]
    fn rejects_non_nilpotent() {
        let r = triangular();
        let err = TensorRing::new(r.base().clone(), r.bimodule().clone(), 0).unwrap_err();
        assert!(matches!(err, Error::NotNilpotent { power: 1, dim: 1 }));
    }

    #[test]
    fn ind_of_trivial_ring_is_x() {
        let d = Arc::new(Algebra::<F2>::truncated_polynomial(2));
        let t = TensorRing::trivial(d.clone());
        let x = free_module(&d, 1);
        let ind = t.ind(&x).unwrap();
        assert_eq!(ind.tmodule.x, x);
        assert!(ind.tmodule.u.is_zero());
        assert_eq!(t.ind(&LeftModule::zero(d)).unwrap().dim(), 0);
    }

    #[test]
    fn ind_over_triangular() {
        let t = triangular();
        let rr = free_module(t.base(), 1);
        let ind = t.ind(&rr).unwrap();
        assert_eq!(ind.dim(), 3);
        assert_eq!(ind.offsets, vec![0, 2, 3]);
        // u embeds F(R) (dim 1) into block 1
        assert_eq!(ind.tmodule.u.rank(), 1);
        assert!(ind.tmodule.u.block(0, 0, 2, ind.tmodule.fx.dim()).is_zero());
        let (coker, _) = t.coker_functor(&ind.tmodule).unwrap();
        assert_eq!(coker.dim(), rr.dim());
    }

    #[test]
    fn ind_map_examples() {
        let t = triangular();
        let rr = free_module(t.base(), 1);
        let s1 = simple(t.base(), 0);
        let f = ModuleMap::new(rr.clone(), s1.clone(), Matrix::from_i64_rows(&[&[1, 0]])).unwrap();
        let (_, tgt, m) = t.ind_map(&f).unwrap();
        assert_eq!(tgt.dim(), 1);
        assert_eq!(m.f, Matrix::from_i64_rows(&[&[1, 0, 0]]));
        let (_, _, id) = t.ind_map(&ModuleMap::identity(&rr)).unwrap();
        assert_eq!(id.f, Matrix::identity(3));
    }

    #[test]
    fn stalk_and_cokernel() {
        let t = triangular();
        let s2 = simple(t.base(), 1);
        let st = t.stalk(&s2).unwrap();
        let (c, q) = t.coker_functor(&st).unwrap();
        assert_eq!(c, s2);
        assert_eq!(q, Matrix::identity(1));
    }

    #[test]
    fn assemble_and_decompose() {
        let t = triangular();
        let rr = free_module(t.base(), 1);
        let ind = t.ind(&rr).unwrap();
        let id = TMorphism {
            source: ind.tmodule.clone(),
            target: ind.tmodule.clone(),
            f: Matrix::identity(3),
        };
        let s = t.decompose_star(&id, &rr, &rr).unwrap();
        assert_eq!(s.components[0], Matrix::identity(2));
        assert!(s.components[1].is_zero());
        let z = t.zero_star(&rr, &rr).unwrap();
        assert!(t.assemble_matrix(&z).unwrap().is_zero());
    }

    #[test]
    fn tensor_ring_of_corner_is_upper_triangular() {
        let t = triangular();
        let a = t.tensor_ring_algebra();
        assert_eq!(a.dim(), 3);
        assert!(a.check().is_empty());
        // basis e1, e2, m with e1 m = m = m e2 and m e1 = e2 m = m m = 0
        let v = |i| a.basis_vector(i);
        assert_eq!(a.product(&v(0), &v(2)), v(2));
        assert_eq!(a.product(&v(2), &v(1)), v(2));
        assert_eq!(a.product(&v(2), &v(0)), vec![F2::new(0); 3]);
        assert_eq!(a.product(&v(1), &v(2)), vec![F2::new(0); 3]);
    }

    #[test]
    fn ind_r_is_regular_t_module() {
        let t = triangular();
        let rr = free_module(t.base(), 1);
        let ind = t.ind(&rr).unwrap();
        let m = t.tmodule_to_algebra_module(&ind.tmodule).unwrap();
        assert_eq!(m.dim(), 3);
        let reg = free_module(&t.tensor_ring_algebra(), 1);
        let basis = t.hom(&reg, &m);
        assert_eq!(basis.len(), 3);
        let invertible = (0u32..8).any(|mask| {
            let mut f = Matrix::zeros(3, 3);
            for (k, b) in basis.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    f = &f + b;
                }
            }
            f.rank() == 3
        });
        assert!(invertible);
    }
}
