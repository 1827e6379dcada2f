//! Finite-dimensional algebras by structure constants and their left modules.
//!
//! A module is a family of action matrices `ρ(e_i)`, one per basis element of
//! the algebra, acting on column vectors. Projectives are direct sums of
//! summands `R·e` of the regular module for idempotents `e`; free modules are
//! the case `e = 1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{dim_mismatch, Error, Result};
use crate::exactlin::Matrix;
use crate::scalar::Scalar;

/// `e_i · e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Algebra<S> {
    dim: usize,
    consts: Vec<S>,
    unit: Vec<S>,
}

/// One violated algebra axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Associativity { i, j, k } => {
                write!(f, "(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
            }
            AlgebraViolation::LeftUnit { i } => write!(f, "1 · e{i} != e{i}"),
            AlgebraViolation::RightUnit { i } => write!(f, "e{i} · 1 != e{i}"),
        }
    }
}

impl<S: Scalar> Algebra<S> {
    /// Unchecked construction; see [`Algebra::new`].
    pub fn from_parts(dim: usize, consts: Vec<S>, unit: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if consts.len() != dim * dim * dim {
            return Err(dim_mismatch("Algebra constants", dim * dim * dim, consts.len()));
        }
        if unit.len() != dim {
            return Err(dim_mismatch("Algebra unit", dim, unit.len()));
        }
        Ok(Algebra { dim, consts, unit })
    }

    /// Builds an algebra and checks associativity and the unit axioms exhaustively.
    pub fn new(dim: usize, consts: Vec<S>, unit: Vec<S>) -> Result<Self> {
        let a = Self::from_parts(dim, consts, unit)?;
        if let Some(v) = a.check().first() {
            return Err(Error::InvalidAlgebra(v.to_string()));
        }
        Ok(a)
    }

    /// From a product table: `table(i, j)` is the coordinate vector of `e_i e_j`.
    pub fn from_table(dim: usize, unit: Vec<S>, table: impl Fn(usize, usize) -> Vec<S>) -> Result<Self> {
        let mut consts = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = table(i, j);
                if v.len() != dim {
                    return Err(dim_mismatch("Algebra table", dim, v.len()));
                }
                consts.extend(v);
            }
        }
        Self::new(dim, consts, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[S] {
        &self.unit
    }

    pub fn constants(&self) -> &[S] {
        &self.consts
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<S> {
        (0..self.dim).map(|k| if k == i { S::one() } else { S::zero() }).collect()
    }

    pub fn product(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi.clone() * yj.clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *slot = slot.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ e_i y`.
    pub fn left_mult(&self, i: usize) -> Matrix<S> {
        Matrix::from_fn(self.dim, self.dim, |k, j| self.c(i, j, k).clone())
    }

    /// Matrix of `y ↦ y e_j`.
    pub fn right_mult(&self, j: usize) -> Matrix<S> {
        Matrix::from_fn(self.dim, self.dim, |k, i| self.c(i, j, k).clone())
    }

    /// Matrix of `y ↦ y r` for an arbitrary element `r`.
    pub fn right_mult_by(&self, r: &[S]) -> Matrix<S> {
        combine(&(0..self.dim).map(|j| self.right_mult(j)).collect::<Vec<_>>(), r, self.dim, self.dim)
    }

    /// Every violated associativity or unit equation, each with its witness indices.
    pub fn check(&self) -> Vec<AlgebraViolation> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            let ei = self.basis_vector(i);
            for j in 0..n {
                let eij = self.product(&ei, &self.basis_vector(j));
                for k in 0..n {
                    let ek = self.basis_vector(k);
                    let lhs = self.product(&eij, &ek);
                    let rhs = self.product(&ei, &self.product(&self.basis_vector(j), &ek));
                    if lhs != rhs {
                        out.push(AlgebraViolation::Associativity { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            let ei = self.basis_vector(i);
            if self.product(&self.unit, &ei) != ei {
                out.push(AlgebraViolation::LeftUnit { i });
            }
            if self.product(&ei, &self.unit) != ei {
                out.push(AlgebraViolation::RightUnit { i });
            }
        }
        out
    }

    pub fn is_idempotent(&self, e: &[S]) -> bool {
        e.len() == self.dim && self.product(e, e) == e
    }

    /// The product algebra `A × B`, basis of `A` first.
    pub fn product_algebra(a: &Algebra<S>, b: &Algebra<S>) -> Self {
        let (m, n) = (a.dim, b.dim);
        let d = m + n;
        let mut consts = vec![S::zero(); d * d * d];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    consts[(i * d + j) * d + k] = a.c(i, j, k).clone();
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    consts[((m + i) * d + (m + j)) * d + m + k] = b.c(i, j, k).clone();
                }
            }
        }
        let unit = a.unit.iter().chain(&b.unit).cloned().collect();
        Algebra { dim: d, consts, unit }
    }

    /// `k[x]/(x^n)` in the basis `1, x, …, x^{n-1}`.
    pub fn truncated_polynomial(n: usize) -> Self {
        Self::from_table(n, unit_vec(n, 0), |i, j| {
            let mut v = vec![S::zero(); n];
            if i + j < n {
                v[i + j] = S::one();
            }
            v
        })
        .expect("truncated polynomial ring is an algebra")
    }

    /// `k^n`: orthogonal idempotents `e_1, …, e_n`.
    pub fn split_semisimple(n: usize) -> Self {
        Self::from_table(n, vec![S::one(); n], |i, j| {
            let mut v = vec![S::zero(); n];
            if i == j {
                v[i] = S::one();
            }
            v
        })
        .expect("k^n is an algebra")
    }

    pub fn field() -> Self {
        Self::split_semisimple(1)
    }
}

impl<S: fmt::Debug> fmt::Debug for Algebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {})", self.dim)
    }
}

pub(crate) fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    (0..n).map(|k| if k == i { S::one() } else { S::zero() }).collect()
}

/// `Σ_k coeffs[k] · mats[k]`.
pub(crate) fn combine<S: Scalar>(mats: &[Matrix<S>], coeffs: &[S], rows: usize, cols: usize) -> Matrix<S> {
    let mut acc = Matrix::zeros(rows, cols);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = &acc + &m.scale(c);
        }
    }
    acc
}

/// A left module: `action[i]` is the matrix of `e_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LeftModule<S> {
    algebra: Arc<Algebra<S>>,
    dim: usize,
    action: Vec<Matrix<S>>,
}

impl<S: Scalar> LeftModule<S> {
    pub fn from_parts(algebra: Arc<Algebra<S>>, dim: usize, action: Vec<Matrix<S>>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(dim_mismatch("LeftModule action count", algebra.dim(), action.len()));
        }
        if let Some(m) = action.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(dim_mismatch("LeftModule action", format!("{dim}x{dim}"), format!("{:?}", m.shape())));
        }
        Ok(LeftModule { algebra, dim, action })
    }

    /// Builds a module and checks the representation axioms.
    pub fn new(algebra: Arc<Algebra<S>>, dim: usize, action: Vec<Matrix<S>>) -> Result<Self> {
        let m = Self::from_parts(algebra, dim, action)?;
        m.check()?;
        Ok(m)
    }

    pub fn zero(algebra: Arc<Algebra<S>>) -> Self {
        let n = algebra.dim();
        LeftModule {
            algebra,
            dim: 0,
            action: vec![Matrix::zeros(0, 0); n],
        }
    }

    /// `ρ(e_i)ρ(e_j) = Σ_k c_ijk ρ(e_k)` and `ρ(1) = I`.
    pub fn check(&self) -> Result<()> {
        let a = &self.algebra;
        let n = a.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = &self.action[i] * &self.action[j];
                let coeffs: Vec<S> = (0..n).map(|k| a.c(i, j, k).clone()).collect();
                if lhs != self.act(&coeffs) {
                    return Err(Error::InvalidModule(format!("ρ(e{i})ρ(e{j}) != ρ(e{i}e{j})")));
                }
            }
        }
        if self.act(a.unit()) != Matrix::identity(self.dim) {
            return Err(Error::InvalidModule("unit does not act as the identity".into()));
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra<S>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix<S>] {
        &self.action
    }

    /// Matrix of an arbitrary algebra element.
    pub fn act(&self, r: &[S]) -> Matrix<S> {
        combine(&self.action, r, self.dim, self.dim)
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch("direct_sum"));
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(LeftModule {
            algebra: self.algebra.clone(),
            dim: self.dim + other.dim,
            action,
        })
    }

    pub fn direct_sum_all(algebra: Arc<Algebra<S>>, parts: &[LeftModule<S>]) -> Result<Self> {
        parts.iter().try_fold(Self::zero(algebra), |acc, p| acc.direct_sum(p))
    }

    /// The submodule spanned by the independent columns of `basis`, if it is closed under the action.
    pub fn submodule(&self, basis: &Matrix<S>) -> Result<Self> {
        if basis.rows() != self.dim {
            return Err(dim_mismatch("submodule", self.dim, basis.rows()));
        }
        if basis.rank() != basis.cols() {
            return Err(Error::InvalidModule("submodule basis is not independent".into()));
        }
        let action = self
            .action
            .iter()
            .map(|a| {
                basis
                    .solve(&(a * basis))?
                    .ok_or_else(|| Error::InvalidModule("subspace is not a submodule".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LeftModule {
            algebra: self.algebra.clone(),
            dim: basis.cols(),
            action,
        })
    }

    /// The smallest submodule containing the given columns.
    pub fn generated_by(&self, gens: &Matrix<S>) -> Matrix<S> {
        let mut span = gens.image_basis();
        loop {
            let mut parts = vec![span.clone()];
            parts.extend(self.action.iter().map(|a| a * &span));
            let next = Matrix::hstack(self.dim, &parts).expect("same row count").image_basis();
            if next.cols() == span.cols() {
                return span;
            }
            span = next;
        }
    }

    /// Quotient by the submodule spanned by `relations`, with the quotient map.
    pub fn quotient(&self, relations: &Matrix<S>) -> Result<(Self, Matrix<S>)> {
        let q = crate::bimodule::Quotient::of_span(self.dim, relations);
        let action = self
            .action
            .iter()
            .map(|a| &(&q.projection * a) * &q.section)
            .collect::<Vec<_>>();
        let quot = LeftModule {
            algebra: self.algebra.clone(),
            dim: q.dim(),
            action,
        };
        quot.check()?;
        Ok((quot, q.projection))
    }
}

impl<S: fmt::Debug> fmt::Debug for LeftModule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LeftModule").field("dim", &self.dim).field("action", &self.action).finish()
    }
}

/// `R^n`: the left regular representation summed `n` times.
pub fn free_module<S: Scalar>(a: &Arc<Algebra<S>>, n: usize) -> LeftModule<S> {
    let action = (0..a.dim())
        .map(|i| Matrix::block_diag(&vec![a.left_mult(i); n]))
        .collect();
    LeftModule {
        algebra: a.clone(),
        dim: n * a.dim(),
        action,
    }
}

/// The summand `R·e` of the regular module, basis chosen among the columns of right multiplication by `e`.
pub fn idempotent_summand<S: Scalar>(a: &Arc<Algebra<S>>, e: &[S]) -> Result<(LeftModule<S>, Matrix<S>)> {
    if !a.is_idempotent(e) {
        return Err(Error::InvalidModule("summand generator is not idempotent".into()));
    }
    let basis = a.right_mult_by(e).image_basis();
    let m = free_module(a, 1).submodule(&basis)?;
    Ok((m, basis))
}

/// An R-linear map `source → target`, `mat` of shape `target.dim × source.dim`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap<S> {
    pub source: LeftModule<S>,
    pub target: LeftModule<S>,
    pub mat: Matrix<S>,
}

impl<S: Scalar> ModuleMap<S> {
    pub fn new(source: LeftModule<S>, target: LeftModule<S>, mat: Matrix<S>) -> Result<Self> {
        if !source.same_algebra(&target) {
            return Err(Error::AlgebraMismatch("ModuleMap"));
        }
        if mat.shape() != (target.dim(), source.dim()) {
            return Err(dim_mismatch(
                "ModuleMap",
                format!("{}x{}", target.dim(), source.dim()),
                format!("{:?}", mat.shape()),
            ));
        }
        if !is_linear(&source, &target, &mat) {
            return Err(Error::NotLinear("matrix does not intertwine the actions".into()));
        }
        Ok(ModuleMap { source, target, mat })
    }

    pub fn identity(x: &LeftModule<S>) -> Self {
        ModuleMap {
            source: x.clone(),
            target: x.clone(),
            mat: Matrix::identity(x.dim()),
        }
    }

    pub fn zero(source: &LeftModule<S>, target: &LeftModule<S>) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            mat: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    /// `g ∘ f` for `self = f`.
    pub fn then(&self, g: &ModuleMap<S>) -> Result<Self> {
        if self.target != g.source {
            return Err(Error::AlgebraMismatch("compose: target of f is not the source of g"));
        }
        let out = ModuleMap {
            source: self.source.clone(),
            target: g.target.clone(),
            mat: g.mat.try_mul(&self.mat)?,
        };
        debug_assert!(is_linear(&out.source, &out.target, &out.mat));
        Ok(out)
    }

    pub fn add(&self, other: &ModuleMap<S>) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::AlgebraMismatch("add: endpoints differ"));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.try_add(&other.mat)?,
        })
    }
}

/// `compose(f, g) = g ∘ f`.
pub fn compose<S: Scalar>(f: &ModuleMap<S>, g: &ModuleMap<S>) -> Result<ModuleMap<S>> {
    f.then(g)
}

/// Exactness of `X --f--> Y --g--> Z` at `Y`.
pub fn is_exact_at<S: Scalar>(f: &ModuleMap<S>, g: &ModuleMap<S>) -> Result<bool> {
    if f.target != g.source {
        return Err(Error::AlgebraMismatch("is_exact_at: maps are not composable"));
    }
    Matrix::is_exact_pair(&f.mat, &g.mat)
}

pub fn is_linear<S: Scalar>(source: &LeftModule<S>, target: &LeftModule<S>, mat: &Matrix<S>) -> bool {
    mat.shape() == (target.dim(), source.dim())
        && source
            .action()
            .iter()
            .zip(target.action())
            .all(|(s, t)| (mat * s) == (t * mat))
}

/// A basis of `Hom_R(x, y)`, solved from `f ρ_x(e_i) = ρ_y(e_i) f` in `vec` coordinates.
pub fn hom_space<S: Scalar>(x: &LeftModule<S>, y: &LeftModule<S>) -> Result<Vec<Matrix<S>>> {
    if !x.same_algebra(y) {
        return Err(Error::AlgebraMismatch("hom_space"));
    }
    Ok(hom_basis(x, y))
}

pub(crate) fn hom_basis<S: Scalar>(x: &LeftModule<S>, y: &LeftModule<S>) -> Vec<Matrix<S>> {
    let (dx, dy) = (x.dim(), y.dim());
    if dx == 0 || dy == 0 {
        return Vec::new();
    }
    let ix = Matrix::identity(dx);
    let iy = Matrix::identity(dy);
    let blocks: Vec<Matrix<S>> = x
        .action()
        .iter()
        .zip(y.action())
        .map(|(rx, ry)| &rx.transpose().kron(&iy) - &ix.kron(ry))
        .collect();
    let system = Matrix::vstack(dx * dy, &blocks).expect("uniform width");
    let kernel = system.kernel_basis();
    (0..kernel.cols())
        .map(|c| Matrix::unvectorize(dy, dx, &kernel.column(c)))
        .collect()
}

pub fn hom_maps<S: Scalar>(x: &LeftModule<S>, y: &LeftModule<S>) -> Result<Vec<ModuleMap<S>>> {
    Ok(hom_space(x, y)?
        .into_iter()
        .map(|mat| ModuleMap {
            source: x.clone(),
            target: y.clone(),
            mat,
        })
        .collect())
}

/// A projective module presented as `⊕ R·e_s` for idempotents `e_s`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Projective<S> {
    summands: Vec<Vec<S>>,
    free_rank: Option<usize>,
    module: LeftModule<S>,
}

impl<S: Scalar> Projective<S> {
    pub fn free(a: &Arc<Algebra<S>>, rank: usize) -> Self {
        Projective {
            summands: vec![a.unit().to_vec(); rank],
            free_rank: Some(rank),
            module: free_module(a, rank),
        }
    }

    pub fn from_idempotents(a: &Arc<Algebra<S>>, idempotents: Vec<Vec<S>>) -> Result<Self> {
        if idempotents.iter().all(|e| e.as_slice() == a.unit()) {
            return Ok(Self::free(a, idempotents.len()));
        }
        let parts = idempotents
            .iter()
            .map(|e| idempotent_summand(a, e).map(|(m, _)| m))
            .collect::<Result<Vec<_>>>()?;
        let module = LeftModule::direct_sum_all(a.clone(), &parts)?;
        Ok(Projective {
            summands: idempotents,
            free_rank: None,
            module,
        })
    }

    pub fn module(&self) -> &LeftModule<S> {
        &self.module
    }

    pub fn summands(&self) -> &[Vec<S>] {
        &self.summands
    }

    /// `Some(n)` when this is `R^n`.
    pub fn free_rank(&self) -> Option<usize> {
        self.free_rank
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

impl<S: fmt::Debug> fmt::Debug for Projective<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.free_rank {
            Some(n) => write!(f, "R^{n}"),
            None => write!(f, "Projective({} summands)", self.summands.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    fn dual_numbers() -> Arc<Algebra<F2>> {
        Arc::new(Algebra::truncated_polynomial(2))
    }

    fn simple(a: &Arc<Algebra<F2>>, i: usize) -> LeftModule<F2> {
        let n = a.dim();
        let action = (0..n)
            .map(|k| Matrix::from_i64_rows(&[&[(k == i) as i64]]))
            .collect();
        LeftModule::new(a.clone(), 1, action).unwrap()
    }

    #[test]
    fn validates_known_algebras() {
        assert!(dual_numbers().check().is_empty());
        assert!(Algebra::<F2>::split_semisimple(2).check().is_empty());
    }

    #[test]
    fn wrong_unit_is_reported() {
        // e2 e2 = e1, everything else zero, unit declared as e2
        let mut consts = vec![F2::new(0); 8];
        consts[(2 + 1) * 2] = F2::new(1);
        let a = Algebra::from_parts(2, consts, vec![F2::new(0), F2::new(1)]).unwrap();
        let v = a.check();
        assert!(v.iter().any(|w| matches!(w, AlgebraViolation::LeftUnit { .. })));
        assert!(Algebra::new(2, a.constants().to_vec(), a.unit().to_vec()).is_err());
    }

    #[test]
    fn free_module_examples() {
        let r = dual_numbers();
        assert_eq!(free_module(&r, 0).dim(), 0);
        let x = free_module(&r, 1);
        assert_eq!(x.action()[1], Matrix::from_i64_rows(&[&[0, 0], &[1, 0]]));
        let s = Arc::new(Algebra::<F2>::split_semisimple(2));
        let f2 = free_module(&s, 2);
        assert_eq!(f2.dim(), 4);
        let diag = Matrix::from_fn(4, 4, |r, c| F2::new((r == c && r % 2 == 0) as u64));
        assert_eq!(f2.action()[0], diag);
        assert!(f2.check().is_ok());
    }

    #[test]
    fn hom_space_examples() {
        let r = dual_numbers();
        let x = free_module(&r, 1);
        let h = hom_space(&x, &x).unwrap();
        assert_eq!(h.len(), 2);
        let id = Matrix::identity(2);
        assert!(h.iter().all(|f| is_linear(&x, &x, f)));
        // identity lies in the span
        let basis = Matrix::from_columns(4, &h.iter().map(|f| f.vectorize()).collect::<Vec<_>>());
        assert!(basis.solve(&Matrix::column_vector(id.vectorize())).unwrap().is_some());

        let s = Arc::new(Algebra::<F2>::split_semisimple(2));
        assert!(hom_space(&simple(&s, 0), &simple(&s, 1)).unwrap().is_empty());
        assert_eq!(hom_space(&simple(&s, 0), &simple(&s, 0)).unwrap().len(), 1);
        assert!(hom_space(&x, &simple(&s, 0)).is_err());
    }

    #[test]
    fn exactness_of_module_maps() {
        let r = dual_numbers();
        let x = free_module(&r, 1);
        let mult_x = ModuleMap::new(x.clone(), x.clone(), Matrix::from_i64_rows(&[&[0, 0], &[1, 0]])).unwrap();
        assert!(is_exact_at(&mult_x, &mult_x).unwrap());
        let id = ModuleMap::identity(&x);
        assert_eq!(compose(&id, &mult_x).unwrap(), mult_x);
        let zero = LeftModule::zero(r.clone());
        let into = ModuleMap::zero(&zero, &x);
        let out = ModuleMap::zero(&x, &zero);
        assert!(!is_exact_at(&into, &out).unwrap());
        // a non-linear matrix is rejected
        assert!(ModuleMap::new(x.clone(), x.clone(), Matrix::from_i64_rows(&[&[1, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn idempotent_summands_of_a_product() {
        let s = Arc::new(Algebra::<F2>::split_semisimple(2));
        let p = Projective::from_idempotents(&s, vec![vec![F2::new(1), F2::new(0)]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.module(), &simple(&s, 0));
        assert!(Projective::from_idempotents(&s, vec![vec![F2::new(1), F2::new(1)]; 2]).unwrap().free_rank() == Some(2));
    }

    #[test]
    fn quotient_and_generated_submodule() {
        let r = dual_numbers();
        let x = free_module(&r, 1);
        let gen = Matrix::from_i64_rows(&[&[1], &[0]]);
        assert_eq!(x.generated_by(&gen).cols(), 2);
        let rad = x.generated_by(&Matrix::from_i64_rows(&[&[0], &[1]]));
        assert_eq!(rad.cols(), 1);
        let (top, proj) = x.quotient(&rad).unwrap();
        assert_eq!(top.dim(), 1);
        assert!(is_linear(&x, &top, &proj));
        assert!(top.action()[1].is_zero());
    }
}
