//! Exhaustive enumeration of form-(∗) maps over finite fields, the strongly Gorenstein
//! projective hunt, and seeded random windows, modules and `T`-modules for test corpora.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{free_module, hom_basis, LeftModule, Projective};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::resolution::{check_strongly_gp, compose_star, extract_gp, ResolutionWindow};
use crate::scalar::Scalar;
use crate::tensor_ring::{StarMorphism, TModule, TensorRing};

pub const DEFAULT_BUDGET: u128 = 1 << 20;

/// Number of field elements raised to `coords`, or `None` on overflow.
fn candidate_count(q: usize, coords: usize) -> Option<u128> {
    (q as u128).checked_pow(u32::try_from(coords).ok()?)
}

/// All maps `Ind(P) → Ind(Q)` of form (∗), in lexicographic order of their coordinates
/// over the `Hom_R(P, F^i(Q))` bases (last coordinate fastest).
pub struct StarEnumerator<S: Scalar> {
    source: LeftModule<S>,
    target: LeftModule<S>,
    shapes: Vec<(usize, usize)>,
    /// `(component, basis element)` per coordinate.
    basis: Vec<(usize, Matrix<S>)>,
    elements: Vec<S>,
    digits: Vec<usize>,
    done: bool,
    total: u128,
}

impl<S: Scalar> StarEnumerator<S> {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl<S: Scalar> Iterator for StarEnumerator<S> {
    type Item = StarMorphism<S>;

    fn next(&mut self) -> Option<StarMorphism<S>> {
        if self.done {
            return None;
        }
        let mut components: Vec<Matrix<S>> = self.shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
        for (&d, (slot, h)) in self.digits.iter().zip(&self.basis) {
            if d != 0 {
                components[*slot] = &components[*slot] + &h.scale(&self.elements[d]);
            }
        }
        // advance the odometer
        let q = self.elements.len();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < q {
                break;
            }
            self.digits[i] = 0;
        }
        Some(StarMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }
}

/// Fails with [`Error::BudgetExceeded`] carrying the exact candidate count when it is over budget.
pub fn enumerate_star<S: Scalar>(
    ring: &TensorRing<S>,
    p: &LeftModule<S>,
    q: &LeftModule<S>,
    budget: u128,
) -> Result<StarEnumerator<S>> {
    let elements = S::elements().ok_or(Error::InfiniteField)?;
    let tower = ring.tower(q)?;
    let mut shapes = Vec::new();
    let mut basis = Vec::new();
    for i in 0..=ring.nilpotency() {
        shapes.push((tower.dim(i), p.dim()));
        basis.extend(hom_basis(p, tower.module(i)).into_iter().map(|h| (i, h)));
    }
    let total = candidate_count(elements.len(), basis.len()).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    Ok(StarEnumerator {
        source: p.clone(),
        target: q.clone(),
        shapes,
        digits: vec![0; basis.len()],
        basis,
        elements,
        done: false,
        total,
    })
}

/// One class of the hunt: candidates with the same rank, verdict and kernel dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry<S> {
    pub rank: usize,
    pub passes: bool,
    /// `dim ker α` inside `Ind(R^rank)`.
    pub kernel_dim: usize,
    pub count: u128,
    /// The first candidate of the class in enumeration order.
    pub representative: StarMorphism<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog<S> {
    pub max_rank: usize,
    pub entries: Vec<CatalogEntry<S>>,
}

impl<S> Catalog<S> {
    pub fn passing(&self) -> impl Iterator<Item = &CatalogEntry<S>> {
        self.entries.iter().filter(|e| e.passes)
    }
}

/// Classifies every form-(∗) endomorphism of `Ind(R^r)`, `r ≤ max_rank`, by
/// [`check_strongly_gp`]. Entries are sorted by `(rank, passes, kernel_dim)`.
pub fn hunt_strongly_gp<S: Scalar>(ring: &Arc<TensorRing<S>>, max_rank: usize, budget: u128) -> Result<Catalog<S>> {
    let mut needed = 0u128;
    for rank in 0..=max_rank {
        let p = free_module(ring.base(), rank);
        match enumerate_star(ring, &p, &p, budget) {
            Ok(e) => needed = needed.saturating_add(e.total()),
            Err(Error::BudgetExceeded { required, .. }) => needed = needed.saturating_add(required),
            Err(e) => return Err(e),
        }
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { required: needed, budget });
    }
    let mut entries: Vec<CatalogEntry<S>> = Vec::new();
    for rank in 0..=max_rank {
        let proj = Projective::free(ring.base(), rank);
        let candidates: Vec<StarMorphism<S>> = enumerate_star(ring, proj.module(), proj.module(), budget)?.collect();
        let classified = classify(ring, &proj, &candidates)?;
        for (s, (passes, kernel_dim)) in candidates.into_iter().zip(classified) {
            match entries
                .iter_mut()
                .find(|e| e.rank == rank && e.passes == passes && e.kernel_dim == kernel_dim)
            {
                Some(e) => e.count += 1,
                None => entries.push(CatalogEntry {
                    rank,
                    passes,
                    kernel_dim,
                    count: 1,
                    representative: s,
                }),
            }
        }
    }
    entries.sort_by_key(|e| (e.rank, !e.passes, e.kernel_dim));
    Ok(Catalog { max_rank, entries })
}

/// `(passes, kernel_dim)` per candidate, split across threads, in candidate order.
fn classify<S: Scalar>(ring: &Arc<TensorRing<S>>, p: &Projective<S>, candidates: &[StarMorphism<S>]) -> Result<Vec<(bool, usize)>> {
    let one = |s: &StarMorphism<S>| -> Result<(bool, usize)> {
        let report = check_strongly_gp(ring.clone(), p.clone(), s.clone())?;
        let big = ring.assemble_matrix(s)?;
        Ok((report.passed(), big.cols() - big.rank()))
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    if candidates.len() < 64 || threads == 1 {
        return candidates.iter().map(one).collect();
    }
    let chunk = candidates.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(one).collect::<Result<Vec<_>>>()))
            .collect();
        let mut out = Vec::with_capacity(candidates.len());
        for h in handles {
            out.extend(h.join().expect("classifier thread panicked")?);
        }
        Ok(out)
    })
}

/// Re-runs the strongly-GP check on each passing representative and compares kernel sizes.
pub fn verify_catalog<S: Scalar>(ring: &Arc<TensorRing<S>>, catalog: &Catalog<S>) -> Result<bool> {
    for e in catalog.passing() {
        let p = Projective::free(ring.base(), e.rank);
        if !check_strongly_gp(ring.clone(), p.clone(), e.representative.clone())?.passed() {
            return Ok(false);
        }
        let w = ResolutionWindow::periodic_one(ring.clone(), p, e.representative.clone())?;
        if extract_gp(&w, 0)?.module.dim() != e.kernel_dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ranks of the free modules `P^lo, …` of a random window; `period = Some(p)` needs `p` ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WindowShape {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub period: Option<usize>,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random `R`-linear map `x → y`: a random combination of a `Hom_R(x, y)` basis.
pub fn random_hom<S: Scalar, G: Rng + ?Sized>(rng: &mut G, x: &LeftModule<S>, y: &LeftModule<S>) -> Matrix<S> {
    let mut f = Matrix::zeros(y.dim(), x.dim());
    for h in hom_basis(x, y) {
        f = &f + &h.scale(&S::sample(rng));
    }
    f
}

pub fn random_star<S: Scalar, G: Rng + ?Sized>(
    rng: &mut G,
    ring: &TensorRing<S>,
    p: &LeftModule<S>,
    q: &LeftModule<S>,
) -> Result<StarMorphism<S>> {
    let tower = ring.tower(q)?;
    let components = (0..=ring.nilpotency()).map(|i| random_hom(rng, p, tower.module(i))).collect();
    ring.star(p.clone(), q.clone(), components)
}

/// A random form-(∗) map `b : Ind(Q) → Ind(Z)` with `b ∘ a = 0`.
pub fn random_star_after<S: Scalar, G: Rng + ?Sized>(
    rng: &mut G,
    ring: &TensorRing<S>,
    a: &StarMorphism<S>,
    z: &LeftModule<S>,
) -> Result<StarMorphism<S>> {
    let q = &a.target;
    let tower = ring.tower(z)?;
    let n = ring.nilpotency();
    let mut members = Vec::new();
    for i in 0..=n {
        for h in hom_basis(q, tower.module(i)) {
            let mut s = ring.zero_star(q, z)?;
            s.components[i] = h;
            members.push(s);
        }
    }
    if members.is_empty() {
        return ring.zero_star(q, z);
    }
    let flat = |s: &StarMorphism<S>| -> Vec<S> { s.components.iter().flat_map(Matrix::vectorize).collect() };
    let composites: Vec<Vec<S>> = members
        .iter()
        .map(|b| compose_star(ring, a, b).map(|c| flat(&c)))
        .collect::<Result<_>>()?;
    let len = composites[0].len();
    let kernel = Matrix::from_columns(len, &composites).kernel_basis();
    let mut out = ring.zero_star(q, z)?;
    for c in 0..kernel.cols() {
        let coeff = S::sample(rng);
        for (b, x) in members.iter().zip(kernel.column(c)) {
            if x.is_zero() {
                continue;
            }
            let w = x * coeff.clone();
            for (o, m) in out.components.iter_mut().zip(&b.components) {
                *o = &*o + &m.scale(&w);
            }
        }
    }
    Ok(out)
}

/// A seeded window of free modules. With `chain`, each map is drawn so that consecutive
/// maps compose to zero (so C1 holds and C2, C3 are the interesting conditions).
pub fn random_window<S: Scalar>(ring: &Arc<TensorRing<S>>, seed: u64, shape: &WindowShape, chain: bool) -> Result<ResolutionWindow<S>> {
    let mut rng = rng_from_seed(seed);
    random_window_with(&mut rng, ring, shape, chain)
}

pub fn random_window_with<S: Scalar, G: Rng + ?Sized>(
    rng: &mut G,
    ring: &Arc<TensorRing<S>>,
    shape: &WindowShape,
    chain: bool,
) -> Result<ResolutionWindow<S>> {
    let n = shape.ranks.len();
    if n == 0 {
        return Err(Error::InvalidWindow("window shape has no ranks".into()));
    }
    let objects: Vec<Projective<S>> = shape.ranks.iter().map(|&r| Projective::free(ring.base(), r)).collect();
    let count = match shape.period {
        Some(p) if p != n => return Err(Error::InvalidWindow(format!("period {p} needs exactly {p} ranks"))),
        Some(p) => p,
        None => n - 1,
    };
    let mut maps: Vec<StarMorphism<S>> = Vec::with_capacity(count);
    for k in 0..count {
        let src = objects[k].module();
        let tgt = objects[(k + 1) % n].module();
        let s = match maps.last() {
            Some(prev) if chain => random_star_after(rng, ring, prev, tgt)?,
            _ => random_star(rng, ring, src, tgt)?,
        };
        maps.push(s);
    }
    ResolutionWindow::new(ring.clone(), shape.lo, objects, maps, shape.period)
}

/// A random quotient of `R^rank` by a submodule generated by `gens` random vectors.
pub fn random_module<S: Scalar, G: Rng + ?Sized>(rng: &mut G, ring: &TensorRing<S>, rank: usize, gens: usize) -> Result<LeftModule<S>> {
    let free = free_module(ring.base(), rank);
    let g = Matrix::from_fn(free.dim(), gens, |_, _| S::sample(rng));
    let sub = free.generated_by(&g);
    Ok(free.quotient(&sub)?.0)
}

/// A random `T`-module `(X, u)`. Any `R`-map `u : F(X) → X` gives one, so `u` is a random
/// element of `Hom_R(F(X), X)`.
pub fn random_tmodule<S: Scalar, G: Rng + ?Sized>(rng: &mut G, ring: &TensorRing<S>, rank: usize, gens: usize) -> Result<TModule<S>> {
    let x = random_module(rng, ring, rank, gens)?;
    let fx = ring.functor(&x)?;
    let u = random_hom(rng, &fx.result, &x);
    ring.tmodule(x, u)
}
