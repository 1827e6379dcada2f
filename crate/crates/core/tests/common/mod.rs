//! Rings, complexes and random Morita data shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use tensorgp::algebra::{free_module, hom_space, Algebra, LeftModule, Projective};
use tensorgp::bimodule::{tensor_module, Bimodule, Quotient};
use tensorgp::resolution::{compose_star, RComplex};
use tensorgp::special_rings::{
    morita_to_trivext, mu_transport, MoritaData, MoritaMaps, MoritaWindow,
};
use tensorgp::tensor_ring::TensorRing;
use tensorgp::{Matrix, Scalar};

pub fn m1<S: Scalar>(v: i64) -> Matrix<S> {
    Matrix::from_i64_rows(&[&[v]])
}

pub fn element<S: Scalar>(v: &[i64]) -> Vec<S> {
    v.iter().map(|&x| S::from_i64(x)).collect()
}

pub fn dual<S: Scalar>() -> Arc<Algebra<S>> {
    Arc::new(Algebra::truncated_polynomial(2))
}

/// `(x·)` on `k[x]/(x²)` in the basis `1, x`.
pub fn x_map<S: Scalar>() -> Matrix<S> {
    Matrix::from_i64_rows(&[&[0, 0], &[1, 0]])
}

pub fn trivial<S: Scalar>(r: Arc<Algebra<S>>) -> Arc<TensorRing<S>> {
    Arc::new(TensorRing::trivial(r))
}

/// `k × k` with `M = e_1 M e_0 = k`: the tensor ring is `T_2(k)`.
pub fn t2<S: Scalar>() -> Arc<TensorRing<S>> {
    let r = Arc::new(Algebra::split_semisimple(2));
    let m = Bimodule::over(&r, 1, vec![m1(0), m1(1)], vec![m1(1), m1(0)]).unwrap();
    Arc::new(TensorRing::new(r, m, 1).unwrap())
}

/// `k × k` with two arrows `0 → 1`: the Kronecker algebra.
pub fn kronecker<S: Scalar>() -> Arc<TensorRing<S>> {
    let r = Arc::new(Algebra::split_semisimple(2));
    let z = Matrix::zeros(2, 2);
    let i = Matrix::identity(2);
    let m = Bimodule::over(&r, 2, vec![z.clone(), i.clone()], vec![i, z]).unwrap();
    Arc::new(TensorRing::new(r, m, 1).unwrap())
}

/// `k³` with the path bimodule `a : 0 → 1`, `b : 1 → 2`; `M ⊗ M = k·ba`, so `N = 2`.
pub fn a3_path<S: Scalar>() -> Arc<TensorRing<S>> {
    let r = Arc::new(Algebra::split_semisimple(3));
    let d = |a: i64, b: i64| Matrix::from_i64_rows(&[&[a, 0], &[0, b]]);
    let left = vec![d(0, 0), d(1, 0), d(0, 1)];
    let right = vec![d(1, 0), d(0, 1), d(0, 0)];
    let m = Bimodule::over(&r, 2, left, right).unwrap();
    Arc::new(TensorRing::new(r, m, 2).unwrap())
}

/// `A × k` with `A = k[x]/(x²)`, basis `1_A, x, 1_k`.
pub fn dual_times_field<S: Scalar>() -> Arc<Algebra<S>> {
    Arc::new(Algebra::product_algebra(
        &Algebra::truncated_polynomial(2),
        &Algebra::field(),
    ))
}

/// `A × k` with `M = e_k M e_A = k`, `x` acting by zero.
pub fn dual_corner_from_a<S: Scalar>() -> Arc<TensorRing<S>> {
    let r = dual_times_field();
    let m = Bimodule::over(&r, 1, vec![m1(0), m1(0), m1(1)], vec![m1(1), m1(0), m1(0)]).unwrap();
    Arc::new(TensorRing::new(r, m, 1).unwrap())
}

/// `A × k` with `M = e_A M e_k = k`.
pub fn dual_corner_into_a<S: Scalar>() -> Arc<TensorRing<S>> {
    let r = dual_times_field();
    let m = Bimodule::over(&r, 1, vec![m1(1), m1(0), m1(0)], vec![m1(0), m1(0), m1(1)]).unwrap();
    Arc::new(TensorRing::new(r, m, 1).unwrap())
}

/// `A × A'` with `A = A' = k[x]/(x²)` and `M = A' ⊗_k A` in the corner `e_{A'} M e_A`.
pub fn dual_square_corner<S: Scalar>() -> Arc<TensorRing<S>> {
    let a = Algebra::truncated_polynomial(2);
    let r = Arc::new(Algebra::product_algebra(&a, &a));
    let z = Matrix::zeros(4, 4);
    let i = Matrix::identity(4);
    // basis a'_s ⊗ a_t at 2s + t
    let xl = Matrix::from_fn(4, 4, |r, c| S::from_i64((r == c + 2) as i64));
    let xr = Matrix::from_fn(4, 4, |r, c| S::from_i64((c % 2 == 0 && r == c + 1) as i64));
    let m = Bimodule::over(
        &r,
        4,
        vec![z.clone(), z.clone(), i.clone(), xl],
        vec![i, xr, z.clone(), z],
    )
    .unwrap();
    Arc::new(TensorRing::new(r, m, 1).unwrap())
}

/// Every ring of the shared corpus with a short name; `N` ranges over `0, 1, 2`.
pub fn corpus<S: Scalar>() -> Vec<(&'static str, Arc<TensorRing<S>>)> {
    vec![
        ("k[x]/x^2, M = 0", trivial(dual())),
        (
            "k^2, M = 0",
            trivial(Arc::new(Algebra::split_semisimple(2))),
        ),
        (
            "k[x]/x^3, M = 0",
            trivial(Arc::new(Algebra::truncated_polynomial(3))),
        ),
        ("T_2", t2()),
        ("Kronecker", kronecker()),
        ("k[x]/x^2 x k, corner from A", dual_corner_from_a()),
        ("k[x]/x^2 x k, corner into A", dual_corner_into_a()),
        ("A3 path, N = 2", a3_path()),
    ]
}

/// Rings with `M ⊗ M = 0`, for trivial-extension checks.
pub fn trivext_corpus<S: Scalar>() -> Vec<(&'static str, Arc<TensorRing<S>>)> {
    vec![
        ("T_2", t2()),
        ("Kronecker", kronecker()),
        ("k[x]/x^2 x k, corner from A", dual_corner_from_a()),
        ("k[x]/x^2 x k, corner into A", dual_corner_into_a()),
        ("A x A', A' (x) A", dual_square_corner()),
    ]
}

/// `(x·)` on `R e_A` as a period-1 complex, `R = A × (anything)`, `e_A = (1_A, 0)`.
pub fn x_complex_on_corner<S: Scalar>(r: &Arc<Algebra<S>>) -> RComplex<S> {
    let mut e = vec![S::zero(); r.dim()];
    e[0] = S::one();
    RComplex {
        lo: 0,
        objects: vec![Projective::from_idempotents(r, vec![e]).unwrap()],
        maps: vec![x_map()],
        period: Some(1),
    }
}

/// `(x·)` on `R = k[x]/(x²)` itself.
pub fn x_complex<S: Scalar>(r: &Arc<Algebra<S>>) -> RComplex<S> {
    RComplex {
        lo: 0,
        objects: vec![Projective::free(r, 1)],
        maps: vec![x_map()],
        period: Some(1),
    }
}

/// On `R = k × k`: `R e_0 ⊕ R e_0` with the shift `[[0, 0], [1, 0]]`, a split exact complex.
pub fn shift_complex<S: Scalar>(r: &Arc<Algebra<S>>, e: Vec<S>) -> RComplex<S> {
    RComplex {
        lo: 0,
        objects: vec![Projective::from_idempotents(r, vec![e.clone(), e]).unwrap()],
        maps: vec![Matrix::from_i64_rows(&[&[0, 0], &[1, 0]])],
        period: Some(1),
    }
}

/// Algebras of dimension at most 3.
pub fn small_algebras<S: Scalar>() -> Vec<Arc<Algebra<S>>> {
    vec![
        Arc::new(Algebra::field()),
        Arc::new(Algebra::split_semisimple(2)),
        Arc::new(Algebra::truncated_polynomial(2)),
        Arc::new(Algebra::split_semisimple(3)),
        Arc::new(Algebra::truncated_polynomial(3)),
        dual_times_field(),
    ]
}

/// Smallest subspace containing the columns of `g` and stable under every matrix in `ops`.
fn closure<S: Scalar>(n: usize, g: Matrix<S>, ops: &[Matrix<S>]) -> Matrix<S> {
    let mut span = g.image_basis();
    loop {
        let mut parts = vec![span.clone()];
        parts.extend(ops.iter().map(|o| o * &span));
        let next = Matrix::hstack(n, &parts).unwrap().image_basis();
        if next.cols() == span.cols() {
            return next;
        }
        span = next;
    }
}

/// A random quotient of the free bimodule `A ⊗_k B`, of dimension at most `max_dim`.
pub fn random_bimodule<S: Scalar, G: Rng>(
    rng: &mut G,
    a: &Arc<Algebra<S>>,
    b: &Arc<Algebra<S>>,
    max_dim: usize,
) -> Bimodule<S> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let ia = Matrix::identity(na);
    let ib = Matrix::identity(nb);
    let left: Vec<Matrix<S>> = (0..na).map(|i| a.left_mult(i).kron(&ib)).collect();
    let right: Vec<Matrix<S>> = (0..nb).map(|j| ia.kron(&b.right_mult(j))).collect();
    let ops: Vec<Matrix<S>> = left.iter().chain(&right).cloned().collect();
    for _ in 0..32 {
        let gens = rng.gen_range(0..=n);
        let g = Matrix::from_fn(n, gens, |_, _| S::sample(rng));
        let sub = closure(n, g, &ops);
        let q = Quotient::of_span(n, &sub);
        if q.dim() > max_dim {
            continue;
        }
        let push = |m: &Matrix<S>| &(&q.projection * m) * &q.section;
        let l = left.iter().map(push).collect();
        let r = right.iter().map(push).collect();
        return Bimodule::new(a.clone(), b.clone(), q.dim(), l, r).unwrap();
    }
    Bimodule::zero(a.clone(), b.clone())
}

/// Random `(A, B, V, U)` with zero pairings; `triangular` forces `U = 0`.
pub fn random_morita<S: Scalar, G: Rng>(rng: &mut G, triangular: bool) -> MoritaData<S> {
    let pool = small_algebras::<S>();
    loop {
        let a = pool[rng.gen_range(0..pool.len())].clone();
        let b = pool[rng.gen_range(0..pool.len())].clone();
        let v = random_bimodule(rng, &a, &b, 3);
        if triangular {
            return MoritaData::triangular(a, b, v).unwrap();
        }
        let u = random_bimodule(rng, &b, &a, 3);
        if let Ok(d) = MoritaData::new(a.clone(), b.clone(), v.clone(), u) {
            return d;
        }
        if rng.gen_bool(0.5) {
            return MoritaData::triangular(a, b, v).unwrap();
        }
    }
}

struct Spaces<S> {
    tau: Vec<Matrix<S>>,
    sigma: Vec<Matrix<S>>,
    beta: Vec<Matrix<S>>,
    gamma: Vec<Matrix<S>>,
}

fn spaces<S: Scalar>(d: &MoritaData<S>, here: (usize, usize), there: (usize, usize)) -> Spaces<S> {
    let pa = free_module(&d.a, here.0);
    let qb = free_module(&d.b, here.1);
    let pa2 = free_module(&d.a, there.0);
    let qb2 = free_module(&d.b, there.1);
    let vq = tensor_module(&d.v, &qb2).unwrap().result;
    let up = tensor_module(&d.u, &pa2).unwrap().result;
    Spaces {
        tau: hom_space(&pa, &pa2).unwrap(),
        sigma: hom_space(&qb, &qb2).unwrap(),
        beta: hom_space(&pa, &vq).unwrap(),
        gamma: hom_space(&qb, &up).unwrap(),
    }
}

fn zero_maps<S: Scalar>(
    d: &MoritaData<S>,
    here: (usize, usize),
    there: (usize, usize),
) -> MoritaMaps<S> {
    let (pa, qb) = (here.0 * d.a.dim(), here.1 * d.b.dim());
    let vq = tensor_module(&d.v, &free_module(&d.b, there.1))
        .unwrap()
        .result
        .dim();
    let up = tensor_module(&d.u, &free_module(&d.a, there.0))
        .unwrap()
        .result
        .dim();
    MoritaMaps {
        tau: Matrix::zeros(there.0 * d.a.dim(), pa),
        sigma: Matrix::zeros(there.1 * d.b.dim(), qb),
        beta: Matrix::zeros(vq, pa),
        gamma: Matrix::zeros(up, qb),
    }
}

fn combine<S: Scalar>(base: &Matrix<S>, basis: &[Matrix<S>], coeffs: &[S]) -> Matrix<S> {
    let mut out = base.clone();
    for (m, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = &out + &m.scale(c);
        }
    }
    out
}

fn random_maps<S: Scalar, G: Rng>(
    rng: &mut G,
    d: &MoritaData<S>,
    here: (usize, usize),
    there: (usize, usize),
) -> MoritaMaps<S> {
    let sp = spaces(d, here, there);
    let z = zero_maps(d, here, there);
    let mut draw = |b: &[Matrix<S>], base: &Matrix<S>| {
        let c: Vec<S> = b.iter().map(|_| S::sample(rng)).collect();
        combine(base, b, &c)
    };
    MoritaMaps {
        tau: draw(&sp.tau, &z.tau),
        sigma: draw(&sp.sigma, &z.sigma),
        beta: draw(&sp.beta, &z.beta),
        gamma: draw(&sp.gamma, &z.gamma),
    }
}

/// Next maps drawn from the subspace on which the transported composite with `prev` vanishes.
fn random_maps_after<S: Scalar, G: Rng>(
    rng: &mut G,
    d: &MoritaData<S>,
    prev: &MoritaMaps<S>,
    ranks: [(usize, usize); 3],
) -> MoritaMaps<S> {
    let sp = spaces(d, ranks[1], ranks[2]);
    let z = zero_maps(d, ranks[1], ranks[2]);
    let mut members = Vec::new();
    for (slot, basis) in [&sp.tau, &sp.sigma, &sp.beta, &sp.gamma]
        .into_iter()
        .enumerate()
    {
        for m in basis {
            let mut c = z.clone();
            *[&mut c.tau, &mut c.sigma, &mut c.beta, &mut c.gamma][slot] = m.clone();
            members.push(c);
        }
    }
    if members.is_empty() {
        return z;
    }
    let ring = morita_to_trivext(d).unwrap().ring().unwrap();
    let composites: Vec<Vec<S>> = members
        .iter()
        .map(|next| {
            let w = MoritaWindow {
                lo: 0,
                p_ranks: ranks.iter().map(|r| r.0).collect(),
                q_ranks: ranks.iter().map(|r| r.1).collect(),
                maps: vec![prev.clone(), next.clone()],
                period: None,
            };
            let t = mu_transport(d, &w).unwrap();
            let c = compose_star(&ring, &t.maps()[0], &t.maps()[1]).unwrap();
            c.components.iter().flat_map(Matrix::vectorize).collect()
        })
        .collect();
    let kernel = Matrix::from_columns(composites[0].len(), &composites).kernel_basis();
    let mut out = z;
    for col in 0..kernel.cols() {
        let s = S::sample(rng);
        for (m, x) in members.iter().zip(kernel.column(col)) {
            if x.is_zero() {
                continue;
            }
            let w = x * s.clone();
            out.tau = &out.tau + &m.tau.scale(&w);
            out.sigma = &out.sigma + &m.sigma.scale(&w);
            out.beta = &out.beta + &m.beta.scale(&w);
            out.gamma = &out.gamma + &m.gamma.scale(&w);
        }
    }
    out
}

/// A random Morita window of ranks at most 1 on each side. Periodic windows have period 1
/// or 2; with `chain`, consecutive maps compose to zero (except across the wrap).
pub fn random_morita_window<S: Scalar, G: Rng>(
    rng: &mut G,
    d: &MoritaData<S>,
    chain: bool,
) -> MoritaWindow<S> {
    let periodic = rng.gen_bool(0.5);
    let len = if periodic {
        rng.gen_range(1..=2)
    } else {
        rng.gen_range(3..=4)
    };
    let ranks: Vec<(usize, usize)> = (0..len)
        .map(|_| (rng.gen_range(0..=1), rng.gen_range(0..=1)))
        .collect();
    let count = if periodic { len } else { len - 1 };
    let mut maps: Vec<MoritaMaps<S>> = Vec::new();
    for k in 0..count {
        let here = ranks[k];
        let there = ranks[(k + 1) % len];
        let m = match (maps.last(), chain) {
            (Some(prev), true) => random_maps_after(rng, d, prev, [ranks[k - 1], here, there]),
            _ => random_maps(rng, d, here, there),
        };
        maps.push(m);
    }
    let w = MoritaWindow {
        lo: rng.gen_range(-2..=2),
        p_ranks: ranks.iter().map(|r| r.0).collect(),
        q_ranks: ranks.iter().map(|r| r.1).collect(),
        maps,
        period: periodic.then_some(len),
    };
    w.validate(d).unwrap();
    w
}

/// Free `R`-modules in a list, for quick Hom computations.
pub fn free<S: Scalar>(r: &Arc<Algebra<S>>, n: usize) -> LeftModule<S> {
    free_module(r, n)
}
