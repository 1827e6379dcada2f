mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use tensorgp::algebra::{hom_space, is_exact_at, ModuleMap, Projective};
use tensorgp::resolution::{
    check_compatibility, check_complete, check_strongly_gp, extract_gp, lift_resolution, RComplex, ResolutionWindow,
};
use tensorgp::search::{
    hunt_strongly_gp, random_module, random_star, random_window, random_window_with, rng_from_seed, WindowShape,
};
use tensorgp::tensor_ring::TensorRing;
use tensorgp::{Error, F2, F3};

use common::*;

const RINGS: usize = 8;

fn ring_f2(i: usize) -> Arc<TensorRing<F2>> {
    corpus::<F2>().swap_remove(i).1
}

fn ring_f3(i: usize) -> Arc<TensorRing<F3>> {
    corpus::<F3>().swap_remove(i).1
}

fn shape<G: Rng>(rng: &mut G, ring: &TensorRing<F2>, periodic: bool) -> WindowShape {
    let max_rank = if ring.base().dim() >= 3 { 1 } else { 2 };
    let len = if periodic { rng.gen_range(1..=2) } else { rng.gen_range(3..=4) };
    WindowShape {
        lo: rng.gen_range(-3..=3),
        ranks: (0..len).map(|_| rng.gen_range(0..=max_rank)).collect(),
        period: periodic.then_some(len),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn maps_between_induced_modules_are_their_first_column(i in 0..RINGS, seed in any::<u64>()) {
        let ring = ring_f2(i);
        let mut rng = rng_from_seed(seed);
        let (ra, ga, rb, gb) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let p = random_module(&mut rng, &ring, ra, ga).unwrap();
        let q = random_module(&mut rng, &ring, rb, gb).unwrap();
        let lhs = ring.tmorphism_space(&ring.ind(&p).unwrap().tmodule, &ring.ind(&q).unwrap().tmodule).len();
        let tower = ring.tower(&q).unwrap();
        let rhs: usize = (0..=ring.nilpotency()).map(|l| hom_space(&p, tower.module(l)).unwrap().len()).sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn assembling_then_decomposing_is_the_identity(i in 0..RINGS, seed in any::<u64>(), ra in 0usize..=2, rb in 0usize..=2) {
        let ring = ring_f3(i);
        let mut rng = rng_from_seed(seed);
        let p = free(ring.base(), ra);
        let q = free(ring.base(), rb);
        let s = random_star(&mut rng, &ring, &p, &q).unwrap();
        let t = ring.assemble_star(&s).unwrap();
        prop_assert!(ring.is_tmorphism(&t.source, &t.target, &t.f));
        prop_assert_eq!(ring.decompose_star(&t, &p, &q).unwrap(), s);
    }

    #[test]
    fn exactness_of_big_matrices_is_exactness_of_modules(i in 0..RINGS, seed in any::<u64>(), chain in any::<bool>()) {
        let ring = ring_f2(i);
        let mut rng = rng_from_seed(seed);
        let sh = shape(&mut rng, &ring, false);
        let w = random_window_with(&mut rng, &ring, &sh, chain).unwrap();
        let as_module = |k: i64| {
            let ind = ring.ind(w.object(k).unwrap().module()).unwrap();
            ring.tmodule_to_algebra_module(&ind.tmodule).unwrap()
        };
        for k in w.interior() {
            let (x, y, z) = (as_module(k - 1), as_module(k), as_module(k + 1));
            let (a, b) = (w.big(k - 1).unwrap(), w.big(k).unwrap());
            let f = ModuleMap::new(x, y.clone(), a.clone()).unwrap();
            let g = ModuleMap::new(y, z, b.clone()).unwrap();
            prop_assert_eq!(is_exact_at(&f, &g).unwrap(), tensorgp::Matrix::is_exact_pair(&a, &b).unwrap());
        }
    }

    #[test]
    fn extracted_kernels_have_the_rank_nullity_dimension(i in 0..RINGS, seed in any::<u64>(), periodic in any::<bool>()) {
        let ring = ring_f2(i);
        let mut rng = rng_from_seed(seed);
        let sh = shape(&mut rng, &ring, periodic);
        let w = random_window_with(&mut rng, &ring, &sh, true).unwrap();
        for k in w.interior() {
            let g = extract_gp(&w, k).unwrap();
            let ind = ring.ind(w.object(k).unwrap().module()).unwrap();
            prop_assert_eq!(g.module.dim(), ind.dim() - w.big(k).unwrap().rank());
            prop_assert!(ring.is_tmorphism(&g.module, &ind.tmodule, &g.inclusion));
        }
    }

    #[test]
    fn strong_check_is_the_period_one_check(i in 0..RINGS, seed in any::<u64>(), rank in 0usize..=2) {
        let ring = ring_f3(i);
        let rank = if ring.base().dim() >= 3 { rank.min(1) } else { rank };
        let mut rng = rng_from_seed(seed);
        let p = Projective::free(ring.base(), rank);
        let s = random_star(&mut rng, &ring, p.module(), p.module()).unwrap();
        let strong = check_strongly_gp(ring.clone(), p.clone(), s.clone()).unwrap();
        let w = ResolutionWindow::periodic_one(ring, p, s).unwrap();
        prop_assert_eq!(strong.passed(), check_complete(&w).unwrap().passed());
    }

    #[test]
    fn lifts_of_compatible_complexes_are_complete(i in 0..RINGS, seed in any::<u64>(), periodic in any::<bool>()) {
        let ring = ring_f2(i);
        let base = trivial(ring.base().clone());
        let mut rng = rng_from_seed(seed);
        let sh = shape(&mut rng, &ring, periodic);
        let bw = random_window_with(&mut rng, &base, &sh, true).unwrap();
        let c = RComplex {
            lo: bw.lo(),
            objects: bw.objects().to_vec(),
            maps: bw.maps().iter().map(|m| m.components[0].clone()).collect(),
            period: sh.period,
        };
        if !check_complete(&c.as_base_window().unwrap()).unwrap().passed() {
            let refused = matches!(check_compatibility(&ring, &c), Err(Error::NotComplete(_)));
            prop_assert!(refused);
            prop_assert!(lift_resolution(ring.clone(), &c).is_err());
            return Ok(());
        }
        let compat = check_compatibility(&ring, &c).unwrap();
        match lift_resolution(ring.clone(), &c) {
            Ok(lifted) => {
                prop_assert!(compat.passed());
                prop_assert!(check_complete(&lifted).unwrap().passed());
            }
            Err(_) => prop_assert!(!compat.passed()),
        }
    }

    #[test]
    fn generation_and_checking_are_deterministic(i in 0..RINGS, seed in any::<u64>(), periodic in any::<bool>()) {
        let ring = ring_f2(i);
        let mut rng = rng_from_seed(seed ^ 0x5eed);
        let sh = shape(&mut rng, &ring, periodic);
        let a = random_window(&ring, seed, &sh, true).unwrap();
        let b = random_window(&ring, seed, &sh, true).unwrap();
        prop_assert_eq!(a.maps(), b.maps());
        prop_assert_eq!(check_complete(&a).unwrap(), check_complete(&b).unwrap());
    }
}

#[test]
fn hunting_twice_gives_the_same_catalog() {
    let ring = t2::<F2>();
    let a = hunt_strongly_gp(&ring, 1, 1 << 4).unwrap();
    let b = hunt_strongly_gp(&ring, 1, 1 << 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn random_complexes_reach_the_lifting_branch() {
    let mut lifted = 0;
    for seed in 0..400u64 {
        let ring = ring_f2((seed % RINGS as u64) as usize);
        let base = trivial(ring.base().clone());
        let mut rng = rng_from_seed(seed);
        let sh = shape(&mut rng, &ring, seed % 2 == 0);
        let bw = random_window_with(&mut rng, &base, &sh, true).unwrap();
        let c = RComplex {
            lo: bw.lo(),
            objects: bw.objects().to_vec(),
            maps: bw.maps().iter().map(|m| m.components[0].clone()).collect(),
            period: sh.period,
        };
        let nonzero = c.objects.iter().any(|p| p.dim() > 0);
        if nonzero && lift_resolution(ring, &c).is_ok() {
            lifted += 1;
        }
    }
    assert!(lifted >= 10, "only {lifted} nonzero complexes lifted");
}
