use aniso_core::multiply::MultInstance;
use aniso_core::psolver::{solve_param, ParamQuery, ParamSet};
use aniso_core::{AffineExpr, Anisotropy, Rational, Scale, SpaceDescr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rand_symbolic(rng: &mut ChaCha8Rng, a: &Anisotropy) -> SpaceDescr {
    let scale = [Scale::W, Scale::H, Scale::B][rng.gen_range(0..3)];
    let c = r(rng.gen_range(2..=14), 4);
    let slope = r(-rng.gen_range(0..=2), rng.gen_range(1..=2));
    SpaceDescr::new(scale, AffineExpr::new(c, slope), AffineExpr::var(), a.clone())
}

fn rand_query(rng: &mut ChaCha8Rng) -> ParamQuery {
    let a = match rng.gen_range(0..3) {
        0 => Anisotropy::isotropic(rng.gen_range(1..=3)),
        1 => Anisotropy::parabolic(rng.gen_range(1..=3)),
        _ => Anisotropy::new(vec![1, 2], vec![3, 2]).unwrap(),
    };
    match rng.gen_range(0..4) {
        0 => ParamQuery::Embed { src: rand_symbolic(rng, &a), dst: rand_symbolic(rng, &a) },
        1 => ParamQuery::Algebra(rand_symbolic(rng, &a)),
        2 => {
            let u = rand_symbolic(rng, &a);
            ParamQuery::Multiplier { inst: MultInstance::new(vec![u.clone(), rand_symbolic(rng, &a)], u), ell: 2 }
        }
        _ => {
            let m = rng.gen_range(2..=3);
            let factors = (0..m).map(|_| rand_symbolic(rng, &a)).collect();
            ParamQuery::Multiplication(MultInstance::new(factors, rand_symbolic(rng, &a)))
        }
    }
}

/// Open cells of `(0,1)` on which membership is constant, with their state.
fn cells(set: &ParamSet) -> Vec<(Rational, Rational, bool)> {
    let mut edges = vec![Rational::zero(), Rational::one()];
    for iv in &set.intervals {
        edges.push(iv.lo.clone());
        edges.push(iv.hi.clone());
    }
    edges.extend(set.excluded_points.iter().map(|(x, _)| x.clone()));
    edges.sort();
    edges.dedup();
    edges.windows(2).map(|w| (w[0].clone(), w[1].clone(), set.contains(&w[0].midpoint(&w[1])))).collect()
}

fn sample_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let t = r(rng.gen_range(1..1000), 1000);
    lo + &(&(hi - lo) * &t)
}

fn qualifying_queries() -> Vec<(ParamQuery, ParamSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 20 {
        attempts += 1;
        assert!(attempts < 20_000, "too few nontrivial queries");
        let q = rand_query(&mut rng);
        let Ok(set) = solve_param(&q) else { continue };
        let cs = cells(&set);
        if cs.iter().any(|c| c.2) && cs.iter().any(|c| !c.2) {
            out.push((q, set));
        }
    }
    out
}

#[test]
fn soundness_on_random_symbolic_queries() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for (q, set) in qualifying_queries() {
        let cs = cells(&set);
        let ins: Vec<_> = cs.iter().filter(|c| c.2).collect();
        let outs: Vec<_> = cs.iter().filter(|c| !c.2).collect();
        for _ in 0..100 {
            let c = ins[rng.gen_range(0..ins.len())];
            let x = sample_in(&mut rng, &c.0, &c.1);
            assert_eq!(q.covered_at(&x).unwrap(), Some(true), "{:?} at x = {} ({})", q, x, set);
            let c = outs[rng.gen_range(0..outs.len())];
            let x = sample_in(&mut rng, &c.0, &c.1);
            assert_eq!(q.covered_at(&x).unwrap(), Some(false), "{:?} at x = {} ({})", q, x, set);
        }
    }
}

#[test]
fn endpoints_are_exact() {
    for (q, set) in qualifying_queries() {
        for iv in &set.intervals {
            for (x, closed) in [(&iv.lo, iv.lo_closed), (&iv.hi, iv.hi_closed)] {
                if x.is_zero() || *x == Rational::one() {
                    continue;
                }
                if let Some(v) = q.covered_at(x).unwrap() {
                    assert_eq!(v, closed, "{:?} endpoint x = {} in {}", q, x, set);
                }
            }
        }
        for (x, _) in &set.excluded_points {
            assert_ne!(q.covered_at(x).unwrap(), Some(true));
        }
    }
}

#[test]
fn verdict_is_constant_between_breakpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for (q, _) in qualifying_queries() {
        let mut edges = vec![Rational::zero()];
        edges.extend(q.breakpoints());
        edges.push(Rational::one());
        for w in edges.windows(2) {
            let a = sample_in(&mut rng, &w[0], &w[1]);
            let b = sample_in(&mut rng, &w[0], &w[1]);
            assert_eq!(q.covered_at(&a).unwrap(), q.covered_at(&b).unwrap(), "{:?} on ({}, {})", q, w[0], w[1]);
        }
    }
}
