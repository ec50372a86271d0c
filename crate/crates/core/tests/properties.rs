#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use ftl_core::comparison::{solve_comparison, ScalarHybridSystem};
use ftl_core::fuzzy::{AlphaGrid, FuzzyNumber, FuzzyVector};
use ftl_core::hukuhara::{delta_h_derivative, FuzzyTrajectory};
use ftl_core::hybrid::{build_example_system, solve, solve_segment, HybridFuzzySystem, StepMode};
use ftl_core::stability::{dini_along_solution, LyapunovFn};
use ftl_core::timescale::{RegressiveFn, TimeScale};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn grid() -> AlphaGrid<f64> {
    AlphaGrid::uniform(6).unwrap()
}

/// Arbitrary fuzzy number: a core interval widened by nonnegative steps per level.
fn fuzzy() -> impl Strategy<Value = FuzzyNumber<f64>> {
    let m = grid().len();
    (-5.0..5.0f64, 0.0..2.0f64, prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), m - 1)).prop_map(
        move |(c, w, steps)| {
            let mut lo = vec![c - w / 2.0; m];
            let mut hi = vec![c + w / 2.0; m];
            for i in (0..m - 1).rev() {
                lo[i] = lo[i + 1] - steps[i].0;
                hi[i] = hi[i + 1] + steps[i].1;
            }
            FuzzyNumber::from_cuts(grid(), lo, hi).unwrap()
        },
    )
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_axioms(u in fuzzy(), v in fuzzy(), w in fuzzy()) {
        let d = |a: &FuzzyNumber<f64>, b: &FuzzyNumber<f64>| a.dist(b).unwrap();
        prop_assert_eq!(d(&u, &u), 0.0);
        prop_assert!(d(&u, &v) >= 0.0);
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + TOL);
        if u != v {
            prop_assert!(d(&u, &v) > 0.0);
        }
    }

    #[test]
    fn distance_is_translation_invariant_and_homogeneous(u in fuzzy(), v in fuzzy(), w in fuzzy(), z in fuzzy(), k in -3.0..3.0f64) {
        let d = |a: &FuzzyNumber<f64>, b: &FuzzyNumber<f64>| a.dist(b).unwrap();
        let (uw, vw) = (u.add(&w).unwrap(), v.add(&w).unwrap());
        prop_assert!(close(d(&uw, &vw), d(&u, &v)));
        prop_assert!(d(&uw, &v.add(&z).unwrap()) <= d(&u, &v) + d(&w, &z) + TOL);
        prop_assert!(close(d(&u.scale(k), &v.scale(k)), k.abs() * d(&u, &v)));
    }

    #[test]
    fn norm_properties(u in fuzzy(), v in fuzzy(), k in -3.0..3.0f64) {
        let zero = FuzzyNumber::zero(&grid());
        let (uv, vv) = (FuzzyVector::scalar(u.clone()), FuzzyVector::scalar(v.clone()));
        prop_assert_eq!(uv.norm(), u.dist(&zero).unwrap());
        prop_assert!(close(uv.scale(k).norm(), k.abs() * uv.norm()));
        prop_assert!(uv.add(&vv).unwrap().norm() <= uv.norm() + vv.norm() + TOL);
    }
}

fn levelwise_round_trip(u: &FuzzyNumber<f64>, v: &FuzzyNumber<f64>, w: &FuzzyNumber<f64>) -> bool {
    (0..u.grid().len()).all(|i| {
        let (cu, cv, cw) = (u.cut(i), v.cut(i), w.cut(i));
        let first = close(cu.lo, cv.lo + cw.lo) && close(cu.hi, cv.hi + cw.hi);
        let second = close(cv.lo, cu.lo - cw.hi) && close(cv.hi, cu.hi - cw.lo);
        first || second
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gh_difference_round_trips(a in fuzzy(), b in fuzzy(), case in 0..3u8) {
        // Build pairs where the difference exists by construction, plus raw pairs.
        let (u, v) = match case {
            0 => (b.add(&a).unwrap(), b),
            1 => (a.clone(), a.add(&b.neg()).unwrap()),
            _ => (a, b),
        };
        if let Ok(w) = u.gh_difference(&v) {
            prop_assert!(levelwise_round_trip(&u, &v, &w));
        } else {
            prop_assert!(case == 2);
        }
    }

    #[test]
    fn hukuhara_difference_inverts_addition(v in fuzzy(), w in fuzzy()) {
        let u = v.add(&w).unwrap();
        let h = u.hukuhara_difference(&v).unwrap();
        prop_assert!(h.approx_eq(&w, 1e-11));
        prop_assert!(v.add(&h).unwrap().approx_eq(&u, 1e-11));
    }
}

#[test]
fn gh_difference_rejects_interval_minus_triangle() {
    let g = AlphaGrid::default();
    let u = FuzzyNumber::crisp_interval(0.0, 1.0, &g);
    let v = FuzzyNumber::triangular(0.0, 0.5, 1.0, &g).unwrap();
    assert!(u.gh_difference(&v).is_err());
}

fn scales() -> Vec<TimeScale<f64>> {
    vec![
        TimeScale::integer(12).unwrap(),
        TimeScale::qscale(1.0, 1.5, 10).unwrap(),
        TimeScale::explicit(vec![0.0, 0.3, 0.35, 1.0, 2.5, 2.6, 4.0]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn regressive_identities(seed_p in prop::collection::vec(-0.9..3.0f64, 12), seed_q in prop::collection::vec(-0.9..3.0f64, 12)) {
        for ts in scales() {
            let n = ts.len() - 1;
            let mus: Vec<f64> = (0..n).map(|i| ts.mu_at(i).unwrap()).collect();
            // Scale into (-1/mu, ...) so that 1 + mu p stays positive.
            let vals = |s: &[f64]| -> Vec<f64> { (0..n).map(|i| s[i] / mus[i]).collect() };
            let p = RegressiveFn::from_values(&ts, vals(&seed_p)).unwrap();
            let q = RegressiveFn::from_values(&ts, vals(&seed_q)).unwrap();
            let one = RegressiveFn::constant(&ts, 1.0).unwrap();
            let sum = p.circle_plus(&q).unwrap();
            let self_minus = p.circle_minus(&p).unwrap();
            let neg_one = one.ominus().unwrap();
            for i in 0..n {
                let (a, b, mu) = (p.values()[i], q.values()[i], mus[i]);
                prop_assert!(close(sum.values()[i], a + b + mu * a * b));
                prop_assert_eq!(self_minus.values()[i], 0.0);
                prop_assert!(close(neg_one.values()[i], -1.0 / (1.0 + mu)));
            }
            // p ⊕ (⊖p) = 0
            let cancel = p.circle_plus(&p.ominus().unwrap()).unwrap();
            prop_assert!(cancel.values().iter().all(|x| x.abs() <= 1e-10 * (1.0 + x.abs())));
        }
    }
}

/// Crisp linear system `Δu = a_k u + c_k` on `{0, …, n}`. The switch value is
/// the crisp segment index, which the right-hand side uses to look up `(a_k, c_k)`.
fn crisp_linear(n: usize, switches: &[f64], gains: Vec<(f64, f64)>, x0: f64) -> HybridFuzzySystem<f64> {
    let ts = Arc::new(TimeScale::integer(n).unwrap());
    let g = AlphaGrid::default();
    let switch = |k: usize, _t: f64, u: &FuzzyVector<f64>| FuzzyVector::crisp(&[k as f64], u.grid());
    let rhs = move |_t: f64, u: &FuzzyVector<f64>, lam: &FuzzyVector<f64>| {
        let (a, c) = gains[lam.component(0).lower()[0] as usize];
        u.scale(a).add(&FuzzyVector::crisp(&[c], u.grid())?)
    };
    HybridFuzzySystem::new(ts, switches, Arc::new(rhs), Arc::new(switch), 1e12, FuzzyVector::crisp(&[x0], &g).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn crisp_systems_match_real_euler(
        n in 4usize..15,
        n_sw in 1usize..=3,
        cuts in prop::collection::vec(0.0..1.0f64, 2),
        gains in prop::collection::vec((-1.5..0.5f64, -1.0..1.0f64), 3),
        x0 in -2.0..2.0f64,
    ) {
        let mut idx: Vec<usize> = cuts[..n_sw - 1].iter().map(|c| 1 + (c * (n - 2) as f64) as usize).collect();
        idx.sort();
        idx.dedup();
        let mut switches = vec![0.0];
        switches.extend(idx.iter().map(|&i| i as f64));
        let sys = crisp_linear(n, &switches, gains.clone(), x0);
        let sol = solve(&sys, StepMode::Expansive, n as f64).unwrap();
        let mut x = x0;
        for t in 0..=n {
            let u = sol.trajectory.value(t).component(0);
            prop_assert!(u.is_crisp());
            prop_assert!((u.lower()[0] - x).abs() <= TOL * (1.0 + x.abs()), "t = {}: {} vs {}", t, u.lower()[0], x);
            let k = switches.iter().rposition(|&s| s <= t as f64).unwrap();
            let (a, c) = gains[k];
            x += a * x + c;
        }
    }
}

#[test]
fn segments_solved_separately_agree() {
    let sys = build_example_system(&AlphaGrid::default(), 3, 4).unwrap();
    let full = solve(&sys, StepMode::Expansive, 16.0).unwrap();
    let idx = sys.switch_indices().to_vec();
    let mut u = sys.initial().clone();
    let mut pieces = vec![u.clone()];
    for (k, &start) in idx.iter().enumerate() {
        let end = idx.get(k + 1).copied().unwrap_or(16);
        let lam = sys.switch_value(k, sys.time_scale().point(start), &u).unwrap();
        let seg = solve_segment(&sys, StepMode::Expansive, start, end, u.clone(), &lam).unwrap();
        pieces.extend(seg[1..].iter().cloned());
        u = seg.last().unwrap().clone();
    }
    assert_eq!(pieces, full.trajectory.values());
}

/// `r ↦ r + μ g` is increasing here since `μ < 3` on this scale.
fn comparison(r0: f64) -> ScalarHybridSystem<f64> {
    let ts = Arc::new(TimeScale::qscale(1.0, 1.25, 12).unwrap());
    let ts_g = ts.clone();
    ScalarHybridSystem::new(
        ts,
        &[1.0, 1.953125],
        Arc::new(move |t, r: f64, v: f64| Ok(0.05 * r.sin() + 0.1 * v - 0.2 * r / (1.0 + ts_g.mu(t)?))),
        Arc::new(|_k, v: f64| Ok(0.5 * v + v.min(2.0))),
        r0,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn comparison_map_is_order_preserving(a in 0.0..5.0f64, b in 0.0..5.0f64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let horizon = comparison(0.0).time_scale().last();
        let r1 = solve_comparison(&comparison(lo), horizon).unwrap();
        let r2 = solve_comparison(&comparison(hi), horizon).unwrap();
        for (x, y) in r1.values.iter().zip(&r2.values) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn dini_of_norm_bounded_by_derivative_norm(c in -0.5..0.5f64, spread in 0.0..1.0f64) {
        let g = AlphaGrid::default();
        let sys = build_example_system(&g, 2, 3).unwrap();
        let u0 = FuzzyVector::scalar(FuzzyNumber::triangular(c - spread, c, c + spread, &g).unwrap());
        let sys = sys.with_initial(u0).unwrap();
        let sol = solve(&sys, StepMode::Expansive, 9.0).unwrap();
        let v = LyapunovFn::norm();
        for &t in &sol.trajectory.times()[..9] {
            let dini = dini_along_solution(&v, &sol.trajectory, t).unwrap();
            let d = delta_h_derivative(&sol.trajectory, t).unwrap();
            let d = d.derivative().expect("scattered points always have a derivative");
            prop_assert!(dini <= d.norm() + TOL);
        }
    }
}

/// `t ↦ tri(sin t − t/2, sin t, sin t + t)` sampled on `ts`.
fn sampled(ts: TimeScale<f64>) -> FuzzyTrajectory<f64> {
    let g = AlphaGrid::default();
    FuzzyTrajectory::from_fn(Arc::new(ts), |t| {
        Ok(FuzzyVector::scalar(FuzzyNumber::triangular(t.sin() - 0.5 * t, t.sin(), t.sin() + t, &g)?))
    })
    .unwrap()
}

#[test]
fn derivative_at_scattered_points_is_the_quotient() {
    for ts in [TimeScale::integer(10).unwrap(), TimeScale::qscale(1.0, 2.0, 8).unwrap()] {
        let traj = sampled(ts.clone());
        for i in 0..traj.len() - 1 {
            let (t, s) = (ts.point(i), ts.point(i + 1));
            let d = delta_h_derivative(&traj, t).unwrap();
            let d = d.derivative().unwrap().component(0);
            let q = traj.value(i + 1).component(0).gh_difference(traj.value(i).component(0)).unwrap().scale(1.0 / (s - t));
            assert!(d.approx_eq(&q, TOL), "t = {t}");
        }
    }
}

#[test]
fn crisp_derivative_reduces_to_delta_derivative() {
    let g = AlphaGrid::default();
    for ts in [TimeScale::integer(10).unwrap(), TimeScale::qscale(1.0, 2.0, 8).unwrap()] {
        let f = |t: f64| t * t - 3.0 * t.cos();
        let traj = FuzzyTrajectory::from_fn(Arc::new(ts.clone()), |t| FuzzyVector::crisp(&[f(t)], &g)).unwrap();
        for i in 0..ts.len() - 1 {
            let t = ts.point(i);
            let want = ts.delta_derivative(f, t).unwrap();
            let d = delta_h_derivative(&traj, t).unwrap();
            let d = d.derivative().unwrap().component(0);
            assert!(d.is_crisp());
            assert!((d.lower()[0] - want).abs() <= TOL * (1.0 + want.abs()), "t = {t}");
        }
    }
}

#[test]
fn f32_instantiation_tracks_f64() {
    let s64 = build_example_system(&AlphaGrid::<f64>::default(), 1, 5).unwrap();
    let s32 = build_example_system(&AlphaGrid::<f32>::default(), 1, 5).unwrap();
    let a = solve(&s64, StepMode::Expansive, 10.0).unwrap();
    let b = solve(&s32, StepMode::Expansive, 10.0f32).unwrap();
    for (x, y) in a.trajectory.norms().iter().zip(b.trajectory.norms()) {
        assert!((x - y as f64).abs() <= 1e-5 * x.abs().max(1.0));
    }
}
