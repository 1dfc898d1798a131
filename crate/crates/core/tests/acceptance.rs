//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use periodlab::arith::{pi, AlgebraicNumber, BigComplex, PrecisionContext};
use periodlab::dimension::dimension_report_with;
use periodlab::elliptic::{EllipticPoint, Lattice};
use periodlab::hyper::{euler_check, Sign};
use periodlab::motive::validate;
use periodlab::periods::{
    form_period, genus0_period, integrand, oracle, period_matrix, reduce_two_pi_i, sigma_period, verify, BlockTag,
    Chain, DifferentialForm, Genus0Integral, Leg, RationalFunction, ThirdKindTerm, Verdict, INFINITY,
};
use periodlab::relations::{estimate_rank, find_relation};
use periodlab::vanishing::{classify, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn dimension_tables() -> Outcome {
    let start = Instant::now();
    let mut expected = vec![
        ("example_noncm.json", 11),
        ("example_cm.json", 9),
        ("rank2_noncm.json", 18),
        ("cm_quartet_16.json", 16),
        ("cm_quartet_14.json", 14),
        ("cm_quartet_12.json", 12),
        ("cm_quartet_10.json", 10),
    ];
    let saturated: Vec<(String, u64)> = (1..=3)
        .flat_map(|n| (1..=3).map(move |m| (format!("saturated_noncm_{n}{m}.json"), 6 + 2 * (n + m) + n * m)))
        .collect();
    expected.extend(saturated.iter().map(|(f, d)| (f.as_str(), *d)));
    let ctx = PrecisionContext::default();
    for (f, want) in &expected {
        let (spec, _) = common::motive_fixture(f);
        let m = validate(&spec).map_err(|e| format!("{f}: {e}"))?;
        let got = dimension_report_with(&m, &ctx).map_err(|e| format!("{f}: {e}"))?.delta_total;
        check(got.value.exact() == Some(*want), || format!("{f}: δ = {got:?}, expected {want}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{} motives exact in {:.0?}", expected.len(), start.elapsed()))
}

fn weierstrass_kernel() -> Outcome {
    let start = Instant::now();
    let ctx = PrecisionContext::new(256).unwrap();
    let tol = ctx.tol();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = Float::new(64);
    for k in 0..20 {
        let lat = common::random_lattice(&mut rng, &ctx);
        let leg = lat.quasi_periods().legendre_residual(&lat).abs();
        check(leg < tol, || format!("lattice {k}: Legendre residual {}", leg.to_f64()))?;
        for _ in 0..100 {
            let z = common::random_point(&mut rng, &lat);
            let r = common::ode_residual(&lat, &z);
            check(r < tol, || format!("lattice {k}: ODE residual {}", r.to_f64()))?;
            worst = worst.max(&Float::with_val(64, &r));
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("20 lattices x 100 points, worst ODE residual {:.1e}, {:.1?}", worst.to_f64(), start.elapsed()))
}

fn quasi_periodicity() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let tol = ctx.tol();
    let one = Float::with_val(64, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..50 {
        let lat = common::random_lattice(&mut rng, &ctx);
        let z = common::random_point(&mut rng, &lat);
        let u = common::random_point(&mut rng, &lat);
        if (&z - &u).abs() < 0.01 {
            continue;
        }
        let qp = lat.quasi_periods();
        for (i, (w, eta)) in [(&lat.omega1, &qp.eta1), (&lat.omega2, &qp.eta2)].into_iter().enumerate() {
            let zw = &z + w;
            let zeta = lat.zeta(&zw).unwrap().dist(&(&lat.zeta(&z).unwrap() + eta));
            check(zeta < tol, || format!("triple {k}, ω{}: ζ off by {}", i + 1, zeta.to_f64()))?;
            let half = w.scale(&Float::with_val(w.prec(), 0.5));
            let want = -&(&(eta * &(&z + &half)).exp() * &lat.sigma(&z).unwrap());
            let sigma = lat.sigma(&zw).unwrap().dist(&want);
            check(sigma < Float::with_val(256, &tol * want.abs().max(&one)), || {
                format!("triple {k}, ω{}: σ off by {}", i + 1, sigma.to_f64())
            })?;
        }
        let (m, n) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let want = &lat.lambda(&u, m, n).unwrap().exp() * &lat.f_factor(&z, &u).unwrap();
        let f = lat.f_factor(&(&z + &lat.point(m, n)), &u).unwrap().dist(&want);
        check(f < Float::with_val(256, &tol * want.abs().max(&one)), || {
            format!("triple {k}: F off by {}", f.to_f64())
        })?;
    }
    Ok("ζ, σ, F on 50 random triples".into())
}

fn siegel() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let job: Genus0Integral = serde_json::from_value(common::fixture("siegel.json")["input"].clone()).unwrap();
    let p = genus0_period(&job, &ctx).map_err(|e| e.to_string())?;
    let b = 256;
    let closed = Float::with_val(b, Float::with_val(b, 2).ln() + pi(b) / Float::with_val(b, 3).sqrt()) / 3u32;
    let err = p.value.dist(&BigComplex::from_real(&closed));
    check(err < 1e-60, || format!("closed form off by {:e}", err.to_f64()))?;
    let eps = Float::with_val(b, Float::i_exp(1, -200));
    let q = oracle::segment(|x| integrand(&job, x), &BigComplex::zero(b), &BigComplex::one(b), &eps)
        .map_err(|e| e.to_string())?;
    let qerr = q.dist(&p.value);
    check(qerr < 1e-50, || format!("quadrature off by {:e}", qerr.to_f64()))?;
    Ok(format!("|err| = {:.1e}, quadrature {:.1e}", err.to_f64(), qerr.to_f64()))
}

fn hypergeometric() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let ode_bound = Float::with_val(64, 10).pow(-(ctx.digits() as i32 - 12));
    let mut worst = Float::new(64);
    for (p, q) in [(1, 8), (1, 4), (1, 2), (3, 4)] {
        let r = euler_check(&AlgebraicNumber::rational(&Rational::from((p, q))), &ctx).map_err(|e| e.to_string())?;
        check(r.within_tolerance(), || format!("λ = {p}/{q}: residual {:e}", r.residual.to_f64()))?;
        check(r.sign == Sign::Plus, || format!("λ = {p}/{q}: sign {:?}", r.sign))?;
        check(r.ode_residual < ode_bound, || format!("λ = {p}/{q}: ODE residual {:e}", r.ode_residual.to_f64()))?;
        worst = worst.max(&Float::with_val(64, &r.residual));
    }
    Ok(format!("4 values of λ, worst |I − πF| = {:.1e}, ODE residual below 1e-{}", worst.to_f64(), ctx.digits() - 12))
}

fn sigma_identity() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let tol = ctx.tol();
    let eps = Float::with_val(256, Float::i_exp(1, -120));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = Float::new(64);
    for k in 0..5 {
        let lat = common::random_lattice(&mut rng, &ctx);
        let u = common::random_small_point(&mut rng, &lat);
        let s = sigma_period(&u, &lat, &ctx).map_err(|e| e.to_string())?;
        let r = s.residual.abs();
        check(r < tol, || format!("fixture {k}: residual {:e}", r.to_f64()))?;
        worst = worst.max(&Float::with_val(64, &r));
        // the straight path u/2 → −u/2 crosses the pole at 0, so bend it
        let half = u.scale(&Float::with_val(u.prec(), 0.5));
        let detour = &half.mul_i() + &half.scale(&Float::with_val(u.prec(), 0.25));
        let q = oracle::third_kind(&[half.clone(), detour, -&half], &u, &lat, &eps).map_err(|e| e.to_string())?;
        let d = reduce_two_pi_i(&(&q - &s.third_kind)).abs();
        check(d < 1e-30, || format!("fixture {k}: quadrature off by {:e}", d.to_f64()))?;
    }
    Ok(format!("5 random (curve, u), worst residual {:.1e}, quadrature agrees mod 2πi", worst.to_f64()))
}

fn relation_detector() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut recalled = 0;
    for k in 0..100 {
        let n = 3 + k % 3;
        let xs: Vec<BigComplex> = (0..n - 1).map(|_| common::random_complex(&mut rng, 256)).collect();
        let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000) * if rng.gen() { 1 } else { -1 }).collect();
        if k % 4 == 0 {
            c[0] = 0;
        }
        let mut acc = BigComplex::zero(256);
        for (x, &ci) in xs.iter().zip(&c) {
            acc = &acc + &x.scale_i64(ci);
        }
        let last = -&(&acc / &BigComplex::from_i64(256, c[n - 1]));
        let values: Vec<BigComplex> = xs.into_iter().chain(std::iter::once(last)).collect();
        if let Ok(Some(cert)) = find_relation(&values, None, 1000, &ctx) {
            let found = &cert.coefficients;
            let proportional =
                (0..n).all(|i| found[i] as i128 * c[n - 1] as i128 == c[i] as i128 * found[n - 1] as i128);
            if proportional && found[n - 1] != 0 {
                recalled += 1;
            }
        }
    }
    check(recalled == 100, || format!("planted relations recalled {recalled}/100"))?;
    let mut false_positives = 0;
    for k in 0..100 {
        let values: Vec<BigComplex> = (0..3 + k % 3).map(|_| common::random_complex(&mut rng, 256)).collect();
        match find_relation(&values, None, 1000, &ctx) {
            Ok(None) => {}
            Ok(Some(_)) => false_positives += 1,
            Err(e) => return Err(format!("independent instance {k}: {e}")),
        }
    }
    check(false_positives == 0, || format!("{false_positives} false positives"))?;
    let logs: Vec<BigComplex> =
        [2, 3, 6, 12].iter().map(|&n| AlgebraicNumber::from_i64(n).eval(&ctx).unwrap().ln().unwrap()).collect();
    let rank = estimate_rank(&logs, None, 1000, &ctx).map_err(|e| e.to_string())?.rank;
    check(rank == 2, || format!("rank of log 2, log 3, log 6, log 12 is {rank}"))?;
    Ok("recall 100/100, 0/100 false positives, Baker log rank 2".into())
}

fn end_to_end_verify() -> Outcome {
    let start = Instant::now();
    let ctx = PrecisionContext::new(512).unwrap();
    let (spec, paths) = common::motive_fixture("example_noncm.json");
    let m = validate(&spec).map_err(|e| e.to_string())?;
    let dim = dimension_report_with(&m, &ctx).map_err(|e| e.to_string())?;
    let pm = period_matrix(&m, &paths, &ctx).map_err(|e| e.to_string())?;
    let v = verify(&m, &pm, &dim, 1_000_000, &ctx).map_err(|e| e.to_string())?;
    check(v.values == 11, || format!("{} predicted-independent entries", v.values))?;
    check(v.rank.rank == 11, || format!("rank {}", v.rank.rank))?;
    check(v.rank.negative_bound >= 1_000_000, || format!("negative bound {}", v.rank.negative_bound))?;
    check(v.verdict == Verdict::Consistent, || format!("verdict {:?}", v.verdict))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("rank 11 of 11, negative bound {:.2e}, {:.1?}", v.rank.negative_bound as f64, start.elapsed()))
}

fn vanishing() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let tol = ctx.tol();
    let lat = Lattice::from_invariants(&BigComplex::from_i64(256, 4), &BigComplex::from_i64(256, -4), &ctx).unwrap();
    let q = AlgebraicNumber::from_i64;
    let base = EllipticPoint::rational(0, 2);

    let xi = DifferentialForm {
        a: q(0),
        b: q(0),
        thirds: vec![ThirdKindTerm { coeff: q(1), point: EllipticPoint::rational(1, 2), label: "P".into() }],
        exact_part: None,
    };
    let loops = Chain::new(vec![Leg::residue_loop(base.clone(), INFINITY, 1), Leg::residue_loop(base.clone(), "P", 1)]);

    let x = RationalFunction { numer: vec![q(0), q(1)], denom: vec![q(1)] };
    let dx = DifferentialForm::exact(x);
    let ends = [EllipticPoint::rational(1, 2), EllipticPoint::rational(-1, 2)];
    let balanced = Chain::new(ends.iter().map(|e| Leg::new(1, base.clone(), e.clone(), (0, 0))).collect());

    let omega = DifferentialForm::first_kind(q(1));
    let eps1 = Chain::new(vec![Leg::closed(base.clone(), (1, 0))]);

    let cases = [
        ("residue loops", &xi, &loops, Status::NontrivialZero),
        ("exact form", &dx, &balanced, Status::NontrivialZero),
        ("ε₁ against ω", &omega, &eps1, Status::Nonzero),
    ];
    for (name, form, chain, want) in cases {
        let v = classify(form, chain, &lat, &ctx).map_err(|e| format!("{name}: {e}"))?;
        check(v.status == want, || format!("{name}: {:?}, expected {want:?}", v.status))?;
        if v.status == Status::NontrivialZero {
            let direct = form_period(form, chain, &lat, &ctx).map_err(|e| e.to_string())?;
            check(direct.abs() < tol, || format!("{name}: direct evaluation {:e}", direct.abs().to_f64()))?;
        }
        if want == Status::Nonzero {
            let d = v.value.dist(&lat.omega1);
            check(d < tol, || format!("{name}: value differs from ω₁ by {:e}", d.to_f64()))?;
        }
    }
    Ok("residue loops, exact form and ε₁ classified; zeros confirmed directly".into())
}

fn block_structure() -> Outcome {
    let ctx = PrecisionContext::new(256).unwrap();
    let tol = ctx.tol();
    let mut checked = 0;
    for f in common::MATRIX_FIXTURES {
        let (spec, paths) = common::motive_fixture(f);
        let m = validate(&spec).map_err(|e| format!("{f}: {e}"))?;
        let pm = period_matrix(&m, &paths, &ctx).map_err(|e| format!("{f}: {e}"))?;
        for (i, row) in pm.rows.iter().enumerate() {
            for (j, col) in pm.columns.iter().enumerate() {
                let z = &pm.entries[i][j];
                if pm.tags[i][j] == BlockTag::Zero {
                    check(z.is_exact_zero(), || format!("{f}: ({row}, {col}) tagged zero but {z:?}"))?;
                }
                if row.starts_with("xi") && col.starts_with("sigma") {
                    let r = reduce_two_pi_i(z).abs();
                    check(r < tol, || format!("{f}: ({row}, {col}) is {:e} off 2πiℤ", r.to_f64()))?;
                }
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} period matrices"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("dimension tables", dimension_tables),
        ("Weierstrass kernel", weierstrass_kernel),
        ("quasi-periodicity", quasi_periodicity),
        ("Siegel integral", siegel),
        ("hypergeometric identity", hypergeometric),
        ("sigma identity", sigma_identity),
        ("relation detector", relation_detector),
        ("end-to-end verify", end_to_end_verify),
        ("vanishing classifier", vanishing),
        ("block structure", block_structure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
