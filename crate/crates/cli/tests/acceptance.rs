//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::Command;
use std::time::{Duration, Instant};

use dessin_cli::PRECISION_ENV;
use dessin_core::belyi::{
    assemble_belyi, certify, compute_belyi, rationalize, solve_small_system, ExactRationalFunction,
    RationalPolynomial, DEFAULT_TOLERANCE,
};
use dessin_core::dessins::build_family_dessin;
use dessin_core::hypergeometric::{solve_hg, vertex_angle_exponent, HGParams, Vertex};
use dessin_core::lattice::{classify_division_points, EisensteinPoint};
use dessin_core::numeric::Projective;
use dessin_core::quotients::{is_prime, quotient_ramification, verify_composition_cover};
use dessin_core::weierstrass::{eisenstein_invariants, LatticeScaling};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ac1_second_member_exact() -> Check {
    let start = Instant::now();
    let scaling = LatticeScaling::<f64>::new(1e-12).map_err(|e| e.to_string())?;
    let assembly = assemble_belyi(2, &classify_division_points(2), &scaling).map_err(|e| e.to_string())?;
    let f = rationalize(&assembly.function, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?.canonicalize();
    // k (x - 1)(x - beta)^3 / (x - gamma)^3 with k = 1/8, beta = -1, gamma = 1/2
    let (k, beta, gamma) = (q(1, 8), q(-1, 1), q(1, 2));
    let num = (&RationalPolynomial::linear_root(q(1, 1)) * &RationalPolynomial::linear_root(beta).pow(3)).scale(&k);
    let expected = ExactRationalFunction::canonical(num, RationalPolynomial::linear_root(gamma).pow(3));
    ensure(f == expected, format!("got {f:?}"))?;
    let alpha_check = f.minus_one().numerator
        == (&RationalPolynomial::from_integers(&[0, 1]) * &RationalPolynomial::linear_root(q(2, 1)).pow(3)).scale(&q(1, 8));
    ensure(alpha_check, "f - 1 is not (1/8) x (x - 2)^3 / (x - 1/2)^3")?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("exact match in {:?}", start.elapsed()))
}

fn ac2_division_values() -> Check {
    let start = Instant::now();
    let s = LatticeScaling::<f64>::new(1e-12).map_err(|e| e.to_string())?;
    let (v1, v2) = (EisensteinPoint::v1(), EisensteinPoint::v2());
    let third = Rational64::new(1, 3);
    let cases = [
        (v1, 2.0),
        ((v1 + v2).scale(third), -1.0),
        ((v2.scale(Rational64::from_integer(2)) - v1).scale(third), 0.5),
    ];
    let mut worst = 0.0f64;
    for (z, want) in cases {
        // generic evaluation, not the exact shortcut for rotation centers
        let Projective::Finite(v) = s.phi(s.embed(z)) else { return Err(format!("phi({z:?}) infinite")) };
        worst = worst.max((v - Complex64::new(want, 0.0)).norm());
    }
    let w = s.wp_prime(s.embed((v1 + v2).scale(Rational64::new(-2, 3)))).map_err(|e| e.to_string())?;
    worst = worst.max((w - Complex64::new(0.0, -2.0)).norm());
    ensure(worst < 1e-9, format!("max error {worst:e}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("max error {worst:.1e}"))
}

fn ac3_oracle_equivalence() -> Check {
    let small = solve_small_system().map_err(|e| e.to_string())?.rational_function();
    let pipeline = compute_belyi(2, 1e-12).map_err(|e| e.to_string())?.function;
    ensure(small == pipeline, "small system and pipeline differ")?;
    Ok("identical exact functions".into())
}

fn ac4_family() -> Check {
    let start = Instant::now();
    let mut detail = Vec::new();
    for n in 1..=6u32 {
        let c = compute_belyi(n, 1e-12).map_err(|e| format!("n={n}: {e}"))?;
        ensure(c.function.degree() as u32 == n * n, format!("n={n}: degree {}", c.function.degree()))?;
        let again = certify(&c.function, &build_family_dessin(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(again.passes() && again.passport_match, format!("n={n}: {again:?}"))?;
        detail.push(format!("n={n}:{:?}", c.working_precision));
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{} in {:?}", detail.join(" "), start.elapsed()))
}

fn ac5_lattice() -> Check {
    let (g2a, g3a) = eisenstein_invariants(150).map_err(|e| e.to_string())?;
    let (g2b, g3b) = eisenstein_invariants(300).map_err(|e| e.to_string())?;
    ensure(g2a.norm() < 1e-10 && g2b.norm() < 1e-10, format!("|g2| = {:e}", g2b.norm()))?;
    ensure((g3a - g3b).norm() < 1e-9, format!("g3 drift {:e}", (g3a - g3b).norm()))?;
    let s = LatticeScaling::<f64>::new(1e-12).map_err(|e| e.to_string())?;
    ensure((s.g3 - 4.0).norm() < 1e-10, format!("|g3 - 4| = {:e}", (s.g3 - 4.0).norm()))?;
    let mut worst = 0.0f64;
    for h in [EisensteinPoint::v1(), EisensteinPoint::v2(), EisensteinPoint::v1() + EisensteinPoint::v2()] {
        worst = worst.max(s.wp_prime(s.embed(h)).map_err(|e| e.to_string())?.norm());
    }
    ensure(worst < 1e-10, format!("wp'(half period) = {worst:e}"))?;
    Ok(format!("g3 drift {:.1e}, |wp'(half period)| {worst:.1e}", (g3a - g3b).norm()))
}

fn ac6_differential_equation() -> Check {
    let s = LatticeScaling::<f64>::new(1e-12).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let z = EisensteinPoint::new(
            Rational64::new(rng.gen_range(0..10_000), 10_000),
            Rational64::new(rng.gen_range(0..10_000), 10_000),
        );
        if z.reduce_mod_lattice() == EisensteinPoint::zero() {
            continue;
        }
        let x = s.embed(z);
        let (Ok(p), Ok(dp)) = (s.wp(x), s.wp_prime(x)) else { continue };
        worst = worst.max((dp * dp - (4.0 * p * p * p - 4.0)).norm());
        count += 1;
    }
    ensure(worst < 1e-8, format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e} over 100 points"))
}

fn ac7_schwarz() -> Check {
    let third = Rational64::new(1, 3);
    let params = HGParams::new(third, third, third).map_err(|e| e.to_string())?;
    let sol = solve_hg(params, Vertex::Zero).map_err(|e| e.to_string())?;
    let mut sum = 0.0;
    for v in Vertex::ALL {
        let a = vertex_angle_exponent(&sol, v).map_err(|e| e.to_string())?;
        ensure((a - 1.0 / 3.0).abs() < 1e-3, format!("{v:?}: {a}"))?;
        sum += a;
    }
    ensure((sum - 1.0).abs() < 3e-3, format!("sum {sum}"))?;
    let mut worst = 0.0f64;
    for vertex in Vertex::ALL {
        let local = solve_hg(params, vertex).map_err(|e| e.to_string())?;
        for k in 1..=17 {
            let x = vertex.point(Complex64::new(0.05 * k as f64, 0.0));
            worst = worst.max(local.ode_residual(x).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst < 1e-8, format!("ODE residual {worst:e}"))?;
    Ok(format!("angle sum {sum:.6}, ODE residual {worst:.1e}"))
}

fn ac8_riemann_hurwitz() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for p in (5..=101u64).filter(|&p| is_prime(p)) {
        let r = quotient_ramification(p).map_err(|e| e.to_string())?;
        let (pi, g) = (p as i64, r.g as i64);
        ensure(r.g_quotient == 0 && r.m == 3, format!("p={p}: {r:?}"))?;
        ensure(2 * g - 2 == pi * -2 + 3 * (pi - 1), format!("p={p}: identity fails"))?;
        count += 1;
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{count} primes in {:?}", start.elapsed()))
}

fn ac9_cover() -> Check {
    let start = Instant::now();
    let c = verify_composition_cover(1000).map_err(|e| e.to_string())?;
    ensure(c.composition_degree == 6, format!("degree {}", c.composition_degree))?;
    ensure(c.max_critical_residual < 1e-8, format!("residual {:e}", c.max_critical_residual))?;
    ensure(c.pi_branch_locus == ["0", "inf"], format!("pi branch locus {:?}", c.pi_branch_locus))?;
    ensure(c.passes(), format!("{c:?}"))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("degree 6, residual {:.1e}, {} critical places", c.max_critical_residual, c.critical_points))
}

fn ac10_determinism() -> Check {
    let commands: [&[&str]; 9] = [
        &["generate", "--n", "3"],
        &["generate", "--n", "3", "--format", "dot"],
        &["generate", "--n", "3", "--format", "svg"],
        &["phi-values", "--n", "3"],
        &["belyi", "--n", "3", "--exact"],
        &["verify", "--n", "3"],
        &["schwarz", "--lambda", "1/3", "--mu", "1/3", "--nu", "1/3"],
        &["quotient", "--p", "7"],
        &["cover-check", "--samples", "200"],
    ];
    for args in commands {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_dessin")).args(args).env_remove(PRECISION_ENV).output().unwrap()
        };
        let (a, b) = (go(), go());
        ensure(a.status.success(), format!("{args:?} exited with {:?}", a.status.code()))?;
        ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), format!("{args:?} differs"))?;
    }
    Ok(format!("{} commands byte-identical", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 f_2 exact reproduction", ac1_second_member_exact),
        ("AC2 division values", ac2_division_values),
        ("AC3 oracle equivalence", ac3_oracle_equivalence),
        ("AC4 family certification", ac4_family),
        ("AC5 lattice invariants", ac5_lattice),
        ("AC6 Weierstrass equation", ac6_differential_equation),
        ("AC7 Schwarz angles", ac7_schwarz),
        ("AC8 Riemann-Hurwitz sweep", ac8_riemann_hurwitz),
        ("AC9 composition cover", ac9_cover),
        ("AC10 determinism", ac10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
