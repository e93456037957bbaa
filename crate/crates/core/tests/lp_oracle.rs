use minilp::{ComparisonOp, OptimizationDirection, Problem};
use mmflow::lp::{LinearProgram, LpError, Relation};
use mmflow::scalar::rational;
use mmflow::{Rational, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
struct Instance {
    vars: usize,
    objective: Vec<i64>,
    rows: Vec<(Vec<i64>, Relation, i64)>,
}

fn random_instance(rng: &mut ChaCha8Rng, boxed: bool) -> Instance {
    let vars = rng.random_range(1..=20);
    let m = rng.random_range(1..=15);
    let objective = (0..vars).map(|_| rng.random_range(-5..=9)).collect();
    let mut rows = Vec::new();
    for _ in 0..m {
        let coeffs = (0..vars)
            .map(|_| {
                if rng.random_bool(0.5) {
                    rng.random_range(-4..=6)
                } else {
                    0
                }
            })
            .collect();
        let rel = match rng.random_range(0..10) {
            0..=6 => Relation::Le,
            7..=8 => Relation::Ge,
            _ => Relation::Eq,
        };
        rows.push((coeffs, rel, rng.random_range(-3..=20)));
    }
    // The reference solver reports unbounded problems as NaN, so comparisons
    // use boxed instances; the property tests also see open ones.
    if boxed || rng.random_bool(0.9) {
        for v in 0..vars {
            let mut c = vec![0; vars];
            c[v] = 1;
            rows.push((c, Relation::Le, rng.random_range(1..=10)));
        }
    }
    Instance {
        vars,
        objective,
        rows,
    }
}

fn ours<S: Scalar>(inst: &Instance) -> Result<mmflow::lp::LpSolution<S>, LpError> {
    let conv = |x: i64| S::from_rational(&rational(x, 1));
    let mut lp = LinearProgram::<S>::new(inst.vars);
    for (v, &c) in inst.objective.iter().enumerate() {
        lp.set_objective(v, conv(c));
    }
    for (coeffs, rel, rhs) in &inst.rows {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (v, conv(c)))
            .collect();
        lp.add_constraint(terms, *rel, conv(*rhs));
    }
    lp.solve()
}

fn reference(inst: &Instance) -> Result<f64, minilp::Error> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = inst
        .objective
        .iter()
        .map(|&c| p.add_var(c as f64, (0.0, f64::INFINITY)))
        .collect();
    for (coeffs, rel, rhs) in &inst.rows {
        let expr: Vec<_> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (vars[v], c as f64))
            .collect();
        let op = match rel {
            Relation::Le => ComparisonOp::Le,
            Relation::Ge => ComparisonOp::Ge,
            Relation::Eq => ComparisonOp::Eq,
        };
        p.add_constraint(expr.as_slice(), op, *rhs as f64);
    }
    p.solve().map(|s| s.objective())
}

#[test]
fn random_lps_match_minilp() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut optimal, mut infeasible) = (0, 0);
    for i in 0..50 {
        let inst = random_instance(&mut rng, true);
        let got = ours::<f64>(&inst);
        let exact = ours::<Rational>(&inst);
        match (reference(&inst), got, exact) {
            (Ok(want), Ok(got), Ok(exact)) => {
                assert!(
                    (got.objective - want).abs() <= 1e-6 * (1.0 + want.abs()),
                    "instance {i}"
                );
                assert!((exact.objective.to_f64() - want).abs() <= 1e-6 * (1.0 + want.abs()));
                optimal += 1;
            }
            (
                Err(minilp::Error::Infeasible),
                Err(LpError::Infeasible),
                Err(LpError::Infeasible),
            ) => infeasible += 1,
            (a, b, c) => panic!(
                "instance {i}: minilp {a:?}, f64 {:?}, exact {:?}",
                b.err(),
                c.err()
            ),
        }
    }
    assert!(optimal >= 25, "optimal={optimal} infeasible={infeasible}");
}

/// Strong duality and dual sign conventions, checked exactly.
fn check_certificate(inst: &Instance) {
    let Ok(sol) = ours::<Rational>(inst) else {
        return;
    };
    let r = |x: i64| rational(x, 1);
    let dual_obj: Rational = inst
        .rows
        .iter()
        .zip(&sol.duals)
        .map(|((_, _, b), y)| r(*b) * y)
        .sum();
    assert_eq!(dual_obj, sol.objective);
    for ((coeffs, rel, rhs), y) in inst.rows.iter().zip(&sol.duals) {
        let lhs: Rational = coeffs.iter().zip(&sol.primal).map(|(&a, x)| r(a) * x).sum();
        match rel {
            Relation::Le => assert!(lhs <= r(*rhs) && *y >= r(0)),
            Relation::Ge => assert!(lhs >= r(*rhs) && *y <= r(0)),
            Relation::Eq => assert_eq!(lhs, r(*rhs)),
        }
    }
    // Dual feasibility: A^T y >= c.
    for v in 0..inst.vars {
        let col: Rational = inst
            .rows
            .iter()
            .zip(&sol.duals)
            .map(|((c, _, _), y)| r(c[v]) * y)
            .sum();
        assert!(col >= r(inst.objective[v]), "reduced cost of x{v}");
    }
    assert!(sol.primal.iter().all(|x| *x >= r(0)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exact_solutions_carry_duality_certificates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_certificate(&random_instance(&mut rng, false));
    }

    #[test]
    fn float_and_exact_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, false);
        match (ours::<f64>(&inst), ours::<Rational>(&inst)) {
            (Ok(a), Ok(b)) => prop_assert!((a.objective - b.objective.to_f64()).abs() < 1e-6),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.err(), b.err()),
        }
    }
}
