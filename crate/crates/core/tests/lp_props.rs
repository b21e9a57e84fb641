//! Randomized checks of the exact simplex: strong duality at optima, Farkas
//! soundness at infeasibility, ray validity at unboundedness.

mod common;

use common::Rng;
use mpec_core::lp::{lp_solve, HPolyhedron, LpOutcome, Sense};
use mpec_core::rational::{rat, ratio, RVector, Rational};
use num_traits::{Signed, Zero};

fn random_lp(rng: &mut Rng) -> (RVector, HPolyhedron, Sense) {
    let dim = rng.int_in(1, 3) as usize;
    let rows = rng.int_in(1, 6) as usize;
    let n_eq = rng.int_in(0, 1) as usize;
    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for k in 0..rows {
        let a = rng.vector(dim, -3, 3);
        let b = rat(rng.int_in(-3, 3));
        if k < n_eq {
            eq.push((a, b));
        } else {
            ineq.push((a, b));
        }
    }
    let c = rng.vector(dim, -3, 3);
    let sense = if rng.int_in(0, 1) == 0 {
        Sense::Max
    } else {
        Sense::Min
    };
    (c, HPolyhedron::new(dim, eq, ineq), sense)
}

#[test]
fn outcomes_carry_exact_certificates() {
    let mut rng = Rng::new(701);
    let (mut opt, mut unb, mut inf) = (0, 0, 0);
    for _ in 0..250 {
        let (c, p, sense) = random_lp(&mut rng);
        match lp_solve(&c, &p, sense) {
            LpOutcome::Optimal {
                value,
                point,
                tight,
                dual_ineq,
                dual_eq,
            } => {
                opt += 1;
                assert!(p.contains(&point), "optimal point must be feasible");
                assert_eq!(c.dot(&point), value);
                for (i, (a, b)) in p.ineq.iter().enumerate() {
                    assert_eq!(tight.contains(&i), &a.dot(&point) == b);
                }
                // strong duality: Σ y·rows = c, Σ y·rhs = value, signs by sense
                let mut combo = RVector::zeros(p.dim);
                let mut dval = Rational::zero();
                for (y, (a, b)) in dual_ineq.iter().zip(&p.ineq) {
                    match sense {
                        Sense::Max => assert!(!y.is_negative()),
                        Sense::Min => assert!(!y.is_positive()),
                    }
                    combo = combo.add(&a.scale(y));
                    dval += y * b;
                }
                for (y, (a, b)) in dual_eq.iter().zip(&p.eq) {
                    combo = combo.add(&a.scale(y));
                    dval += y * b;
                }
                assert_eq!(combo, c, "dual combination must reproduce the objective");
                assert_eq!(dval, value, "dual value must equal the primal value");
            }
            LpOutcome::Unbounded { ray } => {
                unb += 1;
                assert!(!ray.is_zero());
                for (a, _) in &p.ineq {
                    assert!(
                        !a.dot(&ray).is_positive(),
                        "ray must be a recession direction"
                    );
                }
                for (a, _) in &p.eq {
                    assert!(a.dot(&ray).is_zero());
                }
                let slope = c.dot(&ray);
                match sense {
                    Sense::Max => assert!(slope.is_positive()),
                    Sense::Min => assert!(slope.is_negative()),
                }
            }
            LpOutcome::Infeasible { farkas } => {
                inf += 1;
                // nonnegative combination of rows (signed on equalities)
                // deriving 0ᵀx ≤ -1
                let mut combo = RVector::zeros(p.dim);
                let mut rhs = Rational::zero();
                for (k, (a, b)) in p.ineq.iter().chain(p.eq.iter()).enumerate() {
                    let f = &farkas[k];
                    if k < p.ineq.len() {
                        assert!(!f.is_negative());
                    }
                    combo = combo.add(&a.scale(f));
                    rhs += f * b;
                }
                assert!(combo.is_zero(), "farkas combination must cancel");
                assert_eq!(rhs, rat(-1));
            }
        }
    }
    // the generator must exercise each outcome
    assert!(opt > 20 && unb > 20 && inf > 20, "{} {} {}", opt, unb, inf);
}

#[test]
fn redundant_equality_rows_are_dropped_with_certified_duals() {
    // x1 + x2 = 1, x1 - x2 = 0 and the dependent combination 2x1 = 1: the
    // third row leaves an artificial stuck at zero in phase 1 and gets
    // dropped; the duals must still certify optimality over the original
    // rows (dropped rows carry dual zero).
    let p = HPolyhedron::new(
        2,
        vec![
            (RVector::from_i64(&[1, 1]), rat(1)),
            (RVector::from_i64(&[1, -1]), rat(0)),
            (RVector::from_i64(&[2, 0]), rat(1)),
        ],
        vec![(RVector::from_i64(&[-1, 0]), rat(0))],
    );
    let c = RVector::from_i64(&[3, 1]);
    match lp_solve(&c, &p, Sense::Max) {
        LpOutcome::Optimal {
            value,
            point,
            dual_ineq,
            dual_eq,
            ..
        } => {
            assert_eq!(point, RVector(vec![ratio(1, 2), ratio(1, 2)]));
            assert_eq!(value, rat(2));
            let mut combo = RVector::zeros(2);
            let mut dval = Rational::zero();
            for (y, (a, b)) in dual_ineq
                .iter()
                .zip(&p.ineq)
                .chain(dual_eq.iter().zip(&p.eq))
            {
                combo = combo.add(&a.scale(y));
                dval += y * b;
            }
            assert_eq!(combo, c);
            assert_eq!(dval, value);
        }
        other => panic!("expected optimum, got {:?}", other),
    }
}

#[test]
fn determinism_of_the_solver() {
    let mut rng = Rng::new(702);
    for _ in 0..40 {
        let (c, p, sense) = random_lp(&mut rng);
        let a = lp_solve(&c, &p, sense);
        let b = lp_solve(&c, &p, sense);
        assert_eq!(a, b);
    }
}

#[test]
fn larger_degenerate_instances_terminate() {
    // wider/taller systems with clustered right-hand sides provoke
    // degenerate pivoting; Bland's rule must still terminate with certified
    // outcomes
    let mut rng = Rng::new(703);
    for _ in 0..60 {
        let dim = rng.int_in(4, 5) as usize;
        let rows = rng.int_in(6, 9) as usize;
        let mut ineq = Vec::new();
        for _ in 0..rows {
            let a = rng.vector(dim, -2, 2);
            ineq.push((a, rat(rng.int_in(0, 1))));
        }
        let p = HPolyhedron::new(dim, vec![], ineq);
        let c = rng.vector(dim, -2, 2);
        match lp_solve(&c, &p, Sense::Max) {
            LpOutcome::Optimal { value, point, .. } => {
                assert!(p.contains(&point));
                assert_eq!(c.dot(&point), value);
            }
            LpOutcome::Unbounded { ray } => {
                assert!(c.dot(&ray).is_positive());
                for (a, _) in &p.ineq {
                    assert!(!a.dot(&ray).is_positive());
                }
            }
            LpOutcome::Infeasible { .. } => {
                // rhs ≥ 0 keeps the origin feasible
                panic!("origin-feasible system reported infeasible");
            }
        }
    }
}
