use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use centext::matrix::{satisfies_congruences, smith_form, solve_congruences, SnfTracking};
use centext::qz::QZ;
use centext::IntMatrix;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
        .prop_map(|rows| IntMatrix::from_rows(&rows))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_invariants(m in matrix()) {
        let f = smith_form(&m, SnfTracking::ALL);
        let (u, v) = (f.u.clone().unwrap(), f.v.clone().unwrap());
        prop_assert_eq!(u.mul(&m).mul(&v), f.d.clone());
        prop_assert_eq!(u.mul(f.u_inv.as_ref().unwrap()), IntMatrix::identity(m.rows()));
        prop_assert_eq!(f.v_inv.as_ref().unwrap().mul(&v), IntMatrix::identity(m.cols()));
        let diag = f.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                prop_assert!(i == j || f.d[(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn solvable_congruences_are_solved(
        m in matrix(),
        seed in prop::collection::vec(0i64..50, 5),
        moduli in prop::collection::vec(prop::sample::select(vec![0i64, 2, 3, 4, 5, 6, 12]), 5),
    ) {
        let x0: Vec<BigInt> = seed.iter().take(m.cols()).map(|&v| BigInt::from(v)).collect();
        let targets: Vec<BigInt> = moduli.iter().take(m.rows()).map(|&v| BigInt::from(v)).collect();
        let b = m.mul_vec(&x0);
        let x = solve_congruences(&m, &targets, &b);
        prop_assert!(x.is_some());
        prop_assert!(satisfies_congruences(&m, &targets, &x.unwrap(), &b));
    }

    #[test]
    fn unsolvable_answers_are_checked(
        m in matrix(),
        rhs in prop::collection::vec(0i64..12, 5),
        moduli in prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6]), 5),
    ) {
        let targets: Vec<BigInt> = moduli.iter().take(m.rows()).map(|&v| BigInt::from(v)).collect();
        let b: Vec<BigInt> = rhs.iter().take(m.rows()).map(|&v| BigInt::from(v)).collect();
        if let Some(x) = solve_congruences(&m, &targets, &b) {
            prop_assert!(satisfies_congruences(&m, &targets, &x, &b));
        } else if m.cols() <= 2 {
            let l = targets.iter().fold(BigInt::one(), |acc, t| acc.lcm(t));
            let l: i64 = l.try_into().unwrap();
            let hit = (0..l.pow(m.cols() as u32)).any(|mut code| {
                let x: Vec<BigInt> = (0..m.cols()).map(|_| { let v = code % l; code /= l; BigInt::from(v) }).collect();
                satisfies_congruences(&m, &targets, &x, &b)
            });
            prop_assert!(!hit);
        }
    }

    #[test]
    fn canonical_roots_are_roots(num in -50i64..50, den in 1i64..30, n in 1u64..12) {
        let q = QZ::new(num, den).unwrap();
        prop_assert_eq!(q.canonical_root(n).scale(&BigInt::from(n)), q);
    }
}
