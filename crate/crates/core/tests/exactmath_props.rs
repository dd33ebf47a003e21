use num_bigint::BigInt;
use proptest::prelude::*;

use csn_core::exactmath::{
    bracket, negcf, rank, signature_generalized, snf, solve_rational, to_rational, IntMatrix,
    Rational,
};
use csn_core::selftest::oracles::sturm_inertia;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn matrix(n: usize, m: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(lo..=hi, n * m).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(m).map(<[i64]>::to_vec).collect();
        IntMatrix::from_rows(&rows)
    })
}

fn square(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n, -6, 6))
}

/// Product of elementary row operations `row_i += c row_j` and swaps.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        if c == 0 {
            let mut rows = u.to_rows();
            rows.swap(i, j);
            u = IntMatrix::from_rows(&rows);
        } else {
            for k in 0..n {
                let add = &u[(j, k)] * c;
                u[(i, k)] += add;
            }
        }
    }
    u
}

fn is_diagonal_chain(s: &IntMatrix) -> bool {
    let n = s.rows().min(s.cols());
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if i != j && s[(i, j)] != b(0) {
                return false;
            }
        }
    }
    (1..n).all(|i| {
        let (a, c) = (&s[(i - 1, i - 1)], &s[(i, i)]);
        if *a == b(0) {
            *c == b(0)
        } else {
            c % a == b(0)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn negcf_round_trips(p in 1i64..1_000_000, q in 1i64..10_000) {
        let r = Rational::new(-p, q);
        let cf = negcf(&r).unwrap();
        prop_assert!(cf.iter().all(|e| *e <= b(-2)));
        prop_assert_eq!(bracket(&cf), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_factorizes(a in (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| matrix(n, m, -9, 9))) {
        let r = snf(&a);
        prop_assert_eq!(r.u.mul(&a).mul(&r.v), r.s.clone());
        prop_assert!(is_diagonal_chain(&r.s));
        prop_assert!(r.diagonal().iter().all(|d| *d >= b(0)));
    }

    #[test]
    fn snf_ignores_unimodular_changes(
        a in square(5),
        left in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..12),
        right in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..12),
    ) {
        let n = a.rows();
        let moved = unimodular(n, &left).mul(&a).mul(&unimodular(n, &right).transpose());
        prop_assert_eq!(snf(&moved).diagonal(), snf(&a).diagonal());
    }

    #[test]
    fn signature_matches_sturm(
        sym in (1usize..=4).prop_flat_map(|n| (matrix(n, n, -5, 5), prop::collection::vec(1i64..=4, n))),
    ) {
        let (raw, denoms) = sym;
        let n = raw.rows();
        // Symmetric A, then Q = A·diag(q) so that Q_ij / q_j is symmetric.
        let mut q = IntMatrix::zeros(n, n);
        let mut a = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i <= j { raw[(i, j)].clone() } else { raw[(j, i)].clone() };
                q[(i, j)] = &v * denoms[j];
                a[(i, j)] = v;
            }
        }
        let d: Vec<BigInt> = denoms.iter().map(|&x| b(x)).collect();
        prop_assert_eq!(signature_generalized(&q, &d).unwrap(), sturm_inertia(&to_rational(&a)));
    }

    #[test]
    fn solve_is_exact_or_inconsistent(
        sys in (1usize..=4).prop_flat_map(|n| (matrix(n, n, -3, 3), prop::collection::vec(-4i64..=4, n))),
    ) {
        let (q, r) = sys;
        let r: Vec<BigInt> = r.into_iter().map(b).collect();
        let qr = to_rational(&q);
        match solve_rational(&q, &r) {
            Some(x) => {
                for (row, rhs) in qr.iter().zip(&r) {
                    let lhs = row.iter().zip(&x).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
                    prop_assert_eq!(lhs, Rational::int(rhs.clone()));
                }
            }
            None => {
                let aug: Vec<Vec<Rational>> = qr
                    .iter()
                    .zip(&r)
                    .map(|(row, v)| {
                        let mut row = row.clone();
                        row.push(Rational::int(v.clone()));
                        row
                    })
                    .collect();
                prop_assert!(rank(&aug) > rank(&qr));
            }
        }
    }
}
