//! Shared inputs for the criterion benches.

use csn_core::{ContactSurgeryDiagram, IntMatrix, LegendrianComponent, Rational};

/// Tridiagonal linking matrix of a length-`n` chain with framings `-2`
/// and a `-3` at both ends.
pub fn chain_matrix(n: usize) -> IntMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = if i == 0 || i + 1 == n { -3 } else { -2 };
        if i > 0 {
            row[i - 1] = 1;
        }
        if i + 1 < n {
            row[i + 1] = 1;
        }
    }
    IntMatrix::from_rows(&rows)
}

/// Dense symmetric matrix with entries that force long gcd chains.
pub fn dense_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ((i * j + 3 * (i + j)) % 17) as i64 - 8)
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

/// One unknot with a long negative continued fraction.
pub fn lens_diagram() -> ContactSurgeryDiagram {
    ContactSurgeryDiagram::unlinked(vec![LegendrianComponent::unknot(
        "K",
        -3,
        0,
        Rational::new(-89, 55),
    )])
}

/// Two left trefoils with reciprocal coefficients, linked.
pub fn trefoil_pair() -> ContactSurgeryDiagram {
    let k = |name| LegendrianComponent::new(name, "left-trefoil", -6, 1, Rational::new(-1, 3));
    let mut d = ContactSurgeryDiagram::unlinked(vec![k("A"), k("B")]);
    d.set_link(0, 1, -6);
    d
}
