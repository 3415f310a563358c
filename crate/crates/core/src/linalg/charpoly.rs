use super::{Matrix, Scalar};

/// Characteristic polynomial `det(T·I - A)` by Berkowitz's division-free
/// recurrence. Coefficients are returned in ascending order; the last is 1.
pub fn char_poly<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    assert!(a.is_square() && a.rows() > 0, "characteristic polynomial of an empty or non-square matrix");
    let n = a.rows();
    let one = a.get(0, 0).one_like();
    // descending coefficients for the leading r x r block
    let mut vect = vec![one.clone(), a.get(0, 0).neg()];
    for r in 1..n {
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(one.clone());
        toeplitz.push(a.get(r, r).neg());
        // R * A_r^k * C for k = 0..r-1
        let mut v: Vec<T> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for k in 0..r {
            let mut q = a.get(r, 0).mul(&v[0]);
            for j in 1..r {
                q = q.add(&a.get(r, j).mul(&v[j]));
            }
            toeplitz.push(q.neg());
            if k + 1 < r {
                v = (0..r)
                    .map(|i| {
                        let mut acc = a.get(i, 0).mul(&v[0]);
                        for j in 1..r {
                            acc = acc.add(&a.get(i, j).mul(&v[j]));
                        }
                        acc
                    })
                    .collect();
            }
        }
        let next: Vec<T> = (0..r + 2)
            .map(|i| {
                let mut acc: Option<T> = None;
                for j in 0..=i.min(r) {
                    let term = toeplitz[i - j].mul(&vect[j]);
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.add(&term),
                    });
                }
                acc.expect("at least one term")
            })
            .collect();
        vect = next;
    }
    vect.reverse();
    vect
}
