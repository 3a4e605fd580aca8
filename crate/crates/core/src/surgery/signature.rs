use num_rational::Ratio;

type Q = Ratio<i128>;

/// `(b₊, b₀, b₋)` of a symmetric integer matrix by congruence
/// diagonalization over the rationals.
pub fn signature(b: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<Q>> = b
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(*x as i128)).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let zero = Q::from_integer(0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| a[i][i] != zero) {
            let p = a[i][i];
            if p > zero {
                pos += 1;
            } else {
                neg += 1;
            }
            let row = a[i].clone();
            a = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    (0..n)
                        .filter(|&k| k != i)
                        .map(|k| a[j][k] - row[j] * row[k] / p)
                        .collect()
                })
                .collect();
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] != zero)
        {
            // hyperbolic block [[0, x], [x, 0]]: one positive, one negative
            pos += 1;
            neg += 1;
            let x = a[i][j];
            let (ri, rj) = (a[i].clone(), a[j].clone());
            a = (0..n)
                .filter(|&u| u != i && u != j)
                .map(|u| {
                    (0..n)
                        .filter(|&v| v != i && v != j)
                        .map(|v| a[u][v] - (ri[u] * rj[v] + rj[u] * ri[v]) / x)
                        .collect()
                })
                .collect();
        } else {
            return (pos, n, neg);
        }
    }
    (pos, 0, neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_matrices() {
        assert_eq!(signature(&[vec![4]]), (1, 0, 0));
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), (1, 0, 1));
        assert_eq!(signature(&[vec![-1]]), (0, 0, 1));
        assert_eq!(signature(&[vec![0]]), (0, 1, 0));
        assert_eq!(signature(&[]), (0, 0, 0));
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), (2, 0, 0));
        assert_eq!(signature(&[vec![1, 2], vec![2, 1]]), (1, 0, 1));
        assert_eq!(signature(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]), (1, 1, 1));
    }

    fn eig_signature(b: &[Vec<i64>]) -> (usize, usize, usize) {
        let n = b.len();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| b[i][j] as f64);
        let e = m.symmetric_eigenvalues();
        let c = |f: &dyn Fn(f64) -> bool| e.iter().filter(|x| f(**x)).count();
        (c(&|x| x > 1e-9), c(&|x| x.abs() <= 1e-9), c(&|x| x < -1e-9))
    }

    proptest! {
        #[test]
        fn matches_eigenvalue_count(n in 1usize..6, vals in proptest::collection::vec(-3i64..4, 36)) {
            let mut b = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    b[i][j] = vals[i * 6 + j];
                    b[j][i] = vals[i * 6 + j];
                }
            }
            prop_assert_eq!(signature(&b), eig_signature(&b));
        }
    }
}
