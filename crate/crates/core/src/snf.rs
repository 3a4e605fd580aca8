//! Smith normal form over `i128` with transformation matrices.

pub type IMat = Vec<Vec<i128>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// `d = u · b · v`, diagonal, `d[i] | d[i+1]`, non-negative.
    pub d: IMat,
    pub u: IMat,
    pub v: IMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| **x != 0).count()
    }
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn matmul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn from_i64(b: &[Vec<i64>]) -> IMat {
    b.iter()
        .map(|r| r.iter().map(|x| *x as i128).collect())
        .collect()
}

fn row_axpy(m: &mut IMat, dst: usize, src: usize, k: i128) {
    if k == 0 {
        return;
    }
    let (s, d) = if src < dst {
        let (a, b) = m.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = m.split_at_mut(src);
        (&b[0], &mut a[dst])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x += k * *y;
    }
}

fn col_axpy(m: &mut IMat, dst: usize, src: usize, k: i128) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

fn col_swap(m: &mut IMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of an `m×n` integer matrix.
pub fn smith(b: &IMat) -> Snf {
    let m = b.len();
    let n = b.first().map_or(0, |r| r.len());
    let mut d = b.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0
                    && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut v, t, pj);
        let mut done = true;
        for i in t + 1..m {
            let q = d[i][t] / d[t][t];
            row_axpy(&mut d, i, t, -q);
            row_axpy(&mut u, i, t, -q);
            if d[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..n {
            let q = d[t][j] / d[t][t];
            col_axpy(&mut d, j, t, -q);
            col_axpy(&mut v, j, t, -q);
            if d[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility: fold an offending row into row t and retry
        let p = d[t][t];
        let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[i][j] % p != 0));
        if let Some(i) = bad {
            row_axpy(&mut d, t, i, 1);
            row_axpy(&mut u, t, i, 1);
            continue;
        }
        if p < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    Snf { d, u, v }
}

/// Determinant via the Smith form; `|det| = Π d_i` and the sign comes from
/// the unimodular factors.
pub fn det_abs(b: &IMat) -> i128 {
    if b.is_empty() {
        return 1;
    }
    smith(b).diagonal().iter().product::<i128>().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(b: &IMat) -> Snf {
        let s = smith(b);
        assert_eq!(matmul(&matmul(&s.u, b), &s.v), s.d);
        let diag = s.diagonal();
        for (i, row) in s.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(*x, 0);
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "{diag:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
        s
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(&vec![vec![4]]).diagonal(), vec![4]);
        assert_eq!(check(&vec![vec![-3]]).diagonal(), vec![3]);
        assert_eq!(check(&vec![vec![0, 1], vec![1, 0]]).diagonal(), vec![1, 1]);
        assert_eq!(check(&vec![vec![2, 1], vec![1, 2]]).diagonal(), vec![1, 3]);
        assert_eq!(check(&vec![vec![2, 0], vec![0, 3]]).diagonal(), vec![1, 6]);
        assert_eq!(check(&vec![vec![0]]).diagonal(), vec![0]);
        assert_eq!(check(&vec![vec![2, 4], vec![4, 8]]).diagonal(), vec![2, 0]);
    }

    #[test]
    fn determinant() {
        assert_eq!(det_abs(&vec![vec![2, 1], vec![1, 2]]), 3);
        assert_eq!(det_abs(&vec![vec![8]]), 8);
        assert_eq!(det_abs(&vec![]), 1);
    }

    proptest! {
        #[test]
        fn random_matrices(n in 1usize..5, m in 1usize..5, seed in proptest::collection::vec(-6i128..7, 16)) {
            let b: IMat = (0..n).map(|i| (0..m).map(|j| seed[(i * 4 + j) % 16]).collect()).collect();
            check(&b);
        }
    }
}
