//! Smith normal form over the integers with both transforms tracked.
//!
//! For an `m x n` matrix `A` the reduction produces unimodular `U` (`m x m`)
//! and `V` (`n x n`) with `U * A * V = D`, where `D` is diagonal,
//! non-negative and each diagonal entry divides the next.

pub(crate) type Mat = Vec<Vec<i128>>;

#[derive(Debug, Clone)]
pub(crate) struct Snf {
    /// Nonzero invariant factors, in order; `diag.len()` is the rank.
    pub diag: Vec<i128>,
    pub left: Mat,
    pub right: Mat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

fn identity(k: usize) -> Mat {
    (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect()
}

struct Reducer {
    a: Mat,
    u: Mat,
    v: Mat,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.iter_mut() {
                row.swap(i, j);
            }
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            self.a[dst][c] += k * self.a[src][c];
        }
        for c in 0..self.rows {
            self.u[dst][c] += k * self.u[src][c];
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for r in 0..self.rows {
            self.a[r][dst] += k * self.a[r][src];
        }
        for r in 0..self.cols {
            self.v[r][dst] += k * self.v[r][src];
        }
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce_at(&mut self, t: usize) {
        loop {
            let mut moved = false;
            for i in t + 1..self.rows {
                let q = self.a[i][t] / self.a[t][t];
                self.add_row(i, t, -q);
                if self.a[i][t] != 0 {
                    self.swap_rows(t, i);
                    moved = true;
                }
            }
            for j in t + 1..self.cols {
                let q = self.a[t][j] / self.a[t][t];
                self.add_col(j, t, -q);
                if self.a[t][j] != 0 {
                    self.swap_cols(t, j);
                    moved = true;
                }
            }
            if moved {
                continue;
            }
            // pivot must divide the whole trailing block
            let p = self.a[t][t];
            let offender = (t + 1..self.rows)
                .find(|&i| (t + 1..self.cols).any(|j| self.a[i][j] % p != 0));
            match offender {
                Some(i) => self.add_row(t, i, 1),
                None => break,
            }
        }
        if self.a[t][t] < 0 {
            for c in 0..self.cols {
                self.a[t][c] = -self.a[t][c];
            }
            for c in 0..self.rows {
                self.u[t][c] = -self.u[t][c];
            }
        }
    }
}

pub(crate) fn smith(a: &Mat, rows: usize, cols: usize) -> Snf {
    debug_assert!(a.len() == rows && a.iter().all(|r| r.len() == cols));
    let mut red = Reducer {
        a: a.clone(),
        u: identity(rows),
        v: identity(cols),
        rows,
        cols,
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = red.min_nonzero(t) else {
            break;
        };
        red.swap_rows(t, pi);
        red.swap_cols(t, pj);
        red.reduce_at(t);
        t += 1;
    }
    let diag = (0..t).map(|i| red.a[i][i]).collect();
    Snf {
        diag,
        left: red.u,
        right: red.v,
    }
}

#[cfg(test)]
pub(crate) fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: Mat) -> Snf {
        let rows = a.len();
        let cols = a[0].len();
        let s = smith(&a, rows, cols);
        let d = mat_mul(&mat_mul(&s.left, &a), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let expected = if i == j && i < s.rank() { s.diag[i] } else { 0 };
                assert_eq!(x, expected, "UAV mismatch at ({i},{j}) for {a:?}");
            }
        }
        for w in s.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn diagonalises_small_matrices() {
        assert_eq!(check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).diag, vec![2, 6, 12]);
        assert_eq!(check(vec![vec![1, 1], vec![1, -1]]).diag, vec![1, 2]);
        assert_eq!(check(vec![vec![2, 0], vec![0, 3]]).diag, vec![1, 6]);
        assert_eq!(check(vec![vec![0, 0], vec![0, 0]]).rank(), 0);
        assert_eq!(check(vec![vec![4, 6]]).diag, vec![2]);
    }
}
