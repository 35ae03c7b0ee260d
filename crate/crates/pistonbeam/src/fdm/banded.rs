//! Banded LU factorization with partial pivoting, LAPACK-style band storage.
//!
//! The implicit stages of the integrator solve `(c1 I - c2 A) x = b` where
//! `A` is the pentadiagonal spatial operator; partial pivoting widens the
//! upper band by `kl`, so storage reserves `2 kl + ku + 1` diagonals.

/// Band matrix with `kl` sub- and `ku` super-diagonals, plus `kl` extra
/// super-diagonals of factorization workspace.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    ldab: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ldab,
            data: vec![0.0; ldab * n],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.ku + self.kl >= j && j + self.kl >= i);
        j * self.ldab + (i + self.ku + self.kl - j)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// True when (i, j) lies inside the logical band (ignoring workspace).
    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        (j + self.kl >= i) && (i + self.ku >= j)
    }

    /// `y = self * x` over the logical band.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += self.get(i, j) * x[j];
            }
            y[i] = acc;
        }
    }
}

/// LU factors of a band matrix, with pivot record.
#[derive(Debug, Clone)]
pub struct BandLu {
    mat: BandMatrix,
    ipiv: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix {
    pub column: usize,
}

impl BandLu {
    /// Factor in place (consumes the matrix). Fails on an exactly zero
    /// pivot column.
    pub fn factor(mut a: BandMatrix) -> Result<Self, SingularMatrix> {
        let n = a.n;
        let (kl, ku) = (a.kl, a.ku);
        let mut ipiv = vec![0usize; n];
        for k in 0..n {
            let imax = (k + kl).min(n - 1);
            let mut p = k;
            let mut pmax = a.get(k, k).abs();
            for i in (k + 1)..=imax {
                let v = a.get(i, k).abs();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            if pmax == 0.0 {
                return Err(SingularMatrix { column: k });
            }
            ipiv[k] = p;
            let jmax = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let akj = if a.in_band_work(k, j) { a.get(k, j) } else { 0.0 };
                    let apj = if a.in_band_work(p, j) { a.get(p, j) } else { 0.0 };
                    a.set(k, j, apj);
                    a.set(p, j, akj);
                }
            }
            let pivot = a.get(k, k);
            for i in (k + 1)..=imax {
                let m = a.get(i, k) / pivot;
                a.set(i, k, m);
                if m != 0.0 {
                    for j in (k + 1)..=jmax {
                        let akj = a.get(k, j);
                        if akj != 0.0 {
                            let v = a.get(i, j) - m * akj;
                            a.set(i, j, v);
                        }
                    }
                }
            }
        }
        Ok(Self { mat: a, ipiv })
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.mat.n;
        let (kl, ku) = (self.mat.kl, self.mat.ku);
        for k in 0..n {
            let p = self.ipiv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                let imax = (k + kl).min(n - 1);
                for i in (k + 1)..=imax {
                    b[i] -= self.mat.get(i, k) * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + ku + kl).min(n - 1);
            let mut acc = b[k];
            for j in (k + 1)..=jmax {
                acc -= self.mat.get(k, j) * b[j];
            }
            b[k] = acc / self.mat.get(k, k);
        }
    }
}

impl BandMatrix {
    /// Band test including the factorization workspace diagonals.
    #[inline]
    fn in_band_work(&self, i: usize, j: usize) -> bool {
        (j + self.kl >= i) && (i + self.ku + self.kl >= j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut x = b.to_vec();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if m[i][k].abs() > m[p][k].abs() {
                    p = i;
                }
            }
            m.swap(k, p);
            x.swap(k, p);
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..n {
                    m[i][j] -= f * m[k][j];
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                x[k] -= m[k][j] * x[j];
            }
            x[k] /= m[k][k];
        }
        x
    }

    proptest! {
        #[test]
        fn band_lu_matches_dense_gauss(seed in 0u64..400) {
            // deterministic pseudo-random pentadiagonal systems
            let n = 8 + (seed % 29) as usize;
            let (kl, ku) = (2usize, 2usize);
            let mut next = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut rnd = || {
                next = next.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((next >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            };
            let mut band = BandMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if band.in_band(i, j) {
                        let v = rnd() + if i == j { 4.0 } else { 0.0 };
                        band.set(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rnd()).collect();
            let expect = dense_solve(&dense, &b);
            let lu = BandLu::factor(band).unwrap();
            let mut got = b.clone();
            lu.solve_in_place(&mut got);
            for i in 0..n {
                prop_assert!((got[i] - expect[i]).abs() < 1e-9 * (1.0 + expect[i].abs()));
            }
        }
    }

    #[test]
    fn singular_matrix_detected() {
        let band = BandMatrix::zeros(4, 2, 2);
        assert!(BandLu::factor(band).is_err());
    }

    #[test]
    fn matvec_roundtrip() {
        let mut band = BandMatrix::zeros(5, 2, 2);
        for i in 0..5 {
            for j in 0..5 {
                if band.in_band(i, j) {
                    band.set(i, j, (i * 5 + j) as f64 + 1.0);
                }
            }
        }
        let x = [1.0, -1.0, 2.0, 0.5, -0.25];
        let mut y = [0.0; 5];
        band.matvec(&x, &mut y);
        let lu = BandLu::factor(band).unwrap();
        let mut back = y;
        lu.solve_in_place(&mut back);
        for i in 0..5 {
            assert!((back[i] - x[i]).abs() < 1e-10);
        }
    }
}
