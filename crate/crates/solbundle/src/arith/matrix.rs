//! 2×2 integer matrices, Smith normal form, and small gcd helpers.

use super::int::Int;

/// Row-major 2×2 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2 { a, b, c, d }
    }

    pub fn identity() -> IntMatrix2 {
        IntMatrix2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Result of a Smith normal form computation: `u * m * v = diag(d1, d2)`
/// with unimodular transforms, `d1, d2 >= 0` and `d1 | d2`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d1: Int,
    pub d2: Int,
    pub u: [[Int; 2]; 2],
    pub v: [[Int; 2]; 2],
}

fn mat2_det(x: &[[Int; 2]; 2]) -> Int {
    x[0][0].mul(&x[1][1]).sub(&x[0][1].mul(&x[1][0]))
}

/// Smith normal form of a (possibly singular) 2×2 integer matrix, by
/// unimodular row/column reduction.
#[allow(clippy::needless_range_loop)] // fixed 2×2 index arithmetic
pub fn smith_normal_form(m: &IntMatrix2) -> Snf {
    let mut w = [
        [Int::from(m.a), Int::from(m.b)],
        [Int::from(m.c), Int::from(m.d)],
    ];
    let mut u = [[Int::ONE, Int::ZERO], [Int::ZERO, Int::ONE]];
    let mut v = [[Int::ONE, Int::ZERO], [Int::ZERO, Int::ONE]];

    let swap_rows = |w: &mut [[Int; 2]; 2], u: &mut [[Int; 2]; 2]| {
        w.swap(0, 1);
        u.swap(0, 1);
    };
    let swap_cols = |w: &mut [[Int; 2]; 2], v: &mut [[Int; 2]; 2]| {
        for r in 0..2 {
            w[r].swap(0, 1);
        }
        for r in 0..2 {
            v[r].swap(0, 1);
        }
    };
    // row0 -= q * row1 style operations, updating the transform.
    let row_op = |w: &mut [[Int; 2]; 2], u: &mut [[Int; 2]; 2], dst: usize, src: usize, q: &Int| {
        for j in 0..2 {
            w[dst][j] = w[dst][j].sub(&q.mul(&w[src][j]));
        }
        for j in 0..2 {
            u[dst][j] = u[dst][j].sub(&q.mul(&u[src][j]));
        }
    };
    let col_op = |w: &mut [[Int; 2]; 2], v: &mut [[Int; 2]; 2], dst: usize, src: usize, q: &Int| {
        for r in 0..2 {
            w[r][dst] = w[r][dst].sub(&q.mul(&w[r][src]));
        }
        for r in 0..2 {
            v[r][dst] = v[r][dst].sub(&q.mul(&v[r][src]));
        }
    };

    loop {
        // Move a minimal nonzero entry (by absolute value) to the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                if !w[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| w[i][j].abs() < w[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break; // zero matrix
        };
        if bi == 1 {
            swap_rows(&mut w, &mut u);
        }
        if bj == 1 {
            swap_cols(&mut w, &mut v);
        }

        if !w[1][0].is_zero() {
            let q = w[1][0].div_floor(&w[0][0]);
            row_op(&mut w, &mut u, 1, 0, &q);
            if !w[1][0].is_zero() {
                continue;
            }
        }
        if !w[0][1].is_zero() {
            let q = w[0][1].div_floor(&w[0][0]);
            col_op(&mut w, &mut v, 1, 0, &q);
            if !w[0][1].is_zero() {
                continue;
            }
        }
        // Pivot cleared; enforce d1 | d2.
        if !w[1][1].is_zero() {
            let r = w[1][1].rem_euclid(&w[0][0].abs());
            if !r.is_zero() {
                // Fold row 1 into row 0 and restart the reduction.
                let minus_one = Int::from(-1i64);
                row_op(&mut w, &mut u, 0, 1, &minus_one);
                continue;
            }
        }
        break;
    }

    // Normalize signs so the diagonal is non-negative.
    for i in 0..2 {
        if w[i][i].is_negative() {
            for j in 0..2 {
                w[i][j] = w[i][j].neg();
                u[i][j] = u[i][j].neg();
            }
        }
    }

    debug_assert_eq!(mat2_det(&u).abs(), Int::ONE);
    debug_assert_eq!(mat2_det(&v).abs(), Int::ONE);
    Snf { d1: w[0][0].clone(), d2: w[1][1].clone(), u, v }
}

/// gcd of the absolute values of four integers; 0 only when all are 0.
pub fn gcd4(w: i64, x: i64, y: i64, z: i64) -> u64 {
    fn g(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    g(g(w.unsigned_abs(), x.unsigned_abs()), g(y.unsigned_abs(), z.unsigned_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat2_mul(x: &[[Int; 2]; 2], y: &[[Int; 2]; 2]) -> [[Int; 2]; 2] {
        let mut out = [[Int::ZERO, Int::ZERO], [Int::ZERO, Int::ZERO]];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
            }
        }
        out
    }

    fn check_snf(m: &IntMatrix2) -> Snf {
        let snf = smith_normal_form(m);
        let w = [
            [Int::from(m.a), Int::from(m.b)],
            [Int::from(m.c), Int::from(m.d)],
        ];
        let umv = mat2_mul(&mat2_mul(&snf.u, &w), &snf.v);
        assert_eq!(umv[0][0], snf.d1, "diag(0,0) for {m:?}");
        assert_eq!(umv[1][1], snf.d2, "diag(1,1) for {m:?}");
        assert!(umv[0][1].is_zero() && umv[1][0].is_zero(), "off-diagonal for {m:?}");
        assert_eq!(mat2_det(&snf.u).abs(), Int::ONE, "det U for {m:?}");
        assert_eq!(mat2_det(&snf.v).abs(), Int::ONE, "det V for {m:?}");
        assert!(!snf.d1.is_negative() && !snf.d2.is_negative(), "signs for {m:?}");
        if !snf.d1.is_zero() {
            assert!(snf.d2.rem_euclid(&snf.d1).is_zero(), "divisibility for {m:?}");
        } else {
            assert!(snf.d2.is_zero(), "d1=0 implies zero matrix for {m:?}");
        }
        snf
    }

    #[test]
    fn identity_matrix() {
        let snf = check_snf(&IntMatrix2::identity());
        assert_eq!((snf.d1, snf.d2), (Int::ONE, Int::ONE));
    }

    #[test]
    fn known_diagonals() {
        // Independent oracle for 2×2: d1 = gcd of entries, d1*d2 = |det|.
        let snf = check_snf(&IntMatrix2::new(3, 1, 1, 2));
        assert_eq!((snf.d1, snf.d2), (Int::from(1), Int::from(5)));
        let snf = check_snf(&IntMatrix2::new(6, 2, 2, 2));
        assert_eq!((snf.d1, snf.d2), (Int::from(2), Int::from(4)));
    }

    #[test]
    fn zero_and_singular() {
        let snf = check_snf(&IntMatrix2::new(0, 0, 0, 0));
        assert_eq!((snf.d1, snf.d2), (Int::ZERO, Int::ZERO));
        let snf = check_snf(&IntMatrix2::new(2, 4, 1, 2));
        assert_eq!((snf.d1, snf.d2), (Int::from(1), Int::ZERO));
    }

    #[test]
    fn random_matrices_against_gcd_det_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x534e46);
        for _ in 0..1000 {
            let m = IntMatrix2::new(
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
                rng.gen_range(-50..=50),
            );
            let snf = check_snf(&m);
            let g = gcd4(m.a, m.b, m.c, m.d);
            assert_eq!(snf.d1, Int::from(g as i64), "gcd oracle for {m:?}");
            if g != 0 {
                let det_abs = m.det().unsigned_abs();
                assert_eq!(
                    snf.d2,
                    Int::from((det_abs / g as u128) as i128),
                    "det oracle for {m:?}"
                );
            }
        }
    }

    #[test]
    fn gcd4_examples() {
        assert_eq!(gcd4(3, 1, 1, 2), 1);
        assert_eq!(gcd4(6, 2, 2, 2), 2);
        assert_eq!(gcd4(-6, -2, 4, 2), 2);
        assert_eq!(gcd4(0, 0, 0, 0), 0);
    }
}
