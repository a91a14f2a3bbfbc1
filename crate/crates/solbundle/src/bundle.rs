//! Monodromy validation and bundle-level integer invariants.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{smith_normal_form, IntMatrix2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("matrix [[{a},{b}],[{c},{d}]] has determinant {det}, expected 1")]
    Determinant { a: i64, b: i64, c: i64, d: i64, det: i128 },
    #[error("matrix has trace {trace}; SOL geometry requires |trace| > 2")]
    NotSol { trace: i128 },
    #[error("degenerate bundle: N = {n} leaves no non-Abelian characters")]
    DegenerateBundle { n: u64 },
}

/// A validated SOL monodromy: integral, determinant 1, `|trace| > 2`.
///
/// `|trace| > 2` rules out triangular matrices, so `c != 0` always holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monodromy {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Monodromy {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Monodromy, BundleError> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(BundleError::Determinant { a, b, c, d, det });
        }
        let trace = a as i128 + d as i128;
        if trace.abs() <= 2 {
            return Err(BundleError::NotSol { trace });
        }
        Ok(Monodromy { a, b, c, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> i128 {
        self.a as i128 + self.d as i128
    }

    /// N = |tr(A) + 2|, the order of the solution group.
    pub fn n(&self) -> u64 {
        (self.trace() + 2).unsigned_abs() as u64
    }

    /// Sign of tr(A) + 2 (never zero for a SOL matrix).
    pub fn sign(&self) -> i8 {
        if self.trace() + 2 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn invariants(&self) -> Result<BundleInvariants, BundleError> {
        let n = self.n();
        if n <= 1 {
            return Err(BundleError::DegenerateBundle { n });
        }
        let r = gcd4_wide(
            self.a as i128 + 1,
            self.c as i128,
            self.b as i128,
            self.d as i128 + 1,
        );
        let parity = Parity::of(self);
        let h1_z2_dim = h1_z2_dimension(self);
        Ok(BundleInvariants {
            n,
            sign: self.sign(),
            r,
            parity,
            group_shape: (r, n / r),
            h1_z2_dim,
        })
    }

    /// Conjugate by a unimodular matrix: `B A B^{-1}`.
    pub fn conjugate_by(&self, b: &IntMatrix2) -> Result<Monodromy, BundleError> {
        let det = b.det();
        assert!(det == 1 || det == -1, "conjugating matrix must be unimodular");
        // B^{-1} = det^{-1} [[d, -b], [-c, a]]; det = ±1 so det^{-1} = det.
        let binv = [
            [det * b.d as i128, -det * b.b as i128],
            [-det * b.c as i128, det * b.a as i128],
        ];
        let m = [
            [self.a as i128, self.b as i128],
            [self.c as i128, self.d as i128],
        ];
        let bm = [
            [
                b.a as i128 * m[0][0] + b.b as i128 * m[1][0],
                b.a as i128 * m[0][1] + b.b as i128 * m[1][1],
            ],
            [
                b.c as i128 * m[0][0] + b.d as i128 * m[1][0],
                b.c as i128 * m[0][1] + b.d as i128 * m[1][1],
            ],
        ];
        let out = [
            [
                bm[0][0] * binv[0][0] + bm[0][1] * binv[1][0],
                bm[0][0] * binv[0][1] + bm[0][1] * binv[1][1],
            ],
            [
                bm[1][0] * binv[0][0] + bm[1][1] * binv[1][0],
                bm[1][0] * binv[0][1] + bm[1][1] * binv[1][1],
            ],
        ];
        let to64 = |v: i128| i64::try_from(v).expect("conjugated entry exceeds i64");
        Monodromy::new(to64(out[0][0]), to64(out[0][1]), to64(out[1][0]), to64(out[1][1]))
    }
}

impl fmt::Display for Monodromy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

fn gcd4_wide(w: i128, x: i128, y: i128, z: i128) -> u64 {
    fn g(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    let r = g(
        g(w.unsigned_abs(), x.unsigned_abs()),
        g(y.unsigned_abs(), z.unsigned_abs()),
    );
    u64::try_from(r).expect("gcd of i64-derived values fits u64")
}

/// Parity quadruple of the entries, recorded in the order (a, d; b, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parity {
    pub a_odd: bool,
    pub d_odd: bool,
    pub b_odd: bool,
    pub c_odd: bool,
}

impl Parity {
    pub fn of(m: &Monodromy) -> Parity {
        Parity {
            a_odd: m.a.rem_euclid(2) == 1,
            d_odd: m.d.rem_euclid(2) == 1,
            b_odd: m.b.rem_euclid(2) == 1,
            c_odd: m.c.rem_euclid(2) == 1,
        }
    }

    /// Compact token, e.g. `ooeo` for (o,o;e,o) — safe in CSV columns.
    pub fn compact(&self) -> String {
        let ch = |odd: bool| if odd { 'o' } else { 'e' };
        format!("{}{}{}{}", ch(self.a_odd), ch(self.d_odd), ch(self.b_odd), ch(self.c_odd))
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = |odd: bool| if odd { 'o' } else { 'e' };
        write!(
            f,
            "({},{};{},{})",
            ch(self.a_odd),
            ch(self.d_odd),
            ch(self.b_odd),
            ch(self.c_odd)
        )
    }
}

/// Bundle-level invariants derived from the monodromy alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleInvariants {
    pub n: u64,
    pub sign: i8,
    pub r: u64,
    pub parity: Parity,
    pub group_shape: (u64, u64),
    pub h1_z2_dim: u32,
}

/// dim H¹(M; ℤ₂) via the mapping-torus formula
/// H₁(M; ℤ) = coker(A − I) ⊕ ℤ, so the ℤ₂-dimension is
/// dim coker((A − I) mod 2) + 1. Supplementary to the character data; the
/// circle factor contributes 1, so this is never zero.
pub fn h1_z2_dimension(m: &Monodromy) -> u32 {
    let e = [
        (m.a as i128 - 1).rem_euclid(2),
        (m.b as i128).rem_euclid(2),
        (m.c as i128).rem_euclid(2),
        (m.d as i128 - 1).rem_euclid(2),
    ];
    let rank = if e == [0, 0, 0, 0] {
        0
    } else if (e[0] * e[3] - e[1] * e[2]).rem_euclid(2) == 1 {
        2
    } else {
        1
    };
    (2 - rank) + 1
}

/// Parity classes (ε_x, ε_y) of reducible characters permitted for a given
/// entry-parity quadruple. (0,0) is always allowed; the nonzero classes are
/// restricted by which sign choices solve the holonomy equations.
pub fn eps_allowed(parity: &Parity, eps: (u8, u8)) -> bool {
    let p = (parity.a_odd, parity.d_odd, parity.b_odd, parity.c_odd);
    match eps {
        (0, 0) => true,
        // (o,o;e,e) admits every nonzero class; the others admit one each.
        (1, 1) => p == (false, false, true, true) || p == (true, true, false, false),
        (0, 1) => p == (true, true, true, false) || p == (true, true, false, false),
        (1, 0) => p == (true, true, false, true) || p == (true, true, false, false),
        _ => false,
    }
}

/// Shape of the solution group read off the Smith normal form of
/// g = (A + I)^T, cross-checking gcd4 against the normal form directly.
pub fn group_shape_from_snf(m: &Monodromy) -> (u64, u64) {
    let g = IntMatrix2::new(
        m.a.checked_add(1).expect("a+1 overflows"),
        m.c,
        m.b,
        m.d.checked_add(1).expect("d+1 overflows"),
    );
    let snf = smith_normal_form(&g);
    let d1 = snf.d1.to_i64().expect("SNF d1 fits i64") as u64;
    let d2 = snf.d2.to_i64().expect("SNF d2 fits i64") as u64;
    (d1, d2)
}
