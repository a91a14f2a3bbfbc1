//! Exact arithmetic in cyclotomic fields Q(ζ_N), reduced modulo Φ_N.
//!
//! Elements are polynomials in ζ_N of degree < φ(N) with rational
//! coefficients. Reduction modulo the cyclotomic polynomial Φ_N (rather than
//! x^N − 1) makes mathematical equality a component-wise comparison, which
//! the verification layer relies on.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use super::int::Int;
use super::rational::Rational;

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    assert!(n >= 1, "euler_phi(0)");
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

// --- dense polynomial helpers (ascending coefficients) ---

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    poly_trim(&mut out);
    out
}

/// Long division by a monic divisor; returns (quotient, remainder).
fn poly_divmod_monic(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    debug_assert!(b.last().is_some_and(Rational::is_one), "divisor must be monic");
    let db = b.len() - 1;
    let mut rem: Vec<Rational> = a.to_vec();
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let lead = rem[i].clone();
        if lead.is_zero() {
            continue;
        }
        quot[i - db] = lead.clone();
        for (j, bj) in b.iter().enumerate().take(db) {
            rem[i - db + j] = rem[i - db + j].sub(&lead.mul(bj));
        }
        rem[i] = Rational::zero();
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

/// The N-th cyclotomic polynomial Φ_N, monic of degree φ(N), as ascending
/// coefficients. Computed by dividing x^N − 1 by Φ_d over all proper
/// divisors d of N.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rational> {
    assert!(n >= 1, "cyclotomic_polynomial(0) is undefined");
    let mut memo: HashMap<u32, Vec<Rational>> = HashMap::new();
    for d in divisors(n) {
        let phi_d = cyclotomic_from_memo(d, &memo);
        memo.insert(d, phi_d);
    }
    memo.remove(&n).unwrap()
}

fn cyclotomic_from_memo(d: u32, memo: &HashMap<u32, Vec<Rational>>) -> Vec<Rational> {
    // x^d - 1
    let mut num = vec![Rational::zero(); d as usize + 1];
    num[0] = Rational::from_int(-1);
    num[d as usize] = Rational::one();
    let mut den = vec![Rational::one()];
    for e in divisors(d) {
        if e < d {
            den = poly_mul(&den, &memo[&e]);
        }
    }
    let (q, r) = poly_divmod_monic(&num, &den);
    assert!(r.iter().all(Rational::is_zero), "cyclotomic division must be exact");
    q
}

// --- per-order context: Φ_N plus a reduced-monomial table ---

struct CycloCtx {
    phi: usize,
    /// roots[e] = coefficients of x^e mod Φ_N, for e up to
    /// max(order, 2φ−1) − 1 so that schoolbook products reduce by lookup.
    roots: Vec<Vec<Rational>>,
}

impl CycloCtx {
    fn new(order: u32) -> CycloCtx {
        let full = cyclotomic_polynomial(order);
        let phi = full.len() - 1;
        let modulus_tail = full[..phi].to_vec();
        let table_len = (order as usize).max(2 * phi.max(1) - 1);
        let mut roots: Vec<Vec<Rational>> = Vec::with_capacity(table_len);
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        roots.push(cur.clone());
        for _ in 1..table_len {
            // multiply by x: shift up, then fold the overflowing lead back
            // with x^φ ≡ −(modulus tail).
            let lead = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::zero();
            if !lead.is_zero() {
                for i in 0..phi {
                    if !modulus_tail[i].is_zero() {
                        cur[i] = cur[i].sub(&lead.mul(&modulus_tail[i]));
                    }
                }
            }
            roots.push(cur.clone());
        }
        CycloCtx { phi, roots }
    }
}

fn ctx_cache() -> &'static RwLock<HashMap<u32, Arc<CycloCtx>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn ctx(order: u32) -> Arc<CycloCtx> {
    assert!(order >= 1, "cyclotomic order must be positive");
    if let Some(c) = ctx_cache().read().unwrap().get(&order) {
        return Arc::clone(c);
    }
    let fresh = Arc::new(CycloCtx::new(order));
    let mut guard = ctx_cache().write().unwrap();
    Arc::clone(guard.entry(order).or_insert(fresh))
}

/// Exact element of Q(ζ_N), stored reduced modulo Φ_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloNum {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(order: u32) -> CycloNum {
        let c = ctx(order);
        CycloNum { order, coeffs: vec![Rational::zero(); c.phi] }
    }

    pub fn one(order: u32) -> CycloNum {
        CycloNum::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> CycloNum {
        let mut x = CycloNum::zero(order);
        x.coeffs[0] = r;
        x
    }

    pub fn from_int(order: u32, v: i64) -> CycloNum {
        CycloNum::from_rational(order, Rational::from_int(v))
    }

    /// ζ_N^k, for any integer exponent (reduced mod N).
    pub fn root_of_unity(order: u32, k: i64) -> CycloNum {
        let c = ctx(order);
        let e = k.rem_euclid(order as i64) as usize;
        CycloNum { order, coeffs: c.roots[e].clone() }
    }

    /// Σ coeff·ζ^exp over the given terms, exponents taken mod N.
    pub fn root_combination(order: u32, terms: &[(i64, Rational)]) -> CycloNum {
        let c = ctx(order);
        let mut out = CycloNum::zero(order);
        for (k, coeff) in terms {
            if coeff.is_zero() {
                continue;
            }
            let e = k.rem_euclid(order as i64) as usize;
            for (o, r) in out.coeffs.iter_mut().zip(c.roots[e].iter()) {
                if !r.is_zero() {
                    *o = o.add(&coeff.mul(r));
                }
            }
        }
        out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn assert_same_order(&self, rhs: &CycloNum, op: &str) {
        assert_eq!(
            self.order, rhs.order,
            "cyclotomic order mismatch in {op}: {} vs {} (embed first)",
            self.order, rhs.order
        );
    }

    pub fn add(&self, rhs: &CycloNum) -> CycloNum {
        self.assert_same_order(rhs, "add");
        let coeffs = self
            .coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        CycloNum { order: self.order, coeffs }
    }

    pub fn sub(&self, rhs: &CycloNum) -> CycloNum {
        self.assert_same_order(rhs, "sub");
        let coeffs = self
            .coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        CycloNum { order: self.order, coeffs }
    }

    pub fn neg(&self) -> CycloNum {
        CycloNum { order: self.order, coeffs: self.coeffs.iter().map(Rational::neg).collect() }
    }

    pub fn scale(&self, r: &Rational) -> CycloNum {
        if r.is_zero() {
            return CycloNum::zero(self.order);
        }
        CycloNum { order: self.order, coeffs: self.coeffs.iter().map(|c| c.mul(r)).collect() }
    }

    pub fn mul(&self, rhs: &CycloNum) -> CycloNum {
        self.assert_same_order(rhs, "mul");
        let c = ctx(self.order);
        let phi = c.phi;
        let mut prod = vec![Rational::zero(); 2 * phi.max(1) - 1];
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in rhs.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&ai.mul(bj));
            }
        }
        let mut out = vec![Rational::zero(); phi];
        out.clone_from_slice(&prod[..phi]);
        for (e, coeff) in prod.iter().enumerate().skip(phi) {
            if coeff.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(c.roots[e].iter()) {
                if !r.is_zero() {
                    *o = o.add(&coeff.mul(r));
                }
            }
        }
        CycloNum { order: self.order, coeffs: out }
    }

    /// Galois conjugation ζ ↦ ζ^{-1} (complex conjugation on Q(ζ_N)).
    pub fn conjugate(&self) -> CycloNum {
        let order = self.order;
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (-(i as i64), c.clone()))
            .collect();
        CycloNum::root_combination(order, &terms)
    }

    pub fn pow(&self, e: u64) -> CycloNum {
        let mut base = self.clone();
        let mut acc = CycloNum::one(self.order);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Re-expresses the value in Q(ζ_M) for N | M, via ζ_N = ζ_M^{M/N}.
    pub fn embed(&self, new_order: u32) -> CycloNum {
        assert!(
            new_order.is_multiple_of(self.order),
            "embed: {} does not divide {}",
            self.order,
            new_order
        );
        if new_order == self.order {
            return self.clone();
        }
        let step = (new_order / self.order) as i64;
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 * step, c.clone()))
            .collect();
        CycloNum::root_combination(new_order, &terms)
    }

    /// Floating-point evaluation at ζ_N = exp(2πi/N). Display only; never
    /// used in verification logic.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / (self.order as f64);
            let v = c.to_f64();
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }
}

impl PartialOrd for CycloNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "z{}", self.order)?;
                } else {
                    write!(f, "z{}^{}", self.order, i)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// ζ_N^k with an [`Int`] exponent.
pub fn root_of_unity_int(order: u32, k: &Int) -> CycloNum {
    let e = k.rem_euclid(&Int::from(order as i64));
    CycloNum::root_of_unity(order, e.to_i64().expect("residue fits i64"))
}
