//! Non-Abelian SL(2,ℂ) characters of a SOL torus bundle: enumeration,
//! classification, quadratic form, Chern–Simons invariants, torsions,
//! twists, and quantum dimensions.
//!
//! Characters are classified by solutions (k,l) ∈ ℤ_N² of
//!
//! ```text
//! (a+1) k + c l ≡ 0 (mod N),    b k + (d+1) l ≡ 0 (mod N)
//! ```
//!
//! with N = |tr(A)+2|. Order-≤2 solutions carry a pair of reducible
//! characters X^±; orbits {g, −g} of larger order carry one irreducible
//! character Y each.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::{root_of_unity_int, CycloNum, Int, Rational};
use crate::bundle::{eps_allowed, BundleError, BundleInvariants, Monodromy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("twist exponent {cs} is not an integer multiple of 1/{order}")]
    NonRationalTwist { cs: Rational, order: u32 },
}

/// Classification of a character class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CharKind {
    ReduciblePlus,
    ReducibleMinus,
    Irreducible,
}

impl CharKind {
    pub fn is_reducible(&self) -> bool {
        !matches!(self, CharKind::Irreducible)
    }
}

/// A non-Abelian character class of the bundle.
///
/// `kl` is the canonical solution of the defining congruences: for
/// irreducible classes the lexicographically smaller of (k,l) and
/// (−k,−l) mod N; for reducible classes (ε_x N/2, ε_y N/2).
/// `munu` is the exact integer lift μ = ((a+1)k + c·l)/N,
/// ν = (b·k + (d+1)·l)/N computed from that representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClass {
    pub kl: (u64, u64),
    pub munu: (Int, Int),
    pub kind: CharKind,
    pub eps: Option<(u8, u8)>,
}

impl CharClass {
    pub fn name(&self) -> String {
        match self.kind {
            CharKind::ReduciblePlus => format!("X+({},{})", self.kl.0, self.kl.1),
            CharKind::ReducibleMinus => format!("X-({},{})", self.kl.0, self.kl.1),
            CharKind::Irreducible => format!("Y({},{})", self.kl.0, self.kl.1),
        }
    }
}

/// The ordered label set: the unit X⁺(0,0) first, the remaining reducible
/// classes sorted by (k,l) and sign, then irreducible classes sorted by
/// canonical (k,l).
#[derive(Clone, Debug)]
pub struct LabelSet {
    pub n: u64,
    pub classes: Vec<CharClass>,
    /// The full solution set, sorted; shared with the pointed construction.
    pub elements: Vec<(u64, u64)>,
}

impl LabelSet {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn unit(&self) -> &CharClass {
        &self.classes[0]
    }

    pub fn invertible_count(&self) -> usize {
        self.classes.iter().filter(|c| c.kind.is_reducible()).count()
    }

    pub fn twodim_count(&self) -> usize {
        self.classes.len() - self.invertible_count()
    }
}

fn residue(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

/// All (k,l) in [0,N)² satisfying both congruences, by exhaustive check.
/// This is the independent oracle for [`solve_characters`]; O(N²).
pub fn brute_force_solutions(m: &Monodromy) -> BTreeSet<(u64, u64)> {
    let n = m.n();
    assert!(n >= 1);
    assert!(n <= 1 << 20, "brute-force enumeration is quadratic in N");
    let ap1 = residue(m.a() as i128 + 1, n) as u128;
    let c = residue(m.c() as i128, n) as u128;
    let b = residue(m.b() as i128, n) as u128;
    let dp1 = residue(m.d() as i128 + 1, n) as u128;
    let n128 = n as u128;
    let mut out = BTreeSet::new();
    for k in 0..n {
        for l in 0..n {
            let e1 = (ap1 * k as u128 + c * l as u128) % n128;
            let e2 = (b * k as u128 + dp1 * l as u128) % n128;
            if e1 == 0 && e2 == 0 {
                out.insert((k, l));
            }
        }
    }
    out
}

/// The solution group G ⊂ ℤ_N², computed structurally as the image of
/// f = [[d+1, −c], [−b, a+1]] acting on ℤ².
pub fn solution_group(m: &Monodromy) -> BTreeSet<(u64, u64)> {
    let n = m.n();
    assert!(n >= 1);
    let gen1 = (residue(m.d() as i128 + 1, n), residue(-(m.b() as i128), n));
    let gen2 = (residue(-(m.c() as i128), n), residue(m.a() as i128 + 1, n));
    let add = |x: (u64, u64), y: (u64, u64)| -> (u64, u64) {
        (
            ((x.0 as u128 + y.0 as u128) % n as u128) as u64,
            ((x.1 as u128 + y.1 as u128) % n as u128) as u64,
        )
    };
    let mut set = BTreeSet::new();
    set.insert((0, 0));
    let mut stack = vec![(0u64, 0u64)];
    while let Some(g) = stack.pop() {
        for h in [add(g, gen1), add(g, gen2)] {
            if set.insert(h) {
                stack.push(h);
            }
        }
    }
    set
}

/// The exact integer lift (μ, ν) of a solution representative.
pub fn lift(m: &Monodromy, kl: (u64, u64)) -> (Int, Int) {
    let n = Int::from(m.n());
    let k = Int::from(kl.0);
    let l = Int::from(kl.1);
    let mu_num = Int::from(m.a()).add(&Int::ONE).mul(&k).add(&Int::from(m.c()).mul(&l));
    let nu_num = Int::from(m.b()).mul(&k).add(&Int::from(m.d()).add(&Int::ONE).mul(&l));
    (mu_num.div_exact(&n), nu_num.div_exact(&n))
}

fn int_mod_u64(v: &Int, n: u64) -> u64 {
    let r = v.rem_euclid(&Int::from(n));
    u64::try_from(r.to_i128().expect("residue fits i128")).expect("residue is non-negative")
}

/// The quadratic form q̂(μ,ν) = c·ν² + (a−d)·μν − b·μ² reduced mod N.
/// Well defined on G = ℤ²/Im(g); the verification layer checks this.
pub fn qtilde(m: &Monodromy, munu: (&Int, &Int)) -> u64 {
    let (mu, nu) = munu;
    let c = Int::from(m.c());
    let b = Int::from(m.b());
    let a_minus_d = Int::from(m.a()).sub(&Int::from(m.d()));
    let val = c
        .mul(&nu.mul(nu))
        .add(&a_minus_d.mul(&mu.mul(nu)))
        .sub(&b.mul(&mu.mul(mu)));
    int_mod_u64(&val, m.n())
}

/// λ(g₁, g₂) = q̂(g₁+g₂) − q̂(g₁) − q̂(g₂) mod N, the bilinear form
/// associated to the quadratic form.
pub fn bilinear_lambda(m: &Monodromy, g1: (&Int, &Int), g2: (&Int, &Int)) -> u64 {
    let n = m.n();
    let sum = (g1.0.add(g2.0), g1.1.add(g2.1));
    let q_sum = qtilde(m, (&sum.0, &sum.1)) as i128;
    let q1 = qtilde(m, g1) as i128;
    let q2 = qtilde(m, g2) as i128;
    residue(q_sum - q1 - q2, n)
}

/// The quadratic form value attached to a class for the pointed category:
/// sign(tr A + 2) · q̂(μ, ν) mod N. For positive trace this is q̂ itself;
/// the sign keeps twists and Chern–Simons data consistent when tr(A)+2 < 0.
pub fn qtilde_class(m: &Monodromy, munu: (&Int, &Int)) -> u64 {
    let raw = qtilde(m, munu);
    if m.sign() > 0 || raw == 0 {
        raw
    } else {
        m.n() - raw
    }
}

/// Chern–Simons invariant of a class, as a rational in [0, 1).
pub fn chern_simons(m: &Monodromy, class: &CharClass) -> Rational {
    match class.kind {
        CharKind::Irreducible => {
            let k = Int::from(class.kl.0);
            let l = Int::from(class.kl.1);
            let (mu, nu) = &class.munu;
            let num = k.mul(nu).sub(&l.mul(mu));
            Rational::new(num, Int::from(m.n())).mod1()
        }
        _ => {
            let (ex, ey) = class.eps.expect("reducible class carries eps");
            let (ex, ey) = (ex as i128, ey as i128);
            let tr2 = m.trace() + 2;
            let num = tr2 * ex * ey + m.b() as i128 * ex + m.c() as i128 * ey;
            Rational::new(Int::from(num), Int::from(4i64)).mod1()
        }
    }
}

/// Adjoint Reidemeister torsion: N/4 for irreducible classes, N for
/// reducible ones.
pub fn torsion(m: &Monodromy, class: &CharClass) -> Rational {
    let n = Rational::from_integer(Int::from(m.n()));
    match class.kind {
        CharKind::Irreducible => n.div(&Rational::from_int(4)),
        _ => n,
    }
}

/// Enumerates and classifies the non-Abelian characters of the bundle.
pub fn solve_characters(m: &Monodromy) -> Result<LabelSet, CharError> {
    let inv = m.invariants()?;
    let n = inv.n;
    let set = solution_group(m);
    if set.len() as u64 != n {
        return Err(CharError::InternalInconsistency(format!(
            "solution group has {} elements, expected N = {n}",
            set.len()
        )));
    }
    let elements: Vec<(u64, u64)> = set.iter().copied().collect();

    let neg = |g: (u64, u64)| -> (u64, u64) {
        ((n - g.0) % n, (n - g.1) % n)
    };
    let double_is_zero = |g: (u64, u64)| (2 * g.0).is_multiple_of(n) && (2 * g.1).is_multiple_of(n);

    let mut reducible_elems = Vec::new();
    let mut orbit_reps = Vec::new();
    for &g in &elements {
        if double_is_zero(g) {
            reducible_elems.push(g);
        } else if g <= neg(g) {
            orbit_reps.push(g);
        }
    }

    let mut classes = Vec::with_capacity(2 * reducible_elems.len() + orbit_reps.len());
    for &g in &reducible_elems {
        let eps = (
            u8::from(g.0 != 0),
            u8::from(g.1 != 0),
        );
        if !eps_allowed(&inv.parity, eps) {
            return Err(CharError::InternalInconsistency(format!(
                "reducible class with (eps_x, eps_y) = ({}, {}) contradicts parity {}",
                eps.0, eps.1, inv.parity
            )));
        }
        let munu = lift(m, g);
        for kind in [CharKind::ReduciblePlus, CharKind::ReducibleMinus] {
            classes.push(CharClass { kl: g, munu: munu.clone(), kind, eps: Some(eps) });
        }
    }
    for &g in &orbit_reps {
        let munu = lift(m, g);
        classes.push(CharClass { kl: g, munu, kind: CharKind::Irreducible, eps: None });
    }

    debug_assert_eq!(classes[0].kl, (0, 0));
    debug_assert_eq!(classes[0].kind, CharKind::ReduciblePlus);
    Ok(LabelSet { n, classes, elements })
}

/// Twists, quantum dimensions, and the global dimension of a label set.
#[derive(Clone, Debug)]
pub struct TwistData {
    /// Common cyclotomic order of the twists: lcm(N, 4).
    pub theta_order: u32,
    pub theta: Vec<CycloNum>,
    pub cs: Vec<Rational>,
    pub torsion: Vec<Rational>,
    pub dims: Vec<Rational>,
    pub d_squared: Rational,
}

/// Order of the field containing all twists: CS differences are rationals
/// with denominator dividing lcm(N, 4).
pub fn twist_order(n: u64) -> u32 {
    let l = num_integer::lcm(n as u128, 4);
    u32::try_from(l).expect("twist order exceeds supported cyclotomic range")
}

/// θ_α = exp(−2πi(CS(χ_α) − CS(χ₀))) as exact roots of unity, plus the
/// torsion-derived quantum dimensions d_α = sqrt(D² / (2 Tor(χ_α))) and
/// D² = 2 Tor(χ₀) = 2N.
pub fn twist_and_dims(m: &Monodromy, labels: &LabelSet) -> Result<TwistData, CharError> {
    let n = labels.n;
    let order = twist_order(n);
    let order_rat = Rational::from_integer(Int::from(order as i64));
    let cs0 = chern_simons(m, labels.unit());
    debug_assert!(cs0.is_zero(), "the unit class has vanishing CS invariant");

    let d_squared = Rational::from_integer(Int::from(2 * n as i128));
    let mut theta = Vec::with_capacity(labels.rank());
    let mut cs_all = Vec::with_capacity(labels.rank());
    let mut torsion_all = Vec::with_capacity(labels.rank());
    let mut dims = Vec::with_capacity(labels.rank());
    for class in &labels.classes {
        let cs = chern_simons(m, class);
        let exponent = cs.sub(&cs0).neg().mul(&order_rat);
        if !exponent.is_integer() {
            return Err(CharError::NonRationalTwist { cs, order });
        }
        theta.push(root_of_unity_int(order, exponent.numerator()));

        let tor = torsion(m, class);
        let dim_sq = d_squared.div(&tor.mul(&Rational::from_int(2)));
        let dim = dim_sq.sqrt_exact().ok_or_else(|| {
            CharError::InternalInconsistency(format!(
                "quantum dimension squared {dim_sq} is not a perfect square"
            ))
        })?;
        cs_all.push(cs);
        torsion_all.push(tor);
        dims.push(dim);
    }
    Ok(TwistData {
        theta_order: order,
        theta,
        cs: cs_all,
        torsion: torsion_all,
        dims,
        d_squared,
    })
}

/// Convenience accessor pairing `solve_characters` with the invariants.
pub fn labels_with_invariants(
    m: &Monodromy,
) -> Result<(BundleInvariants, LabelSet), CharError> {
    let inv = m.invariants()?;
    let labels = solve_characters(m)?;
    Ok((inv, labels))
}
