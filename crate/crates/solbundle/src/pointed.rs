//! The pointed premodular category C(G,q) and its particle-hole (ℤ₂)
//! equivariantization: simple objects, fusion rules, and the S/T data.
//!
//! G is the solution group of the bundle with the quadratic form q̃ induced
//! by q̂(μ,ν); the ℤ₂-action sends each invertible object to its inverse.
//! Equivariantization doubles 2-torsion elements into sign pairs X_b^± and
//! merges the remaining ± orbits into two-dimensional objects Y_{{a,−a}}.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{CycloNum, Rational};
use crate::bundle::Monodromy;
use crate::characters::{lift, qtilde_class, solution_group, CharError};

/// A finite abelian group of shape ℤ_r × ℤ_{N/r} presented as a subgroup of
/// ℤ_N², together with the exponent table of its quadratic form
/// (q(g) = ζ_N^{q̃(g)}).
#[derive(Clone, Debug)]
pub struct QuadGroup {
    pub n: u64,
    pub shape: (u64, u64),
    elements: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
    q_table: Vec<u64>,
}

impl QuadGroup {
    pub fn elements(&self) -> &[(u64, u64)] {
        &self.elements
    }

    pub fn q(&self, g: (u64, u64)) -> u64 {
        self.q_table[self.index[&g]]
    }

    pub fn q_values(&self) -> &[u64] {
        &self.q_table
    }

    pub fn add(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        (
            ((x.0 as u128 + y.0 as u128) % self.n as u128) as u64,
            ((x.1 as u128 + y.1 as u128) % self.n as u128) as u64,
        )
    }

    pub fn neg(&self, x: (u64, u64)) -> (u64, u64) {
        ((self.n - x.0) % self.n, (self.n - x.1) % self.n)
    }

    pub fn is_two_torsion(&self, x: (u64, u64)) -> bool {
        x == self.neg(x)
    }

    /// Canonical orbit representative: the lexicographically smaller of
    /// x and −x.
    pub fn orbit_rep(&self, x: (u64, u64)) -> (u64, u64) {
        x.min(self.neg(x))
    }

    /// λ(x, y) = q̃(x+y) − q̃(x) − q̃(y) mod N, from the table.
    pub fn lambda(&self, x: (u64, u64), y: (u64, u64)) -> u64 {
        let s = self.q(self.add(x, y)) as i128 - self.q(x) as i128 - self.q(y) as i128;
        s.rem_euclid(self.n as i128) as u64
    }

    /// Checks that element orders realize ℤ_r × ℤ_{N/r}: for every divisor
    /// k of N the k-torsion subgroup has gcd(k,r)·gcd(k,N/r) elements.
    pub fn verify_shape(&self) -> Result<(), CharError> {
        let (r, s) = self.shape;
        for k in crate::arith::divisors(u32::try_from(self.n).unwrap_or(u32::MAX)) {
            let k = k as u64;
            let killed = self
                .elements
                .iter()
                .filter(|&&(x, y)| (k as u128 * x as u128).is_multiple_of(self.n as u128)
                    && (k as u128 * y as u128).is_multiple_of(self.n as u128))
                .count() as u64;
            let expected = num_integer::gcd(k, r) * num_integer::gcd(k, s);
            if killed != expected {
                return Err(CharError::InternalInconsistency(format!(
                    "{k}-torsion has {killed} elements, expected {expected} for shape Z_{r} x Z_{s}"
                )));
            }
        }
        Ok(())
    }
}

/// Builds the solution group with its quadratic form table from a monodromy.
pub fn build_quad_group(m: &Monodromy) -> Result<QuadGroup, CharError> {
    let inv = m.invariants()?;
    let n = inv.n;
    let elements: Vec<(u64, u64)> = solution_group(m).into_iter().collect();
    if elements.len() as u64 != n {
        return Err(CharError::InternalInconsistency(format!(
            "solution group has {} elements, expected N = {n}",
            elements.len()
        )));
    }
    let index: HashMap<(u64, u64), usize> =
        elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let q_table = elements
        .iter()
        .map(|&g| {
            let (mu, nu) = lift(m, g);
            qtilde_class(m, (&mu, &nu))
        })
        .collect();
    let group = QuadGroup { n, shape: inv.group_shape, elements, index, q_table };
    group.verify_shape()?;
    Ok(group)
}

/// A simple object of C(G,q)^{ℤ₂}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimpleObject {
    /// X_b^±: an invertible object over a 2-torsion element b.
    Invertible { elem: (u64, u64), plus: bool },
    /// Y_{{a,−a}}: a two-dimensional object over an orbit of order > 2,
    /// tagged by its canonical representative.
    TwoDim { rep: (u64, u64) },
}

impl PartialOrd for SimpleObject {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimpleObject {
    /// Listing order: invertibles before two-dims, elements ascending,
    /// + before − within a sign pair.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |o: &SimpleObject| match o {
            SimpleObject::Invertible { elem, plus } => (0u8, *elem, u8::from(!plus)),
            SimpleObject::TwoDim { rep } => (1u8, *rep, 0u8),
        };
        key(self).cmp(&key(other))
    }
}

impl std::hash::Hash for SimpleObject {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            SimpleObject::Invertible { elem, plus } => {
                0u8.hash(state);
                elem.hash(state);
                plus.hash(state);
            }
            SimpleObject::TwoDim { rep } => {
                1u8.hash(state);
                rep.hash(state);
            }
        }
    }
}

impl SimpleObject {
    pub fn element(&self) -> (u64, u64) {
        match self {
            SimpleObject::Invertible { elem, .. } => *elem,
            SimpleObject::TwoDim { rep } => *rep,
        }
    }

    pub fn dim(&self) -> i64 {
        match self {
            SimpleObject::Invertible { .. } => 1,
            SimpleObject::TwoDim { .. } => 2,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SimpleObject::Invertible { elem, plus } => {
                format!("X{}({},{})", if *plus { "+" } else { "-" }, elem.0, elem.1)
            }
            SimpleObject::TwoDim { rep } => format!("Y({},{})", rep.0, rep.1),
        }
    }
}

impl fmt::Display for SimpleObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The ordered simple objects: X_b^± over 2-torsion elements (sorted, plus
/// sign first), then Y orbits sorted by canonical representative. This
/// mirrors the character label-set ordering.
pub fn simple_objects(group: &QuadGroup) -> Vec<SimpleObject> {
    let mut invertibles = Vec::new();
    let mut twodims = Vec::new();
    for &g in group.elements() {
        if group.is_two_torsion(g) {
            invertibles.push(SimpleObject::Invertible { elem: g, plus: true });
            invertibles.push(SimpleObject::Invertible { elem: g, plus: false });
        } else if g == group.orbit_rep(g) {
            twodims.push(SimpleObject::TwoDim { rep: g });
        }
    }
    invertibles.into_iter().chain(twodims).collect()
}

/// Fusion product as a sorted multiset of simple objects.
///
/// X_b^ε ⊗ X_{b'}^{ε'} = X_{b+b'}^{εε'}; X_b^ε ⊗ Y_a = Y_{a+b}. For
/// Y_a ⊗ Y_{a'} the forgetful image {±a ± a'} splits into two ± orbits,
/// each contributing Y_s when 2s ≠ 0 and X_s^+ ⊕ X_s^− when 2s = 0. The
/// 2-torsion case covers subscripts where Y_{a±a'} would be undefined; the
/// sign pair is forced by the Frobenius–Perron dimension count.
pub fn fusion(group: &QuadGroup, x: &SimpleObject, y: &SimpleObject) -> Vec<SimpleObject> {
    let mut out = match (x, y) {
        (
            SimpleObject::Invertible { elem: b, plus: p },
            SimpleObject::Invertible { elem: b2, plus: p2 },
        ) => {
            vec![SimpleObject::Invertible { elem: group.add(*b, *b2), plus: p == p2 }]
        }
        (SimpleObject::Invertible { elem: b, .. }, SimpleObject::TwoDim { rep: a })
        | (SimpleObject::TwoDim { rep: a }, SimpleObject::Invertible { elem: b, .. }) => {
            vec![SimpleObject::TwoDim { rep: group.orbit_rep(group.add(*a, *b)) }]
        }
        (SimpleObject::TwoDim { rep: a }, SimpleObject::TwoDim { rep: a2 }) => {
            let mut parts = Vec::with_capacity(4);
            for s in [group.add(*a, *a2), group.add(*a, group.neg(*a2))] {
                if group.is_two_torsion(s) {
                    parts.push(SimpleObject::Invertible { elem: s, plus: true });
                    parts.push(SimpleObject::Invertible { elem: s, plus: false });
                } else {
                    parts.push(SimpleObject::TwoDim { rep: group.orbit_rep(s) });
                }
            }
            parts
        }
    };
    out.sort();
    out
}

/// Whether some Y ⊗ Y product lands on a nonzero 2-torsion subscript — the
/// case outside the generic fusion rules, decomposed as a sign pair.
pub fn fusion_edge_case(group: &QuadGroup, x: &SimpleObject, y: &SimpleObject) -> bool {
    if let (SimpleObject::TwoDim { rep: a }, SimpleObject::TwoDim { rep: a2 }) = (x, y) {
        [group.add(*a, *a2), group.add(*a, group.neg(*a2))]
            .into_iter()
            .any(|s| s != (0, 0) && group.is_two_torsion(s))
    } else {
        false
    }
}

/// Fusion coefficients N_{ij}^k, stored sparsely per (i, j).
#[derive(Clone, Debug)]
pub struct FusionTensor {
    rank: usize,
    table: Vec<Vec<Vec<(usize, u32)>>>,
}

impl FusionTensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u32 {
        self.table[i][j]
            .iter()
            .find(|(idx, _)| *idx == k)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn outputs(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i][j]
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        self.table.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().flat_map(move |(j, cell)| {
                cell.iter().map(move |&(k, c)| (i, j, k, c))
            })
        })
    }
}

/// Modular data of the equivariantization: S^e, T^e, fusion tensor, and
/// quantum dimensions.
#[derive(Clone, Debug)]
pub struct EquivData {
    pub objects: Vec<SimpleObject>,
    pub s: Vec<Vec<CycloNum>>,
    pub t: Vec<CycloNum>,
    pub dims: Vec<Rational>,
    pub fusion: FusionTensor,
    pub fusion_edge_case: bool,
}

/// Assembles T^e(obj) = ζ^{q̃}, the S^e-matrix (ζ^λ, 2ζ^λ, 2(ζ^λ + ζ^{−λ})
/// for the XX / XY / YY blocks), the fusion tensor, and the dimensions.
pub fn modular_data_equiv(group: &QuadGroup) -> EquivData {
    let order = u32::try_from(group.n).expect("cyclotomic order fits u32");
    let objects = simple_objects(group);
    let rank = objects.len();
    let obj_index: HashMap<SimpleObject, usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();

    let t: Vec<CycloNum> = objects
        .iter()
        .map(|o| CycloNum::root_of_unity(order, group.q(o.element()) as i64))
        .collect();
    let dims: Vec<Rational> = objects.iter().map(|o| Rational::from_int(o.dim())).collect();

    let mut s = vec![vec![CycloNum::zero(order); rank]; rank];
    for (i, oi) in objects.iter().enumerate() {
        for (j, oj) in objects.iter().enumerate() {
            let lam = group.lambda(oi.element(), oj.element()) as i64;
            s[i][j] = match (oi, oj) {
                (SimpleObject::Invertible { .. }, SimpleObject::Invertible { .. }) => {
                    CycloNum::root_of_unity(order, lam)
                }
                (SimpleObject::TwoDim { .. }, SimpleObject::TwoDim { .. }) => {
                    let two = Rational::from_int(2);
                    CycloNum::root_combination(order, &[(lam, two.clone()), (-lam, two)])
                }
                _ => CycloNum::root_of_unity(order, lam).scale(&Rational::from_int(2)),
            };
        }
    }

    let mut edge = false;
    let mut table = vec![vec![Vec::new(); rank]; rank];
    for (i, oi) in objects.iter().enumerate() {
        for (j, oj) in objects.iter().enumerate() {
            edge |= fusion_edge_case(group, oi, oj);
            let mut counts: HashMap<usize, u32> = HashMap::new();
            for out in fusion(group, oi, oj) {
                *counts.entry(obj_index[&out]).or_insert(0) += 1;
            }
            let mut cell: Vec<(usize, u32)> = counts.into_iter().collect();
            cell.sort_unstable();
            table[i][j] = cell;
        }
    }

    EquivData {
        objects,
        s,
        t,
        dims,
        fusion: FusionTensor { rank, table },
        fusion_edge_case: edge,
    }
}
