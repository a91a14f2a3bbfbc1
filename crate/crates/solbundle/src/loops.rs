//! Loop operators and the S-matrix they generate.
//!
//! Every character class maps to a single primitive loop operator
//! (x^m y^n, Sym^j): reducible classes take the trivial representation
//! Sym⁰, irreducible ones the defining representation Sym¹. The S-matrix is
//! assembled from W-symbols, S_{αβ} = W_β(α)·W₀(β), where W_β(α) is the
//! trace of ε·χ_β on α's loop operator.

use crate::arith::{CycloNum, Int, Rational};
use crate::bundle::Monodromy;
use crate::characters::{CharClass, CharKind, LabelSet};

/// A primitive loop operator x^m y^n weighted in Sym^{sym_degree}.
///
/// For the owning class's stored lift (μ, ν):
/// m = −b·μ + (a−1)·ν and n = (1−d)·μ + c·ν.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopOperator {
    pub m: Int,
    pub n: Int,
    pub sym_degree: u8,
}

/// The loop operator attached to a character class (via its stored lift).
pub fn loop_operator(mono: &Monodromy, class: &CharClass) -> LoopOperator {
    let sym_degree = if class.kind.is_reducible() { 0 } else { 1 };
    loop_operator_from_lift(mono, (&class.munu.0, &class.munu.1), sym_degree)
}

/// The full operator collection of a class. W-symbols are products over
/// this list; for torus bundles each class carries exactly one primitive
/// operator, but the list keeps the general shape of the construction.
pub fn loop_operators(mono: &Monodromy, class: &CharClass) -> Vec<LoopOperator> {
    vec![loop_operator(mono, class)]
}

/// The same construction from an explicit lift; the S-matrix must not
/// depend on which lift of a class is used (exercised by tests).
pub fn loop_operator_from_lift(
    mono: &Monodromy,
    munu: (&Int, &Int),
    sym_degree: u8,
) -> LoopOperator {
    let (mu, nu) = munu;
    let a = Int::from(mono.a());
    let b = Int::from(mono.b());
    let c = Int::from(mono.c());
    let d = Int::from(mono.d());
    let m = a.sub(&Int::ONE).mul(nu).sub(&b.mul(mu));
    let n = Int::ONE.sub(&d).mul(mu).add(&c.mul(nu));
    LoopOperator { m, n, sym_degree }
}

fn exponent_mod(n: u64, v: &Int) -> i64 {
    let r = v.rem_euclid(&Int::from(n));
    r.to_i128().expect("residue fits i128") as i64
}

/// W_{ε·χ}(a, R): the trace of the (sign-twisted) character on the loop
/// operator. Sym⁰ weights are identically 1; Sym¹ weights are traces of
/// the underlying SL(2,ℂ) matrices.
pub fn weight(mono: &Monodromy, chi: &CharClass, op: &LoopOperator, epsilon: i8) -> CycloNum {
    let n = mono.n();
    let order = u32::try_from(n).expect("cyclotomic order fits u32");
    if op.sym_degree == 0 {
        return CycloNum::one(order);
    }
    let eps_rat = Rational::from_int(epsilon as i64);
    match chi.kind {
        CharKind::Irreducible => {
            let (k, l) = chi.kl;
            let e = Int::from(k).mul(&op.m).add(&Int::from(l).mul(&op.n));
            let e = exponent_mod(n, &e);
            CycloNum::root_combination(order, &[(e, eps_rat.clone()), (-e, eps_rat)])
        }
        _ => {
            let (ex, ey) = chi.eps.expect("reducible class carries eps");
            let s = Int::from(ex as i64)
                .mul(&op.m)
                .add(&Int::from(ey as i64).mul(&op.n))
                .rem_euclid(&Int::from(2i64));
            let sign = if s.is_zero() { 1 } else { -1 };
            CycloNum::from_int(order, 2 * sign * epsilon as i64)
        }
    }
}

/// The loop-operator S-matrix S^l over Q(ζ_N): S^l_{αβ} = W_β(α)·W₀(β).
pub fn s_matrix_loops(mono: &Monodromy, labels: &LabelSet, epsilon: i8) -> Vec<Vec<CycloNum>> {
    assert!(epsilon == 1 || epsilon == -1, "epsilon must be ±1");
    let n = labels.n;
    let order = u32::try_from(n).expect("cyclotomic order fits u32");
    let rank = labels.rank();
    let ops: Vec<Vec<LoopOperator>> = labels
        .classes
        .iter()
        .map(|c| loop_operators(mono, c))
        .collect();
    // W_β(α): product of weights of α's operators against ε·χ_β.
    let w_symbol = |alpha: usize, beta: usize| -> CycloNum {
        ops[alpha].iter().fold(CycloNum::one(order), |acc, op| {
            acc.mul(&weight(mono, &labels.classes[beta], op, epsilon))
        })
    };

    // W₀(β): β's operators against the unit character (index 0).
    let w0: Vec<CycloNum> = (0..rank).map(|beta| w_symbol(beta, 0)).collect();
    let mut s = vec![vec![CycloNum::zero(order); rank]; rank];
    for (alpha, row) in s.iter_mut().enumerate() {
        for (beta, cell) in row.iter_mut().enumerate() {
            // S_{αβ} = W_β(α) · W₀(β)
            *cell = w_symbol(alpha, beta).mul(&w0[beta]);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{
        bilinear_lambda, solve_characters, twist_and_dims,
    };

    fn m(a: i64, b: i64, c: i64, d: i64) -> Monodromy {
        Monodromy::new(a, b, c, d).unwrap()
    }

    #[test]
    fn unit_operator_is_trivial() {
        let mm = m(2, 1, 1, 1);
        let labels = solve_characters(&mm).unwrap();
        let op = loop_operator(&mm, labels.unit());
        assert_eq!(op, LoopOperator { m: Int::ZERO, n: Int::ZERO, sym_degree: 0 });
    }

    #[test]
    fn operator_formula() {
        // lift (0,1) for A=(2,1,1,1): m = (a-1)·1 = 1, n = c·1 = 1
        let mm = m(2, 1, 1, 1);
        let op = loop_operator_from_lift(&mm, (&Int::ZERO, &Int::ONE), 1);
        assert_eq!((op.m, op.n), (Int::ONE, Int::ONE));
    }

    #[test]
    fn weight_examples() {
        let mm = m(2, 1, 1, 1);
        let labels = solve_characters(&mm).unwrap();
        // Sym⁰ weighs 1 against anything.
        let x_op = loop_operator(&mm, &labels.classes[1]);
        for chi in &labels.classes {
            assert_eq!(weight(&mm, chi, &x_op, 1), CycloNum::one(5));
        }
        // op (1,1) in Sym¹ against Y with (k',l') = (4,3): exponent 7 ≡ 2.
        let op = LoopOperator { m: Int::ONE, n: Int::ONE, sym_degree: 1 };
        let y43 = CharClass {
            kl: (4, 3),
            munu: (Int::from(3), Int::from(2)),
            kind: CharKind::Irreducible,
            eps: None,
        };
        let expect = CycloNum::root_combination(
            5,
            &[(2, Rational::one()), (3, Rational::one())],
        );
        assert_eq!(weight(&mm, &y43, &op, 1), expect);
        // Sym¹ against the unit: trace of the identity, namely 2.
        assert_eq!(weight(&mm, labels.unit(), &op, 1), CycloNum::from_int(5, 2));
    }

    #[test]
    fn s_matrix_z5() {
        let mm = m(2, 1, 1, 1);
        let labels = solve_characters(&mm).unwrap();
        let s = s_matrix_loops(&mm, &labels, 1);
        // unit row: 1 against X-type, 2 against Y-type
        assert_eq!(s[0][0], CycloNum::one(5));
        assert_eq!(s[0][1], CycloNum::one(5));
        assert_eq!(s[0][2], CycloNum::from_int(5, 2));
        assert_eq!(s[0][3], CycloNum::from_int(5, 2));
        // Y1 = Y(1,2): diagonal 2(ζ² + ζ³), cross term 2(ζ⁴ + ζ)
        let two = Rational::from_int(2);
        assert_eq!(
            s[2][2],
            CycloNum::root_combination(5, &[(2, two.clone()), (3, two.clone())])
        );
        assert_eq!(
            s[2][3],
            CycloNum::root_combination(5, &[(4, two.clone()), (1, two)])
        );
    }

    #[test]
    fn s_matrix_matches_bilinear_closed_form() {
        for mm in [m(2, 1, 1, 1), m(3, 1, 2, 1), m(5, 1, 4, 1), m(5, 2, 2, 1), m(-7, 4, -2, 1)] {
            let labels = solve_characters(&mm).unwrap();
            let s = s_matrix_loops(&mm, &labels, 1);
            let order = mm.n() as u32;
            for (i, ci) in labels.classes.iter().enumerate() {
                for (j, cj) in labels.classes.iter().enumerate() {
                    let expect = match (ci.kind.is_reducible(), cj.kind.is_reducible()) {
                        (true, true) => CycloNum::one(order),
                        (true, false) | (false, true) => CycloNum::from_int(order, 2),
                        (false, false) => {
                            let lam = bilinear_lambda(
                                &mm,
                                (&ci.munu.0, &ci.munu.1),
                                (&cj.munu.0, &cj.munu.1),
                            ) as i64;
                            let two = Rational::from_int(2);
                            CycloNum::root_combination(
                                order,
                                &[(lam, two.clone()), (-lam, two)],
                            )
                        }
                    };
                    assert_eq!(s[i][j], expect, "entry ({i},{j}) of {mm}");
                }
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn s_matrix_is_symmetric_real_and_lift_independent() {
        for mm in [m(2, 1, 1, 1), m(3, 1, 2, 1), m(5, 2, 2, 1), m(-7, 4, -2, 1)] {
            let labels = solve_characters(&mm).unwrap();
            let s = s_matrix_loops(&mm, &labels, 1);
            for i in 0..labels.rank() {
                for j in 0..labels.rank() {
                    assert_eq!(s[i][j], s[j][i], "symmetry ({i},{j}) of {mm}");
                    assert_eq!(s[i][j], s[i][j].conjugate(), "reality ({i},{j}) of {mm}");
                }
            }

            // Shifting every stored lift by lattice vectors of Im(g) must
            // leave the matrix unchanged.
            let mut shifted = labels.clone();
            let g1 = (Int::from(mm.a() + 1), Int::from(mm.b()));
            let g2 = (Int::from(mm.c()), Int::from(mm.d() + 1));
            for (idx, class) in shifted.classes.iter_mut().enumerate() {
                let (s1, s2) = ((idx % 3) as i64, (idx % 5) as i64 - 2);
                class.munu = (
                    class
                        .munu
                        .0
                        .add(&g1.0.mul(&Int::from(s1)))
                        .add(&g2.0.mul(&Int::from(s2))),
                    class
                        .munu
                        .1
                        .add(&g1.1.mul(&Int::from(s1)))
                        .add(&g2.1.mul(&Int::from(s2))),
                );
            }
            assert_eq!(s, s_matrix_loops(&mm, &shifted, 1), "lift independence for {mm}");
        }
    }

    #[test]
    fn first_column_gives_quantum_dimensions() {
        for mm in [m(2, 1, 1, 1), m(5, 1, 4, 1), m(5, 2, 2, 1)] {
            let labels = solve_characters(&mm).unwrap();
            let s = s_matrix_loops(&mm, &labels, 1);
            let tw = twist_and_dims(&mm, &labels).unwrap();
            let order = mm.n() as u32;
            for (i, d) in tw.dims.iter().enumerate() {
                assert_eq!(s[i][0], CycloNum::from_rational(order, d.clone()), "d[{i}] of {mm}");
            }
        }
    }

    #[test]
    fn epsilon_minus_one_flips_mixed_entries() {
        let mm = m(5, 1, 4, 1);
        let labels = solve_characters(&mm).unwrap();
        let plus = s_matrix_loops(&mm, &labels, 1);
        let minus = s_matrix_loops(&mm, &labels, -1);
        for (i, ci) in labels.classes.iter().enumerate() {
            for (j, cj) in labels.classes.iter().enumerate() {
                if ci.kind.is_reducible() != cj.kind.is_reducible() {
                    assert_eq!(minus[i][j], plus[i][j].neg(), "({i},{j})");
                } else {
                    assert_eq!(minus[i][j], plus[i][j], "({i},{j})");
                }
            }
        }
    }
}
