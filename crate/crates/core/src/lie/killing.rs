use super::structure::StructureAlgebra;
use crate::arith::{is_positive_definite, Matrix, Scalar, ToleranceProfile};

/// The Killing form `B(X, Y) = tr(ad_X ad_Y)` and `Q = -B`.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingForm<S> {
    pub b: Matrix<S>,
    pub q: Matrix<S>,
    /// `Q` is positive definite, i.e. the algebra is compact semisimple.
    pub q_positive_definite: bool,
}

impl<S> KillingForm<S> {
    pub fn is_degenerate(&self) -> bool {
        !self.q_positive_definite
    }
}

pub fn killing_form<S: Scalar>(alg: &StructureAlgebra<S>, tol: &ToleranceProfile) -> KillingForm<S> {
    let d = alg.dim();
    // tr(ad_a ad_b) = sum_{j,k} c[a][j][k] c[b][k][j]
    let mut b = Matrix::zeros(d, d);
    for a in 0..d {
        for bb in a..d {
            let mut acc = S::zero();
            for j in 0..d {
                for (k, c1) in alg.bracket_basis(a, j) {
                    let c2 = alg.constant(bb, *k, j);
                    if !c2.is_zero_abs(0.0) {
                        acc = acc + c1.clone() * c2.clone();
                    }
                }
            }
            b.set(a, bb, acc.clone());
            b.set(bb, a, acc);
        }
    }
    let q = b.scale(&(-S::one()));
    let q_positive_definite = d > 0 && is_positive_definite(&q, tol);
    KillingForm {
        b,
        q,
        q_positive_definite,
    }
}

/// First basis triple `(i, j, k)` with `F([e_i, e_j], e_k) + F(e_j, [e_i, e_k]) != 0`.
pub fn ad_invariance_violation<S: Scalar>(
    alg: &StructureAlgebra<S>,
    form: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Option<(usize, usize, usize)> {
    let d = alg.dim();
    let scale = form.max_abs();
    // F([e_i, e_j], e_k) = sum_l c[i][j][l] F[l][k]
    let pair = |i: usize, j: usize, k: usize| -> S {
        let mut acc = S::zero();
        for (l, c) in alg.bracket_basis(i, j) {
            acc = acc + c.clone() * form.get(*l, k).clone();
        }
        acc
    };
    for i in 0..d {
        for j in 0..d {
            for k in j..d {
                let v = pair(i, j, k) + pair(i, k, j);
                if !v.is_zero_rel(tol.residual_epsilon, scale) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};
    use crate::lie::classical::{build_classical, Family};

    /// Independent route: trace of the explicit product of ad matrices.
    fn brute_force(alg: &StructureAlgebra<Rational>) -> Matrix<Rational> {
        let d = alg.dim();
        let ads: Vec<_> = (0..d).map(|i| alg.ad_basis(i)).collect();
        Matrix::from_fn(d, d, |a, b| {
            let p = ads[a].mul(&ads[b]).unwrap();
            (0..d).fold(rat(0, 1), |acc, i| acc + p.get(i, i).clone())
        })
    }

    #[test]
    fn so3_and_so6_constants() {
        let tol = ToleranceProfile::default();
        for n in [3usize, 6] {
            let g: StructureAlgebra<Rational> = build_classical(Family::So, n).unwrap();
            let k = killing_form(&g, &tol);
            assert!(k.q_positive_definite);
            assert_eq!(k.b, brute_force(&g));
            assert_eq!(k.q, Matrix::scalar(g.dim(), rat(2 * (n as i64 - 2), 1)));
            assert_eq!(ad_invariance_violation(&g, &k.b, &tol), None);
        }
    }

    #[test]
    fn abelian_is_degenerate() {
        let tol = ToleranceProfile::default();
        let g: StructureAlgebra<Rational> = build_classical(Family::Abelian, 3).unwrap();
        let k = killing_form(&g, &tol);
        assert!(k.b.is_zero(0.0));
        assert!(k.is_degenerate());
    }

    #[test]
    fn non_invariant_form_detected() {
        let tol = ToleranceProfile::default();
        let g: StructureAlgebra<Rational> = build_classical(Family::So, 3).unwrap();
        let f = Matrix::from_fn(3, 3, |i, j| if i == j { rat(i as i64 + 1, 1) } else { rat(0, 1) });
        assert!(ad_invariance_violation(&g, &f, &tol).is_some());
    }
}
