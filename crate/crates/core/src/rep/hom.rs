//! Spaces of module maps `T` with `cod(h) T = T dom(h)`.
//!
//! Rather than solving for all `d1 * d2` entries of `T` at once, the domain is
//! spanned by words in the action applied to a few seed vectors. A module map
//! is fixed by the images of the seeds, so those images are the unknowns and
//! the commutation conditions only constrain `seeds * d2` numbers.

use super::restriction::AdRestriction;
use crate::arith::{vecops, Matrix, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Basis of `Hom_h(V1, V2)`; each map is a `dim V2 x dim V1` matrix in the
/// bases of the two subspaces.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace<S> {
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub basis: Vec<Matrix<S>>,
}

impl<S> IntertwinerSpace<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn intertwiner_space<S: Scalar>(
    h: &Subspace<S>,
    v1: &Subspace<S>,
    v2: &Subspace<S>,
) -> Result<IntertwinerSpace<S>> {
    let r1 = AdRestriction::new(h, v1)?;
    let r2 = AdRestriction::new(h, v2)?;
    let basis = hom_space(r1.actions(), r2.actions(), v1.dim(), v2.dim(), h.ambient().tol())?;
    Ok(IntertwinerSpace {
        domain_dim: v1.dim(),
        codomain_dim: v2.dim(),
        basis,
    })
}

/// True iff no nonzero intertwiner exists, i.e. the two modules share no
/// irreducible constituent.
pub fn modules_disjoint<S: Scalar>(h: &Subspace<S>, v1: &Subspace<S>, v2: &Subspace<S>) -> Result<bool> {
    Ok(intertwiner_space(h, v1, v2)?.dim() == 0)
}

/// Row-echelon accumulator used to grow a basis one vector at a time.
struct Echelon<S> {
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
    eps: f64,
}

impl<S: Scalar> Echelon<S> {
    fn new(tol: &ToleranceProfile) -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
            eps: tol.residual_epsilon,
        }
    }

    fn insert(&mut self, v: &[S]) -> bool {
        let scale = vecops::max_abs(v).max(1.0);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = w[p].clone();
            if f.is_zero_abs(0.0) {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero_abs(0.0) {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        let pivot = match S::BACKEND {
            crate::arith::Backend::Exact => w.iter().position(|x| !x.is_zero_abs(0.0)),
            crate::arith::Backend::Float => {
                let (i, m) = w
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (i, x.magnitude()))
                    .fold((0, 0.0), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
                (m > self.eps * scale).then_some(i)
            }
        };
        let Some(p) = pivot else {
            return false;
        };
        let inv = S::one() / w[p].clone();
        let w: Vec<S> = w.into_iter().map(|x| x * inv.clone()).collect();
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

enum Origin {
    Seed(usize),
    Child { parent: usize, generator: usize },
}

/// Basis of `{T : cod[a] T = T dom[a] for all a}` with `T` of size `d2 x d1`.
pub fn hom_space<S: Scalar>(
    dom: &[Matrix<S>],
    cod: &[Matrix<S>],
    d1: usize,
    d2: usize,
    tol: &ToleranceProfile,
) -> Result<Vec<Matrix<S>>> {
    if dom.len() != cod.len() {
        return Err(Error::DimensionMismatch("domain and codomain have different acting algebras".into()));
    }
    if d1 == 0 || d2 == 0 {
        return Ok(Vec::new());
    }

    // Krylov basis u_0, u_1, ... of the domain.
    let mut ech = Echelon::new(tol);
    let mut u: Vec<Vec<S>> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let mut next = 0;
    let mut cursor = 0;
    let mut seeds = 0;
    while u.len() < d1 {
        if next < u.len() {
            for (a, m) in dom.iter().enumerate() {
                let w = m.mul_vec(&u[next])?;
                if ech.insert(&w) {
                    u.push(w);
                    origin.push(Origin::Child {
                        parent: next,
                        generator: a,
                    });
                }
            }
            next += 1;
        } else {
            while cursor < d1 {
                let e = vecops::unit(d1, cursor);
                cursor += 1;
                if ech.insert(&e) {
                    u.push(e);
                    origin.push(Origin::Seed(seeds));
                    seeds += 1;
                    break;
                }
            }
        }
    }
    let u_mat = Matrix::from_columns(&u, d1)?;
    let u_inv = S::inverse(&u_mat, tol).ok_or_else(|| Error::Contract("Krylov basis is singular".into()))?;

    // T(u_i) = L_i t, where t stacks the images of the seeds.
    let unknowns = seeds * d2;
    let mut ln: Vec<Matrix<S>> = Vec::with_capacity(d1);
    for o in &origin {
        let l = match o {
            Origin::Seed(s) => Matrix::from_fn(d2, unknowns, |r, c| if c == s * d2 + r { S::one() } else { S::zero() }),
            Origin::Child { parent, generator } => cod[*generator].mul(&ln[*parent])?,
        };
        ln.push(l);
    }
    let mut automatic = std::collections::HashSet::new();
    for o in &origin {
        if let Origin::Child { parent, generator } = o {
            automatic.insert((*parent, *generator));
        }
    }

    let mut width = unknowns;
    let mut pending: Vec<Vec<S>> = Vec::new();
    let conditions: Vec<(usize, usize)> = (0..d1)
        .flat_map(|i| (0..dom.len()).map(move |a| (i, a)))
        .filter(|p| !automatic.contains(p))
        .collect();
    let total = conditions.len();
    for (idx, &(i, a)) in conditions.iter().enumerate() {
        // T(rho_a u_i) - cod_a T(u_i), with rho_a u_i = sum_j beta_j u_j.
        let beta = u_inv.mul_vec(&dom[a].mul_vec(&u[i])?)?;
        let mut block = cod[a].mul(&ln[i])?.scale(&(-S::one()));
        for (j, b) in beta.iter().enumerate() {
            if !b.is_zero_abs(0.0) {
                block = block.add(&ln[j].scale(b))?;
            }
        }
        let scale = block.max_abs();
        for r in 0..block.rows() {
            let row = block.row(r);
            if row.iter().any(|x| !x.is_zero_rel(tol.residual_epsilon, scale)) {
                pending.push(row.to_vec());
            }
        }
        if !pending.is_empty() && (pending.len() >= width || idx + 1 == total) {
            let sys = Matrix::from_rows_with_cols(&pending, width)?;
            pending.clear();
            let coeffs = S::nullspace(&sys, tol);
            if coeffs.is_empty() {
                return Ok(Vec::new());
            }
            if coeffs.len() < width {
                let c = Matrix::from_columns(&coeffs, width)?;
                for l in ln.iter_mut() {
                    *l = l.mul(&c)?;
                }
                width = coeffs.len();
            }
        }
    }
    let mut out = Vec::with_capacity(width);
    for b in 0..width {
        let m = Matrix::from_fn(d2, d1, |r, i| ln[i].get(r, b).clone());
        let t = m.mul(&u_inv)?;
        for (dm, cm) in dom.iter().zip(cod) {
            let resid = cm.mul(&t)?.sub(&t.mul(dm)?)?;
            if !resid.is_zero(tol.residual_epsilon * t.max_abs().max(1.0)) {
                return Err(Error::Contract("computed intertwiner fails the commutation identity".into()));
            }
        }
        out.push(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};

    fn rot() -> Matrix<Rational> {
        Matrix::from_rows(&[vec![rat(0, 1), rat(-1, 1)], vec![rat(1, 1), rat(0, 1)]]).unwrap()
    }

    #[test]
    fn rotation_commutant_is_complex_numbers() {
        let tol = ToleranceProfile::default();
        let basis = hom_space(&[rot()], &[rot()], 2, 2, &tol).unwrap();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn opposite_rotations_are_isomorphic_but_trivial_is_not() {
        let tol = ToleranceProfile::default();
        let neg = rot().scale(&rat(-1, 1));
        assert_eq!(hom_space(&[rot()], &[neg], 2, 2, &tol).unwrap().len(), 2);
        let trivial = Matrix::<Rational>::zeros(1, 1);
        assert!(hom_space(&[rot()], &[trivial], 2, 1, &tol).unwrap().is_empty());
        let double = rot().scale(&rat(2, 1));
        assert!(hom_space(&[rot()], &[double], 2, 2, &tol).unwrap().is_empty());
    }

    #[test]
    fn no_generators_gives_all_maps() {
        let tol = ToleranceProfile::default();
        let basis: Vec<Matrix<Rational>> = hom_space(&[], &[], 2, 3, &tol).unwrap();
        assert_eq!(basis.len(), 6);
    }

    #[test]
    fn float_backend_agrees() {
        let tol = ToleranceProfile::default();
        let r = rot().to_f64();
        let dom = vec![r.clone()];
        assert_eq!(hom_space(&dom, &[r], 2, 2, &tol).unwrap().len(), 2);
    }
}
