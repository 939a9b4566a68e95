use crate::subspace::Subspace;
use crate::arith::{Matrix, Scalar};
use crate::error::{Error, Result};

/// The action of a subalgebra `h` on an `ad_h`-invariant subspace `V`, as
/// matrices in the basis of `V` (column `l` holds the coordinates of
/// `[h_a, v_l]`).
#[derive(Clone, Debug)]
pub struct AdRestriction<S> {
    acting: Subspace<S>,
    space: Subspace<S>,
    actions: Vec<Matrix<S>>,
}

impl<S: Scalar> AdRestriction<S> {
    pub fn new(acting: &Subspace<S>, space: &Subspace<S>) -> Result<Self> {
        let alg = space.ambient();
        let d = space.dim();
        let mut actions = Vec::with_capacity(acting.dim());
        for (a, x) in acting.basis().iter().enumerate() {
            let mut m = Matrix::zeros(d, d);
            for (l, v) in space.basis().iter().enumerate() {
                let w = alg.bracket(x, v);
                if !space.contains(&w) {
                    return Err(Error::NotInvariant {
                        acting: a + 1,
                        vector: l + 1,
                    });
                }
                for (r, c) in space.coordinates(&w).into_iter().enumerate() {
                    m.set(r, l, c);
                }
            }
            actions.push(m);
        }
        Ok(AdRestriction {
            acting: acting.clone(),
            space: space.clone(),
            actions,
        })
    }

    pub fn acting(&self) -> &Subspace<S> {
        &self.acting
    }

    pub fn space(&self) -> &Subspace<S> {
        &self.space
    }

    pub fn actions(&self) -> &[Matrix<S>] {
        &self.actions
    }

    /// First pair `(a, b)` of acting basis indices where
    /// `action([h_a, h_b]) != [action(h_a), action(h_b)]`. Requires `h` to be
    /// a subalgebra.
    pub fn homomorphism_violation(&self) -> Option<(usize, usize)> {
        let alg = self.space.ambient();
        let eps = alg.tol().residual_epsilon;
        let h = self.acting.basis();
        for a in 0..h.len() {
            for b in a + 1..h.len() {
                let coords = self.acting.coordinates(&alg.bracket(&h[a], &h[b]));
                let d = self.space.dim();
                let mut lhs = Matrix::zeros(d, d);
                for (c, m) in coords.iter().zip(&self.actions) {
                    lhs = lhs.add(&m.scale(c)).expect("shapes");
                }
                let rhs = self.actions[a].commutator(&self.actions[b]).expect("shapes");
                if !lhs.sub(&rhs).expect("shapes").is_zero(eps) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}
