//! Isotypic decomposition of an `ad_h`-invariant subspace.
//!
//! Two routes are computed from the commutant of the action:
//!
//! * pieces: eigenspaces of Q-symmetric commutant elements, split
//!   recursively until each piece has only scalar symmetric commutant
//!   (hence is irreducible), then merged along nonzero intertwiners;
//! * components: eigenspaces of a generic Q-symmetric element of the centre
//!   of the commutant.
//!
//! When both routes resolve they must agree. In exact arithmetic a generic
//! symmetric element can have irrational eigenvalues (repeated summands of
//! complex or quaternionic type); the recursion then falls back to single
//! commutant basis elements, and pieces it cannot split are reported as
//! "not split by this procedure".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hom::hom_space;
use super::restriction::AdRestriction;
use crate::arith::{common_nullspace, symmetric_eigenspaces_partial, vecops, Matrix, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Generic samples tried per split before falling back to basis elements.
const ATTEMPTS: usize = 3;
/// Random coefficients are drawn from `-COEFF..=COEFF`.
const COEFF: i64 = 997;

#[derive(Clone, Debug)]
pub struct IsotypicComponent<S> {
    pub space: Subspace<S>,
    /// Invariant pieces found inside the component.
    pub pieces: Vec<Subspace<S>>,
    /// Per piece: its Q-symmetric commutant is the scalars, so it is
    /// irreducible.
    pub certified_irreducible: Vec<bool>,
}

impl<S> IsotypicComponent<S> {
    /// Number of irreducible summands, when every piece is certified.
    pub fn irreducible_count(&self) -> Option<usize> {
        self.certified_irreducible
            .iter()
            .all(|&c| c)
            .then_some(self.pieces.len())
    }

    pub fn label(&self) -> &'static str {
        if self.irreducible_count().is_some() {
            "irreducible"
        } else {
            "not split by this procedure"
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition<S> {
    pub components: Vec<IsotypicComponent<S>>,
    /// False when part of the space could not be separated exactly; that part
    /// is then returned as a single component.
    pub resolved: bool,
}

impl<S: Scalar> IsotypicDecomposition<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.space.dim()).collect()
    }
}

/// An invariant block in the coordinates of the subspace being decomposed.
struct Block<S> {
    gram: Matrix<S>,
    gram_inv: Matrix<S>,
    actions: Vec<Matrix<S>>,
}

impl<S: Scalar> Block<S> {
    fn new(gram: Matrix<S>, actions: Vec<Matrix<S>>, tol: &ToleranceProfile) -> Result<Self> {
        let gram_inv = S::inverse(&gram, tol).ok_or_else(|| Error::DegenerateForm("Gram matrix is singular".into()))?;
        Ok(Block {
            gram,
            gram_inv,
            actions,
        })
    }

    fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// `T + G^{-1} T^T G`.
    fn symmetrized(&self, t: &Matrix<S>) -> Matrix<S> {
        let adj = self
            .gram_inv
            .mul(&t.transpose())
            .and_then(|m| m.mul(&self.gram))
            .expect("shapes");
        t.add(&adj).expect("shapes")
    }

    /// The block restricted to the span of the columns of `p`, which must be
    /// invariant.
    fn restrict(&self, p: &Matrix<S>, tol: &ToleranceProfile) -> Result<Block<S>> {
        let pt_g = p.transpose().mul(&self.gram)?;
        let sub_gram = pt_g.mul(p)?;
        let inv = S::inverse(&sub_gram, tol).ok_or_else(|| Error::DegenerateForm("Gram matrix is singular".into()))?;
        let left = inv.mul(&pt_g)?;
        let actions = self
            .actions
            .iter()
            .map(|a| left.mul(&a.mul(p)?))
            .collect::<Result<Vec<_>>>()?;
        Block::new(sub_gram, actions, tol)
    }

    /// Linearly independent Q-symmetric commutant elements.
    fn symmetric_commutant(&self, tol: &ToleranceProfile) -> Result<Vec<Matrix<S>>> {
        let d = self.dim();
        let comm = hom_space(&self.actions, &self.actions, d, d, tol)?;
        let flat: Vec<Vec<S>> = comm.iter().map(|t| self.symmetrized(t).data().to_vec()).collect();
        Ok(S::row_basis(&flat, d * d, tol)
            .into_iter()
            .map(|r| Matrix::from_rows_with_cols(&r.chunks(d).map(|c| c.to_vec()).collect::<Vec<_>>(), d).expect("square"))
            .collect())
    }
}

fn random_combination<S: Scalar>(rng: &mut ChaCha8Rng, mats: &[Matrix<S>], n: usize) -> Matrix<S> {
    let mut out = Matrix::zeros(n, n);
    for m in mats {
        let c: i64 = rng.gen_range(-COEFF..=COEFF);
        if c != 0 {
            out = out.add(&m.scale(&S::from_i64(c))).expect("shapes");
        }
    }
    out
}

fn columns<S: Scalar>(vs: &[Vec<S>], d: usize) -> Matrix<S> {
    Matrix::from_columns(vs, d).expect("uniform")
}

/// `true` iff the spans of `a` and `b` coincide.
fn same_span<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], tol: &ToleranceProfile) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut rows = a.to_vec();
    rows.extend(b.iter().cloned());
    let cols = a.first().map_or(0, |v| v.len());
    S::row_basis(&rows, cols, tol).len() == a.len()
}

/// `a ⊆ span(b)`.
fn inside<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], tol: &ToleranceProfile) -> bool {
    let mut rows = b.to_vec();
    rows.extend(a.iter().cloned());
    let cols = b.first().map_or(0, |v| v.len());
    S::row_basis(&rows, cols, tol).len() == b.len()
}

/// A leaf of the recursive split: basis in the top-level coordinates.
struct Piece<S> {
    basis: Vec<Vec<S>>,
    block: Block<S>,
    certified: bool,
}

fn split_pieces<S: Scalar>(
    top: &Block<S>,
    basis: Vec<Vec<S>>,
    rng: &mut ChaCha8Rng,
    tol: &ToleranceProfile,
    out: &mut Vec<Piece<S>>,
) -> Result<()> {
    let d = top.dim();
    let p = columns(&basis, d);
    let block = top.restrict(&p, tol)?;
    let sym = block.symmetric_commutant(tol)?;
    if sym.len() <= 1 {
        out.push(Piece {
            basis,
            block,
            certified: true,
        });
        return Ok(());
    }
    let n = block.dim();
    let candidates = (0..ATTEMPTS)
        .map(|_| random_combination(rng, &sym, n))
        .collect::<Vec<_>>()
        .into_iter()
        .chain(sym.iter().cloned());
    for c in candidates {
        let (spaces, complete) = symmetric_eigenspaces_partial(&c, &block.gram, tol)?;
        if !complete || spaces.len() < 2 {
            continue;
        }
        for e in spaces {
            // Back to top-level coordinates.
            let sub: Vec<Vec<S>> = e.basis.iter().map(|v| p.mul_vec(v).expect("length")).collect();
            split_pieces(top, sub, rng, tol, out)?;
        }
        return Ok(());
    }
    out.push(Piece {
        basis,
        block,
        certified: false,
    });
    Ok(())
}

/// Components from the centre of the commutant, with a completeness flag.
fn central_components<S: Scalar>(
    top: &Block<S>,
    commutant: &[Matrix<S>],
    rng: &mut ChaCha8Rng,
    tol: &ToleranceProfile,
) -> Result<(Vec<Vec<Vec<S>>>, bool)> {
    let d = top.dim();
    let nu = commutant.len();
    let blocks = commutant.iter().map(|tc| {
        let cols: Vec<Vec<S>> = commutant
            .iter()
            .map(|tb| tb.commutator(tc).expect("shapes").data().to_vec())
            .collect();
        Matrix::from_columns(&cols, d * d).expect("uniform")
    });
    let central: Vec<Matrix<S>> = common_nullspace(nu, blocks, tol)
        .iter()
        .map(|z| {
            let mut m = Matrix::zeros(d, d);
            for (c, t) in z.iter().zip(commutant) {
                m = m.add(&t.scale(c)).expect("shapes");
            }
            top.symmetrized(&m)
        })
        .collect();
    let mut best: Vec<Vec<Vec<S>>> = Vec::new();
    for _ in 0..ATTEMPTS {
        let c = random_combination(rng, &central, d);
        let (spaces, complete) = symmetric_eigenspaces_partial(&c, &top.gram, tol)?;
        let bases: Vec<Vec<Vec<S>>> = spaces.into_iter().map(|e| e.basis).collect();
        // Every central element must be scalar on every eigenspace, otherwise
        // two components collided.
        let separated = bases.iter().all(|b| {
            let p = columns(b, d);
            central.iter().all(|z| {
                let img: Vec<Vec<S>> = b.iter().map(|v| z.mul_vec(v).expect("length")).collect();
                img.iter().zip(b).all(|(zv, v)| {
                    // zv must be a multiple of v with the same factor as b[0].
                    let _ = &p;
                    let lam = ratio(&img[0], &b[0]);
                    let diff = vecops::sub(zv, &vecops::scale(v, &lam));
                    vecops::max_abs(&diff) <= tol.residual_epsilon * z.max_abs().max(1.0)
                        || S::BACKEND == crate::arith::Backend::Exact && vecops::is_zero(&diff, 0.0)
                })
            })
        });
        if complete && separated {
            return Ok((bases, true));
        }
        let covered: usize = bases.iter().map(|b| b.len()).sum();
        if separated && covered > best.iter().map(|b| b.len()).sum::<usize>() {
            best = bases;
        }
    }
    Ok((best, false))
}

/// `lam` with `w = lam v`, read off the largest entry of `v`.
fn ratio<S: Scalar>(w: &[S], v: &[S]) -> S {
    let (i, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, x)| if x.magnitude() > acc.1 { (i, x.magnitude()) } else { acc });
    w[i].clone() / v[i].clone()
}

/// Q-orthogonal complement of the span of `vs` in block coordinates.
fn complement<S: Scalar>(block: &Block<S>, vs: &[Vec<S>], tol: &ToleranceProfile) -> Vec<Vec<S>> {
    let d = block.dim();
    if vs.is_empty() {
        return (0..d).map(|i| vecops::unit(d, i)).collect();
    }
    let rows: Vec<Vec<S>> = vs.iter().map(|v| block.gram.mul_vec(v).expect("length")).collect();
    S::nullspace(&Matrix::from_rows_with_cols(&rows, d).expect("uniform"), tol)
}

pub fn isotypic_decomposition<S: Scalar>(
    h: &Subspace<S>,
    v: &Subspace<S>,
    seed: u64,
) -> Result<IsotypicDecomposition<S>> {
    let tol = *v.ambient().tol();
    let d = v.dim();
    if d == 0 {
        return Ok(IsotypicDecomposition {
            components: Vec::new(),
            resolved: true,
        });
    }
    let rho = AdRestriction::new(h, v)?;
    let top = Block::new(v.gram(), rho.actions().to_vec(), &tol)?;
    let commutant = hom_space(&top.actions, &top.actions, d, d, &tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (central, complete_b) = central_components(&top, &commutant, &mut rng, &tol)?;

    let mut pieces = Vec::new();
    let all: Vec<Vec<S>> = (0..d).map(|i| vecops::unit(d, i)).collect();
    split_pieces(&top, all, &mut rng, &tol, &mut pieces)?;
    let complete_a = pieces.iter().all(|p| p.certified);

    // Component bases with the indices of the pieces they contain.
    let mut comps: Vec<(Vec<Vec<S>>, Vec<usize>)> = Vec::new();
    if complete_a {
        let mut parent: Vec<usize> = (0..pieces.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri == rj {
                    continue;
                }
                let (a, b) = (&pieces[i].block, &pieces[j].block);
                if !hom_space(&a.actions, &b.actions, a.dim(), b.dim(), &tol)?.is_empty() {
                    parent[rj] = ri;
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..pieces.len() {
            let r = find(&mut parent, i);
            match roots.iter().position(|&x| x == r) {
                Some(k) => {
                    comps[k].0.extend(pieces[i].basis.iter().cloned());
                    comps[k].1.push(i);
                }
                None => {
                    roots.push(r);
                    comps.push((pieces[i].basis.clone(), vec![i]));
                }
            }
        }
        if complete_b {
            let agree = comps.len() == central.len()
                && comps
                    .iter()
                    .all(|(basis, _)| central.iter().any(|b| same_span(b, basis, &tol)));
            if !agree {
                return Err(Error::Contract(
                    "isotypic components from piece merging and from the commutant centre disagree".into(),
                ));
            }
        }
    } else {
        let mut bases = central.clone();
        let found: Vec<Vec<S>> = bases.iter().flatten().cloned().collect();
        if found.len() < d {
            bases.push(complement(&top, &found, &tol));
        }
        for b in bases {
            let idx: Vec<usize> = (0..pieces.len())
                .filter(|&i| inside(&pieces[i].basis, &b, &tol))
                .collect();
            comps.push((b, idx));
        }
    }

    let mut components = Vec::with_capacity(comps.len());
    for (basis, idx) in comps {
        let covered: usize = idx.iter().map(|&i| pieces[i].basis.len()).sum();
        let (comp_pieces, certified) = if covered == basis.len() {
            (
                idx.iter().map(|&i| to_subspace(v, &pieces[i].basis)).collect(),
                idx.iter().map(|&i| pieces[i].certified).collect(),
            )
        } else {
            (vec![to_subspace(v, &basis)], vec![false])
        };
        components.push(IsotypicComponent {
            space: to_subspace(v, &basis),
            pieces: comp_pieces,
            certified_irreducible: certified,
        });
    }
    Ok(IsotypicDecomposition {
        components,
        resolved: complete_a || complete_b,
    })
}

fn to_subspace<S: Scalar>(v: &Subspace<S>, coords: &[Vec<S>]) -> Subspace<S> {
    let vecs: Vec<Vec<S>> = coords.iter().map(|c| v.vector(c)).collect();
    Subspace::span(v.ambient(), &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::embed_so_partition;
    use crate::rep::intertwiner_space;
    use crate::testutil::{so, so_f64};

    #[test]
    fn adjoint_so3_is_one_component() {
        let g = so(3);
        let w = Subspace::whole(&g);
        let dec = isotypic_decomposition(&w, &w, 1).unwrap();
        assert!(dec.resolved);
        assert_eq!(dec.dims(), vec![3]);
        assert_eq!(dec.components[0].irreducible_count(), Some(1));
    }

    #[test]
    fn torus_on_so6_complement() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let dec = isotypic_decomposition(&l.k(), &l.m(), 2).unwrap();
        assert!(dec.resolved);
        assert_eq!(dec.dims(), vec![2; 6]);
        for c in &dec.components {
            assert_eq!(c.irreducible_count(), Some(1));
        }
        // Each m_ij holds exactly two components.
        for (_, _, b) in &l.offdiag_blocks {
            let inside = dec.components.iter().filter(|c| b.contains_subspace(&c.space)).count();
            assert_eq!(inside, 2);
        }
    }

    #[test]
    fn so3_cubed_on_so9_complement() {
        let g = so(9);
        let l = embed_so_partition(&g, 9, &[3, 3, 3]).unwrap();
        let k = l.k();
        let dec = isotypic_decomposition(&k, &l.m(), 3).unwrap();
        assert_eq!(dec.dims(), vec![9, 9, 9]);
        for c in &dec.components {
            assert!(l.offdiag_blocks.iter().any(|(_, _, b)| b.same_span(&c.space)));
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let a = &dec.components[i].space;
                let b = &dec.components[j].space;
                assert_eq!(intertwiner_space(&k, a, b).unwrap().dim(), 0);
            }
        }
    }

    #[test]
    fn repeated_summand_stays_in_one_component() {
        // so(2) on so(4) = so(2) ⊕ so(2)' ⊕ m with m = two copies of the rotation.
        let g = so(4);
        let l = embed_so_partition(&g, 4, &[2, 1, 1]).unwrap();
        let k = l.factor_subspaces[0].1.clone();
        let v = k.orthogonal_complement();
        let dec = isotypic_decomposition(&k, &v, 4).unwrap();
        let mut dims = dec.dims();
        dims.sort();
        // Trivial part: A_34. Rotation part: four-dimensional, two copies.
        assert_eq!(dims, vec![1, 4]);
        let rot = dec.components.iter().find(|c| c.space.dim() == 4).unwrap();
        assert_eq!(rot.irreducible_count(), Some(2));
    }

    #[test]
    fn float_backend_matches() {
        let g = so_f64(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let dec = isotypic_decomposition(&l.k(), &l.m(), 2).unwrap();
        assert_eq!(dec.dims(), vec![2; 6]);
    }
}
