//! Block-parameter metrics and their text format.
//!
//! ```text
//! # block-scalar so(6) metric on the (2,2,2) layout
//! block so1 scalar 1
//! block m12 scalar 4/3
//! centerblock t matrix 2 0 0 3
//! ```
//!
//! `centerblock` gives the Gram matrix of `<,>` on the named subspace's basis,
//! row-major; it must be symmetric positive definite.

use std::sync::Arc;

use crate::arith::{block_eigenspaces, format_rational_short, is_positive_definite, parse_rational, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::lie::{Algebra, EmbeddingLayout};
use crate::subspace::Subspace;

use super::operator::MetricOperator;

#[derive(Clone, Debug)]
pub struct ScalarBlock<S> {
    pub name: String,
    pub space: Subspace<S>,
    pub value: S,
}

#[derive(Clone, Debug)]
pub struct CenterBlock<S> {
    pub name: String,
    pub space: Subspace<S>,
    /// Gram matrix of the metric on the basis of `space`.
    pub gram: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct BlockSpec<S> {
    pub scalar_blocks: Vec<ScalarBlock<S>>,
    pub center_block: Option<CenterBlock<S>>,
}

impl<S: Scalar> BlockSpec<S> {
    pub fn scalars(blocks: Vec<(String, Subspace<S>, S)>) -> Self {
        BlockSpec {
            scalar_blocks: blocks
                .into_iter()
                .map(|(name, space, value)| ScalarBlock { name, space, value })
                .collect(),
            center_block: None,
        }
    }

    pub fn with_center(mut self, name: impl Into<String>, space: Subspace<S>, gram: Matrix<S>) -> Self {
        self.center_block = Some(CenterBlock {
            name: name.into(),
            space,
            gram,
        });
        self
    }

    fn ambient(&self) -> Option<&Arc<Algebra<S>>> {
        self.scalar_blocks
            .first()
            .map(|b| b.space.ambient())
            .or_else(|| self.center_block.as_ref().map(|c| c.space.ambient()))
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// One scalar per named piece of the layout, factors first and then the
/// off-diagonal blocks in lexicographic order.
pub fn layout_block_spec<S: Scalar>(layout: &EmbeddingLayout<S>, params: &[S]) -> Result<BlockSpec<S>> {
    let named = layout.named_subspaces();
    if named.len() != params.len() {
        return Err(Error::DimensionMismatch(format!(
            "layout has {} blocks, got {} parameters",
            named.len(),
            params.len()
        )));
    }
    Ok(BlockSpec::scalars(
        named
            .into_iter()
            .zip(params)
            .map(|((n, s), p)| (n, s, p.clone()))
            .collect(),
    ))
}

/// Parses the block format, resolving names against `named`.
pub fn parse_block_spec<S: Scalar>(source: &str, named: &[(String, Subspace<S>)]) -> Result<BlockSpec<S>> {
    let mut scalar_blocks = Vec::new();
    let mut center_block = None;
    for (ln, raw) in source.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut col = 0;
        for part in text.split(' ') {
            if !part.trim().is_empty() {
                tokens.push((col + 1 + (part.len() - part.trim_start().len()), part.trim()));
            }
            col += part.len() + 1;
        }
        let Some(&(_, keyword)) = tokens.first() else {
            continue;
        };
        let (name_col, name) = *tokens
            .get(1)
            .ok_or_else(|| parse_err(line, raw.len() + 1, "expected a subspace name"))?;
        let space = named
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| parse_err(line, name_col, format!("unknown subspace `{name}`")))?;
        let value_at = |i: usize| -> Result<S> {
            let (c, t) = *tokens
                .get(i)
                .ok_or_else(|| parse_err(line, raw.len() + 1, "expected a rational value"))?;
            let r = parse_rational(t).ok_or_else(|| parse_err(line, c, format!("invalid rational `{t}`")))?;
            Ok(S::from_rational(&r))
        };
        match keyword {
            "block" => {
                match tokens.get(2) {
                    Some((_, "scalar")) => {}
                    Some(&(c, t)) => return Err(parse_err(line, c, format!("expected `scalar`, found `{t}`"))),
                    None => return Err(parse_err(line, raw.len() + 1, "expected `scalar`")),
                }
                if tokens.len() > 4 {
                    return Err(parse_err(line, tokens[4].0, "trailing tokens"));
                }
                scalar_blocks.push(ScalarBlock {
                    name: name.to_string(),
                    space,
                    value: value_at(3)?,
                });
            }
            "centerblock" => {
                match tokens.get(2) {
                    Some((_, "matrix")) => {}
                    Some(&(c, t)) => return Err(parse_err(line, c, format!("expected `matrix`, found `{t}`"))),
                    None => return Err(parse_err(line, raw.len() + 1, "expected `matrix`")),
                }
                if center_block.is_some() {
                    return Err(parse_err(line, 1, "only one centerblock is allowed"));
                }
                let d = space.dim();
                if tokens.len() != 3 + d * d {
                    return Err(parse_err(
                        line,
                        tokens.last().map_or(1, |t| t.0),
                        format!("centerblock on a {d}-dimensional subspace needs {} entries", d * d),
                    ));
                }
                let entries = (0..d * d).map(|i| value_at(3 + i)).collect::<Result<Vec<S>>>()?;
                let gram = Matrix::from_fn(d, d, |i, j| entries[i * d + j].clone());
                center_block = Some(CenterBlock {
                    name: name.to_string(),
                    space,
                    gram,
                });
            }
            other => {
                return Err(parse_err(line, tokens[0].0, format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(BlockSpec {
        scalar_blocks,
        center_block,
    })
}

pub fn emit_block_spec<S: Scalar>(spec: &BlockSpec<S>) -> String {
    let mut out = String::new();
    for b in &spec.scalar_blocks {
        out.push_str(&format!("block {} scalar {}\n", b.name, format_rational_short(&b.value.to_rational())));
    }
    if let Some(c) = &spec.center_block {
        out.push_str(&format!("centerblock {} matrix", c.name));
        for v in c.gram.data() {
            out.push(' ');
            out.push_str(&format_rational_short(&v.to_rational()));
        }
        out.push('\n');
    }
    out
}

/// `Λ = value · Id` on each scalar block and `G_z^{-1} H` on the centre block.
pub fn metric_from_blocks<S: Scalar>(spec: &BlockSpec<S>) -> Result<MetricOperator<S>> {
    let alg = spec
        .ambient()
        .ok_or_else(|| Error::Contract("block specification is empty".into()))?
        .clone();
    let tol = *alg.tol();
    let n = alg.dim();
    let mut spaces: Vec<(&str, &Subspace<S>)> = spec.scalar_blocks.iter().map(|b| (b.name.as_str(), &b.space)).collect();
    if let Some(c) = &spec.center_block {
        spaces.push((c.name.as_str(), &c.space));
    }
    for b in &spec.scalar_blocks {
        if !b.value.is_positive(tol.rank_epsilon, 1.0) {
            return Err(Error::Contract(format!("block `{}` has non-positive parameter", b.name)));
        }
    }
    for (i, (ni, si)) in spaces.iter().enumerate() {
        if !Arc::ptr_eq(si.ambient(), &alg) {
            return Err(Error::Contract(format!("block `{ni}` lives in a different algebra")));
        }
        for (nj, sj) in spaces.iter().skip(i + 1) {
            if !si.is_orthogonal_to(sj) {
                return Err(Error::Contract(format!("blocks `{ni}` and `{nj}` overlap")));
            }
        }
    }
    let total: usize = spaces.iter().map(|(_, s)| s.dim()).sum();
    if total != n {
        return Err(Error::Contract(format!("blocks span dimension {total}, algebra has {n}")));
    }

    let mut cols: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut diag = Matrix::zeros(n, n);
    for b in &spec.scalar_blocks {
        for v in b.space.basis() {
            diag.set(cols.len(), cols.len(), b.value.clone());
            cols.push(v.clone());
        }
    }
    if let Some(c) = &spec.center_block {
        let d = c.space.dim();
        if c.gram.rows() != d || c.gram.cols() != d {
            return Err(Error::DimensionMismatch(format!("centre block `{}` needs a {d}x{d} matrix", c.name)));
        }
        if !c.gram.sub(&c.gram.transpose())?.is_zero(tol.residual_epsilon * c.gram.max_abs().max(1.0)) {
            return Err(Error::Contract(format!("centre block `{}` is not symmetric", c.name)));
        }
        if !is_positive_definite(&c.gram, &tol) {
            return Err(Error::Contract(format!("centre block `{}` is not positive definite", c.name)));
        }
        let gz_inv = S::inverse(&c.space.gram(), &tol).ok_or(Error::DegenerateForm("centre basis".into()))?;
        let l = gz_inv.mul(&c.gram)?;
        let off = cols.len();
        for i in 0..d {
            for j in 0..d {
                diag.set(off + i, off + j, l.get(i, j).clone());
            }
        }
        cols.extend(c.space.basis().iter().cloned());
    }
    let p = Matrix::from_columns(&cols, n)?;
    let p_inv = S::inverse(&p, &tol).ok_or_else(|| Error::Contract("blocks do not span the algebra".into()))?;
    let lambda = p.mul(&diag)?.mul(&p_inv)?;
    let op = MetricOperator::new(&alg, lambda)?;
    Ok(if spec.center_block.is_none() {
        let blocks: Vec<(S, Vec<Vec<S>>)> = spec
            .scalar_blocks
            .iter()
            .map(|b| (b.value.clone(), b.space.basis().to_vec()))
            .collect();
        op.with_blocks(block_eigenspaces(&blocks, &tol))
    } else {
        op
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};
    use crate::lie::embed_so_partition;
    use crate::testutil::so;

    fn params(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn equal_parameters_give_scalar() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric_from_blocks(&layout_block_spec(&l, &params(&[3; 6])).unwrap()).unwrap();
        assert_eq!(op.matrix(), &Matrix::scalar(15, rat(3, 1)));
    }

    #[test]
    fn distinct_parameters_give_block_spectrum() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric_from_blocks(&layout_block_spec(&l, &params(&[1, 2, 3, 4, 5, 6])).unwrap()).unwrap();
        let (spaces, complete) = op.eigenspaces();
        assert!(complete);
        let dims: Vec<(Rational, usize)> = spaces.iter().map(|e| (e.value.clone(), e.dim())).collect();
        assert_eq!(dims, (1..=6).map(|v| (rat(v, 1), if v <= 3 { 1 } else { 4 })).collect::<Vec<_>>());
        // The general solver sees the same spectrum.
        let general = crate::arith::symmetric_eigenspaces(op.matrix(), g.q(), g.tol()).unwrap();
        assert_eq!(general.iter().map(|e| e.dim()).collect::<Vec<_>>(), vec![1, 1, 1, 4, 4, 4]);
    }

    #[test]
    fn dazi_pattern_has_three_eigenvalues() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let op = metric_from_blocks(&layout_block_spec(&l, &params(&[2, 2, 7, 2, 5, 5])).unwrap()).unwrap();
        assert_eq!(op.eigenspaces().0.len(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let mut spec = layout_block_spec(&l, &params(&[1, 2, 3, 4, 5, 6])).unwrap();
        spec.scalar_blocks.pop();
        assert!(metric_from_blocks(&spec).is_err());
        let mut spec = layout_block_spec(&l, &params(&[1, 2, 3, 4, 5, 6])).unwrap();
        let dup = spec.scalar_blocks[0].clone();
        spec.scalar_blocks.push(dup);
        assert!(metric_from_blocks(&spec).is_err());
        assert!(metric_from_blocks(&layout_block_spec(&l, &params(&[1, 0, 3, 4, 5, 6])).unwrap()).is_err());
    }

    #[test]
    fn text_round_trip_with_centre() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let mut named = l.named_subspaces();
        named.push(("t".into(), l.k()));
        let src = "# torus with a free block\nblock m12 scalar 5\nblock m13 scalar 5/2\nblock m23 scalar 5\ncenterblock t matrix 16 8 0 8 16 0 0 0 24\n";
        let spec: BlockSpec<Rational> = parse_block_spec(src, &named).unwrap();
        let again: BlockSpec<Rational> = parse_block_spec(&emit_block_spec(&spec), &named).unwrap();
        let a = metric_from_blocks(&spec).unwrap();
        let b = metric_from_blocks(&again).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        // Q = 8 Id on so(6), so Λ|_t = H / 8.
        let t = l.k();
        let lt = a.restricted(&t).unwrap();
        assert_eq!(lt.get(0, 1), &rat(1, 1));
        assert_eq!(lt.get(2, 2), &rat(3, 1));
    }

    #[test]
    fn parse_errors_have_positions() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let named = l.named_subspaces();
        let err = parse_block_spec::<Rational>("block so1 scalar 1\nblock zz scalar 2\n", &named).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 7,
                message: "unknown subspace `zz`".into()
            }
        );
        let err = parse_block_spec::<Rational>("block so1 scalar x\n", &named).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 18, .. }));
        let err = parse_block_spec::<Rational>("blob so1 scalar 1\n", &named).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 1, .. }));
    }
}
