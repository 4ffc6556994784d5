//! LR pairs: detection of the unique decomposition lowered by `A` and raised
//! by `B`, the parameter sequence, and `(A, B)`-bases.

use serde::Serialize;

use crate::decomp::{action_check, make_decomposition, Action, Decomposition};
use crate::error::{Error, PairFailure, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::{eigenvalue_on_line, line_image, normalize, Line, Matrix};

/// An LR pair with its decomposition and parameter sequence `φ_1, …, φ_d`
/// (stored 0-based: `phi[i - 1]` is `φ_i`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrPair {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
    pub decomposition: Decomposition,
    pub phi: Vec<Fp>,
}

impl LrPair {
    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn d(&self) -> usize {
        self.decomposition.d()
    }

    /// `φ_i` for `1 <= i <= d`.
    pub fn phi(&self, i: usize) -> Fp {
        self.phi[i - 1]
    }
}

pub(crate) fn check_square_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().p(), b.field().p()));
    }
    if !a.is_square() || !b.is_square() || a.n_rows() != b.n_rows() {
        return Err(Error::ShapeMismatch("LR maps must be square of equal size".into()));
    }
    Ok(())
}

/// Detects whether `(A, B)` is an LR pair, seeding from `V_d = Ker B` and
/// lowering with `A`.
pub fn find_lr_decomposition(a: &Matrix, b: &Matrix) -> Result<LrPair> {
    check_square_pair(a, b)?;
    let n = a.n_rows();
    let d = n - 1;
    let top = b.kernel().as_line().ok_or(Error::NotLrPair(PairFailure::KernelDimension))?;
    let mut lines = vec![top];
    for _ in 0..d {
        let next = line_image(a, lines.last().expect("nonempty"))
            .ok_or(Error::NotLrPair(PairFailure::ImageCollapse))?;
        lines.push(next);
    }
    lines.reverse();
    let decomposition =
        make_decomposition(lines).map_err(|_| Error::NotLrPair(PairFailure::NotDirectSum))?;
    if !action_check(a, &decomposition, Action::Lowers) {
        return Err(Error::NotLrPair(PairFailure::LoweringFails));
    }
    if !action_check(b, &decomposition, Action::Raises) {
        return Err(Error::NotLrPair(PairFailure::RaisingFails));
    }
    let ba = b * a;
    let phi = (1..=d)
        .map(|i| eigenvalue_on_line(&ba, decomposition.line(i)))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::InternalContradiction("BA does not preserve V_i".into()))?;
    if phi.iter().any(Fp::is_zero) {
        return Err(Error::InternalContradiction("zero parameter in an LR pair".into()));
    }
    Ok(LrPair { a: a.clone(), b: b.clone(), decomposition, phi })
}

/// A basis `v_0, …, v_d` with `v_i ∈ V_i` and `X v_i = v_{i-1}`, anchored by
/// taking `v_d` to be the normalized spanning vector of `V_d`.
pub fn standard_basis(x: &Matrix, dec: &Decomposition) -> Result<Vec<Vec<u64>>> {
    if !action_check(x, dec, Action::Lowers) {
        return Err(Error::NotLowering);
    }
    let d = dec.d();
    let mut basis = vec![dec.line(d).span().to_vec()];
    for _ in 0..d {
        let next = x.apply(basis.last().expect("nonempty"))?;
        basis.push(next);
    }
    basis.reverse();
    Ok(basis)
}

/// Rescales the whole basis by the unique `λ` with `λ · basis[0] = anchor`.
pub fn rebase_to_anchor(
    field: PrimeField,
    basis: &[Vec<u64>],
    anchor: &[u64],
) -> Result<Vec<Vec<u64>>> {
    let first = basis.first().ok_or(Error::NotABasis)?;
    let line = Line::new(field, first).map_err(|_| Error::NotABasis)?;
    if !line.contains(anchor) || normalize(field, anchor).is_none() {
        return Err(Error::AnchorMismatch);
    }
    let pivot = first.iter().position(|&x| x != 0).expect("nonzero");
    let lambda = field.mul(anchor[pivot], field.inv(first[pivot])?);
    Ok(basis.iter().map(|v| v.iter().map(|&x| field.mul(lambda, x)).collect()).collect())
}

/// Which side of the pair lowers the basis being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `A v_i = v_{i-1}` and `B v_i = φ_{i+1} v_{i+1}`.
    AB,
    /// `B v'_i = v'_{i-1}` and `A v'_i = φ_{d-i} v'_{i+1}`.
    BA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisActionReport {
    pub kind: BasisKind,
    pub formulas_checked: usize,
}

/// Checks the action of both maps of the pair on an `(A,B)`- or `(B,A)`-basis.
pub fn pair_basis_action(
    pair: &LrPair,
    basis: &[Vec<u64>],
    kind: BasisKind,
) -> Result<BasisActionReport> {
    let d = pair.d();
    let f = pair.field();
    if basis.len() != d + 1 {
        return Err(Error::NotABasis);
    }
    let (lowering, other) = match kind {
        BasisKind::AB => (&pair.a, &pair.b),
        BasisKind::BA => (&pair.b, &pair.a),
    };
    let zero = vec![0; d + 1];
    let scaled = |c: Fp, v: &[u64]| -> Vec<u64> { v.iter().map(|&x| f.mul(c.value(), x)).collect() };
    let mut checked = 0;
    for i in 0..=d {
        // The coefficient multiplying v_{d+1} = 0 is never evaluated.
        let expected_other = if i == d {
            zero.clone()
        } else {
            let coeff = match kind {
                BasisKind::AB => pair.phi(i + 1),
                BasisKind::BA => pair.phi(d - i),
            };
            scaled(coeff, &basis[i + 1])
        };
        if other.apply(&basis[i])? != expected_other {
            return Err(Error::FormulaViolated(i));
        }
        let expected_lower = if i == 0 { zero.clone() } else { basis[i - 1].clone() };
        if lowering.apply(&basis[i])? != expected_lower {
            return Err(Error::FormulaViolated(i));
        }
        checked += 2;
    }
    Ok(BasisActionReport { kind, formulas_checked: checked })
}

/// The map sending `basis[i]` to `images[i]`.
pub fn map_from_images(field: PrimeField, basis: &[Vec<u64>], images: &[Vec<u64>]) -> Result<Matrix> {
    let p = Matrix::from_columns(field, basis)?;
    let q = Matrix::from_columns(field, images)?;
    let p_inv = p.inverse().map_err(|_| Error::NotABasis)?;
    q.mat_mul(&p_inv)
}

/// The raising map of an LR pair rebuilt from an `(A,B)`-basis and `φ`
/// through `B v_i = φ_{i+1} v_{i+1}`.
pub fn raising_map_from_basis(field: PrimeField, basis: &[Vec<u64>], phi: &[Fp]) -> Result<Matrix> {
    let d = basis.len() - 1;
    let images: Vec<Vec<u64>> = (0..=d)
        .map(|i| {
            if i == d {
                vec![0; d + 1]
            } else {
                basis[i + 1].iter().map(|&x| field.mul(phi[i].value(), x)).collect()
            }
        })
        .collect();
    map_from_images(field, basis, &images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::Decomposition;

    fn gf7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn m7(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(gf7(), rows).unwrap()
    }

    #[test]
    fn detection_examples() {
        let f = gf7();
        let z = Matrix::zeros(f, 1, 1);
        let pair = find_lr_decomposition(&z, &z).unwrap();
        assert_eq!(pair.decomposition, Decomposition::standard(f, 0));
        assert!(pair.phi.is_empty());

        let a = m7(&[vec![0, 1], vec![0, 0]]);
        let b = m7(&[vec![0, 0], vec![3, 0]]);
        let pair = find_lr_decomposition(&a, &b).unwrap();
        assert_eq!(pair.decomposition, Decomposition::standard(f, 1));
        assert_eq!(pair.phi, vec![f.elem(3)]);

        assert_eq!(
            find_lr_decomposition(&a, &Matrix::zeros(f, 2, 2)),
            Err(Error::NotLrPair(PairFailure::KernelDimension))
        );
    }

    #[test]
    fn detection_failure_reasons() {
        let f = gf7();
        let b = m7(&[vec![0, 0], vec![3, 0]]);
        assert_eq!(
            find_lr_decomposition(&Matrix::zeros(f, 2, 2), &b),
            Err(Error::NotLrPair(PairFailure::ImageCollapse))
        );
        // A maps Ker B = (e1) to itself.
        assert_eq!(
            find_lr_decomposition(&Matrix::identity(f, 2), &b),
            Err(Error::NotLrPair(PairFailure::NotDirectSum))
        );
        // A e1 = e0 but A e0 = e0, so A does not kill V_0.
        assert_eq!(
            find_lr_decomposition(&m7(&[vec![1, 1], vec![0, 0]]), &b),
            Err(Error::NotLrPair(PairFailure::LoweringFails))
        );
        // Ker B = (e1), A lowers, but B e0 = e0 + e1 is not in (e1).
        assert_eq!(
            find_lr_decomposition(&m7(&[vec![0, 1], vec![0, 0]]), &m7(&[vec![1, 0], vec![1, 0]])),
            Err(Error::NotLrPair(PairFailure::RaisingFails))
        );
        assert!(matches!(
            find_lr_decomposition(&Matrix::zeros(f, 2, 2), &Matrix::zeros(f, 3, 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn standard_basis_examples() {
        let f = gf7();
        let a = m7(&[vec![0, 1], vec![0, 0]]);
        let std1 = Decomposition::standard(f, 1);
        assert_eq!(standard_basis(&a, &std1).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(
            standard_basis(&Matrix::zeros(f, 1, 1), &Decomposition::standard(f, 0)).unwrap(),
            vec![vec![1]]
        );
        let a2 = m7(&[vec![0, 2], vec![0, 0]]);
        assert_eq!(standard_basis(&a2, &std1).unwrap(), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(standard_basis(&Matrix::identity(f, 2), &std1), Err(Error::NotLowering));
    }

    #[test]
    fn rebase_examples() {
        let f = gf7();
        let basis = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(rebase_to_anchor(f, &basis, &[2, 0]).unwrap(), basis);
        assert_eq!(rebase_to_anchor(f, &basis, &[1, 0]).unwrap(), vec![vec![1, 0], vec![0, 4]]);
        let e = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rebase_to_anchor(f, &e, &[0, 1]), Err(Error::AnchorMismatch));
        assert_eq!(rebase_to_anchor(f, &e, &[0, 0]), Err(Error::AnchorMismatch));
    }

    #[test]
    fn basis_action_examples() {
        let f = gf7();
        let z = Matrix::zeros(f, 1, 1);
        let pair0 = find_lr_decomposition(&z, &z).unwrap();
        assert!(pair_basis_action(&pair0, &[vec![1]], BasisKind::AB).is_ok());

        let a = m7(&[vec![0, 1], vec![0, 0]]);
        let b = m7(&[vec![0, 0], vec![3, 0]]);
        let pair = find_lr_decomposition(&a, &b).unwrap();
        let report = pair_basis_action(&pair, &[vec![1, 0], vec![0, 1]], BasisKind::AB).unwrap();
        assert_eq!(report.formulas_checked, 4);
        assert_eq!(
            pair_basis_action(&pair, &[vec![1, 0], vec![0, 2]], BasisKind::AB),
            Err(Error::FormulaViolated(0))
        );
        // (B,A)-basis: B v'_i = v'_{i-1}; v'_0 = 3e1, v'_1 = e0.
        let ba_basis = vec![vec![0, 3], vec![1, 0]];
        assert!(pair_basis_action(&pair, &ba_basis, BasisKind::BA).is_ok());
    }

    #[test]
    fn raising_map_rebuild() {
        let f = gf7();
        let a = m7(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        let b = m7(&[vec![0, 0, 0], vec![5, 0, 0], vec![0, 2, 0]]);
        let pair = find_lr_decomposition(&a, &b).unwrap();
        let basis = standard_basis(&a, &pair.decomposition).unwrap();
        assert_eq!(raising_map_from_basis(f, &basis, &pair.phi).unwrap(), b);
    }
}
