use crate::decomp::Decomposition;
use crate::error::{Error, PairLabel, Precondition, Result};
use crate::linalg::Matrix;
use crate::lrpair::{find_lr_decomposition, map_from_images, standard_basis};
use crate::toeplitz::anti_diagonal_transpose;

use super::{condition_check, verify_triple, Condition, TripleCertificate};

/// A constructed third map together with the certificate of the triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub c: Matrix,
    pub certificate: TripleCertificate,
}

fn contradiction(what: &str) -> Error {
    Error::InternalContradiction(format!("extension: {what}"))
}

/// `[C]` in the `(A,B)`-basis equals the anti-diagonal transpose of `[B]` in
/// the `(A,C)`-basis.
pub fn anti_diagonal_relation_holds(
    b: &Matrix,
    c: &Matrix,
    basis_ab: &[Vec<u64>],
    basis_ac: &[Vec<u64>],
) -> Result<bool> {
    let c_natural = c.in_basis(basis_ab)?;
    let b_flat = b.in_basis(basis_ac)?;
    Ok(c_natural == anti_diagonal_transpose(&b_flat))
}

/// Extends the LR pair `(A, B)` to an LR triple whose `(A,C)`-decomposition
/// is `vprime`, via `C v'_i = φ_{d-i} v'_{i+1}` on an `(A,·)`-basis of `vprime`.
pub fn extend_pair(a: &Matrix, b: &Matrix, vprime: &Decomposition) -> Result<Extension> {
    let pair = find_lr_decomposition(a, b).map_err(|e| match e {
        Error::NotLrPair(r) => Error::PreconditionFailed(Precondition::NotLrPair(r)),
        Error::ShapeMismatch(_) | Error::FieldMismatch(..) => {
            Error::PreconditionFailed(Precondition::Shape)
        }
        other => other,
    })?;
    let d = pair.d();
    if vprime.d() != d || vprime.field() != pair.field() {
        return Err(Error::PreconditionFailed(Precondition::Shape));
    }
    if !condition_check(a, b, vprime, Condition::I) {
        return Err(Error::PreconditionFailed(Precondition::ConditionI));
    }
    let f = pair.field();
    let basis = standard_basis(a, vprime)?;
    if !(0..=d).all(|i| vprime.line(i).contains(&basis[i])) {
        return Err(contradiction("lowered basis left its lines"));
    }
    let images: Vec<Vec<u64>> = (0..=d)
        .map(|i| {
            if i == d {
                vec![0; d + 1]
            } else {
                let coeff = pair.phi(d - i).value();
                basis[i + 1].iter().map(|&x| f.mul(coeff, x)).collect()
            }
        })
        .collect();
    let c = map_from_images(f, &basis, &images)?;

    let certificate = verify_triple(a, b, &c)
        .map_err(|e| contradiction(&format!("constructed map does not give an LR triple: {e}")))?;
    if certificate.decomposition(PairLabel::AC) != vprime {
        return Err(contradiction("(A,C)-decomposition differs from the input"));
    }
    if certificate.phi2() != certificate.phi() {
        return Err(contradiction("(C,A) parameter sequence differs from (A,B)"));
    }
    let basis_ab = standard_basis(a, &pair.decomposition)?;
    if !anti_diagonal_relation_holds(b, &c, &basis_ab, &basis)? {
        return Err(contradiction("anti-diagonal transpose identity fails"));
    }
    Ok(Extension { c, certificate })
}

/// Extends `(A, B)` so that `vdoubleprime` becomes the `(B,C)`-decomposition,
/// by running [`extend_pair`] with the roles of `A` and `B` exchanged.
pub fn extend_pair_ii(a: &Matrix, b: &Matrix, vdoubleprime: &Decomposition) -> Result<Extension> {
    if !condition_check(a, b, vdoubleprime, Condition::II) {
        let shape_ok = a.is_square() && a.n_rows() == vdoubleprime.d() + 1;
        return Err(Error::PreconditionFailed(if shape_ok {
            Precondition::ConditionII
        } else {
            Precondition::Shape
        }));
    }
    let swapped = extend_pair(b, a, vdoubleprime)?;
    let certificate = verify_triple(a, b, &swapped.c)
        .map_err(|e| contradiction(&format!("swapped construction is not an LR triple: {e}")))?;
    if certificate.decomposition(PairLabel::BC) != vdoubleprime {
        return Err(contradiction("(B,C)-decomposition differs from the input"));
    }
    Ok(Extension { c: swapped.c, certificate })
}

/// A third map whose `(A,C)`- and `(B,C)`-decompositions are `vprime` and
/// `vdoubleprime` respectively.
pub fn joint_extension(
    a: &Matrix,
    b: &Matrix,
    vprime: &Decomposition,
    vdoubleprime: &Decomposition,
) -> Result<Extension> {
    if vprime.d() != vdoubleprime.d() {
        return Err(Error::PreconditionFailed(Precondition::Shape));
    }
    let d = vprime.d();
    if vprime.line(d) != vdoubleprime.line(d) {
        return Err(Error::PreconditionFailed(Precondition::TopLineMismatch));
    }
    if !condition_check(a, b, vprime, Condition::I) {
        return Err(Error::PreconditionFailed(Precondition::ConditionI));
    }
    if !condition_check(a, b, vdoubleprime, Condition::II) {
        return Err(Error::PreconditionFailed(Precondition::ConditionII));
    }
    let ext = extend_pair(a, b, vprime)?;
    if ext.certificate.decomposition(PairLabel::BC) != vdoubleprime {
        return Err(contradiction("(B,C)-decomposition does not coincide with the input"));
    }
    Ok(ext)
}
