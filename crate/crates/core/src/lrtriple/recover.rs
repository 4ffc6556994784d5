use crate::error::{Error, PairLabel, Precondition, Result};
use crate::field::Fp;
use crate::linalg::{row_reduce, Matrix};

use super::{out_in_split, verify_triple, TripleCertificate};

/// The unique coefficients `x` with `rhs = Σ x_k · targets[k]`, if they exist.
pub fn solve_combination(targets: &[&Matrix], rhs: &Matrix) -> Option<Vec<Fp>> {
    let f = rhs.field();
    let k = targets.len();
    let (r, c) = (rhs.n_rows(), rhs.n_cols());
    if targets.iter().any(|t| t.n_rows() != r || t.n_cols() != c || t.field() != f) {
        return None;
    }
    let mut rows: Vec<Vec<u64>> = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .map(|(i, j)| targets.iter().map(|t| t.get(i, j)).chain([rhs.get(i, j)]).collect())
        .collect();
    let pivots = row_reduce(f, &mut rows, k + 1);
    if pivots != (0..k).collect::<Vec<_>>() {
        return None;
    }
    Some((0..k).map(|j| f.from_residue(rows[j][k])).collect())
}

/// Checks that `(A, B, C̃)` is an LR triple with the same `(A,C)`-decomposition
/// as the certificate, and returns its certificate.
fn companion_certificate(cert: &TripleCertificate, ctilde: &Matrix) -> Result<TripleCertificate> {
    let n = cert.d() + 1;
    if ctilde.field() != cert.field() || !ctilde.is_square() || ctilde.n_rows() != n {
        return Err(Error::PreconditionFailed(Precondition::Shape));
    }
    let other = verify_triple(cert.a(), cert.b(), ctilde).map_err(|e| match e {
        Error::NotLrTriple(label, reason) => {
            Error::PreconditionFailed(Precondition::NotLrTriple(label, reason))
        }
        other => other,
    })?;
    let same_ac = other.decomposition(PairLabel::AC) == cert.decomposition(PairLabel::AC);
    let same_bc = other.decomposition(PairLabel::BC) == cert.decomposition(PairLabel::BC);
    if same_ac != same_bc {
        return Err(Error::InternalContradiction(
            "(A,C)- and (B,C)-decomposition agreement disagree".into(),
        ));
    }
    if !same_ac {
        return Err(Error::PreconditionFailed(Precondition::DecompositionMismatch));
    }
    if other.is_bipartite() != cert.is_bipartite() {
        return Err(Error::NoScalarRelation);
    }
    Ok(other)
}

/// `γ` with `C̃ = γ C` for a nonbipartite triple, computed both from the
/// Toeplitz data (`α_1 / α̃_1`) and by solving entrywise.
pub fn recover_gamma_nonbipartite(cert: &TripleCertificate, ctilde: &Matrix) -> Result<Fp> {
    if cert.is_bipartite() {
        return Err(Error::PreconditionFailed(Precondition::WrongBipartiteness));
    }
    let other = companion_certificate(cert, ctilde)?;
    let from_toeplitz = cert.alpha().get(1).div(other.alpha().get(1)).map_err(|_| Error::NoScalarRelation)?;
    let solved = solve_combination(&[cert.c()], ctilde).ok_or(Error::NoScalarRelation)?;
    if solved[0] != from_toeplitz || from_toeplitz.is_zero() {
        return Err(Error::NoScalarRelation);
    }
    Ok(from_toeplitz)
}

/// `(γ_out, γ_in)` with `C̃ = γ_out C_out + γ_in C_in` for a bipartite triple,
/// computed from the parameter array and Toeplitz data and by a direct solve.
pub fn recover_gammas_bipartite(cert: &TripleCertificate, ctilde: &Matrix) -> Result<(Fp, Fp)> {
    if !cert.is_bipartite() {
        return Err(Error::PreconditionFailed(Precondition::WrongBipartiteness));
    }
    if cert.d() < 2 {
        return Err(Error::PreconditionFailed(Precondition::DimensionTooSmall));
    }
    let other = companion_certificate(cert, ctilde)?;
    let (phi1, phi1_t) = (cert.phi1()[0], other.phi1()[0]);
    let g_out = phi1_t.div(phi1).map_err(|_| Error::NoScalarRelation)?;
    let g_in = (cert.alpha().get(2) * phi1)
        .div(other.alpha().get(2) * phi1_t)
        .map_err(|_| Error::NoScalarRelation)?;
    let split = out_in_split(cert, cert.c())?;
    let solved = solve_combination(&[&split.x_out, &split.x_in], ctilde).ok_or(Error::NoScalarRelation)?;
    if solved != [g_out, g_in] || g_out.is_zero() || g_in.is_zero() {
        return Err(Error::NoScalarRelation);
    }
    Ok((g_out, g_in))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::lrtriple::{fixture_triple, verify_triple};

    fn gf7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn m7(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(gf7(), rows).unwrap()
    }

    fn nonbipartite() -> TripleCertificate {
        let a = m7(&[vec![0, 1], vec![0, 0]]);
        let b = m7(&[vec![0, 0], vec![1, 0]]);
        let c = m7(&[vec![1, 1], vec![6, 6]]);
        verify_triple(&a, &b, &c).unwrap()
    }

    fn worked() -> TripleCertificate {
        let (a, b, _) = fixture_triple().unwrap();
        let c = m7(&[vec![0, 6, 0], vec![2, 0, 2], vec![0, 1, 0]]);
        verify_triple(&a, &b, &c).unwrap()
    }

    #[test]
    fn nonbipartite_recovery() {
        let cert = nonbipartite();
        let f = gf7();
        assert_eq!(recover_gamma_nonbipartite(&cert, cert.c()).unwrap(), f.one());
        assert_eq!(recover_gamma_nonbipartite(&cert, &cert.c().scale(f.elem(4))).unwrap(), f.elem(4));
    }

    #[test]
    fn perturbed_third_map_is_rejected() {
        let cert = nonbipartite();
        let mut perturbed = cert.c().clone();
        perturbed.set(0, 0, (perturbed.get(0, 0) + 1) % 7);
        assert!(matches!(
            recover_gamma_nonbipartite(&cert, &perturbed),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn bipartite_recovery() {
        let cert = worked();
        let f = gf7();
        assert_eq!(recover_gammas_bipartite(&cert, cert.c()).unwrap(), (f.one(), f.one()));
        let split = out_in_split(&cert, cert.c()).unwrap();
        let ctilde = &split.x_out.scale(f.elem(2)) + &split.x_in.scale(f.elem(3));
        assert_eq!(recover_gammas_bipartite(&cert, &ctilde).unwrap(), (f.elem(2), f.elem(3)));
    }

    #[test]
    fn recovery_preconditions() {
        let z = Matrix::zeros(gf7(), 1, 1);
        let zero_cert = verify_triple(&z, &z, &z).unwrap();
        assert_eq!(
            recover_gammas_bipartite(&zero_cert, &z),
            Err(Error::PreconditionFailed(Precondition::DimensionTooSmall))
        );
        assert_eq!(
            recover_gamma_nonbipartite(&worked(), worked().c()),
            Err(Error::PreconditionFailed(Precondition::WrongBipartiteness))
        );
    }

    #[test]
    fn combination_solver() {
        let x = m7(&[vec![1, 0], vec![0, 0]]);
        let y = m7(&[vec![0, 0], vec![0, 1]]);
        let rhs = m7(&[vec![3, 0], vec![0, 5]]);
        let f = gf7();
        assert_eq!(solve_combination(&[&x, &y], &rhs), Some(vec![f.elem(3), f.elem(5)]));
        assert_eq!(solve_combination(&[&x, &x], &rhs), None);
        assert_eq!(solve_combination(&[&x], &rhs), None);
    }
}
