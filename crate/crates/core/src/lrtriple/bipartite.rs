use crate::decomp::IdempotentSequence;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

use super::TripleCertificate;

/// `V = V_out ⊕ V_in` for a bipartite triple, and `X = X_out + X_in`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutInSplit {
    pub v_out: Subspace,
    pub v_in: Subspace,
    pub x_out: Matrix,
    pub x_in: Matrix,
}

fn parity_sum(seq: &IdempotentSequence, parity: usize) -> Subspace {
    let m = seq.get(0);
    let n = m.n_rows();
    let full = Subspace::full(m.field(), n);
    seq.matrices()
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == parity)
        .fold(Subspace::zero(m.field(), n), |acc, (_, e)| acc.sum(&full.image(e)))
}

/// Splits `X` along the even and odd idempotent images of a bipartite triple.
pub fn out_in_split(cert: &TripleCertificate, x: &Matrix) -> Result<OutInSplit> {
    if !cert.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let n = cert.d() + 1;
    if !x.is_square() || x.n_rows() != n {
        return Err(Error::ShapeMismatch(format!("expected a {n}x{n} map")));
    }
    let data = cert.idempotent_data();
    let outs: Vec<Subspace> = data.iter().map(|s| parity_sum(s, 0)).collect();
    let ins: Vec<Subspace> = data.iter().map(|s| parity_sum(s, 1)).collect();
    if outs.iter().any(|s| s != &outs[0]) || ins.iter().any(|s| s != &ins[0]) {
        return Err(Error::InternalContradiction(
            "even/odd idempotent images differ between decompositions".into(),
        ));
    }
    let f = cert.field();
    let e = &data[0];
    let p_out = e
        .matrices()
        .iter()
        .step_by(2)
        .fold(Matrix::zeros(f, n, n), |acc, m| &acc + m);
    let p_in = &Matrix::identity(f, n) - &p_out;
    Ok(OutInSplit {
        v_out: outs[0].clone(),
        v_in: ins[0].clone(),
        x_out: x * &p_out,
        x_in: x * &p_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::lrtriple::{fixture_triple, verify_triple};

    fn worked() -> TripleCertificate {
        let (a, b, _) = fixture_triple().unwrap();
        let c = Matrix::from_i64_rows(a.field(), &[vec![0, 6, 0], vec![2, 0, 2], vec![0, 1, 0]]).unwrap();
        verify_triple(&a, &b, &c).unwrap()
    }

    #[test]
    fn zero_dimensional_split() {
        let f = PrimeField::new(7).unwrap();
        let z = Matrix::zeros(f, 1, 1);
        let cert = verify_triple(&z, &z, &z).unwrap();
        let s = out_in_split(&cert, &z).unwrap();
        assert_eq!(s.v_out.dim(), 1);
        assert_eq!(s.v_in.dim(), 0);
        assert_eq!(s.x_out, z);
        assert_eq!(s.x_in, z);
    }

    #[test]
    fn worked_split_dimensions() {
        let cert = worked();
        let s = out_in_split(&cert, cert.c()).unwrap();
        assert_eq!((s.v_out.dim(), s.v_in.dim()), (2, 1));
        // The (A,B)-decomposition is standard: V_out = (e0, e2), V_in = (e1).
        assert!(s.v_out.contains(&[1, 0, 0]) && s.v_out.contains(&[0, 0, 1]));
        assert!(s.v_in.contains(&[0, 1, 0]));
        assert_eq!(&(&s.x_out + &s.x_in), cert.c());
        let zero = Matrix::zeros(cert.field(), 3, 3);
        let zs = out_in_split(&cert, &zero).unwrap();
        assert_eq!((zs.x_out, zs.x_in), (zero.clone(), zero));
    }

    #[test]
    fn nonbipartite_is_rejected() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_i64_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let b = Matrix::from_i64_rows(f, &[vec![0, 0], vec![1, 0]]).unwrap();
        let c = Matrix::from_i64_rows(f, &[vec![1, 1], vec![6, 6]]).unwrap();
        let cert = verify_triple(&a, &b, &c).unwrap();
        assert!(!cert.is_bipartite());
        assert_eq!(out_in_split(&cert, &a), Err(Error::NotBipartite));
    }
}
