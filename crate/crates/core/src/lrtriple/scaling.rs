use crate::error::{Error, Result};
use crate::field::Fp;
use crate::toeplitz::ToeplitzParams;

use super::{out_in_split, verify_triple, CheckReport, TripleCertificate};

/// A rescaled triple and the comparison of its data against the closed-form
/// predictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledTriple {
    pub certificate: TripleCertificate,
    pub report: CheckReport,
}

fn rescaled_triple_failed(e: Error) -> Error {
    Error::InternalContradiction(format!("rescaled maps are not an LR triple: {e}"))
}

fn scaled_params(params: &ToeplitzParams, factor: impl Fn(usize) -> Fp) -> Vec<Fp> {
    (0..=params.d()).map(|i| params.get(i) * factor(i)).collect()
}

fn compare_common(
    report: &mut CheckReport,
    before: &TripleCertificate,
    after: &TripleCertificate,
    phi_factors: [&dyn Fn(usize) -> Fp; 3],
    alpha_factors: [&dyn Fn(usize) -> Fp; 3],
) {
    let names = ["phi", "phi1", "phi2"];
    for (k, (old, new)) in before.parameter_array().iter().zip(after.parameter_array()).enumerate() {
        let predicted: Vec<Fp> = old.iter().enumerate().map(|(i, &x)| x * phi_factors[k](i + 1)).collect();
        report.push(format!("parameter array {}", names[k]), predicted.as_slice() == new);
    }
    report.push("idempotent data unchanged", before.idempotent_data() == after.idempotent_data());
    let old_alpha = [before.alpha(), before.alpha1(), before.alpha2()];
    let new_alpha = [after.alpha(), after.alpha1(), after.alpha2()];
    let names = ["alpha", "alpha1", "alpha2"];
    for k in 0..3 {
        let predicted = scaled_params(old_alpha[k], alpha_factors[k]);
        report.push(format!("Toeplitz data {}", names[k]), predicted.as_slice() == new_alpha[k].as_slice());
    }
    report.push("bipartiteness preserved", before.is_bipartite() == after.is_bipartite());
}

/// Certificate of `(aA, bB, gC)` checked against the predicted parameter
/// array, idempotent data and Toeplitz data.
pub fn scale_triple(cert: &TripleCertificate, a: Fp, b: Fp, g: Fp) -> Result<ScaledTriple> {
    if a.is_zero() || b.is_zero() || g.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let after = verify_triple(&cert.a().scale(a), &cert.b().scale(b), &cert.c().scale(g))
        .map_err(rescaled_triple_failed)?;
    let inv_pow = |s: Fp| move |i: usize| s.inv().expect("nonzero").pow(i as u64);
    let (ga, gb, gg) = (inv_pow(g), inv_pow(a), inv_pow(b));
    let mut report = CheckReport::default();
    compare_common(
        &mut report,
        cert,
        &after,
        [&|_| a * b, &|_| b * g, &|_| g * a],
        [&ga, &gb, &gg],
    );
    Ok(ScaledTriple { certificate: after, report })
}

/// The six scalars of a bipartite rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteScalars {
    pub a_out: Fp,
    pub a_in: Fp,
    pub b_out: Fp,
    pub b_in: Fp,
    pub g_out: Fp,
    pub g_in: Fp,
}

impl BipartiteScalars {
    fn all(&self) -> [Fp; 6] {
        [self.a_out, self.a_in, self.b_out, self.b_in, self.g_out, self.g_in]
    }
}

/// Certificate of `(a_out A_out + a_in A_in, …)` checked against the
/// predicted parameter array, idempotent data and Toeplitz data.
pub fn bipartite_scale(cert: &TripleCertificate, s: BipartiteScalars) -> Result<ScaledTriple> {
    if !cert.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    if s.all().iter().any(Fp::is_zero) {
        return Err(Error::ZeroScalar);
    }
    let combine = |x: &crate::linalg::Matrix, out: Fp, inn: Fp| -> Result<crate::linalg::Matrix> {
        let split = out_in_split(cert, x)?;
        Ok(&split.x_out.scale(out) + &split.x_in.scale(inn))
    };
    let a = combine(cert.a(), s.a_out, s.a_in)?;
    let b = combine(cert.b(), s.b_out, s.b_in)?;
    let c = combine(cert.c(), s.g_out, s.g_in)?;
    let after = verify_triple(&a, &b, &c).map_err(rescaled_triple_failed)?;

    let parity = |even: Fp, odd: Fp| move |i: usize| if i.is_multiple_of(2) { even } else { odd };
    let f_ab = parity(s.a_out * s.b_in, s.a_in * s.b_out);
    let f_bc = parity(s.b_out * s.g_in, s.b_in * s.g_out);
    let f_ca = parity(s.g_out * s.a_in, s.g_in * s.a_out);
    let half_power = |out: Fp, inn: Fp| {
        let base = (out * inn).inv().expect("nonzero");
        let zero = out.field().zero();
        move |i: usize| if i.is_multiple_of(2) { base.pow((i / 2) as u64) } else { zero }
    };
    let g_a = half_power(s.a_out, s.a_in);
    let g_b = half_power(s.b_out, s.b_in);
    let g_g = half_power(s.g_out, s.g_in);

    let mut report = CheckReport::default();
    compare_common(&mut report, cert, &after, [&f_ab, &f_bc, &f_ca], [&g_g, &g_a, &g_b]);
    Ok(ScaledTriple { certificate: after, report })
}
