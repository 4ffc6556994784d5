//! LR triples: verification, certificates, extension of an LR pair by a third
//! map, out/in splitting of bipartite triples, scaling, and recovery of the
//! scalars relating two extensions that share a decomposition.

mod bipartite;
mod extend;
mod recover;
mod scaling;

pub use bipartite::{out_in_split, OutInSplit};
pub use extend::{extend_pair, extend_pair_ii, joint_extension, anti_diagonal_relation_holds, Extension};
pub use recover::{recover_gamma_nonbipartite, recover_gammas_bipartite, solve_combination};
pub use scaling::{bipartite_scale, scale_triple, BipartiteScalars, ScaledTriple};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::decomp::{
    action_check, flag_action_check, flags_opposite, opposite_intersection_decomposition,
    tridiagonal_check, zero_diagonal_check, Action, Decomposition, IdempotentSequence,
};
use crate::error::{Error, PairLabel, Precondition, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::{transition_matrix, Matrix};
use crate::lrpair::{find_lr_decomposition, rebase_to_anchor, standard_basis, LrPair};
use crate::toeplitz::{toeplitz_params, ToeplitzParams};

const LABELS: [PairLabel; 6] =
    [PairLabel::AB, PairLabel::BC, PairLabel::CA, PairLabel::BA, PairLabel::CB, PairLabel::AC];

fn label_index(label: PairLabel) -> usize {
    LABELS.iter().position(|&l| l == label).expect("all labels listed")
}

/// A named pass/fail outcome inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<NamedCheck>,
}

impl CheckReport {
    pub fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(NamedCheck { name: name.into(), passed });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Everything computed about a verified LR triple `A, B, C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCertificate {
    a: Matrix,
    b: Matrix,
    c: Matrix,
    pairs: Vec<LrPair>,
    idempotents: [IdempotentSequence; 3],
    toeplitz: [ToeplitzParams; 3],
    bipartite: bool,
}

impl TripleCertificate {
    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn d(&self) -> usize {
        self.a.n_rows() - 1
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn pair(&self, label: PairLabel) -> &LrPair {
        &self.pairs[label_index(label)]
    }

    pub fn decomposition(&self, label: PairLabel) -> &Decomposition {
        &self.pair(label).decomposition
    }

    /// Parameter sequence of `(A, B)`.
    pub fn phi(&self) -> &[Fp] {
        &self.pair(PairLabel::AB).phi
    }

    /// Parameter sequence of `(B, C)`.
    pub fn phi1(&self) -> &[Fp] {
        &self.pair(PairLabel::BC).phi
    }

    /// Parameter sequence of `(C, A)`.
    pub fn phi2(&self) -> &[Fp] {
        &self.pair(PairLabel::CA).phi
    }

    pub fn parameter_array(&self) -> [&[Fp]; 3] {
        [self.phi(), self.phi1(), self.phi2()]
    }

    /// Idempotent sequences of the `(A,B)`-, `(B,C)`- and `(C,A)`-decompositions.
    pub fn idempotent_data(&self) -> &[IdempotentSequence; 3] {
        &self.idempotents
    }

    /// Parameters of the transition from a `(C,B)`-basis to the compatible `(C,A)`-basis.
    pub fn alpha(&self) -> &ToeplitzParams {
        &self.toeplitz[0]
    }

    /// Parameters of the transition from an `(A,C)`-basis to the compatible `(A,B)`-basis.
    pub fn alpha1(&self) -> &ToeplitzParams {
        &self.toeplitz[1]
    }

    /// Parameters of the transition from a `(B,A)`-basis to the compatible `(B,C)`-basis.
    pub fn alpha2(&self) -> &ToeplitzParams {
        &self.toeplitz[2]
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite
    }
}

pub fn toeplitz_data(cert: &TripleCertificate) -> (ToeplitzParams, ToeplitzParams, ToeplitzParams) {
    (cert.alpha().clone(), cert.alpha1().clone(), cert.alpha2().clone())
}

impl Serialize for TripleCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct FieldSpec {
            kind: &'static str,
            p: u64,
        }
        #[derive(Serialize)]
        #[allow(non_snake_case)]
        struct Decomps<'a> {
            AB: &'a Decomposition,
            BC: &'a Decomposition,
            CA: &'a Decomposition,
            AC: &'a Decomposition,
        }
        let mut m = s.serialize_map(Some(13))?;
        m.serialize_entry("field", &FieldSpec { kind: "prime", p: self.field().p() })?;
        m.serialize_entry("d", &self.d())?;
        m.serialize_entry("A", &self.a)?;
        m.serialize_entry("B", &self.b)?;
        m.serialize_entry("C", &self.c)?;
        m.serialize_entry("phi", self.phi())?;
        m.serialize_entry("phi1", self.phi1())?;
        m.serialize_entry("phi2", self.phi2())?;
        m.serialize_entry("alpha", self.alpha())?;
        m.serialize_entry("alpha1", self.alpha1())?;
        m.serialize_entry("alpha2", self.alpha2())?;
        m.serialize_entry("bipartite", &self.bipartite)?;
        m.serialize_entry(
            "decompositions",
            &Decomps {
                AB: self.decomposition(PairLabel::AB),
                BC: self.decomposition(PairLabel::BC),
                CA: self.decomposition(PairLabel::CA),
                AC: self.decomposition(PairLabel::AC),
            },
        )?;
        m.end()
    }
}

fn check_triple_shapes(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<()> {
    for m in [b, c] {
        if m.field() != a.field() {
            return Err(Error::FieldMismatch(a.field().p(), m.field().p()));
        }
    }
    let n = a.n_rows();
    if [a, b, c].iter().any(|m| !m.is_square() || m.n_rows() != n) {
        return Err(Error::ShapeMismatch("triple maps must be square of equal size".into()));
    }
    Ok(())
}

/// Transition parameters from the `lowering`-basis of `from` to the
/// compatible `lowering`-basis of `to`.
fn compatible_transition(lowering: &Matrix, from: &Decomposition, to: &Decomposition) -> Result<ToeplitzParams> {
    let f = lowering.field();
    let from_basis = standard_basis(lowering, from)?;
    let to_basis = rebase_to_anchor(f, &standard_basis(lowering, to)?, &from_basis[0])?;
    let t = transition_matrix(f, &from_basis, &to_basis)?;
    let params = toeplitz_params(&t).map_err(|e| {
        Error::InternalContradiction(format!("transition between compatible bases is not Toeplitz: {e}"))
    })?;
    if params.get(0) != f.one() {
        return Err(Error::InternalContradiction("leading Toeplitz parameter is not 1".into()));
    }
    Ok(params)
}

/// Verifies that all six ordered pairs among `A, B, C` are LR pairs and
/// computes the parameter array, idempotent data, Toeplitz data and
/// bipartiteness.
pub fn verify_triple(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<TripleCertificate> {
    check_triple_shapes(a, b, c)?;
    let operands = |label: PairLabel| match label {
        PairLabel::AB => (a, b),
        PairLabel::BC => (b, c),
        PairLabel::CA => (c, a),
        PairLabel::BA => (b, a),
        PairLabel::CB => (c, b),
        PairLabel::AC => (a, c),
    };
    let pairs = LABELS
        .iter()
        .map(|&label| {
            let (x, y) = operands(label);
            find_lr_decomposition(x, y).map_err(|e| match e {
                Error::NotLrPair(reason) => Error::NotLrTriple(label, reason),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    for (fwd, rev) in [(0, 3), (1, 4), (2, 5)] {
        let (p, q) = (&pairs[fwd], &pairs[rev]);
        let mut phi_rev = p.phi.clone();
        phi_rev.reverse();
        if q.decomposition != p.decomposition.reversed() || q.phi != phi_rev {
            return Err(Error::InternalContradiction(format!(
                "{} is not the reversal of {}",
                LABELS[rev], LABELS[fwd]
            )));
        }
    }
    let dec = |label: PairLabel| &pairs[label_index(label)].decomposition;

    let idempotents = [
        dec(PairLabel::AB).idempotents(),
        dec(PairLabel::BC).idempotents(),
        dec(PairLabel::CA).idempotents(),
    ];
    let toeplitz = [
        compatible_transition(c, dec(PairLabel::CB), dec(PairLabel::CA))?,
        compatible_transition(a, dec(PairLabel::AC), dec(PairLabel::AB))?,
        compatible_transition(b, dec(PairLabel::BA), dec(PairLabel::BC))?,
    ];
    let bipartite = zero_diagonal_check(a, dec(PairLabel::BC))
        && zero_diagonal_check(b, dec(PairLabel::CA))
        && zero_diagonal_check(c, dec(PairLabel::AB));

    Ok(TripleCertificate {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        pairs,
        idempotents,
        toeplitz,
        bipartite,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `A` lowers the decomposition and `B` is irreducible tridiagonal on it.
    I,
    /// The same with `A` and `B` exchanged.
    II,
}

pub fn condition_check(a: &Matrix, b: &Matrix, dec: &Decomposition, which: Condition) -> bool {
    let (lowering, tridiagonal) = match which {
        Condition::I => (a, b),
        Condition::II => (b, a),
    };
    let n = dec.d() + 1;
    if [a, b].iter().any(|m| !m.is_square() || m.n_rows() != n || m.field() != dec.field()) {
        return false;
    }
    action_check(lowering, dec, Action::Lowers) && tridiagonal_check(tridiagonal, dec).irreducible
}

/// Rebuilds the LR-pair decomposition of `(A, B)` from decompositions
/// satisfying conditions (I) and (II), through their induced flags.
pub fn lr_pair_from_conditions(
    a: &Matrix,
    b: &Matrix,
    v1: &Decomposition,
    v2: &Decomposition,
) -> Result<Decomposition> {
    if !condition_check(a, b, v1, Condition::I) {
        return Err(Error::PreconditionFailed(Precondition::ConditionI));
    }
    if !condition_check(a, b, v2, Condition::II) {
        return Err(Error::PreconditionFailed(Precondition::ConditionII));
    }
    let u1 = v1.induced_flag();
    let u2 = v2.induced_flag();
    let flag_actions = flag_action_check(a, &u1, Action::Lowers)
        && flag_action_check(b, &u1, Action::Raises)
        && flag_action_check(b, &u2, Action::Lowers)
        && flag_action_check(a, &u2, Action::Raises);
    if !flag_actions {
        return Err(Error::InternalContradiction("induced flags have the wrong actions".into()));
    }
    if !flags_opposite(&u1, &u2) {
        return Err(Error::InternalContradiction("induced flags are not opposite".into()));
    }
    let z = opposite_intersection_decomposition(&u1, &u2)?;
    if !action_check(a, &z, Action::Lowers) || !action_check(b, &z, Action::Raises) {
        return Err(Error::InternalContradiction(
            "flag intersections are not lowered by A and raised by B".into(),
        ));
    }
    Ok(z)
}

/// Structural identities every certificate satisfies, by parity class.
pub fn certificate_invariants(cert: &TripleCertificate) -> CheckReport {
    let mut report = CheckReport::default();
    let f = cert.field();
    let d = cert.d();
    let alphas = [cert.alpha(), cert.alpha1(), cert.alpha2()];
    let phis = cert.parameter_array();

    report.push("alpha0", alphas.iter().all(|a| a.get(0) == f.one()));
    report.push(
        "parameters nonzero",
        phis.iter().all(|p| p.len() == d && p.iter().all(|x| !x.is_zero())),
    );
    if d >= 1 {
        report.push("bipartite iff alpha1_1 = 0", cert.is_bipartite() == cert.alpha1().get(1).is_zero());
    }

    if !cert.is_bipartite() {
        report.push("nonbipartite has d >= 1", d >= 1);
        report.push("alpha_1 entries nonzero", alphas.iter().all(|a| !a.get(1).is_zero()));
        let ratios_agree = (1..=d).all(|i| {
            let r: Vec<Option<Fp>> =
                (0..3).map(|k| alphas[k].get(1).div(phis[k][i - 1]).ok()).collect();
            r[0].is_some() && r[0] == r[1] && r[1] == r[2]
        });
        report.push("alpha_1 / phi_i ratios agree", ratios_agree);
        return report;
    }

    report.push("bipartite has even d", d.is_multiple_of(2));
    let parity = alphas
        .iter()
        .all(|a| (0..=d).all(|i| a.get(i).is_zero() == (i % 2 == 1)));
    report.push("alpha parity pattern", parity);
    if d >= 2 {
        let mut opposite = true;
        let mut same = true;
        for i in 1..=d {
            for j in 1..=d {
                let ratios: Vec<Option<Fp>> = (0..3)
                    .map(|k| {
                        let (pi, pj) = (phis[k][i - 1], phis[k][j - 1]);
                        if (i + j) % 2 == 1 {
                            alphas[k].get(2).div(pi * pj).ok()
                        } else {
                            pi.div(pj).ok()
                        }
                    })
                    .collect();
                let agree = ratios[0].is_some() && ratios[0] == ratios[1] && ratios[1] == ratios[2];
                if (i + j) % 2 == 1 {
                    opposite &= agree;
                } else {
                    same &= agree;
                }
            }
        }
        report.push("alpha_2 / (phi_i phi_j) ratios agree for opposite parity", opposite);
        report.push("phi_i / phi_j ratios agree for equal parity", same);
    }
    report
}

/// The d = 2 triple over GF(7) built from the shift, the subdiagonal map
/// with parameters (1, 2), and the decomposition obtained by the Toeplitz
/// rebase with parameters (1, 0, 1).
pub fn fixture_triple() -> Result<(Matrix, Matrix, Decomposition)> {
    let f = PrimeField::new(7)?;
    let a = crate::toeplitz::shift_matrix(f, 3);
    let b = crate::toeplitz::subdiagonal_matrix(f, &[f.elem(1), f.elem(2)]);
    let vprime = Decomposition::from_vectors(f, &[vec![1, 0, 0], vec![0, 1, 0], vec![6, 0, 1]])?;
    Ok((a, b, vprime))
}

/// Pins the transition-matrix direction: on the fixture triple, the matrix
/// of `C` in an `(A,B)`-basis must be the anti-diagonal transpose of the
/// matrix of `B` in an `(A,C)`-basis, and all three transition matrices
/// must be Toeplitz with the expected parameters.
pub fn convention_self_test() -> Result<()> {
    let (a, b, vprime) = fixture_triple()?;
    let ext = extend_pair(&a, &b, &vprime)?;
    let cert = &ext.certificate;
    let f = cert.field();
    let basis_ab = standard_basis(&a, cert.decomposition(PairLabel::AB))?;
    let basis_ac = standard_basis(&a, cert.decomposition(PairLabel::AC))?;
    if !anti_diagonal_relation_holds(&b, &ext.c, &basis_ab, &basis_ac)? {
        return Err(Error::InternalContradiction("anti-diagonal transpose identity fails".into()));
    }
    if cert.alpha1() != &ToeplitzParams::from_i64(f, &[1, 0, 1])? {
        return Err(Error::InternalContradiction(format!(
            "fixture Toeplitz parameters are {:?}, expected (1, 0, 1)",
            cert.alpha1().as_slice().iter().map(Fp::value).collect::<Vec<_>>()
        )));
    }
    Ok(())
}
