//! Seeded random generation of LR pairs, condition-(I) decompositions, LR
//! triples and bipartite LR triples.
//!
//! Every object is produced from a canonical model conjugated by a random
//! invertible matrix and is re-validated by the detection and verification
//! routines before it is returned.
//!
//! Triples are built from the Toeplitz side: pick Toeplitz parameters `α'`
//! for the transition from an `(A,C)`-basis to an `(A,B)`-basis, then solve
//! for the parameter sequences `φ` that make `B` tridiagonal on the rebased
//! decomposition. That condition is linear in `φ`, so the admissible `φ`
//! form a subspace and a random member is drawn from it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::{Matrix, Subspace};
use crate::lrpair::{find_lr_decomposition, standard_basis, LrPair};
use crate::lrtriple::{condition_check, extend_pair, Condition, TripleCertificate};
use crate::toeplitz::{shift_matrix, subdiagonal_matrix, toeplitz_matrix, ToeplitzParams};

pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;
pub const MAX_D: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub d: usize,
    pub field: PrimeField,
    pub seed: u64,
    pub max_attempts: usize,
}

impl GenConfig {
    pub fn new(d: usize, field: PrimeField, seed: u64) -> Result<GenConfig> {
        if d > MAX_D {
            return Err(Error::ShapeMismatch(format!("d = {d} exceeds {MAX_D}")));
        }
        Ok(GenConfig { d, field, seed, max_attempts: DEFAULT_MAX_ATTEMPTS })
    }
}

/// Provenance attached to generated instances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenMeta {
    pub seed: u64,
    pub rng: &'static str,
    pub d: usize,
    pub p: u64,
    /// Attempts spent on the most recent object.
    pub attempts: usize,
    /// Accepted objects over all attempts so far.
    pub acceptance_rate: f64,
    /// How the Toeplitz parameters of the most recent triple were drawn.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
}

/// Shapes of Toeplitz parameter sequences the triple generator draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaFamily {
    /// `α'_k` uniform for `k >= 1`.
    Uniform,
    /// `α'_k = c^k / k!`.
    Exponential,
    /// `α'_k = c^k / [k]_q!`.
    QExponential,
    /// `α'_{2k} = c^k / [k]_q!`, odd entries zero.
    EvenQExponential,
}

impl AlphaFamily {
    pub fn name(self) -> &'static str {
        match self {
            AlphaFamily::Uniform => "uniform",
            AlphaFamily::Exponential => "exponential",
            AlphaFamily::QExponential => "q-exponential",
            AlphaFamily::EvenQExponential => "even q-exponential",
        }
    }
}

/// `[k]_q! = Π_{t=1}^{k} (1 + q + … + q^{t-1})`.
fn q_factorial(field: PrimeField, k: usize, q: Fp) -> Fp {
    let mut acc = field.one();
    let mut q_int = field.zero();
    let mut q_pow = field.one();
    for _ in 0..k {
        q_int = q_int + q_pow;
        q_pow = q_pow * q;
        acc = acc * q_int;
    }
    acc
}

/// Parameter sequences `φ` for which `T S_φ T^{-1}` is tridiagonal, where
/// `T` is the Toeplitz matrix of `alpha`. Entries below the subdiagonal
/// vanish for every `φ`, so only the entries with `j - i >= 2` constrain it.
pub fn tridiagonal_parameter_space(alpha: &ToeplitzParams) -> Result<Subspace> {
    let f = alpha.field();
    let d = alpha.d();
    let t = toeplitz_matrix(alpha);
    let t_inv = t.inverse()?;
    let mut rows = Vec::new();
    for i in 0..=d {
        for j in (i + 2)..=d {
            let row: Vec<u64> =
                (0..d).map(|k| f.mul(t.get(i, k + 1), t_inv.get(k, j))).collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(f, d));
    }
    Ok(Matrix::from_rows(f, rows)?.kernel())
}

/// The decomposition spanned by the basis `v'` with `T'` (parameters
/// `alpha`) the transition matrix from `v'` to the pair's `(A,B)`-basis.
pub fn rebase_decomposition(pair: &LrPair, alpha: &ToeplitzParams) -> Result<Decomposition> {
    if alpha.d() != pair.d() || alpha.field() != pair.field() {
        return Err(Error::ShapeMismatch("Toeplitz parameters do not match the pair".into()));
    }
    let basis = standard_basis(&pair.a, &pair.decomposition)?;
    let p = Matrix::from_columns(pair.field(), &basis)?;
    let rebased = p.mat_mul(&toeplitz_matrix(alpha).inverse()?)?;
    Decomposition::from_vectors(pair.field(), &rebased.columns())
}

const TRIPLE_FAMILIES: [AlphaFamily; 3] =
    [AlphaFamily::Uniform, AlphaFamily::Exponential, AlphaFamily::QExponential];

/// An LR pair, a decomposition satisfying condition (I) for it, and the
/// Toeplitz parameters that produced the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInput {
    pub pair: LrPair,
    pub vprime: Decomposition,
    pub alpha: ToeplitzParams,
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
    total_attempts: usize,
    accepted: usize,
    last_attempts: usize,
    last_family: Option<AlphaFamily>,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        Generator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            total_attempts: 0,
            accepted: 0,
            last_attempts: 0,
            last_family: None,
        }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn meta(&self) -> GenMeta {
        let rate = if self.total_attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.total_attempts as f64
        };
        GenMeta {
            seed: self.cfg.seed,
            rng: RNG_NAME,
            d: self.cfg.d,
            p: self.cfg.field.p(),
            attempts: self.last_attempts,
            acceptance_rate: rate,
            family: self.last_family.map(AlphaFamily::name),
        }
    }

    fn record(&mut self, attempts: usize, accepted: bool) {
        self.total_attempts += attempts;
        self.last_attempts = attempts;
        if accepted {
            self.accepted += 1;
        }
    }

    fn element(&mut self) -> Fp {
        let p = self.cfg.field.p();
        self.cfg.field.from_residue(self.rng.gen_range(0..p))
    }

    fn nonzero(&mut self) -> Fp {
        let p = self.cfg.field.p();
        self.cfg.field.from_residue(self.rng.gen_range(1..p))
    }

    /// A uniformly random invertible matrix, by rejection on the rank.
    pub fn invertible_matrix(&mut self) -> Result<Matrix> {
        let n = self.cfg.d + 1;
        for _ in 0..self.cfg.max_attempts {
            let rows = (0..n)
                .map(|_| (0..n).map(|_| self.element().value()).collect())
                .collect();
            let g = Matrix::from_rows(self.cfg.field, rows)?;
            if g.is_invertible() {
                return Ok(g);
            }
        }
        Err(Error::AttemptsExhausted(self.cfg.max_attempts))
    }

    /// `(G N G^{-1}, G S_φ G^{-1})`, validated by detection.
    fn conjugated_pair(&mut self, phi: &[Fp]) -> Result<LrPair> {
        let f = self.cfg.field;
        let n = self.cfg.d + 1;
        let g = self.invertible_matrix()?;
        let g_inv = g.inverse()?;
        let a = &(&g * &shift_matrix(f, n)) * &g_inv;
        let b = &(&g * &subdiagonal_matrix(f, phi)) * &g_inv;
        let pair = find_lr_decomposition(&a, &b)
            .map_err(|e| Error::InternalContradiction(format!("conjugated model is not an LR pair: {e}")))?;
        let expected = Decomposition::from_vectors(f, &g.columns())?;
        if pair.decomposition != expected || pair.phi != phi {
            return Err(Error::InternalContradiction("detected pair differs from the model".into()));
        }
        Ok(pair)
    }

    /// An LR pair with uniformly random nonzero parameters.
    pub fn gen_lr_pair(&mut self) -> Result<LrPair> {
        let phi: Vec<Fp> = (0..self.cfg.d).map(|_| self.nonzero()).collect();
        let pair = self.conjugated_pair(&phi)?;
        self.record(1, true);
        Ok(pair)
    }

    fn uniform_alpha(&mut self) -> ToeplitzParams {
        let f = self.cfg.field;
        let alpha = std::iter::once(f.one()).chain((0..self.cfg.d).map(|_| self.element())).collect();
        ToeplitzParams::new(alpha).expect("nonempty, one field")
    }

    /// A condition-(I) decomposition for `pair`, found by rebasing its
    /// `(A,B)`-basis through uniformly random Toeplitz parameters.
    pub fn gen_condition_i_decomposition(&mut self, pair: &LrPair) -> Result<Decomposition> {
        for attempt in 1..=self.cfg.max_attempts {
            let alpha = self.uniform_alpha();
            let vprime = rebase_decomposition(pair, &alpha)?;
            if vprime.line(0) != pair.decomposition.line(0) {
                return Err(Error::InternalContradiction("rebase moved the bottom line".into()));
            }
            if condition_check(&pair.a, &pair.b, &vprime, Condition::I) {
                self.record(attempt, true);
                return Ok(vprime);
            }
        }
        self.record(self.cfg.max_attempts, false);
        Err(Error::AttemptsExhausted(self.cfg.max_attempts))
    }

    fn sample_alpha(&mut self, family: AlphaFamily) -> Option<ToeplitzParams> {
        let f = self.cfg.field;
        let d = self.cfg.d;
        let c = self.nonzero();
        let q = match family {
            AlphaFamily::Exponential => f.one(),
            _ => self.nonzero(),
        };
        let mut alpha = vec![f.zero(); d + 1];
        match family {
            AlphaFamily::Uniform => return Some(self.uniform_alpha()),
            AlphaFamily::Exponential | AlphaFamily::QExponential => {
                for (k, slot) in alpha.iter_mut().enumerate() {
                    *slot = c.pow(k as u64) * q_factorial(f, k, q).inv().ok()?;
                }
            }
            AlphaFamily::EvenQExponential => {
                for k in 0..=d / 2 {
                    alpha[2 * k] = c.pow(k as u64) * q_factorial(f, k, q).inv().ok()?;
                }
            }
        }
        ToeplitzParams::new(alpha).ok()
    }

    /// One attempt at an extension input from Toeplitz parameters drawn from `family`.
    fn try_input(&mut self, family: AlphaFamily) -> Result<Option<ExtensionInput>> {
        let Some(alpha) = self.sample_alpha(family) else {
            return Ok(None);
        };
        let space = tridiagonal_parameter_space(&alpha)?;
        if space.dim() == 0 && self.cfg.d > 0 {
            return Ok(None);
        }
        let f = self.cfg.field;
        let mut phi = vec![f.zero(); self.cfg.d];
        for v in space.basis().to_vec() {
            let coeff = self.element();
            for (slot, &x) in phi.iter_mut().zip(&v) {
                *slot = *slot + coeff * f.from_residue(x);
            }
        }
        if phi.iter().any(Fp::is_zero) {
            return Ok(None);
        }
        let pair = self.conjugated_pair(&phi)?;
        let vprime = rebase_decomposition(&pair, &alpha)?;
        if !condition_check(&pair.a, &pair.b, &vprime, Condition::I) {
            return Ok(None);
        }
        Ok(Some(ExtensionInput { pair, vprime, alpha }))
    }

    /// An LR pair together with a decomposition satisfying condition (I).
    pub fn gen_extension_input(&mut self) -> Result<ExtensionInput> {
        for attempt in 1..=self.cfg.max_attempts {
            let family = TRIPLE_FAMILIES[self.rng.gen_range(0..TRIPLE_FAMILIES.len())];
            if let Some(input) = self.try_input(family)? {
                self.last_family = Some(family);
                self.record(attempt, true);
                return Ok(input);
            }
        }
        self.record(self.cfg.max_attempts, false);
        Err(Error::AttemptsExhausted(self.cfg.max_attempts))
    }

    fn triple_loop(&mut self, families: &[AlphaFamily], want_bipartite: bool) -> Result<TripleCertificate> {
        for attempt in 1..=self.cfg.max_attempts {
            let family = families[self.rng.gen_range(0..families.len())];
            let Some(input) = self.try_input(family)? else {
                continue;
            };
            let ext = extend_pair(&input.pair.a, &input.pair.b, &input.vprime)?;
            if ext.certificate.alpha1() != &input.alpha {
                return Err(Error::InternalContradiction(
                    "extracted Toeplitz parameters differ from the sampled ones".into(),
                ));
            }
            if !want_bipartite || ext.certificate.is_bipartite() {
                self.last_family = Some(family);
                self.record(attempt, true);
                return Ok(ext.certificate);
            }
        }
        self.record(self.cfg.max_attempts, false);
        Err(Error::AttemptsExhausted(self.cfg.max_attempts))
    }

    /// An LR triple extending a generated LR pair along a condition-(I)
    /// decomposition.
    pub fn gen_triple(&mut self) -> Result<TripleCertificate> {
        self.triple_loop(&TRIPLE_FAMILIES, false)
    }

    /// A bipartite LR triple; `d` must be even.
    pub fn gen_bipartite_triple(&mut self) -> Result<TripleCertificate> {
        if self.cfg.d % 2 == 1 {
            return Err(Error::OddD(self.cfg.d));
        }
        self.triple_loop(&[AlphaFamily::EvenQExponential], true)
    }
}

pub fn gen_lr_pair(cfg: &GenConfig) -> Result<LrPair> {
    Generator::new(*cfg).gen_lr_pair()
}

pub fn gen_condition_i_decomposition(pair: &LrPair, cfg: &GenConfig) -> Result<Decomposition> {
    Generator::new(*cfg).gen_condition_i_decomposition(pair)
}

pub fn gen_triple(cfg: &GenConfig) -> Result<TripleCertificate> {
    Generator::new(*cfg).gen_triple()
}

pub fn gen_bipartite_triple(cfg: &GenConfig) -> Result<TripleCertificate> {
    Generator::new(*cfg).gen_bipartite_triple()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::PairLabel;
    use crate::lrtriple::{certificate_invariants, fixture_triple, verify_triple};

    fn cfg(d: usize, p: u64, seed: u64) -> GenConfig {
        GenConfig::new(d, PrimeField::new(p).unwrap(), seed).unwrap()
    }

    #[test]
    fn zero_dimensional_objects() {
        let c = cfg(0, 7, 1);
        let pair = gen_lr_pair(&c).unwrap();
        assert!(pair.a.is_zero() && pair.b.is_zero());
        let cert = gen_triple(&c).unwrap();
        assert!(cert.c().is_zero() && cert.is_bipartite());
        assert!(gen_bipartite_triple(&c).unwrap().is_bipartite());
        assert_eq!(gen_condition_i_decomposition(&pair, &c).unwrap(), pair.decomposition);
    }

    #[test]
    fn determinism() {
        for (d, p) in [(1, 7), (3, 101), (4, 10007)] {
            let c = cfg(d, p, 42);
            assert_eq!(gen_lr_pair(&c).unwrap(), gen_lr_pair(&c).unwrap());
            assert_eq!(gen_triple(&c).unwrap(), gen_triple(&c).unwrap());
        }
    }

    #[test]
    fn generated_pairs_revalidate() {
        for seed in 0..20 {
            let pair = gen_lr_pair(&cfg(seed as usize % 6, 101, seed)).unwrap();
            let again = find_lr_decomposition(&pair.a, &pair.b).unwrap();
            assert_eq!(again, pair);
        }
    }

    #[test]
    fn worked_rebase() {
        let (a, b, vprime) = fixture_triple().unwrap();
        let pair = find_lr_decomposition(&a, &b).unwrap();
        let alpha = ToeplitzParams::from_i64(a.field(), &[1, 0, 1]).unwrap();
        assert_eq!(rebase_decomposition(&pair, &alpha).unwrap(), vprime);
    }

    #[test]
    fn condition_i_decomposition_keeps_bottom_line() {
        let c = cfg(2, 7, 5);
        let mut g = Generator::new(c);
        let pair = g.gen_lr_pair().unwrap();
        if let Ok(v) = g.gen_condition_i_decomposition(&pair) {
            assert_eq!(v.line(0), pair.decomposition.line(0));
            assert!(condition_check(&pair.a, &pair.b, &v, Condition::I));
        }
    }

    #[test]
    fn generated_triples_satisfy_invariants() {
        for d in 0..=6 {
            for p in [7, 101, 10007] {
                let cert = gen_triple(&cfg(d, p, (d as u64) * 1000 + p)).unwrap();
                let again = verify_triple(cert.a(), cert.b(), cert.c()).unwrap();
                assert_eq!(again, cert);
                let report = certificate_invariants(&cert);
                assert!(report.all_passed(), "d={d} p={p}: {:?}", report.failures());
                assert_eq!(cert.decomposition(PairLabel::AB).d(), d);
            }
        }
    }

    #[test]
    fn bipartite_generation() {
        assert_eq!(gen_bipartite_triple(&cfg(3, 7, 0)), Err(Error::OddD(3)));
        for d in [0, 2, 4] {
            for p in [7, 101] {
                let cert = gen_bipartite_triple(&cfg(d, p, 9)).unwrap();
                assert!(cert.is_bipartite());
                assert!(certificate_invariants(&cert).all_passed());
            }
        }
    }

    #[test]
    fn meta_reports_rng_and_rate() {
        let mut g = Generator::new(cfg(3, 101, 7));
        g.gen_triple().unwrap();
        let meta = g.meta();
        assert_eq!(meta.rng, RNG_NAME);
        assert!(meta.attempts >= 1);
        assert!(meta.acceptance_rate > 0.0 && meta.acceptance_rate <= 1.0);
    }
}
