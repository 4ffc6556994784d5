use lrlab::decomp::{action_check, idempotent_sequence, Action, Decomposition};
use lrlab::gen::{GenConfig, Generator};
use lrlab::lrpair::find_lr_decomposition;
use lrlab::lrtriple::{
    certificate_invariants, condition_check, extend_pair, joint_extension, out_in_split, scale_triple,
    verify_triple, Condition,
};
use lrlab::toeplitz::{anti_diagonal_transpose, toeplitz_matrix, ToeplitzParams};
use lrlab::{Matrix, PrimeField};
use proptest::prelude::*;

const PRIMES: [u64; 3] = [7, 101, 10007];

fn prime() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PrimeField::new(p).unwrap())
}

fn square(max_n: usize) -> impl Strategy<Value = Matrix> {
    (prime(), 1..=max_n).prop_flat_map(|(f, n)| {
        prop::collection::vec(prop::collection::vec(0..f.p(), n), n)
            .prop_map(move |rows| Matrix::from_rows(f, rows).unwrap())
    })
}

fn config() -> impl Strategy<Value = GenConfig> {
    (0usize..=5, prime(), any::<u64>()).prop_map(|(d, f, s)| GenConfig::new(d, f, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverse_and_distributivity(p in prop::sample::select(PRIMES.to_vec()), a: u64, b: u64, c: u64) {
        let f = PrimeField::new(p).unwrap();
        let (x, y, z) = (f.from_residue(a % p), f.from_residue(b % p), f.from_residue(c % p));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        if !x.is_zero() {
            prop_assert_eq!(x * x.inv().unwrap(), f.one());
        }
    }

    #[test]
    fn inverse_and_rank_nullity(m in square(5)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.n_cols());
        if let Ok(inv) = m.inverse() {
            prop_assert_eq!(&m * &inv, Matrix::identity(m.field(), m.n_rows()));
        } else {
            prop_assert!(!m.is_invertible());
        }
    }

    #[test]
    fn anti_diagonal_transpose_is_an_antiautomorphism(m in square(5), seed: u64) {
        let f = m.field();
        let n = m.n_rows();
        let rows = (0..n).map(|i| (0..n).map(|j| (seed.wrapping_mul(31 + i as u64 * 7 + j as u64)) % f.p()).collect()).collect();
        let k = Matrix::from_rows(f, rows).unwrap();
        prop_assert_eq!(anti_diagonal_transpose(&anti_diagonal_transpose(&m)), m.clone());
        prop_assert_eq!(
            anti_diagonal_transpose(&(&m * &k)),
            &anti_diagonal_transpose(&k) * &anti_diagonal_transpose(&m)
        );
    }

    #[test]
    fn toeplitz_matrices_commute(f in prime(), d in 0usize..6, xs in prop::collection::vec(1u64..10_000, 12)) {
        let a = ToeplitzParams::new((0..=d).map(|i| f.from_residue(xs[i] % f.p())).collect()).unwrap();
        let b = ToeplitzParams::new((0..=d).map(|i| f.from_residue(xs[i + 6] % f.p())).collect()).unwrap();
        let (ta, tb) = (toeplitz_matrix(&a), toeplitz_matrix(&b));
        prop_assert_eq!(&ta * &tb, &tb * &ta);
    }

    #[test]
    fn generated_pairs_are_detected(cfg in config()) {
        let pair = Generator::new(cfg).gen_lr_pair().unwrap();
        let again = find_lr_decomposition(&pair.a, &pair.b).unwrap();
        prop_assert_eq!(&again, &pair);
        prop_assert!(action_check(&pair.a, &pair.decomposition, Action::Lowers));
        prop_assert!(action_check(&pair.b, &pair.decomposition, Action::Raises));
        prop_assert!(pair.phi.iter().all(|x| !x.is_zero()));
        prop_assert!(idempotent_sequence(&pair.decomposition).is_valid());
    }

    #[test]
    fn extension_realises_the_given_decomposition(cfg in config()) {
        let mut gen = Generator::new(cfg);
        let input = gen.gen_extension_input().unwrap();
        let ext = extend_pair(&input.pair.a, &input.pair.b, &input.vprime).unwrap();
        let cert = &ext.certificate;
        prop_assert_eq!(cert.decomposition(lrlab::error::PairLabel::AC), &input.vprime);
        prop_assert_eq!(cert.phi2(), cert.phi());
        prop_assert_eq!(cert.alpha1(), &input.alpha);
        let report = certificate_invariants(cert);
        prop_assert!(report.all_passed(), "{:?}", report.failures());
    }

    #[test]
    fn joint_extension_agrees_with_single_condition(cfg in config()) {
        let mut gen = Generator::new(cfg);
        let input = gen.gen_extension_input().unwrap();
        let (a, b) = (&input.pair.a, &input.pair.b);
        let ext = extend_pair(a, b, &input.vprime).unwrap();
        let vdp: Decomposition = ext.certificate.decomposition(lrlab::error::PairLabel::BC).clone();
        prop_assert!(condition_check(a, b, &vdp, Condition::II));
        let joint = joint_extension(a, b, &input.vprime, &vdp).unwrap();
        prop_assert_eq!(joint.c, ext.c);
    }

    #[test]
    fn certificates_are_reproducible_and_scale(cfg in config(), s in 1u64..7) {
        let cert = Generator::new(cfg).gen_triple().unwrap();
        let again = verify_triple(cert.a(), cert.b(), cert.c()).unwrap();
        prop_assert_eq!(&again, &cert);
        let f = cert.field();
        let g = f.from_residue(s);
        let scaled = scale_triple(&cert, g, g, g).unwrap();
        prop_assert!(scaled.report.all_passed(), "{:?}", scaled.report.failures());
    }

    #[test]
    fn bipartite_split_is_a_direct_sum(d in 0usize..=2, f in prime(), seed: u64) {
        let cert = Generator::new(GenConfig::new(2 * d, f, seed).unwrap()).gen_bipartite_triple().unwrap();
        let split = out_in_split(&cert, cert.c()).unwrap();
        prop_assert_eq!(split.v_out.dim() + split.v_in.dim(), cert.d() + 1);
        prop_assert_eq!(split.v_out.intersect(&split.v_in).dim(), 0);
        prop_assert_eq!(&(&split.x_out + &split.x_in), cert.c());
        prop_assert_eq!(split.v_out.dim(), d + 1);
    }
}
