use convmc::crypto::{encrypt, sample_error, Schedule};
use convmc::keygen::{keygen, KeyParams};
use convmc::laurent::BlockSequence;
use convmc_cli::format::{read_ciphertext, read_public, read_secret, write_ciphertext, write_public, write_secret};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn field_and_length() -> impl Strategy<Value = (u32, u32, usize)> {
    prop_oneof![
        Just((7, 1, 6)),
        Just((13, 1, 12)),
        Just((2, 3, 6)),
        Just((2, 4, 14)),
        Just((2, 6, 30)),
        Just((2, 8, 40)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn keys_and_ciphertexts_round_trip(
        (p, m, n) in field_and_length(),
        k_frac in 0.2f64..0.8,
        mu in 0usize..=1,
        extra in 0usize..=2,
        seed in any::<u64>(),
    ) {
        let k = ((n as f64 * k_frac) as usize).clamp(1, n - 2);
        let nu = mu + extra;
        let d = if mu == 0 { vec![n] } else { vec![n / 3 / 2 * 2, n - 2 * (n / 3 / 2 * 2), n / 3 / 2 * 2] };
        let (sk, pk) = keygen(&KeyParams::new(p, m, n, k, mu, nu, d).with_seed(seed)).unwrap();
        let pk = pk.with_sigma(if seed % 2 == 0 { Some(3) } else { None });

        let pb = write_public(&pk).unwrap();
        prop_assert_eq!(read_public(&pb).unwrap(), pk.clone());

        let sb = write_secret(&sk).unwrap();
        let back = read_secret(&sb).unwrap();
        prop_assert_eq!(write_secret(&back).unwrap(), sb);
        prop_assert_eq!(back.public_key().unwrap(), pk.clone().with_sigma(None));

        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let e = sample_error(&pk, 3 + pk.memory(), Schedule::GreedyMax, &mut rng);
        let ct = encrypt(&pk, &BlockSequence::zeros(k, 3), &e).unwrap();
        let cb = write_ciphertext(&pk, &ct).unwrap();
        let (h, back) = read_ciphertext(&cb).unwrap();
        prop_assert_eq!(back, ct);
        prop_assert_eq!(usize::from(h.n), n);
    }
}
