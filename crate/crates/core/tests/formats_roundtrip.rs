mod oracles;

use oracles::formats::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FILES: u64 = 100;

#[test]
fn pfm_files_round_trip() {
    for seed in 0..FILES {
        let bytes = pfm_bytes(&mut ChaCha8Rng::seed_from_u64(seed));
        pfm_round_trip(&bytes).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn pgm_files_round_trip() {
    for seed in 0..FILES {
        let bytes = pgm_bytes(&mut ChaCha8Rng::seed_from_u64(seed));
        pgm_round_trip(&bytes).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn lray_files_round_trip() {
    for seed in 0..FILES {
        let bytes = lray_bytes(&mut ChaCha8Rng::seed_from_u64(seed));
        lray_round_trip(&bytes).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn ascii_ply_files_round_trip() {
    for seed in 0..FILES {
        let bytes = ply_bytes(&mut ChaCha8Rng::seed_from_u64(seed), false);
        ply_round_trip(&bytes).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn binary_ply_files_round_trip() {
    for seed in 0..FILES {
        let bytes = ply_bytes(&mut ChaCha8Rng::seed_from_u64(seed), true);
        ply_round_trip(&bytes).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn truncated_files_are_rejected() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = pfm_bytes(&mut rng);
        b.pop();
        assert!(pfm_round_trip(&b).is_err());
        let mut b = pgm_bytes(&mut rng);
        b.pop();
        assert!(pgm_round_trip(&b).is_err());
        let mut b = lray_bytes(&mut rng);
        b.push(0);
        assert!(lray_round_trip(&b).is_err());
    }
}
