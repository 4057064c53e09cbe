use num_bigint::BigInt;
use num_rational::BigRational;
use parity_forge_core::ancient::{
    binary_decompose, egyptian_multiply, nicomachus_cell, nicomachus_index, pair_bijection_decode,
    pair_bijection_encode, perfect_numbers, proper_divisor_sum, unit_fraction_split,
};
use parity_forge_core::Natural;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

#[test]
fn egyptian_totals_match_builtin_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_13);
    for _ in 0..100_000 {
        let a: u64 = rng.gen_range(1..=u32::MAX as u64);
        let b: u64 = rng.gen_range(1..=u32::MAX as u64);
        let w = egyptian_multiply(&nat(a), &nat(b)).unwrap();
        assert_eq!(w.total, Natural::from(u128::from(a) * u128::from(b)), "{a} × {b}");
        assert_eq!(w.selected().count() as u32, b.count_ones());
        let sum: Natural = w.selected().map(|r| r.partial.clone()).sum();
        assert_eq!(sum, w.total);
    }
}

#[test]
fn egyptian_is_commutative_in_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (a, b) = (rng.gen_range(1..100_000u64), rng.gen_range(1..100_000u64));
        let ab = egyptian_multiply(&nat(a), &nat(b)).unwrap();
        let ba = egyptian_multiply(&nat(b), &nat(a)).unwrap();
        assert_eq!(ab.total, ba.total);
    }
}

#[test]
fn binary_sums_reconstruct() {
    for n in 1..=100_000u64 {
        let b = binary_decompose(&nat(n)).unwrap();
        assert_eq!(b.value(), n);
        assert!(b.powers.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(b.powers.len() as u32, n.count_ones());
    }
}

#[test]
fn table_of_evens_partitions_the_evens() {
    const N: u64 = 100_000;
    let mut hits = vec![0u8; N as usize + 1];
    for k in 1..=17 {
        let mut m = 0u64;
        loop {
            let v = nicomachus_cell(k, &nat(m)).unwrap().to_u64().unwrap();
            if v > N {
                break;
            }
            hits[v as usize] += 1;
            m += 1;
        }
    }
    for n in 1..=N {
        let expected = u8::from(n % 2 == 0);
        assert_eq!(hits[n as usize], expected, "n = {n}");
        if n % 2 == 0 {
            let (k, m) = nicomachus_index(&nat(n)).unwrap();
            assert_eq!(nicomachus_cell(k, &m).unwrap(), n);
        }
    }
}

#[test]
fn bijection_round_trips_on_a_range() {
    for n in 1..=1_000_000u64 {
        let (i, j) = pair_bijection_decode(&nat(n)).unwrap();
        assert_eq!(pair_bijection_encode(i, &j), n);
    }
}

#[test]
fn bijection_round_trips_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for _ in 0..100_000 {
        let i = rng.gen_range(0..200u64);
        let j = nat(rng.gen::<u64>());
        assert_eq!(pair_bijection_decode(&pair_bijection_encode(i, &j)).unwrap(), (i, j));
    }
}

#[test]
fn unit_fractions_sum_to_one() {
    for p in perfect_numbers(20).unwrap() {
        let parts = unit_fraction_split(&p.perfect).unwrap();
        let sum: BigRational = parts
            .iter()
            .map(|d| BigRational::new(BigInt::from(1), BigInt::from(d.to_u64().unwrap())))
            .sum();
        assert_eq!(sum, BigRational::from_integer(BigInt::from(1)), "{}", p.perfect);
    }
}

#[test]
fn perfect_numbers_pass_the_divisor_sum() {
    let found = perfect_numbers(31).unwrap();
    for p in &found {
        let v = p.perfect.to_u64().unwrap();
        assert_eq!(proper_divisor_sum(v), u128::from(v));
    }
    // Brute force below 10^4 finds the same ones.
    let small: Vec<u64> = (2..10_000u64).filter(|&n| proper_divisor_sum(n) == u128::from(n)).collect();
    let listed: Vec<u64> = found.iter().filter_map(|p| p.perfect.to_u64()).filter(|&v| v < 10_000).collect();
    assert_eq!(small, listed);
}
