use proptest::prelude::*;

use recipro::residue::{
    factorial_mod, is_prime, legendre_euler, legendre_oracle, pow_mod, OddPrime, Sign,
};
use recipro::suites::odd_primes_up_to;

fn trial_division(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

proptest! {
    #[test]
    fn pow_mod_matches_repeated_multiplication(b in 0u64..64, e in 0u64..64, m in 2u64..=(1 << 16)) {
        let b = b % m;
        let mut expected = 1 % m;
        for _ in 0..e {
            expected = expected * b % m;
        }
        prop_assert_eq!(pow_mod(b, e, m), expected);
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..2_000_000) {
        prop_assert_eq!(is_prime(n), trial_division(n));
    }

    #[test]
    fn legendre_is_multiplicative(i in 0usize..167, a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let primes = odd_primes_up_to(1000);
        let p = OddPrime::new(primes[i % primes.len()]).unwrap();
        prop_assume!(a % p.get() != 0 && b % p.get() != 0);
        let ab = (a % p.get()) * (b % p.get());
        prop_assert_eq!(
            legendre_euler(ab, p).unwrap(),
            legendre_euler(a, p).unwrap() * legendre_euler(b, p).unwrap()
        );
    }
}

#[test]
fn euler_matches_square_oracle_and_census_for_small_primes() {
    for p in odd_primes_up_to(300) {
        let p = OddPrime::new(p).unwrap();
        let mut residues = 0;
        for a in 1..p.get() {
            let e = legendre_euler(a, p).unwrap();
            assert_eq!(e, legendre_oracle(a, p).unwrap(), "({a}/{p})");
            if e == Sign::Plus {
                residues += 1;
            }
        }
        assert_eq!(residues, p.half());
    }
}

#[test]
fn wilson_value_separates_primes_from_odd_composites() {
    for n in (5u64..2000).step_by(2) {
        let is_minus_one = factorial_mod(n - 1, n).unwrap() == n - 1;
        assert_eq!(is_minus_one, is_prime(n), "n = {n}");
    }
}
