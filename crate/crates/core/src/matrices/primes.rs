/// Trial-division primality test.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x % 2 == 0 {
        return x == 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= x` (2 for `x <= 2`).
pub fn next_prime_geq(x: u64) -> u64 {
    let mut p = x.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime_geq(30), 31);
        assert_eq!(next_prime_geq(29), 29);
        assert_eq!(next_prime_geq(2 * 69 + 1), 139);
        assert_eq!(next_prime_geq(2), 2);
        assert_eq!(next_prime_geq(100), 101);
    }

    #[test]
    fn primality_against_sieve() {
        let n = 2000;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), p, "{i}");
        }
    }
}
