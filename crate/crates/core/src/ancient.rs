//! Binary decomposition, Egyptian doubling multiplication, the Nicomachus
//! table of evens, the pair bijection `(i, j) ↦ 2^i(2j+1)`, and perfect
//! numbers from Mersenne primes.

use alloc::format;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::natural::is_prime_u64;
use crate::valuation::decompose;
use crate::{Error, Natural, Result};

/// `n` as a sum of distinct powers of two.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BinarySum {
    pub n: Natural,
    /// Exponents, strictly decreasing.
    pub powers: Vec<u64>,
}

impl BinarySum {
    pub fn value(&self) -> Natural {
        self.powers.iter().map(|&e| Natural::power_of_two(e)).sum()
    }
}

pub fn binary_decompose(n: &Natural) -> Result<BinarySum> {
    if n.is_zero() {
        return Err(Error::domain("0 has no decomposition into powers of two"));
    }
    let powers = (0..n.bits()).rev().filter(|&i| n.bit(i)).collect();
    Ok(BinarySum { n: n.clone(), powers })
}

/// One line of the doubling table.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EgyptianRow {
    /// The power of two in the multiplier column.
    pub factor: Natural,
    /// `factor × multiplicand`, obtained by doubling the row above.
    pub partial: Natural,
    /// Whether `factor` occurs in the multiplier's binary decomposition.
    pub selected: bool,
}

/// The full doubling table for `multiplicand × multiplier`. Exactly
/// `popcount(multiplier)` rows are selected.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EgyptianWorksheet {
    pub multiplicand: Natural,
    pub multiplier: Natural,
    pub rows: Vec<EgyptianRow>,
    pub total: Natural,
}

impl EgyptianWorksheet {
    pub fn selected(&self) -> impl Iterator<Item = &EgyptianRow> {
        self.rows.iter().filter(|r| r.selected)
    }
}

/// Doubles the multiplicand and adds the rows picked out by the binary
/// decomposition of the multiplier.
pub fn egyptian_multiply(multiplicand: &Natural, multiplier: &Natural) -> Result<EgyptianWorksheet> {
    if multiplicand.is_zero() || multiplier.is_zero() {
        return Err(Error::domain("the doubling method has no zero operand"));
    }
    let picked = binary_decompose(multiplier)?;
    let top = picked.powers[0];
    let mut rows = Vec::with_capacity(top as usize + 1);
    let mut factor = Natural::one();
    let mut partial = multiplicand.clone();
    for e in 0..=top {
        rows.push(EgyptianRow {
            factor: factor.clone(),
            partial: partial.clone(),
            selected: picked.powers.contains(&e),
        });
        factor = factor.double();
        partial = partial.double();
    }
    let total = rows.iter().filter(|r| r.selected).map(|r| r.partial.clone()).sum();
    Ok(EgyptianWorksheet {
        multiplicand: multiplicand.clone(),
        multiplier: multiplier.clone(),
        rows,
        total,
    })
}

/// Row `k ≥ 1`, column `m ≥ 0` of the table of evens: `2^k·(2m+1)`.
pub fn nicomachus_cell(k: u64, m: &Natural) -> Result<Natural> {
    if k == 0 {
        return Err(Error::domain("rows of the table of evens start at k = 1"));
    }
    Ok(pair_bijection_encode(k, m))
}

/// The cell `(k, m)` holding the even number `n`.
pub fn nicomachus_index(n: &Natural) -> Result<(u64, Natural)> {
    if n.is_zero() || n.is_odd() {
        return Err(Error::domain(format!("{n} is not a positive even number")));
    }
    pair_bijection_decode(n)
}

/// The first `rows × cols` cells, row by row.
pub fn nicomachus_table(rows: u64, cols: u64) -> Vec<Vec<Natural>> {
    (1..=rows)
        .map(|k| (0..cols).map(|m| pair_bijection_encode(k, &Natural::from(m))).collect())
        .collect()
}

/// `(i, j) ↦ 2^i·(2j+1)`, a bijection onto the positive integers.
pub fn pair_bijection_encode(i: u64, j: &Natural) -> Natural {
    (j.double() + Natural::one()).shl(i)
}

pub fn pair_bijection_decode(n: &Natural) -> Result<(u64, Natural)> {
    let d = decompose(n)?;
    Ok((d.degree(), d.odd_part().half()))
}

/// Largest bound accepted by [`perfect_numbers`].
pub const PERFECT_MAX_K: u64 = 31;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PerfectNumber {
    pub k: u64,
    /// `2^k − 1`, prime.
    pub mersenne: Natural,
    /// `2^(k−1)·(2^k − 1)`.
    pub perfect: Natural,
}

/// Perfect numbers `2^(k−1)(2^k − 1)` for every `k < max_k` with `2^k − 1`
/// prime, each confirmed by summing its divisors.
///
/// The bound is exclusive: `max_k = 13` stops before the Mersenne prime
/// `2^13 − 1` and yields 6, 28, 496 and 8128.
pub fn perfect_numbers(max_k: u64) -> Result<Vec<PerfectNumber>> {
    if max_k > PERFECT_MAX_K {
        return Err(Error::Config(format!(
            "max_k {max_k} exceeds {PERFECT_MAX_K}, the trial-division bound"
        )));
    }
    let mut out = Vec::new();
    for k in 1..max_k {
        let mersenne = (1u64 << k) - 1;
        if !is_prime_u64(mersenne) {
            continue;
        }
        let perfect = mersenne << (k - 1);
        if proper_divisor_sum(perfect) != u128::from(perfect) {
            return Err(Error::domain(format!("{perfect} failed the divisor-sum check")));
        }
        out.push(PerfectNumber {
            k,
            mersenne: Natural::from(mersenne),
            perfect: Natural::from(perfect),
        });
    }
    Ok(out)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= n / p {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n ≥ 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = alloc::vec![1u64];
    for (p, e) in factorize(n) {
        let current = ds.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            ds.extend(current.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// `σ(n) − n`.
pub fn proper_divisor_sum(n: u64) -> u128 {
    divisors(n).iter().map(|&d| u128::from(d)).sum::<u128>() - u128::from(n)
}

/// Denominators `n/d` for the proper divisors `d` of the perfect number `n`,
/// in increasing order of `d`; the unit fractions `1/(n/d)` sum to 1.
pub fn unit_fraction_split(n: &Natural) -> Result<Vec<Natural>> {
    let v = n
        .to_u64()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::domain(format!("{n} is outside the desk-scale range")))?;
    if proper_divisor_sum(v) != u128::from(v) {
        return Err(Error::domain(format!("{n} is not perfect")));
    }
    Ok(divisors(v).into_iter().filter(|&d| d != v).map(|d| Natural::from(v / d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn binary_examples() {
        assert_eq!(binary_decompose(&nat(13)).unwrap().powers, [3, 2, 0]);
        assert_eq!(binary_decompose(&nat(7)).unwrap().powers, [2, 1, 0]);
        assert_eq!(binary_decompose(&nat(1)).unwrap().powers, [0]);
        assert!(binary_decompose(&nat(0)).is_err());
    }

    #[test]
    fn egyptian_examples() {
        let w = egyptian_multiply(&nat(15), &nat(13)).unwrap();
        assert_eq!(w.total, 195u64);
        let partials: Vec<u64> = w.selected().map(|r| r.partial.to_u64().unwrap()).collect();
        assert_eq!(partials, [15, 60, 120]);
        assert_eq!(w.rows.len(), 4);
        let one = egyptian_multiply(&nat(9), &nat(1)).unwrap();
        assert_eq!((one.total.to_u64(), one.rows.len()), (Some(9), 1));
        assert_eq!(egyptian_multiply(&nat(23), &nat(19)).unwrap().total, 437u64);
        assert!(egyptian_multiply(&nat(0), &nat(3)).is_err());
    }

    #[test]
    fn nicomachus_examples() {
        assert_eq!(nicomachus_cell(2, &nat(3)).unwrap(), 28u64);
        assert_eq!(nicomachus_cell(1, &nat(0)).unwrap(), 2u64);
        assert_eq!(nicomachus_index(&nat(96)).unwrap(), (5, nat(1)));
        assert!(nicomachus_index(&nat(7)).is_err());
        assert!(nicomachus_index(&nat(0)).is_err());
        assert!(nicomachus_cell(0, &nat(1)).is_err());
        assert_eq!(nicomachus_table(2, 3), [[nat(2), nat(6), nat(10)], [nat(4), nat(12), nat(20)]]);
    }

    #[test]
    fn bijection_examples() {
        assert_eq!(pair_bijection_encode(0, &nat(0)), 1u64);
        assert_eq!(pair_bijection_encode(2, &nat(3)), 28u64);
        assert_eq!(pair_bijection_decode(&nat(40)).unwrap(), (3, nat(2)));
        assert!(pair_bijection_decode(&nat(0)).is_err());
    }

    #[test]
    fn perfect_examples() {
        let ps = perfect_numbers(13).unwrap();
        let values: Vec<u64> = ps.iter().map(|p| p.perfect.to_u64().unwrap()).collect();
        assert_eq!(values, [6, 28, 496, 8128]);
        assert_eq!((ps[0].k, ps[0].mersenne.to_u64()), (2, Some(3)));
        assert!(!ps.iter().any(|p| p.k == 4));
        assert_eq!(perfect_numbers(31).unwrap().len(), 7);
        assert_eq!(perfect_numbers(14).unwrap().last().unwrap().perfect, 33_550_336u64);
        assert!(matches!(perfect_numbers(32), Err(Error::Config(_))));
    }

    #[test]
    fn unit_fractions() {
        assert_eq!(unit_fraction_split(&nat(6)).unwrap(), [nat(6), nat(3), nat(2)]);
        assert_eq!(unit_fraction_split(&nat(28)).unwrap(), [nat(28), nat(14), nat(7), nat(4), nat(2)]);
        assert!(matches!(unit_fraction_split(&nat(12)), Err(Error::Domain(_))));
    }

    #[test]
    fn divisor_enumeration() {
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), [1]);
        assert_eq!(proper_divisor_sum(6), 6);
    }
}
