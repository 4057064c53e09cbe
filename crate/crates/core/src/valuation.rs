//! The pair/impair decomposition `n = 2^h · u` and its algebra.
//!
//! `h` is the *degree of parity* of `n`: the number of times `n` can be
//! halved before an odd number is reached. Degrees are machine integers
//! (`h` never exceeds the bit length of `n`). Odd numbers have degree zero
//! and zero itself has no degree at all.

use crate::{Error, Natural, Result};

/// `n = 2^h · u` with `u` odd and `h` maximal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityDecomposition {
    n: Natural,
    h: u64,
    u: Natural,
}

impl ParityDecomposition {
    /// Builds the decomposition with the given degree and odd part.
    pub fn from_parts(h: u64, u: Natural) -> Result<Self> {
        if !u.is_odd() {
            return Err(Error::domain("odd part must be odd"));
        }
        let n = u.shl(h);
        Ok(ParityDecomposition { n, h, u })
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    /// Degree of parity.
    pub fn degree(&self) -> u64 {
        self.h
    }

    /// Odd part.
    pub fn odd_part(&self) -> &Natural {
        &self.u
    }

    pub fn is_odd(&self) -> bool {
        self.h == 0
    }
}

/// `n = x^k · u` with `x ∤ u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseDecomposition {
    x: Natural,
    n: Natural,
    k: u64,
    u: Natural,
}

impl BaseDecomposition {
    pub fn base(&self) -> &Natural {
        &self.x
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    /// How many times `x` divides `n`.
    pub fn degree(&self) -> u64 {
        self.k
    }

    pub fn cofactor(&self) -> &Natural {
        &self.u
    }
}

/// The result of halving `n` until it turns odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub decomposition: ParityDecomposition,
    /// Number of halvings performed; always equal to the degree.
    pub halvings: u64,
}

/// Degree of parity and odd part of `n`.
pub fn decompose(n: &Natural) -> Result<ParityDecomposition> {
    let h = n
        .trailing_zeros()
        .ok_or_else(|| Error::domain("degree of parity of 0 is undefined"))?;
    Ok(ParityDecomposition {
        n: n.clone(),
        h,
        u: n.shr(h),
    })
}

/// Same result as [`decompose`], obtained by literal repeated halving.
///
/// The loop stops because a positive integer admits no infinite descent of
/// halvings; the number of passes is reported alongside.
pub fn descent(n: &Natural) -> Result<Descent> {
    if n.is_zero() {
        return Err(Error::domain("degree of parity of 0 is undefined"));
    }
    let mut u = n.clone();
    let mut halvings = 0u64;
    while u.is_even() {
        u = u.half();
        halvings += 1;
    }
    Ok(Descent {
        decomposition: ParityDecomposition {
            n: n.clone(),
            h: halvings,
            u,
        },
        halvings,
    })
}

pub fn recompose(d: &ParityDecomposition) -> Natural {
    d.u.shl(d.h)
}

/// Decomposition of `a.n · b.n` from the factors' decompositions alone:
/// degrees add, odd parts multiply.
pub fn multiply_decomposed(a: &ParityDecomposition, b: &ParityDecomposition) -> ParityDecomposition {
    ParityDecomposition {
        n: &a.n * &b.n,
        h: a.h + b.h,
        u: &a.u * &b.u,
    }
}

/// Degree of parity of `n^e` without forming the power.
pub fn power_degree(n: &Natural, e: u64) -> Result<u64> {
    Ok(decompose(n)?.h * e)
}

/// Degree of parity of `n²`; always even.
pub fn square_degree(n: &Natural) -> Result<u64> {
    power_degree(n, 2)
}

/// Degree of parity of `n³`; always a multiple of three.
pub fn cube_degree(n: &Natural) -> Result<u64> {
    power_degree(n, 3)
}

/// Maximal `k` with `x^k | n`, and the cofactor.
pub fn base_decompose(x: &Natural, n: &Natural) -> Result<BaseDecomposition> {
    if *x <= 1u64 {
        return Err(Error::domain("base must be at least 2"));
    }
    if n.is_zero() {
        return Err(Error::domain("0 is divisible by every power of the base"));
    }
    if *x == 2u64 {
        let d = decompose(n)?;
        return Ok(BaseDecomposition {
            x: x.clone(),
            n: n.clone(),
            k: d.h,
            u: d.u,
        });
    }
    let mut u = n.clone();
    let mut k = 0u64;
    loop {
        let (q, r) = u.div_rem(x).expect("base is non-zero");
        if !r.is_zero() {
            break;
        }
        u = q;
        k += 1;
    }
    Ok(BaseDecomposition {
        x: x.clone(),
        n: n.clone(),
        k,
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn hu(n: u64) -> (u64, u64) {
        let d = decompose(&nat(n)).unwrap();
        (d.degree(), d.odd_part().to_u64().unwrap())
    }

    #[test]
    fn worked_decompositions() {
        assert_eq!(hu(28), (2, 7));
        assert_eq!(hu(30), (1, 15));
        assert_eq!(hu(40), (3, 5));
        assert_eq!(hu(32), (5, 1));
        assert_eq!(hu(1), (0, 1));
        assert_eq!(hu(96), (5, 3));
    }

    #[test]
    fn zero_has_no_degree() {
        assert!(matches!(decompose(&Natural::zero()), Err(Error::Domain(_))));
        assert!(matches!(descent(&Natural::zero()), Err(Error::Domain(_))));
        assert!(matches!(square_degree(&Natural::zero()), Err(Error::Domain(_))));
        assert!(matches!(cube_degree(&Natural::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn recompose_inverts() {
        let d = ParityDecomposition::from_parts(2, nat(7)).unwrap();
        assert_eq!(recompose(&d), 28u64);
        assert_eq!(recompose(&ParityDecomposition::from_parts(0, nat(1)).unwrap()), 1u64);
        assert_eq!(recompose(&ParityDecomposition::from_parts(5, nat(3)).unwrap()), 96u64);
        assert!(ParityDecomposition::from_parts(1, nat(4)).is_err());
    }

    #[test]
    fn products_add_degrees() {
        let m = |a: u64, b: u64| {
            let p = multiply_decomposed(&decompose(&nat(a)).unwrap(), &decompose(&nat(b)).unwrap());
            (p.n().to_u64().unwrap(), p.degree(), p.odd_part().to_u64().unwrap())
        };
        assert_eq!(m(12, 6), (72, 3, 9));
        assert_eq!(m(6, 6), (36, 2, 9));
        assert_eq!(m(3, 5), (15, 0, 15));
    }

    #[test]
    fn square_and_cube_degrees() {
        assert_eq!(square_degree(&nat(6)).unwrap(), 2);
        assert_eq!(square_degree(&nat(7)).unwrap(), 0);
        assert_eq!(square_degree(&nat(40)).unwrap(), 6);
        assert_eq!(cube_degree(&nat(2)).unwrap(), 3);
        assert_eq!(cube_degree(&nat(5)).unwrap(), 0);
        assert_eq!(cube_degree(&nat(12)).unwrap(), 6);
    }

    #[test]
    fn base_decompositions() {
        let b = |x: u64, n: u64| {
            let d = base_decompose(&nat(x), &nat(n)).unwrap();
            (d.degree(), d.cofactor().to_u64().unwrap())
        };
        assert_eq!(b(3, 45), (2, 5));
        assert_eq!(b(5, 7), (0, 7));
        assert_eq!(b(2, 28), (2, 7));
        assert_eq!(b(10, 1000), (3, 1));
        assert!(matches!(base_decompose(&nat(1), &nat(5)), Err(Error::Domain(_))));
        assert!(matches!(base_decompose(&nat(0), &nat(5)), Err(Error::Domain(_))));
        assert!(matches!(base_decompose(&nat(3), &nat(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn descent_counts_halvings() {
        let d = descent(&nat(96)).unwrap();
        assert_eq!(d.halvings, 5);
        assert_eq!(d.decomposition, decompose(&nat(96)).unwrap());
    }

    #[test]
    fn decompose_large_value() {
        let n = Natural::power_of_two(200) * nat(3);
        let d = decompose(&n).unwrap();
        assert_eq!(d.degree(), 200);
        assert_eq!(d.odd_part(), &nat(3));
    }
}
