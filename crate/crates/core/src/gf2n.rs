//! Table-driven arithmetic in GF(2^n).
//!
//! Field elements are `u32` bit vectors (bit `i` is the coefficient of `x^i`).
//! Exponents are residues modulo `2^n - 1` and are also stored as `u32`.

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 28;

/// Default primitive polynomials, indexed by degree. Degrees 5, 6, 7, 12, 13
/// and 19 carry the polynomials the embedded datasets were computed with.
const DEFAULT_POLYS: [u32; 29] = [
    0,
    0b11,                                  // x + 1
    0b111,                                 // x^2 + x + 1
    0b1011,                                // x^3 + x + 1
    0b10011,                               // x^4 + x + 1
    (1 << 5) | (1 << 2) | 1,               // x^5 + x^2 + 1
    (1 << 6) | (1 << 4) | (1 << 3) | 0b11, // x^6 + x^4 + x^3 + x + 1
    (1 << 7) | 0b11,                       // x^7 + x + 1
    (1 << 8) | (1 << 4) | (1 << 3) | (1 << 2) | 1,
    (1 << 9) | (1 << 4) | 1,
    (1 << 10) | (1 << 3) | 1,
    (1 << 11) | (1 << 2) | 1,
    (1 << 12) | (1 << 7) | (1 << 6) | (1 << 5) | (1 << 3) | 0b11,
    (1 << 13) | (1 << 4) | (1 << 3) | 0b11,
    (1 << 14) | (1 << 10) | (1 << 6) | 0b11,
    (1 << 15) | 0b11,
    (1 << 16) | (1 << 12) | (1 << 3) | 0b11,
    (1 << 17) | (1 << 3) | 1,
    (1 << 18) | (1 << 7) | 1,
    (1 << 19) | (1 << 5) | (1 << 2) | 0b11,
    (1 << 20) | (1 << 3) | 1,
    (1 << 21) | (1 << 2) | 1,
    (1 << 22) | 0b11,
    (1 << 23) | (1 << 5) | 1,
    (1 << 24) | (1 << 7) | (1 << 2) | 0b11,
    (1 << 25) | (1 << 3) | 1,
    (1 << 26) | (1 << 6) | (1 << 2) | 0b11,
    (1 << 27) | (1 << 5) | (1 << 2) | 0b11,
    (1 << 28) | (1 << 3) | 1,
];

/// The default primitive polynomial for degree `n`.
pub fn default_poly(n: u32) -> Result<u32> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::Capacity(n));
    }
    Ok(DEFAULT_POLYS[n as usize])
}

/// A concrete GF(2^n) with fully materialized exp, log and Zech tables.
///
/// Immutable after construction; share it by reference or `Arc`.
#[derive(Clone)]
pub struct FieldCtx {
    n: u32,
    poly: u32,
    order: u32,
    exp: Vec<u32>,
    // indexed by vector; entry 0 is unused
    log: Vec<u32>,
    // indexed by exponent; entry 0 is unused
    zech: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl FieldCtx {
    /// Builds GF(2^n) from `poly`, or from the default polynomial for `n`.
    pub fn new(n: u32, poly: Option<u32>) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::Capacity(n));
        }
        let poly = match poly {
            Some(p) => p,
            None => DEFAULT_POLYS[n as usize],
        };
        if (poly as u64) >> n != 1 || poly & 1 == 0 {
            return Err(Error::BadPolynomial {
                n,
                poly: poly as u64,
            });
        }
        let order = ((1u64 << n) - 1) as u32;
        let size = 1usize << n;
        let top = 1u32 << n;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; size];
        let mut v = 1u32;
        for k in 0..order {
            if log[v as usize] != u32::MAX {
                return Err(Error::NotPrimitive {
                    poly: poly as u64,
                    period: k,
                });
            }
            exp[k as usize] = v;
            log[v as usize] = k;
            v <<= 1;
            if v & top != 0 {
                v ^= poly;
            }
        }
        if v != 1 {
            return Err(Error::NotPrimitive {
                poly: poly as u64,
                period: order,
            });
        }
        let mut zech = vec![u32::MAX; order as usize];
        for k in 1..order {
            zech[k as usize] = log[(exp[k as usize] ^ 1) as usize];
        }
        Ok(FieldCtx {
            n,
            poly,
            order,
            exp,
            log,
            zech,
        })
    }

    pub fn with_default(n: u32) -> Result<Self> {
        Self::new(n, None)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// `2^n - 1`, the order of the multiplicative group.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of nonzero vectors plus one; valid vectors are `< size()`.
    #[inline]
    pub fn size(&self) -> u32 {
        self.order + 1
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn is_default_poly(&self) -> bool {
        self.poly == DEFAULT_POLYS[self.n as usize]
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        x ^ y
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let s = self.log[x as usize] as u64 + self.log[y as usize] as u64;
        self.exp[(s % self.order as u64) as usize]
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.exp[self.neg(self.log[x as usize]) as usize])
    }

    /// `x^e` for any integer exponent; `0^e` is 0 for `e > 0` and an error for `e <= 0`.
    pub fn pow(&self, x: u32, e: i64) -> Result<u32> {
        if x == 0 {
            return if e > 0 {
                Ok(0)
            } else {
                Err(Error::ZeroElement)
            };
        }
        let k = self.reduce(self.log[x as usize] as i64 * (e.rem_euclid(self.order as i64)));
        Ok(self.exp[k as usize])
    }

    pub fn log(&self, x: u32) -> Result<u32> {
        if x == 0 || x >= self.size() {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x as usize])
    }

    /// Unchecked logarithm for nonzero `x`.
    #[inline]
    pub fn log_nz(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        self.log[x as usize]
    }

    /// `xi^k`, with `k` reduced modulo `2^n - 1`.
    #[inline]
    pub fn exp(&self, k: i64) -> u32 {
        self.exp[self.reduce(k) as usize]
    }

    /// `xi^k` for an already reduced residue.
    #[inline]
    pub fn exp_r(&self, k: u32) -> u32 {
        self.exp[k as usize]
    }

    /// Zech logarithm: `1 + xi^k = xi^zech(k)`.
    pub fn zech(&self, k: i64) -> Result<u32> {
        let k = self.reduce(k);
        if k == 0 {
            return Err(Error::ZechAtZero);
        }
        Ok(self.zech[k as usize])
    }

    /// Unchecked Zech lookup for a reduced nonzero residue.
    #[inline]
    pub fn zech_r(&self, k: u32) -> u32 {
        debug_assert!(k != 0 && k < self.order);
        self.zech[k as usize]
    }

    #[inline]
    pub fn reduce(&self, k: i64) -> u32 {
        k.rem_euclid(self.order as i64) as u32
    }

    #[inline]
    pub fn neg(&self, k: u32) -> u32 {
        if k == 0 {
            0
        } else {
            self.order - k
        }
    }

    #[inline]
    pub fn add_r(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.order as u64) as u32
    }

    #[inline]
    pub fn sub_r(&self, a: u32, b: u32) -> u32 {
        self.add_r(a, self.neg(b % self.order))
    }

    #[inline]
    pub fn mul_r(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.order as u64) as u32
    }

    /// Multiply a vector by `xi^k`.
    #[inline]
    pub fn scale(&self, x: u32, k: u32) -> u32 {
        if x == 0 {
            return 0;
        }
        self.exp[self.add_r(self.log[x as usize], k) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Schoolbook multiplication modulo the field polynomial.
    fn poly_mul(a: u32, b: u32, n: u32, poly: u32) -> u32 {
        let mut acc = 0u64;
        for i in 0..n {
            if b >> i & 1 == 1 {
                acc ^= (a as u64) << i;
            }
        }
        for i in (n..2 * n).rev() {
            if acc >> i & 1 == 1 {
                acc ^= (poly as u64) << (i - n);
            }
        }
        acc as u32
    }

    #[test]
    fn xi7_is_xi_plus_one() {
        let f = FieldCtx::with_default(7).unwrap();
        assert_eq!(f.exp(7), 0b11);
    }

    #[test]
    fn reducible_poly_rejected() {
        let err = FieldCtx::new(3, Some(0b1111)).unwrap_err();
        assert!(matches!(err, Error::NotPrimitive { .. }), "{err}");
    }

    #[test]
    fn bad_degree_and_shape() {
        assert!(matches!(FieldCtx::new(0, None), Err(Error::Capacity(0))));
        assert!(matches!(FieldCtx::new(29, None), Err(Error::Capacity(29))));
        assert!(matches!(
            FieldCtx::new(3, Some(0b1010)),
            Err(Error::BadPolynomial { .. })
        ));
        assert!(matches!(
            FieldCtx::new(3, Some(0b10011)),
            Err(Error::BadPolynomial { .. })
        ));
    }

    #[test]
    fn gf8192_order() {
        let f = FieldCtx::with_default(13).unwrap();
        assert_eq!(f.order(), 8191);
        assert_eq!(f.exp_table().len(), 8191);
    }

    #[test]
    fn basic_ops() {
        let f = FieldCtx::new(3, Some(0b1011)).unwrap();
        assert_eq!(f.mul(0b10, 0b100), 0b11);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(matches!(f.inv(0), Err(Error::ZeroElement)));
        assert!(matches!(f.log(0), Err(Error::ZeroElement)));
        let g = FieldCtx::with_default(7).unwrap();
        assert_eq!(g.log(g.exp(200)).unwrap(), 73);
        assert_eq!(g.pow(g.exp(5), -1).unwrap(), g.inv(g.exp(5)).unwrap());
        assert_eq!(g.pow(0, 3).unwrap(), 0);
    }

    #[test]
    fn zech_values_n7() {
        let f = FieldCtx::with_default(7).unwrap();
        assert_eq!(f.zech(1).unwrap(), 7);
        assert_eq!(f.zech(7).unwrap(), 1);
        assert_eq!(f.zech(126).unwrap(), 6);
        assert!(matches!(f.zech(0), Err(Error::ZechAtZero)));
        assert!(matches!(f.zech(127), Err(Error::ZechAtZero)));
    }

    #[test]
    fn zech_126_by_polynomial_arithmetic() {
        // 1 + xi^-1 computed without tables: xi^-1 = xi^6 + 1 since xi^7 = xi + 1
        let f = FieldCtx::with_default(7).unwrap();
        let xi_inv = (1 << 6) | 1;
        assert_eq!(poly_mul(xi_inv, 0b10, 7, f.poly()), 1);
        let sum = 1 ^ xi_inv;
        assert_eq!(sum, 1 << 6);
        assert_eq!(f.log(sum).unwrap(), f.zech(126).unwrap());
    }

    #[test]
    fn default_polys_are_primitive_up_to_20() {
        for n in 1..=20 {
            let f = FieldCtx::with_default(n).unwrap_or_else(|e| panic!("n={n}: {e}"));
            assert!(f.is_default_poly());
        }
    }

    #[test]
    fn tables_match_schoolbook_multiplication() {
        for n in [5u32, 6, 7] {
            let f = FieldCtx::with_default(n).unwrap();
            for x in 1..f.size() {
                for y in 1..f.size() {
                    assert_eq!(f.mul(x, y), poly_mul(x, y, n, f.poly()));
                }
            }
        }
    }

    #[test]
    fn zech_identities_exhaustive() {
        for n in [6u32, 7, 12, 13] {
            let f = FieldCtx::with_default(n).unwrap();
            for k in 1..f.order() {
                let z = f.zech_r(k);
                assert_ne!(z, 0);
                assert_eq!(f.zech_r(z), k, "involution");
                let a = f.zech_r(f.neg(z));
                let b = f.neg(f.zech_r(f.neg(k)));
                let c = f.sub_r(k, z);
                assert_eq!(a, b);
                assert_eq!(b, c);
                assert_eq!(f.zech_r(f.mul_r(2, k)), f.mul_r(2, z), "doubling");
                assert_eq!(f.exp_r(z), 1 ^ f.exp_r(k));
            }
            for x in 1..f.size() {
                assert_eq!(f.exp_r(f.log(x).unwrap()), x);
            }
        }
    }
}
