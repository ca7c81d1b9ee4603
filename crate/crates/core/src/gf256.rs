//! GF(2^8) arithmetic over the HIEROCRYPT-3 field `x^8 + x^6 + x^5 + x + 1`,
//! the constant-multiplier XOR networks used by the lower-level MDS matrix,
//! and MDS verification.

use std::fmt;
use std::sync::OnceLock;

use crate::error::Error;

/// An element of GF(2^8). Bit 7 is the most significant coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GfByte(pub u8);

impl fmt::Debug for GfByte {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02X}", self.0)
    }
}

impl std::ops::BitXor for GfByte {
    type Output = GfByte;
    fn bitxor(self, rhs: GfByte) -> GfByte {
        GfByte(self.0 ^ rhs.0)
    }
}

/// Field definition: a degree-8 reduction polynomial, bit 8 included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldParams {
    reduction_poly: u16,
}

/// `x^8 + x^6 + x^5 + x + 1`.
pub const HC3_POLY: u16 = 0x163;

pub const HC3_FIELD: FieldParams = FieldParams {
    reduction_poly: HC3_POLY,
};

impl FieldParams {
    /// Accepts only degree-8 polynomials with no factor of degree 1..=4.
    pub fn new(reduction_poly: u16) -> Result<Self, Error> {
        if reduction_poly >> 8 != 1 {
            return Err(Error::Config(format!(
                "reduction polynomial {reduction_poly:#x} is not of degree 8"
            )));
        }
        let reducible = (2u16..32).any(|d| poly_mod(reduction_poly, d) == 0);
        if reducible {
            return Err(Error::Config(format!(
                "reduction polynomial {reduction_poly:#x} is reducible"
            )));
        }
        Ok(FieldParams { reduction_poly })
    }

    pub fn reduction_poly(self) -> u16 {
        self.reduction_poly
    }
}

fn degree(p: u16) -> u32 {
    15 - p.leading_zeros()
}

/// Remainder of carry-less division `a mod b`, `b != 0`.
fn poly_mod(mut a: u16, b: u16) -> u16 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Shift-and-reduce multiplication. Slow on purpose: it is the oracle every
/// network and table in the crate is checked against.
pub fn gf_mul(a: GfByte, b: GfByte, params: FieldParams) -> GfByte {
    let (mut a, mut b) = (a.0 as u16, b.0);
    let mut acc = 0u16;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x100 != 0 {
            a ^= params.reduction_poly;
        }
    }
    GfByte(acc as u8)
}

/// Multiplicative inverse (`a^254`); zero maps to zero.
pub fn gf_inv(a: GfByte, params: FieldParams) -> GfByte {
    let mut result = GfByte(1);
    let mut base = a;
    let mut e = 254u32;
    while e != 0 {
        if e & 1 == 1 {
            result = gf_mul(result, base, params);
        }
        base = gf_mul(base, base, params);
        e >>= 1;
    }
    result
}

/// The four constants of the lower-level MDS matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MdsConst {
    C4,
    X65,
    C8,
    X8B,
}

impl MdsConst {
    pub const ALL: [MdsConst; 4] = [MdsConst::C4, MdsConst::X65, MdsConst::C8, MdsConst::X8B];

    pub fn value(self) -> u8 {
        match self {
            MdsConst::C4 => 0xC4,
            MdsConst::X65 => 0x65,
            MdsConst::C8 => 0xC8,
            MdsConst::X8B => 0x8B,
        }
    }
}

impl TryFrom<u8> for MdsConst {
    type Error = Error;

    fn try_from(c: u8) -> Result<Self, Error> {
        MdsConst::ALL
            .into_iter()
            .find(|k| k.value() == c)
            .ok_or_else(|| Error::Config(format!("{c:#04x} is not an MDS_L constant")))
    }
}

/// A constant multiplier as eight XOR equations: `OUT[k]` is the XOR of
/// the input bits set in `terms[k]` (bit `i` of the mask is `IN[i]`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct XorNetwork {
    pub terms: [u8; 8],
}

impl XorNetwork {
    pub fn eval(&self, x: GfByte) -> GfByte {
        let mut out = 0u8;
        for (k, &t) in self.terms.iter().enumerate() {
            out |= (((t & x.0).count_ones() & 1) as u8) << k;
        }
        GfByte(out)
    }

    /// Derives the network for `c` by reducing `c * x^i` for every input
    /// basis bit `i`: input bit `i` feeds every output bit set in that product.
    pub fn generate(c: u8, params: FieldParams) -> Self {
        let mut terms = [0u8; 8];
        for i in 0..8 {
            let column = gf_mul(GfByte(c), GfByte(1 << i), params).0;
            for (k, t) in terms.iter_mut().enumerate() {
                if column >> k & 1 == 1 {
                    *t |= 1 << i;
                }
            }
        }
        XorNetwork { terms }
    }
}

const fn bits(idx: &[u8]) -> u8 {
    let mut m = 0u8;
    let mut i = 0;
    while i < idx.len() {
        m |= 1 << idx[i];
        i += 1;
    }
    m
}

/// Multiplication by C4 written out as printed gate equations, OUT[0]..OUT[7].
pub const C4_NETWORK: XorNetwork = XorNetwork {
    terms: [
        bits(&[3, 2, 1]),
        bits(&[4, 1]),
        bits(&[5, 2, 0]),
        bits(&[6, 3, 1]),
        bits(&[7, 4, 2]),
        bits(&[5, 2, 1]),
        bits(&[6, 1, 0]),
        bits(&[7, 2, 1, 0]),
    ],
};

/// Network for one of the four MDS_L constants. C4 uses the hand-written
/// equations; the other three are generated.
pub fn network_for(c: MdsConst) -> XorNetwork {
    static GENERATED: OnceLock<[XorNetwork; 4]> = OnceLock::new();
    let generated = GENERATED.get_or_init(|| MdsConst::ALL.map(|k| XorNetwork::generate(k.value(), HC3_FIELD)));
    match c {
        MdsConst::C4 => C4_NETWORK,
        MdsConst::X65 => generated[1],
        MdsConst::C8 => generated[2],
        MdsConst::X8B => generated[3],
    }
}

/// `c * x` evaluated through the XOR network for `c`.
pub fn mul_const_network(c: u8, x: GfByte) -> Result<GfByte, Error> {
    Ok(network_for(MdsConst::try_from(c)?).eval(x))
}

/// A 4x4 matrix over GF(2^8).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MdsMatrix4 {
    pub entries: [[u8; 4]; 4],
}

/// The circulant lower-level MDS matrix, first row (C4, 65, C8, 8B).
pub const MDS_L: MdsMatrix4 = MdsMatrix4 {
    entries: [
        [0xC4, 0x65, 0xC8, 0x8B],
        [0x8B, 0xC4, 0x65, 0xC8],
        [0xC8, 0x8B, 0xC4, 0x65],
        [0x65, 0xC8, 0x8B, 0xC4],
    ],
};

impl MdsMatrix4 {
    pub const IDENTITY: MdsMatrix4 = MdsMatrix4 {
        entries: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    };

    pub fn apply(&self, x: [GfByte; 4]) -> [GfByte; 4] {
        let mut y = [GfByte(0); 4];
        for (r, out) in y.iter_mut().enumerate() {
            for (&m, &xc) in self.entries[r].iter().zip(&x) {
                *out = *out ^ gf_mul(GfByte(m), xc, HC3_FIELD);
            }
        }
        y
    }

    pub fn mul(&self, rhs: &MdsMatrix4) -> MdsMatrix4 {
        let mut entries = [[0u8; 4]; 4];
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = (0..4).fold(0, |acc, k| {
                    acc ^ gf_mul(GfByte(self.entries[r][k]), GfByte(rhs.entries[k][c]), HC3_FIELD).0
                });
            }
        }
        MdsMatrix4 { entries }
    }

    /// Gauss-Jordan inverse over the field.
    pub fn inverse(&self) -> Result<MdsMatrix4, Error> {
        let f = HC3_FIELD;
        let mut a = self.entries;
        let mut inv = MdsMatrix4::IDENTITY.entries;
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| a[r][col] != 0)
                .ok_or_else(|| Error::Internal("matrix is singular".into()))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = gf_inv(GfByte(a[col][col]), f);
            for c in 0..4 {
                a[col][c] = gf_mul(GfByte(a[col][c]), scale, f).0;
                inv[col][c] = gf_mul(GfByte(inv[col][c]), scale, f).0;
            }
            for r in 0..4 {
                let factor = GfByte(a[r][col]);
                if r == col || factor.0 == 0 {
                    continue;
                }
                for c in 0..4 {
                    a[r][c] ^= gf_mul(factor, GfByte(a[col][c]), f).0;
                    inv[r][c] ^= gf_mul(factor, GfByte(inv[col][c]), f).0;
                }
            }
        }
        Ok(MdsMatrix4 { entries: inv })
    }
}

/// Cofactor-expansion determinant of the submatrix picked by `rows`/`cols`.
fn det(m: &MdsMatrix4, rows: &[usize], cols: &[usize]) -> u8 {
    if rows.len() == 1 {
        return m.entries[rows[0]][cols[0]];
    }
    let sub_rows = &rows[1..];
    let mut acc = 0u8;
    for (i, &c) in cols.iter().enumerate() {
        let entry = m.entries[rows[0]][c];
        if entry == 0 {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
        // Characteristic 2: cofactor signs vanish.
        acc ^= gf_mul(GfByte(entry), GfByte(det(m, sub_rows, &sub_cols)), HC3_FIELD).0;
    }
    acc
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u8..16)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..4).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Number of square submatrices `mds_check` examines for a 4x4 matrix.
pub const SUBMATRIX_COUNT: usize = 69;

/// True iff every square submatrix is nonsingular.
pub fn mds_check(m: &MdsMatrix4) -> bool {
    (1..=4).all(|k| {
        let sets = subsets(k);
        sets.iter()
            .all(|rows| sets.iter().all(|cols| det(m, rows, cols) != 0))
    })
}

/// Lower-level MDS on one 32-bit word, via the constant networks.
pub fn mds_l_apply(x: [GfByte; 4]) -> [GfByte; 4] {
    let mut y = [GfByte(0); 4];
    for (r, out) in y.iter_mut().enumerate() {
        for (c, &xc) in x.iter().enumerate() {
            let k = MdsConst::try_from(MDS_L.entries[r][c]).expect("MDS_L entries are MDS constants");
            *out = *out ^ network_for(k).eval(xc);
        }
    }
    y
}

/// `MDS_L^-1`, computed once by elimination.
pub fn mds_l_inverse() -> MdsMatrix4 {
    MDS_L.inverse().expect("MDS_L is nonsingular")
}

/// 256-entry multiplication table for a fixed constant.
pub fn mul_table(c: u8) -> [u8; 256] {
    let mut t = [0u8; 256];
    for (x, v) in t.iter_mut().enumerate() {
        *v = gf_mul(GfByte(c), GfByte(x as u8), HC3_FIELD).0;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: full carry-less product, then long division.
    fn clmul_reduce(a: u8, b: u8) -> u8 {
        let mut prod = 0u16;
        for i in 0..8 {
            if b >> i & 1 == 1 {
                prod ^= (a as u16) << i;
            }
        }
        poly_mod(prod, HC3_POLY) as u8
    }

    #[test]
    fn gf_mul_examples() {
        let f = HC3_FIELD;
        assert_eq!(gf_mul(GfByte(0x01), GfByte(0xC4), f), GfByte(0xC4));
        assert_eq!(gf_mul(GfByte(0x00), GfByte(0x8B), f), GfByte(0x00));
        assert_eq!(clmul_reduce(0x02, 0xC4), 0xEB);
        assert_eq!(gf_mul(GfByte(0x02), GfByte(0xC4), f), GfByte(0xEB));
    }

    #[test]
    fn gf_mul_matches_long_division_oracle() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(gf_mul(GfByte(a), GfByte(b), HC3_FIELD).0, clmul_reduce(a, b));
            }
        }
    }

    #[test]
    fn field_params_validation() {
        assert!(FieldParams::new(0x163).is_ok());
        assert!(FieldParams::new(0x11B).is_ok());
        // x^8 + 1 = (x + 1)^8
        assert!(FieldParams::new(0x101).is_err());
        assert!(FieldParams::new(0x63).is_err());
    }

    #[test]
    fn inverse_is_inverse() {
        for a in 1..=255u8 {
            let inv = gf_inv(GfByte(a), HC3_FIELD);
            assert_eq!(gf_mul(GfByte(a), inv, HC3_FIELD), GfByte(1));
        }
        assert_eq!(gf_inv(GfByte(0), HC3_FIELD), GfByte(0));
    }

    #[test]
    fn network_examples() {
        assert_eq!(mul_const_network(0xC4, GfByte(0x01)).unwrap(), GfByte(0xC4));
        assert_eq!(mul_const_network(0xC4, GfByte(0x02)).unwrap(), GfByte(0xEB));
        assert_eq!(mul_const_network(0x65, GfByte(0x00)).unwrap(), GfByte(0x00));
        assert!(matches!(mul_const_network(0x02, GfByte(1)), Err(Error::Config(_))));
    }

    #[test]
    fn printed_c4_equations_equal_generated_network() {
        assert_eq!(C4_NETWORK, XorNetwork::generate(0xC4, HC3_FIELD));
    }

    #[test]
    fn networks_exhaustive() {
        for c in MdsConst::ALL {
            for x in 0..=255u8 {
                assert_eq!(
                    mul_const_network(c.value(), GfByte(x)).unwrap(),
                    gf_mul(GfByte(x), GfByte(c.value()), HC3_FIELD)
                );
            }
        }
    }

    #[test]
    fn mds_l_examples() {
        let g = |v: [u8; 4]| v.map(GfByte);
        assert_eq!(mds_l_apply(g([0, 0, 0, 0])), g([0, 0, 0, 0]));
        assert_eq!(mds_l_apply(g([1, 0, 0, 0])), g([0xC4, 0x8B, 0xC8, 0x65]));
        let expect = [0xC4u8, 0x8B, 0xC8, 0x65].map(|c| GfByte(clmul_reduce(0x02, c)));
        assert_eq!(expect, g([0xEB, 0x75, 0xF3, 0xCA]));
        assert_eq!(mds_l_apply(g([2, 0, 0, 0])), expect);
    }

    #[test]
    fn mds_l_networks_agree_with_matrix_product() {
        for x in [[1u8, 2, 3, 4], [0xff, 0x80, 0x7f, 0x11], [0xde, 0xad, 0xbe, 0xef]] {
            let x = x.map(GfByte);
            assert_eq!(mds_l_apply(x), MDS_L.apply(x));
        }
    }

    #[test]
    fn mds_check_examples() {
        assert!(mds_check(&MDS_L));
        assert!(!mds_check(&MdsMatrix4::IDENTITY));
        let mut zero_row = MDS_L;
        zero_row.entries[2] = [0; 4];
        assert!(!mds_check(&zero_row));
    }

    #[test]
    fn submatrix_enumeration_covers_69() {
        let total: usize = (1..=4).map(|k| subsets(k).len().pow(2)).sum();
        assert_eq!(total, SUBMATRIX_COUNT);
    }

    #[test]
    fn mds_l_inverse_examples() {
        let inv = mds_l_inverse();
        assert_eq!(inv.mul(&MDS_L), MdsMatrix4::IDENTITY);
        assert_eq!(MDS_L.mul(&inv), MdsMatrix4::IDENTITY);
        let x = [1u8, 2, 3, 4].map(GfByte);
        assert_eq!(inv.apply(mds_l_apply(x)), x);
        assert_eq!(inv.apply([GfByte(0); 4]), [GfByte(0); 4]);
    }

    #[test]
    fn singular_inverse_errors() {
        let mut m = MDS_L;
        m.entries[3] = m.entries[0];
        assert!(m.inverse().is_err());
    }
}
