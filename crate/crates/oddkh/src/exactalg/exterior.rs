//! Exterior powers of free abelian groups and induced maps.
//!
//! Basis elements of degree p are p-subsets of the free basis, encoded
//! as bitmasks and ordered lexicographically as ascending index tuples:
//! {0,1} < {0,2} < ... < {1,2} < ... The wedge sign is the parity of the
//! permutation sorting the concatenated index sequence.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

use super::matrix::IntMatrix;

pub type Subset = u32;

/// Number of p-subsets of {0..n-1}.
pub fn binomial(n: usize, p: usize) -> usize {
    if p > n {
        return 0;
    }
    let p = p.min(n - p);
    let mut acc: usize = 1;
    for i in 0..p {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rank of a subset in the lexicographic order of ascending index tuples.
pub fn subset_rank(n: usize, s: Subset) -> usize {
    let p = s.count_ones() as usize;
    let mut rank = 0usize;
    let mut prev: i64 = -1;
    let mut remaining = p;
    for (slot, idx) in (0..n as u32).filter(|i| s & (1 << i) != 0).enumerate() {
        // count subsets whose slot-th element is smaller
        for cand in (prev + 1) as u32..idx {
            rank += binomial(n - cand as usize - 1, p - slot - 1);
        }
        prev = idx as i64;
        remaining -= 1;
    }
    debug_assert_eq!(remaining, 0);
    rank
}

/// Inverse of `subset_rank` for degree p.
pub fn subset_unrank(n: usize, p: usize, mut rank: usize) -> Subset {
    let mut s: Subset = 0;
    let mut next = 0u32;
    for slot in 0..p {
        let mut cand = next;
        loop {
            let block = binomial(n - cand as usize - 1, p - slot - 1);
            if rank < block {
                break;
            }
            rank -= block;
            cand += 1;
        }
        s |= 1 << cand;
        next = cand + 1;
    }
    s
}

/// All p-subsets of {0..n-1} in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Subset> {
    (0..binomial(n, p)).map(|r| subset_unrank(n, p, r)).collect()
}

/// A homogeneous element of the exterior algebra on `dim` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorElement {
    pub degree: usize,
    pub coords: BTreeMap<Subset, BigInt>,
}

impl ExteriorElement {
    pub fn zero(degree: usize) -> Self {
        ExteriorElement { degree, coords: BTreeMap::new() }
    }

    pub fn basis(s: Subset) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(s, BigInt::from(1));
        ExteriorElement { degree: s.count_ones() as usize, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, s: Subset, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let slot = self.coords.entry(s).or_insert_with(BigInt::zero);
        *slot += v;
        if slot.is_zero() {
            self.coords.remove(&s);
        }
    }

    pub fn scale(&mut self, c: &BigInt) {
        if c.is_zero() {
            self.coords.clear();
            return;
        }
        for v in self.coords.values_mut() {
            *v *= c;
        }
    }

    pub fn add(&mut self, other: &ExteriorElement) {
        assert_eq!(self.degree, other.degree);
        for (s, v) in &other.coords {
            self.add_term(*s, v.clone());
        }
    }

    /// Left wedge by a degree-1 vector: w ^ self.
    pub fn wedge_vector(&self, w: &[BigInt]) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.degree + 1);
        for (s, v) in &self.coords {
            for (j, wj) in w.iter().enumerate() {
                if wj.is_zero() || s & (1 << j) != 0 {
                    continue;
                }
                // sign: move e_j past the elements of s below j
                let below = (s & ((1u32 << j) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                out.add_term(s | (1 << j), wj * v * sign);
            }
        }
        out
    }
}

/// Image of the basis element `s` under the exterior extension of the
/// linear map with columns `cols` (each column a dst coordinate vector),
/// optionally left-wedged with `prefactor`.
pub fn map_basis_element(
    cols: &[Vec<BigInt>],
    prefactor: Option<&[BigInt]>,
    s: Subset,
) -> ExteriorElement {
    let target_degree = s.count_ones() as usize + usize::from(prefactor.is_some());
    let mut acc = ExteriorElement::basis(0);
    // wedge columns right-to-left so each is a left wedge
    let idxs: Vec<u32> = (0..32).filter(|i| s & (1 << i) != 0).collect();
    for &i in idxs.iter().rev() {
        acc = acc.wedge_vector(&cols[i as usize]);
        if acc.is_zero() {
            return ExteriorElement::zero(target_degree);
        }
    }
    if let Some(w) = prefactor {
        acc = acc.wedge_vector(w);
    }
    acc
}

/// Matrices of the exterior extension of `linear` (f_dst x f_src),
/// optionally post-wedged by `prefactor`, one matrix per source degree p
/// mapping Lambda^p -> Lambda^(p + shift). Degree p matrix has
/// C(f_dst, p+shift) rows and C(f_src, p) columns, bases in lex order.
pub fn induced_exterior_matrices(
    f_src: usize,
    f_dst: usize,
    linear: &IntMatrix,
    prefactor: Option<&[BigInt]>,
) -> Vec<IntMatrix> {
    assert_eq!(linear.rows(), f_dst);
    assert_eq!(linear.cols(), f_src);
    let shift = usize::from(prefactor.is_some());
    let cols: Vec<Vec<BigInt>> = (0..f_src).map(|j| linear.col_vec(j)).collect();
    let mut out = Vec::new();
    for p in 0..=f_src {
        let src_basis = subsets(f_src, p);
        let rows = binomial(f_dst, p + shift);
        let mut m = IntMatrix::zeros(rows, src_basis.len());
        for (cidx, s) in src_basis.iter().enumerate() {
            let img = map_basis_element(&cols, prefactor, *s);
            for (t, v) in &img.coords {
                m.set(subset_rank(f_dst, *t), cidx, v.clone());
            }
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_order_is_lex() {
        // n = 4, p = 2: {0,1} {0,2} {0,3} {1,2} {1,3} {2,3}
        let got = subsets(4, 2);
        let expect: Vec<Subset> = vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100];
        assert_eq!(got, expect);
        for (r, s) in got.iter().enumerate() {
            assert_eq!(subset_rank(4, *s), r);
        }
    }

    #[test]
    fn wedge_antisymmetry() {
        let e0 = ExteriorElement::basis(0b01);
        let v = vec![BigInt::from(0), BigInt::from(1)];
        let w = e0.wedge_vector(&v); // e1 ^ e0 = -e0 ^ e1
        assert_eq!(w.coords.get(&0b11), Some(&BigInt::from(-1)));
        let self_wedge = ExteriorElement::basis(0b01).wedge_vector(&[BigInt::from(1), BigInt::from(0)]);
        assert!(self_wedge.is_zero());
    }

    #[test]
    fn identity_induces_identity() {
        let id = IntMatrix::identity(3);
        let mats = induced_exterior_matrices(3, 3, &id, None);
        for (p, m) in mats.iter().enumerate() {
            assert_eq!(*m, IntMatrix::identity(binomial(3, p)));
        }
    }

    #[test]
    fn prefactor_on_degree_zero_is_column() {
        // rank-1 source, prefactor = generator of dst
        let linear = IntMatrix::from_rows_i64(&[vec![1]]);
        let w = vec![BigInt::from(1)];
        let mats = induced_exterior_matrices(1, 1, &linear, Some(&w));
        // Lambda^0 -> Lambda^1 sends 1 to w
        assert_eq!(mats[0], IntMatrix::from_rows_i64(&[vec![1]]));
        // Lambda^1 -> Lambda^2 = 0 (no 2-subsets of a singleton)
        assert_eq!(mats[1].rows(), 0);
    }

    #[test]
    fn composition_of_induced_maps() {
        let f = IntMatrix::from_rows_i64(&[vec![1, 1], vec![0, 1], vec![1, 0]]);
        let g = IntMatrix::from_rows_i64(&[vec![1, 0, 2], vec![0, 1, -1]]);
        let gf = g.mul(&f);
        let mf = induced_exterior_matrices(2, 3, &f, None);
        let mg = induced_exterior_matrices(3, 2, &g, None);
        let mgf = induced_exterior_matrices(2, 2, &gf, None);
        for p in 0..=2 {
            assert_eq!(mg[p].mul(&mf[p]), mgf[p], "degree {p}");
        }
    }
}
