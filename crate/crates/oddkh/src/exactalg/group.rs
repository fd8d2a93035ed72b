//! Finitely presented abelian groups and induced maps.
//!
//! A group here is Z^k modulo the integer column span of a relation
//! matrix. Everything downstream needs the free part: its rank, a
//! projection of classes onto free coordinates, and representative
//! vectors for the free basis. All of that is cached from one Smith
//! decomposition of the relations.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::{self, SmithDecomposition};

#[derive(Clone)]
pub struct PresentedGroup {
    generators: usize,
    relations: IntMatrix,
    rank_rel: usize,
    divisors: Vec<BigInt>,
    /// f x k: class of a generator vector -> coordinates in the free basis.
    free_proj: IntMatrix,
    /// k x f: representative generator vectors for the free basis.
    free_basis: IntMatrix,
}

impl PresentedGroup {
    /// `relations` is generators x r; its columns are the relators.
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix has wrong height");
        let dec: SmithDecomposition = snf::smith_normal_form(&relations);
        let divisors = dec.nonzero_divisors();
        let rank_rel = divisors.len();
        // In the basis y = U x the quotient splits as (+) Z/d_i (+) Z^f,
        // with the free summand on the last f coordinates.
        let free_rows: Vec<usize> = (rank_rel..generators).collect();
        let all_cols: Vec<usize> = (0..generators).collect();
        let free_proj = dec.u.submatrix(&free_rows, &all_cols);
        let free_basis = dec.u_inv.submatrix(&all_cols, &free_rows);
        PresentedGroup { generators, relations, rank_rel, divisors, free_proj, free_basis }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, IntMatrix::zeros(generators, 0))
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn free_rank(&self) -> usize {
        self.generators - self.rank_rel
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.divisors
    }

    /// True when the quotient is free, i.e. every elementary divisor is 1.
    pub fn is_torsion_free(&self) -> bool {
        self.divisors.iter().all(|d| d.is_one())
    }

    /// Free coordinates of the class of `elem`.
    ///
    /// Faithful only on torsion-free quotients, which is the case this
    /// library lives in; callers assert `is_torsion_free` when it matters.
    pub fn project(&self, elem: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(elem.len(), self.generators);
        self.free_proj.mul_vec(elem)
    }

    pub fn project_generator(&self, i: usize) -> Vec<BigInt> {
        let mut e = vec![BigInt::zero(); self.generators];
        e[i] = BigInt::one();
        self.project(&e)
    }

    /// Exact test: is the class of `elem` zero, i.e. is `elem` in the
    /// integer column lattice of the relations?
    pub fn is_zero(&self, elem: &[BigInt]) -> bool {
        assert_eq!(elem.len(), self.generators);
        snf::in_column_lattice(&self.relations, elem)
    }

    pub fn is_zero_generator(&self, i: usize) -> bool {
        let mut e = vec![BigInt::zero(); self.generators];
        e[i] = BigInt::one();
        self.is_zero(&e)
    }

    /// Representative generator-space vector of the j-th free basis element.
    pub fn free_basis_vector(&self, j: usize) -> Vec<BigInt> {
        self.free_basis.col_vec(j)
    }

    /// The matrix of the map on free parts induced by `gen_map` (dst
    /// generators x src generators), or None when the map is not
    /// well-defined, i.e. some src relator does not land in the dst
    /// relation lattice. `extra` optionally extends the dst lattice by
    /// one vector: that is exactly the slack available when the induced
    /// map is post-composed with wedging by that vector.
    pub fn induced_map(
        &self,
        dst: &PresentedGroup,
        gen_map: &IntMatrix,
        extra: Option<&[BigInt]>,
    ) -> Option<IntMatrix> {
        assert_eq!(gen_map.rows(), dst.generators);
        assert_eq!(gen_map.cols(), self.generators);
        let target_lattice = match extra {
            None => dst.relations.clone(),
            Some(w) => {
                assert_eq!(w.len(), dst.generators);
                let mut ext = IntMatrix::zeros(dst.generators, 1);
                for (i, v) in w.iter().enumerate() {
                    if !v.is_zero() {
                        ext.set(i, 0, v.clone());
                    }
                }
                dst.relations.hstack(&ext)
            }
        };
        for j in 0..self.relations.cols() {
            let image = gen_map.mul_vec(&self.relations.col_vec(j));
            if !snf::in_column_lattice(&target_lattice, &image) {
                return None;
            }
        }
        Some(dst.free_proj.mul(gen_map).mul(&self.free_basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = PresentedGroup::new(2, IntMatrix::identity(2));
        assert_eq!(g.free_rank(), 0);
        assert!(g.is_zero_generator(0));
        assert!(g.is_zero_generator(1));
        assert!(g.is_torsion_free());
    }

    #[test]
    fn free_group() {
        let g = PresentedGroup::free(3);
        assert_eq!(g.free_rank(), 3);
        for i in 0..3 {
            assert!(!g.is_zero_generator(i));
        }
    }

    #[test]
    fn single_sum_relation() {
        // <x, y | x + y>: free of rank 1, neither generator zero.
        let g = PresentedGroup::new(2, IntMatrix::from_rows_i64(&[vec![1], vec![1]]));
        assert_eq!(g.free_rank(), 1);
        assert!(!g.is_zero_generator(0));
        assert!(!g.is_zero_generator(1));
        // x + y itself is zero
        assert!(g.is_zero(&[BigInt::one(), BigInt::one()]));
        // and x = -y on free coordinates
        let px = g.project_generator(0);
        let py = g.project_generator(1);
        assert_eq!(px[0], -&py[0]);
    }

    #[test]
    fn projection_respects_basis() {
        let g = PresentedGroup::new(3, IntMatrix::from_rows_i64(&[vec![2], vec![-1], vec![0]]));
        assert_eq!(g.free_rank(), 2);
        assert!(g.is_torsion_free());
        // project . free_basis = identity on free coordinates
        for j in 0..2 {
            let rep = g.free_basis_vector(j);
            let proj = g.project(&rep);
            for (i, v) in proj.iter().enumerate() {
                assert_eq!(*v, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn induced_identity() {
        let g = PresentedGroup::new(2, IntMatrix::from_rows_i64(&[vec![1], vec![1]]));
        let m = g.induced_map(&g, &IntMatrix::identity(2), None).unwrap();
        assert_eq!(m, IntMatrix::identity(1));
    }

    #[test]
    fn induced_rejects_bad_map() {
        let src = PresentedGroup::new(1, IntMatrix::identity(1)); // <x | x> = 0
        let dst = PresentedGroup::free(1);
        // x |-> x does not kill the relation x
        assert!(src.induced_map(&dst, &IntMatrix::identity(1), None).is_none());
        // but it does once the image may be absorbed by wedging with x
        let extra = vec![BigInt::one()];
        assert!(src.induced_map(&dst, &IntMatrix::identity(1), Some(&extra)).is_some());
    }
}
