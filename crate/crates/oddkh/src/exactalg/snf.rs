//! Smith normal form and integer lattice membership.
//!
//! Two paths: a dense algorithm that tracks the full unimodular
//! transforms (used for presented groups and lattice solves, where the
//! matrices are small), and a sparse divisor/rank pipeline that eats
//! unit pivots first and only falls back to the dense code on whatever
//! small residue survives (used on the big chain-complex blocks).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// U * m * V = D with U, V unimodular and D diagonal with d1 | d2 | ...
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of D, including zeros, up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }

    /// Nonzero elementary divisors in divisibility order.
    pub fn nonzero_divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_divisors().len()
    }
}

/// Working state for the dense algorithm: the matrix plus all four transforms.
struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let (x, y) = (self.a.get(i, c), self.a.get(j, c));
            self.a.set(i, c, y);
            self.a.set(j, c, x);
        }
        for c in 0..self.u.cols() {
            let (x, y) = (self.u.get(i, c), self.u.get(j, c));
            self.u.set(i, c, y);
            self.u.set(j, c, x);
        }
        // Inverse picks up the inverse column operation.
        for r in 0..self.u_inv.rows() {
            let (x, y) = (self.u_inv.get(r, i), self.u_inv.get(r, j));
            self.u_inv.set(r, i, y);
            self.u_inv.set(r, j, x);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let (x, y) = (self.a.get(r, i), self.a.get(r, j));
            self.a.set(r, i, y);
            self.a.set(r, j, x);
        }
        for r in 0..self.v.rows() {
            let (x, y) = (self.v.get(r, i), self.v.get(r, j));
            self.v.set(r, i, y);
            self.v.set(r, j, x);
        }
        for c in 0..self.v_inv.cols() {
            let (x, y) = (self.v_inv.get(i, c), self.v_inv.get(j, c));
            self.v_inv.set(i, c, y);
            self.v_inv.set(j, c, x);
        }
    }

    /// row[i] += q * row[j]
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.a.cols() {
            let v = self.a.get(j, c) * q;
            self.a.add_to(i, c, &v);
        }
        for c in 0..self.u.cols() {
            let v = self.u.get(j, c) * q;
            self.u.add_to(i, c, &v);
        }
        // (E_{ij}(q))^{-1} = E_{ij}(-q), applied on the right of u_inv.
        for r in 0..self.u_inv.rows() {
            let v = self.u_inv.get(r, i) * -q;
            self.u_inv.add_to(r, j, &v);
        }
    }

    /// col[i] += q * col[j]
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.a.rows() {
            let v = self.a.get(r, j) * q;
            self.a.add_to(r, i, &v);
        }
        for r in 0..self.v.rows() {
            let v = self.v.get(r, j) * q;
            self.v.add_to(r, i, &v);
        }
        for c in 0..self.v_inv.cols() {
            let v = self.v_inv.get(i, c) * -q;
            self.v_inv.add_to(j, c, &v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            let v = self.a.get(i, c);
            self.a.set(i, c, -v);
        }
        for c in 0..self.u.cols() {
            let v = self.u.get(i, c);
            self.u.set(i, c, -v);
        }
        for r in 0..self.u_inv.rows() {
            let v = self.u_inv.get(r, i);
            self.u_inv.set(r, i, -v);
        }
    }
}

/// Full Smith normal form with deterministic pivoting: at each step the
/// pivot is the entry of smallest nonzero absolute value, ties broken by
/// (row, col).
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    for k in 0..steps {
        'pivot: loop {
            // Find minimal |entry| in the trailing submatrix.
            let mut best: Option<(BigInt, usize, usize)> = None;
            for r in k..rows {
                for c in k..cols {
                    let v = w.a.get(r, c);
                    if v.is_zero() {
                        continue;
                    }
                    let a = v.abs();
                    if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                        best = Some((a, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                break 'pivot; // trailing block is zero
            };
            w.swap_rows(k, pr);
            w.swap_cols(k, pc);
            if w.a.get(k, k).is_negative() {
                w.negate_row(k);
            }

            // Reduce column and row by the pivot.
            let p = w.a.get(k, k);
            let mut dirty = false;
            for r in k + 1..rows {
                let v = w.a.get(r, k);
                if !v.is_zero() {
                    let q = div_round(&v, &p);
                    w.add_row(r, k, &-q);
                    if !w.a.get(r, k).is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in k + 1..cols {
                let v = w.a.get(k, c);
                if !v.is_zero() {
                    let q = div_round(&v, &p);
                    w.add_col(c, k, &-q);
                    if !w.a.get(k, c).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot; // smaller remainders exist; re-pivot
            }

            // Divisibility fixup: pivot must divide the trailing block.
            let mut fixed = true;
            'scan: for r in k + 1..rows {
                for c in k + 1..cols {
                    let v = w.a.get(r, c);
                    if !(&v % &p).is_zero() {
                        w.add_row(k, r, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'pivot;
            }
        }
    }
    SmithDecomposition { u: w.u, u_inv: w.u_inv, d: w.a, v: w.v, v_inv: w.v_inv }
}

/// Round-to-nearest integer division (keeps coefficient growth down).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Rank and nonzero elementary divisors of a (possibly large, sparse)
/// matrix. Unit pivots are eliminated greedily with a Markowitz fill
/// heuristic; the non-unit residue goes through the dense SNF.
pub fn rank_and_divisors(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let mut rows: Vec<HashMap<usize, BigInt>> = vec![HashMap::new(); m.rows()];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols()];
    for (r, c, v) in m.entries() {
        rows[r].insert(c, v);
        col_rows[c].push(r);
    }
    let mut live_row: Vec<bool> = (0..m.rows()).map(|r| !rows[r].is_empty()).collect();
    let mut unit_pivots = 0usize;

    loop {
        // Pick a +-1 entry minimizing (row_nnz - 1) * (col_nnz - 1).
        let mut best: Option<(usize, usize, usize)> = None;
        'search: for r in 0..rows.len() {
            if !live_row[r] {
                continue;
            }
            let rn = rows[r].len();
            for (c, v) in &rows[r] {
                if v.abs().is_one() {
                    let cn = col_rows[*c].iter().filter(|&&rr| live_row[rr] && rows[rr].contains_key(c)).count();
                    let score = (rn - 1) * (cn - 1);
                    if best.as_ref().is_none_or(|(s, _, _)| score < *s) {
                        best = Some((score, r, *c));
                        if score <= 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };

        // Eliminate column pc using row pr, then retire both.
        let pivot = rows[pr][&pc].clone();
        let prow: Vec<(usize, BigInt)> = rows[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        let mut targets: Vec<usize> = col_rows[pc]
            .iter()
            .copied()
            .filter(|&r| r != pr && live_row[r] && rows[r].contains_key(&pc))
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for r in targets {
            // factor = entry / pivot; pivot is +-1 so this is entry * pivot
            let factor = &rows[r][&pc] * &pivot;
            for (c, v) in &prow {
                let delta = -(&factor) * v;
                match rows[r].entry(*c) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(delta);
                        col_rows[*c].push(r);
                    }
                }
            }
            debug_assert!(!rows[r].contains_key(&pc));
            if rows[r].is_empty() {
                live_row[r] = false;
            }
        }
        live_row[pr] = false;
        unit_pivots += 1;
    }

    // Collect the residue into a compact dense matrix.
    let mut live_cols: Vec<usize> = Vec::new();
    let mut col_index: HashMap<usize, usize> = HashMap::new();
    let mut residue_rows: Vec<&HashMap<usize, BigInt>> = Vec::new();
    for (r, alive) in live_row.iter().enumerate() {
        if *alive {
            residue_rows.push(&rows[r]);
            for c in rows[r].keys() {
                if !col_index.contains_key(c) {
                    col_index.insert(*c, live_cols.len());
                    live_cols.push(*c);
                }
            }
        }
    }
    let mut divisors = vec![BigInt::one(); unit_pivots];
    if !residue_rows.is_empty() {
        let mut res = IntMatrix::zeros(residue_rows.len(), live_cols.len());
        for (i, row) in residue_rows.iter().enumerate() {
            for (c, v) in row.iter() {
                res.set(i, col_index[c], v.clone());
            }
        }
        let snf = smith_normal_form(&res);
        divisors.extend(snf.nonzero_divisors());
    }
    divisors.sort();
    let rank = divisors.len();
    (rank, divisors)
}

pub fn rank(m: &IntMatrix) -> usize {
    rank_and_divisors(m).0
}

/// Solve m x = b over the integers; None when b is outside the column lattice.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len());
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let steps = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ub_i) in ub.iter().enumerate() {
        if i < steps {
            let d = snf.d.get(i, i);
            if d.is_zero() {
                if !ub_i.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = num_integer::Integer::div_mod_floor(ub_i, &d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
        } else if !ub_i.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Is b in the integer column span of m?
pub fn in_column_lattice(m: &IntMatrix, b: &[BigInt]) -> bool {
    solve_integer(m, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(m);
        // U m V = D
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        // inverses really invert
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        // unimodular
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        // divisor chain
        let nz = snf.nonzero_divisors();
        for w in nz.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken: {:?}", nz);
        }
        snf
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(3);
        let snf = check(&id);
        assert_eq!(snf.d, id);
    }

    #[test]
    fn diag_2_3_gives_1_6() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let snf = check(&m);
        assert_eq!(snf.nonzero_divisors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(2, 3);
        let snf = check(&m);
        assert!(snf.d.is_zero());
    }

    #[test]
    fn lattice_membership() {
        // span{e1 + e2}: neither generator is inside
        let m = IntMatrix::from_rows_i64(&[vec![1], vec![1]]);
        let e1 = vec![BigInt::one(), BigInt::zero()];
        assert!(!in_column_lattice(&m, &e1));
        let both = vec![BigInt::from(3), BigInt::from(3)];
        assert_eq!(solve_integer(&m, &both), Some(vec![BigInt::from(3)]));
    }

    #[test]
    fn sparse_divisors_match_dense() {
        let m = IntMatrix::from_rows_i64(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let (rank, div) = rank_and_divisors(&m);
        let snf = check(&m);
        assert_eq!(rank, snf.rank());
        assert_eq!(div, snf.nonzero_divisors());
        assert_eq!(div, vec![BigInt::from(1), BigInt::from(3), BigInt::from(21)]);
    }
}
