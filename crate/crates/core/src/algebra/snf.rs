use std::fmt;

use super::{EuclideanDomain, Matrix};

/// `D = P·A·Q` with `D` diagonal, `d11 | d22 | … | drr` and zeros after `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnfResult<T> {
    pub d: Matrix<T>,
    pub p: Matrix<T>,
    pub q: Matrix<T>,
    pub rank: usize,
}

impl<T: EuclideanDomain> SnfResult<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Checks every defining property against the input matrix.
    pub fn check(&self, a: &Matrix<T>) -> Result<(), String> {
        if self.p.mul(a).mul(&self.q) != self.d {
            return Err("D != PAQ".into());
        }
        if !self.d.is_diagonal() {
            return Err("D is not diagonal".into());
        }
        if !self.p.determinant().is_unit() || !self.q.determinant().is_unit() {
            return Err("P or Q is not invertible".into());
        }
        let n = self.d.rows().min(self.d.cols());
        for i in 0..n {
            let zero = self.d[(i, i)].is_zero();
            if zero != (i >= self.rank) {
                return Err(format!("diagonal entry {i} breaks the rank split"));
            }
            if i + 1 < self.rank && !self.d[(i, i)].divides(&self.d[(i + 1, i + 1)]) {
                return Err(format!("d{i}{i} does not divide the next entry"));
            }
        }
        Ok(())
    }
}

fn min_pivot<T: EuclideanDomain>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if !x.is_zero() && best.is_none_or(|(n, _, _)| x.norm() < n) {
                best = Some((x.norm(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form by Euclidean pivoting. Row operations are mirrored on
/// `P`, column operations on `Q`.
pub fn smith_normal_form<T: EuclideanDomain>(a: &Matrix<T>) -> SnfResult<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = Matrix::identity(m);
    let mut q = Matrix::identity(n);
    let mut rank = 0;
    for t in 0..m.min(n) {
        while let Some((i, j)) = min_pivot(&d, t) {
            d.swap_rows(t, i);
            p.swap_rows(t, i);
            d.swap_cols(t, j);
            q.swap_cols(t, j);
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let (k, r) = d[(i, t)].div_rem(&pivot);
                    d.sub_row_multiple(i, t, &k);
                    p.sub_row_multiple(i, t, &k);
                    clean &= r.is_zero();
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let (k, r) = d[(t, j)].div_rem(&pivot);
                    d.sub_col_multiple(j, t, &k);
                    q.sub_col_multiple(j, t, &k);
                    clean &= r.is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(&d[(i, j)])));
            if let Some(i) = bad {
                let one = T::zero() - T::one();
                d.sub_row_multiple(t, i, &one);
                p.sub_row_multiple(t, i, &one);
                continue;
            }
            let u = pivot.normalizer();
            if !u.is_one() {
                d.scale_row(t, &u);
                p.scale_row(t, &u);
            }
            rank = t + 1;
            break;
        }
        if rank <= t {
            break;
        }
    }
    SnfResult { d, p, q, rank }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoSolution {
    /// `d_ii` does not divide `c_i`.
    Divisibility(usize),
    /// A row beyond the rank has a nonzero right-hand side.
    Inconsistent(usize),
}

impl fmt::Display for NoSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoSolution::Divisibility(i) => write!(f, "d{i}{i} does not divide c{i}"),
            NoSolution::Inconsistent(i) => write!(f, "row {i} reads 0 = c{i} with c{i} nonzero"),
        }
    }
}

/// `x = particular + Σ z_k · free_basis[k]` for arbitrary `z_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSolution<T> {
    pub particular: Vec<T>,
    pub free_basis: Vec<Vec<T>>,
}

impl<T: EuclideanDomain> GeneralSolution<T> {
    /// Row `var` of `Q2`: the coefficients of the free parameters in `x_var`.
    pub fn free_row(&self, var: usize) -> Vec<T> {
        self.free_basis.iter().map(|col| col[var].clone()).collect()
    }

    pub fn instantiate(&self, params: &[T]) -> Vec<T> {
        let mut x = self.particular.clone();
        for (col, z) in self.free_basis.iter().zip(params) {
            for (xi, ci) in x.iter_mut().zip(col) {
                *xi = xi.clone() + z.clone() * ci.clone();
            }
        }
        x
    }
}

/// Solves `A·x = B` through the Smith normal form of `A`.
pub fn solve_system_snf<T: EuclideanDomain>(
    a: &Matrix<T>,
    b: &[T],
) -> Result<(GeneralSolution<T>, SnfResult<T>), NoSolution> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let snf = smith_normal_form(a);
    let c = snf.p.mul_vec(b);
    let mut y = Vec::with_capacity(snf.rank);
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let (k, r) = ci.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return Err(NoSolution::Divisibility(i));
            }
            y.push(k);
        } else if !ci.is_zero() {
            return Err(NoSolution::Inconsistent(i));
        }
    }
    let n = a.cols();
    let mut particular = vec![T::zero(); n];
    for (k, yk) in y.iter().enumerate() {
        for (i, xi) in particular.iter_mut().enumerate() {
            *xi = xi.clone() + snf.q[(i, k)].clone() * yk.clone();
        }
    }
    let free_basis = (snf.rank..n).map(|k| snf.q.col(k)).collect();
    Ok((GeneralSolution { particular, free_basis }, snf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Gf2Poly;
    use num_traits::{One, Zero};

    fn p(e: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(e)
    }

    #[test]
    fn identity_is_its_own_form() {
        let a = Matrix::<Gf2Poly>::identity(3);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.rank, 3);
        s.check(&a).unwrap();
    }

    #[test]
    fn divisible_diagonal() {
        let a = Matrix::from_rows(vec![vec![p(&[1, 0]), Gf2Poly::zero()], vec![Gf2Poly::zero(), p(&[2, 0])]]);
        let s = smith_normal_form(&a);
        s.check(&a).unwrap();
        assert_eq!(s.diagonal(), vec![p(&[1, 0]), p(&[2, 0])]);
    }

    #[test]
    fn coprime_diagonal_is_mixed() {
        let a = Matrix::from_rows(vec![vec![p(&[1]), Gf2Poly::zero()], vec![Gf2Poly::zero(), p(&[1, 0])]]);
        let s = smith_normal_form(&a);
        s.check(&a).unwrap();
        assert_eq!(s.diagonal(), vec![Gf2Poly::one(), p(&[2, 1])]);
    }

    #[test]
    fn integers() {
        let a = Matrix::from_rows(vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        s.check(&a).unwrap();
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn solving() {
        let a = Matrix::from_rows(vec![vec![p(&[1, 0])]]);
        let (sol, _) = solve_system_snf(&a, &[p(&[2, 0])]).unwrap();
        assert_eq!(sol.particular, vec![p(&[1, 0])]);
        let a = Matrix::from_rows(vec![vec![p(&[1])]]);
        assert_eq!(solve_system_snf(&a, &[Gf2Poly::one()]).unwrap_err(), NoSolution::Divisibility(0));
        let a = Matrix::from_rows(vec![vec![Gf2Poly::zero()]]);
        let (sol, _) = solve_system_snf(&a, &[Gf2Poly::zero()]).unwrap();
        assert_eq!(sol.particular, vec![Gf2Poly::zero()]);
        assert_eq!(sol.free_basis.len(), 1);
    }
}
