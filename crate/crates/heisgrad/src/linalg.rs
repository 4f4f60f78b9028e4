//! Dense linear algebra over Q(ζ_N).

use crate::scalars::{Cyclo, CycloCtx};

pub type Vect = Vec<Cyclo>;

pub fn zero_vec(ctx: &CycloCtx, n: usize) -> Vect {
    vec![ctx.zero(); n]
}

pub fn unit_vec(ctx: &CycloCtx, n: usize, i: usize) -> Vect {
    let mut v = zero_vec(ctx, n);
    v[i] = ctx.one();
    v
}

pub fn is_zero_vec(v: &[Cyclo]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vadd(a: &[Cyclo], b: &[Cyclo]) -> Vect {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vsub(a: &[Cyclo], b: &[Cyclo]) -> Vect {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vscale(c: &Cyclo, a: &[Cyclo]) -> Vect {
    a.iter().map(|x| c.mul(x)).collect()
}

pub fn vneg(a: &[Cyclo]) -> Vect {
    a.iter().map(|x| x.neg()).collect()
}

/// a + c·b
pub fn vaxpy(a: &[Cyclo], c: &Cyclo, b: &[Cyclo]) -> Vect {
    if c.is_zero() {
        return a.to_vec();
    }
    a.iter().zip(b).map(|(x, y)| if y.is_zero() { x.clone() } else { x.add(&c.mul(y)) }).collect()
}

/// Linear combination Σ c_i v_i.
pub fn lincomb(ctx: &CycloCtx, n: usize, terms: &[(Cyclo, &Vect)]) -> Vect {
    let mut out = zero_vec(ctx, n);
    for (c, v) in terms {
        out = vaxpy(&out, c, v);
    }
    out
}

/// Reduced row echelon form of the given rows; returns nonzero rows and pivot columns.
pub fn rref(rows: &[Vect]) -> (Vec<Vect>, Vec<usize>) {
    let mut m: Vec<Vect> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let p = match (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        m[r] = vscale(&inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].neg();
                let row_r = m[r].clone();
                m[i] = vaxpy(&m[i], &f, &row_r);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vect]) -> usize {
    rref(rows).1.len()
}

/// Subspace in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub dim_ambient: usize,
    pub basis: Vec<Vect>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(dim_ambient: usize, vecs: &[Vect]) -> Subspace {
        let (basis, pivots) = rref(vecs);
        Subspace { dim_ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Residual of v after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Cyclo]) -> Vect {
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].neg();
                w = vaxpy(&w, &f, b);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Cyclo]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coords(&self, v: &[Cyclo]) -> Option<Vect> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_space(other)
    }
}

/// Basis of {x : M x = 0} for M given by rows.
pub fn nullspace(ctx: &CycloCtx, rows: &[Vect], ncols: usize) -> Vec<Vect> {
    let (r, piv) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = zero_vec(ctx, ncols);
        x[f] = ctx.one();
        for (row, &p) in r.iter().zip(&piv) {
            x[p] = row[f].neg();
        }
        out.push(x);
    }
    out
}

/// Square matrix stored by rows.
pub type Matrix = Vec<Vect>;

pub fn mat_vec(m: &Matrix, v: &[Cyclo]) -> Vect {
    m.iter()
        .map(|row| {
            let mut acc = v[0].ctx().zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let ctx = a[0][0].ctx().clone();
    let mut out = vec![zero_vec(&ctx, m); n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            out[i] = vaxpy(&out[i], &a[i][t], &b[t]);
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn identity(ctx: &CycloCtx, n: usize) -> Matrix {
    (0..n).map(|i| unit_vec(ctx, n, i)).collect()
}

/// Inverse of a square matrix, None if singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let ctx = a[0][0].ctx().clone();
    let aug: Vec<Vect> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(&ctx, n, i));
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve A x = b for square invertible A.
pub fn solve(a: &Matrix, b: &[Cyclo]) -> Option<Vect> {
    let inv = inverse(a)?;
    Some(mat_vec(&inv, b))
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vect]) -> Matrix {
    transpose(&cols.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let k = CycloCtx::new(4).unwrap();
        let i = k.i().unwrap();
        let a = vec![vec![k.one(), i.clone()], vec![i.neg(), k.from_int(2)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(&k, 2));
    }

    #[test]
    fn nullspace_dimension() {
        let k = CycloCtx::new(1).unwrap();
        let rows = vec![vec![k.one(), k.from_int(2), k.from_int(3)], vec![k.from_int(2), k.from_int(4), k.from_int(6)]];
        let ns = nullspace(&k, &rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(is_zero_vec(&mat_vec(&rows, &v)));
        }
    }
}
