//! Finite-dimensional Lie (super)algebras given by structure constants.

use crate::linalg::{self, is_zero_vec, nullspace, vaxpy, zero_vec, Matrix, Subspace, Vect};
use crate::scalars::{Cyclo, CycloCtx, ScalarError, ScalarExpr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("unknown basis label '{0}'")]
    UnknownLabel(String),
    #[error("scalar: {0}")]
    Scalar(#[from] ScalarError),
    #[error("bad algebra spec: {0}")]
    Spec(String),
    #[error("axiom violated: {0}")]
    Axiom(String),
}

/// Which named family an algebra was built from.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Heisenberg { k: usize },
    Super { k: usize, m: usize },
    Twisted { lambda: Vec<Cyclo> },
    Custom,
}

/// Structure constants on a parity-homogeneous basis.
#[derive(Clone, Debug)]
pub struct Algebra {
    ctx: CycloCtx,
    labels: Vec<String>,
    parity: Vec<u8>,
    table: Vec<Vec<Vec<(usize, Cyclo)>>>,
    family: Family,
}

/// A linear map given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinMap {
    pub images: Vec<Vect>,
}

impl LinMap {
    pub fn identity(ctx: &CycloCtx, n: usize) -> LinMap {
        LinMap { images: (0..n).map(|i| linalg::unit_vec(ctx, n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, v: &[Cyclo]) -> Vect {
        let n = self.images.len();
        let ctx = v[0].ctx().clone();
        let mut out = zero_vec(&ctx, self.images.first().map(|x| x.len()).unwrap_or(n));
        for (c, img) in v.iter().zip(&self.images) {
            if !c.is_zero() {
                out = vaxpy(&out, c, img);
            }
        }
        out
    }

    /// Matrix with f(e_j) as column j.
    pub fn matrix(&self) -> Matrix {
        linalg::from_columns(&self.images)
    }

    pub fn from_matrix(m: &Matrix) -> LinMap {
        LinMap { images: linalg::transpose(m) }
    }

    /// self ∘ other
    pub fn compose(&self, other: &LinMap) -> LinMap {
        LinMap { images: other.images.iter().map(|v| self.apply(v)).collect() }
    }

    pub fn inverse(&self) -> Option<LinMap> {
        linalg::inverse(&self.matrix()).map(|m| LinMap::from_matrix(&m))
    }
}

impl Algebra {
    /// Empty bracket on the given labels and parities.
    pub fn new(ctx: &CycloCtx, labels: Vec<String>, parity: Vec<u8>) -> Algebra {
        let n = labels.len();
        assert_eq!(parity.len(), n);
        Algebra { ctx: ctx.clone(), labels, parity, table: vec![vec![Vec::new(); n]; n], family: Family::Custom }
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn index(&self, label: &str) -> Result<usize, AlgebraError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))
    }

    pub fn basis_vec(&self, i: usize) -> Vect {
        linalg::unit_vec(&self.ctx, self.dim(), i)
    }

    pub fn vec_of(&self, label: &str) -> Result<Vect, AlgebraError> {
        Ok(self.basis_vec(self.index(label)?))
    }

    /// Sets [b_i, b_j] = v (sparse).
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Cyclo]) {
        self.table[i][j] = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect();
    }

    /// Sets [b_i, b_j] = c·b_k and the super-skew partner [b_j, b_i].
    pub fn set_pair(&mut self, i: usize, j: usize, k: usize, c: &Cyclo) {
        self.table[i][j] = vec![(k, c.clone())];
        if i != j {
            let sign = if self.parity[i] == 1 && self.parity[j] == 1 { c.clone() } else { c.neg() };
            self.table[j][i] = vec![(k, sign)];
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vect {
        let mut v = zero_vec(&self.ctx, self.dim());
        for (k, c) in &self.table[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket_is_zero(&self, i: usize, j: usize) -> bool {
        self.table[i][j].is_empty()
    }

    pub fn bracket(&self, x: &[Cyclo], y: &[Cyclo]) -> Vect {
        let n = self.dim();
        let mut out = zero_vec(&self.ctx, n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || self.table[i][j].is_empty() {
                    continue;
                }
                let c = x[i].mul(&y[j]);
                for (k, s) in &self.table[i][j] {
                    out[*k] = out[*k].add(&c.mul(s));
                }
            }
        }
        out
    }

    /// Matrix of ad x (column j = [x, b_j]).
    pub fn ad(&self, x: &[Cyclo]) -> Matrix {
        let cols: Vec<Vect> = (0..self.dim()).map(|j| self.bracket(x, &self.basis_vec(j))).collect();
        linalg::from_columns(&cols)
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            for c in 0..n {
                let row: Vect = (0..n)
                    .map(|i| self.table[i][j].iter().find(|(k, _)| *k == c).map(|(_, s)| s.clone()).unwrap_or_else(|| self.ctx.zero()))
                    .collect();
                if !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
        let ns = nullspace(&self.ctx, &rows, n);
        Subspace::span(n, &ns)
    }

    pub fn derived(&self) -> Subspace {
        let n = self.dim();
        let mut vs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.table[i][j].is_empty() {
                    vs.push(self.bracket_basis(i, j));
                }
            }
        }
        Subspace::span(n, &vs)
    }

    fn parity_of_vec(&self, v: &[Cyclo]) -> Option<u8> {
        let mut p = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match p {
                None => p = Some(self.parity[i]),
                Some(q) if q != self.parity[i] => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn is_parity_homogeneous(&self, v: &[Cyclo]) -> bool {
        self.parity_of_vec(v).is_some()
    }

    /// Parity of a homogeneous nonzero vector.
    pub fn vec_parity(&self, v: &[Cyclo]) -> Option<u8> {
        if is_zero_vec(v) {
            return None;
        }
        self.parity_of_vec(v)
    }

    fn sgn(&self, a: usize, b: usize) -> bool {
        self.parity[a] == 1 && self.parity[b] == 1
    }

    /// Parity compatibility, super skew-symmetry and the super Jacobi identity on basis triples.
    pub fn verify_axioms(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &self.table[i][j] {
                    if self.parity[*k] != (self.parity[i] + self.parity[j]) % 2 {
                        return Err(AlgebraError::Axiom(format!(
                            "parity: [{}, {}] has a component along {}",
                            self.labels[i], self.labels[j], self.labels[*k]
                        )));
                    }
                }
                let a = self.bracket_basis(i, j);
                let b = self.bracket_basis(j, i);
                let ok = if self.sgn(i, j) { a == b } else { a == linalg::vneg(&b) };
                if !ok {
                    return Err(AlgebraError::Axiom(format!("skew-symmetry fails for ({}, {})", self.labels[i], self.labels[j])));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ea = self.basis_vec(a);
                    let eb = self.basis_vec(b);
                    let ec = self.basis_vec(c);
                    let t1 = self.bracket(&ea, &self.bracket_basis(b, c));
                    let t2 = self.bracket(&eb, &self.bracket_basis(c, a));
                    let t3 = self.bracket(&ec, &self.bracket_basis(a, b));
                    let s = |x: bool, v: Vect| if x { linalg::vneg(&v) } else { v };
                    let sum = linalg::vadd(&linalg::vadd(&s(self.sgn(a, c), t1), &s(self.sgn(b, a), t2)), &s(self.sgn(c, b), t3));
                    if !is_zero_vec(&sum) {
                        return Err(AlgebraError::Axiom(format!(
                            "Jacobi fails for ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that f is a parity-preserving bijective bracket homomorphism.
    pub fn check_automorphism(&self, f: &LinMap) -> Result<(), String> {
        let n = self.dim();
        if f.dim() != n {
            return Err("dimension mismatch".into());
        }
        if linalg::rank(&f.images) != n {
            return Err("not invertible".into());
        }
        for i in 0..n {
            match self.vec_parity(&f.images[i]) {
                Some(p) if p == self.parity[i] => {}
                _ => return Err(format!("image of {} is not of the same parity", self.labels[i])),
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = f.apply(&self.bracket_basis(i, j));
                let rhs = self.bracket(&f.images[i], &f.images[j]);
                if lhs != rhs {
                    return Err(format!("f([{0}, {1}]) != [f({0}), f({1})]", self.labels[i], self.labels[j]));
                }
            }
        }
        Ok(())
    }

    pub fn is_automorphism(&self, f: &LinMap) -> bool {
        self.check_automorphism(f).is_ok()
    }

    /// λ with f(z) = λ z for the one-dimensional center; None otherwise.
    pub fn similitude_factor(&self, f: &LinMap) -> Option<Cyclo> {
        let c = self.center();
        if c.dim() != 1 {
            return None;
        }
        let z = &c.basis[0];
        let fz = f.apply(z);
        let p = c.pivots[0];
        let lam = fz[p].div(&z[p]).ok()?;
        if linalg::vscale(&lam, z) == fz {
            Some(lam)
        } else {
            None
        }
    }
}

fn labels_for(k: usize, extra_front: &[&str]) -> Vec<String> {
    let mut l: Vec<String> = extra_front.iter().map(|s| s.to_string()).collect();
    for i in 1..=k {
        l.push(format!("e{i}"));
    }
    for i in 1..=k {
        l.push(format!("eh{i}"));
    }
    l
}

/// H_{2k+1}: [e_i, ê_i] = z. Basis order z, e_1..e_k, ê_1..ê_k.
pub fn heisenberg(k: usize, ctx: &CycloCtx) -> Algebra {
    let labels = labels_for(k, &["z"]);
    let n = labels.len();
    let mut a = Algebra::new(ctx, labels, vec![0; n]);
    for i in 0..k {
        a.set_pair(1 + i, 1 + k + i, 0, &ctx.one());
    }
    a.family = Family::Heisenberg { k };
    a
}

/// H_{2k+1,m}: adds odd w_j with [w_j, w_j] = z. Basis order z, e.., ê.., w_1..w_m.
pub fn heisenberg_super(k: usize, m: usize, ctx: &CycloCtx) -> Algebra {
    let mut labels = labels_for(k, &["z"]);
    for j in 1..=m {
        labels.push(format!("w{j}"));
    }
    let mut parity = vec![0u8; 1 + 2 * k];
    parity.extend(std::iter::repeat_n(1, m));
    let mut a = Algebra::new(ctx, labels, parity);
    for i in 0..k {
        a.set_pair(1 + i, 1 + k + i, 0, &ctx.one());
    }
    for j in 0..m {
        a.set_pair(1 + 2 * k + j, 1 + 2 * k + j, 0, &ctx.one());
    }
    a.family = Family::Super { k, m };
    a
}

/// H^λ: [e_i, ê_i] = λ_i z, [u, e_i] = λ_i ê_i, [u, ê_i] = λ_i e_i. Basis order z, u, e.., ê...
pub fn twisted(lambda: &[Cyclo], ctx: &CycloCtx) -> Algebra {
    let k = lambda.len();
    let labels = labels_for(k, &["z", "u"]);
    let n = labels.len();
    let mut a = Algebra::new(ctx, labels, vec![0; n]);
    for (i, l) in lambda.iter().enumerate() {
        let e = 2 + i;
        let eh = 2 + k + i;
        a.set_pair(e, eh, 0, l);
        a.set_pair(1, e, eh, l);
        a.set_pair(1, eh, e, l);
    }
    a.family = Family::Twisted { lambda: lambda.to_vec() };
    a
}

/// exp(ad x) when ad x is nilpotent.
pub fn exp_ad(alg: &Algebra, x: &Vect) -> Option<LinMap> {
    let n = alg.dim();
    let ctx = alg.ctx();
    let d = alg.ad(x);
    let id = crate::linalg::identity(ctx, n);
    let mut total = id.clone();
    let mut pw = id;
    for k in 1..=n {
        pw = crate::linalg::mat_mul(&d, &pw);
        if pw.iter().all(|r| is_zero_vec(r)) {
            return Some(LinMap::from_matrix(&total));
        }
        let c = ctx.from_frac(1, (1..=k as i64).product());
        for (tr, pr) in total.iter_mut().zip(&pw) {
            *tr = crate::linalg::vaxpy(tr, &c, pr);
        }
    }
    None
}

/// Random automorphism: inner exponentials of even elements and, for (super-)Heisenberg
/// algebras, symplectic transvections of the even part.
pub fn random_automorphism<R: rand::Rng>(alg: &Algebra, rng: &mut R, steps: usize) -> LinMap {
    let n = alg.dim();
    let ctx = alg.ctx().clone();
    let mut f = LinMap::identity(&ctx, n);
    let skip_u = matches!(alg.family(), Family::Twisted { .. });
    let even: Vec<usize> = (0..n).filter(|&i| alg.parity()[i] == 0 && !(skip_u && i == 1)).collect();
    let small = |rng: &mut R| ctx.from_int(rng.gen_range(-2..=2));
    for _ in 0..steps {
        let mut x = zero_vec(&ctx, n);
        for &i in &even {
            x[i] = small(rng);
        }
        if let Some(g) = exp_ad(alg, &x) {
            f = g.compose(&f);
        }
        if let Family::Heisenberg { k } | Family::Super { k, .. } = alg.family() {
            let k = *k;
            let mut w = zero_vec(&ctx, n);
            for i in 1..=2 * k {
                w[i] = small(rng);
            }
            let c = ctx.from_int(rng.gen_range(1..=2));
            let images = (0..n)
                .map(|j| {
                    let e = alg.basis_vec(j);
                    if (1..=2 * k).contains(&j) {
                        let om = alg.bracket(&w, &e)[0].clone();
                        crate::linalg::vaxpy(&e, &c.mul(&om), &w)
                    } else {
                        e
                    }
                })
                .collect();
            f = LinMap { images }.compose(&f);
        }
    }
    debug_assert!(alg.is_automorphism(&f));
    f
}

/// JSON description of an algebra.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Heisenberg {
        k: usize,
    },
    Super {
        k: usize,
        m: usize,
    },
    Twisted {
        lambda: Vec<String>,
    },
    Custom {
        labels: Vec<String>,
        #[serde(default)]
        parity: Vec<u8>,
        /// entries [x, y, {label: scalar}]
        brackets: Vec<(String, String, BTreeMap<String, String>)>,
        /// fill [y, x] by super skew-symmetry when absent
        #[serde(default = "default_true")]
        skew_fill: bool,
    },
}

fn default_true() -> bool {
    true
}

impl AlgebraSpec {
    /// Conductor needed to hold all scalars of the spec.
    pub fn required_conductor(&self) -> Result<u64, AlgebraError> {
        let mut n = 1u64;
        let mut add = |s: &str| -> Result<(), AlgebraError> {
            n = crate::scalars::lcm_u64(n, ScalarExpr::parse(s)?.required_conductor());
            Ok(())
        };
        match self {
            AlgebraSpec::Twisted { lambda } => {
                for s in lambda {
                    add(s)?;
                }
            }
            AlgebraSpec::Custom { brackets, .. } => {
                for (_, _, m) in brackets {
                    for s in m.values() {
                        add(s)?;
                    }
                }
            }
            _ => {}
        }
        Ok(n)
    }

    /// Spec that rebuilds the given algebra.
    pub fn from_algebra(alg: &Algebra) -> AlgebraSpec {
        match alg.family() {
            Family::Heisenberg { k } => AlgebraSpec::Heisenberg { k: *k },
            Family::Super { k, m } => AlgebraSpec::Super { k: *k, m: *m },
            Family::Twisted { lambda } => AlgebraSpec::Twisted { lambda: lambda.iter().map(|x| x.to_string()).collect() },
            Family::Custom => {
                let n = alg.dim();
                let mut brackets = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let w = alg.bracket_basis(i, j);
                        if is_zero_vec(&w) {
                            continue;
                        }
                        let m = (0..n).filter(|&k| !w[k].is_zero()).map(|k| (alg.labels()[k].clone(), w[k].to_string())).collect();
                        brackets.push((alg.labels()[i].clone(), alg.labels()[j].clone(), m));
                    }
                }
                AlgebraSpec::Custom { labels: alg.labels().to_vec(), parity: alg.parity().to_vec(), brackets, skew_fill: false }
            }
        }
    }

    pub fn build(&self, ctx: &CycloCtx) -> Result<Algebra, AlgebraError> {
        let alg = match self {
            AlgebraSpec::Heisenberg { k } => heisenberg(*k, ctx),
            AlgebraSpec::Super { k, m } => heisenberg_super(*k, *m, ctx),
            AlgebraSpec::Twisted { lambda } => {
                let l: Vec<Cyclo> = lambda.iter().map(|s| ctx.parse(s)).collect::<Result<_, _>>()?;
                if l.iter().any(|x| x.is_zero()) {
                    return Err(AlgebraError::Spec("twisted parameters must be nonzero".into()));
                }
                twisted(&l, ctx)
            }
            AlgebraSpec::Custom { labels, parity, brackets, skew_fill } => {
                let n = labels.len();
                let parity = if parity.is_empty() { vec![0; n] } else { parity.clone() };
                if parity.len() != n || parity.iter().any(|&p| p > 1) {
                    return Err(AlgebraError::Spec("parity must list 0/1 for every label".into()));
                }
                let mut a = Algebra::new(ctx, labels.clone(), parity);
                let mut given = vec![vec![false; n]; n];
                for (x, y, m) in brackets {
                    let i = a.index(x)?;
                    let j = a.index(y)?;
                    let mut v = zero_vec(ctx, n);
                    for (lab, s) in m {
                        let k = a.index(lab)?;
                        v[k] = v[k].add(&ctx.parse(s)?);
                    }
                    a.set_bracket(i, j, &v);
                    given[i][j] = true;
                }
                if *skew_fill {
                    for i in 0..n {
                        for j in 0..n {
                            if given[i][j] && !given[j][i] {
                                let v = a.bracket_basis(i, j);
                                let w = if a.sgn(i, j) { v } else { linalg::vneg(&v) };
                                a.set_bracket(j, i, &w);
                            }
                        }
                    }
                }
                a
            }
        };
        alg.verify_axioms()?;
        Ok(alg)
    }
}
