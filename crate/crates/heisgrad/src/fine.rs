//! Fine gradings: Heisenberg, super-Heisenberg and twisted Heisenberg families.

use crate::abelian::{canonicalize, AbGroup, GroupElt};
use crate::gradings::{universal_group, verify_grading, Grading, GradingError};
use crate::liealg::{heisenberg, heisenberg_super, twisted, Algebra, Family};
use crate::linalg::{self, is_zero_vec, nullspace, vaxpy, vscale, zero_vec, Matrix, Subspace, Vect};
use crate::scalars::{Cyclo, CycloCtx, ScalarError, ScalarExpr};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FineError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("parameters do not fit the algebra: {0}")]
    Shape(String),
    #[error("spectrum condition fails: {0}")]
    Spectrum(String),
    #[error("conductor {have} too small, need a multiple of {need}")]
    Conductor { have: u64, need: u64 },
    #[error("scalar: {0}")]
    Scalar(#[from] ScalarError),
    #[error("grading: {0}")]
    Grading(#[from] GradingError),
    #[error("{0}")]
    Other(String),
}

/// Role of a homogeneous basis vector inside a fine grading.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Z,
    U,
    E(usize),
    EH(usize),
    /// odd u_j = w_{2j-1} + i w_{2j}
    OddU(usize),
    /// odd v_j = (w_{2j-1} - i w_{2j}) / 2
    OddV(usize),
    /// odd w_{l+2r}
    OddZ(usize),
    /// x_i of the j-th type I block (j from 0, i in 1..=l)
    X(usize, usize),
    Y(usize, usize),
    /// a_i of the t-th type II block
    A(usize, usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Z => write!(f, "z"),
            Role::U => write!(f, "u"),
            Role::E(i) => write!(f, "e{}", i + 1),
            Role::EH(i) => write!(f, "eh{}", i + 1),
            Role::OddU(j) => write!(f, "uo{}", j + 1),
            Role::OddV(j) => write!(f, "vo{}", j + 1),
            Role::OddZ(l) => write!(f, "zo{}", l + 1),
            Role::X(j, i) => write!(f, "x{}^{}", i, j + 1),
            Role::Y(j, i) => write!(f, "y{}^{}", i, j + 1),
            Role::A(t, i) => write!(f, "a{}^{}", i, t + 1),
        }
    }
}

/// Parameters (l, s, r; β_1..β_s; α_1..α_r) of a fine grading on a twisted Heisenberg algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedParams {
    pub l: usize,
    pub s: usize,
    pub r: usize,
    pub betas: Vec<Cyclo>,
    pub alphas: Vec<Cyclo>,
}

impl fmt::Display for TwistedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.betas.iter().map(|x| x.to_string()).collect();
        let a: Vec<String> = self.alphas.iter().map(|x| x.to_string()).collect();
        write!(f, "{},{},{};{};{}", self.l, self.s, self.r, b.join(","), a.join(","))
    }
}

impl TwistedParams {
    /// Parses `l,s,r;β_1,…,β_s;α_1,…,α_r`.
    pub fn parse(s: &str, ctx: &CycloCtx) -> Result<TwistedParams, FineError> {
        let (shape, betas, alphas) = Self::parse_exprs(s)?;
        let ev = |v: Vec<ScalarExpr>| -> Result<Vec<Cyclo>, FineError> { v.iter().map(|e| e.eval(ctx).map_err(FineError::from)).collect() };
        let p = TwistedParams { l: shape.0, s: shape.1, r: shape.2, betas: ev(betas)?, alphas: ev(alphas)? };
        if p.betas.len() != p.s || p.alphas.len() != p.r {
            return Err(FineError::Params(format!("expected {} betas and {} alphas", p.s, p.r)));
        }
        Ok(p)
    }

    /// Parses without a field; used to find the conductor first.
    pub fn parse_exprs(s: &str) -> Result<((usize, usize, usize), Vec<ScalarExpr>, Vec<ScalarExpr>), FineError> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.is_empty() || parts.len() > 3 {
            return Err(FineError::Params(format!("cannot parse '{s}'")));
        }
        let nums: Vec<usize> = parts[0]
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| FineError::Params(format!("bad shape '{}'", parts[0]))))
            .collect::<Result<_, _>>()?;
        if nums.len() != 3 || nums[0] == 0 {
            return Err(FineError::Params("shape must be l,s,r with l >= 1".into()));
        }
        let list = |i: usize| -> Result<Vec<ScalarExpr>, FineError> {
            match parts.get(i) {
                None => Ok(vec![]),
                Some(t) if t.trim().is_empty() => Ok(vec![]),
                Some(t) => t.split(',').map(|x| ScalarExpr::parse(x).map_err(FineError::from)).collect(),
            }
        };
        Ok(((nums[0], nums[1], nums[2]), list(1)?, list(2)?))
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.l, self.s, self.r)
    }
}

/// Which family a fine grading belongs to.
#[derive(Clone, Debug)]
pub enum FineKind {
    Heisenberg { k: usize },
    Super { k: usize, m: usize, r: usize },
    Twisted { lambda: Vec<Cyclo>, params: TwistedParams },
}

/// Fine grading with one-dimensional components and a homogeneous basis.
#[derive(Clone, Debug)]
pub struct FineGrading {
    pub grading: Grading,
    pub basis: Vec<Vect>,
    pub roles: Vec<Role>,
    pub degrees: Vec<GroupElt>,
    pub kind: FineKind,
}

impl FineGrading {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.grading.algebra
    }

    pub fn ctx(&self) -> &CycloCtx {
        self.grading.algebra.ctx()
    }

    pub fn role_index(&self, r: &Role) -> Option<usize> {
        self.roles.iter().position(|x| x == r)
    }

    fn build(alg: Arc<Algebra>, group: AbGroup, items: Vec<(Role, GroupElt, Vect)>, kind: FineKind) -> Result<FineGrading, FineError> {
        let grading = Grading::from_homogeneous(alg, group, items.iter().map(|(_, g, v)| (g.clone(), v.clone())).collect());
        verify_grading(&grading)?;
        if grading.components.values().any(|b| b.len() != 1) {
            return Err(FineError::Other("expected one-dimensional components".into()));
        }
        Ok(FineGrading {
            grading,
            roles: items.iter().map(|x| x.0.clone()).collect(),
            degrees: items.iter().map(|x| x.1.clone()).collect(),
            basis: items.into_iter().map(|x| x.2).collect(),
            kind,
        })
    }
}

/// Cartan grading of H_{2k+1} by Z^{k+1}: z ↦ (0;2), e_i ↦ (e_i;1), ê_i ↦ (-e_i;1).
pub fn gamma_hn(k: usize, ctx: &CycloCtx) -> Result<FineGrading, FineError> {
    if k == 0 {
        return Err(FineError::Params("k must be at least 1".into()));
    }
    let alg = Arc::new(heisenberg(k, ctx));
    let g = AbGroup::free(k + 1);
    let deg = |i: Option<(usize, i64)>| {
        let mut c = vec![0i64; k + 1];
        match i {
            None => c[k] = 2,
            Some((j, s)) => {
                c[j] = s;
                c[k] = 1;
            }
        }
        g.elt(&c).unwrap()
    };
    let mut items = vec![(Role::Z, deg(None), alg.basis_vec(0))];
    for i in 0..k {
        items.push((Role::E(i), deg(Some((i, 1))), alg.basis_vec(1 + i)));
    }
    for i in 0..k {
        items.push((Role::EH(i), deg(Some((i, -1))), alg.basis_vec(1 + k + i)));
    }
    FineGrading::build(alg, g, items, FineKind::Heisenberg { k })
}

/// Γ^r on H_{2k+1,m}, regraded by its universal group.
///
/// Raw degrees live in Z^{1+k+r} × Z_2^{m-2r}; the grading returned is over the
/// universal group, generated by the support.
pub fn gamma_super(k: usize, m: usize, r: usize, ctx: &CycloCtx) -> Result<FineGrading, FineError> {
    if 2 * r > m {
        return Err(FineError::Shape(format!("need 2r <= m, got r={r}, m={m}")));
    }
    if k + m == 0 {
        return Err(FineError::Params("need k + m >= 1".into()));
    }
    if r > 0 && !ctx.conductor().is_multiple_of(4) {
        return Err(FineError::Conductor { have: ctx.conductor(), need: 4 });
    }
    let q = m - 2 * r;
    let alg = Arc::new(heisenberg_super(k, m, ctx));
    let ncoord = 1 + k + r + q;
    let mut rels = Vec::new();
    for t in 0..q {
        let mut row = vec![0i64; ncoord];
        row[1 + k + r + t] = 2;
        rels.push(row);
    }
    let raw = canonicalize(ncoord, &rels).map_err(GradingError::from)?;
    let raw_deg = |first: i64, slot: Option<(usize, i64)>| {
        let mut c = vec![0i64; ncoord];
        c[0] = first;
        if let Some((s, v)) = slot {
            c[s] = v;
        }
        raw.image(&c).unwrap()
    };
    let w = |j: usize| alg.basis_vec(1 + 2 * k + j);
    let i = ctx.i().ok();
    let mut items = vec![(Role::Z, raw_deg(2, None), alg.basis_vec(0))];
    for a in 0..k {
        items.push((Role::E(a), raw_deg(1, Some((1 + a, 1))), alg.basis_vec(1 + a)));
        items.push((Role::EH(a), raw_deg(1, Some((1 + a, -1))), alg.basis_vec(1 + k + a)));
    }
    for j in 0..r {
        let iu = i.clone().unwrap();
        let u = vaxpy(&w(2 * j), &iu, &w(2 * j + 1));
        let half = ctx.from_frac(1, 2);
        let v = vscale(&half, &vaxpy(&w(2 * j), &iu.neg(), &w(2 * j + 1)));
        items.push((Role::OddU(j), raw_deg(1, Some((1 + k + j, 1))), u));
        items.push((Role::OddV(j), raw_deg(1, Some((1 + k + j, -1))), v));
    }
    for l in 0..q {
        items.push((Role::OddZ(l), raw_deg(1, Some((1 + k + r + l, 1))), w(2 * r + l)));
    }
    let raw_fg = FineGrading::build(alg.clone(), raw, items.clone(), FineKind::Super { k, m, r })?;
    let uni = universal_group(&raw_fg.grading)?;
    let items2 = items.into_iter().map(|(ro, g, v)| (ro, uni.degree_map[&g].clone(), v)).collect();
    FineGrading::build(alg, uni.group, items2, FineKind::Super { k, m, r })
}

/// The fine gradings Γ^0, …, Γ^{⌊m/2⌋} of H_{2k+1,m}.
pub fn enumerate_fine_super(k: usize, m: usize, ctx: &CycloCtx) -> Result<Vec<FineGrading>, FineError> {
    (0..=m / 2).map(|r| gamma_super(k, m, r, ctx)).collect()
}

/// Universal group of Γ^r as predicted in closed form: Z^{1+k+r} × Z_2^{max(m-2r-1, 0)}.
pub fn super_universal_prediction(k: usize, m: usize, r: usize) -> AbGroup {
    let q = m - 2 * r;
    AbGroup::from_invariants(1 + k + r, &vec![2; q.saturating_sub(1)])
}

/// Class relation: a ~ b iff (a/b)^m = 1.
pub fn same_class(a: &Cyclo, b: &Cyclo, m: usize) -> bool {
    match a.div(b) {
        Ok(q) => q.pow(m as i64).map(|x| x.is_one()).unwrap_or(false),
        Err(_) => false,
    }
}

/// Exponent of the class relation for type I (l even: l, l odd: 2l).
pub fn class_exp_i(l: usize) -> usize {
    if l.is_multiple_of(2) {
        l
    } else {
        2 * l
    }
}

/// Exponent of the class relation for type II.
pub fn class_exp_ii(l: usize) -> usize {
    l
}

fn xi(ctx: &CycloCtx, l: usize) -> Result<Cyclo, FineError> {
    ctx.root_of_unity(l as u64, 1).map_err(|_| FineError::Conductor { have: ctx.conductor(), need: l as u64 })
}

fn sorted(mut v: Vec<Cyclo>) -> Vec<Cyclo> {
    v.sort();
    v
}

/// Multiset {±λ_i}.
pub fn spectrum(lambda: &[Cyclo]) -> Vec<Cyclo> {
    sorted(lambda.iter().flat_map(|x| [x.clone(), x.neg()]).collect())
}

fn orbit_i(x: &Cyclo, xi: &Cyclo, l: usize) -> Vec<Cyclo> {
    let mut out = Vec::new();
    let mut p = x.clone();
    for _ in 0..l {
        out.push(p.clone());
        out.push(p.neg());
        p = p.mul(xi);
    }
    out
}

fn orbit_ii(x: &Cyclo, xi: &Cyclo, l: usize) -> Vec<Cyclo> {
    let mut out = Vec::new();
    let mut p = x.clone();
    for _ in 0..l {
        out.push(p.clone());
        p = p.mul(xi);
    }
    out
}

/// Multiset equality {±λ_i} = {±ξ^t β_j} ∪ {ξ^t α_i}.
pub fn spectrum_check(lambda: &[Cyclo], p: &TwistedParams) -> Result<bool, FineError> {
    let ctx = lambda[0].ctx().clone();
    let x = xi(&ctx, p.l)?;
    let mut t = Vec::new();
    for b in &p.betas {
        t.extend(orbit_i(b, &x, p.l));
    }
    for a in &p.alphas {
        t.extend(orbit_ii(a, &x, p.l));
    }
    Ok(sorted(t) == spectrum(lambda))
}

fn validate_shape(k: usize, p: &TwistedParams) -> Result<(), FineError> {
    if p.l * (p.r + 2 * p.s) != 2 * k {
        return Err(FineError::Shape(format!("l(r+2s) = {} but 2k = {}", p.l * (p.r + 2 * p.s), 2 * k)));
    }
    if p.l % 2 == 1 && p.r != 0 {
        return Err(FineError::Shape("r must be 0 when l is odd".into()));
    }
    if p.betas.len() != p.s || p.alphas.len() != p.r {
        return Err(FineError::Shape("parameter counts do not match s and r".into()));
    }
    if p.betas.iter().chain(&p.alphas).any(|x| x.is_zero()) {
        return Err(FineError::Shape("parameters must be nonzero".into()));
    }
    Ok(())
}

/// Grading group Z_l × Z^s × Z × Z_2^{r-1} as a presentation, with its coordinate count.
fn theorem_presentation(l: usize, s: usize, r: usize) -> (AbGroup, usize) {
    let nt = r.saturating_sub(1);
    let n = 1 + s + 1 + nt;
    let mut rels = Vec::new();
    let mut row = vec![0i64; n];
    row[0] = l as i64;
    rels.push(row);
    for t in 0..nt {
        let mut row = vec![0i64; n];
        row[2 + s + t] = 2;
        rels.push(row);
    }
    (canonicalize(n, &rels).expect("valid presentation"), n)
}

/// Z_l × Z^{s+1} × Z_2^{r-1} (r ≥ 1) or Z_l × Z^{s+1} (r = 0).
pub fn theorem_universal_group(l: usize, s: usize, r: usize) -> AbGroup {
    theorem_presentation(l, s, r).0
}

/// Vectors of a type I block B^I_l(u, β) from eigenpairs (p_t, q_t), [u,p_t] = ξ^t β p_t.
fn block_i_vectors(ctx: &CycloCtx, dim: usize, l: usize, xi: &Cyclo, p: &[Vect], q: &[Vect]) -> (Vec<Vect>, Vec<Vect>) {
    let inv2l = ctx.from_frac(-1, 2 * l as i64);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 1..=l {
        let mut x = zero_vec(ctx, dim);
        let mut y = zero_vec(ctx, dim);
        let sj = if j % 2 == 0 { inv2l.clone() } else { inv2l.neg() };
        for t in 1..=l {
            x = vaxpy(&x, &xi.pow((j * t) as i64).unwrap(), &p[t - 1]);
            y = vaxpy(&y, &sj.mul(&xi.pow(((j - 1) * t) as i64).unwrap()), &q[t - 1]);
        }
        xs.push(x);
        ys.push(y);
    }
    (xs, ys)
}

/// Vectors of a type II block with 2h elements from h eigenpairs, [u,p_t] = ζ^t α p_t, ζ of order 2h.
fn block_ii_vectors(ctx: &CycloCtx, dim: usize, h: usize, zeta: &Cyclo, p: &[Vect], q: &[Vect]) -> Result<Vec<Vect>, FineError> {
    let c = ctx.i()?.div(&ctx.sqrt_int(h as u64)?.scale(&num_rational::BigRational::from_integer(2.into())))?;
    let mut xs = Vec::new();
    for j in 1..=2 * h {
        let mut x = zero_vec(ctx, dim);
        let sgn = if (j - 1) % 2 == 0 { ctx.one() } else { ctx.from_int(-1) };
        for t in 1..=h {
            let w = c.mul(&zeta.pow(((j - 1) * t) as i64)?);
            x = vaxpy(&x, &w, &p[t - 1]);
            x = vaxpy(&x, &w.mul(&sgn), &q[t - 1]);
        }
        xs.push(x);
    }
    Ok(xs)
}

fn check_eq(alg: &Algebra, lhs: &Vect, rhs: &Vect, what: &str) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: got {}, expected {}", crate::gradings::fmt_vec(alg, lhs), crate::gradings::fmt_vec(alg, rhs)))
    }
}

/// Checks the defining relations of B^I_l(u, α) on x_1..x_l, y_1..y_l.
pub fn verify_block_i(alg: &Algebra, u: &Vect, z: &Vect, xs: &[Vect], ys: &[Vect], alpha: &Cyclo) -> Result<(), String> {
    let l = xs.len();
    let zero = zero_vec(alg.ctx(), alg.dim());
    let sgn = |e: usize| if e.is_multiple_of(2) { alpha.clone() } else { alpha.neg() };
    for i in 0..l {
        let nx = if i + 1 < l { vscale(alpha, &xs[i + 1]) } else { vscale(alpha, &xs[0]) };
        check_eq(alg, &alg.bracket(u, &xs[i]), &nx, &format!("[u, x{}]", i + 1))?;
        let ny = if i + 1 < l { vscale(alpha, &ys[i + 1]) } else { vscale(&sgn(l), &ys[0]) };
        check_eq(alg, &alg.bracket(u, &ys[i]), &ny, &format!("[u, y{}]", i + 1))?;
    }
    for i in 1..=l {
        for j in 1..=l {
            let expect = if i + j == l {
                vscale(&sgn(l - i), z)
            } else if i == l && j == l {
                vscale(&sgn(l), z)
            } else {
                zero.clone()
            };
            check_eq(alg, &alg.bracket(&xs[i - 1], &ys[j - 1]), &expect, &format!("[x{i}, y{j}]"))?;
            check_eq(alg, &alg.bracket(&xs[i - 1], &xs[j - 1]), &zero, &format!("[x{i}, x{j}]"))?;
            check_eq(alg, &alg.bracket(&ys[i - 1], &ys[j - 1]), &zero, &format!("[y{i}, y{j}]"))?;
        }
    }
    Ok(())
}

/// Checks the relations of a type II block with n = 2h elements: cyclic [u, x_j] = α x_{j+1},
/// [x_i, x_{n+1-i}] = (-1)^i α z and all other brackets zero.
pub fn verify_block_ii(alg: &Algebra, u: &Vect, z: &Vect, xs: &[Vect], alpha: &Cyclo) -> Result<(), String> {
    let n = xs.len();
    let zero = zero_vec(alg.ctx(), alg.dim());
    for i in 0..n {
        check_eq(alg, &alg.bracket(u, &xs[i]), &vscale(alpha, &xs[(i + 1) % n]), &format!("[u, a{}]", i + 1))?;
    }
    for i in 1..=n {
        for j in 1..=n {
            let expect = if i + j == n + 1 {
                vscale(&if i % 2 == 0 { alpha.clone() } else { alpha.neg() }, z)
            } else {
                zero.clone()
            };
            check_eq(alg, &alg.bracket(&xs[i - 1], &xs[j - 1]), &expect, &format!("[a{i}, a{j}]"))?;
        }
    }
    Ok(())
}

/// Picks unused indices i with λ_i = ±μ; returns (p_t, q_t) eigenvector pairs.
fn take_slots(lambda: &[Cyclo], used: &mut [bool], mus: &[Cyclo], alg: &Algebra) -> Result<(Vec<Vect>, Vec<Vect>), FineError> {
    let k = lambda.len();
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for mu in mus {
        let pos = (0..k).find(|&i| !used[i] && (lambda[i] == *mu || lambda[i] == mu.neg()));
        let i = pos.ok_or_else(|| FineError::Spectrum(format!("no eigenvalue left for {mu}")))?;
        used[i] = true;
        let e = alg.basis_vec(2 + i);
        let eh = alg.basis_vec(2 + k + i);
        let ui = linalg::vadd(&e, &eh);
        let vi = linalg::vsub(&e, &eh);
        if lambda[i] == *mu {
            ps.push(ui);
            qs.push(vi);
        } else {
            ps.push(vi);
            qs.push(ui);
        }
    }
    Ok((ps, qs))
}

/// Conductor large enough for every fine grading on H^λ: lcm(8, 4l over l | 2k, root orders of λ).
pub fn auto_conductor(lambda: &[ScalarExpr], extra: u64) -> u64 {
    let k = lambda.len() as u64;
    let mut n = 8u64;
    for l in crate::scalars::divisors(2 * k.max(1)) {
        n = crate::scalars::lcm_u64(n, 4 * l);
        n = crate::scalars::lcm_u64(n, 2 * l);
    }
    for e in lambda {
        n = crate::scalars::lcm_u64(n, e.required_conductor());
    }
    crate::scalars::lcm_u64(n, extra.max(1))
}

/// Fine grading Γ(l,s,r;β;α) on H^λ, over Z_l × Z^{s+1} × Z_2^{r-1}.
pub fn fine_twisted(lambda: &[Cyclo], p: &TwistedParams) -> Result<FineGrading, FineError> {
    let k = lambda.len();
    if k == 0 {
        return Err(FineError::Shape("λ must be nonempty".into()));
    }
    if lambda.iter().any(|x| x.is_zero()) {
        return Err(FineError::Shape("λ_i must be nonzero".into()));
    }
    validate_shape(k, p)?;
    let ctx = lambda[0].ctx().clone();
    let need = 4 * p.l as u64;
    if !ctx.conductor().is_multiple_of(need) {
        return Err(FineError::Conductor { have: ctx.conductor(), need });
    }
    if !spectrum_check(lambda, p)? {
        return Err(FineError::Spectrum(format!("{{±λ}} differs from the spectrum of ({p})")));
    }
    let l = p.l;
    let x = xi(&ctx, l)?;
    let alg = Arc::new(twisted(lambda, &ctx));
    let n = alg.dim();
    let (group, ncoord) = theorem_presentation(l, p.s, p.r);
    let deg = |c0: i64, free: Option<(usize, i64)>, last: i64, tor: Option<usize>| {
        let mut c = vec![0i64; ncoord];
        c[0] = c0;
        if let Some((j, v)) = free {
            c[1 + j] = v;
        }
        c[1 + p.s] = last;
        if let Some(t) = tor {
            c[2 + p.s + t] = 1;
        }
        group.image(&c).unwrap()
    };
    let z = alg.basis_vec(0);
    let u = alg.basis_vec(1);
    let mut items = vec![(Role::Z, deg(1, None, 2, None), z.clone()), (Role::U, deg(1, None, 0, None), u.clone())];
    let mut used = vec![false; k];
    for (j, b) in p.betas.iter().enumerate() {
        let mus: Vec<Cyclo> = (1..=l).map(|t| x.pow(t as i64).unwrap().mul(b)).collect();
        let (ps, qs) = take_slots(lambda, &mut used, &mus, &alg)?;
        let (xs, ys) = block_i_vectors(&ctx, n, l, &x, &ps, &qs);
        verify_block_i(&alg, &u, &z, &xs, &ys, b).map_err(|e| FineError::Other(format!("type I block {}: {e}", j + 1)))?;
        for i in 1..=l {
            items.push((Role::X(j, i), deg(i as i64 + 1, Some((j, 1)), 1, None), xs[i - 1].clone()));
            items.push((Role::Y(j, i), deg(i as i64, Some((j, -1)), 1, None), ys[i - 1].clone()));
        }
    }
    for (t, a) in p.alphas.iter().enumerate() {
        let h = l / 2;
        let mus: Vec<Cyclo> = (1..=h).map(|s| x.pow(s as i64).unwrap().mul(a)).collect();
        let (ps, qs) = take_slots(lambda, &mut used, &mus, &alg)?;
        let xs = block_ii_vectors(&ctx, n, h, &x, &ps, &qs)?;
        verify_block_ii(&alg, &u, &z, &xs, a).map_err(|e| FineError::Other(format!("type II block {}: {e}", t + 1)))?;
        let tor = if t + 1 < p.r { Some(t) } else { None };
        for i in 1..=l {
            items.push((Role::A(t, i), deg(i as i64, None, 1, tor), xs[i - 1].clone()));
        }
    }
    let kind = FineKind::Twisted { lambda: lambda.to_vec(), params: p.clone() };
    FineGrading::build(alg, group, items, kind)
}

/// Γ_1: e_i, ê_i spans, universal group Z × Z_2^k.
pub fn gamma1(lambda: &[Cyclo]) -> Result<FineGrading, FineError> {
    let k = lambda.len();
    let p = TwistedParams { l: 2, s: 0, r: k, betas: vec![], alphas: lambda.iter().map(|x| x.neg()).collect() };
    fine_twisted(lambda, &p)
}

/// Γ_2: u_i = e_i + ê_i, v_i = e_i - ê_i spans, universal group Z^{1+k}.
pub fn gamma2(lambda: &[Cyclo]) -> Result<FineGrading, FineError> {
    let k = lambda.len();
    let p = TwistedParams { l: 1, s: k, r: 0, betas: lambda.to_vec(), alphas: vec![] };
    fine_twisted(lambda, &p)
}

fn remove_sub(ms: &[Cyclo], sub: &[Cyclo]) -> Option<Vec<Cyclo>> {
    let mut rest = ms.to_vec();
    for x in sub {
        let p = rest.iter().position(|y| y == x)?;
        rest.remove(p);
    }
    Some(rest)
}

fn split_spectrum(ms: &[Cyclo], xi: &Cyclo, l: usize, s: usize, r: usize) -> Vec<(Vec<Cyclo>, Vec<Cyclo>)> {
    if ms.is_empty() {
        return if s == 0 && r == 0 { vec![(vec![], vec![])] } else { vec![] };
    }
    let x = ms.last().unwrap();
    let mut out = Vec::new();
    if s > 0 {
        if let Some(rest) = remove_sub(ms, &orbit_i(x, xi, l)) {
            for (mut b, a) in split_spectrum(&rest, xi, l, s - 1, r) {
                b.insert(0, x.clone());
                out.push((b, a));
            }
        }
    }
    if r > 0 && l.is_multiple_of(2) {
        if let Some(rest) = remove_sub(ms, &orbit_ii(x, xi, l)) {
            for (b, mut a) in split_spectrum(&rest, xi, l, s, r - 1) {
                a.insert(0, x.clone());
                out.push((b, a));
            }
        }
    }
    out
}

/// Multiset of classes matches after scaling by ε.
fn classes_match(a: &[Cyclo], b: &[Cyclo], eps: &Cyclo, m: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; a.len()];
    for y in b {
        let ey = eps.mul(y);
        match (0..a.len()).find(|&i| !used[i] && same_class(&a[i], &ey, m)) {
            Some(i) => used[i] = true,
            None => return false,
        }
    }
    true
}

/// ε with εβ'_j ~ β_{σ(j)} and εα'_i ~ α_{η(i)}, if the two gradings are equivalent.
pub fn equivalent_fine(p: &TwistedParams, q: &TwistedParams) -> Option<Cyclo> {
    if p.shape() != q.shape() {
        return None;
    }
    let (ref_p, ref_q) = if p.s > 0 {
        (&p.betas, &q.betas)
    } else if p.r > 0 {
        (&p.alphas, &q.alphas)
    } else {
        return None;
    };
    let ctx = ref_p[0].ctx().clone();
    for a in ref_p {
        let base = a.div(&ref_q[0]).ok()?;
        for (w, _) in ctx.roots_of_unity() {
            let eps = base.mul(w);
            if classes_match(&p.betas, &q.betas, &eps, class_exp_i(p.l)) && classes_match(&p.alphas, &q.alphas, &eps, class_exp_ii(p.l)) {
                return Some(eps);
            }
        }
    }
    None
}

/// Shape (l, s, r) considered during enumeration and why it was kept or dropped.
#[derive(Clone, Debug)]
pub struct ShapeOutcome {
    pub l: usize,
    pub s: usize,
    pub r: usize,
    pub candidates: usize,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct TwistedEnumeration {
    pub lambda: Vec<Cyclo>,
    pub shapes: Vec<ShapeOutcome>,
    /// all spectrum decompositions, before identifying equivalent ones
    pub candidates: Vec<TwistedParams>,
    /// for each candidate, the index of its class
    pub class_of: Vec<usize>,
    pub classes: Vec<TwistedParams>,
}

/// All fine gradings of H^λ up to equivalence.
pub fn enumerate_fine_twisted(lambda: &[Cyclo]) -> Result<TwistedEnumeration, FineError> {
    let k = lambda.len();
    if k == 0 || lambda.iter().any(|x| x.is_zero()) {
        return Err(FineError::Shape("λ must be a nonempty list of nonzero scalars".into()));
    }
    let ctx = lambda[0].ctx().clone();
    let spec = spectrum(lambda);
    let mut shapes = Vec::new();
    let mut candidates = Vec::new();
    for l in crate::scalars::divisors(2 * k as u64) {
        let l = l as usize;
        let m = 2 * k / l;
        for s in 0..=m / 2 {
            let r = m - 2 * s;
            if l % 2 == 1 && r != 0 {
                continue;
            }
            let x = match ctx.root_of_unity(l as u64, 1) {
                Ok(x) => x,
                Err(_) => {
                    shapes.push(ShapeOutcome { l, s, r, candidates: 0, note: format!("no primitive {l}-th root of unity in the field") });
                    continue;
                }
            };
            let splits = split_spectrum(&spec, &x, l, s, r);
            let note = if splits.is_empty() { "spectrum is not a union of the required orbits".to_string() } else { "ok".to_string() };
            shapes.push(ShapeOutcome { l, s, r, candidates: splits.len(), note });
            for (betas, alphas) in splits {
                candidates.push(TwistedParams { l, s, r, betas, alphas });
            }
        }
    }
    let mut classes: Vec<TwistedParams> = Vec::new();
    let mut class_of = Vec::new();
    for c in &candidates {
        match classes.iter().position(|d| equivalent_fine(d, c).is_some()) {
            Some(i) => class_of.push(i),
            None => {
                class_of.push(classes.len());
                classes.push(c.clone());
            }
        }
    }
    Ok(TwistedEnumeration { lambda: lambda.to_vec(), shapes, candidates, class_of, classes })
}

/// Block found by the decomposition algorithm.
#[derive(Clone, Debug)]
pub struct FoundBlock {
    pub type_ii: bool,
    pub param: Cyclo,
    pub xs: Vec<Vect>,
    pub ys: Vec<Vect>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// homogeneous u' = u + αz + Σ α_i u_i + Σ β_i v_i
    pub u_prime: Vect,
    pub params: TwistedParams,
    pub blocks: Vec<FoundBlock>,
}

/// Homogeneous element outside [L, L], normalised to u-coefficient 1.
pub fn homogenize_u(gr: &Grading) -> Result<(Vect, GroupElt), FineError> {
    let alg = &gr.algebra;
    if !matches!(alg.family(), Family::Twisted { .. }) {
        return Err(FineError::Other("algebra is not a twisted Heisenberg algebra".into()));
    }
    for (g, b) in &gr.components {
        for v in b {
            if !v[1].is_zero() {
                let c = v[1].inv()?;
                return Ok((vscale(&c, v), g.clone()));
            }
        }
    }
    Err(FineError::Other("no homogeneous element outside the derived algebra".into()))
}

fn mat_pow(m: &Matrix, e: usize, ctx: &CycloCtx) -> Matrix {
    let mut acc = linalg::identity(ctx, m.len());
    for _ in 0..e {
        acc = linalg::mat_mul(&acc, m);
    }
    acc
}

/// Intersection of span(basis) with the kernel of the matrix.
fn kernel_in(basis: &[Vect], m: &Matrix, ctx: &CycloCtx) -> Vec<Vect> {
    if basis.is_empty() {
        return vec![];
    }
    let imgs: Vec<Vect> = basis.iter().map(|b| linalg::mat_vec(m, b)).collect();
    let n = imgs[0].len();
    // rows: coordinates of Σ c_a imgs_a
    let rows: Vec<Vect> = (0..n).map(|c| imgs.iter().map(|v| v[c].clone()).collect()).collect();
    nullspace(ctx, &rows, basis.len())
        .into_iter()
        .map(|c| {
            let mut v = zero_vec(ctx, n);
            for (a, b) in c.iter().zip(basis) {
                v = vaxpy(&v, a, b);
            }
            v
        })
        .collect()
}

/// Recovers the parameters of a fine grading on H^λ by splitting off blocks.
pub fn decompose_twisted_grading(gr: &Grading) -> Result<Decomposition, FineError> {
    let alg = gr.algebra.clone();
    let lambda = match alg.family() {
        Family::Twisted { lambda } => lambda.clone(),
        _ => return Err(FineError::Other("algebra is not a twisted Heisenberg algebra".into())),
    };
    verify_grading(gr)?;
    let ctx = alg.ctx().clone();
    let n = alg.dim();
    let k = lambda.len();
    let (u1, h) = homogenize_u(gr)?;
    let l = h.order().ok_or_else(|| FineError::Other(format!("deg u' = {h} has infinite order; the grading is not fine")))? as usize;
    let phi = alg.ad(&u1);
    let phil = mat_pow(&phi, l, &ctx);
    let z = alg.basis_vec(0);
    // R_g = ad u'(L_{g-h})
    let mut rg: BTreeMap<GroupElt, Vec<Vect>> = BTreeMap::new();
    for (g, b) in &gr.components {
        let imgs: Vec<Vect> = b.iter().map(|v| linalg::mat_vec(&phi, v)).collect();
        let sp = Subspace::span(n, &imgs);
        if sp.dim() > 0 {
            rg.insert(g.add(&h).map_err(GradingError::from)?, sp.basis);
        }
    }
    let mut mus: Vec<Cyclo> = spectrum(&lambda);
    mus.dedup();
    let mut blocks = Vec::new();
    let eig_space = |mu: &Cyclo, rg: &BTreeMap<GroupElt, Vec<Vect>>| -> Vec<(GroupElt, Vec<Vect>)> {
        let mul = mu.pow(l as i64).unwrap();
        let shifted: Matrix = phil
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, c)| if i == j { c.sub(&mul) } else { c.clone() }).collect())
            .collect();
        rg.iter()
            .map(|(g, b)| (g.clone(), kernel_in(b, &shifted, &ctx)))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    };
    let zc = |w: &Vect| -> Result<Cyclo, FineError> {
        let c = w[0].clone();
        if vscale(&c, &z) != *w {
            return Err(FineError::Other("bracket is not central".into()));
        }
        Ok(c)
    };
    while rg.values().any(|b| !b.is_empty()) {
        let (mu, vsp) = mus
            .iter()
            .find_map(|mu| {
                let v = eig_space(mu, &rg);
                if v.is_empty() {
                    None
                } else {
                    Some((mu.clone(), v))
                }
            })
            .ok_or_else(|| FineError::Other("no eigenvalue found on the remaining subspace".into()))?;
        let q = |x: &Vect| alg.bracket(x, &linalg::mat_vec(&phi, x));
        let mut anis = None;
        if l.is_multiple_of(2) {
            'o: for (_, b) in &vsp {
                for a in 0..b.len() {
                    if !is_zero_vec(&q(&b[a])) {
                        anis = Some(b[a].clone());
                        break 'o;
                    }
                    for c in a + 1..b.len() {
                        let s = linalg::vadd(&b[a], &b[c]);
                        if !is_zero_vec(&q(&s)) {
                            anis = Some(s);
                            break 'o;
                        }
                    }
                }
            }
        }
        let powers = |x: &Vect| -> Vec<Vect> {
            let mut out = Vec::new();
            let mut cur = x.clone();
            let minv = mu.inv().unwrap();
            for _ in 0..l {
                cur = vscale(&minv, &linalg::mat_vec(&phi, &cur));
                out.push(cur.clone());
            }
            out
        };
        let block = match anis {
            Some(x) => {
                let c = zc(&q(&x))?;
                let t2 = mu.mul(&mu).div(&c)?;
                let t = t2.sqrt_try().ok_or_else(|| FineError::Other(format!("normalising a type II block needs sqrt({t2})")))?;
                let x = vscale(&t, &x);
                let xs = powers(&x);
                verify_block_ii(&alg, &u1, &z, &xs, &mu).map_err(FineError::Other)?;
                FoundBlock { type_ii: true, param: mu.clone(), xs, ys: vec![] }
            }
            None => {
                let x = vsp[0].1[0].clone();
                let vneg = eig_space(&mu.neg(), &rg);
                let y = vneg
                    .iter()
                    .flat_map(|(_, b)| b.iter())
                    .find(|y| !is_zero_vec(&alg.bracket(&x, y)))
                    .cloned()
                    .ok_or_else(|| FineError::Other("no partner for a type I block".into()))?;
                let c = zc(&alg.bracket(&x, &y))?;
                let y = vscale(&mu.div(&c)?, &y);
                let xs = powers(&x);
                let ys = powers(&y);
                verify_block_i(&alg, &u1, &z, &xs, &ys, &mu).map_err(FineError::Other)?;
                FoundBlock { type_ii: false, param: mu.clone(), xs, ys }
            }
        };
        // R <- centralizer of the block inside R
        let span: Vec<Vect> = block.xs.iter().chain(&block.ys).cloned().collect();
        let cm: Matrix = {
            // rows: [x, b]_c for each b in block and coordinate c, as functional on x
            let mut rows = Vec::new();
            for b in &span {
                let adb = alg.ad(b);
                rows.extend(adb);
            }
            rows
        };
        for b in rg.values_mut() {
            *b = kernel_in(b, &cm, &ctx);
        }
        rg.retain(|_, b| !b.is_empty());
        blocks.push(block);
    }
    let betas: Vec<Cyclo> = blocks.iter().filter(|b| !b.type_ii).map(|b| b.param.clone()).collect();
    let alphas: Vec<Cyclo> = blocks.iter().filter(|b| b.type_ii).map(|b| b.param.clone()).collect();
    let params = TwistedParams { l, s: betas.len(), r: alphas.len(), betas, alphas };
    validate_shape(k, &params)?;
    Ok(Decomposition { u_prime: u1, params, blocks })
}
