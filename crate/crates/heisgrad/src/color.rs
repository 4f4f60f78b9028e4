//! Heisenberg Lie color algebras: bicharacters, the type (G, g0, ε) construction,
//! color axioms, super-realizability and recognition of the standard form.

use crate::abelian::{subgroup_generated, AbGroup, GroupElt, GroupError, Subgroup};
use crate::liealg::Algebra;
use crate::linalg::{self, is_zero_vec, unit_vec, vaxpy, vscale, Subspace, Vect};
use crate::scalars::{Cyclo, CycloCtx, ScalarError, ScalarExpr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColorError {
    #[error("bicharacter: {0}")]
    Bicharacter(String),
    #[error("color type: {0}")]
    Type(String),
    #[error("not a Heisenberg color algebra: {0}")]
    NotHeisenberg(String),
    #[error("pairing failure: {0}")]
    Pairing(String),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("scalar: {0}")]
    Scalar(#[from] ScalarError),
    #[error("spec: {0}")]
    Spec(String),
}

/// Skew-symmetric bicharacter given by its values on pairs of canonical generators.
#[derive(Clone, Debug)]
pub struct Bicharacter {
    group: AbGroup,
    ctx: CycloCtx,
    values: Vec<Vec<Cyclo>>,
}

impl Bicharacter {
    pub fn new(group: &AbGroup, ctx: &CycloCtx, values: Vec<Vec<Cyclo>>) -> Result<Bicharacter, ColorError> {
        let n = group.ncoords();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(ColorError::Bicharacter(format!("expected a {n}x{n} matrix")));
        }
        for i in 0..n {
            for j in 0..n {
                if values[i][j].is_zero() {
                    return Err(ColorError::Bicharacter(format!("value ({i},{j}) is zero")));
                }
                if !values[i][j].mul(&values[j][i]).is_one() {
                    return Err(ColorError::Bicharacter(format!("eps(g{i},g{j}) eps(g{j},g{i}) != 1")));
                }
                let d = group.generator_order(i);
                if d > 0 && !values[i][j].pow(d as i64)?.is_one() {
                    return Err(ColorError::Bicharacter(format!("eps(g{i},g{j})^{d} != 1 although g{i} has order {d}")));
                }
            }
        }
        Ok(Bicharacter { group: group.clone(), ctx: ctx.clone(), values })
    }

    pub fn trivial(group: &AbGroup, ctx: &CycloCtx) -> Bicharacter {
        let n = group.ncoords();
        Bicharacter { group: group.clone(), ctx: ctx.clone(), values: vec![vec![ctx.one(); n]; n] }
    }

    /// ε(a, b) = (-1)^{ab} on Z_2.
    pub fn super_sign(ctx: &CycloCtx) -> Bicharacter {
        let g = AbGroup::from_invariants(0, &[2]);
        Bicharacter { group: g, ctx: ctx.clone(), values: vec![vec![ctx.from_int(-1)]] }
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn values(&self) -> &[Vec<Cyclo>] {
        &self.values
    }

    pub fn eval(&self, g: &GroupElt, h: &GroupElt) -> Cyclo {
        let mut acc = self.ctx.one();
        for (i, &a) in g.coords().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in h.coords().iter().enumerate() {
                if b != 0 {
                    acc = acc.mul(&self.values[i][j].pow(a * b).unwrap());
                }
            }
        }
        acc
    }

    /// Restriction to a subgroup given by its embedding.
    pub fn restrict(&self, sub: &Subgroup) -> Bicharacter {
        let values = sub.embed.iter().map(|a| sub.embed.iter().map(|b| self.eval(a, b)).collect()).collect();
        Bicharacter { group: sub.group.clone(), ctx: self.ctx.clone(), values }
    }
}

/// Data (G, g0, ε, dims) of a Heisenberg color algebra in standard form.
#[derive(Clone, Debug)]
pub struct ColorType {
    pub group: AbGroup,
    pub g0: GroupElt,
    pub epsilon: Bicharacter,
    pub dims: BTreeMap<GroupElt, usize>,
}

impl ColorType {
    pub fn new(group: &AbGroup, g0: GroupElt, epsilon: Bicharacter, dims: BTreeMap<GroupElt, usize>) -> Result<ColorType, ColorError> {
        if !g0.group().same(group) || !epsilon.group().same(group) || dims.keys().any(|g| !g.group().same(group)) {
            return Err(ColorError::Type("all data must live in the same group".into()));
        }
        let dims: BTreeMap<GroupElt, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let t = ColorType { group: group.clone(), g0, epsilon, dims };
        t.validate()?;
        Ok(t)
    }

    pub fn dim(&self, g: &GroupElt) -> usize {
        self.dims.get(g).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    fn partner(&self, g: &GroupElt) -> GroupElt {
        self.g0.sub(g).unwrap()
    }

    fn validate(&self) -> Result<(), ColorError> {
        let zero = self.group.zero();
        let g0 = &self.g0;
        let minus_one = self.epsilon.ctx().from_int(-1);
        if g0.is_zero() {
            if self.dim(&zero) % 2 != 1 {
                return Err(ColorError::Type("dim V_0 must be odd when g0 = 0".into()));
            }
        } else if self.dim(g0) != self.dim(&zero) + 1 {
            return Err(ColorError::Type(format!("dim V_g0 = {} but dim V_0 + 1 = {}", self.dim(g0), self.dim(&zero) + 1)));
        }
        for (g, &d) in &self.dims {
            if *g == zero || g == g0 {
                continue;
            }
            let h = self.partner(g);
            if h != *g && self.dim(&h) != d {
                return Err(ColorError::Type(format!("dim V_{g} = {d} but dim V_{h} = {}", self.dim(&h))));
            }
            if h == *g && self.epsilon.eval(g, g) != minus_one {
                return Err(ColorError::Type(format!("eps({g},{g}) must be -1 since 2g = g0")));
            }
        }
        Ok(())
    }

    /// Support elements g with 2g != g0 taken once per pair {g, g0 - g}, g the smaller.
    fn pair_reps(&self) -> Vec<GroupElt> {
        let zero = self.group.zero();
        self.dims
            .keys()
            .filter(|g| **g != zero && **g != self.g0)
            .filter(|g| {
                let h = self.partner(g);
                h != **g && **g < h
            })
            .cloned()
            .collect()
    }

    fn self_paired(&self) -> Vec<GroupElt> {
        let zero = self.group.zero();
        self.dims.keys().filter(|g| **g != zero && **g != self.g0 && self.partner(g) == **g).cloned().collect()
    }
}

/// Role of a standard basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorRole {
    Z,
    /// u_{g,i}
    U(GroupElt, usize),
    /// û_{g,i} in degree g0 - g
    UH(GroupElt, usize),
}

impl fmt::Display for ColorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorRole::Z => write!(f, "z"),
            ColorRole::U(g, i) => write!(f, "u{}_{}", g, i + 1),
            ColorRole::UH(g, i) => write!(f, "uh{}_{}", g, i + 1),
        }
    }
}

/// Graded algebra with a homogeneous basis and a color bracket.
#[derive(Clone, Debug)]
pub struct ColorAlgebra {
    pub ctx: CycloCtx,
    pub group: AbGroup,
    pub epsilon: Bicharacter,
    pub labels: Vec<String>,
    pub degrees: Vec<GroupElt>,
    /// [b_i, b_j] as coordinate vectors
    pub table: Vec<Vec<Vect>>,
}

impl ColorAlgebra {
    pub fn new(ctx: &CycloCtx, epsilon: &Bicharacter, labels: Vec<String>, degrees: Vec<GroupElt>) -> ColorAlgebra {
        let n = labels.len();
        ColorAlgebra {
            ctx: ctx.clone(),
            group: epsilon.group().clone(),
            epsilon: epsilon.clone(),
            labels,
            degrees,
            table: vec![vec![linalg::zero_vec(ctx, n); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn bracket(&self, v: &Vect, w: &Vect) -> Vect {
        let n = self.dim();
        let mut out = linalg::zero_vec(&self.ctx, n);
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if w[j].is_zero() || is_zero_vec(&self.table[i][j]) {
                    continue;
                }
                out = vaxpy(&out, &v[i].mul(&w[j]), &self.table[i][j]);
            }
        }
        out
    }

    /// Degree of a homogeneous nonzero vector.
    pub fn degree_of(&self, v: &Vect) -> Option<GroupElt> {
        let mut deg: Option<&GroupElt> = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(&self.degrees[i]),
                Some(d) if *d != self.degrees[i] => return None,
                _ => {}
            }
        }
        deg.cloned()
    }

    pub fn component(&self, g: &GroupElt) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == *g).collect()
    }

    pub fn support(&self) -> Vec<GroupElt> {
        let mut s: Vec<GroupElt> = self.degrees.clone();
        s.sort();
        s.dedup();
        s
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                // coefficient k of [x, b_j] and of [b_j, x]
                rows.push((0..n).map(|i| self.table[i][j][k].clone()).collect::<Vect>());
                rows.push((0..n).map(|i| self.table[j][i][k].clone()).collect::<Vect>());
            }
        }
        Subspace::span(n, &linalg::nullspace(&self.ctx, &rows, n))
    }

    pub fn derived(&self) -> Subspace {
        let n = self.dim();
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !is_zero_vec(&self.table[i][j]) {
                    v.push(self.table[i][j].clone());
                }
            }
        }
        Subspace::span(n, &v)
    }

    /// Same algebra in a new homogeneous basis.
    pub fn change_basis(&self, basis: &[Vect], labels: Vec<String>) -> Result<ColorAlgebra, ColorError> {
        let n = self.dim();
        let cols = linalg::from_columns(basis);
        let inv = linalg::inverse(&cols).ok_or_else(|| ColorError::Spec("new basis is singular".into()))?;
        let degrees = basis
            .iter()
            .map(|v| self.degree_of(v).ok_or_else(|| ColorError::Spec("new basis vector is not homogeneous".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = ColorAlgebra::new(&self.ctx, &self.epsilon, labels, degrees);
        for a in 0..n {
            for b in 0..n {
                out.table[a][b] = linalg::mat_vec(&inv, &self.bracket(&basis[a], &basis[b]));
            }
        }
        Ok(out)
    }

    /// A Lie superalgebra viewed as a color algebra over Z_2.
    pub fn from_superalgebra(alg: &Algebra) -> ColorAlgebra {
        let ctx = alg.ctx().clone();
        let eps = Bicharacter::super_sign(&ctx);
        let g = eps.group().clone();
        let degrees = alg.parity().iter().map(|&p| g.elt(&[p as i64]).unwrap()).collect();
        let mut out = ColorAlgebra::new(&ctx, &eps, alg.labels().to_vec(), degrees);
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                out.table[i][j] = alg.bracket_basis(i, j);
            }
        }
        out
    }
}

/// Failures of the color axioms, each with a witness.
/// Coordinates rendered with the algebra's basis labels.
pub fn fmt_color_vec(alg: &ColorAlgebra, v: &[Cyclo]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| if x.is_one() { alg.labels[i].clone() } else { format!("({})*{}", x, alg.labels[i]) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ColorReport {
    pub grading: Vec<String>,
    pub skew: Vec<String>,
    pub jacobi: Vec<String>,
}

impl ColorReport {
    pub fn pass(&self) -> bool {
        self.grading.is_empty() && self.skew.is_empty() && self.jacobi.is_empty()
    }
}

/// Checks [L_g, L_h] ⊆ L_{g+h}, color skew-symmetry and the color Jacobi identity on the basis.
pub fn verify_color_axioms(alg: &ColorAlgebra) -> ColorReport {
    let n = alg.dim();
    let mut rep = ColorReport::default();
    let l = &alg.labels;
    for i in 0..n {
        for j in 0..n {
            let w = &alg.table[i][j];
            if is_zero_vec(w) {
                continue;
            }
            let want = alg.degrees[i].add(&alg.degrees[j]).unwrap();
            if alg.degree_of(w) != Some(want.clone()) {
                rep.grading.push(format!("[{}, {}] is not in degree {}", l[i], l[j], want));
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let e = alg.epsilon.eval(&alg.degrees[i], &alg.degrees[j]);
            let lhs = &alg.table[i][j];
            let rhs = vscale(&e.neg(), &alg.table[j][i]);
            if *lhs != rhs {
                rep.skew.push(format!("[{}, {}] != -eps [{}, {}]", l[i], l[j], l[j], l[i]));
            }
        }
    }
    let basis: Vec<Vect> = (0..n).map(|i| unit_vec(&alg.ctx, n, i)).collect();
    for a in 0..n {
        for b in 0..n {
            let ab = &alg.table[a][b];
            let e = alg.epsilon.eval(&alg.degrees[a], &alg.degrees[b]);
            for c in 0..n {
                let lhs = alg.bracket(&basis[a], &alg.table[b][c]);
                let r1 = alg.bracket(ab, &basis[c]);
                let r2 = alg.bracket(&basis[b], &alg.table[a][c]);
                let rhs = vaxpy(&r1, &e, &r2);
                if lhs != rhs {
                    rep.jacobi.push(format!("Jacobi fails on ({}, {}, {})", l[a], l[b], l[c]));
                }
            }
        }
    }
    rep
}

/// Standard Heisenberg color algebra of the given type, with the role of each basis vector.
pub fn color_algebra(t: &ColorType) -> Result<(ColorAlgebra, Vec<ColorRole>), ColorError> {
    let ctx = t.epsilon.ctx().clone();
    let zero = t.group.zero();
    let g0 = t.g0.clone();
    let mut roles: Vec<ColorRole> = vec![ColorRole::Z];
    let mut degrees = vec![g0.clone()];
    let n0 = if g0.is_zero() { (t.dim(&zero) - 1) / 2 } else { t.dim(&zero) };
    // pair {g0, 0}: u in degree g0, û in degree 0
    for i in 0..n0 {
        roles.push(ColorRole::U(g0.clone(), i));
        degrees.push(g0.clone());
    }
    for i in 0..n0 {
        roles.push(ColorRole::UH(g0.clone(), i));
        degrees.push(zero.clone());
    }
    for g in t.pair_reps() {
        let h = t.partner(&g);
        for i in 0..t.dim(&g) {
            roles.push(ColorRole::U(g.clone(), i));
            degrees.push(g.clone());
        }
        for i in 0..t.dim(&g) {
            roles.push(ColorRole::UH(g.clone(), i));
            degrees.push(h.clone());
        }
    }
    for g in t.self_paired() {
        for i in 0..t.dim(&g) {
            roles.push(ColorRole::U(g.clone(), i));
            degrees.push(g.clone());
        }
    }
    let labels = roles.iter().map(|r| r.to_string()).collect();
    let mut alg = ColorAlgebra::new(&ctx, &t.epsilon, labels, degrees);
    let n = alg.dim();
    let z = unit_vec(&ctx, n, 0);
    let idx = |r: &ColorRole| roles.iter().position(|x| x == r).unwrap();
    for (a, r) in roles.iter().enumerate() {
        if let ColorRole::U(g, i) = r {
            let h = t.partner(g);
            if h == *g && *g != g0 {
                alg.table[a][a] = z.clone();
            } else {
                let b = idx(&ColorRole::UH(g.clone(), *i));
                alg.table[a][b] = z.clone();
                // [û, u] = -ε(g0 - g, g) z
                alg.table[b][a] = vscale(&t.epsilon.eval(&h, g).neg(), &z);
            }
        }
    }
    Ok((alg, roles))
}

/// Parity assignment turning a color algebra of some type into a superalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperSplit {
    pub even: Vec<GroupElt>,
    pub odd: Vec<GroupElt>,
}

/// Splits the support by the sign of ε(g, g0 - g) when all these values are ±1.
pub fn is_super_realizable(t: &ColorType) -> Option<SuperSplit> {
    let one = t.epsilon.ctx().one();
    let m1 = t.epsilon.ctx().from_int(-1);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for g in t.dims.keys() {
        let e = t.epsilon.eval(g, &t.partner(g));
        if e == one {
            even.push(g.clone());
        } else if e == m1 {
            odd.push(g.clone());
        } else {
            return None;
        }
    }
    Some(SuperSplit { even, odd })
}

/// The color algebra with parities from a split, checked as a Lie superalgebra.
pub fn realize_super(alg: &ColorAlgebra, split: &SuperSplit) -> Result<Algebra, ColorError> {
    let parity: Vec<u8> = alg
        .degrees
        .iter()
        .map(|g| if split.odd.contains(g) { 1 } else if split.even.contains(g) { 0 } else { 2 })
        .collect();
    if parity.contains(&2) {
        return Err(ColorError::Type("split does not cover the support".into()));
    }
    let mut s = Algebra::new(&alg.ctx, alg.labels.clone(), parity);
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            s.set_bracket(i, j, &alg.table[i][j]);
        }
    }
    s.verify_axioms().map_err(|e| ColorError::Type(format!("split is not a superalgebra: {e}")))?;
    Ok(s)
}

/// Standard form found inside a Heisenberg color algebra.
#[derive(Clone, Debug)]
pub struct ClassifiedColor {
    /// type over the subgroup generated by the support
    pub color_type: ColorType,
    pub support_subgroup: Subgroup,
    /// standard basis in the coordinates of the input, ordered as in `color_algebra`
    pub basis: Vec<Vect>,
    pub roles: Vec<ColorRole>,
    /// degrees were rewritten in new coordinates (smaller subgroup or a different generating set)
    pub normalized: bool,
}

fn z_coeff(z: &Vect, p: usize, w: &Vect) -> Result<Cyclo, ColorError> {
    let c = w[p].div(&z[p])?;
    if vscale(&c, z) != *w {
        return Err(ColorError::NotHeisenberg("a bracket leaves the centre".into()));
    }
    Ok(c)
}

/// Recovers (G, g0, ε) and a standard basis.
pub fn classify_color(alg: &ColorAlgebra) -> Result<ClassifiedColor, ColorError> {
    let rep = verify_color_axioms(alg);
    if !rep.pass() {
        return Err(ColorError::NotHeisenberg(format!("color axioms fail: {:?}", rep)));
    }
    let n = alg.dim();
    let center = alg.center();
    if center.dim() != 1 {
        return Err(ColorError::NotHeisenberg(format!("centre has dimension {}", center.dim())));
    }
    if !alg.derived().equals(&center) {
        return Err(ColorError::NotHeisenberg("[L,L] differs from the centre".into()));
    }
    let z = center.basis[0].clone();
    let g0_amb = alg.degree_of(&z).ok_or_else(|| ColorError::NotHeisenberg("centre is not homogeneous".into()))?;
    let p = (0..n).find(|&i| !z[i].is_zero()).unwrap();

    // support-generated subgroup
    let support = alg.support();
    let sub = subgroup_generated(&alg.group, &support)?;
    let to_h = |g: &GroupElt| -> GroupElt { sub.proj[support.iter().position(|s| s == g).unwrap()].clone() };
    let normalized = !sub.group.is_isomorphic(&alg.group) || sub.embed.iter().zip(alg.group.generators()).any(|(a, b)| *a != b);
    let eps_h = alg.epsilon.restrict(&sub);
    let mut dims = BTreeMap::new();
    for g in &support {
        dims.insert(to_h(g), alg.component(g).len());
    }
    let g0_h = if support.contains(&g0_amb) { to_h(&g0_amb) } else { unreachable!() };
    let one = alg.ctx.one();
    for g in &support {
        let h = to_h(g);
        if !h.is_zero() && h.times(2) == g0_h && eps_h.eval(&h, &h) == one {
            return Err(ColorError::Pairing(format!(
                "L_{g} satisfies 2g = g0 but eps(g,g) = 1, so its pairing is alternating; no standard form of type (G, g0, eps) has such a component"
            )));
        }
    }
    let t = ColorType::new(&sub.group, g0_h.clone(), eps_h, dims)?;
    let (std, roles) = color_algebra(&t)?;

    let comp = |g: &GroupElt| -> Vec<Vect> { alg.component(g).into_iter().map(|i| unit_vec(&alg.ctx, n, i)).collect() };
    let omega = |a: &Vect, b: &Vect| z_coeff(&z, p, &alg.bracket(a, b));
    let mut found: BTreeMap<usize, Vect> = BTreeMap::new();
    found.insert(0, z.clone());
    let role_idx = |r: &ColorRole| roles.iter().position(|x| x == r).unwrap();

    // pair {g0, 0}
    {
        let zero_amb = support.iter().find(|g| to_h(g).is_zero()).cloned();
        let mut top: Vec<Vect> = comp(&g0_amb);
        // complement of z: drop the basis vector at z's pivot
        top.retain(|v| v[p].is_zero());
        if g0_amb.is_zero() {
            let pairs = symplectic_pairs(&top, &omega)?;
            for (i, (u, uh)) in pairs.into_iter().enumerate() {
                found.insert(role_idx(&ColorRole::U(g0_h.clone(), i)), u);
                found.insert(role_idx(&ColorRole::UH(g0_h.clone(), i)), uh);
            }
        } else {
            let bottom = zero_amb.map(|g| comp(&g)).unwrap_or_default();
            let duals = dual_basis(&top, &bottom, &omega)?;
            for (i, (u, uh)) in top.into_iter().zip(duals).enumerate() {
                found.insert(role_idx(&ColorRole::U(g0_h.clone(), i)), u);
                found.insert(role_idx(&ColorRole::UH(g0_h.clone(), i)), uh);
            }
        }
    }
    let from_h = |h: &GroupElt| -> GroupElt { support.iter().find(|g| to_h(g) == *h).cloned().unwrap() };
    for g in t.pair_reps() {
        let a = comp(&from_h(&g));
        let b = comp(&from_h(&t.partner(&g)));
        let duals = dual_basis(&a, &b, &omega)?;
        for (i, (u, uh)) in a.into_iter().zip(duals).enumerate() {
            found.insert(role_idx(&ColorRole::U(g.clone(), i)), u);
            found.insert(role_idx(&ColorRole::UH(g.clone(), i)), uh);
        }
    }
    for g in t.self_paired() {
        let a = comp(&from_h(&g));
        let us = orthonormal(&a, &omega)?;
        for (i, u) in us.into_iter().enumerate() {
            found.insert(role_idx(&ColorRole::U(g.clone(), i)), u);
        }
    }
    if found.len() != n {
        return Err(ColorError::Pairing(format!("found {} of {} standard vectors", found.len(), n)));
    }
    let basis: Vec<Vect> = found.into_values().collect();
    // products must match the standard table
    let cols = linalg::from_columns(&basis);
    let inv = linalg::inverse(&cols).ok_or_else(|| ColorError::Pairing("standard vectors are dependent".into()))?;
    for a in 0..n {
        for b in 0..n {
            let w = linalg::mat_vec(&inv, &alg.bracket(&basis[a], &basis[b]));
            if w != std.table[a][b] {
                return Err(ColorError::Pairing(format!("[{}, {}] does not match the standard table", roles[a], roles[b])));
            }
        }
    }
    Ok(ClassifiedColor { color_type: t, support_subgroup: sub, basis, roles, normalized })
}

/// b' with ω(a_i, b'_j) = δ_ij.
fn dual_basis(a: &[Vect], b: &[Vect], omega: &dyn Fn(&Vect, &Vect) -> Result<Cyclo, ColorError>) -> Result<Vec<Vect>, ColorError> {
    if a.len() != b.len() {
        return Err(ColorError::Pairing(format!("paired components have dimensions {} and {}", a.len(), b.len())));
    }
    let k = a.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let m: Vec<Vect> = a.iter().map(|x| b.iter().map(|y| omega(x, y)).collect::<Result<Vect, _>>()).collect::<Result<_, _>>()?;
    let minv = linalg::inverse(&m).ok_or_else(|| ColorError::Pairing("degenerate pairing".into()))?;
    let n = a[0].len();
    let ctx = a[0][0].ctx().clone();
    Ok((0..k)
        .map(|j| {
            let mut v = linalg::zero_vec(&ctx, n);
            for (t, bt) in b.iter().enumerate() {
                v = vaxpy(&v, &minv[t][j], bt);
            }
            v
        })
        .collect())
}

/// Darboux pairs (u_i, û_i) for a skew form: ω(u_i, û_j) = δ_ij, other pairings zero.
fn symplectic_pairs(space: &[Vect], omega: &dyn Fn(&Vect, &Vect) -> Result<Cyclo, ColorError>) -> Result<Vec<(Vect, Vect)>, ColorError> {
    let mut rest: Vec<Vect> = space.to_vec();
    let mut out = Vec::new();
    while let Some(u) = rest.first().cloned() {
        rest.remove(0);
        let pos = rest.iter().position(|v| omega(&u, v).map(|c| !c.is_zero()).unwrap_or(false));
        let pos = pos.ok_or_else(|| ColorError::Pairing("degenerate skew form".into()))?;
        let v = rest.remove(pos);
        let c = omega(&u, &v)?;
        let uh = vscale(&c.inv()?, &v);
        // project the rest onto the ω-complement of span(u, uh)
        rest = rest
            .into_iter()
            .map(|w| {
                let a = omega(&w, &uh)?;
                let b = omega(&u, &w)?;
                // w - ω(u,w) uh - ω(w,uh) u
                Ok(vaxpy(&vaxpy(&w, &b.neg(), &uh), &a.neg(), &u))
            })
            .collect::<Result<Vec<_>, ColorError>>()?;
        out.push((u, uh));
    }
    Ok(out)
}

/// Basis with ω(u_i, u_j) = δ_ij for a symmetric form; needs square roots in the field.
fn orthonormal(space: &[Vect], omega: &dyn Fn(&Vect, &Vect) -> Result<Cyclo, ColorError>) -> Result<Vec<Vect>, ColorError> {
    let mut rest: Vec<Vect> = space.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let ctx = rest[0][0].ctx().clone();
        // a vector whose norm is a nonzero square, among basis vectors and small combinations
        let mut cands: Vec<(Option<usize>, Vect)> = rest.iter().cloned().enumerate().map(|(i, v)| (Some(i), v)).collect();
        let coeffs = [ctx.one(), ctx.from_int(-1), ctx.from_int(2)];
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                for c in &coeffs {
                    cands.push((None, vaxpy(&rest[i], c, &rest[j])));
                }
            }
        }
        let mut pick = None;
        let mut nonsquare = None;
        for (k, v) in &cands {
            let c = omega(v, v)?;
            if c.is_zero() {
                continue;
            }
            match c.sqrt_try() {
                Some(r) => {
                    pick = Some((*k, v.clone(), r));
                    break;
                }
                None => nonsquare = Some(c),
            }
        }
        let (k, u, r) = match pick {
            Some(x) => x,
            None => {
                return Err(match nonsquare {
                    Some(c) => ColorError::Pairing(format!("sqrt({c}) is not in the field")),
                    None => ColorError::Pairing("degenerate symmetric form".into()),
                })
            }
        };
        match k {
            Some(i) => {
                rest.remove(i);
            }
            None => {
                // replace one spanning vector by the combination
                let sub = Subspace::span(u.len(), &rest);
                let pos = (0..rest.len())
                    .find(|&i| {
                        let mut t = rest.clone();
                        t[i] = u.clone();
                        Subspace::span(u.len(), &t).dim() == sub.dim()
                    })
                    .unwrap();
                rest.remove(pos);
            }
        }
        let u = vscale(&r.inv()?, &u);
        rest = rest
            .into_iter()
            .map(|w| {
                let a = omega(&w, &u)?;
                Ok(vaxpy(&w, &a.neg(), &u))
            })
            .collect::<Result<Vec<_>, ColorError>>()?;
        rest.retain(|w| !is_zero_vec(w));
        out.push(u);
    }
    Ok(out)
}

/// JSON description of a color type: group, g0, ε on generators, dimensions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ColorTypeSpec {
    pub group: String,
    pub g0: Vec<i64>,
    pub epsilon: Vec<Vec<String>>,
    pub dims: Vec<(Vec<i64>, usize)>,
}

impl ColorTypeSpec {
    pub fn required_conductor(&self) -> Result<u64, ColorError> {
        let mut n = 1u64;
        for row in &self.epsilon {
            for s in row {
                let e = ScalarExpr::parse(s)?;
                n = crate::scalars::lcm_u64(n, e.required_conductor());
            }
        }
        Ok(n)
    }

    pub fn build(&self, ctx: &CycloCtx) -> Result<ColorType, ColorError> {
        let g = AbGroup::parse(&self.group)?;
        let vals = self
            .epsilon
            .iter()
            .map(|r| r.iter().map(|s| ScalarExpr::parse(s)?.eval(ctx)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let eps = Bicharacter::new(&g, ctx, vals)?;
        let mut dims = BTreeMap::new();
        for (c, d) in &self.dims {
            *dims.entry(g.elt(c)?).or_insert(0) += *d;
        }
        ColorType::new(&g, g.elt(&self.g0)?, eps, dims)
    }

    pub fn from_type(t: &ColorType) -> ColorTypeSpec {
        ColorTypeSpec {
            group: t.group.to_string(),
            g0: t.g0.coords().to_vec(),
            epsilon: t.epsilon.values().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            dims: t.dims.iter().map(|(g, d)| (g.coords().to_vec(), *d)).collect(),
        }
    }
}

/// JSON description of a color algebra in an arbitrary homogeneous basis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ColorAlgebraSpec {
    pub group: String,
    pub epsilon: Vec<Vec<String>>,
    pub labels: Vec<String>,
    pub degrees: Vec<Vec<i64>>,
    /// (a, b, {label: coefficient}) meaning [a, b] = Σ coefficient·label; unlisted brackets are zero
    pub brackets: Vec<(String, String, BTreeMap<String, String>)>,
}

impl ColorAlgebraSpec {
    pub fn required_conductor(&self) -> Result<u64, ColorError> {
        let mut n = 1u64;
        let exprs = self.epsilon.iter().flatten().chain(self.brackets.iter().flat_map(|b| b.2.values()));
        for s in exprs {
            n = crate::scalars::lcm_u64(n, ScalarExpr::parse(s)?.required_conductor());
        }
        Ok(n)
    }

    pub fn build(&self, ctx: &CycloCtx) -> Result<ColorAlgebra, ColorError> {
        let g = AbGroup::parse(&self.group)?;
        let vals = self
            .epsilon
            .iter()
            .map(|r| r.iter().map(|s| ScalarExpr::parse(s)?.eval(ctx)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let eps = Bicharacter::new(&g, ctx, vals)?;
        if self.degrees.len() != self.labels.len() {
            return Err(ColorError::Spec("one degree per label expected".into()));
        }
        let degrees = self.degrees.iter().map(|c| g.elt(c)).collect::<Result<Vec<_>, _>>()?;
        let mut alg = ColorAlgebra::new(ctx, &eps, self.labels.clone(), degrees);
        let idx = |l: &str| self.labels.iter().position(|x| x == l).ok_or_else(|| ColorError::Spec(format!("unknown label {l}")));
        let n = self.labels.len();
        for (a, b, terms) in &self.brackets {
            let (i, j) = (idx(a)?, idx(b)?);
            let mut v = linalg::zero_vec(ctx, n);
            for (l, c) in terms {
                let k = idx(l)?;
                v[k] = v[k].add(&ScalarExpr::parse(c)?.eval(ctx)?);
            }
            alg.table[i][j] = v;
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &ColorAlgebra) -> ColorAlgebraSpec {
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = &alg.table[i][j];
                if is_zero_vec(w) {
                    continue;
                }
                let terms = (0..n).filter(|&k| !w[k].is_zero()).map(|k| (alg.labels[k].clone(), w[k].to_string())).collect();
                brackets.push((alg.labels[i].clone(), alg.labels[j].clone(), terms));
            }
        }
        ColorAlgebraSpec {
            group: alg.group.to_string(),
            epsilon: alg.epsilon.values().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            labels: alg.labels.clone(),
            degrees: alg.degrees.iter().map(|g| g.coords().to_vec()).collect(),
            brackets,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::heisenberg_super;

    fn z4_type(ctx: &CycloCtx) -> ColorType {
        // G = Z_4, g0 = 2, ε(1,1) = -1; V_1 self-paired, V_0 and V_2 the {g0, 0} pair
        let g = AbGroup::from_invariants(0, &[4]);
        let eps = Bicharacter::new(&g, ctx, vec![vec![ctx.from_int(-1)]]).unwrap();
        let mut dims = BTreeMap::new();
        dims.insert(g.elt(&[0]).unwrap(), 1);
        dims.insert(g.elt(&[2]).unwrap(), 2);
        dims.insert(g.elt(&[1]).unwrap(), 2);
        dims.insert(g.elt(&[3]).unwrap(), 0);
        ColorType::new(&g, g.elt(&[2]).unwrap(), eps, dims).unwrap()
    }

    #[test]
    fn trivial_group_gives_heisenberg() {
        let ctx = CycloCtx::new(4).unwrap();
        let g = AbGroup::free(0);
        let mut dims = BTreeMap::new();
        dims.insert(g.zero(), 5);
        let t = ColorType::new(&g, g.zero(), Bicharacter::trivial(&g, &ctx), dims).unwrap();
        let (alg, _) = color_algebra(&t).unwrap();
        assert!(verify_color_axioms(&alg).pass());
        assert_eq!(alg.center().dim(), 1);
        assert_eq!(alg.dim(), 5);
    }

    #[test]
    fn z4_round_trip() {
        let ctx = CycloCtx::new(8).unwrap();
        let t = z4_type(&ctx);
        let (alg, _) = color_algebra(&t).unwrap();
        assert!(verify_color_axioms(&alg).pass());
        let c = classify_color(&alg).unwrap();
        assert_eq!(c.color_type.total_dim(), 5);
        assert!(!c.normalized);
        // scrambled homogeneous basis
        let n = alg.dim();
        let mut basis: Vec<Vect> = (0..n).map(|i| unit_vec(&ctx, n, i)).collect();
        let i1 = alg.component(&t.group.elt(&[1]).unwrap());
        basis[i1[0]] = vaxpy(&basis[i1[0]], &ctx.from_int(3), &basis[i1[1]]);
        let i2 = alg.component(&t.group.elt(&[2]).unwrap());
        basis[i2[1]] = vaxpy(&basis[i2[1]], &ctx.from_int(2), &basis[i2[0]]);
        let labels = (0..n).map(|i| format!("b{i}")).collect();
        let sc = alg.change_basis(&basis, labels).unwrap();
        let c2 = classify_color(&sc).unwrap();
        assert_eq!(c2.color_type.dims.len(), c.color_type.dims.len());
    }

    #[test]
    fn flipped_sign_breaks_skew() {
        let ctx = CycloCtx::new(8).unwrap();
        let (mut alg, _) = color_algebra(&z4_type(&ctx)).unwrap();
        let n = alg.dim();
        let (a, b) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !is_zero_vec(&alg.table[i][j])).unwrap();
        alg.table[b][a] = alg.table[b][a].iter().map(|x| x.neg()).collect();
        assert!(!verify_color_axioms(&alg).skew.is_empty());
    }

    #[test]
    fn superalgebra_is_color() {
        let ctx = CycloCtx::new(4).unwrap();
        let alg = ColorAlgebra::from_superalgebra(&heisenberg_super(1, 2, &ctx));
        assert!(verify_color_axioms(&alg).pass());
        let c = classify_color(&alg).unwrap();
        // g0 is the even degree
        assert!(c.support_subgroup.push(&c.color_type.g0).is_zero());
        assert!(is_super_realizable(&c.color_type).is_some());
    }

    #[test]
    fn zeta3_not_realizable() {
        let ctx = CycloCtx::new(12).unwrap();
        let g = AbGroup::free(2);
        let w = ctx.root_of_unity(3, 1).unwrap();
        let eps = Bicharacter::new(&g, &ctx, vec![vec![ctx.one(), w.clone()], vec![w.inv().unwrap(), ctx.one()]]).unwrap();
        let mut dims = BTreeMap::new();
        dims.insert(g.zero(), 1);
        dims.insert(g.elt(&[1, 0]).unwrap(), 1);
        dims.insert(g.elt(&[-1, 0]).unwrap(), 1);
        dims.insert(g.elt(&[0, 1]).unwrap(), 1);
        dims.insert(g.elt(&[0, -1]).unwrap(), 1);
        let t = ColorType::new(&g, g.zero(), eps.clone(), dims.clone()).unwrap();
        assert!(is_super_realizable(&t).is_some());
        let (alg, _) = color_algebra(&t).unwrap();
        assert!(verify_color_axioms(&alg).pass());
        // g0 = (1,1): pair (1,0) with (0,1), ε((1,0),(0,1)) = ζ_3
        let mut d2 = BTreeMap::new();
        d2.insert(g.elt(&[1, 1]).unwrap(), 1);
        d2.insert(g.elt(&[1, 0]).unwrap(), 1);
        d2.insert(g.elt(&[0, 1]).unwrap(), 1);
        let t2 = ColorType::new(&g, g.elt(&[1, 1]).unwrap(), eps, d2).unwrap();
        assert!(is_super_realizable(&t2).is_none());
        let (alg2, _) = color_algebra(&t2).unwrap();
        assert!(verify_color_axioms(&alg2).pass());
    }

    #[test]
    fn alternating_self_paired_component_has_no_standard_form() {
        // H_3 graded by Z_4 with e, f in degree 1 and z in degree 2, trivial eps
        let spec: ColorAlgebraSpec = serde_json::from_str(
            r#"{"group": "Z_4", "epsilon": [["1"]], "labels": ["z", "e", "f"], "degrees": [[2], [1], [1]],
                "brackets": [["e", "f", {"z": "1"}], ["f", "e", {"z": "-1"}]]}"#,
        )
        .unwrap();
        let ctx = CycloCtx::new(8).unwrap();
        let alg = spec.build(&ctx).unwrap();
        assert!(verify_color_axioms(&alg).pass());
        assert_eq!(alg.center().dim(), 1);
        assert!(alg.derived().equals(&alg.center()));
        assert!(matches!(classify_color(&alg), Err(ColorError::Pairing(_))));
    }

    #[test]
    fn bad_torsion_value_rejected() {
        let ctx = CycloCtx::new(8).unwrap();
        let g = AbGroup::from_invariants(0, &[2]);
        assert!(Bicharacter::new(&g, &ctx, vec![vec![ctx.i().unwrap()]]).is_err());
    }
}
