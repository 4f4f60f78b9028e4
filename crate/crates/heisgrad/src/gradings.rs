//! Group gradings, universal groups, coarsenings and homogeneous bases.

use crate::abelian::{canonicalize, AbGroup, GroupElt, GroupError};
use crate::liealg::Algebra;
use crate::linalg::{self, is_zero_vec, vaxpy, vscale, Matrix, Subspace, Vect};
use crate::scalars::Cyclo;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GradingError {
    #[error("degree {0} does not belong to the grading group")]
    ForeignDegree(String),
    #[error("component of degree {0} is empty")]
    EmptyComponent(String),
    #[error("component of degree {0} has a dependent basis")]
    DependentBasis(String),
    #[error("components span a subspace of dimension {got}, algebra has dimension {dim}")]
    NotSpanning { got: usize, dim: usize },
    #[error("components are not independent (sum of dimensions {sum}, span {span})")]
    NotDirect { sum: usize, span: usize },
    #[error("basis vector {index} of degree {degree} is not parity-homogeneous")]
    ParityMixed { degree: String, index: usize },
    #[error("[L_{g}, L_{h}] is not contained in L_{sum}: bracket of basis vectors {i} and {j} gives {witness}")]
    Bracket { g: String, h: String, sum: String, i: usize, j: usize, witness: String },
    #[error("map does not respect the relation {0}")]
    RelationViolated(String),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("{0}")]
    Invalid(String),
}

/// Vector in label notation, e.g. `e1 + 1/2*eh1`.
pub fn fmt_vec(alg: &Algebra, v: &[Cyclo]) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let lab = &alg.labels()[i];
        if c.is_one() {
            parts.push(lab.clone());
        } else {
            let s = c.to_string();
            if s.contains(' ') {
                parts.push(format!("({s})*{lab}"));
            } else {
                parts.push(format!("{s}*{lab}"));
            }
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// A G-grading: degree ↦ basis of the homogeneous component.
#[derive(Clone, Debug)]
pub struct Grading {
    pub algebra: Arc<Algebra>,
    pub group: AbGroup,
    pub components: BTreeMap<GroupElt, Vec<Vect>>,
}

impl Grading {
    pub fn new(algebra: Arc<Algebra>, group: AbGroup) -> Grading {
        Grading { algebra, group, components: BTreeMap::new() }
    }

    /// Builds a grading from homogeneous vectors with their degrees.
    pub fn from_homogeneous(algebra: Arc<Algebra>, group: AbGroup, items: Vec<(GroupElt, Vect)>) -> Grading {
        let mut g = Grading::new(algebra, group);
        for (d, v) in items {
            g.components.entry(d).or_default().push(v);
        }
        g
    }

    pub fn support(&self) -> Vec<GroupElt> {
        self.components.keys().cloned().collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.values().map(|c| c.len()).collect()
    }

    /// Type (n_1, n_2, …): n_i = number of components of dimension i.
    pub fn grading_type(&self) -> Vec<usize> {
        let m = self.dims().into_iter().max().unwrap_or(0);
        let mut t = vec![0; m];
        for d in self.dims() {
            t[d - 1] += 1;
        }
        t
    }

    pub fn component_space(&self, g: &GroupElt) -> Option<Subspace> {
        self.components.get(g).map(|b| Subspace::span(self.algebra.dim(), b))
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[Cyclo]) -> Option<GroupElt> {
        if is_zero_vec(v) {
            return None;
        }
        self.components.iter().find(|(_, b)| Subspace::span(self.algebra.dim(), b).contains(v)).map(|(g, _)| g.clone())
    }

    /// Same algebra, components moved along a degree map.
    pub fn relabel(&self, group: &AbGroup, map: &BTreeMap<GroupElt, GroupElt>) -> Grading {
        let mut out = Grading::new(self.algebra.clone(), group.clone());
        for (g, b) in &self.components {
            out.components.entry(map[g].clone()).or_default().extend(b.iter().cloned());
        }
        out
    }

    /// Image grading under a linear automorphism f: L_g ↦ f(L_g).
    pub fn transport(&self, f: &crate::liealg::LinMap) -> Grading {
        let mut out = Grading::new(self.algebra.clone(), self.group.clone());
        for (g, b) in &self.components {
            out.components.insert(g.clone(), b.iter().map(|v| f.apply(v)).collect());
        }
        out
    }
}

/// Checks that the components form a grading; reports the first violation.
pub fn verify_grading(gr: &Grading) -> Result<(), GradingError> {
    let alg = &gr.algebra;
    let n = alg.dim();
    let mut all = Vec::new();
    let mut spaces = BTreeMap::new();
    for (g, b) in &gr.components {
        if !g.group().same(&gr.group) {
            return Err(GradingError::ForeignDegree(g.to_string()));
        }
        if b.is_empty() {
            return Err(GradingError::EmptyComponent(g.to_string()));
        }
        let sp = Subspace::span(n, b);
        if sp.dim() != b.len() {
            return Err(GradingError::DependentBasis(g.to_string()));
        }
        for (i, v) in b.iter().enumerate() {
            if !alg.is_parity_homogeneous(v) {
                return Err(GradingError::ParityMixed { degree: g.to_string(), index: i });
            }
        }
        all.extend(b.iter().cloned());
        spaces.insert(g.clone(), sp);
    }
    let span = linalg::rank(&all);
    if span != all.len() {
        return Err(GradingError::NotDirect { sum: all.len(), span });
    }
    if span != n {
        return Err(GradingError::NotSpanning { got: span, dim: n });
    }
    for (g, bg) in &gr.components {
        for (h, bh) in &gr.components {
            let s = g.add(h)?;
            for (i, x) in bg.iter().enumerate() {
                for (j, y) in bh.iter().enumerate() {
                    let w = alg.bracket(x, y);
                    if is_zero_vec(&w) {
                        continue;
                    }
                    let ok = spaces.get(&s).map(|sp| sp.contains(&w)).unwrap_or(false);
                    if !ok {
                        return Err(GradingError::Bracket {
                            g: g.to_string(),
                            h: h.to_string(),
                            sum: s.to_string(),
                            i,
                            j,
                            witness: fmt_vec(alg, &w),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Universal group of a grading together with the induced regrading.
#[derive(Clone, Debug)]
pub struct Universal {
    pub group: AbGroup,
    /// old degree ↦ degree in the universal group
    pub degree_map: BTreeMap<GroupElt, GroupElt>,
    /// relations g + h = k from nonzero brackets
    pub relations: Vec<(GroupElt, GroupElt, GroupElt)>,
    pub grading: Grading,
}

/// One generator per support element, one relation per nonzero [L_g, L_h].
pub fn universal_group(gr: &Grading) -> Result<Universal, GradingError> {
    let support = gr.support();
    let idx: BTreeMap<GroupElt, usize> = support.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let alg = &gr.algebra;
    let mut rels = Vec::new();
    let mut rel_rows: Vec<Vec<i64>> = Vec::new();
    for (a, g) in support.iter().enumerate() {
        for h in support.iter().skip(a) {
            let bg = &gr.components[g];
            let bh = &gr.components[h];
            let nonzero = bg.iter().any(|x| bh.iter().any(|y| !is_zero_vec(&alg.bracket(x, y))));
            if !nonzero {
                continue;
            }
            let s = g.add(h)?;
            let k = match idx.get(&s) {
                Some(&k) => k,
                None => {
                    return Err(GradingError::Invalid(format!("[L_{g}, L_{h}] != 0 but {s} is not in the support")));
                }
            };
            let mut row = vec![0i64; support.len()];
            row[idx[g]] += 1;
            row[idx[h]] += 1;
            row[k] -= 1;
            rel_rows.push(row);
            rels.push((g.clone(), h.clone(), s));
        }
    }
    let group = canonicalize(support.len(), &rel_rows)?;
    let imgs = group.gen_images();
    let degree_map: BTreeMap<GroupElt, GroupElt> = support.iter().cloned().zip(imgs).collect();
    let grading = gr.relabel(&group, &degree_map);
    let relations = rels
        .into_iter()
        .map(|(g, h, k)| (degree_map[&g].clone(), degree_map[&h].clone(), degree_map[&k].clone()))
        .collect();
    Ok(Universal { group, degree_map, relations, grading })
}

/// Coarsening along a map defined on the support that respects all bracket relations.
pub fn coarsen(gr: &Grading, target: &AbGroup, support_images: &BTreeMap<GroupElt, GroupElt>) -> Result<Grading, GradingError> {
    for g in gr.support() {
        match support_images.get(&g) {
            None => return Err(GradingError::Invalid(format!("no image given for {g}"))),
            Some(x) if !x.group().same(target) => return Err(GradingError::Group(GroupError::GroupMismatch)),
            _ => {}
        }
    }
    let alg = &gr.algebra;
    for (g, bg) in &gr.components {
        for (h, bh) in &gr.components {
            let nonzero = bg.iter().any(|x| bh.iter().any(|y| !is_zero_vec(&alg.bracket(x, y))));
            if !nonzero {
                continue;
            }
            let s = g.add(h)?;
            let lhs = support_images[g].add(&support_images[h])?;
            if lhs != support_images[&s] {
                return Err(GradingError::RelationViolated(format!("{g} + {h} = {s}")));
            }
        }
    }
    Ok(gr.relabel(target, support_images))
}

/// Coarsening along a homomorphism given on the canonical generators of the grading group.
pub fn coarsen_hom(gr: &Grading, target: &AbGroup, gen_images: &[GroupElt]) -> Result<Grading, GradingError> {
    let g = &gr.group;
    if gen_images.len() != g.ncoords() {
        return Err(GradingError::Invalid("one image per generator required".into()));
    }
    for (i, x) in gen_images.iter().enumerate() {
        let d = g.generator_order(i);
        if d != 0 && !x.times(d as i64).is_zero() {
            return Err(GradingError::RelationViolated(format!("generator {i} has order {d} but its image does not")));
        }
    }
    let mut imgs = BTreeMap::new();
    for s in gr.support() {
        let mut acc = target.zero();
        for (c, x) in s.coords().iter().zip(gen_images) {
            acc = acc.add(&x.times(*c))?;
        }
        imgs.insert(s, acc);
    }
    coarsen(gr, target, &imgs)
}

/// Fine gradings with torsion-free universal group come from maximal tori.
pub fn is_toral_fine(gr: &Grading) -> Result<bool, GradingError> {
    Ok(universal_group(gr)?.group.is_torsion_free())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Symplectic,
    Orthogonal,
}

/// V = ⊕ V_i with a bilinear form such that each V_i pairs with exactly one V_j.
#[derive(Clone, Debug)]
pub struct PairedDecomposition {
    pub subspaces: Vec<Vec<Vect>>,
    pub form: Matrix,
    pub kind: FormKind,
}

pub fn form_eval(form: &Matrix, x: &[Cyclo], y: &[Cyclo]) -> Cyclo {
    let fy = linalg::mat_vec(form, y);
    let mut acc = x[0].ctx().zero();
    for (a, b) in x.iter().zip(&fy) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    acc
}

/// Output of the basis lemmas: pairs (i, u, j, v) with ⟨u, v⟩ = 1 and singles (i, w) with ⟨w, w⟩ ≠ 0.
#[derive(Clone, Debug, Default)]
pub struct PairedBasis {
    pub pairs: Vec<(usize, Vect, usize, Vect)>,
    pub singles: Vec<(usize, Vect)>,
}

impl PairedBasis {
    pub fn len(&self) -> usize {
        2 * self.pairs.len() + self.singles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl PairedDecomposition {
    fn validate(&self) -> Result<Vec<Option<usize>>, GradingError> {
        let all: Vec<Vect> = self.subspaces.iter().flatten().cloned().collect();
        if all.is_empty() {
            return Ok(vec![None; self.subspaces.len()]);
        }
        if linalg::rank(&all) != all.len() {
            return Err(GradingError::Invalid("subspaces are not independent".into()));
        }
        let gram: Matrix = all.iter().map(|x| all.iter().map(|y| form_eval(&self.form, x, y)).collect()).collect();
        for i in 0..all.len() {
            for j in 0..all.len() {
                let ok = match self.kind {
                    FormKind::Symplectic => gram[i][j] == gram[j][i].neg(),
                    FormKind::Orthogonal => gram[i][j] == gram[j][i],
                };
                if !ok {
                    return Err(GradingError::Invalid("form has the wrong symmetry".into()));
                }
            }
        }
        if linalg::inverse(&gram).is_none() {
            return Err(GradingError::Invalid("form is degenerate on the sum".into()));
        }
        let k = self.subspaces.len();
        let mut partner = vec![None; k];
        for i in 0..k {
            for j in 0..k {
                let nz = self.subspaces[i].iter().any(|x| self.subspaces[j].iter().any(|y| !form_eval(&self.form, x, y).is_zero()));
                if nz {
                    if let Some(p) = partner[i] {
                        if p != j {
                            return Err(GradingError::Invalid(format!("subspace {i} pairs with both {p} and {j}")));
                        }
                    }
                    partner[i] = Some(j);
                }
            }
        }
        Ok(partner)
    }
}

fn dual_pairs(pd: &PairedDecomposition, i: usize, j: usize) -> Result<Vec<(usize, Vect, usize, Vect)>, GradingError> {
    let e = &pd.subspaces[i];
    let f = &pd.subspaces[j];
    if e.len() != f.len() {
        return Err(GradingError::Invalid(format!("paired subspaces {i} and {j} differ in dimension")));
    }
    let g: Matrix = e.iter().map(|x| f.iter().map(|y| form_eval(&pd.form, x, y)).collect()).collect();
    let ginv = linalg::inverse(&g).ok_or_else(|| GradingError::Invalid("pairing is degenerate".into()))?;
    let ctx = e[0][0].ctx().clone();
    let n = e[0].len();
    let mut out = Vec::new();
    for m in 0..e.len() {
        let mut v = linalg::zero_vec(&ctx, n);
        for (h, fh) in f.iter().enumerate() {
            v = vaxpy(&v, &ginv[h][m], fh);
        }
        out.push((i, e[m].clone(), j, v));
    }
    Ok(out)
}

/// Homogeneous symplectic basis: ⟨u_i, u'_j⟩ = δ_ij and all other pairings zero.
pub fn homogeneous_symplectic_basis(pd: &PairedDecomposition) -> Result<PairedBasis, GradingError> {
    if pd.kind != FormKind::Symplectic {
        return Err(GradingError::Invalid("expected an alternating form".into()));
    }
    let partner = pd.validate()?;
    let mut out = PairedBasis::default();
    for i in 0..pd.subspaces.len() {
        let j = match partner[i] {
            Some(j) => j,
            None => {
                if pd.subspaces[i].is_empty() {
                    continue;
                }
                return Err(GradingError::Invalid(format!("subspace {i} pairs with nothing")));
            }
        };
        if j < i {
            continue;
        }
        if j > i {
            out.pairs.extend(dual_pairs(pd, i, j)?);
            continue;
        }
        // self-paired: symplectic Gram–Schmidt inside V_i
        let mut rest: Vec<Vect> = pd.subspaces[i].clone();
        while !rest.is_empty() {
            let a = rest.remove(0);
            let pos = rest
                .iter()
                .position(|w| !form_eval(&pd.form, &a, w).is_zero())
                .ok_or_else(|| GradingError::Invalid("form is degenerate on a self-paired subspace".into()))?;
            let w = rest.remove(pos);
            let c = form_eval(&pd.form, &a, &w);
            let b = vscale(&c.inv().unwrap(), &w);
            rest = rest
                .into_iter()
                .map(|x| {
                    let ca = form_eval(&pd.form, &b, &x);
                    let cb = form_eval(&pd.form, &a, &x).neg();
                    vaxpy(&vaxpy(&x, &ca, &a), &cb, &b)
                })
                .filter(|x| !is_zero_vec(x))
                .collect();
            out.pairs.push((i, a, i, b));
        }
    }
    Ok(out)
}

/// Homogeneous orthogonal basis: self-paired pieces diagonalised, cross-paired pieces as dual pairs.
pub fn homogeneous_orthogonal_basis(pd: &PairedDecomposition) -> Result<PairedBasis, GradingError> {
    if pd.kind != FormKind::Orthogonal {
        return Err(GradingError::Invalid("expected a symmetric form".into()));
    }
    let partner = pd.validate()?;
    let mut out = PairedBasis::default();
    for i in 0..pd.subspaces.len() {
        let j = match partner[i] {
            Some(j) => j,
            None => {
                if pd.subspaces[i].is_empty() {
                    continue;
                }
                return Err(GradingError::Invalid(format!("subspace {i} pairs with nothing")));
            }
        };
        if j < i {
            continue;
        }
        if j > i {
            out.pairs.extend(dual_pairs(pd, i, j)?);
            continue;
        }
        let mut rest: Vec<Vect> = pd.subspaces[i].clone();
        while !rest.is_empty() {
            let a = match rest.iter().position(|w| !form_eval(&pd.form, w, w).is_zero()) {
                Some(p) => rest.remove(p),
                None => {
                    // all isotropic: some pair has nonzero pairing, their sum is anisotropic
                    let mut found = None;
                    'o: for x in 0..rest.len() {
                        for y in x + 1..rest.len() {
                            if !form_eval(&pd.form, &rest[x], &rest[y]).is_zero() {
                                found = Some((x, y));
                                break 'o;
                            }
                        }
                    }
                    let (x, y) = found.ok_or_else(|| GradingError::Invalid("form is degenerate on a self-paired subspace".into()))?;
                    rest[x] = linalg::vadd(&rest[x], &rest[y]);
                    continue;
                }
            };
            let aa = form_eval(&pd.form, &a, &a).inv().unwrap();
            rest = rest
                .into_iter()
                .map(|x| {
                    let c = form_eval(&pd.form, &x, &a).mul(&aa).neg();
                    vaxpy(&x, &c, &a)
                })
                .filter(|x| !is_zero_vec(x))
                .collect();
            out.singles.push((i, a));
        }
    }
    Ok(out)
}

/// Basis z, (u_i, u'_i) of a graded Heisenberg algebra with [u_i, u'_j] = δ_ij z, all homogeneous.
#[derive(Clone, Debug)]
pub struct DarbouxBasis {
    pub z: Vect,
    pub pairs: Vec<(Vect, Vect)>,
}

pub fn darboux_homogeneous_basis(gr: &Grading) -> Result<DarbouxBasis, GradingError> {
    let alg = &gr.algebra;
    let n = alg.dim();
    let c = alg.center();
    if c.dim() != 1 || !alg.derived().equals(&c) {
        return Err(GradingError::Invalid("not a Heisenberg algebra (center must equal the derived algebra, of dimension 1)".into()));
    }
    let z = c.basis[0].clone();
    let p = c.pivots[0];
    let g0 = gr.degree_of(&z).ok_or_else(|| GradingError::Invalid("center is not homogeneous".into()))?;
    // subspaces complementary to Fz inside each component
    let mut subspaces = Vec::new();
    for (g, b) in &gr.components {
        if *g == g0 {
            let red: Vec<Vect> = b
                .iter()
                .map(|x| {
                    let f = x[p].div(&z[p]).unwrap().neg();
                    vaxpy(x, &f, &z)
                })
                .collect();
            let sp = Subspace::span(n, &red);
            if sp.dim() > 0 {
                subspaces.push(sp.basis);
            }
        } else {
            subspaces.push(b.clone());
        }
    }
    // ⟨x, y⟩ z = [x, y]
    let mut form = vec![linalg::zero_vec(alg.ctx(), n); n];
    for i in 0..n {
        for j in 0..n {
            let w = alg.bracket_basis(i, j);
            form[i][j] = w[p].div(&z[p]).unwrap();
        }
    }
    let pd = PairedDecomposition { subspaces, form, kind: FormKind::Symplectic };
    let pb = homogeneous_symplectic_basis(&pd)?;
    Ok(DarbouxBasis { z, pairs: pb.pairs.into_iter().map(|(_, u, _, v)| (u, v)).collect() })
}


/// JSON description of a grading: algebra, group and one basis per component.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct GradingSpec {
    pub algebra: crate::liealg::AlgebraSpec,
    pub group: String,
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct ComponentSpec {
    /// canonical coordinates of the degree
    pub degree: Vec<i64>,
    /// vectors as {label: scalar}
    pub basis: Vec<BTreeMap<String, String>>,
}

impl GradingSpec {
    pub fn required_conductor(&self) -> Result<u64, GradingError> {
        let mut n = self.algebra.required_conductor().map_err(|e| GradingError::Invalid(e.to_string()))?;
        for c in &self.components {
            for v in &c.basis {
                for s in v.values() {
                    let e = crate::scalars::ScalarExpr::parse(s).map_err(|e| GradingError::Invalid(e.to_string()))?;
                    n = crate::scalars::lcm_u64(n, e.required_conductor());
                }
            }
        }
        Ok(n)
    }

    /// Builds without verifying; run `verify_grading` on the result.
    pub fn build(&self, ctx: &crate::scalars::CycloCtx) -> Result<Grading, GradingError> {
        let alg = Arc::new(self.algebra.build(ctx).map_err(|e| GradingError::Invalid(e.to_string()))?);
        let group = AbGroup::parse(&self.group)?;
        let mut gr = Grading::new(alg.clone(), group.clone());
        for c in &self.components {
            let g = group.elt(&c.degree)?;
            let mut vs = Vec::new();
            for v in &c.basis {
                let mut x = crate::linalg::zero_vec(ctx, alg.dim());
                for (l, s) in v {
                    let k = alg.index(l).map_err(|e| GradingError::Invalid(e.to_string()))?;
                    x[k] = x[k].add(&ctx.parse(s).map_err(|e| GradingError::Invalid(e.to_string()))?);
                }
                vs.push(x);
            }
            gr.components.entry(g).or_default().extend(vs);
        }
        Ok(gr)
    }

    pub fn from_grading(gr: &Grading) -> GradingSpec {
        let alg = &gr.algebra;
        GradingSpec {
            algebra: crate::liealg::AlgebraSpec::from_algebra(alg),
            group: gr.group.to_string(),
            components: gr
                .components
                .iter()
                .map(|(g, b)| ComponentSpec {
                    degree: g.coords().to_vec(),
                    basis: b
                        .iter()
                        .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (alg.labels()[i].clone(), c.to_string())).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}
