//! Weyl groups of fine gradings: generator automorphisms, permutation closure,
//! closed-form orders and a brute-force extendability oracle.

use crate::abelian::smith_normal_form;
use crate::fine::{class_exp_i, class_exp_ii, fine_twisted, same_class, FineError, FineGrading, FineKind, Role, TwistedParams};
use crate::gradings::{universal_group, Grading};
use crate::liealg::LinMap;
use crate::linalg::{self, is_zero_vec, Matrix, Subspace, Vect};
use crate::scalars::Cyclo;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("map does not permute the components: {0}")]
    NotGradingCompatible(String),
    #[error("support size {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("{0}")]
    Fine(#[from] FineError),
    #[error("{0}")]
    Other(String),
}

pub type Perm = Vec<usize>;

pub fn perm_compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

pub fn perm_inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn perm_identity(n: usize) -> Perm {
    (0..n).collect()
}

/// Cycle notation using the given point names; fixed points omitted.
pub fn cycle_notation(p: &Perm, names: &[String]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for i in 0..p.len() {
        if seen[i] || p[i] == i {
            seen[i] = true;
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            cyc.push(names[j].clone());
            j = p[j];
        }
        out.push('(');
        out.push_str(&cyc.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Automorphism together with its permutation of the components (indexed by sorted support).
#[derive(Clone, Debug)]
pub struct GradedAut {
    pub map: LinMap,
    pub perm: Perm,
}

/// Permutation of the components induced by an automorphism.
pub fn induced_permutation(f: &LinMap, gr: &Grading) -> Result<GradedAut, WeylError> {
    gr.algebra.check_automorphism(f).map_err(WeylError::NotAutomorphism)?;
    let n = gr.algebra.dim();
    let spaces: Vec<Subspace> = gr.components.values().map(|b| Subspace::span(n, b)).collect();
    let mut perm = Vec::with_capacity(spaces.len());
    for (idx, b) in gr.components.values().enumerate() {
        let img = Subspace::span(n, &b.iter().map(|v| f.apply(v)).collect::<Vec<_>>());
        match spaces.iter().position(|s| s.equals(&img)) {
            Some(j) => perm.push(j),
            None => return Err(WeylError::NotGradingCompatible(format!("image of component {idx} is not a component"))),
        }
    }
    Ok(GradedAut { map: f.clone(), perm })
}

/// Structure constants of a fine grading in its homogeneous basis.
#[derive(Clone, Debug)]
pub struct Structure {
    pub n: usize,
    /// [b_a, b_b] = κ b_c
    pub kappa: Vec<Vec<Option<(usize, Cyclo)>>>,
    /// invariants preserved by any graded automorphism
    pub class: Vec<(u8, bool, bool, Option<u64>)>,
    pub basis: Matrix,
    pub basis_inv: Matrix,
    /// component index (sorted support) of each basis vector
    pub comp_of: Vec<usize>,
}

impl Structure {
    pub fn from_fine(fg: &FineGrading) -> Result<Structure, WeylError> {
        let alg = fg.algebra();
        let n = fg.basis.len();
        let bm = linalg::from_columns(&fg.basis);
        let binv = linalg::inverse(&bm).ok_or_else(|| WeylError::Other("homogeneous basis is singular".into()))?;
        let mut kappa = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                let w = alg.bracket(&fg.basis[a], &fg.basis[b]);
                if is_zero_vec(&w) {
                    continue;
                }
                let co = linalg::mat_vec(&binv, &w);
                let nz: Vec<usize> = (0..n).filter(|&i| !co[i].is_zero()).collect();
                if nz.len() != 1 {
                    return Err(WeylError::Other("bracket of basis vectors is not homogeneous".into()));
                }
                kappa[a][b] = Some((nz[0], co[nz[0]].clone()));
            }
        }
        let uni = universal_group(&fg.grading).map_err(FineError::from)?;
        let center = alg.center();
        let derived = alg.derived();
        let class = (0..n)
            .map(|i| {
                let v = &fg.basis[i];
                let p = alg.vec_parity(v).unwrap_or(0);
                let d = uni.degree_map[&fg.degrees[i]].order();
                (p, center.contains(v), derived.contains(v), d)
            })
            .collect();
        let support: Vec<_> = fg.grading.components.keys().cloned().collect();
        let comp_of = fg.degrees.iter().map(|d| support.iter().position(|s| s == d).unwrap()).collect();
        Ok(Structure { n, kappa, class, basis: bm, basis_inv: binv, comp_of })
    }
}

/// Outcome of the multiplicative constraint system c_a c_b κ' = κ c_c.
#[derive(Clone, Debug)]
pub struct MonomialSolve {
    pub consistent: bool,
    /// explicit scalars in the base field, when they exist there
    pub scalars: Option<Vec<Cyclo>>,
}

/// Decides whether the basis bijection π (src → dst) extends to an isomorphism
/// b_a ↦ c_a b'_{π(a)}, with some c_a prescribed.
pub fn solve_monomial(src: &Structure, dst: &Structure, perm: &Perm, fixed: &[(usize, Cyclo)]) -> MonomialSolve {
    let n = src.n;
    let ctx = src.basis[0][0].ctx().clone();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut gam: Vec<Cyclo> = Vec::new();
    let fail = MonomialSolve { consistent: false, scalars: None };
    for a in 0..n {
        for b in a..n {
            let s = &src.kappa[a][b];
            let d = &dst.kappa[perm[a]][perm[b]];
            match (s, d) {
                (None, None) => {}
                (Some((c, k)), Some((c2, k2))) => {
                    if perm[*c] != *c2 {
                        return fail;
                    }
                    let mut row = vec![0i64; n];
                    row[a] += 1;
                    row[b] += 1;
                    row[*c] -= 1;
                    rows.push(row);
                    gam.push(k.div(k2).unwrap());
                }
                _ => return fail,
            }
        }
    }
    for (i, v) in fixed {
        let mut row = vec![0i64; n];
        row[*i] = 1;
        rows.push(row);
        gam.push(v.clone());
    }
    if rows.is_empty() {
        return MonomialSolve { consistent: true, scalars: Some(vec![ctx.one(); n]) };
    }
    let a = crate::abelian::int_matrix(&rows);
    let snf = smith_normal_form(&a, n);
    let m = rows.len();
    let diag = snf.diagonal();
    let mut w: Vec<Option<Cyclo>> = vec![Some(ctx.one()); n];
    let mut explicit = true;
    for r in 0..m {
        let mut delta = ctx.one();
        for s in 0..m {
            let e = &snf.u[r][s];
            if e.is_zero() {
                continue;
            }
            let e = match e.to_i64() {
                Some(e) => e,
                None => return fail,
            };
            delta = delta.mul(&gam[s].pow(e).unwrap());
        }
        let d = if r < diag.len() { diag[r].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !delta.is_one() {
                return fail;
            }
        } else if r < n {
            let d = d.to_u64().unwrap();
            match delta.nth_root_try(d) {
                Some(x) => w[r] = Some(x),
                None => {
                    w[r] = None;
                    explicit = false;
                }
            }
        }
    }
    if !explicit {
        return MonomialSolve { consistent: true, scalars: None };
    }
    let w: Vec<Cyclo> = w.into_iter().map(|x| x.unwrap()).collect();
    let mut c = Vec::with_capacity(n);
    for j in 0..n {
        let mut x = ctx.one();
        for (k, wk) in w.iter().enumerate() {
            let e = snf.v[j][k].to_i64().unwrap();
            if e != 0 {
                x = x.mul(&wk.pow(e).unwrap());
            }
        }
        c.push(x);
    }
    MonomialSolve { consistent: true, scalars: Some(c) }
}

/// Linear map b_a ↦ c_a b'_{π(a)} in algebra coordinates.
pub fn monomial_map(src: &Structure, dst: &Structure, perm: &Perm, scalars: &[Cyclo]) -> LinMap {
    let n = src.n;
    let ctx = src.basis[0][0].ctx().clone();
    let dim = src.basis.len();
    let images = (0..dim)
        .map(|j| {
            // e_j = Σ_a (B^{-1})_{a j} b_a
            let mut v = linalg::zero_vec(&ctx, dim);
            for a in 0..n {
                let co = &src.basis_inv[a][j];
                if co.is_zero() {
                    continue;
                }
                let target: Vect = (0..dim).map(|r| dst.basis[r][perm[a]].clone()).collect();
                v = linalg::vaxpy(&v, &co.mul(&scalars[a]), &target);
            }
            v
        })
        .collect();
    LinMap { images }
}

/// Backtracking over basis bijections respecting invariants and the bracket pattern.
struct Search<'a> {
    src: &'a Structure,
    dst: &'a Structure,
    cands: Vec<Vec<usize>>,
    fixed: Vec<(usize, Cyclo)>,
    need_explicit: bool,
    stop_first: bool,
    found: Vec<(Perm, Option<Vec<Cyclo>>)>,
    leaves: usize,
}

impl<'a> Search<'a> {
    fn pattern_ok(&self, perm: &[Option<usize>], inv: &[Option<usize>], a: usize) -> bool {
        let pa = perm[a].unwrap();
        for b in 0..self.src.n {
            let pb = match perm[b] {
                Some(x) => x,
                None => continue,
            };
            for (x, y, px, py) in [(a, b, pa, pb), (b, a, pb, pa)] {
                match (&self.src.kappa[x][y], &self.dst.kappa[px][py]) {
                    (None, None) => {}
                    (Some((c, _)), Some((c2, _))) => match perm[*c] {
                        Some(pc) if pc != *c2 => return false,
                        None => {
                            if let Some(o) = inv[*c2] {
                                if o != *c {
                                    return false;
                                }
                            }
                            if !self.cands[*c].contains(c2) {
                                return false;
                            }
                        }
                        _ => {}
                    },
                    _ => return false,
                }
            }
        }
        true
    }

    fn run(&mut self, perm: &mut Vec<Option<usize>>, inv: &mut Vec<Option<usize>>, a: usize) -> bool {
        if a == self.src.n {
            self.leaves += 1;
            let p: Perm = perm.iter().map(|x| x.unwrap()).collect();
            let s = solve_monomial(self.src, self.dst, &p, &self.fixed);
            if s.consistent && (!self.need_explicit || s.scalars.is_some()) {
                self.found.push((p, s.scalars));
                return self.stop_first;
            }
            return false;
        }
        let cands = self.cands[a].clone();
        for t in cands {
            if inv[t].is_some() {
                continue;
            }
            perm[a] = Some(t);
            inv[t] = Some(a);
            if self.pattern_ok(perm, inv, a) && self.run(perm, inv, a + 1) {
                return true;
            }
            perm[a] = None;
            inv[t] = None;
        }
        false
    }
}

fn search(
    src: &Structure,
    dst: &Structure,
    cands: Vec<Vec<usize>>,
    fixed: Vec<(usize, Cyclo)>,
    need_explicit: bool,
    stop_first: bool,
) -> Vec<(Perm, Option<Vec<Cyclo>>)> {
    let mut s = Search { src, dst, cands, fixed, need_explicit, stop_first, found: Vec::new(), leaves: 0 };
    let mut perm = vec![None; src.n];
    let mut inv = vec![None; src.n];
    s.run(&mut perm, &mut inv, 0);
    s.found
}

fn invariant_candidates(src: &Structure, dst: &Structure) -> Vec<Vec<usize>> {
    (0..src.n).map(|a| (0..dst.n).filter(|&b| src.class[a] == dst.class[b]).collect()).collect()
}

/// Group of permutations of the components, with its elements.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
}

impl PermGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.iter().any(|e| e == p)
    }

    pub fn info(&self) -> GroupInfo {
        group_info(&self.elements, &self.generators)
    }
}

/// Breadth-first closure of the generated group.
pub fn closure(degree: usize, gens: &[Perm]) -> PermGroup {
    let id = perm_identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut elements = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = perm_compose(g, &x);
            if seen.insert(y.clone()) {
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    PermGroup { degree, generators: gens.to_vec(), elements }
}

/// Invariants used to recognise small groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInfo {
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub involutions: usize,
    pub center_order: usize,
    pub derived_order: usize,
    pub dihedral: bool,
    pub elementary_abelian: bool,
}

impl GroupInfo {
    pub fn describe(&self) -> String {
        let mut s = format!("order {}", self.order);
        if self.elementary_abelian && self.order > 1 {
            s += &format!(", elementary abelian Z_2^{}", self.order.trailing_zeros());
        } else if self.abelian {
            s += ", abelian";
        } else {
            s += ", non-abelian";
        }
        if self.dihedral && !self.abelian {
            s += &format!(", dihedral of order {}", self.order);
        }
        s += &format!(", exponent {}, |Z| = {}, |G/G'| = {}", self.exponent, self.center_order, self.order / self.derived_order);
        s
    }
}

fn elt_order(p: &Perm) -> usize {
    let id = perm_identity(p.len());
    let mut x = p.clone();
    let mut k = 1;
    while x != id {
        x = perm_compose(p, &x);
        k += 1;
    }
    k
}

fn lcm(a: usize, b: usize) -> usize {
    num_integer::lcm(a, b)
}

pub fn group_info(elements: &[Perm], gens: &[Perm]) -> GroupInfo {
    let n = elements.len();
    let degree = elements.first().map(|x| x.len()).unwrap_or(0);
    let abelian = gens.iter().all(|a| gens.iter().all(|b| perm_compose(a, b) == perm_compose(b, a)));
    let orders: Vec<usize> = elements.iter().map(elt_order).collect();
    let exponent = orders.iter().fold(1, |a, &b| lcm(a, b));
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let center_order = elements.iter().filter(|x| gens.iter().all(|g| perm_compose(g, x) == perm_compose(x, g))).count();
    let mut comms = Vec::new();
    for a in gens {
        for b in gens {
            let c = perm_compose(&perm_compose(&perm_inverse(a), &perm_inverse(b)), &perm_compose(a, b));
            comms.push(c);
        }
    }
    // normal closure of commutators of generators
    let mut conj = Vec::new();
    for c in &comms {
        for g in elements {
            conj.push(perm_compose(&perm_compose(g, c), &perm_inverse(g)));
        }
    }
    conj.sort();
    conj.dedup();
    let derived_order = closure(degree, &conj).order();
    let dihedral = n >= 4 && n.is_multiple_of(2) && {
        let m = n / 2;
        elements.iter().zip(&orders).filter(|(_, &o)| o == m).any(|(r, _)| {
            let mut cyc = HashSet::new();
            let mut x = perm_identity(degree);
            for _ in 0..m {
                cyc.insert(x.clone());
                x = perm_compose(r, &x);
            }
            let rinv = perm_inverse(r);
            elements.iter().zip(&orders).any(|(s, &o)| o == 2 && !cyc.contains(s) && perm_compose(&perm_compose(s, r), s) == rinv)
        })
    };
    GroupInfo { order: n, abelian, exponent, involutions, center_order, derived_order, dihedral, elementary_abelian: abelian && exponent <= 2 }
}

/// Every permutation of the components that extends to a graded automorphism.
pub fn weyl_bruteforce(fg: &FineGrading, cap: usize) -> Result<PermGroup, WeylError> {
    let st = Structure::from_fine(fg)?;
    if st.n > cap {
        return Err(WeylError::CapExceeded { size: st.n, cap });
    }
    let cands = invariant_candidates(&st, &st);
    let found = search(&st, &st, cands, vec![], false, false);
    let mut elements: Vec<Perm> = found.into_iter().map(|(p, _)| to_component_perm(&st, &p)).collect();
    elements.sort();
    let id = perm_identity(st.n);
    if let Some(pos) = elements.iter().position(|e| *e == id) {
        let e = elements.remove(pos);
        elements.insert(0, e);
    }
    Ok(PermGroup { degree: st.n, generators: elements.clone(), elements })
}

fn to_component_perm(st: &Structure, p: &Perm) -> Perm {
    let mut out = vec![0; st.n];
    for a in 0..st.n {
        out[st.comp_of[a]] = st.comp_of[p[a]];
    }
    out
}

/// Explicit equivalence between two fine gradings of the same algebra, if one exists.
#[derive(Clone, Debug)]
pub struct Equivalence {
    /// basis index of fa ↦ basis index of fb
    pub perm: Perm,
    /// explicit automorphism when its scalars lie in the field
    pub map: Option<LinMap>,
}

pub fn find_equivalence(fa: &FineGrading, fb: &FineGrading, cap: usize) -> Result<Option<Equivalence>, WeylError> {
    let sa = Structure::from_fine(fa)?;
    let sb = Structure::from_fine(fb)?;
    if sa.n > cap {
        return Err(WeylError::CapExceeded { size: sa.n, cap });
    }
    if sa.n != sb.n {
        return Ok(None);
    }
    let cands = invariant_candidates(&sa, &sb);
    let found = search(&sa, &sb, cands.clone(), vec![], true, true);
    if let Some((p, Some(c))) = found.into_iter().next() {
        return Ok(Some(Equivalence { map: Some(monomial_map(&sa, &sb, &p, &c)), perm: p }));
    }
    let found = search(&sa, &sb, cands, vec![], false, true);
    Ok(found.into_iter().next().map(|(p, _)| Equivalence { perm: p, map: None }))
}

/// A generator of the Weyl group with its explicit automorphism.
#[derive(Clone, Debug)]
pub struct WeylGenerator {
    pub name: String,
    /// basis permutation of the fine grading
    pub basis_perm: Perm,
    /// permutation of components (sorted support)
    pub perm: Perm,
    pub scalars: Vec<Cyclo>,
    pub map: LinMap,
    /// the textbook scalars failed and were re-solved
    pub repaired: bool,
    /// the textbook permutation failed and another one inside the same blocks was used
    pub pattern_adjusted: bool,
}

struct GenSpec {
    name: String,
    perm: Perm,
    scalars: Vec<Cyclo>,
    fixed: Vec<(usize, Cyclo)>,
    /// allowed images per basis element when the textbook pattern has to be adjusted
    cands: Option<Vec<Vec<usize>>>,
}

fn realize(fg: &FineGrading, st: &Structure, spec: GenSpec) -> Result<WeylGenerator, WeylError> {
    let alg = fg.algebra();
    let f = monomial_map(st, st, &spec.perm, &spec.scalars);
    let mut repaired = false;
    let mut pattern_adjusted = false;
    let (bp, sc, f) = if alg.is_automorphism(&f) {
        (spec.perm.clone(), spec.scalars.clone(), f)
    } else {
        repaired = true;
        let s = solve_monomial(st, st, &spec.perm, &spec.fixed);
        match s.scalars {
            Some(c) => {
                let f = monomial_map(st, st, &spec.perm, &c);
                (spec.perm.clone(), c, f)
            }
            None => {
                let cands = spec.cands.clone().ok_or_else(|| WeylError::Other(format!("{}: no scalars make the textbook pattern an automorphism", spec.name)))?;
                pattern_adjusted = true;
                let found = search(st, st, cands, spec.fixed.clone(), true, true);
                let (p, c) = found.into_iter().next().ok_or_else(|| WeylError::Other(format!("{}: no automorphism with this block pattern", spec.name)))?;
                let c = c.unwrap();
                let f = monomial_map(st, st, &p, &c);
                (p, c, f)
            }
        }
    };
    let ga = induced_permutation(&f, &fg.grading)?;
    Ok(WeylGenerator { name: spec.name, basis_perm: bp, perm: ga.perm, scalars: sc, map: f, repaired, pattern_adjusted })
}

/// Monomial generator role ↦ c·role (unlisted roles fixed), scalars re-solved if needed.
pub fn build_generator(fg: &FineGrading, name: &str, assign: &[(Role, Role, Cyclo)]) -> Result<WeylGenerator, WeylError> {
    let st = Structure::from_fine(fg)?;
    let mut sp = id_spec(fg, name.to_string());
    for (a, b, c) in assign {
        if fg.role_index(a).is_none() || fg.role_index(b).is_none() {
            return Err(WeylError::Other(format!("unknown role {a} or {b}")));
        }
        set(fg, &mut sp, a, b, c.clone());
    }
    if let Some(u) = fg.role_index(&Role::U) {
        sp.fixed = vec![(u, sp.scalars[u].clone())];
    }
    realize(fg, &st, sp)
}

fn id_spec(fg: &FineGrading, name: String) -> GenSpec {
    let n = fg.basis.len();
    GenSpec { name, perm: perm_identity(n), scalars: vec![fg.ctx().one(); n], fixed: vec![], cands: None }
}

/// Sets role a ↦ c·role b in a spec.
fn set(fg: &FineGrading, spec: &mut GenSpec, a: &Role, b: &Role, c: Cyclo) {
    let i = fg.role_index(a).expect("role present");
    let j = fg.role_index(b).expect("role present");
    spec.perm[i] = j;
    spec.scalars[i] = c;
}

/// (p, q) and the layering of blocks for the twisted Weyl group.
#[derive(Clone, Debug)]
pub struct PQSplit {
    pub p: usize,
    pub q: usize,
    pub eps: Cyclo,
    /// chains of type I block indices, class(β_{c[t+1]}) = ε·class(β_{c[t]})
    pub chains_i: Vec<Vec<usize>>,
    pub chains_ii: Vec<Vec<usize>>,
}

fn chains(vals: &[Cyclo], eps: &Cyclo, p: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    let mut left: Vec<usize> = (0..vals.len()).collect();
    let mut out = Vec::new();
    while let Some(&first) = left.first() {
        left.remove(0);
        let mut chain = vec![first];
        let mut cur = vals[first].clone();
        for _ in 1..p {
            cur = cur.mul(eps);
            let pos = left.iter().position(|&j| same_class(&vals[j], &cur, m))?;
            chain.push(left.remove(pos));
        }
        // closing condition ε^p = 1 holds since ε is a p-th root
        out.push(chain);
    }
    Some(out)
}

/// Largest p such that the classes split into ε-chains of length p, ε a primitive p-th root.
pub fn compute_pq(params: &TwistedParams) -> PQSplit {
    let refv = params.betas.first().or(params.alphas.first()).expect("nonempty params");
    let ctx = refv.ctx().clone();
    let mi = class_exp_i(params.l);
    let mii = class_exp_ii(params.l);
    let mut roots: Vec<(Cyclo, u64)> = ctx.roots_of_unity().to_vec();
    roots.sort_by_key(|r| std::cmp::Reverse(r.1));
    for (w, p) in roots {
        let p = p as usize;
        if !params.s.is_multiple_of(p) || !params.r.is_multiple_of(p) {
            continue;
        }
        let ci = match chains(&params.betas, &w, p, mi) {
            Some(c) => c,
            None => continue,
        };
        let cii = match chains(&params.alphas, &w, p, mii) {
            Some(c) => c,
            None => continue,
        };
        let m = if params.s > 0 { mi } else { mii };
        let mut q = 1;
        while !w.pow(q as i64).unwrap().pow(m as i64).unwrap().is_one() {
            q += 1;
        }
        return PQSplit { p, q, eps: w, chains_i: ci, chains_ii: cii };
    }
    unreachable!("ε = 1 always splits")
}

/// η with class(vals[η(j)]) = class(ε·vals[j]), if multiplication by ε permutes the classes.
pub fn class_permutation(vals: &[Cyclo], eps: &Cyclo, m: usize) -> Option<Vec<usize>> {
    let mut used = vec![false; vals.len()];
    let mut out = Vec::with_capacity(vals.len());
    for v in vals {
        let ev = eps.mul(v);
        let k = (0..vals.len()).find(|&k| !used[k] && same_class(&vals[k], &ev, m))?;
        used[k] = true;
        out.push(k);
    }
    Some(out)
}

/// Roots ε permuting the classes of both block types, and the order of their image
/// modulo those acting trivially on classes. Returns a generator of largest order.
pub fn class_symmetry(params: &TwistedParams) -> (Cyclo, usize) {
    let refv = params.betas.first().or(params.alphas.first()).expect("nonempty params");
    let ctx = refv.ctx().clone();
    let mi = class_exp_i(params.l);
    let mii = class_exp_ii(params.l);
    let mut best = (ctx.one(), 1u64);
    let mut size_e = 0usize;
    let mut size_e0 = 0usize;
    for (w, o) in ctx.roots_of_unity() {
        let ok = class_permutation(&params.betas, w, mi).is_some() && class_permutation(&params.alphas, w, mii).is_some();
        if !ok {
            continue;
        }
        size_e += 1;
        let triv = (params.s == 0 || w.pow(mi as i64).unwrap().is_one()) && (params.r == 0 || w.pow(mii as i64).unwrap().is_one());
        if triv {
            size_e0 += 1;
        }
        if *o > best.1 {
            best = (w.clone(), *o);
        }
    }
    (best.0, size_e / size_e0)
}

/// Closed-form order with q replaced by the full class-symmetry index.
pub fn twisted_formula_corrected(params: &TwistedParams) -> u64 {
    let pq = compute_pq(params);
    let (_, qs) = class_symmetry(params);
    twisted_formula(params) / pq.q as u64 * qs as u64
}

/// Parameters with blocks reordered into layers and representatives chosen so that
/// β_{j+s/p} = ε β_j and α_{t+r/p} = ε α_t.
pub fn adapted_params(params: &TwistedParams, pq: &PQSplit) -> TwistedParams {
    let layer = |vals: &[Cyclo], ch: &[Vec<usize>], n: usize| -> Vec<Cyclo> {
        let per = n / pq.p;
        let mut out = vec![pq.eps.ctx().zero(); n];
        for (c, chain) in ch.iter().enumerate() {
            let mut v = vals[chain[0]].clone();
            for t in 0..pq.p {
                out[t * per + c] = v.clone();
                v = v.mul(&pq.eps);
            }
        }
        out
    };
    TwistedParams {
        l: params.l,
        s: params.s,
        r: params.r,
        betas: layer(&params.betas, &pq.chains_i, params.s),
        alphas: layer(&params.alphas, &pq.chains_ii, params.r),
    }
}

fn class_multiplicities(vals: &[Cyclo], m: usize) -> Vec<usize> {
    let mut groups: Vec<(Cyclo, usize)> = Vec::new();
    for v in vals {
        match groups.iter_mut().find(|(r, _)| same_class(r, v, m)) {
            Some(g) => g.1 += 1,
            None => groups.push((v.clone(), 1)),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Closed-form order of W(Γ).
pub fn weyl_order_formula(fg: &FineGrading) -> u64 {
    match &fg.kind {
        FineKind::Heisenberg { k } => (1u64 << k) * factorial(*k),
        FineKind::Super { k, m, r } => (1u64 << (r + k)) * factorial(*k) * factorial(*r) * factorial(m - 2 * r),
        FineKind::Twisted { params, .. } => twisted_formula(params),
    }
}

pub fn twisted_formula(params: &TwistedParams) -> u64 {
    let pq = compute_pq(params);
    let l = params.l as u64;
    let mb: u64 = class_multiplicities(&params.betas, class_exp_i(params.l)).into_iter().map(factorial).product();
    if params.l.is_multiple_of(2) {
        let na: u64 = class_multiplicities(&params.alphas, class_exp_ii(params.l)).into_iter().map(factorial).product();
        na * mb * (2 * l).pow(params.s as u32) * 2u64.pow(params.r as u32) * pq.q as u64
    } else {
        mb * 2 * l.pow(params.s as u32) * pq.q as u64
    }
}

/// Generators from the structure theorems, realised as explicit automorphisms.
pub fn standard_generators(fg: &FineGrading) -> Result<Vec<WeylGenerator>, WeylError> {
    let st = Structure::from_fine(fg)?;
    let ctx = fg.ctx().clone();
    let one = ctx.one();
    let m1 = ctx.from_int(-1);
    let mut specs = Vec::new();
    let hk = |specs: &mut Vec<GenSpec>, k: usize| {
        for i in 0..k.saturating_sub(1) {
            let mut s = id_spec(fg, format!("sigma~({} {})", i + 1, i + 2));
            set(fg, &mut s, &Role::E(i), &Role::E(i + 1), one.clone());
            set(fg, &mut s, &Role::E(i + 1), &Role::E(i), one.clone());
            set(fg, &mut s, &Role::EH(i), &Role::EH(i + 1), one.clone());
            set(fg, &mut s, &Role::EH(i + 1), &Role::EH(i), one.clone());
            specs.push(s);
        }
        if k >= 1 {
            let mut s = id_spec(fg, "mu_1".into());
            set(fg, &mut s, &Role::E(0), &Role::EH(0), one.clone());
            set(fg, &mut s, &Role::EH(0), &Role::E(0), m1.clone());
            specs.push(s);
        }
    };
    match &fg.kind {
        FineKind::Heisenberg { k } => hk(&mut specs, *k),
        FineKind::Super { k, m, r } => {
            hk(&mut specs, *k);
            if *r >= 1 {
                let mut s = id_spec(fg, "mu'_1".into());
                set(fg, &mut s, &Role::OddU(0), &Role::OddV(0), one.clone());
                set(fg, &mut s, &Role::OddV(0), &Role::OddU(0), m1.clone());
                specs.push(s);
            }
            for j in 0..r.saturating_sub(1) {
                let mut s = id_spec(fg, format!("sigma-({} {})", j + 1, j + 2));
                for (a, b) in [(j, j + 1), (j + 1, j)] {
                    set(fg, &mut s, &Role::OddU(a), &Role::OddU(b), one.clone());
                    set(fg, &mut s, &Role::OddV(a), &Role::OddV(b), one.clone());
                }
                specs.push(s);
            }
            let q = m - 2 * r;
            for t in 0..q.saturating_sub(1) {
                let mut s = id_spec(fg, format!("sigma^({} {})", t + 1, t + 2));
                set(fg, &mut s, &Role::OddZ(t), &Role::OddZ(t + 1), one.clone());
                set(fg, &mut s, &Role::OddZ(t + 1), &Role::OddZ(t), one.clone());
                specs.push(s);
            }
        }
        FineKind::Twisted { params, .. } => specs = twisted_specs(fg, params)?,
    }
    specs.into_iter().map(|s| realize(fg, &st, s)).collect()
}

fn block_cands(fg: &FineGrading, params: &TwistedParams, map_i: &[usize], map_ii: &[usize], u_fixed: bool) -> Vec<Vec<usize>> {
    let l = params.l;
    fg.roles
        .iter()
        .map(|r| match r {
            Role::Z => vec![fg.role_index(&Role::Z).unwrap()],
            Role::U => vec![fg.role_index(&Role::U).unwrap()],
            Role::X(j, i) | Role::Y(j, i) => {
                let t = map_i[*j];
                let same_x = matches!(r, Role::X(..));
                let mut v = Vec::new();
                // textbook-like images first
                for swap in [false, true] {
                    for d in 0..l {
                        let ii = (i - 1 + d) % l + 1;
                        let role = if same_x != swap { Role::X(t, ii) } else { Role::Y(t, ii) };
                        v.push(fg.role_index(&role).unwrap());
                    }
                }
                v
            }
            Role::A(t, i) => {
                let tt = map_ii[*t];
                (0..l).map(|d| fg.role_index(&Role::A(tt, (i - 1 + d) % l + 1)).unwrap()).collect()
            }
            _ => vec![],
        })
        .inspect(|_v| {
            let _ = u_fixed;
        })
        .collect()
}

fn twisted_specs(fg: &FineGrading, params: &TwistedParams) -> Result<Vec<GenSpec>, WeylError> {
    let ctx = fg.ctx().clone();
    let one = ctx.one();
    let i_unit = ctx.i().map_err(FineError::from)?;
    let l = params.l;
    let (s, r) = (params.s, params.r);
    let ident_i: Vec<usize> = (0..s).collect();
    let ident_ii: Vec<usize> = (0..r).collect();
    let u_idx = fg.role_index(&Role::U).unwrap();
    let mut specs = Vec::new();
    let cyc = |i: usize, d: i64| ((i as i64 - 1 + d).rem_euclid(l as i64) + 1) as usize;
    // θ_j
    for j in 0..s {
        let mut sp = id_spec(fg, format!("theta_{}", j + 1));
        for i in 1..=l {
            set(fg, &mut sp, &Role::X(j, i), &Role::X(j, cyc(i, 1)), i_unit.clone());
            set(fg, &mut sp, &Role::Y(j, i), &Role::Y(j, cyc(i, -1)), i_unit.clone());
        }
        sp.fixed = vec![(u_idx, one.clone())];
        sp.cands = Some(block_cands(fg, params, &ident_i, &ident_ii, true));
        specs.push(sp);
    }
    if l.is_multiple_of(2) {
        for j in 0..s {
            let mut sp = id_spec(fg, format!("vartheta_{}", j + 1));
            for i in 1..=l {
                set(fg, &mut sp, &Role::X(j, i), &Role::Y(j, i), one.clone());
                set(fg, &mut sp, &Role::Y(j, i), &Role::X(j, i), ctx.from_int(-1));
            }
            sp.fixed = vec![(u_idx, one.clone())];
            sp.cands = Some(block_cands(fg, params, &ident_i, &ident_ii, true));
            specs.push(sp);
        }
        for t in 0..r {
            let mut sp = id_spec(fg, format!("varrho_{}", t + 1));
            for i in 1..=l {
                set(fg, &mut sp, &Role::A(t, i), &Role::A(t, cyc(i, (l / 2) as i64)), one.clone());
            }
            sp.fixed = vec![(u_idx, one.clone())];
            sp.cands = Some(block_cands(fg, params, &ident_i, &ident_ii, true));
            specs.push(sp);
        }
    } else {
        let mut sp = id_spec(fg, "vartheta'".into());
        set(fg, &mut sp, &Role::U, &Role::U, ctx.from_int(-1));
        for j in 0..s {
            for i in 1..=l {
                let sg = |e: usize| if e.is_multiple_of(2) { one.clone() } else { ctx.from_int(-1) };
                set(fg, &mut sp, &Role::X(j, i), &Role::Y(j, i), sg(i));
                set(fg, &mut sp, &Role::Y(j, i), &Role::X(j, i), sg(i + 1));
            }
        }
        sp.fixed = vec![(u_idx, ctx.from_int(-1))];
        sp.cands = Some(block_cands(fg, params, &ident_i, &ident_ii, false));
        specs.push(sp);
    }
    // Υ: adjacent transpositions of blocks in the same class
    let mi = class_exp_i(l);
    let mii = class_exp_ii(l);
    for (vals, m, is_i) in [(&params.betas, mi, true), (&params.alphas, mii, false)] {
        let n = vals.len();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for j in 0..n {
            match groups.iter_mut().find(|g| same_class(&vals[g[0]], &vals[j], m)) {
                Some(g) => g.push(j),
                None => groups.push(vec![j]),
            }
        }
        for g in groups {
            for w in g.windows(2) {
                let (a, b) = (w[0], w[1]);
                let name = if is_i { format!("upsilon_I({} {})", a + 1, b + 1) } else { format!("upsilon_II({} {})", a + 1, b + 1) };
                let mut sp = id_spec(fg, name);
                let mut mi_map = ident_i.clone();
                let mut mii_map = ident_ii.clone();
                for i in 1..=l {
                    if is_i {
                        for (x, y) in [(a, b), (b, a)] {
                            set(fg, &mut sp, &Role::X(x, i), &Role::X(y, i), one.clone());
                            set(fg, &mut sp, &Role::Y(x, i), &Role::Y(y, i), one.clone());
                        }
                    } else {
                        for (x, y) in [(a, b), (b, a)] {
                            set(fg, &mut sp, &Role::A(x, i), &Role::A(y, i), one.clone());
                        }
                    }
                }
                if is_i {
                    mi_map.swap(a, b);
                } else {
                    mii_map.swap(a, b);
                }
                sp.fixed = vec![(u_idx, one.clone())];
                sp.cands = Some(block_cands(fg, params, &mi_map, &mii_map, true));
                specs.push(sp);
            }
        }
    }
    // g_p on layered blocks
    let pq = compute_pq(params);
    if pq.p > 1 {
        let adapted = adapted_params(params, &pq);
        if adapted != *params {
            return Err(WeylError::Other("g_p needs layered parameters; use weyl_group, which reorders them".into()));
        }
        let einv = pq.eps.inv().unwrap();
        let mut sp = id_spec(fg, format!("g_{}", pq.p));
        set(fg, &mut sp, &Role::U, &Role::U, einv.clone());
        let si = s / pq.p;
        let sii = r / pq.p;
        let map_i: Vec<usize> = (0..s).map(|j| (j + si) % s).collect();
        let map_ii: Vec<usize> = (0..r).map(|t| (t + sii) % r).collect();
        for i in 1..=l {
            for j in 0..s {
                set(fg, &mut sp, &Role::X(j, i), &Role::X(map_i[j], i), one.clone());
                set(fg, &mut sp, &Role::Y(j, i), &Role::Y(map_i[j], i), one.clone());
            }
            for t in 0..r {
                set(fg, &mut sp, &Role::A(t, i), &Role::A(map_ii[t], i), one.clone());
            }
        }
        sp.fixed = vec![(u_idx, einv)];
        sp.cands = Some(block_cands(fg, params, &map_i, &map_ii, false));
        specs.push(sp);
    }
    // ε permuting classes with a period shorter than its order: no layered split exists,
    // yet u ↦ ε^{-1}u still extends along the class permutation
    let (eps, qs) = class_symmetry(params);
    if qs > pq.q {
        let einv = eps.inv().unwrap();
        let map_i = class_permutation(&params.betas, &eps, mi).unwrap();
        let map_ii = class_permutation(&params.alphas, &eps, mii).unwrap();
        let mut sp = id_spec(fg, format!("h_{}", qs));
        set(fg, &mut sp, &Role::U, &Role::U, einv.clone());
        for i in 1..=l {
            for j in 0..s {
                set(fg, &mut sp, &Role::X(j, i), &Role::X(map_i[j], i), one.clone());
                set(fg, &mut sp, &Role::Y(j, i), &Role::Y(map_i[j], i), one.clone());
            }
            for t in 0..r {
                set(fg, &mut sp, &Role::A(t, i), &Role::A(map_ii[t], i), one.clone());
            }
        }
        sp.fixed = vec![(u_idx, einv)];
        sp.cands = Some(block_cands(fg, params, &map_i, &map_ii, false));
        specs.push(sp);
    }
    Ok(specs)
}

/// Result of a Weyl group computation.
#[derive(Clone, Debug)]
pub struct WeylReport {
    /// grading on which the generators act (layered representatives for twisted gradings)
    pub grading: FineGrading,
    pub generators: Vec<WeylGenerator>,
    pub group: PermGroup,
    /// closed-form order as stated
    pub formula: u64,
    /// with q replaced by the index of the full class symmetry
    pub formula_corrected: u64,
    pub agree: bool,
    pub pq: Option<PQSplit>,
    pub component_names: Vec<String>,
}

/// Names of the components, in sorted support order.
pub fn component_names(fg: &FineGrading) -> Vec<String> {
    let support: Vec<_> = fg.grading.components.keys().cloned().collect();
    let mut names = vec![String::new(); support.len()];
    for (i, d) in fg.degrees.iter().enumerate() {
        let c = support.iter().position(|s| s == d).unwrap();
        names[c] = fg.roles[i].to_string();
    }
    names
}

/// Closure of the standard generators next to the closed-form order.
pub fn weyl_group(fg: &FineGrading) -> Result<WeylReport, WeylError> {
    let (work, pq) = match &fg.kind {
        FineKind::Twisted { lambda, params } => {
            let pq = compute_pq(params);
            let adapted = adapted_params(params, &pq);
            let g = if adapted == *params { fg.clone() } else { fine_twisted(lambda, &adapted)? };
            (g, Some(pq))
        }
        _ => (fg.clone(), None),
    };
    let generators = standard_generators(&work)?;
    let n = work.basis.len();
    let perms: Vec<Perm> = generators.iter().map(|g| g.perm.clone()).collect();
    let group = closure(n, &perms);
    let formula = weyl_order_formula(&work);
    let formula_corrected = match &work.kind {
        FineKind::Twisted { params, .. } => twisted_formula_corrected(params),
        _ => formula,
    };
    Ok(WeylReport {
        formula_corrected,
        component_names: component_names(&work),
        agree: formula == group.order() as u64,
        grading: work,
        generators,
        group,
        formula,
        pq,
    })
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "permutation group of degree {} and order {}", self.degree, self.order())
    }
}

/// Elements of `a` not contained in `b`.
pub fn missing(a: &PermGroup, b: &PermGroup) -> Vec<Perm> {
    let set: HashSet<&Perm> = b.elements.iter().collect();
    a.elements.iter().filter(|x| !set.contains(x)).cloned().collect()
}

/// Map from basis role names to matrix entries, used by reports.
pub fn map_entries(alg: &crate::liealg::Algebra, f: &LinMap) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for (j, img) in f.images.iter().enumerate() {
        out.insert(alg.labels()[j].clone(), crate::gradings::fmt_vec(alg, img));
    }
    out
}
