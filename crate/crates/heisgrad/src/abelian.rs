//! Finitely generated abelian groups via Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot parse group '{0}'")]
    Parse(String),
    #[error("relation {0} has the wrong number of entries")]
    BadRelation(usize),
    #[error("coordinate overflow")]
    Overflow,
}

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | …, d_i ≥ 0.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map(|r| r.len()).unwrap_or(0));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

/// Smith normal form of an m×n integer matrix.
///
/// The pivot is the entry of least absolute value in the remaining block,
/// ties broken by row-major position.
pub fn smith_normal_form(a: &IntMatrix, ncols: usize) -> Snf {
    let m = a.len();
    let n = ncols;
    let mut d: IntMatrix = a.clone();
    for r in d.iter_mut() {
        assert_eq!(r.len(), n, "ragged matrix");
    }
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // choose pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if d[i][j].abs() < d[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let (pi, pj) = match best {
            None => break,
            Some(p) => p,
        };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = false;
        // clear column t
        for i in t + 1..m {
            if d[i][t].is_zero() {
                continue;
            }
            let q = d[i][t].div_floor(&d[t][t]);
            for j in 0..n {
                let x = &q * &d[t][j];
                d[i][j] -= x;
            }
            for j in 0..m {
                let x = &q * &u[t][j];
                u[i][j] -= x;
            }
            if !d[i][t].is_zero() {
                dirty = true;
            }
        }
        // clear row t
        for j in t + 1..n {
            if d[t][j].is_zero() {
                continue;
            }
            let q = d[t][j].div_floor(&d[t][t]);
            for i in 0..m {
                let x = &q * &d[i][t];
                d[i][j] -= x;
            }
            for i in 0..n {
                let x = &q * &v[i][t];
                v[i][j] -= x;
            }
            if !d[t][j].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // divisibility of the remaining block
        let mut bad_row = None;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if !d[i][j].is_zero() && !(&d[i][j] % &d[t][t]).is_zero() {
                    bad_row = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad_row {
            for j in 0..n {
                let x = d[i][j].clone();
                d[t][j] += x;
            }
            for j in 0..m {
                let x = u[i][j].clone();
                u[t][j] += x;
            }
            continue;
        }
        if d[t][t].is_negative() {
            for j in 0..n {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    Snf { u, d, v }
}

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

struct GroupData {
    id: u64,
    rank: usize,
    torsion: Vec<u64>,
    /// images of presentation generators, if built from a presentation
    gen_images: Vec<Vec<i64>>,
}

/// A finitely generated abelian group Z^r × Z_{d1} × … × Z_{dt} with d1 | … | dt, di ≥ 2.
#[derive(Clone)]
pub struct AbGroup(Arc<GroupData>);

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.0.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        let t = &self.0.torsion;
        while i < t.len() {
            let mut j = i;
            while j < t.len() && t[j] == t[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z_{}", t[i]));
            } else {
                parts.push(format!("Z_{}^{}", t[i], j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl AbGroup {
    fn make(rank: usize, torsion: Vec<u64>, gen_images: Vec<Vec<i64>>) -> AbGroup {
        AbGroup(Arc::new(GroupData {
            id: NEXT_GROUP_ID.fetch_add(1, AtomicOrdering::Relaxed),
            rank,
            torsion,
            gen_images,
        }))
    }

    /// Group with invariant factors already in canonical order.
    pub fn from_invariants(rank: usize, torsion: &[u64]) -> AbGroup {
        let rels: Vec<Vec<i64>> = torsion
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0i64; rank + torsion.len()];
                r[rank + i] = d as i64;
                r
            })
            .collect();
        canonicalize(rank + torsion.len(), &rels).expect("valid relations")
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup::from_invariants(rank, &[])
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.0.torsion
    }

    pub fn ncoords(&self) -> usize {
        self.0.rank + self.0.torsion.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.0.torsion.is_empty()
    }

    /// Same invariants (isomorphic groups).
    pub fn is_isomorphic(&self, other: &AbGroup) -> bool {
        self.0.rank == other.0.rank && self.0.torsion == other.0.torsion
    }

    pub fn same(&self, other: &AbGroup) -> bool {
        self.0.id == other.0.id
    }

    /// Images of the presentation generators (empty if not built from a presentation).
    pub fn gen_images(&self) -> Vec<GroupElt> {
        self.0.gen_images.iter().map(|c| self.elt_unchecked(c.clone())).collect()
    }

    fn elt_unchecked(&self, mut coords: Vec<i64>) -> GroupElt {
        for (i, &d) in self.0.torsion.iter().enumerate() {
            let k = self.0.rank + i;
            coords[k] = coords[k].rem_euclid(d as i64);
        }
        GroupElt { group: self.clone(), coords }
    }

    /// Element from canonical coordinates (free part then torsion part, torsion reduced).
    pub fn elt(&self, coords: &[i64]) -> Result<GroupElt, GroupError> {
        if coords.len() != self.ncoords() {
            return Err(GroupError::WrongLength { expected: self.ncoords(), got: coords.len() });
        }
        Ok(self.elt_unchecked(coords.to_vec()))
    }

    pub fn zero(&self) -> GroupElt {
        self.elt_unchecked(vec![0; self.ncoords()])
    }

    /// Canonical generators (free ones first).
    pub fn generators(&self) -> Vec<GroupElt> {
        (0..self.ncoords())
            .map(|i| {
                let mut c = vec![0; self.ncoords()];
                c[i] = 1;
                self.elt_unchecked(c)
            })
            .collect()
    }

    /// Order of the i-th canonical generator (0 for infinite).
    pub fn generator_order(&self, i: usize) -> u64 {
        if i < self.0.rank {
            0
        } else {
            self.0.torsion[i - self.0.rank]
        }
    }

    /// Image of an integer combination of presentation generators.
    pub fn image(&self, raw: &[i64]) -> Result<GroupElt, GroupError> {
        let g = &self.0.gen_images;
        if raw.len() != g.len() {
            return Err(GroupError::WrongLength { expected: g.len(), got: raw.len() });
        }
        let mut c = vec![0i64; self.ncoords()];
        for (a, img) in raw.iter().zip(g) {
            for (x, y) in c.iter_mut().zip(img) {
                *x = x.checked_add(a.checked_mul(*y).ok_or(GroupError::Overflow)?).ok_or(GroupError::Overflow)?;
            }
        }
        Ok(self.elt_unchecked(c))
    }

    /// Parses the canonical text form, e.g. `Z^2 x Z_2 x Z_4` or `0`.
    pub fn parse(s: &str) -> Result<AbGroup, GroupError> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(AbGroup::from_invariants(0, &[]));
        }
        let mut rank = 0usize;
        let mut tors: Vec<u64> = Vec::new();
        for part in s.split(['x', '×']) {
            let p = part.trim();
            let err = || GroupError::Parse(s.to_string());
            let (base, exp) = match p.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| err())?),
                None => (p, 1),
            };
            if base == "Z" {
                rank += exp;
            } else if let Some(d) = base.strip_prefix("Z_") {
                let d = d.trim_matches(|c| c == '{' || c == '}').parse::<u64>().map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                for _ in 0..exp {
                    tors.push(d);
                }
            } else {
                return Err(err());
            }
        }
        // normalise arbitrary cyclic factors
        let n = rank + tors.len();
        let rels: Vec<Vec<i64>> = tors
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0i64; n];
                r[rank + i] = d as i64;
                r
            })
            .collect();
        canonicalize(n, &rels)
    }
}

/// Canonical form of ⟨x_1..x_n | relations⟩; relation rows are coefficient vectors.
pub fn canonicalize(n_gens: usize, relations: &[Vec<i64>]) -> Result<AbGroup, GroupError> {
    for (i, r) in relations.iter().enumerate() {
        if r.len() != n_gens {
            return Err(GroupError::BadRelation(i));
        }
    }
    let a = int_matrix(relations);
    let snf = smith_normal_form(&a, n_gens);
    let diag = snf.diagonal();
    // classify columns of D
    let mut free_cols = Vec::new();
    let mut tors_cols = Vec::new();
    let mut tors = Vec::new();
    for j in 0..n_gens {
        let dj = if j < diag.len() { diag[j].clone() } else { BigInt::zero() };
        if dj.is_zero() {
            free_cols.push(j);
        } else if !dj.is_one() {
            tors_cols.push(j);
            tors.push(dj.to_u64().ok_or(GroupError::Overflow)?);
        }
    }
    let rank = free_cols.len();
    // generator x_i maps to row i of V
    let mut images = Vec::with_capacity(n_gens);
    for i in 0..n_gens {
        let mut c = Vec::with_capacity(rank + tors.len());
        for &j in &free_cols {
            c.push(snf.v[i][j].to_i64().ok_or(GroupError::Overflow)?);
        }
        for (k, &j) in tors_cols.iter().enumerate() {
            let m = BigInt::from(tors[k]);
            c.push(snf.v[i][j].mod_floor(&m).to_i64().unwrap());
        }
        images.push(c);
    }
    Ok(AbGroup::make(rank, tors, images))
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(v: &IntMatrix) -> Option<IntMatrix> {
    use num_rational::BigRational;
    let n = v.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = v[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &a[c][k] * &f;
                    a[r][k] = &a[r][k] - t;
                }
            }
        }
    }
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            if !x.is_integer() {
                return None;
            }
            out[i][j] = x.to_integer();
        }
    }
    Some(out)
}

/// Subgroup generated by finitely many elements, in canonical form.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: AbGroup,
    /// image in the ambient group of each canonical generator
    pub embed: Vec<GroupElt>,
    /// each given element as an element of the subgroup
    pub proj: Vec<GroupElt>,
}

impl Subgroup {
    /// Ambient element of a subgroup element.
    pub fn push(&self, h: &GroupElt) -> GroupElt {
        let mut acc = self.embed.first().map(|e| e.group().zero()).unwrap_or_else(|| AbGroup::free(0).zero());
        for (c, e) in h.coords().iter().zip(&self.embed) {
            acc = acc.add(&e.times(*c)).expect("same group");
        }
        acc
    }
}

pub fn subgroup_generated(g: &AbGroup, elts: &[GroupElt]) -> Result<Subgroup, GroupError> {
    let k = elts.len();
    let c = g.ncoords();
    let r = g.rank();
    // rows: generators, then torsion relations of the ambient coordinates
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for e in elts {
        if !e.group().same(g) {
            return Err(GroupError::GroupMismatch);
        }
        rows.push(e.coords().to_vec());
    }
    for (i, &d) in g.torsion().iter().enumerate() {
        let mut row = vec![0i64; c];
        row[r + i] = d as i64;
        rows.push(row);
    }
    let rels: Vec<Vec<i64>> = if c == 0 || rows.is_empty() {
        (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect()
    } else {
        let m = int_matrix(&rows);
        let snf = smith_normal_form(&m, c);
        let rank = snf.diagonal().iter().filter(|x| !x.is_zero()).count();
        (rank..rows.len())
            .map(|i| snf.u[i][..k].iter().map(|x| x.to_i64().ok_or(GroupError::Overflow)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?
    };
    let rels: Vec<Vec<i64>> = rels.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let h = canonicalize(k, &rels)?;
    // canonical generator j is column j of V among the kept columns; invert V for a section
    let snf = smith_normal_form(&int_matrix(&rels), k);
    let diag = snf.diagonal();
    let kept: Vec<usize> = (0..k)
        .filter(|&j| {
            let dj = if j < diag.len() { diag[j].clone() } else { BigInt::zero() };
            !dj.is_one()
        })
        .collect();
    let vinv = unimodular_inverse(&snf.v).ok_or(GroupError::Overflow)?;
    let mut kept_sorted: Vec<usize> = kept.iter().copied().filter(|&j| j >= diag.len() || diag[j].is_zero()).collect();
    kept_sorted.extend(kept.iter().copied().filter(|&j| j < diag.len() && !diag[j].is_zero()));
    let mut embed = Vec::with_capacity(kept_sorted.len());
    for &j in &kept_sorted {
        let mut acc = g.zero();
        for (i, e) in elts.iter().enumerate() {
            let x = vinv[j][i].to_i64().ok_or(GroupError::Overflow)?;
            acc = acc.add(&e.times(x))?;
        }
        embed.push(acc);
    }
    let proj = h.gen_images();
    Ok(Subgroup { group: h, embed, proj })
}

/// Element of an [`AbGroup`]; arithmetic across different groups is an error.
#[derive(Clone)]
pub struct GroupElt {
    group: AbGroup,
    coords: Vec<i64>,
}

impl PartialEq for GroupElt {
    fn eq(&self, other: &Self) -> bool {
        self.group.same(&other.group) && self.coords == other.coords
    }
}
impl Eq for GroupElt {}

impl Hash for GroupElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state)
    }
}

impl PartialOrd for GroupElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by group id, then coordinates.
impl Ord for GroupElt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group
            .id()
            .cmp(&other.group.id())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.group.rank();
        let free: Vec<String> = self.coords[..r].iter().map(|x| x.to_string()).collect();
        let tors: Vec<String> = self.coords[r..].iter().map(|x| format!("{x}")).collect();
        match (free.is_empty(), tors.is_empty()) {
            (true, true) => write!(f, "()"),
            (false, true) => write!(f, "({})", free.join(",")),
            (true, false) => write!(f, "(;{})", tors.join(",")),
            (false, false) => write!(f, "({};{})", free.join(","), tors.join(",")),
        }
    }
}

impl GroupElt {
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    fn check(&self, o: &GroupElt) -> Result<(), GroupError> {
        if self.group.same(&o.group) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch)
        }
    }

    pub fn add(&self, o: &GroupElt) -> Result<GroupElt, GroupError> {
        self.check(o)?;
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        Ok(self.group.elt_unchecked(c))
    }

    pub fn sub(&self, o: &GroupElt) -> Result<GroupElt, GroupError> {
        self.check(o)?;
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        Ok(self.group.elt_unchecked(c))
    }

    pub fn neg(&self) -> GroupElt {
        self.group.elt_unchecked(self.coords.iter().map(|a| -a).collect())
    }

    pub fn times(&self, k: i64) -> GroupElt {
        self.group.elt_unchecked(self.coords.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    /// Order of the element, None when infinite.
    pub fn order(&self) -> Option<u64> {
        let r = self.group.rank();
        if self.coords[..r].iter().any(|&x| x != 0) {
            return None;
        }
        let mut o = 1u64;
        for (i, &d) in self.group.torsion().iter().enumerate() {
            let x = self.coords[r + i] as u64;
            let oi = d / x.gcd(&d);
            o = o.lcm(&oi);
        }
        Some(o)
    }

    /// Same element re-expressed in another group with the same invariants.
    pub fn transport(&self, g: &AbGroup) -> Result<GroupElt, GroupError> {
        if !self.group.is_isomorphic(g) {
            return Err(GroupError::GroupMismatch);
        }
        Ok(g.elt_unchecked(self.coords.clone()))
    }
}

/// Serializable view of a group element: canonical coordinates.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EltCoords(pub Vec<i64>);

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[Vec<i64>], n: usize) -> Vec<i64> {
        let s = smith_normal_form(&int_matrix(rows), n);
        s.diagonal().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_small_examples() {
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(diag_of(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(diag_of(&[vec![0, 0], vec![0, 0]], 2), vec![0, 0]);
    }

    #[test]
    fn snf_identity_holds() {
        let a = int_matrix(&[vec![4, 6, 2], vec![2, -2, 8]]);
        let s = smith_normal_form(&a, 3);
        assert_eq!(mat_mul(&mat_mul(&s.u, &a), &s.v), s.d);
    }

    #[test]
    fn presentation_z_times_z2() {
        // generators (u, e1, z): 2u = 0, 2e1 = z + u
        let g = canonicalize(3, &[vec![2, 0, 0], vec![-1, 2, -1]]).unwrap();
        assert_eq!(g.to_string(), "Z x Z_2");
        let imgs = g.gen_images();
        assert_eq!(imgs[0].order(), Some(2));
        assert_eq!(imgs[1].order(), None);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(AbGroup::parse("Z^2 x Z_4 x Z_2").unwrap().to_string(), "Z^2 x Z_2 x Z_4");
        assert_eq!(AbGroup::parse("Z_2 x Z_3").unwrap().to_string(), "Z_6");
        assert_eq!(AbGroup::parse("Z_2 x Z_2 x Z").unwrap().to_string(), "Z x Z_2^2");
        assert!(AbGroup::parse("Q").is_err());
    }

    #[test]
    fn cross_group_arithmetic_fails() {
        let a = AbGroup::parse("Z").unwrap();
        let b = AbGroup::parse("Z").unwrap();
        assert_eq!(a.zero().add(&b.zero()), Err(GroupError::GroupMismatch));
    }
}

#[cfg(test)]
mod subgroup_tests {
    use super::*;

    #[test]
    fn subgroup_of_z4_x_z() {
        let g = AbGroup::parse("Z x Z_4").unwrap();
        let a = g.elt(&[0, 2]).unwrap();
        let b = g.elt(&[2, 0]).unwrap();
        let s = subgroup_generated(&g, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.group.to_string(), "Z x Z_2");
        assert_eq!(s.push(&s.proj[0]), a);
        assert_eq!(s.push(&s.proj[1]), b);
        let t = subgroup_generated(&g, &[g.zero()]).unwrap();
        assert_eq!(t.group.to_string(), "0");
    }
}
