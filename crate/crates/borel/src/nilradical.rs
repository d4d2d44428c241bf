//! The Borel nilradical as a concrete nilpotent Lie algebra.
//!
//! The algebra is spanned by the positive root vectors `e_alpha` with
//! integer Chevalley structure constants `[e_i, e_j] = N_ij e_k` whenever
//! `root_i + root_j` is again a positive root. Magnitudes come from root
//! strings, `|N_{alpha,beta}| = p + 1`; signs are fixed by the
//! extraspecial-pair convention: the constant of the extraspecial pair of
//! each non-simple positive root is chosen positive and every other constant
//! is derived from those through the standard Jacobi relations, working over
//! the full root set (positive and negative) internally.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{rat, Mat, Rat, Span};
use crate::roots::{Root, RootSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("coefficient vector has length {got}, algebra dimension is {want}")]
    LengthMismatch { want: usize, got: usize },
}

/// Jacobi failure witness: the violating basis triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiWitness(pub usize, pub usize, pub usize);

/// Generic antisymmetric bracket table over exact rationals.
///
/// Structure constants are stored sparsely for ordered pairs `i < j`;
/// antisymmetry is implied. Doubles as the oracle container for solvable
/// extensions, where coefficients are genuinely rational.
#[derive(Debug, Clone)]
pub struct BracketTable {
    pub dim: usize,
    pub entries: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl BracketTable {
    pub fn new(dim: usize) -> Self {
        BracketTable {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, terms: Vec<(usize, Rat)>) {
        assert!(i < j && j < self.dim);
        let terms: Vec<(usize, Rat)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), terms);
        }
    }

    /// `[e_i, e_j]` as a dense coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        if let Some(terms) = self.entries.get(&(a, b)) {
            for (k, c) in terms {
                out[*k] = if sign > 0 { c.clone() } else { -c.clone() };
            }
        }
        out
    }

    /// Bilinear antisymmetric extension to coefficient vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(AlgebraError::LengthMismatch {
                    want: self.dim,
                    got: v.len(),
                });
            }
        }
        let mut out = vec![Rat::zero(); self.dim];
        for (&(i, j), terms) in &self.entries {
            let c = &x[i] * &y[j] - &x[j] * &y[i];
            if !c.is_zero() {
                for (k, n) in terms {
                    out[*k] += &c * n;
                }
            }
        }
        Ok(out)
    }

    /// The adjoint map `ad(e_i)` as a matrix.
    pub fn ad(&self, i: usize) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket_basis(i, j);
            for (k, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    m[(k, j)] = c;
                }
            }
        }
        m
    }

    /// Checks the Jacobi identity on all basis triples; on failure returns
    /// the violating triple.
    pub fn check_jacobi(&self) -> Result<(), JacobiWitness> {
        let basis: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim];
                v[i] = rat(1);
                v
            })
            .collect();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let bij = self.bracket_basis(i, j);
                for k in j + 1..self.dim {
                    let bjk = self.bracket_basis(j, k);
                    let bki = self.bracket_basis(k, i);
                    let t1 = self.bracket(&basis[i], &bjk).unwrap();
                    let t2 = self.bracket(&basis[j], &bki).unwrap();
                    let t3 = self.bracket(&basis[k], &bij).unwrap();
                    let ok = (0..self.dim).all(|m| (&t1[m] + &t2[m] + &t3[m]).is_zero());
                    if !ok {
                        return Err(JacobiWitness(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    LowerCentral,
    Derived,
}

/// A strictly decreasing chain of subspaces ending at zero.
#[derive(Debug, Clone)]
pub struct IdealChain {
    pub kind: ChainKind,
    pub members: Vec<Span>,
}

impl IdealChain {
    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(Span::dim).collect()
    }

    /// Basis-index sets, when every member is a coordinate subspace.
    pub fn index_sets(&self) -> Option<Vec<BTreeSet<usize>>> {
        self.members.iter().map(coordinate_indices).collect()
    }
}

fn coordinate_indices(s: &Span) -> Option<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for v in s.basis() {
        let nz: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        match nz.as_slice() {
            [i] => {
                out.insert(*i);
            }
            _ => return None,
        }
    }
    Some(out)
}

/// The nilradical of the Borel subalgebra of a simple Lie algebra.
#[derive(Debug)]
pub struct NilpotentAlgebra {
    pub rs: RootSystem,
    pub dim: usize,
    /// `(i, j)` with `i < j` -> integer-weighted basis terms.
    pub sc: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
    lcs_cache: OnceLock<IdealChain>,
    ds_cache: OnceLock<IdealChain>,
}

/// Chevalley structure constants for all pairs of positive roots whose sum
/// is again a root, keyed by basis indices `(i, j)` with `i < j`.
pub fn chevalley_constants(rs: &RootSystem) -> BTreeMap<(usize, usize), Vec<(usize, i64)>> {
    let mut chev = Chevalley::new(rs);
    let mut sc = BTreeMap::new();
    for i in 0..rs.dim() {
        for j in i + 1..rs.dim() {
            let sum = add(&rs.positive_roots[i], &rs.positive_roots[j]);
            if let Some(k) = rs.index_of(&sum) {
                let n = chev.constant(&rs.positive_roots[i], &rs.positive_roots[j]);
                assert!(n.is_integer(), "Chevalley constant must be an integer");
                let n = n.to_integer().to_i64().unwrap();
                assert!(n != 0);
                sc.insert((i, j), vec![(k, n)]);
            }
        }
    }
    sc
}

/// Builds `NR(b(g))` with its Chevalley structure constants.
pub fn build_nilradical(rs: &RootSystem) -> NilpotentAlgebra {
    let sc = chevalley_constants(rs);
    NilpotentAlgebra {
        rs: rs.clone(),
        dim: rs.dim(),
        sc,
        lcs_cache: OnceLock::new(),
        ds_cache: OnceLock::new(),
    }
}

impl NilpotentAlgebra {
    pub fn bracket_table(&self) -> BracketTable {
        let mut t = BracketTable::new(self.dim);
        for (&(i, j), terms) in &self.sc {
            t.set(
                i,
                j,
                terms.iter().map(|&(k, n)| (k, rat(n))).collect(),
            );
        }
        t
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        self.bracket_table().bracket(x, y)
    }

    pub fn ad(&self, i: usize) -> Mat {
        self.bracket_table().ad(i)
    }

    pub fn lower_central_series(&self) -> &IdealChain {
        self.lcs_cache.get_or_init(|| self.series(ChainKind::LowerCentral))
    }

    pub fn derived_series(&self) -> &IdealChain {
        self.ds_cache.get_or_init(|| self.series(ChainKind::Derived))
    }

    /// Series by exact span arithmetic (not index games), so the generic
    /// computation can be compared against the height filtration.
    fn series(&self, kind: ChainKind) -> IdealChain {
        let table = self.bracket_table();
        let mut whole = Span::new(self.dim);
        for i in 0..self.dim {
            let mut v = vec![Rat::zero(); self.dim];
            v[i] = rat(1);
            whole.add(&v);
        }
        let mut members = vec![whole.clone()];
        loop {
            let prev = members.last().unwrap();
            let other = match kind {
                ChainKind::LowerCentral => &whole,
                ChainKind::Derived => prev,
            };
            let mut next = Span::new(self.dim);
            for x in prev.basis() {
                for y in other.basis() {
                    let b = table.bracket(x, y).unwrap();
                    if !b.iter().all(Zero::is_zero) {
                        next.add(&b);
                    }
                }
            }
            let done = next.dim() == 0;
            assert!(
                next.dim() < prev.dim(),
                "series must be strictly decreasing"
            );
            members.push(next);
            if done {
                break;
            }
        }
        IdealChain { kind, members }
    }

    /// Center as the common kernel of the stacked adjoint maps.
    pub fn center_space(&self) -> Vec<Vec<Rat>> {
        let table = self.bracket_table();
        let mut stacked = Mat::zero(self.dim * self.dim, self.dim);
        for i in 0..self.dim {
            let adi = table.ad(i);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    if !adi[(r, c)].is_zero() {
                        stacked[(i * self.dim + r, c)] = adi[(r, c)].clone();
                    }
                }
            }
        }
        stacked.nullspace()
    }

    /// Center as a basis-index set. For Borel nilradicals this is exactly
    /// the index of `e_lambda`.
    pub fn center(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for v in self.center_space() {
            let nz: Vec<usize> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i)
                .collect();
            assert_eq!(nz.len(), 1, "center is coordinate-aligned here");
            out.insert(nz[0]);
        }
        out
    }

    pub fn check_jacobi(&self) -> Result<(), JacobiWitness> {
        self.bracket_table().check_jacobi()
    }

    /// JSON dump of the bracket table; basis labels are root coefficient
    /// vectors.
    pub fn to_json(&self) -> serde_json::Value {
        let brackets: Vec<serde_json::Value> = self
            .sc
            .iter()
            .map(|(&(i, j), terms)| {
                serde_json::json!({
                    "i": i,
                    "j": j,
                    "terms": terms.iter().map(|&(k, n)| serde_json::json!({"k": k, "coeff": n})).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "basis": self.rs.positive_roots.iter().map(|r| &r.0).collect::<Vec<_>>(),
            "brackets": brackets,
        })
    }
}

fn add(a: &Root, b: &Root) -> Root {
    Root(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

fn sub(a: &Root, b: &Root) -> Root {
    Root(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
}

fn neg(a: &Root) -> Root {
    Root(a.0.iter().map(|x| -x).collect())
}

fn is_zero_root(a: &Root) -> bool {
    a.0.iter().all(|&x| x == 0)
}

/// Chevalley constant solver over the full root set.
///
/// Signs on the extraspecial pair of each non-simple positive root are
/// chosen positive; all remaining constants follow from the triangle
/// relation (for `alpha + beta + gamma = 0`) and the four-root Jacobi
/// relation, both weighted by squared root lengths.
struct Chevalley<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(Root, Root), Rat>,
}

impl<'a> Chevalley<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        Chevalley {
            rs,
            memo: HashMap::new(),
        }
    }

    fn is_root(&self, r: &Root) -> bool {
        !is_zero_root(r) && self.rs.is_root(r)
    }

    fn norm2(&self, r: &Root) -> Rat {
        self.rs.inner_product(r, r)
    }

    /// Depth of the root string below `beta` in direction `alpha`.
    fn string_down(&self, beta: &Root, alpha: &Root) -> i64 {
        let mut p = 0;
        let mut cur = sub(beta, alpha);
        while self.is_root(&cur) {
            p += 1;
            cur = sub(&cur, alpha);
        }
        p
    }

    /// The extraspecial pair of a non-simple positive root: the special pair
    /// `(alpha, gamma - alpha)` with `alpha` minimal in the additive
    /// (lexicographic) order.
    fn extraspecial(&self, gamma: &Root) -> (Root, Root) {
        self.rs
            .positive_roots
            .iter()
            .filter_map(|alpha| {
                let rest = sub(gamma, alpha);
                if self.is_root(&rest) && rest.is_positive() && *alpha < rest {
                    Some((alpha.clone(), rest))
                } else {
                    None
                }
            })
            .min()
            .expect("non-simple positive root has a special pair")
    }

    fn constant(&mut self, a: &Root, b: &Root) -> Rat {
        if let Some(v) = self.memo.get(&(a.clone(), b.clone())) {
            return v.clone();
        }
        let v = self.compute(a, b);
        self.memo.insert((a.clone(), b.clone()), v.clone());
        v
    }

    fn compute(&mut self, a: &Root, b: &Root) -> Rat {
        let sum = add(a, b);
        if !self.is_root(&sum) {
            return Rat::zero();
        }
        assert!(!is_zero_root(&sum));
        if a > b {
            return -self.constant(b, a);
        }
        // After the swap, a < b in the additive order. A negative root is
        // always below a positive one, so only three sign patterns remain.
        match (a.is_positive(), b.is_positive()) {
            (true, true) => {
                let gamma = sum;
                let (x, y) = self.extraspecial(&gamma);
                if *a == x && *b == y {
                    rat(self.string_down(b, a) + 1)
                } else {
                    // Four-root Jacobi on (x, y, -a, -b).
                    let mut acc = Rat::zero();
                    let ym_a = sub(&y, a);
                    if self.is_root(&ym_a) {
                        acc += self.mixed(&y, a) * self.mixed(&x, b) / self.norm2(&ym_a);
                    }
                    let xm_a = sub(&x, a);
                    if self.is_root(&xm_a) {
                        acc -= self.mixed(&x, a) * self.mixed(&y, b) / self.norm2(&xm_a);
                    }
                    let nxy = self.constant(&x, &y);
                    self.norm2(&gamma) * acc / nxy
                }
            }
            (false, false) => -self.constant(&neg(a), &neg(b)),
            // N_{-d, b} = -N_{d, -b} with d, b positive
            (false, true) => -self.mixed(&neg(a), b),
            (true, false) => unreachable!("positive root exceeds negative in additive order"),
        }
    }

    /// `N_{alpha, -delta}` for distinct positive `alpha`, `delta` whose
    /// difference is a root, reduced to a positive pair via the triangle
    /// relation.
    fn mixed(&mut self, alpha: &Root, delta: &Root) -> Rat {
        let diff = sub(alpha, delta);
        if diff.is_positive() {
            // N_{alpha,-delta} = <g,g>/<alpha,alpha> N_{g,delta}, g = alpha - delta
            self.norm2(&diff) / self.norm2(alpha) * self.constant(&diff, delta)
        } else {
            // N_{alpha,-delta} = <m,m>/<delta,delta> N_{m,alpha}, m = delta - alpha
            let m = neg(&diff);
            self.norm2(&m) / self.norm2(delta) * self.constant(&m, alpha)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{Family, FamilyTag};
    use num_traits::Signed;

    fn alg(tag: FamilyTag, rank: usize) -> NilpotentAlgebra {
        build_nilradical(&RootSystem::build(Family::new(tag, rank).unwrap()))
    }

    #[test]
    fn a2_constant_magnitude() {
        let rs = RootSystem::build(Family::new(FamilyTag::A, 2).unwrap());
        let sc = chevalley_constants(&rs);
        // alpha_2 - alpha_1 is not a root, so p = 0 and |N| = 1
        let n = &sc[&(0, 1)];
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].1.abs(), 1);
    }

    #[test]
    fn g2_constant_magnitude() {
        let rs = RootSystem::build(Family::new(FamilyTag::G2, 2).unwrap());
        let a = build_nilradical(&rs);
        // [e_{a2}, e_{a1+a2}]: the string a1+a2 - k a2 hits a1, so p = 1
        let i = rs.index_of(&Root(vec![0, 1])).unwrap();
        let j = rs.index_of(&Root(vec![1, 1])).unwrap();
        let (lo, hi) = (i.min(j), i.max(j));
        let terms = &a.sc[&(lo, hi)];
        assert_eq!(terms[0].1.abs(), 2);
    }

    #[test]
    fn magnitudes_match_root_strings() {
        for (tag, rank) in [
            (FamilyTag::A, 3),
            (FamilyTag::B, 3),
            (FamilyTag::C, 3),
            (FamilyTag::G2, 2),
            (FamilyTag::F4, 4),
        ] {
            let rs = RootSystem::build(Family::new(tag, rank).unwrap());
            let sc = chevalley_constants(&rs);
            let chev = Chevalley::new(&rs);
            for (&(i, j), terms) in &sc {
                let p = chev.string_down(&rs.positive_roots[j], &rs.positive_roots[i]);
                assert_eq!(terms[0].1.abs(), p + 1, "pair ({i},{j}) in {tag:?}{rank}");
            }
        }
    }

    #[test]
    fn grading_respected() {
        let a = alg(FamilyTag::B, 3);
        for (&(i, j), terms) in &a.sc {
            let sum = add(&a.rs.positive_roots[i], &a.rs.positive_roots[j]);
            for &(k, _) in terms {
                assert_eq!(a.rs.positive_roots[k], sum);
            }
        }
    }

    #[test]
    fn dimensions_from_tables() {
        assert_eq!(alg(FamilyTag::A, 3).dim, 6);
        assert_eq!(alg(FamilyTag::F4, 4).dim, 24);
        assert_eq!(alg(FamilyTag::E6, 6).dim, 36);
    }

    #[test]
    fn jacobi_passes_for_all_families() {
        for (tag, rank) in [
            (FamilyTag::A, 4),
            (FamilyTag::B, 4),
            (FamilyTag::C, 4),
            (FamilyTag::D, 4),
            (FamilyTag::G2, 2),
            (FamilyTag::F4, 4),
        ] {
            let a = alg(tag, rank);
            assert_eq!(a.check_jacobi(), Ok(()), "{tag:?}{rank}");
        }
    }

    #[test]
    fn jacobi_detects_corruption() {
        let a = alg(FamilyTag::A, 3);
        let mut t = a.bracket_table();
        // corrupt N_{alpha_1, alpha_2}
        let i = a.rs.index_of(&Root(vec![1, 0, 0])).unwrap();
        let j = a.rs.index_of(&Root(vec![0, 1, 0])).unwrap();
        let k = a.rs.index_of(&Root(vec![1, 1, 0])).unwrap();
        t.set(i.min(j), i.max(j), vec![(k, rat(7))]);
        assert!(t.check_jacobi().is_err());
    }

    #[test]
    fn jacobi_trivial_cases() {
        assert!(BracketTable::new(1).check_jacobi().is_ok());
        // abelian algebra
        assert!(BracketTable::new(4).check_jacobi().is_ok());
    }

    #[test]
    fn bracket_properties() {
        let a = alg(FamilyTag::A, 2);
        let x = vec![rat(1), rat(2), rat(-1)];
        assert!(a.bracket(&x, &x).unwrap().iter().all(Zero::is_zero));
        assert!(a.bracket(&x, &[rat(1)]).is_err());

        // e_lambda is central
        let mut lam = vec![Rat::zero(); a.dim];
        let li = a.rs.index_of(&a.rs.highest).unwrap();
        lam[li] = rat(1);
        for i in 0..a.dim {
            let mut e = vec![Rat::zero(); a.dim];
            e[i] = rat(1);
            assert!(a.bracket(&lam, &e).unwrap().iter().all(Zero::is_zero));
        }

        // [e_{a1}, e_{a2}] = +- e_{a1+a2}
        let b = a
            .bracket(
                &[rat(1), rat(0), rat(0)],
                &[rat(0), rat(1), rat(0)],
            )
            .unwrap();
        let k = a.rs.index_of(&Root(vec![1, 1])).unwrap();
        assert_eq!(b[k].abs(), rat(1));
    }

    #[test]
    fn lower_central_series_dims() {
        let a = alg(FamilyTag::A, 3);
        assert_eq!(a.lower_central_series().dims(), vec![6, 3, 1, 0]);
        let b2 = alg(FamilyTag::B, 2);
        assert_eq!(b2.lower_central_series().dims(), vec![4, 2, 1, 0]);
    }

    #[test]
    fn series_matches_height_filtration() {
        for (tag, rank) in [(FamilyTag::A, 3), (FamilyTag::B, 3), (FamilyTag::G2, 2)] {
            let a = alg(tag, rank);
            let chain = a.lower_central_series();
            let sets = chain.index_sets().expect("coordinate subspaces");
            for (m, set) in sets.iter().enumerate() {
                let expected: BTreeSet<usize> = a
                    .rs
                    .height_filtration((m + 1) as i64)
                    .iter()
                    .map(|r| a.rs.index_of(r).unwrap())
                    .collect();
                assert_eq!(*set, expected, "{tag:?}{rank} member {m}");
            }
        }
    }

    #[test]
    fn derived_series_dims() {
        let a = alg(FamilyTag::A, 3);
        assert_eq!(a.derived_series().dims(), vec![6, 3, 0]);
        // first derived member equals second lower-central member
        let d1 = &a.derived_series().members[1];
        let g2 = &a.lower_central_series().members[1];
        assert_eq!(d1.dim(), g2.dim());
        for v in d1.basis() {
            assert!(g2.contains(v));
        }
    }

    #[test]
    fn center_is_highest_root_vector() {
        let a = alg(FamilyTag::A, 3);
        let li = a.rs.index_of(&a.rs.highest).unwrap();
        assert_eq!(a.center(), BTreeSet::from([li]));
        let g = alg(FamilyTag::G2, 2);
        let li = g.rs.index_of(&Root(vec![2, 3])).unwrap();
        assert_eq!(g.center(), BTreeSet::from([li]));
        // last nonzero lower-central member is the center
        let chain = g.lower_central_series();
        let last = &chain.members[chain.members.len() - 2];
        assert_eq!(last.dim(), 1);
        assert!(last.contains(&{
            let mut v = vec![Rat::zero(); g.dim];
            v[li] = rat(1);
            v
        }));
    }

    #[test]
    fn abelian_center_is_everything() {
        let t = BracketTable::new(3);
        // wrap in a fake algebra path: nullspace of zero ad maps is everything
        let mut stacked = Mat::zero(9, 3);
        for i in 0..3 {
            let adi = t.ad(i);
            for r in 0..3 {
                for c in 0..3 {
                    stacked[(i * 3 + r, c)] = adi[(r, c)].clone();
                }
            }
        }
        assert_eq!(stacked.nullspace().len(), 3);
    }

    #[test]
    fn simple_roots_generate() {
        let a = alg(FamilyTag::C, 3);
        let table = a.bracket_table();
        let mut gen = Span::new(a.dim);
        let mut frontier: Vec<Vec<Rat>> = (0..a.rs.rank())
            .map(|i| {
                let mut v = vec![Rat::zero(); a.dim];
                v[a.rs.index_of(&a.rs.simple(i)).unwrap()] = rat(1);
                v
            })
            .collect();
        for v in &frontier {
            gen.add(v);
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for i in 0..a.dim {
                    let mut e = vec![Rat::zero(); a.dim];
                    e[i] = rat(1);
                    let b = table.bracket(&e, x).unwrap();
                    if !b.iter().all(Zero::is_zero) && gen.add(&b) {
                        next.push(b);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(gen.dim(), a.dim);
    }

    #[test]
    fn json_dump_shape() {
        let a = alg(FamilyTag::A, 2);
        let v = a.to_json();
        assert_eq!(v["dim"], 3);
        assert_eq!(v["brackets"].as_array().unwrap().len(), 1);
    }
}
