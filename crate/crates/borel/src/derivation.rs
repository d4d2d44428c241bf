//! Derivation algebras of Borel nilradicals.
//!
//! `der(n)` is computed exactly as the nullspace of the Leibniz constraint
//! system over all basis pairs. Alongside the generic solver, the module
//! constructs the named outer derivations: the `l` grading derivations `D_i`
//! (diagonal, eigenvalue the i-th root coefficient) and the `l` nilpotent
//! derivations `Dt_i` sending `e_{alpha_i}` to the root vector of the
//! reflected highest root and everything else to zero. The generic solve
//! serves as the oracle against which the named set is checked.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{rat, Mat, Rat, SparseKernel, SparseRow, Span};
use crate::nilradical::NilpotentAlgebra;
use crate::roots::RootSystem;

pub const DEFAULT_DIM_BOUND: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("algebra dimension {dim} exceeds the solver bound {bound}; rerun with a larger bound")]
    DimensionBound { dim: usize, bound: usize },
    #[error("named outer derivations are only constructed for rank > 2 or G2 (got rank {rank})")]
    Scope { rank: usize },
}

/// A linear operator on the root-vector basis satisfying the Leibniz
/// identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub mat: Mat,
}

impl Derivation {
    /// Checks `D[x,y] = [Dx,y] + [x,Dy]` on all basis pairs.
    pub fn leibniz_holds(&self, alg: &NilpotentAlgebra) -> bool {
        let table = alg.bracket_table();
        let n = alg.dim;
        for i in 0..n {
            for j in i + 1..n {
                let bij = table.bracket_basis(i, j);
                let lhs = self.mat.mul_vec(&bij);
                let di: Vec<Rat> = (0..n).map(|r| self.mat[(r, i)].clone()).collect();
                let dj: Vec<Rat> = (0..n).map(|r| self.mat[(r, j)].clone()).collect();
                let mut ej = vec![Rat::zero(); n];
                ej[j] = rat(1);
                let mut ei = vec![Rat::zero(); n];
                ei[i] = rat(1);
                let rhs1 = table.bracket(&di, &ej).unwrap();
                let rhs2 = table.bracket(&ei, &dj).unwrap();
                for k in 0..n {
                    if lhs[k] != &rhs1[k] + &rhs2[k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn flat(&self) -> Vec<Rat> {
        let n = self.mat.rows();
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            v.extend(self.mat.row(r).iter().cloned());
        }
        v
    }
}

/// The full derivation algebra with its inner part.
#[derive(Debug)]
pub struct DerivationSpace {
    pub der_basis: Vec<Derivation>,
    pub inner_basis: Vec<Derivation>,
    pub outer_dim: usize,
}

/// The `2l` named outer derivations and their bracket coefficients
/// `[D_j, Dt_k] = d_jk Dt_k`.
#[derive(Debug)]
pub struct NamedOuterSet {
    pub d: Vec<Derivation>,
    pub dtilde: Vec<Derivation>,
    pub d_coeffs: Vec<Vec<Rat>>,
}

/// Solves the Leibniz system with the default dimension bound.
pub fn solve_derivation_space(alg: &NilpotentAlgebra) -> Result<DerivationSpace, DerivationError> {
    solve_derivation_space_bounded(alg, DEFAULT_DIM_BOUND)
}

/// Solves `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]` for the `dim x dim`
/// unknown matrix, assembling the constraints sparsely: one equation block
/// per basis pair, unknown `D_{km}` at flat index `k*dim + m`.
pub fn solve_derivation_space_bounded(
    alg: &NilpotentAlgebra,
    bound: usize,
) -> Result<DerivationSpace, DerivationError> {
    let n = alg.dim;
    if n > bound {
        return Err(DerivationError::DimensionBound { dim: n, bound });
    }
    let table = alg.bracket_table();
    let mut kernel = SparseKernel::new(n * n);
    for i in 0..n {
        for j in i + 1..n {
            let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); n];
            if let Some(terms) = alg.sc.get(&(i, j)) {
                for &(m, c) in terms {
                    for k in 0..n {
                        *rows[k].entry(k * n + m).or_insert_with(Rat::zero) += rat(c);
                    }
                }
            }
            for a in 0..n {
                // -c^k_{aj} D_{ai}
                for (k, c) in table.bracket_basis(a, j).into_iter().enumerate() {
                    if !c.is_zero() {
                        *rows[k].entry(a * n + i).or_insert_with(Rat::zero) -= &c;
                    }
                }
                // -c^k_{ia} D_{aj}
                for (k, c) in table.bracket_basis(i, a).into_iter().enumerate() {
                    if !c.is_zero() {
                        *rows[k].entry(a * n + j).or_insert_with(Rat::zero) -= &c;
                    }
                }
            }
            for row in rows {
                let sparse: SparseRow = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !sparse.is_empty() {
                    kernel.add_row(sparse);
                }
            }
        }
    }
    let der_basis: Vec<Derivation> = kernel
        .kernel_basis()
        .into_iter()
        .map(|flat| {
            let mut m = Mat::zero(n, n);
            for (idx, c) in flat.into_iter().enumerate() {
                if !c.is_zero() {
                    m[(idx / n, idx % n)] = c;
                }
            }
            Derivation { mat: m }
        })
        .collect();

    // ad(e_i) for e_i outside the kernel of ad; the center drops out.
    let inner_basis: Vec<Derivation> = (0..n)
        .map(|i| Derivation { mat: table.ad(i) })
        .filter(|d| !d.mat.is_zero())
        .collect();
    let outer_dim = der_basis.len() - inner_basis.len();
    Ok(DerivationSpace {
        der_basis,
        inner_basis,
        outer_dim,
    })
}

/// The diagonal grading derivations `D_i(e_alpha) = m_i e_alpha`.
pub fn grading_derivations(rs: &RootSystem, alg: &NilpotentAlgebra) -> Vec<Derivation> {
    (0..rs.rank())
        .map(|i| {
            let mut m = Mat::zero(alg.dim, alg.dim);
            for (k, root) in rs.positive_roots.iter().enumerate() {
                m[(k, k)] = rat(root.0[i]);
            }
            Derivation { mat: m }
        })
        .collect()
}

/// The nilpotent outer derivations `Dt_i`: `e_{alpha_i}` maps to the root
/// vector of `S_i(lambda)`, all other basis vectors to zero. Built by
/// direct assignment and then validated by the Leibniz check.
pub fn nilpotent_outer_derivations(
    rs: &RootSystem,
    alg: &NilpotentAlgebra,
) -> Result<Vec<Derivation>, DerivationError> {
    let l = rs.rank();
    if l <= 2 && rs.family.tag != crate::roots::FamilyTag::G2 {
        return Err(DerivationError::Scope { rank: l });
    }
    let out: Vec<Derivation> = (0..l)
        .map(|i| {
            let target = rs.weyl_reflect(&rs.simple(i), &rs.highest).unwrap();
            let src = rs.index_of(&rs.simple(i)).unwrap();
            let dst = rs.index_of(&target).unwrap();
            let mut m = Mat::zero(alg.dim, alg.dim);
            m[(dst, src)] = rat(1);
            Derivation { mat: m }
        })
        .collect();
    for d in &out {
        assert!(d.leibniz_holds(alg), "named nilpotent map fails Leibniz");
    }
    Ok(out)
}

/// Assembles the named outer set and its verified bracket coefficients.
pub fn named_outer_set(
    rs: &RootSystem,
    alg: &NilpotentAlgebra,
) -> Result<NamedOuterSet, DerivationError> {
    let d = grading_derivations(rs, alg);
    let dtilde = nilpotent_outer_derivations(rs, alg)?;
    let d_coeffs = named_bracket_coefficients(rs, &d, &dtilde);
    Ok(NamedOuterSet {
        d,
        dtilde,
        d_coeffs,
    })
}

/// The `l x l` matrix `d_jk` with `[D_j, Dt_k] = d_jk Dt_k`, obtained from
/// explicit matrix commutators and checked against the closed form
/// `lambda_j - (1 + s_k) delta_jk`.
pub fn named_bracket_coefficients(
    rs: &RootSystem,
    d: &[Derivation],
    dtilde: &[Derivation],
) -> Vec<Vec<Rat>> {
    let l = rs.rank();
    let mut out = vec![vec![Rat::zero(); l]; l];
    for j in 0..l {
        for k in 0..l {
            let comm = d[j].mat.commutator(&dtilde[k].mat);
            let expected = rat(rs.highest.0[j] - if j == k { 1 + rs.s[k] } else { 0 });
            let scaled = dtilde[k].mat.scale(&expected);
            assert_eq!(
                comm.sub(&scaled).is_zero(),
                true,
                "commutator [D_{j}, Dt_{k}] must equal d_jk Dt_{k}"
            );
            out[j][k] = expected;
        }
    }
    out
}

/// Report on whether the named set together with inner derivations spans
/// the full solved derivation algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanReport {
    pub pass: bool,
    pub named_independent_mod_inner: bool,
    pub spans: bool,
}

/// Checks `span(inner + {D_i} + {Dt_i}) = der(n)` and that the `2l` named
/// derivations are independent modulo inner ones.
pub fn verify_leger_luks(space: &DerivationSpace, named: &NamedOuterSet) -> SpanReport {
    let n2 = match space.der_basis.first() {
        Some(d) => d.mat.rows() * d.mat.cols(),
        None => {
            return SpanReport {
                pass: named.d.is_empty(),
                named_independent_mod_inner: false,
                spans: named.d.is_empty(),
            }
        }
    };
    let mut span = Span::new(n2);
    for d in &space.inner_basis {
        span.add(&d.flat());
    }
    let mut independent = true;
    for d in named.d.iter().chain(&named.dtilde) {
        if !span.add(&d.flat()) {
            independent = false;
        }
    }
    let spans = span.dim() == space.der_basis.len()
        && space.der_basis.iter().all(|d| span.contains(&d.flat()));
    SpanReport {
        pass: independent && spans,
        named_independent_mod_inner: independent,
        spans,
    }
}

/// Exact nilpotency test: `D^dim = 0`.
pub fn is_nilpotent_operator(d: &Derivation) -> bool {
    d.mat.is_nilpotent()
}

/// JSON report per algebra.
pub fn derivation_report(
    rs: &RootSystem,
    alg: &NilpotentAlgebra,
    bound: usize,
) -> Result<serde_json::Value, DerivationError> {
    let space = solve_derivation_space_bounded(alg, bound)?;
    let named = named_outer_set(rs, alg)?;
    let report = verify_leger_luks(&space, &named);
    let squares_zero = named
        .dtilde
        .iter()
        .flat_map(|a| named.dtilde.iter().map(move |b| (a, b)))
        .all(|(a, b)| a.mat.mul(&b.mat).is_zero());
    Ok(serde_json::json!({
        "dim": space.der_basis.len(),
        "inner_dim": space.inner_basis.len(),
        "outer_dim": space.outer_dim,
        "leger_luks": if report.pass { "pass" } else { "fail" },
        "dtilde_squares_zero": squares_zero,
        "d_matrix": named
            .d_coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilradical::build_nilradical;
    use crate::roots::{Family, FamilyTag};

    fn setup(tag: FamilyTag, rank: usize) -> (RootSystem, NilpotentAlgebra) {
        let rs = RootSystem::build(Family::new(tag, rank).unwrap());
        let alg = build_nilradical(&rs);
        (rs, alg)
    }

    #[test]
    fn a3_outer_dim() {
        let (_, alg) = setup(FamilyTag::A, 3);
        let space = solve_derivation_space(&alg).unwrap();
        assert_eq!(space.outer_dim, 6);
        assert_eq!(space.inner_basis.len(), 5);
        for d in &space.der_basis {
            assert!(d.leibniz_holds(&alg));
        }
    }

    #[test]
    fn f4_outer_dim() {
        let (_, alg) = setup(FamilyTag::F4, 4);
        let space = solve_derivation_space(&alg).unwrap();
        assert_eq!(space.outer_dim, 8);
        assert_eq!(space.inner_basis.len(), 23);
    }

    #[test]
    fn outer_dim_is_twice_rank() {
        for (tag, rank) in [
            (FamilyTag::B, 3),
            (FamilyTag::C, 3),
            (FamilyTag::D, 4),
            (FamilyTag::G2, 2),
        ] {
            let (_, alg) = setup(tag, rank);
            let space = solve_derivation_space(&alg).unwrap();
            assert_eq!(space.outer_dim, 2 * rank, "{tag:?}{rank}");
            assert_eq!(space.inner_basis.len(), alg.dim - 1);
        }
    }

    #[test]
    fn dimension_bound_is_resumable() {
        let (_, alg) = setup(FamilyTag::A, 3);
        let err = solve_derivation_space_bounded(&alg, 4).unwrap_err();
        assert_eq!(err, DerivationError::DimensionBound { dim: 6, bound: 4 });
        assert!(solve_derivation_space_bounded(&alg, 6).is_ok());
    }

    #[test]
    fn grading_derivation_eigenvalues() {
        let (rs, alg) = setup(FamilyTag::A, 2);
        let d = grading_derivations(&rs, &alg);
        let i1 = rs.index_of(&rs.simple(0)).unwrap();
        assert_eq!(d[0].mat[(i1, i1)], rat(1));
        let li = rs.index_of(&rs.highest).unwrap();
        for i in 0..2 {
            assert_eq!(d[i].mat[(li, li)], rat(rs.highest.0[i]));
        }
        // trace(D_1) over A_2 roots a1, a2, a1+a2: 1 + 0 + 1
        let tr: Rat = (0..alg.dim).map(|k| d[0].mat[(k, k)].clone()).sum();
        assert_eq!(tr, rat(2));
        for di in &d {
            assert!(di.leibniz_holds(&alg));
        }
    }

    #[test]
    fn dtilde_structure() {
        let (rs, alg) = setup(FamilyTag::A, 3);
        let dt = nilpotent_outer_derivations(&rs, &alg).unwrap();
        let li = rs.index_of(&rs.highest).unwrap();
        for (i, d) in dt.iter().enumerate() {
            // vanishes on non-simple roots, on e_lambda, and on other simples
            for j in 0..alg.dim {
                let col_nonzero = (0..alg.dim).any(|r| !d.mat[(r, j)].is_zero());
                let is_src = j == rs.index_of(&rs.simple(i)).unwrap();
                assert_eq!(col_nonzero, is_src);
            }
            let lam_col = (0..alg.dim).all(|r| d.mat[(r, li)].is_zero());
            assert!(lam_col);
        }
        // pairwise products vanish
        for a in &dt {
            for b in &dt {
                assert!(a.mat.mul(&b.mat).is_zero());
            }
        }
    }

    #[test]
    fn dtilde_scope_error() {
        let (rs, alg) = setup(FamilyTag::B, 2);
        assert_eq!(
            nilpotent_outer_derivations(&rs, &alg).unwrap_err(),
            DerivationError::Scope { rank: 2 }
        );
        let (rs, alg) = setup(FamilyTag::G2, 2);
        assert!(nilpotent_outer_derivations(&rs, &alg).is_ok());
    }

    #[test]
    fn named_set_spans_der() {
        for (tag, rank) in [(FamilyTag::A, 3), (FamilyTag::B, 3), (FamilyTag::G2, 2)] {
            let (rs, alg) = setup(tag, rank);
            let space = solve_derivation_space(&alg).unwrap();
            let named = named_outer_set(&rs, &alg).unwrap();
            let report = verify_leger_luks(&space, &named);
            assert!(report.pass, "{tag:?}{rank}");
        }
    }

    #[test]
    fn corrupted_dtilde_fails_span_check() {
        let (rs, alg) = setup(FamilyTag::A, 3);
        let space = solve_derivation_space(&alg).unwrap();
        let mut named = named_outer_set(&rs, &alg).unwrap();
        // retarget Dt_1 at the wrong root vector
        let src = rs.index_of(&rs.simple(0)).unwrap();
        let mut m = Mat::zero(alg.dim, alg.dim);
        m[(src, src)] = rat(1);
        m[(0, src)] = rat(1);
        named.dtilde[0] = Derivation { mat: m };
        assert!(!named.dtilde[0].leibniz_holds(&alg) || !verify_leger_luks(&space, &named).pass);
        assert!(!verify_leger_luks(&space, &named).pass);
    }

    #[test]
    fn bracket_coefficient_matrix() {
        let (rs, alg) = setup(FamilyTag::A, 3);
        let d = grading_derivations(&rs, &alg);
        let dt = nilpotent_outer_derivations(&rs, &alg).unwrap();
        let coeffs = named_bracket_coefficients(&rs, &d, &dt);
        // d_11 = lambda_1 - (1 + s_1) = 1 - 2 = -1
        assert_eq!(coeffs[0][0], rat(-1));
        // off-diagonal d_jk = lambda_j
        assert_eq!(coeffs[0][1], rat(rs.highest.0[0]));
        assert_eq!(coeffs[2][0], rat(rs.highest.0[2]));

        let (rs, alg) = setup(FamilyTag::C, 3);
        let d = grading_derivations(&rs, &alg);
        let dt = nilpotent_outer_derivations(&rs, &alg).unwrap();
        let coeffs = named_bracket_coefficients(&rs, &d, &dt);
        // lambda_1 = 2, s_1 = 2
        assert_eq!(coeffs[0][0], rat(-1));
    }

    #[test]
    fn nilpotency_tests() {
        let (rs, alg) = setup(FamilyTag::B, 3);
        for d in nilpotent_outer_derivations(&rs, &alg).unwrap() {
            assert!(is_nilpotent_operator(&d));
        }
        for d in grading_derivations(&rs, &alg) {
            assert!(!is_nilpotent_operator(&d));
        }
        let table = alg.bracket_table();
        for i in 0..alg.dim {
            assert!(is_nilpotent_operator(&Derivation { mat: table.ad(i) }));
        }
    }

    #[test]
    fn grading_commute() {
        let (rs, alg) = setup(FamilyTag::D, 4);
        let d = grading_derivations(&rs, &alg);
        for a in &d {
            for b in &d {
                assert!(a.mat.commutator(&b.mat).is_zero());
            }
        }
    }

    #[test]
    fn report_shape() {
        let (rs, alg) = setup(FamilyTag::A, 3);
        let v = derivation_report(&rs, &alg, DEFAULT_DIM_BOUND).unwrap();
        assert_eq!(v["outer_dim"], 6);
        assert_eq!(v["inner_dim"], 5);
        assert_eq!(v["leger_luks"], "pass");
        assert_eq!(v["dtilde_squares_zero"], true);
        assert_eq!(v["d_matrix"][0][0], "-1");
    }
}
