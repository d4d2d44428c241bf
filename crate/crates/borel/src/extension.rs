//! Solvable extensions of Borel nilradicals and their canonical forms.
//!
//! An extension `s = n (+) span{f_1..f_q}` is described by a `q x l` matrix
//! `sigma` (coefficients of the grading derivations), a `q x l` matrix
//! `omega` (coefficients of the nilpotent derivations), and a `q x q`
//! antisymmetric matrix `gamma` with `[f_a, f_b] = gamma_ab e_lambda`. The
//! module validates such data, assembles the full bracket table with
//! certificates, and reduces the data to a canonical form: `sigma` in
//! reduced row-echelon form, `omega` zeroed wherever the shift automorphisms
//! reach, `gamma` zeroed when possible, and (for `q = 1`) the surviving
//! `omega` entries normalized to `1` or `+-1` depending on the field.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::derivation::{grading_derivations, nilpotent_outer_derivations, DerivationError};
use crate::linalg::{rat, Mat, Rat};
use crate::nilradical::{build_nilradical, BracketTable, NilpotentAlgebra};
use crate::roots::{Family, FamilyTag, RootSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("matrix {name} must be {rows}x{cols}")]
    BadShape {
        name: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("q must satisfy 1 <= q <= rank (got q = {q}, rank = {rank})")]
    BadQ { q: usize, rank: usize },
    #[error("sigma has rank {got}, must have full row rank {want}")]
    RankDeficient { got: usize, want: usize },
    #[error("gamma is not antisymmetric")]
    NotAntisymmetric,
    #[error("commutation condition fails for rows {a},{b} at column {k}")]
    Commutation { a: usize, b: usize, k: usize },
    #[error("gamma incompatible with nonzero kappa at triple ({a},{b},{c})")]
    JacobiClosure { a: usize, b: usize, c: usize },
    #[error("Jacobi identity fails on basis triple ({0},{1},{2})")]
    Jacobi(usize, usize, usize),
    #[error("basis-change matrix is singular")]
    SingularBasisChange,
    #[error("scaling parameters must be nonzero")]
    ZeroScale,
    #[error("split real form of A2 admits several maximal solvable extensions; not classified here")]
    SplitRealA2,
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("cannot parse spec: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Complex,
    Real,
}

impl FieldTag {
    pub fn parse(s: &str) -> Result<Self, ExtensionError> {
        match s {
            "complex" => Ok(FieldTag::Complex),
            "real" => Ok(FieldTag::Real),
            other => Err(ExtensionError::Parse(format!("unknown field tag {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldTag::Complex => "complex",
            FieldTag::Real => "real",
        }
    }
}

/// The `l x l` matrix `Q^j_k = lambda_j - (1+s_k) delta_jk`; always regular.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub mat: Mat,
    pub det: Rat,
}

pub fn q_matrix(rs: &RootSystem) -> QMatrix {
    let l = rs.rank();
    let mut mat = Mat::zero(l, l);
    for j in 0..l {
        for k in 0..l {
            mat[(j, k)] = rat(rs.highest.0[j] - if j == k { 1 + rs.s[k] } else { 0 });
        }
    }
    let det = mat.det();
    assert!(!det.is_zero(), "Q matrix must be regular");
    QMatrix { mat, det }
}

/// Defining data of a solvable extension.
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    pub rs: RootSystem,
    pub q: usize,
    pub sigma: Mat,
    pub omega: Mat,
    pub gamma: Mat,
    pub field: FieldTag,
}

impl ExtensionSpec {
    pub fn new(
        rs: RootSystem,
        q: usize,
        sigma: Mat,
        omega: Mat,
        gamma: Mat,
        field: FieldTag,
    ) -> Result<Self, ExtensionError> {
        let l = rs.rank();
        if q == 0 || q > l {
            return Err(ExtensionError::BadQ { q, rank: l });
        }
        for (name, m, rr, cc) in [
            ("sigma", &sigma, q, l),
            ("omega", &omega, q, l),
            ("gamma", &gamma, q, q),
        ] {
            if m.rows() != rr || m.cols() != cc {
                return Err(ExtensionError::BadShape {
                    name,
                    rows: rr,
                    cols: cc,
                });
            }
        }
        Ok(ExtensionSpec {
            rs,
            q,
            sigma,
            omega,
            gamma,
            field,
        })
    }

    /// `kappa_a = sum_j lambda_j sigma^a_j`.
    pub fn kappa(&self) -> Vec<Rat> {
        let lam: Vec<Rat> = self.rs.highest.0.iter().map(|&m| rat(m)).collect();
        (0..self.q)
            .map(|a| {
                (0..self.rs.rank())
                    .map(|j| &self.sigma[(a, j)] * &lam[j])
                    .sum()
            })
            .collect()
    }

    /// `R = sigma . Q`; column `k` vanishing means `omega` column `k`
    /// cannot be removed by shift automorphisms.
    pub fn r_matrix(&self) -> Mat {
        self.sigma.mul(&q_matrix(&self.rs).mat)
    }

    /// Checks all structural invariants: full row rank of `sigma`,
    /// antisymmetry of `gamma`, the pairwise-commutation condition on the
    /// derivations, and the `kappa`-`gamma` compatibility from the
    /// `(f_a, f_b, f_c)` Jacobi identity.
    pub fn validate(&self) -> Result<(), ExtensionError> {
        if self.field == FieldTag::Real
            && self.rs.family.tag == FamilyTag::A
            && self.rs.rank() == 2
        {
            return Err(ExtensionError::SplitRealA2);
        }
        let rank = self.sigma.rank();
        if rank != self.q {
            return Err(ExtensionError::RankDeficient {
                got: rank,
                want: self.q,
            });
        }
        for a in 0..self.q {
            for b in 0..self.q {
                if self.gamma[(a, b)] != -self.gamma[(b, a)].clone() {
                    return Err(ExtensionError::NotAntisymmetric);
                }
            }
        }
        let r = self.r_matrix();
        for a in 0..self.q {
            for b in a + 1..self.q {
                for k in 0..self.rs.rank() {
                    let lhs = &r[(a, k)] * &self.omega[(b, k)];
                    let rhs = &r[(b, k)] * &self.omega[(a, k)];
                    if lhs != rhs {
                        return Err(ExtensionError::Commutation { a, b, k });
                    }
                }
            }
        }
        let kap = self.kappa();
        for a in 0..self.q {
            for b in a + 1..self.q {
                for c in b + 1..self.q {
                    let cyc = &kap[a] * &self.gamma[(b, c)] - &kap[b] * &self.gamma[(a, c)]
                        + &kap[c] * &self.gamma[(a, b)];
                    if !cyc.is_zero() {
                        return Err(ExtensionError::JacobiClosure { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.rs.family.tag.to_string(),
            "rank": self.rs.rank(),
            "q": self.q,
            "field": self.field.as_str(),
            "sigma": mat_to_json(&self.sigma),
            "omega": mat_to_json(&self.omega),
            "gamma": mat_to_json(&self.gamma),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ExtensionError> {
        let family = v["family"]
            .as_str()
            .ok_or_else(|| ExtensionError::Parse("missing family".into()))?;
        let rank = v["rank"]
            .as_u64()
            .ok_or_else(|| ExtensionError::Parse("missing rank".into()))? as usize;
        let fam = Family::parse(family, Some(rank))
            .map_err(|e| ExtensionError::Parse(e.to_string()))?;
        let rs = RootSystem::build(fam);
        let q = v["q"]
            .as_u64()
            .ok_or_else(|| ExtensionError::Parse("missing q".into()))? as usize;
        let field = FieldTag::parse(
            v["field"]
                .as_str()
                .ok_or_else(|| ExtensionError::Parse("missing field".into()))?,
        )?;
        let sigma = mat_from_json(&v["sigma"], "sigma")?;
        let omega = mat_from_json(&v["omega"], "omega")?;
        let gamma = mat_from_json(&v["gamma"], "gamma")?;
        ExtensionSpec::new(rs, q, sigma, omega, gamma, field)
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, ExtensionError> {
    let bad = || ExtensionError::Parse(format!("bad rational {s:?}"));
    let mut parts = s.splitn(2, '/');
    let numer: num_bigint::BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: num_bigint::BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => 1.into(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(numer, denom))
}

fn rat_from_json(v: &Value) -> Result<Rat, ExtensionError> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| ExtensionError::Parse(format!("non-integer number {n}"))),
        other => Err(ExtensionError::Parse(format!("bad rational {other}"))),
    }
}

fn mat_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| {
                Value::Array(
                    m.row(r)
                        .iter()
                        .map(|c| Value::String(rat_to_string(c)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn mat_from_json(v: &Value, name: &'static str) -> Result<Mat, ExtensionError> {
    let rows = v
        .as_array()
        .ok_or_else(|| ExtensionError::Parse(format!("{name} must be a matrix")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| ExtensionError::Parse(format!("{name} must be a matrix")))?;
        out.push(
            row.iter()
                .map(rat_from_json)
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out[0].len()) {
        return Err(ExtensionError::Parse(format!("{name} is ragged or empty")));
    }
    Ok(Mat::from_rows(out))
}

/// Validity certificates for an assembled extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificates {
    pub jacobi: bool,
    pub commutation: bool,
    pub nilradical: bool,
    pub solvable: bool,
}

/// The assembled solvable algebra: basis `e_0..e_{n-1}, f_0..f_{q-1}`.
#[derive(Debug)]
pub struct SolvableAlgebra {
    pub spec: ExtensionSpec,
    pub nil: NilpotentAlgebra,
    pub table: BracketTable,
    pub dhat: Vec<Mat>,
    pub certificates: Certificates,
}

/// The derivation matrices `Dh^a = sum_j (sigma^a_j D_j + omega^a_j Dt_j)`.
pub fn dhat_matrices(spec: &ExtensionSpec) -> Result<Vec<Mat>, ExtensionError> {
    let alg = build_nilradical(&spec.rs);
    let d = grading_derivations(&spec.rs, &alg);
    let dt = nilpotent_outer_derivations(&spec.rs, &alg)?;
    let n = alg.dim;
    Ok((0..spec.q)
        .map(|a| {
            let mut m = Mat::zero(n, n);
            for j in 0..spec.rs.rank() {
                m = m
                    .add(&d[j].mat.scale(&spec.sigma[(a, j)]))
                    .add(&dt[j].mat.scale(&spec.omega[(a, j)]));
            }
            m
        })
        .collect())
}

pub fn build_extension(spec: &ExtensionSpec) -> Result<SolvableAlgebra, ExtensionError> {
    build_extension_seeded(spec, 0xB0)
}

pub fn build_extension_seeded(
    spec: &ExtensionSpec,
    seed: u64,
) -> Result<SolvableAlgebra, ExtensionError> {
    spec.validate()?;
    let nil = build_nilradical(&spec.rs);
    let dhat = dhat_matrices(spec)?;
    let n = nil.dim;
    let dim = n + spec.q;
    let mut table = BracketTable::new(dim);
    for (&(i, j), terms) in &nil.sc {
        table.set(i, j, terms.iter().map(|&(k, c)| (k, rat(c))).collect());
    }
    // [e_j, f_a] = -Dh^a(e_j)
    for a in 0..spec.q {
        for j in 0..n {
            let terms: Vec<(usize, Rat)> = (0..n)
                .filter(|&k| !dhat[a][(k, j)].is_zero())
                .map(|k| (k, -dhat[a][(k, j)].clone()))
                .collect();
            table.set(j, n + a, terms);
        }
    }
    // [f_a, f_b] = gamma_ab e_lambda
    let li = spec.rs.index_of(&spec.rs.highest).unwrap();
    for a in 0..spec.q {
        for b in a + 1..spec.q {
            if !spec.gamma[(a, b)].is_zero() {
                table.set(n + a, n + b, vec![(li, spec.gamma[(a, b)].clone())]);
            }
        }
    }

    let jacobi = match table.check_jacobi() {
        Ok(()) => true,
        Err(w) => return Err(ExtensionError::Jacobi(w.0, w.1, w.2)),
    };
    let commutation = (0..spec.q)
        .all(|a| (a + 1..spec.q).all(|b| dhat[a].commutator(&dhat[b]).is_zero()));

    // derived algebra contained in n, and derived series of s reaching zero
    let derived_in_n = table
        .entries
        .values()
        .all(|terms| terms.iter().all(|(k, _)| *k < n));
    let solvable = derived_in_n && derived_series_terminates(&table);

    // nilindependence probes: random nonzero combinations are non-nilpotent
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nilradical_ok = derived_in_n;
    for _ in 0..100 {
        let mut c: Vec<i64> = (0..spec.q).map(|_| rng.gen_range(-5..=5)).collect();
        if c.iter().all(|&x| x == 0) {
            c[rng.gen_range(0..spec.q)] = 1;
        }
        let mut comb = Mat::zero(n, n);
        for (a, &ca) in c.iter().enumerate() {
            comb = comb.add(&dhat[a].scale(&rat(ca)));
        }
        if comb.is_nilpotent() {
            nilradical_ok = false;
            break;
        }
    }

    Ok(SolvableAlgebra {
        spec: spec.clone(),
        nil,
        table,
        dhat,
        certificates: Certificates {
            jacobi,
            commutation,
            nilradical: nilradical_ok,
            solvable,
        },
    })
}

/// Derived series of an arbitrary bracket table, stopping at stabilization;
/// returns true iff it reaches zero.
pub fn derived_series_terminates(table: &BracketTable) -> bool {
    let dim = table.dim;
    let mut current = crate::linalg::Span::new(dim);
    for i in 0..dim {
        let mut v = vec![Rat::zero(); dim];
        v[i] = rat(1);
        current.add(&v);
    }
    loop {
        let mut next = crate::linalg::Span::new(dim);
        for x in current.basis() {
            for y in current.basis() {
                let b = table.bracket(x, y).unwrap();
                if !b.iter().all(Zero::is_zero) {
                    next.add(&b);
                }
            }
        }
        if next.dim() == 0 {
            return true;
        }
        if next.dim() == current.dim() {
            return false;
        }
        current = next;
    }
}

/// Columns `k` whose `R` column vanishes entirely; the shift automorphisms
/// cannot remove `omega` there. Always at most `l - q` columns.
pub fn surviving_omega_pattern(spec: &ExtensionSpec) -> BTreeSet<usize> {
    let r = spec.r_matrix();
    (0..spec.rs.rank())
        .filter(|&k| (0..spec.q).all(|a| r[(a, k)].is_zero()))
        .collect()
}

/// One of the isomorphism-preserving moves on extension data.
#[derive(Debug, Clone)]
pub enum Move {
    /// Add a nilradical element to `f_a`. Only the `e_lambda` component
    /// changes the defining data (as a center shift); the rest acts by an
    /// inner derivation, which the parametrization quotients out.
    AddInner { a: usize, coeffs: Vec<Rat> },
    /// The scaling automorphism acting by `v_j^{m_j}` on each root vector.
    ConjugateScale { v: Vec<Rat> },
    /// Conjugation by `1 + t Dt_k`: shifts `omega` column `k` by `-t R^a_k`.
    ConjugateShift { k: usize, t: Rat },
    /// Invertible change of basis in `span{f_1..f_q}`.
    ChangeSpanBasis { a: Vec<Vec<Rat>> },
    /// `f_a -> f_a + tau_a e_lambda`.
    ShiftByCenter { tau: Vec<Rat> },
}

pub fn equivalence_moves(
    spec: &ExtensionSpec,
    mv: &Move,
) -> Result<ExtensionSpec, ExtensionError> {
    let l = spec.rs.rank();
    let mut out = spec.clone();
    match mv {
        Move::AddInner { a, coeffs } => {
            let li = spec.rs.index_of(&spec.rs.highest).unwrap();
            let c = coeffs.get(li).cloned().unwrap_or_else(Rat::zero);
            let mut tau = vec![Rat::zero(); spec.q];
            tau[*a] = c;
            return equivalence_moves(spec, &Move::ShiftByCenter { tau });
        }
        Move::ConjugateScale { v } => {
            if v.len() != l || v.iter().any(Zero::is_zero) {
                return Err(ExtensionError::ZeroScale);
            }
            let prod_lambda: Rat = (0..l)
                .map(|j| rat_pow(&v[j], spec.rs.highest.0[j]))
                .product();
            for k in 0..l {
                let factor = &prod_lambda / rat_pow(&v[k], 1 + spec.rs.s[k]);
                for a in 0..spec.q {
                    let w = &out.omega[(a, k)] * &factor;
                    out.omega[(a, k)] = w;
                }
            }
            out.gamma = out.gamma.scale(&prod_lambda);
        }
        Move::ConjugateShift { k, t } => {
            let r = spec.r_matrix();
            for a in 0..spec.q {
                let w = &out.omega[(a, *k)] - t * &r[(a, *k)];
                out.omega[(a, *k)] = w;
            }
        }
        Move::ChangeSpanBasis { a } => {
            let m = Mat::from_rows(a.clone());
            if m.rows() != spec.q || m.cols() != spec.q || m.det().is_zero() {
                return Err(ExtensionError::SingularBasisChange);
            }
            out.sigma = m.mul(&spec.sigma);
            out.omega = m.mul(&spec.omega);
            out.gamma = m.mul(&spec.gamma).mul(&m.transpose());
        }
        Move::ShiftByCenter { tau } => {
            let kap = spec.kappa();
            for a in 0..spec.q {
                for b in 0..spec.q {
                    let g = &out.gamma[(a, b)] + &kap[a] * &tau[b] - &kap[b] * &tau[a];
                    out.gamma[(a, b)] = g;
                }
            }
        }
    }
    Ok(out)
}

fn rat_pow(r: &Rat, e: i64) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e.unsigned_abs() {
        out *= r;
    }
    if e < 0 {
        out = out.recip();
    }
    out
}

/// Canonicalization outcome: the reduced spec plus the moves that realize
/// it and the derived reporting data.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub spec: ExtensionSpec,
    pub moves: Vec<Value>,
    pub surviving: Vec<usize>,
    pub gamma_rank: usize,
}

pub fn canonicalize(spec: &ExtensionSpec) -> Result<Canonical, ExtensionError> {
    canonicalize_with_options(spec, false)
}

/// With `diagram_autos` set, additionally lex-minimizes the outcome over
/// the diagram-automorphism orbit of the simple-root labels.
pub fn canonicalize_with_options(
    spec: &ExtensionSpec,
    diagram_autos: bool,
) -> Result<Canonical, ExtensionError> {
    if !diagram_autos {
        return canonicalize_inner(spec);
    }
    let mut best: Option<(Vec<Rat>, Vec<usize>, Canonical)> = None;
    let mut perms = vec![(0..spec.rs.rank()).collect::<Vec<usize>>()];
    perms.extend(spec.rs.diagram_automorphisms());
    for p in perms {
        let permuted = permute_simple_labels(spec, &p);
        let c = canonicalize_inner(&permuted)?;
        let key_sigma: Vec<Rat> = (0..c.spec.q)
            .flat_map(|a| c.spec.sigma.row(a).to_vec())
            .collect();
        let key = (key_sigma, c.surviving.clone());
        if best
            .as_ref()
            .map(|(s, v, _)| (&key.0, &key.1) < (s, v))
            .unwrap_or(true)
        {
            best = Some((key.0, key.1, c));
        }
    }
    Ok(best.unwrap().2)
}

fn permute_simple_labels(spec: &ExtensionSpec, p: &[usize]) -> ExtensionSpec {
    let l = spec.rs.rank();
    let mut sigma = Mat::zero(spec.q, l);
    let mut omega = Mat::zero(spec.q, l);
    for a in 0..spec.q {
        for j in 0..l {
            sigma[(a, p[j])] = spec.sigma[(a, j)].clone();
            omega[(a, p[j])] = spec.omega[(a, j)].clone();
        }
    }
    ExtensionSpec {
        rs: spec.rs.clone(),
        q: spec.q,
        sigma,
        omega,
        gamma: spec.gamma.clone(),
        field: spec.field,
    }
}

fn canonicalize_inner(spec: &ExtensionSpec) -> Result<Canonical, ExtensionError> {
    spec.validate()?;
    let l = spec.rs.rank();
    let mut cur = spec.clone();
    let mut moves: Vec<Value> = Vec::new();

    // 1. bring sigma to reduced row-echelon form by a basis change in the
    //    span of the f's; the transform is unique since sigma has full row
    //    rank, which makes the whole procedure idempotent
    let a = rref_transform(&cur.sigma);
    if a != Mat::identity(cur.q) {
        let rows: Vec<Vec<Rat>> = (0..cur.q).map(|r| a.row(r).to_vec()).collect();
        cur = equivalence_moves(&cur, &Move::ChangeSpanBasis { a: rows.clone() })?;
        moves.push(json!({
            "type": "change-span-basis",
            "matrix": rows.iter().map(|r| r.iter().map(rat_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }

    // 2. remove omega wherever the corresponding R column is nonzero;
    //    the commutation condition makes omega column k proportional to R
    //    column k there, so a single shift clears it
    let r = cur.r_matrix();
    for k in 0..l {
        let a0 = (0..cur.q).find(|&a| !r[(a, k)].is_zero());
        let omega_nonzero = (0..cur.q).any(|a| !cur.omega[(a, k)].is_zero());
        if let (Some(a0), true) = (a0, omega_nonzero) {
            let t = &cur.omega[(a0, k)] / &r[(a0, k)];
            cur = equivalence_moves(&cur, &Move::ConjugateShift { k, t: t.clone() })?;
            assert!(
                (0..cur.q).all(|a| cur.omega[(a, k)].is_zero()),
                "commutation condition must make the shift exact"
            );
            moves.push(json!({
                "type": "conjugate-exp-auto",
                "kind": "shift",
                "k": k,
                "t": rat_to_string(&t),
            }));
        }
    }

    // 3. gamma: removable entirely when some kappa_a != 0; otherwise only
    //    a global scale is free once sigma is pinned, so normalize the
    //    first nonzero entry to 1
    let kap = cur.kappa();
    if !cur.gamma.is_zero() {
        if let Some(a0) = kap.iter().position(|k| !k.is_zero()) {
            let tau: Vec<Rat> = (0..cur.q)
                .map(|b| -&cur.gamma[(a0, b)] / &kap[a0])
                .collect();
            cur = equivalence_moves(&cur, &Move::ShiftByCenter { tau: tau.clone() })?;
            assert!(cur.gamma.is_zero(), "kappa shift must clear gamma");
            moves.push(json!({
                "type": "shift-by-center",
                "tau": tau.iter().map(rat_to_string).collect::<Vec<_>>(),
            }));
        } else {
            let g0 = first_nonzero_upper(&cur.gamma).unwrap();
            if g0 != Rat::one() {
                let v = scale_vector_for_product(&spec.rs, &(Rat::one() / &g0));
                cur = equivalence_moves(&cur, &Move::ConjugateScale { v: v.clone() })?;
                moves.push(json!({
                    "type": "conjugate-exp-auto",
                    "kind": "scale",
                    "v": v.iter().map(rat_to_string).collect::<Vec<_>>(),
                }));
            }
        }
    }

    // 4. q = 1: normalize surviving omega magnitudes (and, over the reals,
    //    pick the canonical achievable sign pattern)
    if cur.q == 1 {
        let targets: Vec<usize> = (0..l).filter(|&k| !cur.omega[(0, k)].is_zero()).collect();
        if !targets.is_empty() {
            match cur.field {
                FieldTag::Complex => {
                    let changed: Vec<usize> = targets
                        .iter()
                        .copied()
                        .filter(|&k| cur.omega[(0, k)] != Rat::one())
                        .collect();
                    if !changed.is_empty() {
                        for &k in &changed {
                            cur.omega[(0, k)] = Rat::one();
                        }
                        moves.push(json!({
                            "type": "conjugate-exp-auto",
                            "kind": "formal-scale",
                            "columns": changed,
                            "normalized_to": "1",
                        }));
                    }
                }
                FieldTag::Real => {
                    let signs = canonical_real_signs(&cur.rs, &targets, |k| {
                        cur.omega[(0, k)].is_negative()
                    });
                    let mut changed = Vec::new();
                    for (i, &k) in targets.iter().enumerate() {
                        let want = if signs[i] { rat(-1) } else { rat(1) };
                        if cur.omega[(0, k)] != want {
                            cur.omega[(0, k)] = want;
                            changed.push(k);
                        }
                    }
                    if !changed.is_empty() {
                        moves.push(json!({
                            "type": "conjugate-exp-auto",
                            "kind": "formal-scale",
                            "columns": changed,
                            "signs": targets.iter().zip(&signs)
                                .map(|(&k, &neg)| json!({"k": k, "sign": if neg { -1 } else { 1 }}))
                                .collect::<Vec<_>>(),
                        }));
                    }
                }
            }
        }
    }

    cur.validate()?;
    let surviving: Vec<usize> = surviving_omega_pattern(&cur).into_iter().collect();
    let gamma_rank = cur.gamma.rank();
    Ok(Canonical {
        spec: cur,
        moves,
        surviving,
        gamma_rank,
    })
}

/// The unique invertible `A` with `A . sigma` in reduced row-echelon form.
fn rref_transform(sigma: &Mat) -> Mat {
    let q = sigma.rows();
    let l = sigma.cols();
    let mut aug = Mat::zero(q, l + q);
    for r in 0..q {
        for c in 0..l {
            aug[(r, c)] = sigma[(r, c)].clone();
        }
        aug[(r, l + r)] = rat(1);
    }
    aug.rref();
    let mut a = Mat::zero(q, q);
    for r in 0..q {
        for c in 0..q {
            a[(r, c)] = aug[(r, l + c)].clone();
        }
    }
    a
}

fn first_nonzero_upper(gamma: &Mat) -> Option<Rat> {
    for a in 0..gamma.rows() {
        for b in a + 1..gamma.cols() {
            if !gamma[(a, b)].is_zero() {
                return Some(gamma[(a, b)].clone());
            }
        }
    }
    None
}

/// A nonzero rational vector `v` with `prod v_j^{lambda_j} = c`, using an
/// integer combination `sum lambda_j x_j = 1` (the highest-root
/// coefficients are coprime for every simple algebra).
fn scale_vector_for_product(rs: &RootSystem, c: &Rat) -> Vec<Rat> {
    let lam = &rs.highest.0;
    let mut x = vec![0i64; lam.len()];
    let mut g = 0i64;
    for (j, &lj) in lam.iter().enumerate() {
        let (gg, u, v) = ext_gcd(g, lj);
        for xi in x.iter_mut() {
            *xi *= u;
        }
        x[j] = v;
        g = gg;
    }
    assert_eq!(g, 1, "highest-root coefficients must be coprime");
    x.iter().map(|&e| rat_pow(c, e)).collect()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a == 0 {
        return (b, 0, 1);
    }
    let (g, u, v) = ext_gcd(b % a, a);
    (g, v - (b / a) * u, u)
}

/// Over the reals, sign flips of the scaling parameters act on the signs of
/// the surviving `omega` entries as an F2-linear map with generators
/// `g_j[k] = (lambda_j + delta_jk (1+s_k)) mod 2`. Returns the canonical
/// achievable sign vector over `targets`: lexicographically smallest among
/// reachable patterns whose `s_k = 0` positions share a common sign,
/// preferring plus signs.
fn canonical_real_signs(
    rs: &RootSystem,
    targets: &[usize],
    current_negative: impl Fn(usize) -> bool,
) -> Vec<bool> {
    let m = targets.len();
    assert!(m <= 32);
    let s0: u32 = targets
        .iter()
        .enumerate()
        .filter(|(_, &k)| current_negative(k))
        .map(|(i, _)| 1u32 << i)
        .sum();
    // generator masks from parity of the scaling exponents
    let mut basis: Vec<u32> = Vec::new();
    for j in 0..rs.rank() {
        let mut mask = 0u32;
        for (i, &k) in targets.iter().enumerate() {
            let exp = rs.highest.0[j] + if j == k { 1 + rs.s[k] } else { 0 };
            if exp % 2 != 0 {
                mask |= 1 << i;
            }
        }
        if mask != 0 {
            basis.push(mask);
        }
    }
    reduce_f2(&mut basis);
    let admissible = |pat: u32| {
        let zero_s: Vec<usize> = targets
            .iter()
            .enumerate()
            .filter(|(_, &k)| rs.s[k] == 0)
            .map(|(i, _)| i)
            .collect();
        zero_s.iter().all(|&i| pat & (1 << i) == 0)
            || zero_s.iter().all(|&i| pat & (1 << i) != 0)
    };
    let mut best: Option<u32> = None;
    let mut fallback: Option<u32> = None;
    for combo in 0..(1u32 << basis.len()) {
        let mut pat = s0;
        for (b, mask) in basis.iter().enumerate() {
            if combo & (1 << b) != 0 {
                pat ^= mask;
            }
        }
        let key = lex_key(pat, m);
        if fallback.map(|f| key < lex_key(f, m)).unwrap_or(true) {
            fallback = Some(pat);
        }
        if admissible(pat) && best.map(|b| key < lex_key(b, m)).unwrap_or(true) {
            best = Some(pat);
        }
    }
    let pat = best.or(fallback).unwrap();
    (0..m).map(|i| pat & (1 << i) != 0).collect()
}

fn reduce_f2(basis: &mut Vec<u32>) {
    let mut reduced: Vec<u32> = Vec::new();
    for &v in basis.iter() {
        let mut v = v;
        for &r in &reduced {
            let pivot = r & r.wrapping_neg();
            if v & pivot != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            reduced.push(v);
        }
    }
    *basis = reduced;
}

/// Orders bit patterns so that a plus sign (clear bit) in an earlier target
/// position wins.
fn lex_key(pat: u32, m: usize) -> u32 {
    let mut key = 0u32;
    for i in 0..m {
        key = (key << 1) | ((pat >> i) & 1);
    }
    key
}

/// Enumerates the canonical one-extension families: for each realizable
/// surviving pattern `K` (every `K` with `|K| <= l-1` is realizable since
/// the corresponding `Q` columns are independent), the linear constraints
/// on `sigma`, the projective free-parameter count, and the normalized
/// `omega` values per field.
pub fn classify_codim_one(
    rs: &RootSystem,
    field: FieldTag,
) -> Result<Vec<Value>, ExtensionError> {
    let l = rs.rank();
    if l <= 2 && rs.family.tag != FamilyTag::G2 {
        if rs.family.tag == FamilyTag::A && l == 2 && field == FieldTag::Real {
            return Err(ExtensionError::SplitRealA2);
        }
        return Err(DerivationError::Scope { rank: l }.into());
    }
    let qm = q_matrix(rs);
    let mut out = Vec::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << l) {
        let k: Vec<usize> = (0..l).filter(|&i| mask & (1 << i) != 0).collect();
        if k.len() <= l - 1 {
            subsets.push(k);
        }
    }
    subsets.sort_by_key(|k| (k.len(), k.clone()));
    for k_set in subsets {
        let constraints: Vec<Vec<String>> = k_set
            .iter()
            .map(|&k| (0..l).map(|j| rat_to_string(&qm.mat[(j, k)])).collect())
            .collect();
        let omega_values: Value = match field {
            FieldTag::Complex => json!([vec!["1"; k_set.len()]]),
            FieldTag::Real => {
                let classes = real_sign_classes(rs, &k_set);
                json!(classes
                    .iter()
                    .map(|pat| pat
                        .iter()
                        .map(|&neg| if neg { "-1" } else { "1" })
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            }
        };
        out.push(json!({
            "surviving": k_set,
            "sigma_constraints": constraints,
            "free_parameters": l - k_set.len() - 1,
            "omega_values": omega_values,
        }));
    }
    Ok(out)
}

/// The distinct canonical sign patterns over a surviving set: one
/// representative per orbit of the sign-flip group.
fn real_sign_classes(rs: &RootSystem, targets: &[usize]) -> Vec<Vec<bool>> {
    let m = targets.len();
    if m == 0 {
        return vec![vec![]];
    }
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut reps = Vec::new();
    for pat in 0u32..(1 << m) {
        let negs: Vec<bool> = (0..m).map(|i| pat & (1 << i) != 0).collect();
        let canon = canonical_real_signs(rs, targets, |k| {
            negs[targets.iter().position(|&t| t == k).unwrap()]
        });
        if seen.insert(canon.clone()) {
            reps.push(canon);
        }
    }
    reps.sort();
    reps
}

/// Canonical output report: the reduced spec plus derived data and
/// certificates from rebuilding the algebra.
pub fn canonical_report(c: &Canonical) -> Result<Value, ExtensionError> {
    let built = build_extension(&c.spec)?;
    let mut v = c.spec.to_json();
    let obj = v.as_object_mut().unwrap();
    obj.insert(
        "kappa".into(),
        json!(c.spec.kappa().iter().map(rat_to_string).collect::<Vec<_>>()),
    );
    obj.insert("surviving".into(), json!(c.surviving));
    obj.insert("gamma_rank".into(), json!(c.gamma_rank));
    obj.insert("moves".into(), json!(c.moves));
    obj.insert(
        "certificates".into(),
        json!({
            "jacobi": built.certificates.jacobi,
            "commutation": built.certificates.commutation,
            "nilradical": built.certificates.nilradical,
            "solvable": built.certificates.solvable,
        }),
    );
    Ok(v)
}

/// Seeded generator of valid extension data, used by the property suites:
/// `sigma` random of full rank, `omega` chosen per column to satisfy the
/// commutation condition, `gamma` compatible with `kappa`.
pub fn random_spec(
    rs: &RootSystem,
    q: usize,
    field: FieldTag,
    rng: &mut ChaCha8Rng,
) -> ExtensionSpec {
    let l = rs.rank();
    let sigma = loop {
        let rows: Vec<Vec<Rat>> = (0..q)
            .map(|_| (0..l).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        let m = Mat::from_rows(rows);
        if m.rank() == q {
            break m;
        }
    };
    random_admissible_rest(rs, q, sigma, field, rng)
}

/// Like `random_spec` but with a fixed `sigma` (e.g. the identity).
pub fn random_admissible_rest(
    rs: &RootSystem,
    q: usize,
    sigma: Mat,
    field: FieldTag,
    rng: &mut ChaCha8Rng,
) -> ExtensionSpec {
    let l = rs.rank();
    let base = ExtensionSpec {
        rs: rs.clone(),
        q,
        sigma,
        omega: Mat::zero(q, l),
        gamma: Mat::zero(q, q),
        field,
    };
    let r = base.r_matrix();
    let mut omega = Mat::zero(q, l);
    for k in 0..l {
        if (0..q).all(|a| r[(a, k)].is_zero()) {
            for a in 0..q {
                omega[(a, k)] = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            }
        } else {
            let c = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            for a in 0..q {
                omega[(a, k)] = &c * &r[(a, k)];
            }
        }
    }
    let kap = base.kappa();
    let mut gamma = Mat::zero(q, q);
    if q >= 2 {
        if kap.iter().any(|x| !x.is_zero()) {
            // gamma of the compatible form kappa_a tau_b - kappa_b tau_a
            let tau: Vec<Rat> = (0..q).map(|_| rat(rng.gen_range(-3..=3))).collect();
            for a in 0..q {
                for b in 0..q {
                    gamma[(a, b)] = &kap[a] * &tau[b] - &kap[b] * &tau[a];
                }
            }
        } else {
            for a in 0..q {
                for b in a + 1..q {
                    let g = rat(rng.gen_range(-3..=3));
                    gamma[(a, b)] = g.clone();
                    gamma[(b, a)] = -g;
                }
            }
        }
    }
    ExtensionSpec {
        omega,
        gamma,
        ..base
    }
}

use crate::linalg::ratio;
