//! Minimal triangular structures on `H(D)`.
//!
//! A structure choice `T = (φ, (M_g))` determines a Hopf isomorphism
//! `f_T: H(D)^{*cop} → H(D)` with `α ↦ φ(α)` and `P_x ↦ M_g(x)`, and hence
//! an R-matrix `R_T = Σ_i b_i ⊗ f_T(b_i*)`. This module builds both,
//! verifies triangularity and the Drinfeld-element identities, and runs the
//! converse direction: recovering `(D, T)` from a minimal triangular
//! pointed Hopf algebra with known generators.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abgroup::{enumerate_phi, Character, CharacterIso, FiniteAbelianGroup, GroupElement, SkewForm};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::hd::{build_hd, check_relations, validate_datum, Datum, Generators, HdAlgebra};
use crate::hopf::{Element, HopfStructure, LinearMap, Tensor3, TensorElement};
use crate::linalg::{Echelon, Matrix, Subspace, Vector};
use crate::report::VerdictMap;

/// Largest dimension for which the triple-tensor identities are evaluated.
pub const DEFAULT_HEXAGON_BOUND: usize = 32;

/// Attempts per matrix before sampling gives up on invertibility.
const MAX_REDRAWS: usize = 256;

/// `T = (φ, (M_g))`. `m_maps[g]` has rows indexed by the basis of
/// `V_{g^{-1}}` and columns by the dual basis of `V_g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawChoice", try_from = "RawChoice")]
pub struct StructureChoice {
    pub phi: CharacterIso,
    pub m_maps: BTreeMap<GroupElement, Vec<Vec<CycloNumber>>>,
}

#[derive(Serialize, Deserialize)]
struct RawChoice {
    phi: Vec<GroupElement>,
    m_maps: Vec<RawMap>,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    element: GroupElement,
    matrix: Vec<Vec<CycloNumber>>,
}

impl From<StructureChoice> for RawChoice {
    fn from(t: StructureChoice) -> Self {
        RawChoice {
            phi: t.phi.images,
            m_maps: t
                .m_maps
                .into_iter()
                .map(|(element, matrix)| RawMap { element, matrix })
                .collect(),
        }
    }
}

impl TryFrom<RawChoice> for StructureChoice {
    type Error = Error;

    fn try_from(raw: RawChoice) -> Result<Self> {
        let mut m_maps = BTreeMap::new();
        for m in raw.m_maps {
            if m_maps.insert(m.element.clone(), m.matrix).is_some() {
                return Err(Error::Parse(format!("duplicate matrix for {}", m.element)));
            }
        }
        Ok(StructureChoice {
            phi: CharacterIso { images: raw.phi },
            m_maps,
        })
    }
}

/// The default coefficient pool `{±1, ±ζ_4, ±2, ±1/2}`.
pub fn default_pool() -> Vec<CycloNumber> {
    let half = CycloNumber::from_fraction(1, 2).expect("nonzero denominator");
    let i = CycloNumber::root_of_unity(4, 1);
    vec![
        CycloNumber::one(),
        CycloNumber::from_integer(-1),
        i.clone(),
        -&i,
        CycloNumber::from_integer(2),
        CycloNumber::from_integer(-2),
        half.clone(),
        -&half,
    ]
}

/// A draw from `S(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkSample {
    /// `S(k) = ∅` because `n_g ≠ n_{g^{-1}}` at `element`.
    Empty { element: GroupElement },
    Maps(BTreeMap<GroupElement, Vec<Vec<CycloNumber>>>),
}

fn is_invertible(m: &[Vec<CycloNumber>]) -> bool {
    let n = m.len();
    Matrix::from_rows(m.to_vec()).is_ok_and(|m| m.cols() == n && m.rank() == n)
}

fn transpose(m: &[Vec<CycloNumber>]) -> Vec<Vec<CycloNumber>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn draw<R: Rng>(rng: &mut R, pool: &[CycloNumber], n: usize, symmetric: bool) -> Result<Vec<Vec<CycloNumber>>> {
    for _ in 0..MAX_REDRAWS {
        let mut m = vec![vec![CycloNumber::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    m[i][j] = m[j][i].clone();
                } else {
                    m[i][j] = pool[rng.gen_range(0..pool.len())].clone();
                }
            }
        }
        if is_invertible(&m) {
            return Ok(m);
        }
    }
    Err(Error::Sampling(format!(
        "no invertible {n}×{n} matrix after {MAX_REDRAWS} draws from a pool of {}",
        pool.len()
    )))
}

fn sample_sk_with<R: Rng>(datum: &Datum, rng: &mut R, pool: &[CycloNumber]) -> Result<SkSample> {
    let g = datum.group();
    let support = datum.support();
    if let Some(x) = support.iter().find(|x| datum.n_of(x) != datum.n_of(&g.inv(x))) {
        return Ok(SkSample::Empty { element: x.clone() });
    }
    if pool.is_empty() && !support.is_empty() {
        return Err(Error::Sampling("empty coefficient pool".into()));
    }
    let mut maps = BTreeMap::new();
    for x in &support {
        if maps.contains_key(x) {
            continue;
        }
        let xi = g.inv(x);
        let n = datum.n_of(x) as usize;
        let m = draw(rng, pool, n, xi == *x)?;
        if xi != *x {
            maps.insert(xi, transpose(&m));
        }
        maps.insert(x.clone(), m);
    }
    Ok(SkSample::Maps(maps))
}

/// Seed-deterministic draw of `(M_g) ∈ S(k)`.
pub fn sample_sk(datum: &Datum, seed: u64, pool: &[CycloNumber]) -> Result<SkSample> {
    sample_sk_with(datum, &mut ChaCha8Rng::seed_from_u64(seed), pool)
}

/// Number of free scalars in a tuple of `S(k)`: `n(n+1)/2` for each
/// involution `g = g^{-1}` and `n²` for each pair `{g, g^{-1}}`; `None` if
/// `S(k)` is empty.
pub fn sk_parameter_count(datum: &Datum) -> Option<usize> {
    let g = datum.group();
    let mut total = 0;
    for x in datum.support() {
        let xi = g.inv(&x);
        let n = datum.n_of(&x) as usize;
        if datum.n_of(&xi) as usize != n {
            return None;
        }
        if xi == x {
            total += n * (n + 1) / 2;
        } else if x < xi {
            total += n * n;
        }
    }
    Some(total)
}

/// `φ = f^{-1}`, always a member of `Φ`.
pub fn canonical_phi(form: &SkewForm) -> CharacterIso {
    let g = form.group();
    let inverse: BTreeMap<Character, GroupElement> =
        g.elements().map(|x| (form.induced_character(&x), x)).collect();
    CharacterIso {
        images: (0..g.rank())
            .map(|i| inverse[&Character(g.generator(i).0)].clone())
            .collect(),
    }
}

/// Seed-deterministic `T`: `φ` uniform in `Φ`, then `(M_g)` from [`sample_sk`].
/// `None` when `Φ × S(k)` is empty.
pub fn sample_choice(datum: &Datum, seed: u64, pool: &[CycloNumber], bound: usize) -> Result<Option<StructureChoice>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis = enumerate_phi(datum.form(), &datum.support(), bound)?;
    if phis.is_empty() {
        return Ok(None);
    }
    let phi = phis[rng.gen_range(0..phis.len())].clone();
    match sample_sk_with(datum, &mut rng, pool)? {
        SkSample::Empty { .. } => Ok(None),
        SkSample::Maps(m_maps) => Ok(Some(StructureChoice { phi, m_maps })),
    }
}

/// Membership of `T` in `Φ × S(k)`.
pub fn validate_choice(datum: &Datum, t: &StructureChoice) -> VerdictMap {
    let g = datum.group();
    let form = datum.form();
    let mut r = VerdictMap::new();
    let iso = t.phi.images.len() == g.rank() && t.phi.images.iter().all(|y| g.contains(y)) && t.phi.is_isomorphism(g);
    r.record("phi_isomorphism", (!iso).then(|| "φ is not an isomorphism G* → G".into()));
    if iso {
        let mut w = None;
        'skew: for a in g.characters() {
            for b in g.characters() {
                let e = (g.pairing_exponent(&a, &t.phi.apply(g, &b)) + g.pairing_exponent(&b, &t.phi.apply(g, &a)))
                    % g.exponent();
                if e != 0 {
                    w = Some(format!("⟨{a},φ({b})⟩⟨{b},φ({a})⟩ ≠ 1"));
                    break 'skew;
                }
            }
        }
        r.record("phi_skew", w);
        let w = datum
            .support()
            .into_iter()
            .find(|x| t.phi.apply(g, &form.induced_character(x)) != *x)
            .map(|x| format!("φ(f({x})) ≠ {x}"));
        r.record("phi_fixes_support", w);
    }
    let support = datum.support();
    let keys: Vec<GroupElement> = t.m_maps.keys().cloned().collect();
    r.record(
        "m_keys",
        (keys != support).then(|| format!("matrices given for {keys:?}, expected {support:?}")),
    );
    let mut w = None;
    for (x, m) in &t.m_maps {
        let rows = datum.n_of(&g.inv(x)) as usize;
        let cols = datum.n_of(x) as usize;
        if m.len() != rows || m.iter().any(|row| row.len() != cols) {
            w = Some(format!("M_{x} is not {rows}×{cols}"));
            break;
        }
        if !is_invertible(m) {
            w = Some(format!("M_{x} is singular"));
            break;
        }
        if t.m_maps.get(&g.inv(x)) != Some(&transpose(m)) {
            w = Some(format!("M_{} is not the transpose of M_{x}", g.inv(x)));
            break;
        }
    }
    r.record("m_invertible_transpose", w);
    r
}

/// Convolution `(p*q)(b_k) = Σ Δ(b_k)_{ij} p_i q_j`.
fn convolve(h: &HopfStructure, p: &[CycloNumber], q: &[CycloNumber]) -> Vector {
    (0..h.dim())
        .map(|k| {
            h.comult_basis(k)
                .iter()
                .filter(|((i, j), _)| !p[*i].is_zero() && !q[*j].is_zero())
                .map(|((i, j), c)| &(c * &p[*i]) * &q[*j])
                .sum()
        })
        .collect()
}

/// `f_T: H(D)^{*cop} → H(D)` on the dual basis, by evaluating PBW monomials
/// in the dual and inverting the evaluation matrix. The result is checked
/// to be a Hopf isomorphism.
pub fn build_f_t(hd: &HdAlgebra, t: &StructureChoice) -> Result<LinearMap> {
    let datum = hd.datum();
    let choice = validate_choice(datum, t);
    if !choice.all_pass() {
        return Err(Error::InvalidChoice(failure_summary(&choice)));
    }
    let h = hd.hopf();
    let layout = hd.layout();
    let g = datum.group();
    let d = h.dim();
    let symbols = layout.symbols();

    let character_functional = |chi: &Character| -> Vector {
        (0..d)
            .map(|i| match layout.split(i) {
                (a, 0) => g.pairing(chi, &g.element(a)),
                _ => CycloNumber::zero(),
            })
            .collect()
    };
    let p_functional = |s: usize| -> Vector {
        (0..d)
            .map(|i| {
                if layout.split(i).1 == 1 << s {
                    CycloNumber::one()
                } else {
                    CycloNumber::zero()
                }
            })
            .collect()
    };
    let m_image = |s: usize| -> Element {
        let sym = &symbols[s];
        let m = &t.m_maps[&sym.grade];
        let target = g.inv(&sym.grade);
        let mut out = Element::new();
        for (u, tsym) in symbols.iter().enumerate().filter(|(_, x)| x.grade == target) {
            let c = &m[(tsym.index - 1) as usize][(sym.index - 1) as usize];
            out.add_term(layout.symbol_label(u), c.clone());
        }
        out
    };
    let ps: Vec<Vector> = (0..symbols.len()).map(p_functional).collect();
    let ms: Vec<Element> = (0..symbols.len()).map(m_image).collect();

    let mut eval_rows = Vec::with_capacity(d);
    let mut images = Vec::with_capacity(d);
    for idx in 0..d {
        let (c, mask) = layout.split(idx);
        let chi = Character(g.element(c).0);
        let mut func = character_functional(&chi);
        let mut img = hd.group_element(&t.phi.apply(g, &chi));
        for s in (0..symbols.len()).filter(|s| mask >> s & 1 == 1) {
            func = convolve(h, &func, &ps[s]);
            img = h.mul(&img, &ms[s]);
        }
        eval_rows.push(func);
        images.push(img);
    }
    let eval = Matrix::from_rows(eval_rows)?;
    let inv = eval
        .inverse()
        .ok_or_else(|| Error::Internal("PBW evaluation matrix is singular".into()))?;
    let f_images: Vec<Element> = (0..d)
        .map(|j| {
            let mut out = Element::new();
            for (m, img) in images.iter().enumerate() {
                out.add_scaled(img, inv.get(j, m));
            }
            out
        })
        .collect();
    let f = LinearMap::from_images(d, &f_images);
    let verdicts = verify_dual_cop_map(h, &f_images);
    if !verdicts.all_pass() {
        return Err(Error::InvalidChoice(failure_summary(&verdicts)));
    }
    Ok(f)
}

fn failure_summary(v: &VerdictMap) -> String {
    v.failures()
        .map(|(k, x)| format!("{k}: {}", x.witness.clone().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks that `b_i* ↦ images[i]` is a Hopf isomorphism `H^{*cop} → H`.
pub fn verify_dual_cop_map(h: &HopfStructure, images: &[Element]) -> VerdictMap {
    let d = h.dim();
    let dual = h.dual();
    let mut r = VerdictMap::new();
    let apply = |x: &Element| -> Element {
        let mut out = Element::new();
        for (i, c) in x.iter() {
            out.add_scaled(&images[*i], c);
        }
        out
    };
    r.record(
        "unit",
        (apply(dual.unit()) != *h.unit()).then(|| "f(ε) ≠ 1".into()),
    );
    let mut w = None;
    'alg: for i in 0..d {
        for j in 0..d {
            if apply(dual.mul_basis(i, j)) != h.mul(&images[i], &images[j]) {
                w = Some(format!("f({}·{})", dual.label(i), dual.label(j)));
                break 'alg;
            }
        }
    }
    r.record("multiplicative", w);
    let w = (0..d)
        .find(|&k| {
            let mut rhs = TensorElement::new();
            for ((i, j), c) in dual.comult_basis(k).iter() {
                rhs.add_scaled(&TensorElement::tensor(&images[*j], &images[*i]), c);
            }
            h.coproduct(&images[k]) != rhs
        })
        .map(|k| format!("Δ(f({}))", dual.label(k)));
    r.record("comultiplicative_cop", w);
    let w = (0..d)
        .find(|&k| h.counit_of(&images[k]) != *dual.counit_basis(k))
        .map(|k| format!("ε(f({}))", dual.label(k)));
    r.record("counit", w);
    let rank = LinearMap::from_images(d, images).rank();
    r.record("bijective", (rank != d).then(|| format!("rank {rank} < {d}")));
    r
}

/// `R = Σ_i b_i ⊗ f(b_i*)`, checked against `(b_i*⊗I)(R) = f(b_i*)`.
pub fn rmatrix_from_f(f: &LinearMap) -> Result<TensorElement> {
    let d = f.domain_dim();
    if f.codomain_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.codomain_dim(),
        });
    }
    let mut r = TensorElement::new();
    for i in 0..d {
        for (j, c) in f.image_of_basis(i).iter() {
            r.add_term((i, *j), c.clone());
        }
    }
    for i in 0..d {
        if f_r(&r, &Element::basis(i)) != f.image_of_basis(i) {
            return Err(Error::Internal(format!("(b_{i}*⊗I)(R) ≠ f(b_{i}*)")));
        }
    }
    Ok(r)
}

/// `f_R(p) = (p⊗I)(R)` for `p` in dual-basis coordinates.
pub fn f_r(r: &TensorElement, p: &Element) -> Element {
    let mut out = Element::new();
    for ((i, j), c) in r.iter() {
        let pi = p.get(i);
        if !pi.is_zero() {
            out.add_term(*j, c * &pi);
        }
    }
    out
}

/// The five triangularity identities. Triple-tensor identities are only
/// evaluated up to `hexagon_bound`.
pub fn verify_triangular(h: &HopfStructure, r: &TensorElement, hexagon_bound: usize) -> Result<VerdictMap> {
    let d = h.dim();
    if d > hexagon_bound {
        return Err(Error::BoundExceeded {
            what: "dimension for triple-tensor checks",
            value: d,
            bound: hexagon_bound,
        });
    }
    for (i, j) in r.keys() {
        if *i >= d || *j >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: (*i).max(*j),
            });
        }
    }
    let one = h.unit();
    let mut v = VerdictMap::new();
    let w = if h.counit_left(r) != *one {
        Some("(ε⊗I)R ≠ 1".to_string())
    } else if h.counit_right(r) != *one {
        Some("(I⊗ε)R ≠ 1".to_string())
    } else {
        None
    };
    v.record("counit", w);

    let r13 = h.embed(r, (1, 3));
    let lhs = h.coproduct_left(r);
    let rhs: Tensor3 = h.tensor3_mul(&r13, &h.embed(r, (2, 3)));
    v.record("hexagon_left", (lhs != rhs).then(|| "(Δ⊗I)R ≠ R13 R23".into()));
    let lhs = h.coproduct_right(r);
    let rhs = h.tensor3_mul(&r13, &h.embed(r, (1, 2)));
    v.record("hexagon_right", (lhs != rhs).then(|| "(I⊗Δ)R ≠ R13 R12".into()));

    let w = (0..d)
        .find(|&i| {
            let delta = h.comult_basis(i);
            h.tensor_mul(&delta.flip(), r) != h.tensor_mul(r, delta)
        })
        .map(|i| format!("Δ^cop(b)R ≠ RΔ(b) at b = {}", h.label(i)));
    v.record("intertwiner", w);

    let w = (h.tensor_mul(r, &r.flip()) != TensorElement::tensor(one, one)).then(|| "R R21 ≠ 1⊗1".into());
    v.record("unitarity", w);
    Ok(v)
}

/// Exact rank of the coefficient matrix of `R`, and whether it is `d`.
pub fn minimality_rank(r: &TensorElement, d: usize) -> (usize, bool) {
    let rank = r.to_matrix(d).rank();
    (rank, rank == d)
}

/// `R` with its Drinfeld element, rank and verdicts.
#[derive(Clone, Debug)]
pub struct RMatrixAnalysis {
    pub r: TensorElement,
    pub u: Element,
    pub rank: usize,
    pub minimal: bool,
    pub s2_is_identity: bool,
    pub trace_s2: CycloNumber,
    pub verdicts: VerdictMap,
}

/// `u = Σ S(y_i) x_i` for `R = Σ x_i⊗y_i`.
pub fn drinfeld_element(h: &HopfStructure, r: &TensorElement) -> Element {
    let mut u = Element::new();
    for ((i, j), c) in r.iter() {
        u.add_scaled(&h.mul(h.antipode_basis(*j), &Element::basis(*i)), c);
    }
    u
}

pub fn drinfeld_analysis(h: &HopfStructure, r: &TensorElement) -> RMatrixAnalysis {
    let d = h.dim();
    let u = drinfeld_element(h, r);
    let (rank, minimal) = minimality_rank(r, d);
    let mut v = VerdictMap::new();
    v.record("u_grouplike", (!h.is_grouplike(&u)).then(|| format!("u = {u:?}")));
    v.record("u_squared_one", (h.mul(&u, &u) != *h.unit()).then(|| "u² ≠ 1".into()));
    v.record("u_antipode_fixed", (h.antipode_of(&u) != u).then(|| "S(u) ≠ u".into()));

    let s2: Vec<Element> = (0..d).map(|i| h.antipode_of(h.antipode_basis(i))).collect();
    let w = match h.inverse_of(&u) {
        None => Some("u is not invertible".to_string()),
        Some(ui) => (0..d)
            .find(|&i| s2[i] != h.mul(&h.mul(&u, &Element::basis(i)), &ui))
            .map(|i| format!("S²(b) ≠ u b u^{{-1}} at b = {}", h.label(i))),
    };
    v.record("s2_is_ad_u", w);
    let w = (0..d)
        .find(|&i| h.antipode_of(&h.antipode_of(&s2[i])) != Element::basis(i))
        .map(|i| format!("S⁴({}) ≠ {}", h.label(i), h.label(i)));
    v.record("s4_identity", w);

    let s2_is_identity = (0..d).all(|i| s2[i] == Element::basis(i));
    let trace_s2: CycloNumber = (0..d).map(|i| s2[i].get(&i)).sum();
    v.record(
        "dim_divisible_by_4",
        (minimal && !s2_is_identity && !d.is_multiple_of(4)).then(|| format!("S² ≠ I, R minimal, dim = {d}")),
    );
    RMatrixAnalysis {
        r: r.clone(),
        u,
        rank,
        minimal,
        s2_is_identity,
        trace_s2,
        verdicts: v,
    }
}

/// Triangularity, Drinfeld identities and the minimality flag in one report.
pub fn analyze(h: &HopfStructure, r: &TensorElement, hexagon_bound: usize) -> Result<RMatrixAnalysis> {
    let tri = verify_triangular(h, r, hexagon_bound)?;
    let mut a = drinfeld_analysis(h, r);
    let mut v = VerdictMap::new();
    v.extend_prefixed("triangular", &tri);
    v.extend_prefixed("drinfeld", &a.verdicts);
    a.verdicts = v;
    Ok(a)
}

pub fn rmatrix_to_json(r: &TensorElement) -> Value {
    Value::Array(
        r.iter()
            .map(|((i, j), c)| json!([i, j, serde_json::to_value(c).expect("cyclo serializes")]))
            .collect(),
    )
}

pub fn rmatrix_from_json(v: &Value, d: usize) -> Result<TensorElement> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("R-matrix file must be an array of [i, j, c]".into()))?;
    let mut r = TensorElement::new();
    for t in arr {
        let t = t
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| Error::Parse("R-matrix entries are [i, j, c]".into()))?;
        let idx = |n: usize| -> Result<usize> {
            let i = t[n]
                .as_u64()
                .ok_or_else(|| Error::Parse("R-matrix index must be a non-negative integer".into()))? as usize;
            if i >= d {
                return Err(Error::Parse(format!("R-matrix index {i} out of range for dimension {d}")));
            }
            Ok(i)
        };
        let c: CycloNumber = serde_json::from_value(t[2].clone()).map_err(|e| Error::Parse(e.to_string()))?;
        r.add_term((idx(0)?, idx(1)?), c);
    }
    Ok(r)
}

/// A recovered datum and structure choice, with the comparison map
/// `ψ: H(D) → A` on the basis of `H(D)`.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub datum: Datum,
    pub choice: StructureChoice,
    pub psi: LinearMap,
    pub verdicts: VerdictMap,
}

fn hypothesis(v: &VerdictMap) -> Result<()> {
    if v.all_pass() {
        Ok(())
    } else {
        Err(Error::Hypothesis(failure_summary(v)))
    }
}

/// Recovers `(D, T)` from a minimal triangular `(A, R)` generated by the
/// given grouplikes and skew primitives.
pub fn extract_datum(a: &HopfStructure, r: &TensorElement, gens: &Generators, max_dim: usize) -> Result<Extraction> {
    let d = a.dim();
    let mut v = VerdictMap::new();

    // G from its cyclic generators.
    let mut factors = Vec::new();
    let mut gen_elems = Vec::new();
    for (i, x) in gens.grouplikes.iter().enumerate() {
        if !a.is_grouplike(x) {
            return Err(Error::Hypothesis(format!("grouplike generator {i} is not grouplike")));
        }
        let mut p = x.clone();
        let mut order = 1;
        while p != *a.unit() {
            p = a.mul(&p, x);
            order += 1;
            if order > d {
                return Err(Error::Hypothesis(format!("grouplike generator {i} has no finite order ≤ {d}")));
            }
        }
        if order > 1 {
            factors.push(order as u32);
            gen_elems.push(x.clone());
        }
    }
    let group = FiniteAbelianGroup::new(factors)?;
    let elems: Vec<Element> = group
        .elements()
        .map(|e| {
            e.0.iter()
                .zip(&gen_elems)
                .fold(a.unit().clone(), |acc, (&k, x)| a.mul(&acc, &a.pow(x, k as usize)))
        })
        .collect();
    let commute = gen_elems
        .iter()
        .all(|x| gen_elems.iter().all(|y| a.mul(x, y) == a.mul(y, x)));
    let independent = Subspace::span(d, elems.iter().map(|x| x.to_dense(d))).dim() == group.order();
    v.record(
        "group_direct_product",
        (!commute || !independent).then(|| "grouplike generators do not give a direct product of their cyclic groups".into()),
    );
    hypothesis(&v)?;

    // F(g,h) = ⟨f_R^{-1}(g), h⟩.
    let rt_inv = r
        .to_matrix(d)
        .transpose()
        .inverse()
        .ok_or_else(|| Error::Hypothesis("R is not minimal (f_R is not invertible)".into()))?;
    let n = group.exponent();
    let preimages: Vec<Vector> = elems
        .iter()
        .map(|x| rt_inv.mul_vec(&x.to_dense(d)).expect("shapes agree"))
        .collect();
    let pair = |gi: usize, hi: usize| -> CycloNumber {
        preimages[gi]
            .iter()
            .zip(&elems[hi].to_dense(d))
            .map(|(p, q)| p * q)
            .sum()
    };
    let mut exps = vec![vec![0i64; group.rank()]; group.rank()];
    for i in 0..group.rank() {
        for j in 0..group.rank() {
            let gi = group.index_of(&group.generator(i));
            let hj = group.index_of(&group.generator(j));
            let val = pair(gi, hj);
            exps[i][j] = val.root_exponent(n).ok_or_else(|| {
                Error::Hypothesis(format!("⟨f_R^{{-1}}(e{i}), e{j}⟩ = {val} is not an {n}-th root of unity"))
            })? as i64;
        }
    }
    let form = SkewForm::new(group.clone(), n, exps)?;
    let w = (0..group.order())
        .flat_map(|x| (0..group.order()).map(move |y| (x, y)))
        .find(|&(x, y)| pair(x, y) != form.eval(&group.element(x), &group.element(y)))
        .map(|(x, y)| format!("at ({}, {})", group.element(x), group.element(y)));
    v.record("form_bilinear", w);
    v.extend_prefixed("form", &form.validate());
    hypothesis(&v)?;

    // V_g: the part of P_{1,g} moved by conjugation with g.
    let p11 = a.skew_primitive_space(a.unit(), a.unit())?;
    v.record("no_primitives", (p11.dim() != 0).then(|| format!("dim P_{{1,1}} = {}", p11.dim())));
    let mut moving: BTreeMap<usize, (Subspace, Vec<Element>)> = BTreeMap::new();
    let mut fixed_ok = None;
    for gi in 1..group.order() {
        let g = &elems[gi];
        let g_inv = a.inverse_of(g).expect("grouplikes are invertible");
        let order = group.order_of(&group.element(gi)) as usize;
        let p = a.skew_primitive_space(a.unit(), g)?;
        let average = |x: &Element| -> Element {
            let mut acc = Element::new();
            let mut y = x.clone();
            for _ in 0..order {
                acc = &acc + &y;
                y = a.mul(&a.mul(g, &y), &g_inv);
            }
            acc.scale(&CycloNumber::from_fraction(1, order as i64).expect("order ≥ 1"))
        };
        let basis: Vec<Element> = p.basis().iter().map(|b| Element::from_dense(b)).collect();
        let fixed = Subspace::span(d, basis.iter().map(|b| average(b).to_dense(d)));
        let one_minus_g = Subspace::span(d, [(a.unit() - g).to_dense(d)]);
        if fixed != one_minus_g && fixed_ok.is_none() {
            fixed_ok = Some(format!("fixed part of P_{{1,{}}} is not span{{1 - g}}", group.element(gi)));
        }
        let projector: Vec<Element> = basis.iter().map(|b| b - &average(b)).collect();
        let vg = Subspace::span(d, projector.iter().map(|x| x.to_dense(d)));
        if vg.dim() > 0 {
            moving.insert(gi, (vg, Vec::new()));
        }
    }
    v.record("fixed_part_is_one_minus_g", fixed_ok);

    // Supplied skew primitives fix the order of each basis of V_g.
    for (i, x) in gens.skew_primitives.iter().enumerate() {
        let grade = (1..group.order()).find(|&gi| {
            let mut t = TensorElement::tensor(x, a.unit());
            t = &t + &TensorElement::tensor(&elems[gi], x);
            a.coproduct(x) == t
        });
        let Some(gi) = grade else {
            return Err(Error::Hypothesis(format!("skew primitive {i} is not (1:g)-skew primitive for any g ≠ 1")));
        };
        let Some((vg, chosen)) = moving.get_mut(&gi) else {
            return Err(Error::Hypothesis(format!(
                "skew primitive {i} has grade {} but V_g = 0",
                group.element(gi)
            )));
        };
        if vg.contains(&x.to_dense(d)) {
            chosen.push(x.clone());
        }
    }
    let mut vbases: BTreeMap<GroupElement, Vec<Element>> = BTreeMap::new();
    for (gi, (vg, chosen)) in &moving {
        let mut e = Echelon::new(d);
        let mut basis = Vec::new();
        let completion = vg.basis().iter().map(|b| Element::from_dense(b));
        for x in chosen.iter().cloned().chain(completion) {
            if e.insert(&x.to_dense(d)) {
                basis.push(x);
            }
        }
        vbases.insert(group.element(*gi), basis);
    }

    let mut nmap = BTreeMap::new();
    for (g, b) in &vbases {
        nmap.insert(g.clone(), b.len() as u32);
    }
    let datum = Datum::new(group.clone(), form.clone(), nmap)?;
    let report = validate_datum(&datum);
    v.extend_prefixed("datum", &report.verdicts);
    hypothesis(&v)?;

    let graded: Vec<(GroupElement, Element)> = vbases
        .iter()
        .flat_map(|(g, b)| b.iter().map(move |x| (g.clone(), x.clone())))
        .collect();
    v.extend_prefixed("relations", &check_relations(a, &form, &elems, &graded));
    hypothesis(&v)?;

    // ψ: H(D) → A on labels a·x_S.
    let hd = build_hd(&datum, max_dim)?;
    let layout = hd.layout();
    if hd.dim() != d {
        v.fail("psi_bijective", format!("dim H(D) = {} but dim A = {d}", hd.dim()));
        hypothesis(&v)?;
    }
    let psi_images: Vec<Element> = (0..d)
        .map(|idx| {
            let (ga, mask) = layout.split(idx);
            graded
                .iter()
                .enumerate()
                .filter(|(s, _)| mask >> s & 1 == 1)
                .fold(elems[ga].clone(), |acc, (_, (_, x))| a.mul(&acc, x))
        })
        .collect();
    let psi = LinearMap::from_images(d, &psi_images);
    let hh = hd.hopf();
    let map_elem = |x: &Element| psi.apply(x);
    let mut w = None;
    'alg: for i in 0..d {
        for j in 0..d {
            if map_elem(hh.mul_basis(i, j)) != a.mul(&psi_images[i], &psi_images[j]) {
                w = Some(format!("ψ({}·{})", hh.label(i), hh.label(j)));
                break 'alg;
            }
        }
    }
    v.record("psi_multiplicative", w);
    let w = (0..d)
        .find(|&i| {
            a.coproduct(&psi_images[i]) != psi.apply_tensor(hh.comult_basis(i))
                || a.counit_of(&psi_images[i]) != *hh.counit_basis(i)
        })
        .map(|i| format!("at {}", hh.label(i)));
    v.record("psi_comultiplicative", w);
    let psi_inv = psi.inverse();
    v.record("psi_bijective", psi_inv.is_none().then(|| "ψ is singular".into()));
    hypothesis(&v)?;
    let psi_inv = psi_inv.expect("checked");

    // R' = (ψ^{-1}⊗ψ^{-1})R, then read T' off f_{R'}.
    let pm = psi_inv.matrix();
    let r_prime_m = pm.mul(&r.to_matrix(d))?.mul(&pm.transpose())?;
    let mut r_prime = TensorElement::new();
    for i in 0..d {
        for j in 0..d {
            r_prime.add_term((i, j), r_prime_m.get(i, j).clone());
        }
    }
    let mut phi_images = Vec::new();
    for i in 0..group.rank() {
        let chi = Character(group.generator(i).0);
        let mut p = Element::new();
        for x in 0..group.order() {
            p.add_term(layout.index_of_label(x, 0), group.pairing(&chi, &group.element(x)));
        }
        let img = f_r(&r_prime, &p);
        let target = (0..group.order()).find(|&x| img == Element::basis(layout.index_of_label(x, 0)));
        match target {
            Some(x) => phi_images.push(group.element(x)),
            None => {
                v.fail("phi_grouplike", format!("f_R(χ_{i}) is not a group label"));
                hypothesis(&v)?;
            }
        }
    }
    let phi = CharacterIso { images: phi_images };
    let symbols = layout.symbols();
    let mut m_maps: BTreeMap<GroupElement, Vec<Vec<CycloNumber>>> = BTreeMap::new();
    for (s, sym) in symbols.iter().enumerate() {
        let mut p = Element::new();
        for x in 0..group.order() {
            p.add_term(layout.index_of_label(x, 1 << s), CycloNumber::one());
        }
        let img = f_r(&r_prime, &p);
        let target = group.inv(&sym.grade);
        let rows = datum.n_of(&target) as usize;
        let cols = datum.n_of(&sym.grade) as usize;
        let m = m_maps
            .entry(sym.grade.clone())
            .or_insert_with(|| vec![vec![CycloNumber::zero(); cols]; rows]);
        let mut rest = img.clone();
        for (u, tsym) in symbols.iter().enumerate().filter(|(_, x)| x.grade == target) {
            let label = layout.symbol_label(u);
            let c = img.get(&label);
            m[(tsym.index - 1) as usize][(sym.index - 1) as usize] = c.clone();
            rest.add_term(label, -&c);
        }
        if !rest.is_zero() {
            v.fail("m_in_v_inverse", format!("f_R(P_{sym}) leaves V_{target}"));
            hypothesis(&v)?;
        }
    }
    let choice = StructureChoice { phi, m_maps };
    v.extend_prefixed("choice", &validate_choice(&datum, &choice));
    hypothesis(&v)?;
    let f = build_f_t(&hd, &choice)?;
    let rt = rmatrix_from_f(&f)?;
    v.record("structure_reproduces_r", (rt != r_prime).then(|| "R_T ≠ (ψ^{-1}⊗ψ^{-1})R".into()));
    hypothesis(&v)?;
    Ok(Extraction {
        datum,
        choice,
        psi,
        verdicts: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hd::DEFAULT_MAX_DIM;

    fn h(n: u32) -> Datum {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let f = SkewForm::new(g.clone(), 2, vec![vec![1]]).unwrap();
        let mut m = BTreeMap::new();
        if n > 0 {
            m.insert(GroupElement(vec![1]), n);
        }
        Datum::new(g, f, m).unwrap()
    }

    fn structure(datum: &Datum, seed: u64) -> (HdAlgebra, StructureChoice, TensorElement) {
        let hd = build_hd(datum, DEFAULT_MAX_DIM).unwrap();
        let t = sample_choice(datum, seed, &default_pool(), 64).unwrap().unwrap();
        let f = build_f_t(&hd, &t).unwrap();
        let r = rmatrix_from_f(&f).unwrap();
        (hd, t, r)
    }

    #[test]
    fn group_algebra_r_matrix() {
        let (hd, _, r) = structure(&h(0), 0);
        let half = CycloNumber::from_fraction(1, 2).unwrap();
        let mut expect = TensorElement::new();
        expect.add_term((0, 0), half.clone());
        expect.add_term((0, 1), half.clone());
        expect.add_term((1, 0), half.clone());
        expect.add_term((1, 1), -&half);
        assert_eq!(r, expect);
        let a = analyze(hd.hopf(), &r, 32).unwrap();
        assert!(a.verdicts.all_pass(), "{}", a.verdicts);
        assert_eq!(a.u, Element::basis(1));
    }

    #[test]
    fn sweedler_structure() {
        let (hd, t, r) = structure(&h(1), 5);
        let lambda = t.m_maps[&GroupElement(vec![1])][0][0].clone();
        let f = build_f_t(&hd, &t).unwrap();
        // b_1* is the functional P_x on the basis (1, x, g, gx)... up to the g-part.
        let px = Element::from_dense(&[CycloNumber::zero(), CycloNumber::one(), CycloNumber::zero(), CycloNumber::one()]);
        assert_eq!(f.apply(&px), Element::term(1, lambda));
        assert_eq!(r.len(), 8);
        let a = analyze(hd.hopf(), &r, 32).unwrap();
        assert!(a.verdicts.all_pass(), "{}", a.verdicts);
        assert_eq!(a.u, Element::basis(2));
        assert!(!a.s2_is_identity);
        assert!(a.minimal);
    }

    #[test]
    fn trivial_r_fails_intertwiner_on_sweedler() {
        let hd = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
        let one = TensorElement::basis((0, 0));
        let v = verify_triangular(hd.hopf(), &one, 32).unwrap();
        assert!(!v.passed("intertwiner"));
        assert!(v.get("intertwiner").unwrap().witness.as_ref().unwrap().contains("x"));
        assert!(v.passed("unitarity"));
    }

    #[test]
    fn infeasible_datum_has_empty_sk() {
        let g = FiniteAbelianGroup::new(vec![4, 4]).unwrap();
        let f = SkewForm::new(g.clone(), 4, vec![vec![2, 1], vec![3, 2]]).unwrap();
        let mut n = BTreeMap::new();
        n.insert(GroupElement(vec![1, 0]), 1);
        let d = Datum::new(g, f, n).unwrap();
        assert!(matches!(sample_sk(&d, 0, &default_pool()).unwrap(), SkSample::Empty { .. }));
        assert_eq!(sk_parameter_count(&d), None);
    }

    #[test]
    fn extraction_round_trip_sweedler() {
        let datum = h(1);
        let hd = build_hd(&datum, DEFAULT_MAX_DIM).unwrap();
        let mut t = sample_choice(&datum, 2, &default_pool(), 64).unwrap().unwrap();
        t.phi = canonical_phi(datum.form());
        let r = rmatrix_from_f(&build_f_t(&hd, &t).unwrap()).unwrap();
        let e = extract_datum(hd.hopf(), &r, &hd.generators(), DEFAULT_MAX_DIM).unwrap();
        assert!(e.datum.same_as(&datum));
        assert_eq!(e.choice, t);
    }

    #[test]
    fn choice_json_round_trip() {
        let t = sample_choice(&h(2), 9, &default_pool(), 64).unwrap().unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<StructureChoice>(&s).unwrap(), t);
    }
}
