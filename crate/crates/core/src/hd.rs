//! The pointed Hopf algebras `H(D)` attached to a datum `D = (G, F, n)`.
//!
//! `H(D)` is generated by the group `G` (grouplikes) and, for every
//! `g ∈ I_F`, an `n_g`-dimensional space `V_g` of `(1:g)`-skew primitives,
//! subject to
//!
//! ```text
//! x·y = F(h, g) y·x      x ∈ V_g, y ∈ V_h
//! x·a = F(a, g) a·x      a ∈ G
//! ```
//!
//! Basis labels are `a·x_{s1}⋯x_{sk}` with `s1 < ⋯ < sk`, indexed
//! group-major: label `(a, S)` has index `index(a)·2^k + mask(S)`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abgroup::{FiniteAbelianGroup, GroupElement, SkewForm};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::hopf::{Element, HopfStructure, LinearMap, TensorElement};
use crate::linalg::{Echelon, Subspace};
use crate::report::VerdictMap;

/// Largest algebra dimension built unless overridden.
pub const DEFAULT_MAX_DIM: usize = 64;

/// A datum `(G, F, n)`. Missing keys of `n` read as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawDatum", try_from = "RawDatum")]
pub struct Datum {
    group: FiniteAbelianGroup,
    form: SkewForm,
    n: BTreeMap<GroupElement, u32>,
}

#[derive(Serialize, Deserialize)]
struct RawDatum {
    group: FiniteAbelianGroup,
    form: SkewForm,
    n: Vec<RawMultiplicity>,
}

#[derive(Serialize, Deserialize)]
struct RawMultiplicity {
    element: GroupElement,
    value: u32,
}

impl From<Datum> for RawDatum {
    fn from(d: Datum) -> Self {
        RawDatum {
            group: d.group,
            form: d.form,
            n: d
                .n
                .into_iter()
                .map(|(element, value)| RawMultiplicity { element, value })
                .collect(),
        }
    }
}

impl TryFrom<RawDatum> for Datum {
    type Error = Error;

    fn try_from(raw: RawDatum) -> Result<Self> {
        let mut n = BTreeMap::new();
        for m in raw.n {
            if n.insert(m.element.clone(), m.value).is_some() {
                return Err(Error::Parse(format!("duplicate multiplicity for {}", m.element)));
            }
        }
        Datum::new(raw.group, raw.form, n)
    }
}

impl Datum {
    /// Checks shapes only; see [`validate_datum`] for the datum axioms.
    pub fn new(group: FiniteAbelianGroup, form: SkewForm, n: BTreeMap<GroupElement, u32>) -> Result<Self> {
        if form.group() != &group {
            return Err(Error::InvalidDatum(format!(
                "form is defined on {} but the datum group is {}",
                form.group(),
                group
            )));
        }
        if let Some(g) = n.keys().find(|g| !group.contains(g)) {
            return Err(Error::InvalidDatum(format!("{g} is not an element of {group}")));
        }
        Ok(Datum { group, form, n })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn multiplicities(&self) -> &BTreeMap<GroupElement, u32> {
        &self.n
    }

    pub fn n_of(&self, g: &GroupElement) -> u32 {
        self.n.get(g).copied().unwrap_or(0)
    }

    /// `I_F' = {g : n_g ≠ 0}`.
    pub fn support(&self) -> Vec<GroupElement> {
        self.n.iter().filter(|(_, &v)| v > 0).map(|(g, _)| g.clone()).collect()
    }

    pub fn total_generators(&self) -> u64 {
        self.n.values().map(|&v| v as u64).sum()
    }

    /// `|G|·2^{Σ n_g}`, or `None` on overflow.
    pub fn dimension(&self) -> Option<u128> {
        let k = self.total_generators();
        (k < 100).then(|| (self.group.order() as u128).checked_mul(1u128 << k)).flatten()
    }

    /// Same group, same values of `F`, same `n` (zero entries ignored).
    pub fn same_as(&self, other: &Datum) -> bool {
        self.group == other.group
            && self.group.elements().all(|g| {
                self.n_of(&g) == other.n_of(&g)
                    && self
                        .group
                        .elements()
                        .all(|h| self.form.eval(&g, &h) == other.form.eval(&g, &h))
            })
    }
}

/// Outcome of [`validate_datum`].
#[derive(Clone, Debug)]
pub struct DatumReport {
    pub verdicts: VerdictMap,
    pub i_f: Vec<GroupElement>,
    pub dimension: Option<u128>,
    /// `n_g = n_{g^{-1}}` for every `g`.
    pub feasible: bool,
    /// First `g` with `n_g ≠ n_{g^{-1}}`.
    pub infeasible_witness: Option<GroupElement>,
}

impl DatumReport {
    pub fn is_valid(&self) -> bool {
        self.verdicts.all_pass()
    }
}

pub fn validate_datum(d: &Datum) -> DatumReport {
    validate_datum_with_bound(d, crate::abgroup::DEFAULT_MAX_ORDER)
}

pub fn validate_datum_with_bound(d: &Datum, bound: usize) -> DatumReport {
    let mut verdicts = VerdictMap::new();
    let form_report = d.form.validate_with_bound(bound);
    verdicts.extend_prefixed("form", &form_report);
    let g = &d.group;
    let mut i_f = Vec::new();
    if form_report.all_pass() {
        match d.form.u_f_and_i_f() {
            Ok(t) => {
                i_f = t.i_f;
                let w = d
                    .n
                    .iter()
                    .find(|(x, &v)| v > 0 && !i_f.contains(x))
                    .map(|(x, v)| format!("n_{x} = {v} but F({x},{x}) ≠ -1"));
                verdicts.record("n_supported_on_i_f", w);
            }
            Err(e) => verdicts.fail("n_supported_on_i_f", e.to_string()),
        }
    } else {
        verdicts.fail("n_supported_on_i_f", "form is invalid");
    }
    verdicts.record(
        "even_order_when_i_f_nonempty",
        (!i_f.is_empty() && !g.order().is_multiple_of(2)).then(|| format!("|G| = {} is odd", g.order())),
    );
    let infeasible_witness = d
        .n
        .keys()
        .find(|x| d.n_of(x) != d.n_of(&g.inv(x)))
        .cloned();
    DatumReport {
        verdicts,
        i_f,
        dimension: d.dimension(),
        feasible: infeasible_witness.is_none(),
        infeasible_witness,
    }
}

/// A basis vector `x_{grade,index}` of `V_grade`, `1 ≤ index ≤ n_grade`.
/// The derived order is the global symbol order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub grade: GroupElement,
    pub index: u32,
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}_{}", self.grade, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HdBasisLabel {
    pub group_part: GroupElement,
    pub wedge_part: Vec<GeneratorSymbol>,
}

/// A letter of a word in the generators of `H(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    Group(GroupElement),
    Symbol(GeneratorSymbol),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Atom {
    G(usize),
    X(usize),
}

/// A canonical monomial `ζ_N^e · a · x_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mono {
    a: usize,
    mask: u64,
    e: u64,
}

/// Group tables, symbol order and `F`-exponents shared by every
/// computation in `H(D)`.
#[derive(Clone, Debug)]
pub struct HdLayout {
    datum: Datum,
    elements: Vec<GroupElement>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    symbols: Vec<GeneratorSymbol>,
    grades: Vec<usize>,
    conductor: u64,
    f_exp: Vec<u64>,
}

impl HdLayout {
    pub fn new(datum: &Datum) -> Result<Self> {
        let g = &datum.group;
        let elements: Vec<GroupElement> = g.elements().collect();
        let m = elements.len();
        let mut mul = Vec::with_capacity(m * m);
        let mut f_exp = Vec::with_capacity(m * m);
        for a in &elements {
            for b in &elements {
                mul.push(g.index_of(&g.mul(a, b)));
                f_exp.push(datum.form.eval_exponent(a, b) as u64);
            }
        }
        let inv = elements.iter().map(|a| g.index_of(&g.inv(a))).collect();
        let mut symbols = Vec::new();
        for (grade, &k) in &datum.n {
            for index in 1..=k {
                symbols.push(GeneratorSymbol {
                    grade: grade.clone(),
                    index,
                });
            }
        }
        if symbols.len() > 62 {
            return Err(Error::BoundExceeded {
                what: "generator count",
                value: symbols.len(),
                bound: 62,
            });
        }
        let grades = symbols.iter().map(|s| g.index_of(&s.grade)).collect();
        Ok(HdLayout {
            datum: datum.clone(),
            elements,
            mul,
            inv,
            symbols,
            grades,
            conductor: datum.form.conductor() as u64,
            f_exp,
        })
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements.len() << self.symbols.len()
    }

    pub fn index_of_label(&self, group_index: usize, mask: u64) -> usize {
        (group_index << self.symbols.len()) | mask as usize
    }

    /// `(group index, symbol mask)` of a basis index.
    pub fn split(&self, idx: usize) -> (usize, u64) {
        let k = self.symbols.len();
        (idx >> k, (idx & ((1usize << k) - 1)) as u64)
    }

    pub fn label(&self, idx: usize) -> HdBasisLabel {
        let (a, mask) = self.split(idx);
        HdBasisLabel {
            group_part: self.elements[a].clone(),
            wedge_part: self.mask_symbols(mask).map(|s| self.symbols[s].clone()).collect(),
        }
    }

    fn mask_symbols(&self, mask: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.symbols.len()).filter(move |s| mask >> s & 1 == 1)
    }

    pub fn label_name(&self, idx: usize) -> String {
        let (a, mask) = self.split(idx);
        let mut parts = Vec::new();
        if a != 0 || mask == 0 {
            parts.push(if a == 0 {
                "1".to_string()
            } else {
                format!("g{}", self.elements[a])
            });
        }
        parts.extend(self.mask_symbols(mask).map(|s| self.symbols[s].to_string()));
        parts.join("·")
    }

    /// Basis index of the label `(g, ∅)`.
    pub fn group_label(&self, g: &GroupElement) -> usize {
        self.index_of_label(self.datum.group.index_of(g), 0)
    }

    /// Basis index of the label `(1, {s})`.
    pub fn symbol_label(&self, s: usize) -> usize {
        self.index_of_label(0, 1 << s)
    }

    pub fn symbol_position(&self, s: &GeneratorSymbol) -> Option<usize> {
        self.symbols.binary_search(s).ok()
    }

    fn f(&self, a: usize, b: usize) -> u64 {
        self.f_exp[a * self.elements.len() + b]
    }

    fn one(&self) -> Mono {
        Mono { a: 0, mask: 0, e: 0 }
    }

    fn mono_of(&self, idx: usize) -> Mono {
        let (a, mask) = self.split(idx);
        Mono { a, mask, e: 0 }
    }

    /// `m · b`, moving `b` left past every symbol of `m`.
    fn times_group(&self, m: Mono, b: usize) -> Mono {
        let e = self
            .mask_symbols(m.mask)
            .fold(m.e, |acc, s| acc + self.f(b, self.grades[s]));
        Mono {
            a: self.mul[m.a * self.elements.len() + b],
            mask: m.mask,
            e: e % self.conductor,
        }
    }

    /// `m · x_t`, moving `x_t` left past every larger symbol of `m`.
    fn times_symbol(&self, m: Mono, t: usize) -> Option<Mono> {
        if m.mask >> t & 1 == 1 {
            return None;
        }
        let e = self
            .mask_symbols(m.mask)
            .filter(|&s| s > t)
            .fold(m.e, |acc, s| acc + self.f(self.grades[t], self.grades[s]));
        Some(Mono {
            a: m.a,
            mask: m.mask | 1 << t,
            e: e % self.conductor,
        })
    }

    fn times_atom(&self, m: Mono, x: Atom) -> Option<Mono> {
        match x {
            Atom::G(b) => Some(self.times_group(m, b)),
            Atom::X(t) => self.times_symbol(m, t),
        }
    }

    fn times_label(&self, m: Mono, idx: usize) -> Option<Mono> {
        let (b, mask) = self.split(idx);
        let mut m = self.times_group(m, b);
        for t in self.mask_symbols(mask) {
            m = self.times_symbol(m, t)?;
        }
        Some(m)
    }

    fn coefficient(&self, e: u64) -> CycloNumber {
        CycloNumber::root_of_unity(self.conductor as u32, e as i64)
    }

    fn mono_element(&self, m: Option<Mono>, c: &CycloNumber) -> Element {
        match m {
            None => Element::new(),
            Some(m) => Element::term(self.index_of_label(m.a, m.mask), c * &self.coefficient(m.e)),
        }
    }

    fn atoms(&self, word: &[Letter]) -> Result<Vec<Atom>> {
        let g = &self.datum.group;
        word.iter()
            .map(|l| match l {
                Letter::Group(a) if g.contains(a) => Ok(Atom::G(g.index_of(a))),
                Letter::Group(a) => Err(Error::Precondition(format!("{a} is not in {g}"))),
                Letter::Symbol(s) => self
                    .symbol_position(s)
                    .map(Atom::X)
                    .ok_or_else(|| Error::Precondition(format!("unknown generator {s}"))),
            })
            .collect()
    }

    /// Normal form of `coeff · word`, absorbing letters left to right.
    pub fn normalize_word(&self, word: &[Letter], coeff: &CycloNumber) -> Result<Element> {
        let atoms = self.atoms(word)?;
        let m = atoms
            .iter()
            .try_fold(self.one(), |m, &x| self.times_atom(m, x));
        Ok(self.mono_element(m, coeff))
    }

    /// Normal form of `coeff · word` by applying single rewrite rules at
    /// redexes chosen by `rng` until none is left.
    pub fn rewrite_word<R: Rng + ?Sized>(
        &self,
        word: &[Letter],
        coeff: &CycloNumber,
        rng: &mut R,
    ) -> Result<Element> {
        let mut w = self.atoms(word)?;
        let m = self.elements.len();
        let mut e = 0u64;
        loop {
            let redexes: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| match (w[i], w[i + 1]) {
                    (Atom::G(_), Atom::G(_)) | (Atom::X(_), Atom::G(_)) => true,
                    (Atom::X(s), Atom::X(t)) => s >= t,
                    (Atom::G(_), Atom::X(_)) => false,
                })
                .collect();
            if redexes.is_empty() {
                break;
            }
            let i = redexes[rng.gen_range(0..redexes.len())];
            match (w[i], w[i + 1]) {
                (Atom::G(a), Atom::G(b)) => {
                    w.splice(i..i + 2, [Atom::G(self.mul[a * m + b])]);
                }
                (Atom::X(s), Atom::G(b)) => {
                    e += self.f(b, self.grades[s]);
                    w.swap(i, i + 1);
                }
                (Atom::X(s), Atom::X(t)) if s == t => return Ok(Element::new()),
                (Atom::X(s), Atom::X(t)) => {
                    e += self.f(self.grades[t], self.grades[s]);
                    w.swap(i, i + 1);
                }
                _ => unreachable!(),
            }
        }
        let mut mono = Mono {
            a: 0,
            mask: 0,
            e: e % self.conductor,
        };
        for x in w {
            match x {
                Atom::G(a) => mono.a = a,
                Atom::X(s) => mono.mask |= 1 << s,
            }
        }
        Ok(self.mono_element(Some(mono), coeff))
    }

    fn mult_table(&self) -> Vec<Element> {
        let d = self.dim();
        let one = CycloNumber::one();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.mono_element(self.times_label(self.mono_of(i), j), &one));
            }
        }
        out
    }

    /// `Δ(a x_{s1}⋯x_{sk}) = (a⊗a) Π (x_s⊗1 + g_s⊗x_s)`.
    fn coproduct_of(&self, idx: usize) -> TensorElement {
        let (a, mask) = self.split(idx);
        let syms: Vec<usize> = self.mask_symbols(mask).collect();
        let mut out = TensorElement::new();
        for choice in 0u64..1 << syms.len() {
            let mut left = Some(Mono { a, mask: 0, e: 0 });
            let mut right = Some(Mono { a, mask: 0, e: 0 });
            for (i, &s) in syms.iter().enumerate() {
                if choice >> i & 1 == 1 {
                    left = left.map(|m| self.times_group(m, self.grades[s]));
                    right = right.and_then(|m| self.times_symbol(m, s));
                } else {
                    left = left.and_then(|m| self.times_symbol(m, s));
                }
            }
            if let (Some(l), Some(r)) = (left, right) {
                out.add_term(
                    (self.index_of_label(l.a, l.mask), self.index_of_label(r.a, r.mask)),
                    self.coefficient(l.e + r.e),
                );
            }
        }
        out
    }

    /// `S(a x_1⋯x_k) = (-1)^k g_k^{-1} x_k ⋯ g_1^{-1} x_1 a^{-1}`.
    fn antipode_of(&self, idx: usize) -> Element {
        let (a, mask) = self.split(idx);
        let syms: Vec<usize> = self.mask_symbols(mask).collect();
        let mut m = Some(self.one());
        for &s in syms.iter().rev() {
            m = m
                .map(|m| self.times_group(m, self.inv[self.grades[s]]))
                .and_then(|m| self.times_symbol(m, s));
        }
        let m = m.map(|m| self.times_group(m, self.inv[a]));
        let sign = CycloNumber::from_integer(if syms.len().is_multiple_of(2) { 1 } else { -1 });
        self.mono_element(m, &sign)
    }
}

/// `H(D)` together with its label metadata.
#[derive(Clone, Debug)]
pub struct HdAlgebra {
    layout: HdLayout,
    hopf: HopfStructure,
}

/// Builds `H(D)` and checks every Hopf axiom on the result.
pub fn build_hd(datum: &Datum, max_dim: usize) -> Result<HdAlgebra> {
    let report = validate_datum(datum);
    if !report.is_valid() {
        let failed: Vec<String> = report
            .verdicts
            .failures()
            .map(|(k, v)| format!("{k}: {}", v.witness.clone().unwrap_or_default()))
            .collect();
        return Err(Error::InvalidDatum(failed.join("; ")));
    }
    match report.dimension {
        Some(d) if d <= max_dim as u128 => {}
        d => {
            return Err(Error::BoundExceeded {
                what: "algebra dimension",
                value: d.map_or(usize::MAX, |d| d.min(usize::MAX as u128) as usize),
                bound: max_dim,
            })
        }
    }
    let layout = HdLayout::new(datum)?;
    let d = layout.dim();
    let labels = (0..d).map(|i| layout.label_name(i)).collect();
    let comult = (0..d).map(|i| layout.coproduct_of(i)).collect();
    let counit = (0..d)
        .map(|i| {
            if layout.split(i).1 == 0 {
                CycloNumber::one()
            } else {
                CycloNumber::zero()
            }
        })
        .collect();
    let antipode = (0..d).map(|i| layout.antipode_of(i)).collect();
    let hopf = HopfStructure::new(
        labels,
        layout.mult_table(),
        Element::basis(0),
        comult,
        counit,
        antipode,
    )?;
    let axioms = hopf.verify_axioms();
    if !axioms.all_pass() {
        return Err(Error::Internal(format!("H(D) fails the Hopf axioms:\n{axioms}")));
    }
    Ok(HdAlgebra { layout, hopf })
}

/// The projection `π: H(D) → k[G]` and the coinvariants `B`.
#[derive(Clone, Debug)]
pub struct BiproductReport {
    pub pi: LinearMap,
    pub b: Subspace,
    pub verdicts: VerdictMap,
}

impl HdAlgebra {
    pub fn hopf(&self) -> &HopfStructure {
        &self.hopf
    }

    pub fn layout(&self) -> &HdLayout {
        &self.layout
    }

    pub fn datum(&self) -> &Datum {
        &self.layout.datum
    }

    pub fn dim(&self) -> usize {
        self.hopf.dim()
    }

    pub fn normalize_word(&self, word: &[Letter], coeff: &CycloNumber) -> Result<Element> {
        self.layout.normalize_word(word, coeff)
    }

    pub fn group_element(&self, g: &GroupElement) -> Element {
        Element::basis(self.layout.group_label(g))
    }

    /// Every group label, in group enumeration order.
    pub fn grouplikes(&self) -> Vec<Element> {
        (0..self.layout.group_order())
            .map(|a| Element::basis(self.layout.index_of_label(a, 0)))
            .collect()
    }

    /// The labels of the cyclic generators of `G`.
    pub fn group_generators(&self) -> Vec<Element> {
        let g = self.datum().group();
        (0..g.rank()).map(|i| self.group_element(&g.generator(i))).collect()
    }

    /// The labels `x_s`, in global symbol order.
    pub fn symbol_elements(&self) -> Vec<Element> {
        (0..self.layout.symbols.len())
            .map(|s| Element::basis(self.layout.symbol_label(s)))
            .collect()
    }

    pub fn generators(&self) -> Generators {
        Generators {
            grouplikes: self.group_generators(),
            skew_primitives: self.symbol_elements(),
        }
    }

    pub fn label_map_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.dim())
            .map(|i| {
                let l = self.layout.label(i);
                let wedge: Vec<Value> = l.wedge_part.iter().map(|s| json!([s.grade, s.index])).collect();
                json!({"index": i, "label": self.layout.label_name(i), "group_part": l.group_part, "wedge_part": wedge})
            })
            .collect();
        Value::Array(entries)
    }

    /// The relations of `H(D)` re-derived from the multiplication table.
    pub fn verify_relations(&self) -> VerdictMap {
        let gens: Vec<(GroupElement, Element)> = self
            .layout
            .symbols
            .iter()
            .zip(self.symbol_elements())
            .map(|(s, x)| (s.grade.clone(), x))
            .collect();
        check_relations(&self.hopf, self.datum().form(), &self.grouplikes(), &gens)
    }

    /// `π(a) = a`, `π(x) = 0`, and `B = {x : (I⊗π)Δ(x) = x⊗1}`.
    pub fn projection_and_biproduct(&self) -> BiproductReport {
        let h = &self.hopf;
        let d = h.dim();
        let group = self.datum().group();
        let k = HopfStructure::group_algebra(group);
        let m = k.dim();
        let mut verdicts = VerdictMap::new();

        let images: Vec<Element> = (0..d)
            .map(|i| match self.layout.split(i) {
                (a, 0) => Element::basis(a),
                _ => Element::new(),
            })
            .collect();
        let pi = LinearMap::from_images(m, &images);
        let incl = LinearMap::from_images(d, &self.grouplikes());

        let mut w = None;
        'alg: for i in 0..d {
            for j in 0..d {
                if pi.apply(h.mul_basis(i, j)) != k.mul(&images[i], &images[j]) {
                    w = Some(format!("π({}·{})", h.label(i), h.label(j)));
                    break 'alg;
                }
            }
        }
        if w.is_none() && pi.apply(h.unit()) != *k.unit() {
            w = Some("π(1) ≠ 1".into());
        }
        verdicts.record("pi_algebra_map", w);

        let w = (0..d)
            .find(|&i| {
                k.coproduct(&images[i]) != pi.apply_tensor(h.comult_basis(i))
                    || k.counit_of(&images[i]) != *h.counit_basis(i)
            })
            .map(|i| format!("at {}", h.label(i)));
        verdicts.record("pi_coalgebra_map", w);

        let w = (0..d)
            .find(|&i| pi.apply(h.antipode_basis(i)) != k.antipode_of(&images[i]))
            .map(|i| format!("at {}", h.label(i)));
        verdicts.record("pi_antipode", w);

        let w = (0..m)
            .find(|&a| pi.apply(&incl.image_of_basis(a)) != Element::basis(a))
            .map(|a| format!("π(i({})) ≠ {}", group.element(a), group.element(a)));
        verdicts.record("pi_splits_inclusion", w);

        // (I⊗iπ)Δ(x) − x⊗1 on each basis vector; B is its kernel.
        let ip = incl.compose(&pi).expect("shapes agree");
        let cols: Vec<TensorElement> = (0..d)
            .map(|c| {
                let mut t = TensorElement::new();
                for ((i, j), x) in h.comult_basis(c).iter() {
                    t.add_scaled(&TensorElement::tensor(&Element::basis(*i), &ip.image_of_basis(*j)), x);
                }
                t.add_scaled(
                    &TensorElement::tensor(&Element::basis(c), h.unit()),
                    &CycloNumber::from_integer(-1),
                );
                t
            })
            .collect();
        let b = kernel_of_tensor_images(d, &cols);

        let expected = 1usize << self.layout.symbols.len();
        verdicts.record(
            "b_dimension",
            (b.dim() != expected).then(|| format!("dim B = {} but 2^Σn = {expected}", b.dim())),
        );
        let kg = Subspace::span(d, self.grouplikes().iter().map(|g| g.to_dense(d)));
        let meet = b.intersection_dim(&kg);
        let unit_in_b = b.contains(&h.unit().to_dense(d));
        verdicts.record(
            "b_meets_group_algebra_in_scalars",
            (meet != 1 || !unit_in_b).then(|| format!("dim(B ∩ k[G]) = {meet}")),
        );

        let mut e = Echelon::new(d);
        for bv in b.basis() {
            let be = Element::from_dense(bv);
            for g in self.grouplikes() {
                e.insert(&h.mul(&be, &g).to_dense(d));
            }
        }
        verdicts.record(
            "multiplication_b_kg_bijective",
            (e.rank() != d || b.dim() * m != d)
                .then(|| format!("B·k[G] spans {} of {d}", e.rank())),
        );
        BiproductReport { pi, b, verdicts }
    }
}

fn kernel_of_tensor_images(d: usize, cols: &[TensorElement]) -> Subspace {
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, CycloNumber)>> = BTreeMap::new();
    for (c, t) in cols.iter().enumerate() {
        for (k, v) in t.iter() {
            rows.entry(*k).or_default().push((c, v.clone()));
        }
    }
    let mut e = Echelon::new(d);
    for entries in rows.into_values() {
        let mut row = vec![CycloNumber::zero(); d];
        for (c, v) in entries {
            row[c] = v;
        }
        e.insert(&row);
    }
    e.null_space()
}

/// Checks, in an arbitrary Hopf algebra, the defining relations of `H(D)`
/// for the given grouplikes (indexed like the elements of `form`'s group)
/// and graded skew primitives `(g, x)` with `x ∈ V_g`.
pub fn check_relations(
    h: &HopfStructure,
    form: &SkewForm,
    grouplikes: &[Element],
    gens: &[(GroupElement, Element)],
) -> VerdictMap {
    let g = form.group();
    let mut r = VerdictMap::new();
    let w = gens
        .iter()
        .position(|(_, x)| !h.mul(x, x).is_zero())
        .map(|i| format!("x_{i}² ≠ 0"));
    r.record("exterior_square", w);

    let w = gens
        .iter()
        .enumerate()
        .find(|(_, (grade, x))| {
            let gl = &grouplikes[g.index_of(grade)];
            h.mul(gl, x) != -&h.mul(x, gl)
        })
        .map(|(i, (grade, _))| format!("g x_{i} ≠ -x_{i} g for g = {grade}"));
    r.record("grade_anticommutes", w);

    let mut w = None;
    'sym: for (i, (gi, x)) in gens.iter().enumerate() {
        for (j, (gj, y)) in gens.iter().enumerate() {
            if h.mul(x, y) != h.mul(y, x).scale(&form.eval(gj, gi)) {
                w = Some(format!("x_{i} x_{j} ≠ F({gj},{gi}) x_{j} x_{i}"));
                break 'sym;
            }
        }
    }
    r.record("symbol_commutation", w);

    let mut w = None;
    'grp: for (i, (gi, x)) in gens.iter().enumerate() {
        for a in g.elements() {
            let al = &grouplikes[g.index_of(&a)];
            if h.mul(x, al) != h.mul(al, x).scale(&form.eval(&a, gi)) {
                w = Some(format!("x_{i} a ≠ F(a,{gi}) a x_{i} for a = {a}"));
                break 'grp;
            }
        }
    }
    r.record("group_commutation", w);
    r
}

/// Algebra generators of a pointed Hopf algebra: grouplikes generating
/// `G(A)` and a list of skew primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub grouplikes: Vec<Element>,
    pub skew_primitives: Vec<Element>,
}

pub fn element_to_json(x: &Element) -> Value {
    Value::Array(
        x.iter()
            .map(|(i, c)| json!([i, serde_json::to_value(c).expect("cyclo serializes")]))
            .collect(),
    )
}

pub fn element_from_json(v: &Value) -> Result<Element> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("element must be an array of [index, coefficient]".into()))?;
    let mut out = Element::new();
    for t in arr {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse("element terms are [index, coefficient]".into()))?;
        let i = pair[0]
            .as_u64()
            .ok_or_else(|| Error::Parse("element index must be a non-negative integer".into()))?;
        let c: CycloNumber = serde_json::from_value(pair[1].clone()).map_err(|e| Error::Parse(e.to_string()))?;
        out.add_term(i as usize, c);
    }
    Ok(out)
}

impl Generators {
    pub fn to_json(&self) -> Value {
        json!({
            "grouplikes": self.grouplikes.iter().map(element_to_json).collect::<Vec<_>>(),
            "skew_primitives": self.skew_primitives.iter().map(element_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let list = |key: &str| -> Result<Vec<Element>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
                .iter()
                .map(element_from_json)
                .collect()
        };
        Ok(Generators {
            grouplikes: list("grouplikes")?,
            skew_primitives: list("skew_primitives")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(n: u32) -> Datum {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let f = SkewForm::new(g.clone(), 2, vec![vec![1]]).unwrap();
        let mut m = BTreeMap::new();
        if n > 0 {
            m.insert(GroupElement(vec![1]), n);
        }
        Datum::new(g, f, m).unwrap()
    }

    #[test]
    fn sweedler_words() {
        let l = HdLayout::new(&h(1)).unwrap();
        let g = Letter::Group(GroupElement(vec![1]));
        let x = Letter::Symbol(l.symbols()[0].clone());
        let one = CycloNumber::one();
        assert_eq!(
            l.normalize_word(&[x.clone(), g.clone()], &one).unwrap(),
            Element::term(3, CycloNumber::from_integer(-1))
        );
        assert!(l.normalize_word(&[x.clone(), x], &one).unwrap().is_zero());
        assert_eq!(l.normalize_word(&[g.clone(), g], &one).unwrap(), Element::basis(0));
    }

    #[test]
    fn h2_swap() {
        let l = HdLayout::new(&h(2)).unwrap();
        let x1 = Letter::Symbol(l.symbols()[0].clone());
        let x2 = Letter::Symbol(l.symbols()[1].clone());
        let one = CycloNumber::one();
        let e = l.normalize_word(&[x2, x1], &one).unwrap();
        assert_eq!(e, Element::term(l.index_of_label(0, 0b11), CycloNumber::from_integer(-1)));
    }

    #[test]
    fn rewriting_agrees_with_direct_normalization() {
        let l = HdLayout::new(&h(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let letters = [
            Letter::Group(GroupElement(vec![0])),
            Letter::Group(GroupElement(vec![1])),
            Letter::Symbol(l.symbols()[0].clone()),
            Letter::Symbol(l.symbols()[1].clone()),
        ];
        let c = CycloNumber::from_integer(3);
        for _ in 0..200 {
            let len = rng.gen_range(0..8);
            let w: Vec<Letter> = (0..len).map(|_| letters[rng.gen_range(0..4)].clone()).collect();
            assert_eq!(l.normalize_word(&w, &c).unwrap(), l.rewrite_word(&w, &c, &mut rng).unwrap());
        }
    }

    #[test]
    fn sweedler_structure() {
        let a = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
        let hs = a.hopf();
        assert_eq!(hs.labels(), ["1", "x[1]_1", "g[1]", "g[1]·x[1]_1"]);
        let x = Element::basis(1);
        let gx = Element::basis(3);
        assert_eq!(hs.antipode_of(&x), -&gx);
        assert_eq!(hs.antipode_of(&hs.antipode_of(&x)), -&x);
        assert!(a.verify_relations().all_pass());
        let bp = a.projection_and_biproduct();
        assert!(bp.verdicts.all_pass(), "{}", bp.verdicts);
        let expect = Subspace::span(4, [Element::basis(0).to_dense(4), x.to_dense(4)]);
        assert_eq!(bp.b, expect);
    }

    #[test]
    fn datum_json_round_trip() {
        let d = h(2);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"group":{"cyclic_factors":[2]},"form":{"cyclic_factors":[2],"conductor":2,"exponent_matrix":[[1]]},"n":[{"element":[1],"value":2}]}"#
        );
        let back: Datum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn generators_json_round_trip() {
        let a = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
        let g = a.generators();
        assert_eq!(Generators::from_json(&g.to_json()).unwrap(), g);
    }
}
