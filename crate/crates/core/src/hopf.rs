//! Finite-dimensional Hopf algebras as exact structure-constant tables.
//!
//! A [`HopfStructure`] fixes a basis `b_0, …, b_{d-1}` and stores
//!
//! * `b_i · b_j` as a sparse [`Element`],
//! * the unit,
//! * `Δ(b_i)` as a sparse [`TensorElement`],
//! * `ε(b_i)`,
//! * `S(b_i)`.
//!
//! Everything else (products of arbitrary elements, products in `A⊗A` and
//! `A⊗A⊗A`, the dual, the co-opposite, skew-primitive spaces, the first
//! coradical term) is derived from these tables with exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::abgroup::FiniteAbelianGroup;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, Echelon, Matrix, Subspace, Vector};
use crate::report::VerdictMap;

/// A sparse linear combination keyed by basis indices (or tuples of them).
/// No stored coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Sparse<K: Ord>(BTreeMap<K, CycloNumber>);

pub type Element = Sparse<usize>;
pub type TensorElement = Sparse<(usize, usize)>;
pub type Tensor3 = Sparse<(usize, usize, usize)>;

impl<K: Ord + Copy> Sparse<K> {
    pub fn new() -> Self {
        Sparse(BTreeMap::new())
    }

    pub fn term(k: K, c: CycloNumber) -> Self {
        let mut s = Self::new();
        s.add_term(k, c);
        s
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, CycloNumber::one())
    }

    pub fn add_term(&mut self, k: K, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &CycloNumber) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.0 {
            self.add_term(*k, v * c);
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Sparse(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    pub fn get(&self, k: &K) -> CycloNumber {
        self.0.get(k).cloned().unwrap_or_else(CycloNumber::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &CycloNumber)> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.0.keys()
    }

    pub fn map_keys<L: Ord + Copy>(&self, f: impl Fn(K) -> L) -> Sparse<L> {
        let mut out = Sparse::new();
        for (k, v) in &self.0 {
            out.add_term(f(*k), v.clone());
        }
        out
    }
}

impl<K: Ord + Copy> std::ops::Add<&Sparse<K>> for &Sparse<K> {
    type Output = Sparse<K>;
    fn add(self, rhs: &Sparse<K>) -> Sparse<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycloNumber::one());
        out
    }
}

impl<K: Ord + Copy> std::ops::Sub<&Sparse<K>> for &Sparse<K> {
    type Output = Sparse<K>;
    fn sub(self, rhs: &Sparse<K>) -> Sparse<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycloNumber::from_integer(-1));
        out
    }
}

impl<K: Ord + Copy> std::ops::Neg for &Sparse<K> {
    type Output = Sparse<K>;
    fn neg(self) -> Sparse<K> {
        self.scale(&CycloNumber::from_integer(-1))
    }
}

impl<K: Ord + Copy + fmt::Debug> fmt::Debug for Sparse<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("({v})·{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Element {
    pub fn from_dense(v: &[CycloNumber]) -> Self {
        let mut out = Self::new();
        for (i, c) in v.iter().enumerate() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn to_dense(&self, d: usize) -> Vector {
        let mut v = vec![CycloNumber::zero(); d];
        for (i, c) in self.iter() {
            v[*i] = c.clone();
        }
        v
    }
}

impl TensorElement {
    pub fn tensor(a: &Element, b: &Element) -> Self {
        let mut out = Self::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_term((*i, *j), x * y);
            }
        }
        out
    }

    /// `T_{21}`.
    pub fn flip(&self) -> Self {
        self.map_keys(|(i, j)| (j, i))
    }

    /// The `d×d` coefficient matrix.
    pub fn to_matrix(&self, d: usize) -> Matrix {
        let mut m = Matrix::zeros(d, d);
        for ((i, j), c) in self.iter() {
            m.set(*i, *j, c.clone());
        }
        m
    }
}

/// A linear map between algebras with fixed bases; column `j` is the image
/// of domain basis vector `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn from_matrix(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    pub fn from_images(codomain_dim: usize, images: &[Element]) -> Self {
        let mut m = Matrix::zeros(codomain_dim, images.len());
        for (j, img) in images.iter().enumerate() {
            for (i, c) in img.iter() {
                m.set(*i, j, c.clone());
            }
        }
        LinearMap { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn image_of_basis(&self, j: usize) -> Element {
        Element::from_dense(&self.matrix.column(j))
    }

    pub fn apply(&self, x: &Element) -> Element {
        let mut out = Element::new();
        for (j, c) in x.iter() {
            for i in 0..self.codomain_dim() {
                let m = self.matrix.get(i, *j);
                if !m.is_zero() {
                    out.add_term(i, m * c);
                }
            }
        }
        out
    }

    pub fn apply_tensor(&self, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new();
        for ((i, j), c) in t.iter() {
            let a = self.image_of_basis(*i);
            let b = self.image_of_basis(*j);
            out.add_scaled(&TensorElement::tensor(&a, &b), c);
        }
        out
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.matrix.inverse().map(|m| LinearMap { matrix: m })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// A finite-dimensional Hopf algebra given by structure constants.
#[derive(Clone, PartialEq, Eq)]
pub struct HopfStructure {
    labels: Vec<String>,
    mult: Vec<Element>,
    unit: Element,
    comult: Vec<TensorElement>,
    counit: Vec<CycloNumber>,
    antipode: Vec<Element>,
}

impl fmt::Debug for HopfStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HopfStructure")
            .field("dimension", &self.dim())
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

fn check_index(d: usize, i: usize) -> Result<()> {
    if i >= d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: i,
        });
    }
    Ok(())
}

impl HopfStructure {
    pub fn new(
        labels: Vec<String>,
        mult: Vec<Element>,
        unit: Element,
        comult: Vec<TensorElement>,
        counit: Vec<CycloNumber>,
        antipode: Vec<Element>,
    ) -> Result<Self> {
        let d = labels.len();
        let shape = [
            (mult.len(), d * d),
            (comult.len(), d),
            (counit.len(), d),
            (antipode.len(), d),
        ];
        for (found, expected) in shape {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        for e in mult.iter().chain(&antipode).chain(std::iter::once(&unit)) {
            for i in e.keys() {
                check_index(d, *i)?;
            }
        }
        for t in &comult {
            for (i, j) in t.keys() {
                check_index(d, *i)?;
                check_index(d, *j)?;
            }
        }
        Ok(HopfStructure {
            labels,
            mult,
            unit,
            comult,
            counit,
            antipode,
        })
    }

    /// The group algebra `k[G]`, basis in [`FiniteAbelianGroup::elements`] order.
    pub fn group_algebra(group: &FiniteAbelianGroup) -> Self {
        let d = group.order();
        let elems: Vec<_> = group.elements().collect();
        let labels = elems.iter().map(|g| format!("g{g}")).collect();
        let mut mult = Vec::with_capacity(d * d);
        for a in &elems {
            for b in &elems {
                mult.push(Element::basis(group.index_of(&group.mul(a, b))));
            }
        }
        let comult = (0..d).map(|i| TensorElement::basis((i, i))).collect();
        let antipode = elems
            .iter()
            .map(|g| Element::basis(group.index_of(&group.inv(g))))
            .collect();
        HopfStructure {
            labels,
            mult,
            unit: Element::basis(0),
            comult,
            counit: vec![CycloNumber::one(); d],
            antipode,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(i)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Element {
        &self.mult[i * self.dim() + j]
    }

    pub fn comult_basis(&self, i: usize) -> &TensorElement {
        &self.comult[i]
    }

    pub fn counit_basis(&self, i: usize) -> &CycloNumber {
        &self.counit[i]
    }

    pub fn antipode_basis(&self, i: usize) -> &Element {
        &self.antipode[i]
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        for i in x.keys() {
            check_index(self.dim(), *i)?;
        }
        Ok(())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(self.mul_basis(*i, *j), &(x * y));
            }
        }
        out
    }

    pub fn checked_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, a: &Element, k: usize) -> Element {
        (0..k).fold(self.unit.clone(), |acc, _| self.mul(&acc, a))
    }

    pub fn coproduct(&self, a: &Element) -> TensorElement {
        let mut out = TensorElement::new();
        for (i, x) in a.iter() {
            out.add_scaled(&self.comult[*i], x);
        }
        out
    }

    pub fn counit_of(&self, a: &Element) -> CycloNumber {
        a.iter().map(|(i, x)| x * &self.counit[*i]).sum()
    }

    pub fn antipode_of(&self, a: &Element) -> Element {
        let mut out = Element::new();
        for (i, x) in a.iter() {
            out.add_scaled(&self.antipode[*i], x);
        }
        out
    }

    /// Matrix of `S`; column `j` is `S(b_j)`.
    pub fn antipode_matrix(&self) -> Matrix {
        LinearMap::from_images(self.dim(), &self.antipode).matrix
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_mult_matrix(&self, a: &Element) -> Matrix {
        let images: Vec<Element> = (0..self.dim())
            .map(|j| self.mul(a, &Element::basis(j)))
            .collect();
        LinearMap::from_images(self.dim(), &images).matrix
    }

    /// Two-sided inverse of `a`, if it exists.
    pub fn inverse_of(&self, a: &Element) -> Option<Element> {
        let m = self.left_mult_matrix(a);
        let v = m.solve(&self.unit.to_dense(self.dim()))?;
        let inv = Element::from_dense(&v);
        (self.mul(&inv, a) == self.unit).then_some(inv)
    }

    pub fn tensor_mul(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new();
        for ((i, j), x) in a.iter() {
            for ((k, l), y) in b.iter() {
                let left = self.mul_basis(*i, *k);
                let right = self.mul_basis(*j, *l);
                out.add_scaled(&TensorElement::tensor(left, right), &(x * y));
            }
        }
        out
    }

    pub fn tensor3_mul(&self, a: &Tensor3, b: &Tensor3) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((i, j, k), x) in a.iter() {
            for ((p, q, r), y) in b.iter() {
                let c = x * y;
                for (u, cu) in self.mul_basis(*i, *p).iter() {
                    for (v, cv) in self.mul_basis(*j, *q).iter() {
                        let cuv = &(cu * cv) * &c;
                        for (w, cw) in self.mul_basis(*k, *r).iter() {
                            out.add_term((*u, *v, *w), &cuv * cw);
                        }
                    }
                }
            }
        }
        out
    }

    /// `T_{12}`, `T_{13}` or `T_{23}`: places the legs of `t` in the given
    /// slots of `A⊗A⊗A` and the unit in the remaining one.
    pub fn embed(&self, t: &TensorElement, slots: (usize, usize)) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((i, j), x) in t.iter() {
            for (u, cu) in self.unit.iter() {
                let key = match slots {
                    (1, 2) => (*i, *j, *u),
                    (1, 3) => (*i, *u, *j),
                    (2, 3) => (*u, *i, *j),
                    (2, 1) => (*j, *i, *u),
                    _ => panic!("unsupported slot pair {slots:?}"),
                };
                out.add_term(key, x * cu);
            }
        }
        out
    }

    /// `(Δ⊗I)(t)`.
    pub fn coproduct_left(&self, t: &TensorElement) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((i, j), x) in t.iter() {
            for ((p, q), y) in self.comult[*i].iter() {
                out.add_term((*p, *q, *j), x * y);
            }
        }
        out
    }

    /// `(I⊗Δ)(t)`.
    pub fn coproduct_right(&self, t: &TensorElement) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((i, j), x) in t.iter() {
            for ((p, q), y) in self.comult[*j].iter() {
                out.add_term((*i, *p, *q), x * y);
            }
        }
        out
    }

    /// `(ε⊗I)(t)`.
    pub fn counit_left(&self, t: &TensorElement) -> Element {
        let mut out = Element::new();
        for ((i, j), x) in t.iter() {
            out.add_term(*j, x * &self.counit[*i]);
        }
        out
    }

    /// `(I⊗ε)(t)`.
    pub fn counit_right(&self, t: &TensorElement) -> Element {
        let mut out = Element::new();
        for ((i, j), x) in t.iter() {
            out.add_term(*i, x * &self.counit[*j]);
        }
        out
    }

    fn lbl(&self, idx: &[usize]) -> String {
        let names: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("({})", names.join(", "))
    }

    /// Exhaustive check of every Hopf algebra axiom on basis tuples.
    pub fn verify_axioms(&self) -> VerdictMap {
        let d = self.dim();
        let mut r = VerdictMap::new();
        let one = &self.unit;

        let mut w = None;
        'assoc: for i in 0..d {
            for j in 0..d {
                let ij = self.mul_basis(i, j);
                for k in 0..d {
                    let left = self.mul(ij, &Element::basis(k));
                    let right = self.mul(&Element::basis(i), self.mul_basis(j, k));
                    if left != right {
                        w = Some(self.lbl(&[i, j, k]));
                        break 'assoc;
                    }
                }
            }
        }
        r.record("associativity", w);

        let w = (0..d)
            .find(|&i| {
                let b = Element::basis(i);
                self.mul(one, &b) != b || self.mul(&b, one) != b
            })
            .map(|i| self.lbl(&[i]));
        r.record("unitality", w);

        let w = (0..d)
            .find(|&i| {
                let t = &self.comult[i];
                self.coproduct_left(t) != self.coproduct_right(t)
            })
            .map(|i| self.lbl(&[i]));
        r.record("coassociativity", w);

        let w = (0..d)
            .find(|&i| {
                let t = &self.comult[i];
                let b = Element::basis(i);
                self.counit_left(t) != b || self.counit_right(t) != b
            })
            .map(|i| self.lbl(&[i]));
        r.record("counitality", w);

        let mut w = None;
        'hom: for i in 0..d {
            for j in 0..d {
                let lhs = self.coproduct(self.mul_basis(i, j));
                let rhs = self.tensor_mul(&self.comult[i], &self.comult[j]);
                if lhs != rhs {
                    w = Some(self.lbl(&[i, j]));
                    break 'hom;
                }
            }
        }
        r.record("comultiplication_multiplicative", w);
        r.record(
            "comultiplication_unital",
            (self.coproduct(one) != TensorElement::tensor(one, one)).then(|| "Δ(1) ≠ 1⊗1".to_string()),
        );

        let mut w = None;
        'eps: for i in 0..d {
            for j in 0..d {
                if self.counit_of(self.mul_basis(i, j)) != &self.counit[i] * &self.counit[j] {
                    w = Some(self.lbl(&[i, j]));
                    break 'eps;
                }
            }
        }
        r.record("counit_multiplicative", w);
        r.record(
            "counit_unital",
            (!self.counit_of(one).is_one()).then(|| "ε(1) ≠ 1".to_string()),
        );

        let w = (0..d)
            .find(|&i| {
                let expected = one.scale(&self.counit[i]);
                let mut left = Element::new();
                let mut right = Element::new();
                for ((p, q), x) in self.comult[i].iter() {
                    left.add_scaled(&self.mul(&self.antipode[*p], &Element::basis(*q)), x);
                    right.add_scaled(&self.mul(&Element::basis(*p), &self.antipode[*q]), x);
                }
                left != expected || right != expected
            })
            .map(|i| self.lbl(&[i]));
        r.record("antipode", w);
        r
    }

    /// Standard consequences of the axioms: `S(1) = 1`, `ε∘S = ε`, and
    /// `Δ∘S = (S⊗S)∘Δ^op`.
    pub fn verify_antipode_consequences(&self) -> VerdictMap {
        let mut r = VerdictMap::new();
        r.record(
            "antipode_unital",
            (self.antipode_of(&self.unit) != self.unit).then(|| "S(1) ≠ 1".to_string()),
        );
        let w = (0..self.dim())
            .find(|&i| self.counit_of(&self.antipode[i]) != self.counit[i])
            .map(|i| self.lbl(&[i]));
        r.record("counit_antipode", w);
        let s = LinearMap::from_images(self.dim(), &self.antipode);
        let w = (0..self.dim())
            .find(|&i| self.coproduct(&self.antipode[i]) != s.apply_tensor(&self.comult[i].flip()))
            .map(|i| self.lbl(&[i]));
        r.record("antipode_anti_coalgebra", w);
        r
    }

    pub fn is_grouplike(&self, x: &Element) -> bool {
        self.counit_of(x).is_one() && self.coproduct(x) == TensorElement::tensor(x, x)
    }

    /// Kernel of the linear map `A → A⊗A` (or similar) sending `b_c` to `cols[c]`.
    fn kernel_of_images<K: Ord + Copy>(&self, cols: &[Sparse<K>]) -> Subspace {
        let d = cols.len();
        let mut rows: BTreeMap<K, Vec<(usize, CycloNumber)>> = BTreeMap::new();
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
            if e.rank() == d {
                break;
            }
        }
        e.null_space()
    }

    /// `P_{g,h} = {x : Δ(x) = x⊗g + h⊗x}`.
    pub fn skew_primitive_space(&self, g: &Element, h: &Element) -> Result<Subspace> {
        self.check_element(g)?;
        self.check_element(h)?;
        for (name, x) in [("g", g), ("h", h)] {
            if !self.is_grouplike(x) {
                return Err(Error::Precondition(format!("{name} = {x:?} is not grouplike")));
            }
        }
        let cols: Vec<TensorElement> = (0..self.dim())
            .map(|c| {
                let b = Element::basis(c);
                let mut t = self.comult[c].clone();
                t.add_scaled(&TensorElement::tensor(&b, g), &CycloNumber::from_integer(-1));
                t.add_scaled(&TensorElement::tensor(h, &b), &CycloNumber::from_integer(-1));
                t
            })
            .collect();
        Ok(self.kernel_of_images(&cols))
    }

    /// `A_1 = Δ^{-1}(A⊗A_0 + A_0⊗A)` with `A_0` spanned by `grouplikes`,
    /// together with the Taft–Wilson decomposition count.
    pub fn coradical_level1(&self, grouplikes: &[Element]) -> Result<CoradicalLevel1> {
        let d = self.dim();
        for g in grouplikes {
            self.check_element(g)?;
            if !self.is_grouplike(g) {
                return Err(Error::Precondition(format!("{g:?} is not grouplike")));
            }
        }
        let dense: Vec<Vector> = grouplikes.iter().map(|g| g.to_dense(d)).collect();
        let a0 = Subspace::span(d, &dense);
        if a0.dim() != grouplikes.len() {
            return Err(Error::Precondition("grouplikes are linearly dependent".into()));
        }
        for g in grouplikes {
            for h in grouplikes {
                if !a0.contains(&self.mul(g, h).to_dense(d)) {
                    return Err(Error::Precondition("grouplikes are not closed under products".into()));
                }
            }
        }
        // Functionals vanishing on A_0; (q_a ⊗ q_b)∘Δ cut out A_1.
        let annihilator = Matrix::from_rows(dense.clone())
            .map(|m| m.kernel())
            .unwrap_or_else(|_| Subspace::span(d, (0..d).map(|i| crate::linalg::unit_vector(d, i))));
        let qs = annihilator.basis();
        let cols: Vec<Sparse<(usize, usize)>> = (0..d)
            .map(|c| {
                let mut t = Sparse::new();
                for ((i, j), x) in self.comult[c].iter() {
                    for (a, qa) in qs.iter().enumerate() {
                        if qa[*i].is_zero() {
                            continue;
                        }
                        for (b, qb) in qs.iter().enumerate() {
                            if !qb[*j].is_zero() {
                                t.add_term((a, b), &(x * &qa[*i]) * &qb[*j]);
                            }
                        }
                    }
                }
                t
            })
            .collect();
        let a1 = self.kernel_of_images(&cols);

        let mut verdicts = VerdictMap::new();
        verdicts.record(
            "contains_coradical",
            (!a1.contains_subspace(&a0)).then(|| "A_0 ⊄ A_1".to_string()),
        );
        let mut pairs = Vec::new();
        let mut direct = Echelon::new(d);
        for v in &dense {
            direct.insert(v);
        }
        let mut expected = grouplikes.len();
        let mut missing = None;
        for (gi, g) in grouplikes.iter().enumerate() {
            for (hi, h) in grouplikes.iter().enumerate() {
                let p = self.skew_primitive_space(g, h)?;
                if missing.is_none() && !a1.contains_subspace(&p) {
                    missing = Some(format!("P_{{{gi},{hi}}} ⊄ A_1"));
                }
                // Complement of span{g − h}: echelon basis reduced against g − h.
                let gh = (g - h).to_dense(d);
                let mut local = Echelon::new(d);
                local.insert(&gh);
                let mut complement = 0;
                for v in p.basis() {
                    if local.insert(v) {
                        complement += 1;
                        direct.insert(&local.reduce(v));
                        direct.insert(v);
                    }
                }
                expected += complement;
                pairs.push(SkewPrimitiveCount {
                    g: gi,
                    h: hi,
                    dim_p: p.dim(),
                    dim_complement: complement,
                });
            }
        }
        verdicts.record("contains_skew_primitives", missing);
        verdicts.record(
            "decomposition_direct",
            (direct.rank() != expected)
                .then(|| format!("summands span {} but dimensions add to {expected}", direct.rank())),
        );
        verdicts.record(
            "decomposition_exhausts",
            (Subspace::from_echelon(direct) != a1 || a1.dim() != expected)
                .then(|| format!("dim A_1 = {} but the decomposition gives {expected}", a1.dim())),
        );
        Ok(CoradicalLevel1 {
            a1,
            decomposition_dim: expected,
            pairs,
            verdicts,
        })
    }

    /// The dual Hopf algebra on the dual basis `b_i*`.
    pub fn dual(&self) -> HopfStructure {
        let d = self.dim();
        let labels = self.labels.iter().map(|l| format!("{l}*")).collect();
        let mut mult = vec![Element::new(); d * d];
        for (k, t) in self.comult.iter().enumerate() {
            for ((i, j), c) in t.iter() {
                mult[i * d + j].add_term(k, c.clone());
            }
        }
        let mut comult = vec![TensorElement::new(); d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.mul_basis(i, j).iter() {
                    comult[*k].add_term((i, j), c.clone());
                }
            }
        }
        let unit = Element::from_dense(&self.counit);
        let counit = self.unit.to_dense(d);
        let mut antipode = vec![Element::new(); d];
        for (j, s) in self.antipode.iter().enumerate() {
            for (i, c) in s.iter() {
                antipode[*i].add_term(j, c.clone());
            }
        }
        HopfStructure {
            labels,
            mult,
            unit,
            comult,
            counit,
            antipode,
        }
    }

    /// `A^cop`: flipped comultiplication, antipode `S^{-1}`.
    pub fn cop(&self) -> Result<HopfStructure> {
        let s_inv = LinearMap::from_images(self.dim(), &self.antipode)
            .inverse()
            .ok_or_else(|| Error::Precondition("antipode is not invertible".into()))?;
        Ok(HopfStructure {
            labels: self.labels.clone(),
            mult: self.mult.clone(),
            unit: self.unit.clone(),
            comult: self.comult.iter().map(TensorElement::flip).collect(),
            counit: self.counit.clone(),
            antipode: (0..self.dim()).map(|j| s_inv.image_of_basis(j)).collect(),
        })
    }

    /// A copy with one multiplication constant replaced.
    pub fn with_mult_entry(&self, i: usize, j: usize, value: Element) -> HopfStructure {
        let mut out = self.clone();
        let d = self.dim();
        out.mult[i * d + j] = value;
        out
    }

    /// Canonical JSON form of the structure-constant file.
    pub fn to_json(&self) -> Value {
        let d = self.dim();
        let c = |x: &CycloNumber| serde_json::to_value(x).expect("cyclo serializes");
        let mut mult = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, x) in self.mul_basis(i, j).iter() {
                    mult.push(json!([i, j, k, c(x)]));
                }
            }
        }
        let mut comult = Vec::new();
        for (i, t) in self.comult.iter().enumerate() {
            for ((j, k), x) in t.iter() {
                comult.push(json!([i, j, k, c(x)]));
            }
        }
        let antipode: Vec<Value> = self
            .antipode
            .iter()
            .map(|s| Value::Array(s.to_dense(d).iter().map(c).collect()))
            .collect();
        json!({
            "dimension": d,
            "basis_labels": self.labels,
            "mult": mult,
            "comult": comult,
            "counit": self.counit.iter().map(c).collect::<Vec<_>>(),
            "antipode": antipode,
        })
    }

    /// Parses a structure-constant file. The unit is not stored in the file;
    /// it is recovered as the unique two-sided identity of `mult`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let err = |m: &str| Error::Parse(m.to_string());
        let obj = v.as_object().ok_or_else(|| err("structure file must be an object"))?;
        let d = obj
            .get("dimension")
            .and_then(Value::as_u64)
            .ok_or_else(|| err("missing `dimension`"))? as usize;
        let labels: Vec<String> = serde_json::from_value(
            obj.get("basis_labels").cloned().ok_or_else(|| err("missing `basis_labels`"))?,
        )
        .map_err(|e| Error::Parse(e.to_string()))?;
        if labels.len() != d {
            return Err(err("`basis_labels` length differs from `dimension`"));
        }
        let cyclo = |x: &Value| -> Result<CycloNumber> {
            serde_json::from_value(x.clone()).map_err(|e| Error::Parse(e.to_string()))
        };
        let quads = |key: &str| -> Result<Vec<(usize, usize, usize, CycloNumber)>> {
            let arr = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?;
            arr.iter()
                .map(|e| {
                    let e = e
                        .as_array()
                        .filter(|a| a.len() == 4)
                        .ok_or_else(|| Error::Parse(format!("`{key}` entries are [i,j,k,c]")))?;
                    let idx = |n: usize| -> Result<usize> {
                        let i = e[n]
                            .as_u64()
                            .ok_or_else(|| Error::Parse(format!("`{key}` index is not an integer")))?
                            as usize;
                        if i >= d {
                            return Err(Error::Parse(format!("`{key}` index {i} out of range")));
                        }
                        Ok(i)
                    };
                    Ok((idx(0)?, idx(1)?, idx(2)?, cyclo(&e[3])?))
                })
                .collect()
        };
        let mut mult = vec![Element::new(); d * d];
        for (i, j, k, c) in quads("mult")? {
            mult[i * d + j].add_term(k, c);
        }
        let mut comult = vec![TensorElement::new(); d];
        for (i, j, k, c) in quads("comult")? {
            comult[i].add_term((j, k), c);
        }
        let counit: Vec<CycloNumber> = obj
            .get("counit")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing `counit`"))?
            .iter()
            .map(cyclo)
            .collect::<Result<_>>()?;
        if counit.len() != d {
            return Err(err("`counit` length differs from `dimension`"));
        }
        let rows = obj
            .get("antipode")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing `antipode`"))?;
        if rows.len() != d {
            return Err(err("`antipode` must have `dimension` rows"));
        }
        let mut antipode = Vec::with_capacity(d);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == d).ok_or_else(|| err("`antipode` rows must have `dimension` entries"))?;
            let dense: Vec<CycloNumber> = row.iter().map(cyclo).collect::<Result<_>>()?;
            antipode.push(Element::from_dense(&dense));
        }
        let unit = find_unit(d, &mult).ok_or_else(|| err("multiplication table has no two-sided unit"))?;
        HopfStructure::new(labels, mult, unit, comult, counit, antipode)
    }
}

fn find_unit(d: usize, mult: &[Element]) -> Option<Element> {
    if d == 0 {
        return None;
    }
    // Σ_k u_k b_k b_j = b_j for every j.
    let mut rows = Vec::with_capacity(d * d);
    let mut rhs = Vec::with_capacity(d * d);
    for j in 0..d {
        for l in 0..d {
            rows.push((0..d).map(|k| mult[k * d + j].get(&l)).collect::<Vector>());
            rhs.push(if j == l { CycloNumber::one() } else { CycloNumber::zero() });
        }
    }
    let u = Matrix::from_rows(rows).ok()?.solve(&rhs)?;
    let unit = Element::from_dense(&u);
    let right_ok = (0..d).all(|j| {
        let mut p = Element::new();
        for (k, c) in unit.iter() {
            p.add_scaled(&mult[j * d + k], c);
        }
        p == Element::basis(j)
    });
    (right_ok && !is_zero_vector(&u)).then_some(unit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPrimitiveCount {
    pub g: usize,
    pub h: usize,
    pub dim_p: usize,
    pub dim_complement: usize,
}

/// `A_1` and its comparison with `kG ⊕ (⊕ P'_{g,h})`.
#[derive(Clone, Debug)]
pub struct CoradicalLevel1 {
    pub a1: Subspace,
    /// `|G| + Σ dim P'_{g,h}`.
    pub decomposition_dim: usize,
    pub pairs: Vec<SkewPrimitiveCount>,
    pub verdicts: VerdictMap,
}

impl CoradicalLevel1 {
    pub fn dim(&self) -> usize {
        self.a1.dim()
    }
}
