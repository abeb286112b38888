//! Finite abelian groups, their characters, and non-degenerate skew-symmetric
//! bicharacters.
//!
//! A group is a product of cyclic factors `Z_{d_1} × … × Z_{d_r}` with fixed
//! generators `e_i`. A [`SkewForm`] is stored as an integer matrix `E` modulo
//! a conductor `N` with `F(e_i, e_j) = ζ_N^{E_ij}`, so
//! `F(g, h) = ζ_N^{Σ E_ij g_i h_j}`.
//!
//! ```
//! use hopfforge::abgroup::{enumerate_forms, FiniteAbelianGroup, DEFAULT_MAX_ORDER};
//!
//! let z2 = FiniteAbelianGroup::new(vec![2]).unwrap();
//! assert_eq!(enumerate_forms(&z2, DEFAULT_MAX_ORDER).unwrap().len(), 1);
//! let z3 = FiniteAbelianGroup::new(vec![3]).unwrap();
//! assert!(enumerate_forms(&z3, DEFAULT_MAX_ORDER).unwrap().is_empty());
//! ```

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::report::VerdictMap;

/// Largest group order handled by the exhaustive searches unless overridden.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    cyclic_factors: Vec<u32>,
}

/// Exponent vector of a group element with respect to the cyclic generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u32>);

/// A character `χ_c` with `⟨χ_c, g⟩ = Π ζ_{d_i}^{c_i g_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<u32>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ{:?}", self.0)
    }
}

impl FiniteAbelianGroup {
    pub fn new(cyclic_factors: Vec<u32>) -> Result<Self> {
        if let Some(d) = cyclic_factors.iter().find(|&&d| d < 2) {
            return Err(Error::Parse(format!("cyclic factor {d} is smaller than 2")));
        }
        Ok(FiniteAbelianGroup { cyclic_factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            cyclic_factors: Vec::new(),
        }
    }

    pub fn cyclic_factors(&self) -> &[u32] {
        &self.cyclic_factors
    }

    pub fn rank(&self) -> usize {
        self.cyclic_factors.len()
    }

    pub fn order(&self) -> usize {
        self.cyclic_factors.iter().map(|&d| d as usize).product()
    }

    pub fn exponent(&self) -> u32 {
        self.cyclic_factors.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.identity();
        e.0[i] = 1;
        e
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.cyclic_factors).all(|(e, d)| e < d)
    }

    pub fn element(&self, mut index: usize) -> GroupElement {
        let mut out = vec![0; self.rank()];
        for (slot, &d) in out.iter_mut().zip(&self.cyclic_factors).rev() {
            *slot = (index % d as usize) as u32;
            index /= d as usize;
        }
        GroupElement(out)
    }

    /// Position of `g` in [`elements`](Self::elements) order.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.0.iter()
            .zip(&self.cyclic_factors)
            .fold(0, |acc, (&e, &d)| acc * d as usize + e as usize)
    }

    /// All elements, lexicographic in the exponent vector.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.cyclic_factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.cyclic_factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.cyclic_factors)
                .map(|(&x, &d)| ((x as i64 * k).rem_euclid(d as i64)) as u32)
                .collect(),
        )
    }

    pub fn order_of(&self, a: &GroupElement) -> u32 {
        a.0.iter()
            .zip(&self.cyclic_factors)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(|g| Character(g.0))
    }

    pub fn character_index(&self, chi: &Character) -> usize {
        self.index_of(&GroupElement(chi.0.clone()))
    }

    pub fn character_mul(&self, a: &Character, b: &Character) -> Character {
        Character(self.mul(&GroupElement(a.0.clone()), &GroupElement(b.0.clone())).0)
    }

    pub fn character_inv(&self, a: &Character) -> Character {
        Character(self.inv(&GroupElement(a.0.clone())).0)
    }

    /// Exponent `k` with `⟨χ, g⟩ = ζ_N^k`, `N` the group exponent.
    pub fn pairing_exponent(&self, chi: &Character, g: &GroupElement) -> u32 {
        let n = self.exponent() as u64;
        let k = chi
            .0
            .iter()
            .zip(&g.0)
            .zip(&self.cyclic_factors)
            .map(|((&c, &e), &d)| c as u64 * e as u64 * (n / d as u64))
            .sum::<u64>();
        (k % n) as u32
    }

    pub fn pairing(&self, chi: &Character, g: &GroupElement) -> CycloNumber {
        CycloNumber::root_of_unity(self.exponent(), self.pairing_exponent(chi, g) as i64)
    }

    pub fn check_order(&self, bound: usize) -> Result<()> {
        if self.order() > bound {
            return Err(Error::BoundExceeded {
                what: "group order",
                value: self.order(),
                bound,
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic_factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.cyclic_factors.iter().map(|d| format!("Z_{d}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// A bicharacter `F(e_i, e_j) = ζ_N^{E_ij}` on a [`FiniteAbelianGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawForm", try_from = "RawForm")]
pub struct SkewForm {
    group: FiniteAbelianGroup,
    conductor: u32,
    exponent_matrix: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    cyclic_factors: Vec<u32>,
    conductor: u32,
    exponent_matrix: Vec<Vec<i64>>,
}

impl From<SkewForm> for RawForm {
    fn from(f: SkewForm) -> Self {
        RawForm {
            cyclic_factors: f.group.cyclic_factors,
            conductor: f.conductor,
            exponent_matrix: f
                .exponent_matrix
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        }
    }
}

impl TryFrom<RawForm> for SkewForm {
    type Error = Error;

    fn try_from(raw: RawForm) -> Result<Self> {
        SkewForm::new(
            FiniteAbelianGroup::new(raw.cyclic_factors)?,
            raw.conductor,
            raw.exponent_matrix,
        )
    }
}

impl SkewForm {
    /// Builds a form from raw exponents (reduced mod `conductor`). Only the
    /// shape is checked here; see [`SkewForm::validate`] for the axioms.
    pub fn new(group: FiniteAbelianGroup, conductor: u32, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::Parse("form conductor must be positive".into()));
        }
        let r = group.rank();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Parse(format!("exponent matrix must be {r}×{r}")));
        }
        let exponent_matrix = matrix
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| x.rem_euclid(conductor as i64) as u32)
                    .collect()
            })
            .collect();
        Ok(SkewForm {
            group,
            conductor,
            exponent_matrix,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn exponent_matrix(&self) -> &[Vec<u32>] {
        &self.exponent_matrix
    }

    pub fn eval_exponent(&self, g: &GroupElement, h: &GroupElement) -> u32 {
        let n = self.conductor as u64;
        let mut acc = 0u64;
        for (i, &gi) in g.0.iter().enumerate() {
            if gi == 0 {
                continue;
            }
            for (j, &hj) in h.0.iter().enumerate() {
                acc = (acc + self.exponent_matrix[i][j] as u64 * gi as u64 % n * hj as u64) % n;
            }
        }
        acc as u32
    }

    /// `F(g, h)`.
    pub fn eval(&self, g: &GroupElement, h: &GroupElement) -> CycloNumber {
        CycloNumber::root_of_unity(self.conductor, self.eval_exponent(g, h) as i64)
    }

    /// `f(g)`, the character `⟨f(g), h⟩ = F(g, h)`.
    ///
    /// Meaningful only when the bilinearity axiom holds.
    pub fn induced_character(&self, g: &GroupElement) -> Character {
        let n = self.conductor as u64;
        let c = self
            .group
            .cyclic_factors
            .iter()
            .enumerate()
            .map(|(j, &dj)| {
                let k = g
                    .0
                    .iter()
                    .enumerate()
                    .map(|(i, &gi)| self.exponent_matrix[i][j] as u64 * gi as u64)
                    .sum::<u64>()
                    % n;
                // k is a multiple of n / d_j by bilinearity.
                let step = n / dj as u64;
                ((k / step) % dj as u64) as u32
            })
            .collect();
        Character(c)
    }

    fn kernel_witness(&self) -> Option<GroupElement> {
        let n = self.conductor as u64;
        let r = self.group.rank();
        self.group.elements().skip(1).find(|g| {
            (0..r).all(|j| {
                (0..r)
                    .map(|i| self.exponent_matrix[i][j] as u64 * g.0[i] as u64)
                    .sum::<u64>()
                    % n
                    == 0
            })
        })
    }

    /// Order of the kernel of `f`, computed by integer lattice reduction.
    pub fn kernel_order_by_lattice(&self) -> u128 {
        let r = self.group.rank();
        let n = self.conductor as i128;
        let mut rows: Vec<Vec<i128>> = self
            .exponent_matrix
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        for j in 0..r {
            let mut row = vec![0; r];
            row[j] = n;
            rows.push(row);
        }
        let det = lattice_determinant(rows, r);
        // |ker| = |G| · det(L) / N^r
        let num = self.group.order() as u128 * det as u128;
        num / (n as u128).pow(r as u32)
    }

    /// Checks the four form axioms; exhaustive up to `bound` elements.
    pub fn validate_with_bound(&self, bound: usize) -> VerdictMap {
        let mut report = VerdictMap::new();
        let g = &self.group;
        let d = g.cyclic_factors();
        let n = self.conductor;
        let r = g.rank();
        let e = &self.exponent_matrix;

        let mut bilinear = None;
        if !n.is_multiple_of(g.exponent()) {
            bilinear = Some(format!(
                "conductor {n} is not a multiple of the group exponent {}",
                g.exponent()
            ));
        }
        'bil: for i in 0..r {
            for j in 0..r {
                if bilinear.is_some() {
                    break 'bil;
                }
                let v = e[i][j] as u64;
                if !(d[i] as u64 * v).is_multiple_of(n as u64) || !(d[j] as u64 * v).is_multiple_of(n as u64) {
                    bilinear = Some(format!("entry ({i},{j}) = {v} is not killed by the factor orders"));
                }
            }
        }
        report.record("bilinearity", bilinear);

        let mut skew = None;
        'skew: for i in 0..r {
            for j in 0..r {
                if !(e[i][j] + e[j][i]).is_multiple_of(n) {
                    skew = Some(format!(
                        "F(e{i},e{j})·F(e{j},e{i}) = ζ_{n}^{}",
                        (e[i][j] + e[j][i]) % n
                    ));
                    break 'skew;
                }
            }
        }
        report.record("skew_symmetry", skew);

        let squares = if g.order() <= bound {
            g.elements()
                .find(|x| !(2 * self.eval_exponent(x, x)).is_multiple_of(n))
                .map(|x| format!("F(g,g)^2 ≠ 1 at g = {x}"))
        } else {
            (0..r)
                .find(|&i| !(2 * e[i][i]).is_multiple_of(n))
                .map(|i| format!("F(e{i},e{i})^2 ≠ 1"))
        };
        report.record("diagonal_squares", squares);

        let degenerate = if g.order() <= bound {
            self.kernel_witness()
                .map(|x| format!("f({x}) is the trivial character"))
        } else {
            let k = self.kernel_order_by_lattice();
            (k != 1).then(|| format!("kernel of f has order {k}"))
        };
        report.record("non_degeneracy", degenerate);
        report
    }

    pub fn validate(&self) -> VerdictMap {
        self.validate_with_bound(DEFAULT_MAX_ORDER)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_pass()
    }

    /// `U_F(g) = F(g, g)` for every element, and `I_F = U_F^{-1}(-1)`.
    pub fn u_f_and_i_f(&self) -> Result<UfTable> {
        let g = &self.group;
        let mut values = Vec::with_capacity(g.order());
        for x in g.elements() {
            let k = self.eval_exponent(&x, &x);
            let sign = if k == 0 {
                1
            } else if 2 * k == self.conductor {
                -1
            } else {
                return Err(Error::Internal(format!("F(g,g) is not ±1 at g = {x}")));
            };
            values.push(sign);
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.index_of(&g.mul(&g.element(a), &g.element(b)));
                if values[ab] != values[a] * values[b] {
                    return Err(Error::Internal(format!(
                        "U_F is not multiplicative at ({}, {})",
                        g.element(a),
                        g.element(b)
                    )));
                }
            }
        }
        let i_f = g
            .elements()
            .zip(&values)
            .filter(|(_, &s)| s == -1)
            .map(|(x, _)| x)
            .collect();
        Ok(UfTable { values, i_f })
    }

    /// The form pulled back along an automorphism given by generator images.
    fn transport(&self, images: &[GroupElement]) -> Vec<Vec<u32>> {
        images
            .iter()
            .map(|a| images.iter().map(|b| self.eval_exponent(a, b)).collect())
            .collect()
    }
}

/// Values of `U_F` in element order, and the set `I_F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfTable {
    pub values: Vec<i8>,
    pub i_f: Vec<GroupElement>,
}

/// Absolute determinant of the lattice spanned by `rows` in `Z^width`
/// (assumed full rank), by integer row reduction.
fn lattice_determinant(mut rows: Vec<Vec<i128>>, width: usize) -> i128 {
    let mut det = 1i128;
    for col in 0..width {
        loop {
            let mut nz: Vec<usize> = (col..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nz.is_empty() {
                return 0;
            }
            nz.sort_by_key(|&r| rows[r][col].abs());
            let p = nz[0];
            if nz.len() == 1 {
                rows.swap(col, p);
                det *= rows[col][col].abs();
                break;
            }
            let pivot = rows[p].clone();
            for &r in &nz[1..] {
                let q = rows[r][col].div_euclid(pivot[col]);
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x -= q * y;
                }
            }
        }
    }
    det
}

/// All non-degenerate skew forms on `group` at conductor = exponent, in
/// lexicographic order of the row-major exponent matrix.
pub fn enumerate_forms(group: &FiniteAbelianGroup, bound: usize) -> Result<Vec<SkewForm>> {
    group.check_order(bound)?;
    let n = group.exponent();
    let d = group.cyclic_factors();
    let r = group.rank();
    // Free slots (i, j) with i <= j and their admissible values.
    let mut slots: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    for i in 0..r {
        for j in i..r {
            let values = if i == j {
                if n.is_multiple_of(2) && d[i].is_multiple_of(2) {
                    vec![0, n / 2]
                } else {
                    vec![0]
                }
            } else {
                let g = d[i].gcd(&d[j]);
                let step = n / g;
                (0..g).map(|t| t * step).collect()
            };
            slots.push((i, j, values));
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut e = vec![vec![0i64; r]; r];
        for ((i, j, values), &c) in slots.iter().zip(&choice) {
            let v = values[c] as i64;
            e[*i][*j] = v;
            e[*j][*i] = (-v).rem_euclid(n as i64);
        }
        let form = SkewForm::new(group.clone(), n, e)?;
        if form.kernel_witness().is_none() {
            out.push(form);
        }
        // Odometer, last slot fastest.
        let mut k = slots.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < slots[k].2.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// An isomorphism `φ: G* → G`, stored by the images of the generator
/// characters `χ_{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterIso {
    pub images: Vec<GroupElement>,
}

impl CharacterIso {
    pub fn apply(&self, group: &FiniteAbelianGroup, chi: &Character) -> GroupElement {
        chi.0
            .iter()
            .zip(&self.images)
            .fold(group.identity(), |acc, (&c, y)| {
                group.mul(&acc, &group.pow(y, c as i64))
            })
    }

    /// `φ^{-1}(g)`, by search.
    pub fn preimage(&self, group: &FiniteAbelianGroup, g: &GroupElement) -> Option<Character> {
        group.characters().find(|chi| self.apply(group, chi) == *g)
    }

    /// Whether `φ` is a well-defined bijection.
    pub fn is_isomorphism(&self, group: &FiniteAbelianGroup) -> bool {
        let d = group.cyclic_factors();
        if self.images.len() != group.rank()
            || !self.images.iter().all(|y| group.contains(y))
            || self
                .images
                .iter()
                .zip(d)
                .any(|(y, &di)| group.pow(y, di as i64) != group.identity())
        {
            return false;
        }
        let seen: HashSet<GroupElement> = group.characters().map(|c| self.apply(group, &c)).collect();
        seen.len() == group.order()
    }
}

/// Depth-first search over generator images of maps `⊕ Z_{d_i} → G`
/// that are bijective; `prune(images)` is consulted after each assignment.
fn search_isomorphisms(
    group: &FiniteAbelianGroup,
    prune: &dyn Fn(&[GroupElement]) -> bool,
    accept: &mut dyn FnMut(Vec<GroupElement>),
) {
    let d = group.cyclic_factors().to_vec();
    let candidates: Vec<Vec<GroupElement>> = d
        .iter()
        .map(|&di| {
            group
                .elements()
                .filter(|y| group.pow(y, di as i64) == group.identity())
                .collect()
        })
        .collect();
    fn rec(
        group: &FiniteAbelianGroup,
        d: &[u32],
        candidates: &[Vec<GroupElement>],
        images: &mut Vec<GroupElement>,
        prune: &dyn Fn(&[GroupElement]) -> bool,
        accept: &mut dyn FnMut(Vec<GroupElement>),
    ) {
        let i = images.len();
        if i == d.len() {
            accept(images.clone());
            return;
        }
        for y in &candidates[i] {
            images.push(y.clone());
            // Injective on the subgroup generated by the first i+1 generators.
            let sub = FiniteAbelianGroup {
                cyclic_factors: d[..=i].to_vec(),
            };
            let mut seen = HashSet::with_capacity(sub.order());
            let injective = sub.elements().all(|c| {
                let img = c.0.iter().zip(images.iter()).fold(group.identity(), |acc, (&k, y)| {
                    group.mul(&acc, &group.pow(y, k as i64))
                });
                seen.insert(img)
            });
            if injective && !prune(images) {
                rec(group, d, candidates, images, prune, accept);
            }
            images.pop();
        }
    }
    let mut images = Vec::with_capacity(d.len());
    rec(group, &d, &candidates, &mut images, prune, accept);
}

/// Every isomorphism `G* → G` (equivalently every automorphism of `G`).
pub fn enumerate_isomorphisms(group: &FiniteAbelianGroup, bound: usize) -> Result<Vec<CharacterIso>> {
    group.check_order(bound)?;
    let mut out = Vec::new();
    search_isomorphisms(group, &|_| false, &mut |images| out.push(CharacterIso { images }));
    Ok(out)
}

/// The set `Φ`: isomorphisms `φ: G* → G` with
/// `⟨α, φ(β)⟩⟨β, φ(α)⟩ = 1` for all characters and `φ(f(g)) = g` for `g ∈ constrained`.
pub fn enumerate_phi(
    form: &SkewForm,
    constrained: &[GroupElement],
    bound: usize,
) -> Result<Vec<CharacterIso>> {
    let group = form.group();
    group.check_order(bound)?;
    let n = group.exponent();
    let chi = |i: usize| Character(group.generator(i).0);
    let skew_ok = |images: &[GroupElement]| -> bool {
        let i = images.len() - 1;
        (0..=i).all(|j| {
            (group.pairing_exponent(&chi(i), &images[j]) + group.pairing_exponent(&chi(j), &images[i])).is_multiple_of(n)
        })
    };
    let targets: Vec<(Character, GroupElement)> = constrained
        .iter()
        .map(|g| (form.induced_character(g), g.clone()))
        .collect();
    let mut out = Vec::new();
    search_isomorphisms(group, &|images| !skew_ok(images), &mut |images| {
        let phi = CharacterIso { images };
        if targets.iter().all(|(c, g)| phi.apply(group, c) == *g) {
            out.push(phi);
        }
    });
    Ok(out)
}

/// Keeps the first form of each `Aut(G)`-orbit, preserving input order.
pub fn orbit_representatives(forms: &[SkewForm], bound: usize) -> Result<Vec<SkewForm>> {
    let Some(first) = forms.first() else {
        return Ok(Vec::new());
    };
    let autos = enumerate_isomorphisms(first.group(), bound)?;
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let mut out = Vec::new();
    for f in forms {
        if seen.contains(&f.exponent_matrix) {
            continue;
        }
        for a in &autos {
            seen.insert(f.transport(&a.images));
        }
        out.push(f.clone());
    }
    Ok(out)
}
