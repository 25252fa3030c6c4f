//! Finite abelian groups `⊕ Z/d_i`, their elements, and the standard
//! constructions on them (invariant factors, Hom, tensor square, Ext).
//!
//! Elements are coordinate vectors reduced modulo the factor moduli. The
//! lexicographic order on coordinates (first coordinate most significant)
//! is the enumeration order used by every dense table in the crate.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{big, smith_form, to_u64, IntMatrix, SnfTracking};

/// A finite abelian group given by cyclic factor moduli.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Arc<[u64]>,
    canonical: bool,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn is_invariant_chain(factors: &[u64]) -> bool {
    factors.iter().all(|&d| d >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0)
}

impl AbelianGroup {
    /// `⊕ Z/factors[i]`. Every modulus must be at least 1.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidInput(format!("modulus {bad} is not positive")));
        }
        let canonical = is_invariant_chain(&factors);
        Ok(AbelianGroup {
            factors: factors.into(),
            canonical,
        })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic group of order zero")
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).unwrap()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of cyclic factors (not the minimal number of generators unless canonical).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant-factor form: `d_1 | d_2 | ...`, all `d_i ≥ 2`.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
            .unwrap_or(u128::MAX)
    }

    /// Order as an enumeration bound; errors when it exceeds `limit`.
    pub fn order_within(&self, what: &str, limit: u128) -> Result<usize> {
        let n = self.order();
        crate::error::capacity(what, n, limit)?;
        Ok(n as usize)
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, &d| acc.lcm(&d))
    }

    pub fn moduli_big(&self) -> Vec<BigInt> {
        self.factors.iter().map(|&d| big(d)).collect()
    }

    /// The element with the given coordinates, reduced modulo the factors.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let coords = coords
            .iter()
            .zip(self.factors.iter())
            .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
            .collect();
        Ok(GroupElement {
            parent: self.clone(),
            coords,
        })
    }

    /// Wraps already-reduced coordinates.
    pub fn element_from_reduced(&self, coords: Vec<u64>) -> GroupElement {
        debug_assert!(self.contains_coords(&coords));
        GroupElement {
            parent: self.clone(),
            coords,
        }
    }

    pub fn contains_coords(&self, coords: &[u64]) -> bool {
        coords.len() == self.rank() && coords.iter().zip(self.factors.iter()).all(|(c, d)| c < d)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            parent: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1 % self.factors[i];
        GroupElement {
            parent: self.clone(),
            coords,
        }
    }

    /// Lexicographic rank of a coordinate vector.
    pub fn index_of(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(self.factors.iter())
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    /// Inverse of [`AbelianGroup::index_of`].
    pub fn coords_of(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.factors[i] as usize;
            out[i] = (index % d) as u64;
            index /= d;
        }
        out
    }

    /// All elements in lexicographic order. Panics if the order does not fit `usize`.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let n = usize::try_from(self.order()).expect("group too large to enumerate");
        (0..n).map(move |i| self.element_from_reduced(self.coords_of(i)))
    }

    pub fn add_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(self.factors.iter())
            .map(|((a, b), d)| ((*a as u128 + *b as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn sub_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(self.factors.iter())
            .map(|((a, b), d)| ((*a as u128 + *d as u128 - *b as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn neg_coords(&self, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(self.factors.iter())
            .map(|(a, d)| (d - a) % d)
            .collect()
    }

    /// `n · x` for any integer `n`.
    pub fn scale_coords(&self, x: &[u64], n: &BigInt) -> Vec<u64> {
        x.iter()
            .zip(self.factors.iter())
            .map(|(a, d)| to_u64(&(n * big(*a)).mod_floor(&big(*d))))
            .collect()
    }

    /// Reduces an integer vector into coordinates.
    pub fn reduce_big(&self, v: &[BigInt]) -> Vec<u64> {
        v.iter()
            .zip(self.factors.iter())
            .map(|(a, d)| to_u64(&a.mod_floor(&big(*d))))
            .collect()
    }

    /// Invariant-factor form with the coordinate changes in both directions.
    pub fn canonicalize(&self) -> Canonicalization {
        let diag = IntMatrix::from_diagonal(&self.factors[..]);
        let f = smith_form(
            &diag,
            SnfTracking {
                left: true,
                left_inverse: true,
                ..Default::default()
            },
        );
        let d = f.diagonal();
        let keep: Vec<usize> = (0..d.len()).filter(|&i| !d[i].is_one()).collect();
        let factors: Vec<u64> = keep.iter().map(|&i| to_u64(&d[i])).collect();
        let target = AbelianGroup::new(factors).unwrap();
        let to_canonical = f.u.unwrap().select_rows(&keep);
        let from_canonical = f.u_inv.unwrap().select_cols(&keep);
        Canonicalization {
            source: self.clone(),
            target,
            to_canonical,
            from_canonical,
        }
    }

    /// Same isomorphism type.
    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.canonicalize().target.factors == other.canonicalize().target.factors
    }

    /// Evaluates an integer matrix (on standard generators) at `x`, landing in `target`.
    pub fn apply_hom(&self, m: &IntMatrix, x: &[u64], target: &AbelianGroup) -> Vec<u64> {
        let xb: Vec<BigInt> = x.iter().map(|&c| big(c)).collect();
        target.reduce_big(&m.mul_vec(&xb))
    }
}

/// Coordinates of a group element together with its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    parent: AbelianGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn same_parent(&self, other: &GroupElement) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::GroupMismatch(format!(
                "elements of {} and {}",
                self.parent, other.parent
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_parent(other)?;
        Ok(GroupElement {
            parent: self.parent.clone(),
            coords: self.parent.add_coords(&self.coords, &other.coords),
        })
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_parent(other)?;
        Ok(GroupElement {
            parent: self.parent.clone(),
            coords: self.parent.sub_coords(&self.coords, &other.coords),
        })
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            parent: self.parent.clone(),
            coords: self.parent.neg_coords(&self.coords),
        }
    }

    pub fn scale(&self, n: i64) -> GroupElement {
        GroupElement {
            parent: self.parent.clone(),
            coords: self.parent.scale_coords(&self.coords, &BigInt::from(n)),
        }
    }

    /// Least `n ≥ 1` with `n · x = 0`.
    pub fn order(&self) -> u64 {
        element_order_coords(self.parent.factors(), &self.coords)
    }

    pub fn index(&self) -> usize {
        self.parent.index_of(&self.coords)
    }
}

/// `lcm_i d_i / gcd(d_i, c_i)`.
pub fn element_order_coords(factors: &[u64], coords: &[u64]) -> u64 {
    factors
        .iter()
        .zip(coords)
        .fold(1u64, |acc, (&d, &c)| acc.lcm(&(d / d.gcd(&c))))
}

/// Invariant-factor normalization of a list of moduli.
pub fn canonicalize(factors: &[i64]) -> Result<Canonicalization> {
    if let Some(bad) = factors.iter().find(|&&d| d <= 0) {
        return Err(Error::InvalidInput(format!("modulus {bad} is not positive")));
    }
    let g = AbelianGroup::new(factors.iter().map(|&d| d as u64).collect())?;
    Ok(g.canonicalize())
}

/// An isomorphism between a group and its invariant-factor form.
#[derive(Clone, Debug)]
pub struct Canonicalization {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    /// Matrix of the isomorphism `source → target` on standard generators.
    pub to_canonical: IntMatrix,
    /// Matrix of the inverse isomorphism.
    pub from_canonical: IntMatrix,
}

impl Canonicalization {
    pub fn group(&self) -> &AbelianGroup {
        &self.target
    }

    pub fn to_canonical(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.parent() != &self.source {
            return Err(Error::GroupMismatch("element is not in the source group".into()));
        }
        let c = self.source.apply_hom(&self.to_canonical, x.coords(), &self.target);
        Ok(self.target.element_from_reduced(c))
    }

    pub fn from_canonical(&self, y: &GroupElement) -> Result<GroupElement> {
        if y.parent() != &self.target {
            return Err(Error::GroupMismatch("element is not in the canonical group".into()));
        }
        let c = self.target.apply_hom(&self.from_canonical, y.coords(), &self.source);
        Ok(self.source.element_from_reduced(c))
    }
}

/// A group given by generators and relations, reduced to invariant factors.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: AbelianGroup,
    /// Column `s` holds the coordinates of generator `s` in `group`.
    pub generator_images: IntMatrix,
}

impl Presented {
    pub fn image_of_generator(&self, s: usize) -> Vec<u64> {
        self.group.reduce_big(&self.generator_images.column(s))
    }

    /// Image of an integer combination of the generators.
    pub fn image(&self, combo: &[BigInt]) -> Vec<u64> {
        self.group.reduce_big(&self.generator_images.mul_vec(combo))
    }
}

/// `Z^generators / (column span of relations)`. The quotient must be finite.
pub fn present(generators: usize, relations: &IntMatrix) -> Result<Presented> {
    assert_eq!(relations.rows(), generators, "one relation row per generator");
    let f = smith_form(
        relations,
        SnfTracking {
            left: true,
            ..Default::default()
        },
    );
    let diag = f.diagonal();
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for i in 0..generators {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            return Err(Error::InvalidInput("presentation defines an infinite group".into()));
        }
        if !d.is_one() {
            keep.push(i);
            factors.push(to_u64(&d));
        }
    }
    let group = AbelianGroup::new(factors)?;
    let u = f.u.unwrap();
    Ok(Presented {
        group,
        generator_images: u.select_rows(&keep),
    })
}

/// Invariant factors of the subgroup of `⊕ Z/moduli` generated by `generators`.
pub fn subgroup_type(generators: &[Vec<u64>], moduli: &[u64]) -> AbelianGroup {
    let g = generators.len();
    let k = moduli.len();
    if g == 0 {
        return AbelianGroup::trivial();
    }
    // Kernel of (λ, μ) ↦ Σ λ_s gen_s + Σ μ_i m_i e_i over Z, projected to λ,
    // is the relation lattice of the subgroup.
    let mut m = IntMatrix::zeros(k, g + k);
    for (s, gen) in generators.iter().enumerate() {
        for i in 0..k {
            m[(i, s)] = big(gen[i]);
        }
    }
    for i in 0..k {
        m[(i, g + i)] = big(moduli[i]);
    }
    let f = smith_form(
        &m,
        SnfTracking {
            right: true,
            ..Default::default()
        },
    );
    let r = f.rank();
    let v = f.v.unwrap();
    let kernel_cols: Vec<usize> = (r..g + k).collect();
    let lattice = v.select_cols(&kernel_cols).select_rows(&(0..g).collect::<Vec<_>>());
    present(g, &lattice)
        .expect("subgroup of a finite group is finite")
        .group
}

/// `Hom(A, B)` with one generator matrix per nontrivial `Z/gcd(d_i, e_j)` summand.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub group: AbelianGroup,
    /// `basis[t]` maps generator `i` of A to `(e_j / gcd) · f_j` for its pair `(i, j)`.
    pub basis: Vec<IntMatrix>,
}

impl HomSpace {
    /// The homomorphism with the given coordinates in `group`.
    pub fn hom(&self, coords: &[u64]) -> IntMatrix {
        let (rows, cols) = self
            .basis
            .first()
            .map_or((0, 0), |b| (b.rows(), b.cols()));
        let mut out = IntMatrix::zeros(rows, cols);
        for (b, &c) in self.basis.iter().zip(coords) {
            for r in 0..rows {
                for col in 0..cols {
                    if !b[(r, col)].is_zero() {
                        out[(r, col)] += &b[(r, col)] * big(c);
                    }
                }
            }
        }
        out
    }
}

pub fn hom_space(a: &AbelianGroup, b: &AbelianGroup) -> HomSpace {
    let mut factors = Vec::new();
    let mut basis = Vec::new();
    for (i, &d) in a.factors().iter().enumerate() {
        for (j, &e) in b.factors().iter().enumerate() {
            let g = d.gcd(&e);
            if g > 1 {
                let mut m = IntMatrix::zeros(b.rank(), a.rank());
                m[(j, i)] = big(e / g);
                factors.push(g);
                basis.push(m);
            }
        }
    }
    HomSpace {
        group: AbelianGroup::new(factors).unwrap(),
        basis,
    }
}

/// `A ⊗ A = ⊕_{i,j} Z/gcd(d_i, d_j)` with the universal bilinear map on generators.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    pub group: AbelianGroup,
    /// `slots[i][j]` is the summand carrying `g_i ⊗ g_j`, or `None` when `gcd = 1`.
    pub slots: Vec<Vec<Option<usize>>>,
}

impl TensorSquare {
    /// `g_i ⊗ g_j` as an element of the tensor square.
    pub fn pair_image(&self, i: usize, j: usize) -> GroupElement {
        let mut c = vec![0; self.group.rank()];
        if let Some(s) = self.slots[i][j] {
            c[s] = 1;
        }
        self.group.element_from_reduced(c)
    }
}

pub fn tensor_square(a: &AbelianGroup) -> TensorSquare {
    let k = a.rank();
    let mut factors = Vec::new();
    let mut slots = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            let g = a.factors()[i].gcd(&a.factors()[j]);
            if g > 1 {
                slots[i][j] = Some(factors.len());
                factors.push(g);
            }
        }
    }
    TensorSquare {
        group: AbelianGroup::new(factors).unwrap(),
        slots,
    }
}

/// `Ext(A, B) = ⊕_{i,j} Z/gcd(d_i, e_j)`.
pub fn ext_space(a: &AbelianGroup, b: &AbelianGroup) -> AbelianGroup {
    let factors = a
        .factors()
        .iter()
        .flat_map(|&d| b.factors().iter().map(move |&e| d.gcd(&e)))
        .filter(|&g| g > 1)
        .collect();
    AbelianGroup::new(factors).unwrap()
}

/// `Λ²A = ⊕_{i<j} Z/gcd(d_i, d_j)`.
pub fn exterior_square(a: &AbelianGroup) -> AbelianGroup {
    let f = a.factors();
    let mut factors = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let g = f[i].gcd(&f[j]);
            if g > 1 {
                factors.push(g);
            }
        }
    }
    AbelianGroup::new(factors).unwrap()
}

/// Element orders of every element, as a sorted histogram `(order, count)`.
pub fn order_histogram(a: &AbelianGroup) -> Vec<(u64, u64)> {
    let mut h = std::collections::BTreeMap::new();
    for x in a.elements() {
        *h.entry(x.order()).or_insert(0u64) += 1;
    }
    h.into_iter().collect()
}

/// Index arithmetic on the lexicographic enumeration of a group.
#[derive(Clone, Debug)]
pub(crate) struct Indexer {
    factors: Vec<u64>,
    strides: Vec<usize>,
    coords: Vec<u64>,
    n: usize,
}

impl Indexer {
    pub(crate) fn new(g: &AbelianGroup) -> Self {
        let n = usize::try_from(g.order()).expect("group too large to enumerate");
        let k = g.rank();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * g.factors()[i + 1] as usize;
        }
        let mut coords = Vec::with_capacity(n * k);
        for i in 0..n {
            coords.extend(g.coords_of(i));
        }
        Indexer {
            factors: g.factors().to_vec(),
            strides,
            coords,
            n,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    pub(crate) fn coords(&self, i: usize) -> &[u64] {
        let k = self.factors.len();
        &self.coords[i * k..(i + 1) * k]
    }

    pub(crate) fn add(&self, i: usize, j: usize) -> usize {
        let (x, y) = (self.coords(i), self.coords(j));
        let mut idx = 0;
        for t in 0..self.factors.len() {
            let s = x[t] + y[t];
            let s = if s >= self.factors[t] { s - self.factors[t] } else { s };
            idx += s as usize * self.strides[t];
        }
        idx
    }

    pub(crate) fn neg(&self, i: usize) -> usize {
        let x = self.coords(i);
        let mut idx = 0;
        for t in 0..self.factors.len() {
            idx += ((self.factors[t] - x[t]) % self.factors[t]) as usize * self.strides[t];
        }
        idx
    }

    pub(crate) fn index(&self, coords: &[u64]) -> usize {
        coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    /// `m · x` for `m ≥ 0`.
    pub(crate) fn scale(&self, i: usize, m: u64) -> usize {
        let x = self.coords(i);
        let mut idx = 0;
        for t in 0..self.factors.len() {
            let d = self.factors[t] as u128;
            idx += ((x[t] as u128 * m as u128) % d) as usize * self.strides[t];
        }
        idx
    }
}
