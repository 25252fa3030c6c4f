//! Normalized 2-cocycles `γ: A × A → B` as dense tables, coboundaries,
//! bilinear maps on generators, and the induced maps along homomorphisms.
//!
//! Tables are indexed row-major by the lexicographic enumeration of `A`;
//! each entry is the coordinate vector of a `B`-element.

use num_bigint::BigInt;
use serde::Serialize;

use crate::abelian::{hom_space, tensor_square, AbelianGroup, GroupElement, Indexer};
use crate::error::{capacity, Error, Result};
use crate::matrix::{big, solve_mod_uniform, IntMatrix};
use crate::Limits;

/// A function `A × A → B` stored densely. It is called a cocycle, but the
/// axioms are only guaranteed after [`Cocycle::validate`] passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    a: AbelianGroup,
    b: AbelianGroup,
    n: usize,
    table: Vec<u64>,
}

/// First failing axiom instance, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `γ(x, y) ≠ 0` with `x = 0` or `y = 0`.
    Normalization { x: Vec<u64>, y: Vec<u64> },
    /// `γ(x,y) + γ(x+y,z) ≠ γ(y,z) + γ(x,y+z)`.
    CocycleIdentity { x: Vec<u64>, y: Vec<u64>, z: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub normalized: bool,
    pub cocycle_identity: bool,
    /// Normalization failures are reported before identity failures; within
    /// each kind the lexicographically first instance is reported.
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.normalized && self.cocycle_identity
    }
}

/// Why a table is not bilinear.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BilinearViolation {
    /// `d_i · γ(g_i, g_j) ≠ 0` or `d_j · γ(g_i, g_j) ≠ 0`.
    Incompatible { i: usize, j: usize },
    /// The table disagrees with the bilinear expansion of its generator values.
    Mismatch {
        x: Vec<u64>,
        y: Vec<u64>,
        actual: Vec<u64>,
        predicted: Vec<u64>,
    },
}

fn check_table_size(a: &AbelianGroup, limits: &Limits) -> Result<usize> {
    a.order_within("|A| for a cocycle table", limits.max_table_order)
}

fn same_groups(x: &Cocycle, y: &Cocycle) -> Result<()> {
    if x.a != y.a || x.b != y.b {
        return Err(Error::GroupMismatch(format!(
            "cocycles over ({}, {}) and ({}, {})",
            x.a, x.b, y.a, y.b
        )));
    }
    Ok(())
}

impl Cocycle {
    pub fn zero(a: &AbelianGroup, b: &AbelianGroup) -> Result<Self> {
        let n = check_table_size(a, &Limits::default())?;
        Ok(Cocycle {
            a: a.clone(),
            b: b.clone(),
            n,
            table: vec![0; n * n * b.rank()],
        })
    }

    /// Tabulates `f(x, y)` over all pairs. Values are reduced modulo `B`.
    pub fn from_fn<F>(a: &AbelianGroup, b: &AbelianGroup, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u64], &[u64]) -> Vec<i64>,
    {
        let n = check_table_size(a, &Limits::default())?;
        let ia = Indexer::new(a);
        let mut table = Vec::with_capacity(n * n * b.rank());
        for x in 0..n {
            for y in 0..n {
                let v = f(ia.coords(x), ia.coords(y));
                if v.len() != b.rank() {
                    return Err(Error::Structure(format!(
                        "value at ({x}, {y}) has {} coordinates, expected {}",
                        v.len(),
                        b.rank()
                    )));
                }
                table.extend(
                    v.iter()
                        .zip(b.factors())
                        .map(|(&c, &d)| c.rem_euclid(d as i64) as u64),
                );
            }
        }
        Ok(Cocycle {
            a: a.clone(),
            b: b.clone(),
            n,
            table,
        })
    }

    /// Builds from a nested table `table[x][y] = coordinates of γ(x, y)`.
    pub fn from_table(a: &AbelianGroup, b: &AbelianGroup, table: &[Vec<Vec<u64>>]) -> Result<Self> {
        let n = check_table_size(a, &Limits::default())?;
        if table.len() != n {
            return Err(Error::Structure(format!("table has {} rows, expected {n}", table.len())));
        }
        let mut flat = Vec::with_capacity(n * n * b.rank());
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structure(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (y, v) in row.iter().enumerate() {
                if !b.contains_coords(v) {
                    return Err(Error::Structure(format!(
                        "entry ({x}, {y}) = {v:?} is not a reduced element of {b}"
                    )));
                }
                flat.extend_from_slice(v);
            }
        }
        Ok(Cocycle {
            a: a.clone(),
            b: b.clone(),
            n,
            table: flat,
        })
    }

    pub fn group_a(&self) -> &AbelianGroup {
        &self.a
    }

    pub fn group_b(&self) -> &AbelianGroup {
        &self.b
    }

    /// `|A|`.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Value at a pair of element indices.
    pub fn at(&self, x: usize, y: usize) -> &[u64] {
        let k = self.b.rank();
        let off = (x * self.n + y) * k;
        &self.table[off..off + k]
    }

    pub fn value(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        if x.parent() != &self.a || y.parent() != &self.a {
            return Err(Error::GroupMismatch("arguments are not elements of A".into()));
        }
        Ok(self.b.element_from_reduced(self.at(x.index(), y.index()).to_vec()))
    }

    pub fn to_table(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.at(x, y).to_vec()).collect())
            .collect()
    }

    fn zip_with(&self, other: &Cocycle, f: impl Fn(&[u64], &[u64]) -> Vec<u64>) -> Result<Cocycle> {
        same_groups(self, other)?;
        let mut table = Vec::with_capacity(self.table.len());
        for x in 0..self.n {
            for y in 0..self.n {
                table.extend(f(self.at(x, y), other.at(x, y)));
            }
        }
        Ok(Cocycle {
            table,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        self.zip_with(other, |u, v| self.b.add_coords(u, v))
    }

    pub fn sub(&self, other: &Cocycle) -> Result<Cocycle> {
        self.zip_with(other, |u, v| self.b.sub_coords(u, v))
    }

    pub fn scale(&self, m: i64) -> Cocycle {
        let mb = BigInt::from(m);
        let mut table = Vec::with_capacity(self.table.len());
        for x in 0..self.n {
            for y in 0..self.n {
                table.extend(self.b.scale_coords(self.at(x, y), &mb));
            }
        }
        Cocycle {
            table,
            ..self.clone()
        }
    }

    /// `(x, y) ↦ γ(y, x)`.
    pub fn transpose(&self) -> Cocycle {
        let mut table = Vec::with_capacity(self.table.len());
        for x in 0..self.n {
            for y in 0..self.n {
                table.extend_from_slice(self.at(y, x));
            }
        }
        Cocycle {
            table,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&c| c == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (x + 1..self.n).all(|y| self.at(x, y) == self.at(y, x)))
    }

    /// Checks normalization and the cocycle identity exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let ia = Indexer::new(&self.a);
        let zero = vec![0u64; self.b.rank()];
        let mut first_violation = None;
        let mut normalized = true;
        'norm: for x in 0..self.n {
            for y in 0..self.n {
                if (x == 0 || y == 0) && self.at(x, y) != zero.as_slice() {
                    normalized = false;
                    first_violation = Some(Violation::Normalization {
                        x: ia.coords(x).to_vec(),
                        y: ia.coords(y).to_vec(),
                    });
                    break 'norm;
                }
            }
        }
        let mut identity = true;
        'ident: for x in 0..self.n {
            for y in 0..self.n {
                let xy = ia.add(x, y);
                let gxy = self.at(x, y);
                for z in 0..self.n {
                    let lhs = self.b.add_coords(gxy, self.at(xy, z));
                    let rhs = self.b.add_coords(self.at(y, z), self.at(x, ia.add(y, z)));
                    if lhs != rhs {
                        identity = false;
                        if first_violation.is_none() {
                            first_violation = Some(Violation::CocycleIdentity {
                                x: ia.coords(x).to_vec(),
                                y: ia.coords(y).to_vec(),
                                z: ia.coords(z).to_vec(),
                            });
                        }
                        break 'ident;
                    }
                }
            }
        }
        ValidationReport {
            normalized,
            cocycle_identity: identity,
            first_violation,
        }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.passed() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("not a cocycle: {:?}", r.first_violation)))
        }
    }

    /// Values on pairs of standard generators of `A`.
    pub fn generator_values(&self) -> Vec<Vec<Vec<u64>>> {
        let k = self.a.rank();
        let idx: Vec<usize> = (0..k).map(|i| self.a.generator(i).index()).collect();
        (0..k)
            .map(|i| (0..k).map(|j| self.at(idx[i], idx[j]).to_vec()).collect())
            .collect()
    }

    /// The bilinear expansion of the generator values at `(x, y)`, whether or
    /// not the table is actually bilinear.
    pub fn bilinear_prediction(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        expand(&self.a, &self.b, &self.generator_values(), x, y)
    }

    /// The generator matrix when the table is bilinear, else the first reason it is not.
    pub fn check_bilinear(&self) -> std::result::Result<BilinearMatrix, BilinearViolation> {
        let values = self.generator_values();
        let k = self.a.rank();
        for i in 0..k {
            for j in 0..k {
                if !compatible(&self.a, &self.b, &values[i][j], i, j) {
                    return Err(BilinearViolation::Incompatible { i, j });
                }
            }
        }
        let beta = BilinearMatrix::from_generator_values(&self.a, &self.b, values);
        let expanded = beta.to_cocycle_unchecked();
        let ia = Indexer::new(&self.a);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.at(x, y) != expanded.at(x, y) {
                    return Err(BilinearViolation::Mismatch {
                        x: ia.coords(x).to_vec(),
                        y: ia.coords(y).to_vec(),
                        actual: self.at(x, y).to_vec(),
                        predicted: expanded.at(x, y).to_vec(),
                    });
                }
            }
        }
        Ok(beta)
    }

    pub fn is_bilinear(&self) -> Option<BilinearMatrix> {
        self.check_bilinear().ok()
    }

    /// `α(x, y) = γ(x, y) − γ(y, x)`, checked to be bilinear and alternating.
    pub fn commutator_pairing(&self) -> Result<BilinearMatrix> {
        let alt = self.sub(&self.transpose())?;
        let m = alt
            .check_bilinear()
            .map_err(|v| Error::Inconsistent(format!("commutator pairing is not bilinear: {v:?}")))?;
        if !m.is_alternating() {
            return Err(Error::NotAlternating("commutator pairing".into()));
        }
        Ok(m)
    }

    /// `(x, y) ↦ γ(ψ x, ψ y)` for `ψ: A′ → A`.
    pub fn pullback(&self, psi: &IntMatrix, a_prime: &AbelianGroup) -> Result<Cocycle> {
        if !psi.is_well_defined_hom(a_prime.factors(), self.a.factors()) {
            return Err(Error::InvalidInput("pullback map is not a well-defined homomorphism".into()));
        }
        let n = check_table_size(a_prime, &Limits::default())?;
        let ip = Indexer::new(a_prime);
        let images: Vec<usize> = (0..n)
            .map(|x| self.a.index_of(&a_prime.apply_hom(psi, ip.coords(x), &self.a)))
            .collect();
        let mut table = Vec::with_capacity(n * n * self.b.rank());
        for x in 0..n {
            for y in 0..n {
                table.extend_from_slice(self.at(images[x], images[y]));
            }
        }
        Ok(Cocycle {
            a: a_prime.clone(),
            b: self.b.clone(),
            n,
            table,
        })
    }

    /// `(x, y) ↦ φ(γ(x, y))` for `φ: B → B′`.
    pub fn pushforward(&self, phi: &IntMatrix, b_prime: &AbelianGroup) -> Result<Cocycle> {
        if !phi.is_well_defined_hom(self.b.factors(), b_prime.factors()) {
            return Err(Error::InvalidInput("pushforward map is not a well-defined homomorphism".into()));
        }
        let mut table = Vec::with_capacity(self.n * self.n * b_prime.rank());
        for x in 0..self.n {
            for y in 0..self.n {
                table.extend(self.b.apply_hom(phi, self.at(x, y), b_prime));
            }
        }
        Ok(Cocycle {
            a: self.a.clone(),
            b: b_prime.clone(),
            n: self.n,
            table,
        })
    }

    /// A cochain `h` with `self − other = ∂h`, or `None` when the two are not
    /// cohomologous.
    ///
    /// One congruence system per cyclic factor of `B`, in the `|A| − 1`
    /// unknowns `h(x)`, `x ≠ 0`. Only the equations `∂h(x, g) = η(x, g)` for
    /// standard generators `g` are imposed: if a cocycle `δ` vanishes on
    /// `A × {g}` for every generator then the cocycle identity with `z = g`
    /// gives `δ(x, y + g) = δ(x, y)`, so `δ = 0`. The witness is checked
    /// against the full table before it is returned.
    pub fn cohomologous(&self, other: &Cocycle) -> Result<Option<CochainMap>> {
        self.cohomologous_with(other, &Limits::default())
    }

    pub fn cohomologous_with(&self, other: &Cocycle, limits: &Limits) -> Result<Option<CochainMap>> {
        same_groups(self, other)?;
        capacity("|A| for a coboundary search", self.n as u128, limits.max_cohomologous_order)?;
        self.require_valid()?;
        other.require_valid()?;
        self.cohomologous_unchecked(other)
    }

    /// As [`Cocycle::cohomologous`] for inputs already known to be valid.
    pub(crate) fn cohomologous_unchecked(&self, other: &Cocycle) -> Result<Option<CochainMap>> {
        same_groups(self, other)?;
        let eta = self.sub(other)?;
        let Some(h) = coboundary_witness(&eta) else {
            return Ok(None);
        };
        if coboundary(&h)? != eta {
            return Err(Error::Inconsistent("coboundary witness fails the full table".into()));
        }
        Ok(Some(h))
    }
}

/// Solves `∂h = η` for a valid cocycle `η`.
fn coboundary_witness(eta: &Cocycle) -> Option<CochainMap> {
    let a = &eta.a;
    let b = &eta.b;
    let n = eta.n;
    let ia = Indexer::new(a);
    let gens: Vec<usize> = (0..a.rank()).map(|i| a.generator(i).index()).filter(|&g| g != 0).collect();
    let mut values = vec![0u64; n * b.rank()];
    for (c, &e) in b.factors().iter().enumerate() {
        if e == 1 || n == 1 {
            continue;
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for x in 1..n {
            for &g in &gens {
                let mut row = vec![0u64; n - 1];
                let xg = ia.add(x, g);
                row[x - 1] = (row[x - 1] + 1) % e;
                row[g - 1] = (row[g - 1] + 1) % e;
                if xg != 0 {
                    row[xg - 1] = (row[xg - 1] + e - 1) % e;
                }
                rows.push(row);
                rhs.push(eta.at(x, g)[c]);
            }
        }
        let sol = solve_mod_uniform(rows, rhs, n - 1, e)?;
        for x in 1..n {
            values[x * b.rank() + c] = sol[x - 1];
        }
    }
    Some(CochainMap {
        a: a.clone(),
        b: b.clone(),
        values,
    })
}

/// `γ(x, y) = ⌊(x + y)/n⌋ mod m` on `Z/n × Z/n → Z/m`: the cocycle of
/// `0 → Z/m → Z/nm → Z/n → 0` with transversal `0, 1, …, n − 1`.
pub fn carry_cocycle(n: u64, m: u64) -> Result<Cocycle> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidInput(format!("carry cocycle needs n, m ≥ 2, got ({n}, {m})")));
    }
    let a = AbelianGroup::cyclic(n);
    let b = AbelianGroup::cyclic(m);
    Cocycle::from_fn(&a, &b, |x, y| vec![((x[0] + y[0]) / n) as i64])
}

/// `η(x, y) = h(x) + h(y) − h(x + y)`.
pub fn coboundary(h: &CochainMap) -> Result<Cocycle> {
    if h.value_at(0).iter().any(|&c| c != 0) {
        return Err(Error::InvalidInput("cochain does not vanish at the identity".into()));
    }
    let n = check_table_size(&h.a, &Limits::default())?;
    let ia = Indexer::new(&h.a);
    let b = &h.b;
    let mut table = Vec::with_capacity(n * n * b.rank());
    for x in 0..n {
        for y in 0..n {
            let s = b.add_coords(h.value_at(x), h.value_at(y));
            table.extend(b.sub_coords(&s, h.value_at(ia.add(x, y))));
        }
    }
    Ok(Cocycle {
        a: h.a.clone(),
        b: b.clone(),
        n,
        table,
    })
}

/// A set map `h: A → B`; it is normalized when `h(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMap {
    a: AbelianGroup,
    b: AbelianGroup,
    values: Vec<u64>,
}

impl CochainMap {
    pub fn zero(a: &AbelianGroup, b: &AbelianGroup) -> Result<Self> {
        let n = check_table_size(a, &Limits::default())?;
        Ok(CochainMap {
            a: a.clone(),
            b: b.clone(),
            values: vec![0; n * b.rank()],
        })
    }

    pub fn from_fn<F>(a: &AbelianGroup, b: &AbelianGroup, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u64]) -> Vec<i64>,
    {
        let n = check_table_size(a, &Limits::default())?;
        let ia = Indexer::new(a);
        let mut values = Vec::with_capacity(n * b.rank());
        for x in 0..n {
            let v = f(ia.coords(x));
            if v.len() != b.rank() {
                return Err(Error::Structure("cochain value has the wrong length".into()));
            }
            values.extend(v.iter().zip(b.factors()).map(|(&c, &d)| c.rem_euclid(d as i64) as u64));
        }
        Ok(CochainMap {
            a: a.clone(),
            b: b.clone(),
            values,
        })
    }

    /// From `values[x] = coordinates of h(x)` in lexicographic order of `A`.
    pub fn from_values(a: &AbelianGroup, b: &AbelianGroup, values: &[Vec<u64>]) -> Result<Self> {
        let n = check_table_size(a, &Limits::default())?;
        if values.len() != n || values.iter().any(|v| !b.contains_coords(v)) {
            return Err(Error::Structure("cochain values do not match the groups".into()));
        }
        Ok(CochainMap {
            a: a.clone(),
            b: b.clone(),
            values: values.concat(),
        })
    }

    pub fn group_a(&self) -> &AbelianGroup {
        &self.a
    }

    pub fn group_b(&self) -> &AbelianGroup {
        &self.b
    }

    pub fn value_at(&self, x: usize) -> &[u64] {
        let k = self.b.rank();
        &self.values[x * k..(x + 1) * k]
    }

    pub fn value(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.parent() != &self.a {
            return Err(Error::GroupMismatch("argument is not an element of A".into()));
        }
        Ok(self.b.element_from_reduced(self.value_at(x.index()).to_vec()))
    }

    pub fn values(&self) -> Vec<Vec<u64>> {
        let n = self.values.len() / self.b.rank().max(1);
        let n = if self.b.rank() == 0 { self.a.order() as usize } else { n };
        (0..n).map(|x| self.value_at(x).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> CochainMap {
        let n = self.a.order() as usize;
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..n {
            values.extend(self.b.neg_coords(self.value_at(x)));
        }
        CochainMap {
            values,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &CochainMap) -> Result<CochainMap> {
        if self.a != other.a || self.b != other.b {
            return Err(Error::GroupMismatch("cochains over different groups".into()));
        }
        let n = self.a.order() as usize;
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..n {
            values.extend(self.b.add_coords(self.value_at(x), other.value_at(x)));
        }
        Ok(CochainMap {
            values,
            ..self.clone()
        })
    }

    /// `φ ∘ h` for `φ: B → B′`.
    pub fn compose(&self, phi: &IntMatrix, b_prime: &AbelianGroup) -> Result<CochainMap> {
        if !phi.is_well_defined_hom(self.b.factors(), b_prime.factors()) {
            return Err(Error::InvalidInput("map is not a well-defined homomorphism".into()));
        }
        let n = self.a.order() as usize;
        let mut values = Vec::with_capacity(n * b_prime.rank());
        for x in 0..n {
            values.extend(self.b.apply_hom(phi, self.value_at(x), b_prime));
        }
        Ok(CochainMap {
            a: self.a.clone(),
            b: b_prime.clone(),
            values,
        })
    }

    /// `h ∘ ψ` for `ψ: A′ → A`.
    pub fn precompose(&self, psi: &IntMatrix, a_prime: &AbelianGroup) -> Result<CochainMap> {
        if !psi.is_well_defined_hom(a_prime.factors(), self.a.factors()) {
            return Err(Error::InvalidInput("map is not a well-defined homomorphism".into()));
        }
        let n = check_table_size(a_prime, &Limits::default())?;
        let ip = Indexer::new(a_prime);
        let mut values = Vec::with_capacity(n * self.b.rank());
        for x in 0..n {
            let y = self.a.index_of(&a_prime.apply_hom(psi, ip.coords(x), &self.a));
            values.extend_from_slice(self.value_at(y));
        }
        Ok(CochainMap {
            a: a_prime.clone(),
            b: self.b.clone(),
            values,
        })
    }
}

fn compatible(a: &AbelianGroup, b: &AbelianGroup, v: &[u64], i: usize, j: usize) -> bool {
    let di = BigInt::from(a.factors()[i]);
    let dj = BigInt::from(a.factors()[j]);
    b.scale_coords(v, &di).iter().all(|&c| c == 0) && b.scale_coords(v, &dj).iter().all(|&c| c == 0)
}

/// `Σ_{i,j} x_i y_j · values[i][j]`.
fn expand(a: &AbelianGroup, b: &AbelianGroup, values: &[Vec<Vec<u64>>], x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut acc = vec![0u64; b.rank()];
    for i in 0..a.rank() {
        if x[i] == 0 {
            continue;
        }
        for j in 0..a.rank() {
            if y[j] == 0 {
                continue;
            }
            let coeff = BigInt::from(x[i]) * BigInt::from(y[j]);
            acc = b.add_coords(&acc, &b.scale_coords(&values[i][j], &coeff));
        }
    }
    acc
}

/// A bilinear map `A × A → B` given by its values `β(g_i, g_j)` on standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMatrix {
    a: AbelianGroup,
    b: AbelianGroup,
    entries: Vec<Vec<Vec<u64>>>,
}

impl BilinearMatrix {
    /// Checks that `d_i · β_ij = d_j · β_ij = 0`, which is exactly what makes
    /// the bilinear expansion well defined.
    pub fn new(a: &AbelianGroup, b: &AbelianGroup, entries: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let k = a.rank();
        if entries.len() != k || entries.iter().any(|r| r.len() != k) {
            return Err(Error::Structure(format!("bilinear matrix must be {k}x{k}")));
        }
        for i in 0..k {
            for j in 0..k {
                if !b.contains_coords(&entries[i][j]) {
                    return Err(Error::Structure(format!("entry ({i}, {j}) is not a reduced element of {b}")));
                }
                if !compatible(a, b, &entries[i][j], i, j) {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) is not annihilated by the generator orders"
                    )));
                }
            }
        }
        Ok(Self::from_generator_values(a, b, entries))
    }

    fn from_generator_values(a: &AbelianGroup, b: &AbelianGroup, entries: Vec<Vec<Vec<u64>>>) -> Self {
        BilinearMatrix {
            a: a.clone(),
            b: b.clone(),
            entries,
        }
    }

    pub fn zero(a: &AbelianGroup, b: &AbelianGroup) -> Self {
        let k = a.rank();
        Self::from_generator_values(a, b, vec![vec![vec![0; b.rank()]; k]; k])
    }

    pub fn group_a(&self) -> &AbelianGroup {
        &self.a
    }

    pub fn group_b(&self) -> &AbelianGroup {
        &self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> &[u64] {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Vec<u64>>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().flatten().all(|&c| c == 0)
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        expand(&self.a, &self.b, &self.entries, x, y)
    }

    pub fn transpose(&self) -> BilinearMatrix {
        let k = self.a.rank();
        let entries = (0..k)
            .map(|i| (0..k).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        Self::from_generator_values(&self.a, &self.b, entries)
    }

    pub fn sub(&self, other: &BilinearMatrix) -> Result<BilinearMatrix> {
        if self.a != other.a || self.b != other.b {
            return Err(Error::GroupMismatch("bilinear maps over different groups".into()));
        }
        let k = self.a.rank();
        let entries = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| self.b.sub_coords(&self.entries[i][j], &other.entries[i][j]))
                    .collect()
            })
            .collect();
        Ok(Self::from_generator_values(&self.a, &self.b, entries))
    }

    /// `α(x, x) = 0` for every `x ∈ A`, checked over all elements.
    pub fn is_alternating(&self) -> bool {
        self.a
            .elements()
            .all(|x| self.eval(x.coords(), x.coords()).iter().all(|&c| c == 0))
    }

    /// `α(x, y) = −α(y, x)` for all pairs.
    pub fn is_antisymmetric(&self) -> bool {
        let ia = Indexer::new(&self.a);
        (0..ia.len()).all(|x| {
            (0..ia.len()).all(|y| {
                let u = self.eval(ia.coords(x), ia.coords(y));
                let v = self.eval(ia.coords(y), ia.coords(x));
                self.b.add_coords(&u, &v).iter().all(|&c| c == 0)
            })
        })
    }

    /// `φ ∘ β` for `φ: B → B′`.
    pub fn compose(&self, phi: &IntMatrix, b_prime: &AbelianGroup) -> Result<BilinearMatrix> {
        if !phi.is_well_defined_hom(self.b.factors(), b_prime.factors()) {
            return Err(Error::InvalidInput("map is not a well-defined homomorphism".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| self.b.apply_hom(phi, v, b_prime)).collect())
            .collect();
        Ok(Self::from_generator_values(&self.a, b_prime, entries))
    }

    fn to_cocycle_unchecked(&self) -> Cocycle {
        let a = &self.a;
        let n = a.order() as usize;
        let ia = Indexer::new(a);
        let mut table = Vec::with_capacity(n * n * self.b.rank());
        for x in 0..n {
            for y in 0..n {
                table.extend(self.eval(ia.coords(x), ia.coords(y)));
            }
        }
        Cocycle {
            a: a.clone(),
            b: self.b.clone(),
            n,
            table,
        }
    }

    /// Full table of the bilinear map; it satisfies the cocycle axioms.
    pub fn to_cocycle(&self) -> Result<Cocycle> {
        check_table_size(&self.a, &Limits::default())?;
        Ok(self.to_cocycle_unchecked())
    }
}

/// Expands a generator matrix to its full table.
pub fn bilinear_to_cocycle(beta: &BilinearMatrix) -> Result<Cocycle> {
    beta.to_cocycle()
}

/// `Hom(A ⊗ A, B)`: its abstract group and one bilinear generator matrix per summand.
pub fn bilinear_basis(a: &AbelianGroup, b: &AbelianGroup) -> (AbelianGroup, Vec<BilinearMatrix>) {
    let t = tensor_square(a);
    let h = hom_space(&t.group, b);
    let k = a.rank();
    let basis = h
        .basis
        .iter()
        .map(|m| {
            let entries = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| t.group.apply_hom(m, t.pair_image(i, j).coords(), b))
                        .collect()
                })
                .collect();
            BilinearMatrix::from_generator_values(a, b, entries)
        })
        .collect();
    (h.group, basis)
}

/// All bilinear maps `A × A → B`, enumerated through coordinates of `Hom(A ⊗ A, B)`.
pub fn all_bilinear(a: &AbelianGroup, b: &AbelianGroup, limit: u128) -> Result<Vec<BilinearMatrix>> {
    let (group, basis) = bilinear_basis(a, b);
    let count = group.order();
    capacity("bilinear candidates", count, limit)?;
    let k = a.rank();
    let mut out = Vec::with_capacity(count as usize);
    for coords in group.elements() {
        let mut entries = vec![vec![vec![0u64; b.rank()]; k]; k];
        for (m, &c) in basis.iter().zip(coords.coords()) {
            if c == 0 {
                continue;
            }
            for i in 0..k {
                for j in 0..k {
                    let add = b.scale_coords(m.entry(i, j), &big(c));
                    entries[i][j] = b.add_coords(&entries[i][j], &add);
                }
            }
        }
        out.push(BilinearMatrix::from_generator_values(a, b, entries));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> AbelianGroup {
        AbelianGroup::cyclic(n)
    }

    #[test]
    fn zero_table_validates() {
        let c = Cocycle::zero(&AbelianGroup::new(vec![2, 2]).unwrap(), &z(3)).unwrap();
        assert!(c.validate().passed());
    }

    #[test]
    fn carry_values() {
        let g = carry_cocycle(3, 3).unwrap();
        assert!(g.validate().passed());
        assert_eq!(g.at(2, 2), &[1]);
        assert_eq!(g.at(1, 1), &[0]);
        assert!((0..3).all(|y| g.at(0, y) == [0]));
        let g2 = carry_cocycle(2, 2).unwrap();
        // Transversal 0, 1 in Z/4: 1 + 1 = 2 = ℓ(0) + i(1).
        assert_eq!(g2.to_table(), vec![vec![vec![0], vec![0]], vec![vec![0], vec![1]]]);
        assert!(carry_cocycle(1, 3).is_err());
    }

    #[test]
    fn normalization_failure_reported_first() {
        let c = Cocycle::from_fn(&z(3), &z(3), |x, _| vec![if x[0] == 0 { 1 } else { 0 }]).unwrap();
        let r = c.validate();
        assert!(!r.normalized);
        assert_eq!(
            r.first_violation,
            Some(Violation::Normalization { x: vec![0], y: vec![0] })
        );
    }

    #[test]
    fn identity_failure_reports_first_triple() {
        // Normalized but γ(1,1) = 1 only: not a cocycle on Z/3.
        let c = Cocycle::from_fn(&z(3), &z(3), |x, y| vec![(x[0] == 1 && y[0] == 1) as i64]).unwrap();
        let r = c.validate();
        assert!(r.normalized);
        assert!(!r.cocycle_identity);
        // brute-force the first lexicographic violation
        let mut expected = None;
        'o: for x in 0..3u64 {
            for y in 0..3u64 {
                for zz in 0..3u64 {
                    let g = |p: u64, q: u64| ((p == 1) && (q == 1)) as u64;
                    let l = (g(x, y) + g((x + y) % 3, zz)) % 3;
                    let rr = (g(y, zz) + g(x, (y + zz) % 3)) % 3;
                    if l != rr {
                        expected = Some(Violation::CocycleIdentity {
                            x: vec![x],
                            y: vec![y],
                            z: vec![zz],
                        });
                        break 'o;
                    }
                }
            }
        }
        assert_eq!(r.first_violation, expected);
    }

    #[test]
    fn structural_errors() {
        let a = z(2);
        let b = z(2);
        assert!(matches!(
            Cocycle::from_table(&a, &b, &[vec![vec![0], vec![0]]]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            Cocycle::from_table(&a, &b, &[vec![vec![0], vec![0]], vec![vec![0]]]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            Cocycle::from_table(&a, &b, &[vec![vec![0], vec![0]], vec![vec![0], vec![2]]]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn coboundary_examples() {
        let h0 = CochainMap::zero(&z(3), &z(3)).unwrap();
        assert!(coboundary(&h0).unwrap().is_zero());
        let h = CochainMap::from_fn(&z(2), &z(2), |x| vec![x[0] as i64]).unwrap();
        assert!(coboundary(&h).unwrap().is_zero());
        // A = Z/4, B = Z/2, h = 1 off the identity.
        let h = CochainMap::from_fn(&z(4), &z(2), |x| vec![(x[0] != 0) as i64]).unwrap();
        let eta = coboundary(&h).unwrap();
        for x in 0..4u64 {
            for y in 0..4u64 {
                let hv = |t: u64| (t != 0) as u64;
                let expected = (hv(x) + hv(y) + 2 - hv((x + y) % 4)) % 2;
                assert_eq!(eta.at(x as usize, y as usize), &[expected]);
            }
        }
        assert_eq!(eta.at(1, 1), &[1]);
        assert_eq!(eta.at(1, 2), &[1]);
        assert_eq!(eta.at(1, 3), &[0]);
        assert!(eta.validate().passed());
        let bad = CochainMap::from_fn(&z(2), &z(2), |_| vec![1]).unwrap();
        assert!(matches!(coboundary(&bad), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn cohomologous_examples() {
        let g = carry_cocycle(3, 3).unwrap();
        let h = g.cohomologous(&g).unwrap().unwrap();
        assert!(h.is_zero());
        let c2 = carry_cocycle(2, 2).unwrap();
        let zero = Cocycle::zero(&z(2), &z(2)).unwrap();
        assert_eq!(c2.cohomologous(&zero).unwrap(), None);
        for beta in all_bilinear(&z(3), &z(3), 100).unwrap() {
            assert_eq!(g.cohomologous(&beta.to_cocycle().unwrap()).unwrap(), None);
        }
        let other = Cocycle::zero(&z(3), &z(2)).unwrap();
        assert!(matches!(g.cohomologous(&other), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn cohomologous_finds_shifted_witness() {
        let a = AbelianGroup::new(vec![2, 4]).unwrap();
        let b = AbelianGroup::new(vec![2, 4]).unwrap();
        let g = Cocycle::from_fn(&a, &b, |x, y| vec![(x[0] * y[1]) as i64, ((x[1] + y[1]) / 4) as i64]).unwrap();
        let h = CochainMap::from_fn(&a, &b, |x| vec![x[0] as i64, (x[0] * 3 + x[1] * x[1]) as i64]).unwrap();
        let shifted = g.add(&coboundary(&h).unwrap()).unwrap();
        let w = shifted.cohomologous(&g).unwrap().expect("cohomologous");
        assert_eq!(coboundary(&w).unwrap(), shifted.sub(&g).unwrap());
    }

    #[test]
    fn bilinear_expansion_examples() {
        let beta = BilinearMatrix::new(&z(3), &z(3), vec![vec![vec![1]]]).unwrap();
        let c = bilinear_to_cocycle(&beta).unwrap();
        for x in 0..3u64 {
            for y in 0..3u64 {
                assert_eq!(c.at(x as usize, y as usize), &[(x * y) % 3]);
            }
        }
        let a = AbelianGroup::new(vec![3, 3]).unwrap();
        let mut e = vec![vec![vec![0u64]; 2]; 2];
        e[0][1] = vec![1];
        let beta = BilinearMatrix::new(&a, &z(3), e).unwrap();
        let c = beta.to_cocycle().unwrap();
        for x in a.elements() {
            for y in a.elements() {
                let v = c.value(&x, &y).unwrap();
                assert_eq!(v.coords(), &[(x.coords()[0] * y.coords()[1]) % 3]);
            }
        }
        assert!(c.validate().passed());
        assert_eq!(c.is_bilinear(), Some(beta));
        assert!(BilinearMatrix::zero(&a, &z(3)).to_cocycle().unwrap().is_zero());
    }

    #[test]
    fn incompatible_bilinear_rejected() {
        // β(g, g) = 1 in Z/4 is not annihilated by |g| = 2.
        assert!(matches!(
            BilinearMatrix::new(&z(2), &z(4), vec![vec![vec![1]]]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn carry_is_not_bilinear() {
        let g = carry_cocycle(3, 3).unwrap();
        assert!(g.is_bilinear().is_none());
        assert!(matches!(g.check_bilinear(), Err(BilinearViolation::Mismatch { .. })));
        assert_eq!(g.bilinear_prediction(&[2], &[2]), vec![0]);
        assert_eq!(g.at(2, 2), &[1]);
        assert!(Cocycle::zero(&z(3), &z(3)).unwrap().is_bilinear().unwrap().is_zero());
    }

    #[test]
    fn commutator_pairing_of_bilinear() {
        let a = AbelianGroup::new(vec![3, 3]).unwrap();
        let mut e = vec![vec![vec![0u64]; 2]; 2];
        e[0][1] = vec![1];
        e[1][1] = vec![2];
        let beta = BilinearMatrix::new(&a, &z(3), e).unwrap();
        let alpha = beta.to_cocycle().unwrap().commutator_pairing().unwrap();
        assert_eq!(alpha, beta.sub(&beta.transpose()).unwrap());
        assert!(alpha.is_alternating());
        assert!(alpha.is_antisymmetric());
        let sym = carry_cocycle(3, 3).unwrap();
        assert!(sym.commutator_pairing().unwrap().is_zero());
    }

    #[test]
    fn pullback_and_pushforward() {
        let g = carry_cocycle(4, 2).unwrap();
        let id = IntMatrix::identity(1);
        assert_eq!(g.pullback(&id, &z(4)).unwrap(), g);
        assert_eq!(g.pushforward(&id, &z(2)).unwrap(), g);
        assert!(g.pullback(&IntMatrix::zeros(1, 1), &z(4)).unwrap().is_zero());
        assert!(g.pushforward(&IntMatrix::zeros(1, 1), &z(2)).unwrap().is_zero());

        let double = IntMatrix::from_rows(&[vec![2]]);
        let pb = g.pullback(&double, &z(2)).unwrap();
        for x in 0..2usize {
            for y in 0..2usize {
                assert_eq!(pb.at(x, y), g.at((2 * x) % 4, (2 * y) % 4));
            }
        }
        assert!(pb.validate().passed());

        let c = carry_cocycle(2, 2).unwrap();
        let j = IntMatrix::from_rows(&[vec![2]]);
        let pf = c.pushforward(&j, &z(4)).unwrap();
        assert_eq!(pf.to_table(), vec![vec![vec![0], vec![0]], vec![vec![0], vec![2]]]);
        assert!(c.pushforward(&IntMatrix::from_rows(&[vec![1]]), &z(3)).is_err());
        assert!(g.pullback(&IntMatrix::from_rows(&[vec![1]]), &z(3)).is_err());
    }

    #[test]
    fn bilinear_enumeration_counts() {
        assert_eq!(all_bilinear(&z(3), &z(3), 100).unwrap().len(), 3);
        let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(all_bilinear(&v4, &z(2), 100).unwrap().len(), 16);
        assert!(all_bilinear(&v4, &z(2), 10).is_err());
    }
}
